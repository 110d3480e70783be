import itertools
import math
import random

import pytest

from cubecore.autos import are_isomorphic, automorphism_group, canonical_form
from cubecore.cayley import (
    ConnectionSet,
    cayley_z2,
    cube_cover_map,
    cube_graph,
    cubelike_hull,
    enumerate_cubelike,
    folded_cube,
    halved_cube,
    is_cubelike,
    quotient_by_subgroup,
    _gl_subset_orbits,
    _linearly_equivalent,
    _mask_elements,
)
from cubecore.errors import CapacityError, NotSpanningError, QuotientLoopError
from cubecore.gf2 import Word, span_bits
from cubecore.graphs import (
    cartesian_product,
    complement,
    complete_graph,
    cycle_graph,
    from_edges,
    induced_subgraph,
    odd_girth,
)
from cubecore.hom import verify_covering_map
from cubecore.graphs import VertexMap


class TestCayleyZ2:
    def test_all_nonzero_words_give_complete(self):
        g = cayley_z2(ConnectionSet(2, (1, 2, 3)))
        assert are_isomorphic(g, complete_graph(4))

    def test_standard_basis_gives_cube(self):
        for d in (1, 2, 3, 4):
            g = cube_graph(d)
            assert g.degrees() == [d] * (1 << d)
            assert odd_girth(g) == math.inf

    def test_rook_presentation(self):
        g = cayley_z2(ConnectionSet(4, (1, 2, 3, 4, 8, 12)))
        assert are_isomorphic(g, cartesian_product(complete_graph(4), complete_graph(4)))

    def test_labels_encode_indices(self):
        g = cayley_z2(ConnectionSet(3, (1, 2, 4)))
        assert g.labels == tuple(range(8))

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            ConnectionSet(3, (0, 1))

    def test_degree_everywhere(self):
        g = cayley_z2(ConnectionSet(4, (1, 6, 15)))
        assert g.degrees() == [3] * 16


class TestFoldedHalved:
    def test_folded3_is_k4(self):
        assert are_isomorphic(folded_cube(3), complete_graph(4))

    def test_clebsch_parameters(self):
        g = folded_cube(5)
        assert g.n == 16 and g.degrees() == [5] * 16

    def test_folded_degree_is_order(self):
        for order in (3, 4, 5, 6):
            assert folded_cube(order).degrees() == [order] * (1 << (order - 1))

    def test_halved_degree(self):
        for order in (3, 4, 5, 6):
            n = order - 1
            assert halved_cube(order).degree(0) == n + n * (n - 1) // 2

    def test_halved5_complement_clebsch(self):
        assert are_isomorphic(halved_cube(5), complement(folded_cube(5)))

    def test_order_too_small(self):
        with pytest.raises(ValueError):
            folded_cube(1)


class TestHull:
    def test_hull_of_c5_is_clebsch(self):
        hull, _ = cubelike_hull(cycle_graph(5))
        assert are_isomorphic(hull, folded_cube(5))

    def test_hull_of_odd_cycles_are_folded_cubes(self):
        for g in (5, 7):
            hull, _ = cubelike_hull(cycle_graph(g))
            assert are_isomorphic(hull, folded_cube(g))

    def test_hull_of_complete_is_halved(self):
        for n in (3, 4, 5):
            hull, _ = cubelike_hull(complete_graph(n))
            assert are_isomorphic(hull, halved_cube(n))

    def test_hull_of_k2(self):
        hull, emb = cubelike_hull(complete_graph(2))
        assert hull.n == 2 and hull.edge_count() == 1
        assert len(set(emb.image)) == 2

    def test_embedding_is_induced_copy(self):
        for host in (cycle_graph(5), complete_graph(4), cycle_graph(7)):
            hull, emb = cubelike_hull(host)
            sub = induced_subgraph(hull, emb.image)
            assert emb.is_homomorphism(host, hull)
            assert len(set(emb.image)) == host.n
            # faithful: the image induces exactly the host
            pos = {v: i for i, v in enumerate(sorted(set(emb.image)))}
            for u in range(host.n):
                for v in range(u + 1, host.n):
                    assert host.has_edge(u, v) == sub.has_edge(
                        pos[emb.image[u]], pos[emb.image[v]]
                    )

    def test_capacity(self):
        with pytest.raises(CapacityError):
            cubelike_hull(complete_graph(20))


class TestCoverMap:
    def test_identity_on_cube(self):
        cs = ConnectionSet(3, (1, 2, 4))
        f = cube_cover_map(cs)
        assert [f.apply_bits(1 << i) for i in range(3)] == [1, 2, 4]
        vm = VertexMap(8, 8, tuple(f.apply_bits(v) for v in range(8)))
        assert verify_covering_map(vm, cube_graph(3), cayley_z2(cs))

    def test_folded5_fibres(self):
        g = folded_cube(5)
        cs = ConnectionSet(4, tuple(g.labels[u] for u in g.neighbors(0)))
        f = cube_cover_map(cs)
        fibre_sizes = {}
        for v in range(32):
            fibre_sizes.setdefault(f.apply_bits(v), 0)
            fibre_sizes[f.apply_bits(v)] += 1
        assert set(fibre_sizes.values()) == {2}
        vm = VertexMap(32, 16, tuple(f.apply_bits(v) for v in range(32)))
        assert verify_covering_map(vm, cube_graph(5), g)

    def test_halved4_fibres_and_local_bijectivity(self):
        g = halved_cube(4)
        cs = ConnectionSet(3, tuple(g.labels[u] for u in g.neighbors(0)))
        assert cs.degree == 6
        f = cube_cover_map(cs)
        vm = VertexMap(64, 8, tuple(f.apply_bits(v) for v in range(64)))
        assert verify_covering_map(vm, cube_graph(6), g)
        sizes = {}
        for v in range(64):
            sizes[vm.image[v]] = sizes.get(vm.image[v], 0) + 1
        assert set(sizes.values()) == {8}

    def test_not_spanning(self):
        with pytest.raises(NotSpanningError):
            cube_cover_map(ConnectionSet(3, (1, 2)))


class TestQuotient:
    def test_trivial_subgroup(self):
        g = cube_graph(3)
        q, vm = quotient_by_subgroup(g, span_bits([], 3))
        assert q.n == g.n and sorted(vm.image) == list(range(8))
        assert are_isomorphic(q, g)

    def test_antipodal_quotient_is_folded(self):
        for d in (3, 4, 5):
            q, vm = quotient_by_subgroup(cube_graph(d), span_bits([(1 << d) - 1], d))
            assert are_isomorphic(q, folded_cube(d))
            # quotient map is a homomorphism with coset fibres
            assert vm.is_homomorphism(cube_graph(d), q)

    def test_q3_by_e1e2(self):
        q, _ = quotient_by_subgroup(cube_graph(3), span_bits([0b011], 3))
        assert are_isomorphic(q, cycle_graph(4))

    def test_loop_detected(self):
        g = cayley_z2(ConnectionSet(2, (1, 2, 3)))  # K4: every word is an edge
        with pytest.raises(QuotientLoopError):
            quotient_by_subgroup(g, span_bits([1], 2))


def gl_matrices(n):
    """All invertible n x n matrices over GF(2), as column tuples."""
    for cols in itertools.product(range(1, 1 << n), repeat=n):
        if span_bits(cols, n).rank == n:
            yield cols


def burnside_subset_orbits(n):
    """Number of GL(n,2)-orbits on subsets of the nonzero words (exact)."""
    total = 0
    count = 0
    for cols in gl_matrices(n):
        # permutation of nonzero words: w -> sum of columns at w's bits
        seen = [False] * (1 << n)
        cycles = 0
        for w in range(1, 1 << n):
            if seen[w]:
                continue
            cycles += 1
            x = w
            while not seen[x]:
                seen[x] = True
                y = 0
                m = x
                while m:
                    b = m & -m
                    y ^= cols[b.bit_length() - 1]
                    m ^= b
                x = y
        total += 1 << cycles
        count += 1
    assert total % count == 0
    return total // count


class TestEnumerate:
    def test_n1(self):
        graphs = enumerate_cubelike(1)
        assert len(graphs) == 1
        assert graphs[0].edge_count() == 1

    def test_n2_connected_classes(self):
        # brute force over the spanning subsets of Z2^2 \ {0}: C4 and K4
        graphs = enumerate_cubelike(2)
        assert len(graphs) == 2
        forms = {canonical_form(g) for g in graphs}
        assert forms == {canonical_form(cycle_graph(4)), canonical_form(complete_graph(4))}

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_brute_force_oracle(self, n):
        expected = set()
        expected_conn = set()
        points = list(range(1, 1 << n))
        for r in range(len(points) + 1):
            for sub in itertools.combinations(points, r):
                key = canonical_form(cayley_z2(ConnectionSet(n, sub)))
                expected.add(key)
                if span_bits(sub, n).rank == n:
                    expected_conn.add(key)
        got_all = {canonical_form(g) for g in enumerate_cubelike(n, connected_only=False)}
        got_conn = {canonical_form(g) for g in enumerate_cubelike(n, connected_only=True)}
        assert got_all == expected
        assert got_conn == expected_conn

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_burnside_orbit_count(self, n):
        # the GL-orbit layer against an exact Burnside count
        assert len(_gl_subset_orbits(n)) == burnside_subset_orbits(n)

    def test_n4_sampled_members(self):
        classes = {canonical_form(g) for g in enumerate_cubelike(4, connected_only=False)}
        rng = random.Random(99)
        points = list(range(1, 16))
        for _ in range(60):
            sub = tuple(sorted(rng.sample(points, rng.randint(0, 15))))
            key = canonical_form(cayley_z2(ConnectionSet(4, sub)))
            assert key in classes

    def test_n4_counts(self):
        # frozen from the one-off full 2^15-subset brute force (dev run)
        assert len(enumerate_cubelike(4, connected_only=True)) == 36
        assert len(enumerate_cubelike(4, connected_only=False)) == 46

    def test_cap(self):
        with pytest.raises(CapacityError):
            enumerate_cubelike(6)

    def test_linear_equivalence_spot(self):
        # {e1,e2} ~ {e1,e1+e2} under GL(2,2), but not ~ {e1,e2,e1+e2}
        assert _linearly_equivalent(0b0110, 0b1010, 2)
        assert not _linearly_equivalent(0b0110, 0b1110, 2)


class TestIsCubelike:
    def test_cube_positive(self):
        w = is_cubelike(cube_graph(3))
        assert w is not None
        assert w.connection.degree == 3

    def test_shrikhande_negative(self):
        from cubecore.fixtures import fixtures

        assert is_cubelike(fixtures("shrikhande")) is None

    def test_clebsch_witness_shape(self):
        w = is_cubelike(folded_cube(5))
        assert w is not None
        conn = w.connection
        assert conn.degree == 5
        # folded-cube signature: rank 4 with the single dependency sum = 0
        assert span_bits(conn.elements, 4).rank == 4
        total = 0
        for c in conn.elements:
            total ^= c
        assert total == 0

    def test_non_power_of_two(self):
        assert is_cubelike(cycle_graph(6)) is None

    def test_irregular(self):
        assert is_cubelike(from_edges(4, [(0, 1), (1, 2)])) is None

    def test_not_transitive_power_of_two(self):
        g = from_edges(4, [(0, 1), (1, 2), (2, 3)])
        assert is_cubelike(g) is None

    def test_enumerated_graphs_recognized(self):
        for g in enumerate_cubelike(3, connected_only=False):
            assert is_cubelike(g) is not None

    def test_k16_positive(self):
        w = is_cubelike(complete_graph(16))
        assert w is not None and w.connection.degree == 15


class TestCayleyProperties:
    def test_vertex_transitivity_spot_checks(self):
        from cubecore.autos import is_vertex_transitive

        rng = random.Random(4)
        for _ in range(5):
            n = rng.randint(2, 4)
            elems = rng.sample(range(1, 1 << n), rng.randint(1, (1 << n) - 1))
            g = cayley_z2(ConnectionSet(n, tuple(elems)))
            assert is_vertex_transitive(g)

    def test_no_enumerated_graph_has_clique_or_chromatic_three(self):
        from cubecore.invariants import clique_number, find_coloring
        from cubecore.graphs import is_bipartite

        for n in (1, 2, 3):
            for g in enumerate_cubelike(n, connected_only=False):
                assert clique_number(g) != 3
                if g.edge_count() and not is_bipartite(g):
                    assert find_coloring(g, 3) is None
