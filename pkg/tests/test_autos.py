import itertools
import math
import random

import pytest

from cubecore.autos import (
    PermGroup,
    are_isomorphic,
    automorphism_group,
    canonical_form,
    is_automorphism,
    is_generously_transitive,
    is_vertex_transitive,
    orbital_graph,
    orbitals,
    orbitals_of_group,
    perm_inv,
    perm_mul,
    shift_graph,
    shifts,
)
from cubecore.cayley import cayley_z2, ConnectionSet, cube_graph, folded_cube, halved_cube
from cubecore.errors import CapacityError
from cubecore.graphs import (
    complement,
    complete_graph,
    cycle_graph,
    from_edges,
    path_graph,
    relabel,
)


def brute_automorphisms(X):
    for p in itertools.permutations(range(X.n)):
        if all(X.has_edge(p[u], p[v]) for u, v in X.edges()):
            yield p


def random_graph(rng, n, p=0.5):
    return from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    )


class TestPermGroup:
    def test_order_matches_brute_force(self):
        rng = random.Random(23)
        for _ in range(25):
            g = random_graph(rng, rng.randint(1, 7))
            expected = sum(1 for _ in brute_automorphisms(g))
            assert automorphism_group(g).order() == expected

    def test_elements_and_membership(self):
        g = cycle_graph(5)
        grp = automorphism_group(g)
        elems = grp.elements()
        assert len(elems) == 10
        assert len(set(elems)) == 10
        for e in elems:
            assert e in grp
        assert tuple([1, 0, 2, 3, 4]) not in grp

    def test_closure_under_product(self):
        grp = automorphism_group(cube_graph(3))
        elems = grp.elements()
        rng = random.Random(0)
        for _ in range(50):
            a, b = rng.choice(elems), rng.choice(elems)
            assert perm_mul(a, b) in grp
            assert perm_inv(a) in grp


class TestAutomorphismGroups:
    def test_complete_graph(self):
        assert automorphism_group(complete_graph(5)).order() == math.factorial(5)

    def test_cube_orders(self):
        # |Aut(Q_d)| = 2^d * d!
        for d in (1, 2, 3, 4):
            expected = (1 << d) * math.factorial(d)
            assert automorphism_group(cube_graph(d)).order() == expected

    def test_q3_brute_force(self):
        g = cube_graph(3)
        assert automorphism_group(g).order() == sum(1 for _ in brute_automorphisms(g))

    def test_petersen(self):
        from cubecore.fixtures import fixtures

        assert automorphism_group(fixtures("petersen")).order() == 120

    def test_clebsch(self):
        assert automorphism_group(folded_cube(5)).order() == 1920

    def test_generators_preserve_adjacency(self):
        g = folded_cube(4)
        for gen in automorphism_group(g).generators:
            assert is_automorphism(g, gen)


class TestCanonicalForm:
    def test_relabel_invariance(self):
        rng = random.Random(17)
        for _ in range(15):
            g = random_graph(rng, rng.randint(1, 10))
            c = canonical_form(g)
            for _ in range(100):
                p = list(range(g.n))
                rng.shuffle(p)
                assert canonical_form(relabel(g, p)) == c

    def test_distinguishes_same_parameters(self):
        # two (16,6,2,2) strongly regular graphs that are not isomorphic
        from cubecore.fixtures import fixtures

        rook = fixtures("rook44").without_labels()
        shri = fixtures("shrikhande")
        assert canonical_form(rook) != canonical_form(shri)
        assert not are_isomorphic(rook, shri)

    def test_clebsch_complement_halved(self):
        assert are_isomorphic(complement(halved_cube(5)), folded_cube(5))

    def test_canonical_form_is_valid_graph6(self):
        from cubecore.graphs import from_graph6

        g = cycle_graph(7)
        c = canonical_form(g)
        assert are_isomorphic(from_graph6(c), g)


class TestTransitivity:
    def test_cayley_graphs_generously_transitive(self):
        for cs in [(1, 2), (1, 2, 3), (3, 5, 6)]:
            g = cayley_z2(ConnectionSet(3, cs))
            assert is_vertex_transitive(g)
            assert is_generously_transitive(g)

    def test_path_not_transitive(self):
        assert not is_vertex_transitive(path_graph(3))

    def test_shrikhande_generously_transitive(self):
        from cubecore.fixtures import fixtures

        assert is_generously_transitive(fixtures("shrikhande"))

    def test_identity_in_group(self):
        # on Z2^n negation is the identity, trivially an automorphism
        g = cube_graph(2)
        grp = automorphism_group(g)
        assert tuple(range(4)) in grp


class TestOrbitals:
    def test_regular_group_orbital_count(self):
        # translations of Z2^3 act regularly: |V| - 1 non-diagonal orbitals
        n = 8
        translations = [tuple(v ^ a for v in range(n)) for a in range(1, n)]
        grp = PermGroup(n, translations)
        part = orbitals_of_group(grp)
        assert part.n_orbitals == n - 1

    def test_union_of_all_orbitals_complete(self):
        g = folded_cube(4)
        part = orbitals(g)
        union = orbital_graph(g, part, range(part.n_orbitals))
        assert union.adj == complete_graph(g.n).adj

    def test_clebsch_orbitals(self):
        # distance transitive of diameter 2: adjacency and distance-2 only
        from math import inf

        from cubecore.graphs import distances

        g = folded_cube(5)
        assert max(x for row in distances(g) for x in row if x != inf) == 2
        part = orbitals(g)
        assert part.n_orbitals == 2
        assert all(part.self_paired(i) for i in range(2))
        # orbitals coincide with the distance classes
        d = distances(g)
        for u in range(g.n):
            for v in range(g.n):
                if u != v:
                    same = part.id_of(u, v) == part.id_of(0, g.neighbors(0)[0])
                    assert same == (d[u][v] == 1)

    def test_adjacency_is_orbital_union(self):
        g = cube_graph(3)
        part = orbitals(g)
        ids = {part.id_of(u, v) for u, v in g.edges()}
        assert orbital_graph(g, part, ids).adj == g.adj

    def test_brute_force_pair_orbits(self):
        rng = random.Random(9)
        for _ in range(10):
            g = random_graph(rng, rng.randint(2, 7))
            grp = automorphism_group(g)
            part = orbitals_of_group(grp)
            elems = grp.elements(cap=10_000)
            n = g.n
            for u, v in itertools.product(range(n), repeat=2):
                if u == v:
                    continue
                orbit = {(e[u], e[v]) for e in elems}
                ids = {part.id_of(a, b) for a, b in orbit}
                assert len(ids) == 1

    def test_pairing_involution(self):
        part = orbitals(path_graph(4))
        for i in range(part.n_orbitals):
            assert part.paired[part.paired[i]] == i


class TestShifts:
    def test_k2(self):
        assert shifts(complete_graph(2)) == [(1, 0)]

    def test_c4_by_enumeration(self):
        # exhaustive filter over Aut(C4) (dihedral, order 8): both rotations
        # by one step and both edge-reflections move every vertex to a neighbor
        got = shifts(cycle_graph(4))
        expected = [
            p
            for p in itertools.permutations(range(4))
            if all(cycle_graph(4).has_edge(v, p[v]) for v in range(4))
            and is_automorphism(cycle_graph(4), p)
        ]
        assert sorted(got) == sorted(expected)
        assert len(got) == 4

    def test_c5_two_rotations(self):
        assert len(shifts(cycle_graph(5))) == 2

    def test_kn_fixed_point_free(self):
        for n in (3, 4):
            got = shifts(complete_graph(n))
            expected = [
                p
                for p in itertools.permutations(range(n))
                if all(p[v] != v for v in range(n))
            ]
            assert sorted(got) == sorted(expected)

    def test_cubelike_translations_are_shifts(self):
        cs = ConnectionSet(3, (1, 2, 4, 7))
        g = cayley_z2(cs)
        got = set(shifts(g))
        for c in cs.elements:
            translation = tuple(v ^ c for v in range(8))
            assert translation in got

    def test_shift_graph_k2(self):
        sh = shift_graph(complete_graph(2))
        assert sh.n == 2 and sh.edge_count() == 1

    def test_shift_graph_cap(self):
        with pytest.raises(CapacityError):
            shift_graph(complete_graph(9), cap=1000)
