import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cubecore.cayley import cayley_z2, ConnectionSet, cube_graph, folded_cube, halved_cube
from cubecore.errors import Graph6ParseError
from cubecore.autos import are_isomorphic
from cubecore.graphs import (
    Graph,
    bipartite_double_cover,
    cartesian_product,
    complement,
    complete_graph,
    connected_components,
    cycle_graph,
    distances,
    empty_graph,
    from_edges,
    from_graph6,
    from_sparse6,
    induced_subgraph,
    odd_girth,
    path_graph,
    to_graph6,
)


def random_graph(rng, n, p=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return from_edges(n, edges)


class TestConstruction:
    def test_loop_rejected(self):
        with pytest.raises(ValueError, match="loop"):
            Graph(2, [0b01, 0b10])

    def test_asymmetry_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            Graph(2, [0b10, 0b00])

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            from_edges(2, [(0, 1)], labels=[1, 1], label_dim=1)


class TestGraph6:
    def test_k1(self):
        assert to_graph6(complete_graph(1)) == "@"
        assert from_graph6("@").n == 1

    def test_k4_roundtrip(self):
        k4 = complete_graph(4)
        assert from_graph6(to_graph6(k4)) == k4

    def test_clebsch_roundtrip(self):
        g = folded_cube(5).without_labels()
        assert from_graph6(to_graph6(g)) == g

    def test_header_accepted(self):
        k4 = complete_graph(4)
        assert from_graph6(">>graph6<<" + to_graph6(k4)) == k4

    def test_malformed_reports_offset(self):
        with pytest.raises(Graph6ParseError) as err:
            from_graph6("C")  # truncated: needs one adjacency byte
        assert err.value.offset is not None

    def test_bad_byte(self):
        with pytest.raises(Graph6ParseError):
            from_graph6("C\x1f")

    def test_random_corpus_roundtrip(self):
        rng = random.Random(42)
        for _ in range(10_000):
            n = rng.randint(1, 64)
            g = random_graph(rng, n, rng.random())
            assert from_graph6(to_graph6(g)) == g

    def test_matches_networkx_writer(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(1, 40)
            g = random_graph(rng, n)
            nxg = nx.empty_graph(n)
            nxg.add_edges_from(g.edges())
            theirs = nx.to_graph6_bytes(nxg, header=False).decode().strip()
            assert to_graph6(g) == theirs

    def test_large_size_header(self):
        g = empty_graph(100)
        line = to_graph6(g)
        assert line.startswith("~")
        assert from_graph6(line) == g


class TestSparse6:
    def test_against_networkx(self):
        rng = random.Random(5)
        for _ in range(300):
            n = rng.randint(1, 40)
            g = random_graph(rng, n, 0.2)
            nxg = nx.empty_graph(n)
            nxg.add_edges_from(g.edges())
            line = nx.to_sparse6_bytes(nxg, header=False).decode().strip()
            assert from_sparse6(line) == g

    def test_prefix_required(self):
        with pytest.raises(Graph6ParseError):
            from_sparse6("C~")


class TestComplement:
    def test_complete_graph(self):
        assert complement(complete_graph(5)).edge_count() == 0

    def test_involution(self):
        rng = random.Random(1)
        for _ in range(20):
            g = random_graph(rng, rng.randint(1, 12))
            assert complement(complement(g)) == g

    def test_halved5_is_clebsch_complement(self):
        assert are_isomorphic(complement(halved_cube(5)), folded_cube(5))


class TestCartesianProduct:
    def test_k2_square_is_c4(self):
        assert are_isomorphic(
            cartesian_product(complete_graph(2), complete_graph(2)), cycle_graph(4)
        )

    def test_rook_graph(self):
        rook = cartesian_product(complete_graph(4), complete_graph(4))
        assert rook.n == 16
        assert rook.degrees() == [6] * 16

    def test_cube_recursion(self):
        q = complete_graph(2)
        for _ in range(2):
            q = cartesian_product(q, complete_graph(2))
        assert q.degrees() == [3] * 8
        assert odd_girth(q) == math.inf
        assert are_isomorphic(q, cube_graph(3))


class TestDistancesOddGirth:
    def test_bipartite_infinite(self):
        assert odd_girth(cycle_graph(6)) == math.inf
        assert odd_girth(cube_graph(4)) == math.inf

    def test_clebsch_odd_girth(self):
        assert odd_girth(folded_cube(5)) == 5

    def test_k4(self):
        assert odd_girth(complete_graph(4)) == 3

    def test_distance_matrix_basics(self):
        rng = random.Random(3)
        for _ in range(20):
            g = random_graph(rng, rng.randint(1, 10))
            d = distances(g)
            for u in range(g.n):
                assert d[u][u] == 0
                for v in range(g.n):
                    assert d[u][v] == d[v][u]
                    for w_ in range(g.n):
                        assert d[u][w_] <= d[u][v] + d[v][w_]

    def test_path_distances(self):
        d = distances(path_graph(4))
        assert d[0][3] == 3

    def test_disconnected_infinite(self):
        g = from_edges(4, [(0, 1), (2, 3)])
        assert distances(g)[0][2] == math.inf


class TestComponentsInduced:
    def test_edgeless_components(self):
        assert len(connected_components(empty_graph(5))) == 5

    def test_half_q8_basis_clique(self):
        g = halved_cube(8)
        verts = [0] + [1 << i for i in range(7)]
        sub = induced_subgraph(g, verts)
        assert sub == complete_graph(8).without_labels() or are_isomorphic(
            sub.without_labels(), complete_graph(8)
        )

    def test_distance_two_graph_of_q4(self):
        q4 = cube_graph(4)
        d = distances(q4)
        g2 = from_edges(
            16, [(u, v) for u in range(16) for v in range(u + 1, 16) if d[u][v] == 2]
        )
        comps = connected_components(g2)
        assert len(comps) == 2
        for comp in comps:
            assert are_isomorphic(induced_subgraph(g2, comp), halved_cube(4))

    def test_induced_keeps_labels(self):
        g = cube_graph(2)
        sub = induced_subgraph(g, [0, 1])
        assert sub.labels == (0, 1)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            induced_subgraph(complete_graph(3), [0, 5])


class TestDoubleCover:
    def test_bipartite_doubles(self):
        g = cycle_graph(6)
        cover = bipartite_double_cover(g)
        comps = connected_components(cover)
        assert len(comps) == 2
        for comp in comps:
            assert are_isomorphic(induced_subgraph(cover, comp), g)

    def test_triangle_gives_hexagon(self):
        assert are_isomorphic(bipartite_double_cover(complete_graph(3)), cycle_graph(6))

    def test_shrikhande_rook_covers_isomorphic(self):
        from cubecore.fixtures import fixtures

        a = bipartite_double_cover(fixtures("shrikhande"))
        b = bipartite_double_cover(fixtures("rook44").without_labels())
        assert are_isomorphic(a, b)
