"""Named test graphs with documented provenance and construction-time checks.

Graphs over groups other than Z2^n (Shrikhande, the cuboctahedron variant,
the Z4 x Z8 graph) are built from explicit local edge rules and validated
by parameter checks; they are fixtures, not constructions.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .cayley import ConnectionSet, cayley_z2, folded_cube, halved_cube
from .graphs import Graph, complement, distances, from_edges


def _petersen() -> Graph:
    # Kneser graph on the 2-subsets of a 5-element set; edges join disjoint pairs
    pairs = list(combinations(range(5), 2))
    edges = [
        (i, j)
        for i, a in enumerate(pairs)
        for j, b in enumerate(pairs)
        if i < j and not set(a) & set(b)
    ]
    g = from_edges(10, edges)
    assert g.degrees() == [3] * 10
    return g


def _shrikhande() -> Graph:
    # vertices (a, b) in Z4 x Z4; differences +-(1,0), +-(0,1), +-(1,1)
    diffs = {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}
    edges = []
    for a in range(4):
        for b in range(4):
            for c in range(4):
                for d in range(4):
                    u, v = 4 * a + b, 4 * c + d
                    if u < v and ((c - a) % 4, (d - b) % 4) in diffs:
                        edges.append((u, v))
    g = from_edges(16, edges)
    _check_strongly_regular(g, 16, 6, 2, 2)
    return g


def _check_strongly_regular(g: Graph, n: int, k: int, lam: int, mu: int) -> None:
    assert g.n == n and g.degrees() == [k] * n
    for u in range(n):
        for v in range(u + 1, n):
            common = (g.adj[u] & g.adj[v]).bit_count()
            assert common == (lam if g.has_edge(u, v) else mu)


def _rook44() -> Graph:
    # cubelike presentation of the 4x4 rook graph
    return cayley_z2(ConnectionSet(4, (1, 2, 3, 4, 8, 12)))


def _cuboctahedron_d3() -> Graph:
    # 1-skeleton of the cuboctahedron (vertices: permutations of (+-1, +-1, 0),
    # edges at squared distance 2) with distance-3 pairs added
    coords = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        for si in (1, -1):
            for sj in (1, -1):
                p = [0, 0, 0]
                p[i], p[j] = si, sj
                coords.append(tuple(p))
    coords.sort()
    base_edges = [
        (u, v)
        for u in range(12)
        for v in range(u + 1, 12)
        if sum((a - b) ** 2 for a, b in zip(coords[u], coords[v])) == 2
    ]
    base = from_edges(12, base_edges)
    assert base.degrees() == [4] * 12
    dist = distances(base)
    extra = [
        (u, v) for u in range(12) for v in range(u + 1, 12) if dist[u][v] == 3
    ]
    g = from_edges(12, base_edges + extra)
    assert g.is_regular()
    return g


def _z4z8() -> Graph:
    # Cayley graph of Z4 x Z8 whose connection set is the inverse closure of
    # {(1,0),(0,6),(0,3),(0,7),(1,5),(1,1),(1,6),(2,2)}
    half = [(1, 0), (0, 6), (0, 3), (0, 7), (1, 5), (1, 1), (1, 6), (2, 2)]
    conn = set()
    for a, b in half:
        conn.add((a % 4, b % 8))
        conn.add((-a % 4, -b % 8))
    assert (0, 0) not in conn
    edges = []
    for a in range(4):
        for b in range(8):
            for c, d in conn:
                u = 8 * a + b
                v = 8 * ((a + c) % 4) + (b + d) % 8
                if u < v:
                    edges.append((u, v))
    g = from_edges(32, edges)
    assert g.degrees() == [len(conn)] * 32
    return g


_BUILDERS = {
    "petersen": _petersen,
    "shrikhande": _shrikhande,
    "rook44": _rook44,
    "cuboctahedron-d3": _cuboctahedron_d3,
    "clebsch": lambda: folded_cube(5),
    "complement-clebsch": lambda: complement(folded_cube(5)),
    "halfQ8": lambda: halved_cube(8),
    "z4z8": _z4z8,
}

FIXTURE_NAMES = tuple(sorted(_BUILDERS))


@lru_cache(maxsize=None)
def fixtures(name: str) -> Graph:
    """Named fixture graph; raises KeyError for unknown names."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    return _BUILDERS[name]()
