"""Cubelike constructions: Cayley graphs of Z2^n, folded/halved cubes,
cubelike hulls, quotients, the cube covering map, recognition and
enumeration up to isomorphism.

All constructions are pure functions producing labeled immutable graphs;
vertex i of a full Cayley graph carries the word whose bits encode i.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import (
    CapacityError,
    DimensionMismatch,
    NotSpanningError,
    QuotientLoopError,
    SearchTimeout,
)
from .gf2 import LinearMap, Subgroup, Word, coset_canonical_bits, span_bits
from .graphs import VERTEX_CAP, Graph, VertexMap, bits_of, induced_subgraph

HULL_HOST_CAP = 13  # 2^(n-1) hull vertices must fit the vertex cap


@dataclass(frozen=True)
class ConnectionSet:
    """A set of nonzero words of Z2^n (inverse closure is automatic)."""

    n: int
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        if any(not 0 < c < (1 << self.n) for c in elems):
            raise ValueError("connection set must consist of nonzero n-bit words")

    @classmethod
    def from_words(cls, words: Iterable[Word], n: int | None = None) -> "ConnectionSet":
        words = list(words)
        dims = {w.n for w in words}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
        if dims:
            n = dims.pop()
        elif n is None:
            raise ValueError("empty connection set needs an explicit dimension")
        return cls(n, tuple(w.bits for w in words))

    def words(self) -> list[Word]:
        return [Word(self.n, c) for c in self.elements]

    @property
    def degree(self) -> int:
        return len(self.elements)

    def spans(self) -> bool:
        return span_bits(self.elements, self.n).rank == self.n


def cayley_z2(cs: ConnectionSet, cap: int = 0) -> Graph:
    """Cayley graph of Z2^n: vertex i is the word i; u ~ v iff u xor v in C."""
    n_vertices = 1 << cs.n
    cap = cap or VERTEX_CAP
    if n_vertices > cap:
        raise CapacityError(f"2^{cs.n} vertices exceeds cap {cap}")
    adj = [0] * n_vertices
    for v in range(n_vertices):
        row = 0
        for c in cs.elements:
            row |= 1 << (v ^ c)
        adj[v] = row
    return Graph(n_vertices, adj, labels=range(n_vertices), label_dim=cs.n, cap=cap)


def folded_cube(order: int) -> Graph:
    """Cayley graph of Z2^(order-1) on the standard basis plus its total sum."""
    if order < 2:
        raise ValueError("folded cubes need order >= 2")
    n = order - 1
    elems = [1 << i for i in range(n)] + [(1 << n) - 1]
    return cayley_z2(ConnectionSet(n, tuple(elems)))


def halved_cube(order: int) -> Graph:
    """Cayley graph of Z2^(order-1) on all words of weight one or two."""
    if order < 2:
        raise ValueError("halved cubes need order >= 2")
    n = order - 1
    elems = [1 << i for i in range(n)]
    elems += [(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)]
    return cayley_z2(ConnectionSet(n, tuple(elems)))


def cube_graph(dim: int) -> Graph:
    """The hypercube: Cayley graph on the standard basis."""
    if dim < 0:
        raise ValueError("dimension must be nonnegative")
    return cayley_z2(ConnectionSet(dim, tuple(1 << i for i in range(dim))))


def cubelike_hull(X: Graph, cap: int = 0) -> tuple[Graph, VertexMap]:
    """The minimal cubelike graph receiving X, with an induced embedding.

    Vertices are the even-weight words of Z2^{V(X)} in ascending integer
    order; words u, v are adjacent iff u xor v = e_a xor e_b for an edge ab
    of X.  The embedding sends vertex v to e_{u0} + e_v with u0 = vertex 0.
    """
    m = X.n
    if m == 0:
        raise ValueError("hull of the empty graph is undefined")
    cap = cap or VERTEX_CAP
    if m > HULL_HOST_CAP or (1 << (m - 1)) > cap:
        raise CapacityError(f"hull of a {m}-vertex graph exceeds the cap")
    words = [w for w in range(1 << m) if w.bit_count() % 2 == 0]
    index = {w: i for i, w in enumerate(words)}
    diffs = [(1 << a) | (1 << b) for a, b in X.edges()]
    n_vertices = len(words)
    adj = [0] * n_vertices
    for i, w in enumerate(words):
        row = 0
        for d in diffs:
            row |= 1 << index[w ^ d]
        adj[i] = row
    hull = Graph(n_vertices, adj, labels=words, label_dim=m, cap=cap)
    embed = VertexMap(
        m, n_vertices, tuple(index[(1 << 0) ^ (1 << v)] for v in range(m))
    )
    return hull, embed


def cube_cover_map(cs: ConnectionSet) -> LinearMap:
    """Linear map sending the i-th basis vector of Z2^degree to the i-th
    connection word (ascending); a covering map from the degree-cube."""
    if not cs.spans():
        raise NotSpanningError("connection set does not span; graph is disconnected")
    return LinearMap(cs.degree, cs.n, cs.elements)


def quotient_by_subgroup(Z: Graph, subgroup: Subgroup) -> tuple[Graph, VertexMap]:
    """Quotient of a labeled cubelike graph by a subgroup with independent cosets.

    Returns the quotient (labeled by compressing coset representatives onto
    the non-pivot coordinates) and the quotient map.
    """
    if Z.labels is None:
        raise ValueError("quotient needs a labeled cubelike graph")
    dim = Z.label_dim
    if subgroup.n != dim:
        raise DimensionMismatch(f"{subgroup.n} != {dim}")
    pivots = {(b & -b).bit_length() - 1 for b in subgroup.basis}
    free = [i for i in range(dim) if i not in pivots]

    def compress(rep: int) -> int:
        out = 0
        for k, i in enumerate(free):
            if (rep >> i) & 1:
                out |= 1 << k
        return out

    reps: dict[int, int] = {}
    rep_of_vertex = []
    for v in range(Z.n):
        r = coset_canonical_bits(Z.labels[v], subgroup)
        rep_of_vertex.append(r)
        reps.setdefault(r, len(reps))
    image = tuple(reps[r] for r in rep_of_vertex)
    n_q = len(reps)
    adj = [0] * n_q
    for u, v in Z.edges():
        a, b = image[u], image[v]
        if a == b:
            raise QuotientLoopError(
                f"coset {Word(dim, rep_of_vertex[u])} contains an edge",
                rep_of_vertex[u],
            )
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    labels = [0] * n_q
    for r, i in reps.items():
        labels[i] = compress(r)
    quotient = Graph(n_q, adj, labels=labels, label_dim=len(free))
    return quotient, VertexMap(Z.n, n_q, image)


# -- recognition ---------------------------------------------------------------


@dataclass(frozen=True)
class CubelikeWitness:
    """A labeling of the vertices under which the graph is a Cayley graph."""

    labels: tuple[int, ...]
    connection: ConnectionSet


GROUP_SEARCH_CAP = 100_000  # max |Aut| for the subgroup-lattice search


def is_cubelike(X: Graph, deadline: float | None = None) -> Optional[CubelikeWitness]:
    """Word-labeling under which X is a Cayley graph of Z2^k, or None.

    Equivalent to: the automorphism group contains a regular elementary
    abelian 2-subgroup.  When the group is small enough to enumerate, the
    search runs over its fixed-point-free involutions (exhaustive subgroup
    assembly); otherwise a direct backtracking labeling search is used.
    Either way a witness is verified by rebuilding the Cayley graph, and a
    completed search returning None is an exhaustive certificate.
    """
    n = X.n
    if n == 0 or n & (n - 1):
        return None
    if not X.is_regular():
        return None
    if n == 1:
        return CubelikeWitness((0,), ConnectionSet(0, ()))
    from .autos import automorphism_group

    group = automorphism_group(X)
    if not group.is_transitive():
        return None
    if group.order() <= GROUP_SEARCH_CAP:
        labels = _regular_subgroup_labels(X, group, deadline)
    else:
        labels = _labeling_search(X, deadline)
    if labels is None:
        return None
    return _verified_witness(X, labels)


def _verified_witness(X: Graph, labels: Sequence[int]) -> CubelikeWitness:
    n = X.n
    k = n.bit_length() - 1
    vertex_of = [-1] * n
    for v, w in enumerate(labels):
        vertex_of[w] = v
    connection = ConnectionSet(
        k, tuple(labels[u] for u in bits_of(X.adj[vertex_of[0]]))
    )
    rebuilt = cayley_z2(connection)
    assert all(
        rebuilt.has_edge(labels[u], labels[v]) == X.has_edge(u, v)
        for u in range(n)
        for v in range(u + 1, n)
    ), "witness failed reconstruction"
    return CubelikeWitness(tuple(labels), connection)


def _regular_subgroup_labels(X, group, deadline) -> Optional[list[int]]:
    """Exhaustive search for a regular elementary abelian 2-subgroup of an
    enumerated automorphism group; returns the induced vertex labeling."""
    from .autos import perm_mul

    n = X.n
    k = n.bit_length() - 1
    ident = tuple(range(n))
    elements = group.elements(cap=GROUP_SEARCH_CAP)
    invs = [
        g
        for g in elements
        if g != ident and all(g[g[v]] == v and g[v] != v for v in range(n))
    ]
    inv_set = set(invs)
    ticks = [0]

    def tick():
        ticks[0] += 1
        if deadline is not None and ticks[0] % 64 == 0:
            if time.monotonic() > deadline:
                raise SearchTimeout("cubelike recognition hit its deadline")

    def extend(subgroup: dict, gens: list, start: int) -> Optional[list]:
        # subgroup: element -> generator-subset mask
        tick()
        if len(subgroup) == n:
            return gens
        if len(subgroup) << (len(invs) - start) < n:
            return None  # not enough candidates left to double up to n
        for idx in range(start, len(invs)):
            sigma = invs[idx]
            if sigma in subgroup:
                continue
            if any(perm_mul(sigma, g) != perm_mul(g, sigma) for g in gens):
                continue
            coset = {}
            ok = True
            gbit = 1 << len(gens)
            for h, mask in subgroup.items():
                prod = perm_mul(sigma, h)
                if prod != ident and prod not in inv_set:
                    ok = False
                    break
                coset[prod] = mask | gbit
            if not ok:
                continue
            merged = dict(subgroup)
            merged.update(coset)
            res = extend(merged, gens + [sigma], idx + 1)
            if res is not None:
                return res
        return None

    gens = extend({ident: 0}, [], 0)
    if gens is None:
        return None
    # labels: vertex tau(0) gets the generator-subset word of tau
    labels = [-1] * n
    for mask in range(n):
        tau = ident
        m = mask
        while m:
            b = m & -m
            tau = perm_mul(gens[b.bit_length() - 1], tau)
            m ^= b
        labels[tau[0]] = mask
    assert all(lab >= 0 for lab in labels)
    assert len(gens) == k
    return labels


def _labeling_search(X: Graph, deadline) -> Optional[list[int]]:
    """Backtracking assignment of words to vertices: vertex 0 gets word 0;
    every decided pair (u, v) pins whether label(u) xor label(v) is in the
    connection set."""
    n = X.n
    vertex_of = [-1] * n  # word -> vertex
    label_of = [-1] * n  # vertex -> word
    status = [0] * n  # word d: 0 unknown, 1 in C, 2 not in C
    vertex_of[0] = 0
    label_of[0] = 0
    ticks = [0]

    def assign(word: int) -> bool:
        ticks[0] += 1
        if deadline is not None and ticks[0] % 64 == 0:
            if time.monotonic() > deadline:
                raise SearchTimeout("cubelike recognition hit its deadline")
        if word == n:
            return True
        for z in range(n):
            if label_of[z] >= 0:
                continue
            decided: list[int] = []
            ok = True
            for w in range(n):
                u = vertex_of[w]
                if u < 0:
                    continue
                d = w ^ word
                want = 1 if X.has_edge(z, u) else 2
                if status[d] == 0:
                    status[d] = want
                    decided.append(d)
                elif status[d] != want:
                    ok = False
                    break
            if ok:
                vertex_of[word] = z
                label_of[z] = word
                if assign(word + 1):
                    return True
                vertex_of[word] = -1
                label_of[z] = -1
            for d in decided:
                status[d] = 0
        return False

    if not assign(1):
        return None
    return label_of


# -- enumeration up to isomorphism ----------------------------------------------


def _mask_elements(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _subset_signature(mask: int, n: int) -> tuple:
    """Cheap invariant of a word subset (bitmask over words 1..2^n-1)
    under invertible linear maps."""
    elems = _mask_elements(mask)
    rank = span_bits(elems, n).rank
    hyperplanes = sorted(
        sum(1 for s in elems if not (s & y).bit_count() & 1)
        for y in range(1, 1 << n)
    )
    inner = sorted(
        sum(1 for b in elems if b != s and (mask >> (s ^ b)) & 1) for s in elems
    )
    return (len(elems), rank, tuple(hyperplanes), tuple(inner))


def _greedy_basis_coords(s_list: Sequence[int]) -> tuple[list[int], list[tuple[int, int]]]:
    """Greedy basis of span(s_list) drawn from s_list, plus per-element
    coordinates (element, coordinate mask over basis indices)."""
    rows: list[tuple[int, int]] = []  # (reduced vector, combination mask)
    basis: list[int] = []
    coords: list[tuple[int, int]] = []
    for s in s_list:
        r, m = s, 0
        for rv, rm in rows:
            if (r >> ((rv & -rv).bit_length() - 1)) & 1:
                r ^= rv
                m ^= rm
        if r:
            idx = len(basis)
            basis.append(s)
            rows.append((r, m | (1 << idx)))
            coords.append((s, 1 << idx))
        else:
            coords.append((s, m))
    return basis, coords


def _linearly_equivalent(S: int, T: int, n: int) -> bool:
    """Is there an invertible linear map of Z2^n taking word subset S onto T?

    S and T are bitmasks over the words 1..2^n-1.  Backtracks over images in
    T of a fixed basis of span(S) chosen inside S; every element of S whose
    coordinates are covered by the chosen prefix must map into T, and the
    span-intersection counts must agree.  Spans are bitmasks over words, so
    all pruning tests are word operations (n <= 6 in practice).
    """
    if S == T:
        return True
    if S.bit_count() != T.bit_count():
        return False
    if not S:
        return True
    s_list = _mask_elements(S)
    t_list = _mask_elements(T)
    basis, coords = _greedy_basis_coords(s_list)
    rank = len(basis)
    if span_bits(t_list, n).rank != rank:
        return False
    # elements grouped by the basis prefix length that determines them
    by_level: list[list[tuple[int, int]]] = [[] for _ in range(rank + 1)]
    for s, mask in coords:
        by_level[mask.bit_length()].append((s, mask))
    s_in_prefix = [0] * (rank + 1)
    for i in range(1, rank + 1):
        s_in_prefix[i] = s_in_prefix[i - 1] + len(by_level[i])

    chosen: list[int] = []

    def solve(i: int, span_mask: int) -> bool:
        # span_mask: bitmask of span(chosen) as a set of words (bit 0 = zero word)
        if i == rank:
            return True
        for t in t_list:
            if (span_mask >> t) & 1:
                continue  # dependent on earlier images
            new_span = span_mask
            for x in _mask_elements(span_mask):
                new_span |= 1 << (x ^ t)
            if (T & new_span).bit_count() != s_in_prefix[i + 1]:
                continue
            chosen.append(t)
            ok = True
            for s, mask in by_level[i + 1]:
                img = 0
                mm = mask
                while mm:
                    b = mm & -mm
                    img ^= chosen[b.bit_length() - 1]
                    mm ^= b
                if not (T >> img) & 1:
                    ok = False
                    break
            if ok and solve(i + 1, new_span):
                return True
            chosen.pop()
        return False

    return solve(0, 1)


@lru_cache(maxsize=8)
def _gl_subset_orbits(n: int) -> tuple[int, ...]:
    """Orbit representatives (as word bitmasks) of subsets of Z2^n \\ {0}
    under GL(n, 2).

    Incremental extension: level k+1 candidates come from adding one word to
    each level-k representative; duplicates are removed inside signature
    buckets by the exact linear-equivalence test.
    """
    n_points = (1 << n) - 1
    reps: list[int] = [0]
    level: list[int] = [0]
    size = 0
    while level and size < n_points:
        size += 1
        buckets: dict[tuple, list[int]] = {}
        nxt: list[int] = []
        for S in level:
            for p in range(1, 1 << n):
                if (S >> p) & 1:
                    continue
                cand = S | (1 << p)
                sig = _subset_signature(cand, n)
                bucket = buckets.setdefault(sig, [])
                if any(_linearly_equivalent(cand, T, n) for T in bucket):
                    continue
                bucket.append(cand)
                nxt.append(cand)
        reps.extend(nxt)
        level = nxt
    return tuple(reps)


@lru_cache(maxsize=16)
def _enumerate_cubelike_cached(n: int) -> tuple[tuple[str, int], ...]:
    """(canonical form, connection-set mask) per isomorphism class, sorted."""
    from .autos import canonical_form

    out: dict[str, int] = {}
    for S in _gl_subset_orbits(n):
        G = cayley_z2(ConnectionSet(n, tuple(_mask_elements(S))))
        key = canonical_form(G)
        if key not in out:
            out[key] = S
    return tuple(sorted(out.items()))


def enumerate_cubelike(
    n: int, connected_only: bool = True, cap_dim: int = 5
) -> list[Graph]:
    """All Cayley graphs of Z2^n on 2^n vertices, one per isomorphism class.

    Connection sets are first reduced modulo the invertible linear maps of
    Z2^n, then deduplicated by graph canonical form (linear orbits are a
    pre-filter only).  `connected_only` keeps spanning connection sets.
    Deterministic: the result is sorted by canonical string.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    if n > cap_dim:
        raise CapacityError(f"exhaustive enumeration capped at dimension {cap_dim}")
    out = []
    for _, S in _enumerate_cubelike_cached(n):
        elems = _mask_elements(S)
        if connected_only and span_bits(elems, n).rank != n:
            continue
        out.append(cayley_z2(ConnectionSet(n, tuple(elems))))
    return out
