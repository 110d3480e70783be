"""Automorphism groups, canonical forms, orbitals and shift graphs.

The canonical-form search is an individualization-refinement backtrack:
equitable partition refinement, target cell = first smallest non-singleton
cell, leaf certificates compared as graph6 strings of the relabeled graph.
Discovered automorphisms prune sibling branches (orbit pruning under the
subgroup fixing the current individualized prefix pointwise).

Permutations are tuples p with p[v] = image of v.  PermGroup builds a
deterministic stabilizer chain (Schreier-Sims), so orders, membership and
full element enumeration are exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError
from .graphs import Graph, Digraph, bits_of, distances, relabel, to_graph6

SHIFT_GRAPH_CAP = 10_000  # max |Aut(X)| for which shift graphs are built

Perm = tuple[int, ...]


def perm_mul(p: Perm, q: Perm) -> Perm:
    """Composition: apply q first, then p."""
    return tuple(p[i] for i in q)


def perm_inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_order(p: Perm) -> int:
    """Order via cycle decomposition (lcm of cycle lengths)."""
    from math import lcm

    seen = [False] * len(p)
    order = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        order = lcm(order, length)
    return order


def is_automorphism(X: Graph, p: Perm) -> bool:
    return all(X.has_edge(p[u], p[v]) for u, v in X.edges())


# -- permutation groups --------------------------------------------------------


class PermGroup:
    """Permutation group given by generators, with a stabilizer chain.

    The chain is built by a deterministic Schreier-Sims pass, so order(),
    membership and element enumeration are exact and reproducible.
    """

    def __init__(self, degree: int, generators: Iterable[Perm]):
        self.degree = degree
        ident = tuple(range(degree))
        gens = []
        seen = set()
        for g in generators:
            g = tuple(g)
            if len(g) != degree or sorted(g) != list(range(degree)):
                raise ValueError("not a permutation of the right degree")
            if g != ident and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators = tuple(gens)
        self._chain: list[dict] | None = None
        self._order: int | None = None

    # chain level i: {"point": b_i, "own": [strong gens fixing b_0..b_{i-1}
    # but moving b_i or deeper], "transversal": {pt: perm}}.  The group at
    # level i is generated by the "own" lists of levels i, i+1, ...

    def _gens_at(self, i: int) -> list[Perm]:
        return [g for level in self._chain[i:] for g in level["own"]]

    def _orbit(self, i: int) -> None:
        level = self._chain[i]
        b = level["point"]
        gens = self._gens_at(i)
        trans = {b: tuple(range(self.degree))}
        queue = deque([b])
        while queue:
            p = queue.popleft()
            rep = trans[p]
            for g in gens:
                q = g[p]
                if q not in trans:
                    trans[q] = perm_mul(g, rep)
                    queue.append(q)
        level["transversal"] = trans

    def _sift(self, g: Perm, start: int) -> Perm | None:
        """Strip g through levels >= start; None when it reaches identity."""
        for level in self._chain[start:]:
            p = g[level["point"]]
            rep = level["transversal"].get(p)
            if rep is None:
                return g
            g = perm_mul(perm_inv(rep), g)
        if all(v == i for i, v in enumerate(g)):
            return None
        return g

    def _place_at(self, g: Perm, idx: int) -> None:
        """Store g in level idx's own list, creating the level if needed."""
        if idx == len(self._chain):
            moved = next(v for v in range(self.degree) if g[v] != v)
            self._chain.append({"point": moved, "own": [], "transversal": {}})
        self._chain[idx]["own"].append(g)

    def _complete(self, i: int) -> None:
        """Establish the Schreier condition at level i (fixing deeper levels first)."""
        while True:
            self._orbit(i)
            level = self._chain[i]
            trans = level["transversal"]
            gens = self._gens_at(i)
            restart = False
            for p in sorted(trans):
                rep = trans[p]
                for s in gens:
                    schreier = perm_mul(perm_inv(trans[s[p]]), perm_mul(s, rep))
                    residue = self._sift(schreier, i + 1)
                    if residue is not None:
                        self._place_at(residue, i + 1)
                        self._complete(i + 1)
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                return

    def _build_chain(self) -> None:
        if self._chain is not None:
            return
        self._chain = []
        if self.generators:
            for g in self.generators:
                self._place_at(g, 0)
            self._complete(0)
        order = 1
        for level in self._chain:
            order *= len(level["transversal"])
        self._order = order

    def order(self) -> int:
        self._build_chain()
        return self._order

    def __contains__(self, g) -> bool:
        g = tuple(g)
        if len(g) != self.degree:
            return False
        self._build_chain()
        return self._sift(g, 0) is None

    def elements(self, cap: int = SHIFT_GRAPH_CAP) -> list[Perm]:
        """All group elements, sorted; raises CapacityError above `cap`."""
        if self.order() > cap:
            raise CapacityError(f"group order {self.order()} exceeds cap {cap}")
        elems = [tuple(range(self.degree))]
        for level in self._chain:
            reps = [level["transversal"][p] for p in sorted(level["transversal"])]
            elems = [perm_mul(e, r) for e in elems for r in reps]
        assert len(set(elems)) == self._order
        return sorted(elems)

    def orbits(self) -> list[list[int]]:
        """Vertex orbits, each sorted, ordered by minimum element."""
        seen = [False] * self.degree
        out = []
        for s in range(self.degree):
            if seen[s]:
                continue
            orb = {s}
            queue = deque([s])
            seen[s] = True
            while queue:
                p = queue.popleft()
                for g in self.generators:
                    q = g[p]
                    if not seen[q]:
                        seen[q] = True
                        orb.add(q)
                        queue.append(q)
            out.append(sorted(orb))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1 or self.degree == 0


# -- equitable refinement and the canonical search -----------------------------


def _initial_colors(X: Graph) -> list[int]:
    # vertex invariant: degree, distance multiset, edge count inside N(v)
    dmat = distances(X)
    keys = []
    for v in range(X.n):
        row = sorted(-1 if d == float("inf") else int(d) for d in dmat[v])
        local = 0
        nb = X.adj[v]
        for u in bits_of(nb):
            local += (X.adj[u] & nb).bit_count()
        keys.append((X.degree(v), tuple(row), local // 2))
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(
    adj: Sequence[int],
    cells: list[tuple[int, ...]],
    seed: list[int] | None = None,
) -> list[tuple[int, ...]]:
    """Equitable refinement; deterministic fragment order (by neighbor count).

    `seed` restricts the initial splitter worklist (valid when `cells` differs
    from an equitable partition only by the seeded fragments).
    """
    queue = deque(seed) if seed is not None else deque(_mask(c) for c in cells)
    while queue:
        wmask = queue.popleft()
        new_cells: list[tuple[int, ...]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            buckets: dict[int, list[int]] = {}
            for v in cell:
                buckets.setdefault((adj[v] & wmask).bit_count(), []).append(v)
            if len(buckets) == 1:
                new_cells.append(cell)
                continue
            changed = True
            for k in sorted(buckets):
                frag = tuple(buckets[k])
                new_cells.append(frag)
                queue.append(_mask(frag))
        if changed:
            cells = new_cells
    return cells


def _mask(cell: Iterable[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _individualize(
    adj: Sequence[int], cells: list[tuple[int, ...]], ci: int, v: int
) -> list[tuple[int, ...]]:
    rest = tuple(u for u in cells[ci] if u != v)
    cells = cells[:ci] + [(v,), rest] + cells[ci + 1 :]
    return _refine(adj, cells, seed=[1 << v, _mask(rest)])


def _cell_invariant(adj: Sequence[int], cells: list[tuple[int, ...]], small: bool):
    sizes = tuple(len(c) for c in cells)
    if not small:
        return sizes
    masks = [_mask(c) for c in cells]
    quot = tuple(
        (adj[c[0]] & m).bit_count() for c in cells for m in masks
    )
    return (sizes, quot)


class _CanonSearch:
    def __init__(self, X: Graph):
        self.X = X
        self.adj = X.adj
        self.n = X.n
        self.small = X.n <= 128
        self.gens: list[Perm] = []
        self.first_cert: str | None = None
        self.first_perm: Perm | None = None
        self.first_invs: list = []
        self.best_cert: str | None = None
        self.best_perm: Perm | None = None
        self.best_invs: list = []

    def run(self) -> None:
        colors = _initial_colors(self.X)
        by_color: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            by_color.setdefault(c, []).append(v)
        cells = [tuple(by_color[c]) for c in sorted(by_color)]
        cells = _refine(self.adj, cells)
        self._node(cells, [], [])

    # path_invs: invariants along the path including this node's
    def _node(self, cells, seq: list[int], path_invs: list) -> None:
        inv = _cell_invariant(self.adj, cells, self.small)
        path_invs = path_invs + [inv]
        depth = len(path_invs) - 1
        cmp_first = self._prefix_cmp(path_invs, self.first_invs)
        cmp_best = self._prefix_cmp(path_invs, self.best_invs)
        if self.best_cert is not None and cmp_best < 0 and cmp_first != 0:
            return
        target = None
        for ci, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = ci
        if target is None:
            self._leaf(cells, path_invs, cmp_first, cmp_best)
            return
        explored: list[int] = []
        gen_count = -1
        parent = None
        for v in cells[target]:
            if self.gens:
                if len(self.gens) != gen_count:
                    gen_count = len(self.gens)
                    parent = self._orbit_partition(seq)
                if any(_find(parent, v) == _find(parent, w) for w in explored):
                    continue
            explored.append(v)
            child = _individualize(self.adj, cells, target, v)
            self._node(child, seq + [v], path_invs)

    def _leaf(self, cells, path_invs, cmp_first, cmp_best) -> None:
        perm = [0] * self.n  # perm[old] = new position
        for i, cell in enumerate(cells):
            perm[cell[0]] = i
        perm = tuple(perm)
        cert = to_graph6(relabel(self.X.without_labels(), perm))
        if self.first_cert is None:
            self.first_cert = cert
            self.first_perm = perm
            self.first_invs = path_invs
            self.best_cert = cert
            self.best_perm = perm
            self.best_invs = path_invs
            return
        if cmp_first == 0 and cert == self.first_cert and perm != self.first_perm:
            auto = perm_mul(perm_inv(perm), self.first_perm)
            assert is_automorphism(self.X, auto)
            self.gens.append(auto)
        if cmp_best > 0 or (cmp_best == 0 and cert > self.best_cert):
            self.best_cert = cert
            self.best_perm = perm
            self.best_invs = path_invs
        elif cmp_best == 0 and cert == self.best_cert and perm != self.best_perm:
            auto = perm_mul(perm_inv(perm), self.best_perm)
            if is_automorphism(self.X, auto):
                self.gens.append(auto)

    @staticmethod
    def _prefix_cmp(path_invs, ref_invs) -> int:
        """-1/0/+1 comparing this path against a reference path prefix."""
        if not ref_invs:
            return 0
        for a, b in zip(path_invs, ref_invs):
            if a < b:
                return -1
            if a > b:
                return 1
        return 0

    def _orbit_partition(self, seq: list[int]) -> list[int]:
        parent = list(range(self.n))
        fixed = set(seq)
        for g in self.gens:
            if all(g[x] == x for x in fixed):
                for v in range(self.n):
                    _union(parent, v, g[v])
        return parent


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent: list[int], a: int, b: int) -> None:
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[rb] = ra


def _run_search(X: Graph) -> _CanonSearch:
    s = _CanonSearch(X)
    s.run()
    return s


def canonical_labeling(X: Graph) -> Perm:
    """Permutation sending X to its canonical relabeling."""
    return _run_search(X).best_perm


def canonical_form(X: Graph) -> str:
    """Canonical graph6 string; equal strings iff isomorphic graphs."""
    return _run_search(X).best_cert


def are_isomorphic(X: Graph, Y: Graph) -> bool:
    if X.n != Y.n or X.edge_count() != Y.edge_count():
        return False
    if sorted(X.degrees()) != sorted(Y.degrees()):
        return False
    return canonical_form(X) == canonical_form(Y)


def automorphism_group(X: Graph) -> PermGroup:
    """Automorphism group (generators verified to preserve adjacency)."""
    search = _run_search(X)
    for g in search.gens:
        assert is_automorphism(X, g)
    return PermGroup(X.n, search.gens)


def is_vertex_transitive(X: Graph) -> bool:
    if X.n == 0:
        return True
    if not X.is_regular():
        return False
    return automorphism_group(X).is_transitive()


# -- orbitals ------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitalPartition:
    """Orbits of a permutation group acting on ordered pairs (off-diagonal).

    ids is a flat n*n array: ids[u*n+v] = orbital id, -1 on the diagonal.
    Orbitals are numbered by BFS from the lexicographically smallest
    unassigned pair, so ids are deterministic.
    """

    n: int
    n_orbitals: int
    ids: tuple[int, ...]
    paired: tuple[int, ...]

    def id_of(self, u: int, v: int) -> int:
        return self.ids[u * self.n + v]

    def self_paired(self, i: int) -> bool:
        return self.paired[i] == i

    def pairs_of(self, i: int) -> list[tuple[int, int]]:
        n = self.n
        return [
            (k // n, k % n) for k, x in enumerate(self.ids) if x == i
        ]


def orbitals_of_group(group: PermGroup) -> OrbitalPartition:
    n = group.degree
    ids = [-1] * (n * n)
    count = 0
    for u0 in range(n):
        for v0 in range(n):
            if u0 == v0 or ids[u0 * n + v0] >= 0:
                continue
            ids[u0 * n + v0] = count
            queue = deque([(u0, v0)])
            while queue:
                u, v = queue.popleft()
                for g in group.generators:
                    gu, gv = g[u], g[v]
                    if ids[gu * n + gv] < 0:
                        ids[gu * n + gv] = count
                        queue.append((gu, gv))
            count += 1
    paired = [-1] * count
    for u in range(n):
        for v in range(n):
            if u != v:
                paired[ids[u * n + v]] = ids[v * n + u]
    return OrbitalPartition(n, count, tuple(ids), tuple(paired))


def orbitals(X: Graph) -> OrbitalPartition:
    return orbitals_of_group(automorphism_group(X))


def orbital_graph(X: Graph, part: OrbitalPartition, ids: Iterable[int]):
    """Union of the chosen orbitals as a Graph (ids closed under pairing)
    or a Digraph otherwise."""
    chosen = set(ids)
    if not chosen:
        raise ValueError("empty orbital id set")
    if any(not 0 <= i < part.n_orbitals for i in chosen):
        raise ValueError("orbital id out of range")
    n = X.n
    rows = [0] * n
    for u in range(n):
        base = u * n
        for v in range(n):
            if u != v and part.ids[base + v] in chosen:
                rows[u] |= 1 << v
    if all(part.paired[i] in chosen for i in chosen):
        return Graph(n, rows)
    return Digraph(n, rows)


def is_generously_transitive(X: Graph) -> bool:
    """Transitive and every orbital self-paired."""
    group = automorphism_group(X)
    if not group.is_transitive():
        return False
    part = orbitals_of_group(group)
    return all(part.self_paired(i) for i in range(part.n_orbitals))


# -- shifts --------------------------------------------------------------------


def shifts(X: Graph, cap: int = SHIFT_GRAPH_CAP) -> list[Perm]:
    """All automorphisms mapping every vertex to one of its neighbors."""
    group = automorphism_group(X)
    elems = group.elements(cap=cap)
    out = [
        g
        for g in elems
        if all((X.adj[v] >> g[v]) & 1 for v in range(X.n))
    ]
    # shift sets are inverse-closed and closed under conjugation
    as_set = set(out)
    for s in out:
        assert perm_inv(s) in as_set
        for g in group.generators:
            assert perm_mul(g, perm_mul(s, perm_inv(g))) in as_set
    return out


def shift_graph(X: Graph, cap: int = SHIFT_GRAPH_CAP) -> Graph:
    """Cayley graph of Aut(X) whose connection set is the shifts of X.

    Vertices are the group elements in sorted order; raises CapacityError
    (reporting |Aut(X)|) when the group is larger than `cap`.
    """
    group = automorphism_group(X)
    elems = group.elements(cap=cap)
    index = {g: i for i, g in enumerate(elems)}
    shift_set = set(shifts(X, cap=cap))
    rows = [0] * len(elems)
    for g, i in index.items():
        for s in shift_set:
            j = index[perm_mul(s, g)]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
    return Graph(len(elems), rows, cap=max(len(elems), 1))
