"""Homomorphism search and everything built on it: cores, retractions,
hom-idempotence, covering-map verification, coset fibres, induced embeddings.

The searcher is a deterministic backtracker over bitset domains with AC-3
arc consistency.  Variable order: smallest domain first, ties by larger
source degree then smaller index; values ascending.  Timeouts raise
SearchTimeout, which callers surface as an indeterminate result, distinct
from a completed "no homomorphism" search.

Each search owns its mutable state; graphs are shared read-only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import CapacityError, SearchTimeout
from .gf2 import Subgroup, span_bits
from .graphs import (
    Graph,
    VertexMap,
    bits_of,
    cartesian_product,
    distances,
    induced_subgraph,
)

MODE_ANY = "any"
MODE_INJECTIVE = "injective"
MODE_INDUCED = "induced"


def deadline_in(ms: float | None) -> float | None:
    """Absolute monotonic deadline `ms` milliseconds from now."""
    return None if ms is None else time.monotonic() + ms / 1000.0


@dataclass
class HomProblem:
    """A homomorphism search instance.

    mode: "any" (adjacency-preserving), "injective", or "induced"
    (injective and faithful: the image is an induced copy of the source).
    `forbidden_targets` removes target vertices from every domain;
    `assignments` pins chosen source vertices (partial-map extension).
    """

    source: Graph
    target: Graph
    mode: str = MODE_ANY
    forbidden_targets: tuple[int, ...] = ()
    assignments: dict[int, int] = field(default_factory=dict)
    deadline: float | None = None

    @classmethod
    def proper_endomorphism(cls, X: Graph, omit_vertex: int, deadline=None):
        """Endomorphism of X whose image avoids `omit_vertex`."""
        return cls(X, X, MODE_ANY, (omit_vertex,), deadline=deadline)


class _Searcher:
    def __init__(self, prob: HomProblem):
        src, tgt = prob.source, prob.target
        self.sn = src.n
        self.tn = tgt.n
        self.mode = prob.mode
        self.deadline = prob.deadline
        self.tadj = tgt.adj
        full = (1 << self.tn) - 1
        base = full
        for v in prob.forbidden_targets:
            base &= ~(1 << v)
        self.doms = [base] * self.sn
        self.s_neigh = [bits_of(src.adj[u]) for u in range(self.sn)]
        self.sdeg = [len(x) for x in self.s_neigh]
        if self.mode == MODE_INDUCED:
            self.tanti = [(~row) & full & ~(1 << v) for v, row in enumerate(tgt.adj)]
            self.s_non = [
                [v for v in range(self.sn) if v != u and not src.has_edge(u, v)]
                for u in range(self.sn)
            ]
        else:
            self.tanti = None
            self.s_non = None
        self.assigned = [False] * self.sn
        self.trail: list[tuple[int, int]] = []
        self.ticks = 0
        for u, t in prob.assignments.items():
            if not 0 <= u < self.sn or not 0 <= t < self.tn:
                raise ValueError("pre-assignment out of range")
            self.doms[u] = self.doms[u] & (1 << t)

    # -- domain plumbing ----------------------------------------------------

    def _set_dom(self, u: int, value: int) -> None:
        self.trail.append((u, self.doms[u]))
        self.doms[u] = value

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            u, old = self.trail.pop()
            self.doms[u] = old

    def _tick(self) -> None:
        self.ticks += 1
        if self.deadline is not None and self.ticks % 128 == 0:
            if time.monotonic() > self.deadline:
                raise SearchTimeout("homomorphism search hit its deadline")

    # -- propagation ---------------------------------------------------------

    def _revise(self, w: int, against: int, rel) -> bool:
        """Prune dom[w] against dom[against] through relation rows `rel`."""
        dom_w = self.doms[w]
        dom_a = self.doms[against]
        new = 0
        m = dom_w
        while m:
            b = m & -m
            if rel[b.bit_length() - 1] & dom_a:
                new |= b
            m ^= b
        if new != dom_w:
            self._set_dom(w, new)
            return True
        return False

    def _propagate(self, seeds: Iterable[int]) -> bool:
        queue = list(seeds)
        in_queue = set(queue)
        while queue:
            self._tick()
            u = queue.pop()
            in_queue.discard(u)
            if not self.doms[u]:
                return False
            for w in self.s_neigh[u]:
                if self._revise(w, u, self.tadj):
                    if not self.doms[w]:
                        return False
                    if w not in in_queue:
                        queue.append(w)
                        in_queue.add(w)
            if self.mode == MODE_INDUCED:
                for w in self.s_non[u]:
                    if self._revise(w, u, self.tanti):
                        if not self.doms[w]:
                            return False
                        if w not in in_queue:
                            queue.append(w)
                            in_queue.add(w)
        return True

    # -- search ---------------------------------------------------------------

    def _pick(self) -> int | None:
        best = None
        best_key = None
        for u in range(self.sn):
            if self.assigned[u]:
                continue
            key = ((self.doms[u]).bit_count(), -self.sdeg[u], u)
            if best_key is None or key < best_key:
                best, best_key = u, key
        return best

    def _injective_ok(self) -> bool:
        union = 0
        count = 0
        for u in range(self.sn):
            if not self.assigned[u]:
                union |= self.doms[u]
                count += 1
        return union.bit_count() >= count

    def run(self) -> Optional[VertexMap]:
        if not self._propagate(range(self.sn)):
            return None
        result = self._solve()
        if result is None:
            return None
        vm = VertexMap(self.sn, self.tn, tuple(result))
        return vm

    def _solve(self) -> Optional[list[int]]:
        # iterative backtracking: frame = [var, untried-value mask, trail mark]
        u = self._pick()
        if u is None:
            return [self.doms[v].bit_length() - 1 for v in range(self.sn)]
        frames: list[list] = [[u, self.doms[u], None]]
        while frames:
            frame = frames[-1]
            u = frame[0]
            if frame[2] is not None:
                self.assigned[u] = False
                self._undo(frame[2])
                frame[2] = None
            if not frame[1]:
                frames.pop()
                continue
            b = frame[1] & -frame[1]
            frame[1] ^= b
            frame[2] = len(self.trail)
            self.assigned[u] = True
            self._set_dom(u, b)
            ok = True
            if self.mode in (MODE_INJECTIVE, MODE_INDUCED):
                for w in range(self.sn):
                    if w != u and not self.assigned[w] and self.doms[w] & b:
                        self._set_dom(w, self.doms[w] & ~b)
                        if not self.doms[w]:
                            ok = False
                            break
                ok = ok and self._injective_ok()
            if ok and self._propagate([u]):
                v = self._pick()
                if v is None:
                    return [self.doms[x].bit_length() - 1 for x in range(self.sn)]
                frames.append([v, self.doms[v], None])
        return None


def find_homomorphism(prob: HomProblem) -> Optional[VertexMap]:
    """Solve a HomProblem; None certifies an exhausted search.

    Raises SearchTimeout when the problem's deadline passes (indeterminate).
    """
    vm = _Searcher(prob).run()
    if vm is not None:
        assert _respects_mode(vm, prob)
    return vm


def _respects_mode(vm: VertexMap, prob: HomProblem) -> bool:
    X, Y = prob.source, prob.target
    if not vm.is_homomorphism(X, Y):
        return False
    forbidden = set(prob.forbidden_targets)
    if any(t in forbidden for t in vm.image):
        return False
    for u, t in prob.assignments.items():
        if vm.image[u] != t:
            return False
    if prob.mode in (MODE_INJECTIVE, MODE_INDUCED):
        if len(set(vm.image)) != X.n:
            return False
    if prob.mode == MODE_INDUCED:
        for u in range(X.n):
            for v in range(u + 1, X.n):
                if not X.has_edge(u, v) and Y.has_edge(vm.image[u], vm.image[v]):
                    return False
    return True


# -- cores ---------------------------------------------------------------------


@dataclass(frozen=True)
class CoreResult:
    """Core of a graph with an explicit idempotent retraction.

    `core_vertices` are host indices (sorted); `core` is the induced
    subgraph on them (labels preserved).  `chain` is a tuple of proper
    endomorphisms of the host whose left-to-right composition equals the
    retraction (binary-power factorization of the reduction map), empty
    when the host is already a core.
    """

    core: Graph
    core_vertices: tuple[int, ...]
    retraction: VertexMap
    chain: tuple[VertexMap, ...]


def _compose_images(outer: list[int], inner: list[int]) -> list[int]:
    return [outer[x] for x in inner]


def _map_power(image: list[int], e: int) -> list[int]:
    """image^e under composition (e >= 1)."""
    result = None
    base = image
    while e:
        if e & 1:
            result = base if result is None else _compose_images(base, result)
        base = _compose_images(base, base)
        e >>= 1
    return result


def _orbit_representatives(X: Graph) -> list[int]:
    from .autos import automorphism_group

    return [orb[0] for orb in automorphism_group(X).orbits()]


def _retraction_from_reduction(X: Graph, psi: list[int], W: list[int]) -> CoreResult:
    """Turn a reduction map psi (image exactly W) into an idempotent retraction."""
    from math import lcm

    ident = list(range(X.n))
    if psi == ident:
        return CoreResult(
            induced_subgraph(X, W), tuple(W), VertexMap.identity(X.n), ()
        )
    # order of psi restricted to W (a permutation of W)
    seen = set()
    order = 1
    for start in W:
        if start in seen:
            continue
        length = 0
        x = start
        while x not in seen:
            seen.add(x)
            x = psi[x]
            length += 1
        order = lcm(order, length)
    rho = _map_power(psi, order)
    chain = []
    e = order
    power = psi
    while e:
        if e & 1:
            chain.append(VertexMap(X.n, X.n, tuple(power)))
        power = _compose_images(power, power)
        e >>= 1
    retraction = VertexMap(X.n, X.n, tuple(rho))
    assert all(rho[x] == x for x in W)
    return CoreResult(induced_subgraph(X, W), tuple(W), retraction, tuple(chain))


def _try_complete_core(X: Graph, deadline: float | None) -> CoreResult | None:
    """Detect a complete core: clique number many colors suffice.

    Cheap coloring routes only (greedy, linear for labeled graphs, balanced
    exact cover); returns None when they do not settle it.
    """
    from .invariants import find_coloring_fast, max_clique

    clique = max_clique(X, deadline=deadline)
    k = len(clique)
    if k == X.n:
        return CoreResult(
            induced_subgraph(X, range(X.n)),
            tuple(range(X.n)),
            VertexMap.identity(X.n),
            (),
        )
    coloring = find_coloring_fast(X, k, deadline=deadline)
    if coloring is None:
        return None
    anchor = [-1] * k
    for cv in clique:
        anchor[coloring.image[cv]] = cv
    assert all(a >= 0 for a in anchor)
    rho = [anchor[coloring.image[x]] for x in range(X.n)]
    W = sorted(clique)
    return _retraction_from_reduction(X, rho, W)


def compute_core(X: Graph, deadline: float | None = None) -> CoreResult:
    """Core with an explicit retraction; exhaustive proper-endomorphism search.

    A complete-core fast path (clique number = chromatic number certified by
    a cheap coloring) handles clique-cored hosts without any endomorphism
    search; otherwise proper endomorphisms are searched with the omitted
    vertex ranging over orbit representatives of the current image.
    """
    if X.n == 0:
        return CoreResult(X, (), VertexMap(0, 0, ()), ())
    fast = _try_complete_core(X, deadline)
    if fast is not None:
        return fast
    psi = list(range(X.n))
    W = list(range(X.n))
    cur = X
    while True:
        pos = {w: i for i, w in enumerate(W)}
        step = None
        for v_local in _orbit_representatives(cur):
            prob = HomProblem.proper_endomorphism(cur, v_local, deadline=deadline)
            vm = find_homomorphism(prob)
            if vm is not None:
                step = vm
                break
        if step is None:
            break
        psi = [W[step.image[pos[psi[x]]]] for x in range(X.n)]
        W = sorted({W[i] for i in step.vertex_image()})
        cur = induced_subgraph(X, W)
    return _retraction_from_reduction(X, psi, W)


def is_core(X: Graph, deadline: float | None = None) -> bool:
    """No proper endomorphism exists (exhaustive search per orbit)."""
    if X.n <= 1:
        return True
    if all(d == X.n - 1 for d in X.degrees()):
        return True  # complete graphs
    for v in _orbit_representatives(X):
        prob = HomProblem.proper_endomorphism(X, v, deadline=deadline)
        if find_homomorphism(prob) is not None:
            return False
    return True


# -- hom-idempotence -------------------------------------------------------------


def is_hom_idempotent(
    X: Graph, deadline: float | None = None
) -> tuple[bool, Optional[VertexMap]]:
    """Does the Cartesian square map back to X?  Returns (answer, witness map).

    Labeled graphs take the group-addition shortcut (g, h) -> g + h, which
    is verified explicitly; the witness domain indexes square vertices as
    i * n + j.
    """
    n = X.n
    if X.labels is not None:
        vol = X.vertex_of_label()
        image = []
        for i in range(n):
            for j in range(n):
                image.append(vol[X.labels[i] ^ X.labels[j]])
        vm = VertexMap(n * n, n, tuple(image))
        assert _is_square_hom(X, vm)
        return True, vm
    square = cartesian_product(X, X)
    prob = HomProblem(square, X, MODE_ANY, deadline=deadline)
    vm = find_homomorphism(prob)
    return (vm is not None), vm


def _is_square_hom(X: Graph, vm: VertexMap) -> bool:
    n = X.n
    for i in range(n):
        for j in range(n):
            a = vm.image[i * n + j]
            for i2 in bits_of(X.adj[i]):
                if not X.has_edge(a, vm.image[i2 * n + j]):
                    return False
            for j2 in bits_of(X.adj[j]):
                if not X.has_edge(a, vm.image[i * n + j2]):
                    return False
    return True


def core_equivalent_to_shift_graph(X: Graph, deadline: float | None = None) -> bool:
    """For a core X: is X homomorphically equivalent to its shift graph?

    Decided by searching for an induced embedding of X into the shift
    graph; when the automorphism group exceeds the shift-graph cap this
    falls back to the Cartesian-square test (an equivalent criterion).
    """
    from .autos import shift_graph

    try:
        sh = shift_graph(X)
    except CapacityError:
        ok, _ = is_hom_idempotent(X, deadline=deadline)
        return ok
    return induced_subgraph_search(X, sh, deadline=deadline) is not None


# -- covering maps and fibres ------------------------------------------------------


def covering_violation(phi: VertexMap, X: Graph, Y: Graph) -> str | None:
    """None when phi is a covering map X -> Y, else a description."""
    if phi.domain_size != X.n or phi.codomain_size != Y.n:
        return "size mismatch"
    for u, v in X.edges():
        if not Y.has_edge(phi.image[u], phi.image[v]):
            return f"not a homomorphism at edge ({u},{v})"
    if len(set(phi.image)) != Y.n:
        missing = set(range(Y.n)) - set(phi.image)
        return f"not surjective (vertex {min(missing)} uncovered)"
    for u in range(X.n):
        seen = 0
        for w in bits_of(X.adj[u]):
            bit = 1 << phi.image[w]
            if seen & bit:
                return f"not locally injective at vertex {u}"
            seen |= bit
        if seen != Y.adj[phi.image[u]]:
            return f"neighborhood of {u} does not cover N({phi.image[u]})"
    return None


def verify_covering_map(phi: VertexMap, X: Graph, Y: Graph) -> bool:
    """Surjective and locally bijective homomorphism check."""
    return covering_violation(phi, X, Y) is None


@dataclass(frozen=True)
class FibreCosetResult:
    """Outcome of the coset-fibre analysis of a surjective map.

    `subgroup` is set when every fibre is a coset of one subgroup.
    `coset_fibres` counts fibres that are a coset of *some* subgroup
    (individually); `witness_target` names a fibre breaking the common
    subgroup when there is no common one.
    """

    subgroup: Optional[Subgroup]
    fibre_count: int
    coset_fibres: int
    witness_target: Optional[int]


def fibres_are_cosets(phi: VertexMap, Y: Graph) -> FibreCosetResult:
    """Test whether the fibres of phi are the cosets of one subgroup.

    Y is the (labeled) source graph; phi maps its vertices onto some target
    vertex set.  The candidate subgroup is spanned by the in-fibre label
    differences of the fibre of the smallest target index.
    """
    if Y.labels is None:
        raise ValueError("source graph must carry word labels")
    if phi.domain_size != Y.n:
        raise ValueError("map does not match the source graph")
    dim = Y.label_dim
    fibres: dict[int, list[int]] = {}
    for v in range(Y.n):
        fibres.setdefault(phi.image[v], []).append(Y.labels[v])
    coset_fibres = 0
    for labs in fibres.values():
        h = span_bits([x ^ labs[0] for x in labs], dim)
        if h.size == len(labs):
            coset_fibres += 1
    first = fibres[min(fibres)]
    common = span_bits([x ^ first[0] for x in first], dim)
    witness = None
    for t in sorted(fibres):
        labs = fibres[t]
        if len(labs) != common.size or not all(
            common.contains_bits(x ^ labs[0]) for x in labs
        ):
            witness = t
            break
    if witness is None:
        return FibreCosetResult(common, len(fibres), coset_fibres, None)
    return FibreCosetResult(None, len(fibres), coset_fibres, witness)


# -- embeddings and hulls -----------------------------------------------------------


def induced_subgraph_search(
    pattern: Graph, host: Graph, deadline: float | None = None
) -> Optional[VertexMap]:
    """Injective faithful embedding: image induces a copy of the pattern."""
    prob = HomProblem(pattern, host, MODE_INDUCED, deadline=deadline)
    return find_homomorphism(prob)


def hull_hom_test(X: Graph, Y: Graph, deadline: float | None = None) -> bool:
    """Does the cubelike hull of Y map into X?

    Raises CapacityError when the hull of Y is too large to build and
    SearchTimeout when the search is cut off (both indeterminate).
    """
    from .cayley import cubelike_hull

    hull, _ = cubelike_hull(Y)
    prob = HomProblem(hull, X, MODE_ANY, deadline=deadline)
    return find_homomorphism(prob) is not None
