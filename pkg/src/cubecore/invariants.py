"""Exact combinatorial invariants: cliques, independence, chromatic number.

Clique search is a bitset branch-and-bound with greedy-coloring upper
bounds.  The chromatic number brackets between max(clique, n/independence)
and a greedy upper bound, then settles each k exactly.  Everything is
deterministic; deadlines raise SearchTimeout (indeterminate), never a
wrong answer.
"""

from __future__ import annotations

import time
from typing import Optional

from .errors import SearchTimeout
from .graphs import Graph, VertexMap, bits_of, complement


def _check_deadline(deadline: float | None, state: list[int]) -> None:
    state[0] += 1
    if deadline is not None and state[0] % 256 == 0 and time.monotonic() > deadline:
        raise SearchTimeout("invariant search hit its deadline")


def max_clique(X: Graph, deadline: float | None = None) -> list[int]:
    """A maximum clique (sorted vertex list), exact."""
    n = X.n
    if n == 0:
        return []
    adj = X.adj
    # greedy seed: repeatedly take the highest-degree compatible vertex
    order = sorted(range(n), key=lambda v: (-adj[v].bit_count(), v))
    seed: list[int] = []
    cand = (1 << n) - 1
    for v in order:
        if (cand >> v) & 1:
            seed.append(v)
            cand &= adj[v]
    best = seed
    state = [0]

    def greedy_color_order(p: int) -> tuple[list[int], list[int]]:
        # sequential greedy color classes; bound of a vertex = its class index
        verts: list[int] = []
        bounds: list[int] = []
        color = 0
        rest = p
        while rest:
            color += 1
            avail = rest
            while avail:
                b = avail & -avail
                v = b.bit_length() - 1
                verts.append(v)
                bounds.append(color)
                rest ^= b
                avail = (avail ^ b) & ~adj[v]
        return verts, bounds

    def expand(r: list[int], p: int) -> None:
        nonlocal best
        _check_deadline(deadline, state)
        if not p:
            if len(r) > len(best):
                best = list(r)
            return
        verts, bounds = greedy_color_order(p)
        prefix = [0] * len(verts)
        acc = 0
        for i, v in enumerate(verts):
            prefix[i] = acc
            acc |= 1 << v
        for i in range(len(verts) - 1, -1, -1):
            if len(r) + bounds[i] <= len(best):
                return
            v = verts[i]
            r.append(v)
            expand(r, p & adj[v] & prefix[i])
            r.pop()

    expand([], (1 << n) - 1)
    return sorted(best)


def clique_number(X: Graph, deadline: float | None = None) -> int:
    return len(max_clique(X, deadline=deadline))


def has_clique(X: Graph, k: int, deadline: float | None = None) -> Optional[list[int]]:
    """A clique of size exactly k if one exists (early-exit search)."""
    if k <= 0:
        return []
    n = X.n
    adj = X.adj
    state = [0]
    found: list[int] | None = None

    def expand(r: list[int], p: int) -> bool:
        nonlocal found
        _check_deadline(deadline, state)
        if len(r) == k:
            found = sorted(r)
            return True
        if len(r) + p.bit_count() < k:
            return False
        m = p
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            r.append(v)
            if expand(r, p & adj[v] & m):
                return True
            r.pop()
            if len(r) + (m.bit_count()) < k:
                return False
        return False

    expand([], (1 << n) - 1)
    return found


def max_independent_set(X: Graph, deadline: float | None = None) -> list[int]:
    return max_clique(complement(X), deadline=deadline)


def independence_number(X: Graph, deadline: float | None = None) -> int:
    return len(max_independent_set(X, deadline=deadline))


# -- colorings ---------------------------------------------------------------


def greedy_coloring(X: Graph) -> list[int]:
    """DSATUR heuristic; deterministic tie-breaking."""
    n = X.n
    color = [-1] * n
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]
    degrees = X.degrees()
    for _ in range(n):
        u = max(
            (v for v in range(n) if color[v] < 0),
            key=lambda v: (len(neighbor_colors[v]), degrees[v], -v),
        )
        c = 0
        while c in neighbor_colors[u]:
            c += 1
        color[u] = c
        for w in bits_of(X.adj[u]):
            neighbor_colors[w].add(c)
    return color


def _linear_coloring(X: Graph, k: int) -> Optional[VertexMap]:
    """For word-labeled graphs: a coloring from a connection-set-avoiding
    subgroup of index k (exhaustive over subgroups; k must be a power of 2)."""
    if X.labels is None or k <= 0 or k & (k - 1):
        return None
    dim = X.label_dim
    want_rank = dim - k.bit_length() + 1
    if want_rank < 0:
        return None
    vol = X.vertex_of_label()
    zero = vol.get(0)
    if zero is None:
        return None
    forbidden = {X.labels[u] for u in bits_of(X.adj[zero])}
    # difference set must be label(u)^label(v) for edges; for Cayley-labeled
    # graphs that set is the connection set = labels of N(0).
    for u, v in X.edges():
        if (X.labels[u] ^ X.labels[v]) not in forbidden:
            return None

    found: list[int] | None = None

    def extend(basis: list[int], elements: set[int], start: int) -> bool:
        nonlocal found
        if len(basis) == want_rank:
            found = list(basis)
            return True
        for cand in range(start, 1 << dim):
            if cand in elements or cand in forbidden:
                continue
            new = {cand ^ h for h in elements}
            if new & forbidden:
                continue
            if extend(basis + [cand], elements | new, cand + 1):
                return True
        return False

    if not extend([], {0}, 1):
        return None
    from .gf2 import coset_canonical_bits, span_bits

    sub = span_bits(found, dim)
    reps: dict[int, int] = {}
    image = []
    for v in range(X.n):
        r = coset_canonical_bits(X.labels[v], sub)
        image.append(reps.setdefault(r, len(reps)))
    if len(reps) > k:
        return None
    return VertexMap(X.n, k, tuple(image))


def _balanced_cover_coloring(
    X: Graph, k: int, alpha: int, deadline: float | None
) -> Optional[VertexMap]:
    """Exact cover by independent sets of size alpha (when alpha*k == n).

    Exhaustive: a miss proves no k-coloring exists in the balanced regime.
    """
    n = X.n
    adj = X.adj
    state = [0]
    colors = [-1] * n

    def indep_sets(p: int, size: int, lowest: int):
        # independent sets of given size within mask p containing `lowest`
        def rec(cur: list[int], cand: int):
            _check_deadline(deadline, state)
            if len(cur) == size:
                yield list(cur)
                return
            need = size - len(cur)
            m = cand
            while m:
                if m.bit_count() < need:
                    return
                b = m & -m
                m ^= b
                v = b.bit_length() - 1
                cur.append(v)
                yield from rec(cur, m & ~adj[v])
                cur.pop()

        yield from rec([lowest], p & ~adj[lowest] & ~((1 << (lowest + 1)) - 1))

    def cover(p: int, cls: int) -> bool:
        if not p:
            return True
        lowest = (p & -p).bit_length() - 1
        for s in indep_sets(p, alpha, lowest):
            for v in s:
                colors[v] = cls
            mask = 0
            for v in s:
                mask |= 1 << v
            if cover(p & ~mask, cls + 1):
                return True
        return False

    if not cover((1 << n) - 1, 0):
        return None
    return VertexMap(n, k, tuple(colors))


def find_coloring(
    X: Graph, k: int, deadline: float | None = None
) -> Optional[VertexMap]:
    """A proper k-coloring as a map onto color indices, or None (exhaustive).

    Tries cheap certificates first (greedy, linear for labeled graphs), then
    a complete search: balanced exact cover when independence forces equal
    class sizes, otherwise a homomorphism search into the complete graph
    with a maximum clique pre-colored.
    """
    from .graphs import complete_graph
    from .hom import MODE_ANY, HomProblem, find_homomorphism

    n = X.n
    if k >= n:
        return VertexMap(n, max(k, 1), tuple(range(n))) if n else VertexMap(0, max(k, 1), ())
    quick = find_coloring_fast(X, k, deadline)
    if quick is not None:
        return quick
    clique = max_clique(X, deadline=deadline)
    if len(clique) > k:
        return None
    alpha = independence_number(X, deadline=deadline)
    if alpha * k < n:
        return None
    if alpha * k == n:
        return _balanced_cover_coloring(X, k, alpha, deadline)
    assignments = {v: i for i, v in enumerate(clique)}
    prob = HomProblem(X, complete_graph(k), MODE_ANY, assignments=assignments, deadline=deadline)
    vm = find_homomorphism(prob)
    return vm


def find_coloring_fast(
    X: Graph, k: int, deadline: float | None = None
) -> Optional[VertexMap]:
    """Cheap k-coloring attempts only (greedy / linear / balanced cover);
    None means "not settled", not "impossible"."""
    n = X.n
    if k >= n:
        return VertexMap(n, max(k, 1), tuple(range(n)))
    greedy = greedy_coloring(X)
    if max(greedy, default=-1) + 1 <= k:
        return VertexMap(n, k, tuple(greedy))
    lin = _linear_coloring(X, k)
    if lin is not None:
        return lin
    alpha = independence_number(X, deadline=deadline)
    if alpha * k == n:
        return _balanced_cover_coloring(X, k, alpha, deadline)
    return None


def chromatic_number(
    X: Graph, deadline: float | None = None, want_coloring: bool = False
):
    """Exact chromatic number (optionally with a witness coloring)."""
    n = X.n
    if n == 0:
        return (0, VertexMap(0, 1, ())) if want_coloring else 0
    if X.edge_count() == 0:
        vm = VertexMap(n, 1, (0,) * n)
        return (1, vm) if want_coloring else 1
    omega = clique_number(X, deadline=deadline)
    alpha = independence_number(X, deadline=deadline)
    lower = max(omega, -(-n // alpha))
    for k in range(lower, n + 1):
        vm = find_coloring(X, k, deadline=deadline)
        if vm is not None:
            return (k, vm) if want_coloring else k
    raise AssertionError("unreachable: n colors always suffice")


def clique_coclique_equality(X: Graph, deadline: float | None = None) -> bool:
    """alpha * omega == |V|; the caller must supply a vertex-transitive graph."""
    from .autos import is_vertex_transitive

    assert is_vertex_transitive(X), "clique-coclique equality needs vertex transitivity"
    return clique_number(X, deadline) * independence_number(X, deadline) == X.n
