"""Immutable simple graphs with bitset adjacency rows, plus graph6 interchange.

Vertices are 0..n-1; row v is an int whose bit u is set iff u ~ v.  Graphs
may carry an optional word label per vertex (the Cayley-side group element,
little-endian bit packing as in :mod:`cubecore.gf2`).  Instances are
immutable after construction and safe to share across threads.

The default hard vertex cap is 4096; override per call or via VERTEX_CAP.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, Graph6ParseError

VERTEX_CAP = 4096


class Graph:
    """Immutable simple graph: symmetric bitset adjacency, no loops."""

    __slots__ = ("n", "adj", "labels", "label_dim")

    def __init__(
        self,
        n: int,
        adj: Sequence[int],
        labels: Sequence[int] | None = None,
        label_dim: int | None = None,
        cap: int = 0,
    ):
        cap = cap or VERTEX_CAP
        if n > cap:
            raise CapacityError(f"{n} vertices exceeds cap {cap}")
        if len(adj) != n:
            raise ValueError("need one adjacency row per vertex")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"adjacency row {v} has bits beyond vertex range")
            if (row >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
        for v, row in enumerate(adj):
            m = row
            while m:
                b = m & -m
                u = b.bit_length() - 1
                if not (adj[u] >> v) & 1:
                    raise ValueError(f"adjacency not symmetric at ({v},{u})")
                m ^= b
        self.n = n
        self.adj = tuple(adj)
        if labels is not None:
            if label_dim is None:
                raise ValueError("labels need a label_dim")
            if len(labels) != n:
                raise ValueError("need one label per vertex")
            if len(set(labels)) != n:
                raise ValueError("labels must be distinct")
            if any(not 0 <= x < (1 << label_dim) for x in labels):
                raise ValueError("label out of range for label_dim")
            self.labels = tuple(labels)
            self.label_dim = label_dim
        else:
            self.labels = None
            self.label_dim = None

    # -- basic accessors ---------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def neighbors(self, v: int) -> list[int]:
        return bits_of(self.adj[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            m = self.adj[v] >> (v + 1)
            while m:
                b = m & -m
                yield (v, v + b.bit_length())
                m ^= b

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def without_labels(self) -> "Graph":
        if self.labels is None:
            return self
        return Graph(self.n, self.adj)

    def vertex_of_label(self) -> dict[int, int]:
        if self.labels is None:
            raise ValueError("graph has no labels")
        return {w: v for v, w in enumerate(self.labels)}

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.adj == other.adj
            and self.labels == other.labels
            and self.label_dim == other.label_dim
        )

    def __repr__(self) -> str:
        tag = ", labeled" if self.labels is not None else ""
        return f"Graph(n={self.n}, edges={self.edge_count()}{tag})"


class Digraph:
    """Immutable loop-free digraph with bitset out-adjacency rows."""

    __slots__ = ("n", "out_adj")

    def __init__(self, n: int, out_adj: Sequence[int], cap: int = 0):
        cap = cap or VERTEX_CAP
        if n > cap:
            raise CapacityError(f"{n} vertices exceeds cap {cap}")
        if len(out_adj) != n:
            raise ValueError("need one out-row per vertex")
        full = (1 << n) - 1
        for v, row in enumerate(out_adj):
            if row & ~full:
                raise ValueError(f"row {v} has bits beyond vertex range")
            if (row >> v) & 1:
                raise ValueError(f"loop at vertex {v}")
        self.n = n
        self.out_adj = tuple(out_adj)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for u in bits_of(self.out_adj[v]):
                yield (v, u)

    def is_symmetric(self) -> bool:
        return all(
            (self.out_adj[u] >> v) & 1
            for v in range(self.n)
            for u in bits_of(self.out_adj[v])
        )

    def to_graph(self) -> Graph:
        if not self.is_symmetric():
            raise ValueError("digraph is not symmetric")
        return Graph(self.n, self.out_adj)


@dataclass(frozen=True, slots=True)
class VertexMap:
    """A function V(X) -> V(Y) on vertex indices."""

    domain_size: int
    codomain_size: int
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.domain_size:
            raise ValueError("need one image per domain vertex")
        if any(not 0 <= v < self.codomain_size for v in self.image):
            raise ValueError("image vertex out of range")

    @classmethod
    def identity(cls, n: int) -> "VertexMap":
        return cls(n, n, tuple(range(n)))

    def apply(self, v: int) -> int:
        return self.image[v]

    def compose(self, first: "VertexMap") -> "VertexMap":
        """self o first (apply `first`, then self)."""
        if first.codomain_size != self.domain_size:
            raise ValueError("sizes do not compose")
        return VertexMap(
            first.domain_size,
            self.codomain_size,
            tuple(self.image[v] for v in first.image),
        )

    def vertex_image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.image)))

    def is_homomorphism(self, X: Graph, Y: Graph) -> bool:
        if self.domain_size != X.n or self.codomain_size != Y.n:
            return False
        return all(Y.has_edge(self.image[u], self.image[v]) for u, v in X.edges())


def bits_of(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


# -- constructors ------------------------------------------------------------


def from_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Sequence[int] | None = None,
    label_dim: int | None = None,
) -> Graph:
    adj = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, adj, labels, label_dim)


def empty_graph(n: int) -> Graph:
    return Graph(n, [0] * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, [full ^ (1 << v) for v in range(n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> Graph:
    return from_edges(n, [(v, v + 1) for v in range(n - 1)])


def relabel(X: Graph, perm: Sequence[int]) -> Graph:
    """Graph with vertex v renamed to perm[v]; labels follow their vertices."""
    adj = [0] * X.n
    for v in range(X.n):
        row = 0
        for u in bits_of(X.adj[v]):
            row |= 1 << perm[u]
        adj[perm[v]] = row
    labels = None
    if X.labels is not None:
        lab = [0] * X.n
        for v in range(X.n):
            lab[perm[v]] = X.labels[v]
        labels = lab
    return Graph(X.n, adj, labels, X.label_dim)


# -- structural operations ----------------------------------------------------


def complement(X: Graph) -> Graph:
    full = (1 << X.n) - 1
    return Graph(
        X.n,
        [full ^ row ^ (1 << v) for v, row in enumerate(X.adj)],
        X.labels,
        X.label_dim,
    )


def cartesian_product(X: Graph, Y: Graph, cap: int = 0) -> Graph:
    """Cartesian product; vertex (i, j) gets index i*|V(Y)| + j.

    If both factors are labeled the product is labeled by concatenation
    (X bits in the low positions).
    """
    n = X.n * Y.n
    cap = cap or VERTEX_CAP
    if n > cap:
        raise CapacityError(f"product has {n} vertices, cap {cap}")
    adj = [0] * n
    for i in range(X.n):
        for j in range(Y.n):
            v = i * Y.n + j
            row = 0
            for j2 in bits_of(Y.adj[j]):
                row |= 1 << (i * Y.n + j2)
            for i2 in bits_of(X.adj[i]):
                row |= 1 << (i2 * Y.n + j)
            adj[v] = row
    labels = None
    label_dim = None
    if X.labels is not None and Y.labels is not None:
        label_dim = X.label_dim + Y.label_dim
        labels = [0] * n
        for i in range(X.n):
            for j in range(Y.n):
                labels[i * Y.n + j] = X.labels[i] | (Y.labels[j] << X.label_dim)
    return Graph(n, adj, labels, label_dim, cap=cap)


def distances(X: Graph) -> list[list[int | float]]:
    """All-pairs BFS hop counts; math.inf across components."""
    out = []
    for s in range(X.n):
        dist: list[int | float] = [inf] * X.n
        dist[s] = 0
        frontier = 1 << s
        seen = frontier
        d = 0
        while frontier:
            nxt = 0
            for v in bits_of(frontier):
                nxt |= X.adj[v]
            nxt &= ~seen
            d += 1
            for v in bits_of(nxt):
                dist[v] = d
            seen |= nxt
            frontier = nxt
        out.append(dist)
    return out


def odd_girth(X: Graph) -> int | float:
    """Length of a shortest odd cycle; math.inf when bipartite."""
    best: int | float = inf
    for s in range(X.n):
        dist = _bfs(X, s)
        for u, v in X.edges():
            if dist[u] is not None and dist[u] == dist[v]:
                best = min(best, 2 * dist[u] + 1)
    return best


def _bfs(X: Graph, s: int) -> list[int | None]:
    dist: list[int | None] = [None] * X.n
    dist[s] = 0
    frontier = 1 << s
    seen = frontier
    d = 0
    while frontier:
        nxt = 0
        for v in bits_of(frontier):
            nxt |= X.adj[v]
        nxt &= ~seen
        d += 1
        for v in bits_of(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def connected_components(X: Graph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    seen = 0
    comps = []
    for s in range(X.n):
        if (seen >> s) & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            nxt = 0
            for v in bits_of(frontier):
                nxt |= X.adj[v]
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        comps.append(bits_of(comp))
    return comps


def is_connected(X: Graph) -> bool:
    return len(connected_components(X)) <= 1


def induced_subgraph(X: Graph, vertices: Iterable[int]) -> Graph:
    """Induced subgraph; new index i is the i-th smallest chosen vertex."""
    verts = sorted(set(vertices))
    if verts and not 0 <= verts[0] <= verts[-1] < X.n:
        raise ValueError("vertex index out of range")
    pos = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for i, v in enumerate(verts):
        row = 0
        for u in bits_of(X.adj[v]):
            j = pos.get(u)
            if j is not None:
                row |= 1 << j
        adj[i] = row
    labels = None
    if X.labels is not None:
        labels = [X.labels[v] for v in verts]
    return Graph(len(verts), adj, labels, X.label_dim)


def is_bipartite(X: Graph) -> bool:
    return odd_girth(X) == inf


def bipartite_double_cover(X: Graph) -> Graph:
    """Tensor product with K2: (u,0) ~ (v,1) iff u ~ v; (v,i) has index v + i*n."""
    n = X.n
    adj = [0] * (2 * n)
    for v in range(n):
        adj[v] = X.adj[v] << n
        adj[v + n] = X.adj[v]
    return Graph(2 * n, adj)


# -- graph6 / sparse6 ---------------------------------------------------------


def _encode_size(n: int) -> bytes:
    if n < 0:
        raise ValueError("negative size")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> (6 * k)) & 63) + 63 for k in (5, 4, 3, 2, 1, 0)])
    raise ValueError("size too large for graph6")


def _decode_size(data: bytes, offset: int) -> tuple[int, int]:
    if offset >= len(data):
        raise Graph6ParseError("missing size", offset)
    c = data[offset]
    if c == 126:
        if offset + 1 < len(data) and data[offset + 1] == 126:
            chunk = data[offset + 2 : offset + 8]
            if len(chunk) != 6:
                raise Graph6ParseError("truncated 8-byte size", offset)
            n = 0
            for b in chunk:
                if not 63 <= b <= 126:
                    raise Graph6ParseError(f"bad size byte {b}", offset)
                n = (n << 6) | (b - 63)
            return n, offset + 8
        chunk = data[offset + 1 : offset + 4]
        if len(chunk) != 3:
            raise Graph6ParseError("truncated 4-byte size", offset)
        n = 0
        for b in chunk:
            if not 63 <= b <= 126:
                raise Graph6ParseError(f"bad size byte {b}", offset)
            n = (n << 6) | (b - 63)
        return n, offset + 4
    if not 63 <= c <= 126:
        raise Graph6ParseError(f"bad size byte {c}", offset)
    return c - 63, offset + 1


def to_graph6(X: Graph) -> str:
    """Standard graph6 encoding (labels are not part of the format)."""
    out = bytearray(_encode_size(X.n))
    bit_acc = 0
    bit_len = 0
    for v in range(1, X.n):
        for u in range(v):
            bit_acc = (bit_acc << 1) | ((X.adj[v] >> u) & 1)
            bit_len += 1
            if bit_len == 6:
                out.append(bit_acc + 63)
                bit_acc = 0
                bit_len = 0
    if bit_len:
        out.append((bit_acc << (6 - bit_len)) + 63)
    return out.decode("ascii")


def from_graph6(text: str, cap: int = 0) -> Graph:
    """Parse one graph6 line (optional >>graph6<< header)."""
    data = text.strip().encode("ascii", errors="replace")
    if data.startswith(b">>graph6<<"):
        data = data[10:]
    if not data:
        raise Graph6ParseError("empty input", 0)
    n, offset = _decode_size(data, 0)
    cap = cap or VERTEX_CAP
    if n > cap:
        raise CapacityError(f"{n} vertices exceeds cap {cap}")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[offset:]
    if len(body) != nbytes:
        raise Graph6ParseError(
            f"expected {nbytes} adjacency bytes, got {len(body)}", offset
        )
    adj = [0] * n
    idx = 0
    for i, b in enumerate(body):
        if not 63 <= b <= 126:
            raise Graph6ParseError(f"bad byte {b}", offset + i)
        bits = b - 63
        for k in range(5, -1, -1):
            if idx >= nbits:
                if (bits >> k) & 1:
                    raise Graph6ParseError("nonzero padding", offset + i)
                continue
            if (bits >> k) & 1:
                u, v = _pair_of_index(idx)
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            idx += 1
    return Graph(n, adj, cap=cap)


def _pair_of_index(idx: int) -> tuple[int, int]:
    # column-major upper triangle: (0,1), (0,2), (1,2), (0,3), ...
    v = 1
    while v * (v - 1) // 2 <= idx:
        v += 1
    v -= 1
    return idx - v * (v - 1) // 2, v


def from_sparse6(text: str, cap: int = 0) -> Graph:
    """Parse one sparse6 line (':' prefix, optional >>sparse6<< header)."""
    data = text.strip().encode("ascii", errors="replace")
    if data.startswith(b">>sparse6<<"):
        data = data[11:]
    if not data.startswith(b":"):
        raise Graph6ParseError("sparse6 must start with ':'", 0)
    n, offset = _decode_size(data, 1)
    cap = cap or VERTEX_CAP
    if n > cap:
        raise CapacityError(f"{n} vertices exceeds cap {cap}")
    k = max(1, (n - 1).bit_length())
    bits = []
    for i, b in enumerate(data[offset:]):
        if not 63 <= b <= 126:
            raise Graph6ParseError(f"bad byte {b}", offset + i)
        val = b - 63
        bits.extend((val >> j) & 1 for j in range(5, -1, -1))
    adj = [0] * n
    v = 0
    pos = 0
    while pos + 1 + k <= len(bits):
        b = bits[pos]
        x = 0
        for j in range(k):
            x = (x << 1) | bits[pos + 1 + j]
        pos += 1 + k
        if b:
            v += 1
        if x >= n or v >= n:
            break
        if x > v:
            v = x
        else:
            adj[x] |= 1 << v
            adj[v] |= 1 << x
    return Graph(n, adj, cap=cap)


def parse_graph_line(text: str, cap: int = 0) -> Graph:
    """Dispatch on format: sparse6 lines start with ':'."""
    stripped = text.strip()
    if stripped.startswith(":") or stripped.startswith(">>sparse6<<"):
        return from_sparse6(stripped, cap=cap)
    return from_graph6(stripped, cap=cap)
