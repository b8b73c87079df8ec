"""Bit-row graphs, graph6 I/O, Deza/SRG classification and children."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .feasibility import DezaParams

MAX_VERTICES = 64


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; bit ``w`` of ``rows[u]`` is set iff ``u ~ w``."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count must be in [1, {MAX_VERTICES}], got {self.n}")
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row {u} has bits beyond column {self.n - 1}")
            if row >> u & 1:
                raise ValueError(f"loop at vertex {u}")
            r = row
            while r:
                low = r & -r
                w = low.bit_length() - 1
                if not self.rows[w] >> u & 1:
                    raise ValueError(f"asymmetric pair ({u}, {w})")
                r ^= low

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, w in edges:
            if u == w:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << w
            rows[w] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, m: Union[np.ndarray, Sequence[Sequence[int]]]) -> "Graph":
        m = np.asarray(m)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        rows = []
        for u in range(n):
            row = 0
            for w in np.flatnonzero(m[u]):
                row |= 1 << int(w)
            rows.append(row)
        return cls(n, tuple(rows))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << u) for u in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    # -- queries ------------------------------------------------------------

    def has_edge(self, u: int, w: int) -> bool:
        return bool(self.rows[u] >> w & 1)

    def neighbours(self, u: int) -> list[int]:
        return bits(self.rows[u])

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in range(self.n) for w in bits(self.rows[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def matrix(self, dtype=np.int64) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=dtype)
        for u, row in enumerate(self.rows):
            for w in bits(row):
                m[u, w] = 1
        return m

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~r & ~(1 << u) for u, r in enumerate(self.rows)))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph in which old vertex ``u`` becomes ``perm[u]``."""
        rows = [0] * self.n
        for u, row in enumerate(self.rows):
            nr = 0
            for w in bits(row):
                nr |= 1 << perm[w]
            rows[perm[u]] = nr
        return Graph(self.n, tuple(rows))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {u: i for i, u in enumerate(vertices)}
        rows = []
        for u in vertices:
            nr = 0
            for w in bits(self.rows[u]):
                if w in index:
                    nr |= 1 << index[w]
            rows.append(nr)
        return Graph(len(vertices), tuple(rows))

    def to_graph6(self) -> str:
        return encode_graph6(self)

    @classmethod
    def from_graph6(cls, text: Union[str, bytes]) -> "Graph":
        return decode_graph6(text)

    def __repr__(self) -> str:
        return f"Graph({self.n}, {self.to_graph6()!r})"


def bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


# -- graph6 ----------------------------------------------------------------

_G6_HEADER = ">>graph6<<"


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise ValueError("graph too large for graph6")


def encode_graph6(g: Graph) -> str:
    """Standard graph6: upper triangle column by column, 6 bits per byte + 63."""
    out = bytearray(_encode_n(g.n))
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        row = g.rows[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def decode_graph6(text: Union[str, bytes]) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("ascii")
    s = text.strip()
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):]
    data = [ord(c) - 63 for c in s]
    if not data or any(not 0 <= x < 64 for x in data):
        raise ValueError(f"invalid graph6 string {text!r}")
    if data[0] == 63:
        if len(data) > 1 and data[1] == 63:
            raise ValueError("graph6 with n >= 258048 is not supported")
        n = data[1] << 12 | data[2] << 6 | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise ValueError(f"graph6 body has {len(body)} bytes, expected {need}")
    rows = [0] * n
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if body[pos // 6] >> (5 - pos % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            pos += 1
    return Graph(n, tuple(rows))


# -- common neighbours, classification --------------------------------------

def common_neighbours(g: Graph, u: int, w: int) -> int:
    if u == w:
        raise ValueError("common_neighbours needs two distinct vertices")
    if not (0 <= u < g.n and 0 <= w < g.n):
        raise ValueError(f"vertex out of range for n={g.n}")
    return (g.rows[u] & g.rows[w]).bit_count()


def common_neighbour_matrix(g: Graph) -> list[list[int]]:
    """Off-diagonal entries of M^2; the diagonal holds the degrees."""
    return [[(ru & rw).bit_count() for rw in g.rows] for ru in g.rows]


@dataclass(frozen=True)
class NotRegular:
    pass


@dataclass(frozen=True)
class NotDeza:
    pass


@dataclass(frozen=True)
class StronglyRegular:
    v: int
    k: int
    lam: int
    mu: int


@dataclass(frozen=True)
class Deza:
    params: DezaParams


Classification = Union[NotRegular, NotDeza, StronglyRegular, Deza]


def classify_regular_deza(g: Graph) -> Classification:
    """Sort ``g`` into not regular / not Deza / strongly regular / Deza.

    Complete and edgeless graphs count as strongly regular.  A graph with
    ``b == a`` (every pair has the same number of common neighbours) is
    strongly regular with ``lambda == mu``.
    """
    if g.n < 2:
        raise ValueError("classification needs at least two vertices")
    degs = g.degrees()
    k = degs[0]
    if any(d != k for d in degs):
        return NotRegular()
    on_edges: set[int] = set()
    off_edges: set[int] = set()
    for u in range(g.n):
        ru = g.rows[u]
        for w in range(u + 1, g.n):
            c = (ru & g.rows[w]).bit_count()
            (on_edges if ru >> w & 1 else off_edges).add(c)
    values = on_edges | off_edges
    if len(values) > 2:
        return NotDeza()
    if len(on_edges) <= 1 and len(off_edges) <= 1:
        lam = next(iter(on_edges), 0)
        mu = next(iter(off_edges), 0)
        return StronglyRegular(g.n, k, lam, mu)
    b, a = max(values), min(values)
    return Deza(DezaParams(g.n, k, b, a))


def is_strictly_deza(g: Graph) -> bool:
    c = classify_regular_deza(g)
    return isinstance(c, Deza) and diameter(g) == 2


# -- children ---------------------------------------------------------------

class DecompositionError(RuntimeError):
    """M^2 != aA + bB + kI; indicates a bug upstream."""


@dataclass(frozen=True)
class Children:
    graph_a: Graph
    graph_b: Graph


def children(g: Graph, p: DezaParams) -> Children:
    """Split the off-diagonal pairs by their common-neighbour count.

    ``graph_b`` joins pairs with ``b`` common neighbours, ``graph_a`` the
    pairs with ``a``; the identity ``M^2 = aA + bB + kI`` is verified before
    returning.
    """
    if p.a == p.b:
        raise ValueError("children are undefined when a == b")
    n = g.n
    rows_a = [0] * n
    rows_b = [0] * n
    for u in range(n):
        for w in range(u + 1, n):
            c = (g.rows[u] & g.rows[w]).bit_count()
            if c == p.b:
                rows_b[u] |= 1 << w
                rows_b[w] |= 1 << u
            else:
                rows_a[u] |= 1 << w
                rows_a[w] |= 1 << u
    ga, gb = Graph(n, tuple(rows_a)), Graph(n, tuple(rows_b))
    m = g.matrix()
    lhs = m @ m
    rhs = p.a * ga.matrix() + p.b * gb.matrix() + p.k * np.eye(n, dtype=np.int64)
    if not np.array_equal(lhs, rhs):
        raise DecompositionError(f"M^2 != aA + bB + kI for parameters {p}")
    return Children(ga, gb)


# -- distances --------------------------------------------------------------

def distances_from(g: Graph, s: int) -> list[int]:
    dist = [-1] * g.n
    dist[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in bits(g.rows[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distance_matrix(g: Graph) -> list[list[int]]:
    """All-pairs BFS distances, ``-1`` for unreachable pairs."""
    return [distances_from(g, s) for s in range(g.n)]


def eccentricity(g: Graph, s: int) -> Union[int, float]:
    """Eccentricity of ``s`` by bitset BFS; ``math.inf`` if some vertex is unreachable."""
    full = (1 << g.n) - 1
    seen = frontier = 1 << s
    depth = 0
    while seen != full:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= g.rows[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        if not frontier:
            return math.inf
        seen |= frontier
        depth += 1
    return depth


def diameter(g: Graph) -> Union[int, float]:
    """Largest eccentricity, or ``math.inf`` if ``g`` is disconnected."""
    best: Union[int, float] = 0
    for s in range(g.n):
        best = max(best, eccentricity(g, s))
        if best == math.inf:
            break
    return best
