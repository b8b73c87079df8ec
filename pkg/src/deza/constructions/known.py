"""Small named graphs used as construction inputs."""

from __future__ import annotations

from itertools import combinations

from ..graph import Graph, distance_matrix

# lines of the Fano plane: translates of the difference set {0, 1, 3} mod 7
FANO_LINES = tuple(tuple(sorted((i + d) % 7 for d in (0, 1, 3))) for i in range(7))


def _girth(g: Graph) -> float:
    """Length of a shortest cycle (BFS from every vertex)."""
    best = float("inf")
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for u in queue:
            for w in g.neighbours(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def _bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.neighbours(u):
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    return False
    return True


def heawood_graph() -> Graph:
    """Point-line incidence graph of the Fano plane (points 0..6, lines 7..13)."""
    g = Graph.from_edges(14, [(p, 7 + i) for i, line in enumerate(FANO_LINES) for p in line])
    if not (_bipartite(g) and set(g.degrees()) == {3} and _girth(g) == 6):
        raise AssertionError("embedded Fano plane data is corrupt")
    return g


def line_graph(g: Graph) -> Graph:
    edges = g.edges()
    return Graph.from_edges(len(edges), [(i, j) for i, j in combinations(range(len(edges)), 2)
                                         if set(edges[i]) & set(edges[j])])


def lattice(m: int, n: int) -> Graph:
    """``K_m x K_n`` (rook's graph on an ``m x n`` board); vertex ``(i, j)`` is ``i*n + j``."""
    return Graph.from_edges(m * n, [(u, w) for u, w in combinations(range(m * n), 2)
                                    if u // n == w // n or u % n == w % n])


def triangular(n: int) -> Graph:
    """``T(n)``: 2-subsets of an ``n``-set, adjacent when they meet."""
    pairs = list(combinations(range(n), 2))
    return Graph.from_edges(len(pairs), [(i, j) for i, j in combinations(range(len(pairs)), 2)
                                         if set(pairs[i]) & set(pairs[j])])


def petersen() -> Graph:
    return triangular(5).complement()


def paley(q: int) -> Graph:
    """Paley graph on a prime ``q = 1 (mod 4)``."""
    if q % 4 != 1 or any(q % p == 0 for p in range(2, int(q ** 0.5) + 1)):
        raise ValueError("Paley graphs here need a prime q = 1 (mod 4)")
    squares = {x * x % q for x in range(1, q)}
    return Graph.from_edges(q, [(x, y) for x, y in combinations(range(q), 2) if (x - y) % q in squares])


def shrikhande() -> Graph:
    """Cayley graph of Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1)."""
    conn = {(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)}
    idx = lambda x, y: 4 * (x % 4) + (y % 4)  # noqa: E731
    return Graph.from_edges(16, [(idx(x, y), idx(x + dx, y + dy))
                                 for x in range(4) for y in range(4) for dx, dy in conn
                                 if idx(x, y) < idx(x + dx, y + dy)])


def distance_graph(g: Graph, distances: set[int]) -> Graph:
    """Pairs of ``g`` whose distance lies in ``distances``."""
    d = distance_matrix(g)
    return Graph.from_edges(g.n, [(u, w) for u, w in combinations(range(g.n), 2)
                                  if d[u][w] in distances])
