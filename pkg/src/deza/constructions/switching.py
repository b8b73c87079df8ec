"""Deza graphs from strongly regular and Deza graphs by permuting rows of the
adjacency matrix, by adding a permutation matrix, and by lexicographic
products.

Every constructor validates its output: either a :class:`Certified` graph
with the parameters it actually has, or a :class:`Rejected` with a reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..canon import canonical_form, seidel_automorphisms
from ..feasibility import DezaParams
from ..graph import Deza, Graph, StronglyRegular, classify_regular_deza, diameter


@dataclass(frozen=True)
class Certified:
    graph: Graph
    params: DezaParams
    construction: str
    inputs: dict = field(default_factory=dict, compare=False)

    @property
    def strictly_deza(self) -> bool:
        c = classify_regular_deza(self.graph)
        return isinstance(c, Deza) and diameter(self.graph) == 2


@dataclass(frozen=True)
class Rejected:
    reason: str


Outcome = Union[Certified, Rejected]


def deza_parameters(g: Graph) -> Optional[DezaParams]:
    """``(v, k, b, a)`` of a Deza graph, strongly regular ones included."""
    c = classify_regular_deza(g)
    if isinstance(c, Deza):
        return c.params
    if isinstance(c, StronglyRegular):
        values = []
        if c.k > 0:
            values.append(c.lam)
        if c.k < c.v - 1:
            values.append(c.mu)
        if not values:
            values = [0]
        return DezaParams(c.v, c.k, max(values), min(values))
    return None


def matrix_graph(m: np.ndarray) -> Optional[Graph]:
    """The graph of ``m`` if it is a symmetric 0/1 matrix with zero diagonal."""
    m = np.asarray(m)
    if not np.isin(m, (0, 1)).all() or m.diagonal().any() or not np.array_equal(m, m.T):
        return None
    return Graph.from_matrix(m)


def certify(m: np.ndarray, construction: str, **inputs) -> Outcome:
    g = matrix_graph(m)
    if g is None:
        return Rejected("not a symmetric 0/1 matrix with zero diagonal")
    p = deza_parameters(g)
    if p is None:
        return Rejected("not a Deza graph")
    return Certified(g, p, construction, inputs)


def permutation_matrix(sigma: Sequence[int]) -> np.ndarray:
    """``P`` with ``P[i, sigma[i]] = 1``, so row ``i`` of ``PM`` is row ``sigma[i]`` of ``M``."""
    n = len(sigma)
    p = np.zeros((n, n), dtype=np.int64)
    p[np.arange(n), list(sigma)] = 1
    return p


def _is_involution(sigma: Sequence[int]) -> bool:
    return all(sigma[sigma[i]] == i for i in range(len(sigma)))


def _check_seidel(g: Graph, sigma: Sequence[int]) -> Optional[str]:
    n = g.n
    if sorted(sigma) != list(range(n)):
        return "not a permutation of the vertices"
    if list(sigma) == list(range(n)):
        return "identity permutation"
    if not _is_involution(sigma):
        return "not an involution"
    if any(g.has_edge(u, sigma[u]) for u in range(n) if sigma[u] != u):
        return "moves a vertex to a neighbour"
    if g.relabel(sigma) != g:
        return "not an automorphism"
    return None


def _srg(g: Graph) -> StronglyRegular:
    c = classify_regular_deza(g)
    if not isinstance(c, StronglyRegular):
        raise ValueError("input is not strongly regular")
    return c


def dual_seidel(srg: Graph, sigma: Sequence[int]) -> Outcome:
    """Graph of ``PM`` for a Seidel automorphism ``sigma`` of a strongly
    regular graph with ``k != mu`` and ``lambda != mu``."""
    c = _srg(srg)
    if c.k == c.mu or c.lam == c.mu:
        raise ValueError("dual Seidel switching needs k != mu and lambda != mu")
    bad = _check_seidel(srg, sigma)
    if bad:
        return Rejected(bad)
    return certify(permutation_matrix(sigma) @ srg.matrix(), "dss", sigma=tuple(sigma))


def gen_dual_seidel(g: Graph, subset: Sequence[int], sigma: Sequence[int]) -> Outcome:
    """Permute the rows of the block of ``subset`` by ``sigma``.

    ``sigma`` is an involution on positions ``0..len(subset)-1`` (a Seidel
    automorphism of the subgraph induced on ``subset``, in that order).
    Requires ``P11 M12 M22 = M12 M22``, the block products taken with the
    rest of the vertex set.
    """
    subset = list(subset)
    if len(set(subset)) != len(subset) or not all(0 <= u < g.n for u in subset):
        raise ValueError("subset must list distinct vertices")
    h = g.induced(subset)
    bad = _check_seidel(h, sigma)
    if bad:
        return Rejected(f"on the subset: {bad}")
    rest = [u for u in range(g.n) if u not in set(subset)]
    m = g.matrix()
    if rest:
        m12 = m[np.ix_(subset, rest)]
        m22 = m[np.ix_(rest, rest)]
        prod = m12 @ m22
        if not np.array_equal(prod[list(sigma)], prod):
            return Rejected("P11 M12 M22 != M12 M22")
    out = m.copy()
    block = m[np.ix_(subset, subset)]
    out[np.ix_(subset, subset)] = block[list(sigma)]
    return certify(out, "gdss", subset=tuple(subset), sigma=tuple(sigma))


def _fixed_point_free_seidel(srg: Graph, sigma: Sequence[int]) -> None:
    bad = _check_seidel(srg, sigma)
    if bad:
        raise ValueError(f"sigma is not a Seidel automorphism: {bad}")
    if any(sigma[u] == u for u in range(srg.n)):
        raise ValueError("sigma has fixed points")


def srg_plus_p(srg: Graph, sigma: Sequence[int]) -> Outcome:
    """``M + P`` for an SRG with ``lambda == mu`` and a fixed-point-free
    Seidel automorphism ``sigma``."""
    c = _srg(srg)
    if c.lam != c.mu:
        raise ValueError("M + P needs lambda == mu")
    _fixed_point_free_seidel(srg, sigma)
    return certify(srg.matrix() + permutation_matrix(sigma), "c6", sigma=tuple(sigma))


def p_m_plus_i(srg: Graph, sigma: Sequence[int]) -> Outcome:
    """``P (M + I)`` for a fixed-point-free Seidel automorphism ``sigma``."""
    _srg(srg)
    _fixed_point_free_seidel(srg, sigma)
    m = srg.matrix() + np.eye(srg.n, dtype=np.int64)
    return certify(permutation_matrix(sigma) @ m, "c7", sigma=tuple(sigma))


# -- lexicographic products -------------------------------------------------

def lexicographic(g: Graph, h: Graph) -> Graph:
    """``G[H]``: ``(u1, u2) ~ (w1, w2)`` iff ``u1 ~ w1``, or ``u1 = w1`` and
    ``u2 ~ w2``; vertex ``(u1, u2)`` is ``u1 * |H| + u2``."""
    nh = h.n
    full = (1 << nh) - 1
    rows = []
    for u1 in range(g.n):
        outer = 0
        for w1 in range(g.n):
            if g.rows[u1] >> w1 & 1:
                outer |= full << (w1 * nh)
        for u2 in range(nh):
            rows.append(outer | (h.rows[u2] << (u1 * nh)))
    return Graph(g.n * nh, tuple(rows))


def lex_values(srg: StronglyRegular, h: DezaParams) -> set[int]:
    """Common-neighbour counts of ``G[H]``: ``a + kv'``, ``b + kv'``,
    ``mu v'`` and ``lambda v' + 2k'`` (terms for absent pair types dropped)."""
    v2, k2 = h.v, h.k
    vals = {h.a + srg.k * v2, h.b + srg.k * v2}
    if srg.k < srg.v - 1:
        vals.add(srg.mu * v2)
    if srg.k > 0:
        vals.add(srg.lam * v2 + 2 * k2)
    return vals


def lex_product(g: Graph, h: Graph) -> Outcome:
    """``G[H]`` for strongly regular ``G`` and Deza ``H``; Deza iff at most two
    common-neighbour counts occur."""
    c = _srg(g)
    hp = deza_parameters(h)
    if hp is None:
        raise ValueError("second factor is not a Deza graph")
    vals = lex_values(c, hp)
    if len(vals) > 2:
        return Rejected(f"common-neighbour counts {sorted(vals)}")
    out = certify(lexicographic(g, h).matrix(), "lex", g=g.to_graph6(), h=h.to_graph6())
    if isinstance(out, Certified):
        expect = (g.n * h.n, hp.k + c.k * h.n, max(vals), min(vals))
        if out.params.key != expect:
            raise AssertionError(f"lexicographic product has {out.params}, expected {expect}")
    return out


def complete_multipartite(x: int, y: int) -> Graph:
    """``K_{x*y}``: ``x`` parts of ``y`` vertices."""
    return Graph.from_edges(x * y, [(u, w) for u in range(x * y) for w in range(u + 1, x * y)
                                    if u // y != w // y])


def lex_multipartite_k2(x: int, y: int) -> Outcome:
    """``K_{x*y}[K_2]``, parameters ``(2xy, 2y(x-1)+1, 2y(x-1), 2y(x-2)+2)``."""
    out = lex_product(complete_multipartite(x, y), Graph.complete(2))
    return _retag(out, "c8.1")


def lex_srg_k2(srg: Graph) -> Outcome:
    """``G[K_2]`` for an SRG with ``lambda = mu - 1``: ``(2v, 2k+1, 2k, 2mu)``."""
    c = _srg(srg)
    if c.lam != c.mu - 1:
        raise ValueError("needs lambda = mu - 1")
    return _retag(lex_product(srg, Graph.complete(2)), "c8.2")


def lex_then_switch(g82: Graph, sigma: Sequence[int]) -> Outcome:
    """``PM`` for a Seidel automorphism of a ``G[K_2]`` graph."""
    bad = _check_seidel(g82, sigma)
    if bad:
        return Rejected(bad)
    return certify(permutation_matrix(sigma) @ g82.matrix(), "c8.3", sigma=tuple(sigma))


def _retag(out: Outcome, name: str) -> Outcome:
    if isinstance(out, Certified):
        return Certified(out.graph, out.params, name, out.inputs)
    return out


# -- drivers ----------------------------------------------------------------

def dss_all(srg: Graph) -> list[Certified]:
    """Dual Seidel switchings over all Seidel automorphisms, one per
    isomorphism class."""
    c = _srg(srg)
    if c.k == c.mu or c.lam == c.mu:
        return []
    return _distinct(dual_seidel(srg, s) for s in seidel_automorphisms(srg))


def _distinct(outs: Iterable[Outcome]) -> list[Certified]:
    found: dict[bytes, Certified] = {}
    for o in outs:
        if isinstance(o, Certified):
            found.setdefault(canonical_form(o.graph).data, o)
    return [found[k] for k in sorted(found)]


@dataclass
class GdssReport:
    results: list[Certified]
    subsets_tried: int
    exhausted: bool  # both search spaces were covered within the budgets
    involutions_tried: int = 0


def _popcount(x: int) -> int:
    return bin(x).count("1")


def pair_involutions(g: Graph, max_pairs: int = 6, max_sets: int = 100_000):
    """Involutions for generalized switching, chosen before the subset.

    Yields ``(pairs, rest)``: disjoint non-adjacent pairs ``(u, w)`` that
    are consistent with each other (the swap preserves adjacency among the
    moved vertices and changes at least one row), and the bitmask ``rest``
    of vertices that tell some ``u`` from its ``w``.  Those cannot be fixed
    points of the switched block, so ``rest`` is the smallest possible
    complement of the subset, and the swap is a Seidel automorphism of the
    subgraph induced on the other vertices.  Only sets satisfying the
    path-count condition against ``rest`` are yielded.

    The DFS visits at most ``max_sets`` pair sets; the generator's return
    value is ``(visited, exhausted)``.
    """
    n = g.n
    nb = list(g.rows)
    cand = [(u, w) for u, w in combinations(range(n), 2)
            if not nb[u] >> w & 1 and nb[u] != nb[w]]
    visited = 0

    def admissible(pairs):
        moved = 0
        diff = 0
        for u, w in pairs:
            moved |= 1 << u | 1 << w
            diff |= nb[u] ^ nb[w]
        rest = diff & ~moved
        rl = [r for r in range(n) if rest >> r & 1]
        for u, w in pairs:
            for r in rl:
                if _popcount(nb[u] & nb[r] & rest) != _popcount(nb[w] & nb[r] & rest):
                    return None
        return rest

    stack = [(0, (), 0, False)]
    while stack:
        start, pairs, used, changes = stack.pop()
        if len(pairs) >= 2 and changes:
            if visited >= max_sets:
                return visited, False
            visited += 1
            rest = admissible(pairs)
            if rest is not None:
                yield pairs, rest
        if len(pairs) == max_pairs:
            continue
        # push in reverse so pairs are explored in lexicographic order
        for i in range(len(cand) - 1, start - 1, -1):
            u, w = cand[i]
            if used >> u & 1 or used >> w & 1:
                continue
            ch = changes
            for a, b in pairs:
                if (nb[u] >> a & 1) != (nb[w] >> b & 1) or (nb[u] >> b & 1) != (nb[w] >> a & 1):
                    break
                if (nb[u] >> a & 1) != (nb[u] >> b & 1):
                    ch = True
            else:
                stack.append((i + 1, pairs + ((u, w),), used | 1 << u | 1 << w, ch))
    return visited, True


def gdss_search(g: Graph, max_subsets: int = 2000, max_removed: Optional[int] = None,
                max_involutions: int = 64, max_pairs: int = 6,
                max_pair_sets: int = 100_000) -> GdssReport:
    """Budgeted search for generalized dual Seidel switchings of ``g``.

    Two strategies.  First, involutions of up to ``max_pairs`` swapped
    pairs are chosen directly and the subset is the complement of the
    smallest admissible rest (see :func:`pair_involutions`).  Second,
    subsets are the complements of removed sets ``R`` of increasing size
    (``R`` empty gives plain switching) and for each, up to
    ``max_involutions`` Seidel automorphisms of the induced subgraph are
    tried.  Results are strictly Deza, one per isomorphism class, excluding
    ``g`` itself.
    """
    n = g.n
    degrees = set(g.degrees())
    if len(degrees) == 1 and n > degrees.pop() ** 2 + 1:
        # switching keeps every degree, and a k-regular graph of diameter 2
        # has at most k^2 + 1 vertices
        return GdssReport([], 0, True)
    own = canonical_form(g).data
    found: dict[bytes, Certified] = {}
    seen: set[tuple[int, ...]] = {g.rows}

    def consider(out: Outcome) -> None:
        # switchings often repeat the same labelled graph
        if not isinstance(out, Certified) or out.graph.rows in seen:
            return
        seen.add(out.graph.rows)
        if out.strictly_deza:
            key = canonical_form(out.graph).data
            if key != own:
                found.setdefault(key, out)

    gen = pair_involutions(g, max_pairs, max_pair_sets)
    while True:
        try:
            pairs, rest = next(gen)
        except StopIteration as stop:
            involutions, pairs_done = stop.value
            break
        subset = [u for u in range(n) if not rest >> u & 1]
        pos = {u: i for i, u in enumerate(subset)}
        sigma = list(range(len(subset)))
        for u, w in pairs:
            sigma[pos[u]], sigma[pos[w]] = pos[w], pos[u]
        consider(gen_dual_seidel(g, subset, sigma))

    tried = 0
    top = n - 2 if max_removed is None else min(max_removed, n - 2)
    exhausted = True
    for size in range(top + 1):
        for removed in combinations(range(n), size):
            if tried >= max_subsets:
                exhausted = False
                break
            tried += 1
            subset = [u for u in range(n) if u not in removed]
            h = g.induced(subset)
            for sigma in seidel_automorphisms(h, limit=max_involutions):
                consider(gen_dual_seidel(g, subset, sigma))
        if not exhausted:
            break
    return GdssReport([found[k] for k in sorted(found)], tried, exhausted and pairs_done, involutions)
