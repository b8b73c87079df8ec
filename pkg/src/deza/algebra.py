"""Exact spectra and the Weisfeiler-Leman closure of a graph."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union

import numpy as np

from .constructions.schemes import AssociationScheme, NotAScheme
from .graph import Graph

Poly = list[int]  # coefficients, highest degree first


# -- characteristic polynomial ----------------------------------------------

def char_poly(g: Graph) -> Poly:
    """Coefficients of ``det(xI - M)``, highest degree first.

    Berkowitz's division-free recurrence over Python integers, so the result
    is exact at any size.
    """
    a = [[int(g.rows[i] >> j & 1) for j in range(g.n)] for i in range(g.n)]
    return _berkowitz(a)


def _berkowitz(a: list[list[int]]) -> Poly:
    n = len(a)
    p: Poly = [1]
    for r in range(n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        t = [1, -a[r][r]]
        w = col
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(row, w)))
            w = [sum(a[i][j] * w[j] for j in range(r)) for i in range(r)]
        q = [0] * (r + 2)
        for i in range(r + 2):
            s = 0
            for j in range(max(0, i - len(t) + 1), min(i, r) + 1):
                s += t[i - j] * p[j]
            q[i] = s
        p = q
    return p


def poly_eval(p: Poly, x: int) -> int:
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def _deflate(p: Poly, root: int) -> Poly:
    out = []
    acc = 0
    for c in p[:-1]:
        acc = acc * root + c
        out.append(acc)
    return out


def _strip(p: Poly) -> Poly:
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return p[i:]


def _primitive(p: Poly) -> Poly:
    p = _strip(p)
    c = 0
    for x in p:
        c = gcd(c, x)
    if c == 0:
        return [0]
    if p[0] < 0:
        c = -c
    return [x // c for x in p]


def _prem(f: Poly, g: Poly) -> Poly:
    """Pseudo-remainder of ``f`` by ``g``."""
    f = list(f)
    lead = g[0]
    while len(f) >= len(g) and any(f):
        if f[0] == 0:
            f = f[1:]
            continue
        c = f[0]
        f = [lead * x for x in f]
        for i, y in enumerate(g):
            f[i] -= c * y
        f = f[1:]
    return _strip(f) if f else [0]


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Primitive gcd over Q (primitive pseudo-remainder sequence)."""
    f, g = _primitive(f), _primitive(g)
    if len(f) < len(g):
        f, g = g, f
    while g != [0] and any(g):
        r = _prem(f, g)
        f, g = g, _primitive(r) if any(r) else [0]
    return f


def derivative(p: Poly) -> Poly:
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [0]


def squarefree_degree(p: Poly) -> int:
    """Number of distinct complex roots of ``p``."""
    deg = len(p) - 1
    if deg <= 0:
        return 0
    return deg - (len(poly_gcd(p, derivative(p))) - 1)


# -- spectrum ---------------------------------------------------------------

Eigenvalue = Union[int, float]


@dataclass(frozen=True)
class Spectrum:
    entries: tuple[tuple[Eigenvalue, int], ...]  # ascending
    integral: bool
    distinct_count: int
    char_poly: tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(m for _, m in self.entries)

    def non_principal(self, k: int) -> tuple[tuple[Eigenvalue, int], ...]:
        """Entries with one copy of the principal eigenvalue ``k`` removed."""
        out = []
        for val, mult in self.entries:
            if isinstance(val, int) and val == k:
                mult -= 1
            if mult:
                out.append((val, mult))
        return tuple(out)

    def format(self, k: int) -> str:
        """Table style, e.g. ``-2^3 0^3 2^1``."""
        parts = []
        for val, mult in self.non_principal(k):
            s = str(val) if isinstance(val, int) else f"{val:.6f}"
            parts.append(f"{s}^{mult}")
        return " ".join(parts)


def integer_roots(p: Poly, bound: int) -> tuple[dict[int, int], Poly]:
    """Integer roots in ``[-bound, bound]`` with multiplicities, and the cofactor."""
    roots: dict[int, int] = {}
    for x in range(-bound, bound + 1):
        while len(p) > 1 and poly_eval(p, x) == 0:
            roots[x] = roots.get(x, 0) + 1
            p = _deflate(p, x)
    return roots, p


def spectrum(g: Graph, tol: float = 1e-9) -> Spectrum:
    """Exact eigenvalue data of the adjacency matrix.

    Integer eigenvalues (all of which lie in ``[-maxdeg, maxdeg]``) come with
    exact multiplicities; the remaining ones are computed numerically and
    grouped by ``tol``.  ``distinct_count`` is the degree of the square-free
    part of the characteristic polynomial.
    """
    p = char_poly(g)
    bound = max(g.degrees(), default=0)
    roots, rest = integer_roots(p, bound)
    entries: list[tuple[Eigenvalue, int]] = [(x, m) for x, m in roots.items()]
    if len(rest) > 1:
        numeric = sorted(np.linalg.eigvalsh(g.matrix(dtype=float)))
        used = [False] * len(numeric)
        for x, m in roots.items():
            # drop the integer eigenvalues from the numeric list
            for _ in range(m):
                i = min((i for i in range(len(numeric)) if not used[i]),
                        key=lambda i: abs(numeric[i] - x))
                used[i] = True
        others = [numeric[i] for i in range(len(numeric)) if not used[i]]
        groups: list[list[float]] = []
        for x in others:
            if groups and abs(x - groups[-1][-1]) <= max(tol, 1e-6):
                groups[-1].append(x)
            else:
                groups.append([x])
        entries += [(float(np.mean(gr)), len(gr)) for gr in groups]
    entries.sort(key=lambda e: e[0])
    return Spectrum(
        entries=tuple(entries),
        integral=len(rest) == 1,
        distinct_count=squarefree_degree(p),
        char_poly=tuple(p),
    )


# -- Weisfeiler-Leman closure ------------------------------------------------

@dataclass(frozen=True)
class CoherentConfiguration:
    n: int
    classes: tuple[tuple[int, ...], ...]  # classes[x][y] = class id

    @property
    def rank(self) -> int:
        return 1 + max(max(row) for row in self.classes)

    def diagonal_classes(self) -> set[int]:
        return {self.classes[x][x] for x in range(self.n)}

    def transpose_map(self) -> dict[int, int]:
        """Class id -> id of its transpose; raises if not well defined."""
        out: dict[int, int] = {}
        for x in range(self.n):
            for y in range(self.n):
                c, t = self.classes[x][y], self.classes[y][x]
                if out.setdefault(c, t) != t:
                    raise ValueError("transpose of a class is not a class")
        return out


def _renumber(sigs: list[list]) -> list[list[int]]:
    ids: dict = {}
    return [[ids.setdefault(s, len(ids)) for s in row] for row in sigs]


def wl_refine(colors: list[list[int]]) -> list[list[int]]:
    """One round of 2-dimensional WL refinement, ids by first occurrence."""
    n = len(colors)
    sigs = []
    for x in range(n):
        cx = colors[x]
        row = []
        for y in range(n):
            multiset = sorted((cx[z], colors[z][y]) for z in range(n))
            row.append((cx[y], colors[y][x], tuple(multiset)))
        sigs.append(row)
    return _renumber(sigs)


def wl_closure(g: Graph) -> CoherentConfiguration:
    """Coherent closure of ``g``: start from {diagonal, edges, non-edges} and
    refine pairs by composition counts until the partition is stable."""
    n = g.n
    colors = [[0 if x == y else (1 if g.rows[x] >> y & 1 else 2) for y in range(n)]
              for x in range(n)]
    colors = _renumber(colors)
    count = 1 + max(max(r) for r in colors)
    while True:
        new = wl_refine(colors)
        new_count = 1 + max(max(r) for r in new)
        colors = new
        if new_count == count:
            break
        count = new_count
    return CoherentConfiguration(n, tuple(tuple(r) for r in colors))


def wl_rank(g: Graph) -> int:
    return wl_closure(g).rank


def scheme_from_closure(cc: CoherentConfiguration) -> AssociationScheme:
    """The closure as a symmetric association scheme.

    A homogeneous closure with non-symmetric classes is symmetrized first
    (each class merged with its transpose); this is again a scheme when the
    closure is commutative.  Raises :class:`NotAScheme` when the diagonal is
    split or the symmetrization is not a scheme.
    """
    diag = cc.diagonal_classes()
    if len(diag) != 1:
        raise NotAScheme(f"diagonal splits into {len(diag)} classes")
    tmap = cc.transpose_map()
    d0 = next(iter(diag))
    reps = sorted({min(c, t) for c, t in tmap.items() if c != d0})
    arr = np.array(cc.classes)
    mats = [(arr == d0).astype(np.int64)]
    mats += [((arr == c) | (arr == tmap[c])).astype(np.int64) for c in reps]
    return AssociationScheme.from_relations(mats, "WL-closure")
