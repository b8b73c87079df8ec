"""Symmetric association schemes, their fusions, and the standard families used
for Deza graphs: rectangular, cyclotomic and distance-regular schemes."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from ..feasibility import DezaParams
from ..graph import Graph, distance_matrix


class NotAScheme(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AssociationScheme:
    """Relations ``A_0 = I, A_1, ..., A_d`` with intersection numbers.

    ``p[i, j, k]`` is the number of ``z`` with ``(x, z)`` in ``R_i`` and
    ``(z, y)`` in ``R_j`` for any ``(x, y)`` in ``R_k``.
    """

    n: int
    relations: tuple[np.ndarray, ...]
    p: np.ndarray
    name: str = ""

    @property
    def d(self) -> int:
        return len(self.relations) - 1

    def valency(self, i: int) -> int:
        return int(self.p[i, i, 0])

    @classmethod
    def from_relations(cls, mats: Sequence[np.ndarray], name: str = "") -> "AssociationScheme":
        """Validate ``mats`` as a symmetric scheme and compute ``p``.

        Raises :class:`NotAScheme` if any axiom fails.
        """
        mats = tuple(np.asarray(m, dtype=np.int64) for m in mats)
        if not mats:
            raise NotAScheme("no relations")
        n = mats[0].shape[0]
        eye = np.eye(n, dtype=np.int64)
        if not np.array_equal(mats[0], eye):
            raise NotAScheme("A_0 is not the identity")
        total = sum(mats)
        if not np.array_equal(total, np.ones((n, n), dtype=np.int64)):
            raise NotAScheme("relations do not partition V x V")
        for i, m in enumerate(mats):
            if not np.array_equal(m, m.T):
                raise NotAScheme(f"A_{i} is not symmetric")
            if not m.any():
                raise NotAScheme(f"A_{i} is empty")
        d = len(mats) - 1
        reps = []
        for m in mats:
            x, y = np.argwhere(m)[0]
            reps.append((int(x), int(y)))
        p = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
        for i, j in product(range(d + 1), repeat=2):
            prod = mats[i] @ mats[j]
            for kk, (x, y) in enumerate(reps):
                p[i, j, kk] = prod[x, y]
            expect = sum(p[i, j, kk] * mats[kk] for kk in range(d + 1))
            if not np.array_equal(prod, expect):
                raise NotAScheme(f"A_{i} A_{j} is not a combination of the relations")
        return cls(n, mats, p, name)

    def fusion_sums(self, classes: Sequence[int]) -> list[int]:
        """``sum_{f,g in F} p^k_{fg}`` for ``k = 1..d``."""
        f = list(classes)
        return [int(self.p[np.ix_(f, f, [kk])].sum()) for kk in range(1, self.d + 1)]


@dataclass(frozen=True)
class FusionResult:
    graph: Graph
    params: Optional[DezaParams]  # None: not a Deza graph
    classes: tuple[int, ...]


def scheme_fusion(s: AssociationScheme, classes: Sequence[int]) -> FusionResult:
    """Graph on the union of the given classes; Deza iff the fused sums take
    at most two values over the non-diagonal classes."""
    f = tuple(sorted(set(classes)))
    if not f or any(not 1 <= c <= s.d for c in f):
        raise ValueError(f"classes must be a non-empty subset of 1..{s.d}")
    adj = sum(s.relations[c] for c in f)
    g = Graph.from_matrix(adj)
    k = sum(s.valency(c) for c in f)
    values = sorted(set(s.fusion_sums(f)))
    params = None
    if len(values) <= 2:
        params = DezaParams(s.n, k, values[-1], values[0])
    return FusionResult(g, params, f)


def rectangular_scheme(m: int, n: int) -> AssociationScheme:
    """``R(m, n)`` on pairs ``(i, j)``: same first coordinate, same second, neither."""
    if m < 2 or n < 2:
        raise ValueError("rectangular scheme needs m, n >= 2")
    pts = [(i, j) for i in range(m) for j in range(n)]
    N = len(pts)
    mats = [np.zeros((N, N), dtype=np.int64) for _ in range(4)]
    for x, (i1, j1) in enumerate(pts):
        for y, (i2, j2) in enumerate(pts):
            if x == y:
                r = 0
            elif i1 == i2:
                r = 1
            elif j1 == j2:
                r = 2
            else:
                r = 3
            mats[r][x, y] = 1
    return AssociationScheme.from_relations(mats, f"R({m},{n})")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


def primitive_root(q: int) -> int:
    if not _is_prime(q):
        raise ValueError(f"{q} is not prime")
    phi = q - 1
    factors = {p for p in range(2, phi + 1) if phi % p == 0 and _is_prime(p)}
    for g in range(2, q):
        if all(pow(g, phi // p, q) != 1 for p in factors):
            return g
    return 1  # q == 2


def cyclotomic_scheme(q: int, classes: int = 3) -> AssociationScheme:
    """3-class cyclotomic scheme on GF(q), q prime with q = 1 (mod 3).

    ``x`` and ``y`` are in relation ``i`` when ``x - y`` lies in the coset
    ``gamma^i <gamma^3>`` (relations numbered 1..3 for exponents 0, 1, 2).
    """
    if (q - 1) % classes:
        raise ValueError(f"q = {q} is not 1 mod {classes}")
    if not _is_prime(q):
        raise ValueError("only prime fields are supported")
    gamma = primitive_root(q)
    coset = [0] * q
    x = 1
    for e in range(q - 1):
        coset[x] = e % classes + 1
        x = x * gamma % q
    mats = [np.zeros((q, q), dtype=np.int64) for _ in range(classes + 1)]
    for x in range(q):
        for y in range(q):
            mats[0 if x == y else coset[(x - y) % q]][x, y] = 1
    return AssociationScheme.from_relations(mats, f"Cycl({q})")


def distance_scheme(g: Graph) -> AssociationScheme:
    """Distance relations of a connected graph; raises :class:`NotAScheme`
    unless ``g`` is distance-regular."""
    dist = distance_matrix(g)
    if any(d < 0 for row in dist for d in row):
        raise NotAScheme("graph is disconnected")
    diam = max(max(row) for row in dist)
    arr = np.array(dist)
    mats = [(arr == i).astype(np.int64) for i in range(diam + 1)]
    return AssociationScheme.from_relations(mats, "distance")


def product_scheme(srg: Graph, n: int) -> AssociationScheme:
    """Scheme with relations ``M (x) J_n``, ``M' (x) J_n`` and ``I (x) (J_n - I)``.

    ``M'`` is the complement adjacency, so ``srg`` must be a primitive SRG.
    """
    m = srg.matrix()
    v = srg.n
    jn = np.ones((n, n), dtype=np.int64)
    iv = np.eye(v, dtype=np.int64)
    comp = np.ones((v, v), dtype=np.int64) - iv - m
    mats = [
        np.eye(v * n, dtype=np.int64),
        np.kron(iv, jn - np.eye(n, dtype=np.int64)),
        np.kron(m, jn),
        np.kron(comp, jn),
    ]
    return AssociationScheme.from_relations(mats, "product")
