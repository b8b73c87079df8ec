"""Feasible parameter tuples ``(v, k, b, a)`` for Deza graphs.

Every vertex ``u`` of a Deza graph sees exactly ``alpha`` other vertices
sharing ``a`` common neighbours with it and ``beta`` sharing ``b``; both are
fixed by the parameters.  The filters below are the standard necessary
conditions derived from those counts.
"""

from __future__ import annotations

import enum
from math import isqrt
from dataclasses import dataclass, field
from typing import Iterator


class NotIntegral(ValueError):
    """Raised when alpha/beta are not non-negative integers."""


@dataclass(frozen=True, order=True)
class DezaParams:
    v: int
    k: int
    b: int
    a: int
    alpha: int = field(default=-1, compare=False)
    beta: int = field(default=-1, compare=False)

    def __post_init__(self) -> None:
        if self.b < self.a:
            raise ValueError(f"need b >= a, got b={self.b}, a={self.a}")
        if not 0 <= self.k <= self.v - 1:
            raise ValueError(f"degree {self.k} out of range for v={self.v}")
        if self.alpha < 0 or self.beta < 0:
            al, be = multiplicities(self.v, self.k, self.b, self.a)
            object.__setattr__(self, "alpha", al)
            object.__setattr__(self, "beta", be)

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.b, self.a)

    def __str__(self) -> str:
        return f"({self.v},{self.k},{self.b},{self.a})"


def multiplicities(v: int, k: int, b: int, a: int) -> tuple[int, int]:
    """Return ``(alpha, beta)`` for the parameters or raise :class:`NotIntegral`.

    For ``a != b``::

        alpha = (b(v-1) - k(k-1)) / (b - a)
        beta  = (a(v-1) - k(k-1)) / (a - b)

    and for ``a == b`` both equal ``k(k-1)/a``.
    """
    if not 0 <= a <= b <= k <= v - 1:
        raise ValueError(f"need 0 <= a <= b <= k <= v-1, got {(v, k, b, a)}")
    kk = k * (k - 1)
    if a == b:
        if a == 0:
            if kk == 0:
                # k <= 1: no vertex has a common neighbour with anything
                return (v - 1, v - 1)
            raise NotIntegral(f"a = b = 0 with k = {k}")
        if kk % a:
            raise NotIntegral(f"k(k-1) = {kk} not divisible by a = {a}")
        return (kk // a, kk // a)
    num_alpha = b * (v - 1) - kk
    num_beta = kk - a * (v - 1)
    d = b - a
    if num_alpha % d or num_beta % d:
        raise NotIntegral(f"b - a = {d} does not divide {num_alpha}")
    alpha, beta = num_alpha // d, num_beta // d
    if alpha < 0 or beta < 0:
        raise NotIntegral(f"negative multiplicity alpha={alpha}, beta={beta}")
    return alpha, beta


class FilterMode(str, enum.Enum):
    """Which tuples :func:`feasible_params` keeps.

    ``STRICT``
        enumeration targets: ``a < b`` and ``alpha, beta >= 1``.  A tuple with
        ``alpha == 0`` or ``beta == 0`` can only be realised by a strongly
        regular graph.
    ``NECESSARY``
        the bare necessary conditions with ``a < b``; ``alpha`` or ``beta`` may
        be zero.  This mode reproduces the reference feasible-parameter counts.
    ``ALL``
        ``NECESSARY`` plus the ``a == b`` tuples (reporting only).
    """

    STRICT = "strict"
    NECESSARY = "necessary"
    ALL = "all"


def _passes_necessary(v: int, k: int, b: int, a: int, alpha: int, beta: int) -> bool:
    if alpha != 0 and v < 2 * k - a:
        return False
    if a == b:
        # every other vertex then shares exactly a common neighbours
        return alpha == v - 1
    if alpha != 0 and beta != 0:
        kk = k * (k - 1)
        if not a * (v - 1) < kk < b * (v - 1):
            return False
    return True


def iter_feasible(v: int, mode: FilterMode = FilterMode.STRICT) -> Iterator[DezaParams]:
    mode = FilterMode(mode)
    if not 2 <= v <= 64:
        raise ValueError(f"v must be in [2, 64], got {v}")
    for k in range(2, v - 1):
        if (v * k) % 2:
            continue
        for b in range(k + 1):
            for a in range(b + 1):
                if a == b and mode is not FilterMode.ALL:
                    continue
                try:
                    alpha, beta = multiplicities(v, k, b, a)
                except NotIntegral:
                    continue
                if not _passes_necessary(v, k, b, a, alpha, beta):
                    continue
                if mode is FilterMode.STRICT and (alpha == 0 or beta == 0):
                    continue
                yield DezaParams(v, k, b, a, alpha, beta)


def feasible_params(v: int, mode: FilterMode | str = FilterMode.STRICT) -> list[DezaParams]:
    """All feasible ``(v, k, b, a)`` in lexicographic order of ``(k, b, a)``.

    Besides the divisibility and inequality conditions this requires
    ``2 <= k <= v-2`` (a 1-regular graph never has common neighbours, a
    complete graph is not a Deza graph of diameter 2) and ``v*k`` even.
    """
    return list(iter_feasible(v, FilterMode(mode)))


REFERENCE_FEASIBLE_COUNTS = dict(
    zip(range(8, 22), (14, 10, 24, 19, 34, 26, 44, 34, 73, 40, 74, 60, 86, 77))
)


def srg_feasible(v: int) -> list[tuple[int, int, int, int]]:
    """Parameters ``(v, k, lambda, mu)`` with ``0 < k < v - 1`` that pass the
    counting identity ``k(k - lambda - 1) = (v - k - 1) mu`` and the
    integrality of the eigenvalue multiplicities (half cases allowed for
    conference parameters)."""
    out = []
    for k in range(1, v - 1):
        if v * k % 2:
            continue
        for mu in range(0, k + 1):
            for lam in range(0, k):
                if k * (k - lam - 1) != (v - k - 1) * mu:
                    continue
                if v - 2 * k + mu - 2 < 0:  # complement would have lambda < 0
                    continue
                if mu == 0:
                    if v % (k + 1) == 0:  # disjoint cliques
                        out.append((v, k, lam, mu))
                    continue
                disc = (lam - mu) ** 2 + 4 * (k - mu)
                root = isqrt(disc)
                num = (v - 1) * (mu - lam) - 2 * k
                if root * root == disc:
                    # eigenvalues r, s = (lam - mu +- root) / 2 with integral multiplicities
                    if (lam - mu + root) % 2 or (num + (v - 1) * root) % (2 * root):
                        continue
                    out.append((v, k, lam, mu))
                elif num == 0 and (v - 1) % 4 == 0:
                    out.append((v, k, lam, mu))
    return out
