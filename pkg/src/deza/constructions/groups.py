"""Small groups as multiplication tables, and Cayley graphs over them.

Groups of order at most 21 are generated from three families: cyclic
groups, split extensions ``N : Z_m`` over every smaller group ``N`` and
every automorphism of ``N`` whose order divides ``m``, and dicyclic groups
(which include the generalized quaternion groups, the only non-split cases
at these orders).  Candidates are reduced up to isomorphism and the result is
checked against the known number of groups of each order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, islice, product
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..canon import canonical_form
from ..feasibility import DezaParams
from ..graph import Deza, Graph, classify_regular_deza, diameter

# number of groups of order n, n = 1..21
GROUP_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1,
                12: 5, 13: 1, 14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5, 21: 2}
MAX_ORDER = 21


@dataclass(frozen=True, eq=False)
class GroupTable:
    order: int
    mul: tuple[tuple[int, ...], ...]  # mul[x][y] = x * y
    inverse: tuple[int, ...]
    id: int
    name: str

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.id:
            y = self.mul[y][x]
            n += 1
        return n

    def is_abelian(self) -> bool:
        return all(self.mul[x][y] == self.mul[y][x]
                   for x in range(self.order) for y in range(x))

    def validate(self, full: bool = True) -> None:
        """Raise ValueError unless the table is a group."""
        n, m, e = self.order, self.mul, self.id
        for x in range(n):
            if sorted(m[x]) != list(range(n)):
                raise ValueError(f"{self.name}: row {x} is not a permutation")
            if m[e][x] != x or m[x][e] != x:
                raise ValueError(f"{self.name}: {e} is not an identity")
            if m[x][self.inverse[x]] != e:
                raise ValueError(f"{self.name}: bad inverse of {x}")
        triples = product(range(n), repeat=3) if full else \
            zip(range(n), reversed(range(n)), range(n))
        for x, y, z in triples:
            if m[m[x][y]][z] != m[x][m[y][z]]:
                raise ValueError(f"{self.name}: not associative at {(x, y, z)}")


def _table(mul: Sequence[Sequence[int]], name: str) -> GroupTable:
    n = len(mul)
    mul_t = tuple(tuple(int(x) for x in row) for row in mul)
    e = next(x for x in range(n) if all(mul_t[x][y] == y for y in range(n)))
    inv = tuple(next(y for y in range(n) if mul_t[x][y] == e) for x in range(n))
    return GroupTable(n, mul_t, inv, e, name)


def cyclic(n: int) -> GroupTable:
    return _table([[(x + y) % n for y in range(n)] for x in range(n)], f"Z{n}")


def dicyclic(n: int) -> GroupTable:
    """``<x, y | x^2n = 1, y^2 = x^n, y^-1 x y = x^-1>`` of order ``4n``."""
    m = 2 * n
    # element x^i y^j stored as i + m*j
    def mult(p: int, q: int) -> int:
        i1, j1 = p % m, p // m
        i2, j2 = q % m, q // m
        if j1 == 0:
            return (i1 + i2) % m + m * j2
        # x^i1 y x^i2 y^j2 = x^(i1 - i2) y^(1 + j2)
        i = (i1 - i2) % m
        if j2 == 0:
            return i + m
        return (i + n) % m  # y^2 = x^n
    name = "Q8" if n == 2 else ("Q16" if n == 4 else f"Dic{n}")
    return _table([[mult(p, q) for q in range(2 * m)] for p in range(2 * m)], name)


def _generators(g: GroupTable) -> list[int]:
    """A small generating set, greedy by decreasing element order."""
    elems = sorted(range(g.order), key=lambda x: -g.element_order(x))
    gens: list[int] = []
    span = {g.id}
    for x in elems:
        if x in span:
            continue
        gens.append(x)
        span = _closure(g, gens)
        if len(span) == g.order:
            break
    return gens


def _closure(g: GroupTable, gens: Sequence[int]) -> set[int]:
    span = {g.id}
    frontier = [g.id]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in span:
                    span.add(y)
                    nxt.append(y)
        frontier = nxt
    return span


def _extend_hom(g: GroupTable, h: GroupTable, gens: Sequence[int],
                images: Sequence[int]) -> Optional[list[int]]:
    """The homomorphism ``g -> h`` sending ``gens`` to ``images``, or None."""
    phi = [-1] * g.order
    phi[g.id] = h.id
    frontier = [g.id]
    while frontier:
        nxt = []
        for x in frontier:
            for s, t in zip(gens, images):
                y = g.mul[x][s]
                val = h.mul[phi[x]][t]
                if phi[y] < 0:
                    phi[y] = val
                    nxt.append(y)
                elif phi[y] != val:
                    return None
        frontier = nxt
    # well defined on a generating set; check multiplicativity fully
    for x in range(g.order):
        for y in range(g.order):
            if phi[g.mul[x][y]] != h.mul[phi[x]][phi[y]]:
                return None
    return phi


def _isomorphisms(g: GroupTable, h: GroupTable, first_only: bool) -> list[list[int]]:
    if g.order != h.order:
        return []
    gens = _generators(g)
    pools = [[y for y in range(h.order) if h.element_order(y) == g.element_order(s)]
             for s in gens]
    out = []
    for images in product(*pools):
        phi = _extend_hom(g, h, gens, images)
        if phi is not None and len(set(phi)) == g.order:
            out.append(phi)
            if first_only:
                break
    return out


def _invariant(g: GroupTable) -> tuple:
    orders = sorted(g.element_order(x) for x in range(g.order))
    centre = sum(all(g.mul[x][y] == g.mul[y][x] for y in range(g.order))
                 for x in range(g.order))
    squares = len({g.mul[x][x] for x in range(g.order)})
    return (tuple(orders), centre, squares)


def groups_isomorphic(g: GroupTable, h: GroupTable) -> bool:
    if g.order != h.order or _invariant(g) != _invariant(h):
        return False
    return bool(_isomorphisms(g, h, first_only=True))


def automorphisms(g: GroupTable) -> list[list[int]]:
    return _isomorphisms(g, g, first_only=False)


def semidirect(n: GroupTable, m: int, phi: Sequence[int], name: str) -> GroupTable:
    """``N : Z_m`` where the generator of ``Z_m`` acts by the automorphism ``phi``.

    Element ``(x, i)`` is stored as ``x + |N| * i``; ``(x, i)(y, j) =
    (x phi^i(y), i + j)``.
    """
    size = n.order
    powers = [list(range(size))]
    for _ in range(1, m):
        powers.append([phi[t] for t in powers[-1]])
    mul = [[0] * (size * m) for _ in range(size * m)]
    for i in range(m):
        act = powers[i]
        for x in range(size):
            p = x + size * i
            row = mul[p]
            nrow = n.mul[x]
            for j in range(m):
                base = size * ((i + j) % m)
                for y in range(size):
                    row[y + size * j] = nrow[act[y]] + base
    return _table(mul, name)


def _perm_order(p: Sequence[int]) -> int:
    q, k = list(p), 1
    ident = list(range(len(p)))
    while q != ident:
        q = [p[t] for t in q]
        k += 1
    return k


@lru_cache(maxsize=None)
def groups_of_order(n: int) -> tuple[GroupTable, ...]:
    """All groups of order ``n`` (1 <= n <= 21) up to isomorphism."""
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"group order must lie in 1..{MAX_ORDER}")
    cands: list[GroupTable] = [cyclic(n)]
    if n % 4 == 0 and n >= 8:
        cands.append(dicyclic(n // 4))
    for m in range(2, n):
        if n % m:
            continue
        for base in groups_of_order(n // m):
            seen_actions: set[tuple[int, ...]] = set()
            for phi in automorphisms(base):
                if m % _perm_order(phi):
                    continue
                key = tuple(phi)
                if key in seen_actions:
                    continue
                seen_actions.add(key)
                trivial = key == tuple(range(base.order))
                label = f"{base.name}xZ{m}" if trivial else f"{base.name}:Z{m}"
                if base.order == 1:
                    continue
                cands.append(semidirect(base, m, phi, label))
    found: list[GroupTable] = []
    for c in cands:
        if not any(groups_isomorphic(c, f) for f in found):
            found.append(c)
    names: dict[str, int] = {}
    out = []
    for g in found:
        # disambiguate repeated labels such as different actions of Z_m
        names[g.name] = names.get(g.name, 0) + 1
        name = g.name if names[g.name] == 1 else f"{g.name}#{names[g.name]}"
        out.append(GroupTable(g.order, g.mul, g.inverse, g.id, name))
    if len(out) != GROUP_COUNTS[n]:
        raise RuntimeError(f"found {len(out)} groups of order {n}, expected {GROUP_COUNTS[n]}")
    return tuple(out)


# -- Cayley graphs ----------------------------------------------------------

@dataclass(frozen=True)
class NotDezaCayley:
    values: tuple[int, ...]  # distinct multiplicities off the identity


@dataclass(frozen=True)
class CayleyGraph:
    graph: Graph
    params: DezaParams
    group: str
    connection_set: tuple[int, ...]


def difference_counts(g: GroupTable, s: Sequence[int]) -> list[int]:
    """Multiplicity of each element in the multiset ``S S^-1``."""
    counts = [0] * g.order
    for x in s:
        for y in s:
            counts[g.mul[x][g.inverse[y]]] += 1
    return counts


def cayley(g: GroupTable, s: Iterable[int]) -> Union[CayleyGraph, NotDezaCayley]:
    """``Cay(G, S)`` with edges ``{x, x s}``, certified Deza via ``S S^-1``.

    The graph is Deza exactly when the non-identity elements of ``S S^-1``
    occur with at most two multiplicities ``a <= b``.
    """
    sset = sorted(set(s))
    if g.id in sset:
        raise ValueError("connection set contains the identity")
    if any(g.inverse[x] not in sset for x in sset):
        raise ValueError("connection set is not closed under inverses")
    rows = [0] * g.order
    for x in range(g.order):
        for t in sset:
            rows[x] |= 1 << g.mul[x][t]
    graph = Graph(g.order, tuple(rows))
    counts = difference_counts(g, sset)
    values = sorted({counts[x] for x in range(g.order) if x != g.id})
    if len(values) > 2:
        return NotDezaCayley(tuple(values))
    if not values:
        values = [0]
    params = DezaParams(g.order, len(sset), values[-1], values[0])
    return CayleyGraph(graph, params, g.name, tuple(sset))


def _inverse_classes(g: GroupTable) -> list[tuple[int, ...]]:
    out = []
    for x in range(g.order):
        if x == g.id:
            continue
        y = g.inverse[x]
        if x <= y:
            out.append((x,) if x == y else (x, y))
    return out


def connection_sets(g: GroupTable, k: int) -> Iterable[tuple[int, ...]]:
    """Inverse-closed identity-free subsets of size ``k``."""
    classes = _inverse_classes(g)
    singles = [c for c in classes if len(c) == 1]
    pairs = [c for c in classes if len(c) == 2]
    for npairs in range(min(len(pairs), k // 2) + 1):
        nsingle = k - 2 * npairs
        if nsingle > len(singles):
            continue
        for ps in combinations(pairs, npairs):
            base = [x for c in ps for x in c]
            for ss in combinations(singles, nsingle):
                yield tuple(sorted(base + [c[0] for c in ss]))


def cayley_search(v: int, k: int, b: int, a: int, strict: bool = True) -> list[CayleyGraph]:
    """Cayley graphs with parameters ``(v, k, b, a)`` over all groups of order ``v``,
    one per isomorphism class (sorted by canonical form).

    With ``strict`` only strictly Deza graphs (diameter 2, not strongly
    regular) are kept.
    """
    found: dict[bytes, CayleyGraph] = {}
    for g in groups_of_order(v):
        # counts[g] = #{y in S : g y in S}; left multiplication by each g as an index map
        left = np.array(g.mul)
        # x -> h x is an automorphism of every Cayley graph of g
        left_mults = [tuple(g.mul[h]) for h in _generators(g)]
        it = iter(connection_sets(g, k))
        while True:
            batch = list(islice(it, 4096))
            if not batch:
                break
            ind = np.zeros((len(batch), v), dtype=np.int64)
            for i, s in enumerate(batch):
                ind[i, list(s)] = 1
            counts = np.stack([(ind * ind[:, left[x]]).sum(axis=1) for x in range(v)], axis=1)
            counts = np.delete(counts, g.id, axis=1)
            good = np.all((counts == a) | (counts == b), axis=1)
            good &= (counts == b).any(axis=1) & (counts == a).any(axis=1) if a != b else good
            for i in np.flatnonzero(good):
                res = cayley(g, batch[i])
                if not isinstance(res, CayleyGraph) or res.params.key != (v, k, b, a):
                    continue
                if strict:
                    c = classify_regular_deza(res.graph)
                    if not isinstance(c, Deza) or diameter(res.graph) != 2:
                        continue
                form = canonical_form(res.graph, left_mults).data
                found.setdefault(form, res)
    return [found[f] for f in sorted(found)]
