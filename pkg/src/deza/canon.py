"""Canonical labeling, automorphism groups and Seidel automorphisms.

Individualization-refinement in the usual style: an ordered partition of the
vertices is refined to an equitable one, then the first smallest non-trivial
cell is split by individualizing each of its vertices in turn.  Leaves are
discrete partitions, i.e. relabelings; the canonical form is the
lexicographically largest relabeled adjacency among the leaves.
Automorphisms found on the way (two leaves with equal relabelings) prune
sibling branches that lie in the same orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import Graph, bits, encode_graph6

Cells = list[list[int]]
Perm = tuple[int, ...]


@dataclass(frozen=True)
class ColoredGraph:
    """Graph plus an ordered partition of its vertices into colour classes."""

    graph: Graph
    colors: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen = sorted(u for cell in self.colors for u in cell)
        if seen != list(range(self.graph.n)):
            raise ValueError("colour classes must partition the vertex set")

    @classmethod
    def plain(cls, g: Graph) -> "ColoredGraph":
        return cls(g, (tuple(range(g.n)),))


@dataclass(frozen=True)
class CanonicalForm:
    data: bytes
    labeling: Perm  # labeling[u] = canonical position of vertex u

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonicalForm) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)


# -- refinement -------------------------------------------------------------

def _mask(cell: Iterable[int]) -> int:
    m = 0
    for u in cell:
        m |= 1 << u
    return m


def refine(rows: Sequence[int], cells: Cells) -> Cells:
    """Coarsest equitable refinement of ``cells``, split in a label-free way.

    Fragments of a split cell are ordered by their neighbour-count vectors
    against the current cells, so the result commutes with relabeling.
    """
    cells = [list(c) for c in cells]
    while True:
        masks = [_mask(c) for c in cells]
        out: Cells = []
        split = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for u in cell:
                ru = rows[u]
                sig = tuple((ru & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(u)
            if len(groups) == 1:
                out.append(cell)
            else:
                split = True
                for sig in sorted(groups):
                    out.append(groups[sig])
        cells = out
        if not split:
            return cells


def _individualize(cells: Cells, ci: int, u: int) -> Cells:
    cell = cells[ci]
    return cells[:ci] + [[u], [w for w in cell if w != u]] + cells[ci + 1:]


def _target(cells: Cells) -> int:
    best = -1
    for i, c in enumerate(cells):
        if len(c) > 1 and (best < 0 or len(c) < len(cells[best])):
            best = i
    return best


def _certificate(rows: Sequence[int], cells: Cells) -> tuple[tuple[int, ...], Perm]:
    order = [c[0] for c in cells]
    pos = [0] * len(order)
    for i, u in enumerate(order):
        pos[u] = i
    cert = []
    for u in order:
        nr = 0
        for w in bits(rows[u]):
            nr |= 1 << pos[w]
        cert.append(nr)
    return tuple(cert), tuple(pos)


# -- orbits -----------------------------------------------------------------

def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union_perm(parent: list[int], g: Perm) -> None:
    """Merge every point with its image under ``g``; roots stay minimal."""
    for x in range(len(parent)):
        if g[x] == x:
            continue
        rx, ry = _find(parent, x), _find(parent, g[x])
        if rx != ry:
            if rx < ry:
                parent[ry] = rx
            else:
                parent[rx] = ry


def orbits(n: int, gens: Iterable[Perm]) -> list[int]:
    """Orbit representative (smallest element) for each point."""
    parent = list(range(n))
    for g in gens:
        _union_perm(parent, g)
    return [_find(parent, x) for x in range(n)]


def _fixes(g: Perm, seq: Sequence[int]) -> bool:
    return all(g[u] == u for u in seq)


def compose(p: Perm, q: Perm) -> Perm:
    """``(p*q)(x) = p(q(x))``."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


# -- canonical labeling -----------------------------------------------------

class _CanonSearch:
    def __init__(self, rows: Sequence[int], n: int):
        self.rows = rows
        self.n = n
        self.best: Optional[tuple[int, ...]] = None
        self.best_pos: Optional[Perm] = None
        self.first: Optional[tuple[int, ...]] = None
        self.first_pos: Optional[Perm] = None
        self.gens: list[Perm] = []
        self.gen_set: set[Perm] = set()

    def run(self, cells: Cells) -> None:
        self._visit(refine(self.rows, cells), [])

    def _record_auto(self, pos_a: Perm, pos_b: Perm) -> None:
        # leaf labelings a, b give the same graph: b^-1 * a is an automorphism
        auto = compose(inverse(pos_b), pos_a)
        if any(auto[i] != i for i in range(self.n)) and auto not in self.gen_set:
            self.gens.append(auto)
            self.gen_set.add(auto)

    def _visit(self, cells: Cells, seq: list[int]) -> None:
        ti = _target(cells)
        if ti < 0:
            cert, pos = _certificate(self.rows, cells)
            if self.first is None:
                self.first, self.first_pos = cert, pos
                self.best, self.best_pos = cert, pos
                return
            if cert == self.first:
                self._record_auto(pos, self.first_pos)
            elif cert == self.best:
                self._record_auto(pos, self.best_pos)
            elif cert > self.best:
                self.best, self.best_pos = cert, pos
            return
        tried: list[int] = []
        known = 0  # generators already folded into the union-find
        parent: Optional[list[int]] = None
        for u in cells[ti]:
            if tried:
                if len(self.gens) != known:
                    for g in self.gens[known:]:
                        if _fixes(g, seq):
                            if parent is None:
                                parent = list(range(self.n))
                            _union_perm(parent, g)
                    known = len(self.gens)
                if parent is not None:
                    ru = _find(parent, u)
                    if any(_find(parent, t) == ru for t in tried):
                        continue
            tried.append(u)
            self._visit(refine(self.rows, _individualize(cells, ti, u)), seq + [u])


def _initial_cells(cg: ColoredGraph) -> Cells:
    return [sorted(c) for c in cg.colors if c]


def canonical_form(g: ColoredGraph | Graph,
                   automorphisms: Iterable[Sequence[int]] = ()) -> CanonicalForm:
    """Canonical graph6 bytes of ``g`` (colour classes are respected).

    For a coloured graph with more than one class the class sizes are
    appended, so forms of differently coloured graphs never collide.
    ``automorphisms`` may list known colour-preserving automorphisms; they
    only prune the search and never change the result.
    """
    cg = ColoredGraph.plain(g) if isinstance(g, Graph) else g
    n = cg.graph.n
    s = _CanonSearch(cg.graph.rows, n)
    for a in automorphisms:
        a = tuple(a)
        if a != tuple(range(n)) and a not in s.gen_set:
            s.gens.append(a)
            s.gen_set.add(a)
    s.run(_initial_cells(cg))
    assert s.best is not None and s.best_pos is not None
    data = encode_graph6(Graph(n, s.best)).encode("ascii")
    if len(cg.colors) > 1:
        data += b"|" + b",".join(str(len(c)).encode() for c in cg.colors)
    return CanonicalForm(data, s.best_pos)


def canonical_graph(g: Graph) -> Graph:
    return g.relabel(canonical_form(g).labeling)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_form(g) == canonical_form(h)


# -- automorphism group -----------------------------------------------------

@dataclass(frozen=True)
class AutomorphismGroup:
    generators: tuple[Perm, ...]
    order: int


def _extend(rows, n, cells: Cells, seq: list[int], target_cert, shape: list[tuple[int, ...]],
            gens: list[Perm]) -> Optional[Perm]:
    """Search below ``cells`` for a leaf whose relabeled graph is ``target_cert``."""
    depth = len(seq)
    if depth < len(shape) and tuple(len(c) for c in cells) != shape[depth]:
        return None
    ti = _target(cells)
    if ti < 0:
        cert, pos = _certificate(rows, cells)
        return pos if cert == target_cert else None
    tried: list[int] = []
    for u in cells[ti]:
        if tried:
            stab = [g for g in gens if _fixes(g, seq)]
            if stab:
                orb = orbits(n, stab)
                if any(orb[u] == orb[t] for t in tried):
                    continue
        tried.append(u)
        found = _extend(rows, n, refine(rows, _individualize(cells, ti, u)), seq + [u],
                        target_cert, shape, gens)
        if found is not None:
            return found
    return None


def automorphism_group(g: Graph | ColoredGraph) -> AutomorphismGroup:
    """Generators and exact order of the (colour-preserving) automorphism group.

    Walks the first path of the search tree; at each level the orbit of the
    first child under the pointwise stabilizer of the path so far is found by
    testing every other vertex of the target cell, deepest level first.  The
    order is the product of those orbit lengths.
    """
    cg = ColoredGraph.plain(g) if isinstance(g, Graph) else g
    rows, n = cg.graph.rows, cg.graph.n
    path: list[Cells] = [refine(rows, _initial_cells(cg))]
    seq: list[int] = []
    targets: list[int] = []
    while True:
        ti = _target(path[-1])
        if ti < 0:
            break
        u = path[-1][ti][0]
        targets.append(ti)
        seq.append(u)
        path.append(refine(rows, _individualize(path[-1], ti, u)))
    first_cert, first_pos = _certificate(rows, path[-1])
    shape = [tuple(len(c) for c in cells) for cells in path]
    gens: list[Perm] = []
    order = 1
    for level in range(len(targets) - 1, -1, -1):
        cells, ti = path[level], targets[level]
        prefix = seq[:level]
        first_child = seq[level]
        for w in cells[ti]:
            stab = [g for g in gens if _fixes(g, prefix)]
            orb = orbits(n, stab)
            if orb[w] == orb[first_child]:
                continue
            pos = _extend(rows, n, refine(rows, _individualize(cells, ti, w)), prefix + [w],
                          first_cert, shape, gens)
            if pos is not None:
                gens.append(compose(inverse(first_pos), pos))
        stab = [g for g in gens if _fixes(g, prefix)]
        orb = orbits(n, stab)
        order *= sum(1 for w in cells[ti] if orb[w] == orb[first_child])
    return AutomorphismGroup(tuple(gens), order)


def group_elements(gens: Sequence[Perm], n: int, limit: int = 1_000_000) -> list[Perm]:
    """All elements of the group generated by ``gens`` (breadth-first closure)."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > limit:
                        raise OverflowError("group larger than enumeration limit")
        frontier = nxt
    return sorted(seen)


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    return g.relabel(perm) == g


# -- Seidel automorphisms ---------------------------------------------------

def seidel_automorphisms(g: Graph, fixed_point_free: bool = False,
                         limit: Optional[int] = None) -> list[Perm]:
    """All non-identity involutive automorphisms that only swap non-adjacent vertices.

    With ``limit`` the search stops after that many have been found.

    Backtracking over vertices in increasing order: each vertex is either
    fixed or paired with a later, non-adjacent, still-free vertex of the same
    degree; a partial map is abandoned as soon as it breaks adjacency among
    the assigned vertices.
    """
    n = g.n
    rows = g.rows
    img = [-1] * n
    found: list[Perm] = []
    cells = refine(rows, [list(range(n))])
    cell_of = [0] * n
    for i, c in enumerate(cells):
        for u in c:
            cell_of[u] = i
    assigned: list[int] = []

    def consistent(u: int) -> bool:
        iu = img[u]
        for w in assigned:
            if (rows[u] >> w & 1) != (rows[iu] >> img[w] & 1):
                return False
        return True

    def assign(u: int, w: int) -> bool:
        img[u] = w
        img[w] = u
        assigned.append(u)
        if not consistent(u):
            assigned.pop()
            img[u] = img[w] = -1
            return False
        if w != u:
            assigned.append(w)
            if not consistent(w):
                assigned.pop()
                assigned.pop()
                img[u] = img[w] = -1
                return False
        return True

    def unassign(u: int) -> None:
        w = img[u]
        assigned.pop()
        if w != u:
            assigned.pop()
        img[u] = img[w] = -1

    def rec(u: int) -> None:
        while u < n and img[u] >= 0:
            u += 1
        if u == n:
            perm = tuple(img)
            if any(perm[i] != i for i in range(n)):
                found.append(perm)
                if limit is not None and len(found) >= limit:
                    raise _Enough
            return
        if not fixed_point_free and assign(u, u):
            rec(u + 1)
            unassign(u)
        for w in range(u + 1, n):
            if img[w] < 0 and cell_of[w] == cell_of[u] and not rows[u] >> w & 1:
                if assign(u, w):
                    rec(u + 1)
                    unassign(u)

    try:
        rec(0)
    except _Enough:
        pass
    return found


class _Enough(Exception):
    pass
