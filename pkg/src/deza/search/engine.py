"""Isomorph-free exhaustive generation of Deza and strongly regular graphs.

The adjacency matrix is filled row by row.  Two seed rows are fixed by a
relabeling argument, the next few rows are enumerated block-wise and
deduplicated up to equivalence of partial matrices, and each surviving prefix
is then completed by the compiled depth-first search in :mod:`.kernel`.
"""

from __future__ import annotations

import json
import logging
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from ..canon import CanonicalForm, ColoredGraph, canonical_form
from ..feasibility import DezaParams, FilterMode, feasible_params
from ..graph import Deza, Graph, StronglyRegular, classify_regular_deza, diameter
from . import kernel

log = logging.getLogger(__name__)

DEFAULT_CROSSOVER = 5


@dataclass(frozen=True, order=True)
class SRGParams:
    v: int
    k: int
    lam: int
    mu: int

    @property
    def key(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    def __str__(self) -> str:
        return f"srg({self.v},{self.k},{self.lam},{self.mu})"


Params = Union[DezaParams, SRGParams]


@dataclass(frozen=True)
class PairRule:
    """What the kernel needs to know about the target parameters."""

    v: int
    k: int
    mode: int
    p1: int
    p2: int
    alpha: int
    beta: int

    @classmethod
    def of(cls, p: Params) -> "PairRule":
        if isinstance(p, SRGParams):
            return cls(p.v, p.k, kernel.MODE_SRG, p.lam, p.mu, p.v, p.v)
        mode = kernel.MODE_DEZA_DIAM2 if p.a == 0 else kernel.MODE_DEZA
        return cls(p.v, p.k, mode, p.a, p.b, p.alpha, p.beta)

    def args(self) -> tuple:
        return (self.v, self.k, self.p1, self.p2, self.mode, self.alpha, self.beta)


class PrefixError(ValueError):
    """Raised on malformed partial matrices."""


@dataclass(frozen=True)
class PartialMatrix:
    """The first ``filled`` rows of a symmetric 0/1 matrix.

    ``rows[i]`` is the full bit row of vertex ``i``; entries of later rows
    below column ``filled`` follow by symmetry.
    """

    params: Params
    filled: int
    rows: tuple[int, ...]

    @property
    def v(self) -> int:
        return self.params.v

    def known_rows(self) -> np.ndarray:
        """Length-``v`` row array with every fixed entry set."""
        out = np.zeros(self.v, np.uint64)
        for i, r in enumerate(self.rows):
            out[i] = r
            for c in range(i + 1, self.v):
                if r >> c & 1:
                    out[c] |= np.uint64(1 << i)
        return out

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        """Unfilled columns grouped by their pattern over the filled rows,
        in order of first column."""
        known = self.known_rows()
        groups: dict[int, list[int]] = {}
        for c in range(self.filled, self.v):
            groups.setdefault(int(known[c]), []).append(c)
        return [tuple(cols) for cols in groups.values()]

    def colored_graph(self) -> ColoredGraph:
        """Specified adjacencies, coloured {filled} / {unfilled}."""
        g = Graph(self.v, tuple(int(x) for x in self.known_rows()))
        filled = tuple(range(self.filled))
        rest = tuple(range(self.filled, self.v))
        return ColoredGraph(g, (filled, rest) if rest else (filled,))

    def canonical(self) -> CanonicalForm:
        return canonical_form(self.colored_graph())


def partial_equivalent(p1: PartialMatrix, p2: PartialMatrix) -> bool:
    """Whether some relabeling maps filled rows to filled rows, unfilled to
    unfilled, and the specified adjacencies of ``p1`` onto those of ``p2``."""
    if p1.v != p2.v or p1.filled != p2.filled:
        raise PrefixError("partial matrices differ in size or filled rows")
    return p1.canonical() == p2.canonical()


# -- prefixes ---------------------------------------------------------------

def seed_prefix(p: Params) -> Optional[PartialMatrix]:
    """Two seed rows, or None when the forced layout does not fit.

    When the number of vertices sharing ``a`` with a vertex is at most ``k``
    (Cases 1 and 2) some adjacent pair shares ``b`` common neighbours: rows
    ``0, 1`` are adjacent with 1s laid out as ``b | k-b-1 | k-b-1``.
    Otherwise some non-adjacent pair shares ``a``: layout ``a | k-a | k-a``.
    For strongly regular targets an edge with ``lambda`` common neighbours is
    seeded.
    """
    v, k = p.v, p.k
    if isinstance(p, SRGParams):
        adjacent, shared = True, p.lam
    elif p.alpha <= k:
        adjacent, shared = True, p.b
    else:
        adjacent, shared = False, p.a
    rest = k - shared - (1 if adjacent else 0)
    tail = v - 2 - shared - 2 * rest
    if k == 0 or rest < 0 or tail < 0:
        return None
    r0 = r1 = 0
    if adjacent:
        r0, r1 = 1 << 1, 1 << 0
    c = 2
    for _ in range(shared):
        r0 |= 1 << c
        r1 |= 1 << c
        c += 1
    for _ in range(rest):
        r0 |= 1 << c
        c += 1
    for _ in range(rest):
        r1 |= 1 << c
        c += 1
    return PartialMatrix(p, 2, (r0, r1))


def _children(pm: PartialMatrix, prune: bool, lookahead: bool) -> list[PartialMatrix]:
    rule = PairRule.of(pm.params)
    v, k, p1, p2, mode, alpha, beta = rule.args()
    rows = pm.known_rows()
    r = pm.filled
    if lookahead and r < v - 1:
        # fill the most constrained vertex next; relabel it to position r
        nxt = kernel.pick_next(rows, r - 1, v, k, p1, p2, mode, prune, np.empty(1, np.uint64))
        if nxt < 0:
            return []
        kernel.swap_vertices(rows, r, nxt, v)
    cands = kernel.extend(rows, r, v, k, p1, p2, mode, alpha, beta, prune, lookahead)
    head = tuple(int(x) for x in rows[:r])
    return [PartialMatrix(pm.params, r + 1, head + (int(c),)) for c in cands]


def extend_row_blockwise(pm: PartialMatrix, prune: bool = True,
                         lookahead: bool = True) -> list[PartialMatrix]:
    """All admissible next rows of ``pm``.

    With ``prune`` the 1s are packed to the front of each column block and
    equivalent results are merged (first representative kept).
    """
    if pm.filled >= pm.v:
        return []
    out = _children(pm, prune, lookahead)
    return dedupe(out) if prune else out


def dedupe(prefixes: Iterable[PartialMatrix]) -> list[PartialMatrix]:
    seen: set[CanonicalForm] = set()
    out = []
    for pm in prefixes:
        f = pm.canonical()
        if f not in seen:
            seen.add(f)
            out.append(pm)
    return out


def prefixes_at(p: Params, depth: int, prune: bool = True,
                lookahead: bool = True) -> list[PartialMatrix]:
    """Prefixes with ``min(depth, v)`` filled rows; pairwise non-equivalent
    when ``prune`` is set."""
    seed = seed_prefix(p)
    if seed is None:
        return []
    level = [seed]
    depth = min(depth, p.v)
    while level and level[0].filled < depth:
        nxt = [c for pm in level for c in _children(pm, prune, lookahead)]
        level = dedupe(nxt) if prune else nxt
    return level


@dataclass
class Completion:
    leaves: list[Graph]
    nodes: int
    complete: bool


def complete_exhaustive(pm: PartialMatrix, prune: bool = True, lookahead: bool = True,
                        max_nodes: int = 1 << 62) -> Completion:
    """Every completion of ``pm`` satisfying the pair rule (up to the
    symmetry reductions of the packed rows).  Leaves are not filtered."""
    rule = PairRule.of(pm.params)
    v, k, p1, p2, mode, alpha, beta = rule.args()
    leaves, nodes, status = kernel.complete(pm.known_rows(), pm.filled, v, k, p1, p2, mode,
                                            alpha, beta, prune, lookahead, max_nodes)
    graphs = [Graph(v, tuple(int(x) for x in row)) for row in leaves]
    return Completion(graphs, int(nodes), status == kernel.STATUS_DONE)


def accept(g: Graph, p: Params) -> bool:
    """Final filter: the target parameters, and for Deza targets strictly Deza."""
    c = classify_regular_deza(g)
    if isinstance(p, SRGParams):
        return isinstance(c, StronglyRegular) and (c.v, c.k, c.lam, c.mu) == p.key
    return isinstance(c, Deza) and c.params.key == p.key and diameter(g) == 2


# -- driver -----------------------------------------------------------------

@dataclass(frozen=True)
class Budget:
    max_nodes: Optional[int] = None  # per parameter tuple
    max_seconds: Optional[float] = None  # per parameter tuple, checked between work units


@dataclass(frozen=True)
class SearchOptions:
    crossover: int = DEFAULT_CROSSOVER
    prune: bool = True
    lookahead: bool = True
    jobs: int = 1
    budget: Budget = Budget()

    def tag(self) -> dict:
        return {"crossover": self.crossover, "prune": self.prune, "lookahead": self.lookahead}


@dataclass
class TupleResult:
    params: Params
    graphs: list[tuple[CanonicalForm, Graph]] = field(default_factory=list)
    nodes: int = 0
    seconds: float = 0.0
    units: int = 0
    units_done: int = 0
    leaves: int = 0
    complete: bool = True

    def manifest(self) -> dict:
        return {
            "params": list(self.params.key),
            "graphs": len(self.graphs),
            "nodes": self.nodes,
            "leaves": self.leaves,
            "seconds": round(self.seconds, 3),
            "units": self.units,
            "units_done": self.units_done,
            "complete": self.complete,
        }


def _run_unit(args) -> tuple[int, int, int, bool, list[bytes]]:
    idx, pm, prune, lookahead, max_nodes = args
    res = complete_exhaustive(pm, prune=prune, lookahead=lookahead, max_nodes=max_nodes)
    forms = {canonical_form(g).data for g in res.leaves if accept(g, pm.params)}
    return idx, res.nodes, len(res.leaves), res.complete, sorted(forms)


class Checkpoint:
    """JSON record of finished work units per parameter tuple."""

    def __init__(self, path: Optional[str], options: SearchOptions):
        self.path = path
        self.tag = options.tag()
        self.data: dict = {"options": self.tag, "tuples": {}}
        if path and os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            if data.get("options") != self.tag:
                raise ValueError(f"checkpoint {path} was written with options {data.get('options')}")
            self.data = data

    def entry(self, p: Params) -> dict:
        key = f"{type(p).__name__}:{','.join(map(str, p.key))}"
        return self.data["tuples"].setdefault(key, {"done": {}, "units": None})

    def save(self) -> None:
        if not self.path:
            return
        tmp = self.path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(self.data, fh)
        os.replace(tmp, self.path)


def enumerate_params(p: Params, options: SearchOptions = SearchOptions(),
                     checkpoint: Optional[Checkpoint] = None) -> TupleResult:
    """All graphs with parameters ``p`` up to isomorphism.

    Work units are the non-equivalent prefixes at the crossover depth.  With
    a budget, unfinished units leave ``complete`` false; graphs found so far
    are still returned.
    """
    t0 = time.perf_counter()
    result = TupleResult(p)
    units = prefixes_at(p, options.crossover, options.prune, options.lookahead)
    result.units = len(units)
    entry = checkpoint.entry(p) if checkpoint else {"done": {}, "units": None}
    if entry["units"] not in (None, len(units)):
        raise ValueError(f"checkpoint unit count mismatch for {p}")
    entry["units"] = len(units)
    found: set[bytes] = set()
    for rec in entry["done"].values():
        found.update(g6.encode() for g6 in rec["forms"])
        result.nodes += rec["nodes"]
        result.leaves += rec["leaves"]
    todo = [i for i in range(len(units)) if str(i) not in entry["done"]]
    budget = options.budget
    remaining = budget.max_nodes

    def record(out) -> bool:
        nonlocal remaining
        idx, nodes, leaves, done, forms = out
        result.nodes += nodes
        result.leaves += leaves
        found.update(forms)
        if remaining is not None:
            remaining -= nodes
        if not done:
            result.complete = False
            return False
        entry["done"][str(idx)] = {"nodes": nodes, "leaves": leaves,
                                   "forms": [d.decode() for d in forms]}
        if checkpoint:
            checkpoint.save()
        return True

    def out_of_budget() -> bool:
        if remaining is not None and remaining <= 0:
            return True
        return budget.max_seconds is not None and time.perf_counter() - t0 > budget.max_seconds

    def args(i):
        cap = remaining if remaining is not None else 1 << 62
        return (i, units[i], options.prune, options.lookahead, max(cap, 1))

    if options.jobs > 1 and len(todo) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(options.jobs) as pool:
            # node caps are per unit in parallel mode
            for out in pool.imap_unordered(_run_unit, [args(i) for i in todo]):
                record(out)
                if out_of_budget():
                    result.complete = False
                    pool.terminate()
                    break
    else:
        for i in todo:
            if out_of_budget():
                result.complete = False
                break
            record(_run_unit(args(i)))
    result.units_done = len(entry["done"])
    if result.units_done < result.units:
        result.complete = False
    # stored forms are canonical graph6, so the decoded graph is canonical too
    result.graphs = [(CanonicalForm(d, tuple(range(p.v))), Graph.from_graph6(d))
                     for d in sorted(found)]
    result.seconds = time.perf_counter() - t0
    log.info("%s: %d graphs, %d nodes, %.2fs%s", p, len(result.graphs), result.nodes,
             result.seconds, "" if result.complete else " (incomplete)")
    return result


@dataclass(frozen=True)
class EnumeratedGraph:
    params: DezaParams
    canonical: CanonicalForm
    graph: Graph  # in canonical labeling


@dataclass
class EnumerationRun:
    v: int
    results: list[TupleResult]
    graphs: list[EnumeratedGraph]
    seconds: float

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.results)

    def manifest(self) -> dict:
        return {
            "v": self.v,
            "graphs": len(self.graphs),
            "complete": self.complete,
            "seconds": round(self.seconds, 3),
            "nodes": sum(r.nodes for r in self.results),
            "tuples": [r.manifest() for r in self.results],
        }


def enumerate_all(v: int, options: SearchOptions = SearchOptions(),
                  checkpoint_path: Optional[str] = None,
                  params: Optional[Sequence[DezaParams]] = None) -> EnumerationRun:
    """Strictly Deza graphs on ``v`` vertices, sorted by ``(k, b, a, form)``."""
    if not 2 <= v <= 24:
        raise ValueError("v must lie in 2..24")
    t0 = time.perf_counter()
    ck = Checkpoint(checkpoint_path, options) if checkpoint_path else None
    targets = list(params) if params is not None else feasible_params(v, FilterMode.STRICT)
    results = []
    seen: set[CanonicalForm] = set()
    out: list[EnumeratedGraph] = []
    for p in targets:
        res = enumerate_params(p, options, ck)
        results.append(res)
        for form, g in res.graphs:
            if form in seen:
                continue
            seen.add(form)
            out.append(EnumeratedGraph(p, form, g))
    out.sort(key=lambda e: (e.params.k, e.params.b, e.params.a, e.canonical.data))
    return EnumerationRun(v, results, out, time.perf_counter() - t0)


def enumerate_srg(v: int, k: int, lam: int, mu: int,
                  options: SearchOptions = SearchOptions()) -> list[Graph]:
    """All strongly regular graphs with the given parameters, canonical labeling."""
    p = SRGParams(v, k, lam, mu)
    if k == 0:
        return [Graph.empty(v)]
    if k == v - 1:
        return [Graph.complete(v)] if lam == v - 2 else []
    if (v * k) % 2 or k * (k - lam - 1) != (v - k - 1) * mu:
        return []
    return [g for _, g in enumerate_params(p, options).graphs]
