"""Catalog assembly: enumerate, analyze, tag by construction, and write the
count, record and spectra tables."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import re
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .algebra import Spectrum, scheme_from_closure, spectrum, wl_closure
from .canon import canonical_form, seidel_automorphisms
from .constructions import groups, known, schemes, switching
from .constructions.schemes import NotAScheme
from .feasibility import DezaParams, srg_feasible
from .graph import Children, Graph, children
from .search import SearchOptions, enumerate_all, enumerate_srg

log = logging.getLogger(__name__)

CATALOG_COLUMNS = ["serial", "v", "k", "b", "a", "egv", "int", "ddg", "wl_rank",
                   "constructions", "graph6"]
SPECTRA_COLUMNS = ["serial", "v", "k", "b", "a", "spectrum"]
NO_TAG = "--"


# -- divisible design test --------------------------------------------------

def clique_partition(g: Graph) -> Optional[list[list[int]]]:
    """Components of ``g`` if every component is a complete graph."""
    seen = [False] * g.n
    parts = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = [s] + g.neighbours(s)
        mask = sum(1 << u for u in comp)
        for u in comp:
            if g.rows[u] | (1 << u) != mask:
                return None
            seen[u] = True
        parts.append(sorted(comp))
    return parts


def ddg_flag(ch: Children) -> bool:
    """One child a union of equal complete graphs (at least two, each with at
    least two vertices), the other its complement, i.e. complete multipartite.

    ``A + B + I = J`` makes the second half automatic.
    """
    for g in (ch.graph_a, ch.graph_b):
        parts = clique_partition(g)
        if parts and len(parts) > 1 and len({len(p) for p in parts}) == 1 and len(parts[0]) > 1:
            return True
    return False


# -- records ----------------------------------------------------------------

@dataclass
class CatalogRecord:
    serial: int
    params: DezaParams
    egv: int
    integral: bool
    ddg: bool
    wl_rank: int
    tags: list[str]
    canonical: str  # graph6
    spectrum: Spectrum
    is_scheme: bool = False

    @property
    def key(self) -> tuple:
        return (self.params.v, self.params.k, self.params.b, self.params.a, self.canonical)

    @property
    def graph(self) -> Graph:
        return Graph.from_graph6(self.canonical)

    def row(self) -> dict:
        p = self.params
        return {
            "serial": self.serial, "v": p.v, "k": p.k, "b": p.b, "a": p.a,
            "egv": self.egv, "int": "+" if self.integral else "-",
            "ddg": "+" if self.ddg else "-", "wl_rank": self.wl_rank,
            "constructions": ", ".join(self.tags) if self.tags else NO_TAG,
            "graph6": self.canonical,
        }


def analyze(g: Graph, p: DezaParams, serial: int = 0) -> CatalogRecord:
    """Spectrum, WL-rank, children and ddg flag of a Deza graph."""
    sp = spectrum(g)
    cc = wl_closure(g)
    try:
        scheme_from_closure(cc)
        is_scheme = True
    except NotAScheme:
        is_scheme = False
    ch = children(g, p)
    return CatalogRecord(serial, p, sp.distinct_count, sp.integral, ddg_flag(ch), cc.rank,
                         [], canonical_form(g).data.decode(), sp, is_scheme)


# -- construction tagging ---------------------------------------------------

TAG_ORDER = ["cay", "as", "dss", "gdss", "c6", "c7", "c8.1", "c8.2", "c8.3"]


def _tag_key(tag: str) -> tuple:
    base = tag.split("(")[0]
    return (TAG_ORDER.index(base) if base in TAG_ORDER else len(TAG_ORDER), tag)


@dataclass
class TagBudget:
    gdss_subsets: int = 200  # subsets tried per source graph
    gdss_involutions: int = 16
    gdss_pairs: int = 6  # swapped pairs per involution chosen first
    gdss_pair_sets: int = 100_000  # involutions tried per source graph
    seidel_limit: int = 300  # switchings tried per source graph


class Tagger:
    """Collects construction witnesses keyed by canonical graph6."""

    def __init__(self, budget: TagBudget = TagBudget()):
        self.budget = budget
        self.witness: dict[str, dict[str, dict]] = defaultdict(dict)
        self._srgs: dict[int, list[Graph]] = {}
        self._forms: dict[tuple[int, ...], str] = {}  # labelled rows -> canonical graph6
        self.notes: list[str] = []

    def add(self, g: Graph, tag: str, cert: dict) -> None:
        key = self._forms.get(g.rows)
        if key is None:
            key = self._forms[g.rows] = canonical_form(g).data.decode()
        self.witness[key].setdefault(tag, cert)

    def srgs(self, v: int) -> list[Graph]:
        """Every non-trivial strongly regular graph on ``v`` vertices."""
        if v not in self._srgs:
            out = []
            for p in srg_feasible(v):
                out.extend(enumerate_srg(*p))
            self._srgs[v] = out
        return self._srgs[v]

    def _add_outcome(self, o, tag: str, cert: dict) -> None:
        if isinstance(o, switching.Certified) and (o.graph.rows in self._forms or o.strictly_deza):
            self.add(o.graph, tag, cert)

    def run(self, v: int, tuples: Iterable[DezaParams]) -> None:
        for p in tuples:
            for c in groups.cayley_search(p.v, p.k, p.b, p.a):
                self.add(c.graph, "cay", {"group": c.group, "order": p.v,
                                          "connection_set": list(c.connection_set)})
        self._schemes(v)
        for srg in self.srgs(v):
            self._switchings(srg)
        for x in range(2, v // 2 + 1):
            if v % (2 * x) == 0:
                y = v // (2 * x)
                self._add_outcome(switching.lex_multipartite_k2(x, y), "c8.1", {"x": x, "y": y})
        if v % 2 == 0:
            for srg in self.srgs(v // 2):
                self._lex(srg)

    def _schemes(self, v: int) -> None:
        for name in scheme_names(v, self.srgs):
            s = scheme_by_name(name)
            for size in range(1, s.d + 1):
                for f in combinations(range(1, s.d + 1), size):
                    res = schemes.scheme_fusion(s, f)
                    if res.params is not None:
                        self._add_outcome(switching.Certified(res.graph, res.params, "as"), "as",
                                          {"scheme": name, "classes": list(f)})

    def _switchings(self, srg: Graph) -> None:
        c = switching._srg(srg)
        g6 = srg.to_graph6()
        limit = self.budget.seidel_limit
        if c.k != c.mu and c.lam != c.mu:
            for s in seidel_automorphisms(srg, limit=limit):
                self._add_outcome(switching.dual_seidel(srg, s), "dss",
                                  {"source": g6, "sigma": list(s)})
        for s in seidel_automorphisms(srg, fixed_point_free=True, limit=limit):
            if c.lam == c.mu:
                self._add_outcome(switching.srg_plus_p(srg, s), "c6", {"source": g6, "sigma": list(s)})
            self._add_outcome(switching.p_m_plus_i(srg, s), "c7", {"source": g6, "sigma": list(s)})
        rep = switching.gdss_search(srg, max_subsets=self.budget.gdss_subsets,
                                    max_involutions=self.budget.gdss_involutions,
                                    max_pairs=self.budget.gdss_pairs,
                                    max_pair_sets=self.budget.gdss_pair_sets)
        for o in rep.results:
            self.add(o.graph, "gdss", {"source": g6, **_jsonable(o.inputs)})

    def _lex(self, srg: Graph) -> None:
        c = switching._srg(srg)
        if c.lam != c.mu - 1:
            return
        o = switching.lex_srg_k2(srg)
        if not isinstance(o, switching.Certified):
            return
        self._add_outcome(o, "c8.2", {"source": srg.to_graph6()})
        g82 = o.graph
        for s in seidel_automorphisms(g82, limit=self.budget.seidel_limit):
            self._add_outcome(switching.lex_then_switch(g82, s), "c8.3",
                              {"source": srg.to_graph6(), "sigma": list(s)})

    def gdss_from_catalog(self, records: Sequence[CatalogRecord]) -> None:
        for r in records:
            rep = switching.gdss_search(r.graph, max_subsets=self.budget.gdss_subsets,
                                        max_involutions=self.budget.gdss_involutions,
                                        max_pairs=self.budget.gdss_pairs,
                                        max_pair_sets=self.budget.gdss_pair_sets)
            for o in rep.results:
                self.add(o.graph, f"gdss({r.serial})",
                         {"source": r.canonical, "source_serial": r.serial, **_jsonable(o.inputs)})

    def tags_for(self, canonical: str) -> dict[str, dict]:
        return self.witness.get(canonical, {})


def _jsonable(d: dict) -> dict:
    return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def replay(tag: str, cert: dict) -> Graph:
    """Rebuild the graph a certificate describes."""
    base = tag.split("(")[0]
    if base == "cay":
        g = next(t for t in groups.groups_of_order(cert["order"]) if t.name == cert["group"])
        out = groups.cayley(g, cert["connection_set"])
        return out.graph  # type: ignore[union-attr]
    if base == "as":
        if "wl" in cert:
            return Graph.from_graph6(cert["wl"])
        name = cert["scheme"]
        s = scheme_by_name(name)
        return schemes.scheme_fusion(s, cert["classes"]).graph
    if base == "c8.1":
        o = switching.lex_multipartite_k2(cert["x"], cert["y"])
    elif base == "c8.2":
        o = switching.lex_srg_k2(Graph.from_graph6(cert["source"]))
    elif base == "c8.3":
        g82 = switching.lexicographic(Graph.from_graph6(cert["source"]), Graph.complete(2))
        o = switching.lex_then_switch(g82, cert["sigma"])
    else:
        src = Graph.from_graph6(cert["source"])
        if base == "dss":
            o = switching.dual_seidel(src, cert["sigma"])
        elif base == "gdss":
            o = switching.gen_dual_seidel(src, cert["subset"], cert["sigma"])
        elif base == "c6":
            o = switching.srg_plus_p(src, cert["sigma"])
        elif base == "c7":
            o = switching.p_m_plus_i(src, cert["sigma"])
        else:
            raise ValueError(f"unknown construction {tag}")
    if not isinstance(o, switching.Certified):
        raise ValueError(f"certificate for {tag} does not replay: {o}")
    return o.graph


def scheme_names(v: int, srgs: Callable[[int], list[Graph]]) -> list[str]:
    """Explicit symmetric schemes on ``v`` points whose fusions are tried."""
    names = [f"R({m},{v // m})" for m in range(2, v // 2 + 1) if v % m == 0]
    if v % 3 == 1 and all(v % q for q in range(2, v)):
        names.append(f"Cycl({v})")
    if v == 14:
        names.append("distance:heawood")
    if v == 21:
        names.append("distance:heawood-line")
    for n in range(2, v // 4 + 1):
        if v % n == 0:
            for srg in srgs(v // n):
                c = switching._srg(srg)
                if c.mu > 0 and srg.n - 2 * c.k + c.lam > 0:  # primitive
                    names.append(f"product:{n}:{srg.to_graph6()}")
    return names


def scheme_by_name(name: str) -> schemes.AssociationScheme:
    if name.startswith("R("):
        m, n = map(int, name[2:-1].split(","))
        return schemes.rectangular_scheme(m, n)
    if name.startswith("Cycl("):
        return schemes.cyclotomic_scheme(int(name[5:-1]))
    if name == "distance:heawood":
        return schemes.distance_scheme(known.heawood_graph())
    if name == "distance:heawood-line":
        return schemes.distance_scheme(known.line_graph(known.heawood_graph()))
    if name.startswith("product:"):
        _, n, g6 = name.split(":", 2)
        return schemes.product_scheme(Graph.from_graph6(g6), int(n))
    raise ValueError(f"unknown scheme {name}")


# -- catalog ----------------------------------------------------------------

@dataclass
class Catalog:
    records: list[CatalogRecord]
    counts: dict[int, int]
    complete: dict[int, bool]
    manifest: dict
    certificates: dict[int, dict[str, dict]] = field(default_factory=dict)

    @property
    def is_complete(self) -> bool:
        return all(self.complete.values())

    def integral_records(self) -> list[CatalogRecord]:
        return [r for r in self.records if r.integral]


def build_catalog(v_max: int, v_min: int = 8, options: SearchOptions = SearchOptions(),
                  tag: bool = True, budget: TagBudget = TagBudget(),
                  checkpoint_dir: Optional[str] = None,
                  progress: Optional[Callable[[str], None]] = None) -> Catalog:
    """Enumerate ``v_min..v_max``, analyze every graph and tag constructions."""
    if v_max > 24:
        raise ValueError("v_max must be at most 24")
    say = progress or (lambda msg: log.info(msg))
    t0 = time.perf_counter()
    records: list[CatalogRecord] = []
    counts: dict[int, int] = {}
    complete: dict[int, bool] = {}
    runs = []
    tagger = Tagger(budget)
    for v in range(v_min, v_max + 1):
        ck = os.path.join(checkpoint_dir, f"v{v}.json") if checkpoint_dir else None
        run = enumerate_all(v, options, checkpoint_path=ck)
        runs.append(run.manifest())
        counts[v] = len(run.graphs)
        complete[v] = run.complete
        say(f"v={v}: {len(run.graphs)} graphs{'' if run.complete else ' (INCOMPLETE)'}"
            f" in {run.seconds:.1f}s")
        for e in run.graphs:
            records.append(analyze(e.graph, e.params))
        if tag:
            tagger.run(v, sorted({e.params for e in run.graphs}))
    records.sort(key=lambda r: r.key)
    for i, r in enumerate(records, 1):
        r.serial = i
    certs: dict[int, dict[str, dict]] = {}
    if tag:
        tagger.gdss_from_catalog(records)
        for r in records:
            found = dict(tagger.tags_for(r.canonical))
            if r.is_scheme:
                found.setdefault("as", {"scheme": "wl-closure", "wl": r.canonical})
            r.tags = sorted(found, key=_tag_key)
            certs[r.serial] = found
    manifest = {
        "v_min": v_min, "v_max": v_max,
        "options": options.tag(),
        "budget": {"max_nodes": options.budget.max_nodes,
                   "max_seconds": options.budget.max_seconds},
        "tag_budget": vars(budget) if tag else None,
        "complete": all(complete.values()),
        "counts": {str(v): c for v, c in counts.items()},
        "seconds": round(time.perf_counter() - t0, 3),
        "runs": runs,
    }
    return Catalog(records, counts, complete, manifest, certs)


# -- files ------------------------------------------------------------------

def write_catalog(cat: Catalog, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "catalog.csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, CATALOG_COLUMNS)
        w.writeheader()
        for r in cat.records:
            w.writerow(r.row())
    with open(os.path.join(out_dir, "spectra.csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, SPECTRA_COLUMNS)
        w.writeheader()
        for r in cat.integral_records():
            p = r.params
            w.writerow({"serial": r.serial, "v": p.v, "k": p.k, "b": p.b, "a": p.a,
                        "spectrum": r.spectrum.format(p.k)})
    with open(os.path.join(out_dir, "counts.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["v", "count", "complete"])
        for v in sorted(cat.counts):
            w.writerow([v, cat.counts[v], "yes" if cat.complete[v] else "no"])
    gdir = os.path.join(out_dir, "graphs")
    os.makedirs(gdir, exist_ok=True)
    by_tuple: dict[tuple, list[str]] = defaultdict(list)
    for r in cat.records:
        by_tuple[r.params.key].append(r.canonical)
    for key, g6s in sorted(by_tuple.items()):
        with open(os.path.join(gdir, "deza_{}_{}_{}_{}.g6".format(*key)), "w") as fh:
            fh.write("".join(g + "\n" for g in g6s))
    with open(os.path.join(out_dir, "certificates.json"), "w") as fh:
        json.dump({str(k): v for k, v in cat.certificates.items()}, fh, indent=1, sort_keys=True)
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(cat.manifest, fh, indent=1, sort_keys=True)


class SchemaError(ValueError):
    pass


def read_catalog_csv(source) -> list[dict]:
    """Rows of a catalog CSV (path or file object), validated against the schema.

    ``graph6`` may be empty (reference tables carry no graphs)."""
    fh = open(source, newline="") if isinstance(source, (str, os.PathLike)) else source
    try:
        reader = csv.DictReader(fh)
        missing = set(CATALOG_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise SchemaError(f"missing columns: {sorted(missing)}")
        rows = []
        for raw in reader:
            try:
                row = {c: int(raw[c]) for c in ("serial", "v", "k", "b", "a", "egv", "wl_rank")}
            except ValueError as exc:
                raise SchemaError(f"bad integer in row {raw}") from exc
            row["int"] = raw["int"].strip() == "+"
            row["ddg"] = raw["ddg"].strip() == "+"
            tags = raw["constructions"].strip()
            row["constructions"] = [] if tags in ("", NO_TAG) else split_tags(tags)
            row["graph6"] = raw["graph6"].strip()
            rows.append(row)
        return rows
    finally:
        if fh is not source:
            fh.close()


def split_tags(text: str) -> list[str]:
    """``"cay, gdss(32, 35)"`` -> ``["cay", "gdss(32)", "gdss(35)"]``."""
    out = []
    for name, args in re.findall(r"([^,()\s]+)(?:\(([^)]*)\))?", text):
        if args:
            out.extend(f"{name}({a.strip()})" for a in args.split(","))
        else:
            out.append(name)
    return out


def reference_catalog() -> list[dict]:
    """The reference record table bundled with the package (no graphs)."""
    text = resources.files("deza").joinpath("data/reference_catalog.csv").read_text()
    return read_catalog_csv(io.StringIO(text))


def reference_spectra() -> dict[int, str]:
    text = resources.files("deza").joinpath("data/reference_spectra.csv").read_text()
    return {int(r["serial"]): r["spectrum"] for r in csv.DictReader(io.StringIO(text))}


@dataclass
class DiffReport:
    count_deltas: dict[int, tuple[int, int]]  # v -> (ours, reference)
    tuple_deltas: dict[tuple, tuple[int, int]]
    invariant_deltas: dict[tuple, tuple[list, list]]  # params -> (ours only, reference only)
    only_ours: list[str]  # graph6
    only_reference: list[str]

    @property
    def empty(self) -> bool:
        return not (self.count_deltas or self.tuple_deltas or self.invariant_deltas
                    or self.only_ours or self.only_reference)

    def lines(self) -> list[str]:
        out = []
        for v, (a, b) in sorted(self.count_deltas.items()):
            out.append(f"v={v}: ours {a}, reference {b}")
        for key, (a, b) in sorted(self.tuple_deltas.items()):
            out.append(f"{key}: ours {a}, reference {b}")
        for key, (a, b) in sorted(self.invariant_deltas.items()):
            out.append(f"{key}: invariants only ours {a}, only reference {b}")
        out += [f"only ours: {g}" for g in self.only_ours]
        out += [f"only reference: {g}" for g in self.only_reference]
        return out


def diff_catalogs(ours: list[dict], reference: list[dict],
                  v_range: Optional[Iterable[int]] = None) -> DiffReport:
    """Compare two catalogs by counts, per-tuple counts, per-tuple multisets
    of ``(egv, int, ddg, wl_rank)`` and graph sets (when both carry graphs).
    Serial numbers are ignored."""
    if v_range is not None:
        keep = set(v_range)
        ours = [r for r in ours if r["v"] in keep]
        reference = [r for r in reference if r["v"] in keep]
    vs = sorted({r["v"] for r in ours} | {r["v"] for r in reference})
    count_deltas = {}
    for v in vs:
        a = sum(r["v"] == v for r in ours)
        b = sum(r["v"] == v for r in reference)
        if a != b:
            count_deltas[v] = (a, b)

    def key(r):
        return (r["v"], r["k"], r["b"], r["a"])

    def inv(r):
        return (r["egv"], r["int"], r["ddg"], r["wl_rank"])

    tuple_deltas = {}
    invariant_deltas = {}
    for t in sorted({key(r) for r in ours} | {key(r) for r in reference}):
        mine = Counter(inv(r) for r in ours if key(r) == t)
        theirs = Counter(inv(r) for r in reference if key(r) == t)
        if sum(mine.values()) != sum(theirs.values()):
            tuple_deltas[t] = (sum(mine.values()), sum(theirs.values()))
        if mine != theirs:
            invariant_deltas[t] = (sorted((mine - theirs).elements()),
                                   sorted((theirs - mine).elements()))
    only_ours: list[str] = []
    only_ref: list[str] = []
    if all(r["graph6"] for r in ours) and all(r["graph6"] for r in reference) and ours and reference:
        # compare multisets of isomorphism classes
        def forms(rows):
            return Counter(canonical_form(Graph.from_graph6(r["graph6"])).data.decode() for r in rows)

        a, b = forms(ours), forms(reference)
        only_ours = sorted((a - b).elements())
        only_ref = sorted((b - a).elements())
    return DiffReport(count_deltas, tuple_deltas, invariant_deltas, only_ours, only_ref)
