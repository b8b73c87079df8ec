"""Command-line interface: ``deza params|enum|analyze|construct|catalog|diff``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from itertools import combinations
from typing import Optional, Sequence

from . import catalog as cat
from .algebra import spectrum, wl_rank
from .canon import seidel_automorphisms
from .constructions import groups, schemes, switching
from .feasibility import DezaParams, FilterMode, feasible_params
from .graph import Deza, Graph, StronglyRegular, children, classify_regular_deza, diameter
from .search import Budget, SearchOptions, enumerate_all

log = logging.getLogger("deza")


def _tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _read_graphs(path: str) -> list[Graph]:
    text = sys.stdin.read() if path == "-" else open(path).read()
    out = []
    for line in text.split():
        if line.startswith(">>graph6<<"):
            line = line[len(">>graph6<<"):]
        out.append(Graph.from_graph6(line))
    return out


def _graph_arg(text: str) -> Graph:
    """A graph6 string, or a file whose first line is one."""
    try:
        return Graph.from_graph6(text)
    except Exception:
        return _read_graphs(text)[0]


def _options(args) -> SearchOptions:
    return SearchOptions(crossover=args.crossover, prune=not args.no_prune, jobs=args.jobs,
                         budget=Budget(args.max_nodes, args.max_seconds))


# -- subcommands ------------------------------------------------------------

def cmd_params(args) -> int:
    mode = FilterMode.ALL if args.relaxed else FilterMode(args.mode)
    ps = feasible_params(args.v, mode)
    for p in ps:
        print(f"{p.v},{p.k},{p.b},{p.a}  alpha={p.alpha} beta={p.beta}")
    print(f"# {len(ps)} tuples ({mode.value})", file=sys.stderr)
    return 0


def cmd_enum(args) -> int:
    params = None
    if args.params:
        params = [DezaParams(*t) for t in args.params]
        if any(p.v != args.v for p in params):
            print("--params must match --v", file=sys.stderr)
            return 2
    run = enumerate_all(args.v, _options(args), checkpoint_path=args.checkpoint, params=params)
    out = open(args.out, "w") if args.out else sys.stdout
    for e in run.graphs:
        out.write(e.graph.to_graph6() + "\n")
    if args.out:
        out.close()
    manifest = run.manifest()
    if args.manifest:
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True)
    print(f"# v={args.v}: {len(run.graphs)} graphs, complete={run.complete}, "
          f"{run.seconds:.1f}s", file=sys.stderr)
    return 1 if args.strict and not run.complete else 0


def analyze_graph(g: Graph, want: set[str]) -> dict:
    c = classify_regular_deza(g)
    rec: dict = {"graph6": g.to_graph6(), "n": g.n}
    if isinstance(c, Deza):
        p = c.params
        rec.update(kind="deza", params=list(p.key), alpha=p.alpha, beta=p.beta,
                   diameter=diameter(g))
    elif isinstance(c, StronglyRegular):
        rec.update(kind="srg", params=[c.v, c.k, c.lam, c.mu])
    else:
        rec.update(kind=type(c).__name__)
    if "spectrum" in want:
        sp = spectrum(g)
        rec.update(spectrum=[[val, m] for val, m in sp.entries], egv=sp.distinct_count,
                   integral=sp.integral)
    if "wl_rank" in want:
        rec["wl_rank"] = wl_rank(g)
    if isinstance(c, Deza) and want & {"children", "ddg"}:
        ch = children(g, c.params)
        if "children" in want:
            rec["children"] = {"a": ch.graph_a.to_graph6(), "b": ch.graph_b.to_graph6()}
        if "ddg" in want:
            rec["ddg"] = cat.ddg_flag(ch)
    return rec


def cmd_analyze(args) -> int:
    want = {name for name in ("spectrum", "wl_rank", "children", "ddg") if getattr(args, name)}
    if not want:
        want = {"spectrum", "wl_rank", "children", "ddg"}
    for g in _read_graphs(args.input):
        print(json.dumps(analyze_graph(g, want)))
    return 0


def _emit(g: Graph, cert: dict) -> None:
    p = switching.deza_parameters(g)
    cert = dict(cert, params=list(p.key) if p else None)
    print(g.to_graph6())
    print(json.dumps(cert, sort_keys=True), file=sys.stderr)


def _emit_outcome(o, name: str, inputs: dict) -> int:
    if isinstance(o, switching.Rejected):
        print(f"rejected: {o.reason}", file=sys.stderr)
        return 1
    _emit(o.graph, {"construction": name, **inputs,
                    **cat._jsonable(o.inputs), "strictly_deza": o.strictly_deza})
    return 0


def cmd_construct(args) -> int:
    kind = args.kind
    if kind == "cayley":
        v, k, b, a = args.params
        found = groups.cayley_search(v, k, b, a)
        for c in found:
            _emit(c.graph, {"construction": "cay", "group": c.group,
                            "connection_set": list(c.connection_set)})
        print(f"# {len(found)} Cayley graphs", file=sys.stderr)
        return 0
    if kind in ("scheme", "rect", "cycl", "drg"):
        if kind == "rect":
            name = f"R({args.m},{args.n})"
        elif kind == "cycl":
            name = f"Cycl({args.q})"
        elif kind == "drg":
            name = f"distance:{args.graph}"
        else:
            name = args.name
        s = cat.scheme_by_name(name)
        fusions = [args.classes] if args.classes else [
            f for size in range(1, s.d + 1)
            for f in combinations(range(1, s.d + 1), size)]
        for f in fusions:
            res = schemes.scheme_fusion(s, f)
            if res.params is not None:
                _emit(res.graph, {"construction": "as", "scheme": name, "classes": list(f)})
        return 0
    if kind in ("dss", "c6", "c7"):
        g = _graph_arg(args.graph)
        fpf = kind != "dss"
        sigmas = [args.sigma] if args.sigma else seidel_automorphisms(g, fixed_point_free=fpf,
                                                                      limit=args.limit)
        fn = {"dss": switching.dual_seidel, "c6": switching.srg_plus_p,
              "c7": switching.p_m_plus_i}[kind]
        code = 1
        for s in sigmas:
            try:
                o = fn(g, s)
            except ValueError as exc:
                print(f"rejected: {exc}", file=sys.stderr)
                return 1
            if _emit_outcome(o, kind, {"source": g.to_graph6()}) == 0:
                code = 0
        return code
    if kind == "gdss":
        g = _graph_arg(args.graph)
        rep = switching.gdss_search(g, max_subsets=args.max_subsets, max_pairs=args.max_pairs)
        for o in rep.results:
            _emit_outcome(o, "gdss", {"source": g.to_graph6()})
        status = "exhausted" if rep.exhausted else "not found within budget" if not rep.results \
            else "budget reached"
        print(f"# {len(rep.results)} graphs, {rep.subsets_tried} subsets tried ({status})",
              file=sys.stderr)
        return 0
    if kind == "lex":
        if args.graph:
            g = _graph_arg(args.graph)
            o = switching.lex_srg_k2(g)
            if args.switch and isinstance(o, switching.Certified):
                code = 1
                for s in seidel_automorphisms(o.graph, limit=args.limit):
                    if _emit_outcome(switching.lex_then_switch(o.graph, s), "c8.3",
                                     {"source": g.to_graph6()}) == 0:
                        code = 0
                return code
            return _emit_outcome(o, "c8.2", {"source": g.to_graph6()})
        return _emit_outcome(switching.lex_multipartite_k2(args.x, args.y), "c8.1",
                             {"x": args.x, "y": args.y})
    raise AssertionError(kind)


def cmd_catalog(args) -> int:
    catalog = cat.build_catalog(
        args.vmax, v_min=args.vmin, options=_options(args), tag=not args.no_tags,
        budget=cat.TagBudget(gdss_subsets=args.gdss_subsets),
        checkpoint_dir=args.checkpoint_dir,
        progress=lambda msg: print(msg, file=sys.stderr))
    cat.write_catalog(catalog, args.out)
    total = sum(catalog.counts.values())
    print(f"# {total} graphs written to {args.out}, complete={catalog.is_complete}",
          file=sys.stderr)
    return 1 if args.strict and not catalog.is_complete else 0


def _load(path: str) -> list[dict]:
    return cat.reference_catalog() if path == "reference" else cat.read_catalog_csv(path)


def cmd_diff(args) -> int:
    try:
        a, b = _load(args.a), _load(args.b)
    except cat.SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    vr = None
    if args.vmin or args.vmax:
        vr = range(args.vmin or 0, (args.vmax or 10 ** 6) + 1)
    rep = cat.diff_catalogs(a, b, vr)
    for line in rep.lines():
        print(line)
    if rep.empty:
        print("no differences")
    return 0 if rep.empty else 1


# -- parser -----------------------------------------------------------------

def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--no-prune", action="store_true", help="disable partial-equivalence pruning")
    p.add_argument("--crossover", type=int, default=5, help="prefix depth of work units")
    p.add_argument("--max-nodes", type=int, default=None, help="node budget per tuple")
    p.add_argument("--max-seconds", type=float, default=None, help="time budget per tuple")
    p.add_argument("--strict", action="store_true", help="nonzero exit code if incomplete")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deza", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="feasible parameter tuples")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in FilterMode], default="strict")
    p.add_argument("--relaxed", action="store_true", help="same as --mode all")
    p.set_defaults(fn=cmd_params)

    p = sub.add_parser("enum", help="enumerate strictly Deza graphs on v vertices")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--params", type=_tuple, action="append", help="v,k,b,a (repeatable)")
    p.add_argument("--checkpoint", help="JSON checkpoint file (resumable)")
    p.add_argument("--out", help="graph6 output file (default stdout)")
    p.add_argument("--manifest", help="write the run manifest here")
    _search_flags(p)
    p.set_defaults(fn=cmd_enum)

    p = sub.add_parser("analyze", help="invariants of graphs in a graph6 file")
    p.add_argument("--in", dest="input", required=True, help="graph6 file, '-' for stdin")
    p.add_argument("--spectrum", action="store_true")
    p.add_argument("--wl-rank", dest="wl_rank", action="store_true")
    p.add_argument("--children", action="store_true")
    p.add_argument("--ddg", action="store_true")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("construct", help="build graphs from a construction family")
    csub = p.add_subparsers(dest="kind", required=True)
    c = csub.add_parser("cayley", help="all Cayley graphs with given parameters")
    c.add_argument("params", type=_tuple, help="v,k,b,a")
    c = csub.add_parser("scheme", help="fusions of a named scheme")
    c.add_argument("name", help="R(m,n), Cycl(q), distance:heawood, distance:heawood-line, "
                                "product:n:<graph6>")
    c.add_argument("--classes", type=_tuple)
    c = csub.add_parser("rect", help="fusions of the rectangular scheme R(m,n)")
    c.add_argument("m", type=int)
    c.add_argument("n", type=int)
    c.add_argument("--classes", type=_tuple)
    c = csub.add_parser("cycl", help="fusions of the 3-class cyclotomic scheme on GF(q)")
    c.add_argument("q", type=int)
    c.add_argument("--classes", type=_tuple)
    c = csub.add_parser("drg", help="fusions of a distance-regular graph's distance scheme")
    c.add_argument("graph", choices=["heawood", "heawood-line"])
    c.add_argument("--classes", type=_tuple)
    for name in ("dss", "c6", "c7"):
        c = csub.add_parser(name, help=f"{name} from a strongly regular graph")
        c.add_argument("graph", help="graph6 string or file")
        c.add_argument("--sigma", type=_tuple, help="involution as an image list")
        c.add_argument("--limit", type=int, default=1000)
    c = csub.add_parser("gdss", help="budgeted generalized dual Seidel switching search")
    c.add_argument("graph", help="graph6 string or file")
    c.add_argument("--max-subsets", type=int, default=2000)
    c.add_argument("--max-pairs", type=int, default=6, help="swapped pairs per involution")
    c = csub.add_parser("lex", help="lexicographic products with K2")
    c.add_argument("--x", type=int, default=2)
    c.add_argument("--y", type=int, default=2)
    c.add_argument("--graph", help="strongly regular graph G (G[K2], tag c8.2, instead of K_{x x y}[K2])")
    c.add_argument("--switch", action="store_true", help="also apply Seidel switchings (tag c8.3)")
    c.add_argument("--limit", type=int, default=1000)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("catalog", help="build the full catalog")
    p.add_argument("--vmax", type=int, required=True)
    p.add_argument("--vmin", type=int, default=8)
    p.add_argument("--out", required=True)
    p.add_argument("--checkpoint-dir")
    p.add_argument("--no-tags", action="store_true", help="skip construction tagging")
    p.add_argument("--gdss-subsets", type=int, default=cat.TagBudget().gdss_subsets)
    _search_flags(p)
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("diff", help="compare two catalog CSVs ('reference' for the bundled table)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--vmin", type=int)
    p.add_argument("--vmax", type=int)
    p.set_defaults(fn=cmd_diff)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
