from __future__ import annotations

import csv
import io
import json

import pytest

from deza import catalog as cat
from deza.algebra import spectrum
from deza.canon import canonical_form
from deza.feasibility import DezaParams
from deza.graph import Children, Graph, children, classify_regular_deza
from deza.search import SearchOptions, enumerate_all

BUDGET = cat.TagBudget(gdss_subsets=60, gdss_involutions=8, seidel_limit=100)


@pytest.fixture(scope="module")
def small_catalog(tmp_path_factory):
    c = cat.build_catalog(12, budget=BUDGET)
    out = tmp_path_factory.mktemp("cat")
    cat.write_catalog(c, str(out))
    return c, out


def _disjoint_cliques(sizes):
    edges, start = [], 0
    for s in sizes:
        edges += [(start + i, start + j) for i in range(s) for j in range(i + 1, s)]
        start += s
    return Graph.from_edges(start, edges)


def test_ddg_flag_examples():
    run = {e.params.key: e.graph for e in enumerate_all(8).graphs}
    g1 = run[(8, 4, 2, 0)]
    assert cat.ddg_flag(children(g1, DezaParams(8, 4, 2, 0)))
    g2 = run[(8, 4, 2, 1)]
    assert not cat.ddg_flag(children(g2, DezaParams(8, 4, 2, 1)))
    uneven = _disjoint_cliques([2, 3, 3])
    assert not cat.ddg_flag(Children(uneven, uneven.complement()))
    even = _disjoint_cliques([2, 2, 2, 2])
    assert cat.ddg_flag(Children(even.complement(), even))
    single = _disjoint_cliques([1] * 6)  # cliques of size one
    assert not cat.ddg_flag(Children(single, single.complement()))


def test_clique_partition():
    assert cat.clique_partition(_disjoint_cliques([3, 2])) == [[0, 1, 2], [3, 4]]
    assert cat.clique_partition(Graph.cycle(4)) is None


def test_reference_tables():
    ref = cat.reference_catalog()
    assert len(ref) == 139
    assert [r["serial"] for r in ref] == list(range(1, 140))
    assert sum(r["int"] for r in ref) == 30
    assert all(r["ddg"] for r in ref if "c8.1" in r["constructions"])
    spectra = cat.reference_spectra()
    assert len(spectra) == 30
    assert set(spectra) == {r["serial"] for r in ref if r["int"]}
    counts = {}
    for r in ref:
        counts[r["v"]] = counts.get(r["v"], 0) + 1
    assert [counts.get(v, 0) for v in range(8, 22)] == [3, 2, 1, 0, 6, 1, 1, 1, 10, 3, 13, 11, 56, 31]


def test_records_sorted_and_contiguous(small_catalog):
    c, _ = small_catalog
    assert [r.serial for r in c.records] == list(range(1, len(c.records) + 1))
    assert [r.key for r in c.records] == sorted(r.key for r in c.records)
    assert c.counts == {8: 3, 9: 2, 10: 1, 11: 0, 12: 6}
    assert c.is_complete and c.manifest["complete"]


def test_record_invariants(small_catalog):
    c, _ = small_catalog
    for r in c.records:
        g = r.graph
        sp = spectrum(g)
        assert (sp.distinct_count, sp.integral) == (r.egv, r.integral)
        assert classify_regular_deza(g).params == r.params
        assert canonical_form(g).data.decode() == r.canonical
        if "c8.1" in r.tags:
            assert r.ddg


def test_matches_reference(small_catalog):
    _, out = small_catalog
    ours = cat.read_catalog_csv(str(out / "catalog.csv"))
    rep = cat.diff_catalogs(ours, cat.reference_catalog(), v_range=range(8, 13))
    assert rep.empty, rep.lines()


def test_certificates_replay(small_catalog):
    c, out = small_catalog
    certs = json.load(open(out / "certificates.json"))
    assert certs
    for r in c.records:
        for tag, cert in certs[str(r.serial)].items():
            g = cat.replay(tag, cert)
            assert canonical_form(g).data.decode() == r.canonical, (r.serial, tag)
        assert sorted(certs[str(r.serial)]) == sorted(r.tags)


def test_expected_tags(small_catalog):
    c, _ = small_catalog
    tags = {r.serial: set(r.tags) for r in c.records}
    by_key = {}
    for r in c.records:
        by_key.setdefault(r.params.key, []).append(set(r.tags))
    assert {"cay", "as"} <= by_key[(8, 4, 2, 0)][0]
    assert {"cay", "as", "c8.1"} <= by_key[(8, 5, 4, 2)][0]
    assert any({"dss", "gdss"} <= t for t in by_key[(9, 4, 2, 1)])
    assert any("c8.2" in t for t in by_key[(10, 5, 4, 2)])
    assert tags


def test_output_files(small_catalog):
    c, out = small_catalog
    rows = list(csv.DictReader(open(out / "counts.csv")))
    assert [(int(r["v"]), int(r["count"])) for r in rows] == sorted(c.counts.items())
    spectra = list(csv.DictReader(open(out / "spectra.csv")))
    assert len(spectra) == sum(r.integral for r in c.records)
    ref = cat.reference_spectra()
    refrows = {(r["v"], r["k"], r["b"], r["a"], r["egv"], r["ddg"], r["wl_rank"]): r["serial"]
               for r in cat.reference_catalog() if r["int"]}
    ours = {r.serial: r for r in c.records}
    for row in spectra:
        r = ours[int(row["serial"])]
        key = (r.params.v, r.params.k, r.params.b, r.params.a, r.egv, r.ddg, r.wl_rank)
        assert row["spectrum"] == ref[refrows[key]]
    files = sorted(p.name for p in (out / "graphs").iterdir())
    assert "deza_8_4_2_0.g6" in files
    for name in files:
        for line in open(out / "graphs" / name):
            assert classify_regular_deza(Graph.from_graph6(line.strip())).params.key == \
                tuple(int(x) for x in name[5:-3].split("_"))


def test_deterministic_across_parallelism(small_catalog, tmp_path):
    _, out = small_catalog
    c2 = cat.build_catalog(12, options=SearchOptions(jobs=2), budget=BUDGET)
    cat.write_catalog(c2, str(tmp_path))
    for name in ("catalog.csv", "spectra.csv", "counts.csv", "certificates.json"):
        assert (tmp_path / name).read_bytes() == (out / name).read_bytes()


def test_diff_identical_and_corrupted():
    ref = cat.reference_catalog()
    assert cat.diff_catalogs(ref, ref).empty
    bad = [dict(r) for r in ref]
    bad[5]["wl_rank"] += 1
    rep = cat.diff_catalogs(bad, ref)
    assert list(rep.invariant_deltas) == [(bad[5]["v"], bad[5]["k"], bad[5]["b"], bad[5]["a"])]
    assert not rep.count_deltas and not rep.tuple_deltas
    fewer = ref[:-1]
    rep = cat.diff_catalogs(fewer, ref)
    assert rep.count_deltas == {21: (30, 31)}


def test_diff_compares_graphs(small_catalog):
    _, out = small_catalog
    ours = cat.read_catalog_csv(str(out / "catalog.csv"))
    other = [dict(r) for r in ours]
    # relabel one graph: still the same isomorphism class
    g = Graph.from_graph6(other[0]["graph6"])
    other[0]["graph6"] = g.relabel(list(reversed(range(g.n)))).to_graph6()
    assert cat.diff_catalogs(ours, other).empty
    other[0]["graph6"] = other[1]["graph6"]
    rep = cat.diff_catalogs(ours, other)
    assert rep.only_ours and rep.only_reference


def test_schema_errors():
    with pytest.raises(cat.SchemaError):
        cat.read_catalog_csv(io.StringIO("serial,v,k\n1,8,4\n"))
    header = ",".join(cat.CATALOG_COLUMNS)
    with pytest.raises(cat.SchemaError):
        cat.read_catalog_csv(io.StringIO(header + "\nx,8,4,2,0,4,+,+,4,--,\n"))


def test_vmax_limit():
    with pytest.raises(ValueError):
        cat.build_catalog(25)
