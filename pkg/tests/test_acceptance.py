"""Acceptance criteria, one test group per criterion.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  The v = 20, 21 checks and the integral census
read the stored full-catalog artifact (``artifacts/catalog``, or the directory
in ``DEZA_ARTIFACT``); with ``DEZA_LONG=1`` the long enumerations also run live.
"""

from __future__ import annotations

import json
import os
import random
import time
from itertools import permutations
from pathlib import Path

import numpy as np
import pytest

from deza import catalog as cat
from deza.algebra import spectrum, wl_rank
from deza.canon import canonical_form, seidel_automorphisms
from deza.cli import main
from deza.constructions import known, schemes, switching
from deza.constructions.groups import cayley_search
from deza.feasibility import (
    REFERENCE_FEASIBLE_COUNTS,
    DezaParams,
    FilterMode,
    feasible_params,
    srg_feasible,
)
from deza.graph import Deza, Graph, StronglyRegular, classify_regular_deza, common_neighbour_matrix
from deza.search import SearchOptions, enumerate_all, enumerate_params, enumerate_srg

ARTIFACT = Path(os.environ.get("DEZA_ARTIFACT", Path(__file__).resolve().parents[1] / "artifacts" / "catalog"))
NUM = {8: 3, 9: 2, 10: 1, 11: 0, 12: 6, 13: 1, 14: 1, 15: 1, 16: 10,
       17: 3, 18: 13, 19: 11, 20: 56, 21: 31}

criterion = pytest.mark.criterion


# -- shared data --------------------------------------------------------------

@pytest.fixture(scope="module")
def reference():
    return {r["serial"]: r for r in cat.reference_catalog()}


@pytest.fixture(scope="module")
def ref_spectra():
    return cat.reference_spectra()


@pytest.fixture(scope="module")
def artifact():
    """Rows of the stored full catalog, its manifest and counts."""
    if not (ARTIFACT / "manifest.json").exists():
        pytest.fail(f"no catalog artifact at {ARTIFACT}; build it with "
                    "`deza catalog --vmax 21 --out artifacts/catalog`")
    rows = cat.read_catalog_csv(ARTIFACT / "catalog.csv")
    manifest = json.loads((ARTIFACT / "manifest.json").read_text())
    return rows, manifest


@pytest.fixture(scope="module")
def artifact_forms(artifact):
    """Canonical graph6 -> artifact row."""
    rows, _ = artifact
    return {canonical_form(Graph.from_graph6(r["graph6"])).data.decode(): r for r in rows}


@pytest.fixture(scope="module")
def mid_runs():
    """Live enumerations for v = 17, 18, 19 with total wall time."""
    t0 = time.time()
    runs = {v: enumerate_all(v) for v in (17, 18, 19)}
    return runs, time.time() - t0


def _params(g: Graph) -> tuple:
    c = classify_regular_deza(g)
    assert isinstance(c, Deza), c
    return c.params.key


def _invariants(g: Graph) -> dict:
    p = DezaParams(*_params(g))
    rec = cat.analyze(g, p)
    return {"v": p.v, "k": p.k, "b": p.b, "a": p.a, "egv": rec.egv, "int": rec.integral,
            "wl_rank": rec.wl_rank, "spectrum": rec.spectrum.format(p.k)}


def _matches_row(inv: dict, row: dict) -> bool:
    return all(inv[key] == row[key] for key in ("v", "k", "b", "a", "egv", "int", "wl_rank"))


def _lands_on(g: Graph, serial: int, reference, artifact_forms) -> None:
    """``g`` is isomorphic to a catalog graph whose invariants are those of row ``serial``."""
    form = canonical_form(g).data.decode()
    assert form in artifact_forms, f"not in catalog (expected #{serial})"
    row = artifact_forms[form]
    ref = reference[serial]
    assert _matches_row(_invariants(g), ref), (serial, _invariants(g), ref)
    assert (row["v"], row["k"], row["b"], row["a"], row["egv"], row["int"], row["wl_rank"]) == \
        (ref["v"], ref["k"], ref["b"], ref["a"], ref["egv"], ref["int"], ref["wl_rank"])


# -- 1: counts for v <= 16 --------------------------------------------------

@criterion(1)
def test_counts_small_v(tmp_path, capsys):
    t0 = time.time()
    code = main(["catalog", "--vmax", "16", "--out", str(tmp_path), "--strict"])
    seconds = time.time() - t0
    capsys.readouterr()
    assert code == 0
    counts = {}
    for line in (tmp_path / "counts.csv").read_text().splitlines()[1:]:
        v, n, complete = line.split(",")
        assert complete == "yes"
        counts[int(v)] = int(n)
    assert counts == {v: NUM[v] for v in range(8, 17)}
    assert sum(counts.values()) == 25
    assert seconds <= 600, f"{seconds:.0f}s"
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["complete"]


# -- 2: counts for v = 17..21 -------------------------------------------------

@criterion(2)
def test_counts_mid_v_live(mid_runs):
    runs, seconds = mid_runs
    for v, run in runs.items():
        assert run.complete, v
        assert len(run.graphs) == NUM[v], v
    assert seconds <= 2 * 3600


@criterion(2)
def test_counts_long_v_from_manifest(artifact):
    rows, manifest = artifact
    assert manifest["complete"] is True
    assert manifest["v_max"] >= 21
    counts = {int(v): c for v, c in manifest["counts"].items()}
    for v in (20, 21):
        assert counts[v] == NUM[v], v
        assert sum(r["v"] == v for r in rows) == NUM[v]
    for run in manifest["runs"]:
        assert run["complete"], run


@criterion(2)
@pytest.mark.slow
@pytest.mark.parametrize("v", [20, 21])
def test_counts_long_v_live(v):
    run = enumerate_all(v)
    assert run.complete
    assert len(run.graphs) == NUM[v]


# -- 3: feasible parameter counts --------------------------------------------

@criterion(3)
def test_feasible_counts():
    t0 = time.time()
    got = {mode: [len(feasible_params(v, mode)) for v in range(8, 22)] for mode in FilterMode}
    seconds = time.time() - t0
    expected = [REFERENCE_FEASIBLE_COUNTS[v] for v in range(8, 22)]
    assert expected == [14, 10, 24, 19, 34, 26, 44, 34, 73, 40, 74, 60, 86, 77]
    matching = [mode for mode, counts in got.items() if counts == expected]
    assert matching == [FilterMode.NECESSARY]
    assert seconds < 1.0, f"{seconds:.2f}s"


# -- 4: spectra of construction-built graphs -----------------------------------

def _built():
    """Serial -> graph built from a construction alone."""
    return {
        1: cayley_search(8, 4, 2, 0)[0].graph,
        3: switching.lex_multipartite_k2(2, 2).graph,
        6: switching.lex_srg_k2(known.paley(5)).graph,  # 5-cycle
        7: schemes.scheme_fusion(schemes.rectangular_scheme(4, 3), (1, 2)).graph,
        11: switching.lex_multipartite_k2(2, 3).graph,
        22: switching.lex_multipartite_k2(2, 4).graph,
        104: switching.lex_multipartite_k2(2, 5).graph,
    }


@criterion(4)
def test_spectra_of_constructions(reference, ref_spectra):
    for serial, g in _built().items():
        ref = reference[serial]
        inv = _invariants(g)
        assert (inv["v"], inv["k"], inv["b"], inv["a"]) == (ref["v"], ref["k"], ref["b"], ref["a"]), serial
        assert inv["egv"] == ref["egv"] and inv["int"] == ref["int"], serial
        if ref["int"]:
            assert inv["spectrum"] == ref_spectra[serial], serial
        else:
            assert serial not in ref_spectra


# -- 5: WL-rank ---------------------------------------------------------------

@criterion(5)
def test_wl_rank_srg_inputs():
    checked = 0
    for v in range(5, 22):
        for key in srg_feasible(v):
            for g in enumerate_srg(*key):
                assert wl_rank(g) == 3, key
                checked += 1
    assert checked > 20


def _scheme_graph(s, classes):
    return schemes.scheme_fusion(s, classes).graph


@criterion(5)
def test_wl_rank_four(reference):
    heawood = schemes.distance_scheme(known.heawood_graph())
    heawood_line = schemes.distance_scheme(known.line_graph(known.heawood_graph()))
    graphs = {
        1: cayley_search(8, 4, 2, 0)[0].graph,
        13: _scheme_graph(schemes.cyclotomic_scheme(13), (1, 2)),
        14: _scheme_graph(heawood, (1, 2)),
        46: _scheme_graph(schemes.cyclotomic_scheme(19), (1,)),
        130: _scheme_graph(heawood_line, (2,)),
        137: _scheme_graph(heawood_line, (1, 3)),
    }
    for serial, g in graphs.items():
        assert _params(g) == tuple(reference[serial][x] for x in "vkba"), serial
        assert reference[serial]["wl_rank"] == 4
        assert wl_rank(g) == 4, serial


@criterion(5)
def test_wl_rank_93(mid_runs, reference):
    runs, _ = mid_runs
    ref = reference[26]
    assert (ref["v"], ref["k"], ref["b"], ref["a"]) == (17, 8, 4, 3)
    hits = [e.graph for e in runs[17].graphs if e.params.key == (17, 8, 4, 3)
            and spectrum(e.graph).distinct_count == ref["egv"]
            and spectrum(e.graph).integral == ref["int"]]
    assert len(hits) == 1
    assert wl_rank(hits[0]) == 93


# -- 6: integral census ----------------------------------------------------------

@criterion(6)
def test_integral_census(artifact, reference, ref_spectra):
    rows, manifest = artifact
    assert manifest["complete"] is True
    assert len(rows) == 139
    integral = [r for r in rows if r["int"]]
    assert len(integral) == 30
    assert sum(r["int"] for r in reference.values()) == 30
    ours = sorted((r["v"], r["k"], r["b"], r["a"]) for r in integral)
    theirs = sorted((r["v"], r["k"], r["b"], r["a"]) for r in reference.values() if r["int"])
    assert ours == theirs
    assert len(ref_spectra) == 30


def test_artifact_certificates_replay(artifact, artifact_forms):
    rows, _ = artifact
    certs = json.loads((ARTIFACT / "certificates.json").read_text())
    by_serial = {r["serial"]: r for r in rows}
    for r in rows:
        assert sorted(certs[str(r["serial"])]) == sorted(r["constructions"])
        for tag, cert in certs[str(r["serial"])].items():
            g = cat.replay(tag, cert)
            assert artifact_forms[canonical_form(g).data.decode()] is r, (r["serial"], tag)
            if tag.startswith("gdss("):
                src = by_serial[cert["source_serial"]]
                assert tag == f"gdss({src['serial']})"
                assert artifact_forms[cert["source"]] is src


# -- 7: construction round trips ----------------------------------------------

@criterion(7)
@pytest.mark.parametrize("n,serial", [(2, 1), (3, 7), (5, 90)])
def test_rectangular_round_trip(n, serial, reference, artifact_forms):
    g = _scheme_graph(schemes.rectangular_scheme(4, n), (1, 2))  # same row or same column
    v, k, b, a = _params(g)
    # (4n, n + 2, n - 2, 2) with the two common-neighbour counts in either order
    assert (v, k) == (4 * n, n + 2) and {b, a} == {n - 2, 2}
    _lands_on(g, serial, reference, artifact_forms)


@criterion(7)
def test_scheme_round_trips(reference, artifact_forms):
    heawood = schemes.distance_scheme(known.heawood_graph())
    heawood_line = schemes.distance_scheme(known.line_graph(known.heawood_graph()))
    cases = [
        (_scheme_graph(schemes.cyclotomic_scheme(13), (1, 2)), 13),
        (_scheme_graph(schemes.cyclotomic_scheme(19), (1,)), 46),
        (_scheme_graph(heawood, (1, 2)), 14),
        (_scheme_graph(heawood_line, (2,)), 130),
        (_scheme_graph(heawood_line, (1, 3)), 137),
    ]
    for g, serial in cases:
        _lands_on(g, serial, reference, artifact_forms)


@criterion(7)
@pytest.mark.parametrize("x,y", [(2, 2), (3, 2), (2, 3)])
def test_multipartite_k2_round_trip(x, y, artifact_forms):
    out = switching.lex_multipartite_k2(x, y)
    assert isinstance(out, switching.Certified)
    # x parts of y vertices, each vertex blown up to an edge
    expected = DezaParams(2 * x * y, 2 * y * (x - 1) + 1, 2 * y * (x - 1), 2 * y * (x - 2) + 2)
    assert out.params.key == expected.key == _params(out.graph)
    assert canonical_form(out.graph).data.decode() in artifact_forms


# -- 8: property suites -----------------------------------------------------------

@criterion(8)
def test_m_squared_identity(artifact, corpus):
    rows, _ = artifact
    graphs = [Graph.from_graph6(r["graph6"]) for r in rows] + corpus
    graphs += list(_built().values())
    for g in graphs:
        c = classify_regular_deza(g)
        if isinstance(c, StronglyRegular):
            continue
        assert isinstance(c, Deza)
        p = c.params
        m = np.array(g.matrix(), dtype=np.int64)
        sq = m @ m
        cn = np.array(common_neighbour_matrix(g))
        a_mat = ((cn == p.a) & ~np.eye(g.n, dtype=bool)).astype(np.int64)
        b_mat = ((cn == p.b) & ~np.eye(g.n, dtype=bool)).astype(np.int64)
        assert (sq == p.a * a_mat + p.b * b_mat + p.k * np.eye(g.n, dtype=np.int64)).all()
        assert (a_mat + b_mat + np.eye(g.n, dtype=np.int64) == 1).all()


@criterion(8)
def test_alpha_beta_sum():
    for v in range(8, 22):
        for p in feasible_params(v, FilterMode.ALL):
            if p.a < p.b:
                assert p.alpha + p.beta == v - 1, p
            else:  # one common-neighbour count shared by all v - 1 other vertices
                assert p.alpha == p.beta == v - 1, p


@criterion(8)
def test_canonical_invariance_200(corpus):
    rng = random.Random(2024)
    assert len(corpus) == 20
    for g in corpus:
        ref = canonical_form(g)
        for _ in range(200):
            perm = list(range(g.n))
            rng.shuffle(perm)
            assert canonical_form(g.relabel(perm)).data == ref.data


@criterion(8)
def test_pruning_soundness_v10():
    for v in range(8, 11):
        for p in feasible_params(v):
            plain = enumerate_params(p, SearchOptions(prune=False, lookahead=False))
            pruned = enumerate_params(p, SearchOptions())
            assert plain.complete and pruned.complete
            assert [f for f, _ in plain.graphs] == [f for f, _ in pruned.graphs], p


def _two_valued_square(stack: np.ndarray) -> np.ndarray:
    n = stack.shape[1]
    sym = (stack == stack.transpose(0, 2, 1)).all(axis=(1, 2))
    diag = (np.einsum("bii->bi", stack) == 0).all(axis=1)
    vals = (stack @ stack)[:, ~np.eye(n, dtype=bool)]
    lo, hi = vals.min(axis=1), vals.max(axis=1)
    two = ((vals == lo[:, None]) | (vals == hi[:, None])).all(axis=1)
    return sym & diag & two


@criterion(8)
def test_seidel_biconditional_srg_9_4_1_2():
    g = known.lattice(3, 3)
    assert isinstance(classify_regular_deza(g), StronglyRegular)
    m = g.matrix()
    perms = np.array(list(permutations(range(9))), dtype=np.int64)
    ok = np.concatenate([_two_valued_square(m[perms[i:i + 40320]])
                         for i in range(0, len(perms), 40320)])
    ident = (perms == np.arange(9)).all(axis=1)
    hits = {tuple(map(int, p)) for p in perms[ok & ~ident]}
    assert hits == {tuple(s) for s in seidel_automorphisms(g)}
    for s in hits:
        assert switching.dual_seidel(g, s).strictly_deza


@criterion(8)
def test_seidel_biconditional_srg_15_6_1_3():
    g = known.triangular(6).complement()
    assert isinstance(classify_regular_deza(g), StronglyRegular)
    seidel = {tuple(s) for s in seidel_automorphisms(g)}
    assert seidel
    for s in seidel:
        out = switching.dual_seidel(g, s)
        assert out.strictly_deza and out.params.key == (15, 6, 3, 1)
    m = g.matrix()
    rng = random.Random(7)
    # every involution built from disjoint non-edges, plus random permutations
    for trial in range(4000):
        p = list(range(15))
        if trial % 2:
            free = list(range(15))
            rng.shuffle(free)
            for _ in range(rng.randint(1, 7)):
                u, w = free.pop(), free.pop()
                p[u], p[w] = w, u
        else:
            rng.shuffle(p)
        ok = bool(_two_valued_square(m[np.array(p)][None])[0])
        assert ok == (tuple(p) in seidel), p
    # the Seidel automorphisms themselves are hits
    for s in seidel:
        assert _two_valued_square(m[np.array(s)][None])[0]


@criterion(8)
def test_graph6_round_trip(corpus, artifact):
    rows, _ = artifact
    texts = [r["graph6"] for r in rows] + [g.to_graph6() for g in corpus]
    for text in texts:
        g = Graph.from_graph6(text)
        assert g.to_graph6() == text
        assert Graph.from_graph6(g.to_graph6().encode()).rows == g.rows
