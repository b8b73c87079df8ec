from __future__ import annotations

import os

import pytest

from deza.constructions import known, switching
from deza.search import enumerate_all

LONG = os.environ.get("DEZA_LONG") == "1"


def pytest_collection_modifyitems(config, items):
    if LONG:
        return
    skip = pytest.mark.skip(reason="long run; set DEZA_LONG=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def small_deza():
    """Every strictly Deza graph on 8..13 vertices (13 graphs)."""
    out = []
    for v in range(8, 14):
        out.extend(e.graph for e in enumerate_all(v).graphs)
    return out


@pytest.fixture(scope="session")
def corpus(small_deza):
    """Twenty graphs: enumerated Deza graphs plus constructed ones and SRGs."""
    extra = [
        switching.lex_multipartite_k2(3, 2).graph,
        switching.lex_srg_k2(known.petersen()).graph,
        known.lattice(3, 3),
        known.shrikhande(),
        known.petersen(),
        known.paley(13),
        known.distance_graph(known.heawood_graph(), {1, 2}),
    ]
    graphs = small_deza + extra
    assert len(graphs) == 20
    return graphs



_CRITERIA: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    name = f"criterion {mark.args[0]}"
    if rep.failed:
        _CRITERIA[name] = "FAIL"
    elif rep.skipped:
        _CRITERIA.setdefault(name, "SKIPPED")
    elif rep.when == "call" and _CRITERIA.get(name) != "FAIL":
        _CRITERIA[name] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda s: s.split()[1]):
        terminalreporter.write_line(f"{name}: {_CRITERIA[name]}")
