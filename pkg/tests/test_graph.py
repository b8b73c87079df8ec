from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from deza.constructions import known
from deza.feasibility import DezaParams
from deza.graph import (
    Deza,
    Graph,
    NotDeza,
    NotRegular,
    StronglyRegular,
    children,
    classify_regular_deza,
    common_neighbours,
    decode_graph6,
    diameter,
    distance_matrix,
    encode_graph6,
    is_strictly_deza,
)


@st.composite
def graphs(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    pairs = [(i, j) for j in range(n) for i in range(j)]
    return Graph.from_edges(n, [p for p, x in zip(pairs, bits) if x])


@given(graphs())
def test_graph6_round_trip(g):
    text = encode_graph6(g)
    assert decode_graph6(text) == g
    assert encode_graph6(decode_graph6(text)) == text


def test_graph6_known_strings():
    # reference encodings from the format description
    g = Graph.from_edges(5, [(0, 2), (0, 4), (1, 3), (3, 4)])
    assert g.to_graph6() == "DQc"
    assert Graph.from_graph6("DQc") == g
    assert Graph.complete(4).to_graph6() == "C~"


def test_graph6_rejects_garbage():
    with pytest.raises(ValueError):
        Graph.from_graph6("D")
    with pytest.raises(ValueError):
        Graph.from_graph6("DQcX")


def test_corpus_graph6_bit_exact(corpus):
    for g in corpus:
        s = g.to_graph6()
        assert Graph.from_graph6(s).to_graph6() == s
        assert Graph.from_graph6(s) == g


def test_classify():
    assert classify_regular_deza(Graph.cycle(5)) == StronglyRegular(5, 2, 0, 1)
    assert classify_regular_deza(known.petersen()) == StronglyRegular(10, 3, 0, 1)
    assert classify_regular_deza(Graph.from_edges(3, [(0, 1)])) == NotRegular()
    assert isinstance(classify_regular_deza(Graph.cycle(8)), Deza)  # b=1, a=0
    assert classify_regular_deza(Graph.cycle(8)).params.key == (8, 2, 1, 0)
    cube = Graph.from_edges(8, [(u, u ^ (1 << i)) for u in range(8) for i in range(3) if u < u ^ (1 << i)])
    assert classify_regular_deza(cube).params.key == (8, 3, 2, 0)
    assert not is_strictly_deza(cube)  # diameter 3
    prism = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
    assert classify_regular_deza(prism) == NotDeza()  # counts 0, 1 and 2
    c7 = Graph.cycle(7)
    c7x = Graph.from_edges(7, c7.edges() + [(i, (i + 2) % 7) for i in range(7)])
    assert classify_regular_deza(c7x) == NotDeza()


def _random_relabel(g, rng):
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def test_m_squared_identity(corpus):
    for g in corpus:
        c = classify_regular_deza(g)
        if not isinstance(c, Deza):
            continue
        p = c.params
        ch = children(g, p)
        m = g.matrix()
        rhs = p.a * ch.graph_a.matrix() + p.b * ch.graph_b.matrix() + p.k * np.eye(g.n, dtype=np.int64)
        assert np.array_equal(m @ m, rhs)
        assert all(d == p.beta for d in ch.graph_b.degrees())
        assert all(d == p.alpha for d in ch.graph_a.degrees())
        assert p.alpha + p.beta == p.v - 1


def test_children_rejects_equal_counts():
    with pytest.raises(ValueError):
        children(known.petersen(), DezaParams(10, 3, 1, 1, 9, 9))


def test_common_neighbours_and_distances():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(2, 15)
        g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3])
        m = g.matrix()
        sq = m @ m
        for u in range(n):
            for w in range(n):
                if u != w:
                    assert common_neighbours(g, u, w) == sq[u, w]
        # distances against matrix powers
        d = distance_matrix(g)
        reach = np.eye(n, dtype=np.int64)
        power = np.eye(n, dtype=np.int64)
        for step in range(1, n):
            power = np.minimum(power @ m, 1)
            new = (power > 0) & (reach == 0)
            for u, w in zip(*np.nonzero(new)):
                assert d[u][w] == step
            reach |= power
        for u in range(n):
            for w in range(n):
                if not reach[u, w]:
                    assert d[u][w] < 0
        finite = all(reach.flatten())
        diam = diameter(g)
        assert (diam == float("inf")) == (not finite)
        if finite and n > 1:
            assert diam == max(max(r) for r in d)


def test_relabel_preserves_classification(corpus):
    rng = random.Random(7)
    for g in corpus:
        assert classify_regular_deza(_random_relabel(g, rng)) == classify_regular_deza(g)
