from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from deza.algebra import (
    CoherentConfiguration,
    char_poly,
    scheme_from_closure,
    spectrum,
    wl_closure,
    wl_rank,
)
from deza.constructions import known
from deza.constructions.schemes import NotAScheme
from deza.graph import Graph


def random_graph(n, p, rng):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def det_fraction(m):
    """Exact determinant by Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for j in range(c, n):
                a[r][j] -= f * a[c][j]
    return det


@pytest.mark.parametrize("seed", range(6))
def test_char_poly_by_interpolation(seed):
    rng = random.Random(seed)
    g = random_graph(rng.randint(2, 9), 0.5, rng)
    p = char_poly(g)
    m = g.matrix().tolist()
    n = g.n
    for x in range(-3, 4):
        xm = [[(x if i == j else 0) - m[i][j] for j in range(n)] for i in range(n)]
        val = sum(c * x ** (len(p) - 1 - i) for i, c in enumerate(p))
        assert val == det_fraction(xm)


def test_spectrum_known():
    sp = spectrum(known.petersen())
    assert sp.entries == ((-2, 4), (1, 5), (3, 1))
    assert sp.integral and sp.distinct_count == 3
    c5 = spectrum(Graph.cycle(5))
    assert not c5.integral and c5.distinct_count == 3
    assert c5.n == 5
    golden = (1 + 5 ** 0.5) / 2
    vals = sorted(v for v, _ in c5.entries)
    assert abs(vals[0] + golden) < 1e-9 and abs(vals[1] - (golden - 1)) < 1e-9


def test_spectrum_against_numpy():
    rng = random.Random(2)
    for _ in range(15):
        g = random_graph(rng.randint(2, 14), 0.4, rng)
        sp = spectrum(g)
        ours = sorted(v for v, m in sp.entries for _ in range(m))
        ref = sorted(np.linalg.eigvalsh(g.matrix(dtype=float)))
        assert np.allclose(ours, ref, atol=1e-6)
        assert sp.distinct_count == len(sp.entries)


def test_spectrum_format():
    g = Graph.from_edges(8, [(u, u ^ (1 << i)) for u in range(8) for i in range(3) if u < u ^ (1 << i)])
    assert spectrum(g).format(3) == "-3^1 -1^3 1^3"


def naive_wl_rank(g):
    """Textbook 2-WL on ordered pairs with dictionaries, iterated to a fixpoint."""
    n = g.n
    col = {(x, y): ("d" if x == y else "e" if g.has_edge(x, y) else "n")
           for x in range(n) for y in range(n)}
    while True:
        sig = {(x, y): (col[x, y], tuple(sorted((col[x, z], col[z, y]) for z in range(n))))
               for x in range(n) for y in range(n)}
        names = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
        new = {k: names[s] for k, s in sig.items()}
        if len(set(new.values())) == len(set(col.values())):
            return len(set(new.values()))
        col = new


def test_wl_rank_matches_naive():
    rng = random.Random(9)
    for _ in range(12):
        g = random_graph(rng.randint(3, 10), 0.5, rng)
        assert wl_rank(g) == naive_wl_rank(g)


@pytest.mark.parametrize("g", [known.petersen(), known.lattice(3, 3), known.shrikhande(),
                               known.paley(13), known.triangular(6).complement()])
def test_srg_rank_three(g):
    assert wl_rank(g) == 3
    s = scheme_from_closure(wl_closure(g))
    assert s.d == 2


def test_closure_refines_edges(corpus):
    for g in corpus:
        cc = wl_closure(g)
        edge = {cc.classes[x][y] for x in range(g.n) for y in range(g.n) if g.has_edge(x, y)}
        other = {cc.classes[x][y] for x in range(g.n) for y in range(g.n)
                 if x != y and not g.has_edge(x, y)}
        assert not edge & other


def test_non_scheme_closure():
    # a path has non-symmetric or split classes
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(NotAScheme):
        scheme_from_closure(wl_closure(path))


def _thin(table):
    """Classes ``(x, y) -> x^-1 y`` of a group given by its multiplication table."""
    n = len(table)
    inv = [next(y for y in range(n) if table[x][y] == 0) for x in range(n)]
    return CoherentConfiguration(n, tuple(tuple(table[inv[x]][y] for y in range(n)) for x in range(n)))


def test_commutative_closure_is_symmetrized():
    z5 = [[(x + y) % 5 for y in range(5)] for x in range(5)]
    s = scheme_from_closure(_thin(z5))
    # classes {1, 4} and {2, 3}: the pentagon and its complement
    assert s.d == 2 and sorted(s.valency(i) for i in (1, 2)) == [2, 2]


def test_non_commutative_closure_is_not_a_scheme():
    perms = list(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    s3 = [[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    assert s3[0][0] == 0 and perms[0] == (0, 1, 2)
    with pytest.raises(NotAScheme):
        scheme_from_closure(_thin(s3))
