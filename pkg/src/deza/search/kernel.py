"""Compiled inner loops of the adjacency-matrix search.

State is a ``uint64`` array ``rows`` of length ``v``.  Rows ``0..r`` are
complete; a later row ``f`` holds only the bits ``< r+1`` fixed by symmetry.
A *pair rule* gives the admissible common-neighbour counts of a pair:

* ``MODE_DEZA``: ``{p1, p2}`` = ``{a, b}``;
* ``MODE_DEZA_DIAM2``: like ``MODE_DEZA`` but a non-adjacent pair needs
  ``p2 = b`` (used when ``a = 0``: such a pair would otherwise be at
  distance > 2);
* ``MODE_SRG``: ``p1 = lambda`` for adjacent pairs, ``p2 = mu`` otherwise.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MODE_DEZA = 0
MODE_DEZA_DIAM2 = 1
MODE_SRG = 2

STATUS_DONE = 0
STATUS_BUDGET = 1

ONE = np.uint64(1)


@njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def pair_range(mode, adj, p1, p2):
    if mode == MODE_DEZA:
        return p1, p2
    if mode == MODE_DEZA_DIAM2:
        if adj:
            return p1, p2
        return p2, p2
    if adj:
        return p1, p1
    return p2, p2


@njit(cache=True)
def row_candidates(rows, r, f, v, k, p1, p2, mode, pack, out, cap):
    """Admissible completions of row ``f`` given complete rows ``0..r``.

    Free columns are the unfilled vertices other than ``f``.  With ``pack``
    they are grouped into blocks of identical adjacency to rows ``0..r`` and
    the 1s of a block are placed at its front; without it every column is its
    own block.  Candidates go to ``out`` (when ``cap`` is 0) and the count is
    returned; a positive ``cap`` stops counting early and writes nothing.
    """
    fixed = rows[f]
    t = k - popcount(fixed)
    nfree = v - 1 - r - (1 if f > r else 0)
    if t < 0 or t > nfree:
        return 0
    low = (ONE << np.uint64(r + 1)) - ONE
    bkey = np.empty(v, np.uint64)
    bsize = np.zeros(v, np.int64)
    bcols = np.empty((v, v), np.int64)
    nb = 0
    for c in range(r + 1, v):
        if c == f:
            continue
        key = rows[c] & low
        q = -1
        if pack:
            for qq in range(nb):
                if bkey[qq] == key:
                    q = qq
                    break
        if q < 0:
            q = nb
            bkey[nb] = key
            nb += 1
        bcols[q, bsize[q]] = c
        bsize[q] += 1
    # a free column c can still gain (v - 1 - (r + 1)) - 1 edges from later rows
    # besides the one from row f
    slack = v - 3 - r if f > r else v - 2 - r
    lo = np.empty(nb, np.int64)
    hi = np.empty(nb, np.int64)
    for q in range(nb):
        d = popcount(bkey[q])
        hi[q] = 0 if d >= k else bsize[q]
        lo[q] = bsize[q] if d + 1 < k - slack else 0
        if lo[q] > hi[q]:
            return 0
    suf_hi = np.zeros(nb + 1, np.int64)
    suf_lo = np.zeros(nb + 1, np.int64)
    for q in range(nb - 1, -1, -1):
        suf_hi[q] = suf_hi[q + 1] + hi[q]
        suf_lo[q] = suf_lo[q + 1] + lo[q]
    nj = r + 1 if f > r else r
    pot = np.zeros((nb + 1, nj), np.int64)
    for q in range(nb - 1, -1, -1):
        for j in range(nj):
            pot[q, j] = pot[q + 1, j]
            if (bkey[q] >> np.uint64(j)) & ONE:
                pot[q, j] += hi[q]
    common = np.zeros(nj, np.int64)
    lo_req = np.empty(nj, np.int64)
    hi_req = np.empty(nj, np.int64)
    for j in range(nj):
        x, y = pair_range(mode, ((fixed >> np.uint64(j)) & ONE) != 0, p1, p2)
        lo_req[j] = x
        hi_req[j] = y
        common[j] = popcount(fixed & rows[j])
        if common[j] > y or common[j] + min(pot[0, j], t) < x:
            return 0
    cnt = np.zeros(nb + 1, np.int64)
    nout = 0
    q = 0
    cnt[0] = -1
    rem = t
    while q >= 0:
        if q == nb:
            if rem == 0:
                ok = True
                for j in range(nj):
                    c = common[j]
                    if c != lo_req[j] and c != hi_req[j]:
                        ok = False
                        break
                if ok:
                    if cap > 0:
                        nout += 1
                        if nout >= cap:
                            return nout
                    else:
                        m = fixed
                        for qq in range(nb):
                            for s in range(cnt[qq]):
                                m |= ONE << np.uint64(bcols[qq, s])
                        out[nout] = m
                        nout += 1
            q -= 1
            continue
        key = bkey[q]
        if cnt[q] < 0:
            first = max(lo[q], rem - suf_hi[q + 1])
            if first > min(hi[q], rem - suf_lo[q + 1]):
                cnt[q] = 0
                q -= 1
                continue
            cnt[q] = first
            delta = first
        else:
            if cnt[q] + 1 > min(hi[q], rem + cnt[q] - suf_lo[q + 1]):
                for j in range(nj):
                    if (key >> np.uint64(j)) & ONE:
                        common[j] -= cnt[q]
                rem += cnt[q]
                cnt[q] = -1
                q -= 1
                continue
            cnt[q] += 1
            delta = 1
        rem -= delta
        over = False
        under = False
        for j in range(nj):
            if (key >> np.uint64(j)) & ONE:
                common[j] += delta
                if common[j] > hi_req[j]:
                    over = True
            if common[j] + min(pot[q + 1, j], rem) < lo_req[j]:
                under = True
        if over:
            # more 1s in this block only raise the counts further
            for j in range(nj):
                if (key >> np.uint64(j)) & ONE:
                    common[j] -= cnt[q]
            rem += cnt[q]
            cnt[q] = -1
            q -= 1
        elif not under:
            q += 1
            if q < nb:
                cnt[q] = -1
    return nout


@njit(cache=True)
def place(rows, r, cand, v):
    rows[r] = cand
    for c in range(r + 1, v):
        if (cand >> np.uint64(c)) & ONE:
            rows[c] |= ONE << np.uint64(r)


@njit(cache=True)
def unplace(rows, r, fixed, v):
    cand = rows[r]
    for c in range(r + 1, v):
        if (cand >> np.uint64(c)) & ONE:
            rows[c] &= ~(ONE << np.uint64(r))
    rows[r] = fixed


@njit(cache=True)
def swap_vertices(rows, x, y, v):
    if x == y:
        return
    t = rows[x]
    rows[x] = rows[y]
    rows[y] = t
    bx = ONE << np.uint64(x)
    by = ONE << np.uint64(y)
    for i in range(v):
        ri = rows[i]
        if ((ri & bx) != 0) != ((ri & by) != 0):
            rows[i] = ri ^ bx ^ by


@njit(cache=True)
def count_pairs(rows, r, p1, cnt_a, cnt_b, sign):
    for j in range(r):
        if popcount(rows[r] & rows[j]) == p1:
            cnt_a[j] += sign
            cnt_a[r] += sign
        else:
            cnt_b[j] += sign
            cnt_b[r] += sign


@njit(cache=True)
def partial_ok(rows, r, v, k, p1, p2, mode, alpha, beta, cnt_a, cnt_b):
    """Necessary conditions after row ``r`` is complete.

    Per-vertex a/b partner counts within ``alpha``/``beta`` (counting pairs
    whose outcome is already forced), and every pair involving a future row
    still able to land on an admissible count.
    """
    deza = mode != MODE_SRG
    if deza:
        for j in range(r + 1):
            if cnt_a[j] > alpha or cnt_b[j] > beta:
                return False
    high = ~((ONE << np.uint64(r + 1)) - ONE)
    forced_a = np.zeros(v, np.int64)
    forced_b = np.zeros(v, np.int64)
    pmin = min(p1, p2)
    pmax = max(p1, p2)
    for f in range(r + 1, v):
        rf = rows[f]
        df = k - popcount(rf)
        for j in range(r + 1):
            x, y = pair_range(mode, ((rf >> np.uint64(j)) & ONE) != 0, p1, p2)
            lcount = popcount(rf & rows[j])
            if lcount > y:
                return False
            ucount = lcount + min(df, popcount(rows[j] & high & ~(ONE << np.uint64(f))))
            if ucount < x:
                return False
            can_x = lcount <= x <= ucount
            can_y = lcount <= y <= ucount
            if not can_x and not can_y:
                return False
            if deza and x != y:
                if not can_y:
                    forced_a[j] += 1
                    forced_a[f] += 1
                elif not can_x:
                    forced_b[j] += 1
                    forced_b[f] += 1
        for g in range(f + 1, v):
            lcount = popcount(rf & rows[g])
            if lcount > pmax:
                return False
            if lcount + min(df, k - popcount(rows[g])) < pmin:
                return False
    if deza:
        for j in range(v):
            if cnt_a[j] + forced_a[j] > alpha or cnt_b[j] + forced_b[j] > beta:
                return False
    return True


@njit(cache=True)
def pick_next(rows, r, v, k, p1, p2, mode, pack, tmp):
    """Most constrained future row, or -1 if some future row is dead."""
    best = -1
    best_count = 1 << 40
    for f in range(r + 1, v):
        c = row_candidates(rows, r, f, v, k, p1, p2, mode, pack, tmp, best_count)
        if c == 0:
            return -1
        if c < best_count:
            best_count = c
            best = f
    return best


@njit(cache=True)
def init_counters(rows, filled, v, p1, mode):
    cnt_a = np.zeros(v, np.int64)
    cnt_b = np.zeros(v, np.int64)
    if mode != MODE_SRG:
        for r in range(1, filled):
            count_pairs(rows, r, p1, cnt_a, cnt_b, 1)
    return cnt_a, cnt_b


@njit(cache=True)
def extend(rows0, r, v, k, p1, p2, mode, alpha, beta, pack, lookahead):
    """All admissible rows ``r`` for the prefix ``rows0`` (rows ``0..r-1`` done).

    Returns the candidate rows that also pass :func:`partial_ok` (and, with
    ``lookahead``, leave every future row at least one completion).
    """
    rows = rows0.copy()
    tmp = np.empty(1 << 20, np.uint64)
    n = row_candidates(rows, r - 1, r, v, k, p1, p2, mode, pack, tmp, 0)
    cnt_a, cnt_b = init_counters(rows, r, v, p1, mode)
    fixed = rows[r]
    keep = np.empty(n, np.uint64)
    nk = 0
    probe = np.empty(1, np.uint64)
    for i in range(n):
        place(rows, r, tmp[i], v)
        if mode != MODE_SRG:
            count_pairs(rows, r, p1, cnt_a, cnt_b, 1)
        ok = partial_ok(rows, r, v, k, p1, p2, mode, alpha, beta, cnt_a, cnt_b)
        if ok and lookahead and r < v - 1:
            ok = pick_next(rows, r, v, k, p1, p2, mode, pack, probe) >= 0
        if ok:
            keep[nk] = tmp[i]
            nk += 1
        if mode != MODE_SRG:
            count_pairs(rows, r, p1, cnt_a, cnt_b, -1)
        unplace(rows, r, fixed, v)
    return keep[:nk]


@njit(cache=True)
def complete(rows0, r0, v, k, p1, p2, mode, alpha, beta, pack, lookahead, max_nodes):
    """Depth-first completion of a prefix with rows ``0..r0-1`` complete.

    With ``lookahead`` the next row is the future vertex with fewest
    admissible rows (its label is swapped into position ``r``), and a node is
    abandoned as soon as any future row has none.  Returns
    ``(leaves, nodes, status)``; leaves are full row arrays in the relabeled
    vertex order.
    """
    rows = rows0.copy()
    cnt_a, cnt_b = init_counters(rows, r0, v, p1, mode)
    cap = 1 << 14
    buf = np.empty(cap, np.uint64)
    end = np.zeros(v + 1, np.int64)
    pos = np.zeros(v + 1, np.int64)
    fixed = np.zeros(v + 1, np.uint64)
    swapped = np.arange(v + 1)
    out = np.empty((16, v), np.uint64)
    nleaf = 0
    nodes = 0
    status = STATUS_DONE
    tmp = np.empty(1 << 20, np.uint64)
    probe = np.empty(1, np.uint64)
    if r0 >= v:
        out[0, :] = rows
        return out[:1], 0, status
    r = r0
    if lookahead and r0 < v - 1:
        nxt = pick_next(rows, r0 - 1, v, k, p1, p2, mode, pack, probe)
        if nxt < 0:
            return out[:0], 0, status
        swapped[r0] = nxt
        swap_vertices(rows, r0, nxt, v)
    fixed[r] = rows[r]
    n = row_candidates(rows, r - 1, r, v, k, p1, p2, mode, pack, tmp, 0)
    if n > cap:
        buf = np.empty(n, np.uint64)
        cap = n
    buf[:n] = tmp[:n]
    end[r] = n
    pos[r] = 0
    placed = False
    while r >= r0:
        if placed:
            if mode != MODE_SRG:
                count_pairs(rows, r, p1, cnt_a, cnt_b, -1)
            unplace(rows, r, fixed[r], v)
            placed = False
        if pos[r] >= end[r]:
            swap_vertices(rows, r, swapped[r], v)
            swapped[r] = r
            r -= 1
            if r >= r0:
                placed = True
            continue
        if nodes >= max_nodes:
            status = STATUS_BUDGET
            # unwind so the caller's view stays consistent
            pos[r] = end[r]
            while r >= r0:
                if placed:
                    if mode != MODE_SRG:
                        count_pairs(rows, r, p1, cnt_a, cnt_b, -1)
                    unplace(rows, r, fixed[r], v)
                swap_vertices(rows, r, swapped[r], v)
                r -= 1
                placed = True
            break
        cand = buf[pos[r]]
        pos[r] += 1
        place(rows, r, cand, v)
        if mode != MODE_SRG:
            count_pairs(rows, r, p1, cnt_a, cnt_b, 1)
        nodes += 1
        placed = True
        if not partial_ok(rows, r, v, k, p1, p2, mode, alpha, beta, cnt_a, cnt_b):
            continue
        if r == v - 1:
            if nleaf == out.shape[0]:
                grown = np.empty((2 * nleaf, v), np.uint64)
                grown[:nleaf] = out
                out = grown
            out[nleaf, :] = rows
            nleaf += 1
            continue
        nxt = r + 1
        if lookahead and r < v - 2:
            nxt = pick_next(rows, r, v, k, p1, p2, mode, pack, probe)
            if nxt < 0:
                continue
        placed = False
        r += 1
        swapped[r] = nxt
        swap_vertices(rows, r, nxt, v)
        fixed[r] = rows[r]
        n = row_candidates(rows, r - 1, r, v, k, p1, p2, mode, pack, tmp, 0)
        s = end[r - 1]
        if s + n > cap:
            cap = max(2 * cap, s + n)
            grown_buf = np.empty(cap, np.uint64)
            grown_buf[:s] = buf[:s]
            buf = grown_buf
        buf[s:s + n] = tmp[:n]
        end[r] = s + n
        pos[r] = s
    return out[:nleaf], nodes, status
