"""Slow, independent reference implementations used as test oracles.

Nothing here imports the package's counting or interpretation code: graphs
are read straight off the packed bit table and programs are interpreted from
scratch.
"""

import itertools
from fractions import Fraction


def decode_table(bits, n, m, d):
    """ids[x][j] read from a flat 0/1 sequence, x-major, big-endian ids."""
    N, D = 2**n, 2**d
    bits = [int(b) for b in bits]
    assert len(bits) == N * D * m
    ids = []
    for x in range(N):
        row = []
        for j in range(D):
            off = (x * D + j) * m
            v = 0
            for b in bits[off:off + m]:
                v = 2 * v + b
            row.append(v)
        ids.append(row)
    return ids


def naive_deviation(ids, S, M):
    """max over every subset Y of the right part of |P[Y] - |Y|/M|."""
    S = list(S)
    total = sum(len(ids[x]) for x in S)
    best = Fraction(0)
    for mask in range(2**M):
        ys = {y for y in range(M) if mask >> y & 1}
        hit = sum(1 for x in S for y in ids[x] if y in ys)
        best = max(best, abs(Fraction(hit, total) - Fraction(len(ys), M)))
    return best


def naive_is_extractor(ids, K, eps, M):
    return all(naive_deviation(ids, S, M) < eps
               for S in itertools.combinations(range(len(ids)), K))


def naive_congested(ids, S, alpha, K, M):
    D = len(ids[0])
    thr = Fraction(alpha) * D * K / M
    indeg = [0] * M
    for x in S:
        for y in ids[x]:
            indeg[y] += 1
    clot = {y for y in range(M) if indeg[y] > thr}
    return clot, {x for x in S if all(y in clot for y in ids[x])}


# toy machine -------------------------------------------------------------

def naive_run(p, b):
    """(output, cost) of program p on condition b, interpreted from scratch."""
    op, w = p[:2], p[2:]
    if op == "00":
        return w, len(w)
    if op == "01":
        out = ""
        for i, c in enumerate(w):
            out += str(int(c) ^ int(b[i % len(b)]))
        return out, len(w) + 1
    if op == "10":
        ell = 0
        for c in w:
            ell = 2 * ell + int(c)
        return "".join(b[i % len(b)] for i in range(ell)), ell + 2
    return "".join(reversed(w)), 2 * len(w)


def naive_programs(k):
    """Every program with fewer than k bits."""
    for length in range(2, k):
        for t in itertools.product("01", repeat=length):
            yield "".join(t)


def naive_describable(b, k, s, n):
    """n-bit strings printed by some program shorter than k in space s."""
    found = set()
    for p in naive_programs(k):
        out, cost = naive_run(p, b)
        if cost <= s and len(out) == n:
            found.add(out)
    return found


def naive_pivots(b, k, s_bar, n):
    prev, pivots = set(), []
    for s in range(0, s_bar + 1):
        cur = naive_describable(b, k, s, n)
        if cur != prev:
            pivots.append(s)
        prev = cur
    return pivots
