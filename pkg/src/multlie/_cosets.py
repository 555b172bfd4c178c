"""Compiled coset enumeration over the trivial subgroup (Felsch and HLT).

Table columns are letters: ``2g`` is generator ``g`` and ``2g+1`` its
inverse, so ``x ^ 1`` inverts a column.  All state lives in numpy arrays
so the kernel can stop when it runs out of rows and resume after the
caller has grown them.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import InternalConsistencyError, ResourceLimitError

# slots of the state vector
NROWS, LIVE, QLEN, DTOP, OVER, CUR = range(6)

DONE, BUDGET, GROW = 0, 1, 2

DEDUCTION_STACK = 1 << 18


@njit(cache=True)
def _rep(p, k):
    r = k
    while p[r] != r:
        r = p[r]
    while p[k] != r:
        nxt = p[k]
        p[k] = r
        k = nxt
    return r


@njit(cache=True)
def _push(ded, st, a, x):
    top = st[DTOP]
    if top < ded.shape[0]:
        ded[top, 0] = a
        ded[top, 1] = x
        st[DTOP] = top + 1
    else:
        st[OVER] = 1


@njit(cache=True)
def _merge(p, st, queue, k, l):
    k = _rep(p, k)
    l = _rep(p, l)
    if k == l:
        return
    if k > l:
        k, l = l, k
    p[l] = k
    st[LIVE] -= 1
    queue[st[QLEN]] = l
    st[QLEN] += 1


@njit(cache=True)
def _coincidence(t, p, st, queue, ded, a, b):
    st[QLEN] = 0
    _merge(p, st, queue, a, b)
    ncols = t.shape[1]
    i = 0
    while i < st[QLEN]:
        g = queue[i]
        i += 1
        for x in range(ncols):
            d = t[g, x]
            if d < 0:
                continue
            t[d, x ^ 1] = -1
            mu = _rep(p, g)
            nu = _rep(p, d)
            if t[mu, x] >= 0:
                _merge(p, st, queue, nu, t[mu, x])
            elif t[nu, x ^ 1] >= 0:
                _merge(p, st, queue, mu, t[nu, x ^ 1])
            else:
                t[mu, x] = nu
                t[nu, x ^ 1] = mu
                _push(ded, st, mu, x)


@njit(cache=True)
def _scan(t, p, st, queue, ded, a, w, s, e):
    f = a
    i = s
    b = a
    j = e - 1
    while i <= j and t[f, w[i]] >= 0:
        f = t[f, w[i]]
        i += 1
    if i > j:
        if f != a:
            _coincidence(t, p, st, queue, ded, f, a)
        return
    while j >= i and t[b, w[j] ^ 1] >= 0:
        b = t[b, w[j] ^ 1]
        j -= 1
    if j < i:
        _coincidence(t, p, st, queue, ded, f, b)
    elif i == j:
        t[f, w[i]] = b
        t[b, w[i] ^ 1] = f
        _push(ded, st, f, w[i])


@njit(cache=True)
def _scan_all(t, p, st, queue, ded, a, flat, off, lo, hi):
    for c in range(lo, hi):
        if p[a] != a:
            return
        _scan(t, p, st, queue, ded, a, flat, off[c], off[c + 1])


@njit(cache=True)
def _process(t, p, st, queue, ded, flat, off, colptr):
    ncols = t.shape[1]
    while True:
        while st[DTOP] > 0:
            st[DTOP] -= 1
            a = ded[st[DTOP], 0]
            x = ded[st[DTOP], 1]
            if p[a] != a:
                continue
            _scan_all(t, p, st, queue, ded, a, flat, off, colptr[x], colptr[x + 1])
            if p[a] == a:
                b = t[a, x]
                if b >= 0 and p[b] == b:
                    y = x ^ 1
                    _scan_all(t, p, st, queue, ded, b, flat, off, colptr[y], colptr[y + 1])
        if st[OVER] == 0:
            return
        # the stack overflowed: recheck everything once
        st[OVER] = 0
        for a in range(st[NROWS]):
            if p[a] == a:
                _scan_all(t, p, st, queue, ded, a, flat, off, 0, colptr[ncols])


@njit(cache=True)
def _scan_fill(t, p, st, queue, ded, a, w, s, e, budget):
    # HLT scan of one relator at coset a, defining cosets to close gaps
    while True:
        f = a
        i = s
        b = a
        j = e - 1
        while i <= j and t[f, w[i]] >= 0:
            f = t[f, w[i]]
            i += 1
        if i > j:
            if f != a:
                _coincidence(t, p, st, queue, ded, f, a)
            return DONE
        while j >= i and t[b, w[j] ^ 1] >= 0:
            b = t[b, w[j] ^ 1]
            j -= 1
        if j < i:
            _coincidence(t, p, st, queue, ded, f, b)
            return DONE
        if i == j:
            t[f, w[i]] = b
            t[b, w[i] ^ 1] = f
            return DONE
        if st[NROWS] >= budget:
            return BUDGET
        if st[NROWS] >= t.shape[0]:
            return GROW
        c = st[NROWS]
        st[NROWS] = c + 1
        st[LIVE] += 1
        p[c] = c
        t[f, w[i]] = c
        t[c, w[i] ^ 1] = f


@njit(cache=True)
def _lookahead(t, p, st, queue, ded, flat, off):
    for a in range(st[NROWS]):
        for r in range(off.shape[0] - 1):
            if p[a] != a:
                break
            _scan(t, p, st, queue, ded, a, flat, off[r], off[r + 1])
        st[DTOP] = 0


@njit(cache=True)
def _compact(t, p, st):
    n = st[NROWS]
    new = np.full(n, -1, dtype=np.int64)
    k = 0
    for a in range(n):
        if p[a] == a:
            new[a] = k
            k += 1
    cur = 0
    for a in range(min(st[CUR], n)):
        if p[a] == a:
            cur += 1
    for a in range(n):
        if p[a] == a:
            row = new[a]
            for x in range(t.shape[1]):
                d = t[a, x]
                t[row, x] = -1 if d < 0 else new[_rep(p, d)]
    for a in range(k, n):
        for x in range(t.shape[1]):
            t[a, x] = -1
    for a in range(n):
        p[a] = a
    st[NROWS] = k
    st[LIVE] = k
    st[CUR] = cur


@njit(cache=True)
def _hlt(t, p, queue, ded, st, flat, off, budget):
    ncols = t.shape[1]
    nrel = off.shape[0] - 1
    while st[CUR] < st[NROWS]:
        a = st[CUR]
        if p[a] == a:
            for r in range(nrel):
                if p[a] != a:
                    break
                status = _scan_fill(t, p, st, queue, ded, a, flat, off[r], off[r + 1], budget)
                st[DTOP] = 0
                if status != DONE:
                    return status
            if p[a] == a:
                for x in range(ncols):
                    if t[a, x] < 0:
                        if st[NROWS] >= budget:
                            return BUDGET
                        if st[NROWS] >= t.shape[0]:
                            return GROW
                        b = st[NROWS]
                        st[NROWS] = b + 1
                        st[LIVE] += 1
                        p[b] = b
                        t[a, x] = b
                        t[b, x ^ 1] = a
        st[CUR] = a + 1
    return DONE


@njit(cache=True)
def _felsch(t, p, queue, ded, st, flat, off, colptr, budget):
    ncols = t.shape[1]
    a = st[CUR]
    while a < st[NROWS]:
        if p[a] == a:
            for x in range(ncols):
                if p[a] != a:
                    break
                if t[a, x] < 0:
                    if st[NROWS] >= budget:
                        st[CUR] = a
                        return BUDGET
                    if st[NROWS] >= t.shape[0]:
                        st[CUR] = a
                        return GROW
                    b = st[NROWS]
                    st[NROWS] = b + 1
                    st[LIVE] += 1
                    p[b] = b
                    t[a, x] = b
                    t[b, x ^ 1] = a
                    _push(ded, st, a, x)
                    _process(t, p, st, queue, ded, flat, off, colptr)
        a += 1
    st[CUR] = a
    return DONE


def _conjugates(ncols: int, relators):
    by_first: list[set[tuple[int, ...]]] = [set() for _ in range(ncols)]
    for w in relators:
        cols = [2 * x if x >= 0 else 2 * (~x) + 1 for x in w]
        for cand in (cols, [x ^ 1 for x in reversed(cols)]):
            for k in range(len(cand)):
                rot = tuple(cand[k:] + cand[:k])
                by_first[rot[0]].add(rot)
    flat: list[int] = []
    off = [0]
    colptr = [0]
    for x in range(ncols):
        for rot in sorted(by_first[x]):
            flat.extend(rot)
            off.append(len(flat))
        colptr.append(len(off) - 1)
    return (np.array(flat, dtype=np.int32), np.array(off, dtype=np.int64),
            np.array(colptr, dtype=np.int64))


def _relator_cols(relators):
    flat: list[int] = []
    off = [0]
    for w in relators:
        flat.extend(2 * x if x >= 0 else 2 * (~x) + 1 for x in w)
        off.append(len(flat))
    return np.array(flat, dtype=np.int32), np.array(off, dtype=np.int64)


class _State:
    def __init__(self, ncols: int, max_cosets: int):
        cap = min(max_cosets, 1024)
        self.t = np.full((cap, ncols), -1, dtype=np.int32)
        self.p = np.arange(cap, dtype=np.int32)
        self.queue = np.zeros(cap, dtype=np.int32)
        self.ded = np.zeros((DEDUCTION_STACK, 2), dtype=np.int32)
        self.st = np.zeros(6, dtype=np.int64)
        self.st[NROWS] = 1
        self.st[LIVE] = 1
        self.max_cosets = max_cosets

    def grow(self):
        cap = min(self.max_cosets, 2 * self.t.shape[0])
        ncols = self.t.shape[1]
        self.t = np.vstack([self.t, np.full((cap - self.t.shape[0], ncols), -1, dtype=np.int32)])
        self.p = np.concatenate([self.p, np.arange(self.p.shape[0], cap, dtype=np.int32)])
        self.queue = np.zeros(cap, dtype=np.int32)

    def table(self) -> np.ndarray:
        n = int(self.st[NROWS])
        p = self.p[:n]
        while True:
            nxt = p[p]
            if (nxt == p).all():
                break
            p = nxt
        live = np.flatnonzero(p == np.arange(n))
        new = np.full(n, -1, dtype=np.int64)
        new[live] = np.arange(len(live))
        rows = self.t[live]
        if (rows < 0).any():
            raise InternalConsistencyError("coset enumeration ended with an incomplete table")
        return new[p[rows]]


def _limit(max_cosets: int):
    return ResourceLimitError(f"coset enumeration exceeded {max_cosets} cosets")


def felsch_enumerate(gen_count: int, relators, max_cosets: int) -> np.ndarray:
    """Coset table (cosets x 2*gen_count) of the regular representation."""
    flat, off, colptr = _conjugates(2 * gen_count, relators)
    s = _State(2 * gen_count, max_cosets)
    while True:
        status = _felsch(s.t, s.p, s.queue, s.ded, s.st, flat, off, colptr, max_cosets)
        if status == DONE:
            return s.table()
        if status == BUDGET:
            raise _limit(max_cosets)
        s.grow()


def hlt_enumerate(gen_count: int, relators, max_cosets: int) -> np.ndarray:
    """HLT enumeration with lookahead; same output convention as Felsch."""
    flat, off = _relator_cols(relators)
    s = _State(2 * gen_count, max_cosets)
    while True:
        status = _hlt(s.t, s.p, s.queue, s.ded, s.st, flat, off, max_cosets)
        if status == DONE:
            return s.table()
        if status == GROW and s.t.shape[0] < max_cosets:
            s.grow()
            continue
        before = int(s.st[NROWS])
        _lookahead(s.t, s.p, s.st, s.queue, s.ded, flat, off)
        _compact(s.t, s.p, s.st)
        if s.st[NROWS] >= before:
            raise _limit(max_cosets)
