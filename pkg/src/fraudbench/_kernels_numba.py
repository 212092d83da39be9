"""Numba compute kernels.

Same contracts as ``_kernels_numpy`` (see its docstring for the shared data
model); results are bit-identical. Scans parallelize across features and
k-NN across queries with ``prange``; every per-candidate float operation
mirrors the numpy module's operation order exactly.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

from ._portable import entropy_gain, second_order_gain, split_threshold

MODE_ENTROPY = 0
MODE_SECOND_ORDER = 1


@njit(cache=True, parallel=True)
def _scan_level(vals, order, node_slot, a, b, a_tot, b_tot, allowed, mode, lam, gamma):
    mf, n_act = vals.shape
    K = a_tot.shape[0]
    gain = np.full((K, mf), -np.inf)
    thr = np.zeros((K, mf))
    a_left = np.zeros((K, mf))
    b_left = np.zeros((K, mf))
    for fi in prange(mf):
        acc_a = np.zeros(K)
        acc_b = np.zeros(K)
        seen = np.zeros(K, np.uint8)
        last_v = np.zeros(K)
        bg = np.full(K, -np.inf)
        bt = np.zeros(K)
        bal = np.zeros(K)
        bbl = np.zeros(K)
        for i in range(n_act):
            r = order[fi, i]
            s = node_slot[r]
            if s < 0:
                continue
            if allowed[s, fi] == 0:
                continue
            v = vals[fi, i]
            if seen[s] == 1 and v != last_v[s]:
                wl = acc_a[s]
                wyl = acc_b[s]
                if mode == MODE_ENTROPY:
                    gval = entropy_gain(a_tot[s], b_tot[s], wl, wyl)
                else:
                    gval = second_order_gain(a_tot[s], b_tot[s], wl, wyl, lam, gamma)
                if gval > bg[s]:
                    bg[s] = gval
                    bt[s] = split_threshold(last_v[s], v)
                    bal[s] = wl
                    bbl[s] = wyl
            acc_a[s] += a[r]
            acc_b[s] += b[r]
            last_v[s] = v
            seen[s] = 1
        for s in range(K):
            gain[s, fi] = bg[s]
            thr[s, fi] = bt[s]
            a_left[s, fi] = bal[s]
            b_left[s, fi] = bbl[s]
    return gain, thr, a_left, b_left


def scan_level(vals, order, node_slot, a, b, a_tot, b_tot, allowed, mode, lam, gamma):
    return _scan_level(
        vals, order, node_slot, a, b, a_tot, b_tot, allowed, mode, lam, gamma
    )


@njit(cache=True, parallel=True)
def _apply_level(vals, order, node_slot, split_feat, split_thr, left_slot, right_slot):
    mf, n_act = vals.shape
    n = node_slot.shape[0]
    node_slot_next = np.full(n, np.int32(-1), np.int32)
    for fi in prange(mf):
        for i in range(n_act):
            r = order[fi, i]
            s = node_slot[r]
            if s < 0:
                continue
            if split_feat[s] != fi:
                continue
            if vals[fi, i] <= split_thr[s]:
                node_slot_next[r] = left_slot[s]
            else:
                node_slot_next[r] = right_slot[s]
    n_next = 0
    for i in range(n_act):
        if node_slot_next[order[0, i]] >= 0:
            n_next += 1
    vals_next = np.empty((mf, n_next))
    order_next = np.empty((mf, n_next), np.int32)
    for fi in prange(mf):
        w = 0
        for i in range(n_act):
            r = order[fi, i]
            if node_slot_next[r] >= 0:
                vals_next[fi, w] = vals[fi, i]
                order_next[fi, w] = r
                w += 1
    return vals_next, order_next, node_slot_next


def apply_level(vals, order, node_slot, split_feat, split_thr, left_slot, right_slot):
    return _apply_level(
        vals, order, node_slot, split_feat, split_thr, left_slot, right_slot
    )


@njit(cache=True, parallel=True)
def _tree_leaf_ids(X, feature, threshold, left, right):
    n = X.shape[0]
    out = np.empty(n, np.int32)
    for i in prange(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out


def tree_leaf_ids(X, feature, threshold, left, right):
    return _tree_leaf_ids(X, feature, threshold, left, right)


def predict_tree(X, feature, threshold, left, right, value):
    return value[_tree_leaf_ids(X, feature, threshold, left, right)]


@njit(cache=True, inline="always")
def _try_insert(best_d, best_i, d2, idx):
    k = best_d.shape[0]
    wd = best_d[k - 1]
    wi = best_i[k - 1]
    if d2 > wd:
        return
    if d2 == wd and idx > wi:
        return
    p = k - 1
    while p > 0 and (
        best_d[p - 1] > d2 or (best_d[p - 1] == d2 and best_i[p - 1] > idx)
    ):
        best_d[p] = best_d[p - 1]
        best_i[p] = best_i[p - 1]
        p -= 1
    best_d[p] = d2
    best_i[p] = idx


@njit(cache=True, parallel=True)
def _knn_brute(X, k):
    n, d = X.shape
    out = np.empty((n, k), np.int64)
    for q in prange(n):
        best_d = np.full(k, np.inf)
        best_i = np.full(k, np.int64(n))
        for c in range(n):
            if c == q:
                continue
            wd = best_d[k - 1]
            acc = 0.0
            for j in range(d):
                t = X[q, j] - X[c, j]
                acc += t * t
                if acc > wd:
                    break
            _try_insert(best_d, best_i, acc, c)
        out[q] = best_i
    return out


@njit(cache=True, parallel=True)
def _knn_bucketed(X, k):
    n, d = X.shape
    out = np.empty((n, k), np.int64)
    norms = np.empty(n)
    for i in prange(n):
        acc = 0.0
        for j in range(d):
            acc += X[i, j] * X[i, j]
        norms[i] = np.sqrt(acc)
    by_norm = np.argsort(norms)
    B = n // 192
    if B < 8:
        B = 8
    if B > 2048:
        B = 2048
    centers = np.empty(B, np.int64)
    for i in range(B):
        centers[i] = by_norm[((2 * i + 1) * n) // (2 * B)]
    cnorm = np.empty(B)
    for i in range(B):
        cnorm[i] = norms[centers[i]]

    # assign each point to a nearby center (any assignment is valid; the
    # query bound below only needs each bucket's true radius)
    assign = np.empty(n, np.int32)
    cdist = np.empty(n)
    for i in prange(n):
        ni = norms[i]
        lo = 0
        hi = B
        while lo < hi:
            mid = (lo + hi) // 2
            if cnorm[mid] < ni:
                lo = mid + 1
            else:
                hi = mid
        L = lo - 1
        R = lo
        best = np.inf
        bj = -1
        while L >= 0 or R < B:
            if L >= 0:
                dl = ni - cnorm[L]
            else:
                dl = np.inf
            if R < B:
                dr = cnorm[R] - ni
            else:
                dr = np.inf
            if dl <= dr:
                c = L
                gap = dl
                L -= 1
            else:
                c = R
                gap = dr
                R += 1
            if gap * gap >= best:
                break
            acc = 0.0
            ci = centers[c]
            for j in range(d):
                t = X[i, j] - X[ci, j]
                acc += t * t
                if acc >= best:
                    break
            if acc < best:
                best = acc
                bj = c
        assign[i] = bj
        cdist[i] = np.sqrt(best)

    bcount = np.zeros(B, np.int64)
    for i in range(n):
        bcount[assign[i]] += 1
    boff = np.zeros(B + 1, np.int64)
    for c in range(B):
        boff[c + 1] = boff[c] + bcount[c]
    brows = np.empty(n, np.int64)
    fill = boff[:B].copy()
    for i in range(n):
        c = assign[i]
        brows[fill[c]] = i
        fill[c] += 1
    radius = np.zeros(B)
    for i in range(n):
        c = assign[i]
        if cdist[i] > radius[c]:
            radius[c] = cdist[i]
    rmax = 0.0
    for c in range(B):
        if radius[c] > rmax:
            rmax = radius[c]

    for q in prange(n):
        best_d = np.full(k, np.inf)
        best_i = np.full(k, np.int64(n))
        nq = norms[q]
        lo = 0
        hi = B
        while lo < hi:
            mid = (lo + hi) // 2
            if cnorm[mid] < nq:
                lo = mid + 1
            else:
                hi = mid
        L = lo - 1
        R = lo
        while L >= 0 or R < B:
            if L >= 0:
                dl = nq - cnorm[L]
            else:
                dl = np.inf
            if R < B:
                dr = cnorm[R] - nq
            else:
                dr = np.inf
            if dl <= dr:
                c = L
                gap = dl
                L -= 1
            else:
                c = R
                gap = dr
                R += 1
            wd = best_d[k - 1]
            t0 = gap - rmax
            if t0 > 0.0 and t0 * t0 >= wd:
                break
            if boff[c] == boff[c + 1]:
                continue
            ci = centers[c]
            dqc2 = 0.0
            for j in range(d):
                t1 = X[q, j] - X[ci, j]
                dqc2 += t1 * t1
            lb = np.sqrt(dqc2) - radius[c]
            if lb > 0.0 and lb * lb >= wd:
                continue
            for ii in range(boff[c], boff[c + 1]):
                cand = brows[ii]
                if cand == q:
                    continue
                wd = best_d[k - 1]
                acc = 0.0
                for j in range(d):
                    t2 = X[q, j] - X[cand, j]
                    acc += t2 * t2
                    if acc > wd:
                        break
                _try_insert(best_d, best_i, acc, cand)
        out[q] = best_i
    return out


def knn_self(X: np.ndarray, k: int) -> np.ndarray:
    """Exact self k-NN; see the numpy backend for the full contract."""
    n, d = X.shape
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, n-1], got k={k}, n={n}")
    X = np.ascontiguousarray(X, dtype=np.float64)
    if n <= 600:
        return _knn_brute(X, k)
    return _knn_bucketed(X, k)
