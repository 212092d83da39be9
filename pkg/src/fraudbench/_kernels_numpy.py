"""Pure-numpy compute kernels.

Reference implementations of the hot kernels: level-wise tree-split scanning,
partition application, tree traversal, and exact self k-NN. The numba module
implements the same contracts; results are bit-identical between the two (see
the operation-order notes below and in ``_portable``).

Shared kernel data model for tree growth:

- ``vals``/``order``: (n_features, n_active) streams; ``order[f]`` holds
  original row ids sorted ascending by feature ``f`` (stable), ``vals[f]``
  the matching feature values. Streams only contain rows of still-active
  nodes; they are compacted every level.
- ``node_slot``: per original row, the active-node slot id (dense 0..K-1)
  or -1 when the row has settled into a finalized leaf.
- ``a``/``b``: per-row statistics. Entropy mode (0): weight and
  weight*label. Second-order mode (1): gradient and hessian.
- ``a_tot``/``b_tot``: per-slot totals of ``a``/``b`` (driver-maintained).
- ``allowed``: (K, n_features) uint8 mask of per-node candidate features.

A split candidate exists between consecutive distinct values within a node;
its threshold is the guarded midpoint. Left statistics are within-node prefix
sums accumulated in stream order. Selection keeps the strictly greater gain,
so the earliest candidate wins ties within a feature.
"""

from __future__ import annotations

import numpy as np

from ._portable import entropy_gain_vec, second_order_gain_vec

MODE_ENTROPY = 0
MODE_SECOND_ORDER = 1


def scan_level(
    vals: np.ndarray,
    order: np.ndarray,
    node_slot: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    a_tot: np.ndarray,
    b_tot: np.ndarray,
    allowed: np.ndarray,
    mode: int,
    lam: float,
    gamma: float,
):
    """Best split candidate per (node slot, stream feature).

    Returns ``(gain, thr, a_left, b_left)``, each (K, n_features) float64;
    ``gain`` is ``-inf`` where a node/feature pair has no candidate.
    """
    mf, n_act = vals.shape
    K = a_tot.shape[0]
    gain = np.full((K, mf), -np.inf)
    thr = np.zeros((K, mf))
    a_left = np.zeros((K, mf))
    b_left = np.zeros((K, mf))
    for fi in range(mf):
        rows = order[fi]
        slots = node_slot[rows]
        ok = slots >= 0
        if not ok.any():
            continue
        ok[ok] = allowed[slots[ok], fi] != 0
        pos = np.nonzero(ok)[0]
        if pos.size < 2:
            continue
        s = slots[pos]
        v = vals[fi, pos]
        av = a[rows[pos]]
        bv = b[rows[pos]]
        # group rows by slot; stable sort preserves stream order within a node
        grp = np.argsort(s, kind="stable")
        sg = s[grp]
        vg = v[grp]
        ag = av[grp]
        bg = bv[grp]
        starts = np.nonzero(np.r_[True, sg[1:] != sg[:-1]])[0]
        bounds = np.r_[starts, sg.size]
        # within-node inclusive prefix sums, sequential like the numba
        # backend's scalar accumulators (np.cumsum accumulates in order)
        ca = np.empty_like(ag)
        cb = np.empty_like(bg)
        for gi in range(starts.size):
            lo, hi = bounds[gi], bounds[gi + 1]
            np.cumsum(ag[lo:hi], out=ca[lo:hi])
            np.cumsum(bg[lo:hi], out=cb[lo:hi])
        same = np.zeros(sg.size, dtype=bool)
        same[1:] = sg[1:] == sg[:-1]
        cand = same.copy()
        cand[1:] &= vg[1:] != vg[:-1]
        cpos = np.nonzero(cand)[0]
        if cpos.size == 0:
            continue
        cs = sg[cpos]
        al = ca[cpos - 1]
        bl = cb[cpos - 1]
        if mode == MODE_ENTROPY:
            gv = entropy_gain_vec(a_tot[cs], b_tot[cs], al, bl)
        else:
            gv = second_order_gain_vec(a_tot[cs], b_tot[cs], al, bl, lam, gamma)
        v_low = vg[cpos - 1]
        v_high = vg[cpos]
        t = 0.5 * (v_low + v_high)
        t = np.where(t < v_high, t, v_low)
        # first max per slot: sort by (slot, -gain, scan position)
        sel = np.lexsort((cpos, -gv, cs))
        cs_sorted = cs[sel]
        first = np.r_[True, cs_sorted[1:] != cs_sorted[:-1]]
        pick = sel[first]
        ps = cs[pick]
        gain[ps, fi] = gv[pick]
        thr[ps, fi] = t[pick]
        a_left[ps, fi] = al[pick]
        b_left[ps, fi] = bl[pick]
    return gain, thr, a_left, b_left


def apply_level(
    vals: np.ndarray,
    order: np.ndarray,
    node_slot: np.ndarray,
    split_feat: np.ndarray,
    split_thr: np.ndarray,
    left_slot: np.ndarray,
    right_slot: np.ndarray,
):
    """Route rows of split nodes to child slots and compact the streams.

    ``split_feat[s]`` is the stream-local split feature of slot ``s`` or -1
    when the node was finalized (its rows are dropped). Returns
    ``(vals_next, order_next, node_slot_next)``.
    """
    mf, n_act = vals.shape
    node_slot_next = np.full(node_slot.shape[0], -1, dtype=np.int32)
    for fi in range(mf):
        rows = order[fi]
        slots = node_slot[rows]
        sel = slots >= 0
        if not sel.any():
            continue
        sl = slots[sel]
        match = split_feat[sl] == fi
        if not match.any():
            continue
        pos = np.nonzero(sel)[0][match]
        rr = rows[pos]
        ss = slots[pos]
        go_left = vals[fi, pos] <= split_thr[ss]
        node_slot_next[rr] = np.where(go_left, left_slot[ss], right_slot[ss])
    keep0 = node_slot_next[order[0]] >= 0
    n_next = int(np.count_nonzero(keep0))
    vals_next = np.empty((mf, n_next))
    order_next = np.empty((mf, n_next), dtype=np.int32)
    for fi in range(mf):
        keep = keep0 if fi == 0 else node_slot_next[order[fi]] >= 0
        vals_next[fi] = vals[fi, keep]
        order_next[fi] = order[fi][keep]
    return vals_next, order_next, node_slot_next


def predict_tree(
    X: np.ndarray,
    feature: np.ndarray,
    threshold: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
    value: np.ndarray,
) -> np.ndarray:
    """Leaf value per row (rule: x[feature] <= threshold goes left)."""
    return value[tree_leaf_ids(X, feature, threshold, left, right)]


def tree_leaf_ids(
    X: np.ndarray,
    feature: np.ndarray,
    threshold: np.ndarray,
    left: np.ndarray,
    right: np.ndarray,
) -> np.ndarray:
    node = np.zeros(X.shape[0], dtype=np.int32)
    active = feature[node] >= 0
    while active.any():
        idx = np.nonzero(active)[0]
        nd = node[idx]
        f = feature[nd]
        go_left = X[idx, f] <= threshold[nd]
        nxt = np.where(go_left, left[nd], right[nd]).astype(np.int32)
        node[idx] = nxt
        active[idx] = feature[nxt] >= 0
    return node


def knn_self(X: np.ndarray, k: int) -> np.ndarray:
    """Exact k nearest neighbors of each row among the other rows.

    Squared euclidean distance; ties broken by smaller row index. Distances
    are accumulated dimension-by-dimension so both backends compute the
    identical float per pair. Returns (n, k) int64, columns ordered by
    (distance, index).
    """
    n, d = X.shape
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, n-1], got k={k}, n={n}")
    out = np.empty((n, k), dtype=np.int64)
    # chunk so the distance block stays around ~128 MB
    chunk = max(1, min(n, int(16_000_000 // max(n, 1)) + 1))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        D = np.zeros((hi - lo, n))
        for j in range(d):
            diff = X[lo:hi, j][:, None] - X[:, j][None, :]
            D += diff * diff
        rr = np.arange(lo, hi)
        D[rr - lo, rr] = np.inf
        kth_idx = np.argpartition(D, k - 1, axis=1)[:, :k]
        kth = D[np.arange(hi - lo)[:, None], kth_idx].max(axis=1)
        for i in range(hi - lo):
            cand = np.nonzero(D[i] <= kth[i])[0]
            sel = cand[np.argsort(D[i, cand], kind="stable")[:k]]
            out[lo + i] = sel
    return out
