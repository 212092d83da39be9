"""Level-wise decision-tree growth shared by all tree models.

The driver owns node bookkeeping (eligibility, leaf finalization, node ids)
and defers the two hot phases to the active backend: scanning sorted feature
streams for the best split per node, and routing rows to child slots. Feature
columns are argsorted once per fit (stable), and the sorted streams are
compacted every level, so no re-sorting ever happens during growth.

Entropy mode grows classification trees on weighted labels (``a`` = weight,
``b`` = weight * label, leaf value = positive-weight fraction). Second-order
mode grows regression trees on gradient/hessian pairs (``a`` = g, ``b`` = h,
leaf value = ``-g_sum / (h_sum + lam)`` times ``leaf_scale``), accepting a
split only when the structure-score gain minus ``gamma`` is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend

MODE_ENTROPY = 0
MODE_SECOND_ORDER = 1


@dataclass
class Tree:
    """Flat array form of a binary tree; node 0 is the root.

    ``feature[i] == -1`` marks a leaf with output ``value[i]``; internal
    nodes route ``x[feature] <= threshold`` to ``left``, else ``right``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    @property
    def n_leaves(self) -> int:
        return int(np.count_nonzero(self.feature < 0))

    @property
    def depth(self) -> int:
        d = np.zeros(self.n_nodes, dtype=np.int64)
        internal = self.feature >= 0
        for i in np.nonzero(internal)[0]:
            d[self.left[i]] = d[i] + 1
            d[self.right[i]] = d[i] + 1
        return int(d.max()) if self.n_nodes else 0

    def predict_values(self, X: np.ndarray) -> np.ndarray:
        """Leaf value for each row of X."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        return backend.kernels().predict_tree(
            X, self.feature, self.threshold, self.left, self.right, self.value
        )

    def leaf_ids(self, X: np.ndarray) -> np.ndarray:
        """Leaf node id for each row of X."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        return backend.kernels().tree_leaf_ids(
            X, self.feature, self.threshold, self.left, self.right
        )


def presort_features(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Stable argsort of every feature column, computed once per fit.

    Returns ``(order, vals)`` with shape (n_features, n_rows); shared by all
    trees of a forest / boosting run over the same matrix.
    """
    n, m = X.shape
    order = np.empty((m, n), dtype=np.int32)
    vals = np.empty((m, n))
    for f in range(m):
        o = np.argsort(X[:, f], kind="stable")
        order[f] = o
        vals[f] = X[o, f]
    return order, vals


def _init_streams(presorted, feat_ids, keep_mask):
    order_m, vals_m = presorted
    om = order_m[feat_ids]
    vm = vals_m[feat_ids]
    if keep_mask is None:
        return np.ascontiguousarray(vm), np.ascontiguousarray(om)
    sel = keep_mask[om]
    n_kept = int(np.count_nonzero(keep_mask))
    vals0 = vm[sel].reshape(len(feat_ids), n_kept)
    order0 = om[sel].reshape(len(feat_ids), n_kept)
    return np.ascontiguousarray(vals0), np.ascontiguousarray(order0)


class _TreeBuilder:
    def __init__(self) -> None:
        cap = 256
        self.feature = np.full(cap, -1, dtype=np.int32)
        self.threshold = np.zeros(cap)
        self.left = np.zeros(cap, dtype=np.int32)
        self.right = np.zeros(cap, dtype=np.int32)
        self.value = np.zeros(cap)
        self.n_nodes = 1  # root

    def ensure(self, n: int) -> None:
        cap = self.feature.shape[0]
        if n <= cap:
            return
        while cap < n:
            cap *= 2
        for name in ("feature", "threshold", "left", "right", "value"):
            old = getattr(self, name)
            new = np.full(cap, -1, dtype=np.int32) if name == "feature" else np.zeros(
                cap, dtype=old.dtype
            )
            new[: old.shape[0]] = old
            setattr(self, name, new)

    def finish(self) -> Tree:
        n = self.n_nodes
        return Tree(
            feature=self.feature[:n].copy(),
            threshold=self.threshold[:n].copy(),
            left=self.left[:n].copy(),
            right=self.right[:n].copy(),
            value=self.value[:n].copy(),
        )


def grow_tree(
    X: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    *,
    mode: int,
    presorted: tuple[np.ndarray, np.ndarray],
    feat_ids: np.ndarray | None = None,
    keep_mask: np.ndarray | None = None,
    max_depth: int = -1,
    min_weight_split: float = 2.0,
    lam: float = 1.0,
    gamma: float = 0.0,
    leaf_scale: float = 1.0,
    subset_draw=None,
) -> tuple[Tree, np.ndarray]:
    """Grow one tree; returns ``(tree, leaf_value_of_row)``.

    ``leaf_value_of_row`` holds each participating row's final leaf value
    (NaN for rows excluded by ``keep_mask``), so boosting can update train
    margins without re-traversing the tree. ``subset_draw(n_nodes, n_feats)``
    supplies a per-level uint8 candidate-feature mask for random forests;
    ``max_depth < 0`` means unlimited. ``min_weight_split`` only gates
    entropy mode.
    """
    kern = backend.kernels()
    n, m = X.shape
    if feat_ids is None:
        feat_ids = np.arange(m, dtype=np.int64)
    feat_ids = np.asarray(feat_ids, dtype=np.int64)
    mf = int(feat_ids.shape[0])
    vals, order = _init_streams(presorted, feat_ids, keep_mask)

    node_slot = np.full(n, -1, dtype=np.int32)
    if keep_mask is None:
        node_slot[:] = 0
        a_root = float(a.sum())
        b_root = float(b.sum())
    else:
        if not keep_mask.any():
            raise ValueError("keep_mask excludes every row")
        node_slot[keep_mask] = 0
        a_root = float(a[keep_mask].sum())
        b_root = float(b[keep_mask].sum())

    leaf_of_row = np.full(n, np.nan)
    tb = _TreeBuilder()
    slot_nodes = np.array([0], dtype=np.int64)
    A = np.array([a_root])
    B = np.array([b_root])
    depth = 0

    def leaf_values(A_s: np.ndarray, B_s: np.ndarray) -> np.ndarray:
        if mode == MODE_ENTROPY:
            return B_s / A_s
        return -(A_s / (B_s + lam)) * leaf_scale

    def finalize(slot_mask: np.ndarray) -> None:
        vals_fin = leaf_values(A[slot_mask], B[slot_mask])
        tb.value[slot_nodes[slot_mask]] = vals_fin
        per_slot = np.zeros(slot_mask.shape[0])
        per_slot[slot_mask] = vals_fin
        rows = np.nonzero(node_slot >= 0)[0]
        ss = node_slot[rows]
        hit = slot_mask[ss]
        leaf_of_row[rows[hit]] = per_slot[ss[hit]]

    while slot_nodes.size > 0:
        K = slot_nodes.size
        depth_ok = max_depth < 0 or depth < max_depth
        if mode == MODE_ENTROPY:
            eligible = (
                np.full(K, depth_ok)
                & (A >= min_weight_split)
                & (B > 0.0)
                & (B < A)
            )
        else:
            eligible = np.full(K, depth_ok)

        fin = ~eligible
        if fin.any():
            finalize(fin)
        if not eligible.any():
            break
        # renumber surviving slots to 0..K'-1
        lut = np.full(K, -1, dtype=np.int32)
        lut[eligible] = np.arange(int(eligible.sum()), dtype=np.int32)
        rows = np.nonzero(node_slot >= 0)[0]
        node_slot[rows] = lut[node_slot[rows]]
        slot_nodes = slot_nodes[eligible]
        A = A[eligible]
        B = B[eligible]
        K = slot_nodes.size

        if subset_draw is not None:
            allowed = subset_draw(K, mf)
        else:
            allowed = np.ones((K, mf), dtype=np.uint8)

        gain, thr, a_l, b_l = kern.scan_level(
            vals, order, node_slot, a, b, A, B, allowed,
            mode, float(lam), float(gamma),
        )
        fbest = np.argmax(gain, axis=1)
        gbest = gain[np.arange(K), fbest]
        split = gbest > 0.0

        if (~split).any():
            finalize(~split)
        if not split.any():
            break

        sidx = np.nonzero(split)[0]
        S = sidx.size
        fsel = fbest[sidx]
        al_sel = a_l[sidx, fsel]
        bl_sel = b_l[sidx, fsel]
        thr_sel = thr[sidx, fsel]

        child_ids = tb.n_nodes + np.arange(2 * S, dtype=np.int64)
        tb.ensure(tb.n_nodes + 2 * S)
        nd = slot_nodes[sidx]
        tb.feature[nd] = feat_ids[fsel].astype(np.int32)
        tb.threshold[nd] = thr_sel
        tb.left[nd] = child_ids[0::2].astype(np.int32)
        tb.right[nd] = child_ids[1::2].astype(np.int32)
        tb.n_nodes += 2 * S

        A_next = np.empty(2 * S)
        B_next = np.empty(2 * S)
        A_next[0::2] = al_sel
        A_next[1::2] = A[sidx] - al_sel
        B_next[0::2] = bl_sel
        B_next[1::2] = B[sidx] - bl_sel

        split_feat_local = np.full(K, -1, dtype=np.int32)
        split_feat_local[sidx] = fsel.astype(np.int32)
        split_thr_full = np.zeros(K)
        split_thr_full[sidx] = thr_sel
        left_slot = np.full(K, -1, dtype=np.int32)
        right_slot = np.full(K, -1, dtype=np.int32)
        left_slot[sidx] = (2 * np.arange(S)).astype(np.int32)
        right_slot[sidx] = (2 * np.arange(S) + 1).astype(np.int32)

        vals, order, node_slot = kern.apply_level(
            vals, order, node_slot, split_feat_local, split_thr_full,
            left_slot, right_slot,
        )
        slot_nodes = child_ids
        A = A_next
        B = B_next
        depth += 1

    return tb.finish(), leaf_of_row
