"""Plain decision trees: Gini classification and MSE regression.

Both builders are iterative (explicit stack) and fully deterministic;
split search is vectorized with prefix sums over sorted feature columns.
Nodes are JSON-ready dicts so trained trees persist without pickling.
"""

from __future__ import annotations

import numpy as np


def _first_argmax(values: np.ndarray) -> int:
    return int(np.argmax(values))


class ClassificationTree:
    """CART-style tree; supports sample weights and per-split feature subsets."""

    def __init__(self, max_depth: int | None = None, max_features: int | None = None):
        self.max_depth = max_depth
        self.max_features = max_features
        self.nodes: list[dict] = []

    def fit(
        self,
        X: np.ndarray,
        y: np.ndarray,
        n_classes: int,
        rng: np.random.Generator | None = None,
        sample_weight: np.ndarray | None = None,
    ) -> "ClassificationTree":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        w = np.ones(len(y)) if sample_weight is None else np.asarray(sample_weight, float)
        self.nodes = []

        stack: list[tuple[np.ndarray, int, int | None, str]] = [
            (np.arange(len(y)), 0, None, "")
        ]
        while stack:
            idx, depth, parent, side = stack.pop()
            node_id = len(self.nodes)
            if parent is not None:
                self.nodes[parent][side] = node_id

            counts = np.bincount(y[idx], weights=w[idx], minlength=n_classes)
            pure = np.count_nonzero(counts) <= 1
            depth_capped = self.max_depth is not None and depth >= self.max_depth
            if pure or depth_capped or len(idx) < 2:
                self._add_leaf(counts)
                continue

            split = self._best_split(X, y, w, idx, n_classes, rng)
            if split is None:
                self._add_leaf(counts)
                continue

            feature, threshold = split
            left_mask = X[idx, feature] <= threshold
            self.nodes.append(
                {"feature": int(feature), "threshold": float(threshold),
                 "left": -1, "right": -1}
            )
            # Right pushed first so the left child is built (and numbered) first.
            stack.append((idx[~left_mask], depth + 1, node_id, "right"))
            stack.append((idx[left_mask], depth + 1, node_id, "left"))
        return self

    def _add_leaf(self, counts: np.ndarray) -> None:
        self.nodes.append(
            {"counts": counts.tolist(), "vote": _first_argmax(counts)}
        )

    def _best_split(
        self,
        X: np.ndarray,
        y: np.ndarray,
        w: np.ndarray,
        idx: np.ndarray,
        n_classes: int,
        rng: np.random.Generator | None,
    ) -> tuple[int, float] | None:
        d = X.shape[1]
        if self.max_features is not None and rng is not None and self.max_features < d:
            features = rng.choice(d, size=self.max_features, replace=False)
        else:
            features = np.arange(d)

        best: tuple[float, int, float] | None = None
        y_sub = y[idx]
        w_sub = w[idx]
        onehot_w = w_sub[:, None] * (y_sub[:, None] == np.arange(n_classes)[None, :])
        for f in features:
            order = np.argsort(X[idx, f], kind="stable")
            xs = X[idx[order], f]
            valid = np.flatnonzero(xs[:-1] < xs[1:])
            if len(valid) == 0:
                continue
            cum = np.cumsum(onehot_w[order], axis=0)
            total = cum[-1]
            left = cum[valid]
            right = total[None, :] - left
            wl = left.sum(axis=1)
            wr = right.sum(axis=1)
            # Weighted Gini: sum over sides of w_side - sum(counts^2)/w_side.
            # Zero-weight sides can occur under boosting weights.
            with np.errstate(divide="ignore", invalid="ignore"):
                imp = (wl - (left**2).sum(axis=1) / wl) + (
                    wr - (right**2).sum(axis=1) / wr
                )
            imp = np.where(np.isfinite(imp), imp, np.inf)
            pos = int(np.argmin(imp))
            score = float(imp[pos])
            if best is None or score < best[0]:
                i = valid[pos]
                best = (score, int(f), float((xs[i] + xs[i + 1]) / 2.0))
        if best is None:
            return None
        return best[1], best[2]

    def predict_vote(self, x: np.ndarray) -> int:
        node = self.nodes[0]
        while "vote" not in node:
            node = self.nodes[node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]]
        return node["vote"]

    def to_params(self) -> dict:
        return {"max_depth": self.max_depth, "max_features": self.max_features,
                "nodes": self.nodes}

    @classmethod
    def from_params(cls, params: dict) -> "ClassificationTree":
        tree = cls(max_depth=params["max_depth"], max_features=params["max_features"])
        tree.nodes = params["nodes"]
        return tree


class RegressionTree:
    """Depth-limited MSE tree with mean-value leaves."""

    def __init__(self, max_depth: int = 3):
        self.max_depth = max_depth
        self.nodes: list[dict] = []

    def fit(self, X: np.ndarray, r: np.ndarray) -> "RegressionTree":
        X = np.asarray(X, dtype=float)
        r = np.asarray(r, dtype=float)
        self.nodes = []
        stack: list[tuple[np.ndarray, int, int | None, str]] = [
            (np.arange(len(r)), 0, None, "")
        ]
        while stack:
            idx, depth, parent, side = stack.pop()
            node_id = len(self.nodes)
            if parent is not None:
                self.nodes[parent][side] = node_id

            values = r[idx]
            if depth >= self.max_depth or len(idx) < 2 or np.all(values == values[0]):
                self.nodes.append({"value": float(values.mean())})
                continue

            split = self._best_split(X, r, idx)
            if split is None:
                self.nodes.append({"value": float(values.mean())})
                continue
            feature, threshold = split
            left_mask = X[idx, feature] <= threshold
            self.nodes.append(
                {"feature": int(feature), "threshold": float(threshold),
                 "left": -1, "right": -1}
            )
            stack.append((idx[~left_mask], depth + 1, node_id, "right"))
            stack.append((idx[left_mask], depth + 1, node_id, "left"))
        return self

    def _best_split(
        self, X: np.ndarray, r: np.ndarray, idx: np.ndarray
    ) -> tuple[int, float] | None:
        r_sub = r[idx]
        n = len(r_sub)
        total = r_sub.sum()
        baseline = total * total / n
        best: tuple[float, int, float] | None = None
        for f in range(X.shape[1]):
            order = np.argsort(X[idx, f], kind="stable")
            xs = X[idx[order], f]
            valid = np.flatnonzero(xs[:-1] < xs[1:])
            if len(valid) == 0:
                continue
            cum = np.cumsum(r_sub[order])
            nl = valid + 1
            sl = cum[valid]
            sr = total - sl
            gain = sl * sl / nl + sr * sr / (n - nl)
            pos = int(np.argmax(gain))
            score = float(gain[pos])
            if score > baseline + 1e-12 and (best is None or score > best[0]):
                i = valid[pos]
                best = (score, int(f), float((xs[i] + xs[i + 1]) / 2.0))
        if best is None:
            return None
        return best[1], best[2]

    def predict(self, x: np.ndarray) -> float:
        node = self.nodes[0]
        while "value" not in node:
            node = self.nodes[node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]]
        return node["value"]

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict(x) for x in X])

    def to_params(self) -> dict:
        return {"max_depth": self.max_depth, "nodes": self.nodes}

    @classmethod
    def from_params(cls, params: dict) -> "RegressionTree":
        tree = cls(max_depth=params["max_depth"])
        tree.nodes = params["nodes"]
        return tree
