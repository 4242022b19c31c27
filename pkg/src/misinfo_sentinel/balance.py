"""Class rebalancing for training sets: random oversampling, SMOTE, ADASYN.

All three methods keep the original rows verbatim and first in the output,
flag every generated row, and are byte-deterministic for a fixed
(input, parameters, seed) triple.  Distances are Euclidean over the full,
unscaled feature vector.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError


@dataclass
class LabeledSet:
    """Feature matrix + binary labels, with provenance for synthetic rows."""

    X: np.ndarray
    y: np.ndarray
    synthetic: np.ndarray = None  # type: ignore[assignment]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y)
        if self.X.ndim != 2:
            raise ArgumentError("X must be a 2-D matrix")
        if len(self.X) != len(self.y):
            raise ArgumentError("X and y must have equal length")
        if self.synthetic is None:
            self.synthetic = np.zeros(len(self.y), dtype=bool)
        else:
            self.synthetic = np.asarray(self.synthetic, dtype=bool)
            if len(self.synthetic) != len(self.y):
                raise ArgumentError("synthetic flags must align with rows")

    def __len__(self):
        return len(self.y)

    def class_counts(self) -> dict:
        values, counts = np.unique(self.y, return_counts=True)
        return dict(zip(values.tolist(), counts.tolist()))


def _split_classes(ls: LabeledSet) -> tuple:
    counts = ls.class_counts()
    if len(counts) != 2:
        raise ArgumentError(f"rebalancing expects 2 classes, got {sorted(counts)}")
    (c1, n1), (c2, n2) = sorted(counts.items(), key=lambda kv: (kv[1], str(kv[0])))
    minority, majority = c1, c2
    return minority, majority, n1, n2


def _appended(ls: LabeledSet, rows: np.ndarray, label, provenance: dict) -> LabeledSet:
    if len(rows) == 0:
        return LabeledSet(ls.X.copy(), ls.y.copy(), ls.synthetic.copy(), provenance)
    X = np.vstack([ls.X, rows])
    y = np.concatenate([ls.y, np.full(len(rows), label, dtype=ls.y.dtype)])
    flags = np.concatenate([ls.synthetic, np.ones(len(rows), dtype=bool)])
    return LabeledSet(X, y, flags, provenance)


def random_oversample(ls: LabeledSet, seed: int = 0) -> LabeledSet:
    """Duplicate uniformly-sampled minority rows until class counts match."""
    minority, majority, n_min, n_maj = _split_classes(ls)
    provenance = {"method": "random_oversample", "seed": seed}
    need = n_maj - n_min
    if need == 0:
        return _appended(ls, np.empty((0, ls.X.shape[1])), minority, provenance)
    rng = np.random.default_rng(seed)
    minority_rows = ls.X[ls.y == minority]
    picks = rng.integers(0, n_min, size=need)
    return _appended(ls, minority_rows[picks].copy(), minority, provenance)


def smote(ls: LabeledSet, k_neighbors: int = 5, seed: int = 0) -> LabeledSet:
    """Interpolate synthetic minority rows between nearest-neighbor pairs."""
    minority, majority, n_min, n_maj = _split_classes(ls)
    need = n_maj - n_min
    provenance = {"method": "smote", "k_neighbors": k_neighbors, "seed": seed}
    if need == 0:
        return _appended(ls, np.empty((0, ls.X.shape[1])), minority, provenance)
    if n_min == 1:
        warnings.warn("single minority sample; falling back to random oversampling")
        out = random_oversample(ls, seed)
        out.provenance = dict(provenance, fallback="random_oversample")
        return out
    k = min(k_neighbors, n_min - 1)
    minority_rows = ls.X[ls.y == minority]
    neighbors = _knn_indices(minority_rows, minority_rows, k, skip_self=True)
    rng = np.random.default_rng(seed)
    synths = np.empty((need, ls.X.shape[1]))
    for s in range(need):
        i = int(rng.integers(0, n_min))
        j = int(neighbors[i][int(rng.integers(0, k))])
        u = rng.random()
        synths[s] = minority_rows[i] + u * (minority_rows[j] - minority_rows[i])
    return _appended(ls, synths, minority, provenance)


def adasyn(ls: LabeledSet, k_neighbors: int = 5, beta: float = 1.0, seed: int = 0) -> LabeledSet:
    """Adaptive synthetic sampling: more synthetics near the class border.

    Per minority sample i, r_i is the majority share of its k nearest
    neighbors in the full set; quotas are r_i normalized times
    G = (majority - minority) * beta, apportioned by largest remainder so
    they sum to G exactly.
    """
    minority, majority, n_min, n_maj = _split_classes(ls)
    provenance = {"method": "adasyn", "k_neighbors": k_neighbors, "beta": beta, "seed": seed}
    G = int(round((n_maj - n_min) * beta))
    if G == 0:
        return _appended(ls, np.empty((0, ls.X.shape[1])), minority, provenance)

    minority_idx = np.flatnonzero(ls.y == minority)
    minority_rows = ls.X[minority_idx]
    k_full = min(k_neighbors, len(ls) - 1)
    nn_full = _knn_indices(minority_rows, ls.X, k_full, skip_self_rows=minority_idx)
    majority_mask = ls.y != minority
    r = np.array([majority_mask[nn_full[i]].sum() / k_full for i in range(n_min)])
    if r.sum() == 0:
        warnings.warn("no minority sample has majority neighbors; ADASYN makes no synthetics")
        out = _appended(ls, np.empty((0, ls.X.shape[1])), minority, provenance)
        out.provenance["per_sample_counts"] = [0] * n_min
        return out
    quotas = r / r.sum() * G
    g = largest_remainder(quotas, G)
    provenance["per_sample_counts"] = g.tolist()

    rng = np.random.default_rng(seed)
    if n_min == 1:
        synths = np.repeat(minority_rows, G, axis=0)
        return _appended(ls, synths, minority, provenance)
    k_min = min(k_neighbors, n_min - 1)
    nn_min = _knn_indices(minority_rows, minority_rows, k_min, skip_self=True)
    synths = np.empty((G, ls.X.shape[1]))
    pos = 0
    for i in range(n_min):
        for _ in range(g[i]):
            j = int(nn_min[i][int(rng.integers(0, k_min))])
            u = rng.random()
            synths[pos] = minority_rows[i] + u * (minority_rows[j] - minority_rows[i])
            pos += 1
    return _appended(ls, synths, minority, provenance)


def largest_remainder(quotas: np.ndarray, total: int) -> np.ndarray:
    """Integer apportionment of ``quotas`` summing to ``total`` exactly."""
    floors = np.floor(quotas).astype(int)
    remainder = total - int(floors.sum())
    if remainder < 0:
        raise ArgumentError("quotas exceed the requested total")
    fractions = quotas - floors
    order = sorted(range(len(quotas)), key=lambda i: (-fractions[i], i))
    for i in order[:remainder]:
        floors[i] += 1
    return floors


def _knn_indices(queries, pool, k, skip_self=False, skip_self_rows=None):
    """Row indices (into ``pool``) of the k nearest neighbors per query.

    ``skip_self`` excludes identical row positions when queries == pool;
    ``skip_self_rows`` gives each query's own index inside the pool.
    Ties break on the lower pool index, keeping results deterministic.
    Distances are computed one query at a time (difference form) so memory
    stays O(pool) instead of O(queries x pool x features).
    """
    out = np.empty((len(queries), k), dtype=int)
    for i in range(len(queries)):
        d2 = ((pool - queries[i]) ** 2).sum(axis=1)
        if skip_self:
            d2[i] = np.inf
        if skip_self_rows is not None:
            d2[skip_self_rows[i]] = np.inf
        out[i] = np.argsort(d2, kind="stable")[:k]
    return out


METHODS = {
    "random": random_oversample,
    "smote": smote,
    "adasyn": adasyn,
}
