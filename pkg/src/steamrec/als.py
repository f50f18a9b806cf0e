"""Alternating least squares matrix factorization for explicit 1-5 ratings.

Each sweep alternates two half-steps: re-solve every user row with the item
factors fixed, then every item row with the user factors fixed.  A row's
normal equations are

    (Y_u' Y_u + lambda * n_u * I_k) x_u = Y_u' r_u

where ``Y_u`` stacks the fixed factors of the row's observed partners, and
``n_u`` is the row's observation count (weighted regularization).  The k x k
system is solved by Cholesky factorization.  The training objective recorded
after every half-step is the matching weighted form

    J = sum_observed (r_ui - x_u . y_i)^2
        + lambda * (sum_u n_u ||x_u||^2 + sum_i n_i ||y_i||^2)

which each half-step minimizes exactly in its free block, so the loss trace
is non-increasing.

Row solves are independent within a half-step and may run on parallel
workers; each row's arithmetic is identical regardless of the worker count,
so training is bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import ConfigError, SolveError

MAX_RANK = 200
_OBJECTIVE_CHUNK = 1_000_000

RatingGroups = list[tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class TrainConfig:
    rank: int
    iterations: int = 10
    regularization: float = 0.1
    seed: int = 42

    def __post_init__(self):
        if not 1 <= self.rank <= MAX_RANK:
            raise ConfigError(f"rank must be in 1..{MAX_RANK}, got {self.rank}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if not self.regularization >= 0:
            raise ConfigError(f"regularization must be >= 0, got {self.regularization}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


@dataclass
class FactorModel:
    """Dense user and item factor matrices plus the training hyperparameters."""

    user_factors: np.ndarray
    item_factors: np.ndarray
    rank: int
    regularization: float
    seed: int | None = None

    def __post_init__(self):
        self.user_factors = np.asarray(self.user_factors, dtype=np.float64)
        self.item_factors = np.asarray(self.item_factors, dtype=np.float64)
        if self.user_factors.ndim != 2 or self.item_factors.ndim != 2:
            raise ValueError("factor matrices must be 2-D")
        if self.user_factors.shape[1] != self.rank or self.item_factors.shape[1] != self.rank:
            raise ValueError("factor matrix width must equal the rank")
        if not (
            np.isfinite(self.user_factors).all() and np.isfinite(self.item_factors).all()
        ):
            raise ValueError("factor matrices must be finite")

    @property
    def num_users(self) -> int:
        return self.user_factors.shape[0]

    @property
    def num_items(self) -> int:
        return self.item_factors.shape[0]


@dataclass
class LossTrace:
    """Objective value J recorded after every half-step."""

    values: list[float] = field(default_factory=list)

    def is_non_increasing(self, rel_tol: float = 1e-9) -> bool:
        return all(
            later <= earlier + rel_tol * max(abs(earlier), abs(later), 1e-12)
            for earlier, later in zip(self.values, self.values[1:])
        )


def _as_array(ratings) -> np.ndarray:
    """Coerce RatingTriples / tuples / an (N, 3) array to float64 columns (u, i, r)."""
    if isinstance(ratings, np.ndarray):
        arr = np.asarray(ratings, dtype=np.float64)
    else:
        rows = [
            (t.user_index, t.item_index, t.rating)
            if hasattr(t, "user_index")
            else (t[0], t[1], t[2])
            for t in ratings
        ]
        arr = np.asarray(rows, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("ratings must be nonempty")
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("ratings must be triples of (user_index, item_index, rating)")
    return arr


def init_model(num_users: int, num_items: int, config: TrainConfig) -> FactorModel:
    """Seeded uniform [0, 1) entries scaled by 1/sqrt(rank).

    The same seed always yields bit-identical matrices: the user matrix is
    drawn first, then the item matrix, from one PCG64 stream.
    """
    if num_users < 1 or num_items < 1:
        raise ConfigError("need at least one user and one item")
    rng = np.random.default_rng(config.seed)
    scale = 1.0 / np.sqrt(config.rank)
    user = rng.random((num_users, config.rank)) * scale
    item = rng.random((num_items, config.rank)) * scale
    return FactorModel(
        user_factors=user,
        item_factors=item,
        rank=config.rank,
        regularization=config.regularization,
        seed=config.seed,
    )


def _group(indices: np.ndarray, partners: np.ndarray, values: np.ndarray, size: int) -> RatingGroups:
    order = np.argsort(indices, kind="stable")
    sorted_idx = indices[order]
    sorted_partners = partners[order]
    sorted_values = values[order]
    bounds = np.searchsorted(sorted_idx, np.arange(size + 1))
    return [
        (sorted_partners[bounds[i] : bounds[i + 1]], sorted_values[bounds[i] : bounds[i + 1]])
        for i in range(size)
    ]


def group_by_user(ratings, num_users: int) -> RatingGroups:
    """Per-user (item_indices, ratings) arrays, index-sorted and deterministic."""
    arr = _as_array(ratings)
    users = arr[:, 0].astype(np.intp)
    items = arr[:, 1].astype(np.intp)
    return _group(users, items, arr[:, 2], num_users)


def group_by_item(ratings, num_items: int) -> RatingGroups:
    """Per-item (user_indices, ratings) arrays, index-sorted and deterministic."""
    arr = _as_array(ratings)
    users = arr[:, 0].astype(np.intp)
    items = arr[:, 1].astype(np.intp)
    return _group(items, users, arr[:, 2], num_items)


def _solve_rows(
    fixed: np.ndarray,
    groups: RatingGroups,
    regularization: float,
    out: np.ndarray,
    start: int,
    stop: int,
) -> None:
    k = fixed.shape[1]
    for row in range(start, stop):
        partner_idx, values = groups[row]
        count = len(partner_idx)
        if count == 0:
            continue
        partners = fixed[partner_idx]
        normal = partners.T @ partners
        normal.flat[:: k + 1] += regularization * count
        rhs = partners.T @ values
        try:
            factor = cho_factor(normal, overwrite_a=True, check_finite=False)
        except LinAlgError as exc:
            raise SolveError(f"singular normal matrix for row {row}: {exc}") from exc
        out[row] = cho_solve(factor, rhs, check_finite=False)


def solve_half_step(
    fixed: np.ndarray,
    groups: RatingGroups,
    regularization: float,
    current: np.ndarray,
    workers: int = 1,
) -> np.ndarray:
    """Re-solve every free row against the fixed side; returns a new matrix.

    Rows with no observations keep their current values.  With ``workers > 1``
    rows are split into contiguous chunks across a thread pool; per-row
    results are identical for any worker count.
    """
    out = np.array(current, dtype=np.float64, copy=True)
    n_rows = len(groups)
    if workers <= 1 or n_rows < 2:
        _solve_rows(fixed, groups, regularization, out, 0, n_rows)
        return out
    cuts = np.linspace(0, n_rows, num=min(workers, n_rows) + 1, dtype=int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_solve_rows, fixed, groups, regularization, out, int(a), int(b))
            for a, b in zip(cuts[:-1], cuts[1:])
        ]
        for future in futures:
            future.result()
    return out


def objective(
    user_factors: np.ndarray,
    item_factors: np.ndarray,
    ratings,
    regularization: float,
) -> float:
    """Weighted-regularization training objective J over the observed triples."""
    arr = _as_array(ratings)
    users = arr[:, 0].astype(np.intp)
    items = arr[:, 1].astype(np.intp)
    values = arr[:, 2]
    fit = 0.0
    for lo in range(0, len(arr), _OBJECTIVE_CHUNK):
        hi = lo + _OBJECTIVE_CHUNK
        preds = np.einsum(
            "ij,ij->i", user_factors[users[lo:hi]], item_factors[items[lo:hi]]
        )
        fit += float(np.sum((values[lo:hi] - preds) ** 2))
    user_counts = np.bincount(users, minlength=user_factors.shape[0])
    item_counts = np.bincount(items, minlength=item_factors.shape[0])
    reg = regularization * (
        float(user_counts @ np.einsum("ij,ij->i", user_factors, user_factors))
        + float(item_counts @ np.einsum("ij,ij->i", item_factors, item_factors))
    )
    return fit + reg


def train(
    ratings,
    num_users: int,
    num_items: int,
    config: TrainConfig,
    initial: FactorModel | None = None,
    workers: int = 1,
) -> tuple[FactorModel, LossTrace]:
    """Run ``config.iterations`` full sweeps of alternating half-steps.

    Args:
        ratings: RatingTriples or an (N, 3) array of (user, item, rating).
        num_users / num_items: matrix dimensions; every index must be in range.
        config: rank, iterations, regularization, seed.
        initial: start from these factors instead of a fresh seeded init.
        workers: parallel row solvers per half-step (does not affect results).

    Returns:
        The trained model and the loss trace with one J value per half-step.
    """
    arr = _as_array(ratings)
    if arr[:, 0].min() < 0 or arr[:, 0].max() >= num_users:
        raise ValueError("user index out of range")
    if arr[:, 1].min() < 0 or arr[:, 1].max() >= num_items:
        raise ValueError("item index out of range")

    if initial is None:
        initial = init_model(num_users, num_items, config)
    elif initial.user_factors.shape != (num_users, config.rank) or initial.item_factors.shape != (
        num_items,
        config.rank,
    ):
        raise ConfigError("initial model shape does not match (num_users, num_items, rank)")

    user_factors = initial.user_factors.copy()
    item_factors = initial.item_factors.copy()
    user_groups = group_by_user(arr, num_users)
    item_groups = group_by_item(arr, num_items)
    lam = config.regularization

    trace = LossTrace()
    for _ in range(config.iterations):
        user_factors = solve_half_step(item_factors, user_groups, lam, user_factors, workers)
        trace.values.append(objective(user_factors, item_factors, arr, lam))
        item_factors = solve_half_step(user_factors, item_groups, lam, item_factors, workers)
        trace.values.append(objective(user_factors, item_factors, arr, lam))

    model = FactorModel(
        user_factors=user_factors,
        item_factors=item_factors,
        rank=config.rank,
        regularization=lam,
        seed=initial.seed if initial.seed is not None else config.seed,
    )
    return model, trace


def predict(model: FactorModel, user_index: int, item_index: int) -> float:
    """Unclamped dot product of the two factor rows."""
    if not 0 <= user_index < model.num_users:
        raise IndexError(f"user index {user_index} out of range")
    if not 0 <= item_index < model.num_items:
        raise IndexError(f"item index {item_index} out of range")
    return float(np.dot(model.user_factors[user_index], model.item_factors[item_index]))


def train_rmse(model: FactorModel, ratings) -> float:
    """Root mean squared residual of the model on the given triples."""
    arr = _as_array(ratings)
    users = arr[:, 0].astype(np.intp)
    items = arr[:, 1].astype(np.intp)
    preds = np.einsum("ij,ij->i", model.user_factors[users], model.item_factors[items])
    return float(np.sqrt(np.mean((arr[:, 2] - preds) ** 2)))


_MODEL_FORMAT = "als-factor-model"


def save_model(model: FactorModel, path: str | Path) -> None:
    """Write the model container: a JSON manifest line, then two .npy blobs.

    The byte content is a pure function of the model, so identical models
    produce identical files.
    """
    header = {
        "format": _MODEL_FORMAT,
        "version": 1,
        "rank": model.rank,
        "regularization": model.regularization,
        "seed": model.seed,
        "num_users": model.num_users,
        "num_items": model.num_items,
    }
    with open(path, "wb") as handle:
        handle.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        np.save(handle, np.ascontiguousarray(model.user_factors), allow_pickle=False)
        np.save(handle, np.ascontiguousarray(model.item_factors), allow_pickle=False)


def load_model(path: str | Path) -> FactorModel:
    with open(path, "rb") as handle:
        header = json.loads(handle.readline().decode("utf-8"))
        if header.get("format") != _MODEL_FORMAT:
            raise ValueError(f"{path}: not a factor-model container")
        user_factors = np.load(handle, allow_pickle=False)
        item_factors = np.load(handle, allow_pickle=False)
    return FactorModel(
        user_factors=user_factors,
        item_factors=item_factors,
        rank=header["rank"],
        regularization=header["regularization"],
        seed=header["seed"],
    )
