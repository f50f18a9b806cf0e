"""Train/test splitting, RMSE evaluation, rank sweeps, and dataset statistics."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .als import FactorModel, TrainConfig, predict, train
from .errors import ConfigError, EvaluationError
from .ingest import InteractionTable, Review
from .sentiment import ClassCounts, Lexicon, bundled_lexicon, class_counts

TOP_N = 10


@dataclass(frozen=True)
class SplitConfig:
    fraction: float = 0.8
    seed: int = 42

    def __post_init__(self):
        if not 0.0 < self.fraction < 1.0:
            raise ConfigError(f"train fraction must be in (0, 1), got {self.fraction}")


@dataclass
class EvalReport:
    rmse: float
    evaluated: int
    dropped: int
    strategy: str
    rank: int
    regularization: float
    cold_start_policy: str = "drop"

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def split(ratings: Sequence, config: SplitConfig):
    """Seeded uniform shuffle, then cut at floor(fraction * N).

    Both sides must be nonempty; a fraction that empties one side is a
    ConfigError.  The same seed always produces the same partition.
    """
    n = len(ratings)
    if n < 2:
        raise ConfigError("need at least 2 ratings to split")
    cut = math.floor(config.fraction * n)
    if cut == 0 or cut == n:
        raise ConfigError(
            f"fraction {config.fraction} leaves an empty side for {n} ratings"
        )
    perm = np.random.default_rng(config.seed).permutation(n)
    if isinstance(ratings, np.ndarray):
        return ratings[perm[:cut]], ratings[perm[cut:]]
    train_part = [ratings[j] for j in perm[:cut]]
    test_part = [ratings[j] for j in perm[cut:]]
    return train_part, test_part


def _columns(ratings) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    from .als import _as_array

    arr = _as_array(ratings)
    return arr[:, 0].astype(np.intp), arr[:, 1].astype(np.intp), arr[:, 2]


def rmse(
    model: FactorModel,
    test: Sequence,
    train_ratings: Sequence,
    strategy: str = "",
) -> EvalReport:
    """RMSE over test triples whose user and item both appeared in training.

    Cold-start triples are dropped and counted; if everything is dropped the
    evaluation fails.
    """
    test_users, test_items, test_values = _columns(test)
    train_users, train_items, _ = _columns(train_ratings)
    seen_users = set(train_users.tolist())
    seen_items = set(train_items.tolist())

    errors = []
    dropped = 0
    for u, i, value in zip(test_users, test_items, test_values):
        if int(u) in seen_users and int(i) in seen_items:
            errors.append(predict(model, int(u), int(i)) - value)
        else:
            dropped += 1
    if not errors:
        raise EvaluationError("every test triple was cold (unseen user or item)")
    value = float(np.sqrt(np.mean(np.square(errors))))
    return EvalReport(
        rmse=value,
        evaluated=len(errors),
        dropped=dropped,
        strategy=strategy,
        rank=model.rank,
        regularization=model.regularization,
    )


def evaluate(
    ratings: Sequence,
    num_users: int,
    num_items: int,
    train_config: TrainConfig,
    split_config: SplitConfig,
    strategy: str = "",
    workers: int = 1,
) -> EvalReport:
    """Split, train on the train side, and report held-out RMSE."""
    train_part, test_part = split(ratings, split_config)
    model, _ = train(train_part, num_users, num_items, train_config, workers=workers)
    return rmse(model, test_part, train_part, strategy=strategy)


def sweep(
    ratings: Sequence,
    ranks: Sequence[int],
    train_config: TrainConfig,
    split_config: SplitConfig,
    strategy: str = "",
    workers: int = 1,
) -> list[EvalReport]:
    """One evaluation per rank, reusing the same split for every rank."""
    if not ranks:
        raise ConfigError("ranks must be nonempty")
    num_users = int(max(t.user_index if hasattr(t, "user_index") else t[0] for t in ratings)) + 1
    num_items = int(max(t.item_index if hasattr(t, "item_index") else t[1] for t in ratings)) + 1
    train_part, test_part = split(ratings, split_config)
    reports = []
    for rank in ranks:
        config = dataclasses.replace(train_config, rank=rank)
        model, _ = train(train_part, num_users, num_items, config, workers=workers)
        reports.append(rmse(model, test_part, train_part, strategy=strategy))
    return reports


def sweep_csv(reports: Iterable[EvalReport]) -> str:
    lines = ["rank,rmse,evaluated,dropped"]
    for report in reports:
        lines.append(f"{report.rank},{report.rmse},{report.evaluated},{report.dropped}")
    return "\n".join(lines) + "\n"


@dataclass
class DatasetStats:
    num_interactions: int
    num_users: int
    num_items: int
    num_reviews: int
    sparsity: float
    total_playtime: float
    avg_playtime_per_user: float
    avg_playtime_per_item: float
    top_items: list[tuple[int, str, float]]
    top_users: list[tuple[str, float]]
    sentiment: ClassCounts


def stats(
    table: InteractionTable,
    reviews: Sequence[Review] = (),
    lexicon: Lexicon | None = None,
) -> DatasetStats:
    """Dataset report: counts, sparsity, playtime totals, sentiment classes.

    Average playtime per user/item is total playtime divided by the user/item
    count; top lists rank by total playtime with index order breaking ties.
    """
    if lexicon is None:
        lexicon = bundled_lexicon()
    user_totals = [sum(p for _, p in pairs) for pairs in table.by_user]
    item_totals = [sum(p for _, p in pairs) for pairs in table.by_item]
    total = float(sum(user_totals))

    item_order = sorted(range(table.num_items), key=lambda i: (-item_totals[i], i))
    user_order = sorted(range(table.num_users), key=lambda u: (-user_totals[u], u))
    top_items = [
        (table.index.item_id(i), table.item_names[i], float(item_totals[i]))
        for i in item_order[:TOP_N]
    ]
    top_users = [
        (table.index.user_id(u), float(user_totals[u])) for u in user_order[:TOP_N]
    ]
    return DatasetStats(
        num_interactions=len(table.interactions),
        num_users=table.num_users,
        num_items=table.num_items,
        num_reviews=len(reviews),
        sparsity=table.sparsity,
        total_playtime=total,
        avg_playtime_per_user=total / table.num_users if table.num_users else 0.0,
        avg_playtime_per_item=total / table.num_items if table.num_items else 0.0,
        top_items=top_items,
        top_users=top_users,
        sentiment=class_counts((r.text for r in reviews), lexicon),
    )


def format_stats(report: DatasetStats) -> str:
    lines = [
        f"interactions:          {report.num_interactions}",
        f"users:                 {report.num_users}",
        f"items:                 {report.num_items}",
        f"reviews:               {report.num_reviews}",
        f"sparsity:              {report.sparsity:.6f}",
        f"total playtime (min):  {report.total_playtime:.0f}",
        f"avg playtime per user: {report.avg_playtime_per_user:.1f}",
        f"avg playtime per item: {report.avg_playtime_per_item:.1f}",
        "top items by total playtime:",
    ]
    for item_id, name, minutes in report.top_items:
        lines.append(f"  {item_id:>10}  {minutes:>12.0f}  {name}")
    lines.append("top users by total playtime:")
    for user_id, minutes in report.top_users:
        lines.append(f"  {user_id:>20}  {minutes:>12.0f}")
    lines.append(
        "review sentiment:      "
        f"{report.sentiment.positive} positive / {report.sentiment.neutral} neutral / "
        f"{report.sentiment.negative} negative"
    )
    return "\n".join(lines) + "\n"
