import numpy as np
import pytest

from steamrec import (
    ConfigError,
    EvaluationError,
    RatingTriple,
    Review,
    SplitConfig,
    split,
    stats,
)
from steamrec.als import FactorModel, TrainConfig
from steamrec.evaluation import evaluate, format_stats, rmse, sweep, sweep_csv
from steamrec.sentiment import Lexicon

from .conftest import planted_ratings, table_from_playtimes


# -- split -----------------------------------------------------------------------

def test_split_sizes():
    ratings = [RatingTriple(u, 0, 3) for u in range(10)]
    train_part, test_part = split(ratings, SplitConfig(fraction=0.8, seed=42))
    assert len(train_part) == 8 and len(test_part) == 2


def test_split_deterministic_per_seed():
    ratings = [RatingTriple(u, 0, 3) for u in range(30)]
    a = split(ratings, SplitConfig(seed=7))
    b = split(ratings, SplitConfig(seed=7))
    assert a == b
    c = split(ratings, SplitConfig(seed=8))
    assert a != c


def test_split_is_a_partition():
    ratings = [RatingTriple(u, i, 1 + (u + i) % 5) for u in range(6) for i in range(5)]
    train_part, test_part = split(ratings, SplitConfig(fraction=0.7, seed=1))
    assert sorted(map(repr, train_part + test_part)) == sorted(map(repr, ratings))
    assert not set(map(repr, train_part)) & set(map(repr, test_part))


def test_split_single_rating_is_config_error():
    with pytest.raises(ConfigError):
        split([RatingTriple(0, 0, 3)], SplitConfig())


def test_split_empty_side_is_config_error():
    ratings = [RatingTriple(u, 0, 3) for u in range(3)]
    with pytest.raises(ConfigError):
        split(ratings, SplitConfig(fraction=0.01, seed=1))  # floor(0.03) == 0


def test_split_fraction_bounds_checked_at_construction():
    with pytest.raises(ConfigError):
        SplitConfig(fraction=0.0)
    with pytest.raises(ConfigError):
        SplitConfig(fraction=1.0)


# -- rmse -------------------------------------------------------------------------

def _rank1_model(user_values, item_values):
    return FactorModel(
        user_factors=np.array(user_values, dtype=float).reshape(-1, 1),
        item_factors=np.array(item_values, dtype=float).reshape(-1, 1),
        rank=1,
        regularization=0.0,
    )


def test_rmse_zero_when_exact():
    model = _rank1_model([1, 2], [2, 4])
    train_part = [(0, 0, 2.0), (1, 1, 8.0)]
    test_part = [(0, 1, 4.0), (1, 0, 4.0)]
    report = rmse(model, test_part, train_part)
    assert report.rmse == 0.0
    assert report.evaluated == 2 and report.dropped == 0


def test_rmse_unit_example():
    # predictions [1, 3] against ratings [2, 4]
    model = _rank1_model([1, 3], [1])
    train_part = [(0, 0, 2.0), (1, 0, 4.0)]
    report = rmse(model, train_part, train_part)
    assert report.rmse == pytest.approx(1.0)


def test_rmse_drops_cold_start():
    model = _rank1_model([1, 2], [2, 4])
    train_part = [(0, 0, 2.0)]
    test_part = [(0, 0, 2.0), (1, 0, 99.0), (0, 1, 99.0)]
    report = rmse(model, test_part, train_part)
    assert report.evaluated == 1
    assert report.dropped == 2
    assert report.evaluated + report.dropped == len(test_part)
    assert report.cold_start_policy == "drop"


def test_rmse_all_cold_is_evaluation_error():
    model = _rank1_model([1, 2], [2, 4])
    with pytest.raises(EvaluationError):
        rmse(model, [(1, 1, 3.0)], [(0, 0, 2.0)])


def test_rmse_invariant_to_test_ordering():
    rng = np.random.default_rng(0)
    model = _rank1_model(rng.random(6), rng.random(5))
    triples = [(u, i, float(rng.integers(1, 6))) for u in range(6) for i in range(5)]
    forward = rmse(model, triples, triples).rmse
    backward = rmse(model, triples[::-1], triples).rmse
    assert backward == pytest.approx(forward, rel=1e-12)


# -- sweep -----------------------------------------------------------------------

def test_sweep_single_rank_single_report():
    # two observations of one pair, so the held-out triple is never cold
    ratings = [RatingTriple(0, 0, 3), RatingTriple(0, 0, 4)]
    reports = sweep(
        ratings, [1], TrainConfig(rank=1, iterations=2), SplitConfig(fraction=0.5, seed=0)
    )
    assert len(reports) == 1
    assert reports[0].rank == 1


def test_sweep_planted_rank_beats_rank_one():
    arr = planted_ratings(seed=42)
    reports = sweep(
        arr,
        [1, 3],
        TrainConfig(rank=1, iterations=60, regularization=0.01, seed=42),
        SplitConfig(fraction=0.8, seed=42),
    )
    by_rank = {r.rank: r.rmse for r in reports}
    assert by_rank[3] < by_rank[1]


def test_sweep_bit_reproducible():
    arr = planted_ratings(num_users=40, num_items=25, seed=5)
    args = (
        arr,
        [1, 2],
        TrainConfig(rank=1, iterations=3, regularization=0.1, seed=9),
        SplitConfig(fraction=0.8, seed=9),
    )
    first = sweep(*args)
    second = sweep(*args)
    assert [r.rmse for r in first] == [r.rmse for r in second]


def test_sweep_rejects_empty_ranks():
    with pytest.raises(ConfigError):
        sweep([RatingTriple(0, 0, 3)], [], TrainConfig(rank=1), SplitConfig())


def test_sweep_csv_format():
    arr = planted_ratings(num_users=30, num_items=20, seed=3)
    reports = sweep(
        arr,
        [2],
        TrainConfig(rank=2, iterations=2, regularization=0.1, seed=4),
        SplitConfig(fraction=0.8, seed=4),
    )
    text = sweep_csv(reports)
    lines = text.strip().splitlines()
    assert lines[0] == "rank,rmse,evaluated,dropped"
    assert lines[1].startswith("2,")


def test_evaluate_splits_trains_and_reports():
    arr = planted_ratings(num_users=50, num_items=30, seed=10)
    report = evaluate(
        arr,
        50,
        30,
        TrainConfig(rank=3, iterations=5, regularization=0.01, seed=1),
        SplitConfig(fraction=0.8, seed=2),
        strategy="playtime",
    )
    assert report.strategy == "playtime"
    assert report.evaluated + report.dropped == len(arr) - int(0.8 * len(arr))


# -- stats -----------------------------------------------------------------------

LEX = Lexicon({"great": 3.0, "terrible": -3.0})


def test_stats_hand_example():
    table = table_from_playtimes({1: [("a", 10), ("b", 30)]})
    report = stats(table, lexicon=LEX)
    assert report.num_interactions == 2
    assert report.num_users == 2 and report.num_items == 1
    assert report.total_playtime == 40.0
    assert report.top_items[0][2] == 40.0
    assert report.avg_playtime_per_user == 20.0
    assert report.avg_playtime_per_item == 40.0
    assert [(u, t) for u, t in report.top_users] == [("b", 30.0), ("a", 10.0)]


def test_stats_empty_dataset():
    table = table_from_playtimes({})
    report = stats(table, lexicon=LEX)
    assert report.num_interactions == 0
    assert report.num_users == 0
    assert report.sparsity == 0.0
    assert report.avg_playtime_per_user == 0.0
    assert report.top_items == [] and report.top_users == []


def test_stats_counts_review_sentiment():
    table = table_from_playtimes({1: [("a", 10)]})
    reviews = [
        Review("a", 1, "great", True),
        Review("a", 1, "terrible", False),
        Review("a", 1, "whatever", True),
    ]
    report = stats(table, reviews, LEX)
    assert report.num_reviews == 3
    assert (report.sentiment.positive, report.sentiment.neutral, report.sentiment.negative) == (
        1,
        1,
        1,
    )


def test_stats_top_lists_capped_at_ten():
    table = table_from_playtimes(
        {item: [(f"u{item}{n}", 10 * item + n) for n in range(2)] for item in range(15)}
    )
    report = stats(table, lexicon=LEX)
    assert len(report.top_items) == 10
    assert len(report.top_users) == 10
    totals = [t for _, _, t in report.top_items]
    assert totals == sorted(totals, reverse=True)


def test_format_stats_renders_text():
    table = table_from_playtimes({1: [("a", 10), ("b", 30)]})
    text = format_stats(stats(table, lexicon=LEX))
    assert "interactions:" in text
    assert "sparsity:" in text
    assert "game-1" in text
