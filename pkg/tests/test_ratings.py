import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steamrec import (
    Lexicon,
    RatingTriple,
    Review,
    SentimentClass,
    Strategy,
    adjust_with_recommendation,
    adjust_with_sentiment,
    derive,
    median_playtime,
    playtime_rating,
    read_ratings_csv,
    write_ratings_csv,
)
from steamrec.ratings import match_reviews

from .conftest import table_from_playtimes

POS_LEX = Lexicon({"great": 3.0, "terrible": -3.0})


def rating_oracle(playtime, median):
    """Independent bucket oracle: one plus the number of thresholds exceeded."""
    thresholds = [median, 0.8 * median, 0.5 * median, 0.2 * median]
    return 1 + sum(1 for t in thresholds if playtime > t)


def median_oracle(values):
    ordered = sorted(values)
    mid = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2


# -- median_playtime -----------------------------------------------------------

def test_median_odd_even_singleton():
    table = table_from_playtimes(
        {1: [("a", 10), ("b", 20), ("c", 30)], 2: [("a", 10), ("b", 20)], 3: [("a", 7)]}
    )
    medians = median_playtime(table)
    by_id = {table.index.item_ids[i]: m for i, m in medians.items()}
    assert by_id == {1: 20.0, 2: 15.0, 3: 7.0}


def test_median_includes_zeros():
    table = table_from_playtimes({1: [("a", 0), ("b", 0), ("c", 90)]})
    assert median_playtime(table)[0] == 0.0


# -- playtime_rating -----------------------------------------------------------

def test_table_rows_match_examples():
    assert playtime_rating(150, 100) == 5
    assert playtime_rating(90, 100) == 4
    assert playtime_rating(60, 100) == 3
    assert playtime_rating(30, 100) == 2
    assert playtime_rating(10, 100) == 1


def test_boundaries_upper_inclusive():
    assert playtime_rating(100, 100) == 4
    assert playtime_rating(80, 100) == 3
    assert playtime_rating(50, 100) == 2
    assert playtime_rating(20, 100) == 1
    assert playtime_rating(0, 100) == 1


def test_zero_median_degenerate():
    assert playtime_rating(0, 0) == 1
    assert playtime_rating(1, 0) == 5


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        playtime_rating(-1, 100)
    with pytest.raises(ValueError):
        playtime_rating(1, -100)


@settings(max_examples=300)
@given(
    playtime=st.integers(min_value=0, max_value=100000),
    median=st.integers(min_value=0, max_value=100000),
)
def test_rating_matches_counting_oracle(playtime, median):
    assert playtime_rating(playtime, median) == rating_oracle(playtime, median)


@settings(max_examples=200)
@given(
    playtimes=st.lists(st.integers(0, 2000), min_size=1, max_size=15),
    scale=st.integers(1, 60),
)
def test_rating_invariant_under_item_scaling(playtimes, scale):
    median = median_oracle(playtimes)
    before = [playtime_rating(p, median) for p in playtimes]
    after = [playtime_rating(p * scale, median * scale) for p in playtimes]
    assert before == after


# -- adjustments ----------------------------------------------------------------

def test_sentiment_adjustment_examples():
    assert adjust_with_sentiment(5, SentimentClass.NEGATIVE) == 4
    assert adjust_with_sentiment(4, SentimentClass.POSITIVE) == 5
    assert adjust_with_sentiment(5, SentimentClass.POSITIVE) == 5
    assert adjust_with_sentiment(1, SentimentClass.NEGATIVE) == 1
    assert adjust_with_sentiment(3, SentimentClass.NEUTRAL) == 3
    assert adjust_with_sentiment(3, None) == 3


def test_recommendation_adjustment_examples():
    assert adjust_with_recommendation(3, True) == 5
    assert adjust_with_recommendation(4, False) == 2
    assert adjust_with_recommendation(4, True) == 4
    assert adjust_with_recommendation(2, None) == 2


def test_adjustments_stay_in_range():
    for rating in (1, 2, 3, 4, 5):
        for label in (*SentimentClass, None):
            assert adjust_with_sentiment(rating, label) in (1, 2, 3, 4, 5)
        for flag in (True, False, None):
            assert adjust_with_recommendation(rating, flag) in (1, 2, 3, 4, 5)


def test_adjustments_reject_bad_rating():
    with pytest.raises(ValueError):
        adjust_with_sentiment(0, SentimentClass.POSITIVE)
    with pytest.raises(ValueError):
        adjust_with_recommendation(6, True)


def test_rating_triple_validates():
    with pytest.raises(ValueError):
        RatingTriple(0, 0, 6)


# -- derive ----------------------------------------------------------------------

def _one_interaction_table():
    # playtime 150 against a median of 100 (built from three users)
    return table_from_playtimes({7: [("a", 150), ("b", 100), ("c", 50)]})


def test_derive_playtime_only():
    table = _one_interaction_table()
    triples = derive(table, strategy=Strategy.PLAYTIME_ONLY)
    assert [t.rating for t in triples] == [5, 4, 2]
    assert [t.user_index for t in triples] == [0, 1, 2]


def test_derive_without_review_is_unchanged_under_any_strategy():
    table = _one_interaction_table()
    for strategy in (Strategy.PLAYTIME_SENTIMENT, Strategy.PLAYTIME_RECOMMEND):
        triples = derive(table, [], POS_LEX, strategy)
        assert triples[0].rating == 5


def test_derive_sentiment_negative_review_drops_to_four():
    table = _one_interaction_table()
    review = Review(user_id="a", item_id=7, text="terrible", recommended=False)
    triples = derive(table, [review], POS_LEX, Strategy.PLAYTIME_SENTIMENT)
    assert triples[0].rating == 4


def test_derive_recommend_raises_three_to_five():
    table = table_from_playtimes({7: [("a", 60), ("b", 100), ("c", 120)]})
    review = Review(user_id="a", item_id=7, text="", recommended=True)
    triples = derive(table, [review], None, Strategy.PLAYTIME_RECOMMEND)
    assert triples[0].rating == 5  # playtime rating 3, +2 from the flag


def test_derive_skips_unmatched_reviews_with_warning(caplog):
    table = _one_interaction_table()
    reviews = [
        Review(user_id="nobody", item_id=7, text="x", recommended=True),
        Review(user_id="a", item_id=999, text="x", recommended=True),
        Review(user_id="b", item_id=7, text="x", recommended=True),
    ]
    matched, skipped = match_reviews(table, reviews)
    assert skipped == 2
    assert set(matched) == {(1, 0)}
    with caplog.at_level("WARNING"):
        derive(table, reviews, POS_LEX, Strategy.PLAYTIME_SENTIMENT)
    assert "skipped 2 review(s)" in caplog.text


def test_derive_output_length_matches_interactions():
    rng = np.random.default_rng(3)
    table = table_from_playtimes(
        {i: [(f"u{u}", int(rng.integers(0, 500))) for u in range(6)] for i in range(9)}
    )
    for strategy in Strategy:
        assert len(derive(table, [], POS_LEX, strategy)) == len(table.interactions)


def test_derive_matches_bruteforce_oracle():
    rng = np.random.default_rng(11)
    for _ in range(40):
        num_items = int(rng.integers(1, 6))
        playtimes = {
            item: [
                (f"u{u}", int(rng.integers(0, 300)))
                for u in range(int(rng.integers(1, 8)))
            ]
            for item in range(num_items)
        }
        table = table_from_playtimes(playtimes)
        got = derive(table, strategy=Strategy.PLAYTIME_ONLY)
        expected = []
        for inter in table.interactions:
            item_values = [
                other.playtime_forever
                for other in table.interactions
                if other.item_id == inter.item_id
            ]
            expected.append(
                rating_oracle(inter.playtime_forever, median_oracle(item_values))
            )
        assert [t.rating for t in got] == expected


def test_derive_sentiment_requires_lexicon():
    with pytest.raises(ValueError):
        derive(_one_interaction_table(), [], None, Strategy.PLAYTIME_SENTIMENT)


# -- csv io ------------------------------------------------------------------------

def test_ratings_csv_round_trip(tmp_path):
    triples = [RatingTriple(0, 1, 5), RatingTriple(1, 0, 3)]
    path = tmp_path / "ratings.csv"
    write_ratings_csv(triples, path)
    text = path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "user_index,item_index,rating"
    assert read_ratings_csv(path) == triples


def test_ratings_csv_rejects_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
    with pytest.raises(ValueError):
        read_ratings_csv(path)
