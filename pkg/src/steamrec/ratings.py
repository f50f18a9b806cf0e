"""Derive 1-5 rating triples from interactions, sentiment, and recommend flags.

Three strategies: playtime-only bucketing against the per-item median,
playtime with a +-1 sentiment nudge, and playtime with a +-2 adjustment from
the explicit recommend flag.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from statistics import median
from typing import Iterable

from .ingest import InteractionTable, Review
from .sentiment import Lexicon, SentimentClass, classify, score

logger = logging.getLogger(__name__)

RATINGS_CSV_HEADER = ["user_index", "item_index", "rating"]


class Strategy(str, Enum):
    PLAYTIME_ONLY = "playtime"
    PLAYTIME_SENTIMENT = "sentiment"
    PLAYTIME_RECOMMEND = "recommend"


@dataclass(frozen=True)
class RatingTriple:
    user_index: int
    item_index: int
    rating: int

    def __post_init__(self):
        if self.rating not in (1, 2, 3, 4, 5):
            raise ValueError(f"rating {self.rating} outside 1..5")


def median_playtime(table: InteractionTable) -> dict[int, float]:
    """Median ``playtime_forever`` per item index, zeros included.

    Items without interactions are absent from the map.  Even-sized samples
    use the mean of the two middle values.
    """
    return {
        item: float(median(playtime for _, playtime in pairs))
        for item, pairs in enumerate(table.by_item)
        if pairs
    }


def playtime_rating(playtime: float, item_median: float) -> int:
    """Bucket a playtime against its item's median playtime.

    Upper bounds are inclusive: above the median rates 5, then (0.8m, m] -> 4,
    (0.5m, 0.8m] -> 3, (0.2m, 0.5m] -> 2, and at or below 0.2m -> 1.  A zero
    median rates 5 for any play at all, else 1.
    """
    if playtime < 0 or item_median < 0:
        raise ValueError("playtime and median must be non-negative")
    if item_median == 0:
        return 5 if playtime > 0 else 1
    if playtime > item_median:
        return 5
    if playtime > 0.8 * item_median:
        return 4
    if playtime > 0.5 * item_median:
        return 3
    if playtime > 0.2 * item_median:
        return 2
    return 1


def _check_rating(rating: int) -> None:
    if rating not in (1, 2, 3, 4, 5):
        raise ValueError(f"rating {rating} outside 1..5")


def adjust_with_sentiment(rating: int, label: SentimentClass | None) -> int:
    """Nudge a rating one step toward the review's sentiment, clamped to 1..5."""
    _check_rating(rating)
    if label is SentimentClass.POSITIVE:
        return min(rating + 1, 5)
    if label is SentimentClass.NEGATIVE:
        return max(rating - 1, 1)
    return rating


def adjust_with_recommendation(rating: int, recommended: bool | None) -> int:
    """Apply the explicit-flag adjustment: +2 below 4 when recommended, -2 at
    4 or 5 when explicitly not recommended; otherwise unchanged."""
    _check_rating(rating)
    if recommended is True and rating <= 3:
        return min(rating + 2, 5)
    if recommended is False and rating >= 4:
        return max(rating - 2, 1)
    return rating


def match_reviews(
    table: InteractionTable, reviews: Iterable[Review]
) -> tuple[dict[tuple[int, int], Review], int]:
    """Key reviews by (user_index, item_index); count the unmatchable ones.

    A review is unmatchable when its (user, item) pair has no interaction in
    the table.
    """
    pairs = {
        (table.index.user_index(inter.user_id), table.index.item_index(inter.item_id))
        for inter in table.interactions
    }
    matched: dict[tuple[int, int], Review] = {}
    skipped = 0
    for review in reviews:
        if not table.index.has_user(review.user_id) or not table.index.has_item(review.item_id):
            skipped += 1
            continue
        key = (table.index.user_index(review.user_id), table.index.item_index(review.item_id))
        if key not in pairs:
            skipped += 1
            continue
        matched[key] = review
    return matched, skipped


def derive(
    table: InteractionTable,
    reviews: Iterable[Review] = (),
    lexicon: Lexicon | None = None,
    strategy: Strategy = Strategy.PLAYTIME_ONLY,
) -> list[RatingTriple]:
    """One RatingTriple per interaction, in interaction order.

    The playtime bucket is always computed first; the sentiment strategy then
    applies the matching review's class (scored with ``lexicon``) and the
    recommend strategy the review's explicit flag.  Interactions without a
    review are left at their playtime rating; reviews without a matching
    interaction are skipped with a counted warning.
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.PLAYTIME_SENTIMENT and lexicon is None:
        raise ValueError("sentiment strategy needs a lexicon")
    medians = median_playtime(table)
    matched: dict[tuple[int, int], Review] = {}
    if strategy is not Strategy.PLAYTIME_ONLY:
        matched, skipped = match_reviews(table, reviews)
        if skipped:
            logger.warning("skipped %d review(s) with no matching interaction", skipped)
    labels: dict[tuple[int, int], SentimentClass] = {}
    if strategy is Strategy.PLAYTIME_SENTIMENT:
        labels = {
            key: classify(score(review.text, lexicon)) for key, review in matched.items()
        }

    triples: list[RatingTriple] = []
    for inter in table.interactions:
        u = table.index.user_index(inter.user_id)
        i = table.index.item_index(inter.item_id)
        rating = playtime_rating(inter.playtime_forever, medians[i])
        if strategy is Strategy.PLAYTIME_SENTIMENT:
            rating = adjust_with_sentiment(rating, labels.get((u, i)))
        elif strategy is Strategy.PLAYTIME_RECOMMEND:
            review = matched.get((u, i))
            rating = adjust_with_recommendation(
                rating, review.recommended if review is not None else None
            )
        triples.append(RatingTriple(user_index=u, item_index=i, rating=rating))
    return triples


def write_ratings_csv(triples: Iterable[RatingTriple], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RATINGS_CSV_HEADER)
        for triple in triples:
            writer.writerow([triple.user_index, triple.item_index, triple.rating])


def read_ratings_csv(path: str | Path) -> list[RatingTriple]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != RATINGS_CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(RATINGS_CSV_HEADER)}")
        return [
            RatingTriple(user_index=int(u), item_index=int(i), rating=int(r))
            for u, i, r in reader
        ]
