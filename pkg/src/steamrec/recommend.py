"""Deterministic top-K item lists from a trained factor model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .als import FactorModel, predict
from .ingest import InteractionTable


@dataclass(frozen=True)
class Recommendation:
    position: int
    item_index: int
    item_id: int
    item_name: str
    score: float

    def to_dict(self) -> dict:
        return {
            "position": self.position,
            "item_id": self.item_id,
            "item_name": self.item_name,
            "score": self.score,
        }


@dataclass
class UserRecommendations:
    user_id: str
    items: list[Recommendation]
    error: str | None = None

    def to_dict(self) -> dict:
        if self.error is not None:
            return {"user_id": self.user_id, "error": self.error}
        return {"user_id": self.user_id, "items": [rec.to_dict() for rec in self.items]}


def top_k(
    model: FactorModel,
    table: InteractionTable,
    user_index: int,
    k: int,
    exclude_seen: bool = True,
) -> list[Recommendation]:
    """The k highest-scoring items for a user, ties broken by item index.

    Scores are ``predict`` values; with ``exclude_seen`` the user's own
    interactions are removed from the candidate set, so a user who owns the
    whole catalog gets an empty list.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0 <= user_index < model.num_users:
        raise IndexError(f"user index {user_index} out of range")
    seen = table.seen_items(user_index) if exclude_seen else frozenset()
    candidates = [i for i in range(model.num_items) if i not in seen]
    scored = [(predict(model, user_index, i), i) for i in candidates]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [
        Recommendation(
            position=pos,
            item_index=i,
            item_id=table.index.item_id(i),
            item_name=table.item_names[i],
            score=score,
        )
        for pos, (score, i) in enumerate(scored[:k], start=1)
    ]


def batch_recommend(
    model: FactorModel,
    table: InteractionTable,
    user_ids: Sequence[str],
    k: int,
    exclude_seen: bool = True,
) -> list[UserRecommendations]:
    """Apply top_k per raw user id, preserving input order.

    Unknown ids produce a flagged entry without affecting the others.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    results = []
    for user_id in user_ids:
        if not table.index.has_user(user_id):
            results.append(
                UserRecommendations(user_id=user_id, items=[], error="unknown user id")
            )
            continue
        user_index = table.index.user_index(user_id)
        results.append(
            UserRecommendations(
                user_id=user_id,
                items=top_k(model, table, user_index, k, exclude_seen=exclude_seen),
            )
        )
    return results
