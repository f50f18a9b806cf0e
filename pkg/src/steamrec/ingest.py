"""Readers for the raw Steam dumps and the normalized interaction/review tables.

The raw UCSD files are newline-delimited, one user record per line, and come
in two flavors: strict JSON, or Python-literal syntax (single-quoted strings,
``True``/``False``/``None``).  The readers here accept both on a per-line
basis, flatten the per-user item/review lists into one record per (user,
item) pair, and assign dense integer indices to user and item ids in
first-appearance order.

Normalized tables round-trip through strict JSON-lines files
(``interactions.jsonl`` / ``reviews.jsonl``), one flat record per line.
"""

from __future__ import annotations

import ast
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import FieldError, ParseError

_LEADING_COUNT_RE = re.compile(r"\d[\d,]*")


@dataclass(frozen=True)
class Interaction:
    """One (user, item, playtime) observation, in minutes."""

    user_id: str
    item_id: int
    item_name: str
    playtime_forever: float
    playtime_2weeks: float = 0.0

    def __post_init__(self):
        if self.playtime_forever < 0 or self.playtime_2weeks < 0:
            raise ValueError("playtime must be non-negative")


@dataclass(frozen=True)
class Review:
    """One (user, item) review: free text plus the explicit recommend flag."""

    user_id: str
    item_id: int
    text: str
    recommended: bool
    funny: int = 0
    helpful: int = 0
    posted: str = ""


def _loads_tolerant(line: str, lineno: int) -> Any:
    """Parse one line as strict JSON, falling back to a Python literal."""
    try:
        return json.loads(line)
    except json.JSONDecodeError:
        pass
    try:
        return ast.literal_eval(line)
    except (ValueError, SyntaxError, MemoryError, RecursionError):
        raise ParseError(lineno, "not strict JSON nor a Python literal") from None


def _require(record: dict, key: str, lineno: int) -> Any:
    if key not in record or record[key] is None:
        raise FieldError(lineno, f"missing required field {key!r}")
    return record[key]


def _parse_item_id(raw: Any, lineno: int) -> int:
    try:
        value = int(str(raw).strip())
    except (TypeError, ValueError):
        raise FieldError(lineno, f"item_id {raw!r} is not an integer") from None
    if value < 0:
        raise FieldError(lineno, f"item_id {raw!r} is negative")
    return value


def _parse_playtime(raw: Any, key: str, lineno: int) -> float:
    if raw is None:
        return 0.0
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise FieldError(lineno, f"{key} {raw!r} is not a number") from None
    if value < 0:
        raise FieldError(lineno, f"{key} {raw!r} is negative")
    return value


def _parse_count(raw: Any) -> int:
    """Read vote counts that may arrive as ints or prose ('35 of 43 people...')."""
    if isinstance(raw, bool):
        return int(raw)
    if isinstance(raw, (int, float)):
        return max(int(raw), 0)
    if isinstance(raw, str):
        found = _LEADING_COUNT_RE.search(raw)
        if found:
            return int(found.group().replace(",", ""))
    return 0


def _numbered_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if line:
            yield lineno, line


def parse_user_items(lines: Iterable[str]) -> list[Interaction]:
    """Flatten a stream of user-items records into one Interaction per pair.

    Duplicate (user, item) pairs keep the record with the larger
    ``playtime_forever``; missing playtime fields read as 0.  Raises
    :class:`ParseError` for unparseable lines and :class:`FieldError` for
    records missing ``user_id``/``item_id``, both carrying the 1-based line
    number.
    """
    seen: dict[tuple[str, int], Interaction] = {}
    for lineno, line in _numbered_lines(lines):
        record = _loads_tolerant(line, lineno)
        if not isinstance(record, dict):
            raise ParseError(lineno, "record is not an object")
        user_id = str(_require(record, "user_id", lineno))
        items = record.get("items", [])
        if not isinstance(items, list):
            raise FieldError(lineno, "'items' is not a list")
        for entry in items:
            if not isinstance(entry, dict):
                raise FieldError(lineno, "item entry is not an object")
            interaction = Interaction(
                user_id=user_id,
                item_id=_parse_item_id(_require(entry, "item_id", lineno), lineno),
                item_name=str(entry.get("item_name", "")),
                playtime_forever=_parse_playtime(
                    entry.get("playtime_forever", 0), "playtime_forever", lineno
                ),
                playtime_2weeks=_parse_playtime(
                    entry.get("playtime_2weeks", 0), "playtime_2weeks", lineno
                ),
            )
            key = (interaction.user_id, interaction.item_id)
            prev = seen.get(key)
            if prev is None or interaction.playtime_forever > prev.playtime_forever:
                seen[key] = interaction
    return list(seen.values())


def parse_reviews(lines: Iterable[str]) -> list[Review]:
    """Flatten a stream of user-reviews records into one Review per pair.

    Later duplicates of the same (user, item) overwrite earlier ones.  A
    review entry without a ``recommend`` flag is a :class:`FieldError`.
    """
    seen: dict[tuple[str, int], Review] = {}
    for lineno, line in _numbered_lines(lines):
        record = _loads_tolerant(line, lineno)
        if not isinstance(record, dict):
            raise ParseError(lineno, "record is not an object")
        user_id = str(_require(record, "user_id", lineno))
        reviews = record.get("reviews", [])
        if not isinstance(reviews, list):
            raise FieldError(lineno, "'reviews' is not a list")
        for entry in reviews:
            if not isinstance(entry, dict):
                raise FieldError(lineno, "review entry is not an object")
            if "recommend" in entry:
                recommended = entry["recommend"]
            elif "recommended" in entry:
                recommended = entry["recommended"]
            else:
                raise FieldError(lineno, "missing required field 'recommend'")
            review = Review(
                user_id=user_id,
                item_id=_parse_item_id(_require(entry, "item_id", lineno), lineno),
                text=str(entry.get("review", "")),
                recommended=bool(recommended),
                funny=_parse_count(entry.get("funny")),
                helpful=_parse_count(entry.get("helpful")),
                posted=str(entry.get("posted", "")),
            )
            seen[(review.user_id, review.item_id)] = review
    return list(seen.values())


class IdIndex:
    """Bijection between raw user/item ids and dense indices.

    Indices are assigned in first-appearance order, so the mapping is a
    deterministic function of the interaction order.
    """

    __slots__ = ("user_ids", "item_ids", "_user_pos", "_item_pos")

    def __init__(self):
        self.user_ids: list[str] = []
        self.item_ids: list[int] = []
        self._user_pos: dict[str, int] = {}
        self._item_pos: dict[int, int] = {}

    @property
    def num_users(self) -> int:
        return len(self.user_ids)

    @property
    def num_items(self) -> int:
        return len(self.item_ids)

    def add_user(self, user_id: str) -> int:
        pos = self._user_pos.get(user_id)
        if pos is None:
            pos = len(self.user_ids)
            self._user_pos[user_id] = pos
            self.user_ids.append(user_id)
        return pos

    def add_item(self, item_id: int) -> int:
        pos = self._item_pos.get(item_id)
        if pos is None:
            pos = len(self.item_ids)
            self._item_pos[item_id] = pos
            self.item_ids.append(item_id)
        return pos

    def user_index(self, user_id: str) -> int:
        return self._user_pos[user_id]

    def item_index(self, item_id: int) -> int:
        return self._item_pos[item_id]

    def user_id(self, index: int) -> str:
        if not 0 <= index < len(self.user_ids):
            raise IndexError(f"user index {index} out of range")
        return self.user_ids[index]

    def item_id(self, index: int) -> int:
        if not 0 <= index < len(self.item_ids):
            raise IndexError(f"item index {index} out of range")
        return self.item_ids[index]

    def has_user(self, user_id: str) -> bool:
        return user_id in self._user_pos

    def has_item(self, item_id: int) -> bool:
        return item_id in self._item_pos


@dataclass
class InteractionTable:
    """Flat interaction list plus the id index and per-user/per-item adjacency.

    ``by_user[u]`` holds ``(item_index, playtime_forever)`` pairs and
    ``by_item[i]`` holds ``(user_index, playtime_forever)`` pairs, both in
    interaction order.  The table is immutable by convention once built and
    safe to share across threads.
    """

    interactions: list[Interaction]
    index: IdIndex
    item_names: list[str] = field(default_factory=list)
    by_user: list[list[tuple[int, float]]] = field(default_factory=list)
    by_item: list[list[tuple[int, float]]] = field(default_factory=list)

    @property
    def num_users(self) -> int:
        return self.index.num_users

    @property
    def num_items(self) -> int:
        return self.index.num_items

    @property
    def sparsity(self) -> float:
        """Fraction of the user x item grid with an observed interaction (0 when empty)."""
        cells = self.num_users * self.num_items
        if cells == 0:
            return 0.0
        return len(self.interactions) / cells

    def seen_items(self, user_index: int) -> set[int]:
        return {item for item, _ in self.by_user[user_index]}


def build_table(interactions: list[Interaction]) -> InteractionTable:
    """Index users/items by first appearance and build both adjacency views."""
    index = IdIndex()
    item_names: list[str] = []
    by_user: list[list[tuple[int, float]]] = []
    by_item: list[list[tuple[int, float]]] = []
    for inter in interactions:
        u = index.add_user(inter.user_id)
        if u == len(by_user):
            by_user.append([])
        i = index.add_item(inter.item_id)
        if i == len(by_item):
            by_item.append([])
            item_names.append(inter.item_name)
        by_user[u].append((i, inter.playtime_forever))
        by_item[i].append((u, inter.playtime_forever))
    return InteractionTable(
        interactions=list(interactions),
        index=index,
        item_names=item_names,
        by_user=by_user,
        by_item=by_item,
    )


def interaction_to_dict(inter: Interaction) -> dict:
    return {
        "user_id": inter.user_id,
        "item_id": inter.item_id,
        "item_name": inter.item_name,
        "playtime_forever": inter.playtime_forever,
        "playtime_2weeks": inter.playtime_2weeks,
    }


def interaction_from_dict(record: dict) -> Interaction:
    return Interaction(
        user_id=record["user_id"],
        item_id=record["item_id"],
        item_name=record["item_name"],
        playtime_forever=record["playtime_forever"],
        playtime_2weeks=record["playtime_2weeks"],
    )


def review_to_dict(review: Review) -> dict:
    return {
        "user_id": review.user_id,
        "item_id": review.item_id,
        "text": review.text,
        "recommended": review.recommended,
        "funny": review.funny,
        "helpful": review.helpful,
        "posted": review.posted,
    }


def review_from_dict(record: dict) -> Review:
    return Review(
        user_id=record["user_id"],
        item_id=record["item_id"],
        text=record["text"],
        recommended=record["recommended"],
        funny=record["funny"],
        helpful=record["helpful"],
        posted=record["posted"],
    )


def write_interactions_jsonl(interactions: Iterable[Interaction], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for inter in interactions:
            handle.write(json.dumps(interaction_to_dict(inter)) + "\n")


def read_interactions_jsonl(path: str | Path) -> list[Interaction]:
    with open(path, "r", encoding="utf-8") as handle:
        return [
            interaction_from_dict(json.loads(line))
            for line in handle
            if line.strip()
        ]


def write_reviews_jsonl(reviews: Iterable[Review], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for review in reviews:
            handle.write(json.dumps(review_to_dict(review)) + "\n")


def read_reviews_jsonl(path: str | Path) -> list[Review]:
    with open(path, "r", encoding="utf-8") as handle:
        return [review_from_dict(json.loads(line)) for line in handle if line.strip()]


def _sniff_key(lines: list[str], key: str) -> bool:
    for lineno, line in _numbered_lines(lines):
        record = _loads_tolerant(line, lineno)
        return isinstance(record, dict) and key in record
    return False


def read_reviews_any(path: str | Path) -> list[Review]:
    """Read reviews from either a raw user-reviews dump or a flat reviews.jsonl.

    Sniffs the first non-empty line: records with an embedded ``reviews`` list
    go through the tolerant nested reader, flat records through the strict
    one.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.readlines()
    if _sniff_key(lines, "reviews"):
        return parse_reviews(lines)
    return [review_from_dict(json.loads(line)) for line in lines if line.strip()]


def read_interactions_any(path: str | Path) -> list[Interaction]:
    """Read interactions from a raw user-items dump or a flat interactions.jsonl."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.readlines()
    if _sniff_key(lines, "items"):
        return parse_user_items(lines)
    return [interaction_from_dict(json.loads(line)) for line in lines if line.strip()]
