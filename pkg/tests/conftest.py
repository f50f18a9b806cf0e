from pathlib import Path

import numpy as np
import pytest

from steamrec import Interaction, build_table

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


def make_interaction(user="u1", item=10, name="Game", forever=0.0, recent=0.0):
    return Interaction(
        user_id=user,
        item_id=item,
        item_name=name,
        playtime_forever=forever,
        playtime_2weeks=recent,
    )


def table_from_playtimes(playtimes):
    """Build a table from {item_id: [(user_id, playtime), ...]}."""
    interactions = [
        make_interaction(user=user, item=item, name=f"game-{item}", forever=minutes)
        for item, pairs in playtimes.items()
        for user, minutes in pairs
    ]
    return build_table(interactions)


def planted_ratings(num_users=200, num_items=100, rank=3, density=0.2, seed=42):
    """Noise-free ratings sampled from random rank-`rank` factors."""
    rng = np.random.default_rng(seed)
    user_factors = rng.normal(size=(num_users, rank))
    item_factors = rng.normal(size=(num_items, rank))
    mask = rng.random((num_users, num_items)) < density
    users, items = np.nonzero(mask)
    values = np.einsum("ij,ij->i", user_factors[users], item_factors[items])
    return np.column_stack([users, items, values]).astype(np.float64)


def random_rating_array(rng, num_users, num_items, count):
    """Random integer 1-5 triples with unique (user, item) pairs."""
    cells = num_users * num_items
    picks = rng.choice(cells, size=min(count, cells), replace=False)
    users = picks // num_items
    items = picks % num_items
    values = rng.integers(1, 6, size=len(picks))
    return np.column_stack([users, items, values]).astype(np.float64)
