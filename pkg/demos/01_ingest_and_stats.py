"""Parse raw newline-delimited dumps (strict JSON *or* Python-literal lines)
into normalized tables, then print the dataset report."""

import tempfile
from pathlib import Path

from steamrec import build_table, parse_user_items, parse_reviews
from steamrec.evaluation import format_stats, stats

RAW_ITEMS = """\
{"user_id": "alice", "items": [{"item_id": "10", "item_name": "Counter-Strike", "playtime_forever": 4200, "playtime_2weeks": 120}, {"item_id": "400", "item_name": "Portal", "playtime_forever": 310}]}
{'user_id': 'bob', 'items': [{'item_id': '10', 'item_name': 'Counter-Strike', 'playtime_forever': 15}, {'item_id': '4000', 'item_name': "Garry's Mod", 'playtime_forever': 990, 'playtime_2weeks': None}]}
{'user_id': 'carol', 'items': [{'item_id': '400', 'item_name': 'Portal', 'playtime_forever': 0}]}
"""

RAW_REVIEWS = """\
{"user_id": "alice", "reviews": [{"item_id": "10", "recommend": true, "review": "great fun with friends", "helpful": "3 of 4 people (75%) found this review helpful"}]}
{'user_id': 'carol', 'reviews': [{'item_id': '400', 'recommend': False, 'review': 'bought it, never launched it, still bitter'}]}
"""

interactions = parse_user_items(RAW_ITEMS.splitlines())
reviews = parse_reviews(RAW_REVIEWS.splitlines())
print(f"parsed {len(interactions)} interactions and {len(reviews)} reviews")
print("note the second line above is Python-literal syntax, not JSON\n")

for inter in interactions:
    print(f"  {inter.user_id:>6} -> {inter.item_id:<5} {inter.item_name:<15} "
          f"{inter.playtime_forever:>7.0f} min")

table = build_table(interactions)
print(f"\nusers indexed in first-appearance order: {table.index.user_ids}")
print(f"items indexed in first-appearance order: {table.index.item_ids}")
print(f"sparsity: {table.sparsity:.3f} "
      f"({len(interactions)} of {table.num_users}x{table.num_items} cells)\n")

print(format_stats(stats(table, reviews)))

# normalized tables round-trip through strict JSON-lines files
with tempfile.TemporaryDirectory() as tmp:
    from steamrec import read_interactions_jsonl, write_interactions_jsonl

    path = Path(tmp) / "interactions.jsonl"
    write_interactions_jsonl(interactions, path)
    assert read_interactions_jsonl(path) == interactions
    print(f"round-tripped the table through {path.name} byte-for-byte")
