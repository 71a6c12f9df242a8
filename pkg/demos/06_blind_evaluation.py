"""
Blind human evaluation, end to end
==================================

Competing systems are compared on a 0-4 scale by evaluators who never
learn which output came from which system. This demo builds a tiny
evaluation, scores it, and unblinds the result.
"""

import json

from corpusforge import (
    EvalItem,
    EvalStore,
    ScoreRecord,
    create_session,
    render_report,
    unblind_and_aggregate,
)

items = [
    EvalItem(
        item_id=f"item{i}",
        direction=("am", "en"),
        granularity="sentence",
        genre="news",
        source_text=src,
        outputs=(("baseline", out_a), ("bigmodel", out_b)),
    )
    for i, (src, out_a, out_b) in enumerate([
        ("ውሃ ጠጣ", "drink water", "he drinks water"),
        ("ዳቦ በላ", "eat bread", "he ate the bread"),
        ("ቤት ገባ", "enter house", "he entered the house"),
    ])
]

# Each evaluator gets a session with its own per-item shuffling. The
# client payload is all the browser ever sees: no system names, no
# permutation, no seed.
session = create_session(items, "evaluator-1", seed=2024)
payload = json.dumps(session.client_payload(), ensure_ascii=False, indent=2)
assert "baseline" not in payload and "bigmodel" not in payload
print("what the evaluator sees for the first item:")
print(json.dumps(session.client_payload()["items"][0], ensure_ascii=False, indent=2))
print()

# Scores address display positions, not systems. Our pretend evaluator
# judges only what is on screen: full sentences read better than the
# word-by-word glosses, wherever they appear.
store = EvalStore()
store.add_items(items)
store.add_session(session)
for blind in session.items:
    for position, text in enumerate(blind.outputs):
        value = 4 if text.startswith("he ") else 2
        store.record_score(
            session, ScoreRecord("evaluator-1", blind.item_id, position, value)
        )

# Unblinding maps position -> system through the stored permutation and
# aggregates mean and population std per system.
cells = unblind_and_aggregate(
    store.scores.values(), store.sessions.values(), store.items.values()
)
print(render_report(cells))

# The shuffling varied per item, so position 0 was not always the same
# system; the report still attributes every score correctly.
for item in items:
    perm = session.permutations[item.item_id]
    shown = [item.outputs[p][0] for p in perm]
    print(f"{item.item_id}: displayed order was {shown}")
