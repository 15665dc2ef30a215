"""Classify the fixture corpus and explain the genus-3 multiplicity-2 fiber.

    python3 demos/reduction_walkthrough.py
"""

from pathlib import Path

from arithsurf.formats import load_model
from arithsurf.reduction import classify_model, stable_after_base_change

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

print(f"{'fixture':<22} {'g':>2} {'r':>2}  log_smooth semistable stable e_min")
for path in sorted(FIXTURES.glob("*.json")):
    rep = classify_model(load_model(str(path)))
    print(
        f"{path.stem:<22} {rep.g:>2} {rep.r:>2}  {rep.log_smooth!s:<10} {rep.semistable!s:<10} "
        f"{rep.stable!s:<6} {rep.e_min}"
    )

model = load_model(str(FIXTURES / "genus3_mult2.json"))
print()
for p in (2, 3):
    rep = classify_model(model, p)
    print(f"genus3_mult2 at p={p}: log_smooth={rep.log_smooth}")
    for w in rep.witnesses:
        print(f"  witness: {w}")
    if rep.e_min:
        print(f"  log regular fiber: {[(c.id, c.m) for c in rep.lreg.model.components]}")
        for sp in rep.lreg.singular_points:
            print(f"  singular point {sp.id}: weights {list(sp.chain_weights)}, embedding dim {sp.embedding_dim}")
        for e_prime in (1, 2, 3, 4):
            print(f"  stable after a tame extension of index {e_prime}: {stable_after_base_change(rep.e_min, e_prime)}")
