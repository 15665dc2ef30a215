"""Blow a genus-2 fiber up twice and watch minimal_ncd undo it.

    python3 demos/moves_tour.py
"""

from pathlib import Path

from arithsurf.classify import e_sets
from arithsurf.fiber_graph import arithmetic_genus, isomorphic
from arithsurf.formats import load_model
from arithsurf.moves import NodePoint, SmoothPoint, blow_up, minimal_ncd

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def show(title, model):
    print(title)
    for c in model.components:
        print(f"  {c.id:>3}  m={c.m} d={c.kd} s={c.s:>3} {c.kind}")
    print(f"  edges: {[(e.a, e.b, e.deg) for e in model.edges]}")
    print(f"  contractible: {sorted(e_sets(model).e_eq_minus1) or '-'}  g={arithmetic_genus(model)}")


base = load_model(str(FIXTURES / "genus2_two_lines.json"))
show("start", base)
once, e1 = blow_up(base, NodePoint(0))
show(f"after blowing up a node ({e1})", once)
twice, e2 = blow_up(once, SmoothPoint(e1, 1))
show(f"after blowing up a point on {e1} ({e2})", twice)
back = minimal_ncd(twice)
show("minimal n.c.d. model", back)
print("isomorphic to the start:", isomorphic(back, base))
