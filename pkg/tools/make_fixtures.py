"""Regenerate the fixture corpus in ``fixtures/`` through the canonical serializer."""

from pathlib import Path

from arithsurf.fiber_graph import Branch, Component, Edge, FiberModel, require_valid
from arithsurf.formats import save_model
from arithsurf.moves import InternalNode, NodePoint, SmoothPoint, blow_up

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def P1(cid, s, m=1, kd=1, sep=True):
    return Component(cid, m, kd, sep, "P1", s)


def edges(a, b, n, deg=1, sep=True):
    return [Edge(a, b, deg, sep) for _ in range(n)]


def corpus() -> dict[str, FiberModel]:
    out = {}
    out["genus2_two_lines"] = FiberModel(2, [P1("A", -3), P1("B", -3)], edges("A", "B", 3))
    out["aeb_a1"] = FiberModel(
        3, [P1("A", -3), P1("B", -3), P1("E", -2)], edges("A", "B", 2) + [Edge("A", "E", 1), Edge("E", "B", 1)]
    )
    out["genus3_mult2"] = FiberModel(
        3, [P1("A", -4), P1("B", -4), P1("E", -2, m=2)], edges("A", "E", 2) + edges("E", "B", 2)
    )
    out["chain_m3m2"] = FiberModel(
        0,
        [P1("A", -2, m=2), P1("B", -7), P1("E1", -3), P1("E2", -2)],
        [Edge("A", "E1", 1), Edge("E1", "E2", 1), Edge("E2", "B", 1)] + edges("A", "B", 3),
    )
    exc_e = FiberModel(
        3,
        [P1("F", -5), P1("G", -3), P1("E1", -4, kd=2), Component("E2", 1, 1, True, "node_rational", -2)],
        edges("F", "G", 3) + [Edge("F", "E1", 2), Edge("E1", "E2", 2)],
    )
    out["exc_e_chain"] = exc_e
    out["exc_o_chain"] = exc_e.with_changes(
        components=tuple(Component("E2", 1, 1, True, "conic", -2) if c.id == "E2" else c for c in exc_e.components)
    )
    out["str1x_degree2"] = FiberModel(
        3, [P1("F", -5), P1("G", -3), P1("E", -2)], edges("F", "G", 3) + [Edge("F", "E", 2)]
    )
    out["nonsplit_node"] = FiberModel(
        3, [P1("A", -2), P1("B", -2)], [Edge("A", "A", 1, True, split=False)] + edges("A", "B", 2)
    )
    out["genus1_one_branch"] = FiberModel(
        5, [P1("A", -2), P1("B", -2)], edges("A", "B", 2), [Branch("D", "A", 1, 1)]
    )
    out["genus3_mult2_branch"] = out["genus3_mult2"].with_changes(branches=(Branch("D", "E", 2, 1),))
    out["exc_e_blownup"], _ = blow_up(exc_e, InternalNode("E2"))
    g2 = out["genus2_two_lines"]
    once, e1 = blow_up(g2, NodePoint(0))
    twice, _ = blow_up(once, SmoothPoint(e1, 1))
    out["genus2_blownup"] = twice
    return out


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for name, model in corpus().items():
        save_model(require_valid(model), OUT / f"{name}.json")


if __name__ == "__main__":
    main()
