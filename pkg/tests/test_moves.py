import random

import pytest

from arithsurf.classify import e_sets
from arithsurf.errors import ModelError, PreconditionError
from arithsurf.fiber_graph import (
    Branch,
    Component,
    Edge,
    FiberModel,
    arithmetic_genus,
    boundary_rank,
    isomorphic,
    validate,
)
from arithsurf.moves import (
    BranchPoint,
    InternalNode,
    NodePoint,
    SmoothPoint,
    blow_down,
    blow_up,
    minimal_ncd,
)

import oracles


def P1(cid, s, m=1, kd=1, sep=True):
    return Component(cid, m, kd, sep, "P1", s)


def test_blow_up_smooth_point(corpus):
    g2 = corpus["genus2_two_lines"]
    out, e = blow_up(g2, SmoothPoint("A", 1))
    assert out.component(e) == Component(e, 1, 1, True, "P1", -1)
    assert out.component("A").s == -4
    assert [x.deg for _, x in out.edges_at(e)] == [1]
    assert validate(out) == []


def test_blow_up_node(corpus):
    g2 = corpus["genus2_two_lines"]
    out, e = blow_up(g2, NodePoint(0))
    assert out.component(e).m == 2
    assert out.component("A").s == -4 and out.component("B").s == -4
    assert arithmetic_genus(out) == 2
    assert validate(out) == []


def test_blow_up_quadratic_point():
    model = FiberModel(0, [P1("A", -3), P1("B", -3)], [Edge("A", "B", 1)] * 3)
    out, e = blow_up(model, SmoothPoint("A", 2))
    ex = out.component(e)
    assert (ex.kd, ex.s) == (2, -2)
    assert [x.deg for _, x in out.edges_at(e)] == [2]
    assert validate(out) == []


def test_blow_up_rejects_incompatible_degree():
    model = FiberModel(0, [P1("A", 0, kd=2)])
    with pytest.raises(ModelError):
        blow_up(model, SmoothPoint("A", 3))


def test_blow_down_two_neighbours():
    model = FiberModel(
        0, [P1("F", -2), P1("G", -2), P1("E", -1, m=2)], [Edge("F", "E", 1), Edge("G", "E", 1)]
    )
    assert validate(model) == []
    out = blow_down(model, "E")
    assert out.component("F").s == -1 and out.component("G").s == -1
    assert [(e.a, e.b, e.deg) for e in out.edges] == [("F", "G", 1)]


def test_blow_down_quadratic_point_kinds():
    base = FiberModel(0, [P1("F", -4, kd=2), P1("E", -1, m=2)], [Edge("F", "E", 2)])
    assert validate(base) == []
    out = blow_down(base, "E")
    f = out.component("F")
    assert (f.kind, f.kd, f.s) == ("node_rational", 1, 0)
    same_field = FiberModel(0, [P1("F", -4), P1("E", -1, m=2)], [Edge("F", "E", 2)])
    assert validate(same_field) == []
    out = blow_down(same_field, "E")
    assert out.component("F").s == 0 and out.component("F").kind == "P1"
    loops = out.loops_at("F")
    assert len(loops) == 1 and not loops[0].split
    assert arithmetic_genus(out) == arithmetic_genus(same_field) == 1


def test_blow_down_inseparable_quadratic_rejected():
    model = FiberModel(0, [P1("F", -4, kd=2), P1("E", -1, m=2)], [Edge("F", "E", 2, sep=False)])
    with pytest.raises(PreconditionError):
        blow_down(model, "E")


def test_blow_down_rejects_non_exceptional(corpus):
    with pytest.raises(PreconditionError):
        blow_down(corpus["genus2_two_lines"], "A")
    with pytest.raises(PreconditionError):
        blow_down(corpus["aeb_a1"], "E")


def test_blow_down_rejects_branch_only_contacts():
    model = FiberModel(0, [P1("E", -1)], branches=[Branch("D", "E", 1, 1)])
    with pytest.raises(PreconditionError):
        blow_down(model, "E")


def test_internal_node_round_trip(corpus):
    model = corpus["exc_e_chain"]
    out, e = blow_up(model, InternalNode("E2"))
    assert out.component("E2").kind == "P1" and out.component("E2").kd == 2
    assert validate(out) == []
    assert e in e_sets(out).e_P1p
    assert isomorphic(blow_down(out, e), model)


def test_branch_point_round_trip(corpus):
    model = corpus["genus1_one_branch"]
    out, e = blow_up(model, BranchPoint("D"))
    assert out.branch("D").on == e
    assert isomorphic(blow_down(out, e), model)


def test_self_loop_round_trips(corpus):
    model = corpus["nonsplit_node"]
    idx = next(i for i, e in enumerate(model.edges) if e.is_loop)
    out, e = blow_up(model, NodePoint(idx))
    assert out.component(e).m == 2 and validate(out) == []
    assert isomorphic(blow_down(out, e), model)
    split = FiberModel(0, [P1("A", 0)], [Edge("A", "A", 1, True, split=True)])
    out, e = blow_up(split, NodePoint(0))
    assert len(out.edges_at(e)) == 2 and validate(out) == []
    assert isomorphic(blow_down(out, e), split)


def test_minimal_ncd_examples(corpus):
    g2 = corpus["genus2_two_lines"]
    assert minimal_ncd(g2) == g2
    once, _ = blow_up(g2, NodePoint(0))
    assert isomorphic(minimal_ncd(once), g2)
    assert isomorphic(minimal_ncd(corpus["genus2_blownup"]), g2)


def test_minimal_ncd_nested_blowups_any_order(corpus):
    g2 = corpus["genus2_two_lines"]
    once, e1 = blow_up(g2, SmoothPoint("A", 1))
    twice, e2 = blow_up(once, SmoothPoint(e1, 1))
    first = minimal_ncd(twice, choose=lambda c: c[0])
    last = minimal_ncd(twice, choose=lambda c: c[-1])
    assert isomorphic(first, g2) and isomorphic(last, g2)


def test_minimal_ncd_requires_hyperbolic():
    with pytest.raises(PreconditionError):
        minimal_ncd(FiberModel(0, [P1("A", 0)]))


def test_moves_need_regular_model(corpus):
    from arithsurf.classify import build_lreg

    lreg = build_lreg(corpus["aeb_a1"]).model
    with pytest.raises(PreconditionError):
        blow_up(lreg, SmoothPoint("A", 1))


@pytest.mark.parametrize("seed", range(5))
def test_random_blow_up_exceptional_is_contractible(corpus, seed):
    rng = random.Random(seed)
    for model in corpus.values():
        spec = oracles.random_point(model, rng)
        out, e = blow_up(model, spec)
        assert e in e_sets(out).e_eq_minus1
        assert validate(out) == []
        assert (arithmetic_genus(out), boundary_rank(out)) == (arithmetic_genus(model), boundary_rank(model))
