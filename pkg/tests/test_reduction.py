import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithsurf.classify import build_lreg
from arithsurf.errors import InconsistentModel, PreconditionError
from arithsurf.fiber_graph import ResidueDatum
from arithsurf.moves import blow_up, minimal_ncd
from arithsurf.reduction import (
    classify_model,
    e_min,
    is_log_smooth,
    is_semistable,
    is_stable,
    log_smooth_at_node,
    lreg_reduced,
    stable_after_base_change,
)

import oracles

SEP = ResidueDatum(1, True)


def test_log_smooth_at_node_examples():
    assert log_smooth_at_node(2, 3, SEP, 2)
    assert not log_smooth_at_node(2, 4, SEP, 2)
    assert log_smooth_at_node(2, 4, SEP, 3)
    assert not log_smooth_at_node(1, 1, ResidueDatum(2, False), 3)


def test_is_log_smooth_examples(corpus):
    for p in (0, 2, 3, 5, 7):
        assert is_log_smooth(corpus["genus2_two_lines"].with_changes(p=p), p)[0]
    g3 = corpus["genus3_mult2"]
    ok, witnesses = is_log_smooth(g3.with_changes(p=2), 2)
    assert not ok and "E" in {w.target for w in witnesses}
    assert is_log_smooth(g3, 3) == (True, [])


def test_is_log_smooth_requires_regular(corpus):
    with pytest.raises(PreconditionError):
        is_log_smooth(build_lreg(corpus["aeb_a1"]).model, 3)


def test_semistable_examples(corpus):
    assert is_semistable(corpus["genus2_two_lines"])
    assert not is_semistable(corpus["genus3_mult2"])
    assert is_semistable(corpus["aeb_a1"])


def test_stable_examples(corpus):
    assert is_stable(build_lreg(corpus["genus2_two_lines"]))
    aeb = build_lreg(corpus["aeb_a1"])
    assert is_stable(aeb) and len(aeb.singular_points) == 1
    assert not is_stable(build_lreg(corpus["genus3_mult2"]))
    # before contraction E carries only two nodes
    assert not oracles.stable_curve_axioms(corpus["aeb_a1"])


def test_e_min_examples(corpus):
    assert e_min(build_lreg(corpus["genus2_two_lines"]), 2) == 1
    assert e_min(build_lreg(corpus["genus3_mult2"]), 3) == 2
    with pytest.raises(PreconditionError):
        e_min(build_lreg(corpus["genus3_mult2"].with_changes(p=2)), 2)


def test_stable_after_base_change_examples():
    assert stable_after_base_change(2, 4)
    assert not stable_after_base_change(2, 3)
    assert all(stable_after_base_change(1, k) for k in range(1, 10))
    with pytest.raises(ValueError):
        stable_after_base_change(0, 2)


def test_classify_examples(corpus):
    v = classify_model(corpus["genus2_two_lines"]).verdicts()
    assert {k: v[k] for k in ("g", "r", "log_smooth", "semistable", "stable", "e_min")} == {
        "g": 2, "r": 0, "log_smooth": True, "semistable": True, "stable": True, "e_min": 1,
    }
    aeb = classify_model(corpus["aeb_a1"])
    assert aeb.stable and [sp.chain_weights for sp in aeb.lreg.singular_points] == [(-2,)]
    g3 = classify_model(corpus["genus3_mult2"], 3)
    assert (g3.log_smooth, g3.semistable, g3.stable, g3.e_min) == (True, False, False, 2)


def test_classify_p2_on_genus3_reports_witness(corpus):
    rep = classify_model(corpus["genus3_mult2"], 2)
    assert not rep.log_smooth and rep.e_min is None and rep.witnesses


@pytest.mark.parametrize("p", [0, 2, 3, 5, 7, 11])
def test_report_invariants_across_p(corpus, p):
    for name, model in corpus.items():
        rep = classify_model(model, p)
        assert not rep.stable or rep.semistable, name
        assert not rep.semistable or rep.log_smooth, name
        if rep.log_smooth:
            assert rep.stable == lreg_reduced(rep.lreg), name
            assert rep.e_min is not None and (p == 0 or rep.e_min % p), name
            baseline = classify_model(model, 0)
            assert rep.e_min == baseline.e_min, name
        if rep.stable:
            assert oracles.stable_curve_axioms(rep.lreg.model), name


@pytest.mark.parametrize("seed", range(4))
def test_verdicts_invariant_under_blow_up(corpus, seed):
    rng = random.Random(seed)
    for name, model in corpus.items():
        base = classify_model(model).verdicts()
        out, _ = blow_up(model, oracles.random_point(model, rng))
        assert classify_model(out).verdicts() == base, name


@given(st.integers(1, 12), st.integers(1, 12))
def test_base_change_is_divisibility(e, k):
    assert stable_after_base_change(e, k) == any(e * j == k for j in range(1, k + 1))


def test_e_min_never_divisible_by_p(corpus):
    for model, p in product(corpus.values(), (2, 3, 5)):
        ncd = minimal_ncd(model.with_changes(p=p))
        if is_log_smooth(ncd, p)[0]:
            assert e_min(build_lreg(ncd), p) % p


def test_inconsistent_pstr_detected(corpus):
    from arithsurf.reduction import _check_pstr

    with pytest.raises(InconsistentModel):
        _check_pstr(corpus["genus3_mult2"].with_changes(p=2), 2)
