"""Tests for the reduction cross-checks connecting catalog entries."""

from __future__ import annotations

import pytest

from ellsum import (
    BalancingError,
    REDUCTION_KINDS,
    SampleConfig,
    reduction_check,
    sample_instance,
)

CONFIG = SampleConfig(seed=99)


def _pin_aq_equals_bc(ctx):
    return ctx["params"]["a"] * ctx["q"] / ctx["params"]["b"]


def _pin_general_c(ctx):
    P = ctx["params"]
    return (P["a"] ** 2 * ctx["q"] ** (ctx["N"] + 1)
            / (P["b"] * P["f"] * P["g"] * ctx["Z"] ** 2))


def _general_pins(n):
    if n % 2 == 1:
        return {"d": lambda ctx: ctx["params"]["f"] * ctx["Z"], "c": _pin_general_c}
    return {"d": lambda ctx: ctx["Z"], "c": _pin_general_c}


def test_gr_sum_reduces_to_theta_lemma():
    for n in (1, 2, 3):
        inst = sample_instance("gr-sum", n=n, N=1, config=CONFIG, trial_index=n, p=0.2)
        result = reduction_check("gr-sum-to-theta-lemma", inst, tolerance=1e-11)
        assert result.ok, result


def test_gr_corollary_reduces_to_gr_sum():
    for n, N in ((1, 2), (2, 3), (3, 1)):
        inst = sample_instance("gr-corollary", n=n, N=N, config=CONFIG,
                               trial_index=n, p=0.05)
        result = reduction_check("gr-corollary-to-gr-sum", inst)
        assert result.ok, result


def test_bt_left_side_is_one_when_b_is_one():
    inst = sample_instance("bt-transform", n=2, N=3, config=CONFIG, trial_index=0,
                           p=0.2, pinned={"b": 1.0})
    result = reduction_check("bt-unit-lhs", inst, tolerance=1e-10)
    assert result.ok, result


def test_bt_reduces_to_gr_corollary_at_aq_equals_bc():
    inst = sample_instance("bt-transform", n=2, N=2, config=CONFIG, trial_index=3,
                           p=0.2, pinned={"c": _pin_aq_equals_bc})
    result = reduction_check("bt-to-gr-corollary", inst)
    assert result.ok, result


def test_gr_corollary_reduces_to_frenkel_turaev():
    inst = sample_instance("gr-corollary", n=1, N=3, config=CONFIG, trial_index=2,
                           p=0.05)
    result = reduction_check("gr-corollary-to-frenkel-turaev", inst)
    assert result.ok, result


@pytest.mark.parametrize("n", [2, 3])
def test_general_jackson_specializes_to_jts(n):
    inst = sample_instance("general-jackson", n=n, N=2, config=CONFIG,
                           trial_index=1, p=0.2, pinned=_general_pins(n))
    result = reduction_check("general-to-jts", inst)
    assert result.ok, result


def test_unknown_kind_rejected():
    inst = sample_instance("gr-sum", n=2, N=1, config=CONFIG, trial_index=0, p=0.2)
    with pytest.raises(ValueError, match="unknown reduction kind"):
        reduction_check("nope", inst)
    assert len(REDUCTION_KINDS) == 6


def test_wrong_identity_rejected():
    inst = sample_instance("gr-sum", n=2, N=1, config=CONFIG, trial_index=0, p=0.2)
    with pytest.raises(BalancingError, match="expects"):
        reduction_check("bt-unit-lhs", inst)


def test_premise_violation_rejected():
    # gr-sum with N = 2 does not satisfy the N = 1 reduction premise
    inst = sample_instance("gr-sum", n=2, N=2, config=CONFIG, trial_index=0, p=0.2)
    with pytest.raises(BalancingError, match="premise"):
        reduction_check("gr-sum-to-theta-lemma", inst)
    # bt-transform without the b = 1 pin
    inst = sample_instance("bt-transform", n=2, N=1, config=CONFIG, trial_index=0,
                           p=0.2)
    with pytest.raises(BalancingError, match="premise"):
        reduction_check("bt-unit-lhs", inst)
