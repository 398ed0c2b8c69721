"""Tests for the identity evaluators: trivial values, branch transcription,
symmetry invariances, memoization, and pole reporting."""

from __future__ import annotations

import itertools

import pytest

from ellsum import (
    CATALOG,
    EllipticNome,
    PoleError,
    SampleConfig,
    elliptic_pochhammer,
    evaluate_lhs,
    evaluate_rhs,
    ipow,
    relative_error,
    sample_instance,
    solve_balancing,
    theta,
)
from ellsum.catalog import SCALAR_N, VECTOR_BOX, VECTOR_ONLY
from ellsum.verify import spread_box

CONFIG = SampleConfig(seed=123)


def _grid_instance(identity_id, n, N, trial=0, p=0.2):
    arity = CATALOG[identity_id].arity
    box = spread_box(n, N) if arity == VECTOR_BOX else None
    return sample_instance(identity_id, n=n, N=N if box is None else None,
                           box=box, config=CONFIG, trial_index=trial, p=p)


# ---------------------------------------------------------------------------
# Trivial single-index sums
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("identity_id", sorted(CATALOG))
def test_every_identity_is_exactly_one_at_level_zero(identity_id):
    arity = CATALOG[identity_id].arity
    if arity == VECTOR_ONLY:
        pytest.skip("no truncation level")
    n = None if arity == SCALAR_N else 2
    inst = _grid_instance(identity_id, n, 0)
    lhs, lhs_max = evaluate_lhs(inst)
    rhs, _ = evaluate_rhs(inst)
    # single all-zero index: every factor is a shift-0 product or a ratio of
    # identical cached values, so both sides are 1 up to complex-division ulps
    assert relative_error(lhs, 1.0) < 1e-14
    assert relative_error(rhs, 1.0) < 1e-14
    assert abs(lhs_max - 1.0) < 1e-14


# ---------------------------------------------------------------------------
# Transcription pins
# ---------------------------------------------------------------------------


def test_theta_lemma_single_variable_display():
    inst = sample_instance("theta-lemma", n=1, config=CONFIG, trial_index=0, p=0.2)
    z1 = inst.z[0]
    nome = inst.nome
    expected = (theta(z1 * inst.params["b1"], nome)
                * theta(z1 * inst.params["b2"], nome)
                * theta(z1 * inst.params["b3"], nome)
                * theta(z1 * inst.params["b4"], nome) / z1)
    lhs, _ = evaluate_lhs(inst)
    assert relative_error(lhs, expected) < 1e-14
    rhs, _ = evaluate_rhs(inst)
    assert relative_error(rhs, expected) < 1e-13


@pytest.mark.parametrize("n", [2, 3])
def test_gr_sum_rhs_branch_display(n):
    # odd n: (Zb1..Zb4)_N / (Z^N (q)_N); even n uses (Z, Zb1b2, Zb1b3, Zb1b4)
    # over ((Zb1)^N (q)_N).
    inst = _grid_instance("gr-sum", n, 3)
    nome = inst.nome
    N = inst.N
    Z = inst.Z
    b = [inst.params[name] for name in ("b1", "b2", "b3", "b4")]
    if n % 2 == 1:
        expected = complex(1.0)
        for bj in b:
            expected *= elliptic_pochhammer(Z * bj, N, nome)
        expected /= ipow(Z, N) * elliptic_pochhammer(nome.q, N, nome)
    else:
        expected = elliptic_pochhammer(Z, N, nome)
        for bj in b[1:]:
            expected *= elliptic_pochhammer(Z * b[0] * bj, N, nome)
        expected /= ipow(Z * b[0], N) * elliptic_pochhammer(nome.q, N, nome)
    rhs, _ = evaluate_rhs(inst)
    assert relative_error(rhs, expected) < 1e-13


def test_gr_sum_single_variable_collapses():
    # n = 1: the single composition (N,) must reproduce the closed form.
    inst = _grid_instance("gr-sum", 1, 4)
    lhs, _ = evaluate_lhs(inst)
    rhs, _ = evaluate_rhs(inst)
    assert relative_error(lhs, rhs) < 1e-12


def test_frenkel_turaev_rhs_is_oracle_for_sum():
    inst = sample_instance("frenkel-turaev", N=3, config=CONFIG, trial_index=1, p=0.05)
    lhs, _ = evaluate_lhs(inst)
    rhs, _ = evaluate_rhs(inst)
    assert relative_error(lhs, rhs) < 1e-11


def test_gr_sum_rhs_matches_lhs_small_case():
    inst = _grid_instance("gr-sum", 2, 1)
    lhs, _ = evaluate_lhs(inst)
    rhs, _ = evaluate_rhs(inst)
    assert relative_error(lhs, rhs) < 1e-11


# ---------------------------------------------------------------------------
# Identity sweep (small): every entry holds on seeded instances
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("identity_id", sorted(CATALOG))
def test_identity_holds_on_seeded_instances(identity_id):
    arity = CATALOG[identity_id].arity
    n_values = [None] if arity == SCALAR_N else [1, 2, 3]
    N_values = [None] if arity == VECTOR_ONLY else [1, 2]
    for n in n_values:
        for N in N_values:
            for p in (0.0, 0.2):
                if arity == VECTOR_ONLY:
                    inst = sample_instance(identity_id, n=n, config=CONFIG,
                                           trial_index=2, p=p)
                else:
                    inst = _grid_instance(identity_id, n, N, trial=2, p=p)
                lhs, _ = evaluate_lhs(inst)
                rhs, _ = evaluate_rhs(inst)
                assert relative_error(lhs, rhs) < 1e-8, (identity_id, n, N, p)


# ---------------------------------------------------------------------------
# Invariances
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("identity_id", ["theta-lemma", "gr-sum", "gr-corollary",
                                         "njc-jackson", "bt-transform"])
def test_sum_invariant_under_z_permutation(identity_id):
    # permuting z permutes the terms, so compare on well-conditioned draws
    config = SampleConfig(seed=123, condition_cap=1e2)
    arity = CATALOG[identity_id].arity
    if arity == VECTOR_ONLY:
        inst = sample_instance(identity_id, n=3, config=config, trial_index=4, p=0.2)
    else:
        inst = sample_instance(identity_id, n=3, N=2, config=config,
                               trial_index=4, p=0.2)
    lhs, _ = evaluate_lhs(inst)
    for perm in itertools.permutations(range(3)):
        shuffled = solve_balancing(
            identity_id,
            {name: inst.params[name] for name in inst.entry.free_params},
            nome=inst.nome, z=tuple(inst.z[i] for i in perm), N=inst.N)
        lhs_perm, _ = evaluate_lhs(shuffled)
        assert relative_error(lhs, lhs_perm) < 1e-10, perm


def test_rs_jackson_invariant_under_paired_permutation():
    inst = sample_instance("rs-jackson", box=(2, 1, 0), config=CONFIG,
                           trial_index=1, p=0.2)
    lhs, _ = evaluate_lhs(inst)
    rhs, _ = evaluate_rhs(inst)
    for perm in itertools.permutations(range(3)):
        shuffled = solve_balancing(
            "rs-jackson",
            {name: inst.params[name] for name in inst.entry.free_params},
            nome=inst.nome, z=tuple(inst.z[i] for i in perm),
            box=tuple(inst.box[i] for i in perm))
        lhs_perm, _ = evaluate_lhs(shuffled)
        rhs_perm, _ = evaluate_rhs(shuffled)
        assert relative_error(lhs, lhs_perm) < 1e-10
        assert relative_error(rhs, rhs_perm) < 1e-10


@pytest.mark.parametrize("n", [2, 4])
def test_gr_sum_rhs_invariant_under_b_permutations(n):
    # the even-n closed form singles out b1, but its value cannot depend on
    # the labeling when the constraint holds
    inst = _grid_instance("gr-sum", n, 2, trial=5)
    baseline, _ = evaluate_rhs(inst)
    b = [inst.params[name] for name in ("b1", "b2", "b3", "b4")]
    for perm in itertools.permutations(range(4)):
        permuted = inst.with_params(**{f"b{i + 1}": b[j] for i, j in enumerate(perm)})
        assert max(permuted.constraint_residuals()) < 1e-12
        value, _ = evaluate_rhs(permuted)
        assert relative_error(baseline, value) < 1e-9, perm


def test_bt_lhs_invariant_under_c_e_swap():
    inst = _grid_instance("bt-transform", 2, 2, trial=6)
    lhs, _ = evaluate_lhs(inst)
    swapped = inst.with_params(c=inst.params["e"], e=inst.params["c"])
    assert max(swapped.constraint_residuals()) < 1e-12
    lhs_swapped, _ = evaluate_lhs(swapped)
    assert relative_error(lhs, lhs_swapped) < 1e-9


# ---------------------------------------------------------------------------
# Mechanics: memoization, relative error, pole reporting
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("identity_id", ["gr-corollary", "bt-transform", "rs-jackson"])
def test_memoization_does_not_change_values(identity_id):
    inst = (_grid_instance(identity_id, 3, 3) if identity_id != "rs-jackson"
            else sample_instance(identity_id, box=(1, 1, 1), config=CONFIG,
                                 trial_index=0, p=0.2))
    fast_lhs, fast_max = evaluate_lhs(inst, memoize=True)
    slow_lhs, slow_max = evaluate_lhs(inst, memoize=False)
    assert relative_error(fast_lhs, slow_lhs) < 1e-13
    assert relative_error(fast_max, slow_max) < 1e-13
    fast_rhs, _ = evaluate_rhs(inst, memoize=True)
    slow_rhs, _ = evaluate_rhs(inst, memoize=False)
    assert relative_error(fast_rhs, slow_rhs) < 1e-13


def test_relative_error_contract():
    assert relative_error(1.0, 1.0) == 0.0
    assert relative_error(1.0, 1.0 + 1e-9) == pytest.approx(1e-9, rel=1e-3)
    assert relative_error(0.0, 0.0) == 0.0
    assert relative_error(1.0, 2.0) == relative_error(2.0, 1.0)


def test_pole_reported_with_index_and_description():
    # coincident z entries put theta(z_k/z_j) exactly on its zero at 1
    nome = EllipticNome(0.2, 0.5)
    inst = solve_balancing("theta-lemma", {"b1": 0.3, "b2": 0.4, "b3": 0.5},
                           nome=nome, z=(0.7, 0.7))
    with pytest.raises(PoleError) as excinfo:
        evaluate_lhs(inst)
    assert excinfo.value.index is not None
    assert "theta" in excinfo.value.description


def test_near_pole_raises_only_with_floor():
    nome = EllipticNome(0.2, 0.5)
    inst = solve_balancing("theta-lemma", {"b1": 0.3, "b2": 0.4, "b3": 0.5},
                           nome=nome, z=(0.7, 0.7 * (1 + 1e-7)))
    value, _ = evaluate_lhs(inst)  # exact evaluation is fine
    assert value == value  # finite
    with pytest.raises(PoleError) as excinfo:
        evaluate_lhs(inst, pole_floor=1e-4)
    assert excinfo.value.near
