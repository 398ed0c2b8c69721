"""Tests for the seeded instance sampler and its rejection gates."""

from __future__ import annotations

import math

import pytest

from ellsum import (
    ResampleExhaustedError,
    SampleConfig,
    VerificationJob,
    rejection_report,
    run_job,
    sample_instance,
)


def test_sampling_is_deterministic():
    config = SampleConfig(seed=7)
    first = sample_instance("gr-sum", n=3, N=2, config=config, trial_index=5, p=0.2)
    second = sample_instance("gr-sum", n=3, N=2, config=config, trial_index=5, p=0.2)
    assert first.params == second.params
    assert first.z == second.z
    assert first.nome.q == second.nome.q


def test_different_trials_differ():
    config = SampleConfig(seed=7)
    a = sample_instance("gr-sum", n=3, N=2, config=config, trial_index=0, p=0.2)
    b = sample_instance("gr-sum", n=3, N=2, config=config, trial_index=1, p=0.2)
    assert a.params != b.params


def test_different_seeds_differ():
    a = sample_instance("gr-sum", n=3, N=2, config=SampleConfig(seed=1),
                        trial_index=0, p=0.2)
    b = sample_instance("gr-sum", n=3, N=2, config=SampleConfig(seed=2),
                        trial_index=0, p=0.2)
    assert a.params != b.params


def test_trigonometric_p_passes_through():
    inst = sample_instance("gr-sum", n=2, N=1, config=SampleConfig(seed=3),
                           trial_index=0, p=0.0)
    assert inst.nome.p == 0.0


def test_hundred_samples_satisfy_constraint():
    config = SampleConfig(seed=11)
    for trial in range(100):
        inst = sample_instance("gr-sum", n=3, N=3, config=config,
                               trial_index=trial, p=0.05)
        assert max(inst.constraint_residuals()) <= 1e-13


def test_modulus_window_respected():
    config = SampleConfig(seed=5, modulus_range=(0.5, 0.9))
    inst = sample_instance("theta-lemma", n=2, config=config, trial_index=0, p=0.2)
    for name in inst.entry.free_params:
        assert 0.5 - 1e-12 <= abs(inst.params[name]) <= 0.9 + 1e-12
    for z in inst.z:
        assert 0.5 - 1e-12 <= abs(z) <= 0.9 + 1e-12


def test_rejection_report_reasons():
    config = SampleConfig(seed=13)
    hist = rejection_report("gr-sum", n=4, N=4, config=config, count=60)
    assert sum(hist.values()) == 60
    assert set(hist) == {"pass", "pole", "separation", "magnitude", "condition"}
    # pass rate SLO for the default config on the largest grid cell
    assert hist["pass"] / 60 > 0.2


def test_pole_floor_zero_disables_pole_rejections():
    config = SampleConfig(seed=13, pole_floor=0.0)
    hist = rejection_report("gr-sum", n=4, N=4, config=config, count=60)
    assert hist["pole"] == 0


def test_condition_cap_infinite_disables_condition_rejections():
    config = SampleConfig(seed=13, condition_cap=math.inf)
    hist = rejection_report("gr-sum", n=4, N=4, config=config, count=60)
    assert hist["condition"] == 0


def test_resample_exhaustion_reports_histogram():
    config = SampleConfig(seed=1, condition_cap=1e-12, max_resamples=5)
    with pytest.raises(ResampleExhaustedError) as excinfo:
        sample_instance("gr-sum", n=2, N=2, config=config, trial_index=0, p=0.2)
    histogram = excinfo.value.histogram
    assert sum(histogram.values()) == 5
    assert histogram["condition"] > 0


def test_config_validation():
    with pytest.raises(ValueError):
        SampleConfig(modulus_range=(0.0, 1.0))
    with pytest.raises(ValueError):
        SampleConfig(q_range=(1.5, 0.2))
    with pytest.raises(ValueError):
        SampleConfig(max_resamples=0)
    with pytest.raises(ValueError):
        SampleConfig(p_values=(1.5,))


def test_seed_change_does_not_change_verdict():
    # identities hold for all valid instances, so the suite's pass/fail
    # status is seed-independent
    for seed in (21, 22):
        job = VerificationJob(identities=("theta-lemma", "frenkel-turaev"),
                              n_values=(1, 2), N_values=(0, 1, 2), trials=5,
                              config=SampleConfig(seed=seed))
        assert run_job(job).verdict == "pass"
