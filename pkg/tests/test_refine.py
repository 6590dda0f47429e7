"""SK and WF inner refinement iterations."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from baryfit import (
    RefineConfig,
    SampleSet,
    aaa_fit,
    assemble_levy_system,
    FitConfig,
    levy_weights,
    sample_builtin,
    sk_iterate,
    wf_iterate,
    wf_step,
)
from baryfit.gradients import error_wf_step
from helpers import distinct_complex, random_instance, rational_samples, unit_grid


def _system_for(supports, interp, data):
    return assemble_levy_system(
        data.active_points(), data.active_values(), supports, interp
    )


def _exact_instance(count=21, holdout=(0, 10)):
    """Samples of a degree-1 rational with two grid points promoted to
    supports, so the remaining active data admits an exact fit."""
    x = unit_grid(count)
    H = 1.0 / (x + 2.0)
    mask = np.ones(count, dtype=bool)
    mask[list(holdout)] = False
    data = SampleSet(x, H, mask)
    return x[list(holdout)], H[list(holdout)], data


def test_refine_config_validation():
    with pytest.raises(ValueError):
        RefineConfig(p_max=0)
    with pytest.raises(ValueError):
        RefineConfig(tol_sk=-1.0)
    with pytest.raises(ValueError):
        RefineConfig(tol_wf=-1.0)


def test_sk_first_iterate_is_the_levy_solution():
    rng = np.random.default_rng(51)
    supports, interp, data = random_instance(rng, 3, 12)
    result = sk_iterate(supports, interp, data, RefineConfig(p_max=1))
    w_levy = levy_weights(supports, interp, data)
    system = _system_for(supports, interp, data)
    probes = distinct_complex(rng, 100, scale=2.0)
    probe_sys = assemble_levy_system(probes, np.zeros(100), supports, interp)
    r_sk = probe_sys.rationals(result.final_weights)
    r_levy = probe_sys.rationals(w_levy)
    assert np.all(np.abs(r_sk - r_levy) <= 1e-10 * (1.0 + np.abs(r_levy)))
    assert_allclose(result.errors[0], system.residual_sq_sum(w_levy), rtol=1e-12)


def test_sk_cannot_converge_on_the_first_iterate():
    rng = np.random.default_rng(53)
    supports, interp, data = random_instance(rng, 3, 10)
    result = sk_iterate(supports, interp, data, RefineConfig(p_max=5))
    assert len(result.errors) >= 2


def test_sk_exact_data_converges_at_second_iterate():
    supports, interp, data = _exact_instance()
    result = sk_iterate(supports, interp, data, RefineConfig())
    assert result.errors[0] < 1e-20
    assert result.converged
    assert len(result.errors) == 2


def test_sk_constant_data_finishes_fast_with_zero_error():
    data = SampleSet([0.5, 1.5, 2.5, 3.5], [3.0, 3.0, 3.0, 3.0], [True, True, True, False])
    result = sk_iterate([3.5], [3.0], data, RefineConfig())
    assert result.errors[0] < 1e-25
    assert result.converged
    assert len(result.errors) <= 2


def test_sk_returns_the_best_recorded_iterate():
    data = sample_builtin("triwave", 101)
    _, trace = aaa_fit(data, FitConfig(max_degree=8))
    supports = np.array([rec.support for rec in trace.records])
    mask = ~np.isin(data.points, supports)
    work = SampleSet(data.points, data.values, mask)
    # interpolated values aligned with the support order
    interp = np.array([data.values[np.nonzero(data.points == s)[0][0]] for s in supports])
    result = sk_iterate(supports, interp, work, RefineConfig(p_max=15))
    system = _system_for(supports, interp, work)
    assert result.best_index == int(np.argmin(result.errors))
    assert_allclose(
        system.residual_sq_sum(result.weights),
        float(np.min(result.errors)),
        rtol=1e-12,
    )
    assert len(result.errors) <= 15


def test_wf_step_single_support_returns_one():
    rng = np.random.default_rng(59)
    supports, interp, data = random_instance(rng, 1, 6)
    w = wf_step(supports, interp, data, np.array([2.0 - 1j]))
    assert w.shape == (1,) and w[0] == 1.0 + 0j


def test_wf_step_rejects_all_zero_weights():
    rng = np.random.default_rng(61)
    supports, interp, data = random_instance(rng, 2, 6)
    with pytest.raises(ValueError):
        wf_step(supports, interp, data, np.zeros(2))


def test_wf_step_zero_residual_weights_are_a_fixed_point():
    supports, interp, data = _exact_instance()
    system = _system_for(supports, interp, data)
    # recover the exact weights from the Levy null vector
    w_exact = levy_weights(supports, interp, data)
    assert system.residual_sq_sum(w_exact) < 1e-20
    w_next = wf_step(supports, interp, data, w_exact)
    assert_allclose(
        system.rationals(w_next), system.rationals(w_exact), rtol=1e-8
    )


def test_wf_step_pivots_on_largest_entry_when_first_weight_vanishes():
    rng = np.random.default_rng(67)
    supports, interp, data = random_instance(rng, 2, 8)
    w = wf_step(supports, interp, data, np.array([0.0, 1.0 + 0j]))
    assert w[1] == 1.0 + 0j


def test_wf_step_minimizes_the_linearized_objective():
    rng = np.random.default_rng(71)
    supports, interp, data = random_instance(rng, 2, 9)
    w_prev = np.array([1.0 + 0.3j, -0.7 + 0.2j])
    w = wf_step(supports, interp, data, w_prev)
    best = error_wf_step(supports, interp, data, w, w_prev)
    for _ in range(1000):
        u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        if abs(u[0]) < 1e-6:
            continue
        u = u / u[0]  # same pivot normalization as the solver
        trial = error_wf_step(supports, interp, data, u, w_prev)
        assert best <= trial * (1.0 + 1e-10) + 1e-20


def test_wf_iterate_exact_start_converges_immediately():
    supports, interp, data = _exact_instance()
    w0 = levy_weights(supports, interp, data)
    result = wf_iterate(supports, interp, data, w0, RefineConfig())
    assert result.converged
    assert len(result.errors) == 2
    assert np.all(result.errors < 1e-18)


def test_wf_iterate_pmax_one_records_start_plus_one_step():
    rng = np.random.default_rng(73)
    supports, interp, data = random_instance(rng, 3, 10)
    w0 = np.ones(3, dtype=complex)
    result = wf_iterate(supports, interp, data, w0, RefineConfig(p_max=1))
    assert len(result.errors) == 2
    assert not result.converged


def test_wf_iterate_never_returns_worse_than_its_start():
    data = sample_builtin("relu", 101)
    _, trace = aaa_fit(data, FitConfig(max_degree=10))
    supports = np.array([rec.support for rec in trace.records])
    interp = np.array(
        [data.values[np.nonzero(data.points == s)[0][0]] for s in supports]
    )
    mask = ~np.isin(data.points, supports)
    work = SampleSet(data.points, data.values, mask)
    sk = sk_iterate(supports, interp, work, RefineConfig())
    result = wf_iterate(supports, interp, work, sk.weights, RefineConfig())
    system = _system_for(supports, interp, work)
    assert_allclose(result.errors[0], system.residual_sq_sum(sk.weights), rtol=1e-12)
    best = float(np.min(result.errors))
    assert best <= result.errors[0]
    assert_allclose(system.residual_sq_sum(result.weights), best, rtol=1e-12)
    assert result.best_index == int(np.argmin(result.errors))


def test_wf_iterate_single_support_converges_to_constant_weight():
    rng = np.random.default_rng(79)
    supports, interp, data = random_instance(rng, 1, 5)
    result = wf_iterate(supports, interp, data, np.array([3.0 + 0j]), RefineConfig())
    assert result.converged
    assert result.final_weights[0] == 1.0 + 0j
