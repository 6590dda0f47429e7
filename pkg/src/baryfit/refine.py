"""Inner weight-refinement iterations: Sanathanan-Koerner and Whitfield.

Both work on a fixed support set and reweight the active-sample residuals by
the previous iterate's denominator magnitudes. SK repeats the homogeneous
unit-norm solve; WF solves a Gauss-Newton-style linearization of the rational
map with the pivot weight pinned to 1. Neither iteration is guaranteed to
converge monotonically, so both record the raw active squared error of every
iterate and return the best one.
"""

from dataclasses import dataclass

import numpy as np

from .core import NumericalError
from .linalg import (
    assemble_levy_system,
    denominator_weighting,
    levy_matrix,
    min_unit_norm_solution,
    pivoted_weighted_lsq,
)

__all__ = [
    "RefineConfig",
    "RefineResult",
    "sk_iterate",
    "wf_step",
    "wf_iterate",
]


@dataclass(frozen=True)
class RefineConfig:
    p_max: int = 20
    tol_sk: float = 1e-8
    tol_wf: float = 1e-8

    def __post_init__(self):
        if self.p_max < 1:
            raise ValueError("p_max must be >= 1")
        if not (self.tol_sk >= 0 and self.tol_wf >= 0):
            raise ValueError("tolerances must be >= 0")


@dataclass
class RefineResult:
    """Outcome of an inner iteration.

    `weights` is the iterate with the smallest recorded error (`errors` is the
    raw active squared error per iterate, and for WF entry 0 belongs to the
    initialization); `final_weights` is the last iterate computed, which is the
    one a convergence claim refers to.
    """

    weights: np.ndarray
    errors: np.ndarray
    converged: bool
    best_index: int
    final_weights: np.ndarray


def _phase_aligned_diff(w, w_prev):
    """min over |c| = 1 of ||c*w - w_prev||, immune to SVD phase flips."""
    s = np.vdot(w, w_prev)
    c = s / abs(s) if s != 0 else 1.0
    return float(np.linalg.norm(c * w - w_prev))


def sk_iterate(supports, interp_values, data, cfg):
    """Iteratively reweighted Levy solves (d^(0) = 1, so step one is Levy).

    Stops early when consecutive unit-norm weight vectors agree to tol_sk
    after phase alignment; always returns the best-error iterate.
    """
    system = assemble_levy_system(
        data.active_points(), data.active_values(), supports, interp_values
    )
    L = levy_matrix(system)
    w_prev = np.zeros(system.interp_values.size, dtype=complex)
    dvals = np.ones(system.data_values.size, dtype=complex)
    iterates = []
    errors = []
    converged = False
    for _ in range(cfg.p_max):
        row_weights = denominator_weighting(dvals)
        w = min_unit_norm_solution(L * row_weights[:, None])
        iterates.append(w)
        errors.append(system.residual_sq_sum(w))
        if _phase_aligned_diff(w, w_prev) < cfg.tol_sk:
            converged = True
            break
        w_prev = w
        dvals = system.denominators(w)
    best = int(np.argmin(errors))
    return RefineResult(iterates[best], np.asarray(errors), converged, best, iterates[-1])


def _choose_pivot(w0):
    mags = np.abs(np.asarray(w0))
    top = float(mags.max()) if mags.size else 0.0
    if top == 0.0:
        raise ValueError("all-zero weight vector: denominator identically zero")
    if mags[0] < 1e-12 * top:
        return int(np.argmax(mags))
    return 0


def _wf_step_on(system, w_prev, pivot):
    d_prev = system.denominators(w_prev)
    exact_zero = np.nonzero(d_prev == 0)[0]
    if exact_zero.size:
        raise NumericalError(
            "denominator of the current weights vanishes at sample z = %s"
            % system.active_points[exact_zero[0]]
        )
    n_prev = system.numerators(w_prev)
    r_prev = n_prev / d_prev
    F = system.numerator_matrix() - r_prev[:, None] * system.cauchy
    b = -n_prev + d_prev * system.data_values
    return pivoted_weighted_lsq(denominator_weighting(d_prev), F, b, pivot)


def wf_step(supports, interp_values, data, w_prev):
    """One linearized least-squares step from w_prev, pivot weight pinned to 1.

    The coefficient matrix has entries h_j/(z_i - lambda_j) -
    r(z_i; w_prev)/(z_i - lambda_j), the right-hand side is
    -n(z_i; w_prev) + d(z_i; w_prev) H(z_i), and rows are weighted by
    1/|d(z_i; w_prev)|.
    """
    system = assemble_levy_system(
        data.active_points(), data.active_values(), supports, interp_values
    )
    w_prev = np.asarray(w_prev, dtype=complex)
    return _wf_step_on(system, w_prev, _choose_pivot(w_prev))


def _pivot_normalized_diff(w, w_prev, pivot):
    if w[pivot] == 0 or w_prev[pivot] == 0:
        return np.inf
    return float(np.linalg.norm(w / w[pivot] - w_prev / w_prev[pivot]))


def wf_iterate(supports, interp_values, data, w0, cfg):
    """Repeated WF steps from w0; error of w0 itself is recorded as entry 0.

    The pivot is chosen once from w0 (index 0 unless that entry is
    negligible) and the convergence test compares consecutive iterates after
    renormalizing both to pivot value 1.
    """
    system = assemble_levy_system(
        data.active_points(), data.active_values(), supports, interp_values
    )
    w0 = np.asarray(w0, dtype=complex)
    pivot = _choose_pivot(w0)
    iterates = [w0]
    errors = [system.residual_sq_sum(w0)]
    w_prev = w0
    converged = False
    for _ in range(cfg.p_max):
        w = _wf_step_on(system, w_prev, pivot)
        iterates.append(w)
        errors.append(system.residual_sq_sum(w))
        if _pivot_normalized_diff(w, w_prev, pivot) < cfg.tol_wf:
            converged = True
            break
        w_prev = w
    best = int(np.argmin(errors))
    return RefineResult(iterates[best], np.asarray(errors), converged, best, iterates[-1])
