"""Wirtinger derivatives of the four error criteria, and diagnostics.

Every criterion here is a real-valued function of the complex weight vector,
so its stationary points are where the Wirtinger derivative dE/dw vanishes
(the conjugate derivative is just the conjugate). The step criteria for SK
and WF take the reweighting denominators from a separate w_prev; at
w = w_prev the WF step gradient reduces exactly to the gradient of the true
nonlinear error, which is the identity that certifies WF fixed points as
stationary points. These functions are diagnostic and test infrastructure;
the fitting algorithms never consume them.
"""

import numpy as np

from .core import NumericalError
from .linalg import assemble_levy_system, build_cauchy

__all__ = [
    "grad_nonlinear",
    "grad_levy",
    "grad_levy_rearranged",
    "grad_sk_step",
    "grad_sk_fixed_point",
    "grad_wf_step",
    "error_nonlinear",
    "error_levy",
    "error_sk_step",
    "error_wf_step",
    "finite_difference_gradient",
    "denominator_variation",
]


def _system(supports, interp_values, data):
    return assemble_levy_system(
        data.active_points(), data.active_values(), supports, interp_values
    )


def _nonzero_denominators(system, w):
    d = system.denominators(w)
    bad = np.nonzero(d == 0)[0]
    if bad.size:
        raise NumericalError(
            "denominator vanishes at sample z = %s" % system.active_points[bad[0]]
        )
    return d


def grad_nonlinear(supports, interp_values, data, w):
    """dE/dw of E = sum |r(z_i; w) - H(z_i)|^2 over the active samples:
    sum_i (1/d)(p - r q) conj(r - H)."""
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    d = _nonzero_denominators(system, w)
    r = system.numerators(w) / d
    P = system.numerator_matrix()
    C = system.cauchy
    coeff = np.conj(r - system.data_values) / d
    return ((P - r[:, None] * C) * coeff[:, None]).sum(axis=0)


def grad_levy(supports, interp_values, data, w):
    """dE/dw of the Levy criterion sum |n - d H|^2:
    sum_i (p - H q) conj(n - d H)."""
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    n = system.numerators(w)
    d = system.denominators(w)
    H = system.data_values
    P = system.numerator_matrix()
    C = system.cauchy
    coeff = np.conj(n - d * H)
    return ((P - H[:, None] * C) * coeff[:, None]).sum(axis=0)


def grad_levy_rearranged(supports, interp_values, data, w):
    """The same Levy gradient written with |d|^2 pulled out of the residual:
    sum_i |d|^2 (1/d)(p - H q) conj(r - H). Needs d != 0 at every sample."""
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    d = _nonzero_denominators(system, w)
    r = system.numerators(w) / d
    P = system.numerator_matrix()
    C = system.cauchy
    coeff = np.abs(d) ** 2 * np.conj(r - system.data_values) / d
    return ((P - system.data_values[:, None] * C) * coeff[:, None]).sum(axis=0)


def grad_sk_step(supports, interp_values, data, w, w_prev):
    """dE/dw of one SK step (weighting frozen at w_prev):
    sum_i (1/|d_prev|^2)(p - H q) conj(n - H d)."""
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    w_prev = np.asarray(w_prev, dtype=complex)
    d_prev = _nonzero_denominators(system, w_prev)
    n = system.numerators(w)
    d = system.denominators(w)
    H = system.data_values
    P = system.numerator_matrix()
    C = system.cauchy
    coeff = np.conj(n - H * d) / np.abs(d_prev) ** 2
    return ((P - H[:, None] * C) * coeff[:, None]).sum(axis=0)


def grad_sk_fixed_point(supports, interp_values, data, w):
    """The SK gradient at its fixed point (w_prev = w), simplified through
    1/d: sum_i (1/d)(p - H q) conj(r - H)."""
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    d = _nonzero_denominators(system, w)
    r = system.numerators(w) / d
    P = system.numerator_matrix()
    C = system.cauchy
    coeff = np.conj(r - system.data_values) / d
    return ((P - system.data_values[:, None] * C) * coeff[:, None]).sum(axis=0)


def grad_wf_step(supports, interp_values, data, w, w_prev):
    """dE/dw of one WF step (linearization point w_prev):
    sum_i (1/|d_prev|^2)(p - r_prev q) conj(n - r_prev d + n_prev - d_prev H).

    At w = w_prev this equals grad_nonlinear(w) up to rounding.
    """
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    w_prev = np.asarray(w_prev, dtype=complex)
    d_prev = _nonzero_denominators(system, w_prev)
    n_prev = system.numerators(w_prev)
    r_prev = n_prev / d_prev
    n = system.numerators(w)
    d = system.denominators(w)
    H = system.data_values
    P = system.numerator_matrix()
    C = system.cauchy
    resid = n - r_prev * d + n_prev - d_prev * H
    coeff = np.conj(resid) / np.abs(d_prev) ** 2
    return ((P - r_prev[:, None] * C) * coeff[:, None]).sum(axis=0)


def error_nonlinear(supports, interp_values, data, w):
    system = _system(supports, interp_values, data)
    return system.residual_sq_sum(np.asarray(w, dtype=complex))


def error_levy(supports, interp_values, data, w):
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    res = system.numerators(w) - system.denominators(w) * system.data_values
    return float(np.sum(np.abs(res) ** 2))


def error_sk_step(supports, interp_values, data, w, w_prev):
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    d_prev = _nonzero_denominators(system, np.asarray(w_prev, dtype=complex))
    res = system.numerators(w) - system.denominators(w) * system.data_values
    return float(np.sum(np.abs(res) ** 2 / np.abs(d_prev) ** 2))


def error_wf_step(supports, interp_values, data, w, w_prev):
    system = _system(supports, interp_values, data)
    w = np.asarray(w, dtype=complex)
    w_prev = np.asarray(w_prev, dtype=complex)
    d_prev = _nonzero_denominators(system, w_prev)
    n_prev = system.numerators(w_prev)
    r_prev = n_prev / d_prev
    res = (
        system.numerators(w)
        - r_prev * system.denominators(w)
        + n_prev
        - d_prev * system.data_values
    )
    return float(np.sum(np.abs(res) ** 2 / np.abs(d_prev) ** 2))


def finite_difference_gradient(error_fn, w, rel_step=1e-6):
    """Central-difference Wirtinger gradient of a real scalar error.

    Differences the real and imaginary parts separately with step
    h_j = rel_step*(1 + |w_j|) and maps back through
    dE/dw_j = (dE/dx_j - i dE/dy_j)/2.
    """
    w = np.asarray(w, dtype=complex)
    grad = np.empty(w.size, dtype=complex)
    for j in range(w.size):
        h = rel_step * (1.0 + abs(w[j]))
        step = np.zeros(w.size, dtype=complex)
        step[j] = h
        de_dx = (error_fn(w + step) - error_fn(w - step)) / (2.0 * h)
        de_dy = (error_fn(w + 1j * step) - error_fn(w - 1j * step)) / (2.0 * h)
        grad[j] = 0.5 * (de_dx - 1j * de_dy)
    return grad


def denominator_variation(supports, w, probe_points):
    """max |d| / min |d| over the probe points (inf if d vanishes somewhere).

    The spread of the barycentric denominator over the data grid is the
    conditioning diagnostic separating the benign Levy fits from the ones
    that stall: a huge ratio means the Levy weighting distorts the
    least-squares problem by that factor.
    """
    C = build_cauchy(probe_points, supports)
    mags = np.abs(C @ np.asarray(w, dtype=complex))
    top = float(mags.max())
    bottom = float(mags.min())
    if bottom == 0.0:
        return np.inf
    return top / bottom
