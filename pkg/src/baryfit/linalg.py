"""Matrix assembly and the two least-squares kernels behind the fits.

Everything here works on plain complex arrays: the Cauchy matrix over the
active samples, the Levy (Loewner-type) matrix, the homogeneous unit-norm
minimizer via SVD, and the pivoted weighted least-squares solve used by the
WF iteration. Problem sizes are desk scale, so dense LAPACK kernels are the
right tool.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LevySystem",
    "build_cauchy",
    "assemble_levy_system",
    "levy_matrix",
    "min_unit_norm_solution",
    "denominator_weighting",
    "pivoted_weighted_lsq",
]


def build_cauchy(active_points, supports):
    """Cauchy matrix C with C[i, j] = 1/(z_i - lambda_j).

    Every active point must be distinct from every support; interpolated
    samples have to be removed before assembly.
    """
    z = np.asarray(active_points, dtype=complex)
    lam = np.asarray(supports, dtype=complex)
    diffs = z[:, None] - lam[None, :]
    if np.any(diffs == 0):
        i, j = (int(a[0]) for a in np.nonzero(diffs == 0))
        raise ValueError(
            "active point %d coincides with support %d; remove interpolated "
            "samples before assembling" % (i, j)
        )
    return 1.0 / diffs


@dataclass(frozen=True)
class LevySystem:
    """Assembled matrices for one fitting step over the active samples.

    Attributes:
        cauchy: (M-k, k) Cauchy matrix over active points and supports.
        interp_values: length-k values h_j at the supports.
        data_values: length-(M-k) data values H(z_i) at the active points.
        active_points: the z_i backing the rows.
    """

    cauchy: np.ndarray
    interp_values: np.ndarray
    data_values: np.ndarray
    active_points: np.ndarray

    def numerator_matrix(self):
        """Matrix P with P[i, j] = h_j/(z_i - lambda_j), so n(z_i; w) = (Pw)_i."""
        return self.cauchy * self.interp_values[None, :]

    def numerators(self, w):
        return self.numerator_matrix() @ w

    def denominators(self, w):
        return self.cauchy @ w

    def rationals(self, w):
        """r(z_i; w) at the active points; poles come out as inf/nan."""
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.numerators(w) / self.denominators(w)

    def residual_sq_sum(self, w):
        """Raw active squared error sum |r(z_i; w) - H(z_i)|^2 (inf if a pole hits)."""
        res = self.rationals(w) - self.data_values
        total = float(np.sum(np.abs(res) ** 2))
        return np.inf if np.isnan(total) else total


def assemble_levy_system(active_points, active_values, supports, interp_values):
    z = np.asarray(active_points, dtype=complex)
    H = np.asarray(active_values, dtype=complex)
    lam = np.asarray(supports, dtype=complex)
    h = np.asarray(interp_values, dtype=complex)
    if z.size != H.size or lam.size != h.size:
        raise ValueError("point and value arrays must pair up in length")
    return LevySystem(build_cauchy(z, lam), h, H, z)


def levy_matrix(system):
    """The matrix G C - C H with entries (H(z_i) - h_j)/(z_i - lambda_j)."""
    return system.cauchy * (
        system.data_values[:, None] - system.interp_values[None, :]
    )


def min_unit_norm_solution(A):
    """Unit-2-norm v minimizing ||A v||_2: the last right singular vector.

    The result is unique only up to a unit-modulus scalar (and up to subspace
    rotation under singular-value ties); compare through ||Av|| or through
    model evaluations, never entrywise. Fewer rows than columns is legal, an
    exact null vector exists then.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[1] < 1:
        raise ValueError("need a matrix with at least one column")
    k = A.shape[1]
    if A.shape[0] == 0:
        v = np.zeros(k, dtype=complex)
        v[0] = 1.0
        return v
    _, _, Vh = np.linalg.svd(A, full_matrices=True)
    return Vh[-1, :].conj()


def denominator_weighting(denominator_values):
    """Clamped SK/WF row weights 1/|d(z_i)|, all entries finite and positive.

    Magnitudes below machine-epsilon times the largest |d(z_i)| (or below an
    absolute floor near the smallest normal double) are clamped so underflow
    in a few rows cannot poison the whole solve.
    """
    mags = np.abs(np.asarray(denominator_values, dtype=complex))
    if mags.size == 0:
        return mags
    top = float(mags.max())
    if top == 0.0 or not np.isfinite(top):
        raise ValueError("denominator is zero or non-finite on every sample")
    floor = max(np.finfo(float).eps * top, 1e-300)
    return 1.0 / np.maximum(mags, floor)


def pivoted_weighted_lsq(row_weights, F, b, pivot=0):
    """Solve min ||D (F w - b)||_2 subject to w[pivot] = 1.

    D is diagonal with the given positive row weights. The free entries are
    found by a rank-revealing LAPACK least-squares solve (minimum-norm
    solution under rank deficiency). With a single column the constraint
    fixes everything and (1,) is returned unconditionally.
    """
    F = np.asarray(F, dtype=complex)
    b = np.asarray(b, dtype=complex)
    d = np.asarray(row_weights, dtype=float)
    rows, k = F.shape
    if not 0 <= pivot < k:
        raise ValueError("pivot %d out of range for %d columns" % (pivot, k))
    w = np.zeros(k, dtype=complex)
    w[pivot] = 1.0
    if k == 1:
        return w
    free = np.arange(k) != pivot
    lhs = d[:, None] * F[:, free]
    rhs = d * (b - F[:, pivot])
    sol, _, _, _ = np.linalg.lstsq(lhs, rhs, rcond=None)
    w[free] = sol
    return w
