"""Sample sets, barycentric rational models, and state-space realization.

A barycentric rational model is the ratio

    r(z) = (sum_j w_j h_j / (z - lambda_j)) / (sum_j w_j / (z - lambda_j)),

which interpolates h_j at the support point lambda_j whenever w_j != 0.
The degree-0 variant is a plain constant. Sample data lives in immutable
:class:`SampleSet` objects carrying an active/interpolated partition.
"""

import numpy as np

__all__ = [
    "NumericalError",
    "PoleAtPointError",
    "SampleSet",
    "RationalModel",
    "Realization",
    "num_den",
    "realize",
]


class NumericalError(ArithmeticError):
    """A computation is undefined for the given numbers (not a usage error)."""


class PoleAtPointError(NumericalError):
    """The barycentric denominator is exactly zero at an evaluation point."""


def _as_complex_vector(x, name):
    """Coerce to a finite, read-only 1-d complex array."""
    arr = np.atleast_1d(np.asarray(x, dtype=complex)).copy()
    if arr.ndim != 1:
        raise ValueError("%s must be one-dimensional, got shape %s" % (name, arr.shape))
    if not np.all(np.isfinite(arr)):
        raise ValueError("%s contains non-finite entries" % name)
    arr.flags.writeable = False
    return arr


def _check_distinct(points, name):
    if np.unique(points).size != points.size:
        order = np.lexsort((points.imag, points.real))
        srt = points[order]
        dup = order[1:][srt[1:] == srt[:-1]]
        raise ValueError(
            "%s must be pairwise distinct; duplicates at indices %s"
            % (name, sorted(int(i) for i in dup))
        )


class SampleSet:
    """Immutable data set {(z_i, H(z_i))} with an active/interpolated split.

    Args:
        points: complex sample locations z_i, pairwise distinct.
        values: complex sample values H(z_i), same length.
        active_mask: optional boolean mask; True marks non-interpolated
            samples. Defaults to all active.
    """

    def __init__(self, points, values, active_mask=None):
        self.points = _as_complex_vector(points, "points")
        self.values = _as_complex_vector(values, "values")
        if self.points.size != self.values.size:
            raise ValueError(
                "points and values must have the same length (%d != %d)"
                % (self.points.size, self.values.size)
            )
        if self.points.size < 1:
            raise ValueError("a sample set needs at least one sample")
        _check_distinct(self.points, "sample points")
        if active_mask is None:
            mask = np.ones(self.points.size, dtype=bool)
        else:
            mask = np.array(active_mask, dtype=bool)
            if mask.shape != self.points.shape:
                raise ValueError("active_mask length does not match points")
        mask.flags.writeable = False
        self.active_mask = mask

    @property
    def size(self):
        return self.points.size

    @property
    def active_count(self):
        return int(np.count_nonzero(self.active_mask))

    def active_indices(self):
        return np.nonzero(self.active_mask)[0]

    def active_points(self):
        return self.points[self.active_mask]

    def active_values(self):
        return self.values[self.active_mask]

    def deactivate(self, index):
        """Return a new SampleSet with sample `index` marked interpolated."""
        index = int(index)
        if not self.active_mask[index]:
            raise ValueError("sample %d is already interpolated" % index)
        mask = self.active_mask.copy()
        mask[index] = False
        return SampleSet(self.points, self.values, mask)


class RationalModel:
    """A barycentric rational function, or a degree-0 constant.

    Use :meth:`constant` or :meth:`barycentric` to construct. Calling the
    model evaluates it; at a support point with nonzero weight the stored
    value is returned exactly (removable singularity), and a support point
    whose weight is zero simply drops out of both sums.
    """

    def __init__(self, supports=None, values=None, weights=None, constant=None):
        if constant is not None:
            if supports is not None or values is not None or weights is not None:
                raise ValueError("constant model takes no barycentric data")
            constant = complex(constant)
            if not (np.isfinite(constant.real) and np.isfinite(constant.imag)):
                raise ValueError("constant value must be finite")
            self.constant_value = constant
            self.supports = None
            self.values = None
            self.weights = None
            return
        self.constant_value = None
        self.supports = _as_complex_vector(supports, "supports")
        self.values = _as_complex_vector(values, "values")
        self.weights = _as_complex_vector(weights, "weights")
        if not (self.supports.size == self.values.size == self.weights.size):
            raise ValueError("supports, values and weights must have equal length")
        if self.supports.size < 1:
            raise ValueError("a barycentric model needs at least one support point")
        _check_distinct(self.supports, "support points")
        if not np.any(self.weights != 0):
            raise ValueError("at least one weight must be nonzero")

    @classmethod
    def constant(cls, value):
        return cls(constant=value)

    @classmethod
    def barycentric(cls, supports, values, weights):
        return cls(supports=supports, values=values, weights=weights)

    @property
    def is_constant(self):
        return self.constant_value is not None

    @property
    def k(self):
        """Number of support points (0 for the constant variant)."""
        return 0 if self.is_constant else self.supports.size

    @property
    def degree(self):
        """Rational degree: k - 1 support points, 0 for the constant."""
        return max(self.k - 1, 0)

    def __call__(self, z):
        scalar_in = np.isscalar(z) or np.shape(z) == ()
        if self.is_constant:
            if scalar_in:
                return self.constant_value
            return np.full(np.shape(z), self.constant_value, dtype=complex)
        zv = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        diffs = zv[:, None] - self.supports[None, :]
        hit_row, hit_col = np.nonzero(diffs == 0)
        diffs[hit_row, hit_col] = 1.0  # w_j = 0 terms then contribute nothing
        cauchy = 1.0 / diffs
        num = cauchy @ (self.weights * self.values)
        den = cauchy @ self.weights
        with np.errstate(divide="ignore", invalid="ignore"):
            r = num / den
        interp = self.weights[hit_col] != 0
        r[hit_row[interp]] = self.values[hit_col[interp]]
        bad = den == 0
        bad[hit_row[interp]] = False
        if np.any(bad):
            where = zv[np.nonzero(bad)[0][0]]
            raise PoleAtPointError("denominator vanishes at z = %s" % where)
        if scalar_in:
            return complex(r[0])
        return r.reshape(np.shape(z))


def num_den(weights, supports, values, z):
    """Numerator and denominator of the barycentric form at a single point.

    Returns (n, d) with n = sum_j w_j h_j/(z - lambda_j) and
    d = sum_j w_j/(z - lambda_j). The point must not coincide with a
    support; use the model call for that case.
    """
    weights = np.asarray(weights, dtype=complex)
    supports = np.asarray(supports, dtype=complex)
    values = np.asarray(values, dtype=complex)
    z = complex(z)
    diffs = z - supports
    if np.any(diffs == 0):
        j = int(np.nonzero(diffs == 0)[0][0])
        raise ValueError(
            "z coincides with support point %d; evaluate the model instead" % j
        )
    q = 1.0 / diffs
    p = values * q
    return complex(weights @ p), complex(weights @ q)


class Realization:
    """Descriptor state-space realization (E, A, b, c) of a rational model.

    The transfer function c^T (zE - A)^{-1} b reproduces the model at every
    point away from the support set.
    """

    def __init__(self, E, A, b, c):
        self.E = np.asarray(E, dtype=complex)
        self.A = np.asarray(A, dtype=complex)
        self.b = np.asarray(b, dtype=complex)
        self.c = np.asarray(c, dtype=complex)

    @property
    def order(self):
        return self.b.size

    def transfer(self, z):
        """Evaluate c^T (zE - A)^{-1} b at one or more points."""
        zv = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        out = np.empty(zv.size, dtype=complex)
        for i, zi in enumerate(zv):
            out[i] = self.c @ np.linalg.solve(zi * self.E - self.A, self.b)
        if np.isscalar(z) or np.shape(z) == ():
            return complex(out[0])
        return out.reshape(np.shape(z))


def realize(model):
    """Build the state-space realization of a barycentric model.

    Row i < k-1 of E carries +1 in column 0 and -1 in column i+1; the same
    rows of A carry lambda_0 and -lambda_{i+1}. The last row of A holds the
    negated weights and c holds h_j*w_j, which makes the transfer function
    equal the rational itself (the variant with the roles of those two
    vectors swapped produces 1/r instead).
    """
    if model.is_constant or model.k < 1:
        raise ValueError("realization needs a barycentric model with k >= 1")
    lam = model.supports
    k = model.k
    E = np.zeros((k, k), dtype=complex)
    A = np.zeros((k, k), dtype=complex)
    for i in range(k - 1):
        E[i, 0] = 1.0
        E[i, i + 1] = -1.0
        A[i, 0] = lam[0]
        A[i, i + 1] = -lam[i + 1]
    A[k - 1, :] = -model.weights
    b = np.zeros(k, dtype=complex)
    b[k - 1] = 1.0
    c = model.values * model.weights
    return Realization(E, A, b, c)
