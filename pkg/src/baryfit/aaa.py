"""Classical AAA: greedy support selection with Levy-approximation weights.

Each iteration promotes the worst-approximated active sample to a support
point, then picks unit-norm weights minimizing the linearized (Levy) error
``sum |n(z_i) - d(z_i) H(z_i)|^2`` over the remaining active samples via the
smallest right singular vector.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import RationalModel, SampleSet
from .data import metrics
from .linalg import assemble_levy_system, levy_matrix, min_unit_norm_solution

__all__ = [
    "FitConfig",
    "TraceRecord",
    "FitTrace",
    "initial_model",
    "greedy_select",
    "levy_weights",
    "aaa_fit",
]


@dataclass(frozen=True)
class FitConfig:
    """Stopping controls: `tol` bounds the raw active squared error, and the
    support count may grow to max_degree + 1."""

    max_degree: int
    tol: float = 1e-12

    def __post_init__(self):
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        if not self.tol >= 0:
            raise ValueError("tol must be >= 0")


@dataclass(frozen=True)
class TraceRecord:
    k: int
    degree: int
    support: complex
    raw_active_sq_err: float
    l2_norm: float
    linf_norm: float
    branch: str


@dataclass
class FitTrace:
    """Per-iteration fit records, plus a flag marking runs that stopped on
    budget (max degree or exhausted samples) instead of on tolerance."""

    records: list = field(default_factory=list)
    budget_exhausted: bool = False


def initial_model(data):
    """Degree-0 starting model: the mean of the sample values."""
    if data.size < 1:
        raise ValueError("cannot average an empty sample set")
    return RationalModel.constant(np.mean(data.values))


def active_residuals(model, data):
    """Active indices and |r - H| there; exact poles come out as inf."""
    idx = data.active_indices()
    z = data.points[idx]
    H = data.values[idx]
    if model.is_constant:
        r = np.full(z.size, model.constant_value, dtype=complex)
    else:
        system = assemble_levy_system(z, H, model.supports, model.values)
        r = system.rationals(model.weights)
    res = np.abs(r - H)
    return idx, np.where(np.isnan(res), np.inf, res)


def greedy_select(model, data):
    """Index of the active sample with the largest mismatch |r - H|.

    Ties break to the lowest index.
    """
    idx, res = active_residuals(model, data)
    if idx.size == 0:
        raise ValueError("no active samples left to select from")
    return int(idx[int(np.argmax(res))])


def levy_weights(supports, interp_values, data):
    """Unit-norm weights minimizing ||(GC - CH) w|| over the active samples."""
    system = assemble_levy_system(
        data.active_points(), data.active_values(), supports, interp_values
    )
    return min_unit_norm_solution(levy_matrix(system))


def aaa_fit(data, cfg):
    """Run AAA on a sample set.

    Returns (model, trace). The trace holds one record per iteration with the
    raw active squared stopping error and the normalized full-data metrics;
    `budget_exhausted` is set when the tolerance was not reached before the
    degree budget (or the data) ran out.
    """
    if data.size < 2:
        raise ValueError("AAA needs at least two samples")
    work = SampleSet(data.points, data.values)
    model = initial_model(work)
    supports = np.empty(0, dtype=complex)
    interp_values = np.empty(0, dtype=complex)
    trace = FitTrace()
    reached_tol = False
    for k in range(1, cfg.max_degree + 2):
        if work.active_count < 2:
            # taking another support would leave no active data to fit
            break
        idx = greedy_select(model, work)
        supports = np.append(supports, work.points[idx])
        interp_values = np.append(interp_values, work.values[idx])
        work = work.deactivate(idx)
        system = assemble_levy_system(
            work.active_points(), work.active_values(), supports, interp_values
        )
        if k == 1:
            w = np.ones(1, dtype=complex)
        else:
            w = min_unit_norm_solution(levy_matrix(system))
        model = RationalModel.barycentric(supports, interp_values, w)
        raw = system.residual_sq_sum(w)
        m = metrics(model, data)
        trace.records.append(
            TraceRecord(k, k - 1, complex(supports[-1]), raw, m.l2, m.linf, "levy")
        )
        if raw < cfg.tol:
            reached_tol = True
            break
    trace.budget_exhausted = not reached_tol
    return model, trace
