"""1-D parameter sweeps, double-negative band detection, and extrema.

Sweeps evaluate the response on a uniform inclusive grid along the probe
detuning or the dipole-alignment parameter. Points where the computation
fails (local-field pole, singular or unphysical steady state) are recorded
and skipped rather than aborting the sweep; a failed point also breaks any
left-handed band running through it. Grid points are independent, so the
evaluation order is irrelevant; results are stored in grid order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .params import SystemParams, ValidationError
from .response import DegenerateProbe, Handedness, LocalFieldPole, response_at
from .steady import NonPhysicalState, SingularSystem

#: alignment sweeps stop this far short of p = 1, where the probe decouples
ALIGNMENT_GUARD = 1e-6

_POINT_ERRORS = (SingularSystem, NonPhysicalState, DegenerateProbe, LocalFieldPole)


class EmptyTable(RuntimeError):
    """The sweep table holds no successful records."""


class SweepAxis(enum.Enum):
    DETUNING = "detuning"
    ALIGNMENT = "alignment"


@dataclass(frozen=True)
class SweepFailure:
    axis_value: float
    kind: str        # exception class name
    message: str


@dataclass(frozen=True)
class SweepExtrema:
    """Grid-level extrema of a sweep (no interpolation)."""

    min_re_n: float
    min_re_n_at: float
    max_abs_im_n: float
    max_abs_im_n_at: float
    min_re_eps: float
    min_re_eps_at: float
    min_re_mu: float
    min_re_mu_at: float


@dataclass(frozen=True)
class SweepTable:
    """Response records over a strictly increasing 1-D grid.

    ``records[i]`` corresponds to ``grid[i]`` and is None exactly where the
    point failed; ``failures`` lists those points. ``bands`` holds the
    maximal contiguous left-handed intervals as (start, end) axis values,
    zero-width for single-point runs.
    """

    axis: SweepAxis
    grid: tuple
    records: tuple
    bands: tuple
    failures: tuple

    def ok_records(self):
        """(axis value, record) pairs for the points that succeeded."""
        return [(g, r) for g, r in zip(self.grid, self.records) if r is not None]


def _uniform_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise ValidationError(f"steps must be >= 1, got {steps}")
    if not lo < hi:
        raise ValidationError(f"need lower < upper bound, got [{lo}, {hi}]")
    if steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, steps)


def _run_sweep(axis: SweepAxis, base: SystemParams, grid: np.ndarray) -> SweepTable:
    field = "delta_p" if axis is SweepAxis.DETUNING else "p_align"
    records = []
    failures = []
    for value in grid:
        point = replace(base, **{field: float(value)})
        try:
            records.append(response_at(point))
        except _POINT_ERRORS as exc:
            records.append(None)
            failures.append(SweepFailure(float(value), type(exc).__name__, str(exc)))
    table = SweepTable(axis=axis, grid=tuple(float(v) for v in grid),
                       records=tuple(records), bands=(), failures=tuple(failures))
    return replace(table, bands=tuple(detect_bands(table)))


def sweep_detuning(params: SystemParams, d_min: float, d_max: float,
                   steps: int) -> SweepTable:
    """Sweep the probe detuning over [d_min, d_max] (gamma units) on a
    uniform inclusive grid; steps = 1 evaluates the single point d_min."""
    return _run_sweep(SweepAxis.DETUNING, params, _uniform_grid(d_min, d_max, steps))


def sweep_alignment(params: SystemParams, p_min: float, p_max: float,
                    steps: int) -> SweepTable:
    """Sweep the dipole alignment over [p_min, p_max], which must stay
    inside [0, 1 - ALIGNMENT_GUARD]: at p = 1 the probe decouples."""
    if p_min < 0.0:
        raise ValidationError(f"p_min must be >= 0, got {p_min}")
    if p_max > 1.0 - ALIGNMENT_GUARD:
        raise ValidationError(
            f"p_max must be <= 1 - {ALIGNMENT_GUARD:g} (probe decouples at p = 1), got {p_max}")
    return _run_sweep(SweepAxis.ALIGNMENT, params, _uniform_grid(p_min, p_max, steps))


def detect_bands(table: SweepTable) -> list:
    """Maximal runs of consecutive left-handed records as closed intervals.

    Failed points break runs; a run of length one is reported as the
    zero-width interval (v, v).
    """
    bands = []
    start = None
    last = None
    for value, record in zip(table.grid, table.records):
        if record is not None and record.handedness is Handedness.LEFT_HANDED:
            if start is None:
                start = value
            last = value
        else:
            if start is not None:
                bands.append((start, last))
            start = None
    if start is not None:
        bands.append((start, last))
    return bands


def find_extrema(table: SweepTable) -> SweepExtrema:
    """Grid-level extrema of Re(n), |Im(n)|, Re(eps_r), Re(mu_r)."""
    pairs = table.ok_records()
    if not pairs:
        raise EmptyTable("sweep produced no successful records")
    re_n = [(r.n_index.real, g) for g, r in pairs]
    im_n = [(abs(r.n_index.imag), g) for g, r in pairs]
    re_e = [(r.eps_r.real, g) for g, r in pairs]
    re_m = [(r.mu_r.real, g) for g, r in pairs]
    mn, mn_at = min(re_n)
    mi, mi_at = max(im_n)
    me, me_at = min(re_e)
    mm, mm_at = min(re_m)
    return SweepExtrema(mn, mn_at, mi, mi_at, me, me_at, mm, mm_at)


def _re_mu_sign_changes(table: SweepTable):
    """Axis-value pairs bracketing each positive -> non-positive transition
    of Re(mu_r) between consecutive successful grid points."""
    changes = []
    prev = None
    for g, r in table.ok_records():
        cur = r.mu_r.real
        if prev is not None and prev[1] > 0.0 >= cur:
            changes.append((prev[0], g))
        prev = (g, cur)
    return changes
