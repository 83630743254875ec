"""Reconstruction of standard-form covariance elements from homodyne and
joint-homodyne variance data, and a synthetic dual-homodyne simulator.

Records hold shot-noise-normalized (vacuum = 1) variances together with
the raw shot-noise reference used for normalization; extraction divides
by that reference explicitly, converts to vacuum = 1/2 units, and checks
physicality against the statistical resolution of the sample variances.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .covariance import StandardForm, VACUUM_HALF, symplectic_data
from .errors import (
    AsymmetricSingleModeNoiseError,
    InsufficientScanRangeError,
    UnphysicalReconstructionError,
    UnphysicalStateError,
)

# Largest tolerated X/Y variance split on a single mode, SNL units.  The
# extraction assumes phase-insensitive single-mode noise.
SYMMETRY_LIMIT = 0.2

# Column order of the variance-record CSV interface.
RECORD_COLUMNS = (
    "rf_hz",
    "var_xa",
    "var_ya",
    "var_xb",
    "var_yb",
    "var_xminus",
    "var_yplus",
    "snl_ref",
    "n_samples",
)

TRACE_COLUMNS = ("phase_rad", "variance_snl")


@dataclass(frozen=True)
class VarianceRecord:
    """One set of measured or simulated variances at one RF frequency.

    Single-mode entries are SNL-normalized quadrature variances; the
    joint entries are the scan minima of the difference (X_-) and sum
    (Y_+) signals.  snl_reference carries the raw shot-noise power the
    normalization divides by (1.0 for already-normalized data).
    """

    rf_frequency: float
    var_xa: float
    var_ya: float
    var_xb: float
    var_yb: float
    var_xminus: float
    var_yplus: float
    snl_reference: float
    n_samples: int

    def __post_init__(self):
        for name in (
            "var_xa", "var_ya", "var_xb", "var_yb",
            "var_xminus", "var_yplus", "snl_reference",
        ):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples!r}")

    def normalized(self) -> VarianceRecord:
        """Divide every variance by the shot-noise reference."""
        s = self.snl_reference
        if s == 1.0:
            return self
        return replace(
            self,
            var_xa=self.var_xa / s,
            var_ya=self.var_ya / s,
            var_xb=self.var_xb / s,
            var_yb=self.var_yb / s,
            var_xminus=self.var_xminus / s,
            var_yplus=self.var_yplus / s,
            snl_reference=1.0,
        )


class ScanKind(enum.Enum):
    SUM = "sum"
    DIFFERENCE = "difference"


@dataclass(frozen=True)
class ScanTrace:
    """Joint-signal variance versus scanned local-oscillator phase."""

    phase: np.ndarray
    variance: np.ndarray
    which: ScanKind

    def __post_init__(self):
        phase = np.asarray(self.phase, dtype=float)
        variance = np.asarray(self.variance, dtype=float)
        if phase.ndim != 1 or phase.shape != variance.shape:
            raise ValueError("phase and variance must be 1-d arrays of equal length")
        if phase.size < 16:
            raise ValueError(f"scan needs >= 16 points, got {phase.size}")
        if np.any(variance <= 0.0):
            raise ValueError("trace variances must be positive")
        phase.setflags(write=False)
        variance.setflags(write=False)
        object.__setattr__(self, "phase", phase)
        object.__setattr__(self, "variance", variance)


def scan_minimum(trace: ScanTrace) -> float:
    """Minimum variance over a full phase scan.

    Fits a + b*cos(2*phi + phi0) and evaluates a - |b|; if the fit
    residual exceeds 10% of the mean the model does not describe the
    trace (e.g. the phase dependence is 2*pi-periodic) and the raw
    sample minimum is used instead.
    """
    span = float(trace.phase.max() - trace.phase.min())
    if span < 2.0 * math.pi - 1e-9:
        raise InsufficientScanRangeError(
            f"scan spans {span:.6g} rad; a full 2*pi period is required"
        )
    design = np.column_stack(
        [
            np.ones_like(trace.phase),
            np.cos(2.0 * trace.phase),
            np.sin(2.0 * trace.phase),
        ]
    )
    coef, *_ = np.linalg.lstsq(design, trace.variance, rcond=None)
    residual = trace.variance - design @ coef
    rms = float(np.sqrt(np.mean(residual**2)))
    if rms > 0.1 * float(np.mean(trace.variance)):
        return float(trace.variance.min())
    a, p, q = coef
    return float(a - math.hypot(p, q))


def _d_minus_raw(n: float, m: float, c1: float, c2: float) -> float:
    """Smaller symplectic eigenvalue without validity checks (clamped)."""
    i4 = (n * m - c1 * c1) * (n * m - c2 * c2)
    delta = n * n + m * m - 2.0 * c1 * c2
    root = math.sqrt(max(delta * delta - 4.0 * i4, 0.0))
    return math.sqrt(max(0.5 * (delta - root), 0.0))


def _d_minus_sigma(rec: VarianceRecord) -> float:
    """First-order standard error of the reconstructed d_minus.

    Each sample variance carries a relative standard error sqrt(2/N);
    the element errors propagate through a central-difference gradient
    of the eigenvalue formula.
    """
    rel = math.sqrt(2.0 / rec.n_samples)
    elements = (
        0.5 * rec.var_xa,
        0.5 * rec.var_xb,
        0.5 * (rec.var_xa - rec.var_xminus),
        0.5 * (rec.var_yb - rec.var_yplus),
    )
    sigmas = (
        0.5 * rec.var_xa * rel,
        0.5 * rec.var_xb * rel,
        0.5 * math.hypot(rec.var_xa, rec.var_xminus) * rel,
        0.5 * math.hypot(rec.var_yb, rec.var_yplus) * rel,
    )
    step = 1e-5
    var = 0.0
    for axis, sigma in enumerate(sigmas):
        hi = list(elements)
        lo = list(elements)
        hi[axis] += step
        lo[axis] -= step
        grad = (_d_minus_raw(*hi) - _d_minus_raw(*lo)) / (2.0 * step)
        var += (grad * sigma) ** 2
    return math.sqrt(var)


def extract_standard_form(rec: VarianceRecord) -> StandardForm:
    """Reconstruct (n, m, c1, c2) from one variance record.

    After SNL normalization: n = var_xa/2, m = var_xb/2, c1 =
    (var_xa - var_xminus)/2 and c2 = (var_yb - var_yplus)/2, all in
    vacuum = 1/2 units.  Negative cross-correlations (possible from
    noise) clamp to zero with a warning.  Physicality is enforced at
    five propagated standard errors of the sample variances.
    """
    rec = rec.normalized()
    if abs(rec.var_xa - rec.var_ya) >= SYMMETRY_LIMIT:
        raise AsymmetricSingleModeNoiseError(
            f"|var_xa - var_ya| = {abs(rec.var_xa - rec.var_ya):.6g} >= {SYMMETRY_LIMIT}"
        )
    if abs(rec.var_xb - rec.var_yb) >= SYMMETRY_LIMIT:
        raise AsymmetricSingleModeNoiseError(
            f"|var_xb - var_yb| = {abs(rec.var_xb - rec.var_yb):.6g} >= {SYMMETRY_LIMIT}"
        )

    rel = math.sqrt(2.0 / rec.n_samples)

    def floor_half(value: float, sigma: float, name: str) -> float:
        if value < VACUUM_HALF - 5.0 * sigma:
            raise UnphysicalReconstructionError(
                f"{name} = {value:.6g} is below vacuum by more than 5 sigma"
            )
        return max(value, VACUUM_HALF)

    n = floor_half(0.5 * rec.var_xa, 0.5 * rec.var_xa * rel, "n")
    m = floor_half(0.5 * rec.var_xb, 0.5 * rec.var_xb * rel, "m")
    c1 = 0.5 * (rec.var_xa - rec.var_xminus)
    c2 = 0.5 * (rec.var_yb - rec.var_yplus)
    if c1 < 0.0:
        warnings.warn(f"clamping negative c1 = {c1:.6g} to 0", stacklevel=2)
        c1 = 0.0
    if c2 < 0.0:
        warnings.warn(f"clamping negative c2 = {c2:.6g} to 0", stacklevel=2)
        c2 = 0.0

    sf = StandardForm(n, m, c1, c2)
    d_minus = symplectic_data(sf).d_minus
    sigma_d = _d_minus_sigma(rec)
    if d_minus < VACUUM_HALF - 5.0 * sigma_d:
        raise UnphysicalReconstructionError(
            f"d_minus = {d_minus:.6g} is below 1/2 by more than 5 sigma "
            f"(sigma = {sigma_d:.3g})"
        )
    return sf


def simulate_dual_homodyne(
    sf: StandardForm,
    n_samples: int,
    phases: np.ndarray,
    seed: int,
    rf_frequency: float = 0.0,
) -> tuple[ScanTrace, ScanTrace, VarianceRecord]:
    """Phase-scanned dual-homodyne simulation of a standard-form state.

    Draws zero-mean Gaussian quadrature samples with the embedded
    covariance (SNL units), rotates mode B's measured quadrature by the
    scanned phase, and records per-phase unbiased sample variances of
    (X_A - X_B(phi))/sqrt(2) and (Y_A + Y_B(phi))/sqrt(2).  Sum and
    difference traces come from one sample set per phase; each phase
    point uses an independently spawned substream so results do not
    depend on evaluation order.  Returns (sum trace, difference trace,
    record); the record's joint entries are the scan minima.
    """
    if n_samples < 10_000:
        raise ValueError(f"n_samples must be >= 10000, got {n_samples}")
    phases = np.asarray(phases, dtype=float)
    sd = symplectic_data(sf)
    if not sd.physical:
        raise UnphysicalStateError(f"d_minus = {sd.d_minus:.9g} < 1/2")

    cov_snl = 2.0 * sf.to_covariance().entries
    chol = np.linalg.cholesky(cov_snl)
    streams = np.random.SeedSequence(seed).spawn(len(phases) + 1)

    base = np.random.default_rng(streams[0]).standard_normal((n_samples, 4)) @ chol.T
    var_xa, var_ya, var_xb, var_yb = (
        float(v) for v in base.var(axis=0, ddof=1)
    )

    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    diff_var = np.empty(len(phases))
    sum_var = np.empty(len(phases))
    for k, phi in enumerate(phases):
        q = np.random.default_rng(streams[k + 1]).standard_normal((n_samples, 4)) @ chol.T
        xb = q[:, 2] * math.cos(phi) + q[:, 3] * math.sin(phi)
        yb = -q[:, 2] * math.sin(phi) + q[:, 3] * math.cos(phi)
        diff_var[k] = ((q[:, 0] - xb) * inv_sqrt2).var(ddof=1)
        sum_var[k] = ((q[:, 1] + yb) * inv_sqrt2).var(ddof=1)

    sum_trace = ScanTrace(phases, sum_var, ScanKind.SUM)
    diff_trace = ScanTrace(phases, diff_var, ScanKind.DIFFERENCE)
    record = VarianceRecord(
        rf_frequency=rf_frequency,
        var_xa=var_xa,
        var_ya=var_ya,
        var_xb=var_xb,
        var_yb=var_yb,
        var_xminus=scan_minimum(diff_trace),
        var_yplus=scan_minimum(sum_trace),
        snl_reference=1.0,
        n_samples=n_samples,
    )
    return sum_trace, diff_trace, record


def read_variance_records(text: str) -> list[VarianceRecord]:
    """Parse the variance-record CSV interface (header required)."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty records file") from None
    if tuple(h.strip() for h in header) != RECORD_COLUMNS:
        raise ValueError(
            f"bad header: expected {','.join(RECORD_COLUMNS)}"
        )
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(RECORD_COLUMNS):
            raise ValueError(f"line {lineno}: expected {len(RECORD_COLUMNS)} fields")
        values = {}
        for name, cell in zip(RECORD_COLUMNS, row):
            try:
                values[name] = int(cell) if name == "n_samples" else float(cell)
            except ValueError:
                raise ValueError(f"line {lineno}: invalid value for {name}: {cell!r}") from None
        records.append(
            VarianceRecord(
                rf_frequency=values["rf_hz"],
                var_xa=values["var_xa"],
                var_ya=values["var_ya"],
                var_xb=values["var_xb"],
                var_yb=values["var_yb"],
                var_xminus=values["var_xminus"],
                var_yplus=values["var_yplus"],
                snl_reference=values["snl_ref"],
                n_samples=values["n_samples"],
            )
        )
    return records


def render_variance_records(records: list[VarianceRecord]) -> str:
    """Records as CSV text in the documented column order."""
    lines = [",".join(RECORD_COLUMNS)]
    for rec in records:
        lines.append(
            ",".join(
                [
                    format(rec.rf_frequency, ".9g"),
                    format(rec.var_xa, ".9g"),
                    format(rec.var_ya, ".9g"),
                    format(rec.var_xb, ".9g"),
                    format(rec.var_yb, ".9g"),
                    format(rec.var_xminus, ".9g"),
                    format(rec.var_yplus, ".9g"),
                    format(rec.snl_reference, ".9g"),
                    str(rec.n_samples),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_scan_trace(trace: ScanTrace) -> str:
    """Trace as CSV text with phase_rad, variance_snl columns."""
    lines = [",".join(TRACE_COLUMNS)]
    for phi, var in zip(trace.phase, trace.variance):
        lines.append(f"{phi:.9g},{var:.9g}")
    return "\n".join(lines) + "\n"
