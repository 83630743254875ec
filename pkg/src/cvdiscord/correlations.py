"""Closed-form Gaussian discord, mutual information, classical correlations
and inseparability, plus a brute-force measurement-optimization oracle.

All quantities are reported in bits.  The conditional-variance minimum
enters through the entropy kernel as h(sqrt(E_min)); its closed form is
piecewise in the symplectic invariants and is validated against a grid
search over all pure single-mode Gaussian measurements.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .covariance import (
    StandardForm,
    SymplecticData,
    VACUUM_HALF,
    entropy_h,
    exact_invariants,
    symplectic_data,
)
from .errors import GridTooCoarseError, UnphysicalStateError

# Discord below this many bits reports the classical flag.
CLASSICAL_TOL = 1e-6
# Cross-correlation invariants below this magnitude route to the second
# branch of the conditional-variance formula, whose limit is well defined.
_I3_ZERO = 1e-12


class EMinBranch(enum.Enum):
    FIRST = "first"
    SECOND = "second"


class DiscordDirection(enum.Enum):
    """Which mode is measured: A_GIVEN_B conditions A on a measurement of B."""

    A_GIVEN_B = "a_given_b"
    B_GIVEN_A = "b_given_a"


@dataclass(frozen=True)
class GaussianMeasurement:
    """Pure single-mode Gaussian measurement seed: rotated squeezed vacuum.

    Covariance R(angle) diag(s/2, 1/(2s)) R(angle)^T with s = exp(2*squeeze);
    determinant 1/4 for every parameter choice.
    """

    squeeze: float
    angle: float

    def __post_init__(self):
        if self.squeeze < 0.0:
            raise ValueError(f"squeeze = {self.squeeze!r} must be >= 0")
        object.__setattr__(self, "angle", float(self.angle) % math.pi)

    def covariance(self) -> np.ndarray:
        s = math.exp(2.0 * self.squeeze)
        c, sn = math.cos(self.angle), math.sin(self.angle)
        rot = np.array([[c, -sn], [sn, c]])
        return rot @ np.diag([0.5 * s, 0.5 / s]) @ rot.T


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation measures of one two-mode state.

    e_min and e_min_branch refer to the default direction (measurement on
    mode B).  inseparability is in SNL units; everything else is in bits.
    """

    mutual_information: float
    classical_correlations: float
    discord_ab: float
    discord_ba: float
    e_min: float
    e_min_branch: EMinBranch
    inseparability: float
    entangled_sufficient: bool
    classical: bool
    inseparable: bool

    def to_json_dict(self) -> dict:
        return {
            "mutual_information": self.mutual_information,
            "classical_correlations": self.classical_correlations,
            "discord_ab": self.discord_ab,
            "discord_ba": self.discord_ba,
            "e_min": self.e_min,
            "e_min_branch": self.e_min_branch.value,
            "inseparability": self.inseparability,
            "inseparability_units": "snl",
            "flags": {
                "entangled_sufficient": self.entangled_sufficient,
                "classical": self.classical,
                "inseparable": self.inseparable,
            },
        }


def _require_physical(sd: SymplecticData):
    if not sd.physical:
        raise UnphysicalStateError(
            f"d_minus = {sd.d_minus:.9g} < 1/2"
        )


def mutual_information(sd: SymplecticData) -> float:
    """Total correlations h(sqrt(I1)) + h(sqrt(I2)) - h(d+) - h(d-)."""
    _require_physical(sd)
    return (
        entropy_h(math.sqrt(sd.i1))
        + entropy_h(math.sqrt(sd.i2))
        - entropy_h(sd.d_plus)
        - entropy_h(sd.d_minus)
    )


def e_min(sd: SymplecticData) -> tuple[float, EMinBranch]:
    """Minimal conditional-covariance determinant for mode A after an
    optimal Gaussian measurement of mode B, in closed form.

    Piecewise in the invariants; the first branch applies when the bound
    (I1*I2 - I4)^2 <= I3^2 (I2 + 1/4)(I1 + 4*I4) holds with I3 != 0.
    States with I3 = 0 route to the second branch, whose limit is finite,
    as do states with I2 = 1/4 (an uncorrelated vacuum B mode).

    The invariant algebra runs in exact rational arithmetic: both branch
    discriminants vanish quadratically on the pure-state manifold, where
    naive double evaluation leaves O(1e-16) cancellation noise whose
    square root is large enough to corrupt h(sqrt(E_min)).
    """
    _require_physical(sd)
    if sd.source is not None:
        i1, i2, i3, i4 = exact_invariants(*sd.source)
    else:
        i1, i2, i3, i4 = (Fraction(x) for x in (sd.i1, sd.i2, sd.i3, sd.i4))
    i3sq = i3 * i3
    quarter = Fraction(1, 4)

    first = False
    if abs(i3) >= _I3_ZERO and (i2 - quarter) >= _I3_ZERO:
        lhs = (i1 * i2 - i4) ** 2
        rhs = i3sq * (i2 + quarter) * (i1 + 4 * i4)
        first = lhs <= rhs

    if first:
        prod = (i1 - 4 * i4) * (i2 - quarter)
        # Nonnegative wherever the branch condition holds; boundary
        # states (pure symmetric squeezing) sit exactly at zero.
        disc = max(i3sq - prod, Fraction(0))
        value = float(
            (2 * i3sq - prod + 2 * abs(i3) * Fraction(math.sqrt(disc)))
            / (4 * (i2 - quarter) ** 2)
        )
        branch = EMinBranch.FIRST
    else:
        disc = max(
            i3sq * i3sq + (i1 * i2 - i4) ** 2 - 2 * i3sq * (i1 * i2 + i4),
            Fraction(0),
        )
        value = float(
            (i1 * i2 - i3sq + i4 - Fraction(math.sqrt(disc))) / (2 * i2)
        )
        branch = EMinBranch.SECOND

    if 0.25 - 1e-9 <= value < 0.25:
        # 1/4 is the pure-state floor; only numerical fuzz may dip below.
        value = 0.25
    return value, branch


def discord(sd: SymplecticData, direction: DiscordDirection = DiscordDirection.A_GIVEN_B) -> float:
    """Gaussian quantum discord in bits.

    h(sqrt(I2)) - h(d-) - h(d+) + h(sqrt(E_min)) for the default direction
    (measurement on B); the swapped direction exchanges I1 and I2.
    Discord above one bit is a sufficient condition for entanglement;
    zero discord identifies classical states.
    """
    if direction == DiscordDirection.B_GIVEN_A:
        sd = sd.swapped()
    _require_physical(sd)
    value, _ = e_min(sd)
    return (
        entropy_h(math.sqrt(sd.i2))
        - entropy_h(sd.d_minus)
        - entropy_h(sd.d_plus)
        + entropy_h(math.sqrt(value))
    )


def classical_correlations(sd: SymplecticData) -> float:
    """Classical correlations h(sqrt(I1)) - h(sqrt(E_min)) in bits."""
    _require_physical(sd)
    value, _ = e_min(sd)
    return entropy_h(math.sqrt(sd.i1)) - entropy_h(math.sqrt(value))


def inseparability(sf: StandardForm) -> float:
    """Joint-quadrature criterion Var(X_-) + Var(Y_+) in SNL units.

    Values below 2 certify entanglement for these states.
    """
    return 2.0 * (sf.n + sf.m) - 2.0 * (sf.c1 + sf.c2)


def correlation_report(sf: StandardForm) -> CorrelationReport:
    """Evaluate every correlation measure for one state."""
    sd = symplectic_data(sf)
    _require_physical(sd)
    value, branch = e_min(sd)
    im = mutual_information(sd)
    d_ab = discord(sd, DiscordDirection.A_GIVEN_B)
    d_ba = discord(sd, DiscordDirection.B_GIVEN_A)
    j = classical_correlations(sd)
    insep = inseparability(sf)
    return CorrelationReport(
        mutual_information=im,
        classical_correlations=j,
        discord_ab=d_ab,
        discord_ba=d_ba,
        e_min=value,
        e_min_branch=branch,
        inseparability=insep,
        entangled_sufficient=max(d_ab, d_ba) > 1.0,
        classical=max(d_ab, d_ba) < CLASSICAL_TOL,
        inseparable=insep < 2.0,
    )


def conditional_determinant(
    sf: StandardForm, measurement: GaussianMeasurement, added_noise: float = 0.0
) -> float:
    """Determinant of mode A's covariance conditioned on a Gaussian
    measurement of mode B (Schur complement of the B block).

    added_noise > 0 models an impure measurement seed, used to spot-check
    that noisy measurements never beat pure ones.
    """
    sm = measurement.covariance()
    if added_noise:
        sm = sm + added_noise * np.eye(2)
    k = np.diag([sf.m, sf.m]) + sm
    kinv = np.linalg.inv(k)
    cvec = np.array([sf.c1, -sf.c2])
    cond = np.diag([sf.n, sf.n]) - np.outer(cvec, cvec) * kinv
    return float(np.linalg.det(cond))


def _det_surface(sf: StandardForm, squeeze: np.ndarray, angle: np.ndarray) -> np.ndarray:
    """Vectorized conditional determinant over (squeeze, angle) arrays."""
    s = np.exp(2.0 * squeeze)
    half_s = 0.5 * s
    half_inv = 0.5 / s
    cos_t = np.cos(angle)
    sin_t = np.sin(angle)
    sm11 = half_s * cos_t**2 + half_inv * sin_t**2
    sm22 = half_s * sin_t**2 + half_inv * cos_t**2
    sm12 = (half_s - half_inv) * sin_t * cos_t
    k11 = sf.m + sm11
    k22 = sf.m + sm22
    det_k = k11 * k22 - sm12**2
    m11 = k22 / det_k
    m22 = k11 / det_k
    m12 = -sm12 / det_k
    a11 = sf.n - sf.c1**2 * m11
    a22 = sf.n - sf.c2**2 * m22
    a12 = -sf.c1 * sf.c2 * m12
    return a11 * a22 - a12**2


def _golden_section(f, lo: float, hi: float, tol: float = 1e-10, iters: int = 100) -> float:
    """Classic golden-section minimum search on [lo, hi]; returns argmin."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if b - a < tol:
            break
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


def _det_at(sf: StandardForm, squeeze: float, angle: float) -> float:
    """Scalar conditional determinant; math-library twin of _det_surface."""
    s = math.exp(2.0 * squeeze)
    half_s = 0.5 * s
    half_inv = 0.5 / s
    cos_t = math.cos(angle)
    sin_t = math.sin(angle)
    sm11 = half_s * cos_t * cos_t + half_inv * sin_t * sin_t
    sm22 = half_s * sin_t * sin_t + half_inv * cos_t * cos_t
    sm12 = (half_s - half_inv) * sin_t * cos_t
    k11 = sf.m + sm11
    k22 = sf.m + sm22
    det_k = k11 * k22 - sm12 * sm12
    a11 = sf.n - sf.c1 * sf.c1 * (k22 / det_k)
    a22 = sf.n - sf.c2 * sf.c2 * (k11 / det_k)
    a12 = sf.c1 * sf.c2 * (sm12 / det_k)
    return a11 * a22 - a12 * a12


def brute_force_e_min(
    sf: StandardForm,
    squeeze_max: float = 7.0,
    n_squeeze: int = 96,
    n_angle: int = 96,
) -> float:
    """Minimize the conditional determinant over all pure Gaussian
    measurements of mode B by grid search plus golden-section refinement.

    Independent of the closed form in :func:`e_min`: the only physics used
    is the Schur-complement conditioning rule.  Raises GridTooCoarseError
    when the squeeze-grid boundary attains a minimum that is still
    descending, i.e. squeeze_max truncated the optimization; homodyne-like
    optima that have converged at the boundary are accepted.
    """
    if n_squeeze < 64 or n_angle < 64:
        raise ValueError("grid sizes must each be >= 64")
    sd = symplectic_data(sf)
    _require_physical(sd)

    squeezes = np.linspace(0.0, squeeze_max, n_squeeze)
    angles = np.linspace(0.0, math.pi, n_angle, endpoint=False)
    surface = _det_surface(sf, squeezes[:, None], angles[None, :])
    i, j = np.unravel_index(int(np.argmin(surface)), surface.shape)

    def descend(sq0: float, th0: float, e0: float) -> tuple[float, float, float]:
        # Alternating golden-section descent; the angle axis is periodic
        # so its bracket never needs clamping.  Re-expanding the bracket
        # each round lets the descent track diagonal valleys.
        sq, th, best = sq0, th0, e0
        step_sq = float(squeezes[1] - squeezes[0])
        step_th = float(angles[1] - angles[0])
        for _ in range(60):
            sq = _golden_section(
                lambda x: _det_at(sf, x, th),
                max(0.0, sq - step_sq),
                min(squeeze_max, sq + step_sq),
                tol=1e-12,
            )
            th = _golden_section(
                lambda x: _det_at(sf, sq, x),
                th - step_th,
                th + step_th,
                tol=1e-12,
            )
            round_best = _det_at(sf, sq, th)
            if best - round_best < 1e-14:
                best = min(best, round_best)
                break
            best = round_best
            step_sq = max(0.5 * step_sq, 1e-6)
            step_th = max(0.5 * step_th, 1e-6)
        return sq, th, best

    starts = [(float(squeezes[i]), float(angles[j]), float(surface[i, j]))]
    if i == 0:
        # squeeze = 0 is angle-degenerate (heterodyne), which can deadlock
        # the coordinate descent; seed a second start just off the axis.
        j2 = int(np.argmin(surface[1]))
        starts.append((float(squeezes[1]), float(angles[j2]), float(surface[1, j2])))

    sq_best, th_best, best = min(
        (descend(*start) for start in starts), key=lambda r: r[2]
    )

    if squeeze_max - sq_best < 1e-6:
        # Estimate the tail still to be gained past the boundary from the
        # local exponential descent rate; complain only if it matters.
        probe = 0.05
        descent = _det_at(sf, squeeze_max - probe, th_best) - best
        tail = descent / (math.exp(2.0 * probe) - 1.0)
        if tail > 1e-5:
            raise GridTooCoarseError(
                f"minimum at squeeze_max = {squeeze_max} is still descending "
                f"(estimated remaining decrease {tail:.3g})"
            )
    return best
