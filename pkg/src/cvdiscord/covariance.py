"""Two-mode Gaussian covariance matrices, standard-form reduction and
symplectic invariants.

All internal math uses the vacuum-variance = 1/2 convention.  Shot-noise
normalized values (vacuum = 1) appear only at I/O boundaries and are
converted explicitly with :func:`convert_units`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    ComplexEigenvalueError,
    EntropyDomainError,
    NonPositiveDiagonalError,
    NonSymmetricError,
    NotLocallyReducibleError,
)

VACUUM_HALF = 0.5

# Absolute symmetry tolerance for covariance entries.
SYMMETRY_TOL = 1e-12
# Values this far below an analytic bound (x = 1/2, d_minus = 1/2) are
# clamped; larger violations raise.  Measured data carry statistical noise.
BOUND_CLAMP = 1e-9
# A state counts as physical when d_minus >= 1/2 - PHYSICAL_TOL.
PHYSICAL_TOL = 1e-9

# Symplectic form for the (X_A, Y_A, X_B, Y_B) quadrature ordering.
_OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


class UnitConvention(enum.Enum):
    """Variance normalization: HALF (vacuum = 1/2) or SNL (vacuum = 1)."""

    HALF = "half"
    SNL = "snl"


@dataclass(frozen=True)
class TwoModeCovariance:
    """4x4 real symmetric covariance matrix in (X_A, Y_A, X_B, Y_B) order.

    Entries are interpreted in vacuum = 1/2 units unless an explicit
    :class:`UnitConvention` accompanies the object (serialization carries
    one).  Physicality is checked on demand, never assumed.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.shape != (4, 4):
            raise ValueError(f"covariance must be 4x4, got shape {arr.shape}")
        if np.max(np.abs(arr - arr.T)) > SYMMETRY_TOL:
            raise NonSymmetricError(
                "covariance matrix is not symmetric within 1e-12"
            )
        if np.any(np.diag(arr) <= 0.0):
            raise NonPositiveDiagonalError(
                "covariance diagonal entries must be strictly positive"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def block_a(self) -> np.ndarray:
        return self.entries[:2, :2]

    @property
    def block_b(self) -> np.ndarray:
        return self.entries[2:, 2:]

    @property
    def block_ab(self) -> np.ndarray:
        return self.entries[:2, 2:]


def convert_units(
    cov: TwoModeCovariance, from_units: UnitConvention, to_units: UnitConvention
) -> TwoModeCovariance:
    """Rescale covariance entries between the HALF and SNL conventions."""
    if from_units == to_units:
        return cov
    factor = 2.0 if to_units == UnitConvention.SNL else 0.5
    return TwoModeCovariance(cov.entries * factor)


def covariance_to_json(cov: TwoModeCovariance, units: UnitConvention) -> str:
    """Serialize as a JSON object with a row-major 16-entry array."""
    payload = {
        "entries": [float(x) for x in cov.entries.reshape(16)],
        "units": units.value,
    }
    return json.dumps(payload)


def covariance_from_json(text: str) -> tuple[TwoModeCovariance, UnitConvention]:
    """Inverse of :func:`covariance_to_json`; returns (matrix, units)."""
    payload = json.loads(text)
    entries = payload["entries"]
    if len(entries) != 16:
        raise ValueError(f"field entries must hold 16 numbers, got {len(entries)}")
    units = UnitConvention(payload["units"])
    return TwoModeCovariance(np.array(entries, dtype=float).reshape(4, 4)), units


@dataclass(frozen=True)
class StandardForm:
    """The (n, m, c1, c2) reduction of a two-mode covariance matrix.

    n and m are the A- and B-mode quadrature variances, c1 the amplitude
    (X-X) and c2 the phase (Y-Y) cross-correlation magnitude; the minus
    sign on the Y-Y correlation is structural and not stored.  Vacuum =
    1/2 units throughout.
    """

    n: float
    m: float
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("n", "m"):
            value = float(getattr(self, name))
            if value < VACUUM_HALF - BOUND_CLAMP:
                raise ValueError(
                    f"{name} = {value!r} is below the vacuum variance 1/2"
                )
            object.__setattr__(self, name, max(value, VACUUM_HALF))
        for name in ("c1", "c2"):
            value = float(getattr(self, name))
            if value < -SYMMETRY_TOL:
                raise ValueError(f"{name} = {value!r} must be nonnegative")
            object.__setattr__(self, name, max(value, 0.0))

    def to_covariance(self) -> TwoModeCovariance:
        """Embed into the full 4x4 matrix (HALF units)."""
        n, m, c1, c2 = self.n, self.m, self.c1, self.c2
        return TwoModeCovariance(
            np.array(
                [
                    [n, 0.0, c1, 0.0],
                    [0.0, n, 0.0, -c2],
                    [c1, 0.0, m, 0.0],
                    [0.0, -c2, 0.0, m],
                ]
            )
        )

    def swapped(self) -> StandardForm:
        """Exchange the roles of modes A and B."""
        return StandardForm(self.m, self.n, self.c1, self.c2)


@dataclass(frozen=True)
class SymplecticData:
    """Symplectic invariants and eigenvalues of a standard-form state.

    i3 is stored signed: the Y-Y correlation enters the cross-block
    determinant with its structural minus sign, so i3 = -c1*c2 for the
    two-mode squeezed sign structure.  This is the convention under which
    delta = i1 + i2 + 2*i3 reproduces d_plus = d_minus = 1/2 for pure
    two-mode squeezed vacuum.

    The private source tuple keeps the exact (n, m, c1, c2) so downstream
    formulas can redo the invariant algebra in exact rational arithmetic;
    near the pure-state boundary the entropy kernel's diverging slope
    would otherwise amplify double-rounding noise past useful tolerances.
    """

    i1: float
    i2: float
    i3: float
    i4: float
    delta: float
    d_plus: float
    d_minus: float
    physical: bool
    source: tuple[float, float, float, float] | None = field(
        default=None, repr=False, compare=False
    )

    def swapped(self) -> SymplecticData:
        """Invariants with the mode roles exchanged (i1 <-> i2)."""
        src = self.source
        if src is not None:
            src = (src[1], src[0], src[2], src[3])
        return SymplecticData(
            self.i2, self.i1, self.i3, self.i4,
            self.delta, self.d_plus, self.d_minus, self.physical, src,
        )


def exact_invariants(
    n: float, m: float, c1: float, c2: float
) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(I1, I2, I3, I4) in exact rational arithmetic on the given floats."""
    fn, fm = Fraction(n), Fraction(m)
    fc1, fc2 = Fraction(c1), Fraction(c2)
    i1 = fn * fn
    i2 = fm * fm
    i3 = -fc1 * fc2
    i4 = (fn * fm - fc1 * fc1) * (fn * fm - fc2 * fc2)
    return i1, i2, i3, i4


def symplectic_data(sf: StandardForm) -> SymplecticData:
    """Invariants I1..I4, Delta and the symplectic eigenvalue pair."""
    i1, i2, i3, i4 = exact_invariants(sf.n, sf.m, sf.c1, sf.c2)
    delta = i1 + i2 + 2 * i3
    disc = delta * delta - 4 * i4
    if disc < -SYMMETRY_TOL:
        raise ComplexEigenvalueError(
            f"delta^2 - 4*I4 = {float(disc)!r} < 0: corrupted or unphysical matrix"
        )
    root = math.sqrt(max(float(disc), 0.0))
    minus_sq = 0.5 * (float(delta) - root)
    if minus_sq < -SYMMETRY_TOL:
        raise ComplexEigenvalueError(
            f"negative squared symplectic eigenvalue {minus_sq!r}"
        )
    d_plus = math.sqrt(0.5 * (float(delta) + root))
    d_minus = math.sqrt(max(minus_sq, 0.0))
    return SymplecticData(
        float(i1), float(i2), float(i3), float(i4), float(delta),
        d_plus, d_minus,
        physical=d_minus >= VACUUM_HALF - PHYSICAL_TOL,
        source=(sf.n, sf.m, sf.c1, sf.c2),
    )


def symplectic_eigenvalues(cov: TwoModeCovariance) -> tuple[float, float]:
    """(d_plus, d_minus) of a general 4x4 covariance via |eig(i*Omega*cov)|.

    Independent of the standard-form closed expression; useful as a
    cross-check and for matrices that are not in standard form.
    """
    mags = np.sort(np.abs(np.linalg.eigvals(1j * _OMEGA @ cov.entries)))
    return float(mags[-1]), float(mags[0])


def standard_form(cov: TwoModeCovariance) -> StandardForm:
    """Reduce a covariance matrix to (n, m, c1, c2) by local rotations.

    The diagonal sub-blocks must already be proportional to identity
    (local rotations cannot repair unequal quadrature variances; that
    would take local squeezing, which is unsupported).  A cross block
    that is already diagonal with the (+, -) sign pattern is returned
    as-is; otherwise a rotation-only singular value decomposition fixes
    the axes, which orders c1 >= c2.
    """
    a = cov.block_a
    b = cov.block_b
    c = cov.block_ab
    scale = max(1.0, float(np.max(np.abs(cov.entries))))
    btol = 1e-9 * scale

    for name, block in (("A", a), ("B", b)):
        if abs(block[0, 0] - block[1, 1]) > btol or abs(block[0, 1]) > btol:
            raise NotLocallyReducibleError(
                f"mode {name} sub-block is not proportional to identity; "
                "reduction would require local squeezing"
            )
    n = 0.5 * (a[0, 0] + a[1, 1])
    m = 0.5 * (b[0, 0] + b[1, 1])

    if (
        abs(c[0, 1]) <= btol
        and abs(c[1, 0]) <= btol
        and c[0, 0] >= -btol
        and c[1, 1] <= btol
    ):
        return StandardForm(n, m, max(c[0, 0], 0.0), max(-c[1, 1], 0.0))

    s = np.linalg.svd(c, compute_uv=False)
    det_c = float(np.linalg.det(c))
    if det_c > 0.0 and s[1] > btol:
        raise NotLocallyReducibleError(
            "cross block has positively correlated phase quadratures "
            "(positive determinant); not representable as diag(c1, -c2) "
            "with c1, c2 >= 0"
        )
    return StandardForm(n, m, float(s[0]), float(s[1]))


def entropy_h(x: float) -> float:
    """Thermal-state entropy kernel in bits.

    h(x) = (x + 1/2) log2(x + 1/2) - (x - 1/2) log2(x - 1/2), with the
    0*log(0) = 0 convention so h(1/2) = 0 exactly.  Arguments within
    1e-9 below 1/2 are clamped (statistical noise); lower values raise.
    """
    x = float(x)
    if x < VACUUM_HALF - BOUND_CLAMP:
        raise EntropyDomainError(f"entropy argument {x!r} is below 1/2")
    if x <= VACUUM_HALF:
        return 0.0
    return (x + 0.5) * math.log2(x + 0.5) - (x - 0.5) * math.log2(x - 0.5)


def random_standard_form(rng: np.random.Generator) -> StandardForm:
    """Draw a random physical standard-form state.

    Mixes a near-symmetric squeezed-thermal family with an asymmetric
    cross-correlation family so that downstream consumers see both
    regimes of the conditional-variance optimization.
    """
    for _ in range(1000):
        if rng.random() < 0.5:
            r = rng.uniform(0.1, 1.0)
            base = 0.5 * math.cosh(2.0 * r)
            corr = 0.5 * math.sinh(2.0 * r)
            n = base + rng.uniform(0.0, 0.6)
            m = base + rng.uniform(0.0, 0.6)
            scale = rng.uniform(0.6, 1.0)
            c1 = corr * scale
            c2 = corr * scale * rng.uniform(0.85, 1.0)
        else:
            n = rng.uniform(0.6, 2.5)
            m = rng.uniform(0.6, 2.5)
            c1 = rng.uniform(0.2, 1.0) * math.sqrt((n - 0.5) * (m - 0.5))
            c2 = c1 * rng.uniform(0.0, 0.4)
        sf = StandardForm(n, m, c1, c2)
        if symplectic_data(sf).physical:
            return sf
    raise RuntimeError("failed to sample a physical state in 1000 attempts")
