"""Attenuation channel, spectrum sweeps, spatial-subchannel model and
sub/superadditivity classification.

The loss channel is the standard beam-splitter model: variances mix with
vacuum as eta*v + (1 - eta)/2 and cross-correlations scale as eta*c.
Spatial subchannels of a multi-mode twin beam are modeled as the base
state passed through symmetric attenuation with transmission equal to
the mode overlap of the selected half-beam pair.
"""

from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass

from .covariance import StandardForm, VACUUM_HALF, symplectic_data
from .correlations import CorrelationReport, correlation_report, discord
from .errors import (
    CVDiscordError,
    EtaOutOfRangeError,
    OverlapOutOfRangeError,
    UnknownPairError,
)
from .homodyne import VarianceRecord, extract_standard_form

# Half-beam pair labels: I/II are the left/right halves of the probe
# mode, III/IV the left/right halves of the conjugate mode.  The beams
# are centro-symmetric about the pump, so I pairs with IV and II with
# III; the remaining combinations are largely uncorrelated.
PAIR_LABELS = (("I", "III"), ("I", "IV"), ("II", "III"), ("II", "IV"))
MATCHED_PAIRS = frozenset({("I", "IV"), ("II", "III")})

ADDITIVITY_TOL = 1e-6

SWEEP_COLUMNS = (
    "eta_or_rf",
    "discord_ab",
    "discord_ba",
    "mutual_info",
    "classical_J",
    "inseparability",
    "squeezing_snl",
    "physical",
)


class Additivity(enum.Enum):
    SUBADDITIVE = "subadditive"
    SUPERADDITIVE = "superadditive"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class AttenuationSweep:
    transmissions: tuple[float, ...]
    base_state: StandardForm
    reports: tuple[CorrelationReport, ...]

    def __post_init__(self):
        if len(self.reports) != len(self.transmissions):
            raise ValueError("one report per transmission required")
        if any(b <= a for a, b in zip(self.transmissions, self.transmissions[1:])):
            raise ValueError("transmissions must be strictly increasing")


@dataclass(frozen=True)
class SpectrumRow:
    rf_frequency: float
    report: CorrelationReport
    squeezing_snl: float


@dataclass(frozen=True)
class SpectrumSweep:
    rows: tuple[SpectrumRow, ...]

    def __post_init__(self):
        freqs = [row.rf_frequency for row in self.rows]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError("frequencies must be strictly increasing")
        if any(row.squeezing_snl <= 0.0 for row in self.rows):
            raise ValueError("squeezing values must be positive")


@dataclass(frozen=True)
class SubchannelSet:
    pair_labels: tuple[tuple[str, str], ...]
    states: dict[tuple[str, str], StandardForm]
    total_state: StandardForm

    def __post_init__(self):
        for pair, state in self.states.items():
            if not symplectic_data(state).physical:
                raise ValueError(f"subchannel state for pair {pair} is unphysical")
        if not symplectic_data(self.total_state).physical:
            raise ValueError("total state is unphysical")


@dataclass(frozen=True)
class AdditivityVerdict:
    total_discord: float
    sub_sum: float
    classification: Additivity


def attenuate_symmetric(sf: StandardForm, eta: float) -> StandardForm:
    """Apply identical beam-splitter loss to both modes."""
    if not 0.0 <= eta <= 1.0:
        raise EtaOutOfRangeError(f"transmission eta = {eta!r} outside [0, 1]")
    vac = (1.0 - eta) * VACUUM_HALF
    return StandardForm(
        eta * sf.n + vac,
        eta * sf.m + vac,
        eta * sf.c1,
        eta * sf.c2,
    )


def _joint_squeezing_snl(sf: StandardForm) -> float:
    """Smaller of the two joint-quadrature variances, SNL units."""
    total = sf.n + sf.m
    return min(total - 2.0 * sf.c1, total - 2.0 * sf.c2)


def run_attenuation_sweep(sf: StandardForm, transmissions) -> AttenuationSweep:
    """Correlation report at every transmission of a symmetric loss sweep."""
    etas = tuple(float(t) for t in transmissions)
    reports = tuple(
        correlation_report(attenuate_symmetric(sf, eta)) for eta in etas
    )
    return AttenuationSweep(etas, sf, reports)


def run_spectrum_sweep(records: list[VarianceRecord]) -> SpectrumSweep:
    """Extract and report each record, ordered by RF frequency.

    Rows whose extraction or correlation computation fails are skipped
    with a warning rather than aborting the sweep.
    """
    if not records:
        raise ValueError("at least one record is required")
    rows = []
    for rec in sorted(records, key=lambda r: r.rf_frequency):
        try:
            sf = extract_standard_form(rec)
            report = correlation_report(sf)
        except CVDiscordError as exc:
            warnings.warn(
                f"skipping record at {rec.rf_frequency:.9g} Hz: {exc}",
                stacklevel=2,
            )
            continue
        norm = rec.normalized()
        rows.append(
            SpectrumRow(
                rf_frequency=rec.rf_frequency,
                report=report,
                squeezing_snl=min(norm.var_xminus, norm.var_yplus),
            )
        )
    return SpectrumSweep(tuple(rows))


def build_subchannels(correlated: StandardForm, overlap: float) -> SubchannelSet:
    """Effective two-mode states for the four half-beam pairings.

    The twin beam is modeled as two independent copies of `correlated`
    in complementary half-modes with centro-symmetric pairing; selecting
    a (probe-half, conjugate-half) pair is then symmetric attenuation
    with transmission `overlap` for matched pairs and 1 - overlap for
    mismatched ones.
    """
    if not 0.0 <= overlap <= 1.0:
        raise OverlapOutOfRangeError(f"overlap = {overlap!r} outside [0, 1]")
    states = {
        pair: attenuate_symmetric(
            correlated, overlap if pair in MATCHED_PAIRS else 1.0 - overlap
        )
        for pair in PAIR_LABELS
    }
    return SubchannelSet(PAIR_LABELS, states, correlated)


def classify_additivity(
    subchannels: SubchannelSet,
    pair_a: tuple[str, str],
    pair_b: tuple[str, str],
) -> AdditivityVerdict:
    """Compare the total channel's discord against the sum over two
    bipartite subchannels."""
    if pair_a == pair_b:
        raise ValueError("subchannel pairs must be distinct")
    for pair in (pair_a, pair_b):
        if pair not in subchannels.states:
            raise UnknownPairError(f"pair {pair} not in subchannel set")
    total = discord(symplectic_data(subchannels.total_state))
    sub_sum = discord(symplectic_data(subchannels.states[pair_a])) + discord(
        symplectic_data(subchannels.states[pair_b])
    )
    if total < sub_sum - ADDITIVITY_TOL:
        classification = Additivity.SUBADDITIVE
    elif total > sub_sum + ADDITIVITY_TOL:
        classification = Additivity.SUPERADDITIVE
    else:
        classification = Additivity.ADDITIVE
    return AdditivityVerdict(total, sub_sum, classification)


def _sweep_row(x: float, report: CorrelationReport, squeezing: float) -> dict:
    return {
        "eta_or_rf": x,
        "discord_ab": report.discord_ab,
        "discord_ba": report.discord_ba,
        "mutual_info": report.mutual_information,
        "classical_J": report.classical_correlations,
        "inseparability": report.inseparability,
        "squeezing_snl": squeezing,
        "physical": True,
    }


def attenuation_sweep_rows(sweep: AttenuationSweep) -> list[dict]:
    rows = []
    for eta, report in zip(sweep.transmissions, sweep.reports):
        attenuated = attenuate_symmetric(sweep.base_state, eta)
        rows.append(_sweep_row(eta, report, _joint_squeezing_snl(attenuated)))
    return rows


def spectrum_sweep_rows(sweep: SpectrumSweep) -> list[dict]:
    return [
        _sweep_row(row.rf_frequency, row.report, row.squeezing_snl)
        for row in sweep.rows
    ]


def render_sweep_csv(rows: list[dict]) -> str:
    """Sweep rows as CSV text in the documented column order."""
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        cells = []
        for col in SWEEP_COLUMNS:
            value = row[col]
            if isinstance(value, bool):
                cells.append("true" if value else "false")
            else:
                cells.append(format(value, ".9g"))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render_sweep_json(rows: list[dict]) -> str:
    """JSON mirror of the sweep CSV: one object per row, same keys."""
    payload = [
        {
            col: (row[col] if isinstance(row[col], bool) else float(format(row[col], ".9g")))
            for col in SWEEP_COLUMNS
        }
        for row in rows
    ]
    return json.dumps(payload, indent=2) + "\n"
