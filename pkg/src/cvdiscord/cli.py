"""Command-line interface.

Commands: report, sweep-loss, sweep-spectrum, subchannels, simulate and
oracle-check.  Exit codes: 0 success, 1 input error, 2 unphysical state,
so shell pipelines can tell data problems from physics problems.  State
and file I/O default to SNL units (vacuum = 1); `--units half` switches
the state arguments to vacuum = 1/2 values.  All numeric output is
rounded to 9 significant digits and files are written atomically.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import sys
import tempfile

import numpy as np

from .channels import (
    PAIR_LABELS,
    attenuation_sweep_rows,
    build_subchannels,
    classify_additivity,
    render_sweep_csv,
    render_sweep_json,
    run_attenuation_sweep,
    run_spectrum_sweep,
    spectrum_sweep_rows,
)
from .correlations import brute_force_e_min, correlation_report, e_min
from .covariance import StandardForm, random_standard_form, symplectic_data
from .errors import (
    CVDiscordError,
    UnphysicalReconstructionError,
    UnphysicalStateError,
)
from .homodyne import (
    RECORD_COLUMNS,
    VarianceRecord,
    extract_standard_form,
    read_variance_records,
    render_scan_trace,
    simulate_dual_homodyne,
)

ORACLE_TOL = 1e-4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _round9(obj):
    """Round every float in a JSON-ready structure to 9 significant digits."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(format(obj, ".9g"))
    if isinstance(obj, dict):
        return {key: _round9(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round9(value) for value in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_round9(obj), indent=2) + "\n"


def _write_output(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cvdiscord-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def _parse_state(text: str, units: str) -> StandardForm:
    parts = text.split(",")
    names = ("n", "m", "c1", "c2")
    if len(parts) != 4:
        raise ValueError(f"--state needs 4 comma-separated values {','.join(names)}")
    values = []
    for name, part in zip(names, parts):
        try:
            values.append(float(part))
        except ValueError:
            raise ValueError(f"invalid value for {name}: {part.strip()!r}") from None
    if units == "snl":
        values = [v / 2.0 for v in values]
    return StandardForm(*values)


def _parse_record(text: str) -> VarianceRecord:
    parts = text.split(",")
    if len(parts) != len(RECORD_COLUMNS):
        raise ValueError(
            f"--record needs {len(RECORD_COLUMNS)} comma-separated values "
            f"({','.join(RECORD_COLUMNS)})"
        )
    values = {}
    for name, part in zip(RECORD_COLUMNS, parts):
        try:
            values[name] = int(part) if name == "n_samples" else float(part)
        except ValueError:
            raise ValueError(f"invalid value for {name}: {part.strip()!r}") from None
    return VarianceRecord(
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


def _parse_etas(text: str) -> tuple[float, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("--etas range form is start:stop:count")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ValueError(f"invalid value for etas: {text!r}") from None
        if count < 2:
            raise ValueError("--etas range needs count >= 2")
        etas = tuple(np.linspace(start, stop, count).tolist())
    else:
        try:
            etas = tuple(float(p) for p in text.split(","))
        except ValueError:
            raise ValueError(f"invalid value for etas: {text!r}") from None
    if any(b <= a for a, b in zip(etas, etas[1:])):
        raise ValueError("--etas must be strictly increasing")
    if etas and (etas[0] < 0.0 or etas[-1] > 1.0):
        raise ValueError("--etas values must lie in [0, 1]")
    return etas


def _resolve_seed(args) -> int:
    env = os.environ.get("DISCORD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"invalid value for DISCORD_SEED: {env!r}") from None
    return args.seed


def _state_payload(sf: StandardForm) -> dict:
    return {
        "half": {"n": sf.n, "m": sf.m, "c1": sf.c1, "c2": sf.c2},
        "snl": {"n": 2 * sf.n, "m": 2 * sf.m, "c1": 2 * sf.c1, "c2": 2 * sf.c2},
    }


def _cmd_report(args) -> int:
    if args.state is not None:
        sf = _parse_state(args.state, args.units)
    else:
        sf = extract_standard_form(_parse_record(args.record))
    report = correlation_report(sf)
    payload = report.to_json_dict()
    payload["state"] = _state_payload(sf)
    _write_output(_dump_json(payload), args.output)
    return 0


def _cmd_sweep_loss(args) -> int:
    sf = _parse_state(args.state, args.units)
    etas = _parse_etas(args.etas)
    sweep = run_attenuation_sweep(sf, etas)
    rows = attenuation_sweep_rows(sweep)
    text = render_sweep_json(rows) if args.format == "json" else render_sweep_csv(rows)
    _write_output(text, args.output)
    return 0


def _cmd_sweep_spectrum(args) -> int:
    try:
        with open(args.input, encoding="utf-8") as handle:
            records = read_variance_records(handle.read())
    except OSError as exc:
        raise ValueError(f"cannot read {args.input}: {exc}") from None
    import warnings as _warnings

    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        sweep = run_spectrum_sweep(records)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)
    rows = spectrum_sweep_rows(sweep)
    text = render_sweep_json(rows) if args.format == "json" else render_sweep_csv(rows)
    _write_output(text, args.output)
    return 0


def _cmd_subchannels(args) -> int:
    sf = _parse_state(args.state, args.units)
    subs = build_subchannels(sf, args.overlap)
    pairs = {}
    for pair in PAIR_LABELS:
        state = subs.states[pair]
        pairs["-".join(pair)] = {
            "state": _state_payload(state),
            "report": correlation_report(state).to_json_dict(),
        }
    verdicts = []
    for pair_a, pair_b, label in (
        (("II", "III"), ("I", "IV"), "matched"),
        (("II", "IV"), ("I", "III"), "mismatched"),
    ):
        verdict = classify_additivity(subs, pair_a, pair_b)
        verdicts.append(
            {
                "pairs": ["-".join(pair_a), "-".join(pair_b)],
                "selection": label,
                "total_discord": verdict.total_discord,
                "sub_sum": verdict.sub_sum,
                "classification": verdict.classification.value,
            }
        )
    payload = {
        "overlap": args.overlap,
        "total_state": _state_payload(sf),
        "total_report": correlation_report(sf).to_json_dict(),
        "pairs": pairs,
        "verdicts": verdicts,
    }
    _write_output(_dump_json(payload), args.output)
    return 0


def _cmd_simulate(args) -> int:
    sf = _parse_state(args.state, args.units)
    seed = _resolve_seed(args)
    if args.phases < 16:
        raise ValueError("--phases must be >= 16")
    phases = np.linspace(0.0, 2.0 * math.pi, args.phases)
    sum_trace, diff_trace, record = simulate_dual_homodyne(
        sf, args.samples, phases, seed, rf_frequency=args.rf
    )
    payload = {
        "seed": seed,
        "record": {
            "rf_hz": record.rf_frequency,
            "var_xa": record.var_xa,
            "var_ya": record.var_ya,
            "var_xb": record.var_xb,
            "var_yb": record.var_yb,
            "var_xminus": record.var_xminus,
            "var_yplus": record.var_yplus,
            "snl_ref": record.snl_reference,
            "n_samples": record.n_samples,
        },
    }
    try:
        payload["extracted_state"] = _state_payload(extract_standard_form(record))
    except (UnphysicalReconstructionError, CVDiscordError) as exc:
        payload["extracted_state"] = None
        payload["extraction_error"] = str(exc)
    _write_output(render_scan_trace(sum_trace), args.output + ".sum.csv")
    _write_output(render_scan_trace(diff_trace), args.output + ".difference.csv")
    _write_output(_dump_json(payload), args.output + ".record.json")
    return 0


def _cmd_oracle_check(args) -> int:
    if args.n_states < 1:
        raise ValueError("--n-states must be >= 1")
    seed = _resolve_seed(args)
    rng = np.random.default_rng(seed)
    counts = {"first": 0, "second": 0}
    max_diff = 0.0
    for _ in range(args.n_states):
        sf = random_standard_form(rng)
        closed, branch = e_min(symplectic_data(sf))
        counts[branch.value] += 1
        max_diff = max(max_diff, abs(closed - brute_force_e_min(sf)))
    passed = max_diff <= ORACLE_TOL
    lines = [
        f"states: {args.n_states}",
        f"seed: {seed}",
        f"branch_first: {counts['first']}",
        f"branch_second: {counts['second']}",
        f"max_abs_diff: {max_diff:.9g}",
        f"tolerance: {ORACLE_TOL:.9g}",
        f"result: {'PASS' if passed else 'FAIL'}",
    ]
    _write_output("\n".join(lines) + "\n", args.output)
    return 0 if passed else 1


def _build_parser() -> _Parser:
    parser = _Parser(prog="cvdiscord", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_state(p, required=True):
        p.add_argument(
            "--state",
            required=required,
            help="standard-form values n,m,c1,c2 in --units",
        )
        p.add_argument("--units", choices=("snl", "half"), default="snl")

    p = sub.add_parser("report", help="correlation report for one state or record")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--state", help="standard-form values n,m,c1,c2 in --units")
    group.add_argument(
        "--record",
        help=f"variance record {','.join(RECORD_COLUMNS)} (raw; snl_ref normalizes)",
    )
    p.add_argument("--units", choices=("snl", "half"), default="snl")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("sweep-loss", help="symmetric attenuation sweep")
    add_state(p)
    p.add_argument("--etas", required=True, help="comma list or start:stop:count")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_sweep_loss)

    p = sub.add_parser("sweep-spectrum", help="per-frequency reports from a records CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_sweep_spectrum)

    p = sub.add_parser("subchannels", help="spatial half-beam pair analysis")
    add_state(p)
    p.add_argument("--overlap", type=float, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_subchannels)

    p = sub.add_parser("simulate", help="synthetic dual-homodyne scan")
    add_state(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--phases", type=int, default=33, help="phase points over [0, 2pi]")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rf", type=float, default=0.0, help="RF frequency tag in Hz")
    p.add_argument("--output", required=True, help="output file prefix")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("oracle-check", help="closed form vs brute-force minimization")
    p.add_argument("--n-states", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UnphysicalStateError, UnphysicalReconstructionError) as exc:
        print(f"unphysical: {exc}", file=sys.stderr)
        return 2
    except (CVDiscordError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
