"""Experiment presets, output files and the command-line interface.

Subcommands: ``run`` (evolve and write CSV/JSON/SVG outputs), ``verify``
(structural identity checks), ``sweep`` (one-parameter scans), ``preset``
(print a canned configuration).

Config files are flat ``key = value`` text with the keys named exactly as
the RunConfig fields; command-line flags use the same names prefixed with
``--`` and override file values.  ``run --config`` also accepts a
summary.json from a previous run, which reproduces that run bit for bit.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 invariant violation,
4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields, replace

from . import __version__
from .errors import NormDriftError
from .evolve import (
    TrotterPlan,
    exact_evolve_converged,
    state_distance,
    trotter_evolve,
)
from .model import (
    ModelParams,
    build_charge_term,
    build_hopping,
    build_mass_term,
    hamiltonian_at,
    n8_fixture,
    total_sz,
    verify_bilinears,
)
from .observables import ObservableRecord, estimators_from_counts
from .pauli import commutator
from .state import basis_state, expectation_pauli_sum, sample_z_basis
from .svg import Series, heatmap, line_chart

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVARIANT = 3
EXIT_VERIFY = 4

CHARGE_DRIFT_TOL = 1e-10
NORM_DRIFT_TOL = 1e-10
ORACLE_TOL = 1e-10
P_RATIO_FLOOR = 1e-9

SWEEPABLE = ("hubble", "mass", "trotter_steps", "shots", "initial_state_index")


def _default_output_dir() -> str:
    return os.environ.get("DSFERMION_OUTPUT_DIR", "out")


@dataclass
class RunConfig:
    n_sites: int = 8
    hubble: float = 0.1
    mass: float = 0.0
    t_total: float = 1.0
    trotter_steps: int = 10
    time_sampling: str = "midpoint"
    shots: int = 10000
    seed: int = 1
    initial_state_index: int = 1
    snapshot_every: int = 1
    oracle: str = "on"
    oracle_substeps_start: int = 256
    output_dir: str = field(default_factory=_default_output_dir)

    def validate(self) -> None:
        if self.n_sites < 4 or self.n_sites % 2 != 0:
            raise ValueError(f"n_sites must be an even integer >= 4, got {self.n_sites}")
        if self.trotter_steps < 1:
            raise ValueError(f"trotter_steps must be >= 1, got {self.trotter_steps}")
        if not 0 <= self.initial_state_index < (1 << self.n_sites):
            raise ValueError(
                f"initial_state_index {self.initial_state_index} out of range for "
                f"{self.n_sites} sites"
            )
        if self.shots < 0:
            raise ValueError(f"shots must be >= 0, got {self.shots}")
        if self.snapshot_every < 1:
            raise ValueError(f"snapshot_every must be >= 1, got {self.snapshot_every}")
        if self.time_sampling not in ("left", "midpoint"):
            raise ValueError(f"time_sampling must be 'left' or 'midpoint', got {self.time_sampling!r}")
        if self.oracle not in ("on", "off"):
            raise ValueError(f"oracle must be 'on' or 'off', got {self.oracle!r}")
        if self.oracle_substeps_start < 1:
            raise ValueError("oracle_substeps_start must be >= 1")
        if not (math.isfinite(self.t_total) and self.t_total > 0):
            raise ValueError(f"t_total must be positive, got {self.t_total}")


def preset_paper(mass_choice: int) -> RunConfig:
    """The published N=8 setup: h=0.1, t=1 over 10 Trotter steps, 10000 shots,
    initial state |1> (one hole at site 0), exact-propagator oracle on."""
    if mass_choice not in (0, 1):
        raise ValueError(f"mass_choice must be 0 or 1, got {mass_choice}")
    return RunConfig(
        n_sites=8,
        hubble=0.1,
        mass=float(mass_choice),
        t_total=1.0,
        trotter_steps=10,
        time_sampling="midpoint",
        shots=10000,
        seed=1,
        initial_state_index=1,
        snapshot_every=1,
        oracle="on",
        oracle_substeps_start=256,
        output_dir=os.path.join(_default_output_dir(), f"paper_m{mass_choice}"),
    )


PRESETS = {"paper-m0": lambda: preset_paper(0), "paper-m1": lambda: preset_paper(1)}


# ---------------------------------------------------------------------------
# Config file handling
# ---------------------------------------------------------------------------

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw) -> object:
    kind = _FIELD_TYPES[name]
    if kind == "int":
        return int(raw)
    if kind == "float":
        return float(raw)
    return str(raw)


def config_to_text(config: RunConfig) -> str:
    lines = [f"{f.name} = {getattr(config, f.name)}" for f in fields(config)]
    return "\n".join(lines) + "\n"


def config_from_mapping(mapping: dict) -> RunConfig:
    unknown = set(mapping) - set(_FIELD_TYPES)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**{k: _coerce(k, v) for k, v in mapping.items()})


def parse_config_text(text: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        payload = json.loads(text)
        if not isinstance(payload, dict):
            raise ValueError(f"{path}: expected a JSON object")
        mapping = payload.get("config", payload)
        return config_from_mapping(mapping)
    return config_from_mapping(parse_config_text(text))


# ---------------------------------------------------------------------------
# Output writers
# ---------------------------------------------------------------------------

def _g17(x: float) -> str:
    return f"{x:.17g}"


def write_density_csv(
    path: str,
    times: list[float],
    exact_records: list[ObservableRecord],
    shot_records: list[ObservableRecord] | None,
) -> None:
    lines = ["t,x,n_exact,n_shot,n_shot_err"]
    for i, t in enumerate(times):
        exact = exact_records[i]
        shot = shot_records[i] if shot_records else None
        for x in range(len(exact.density)):
            n_shot = _g17(shot.density[x]) if shot else ""
            n_err = _g17(shot.shot_errors.density[x]) if shot else ""
            lines.append(f"{_g17(t)},{x},{_g17(exact.density[x])},{n_shot},{n_err}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def write_observables_csv(
    path: str,
    exact_records: list[ObservableRecord],
    shot_records: list[ObservableRecord] | None,
) -> None:
    p0 = exact_records[0].polarization_over_e
    ratio_defined = abs(p0) > P_RATIO_FLOOR
    lines = ["t,n_total,C,C_err,p_over_e,p_ratio,c,c_err,energy,total_sz,norm"]
    for i, rec in enumerate(exact_records):
        shot = shot_records[i] if shot_records else None
        c_err = _g17(shot.shot_errors.correlation_C) if shot else ""
        chi_err = _g17(shot.shot_errors.chiral_c) if shot else ""
        p_ratio = _g17(rec.polarization_over_e / p0) if ratio_defined else ""
        lines.append(
            ",".join(
                (
                    _g17(rec.t),
                    _g17(rec.n_total),
                    _g17(rec.correlation_C),
                    c_err,
                    _g17(rec.polarization_over_e),
                    p_ratio,
                    _g17(rec.chiral_c),
                    chi_err,
                    _g17(rec.energy),
                    _g17(rec.total_sz),
                    _g17(rec.norm),
                )
            )
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _jsonable(value):
    if isinstance(value, float) and math.isnan(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_summary_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _config_meta(config: RunConfig) -> str:
    pairs = " ".join(f"{f.name}={getattr(config, f.name)}" for f in fields(config))
    return f"dsfermion {__version__} | {pairs}"


def _write_plots(
    out_dir: str,
    config: RunConfig,
    times: list[float],
    exact_records: list[ObservableRecord],
    shot_records: list[ObservableRecord] | None,
) -> None:
    meta = _config_meta(config)
    n_sites = len(exact_records[0].density)
    density_grid = [[rec.density[x] for x in range(n_sites)] for rec in exact_records]
    svg = heatmap(
        "Fermion density n(x, t)",
        "t",
        "site x",
        times,
        list(range(n_sites)),
        density_grid,
        meta=meta,
    )
    _write_text(os.path.join(out_dir, "density_heatmap.svg"), svg)

    def chart(name, title, ylabel, exact_ys, shot_ys=None, shot_err=None):
        series = [Series("exact", times, exact_ys)]
        if shot_ys is not None:
            series.append(Series("shots", times, shot_ys, yerr=shot_err))
        _write_text(
            os.path.join(out_dir, name), line_chart(title, "t", ylabel, series, meta=meta)
        )

    shot = shot_records if shot_records else None
    chart(
        "correlation.svg",
        "Density correlation C(t)",
        "C",
        [r.correlation_C for r in exact_records],
        [r.correlation_C for r in shot] if shot else None,
        [r.shot_errors.correlation_C for r in shot] if shot else None,
    )
    p0 = exact_records[0].polarization_over_e
    if abs(p0) > P_RATIO_FLOOR:
        chart(
            "polarization.svg",
            "Polarization ratio p(t)/p(0)",
            "p(t)/p(0)",
            [r.polarization_over_e / p0 for r in exact_records],
            [r.polarization_over_e / p0 for r in shot] if shot else None,
            [r.shot_errors.polarization_over_e / abs(p0) for r in shot] if shot else None,
        )
    else:
        chart(
            "polarization.svg",
            "Polarization p(t)/e",
            "p/e",
            [r.polarization_over_e for r in exact_records],
            [r.polarization_over_e for r in shot] if shot else None,
            [r.shot_errors.polarization_over_e for r in shot] if shot else None,
        )
    chart(
        "chiral.svg",
        "Chiral condensate c(t)",
        "c",
        [r.chiral_c for r in exact_records],
        [r.chiral_c for r in shot] if shot else None,
        [r.shot_errors.chiral_c for r in shot] if shot else None,
    )


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# run / verify / sweep
# ---------------------------------------------------------------------------

def run(config: RunConfig) -> int:
    """Evolve per the config and write density.csv, observables.csv,
    summary.json and the four SVG plots into config.output_dir."""
    config.validate()
    params = ModelParams(config.n_sites, config.hubble, config.mass)
    initial = basis_state(config.n_sites, config.initial_state_index)
    plan = TrotterPlan.for_total_time(
        config.t_total,
        config.trotter_steps,
        time_sampling=config.time_sampling,
        snapshot_every=config.snapshot_every,
    )
    trajectory = trotter_evolve(initial, params, plan, keep_states=True)
    times = trajectory.times
    records = trajectory.records

    shot_records = None
    if config.shots > 0:
        shot_records = []
        for i, (t, st) in enumerate(zip(times, trajectory.states)):
            counts = sample_z_basis(st, config.shots, config.seed + i)
            shot_records.append(estimators_from_counts(counts, t, config.hubble))

    charge_drift = max(abs(r.total_sz - records[0].total_sz) for r in records)
    norm_drift = max(abs(r.norm - 1.0) for r in records)

    oracle_report = None
    if config.oracle == "on":
        oracle = exact_evolve_converged(
            initial,
            params,
            config.t_total,
            substeps_start=config.oracle_substeps_start,
            tol=ORACLE_TOL,
        )
        oracle_report = {
            "substeps": oracle.substeps,
            "convergence_delta": oracle.delta,
            "state_distance": state_distance(trajectory.states[-1], oracle.state),
        }

    os.makedirs(config.output_dir, exist_ok=True)
    write_density_csv(
        os.path.join(config.output_dir, "density.csv"), times, records, shot_records
    )
    write_observables_csv(
        os.path.join(config.output_dir, "observables.csv"), records, shot_records
    )
    summary = {
        "config": dataclasses.asdict(config),
        "seed": config.seed,
        "version": __version__,
        "invariants": {
            "charge_drift": charge_drift,
            "charge_drift_tolerance": CHARGE_DRIFT_TOL,
            "norm_drift": norm_drift,
            "norm_drift_tolerance": NORM_DRIFT_TOL,
            "oracle": oracle_report,
        },
    }
    if shot_records is not None:
        summary["shot_records"] = [dataclasses.asdict(r) for r in shot_records]
    write_summary_json(os.path.join(config.output_dir, "summary.json"), summary)
    _write_plots(config.output_dir, config, times, records, shot_records)

    if charge_drift > CHARGE_DRIFT_TOL or norm_drift > NORM_DRIFT_TOL:
        print(
            f"invariant violation: charge drift {charge_drift:.3e} "
            f"(tol {CHARGE_DRIFT_TOL:g}), norm drift {norm_drift:.3e} "
            f"(tol {NORM_DRIFT_TOL:g})",
            file=sys.stderr,
        )
        return EXIT_INVARIANT
    return EXIT_OK


def verify(max_n: int, stream=None) -> int:
    """Structural checks: bilinear identities, charge commutator, lowest
    eigenvalue on the filled state, and the N=8 transcription fixture."""
    stream = stream or sys.stdout
    if max_n > 10:
        raise ValueError(f"max_n must be <= 10, got {max_n}")
    if max_n < 4 or max_n % 2 != 0:
        raise ValueError(f"max_n must be an even integer >= 4, got {max_n}")
    failures = 0

    def report(name: str, ok: bool, detail: str) -> None:
        nonlocal failures
        if not ok:
            failures += 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=stream)

    for n in range(4, max_n + 1, 2):
        rep = verify_bilinears(n)
        report(
            f"bilinear identities N={n}",
            rep.max_dev() < 1e-12,
            f"max deviation {rep.max_dev():.3e}",
        )

    for n in range(4, max_n + 1, 2):
        params = ModelParams(n, 0.1, 1.0)
        residual = 0
        for t in (0.0, 0.7):
            residual = max(residual, len(commutator(total_sz(n), hamiltonian_at(params, t)).terms))
        report(
            f"charge commutator N={n}",
            residual == 0,
            f"residual terms {residual}",
        )

    for n in range(4, max_n + 1, 2):
        params = ModelParams(n, 0.1, 1.0)
        filled = basis_state(n, 0)
        value = expectation_pauli_sum(filled, hamiltonian_at(params, 0.3))
        expected = n * params.hubble / 4.0
        report(
            f"filled-state eigenvalue N={n}",
            abs(value - expected) < 1e-12,
            f"<H> = {value:.15g}, expected {expected:.15g}",
        )

    if max_n >= 8:
        h1, h2, h3 = n8_fixture()
        checks = (
            ("hopping vs -h1", build_hopping(8) == -1.0 * h1),
            ("charge vs h2/2", build_charge_term(8) == 0.5 * h2),
            ("mass vs h3", build_mass_term(8) == h3),
        )
        for name, ok in checks:
            report(f"N=8 fixture {name}", ok, "term-for-term exact" if ok else "mismatch")

    return EXIT_VERIFY if failures else EXIT_OK


def sweep(base_config: RunConfig, parameter: str, values: list) -> int:
    """Run one point per value; per-point seeds are base seed + index."""
    if parameter not in SWEEPABLE:
        raise ValueError(f"parameter must be one of {SWEEPABLE}, got {parameter!r}")
    if not values:
        raise ValueError("sweep values list is empty")
    points = []
    worst = EXIT_OK
    for index, value in enumerate(values):
        point_config = replace(
            base_config,
            **{parameter: value},
            seed=base_config.seed + index,
            output_dir=os.path.join(base_config.output_dir, f"{parameter}={value}"),
        )
        try:
            code = run(point_config)
            status = "ok" if code == EXIT_OK else "invariant-violation"
        except Exception as exc:  # per-point isolation; status lands in the manifest
            code = EXIT_IO if isinstance(exc, OSError) else EXIT_USAGE
            status = f"error: {exc}"
        worst = max(worst, code)
        points.append(
            {
                "value": value,
                "seed": point_config.seed,
                "output_dir": point_config.output_dir,
                "status": status,
                "exit_code": code,
            }
        )
    os.makedirs(base_config.output_dir, exist_ok=True)
    manifest = {
        "parameter": parameter,
        "base_config": dataclasses.asdict(base_config),
        "points": points,
    }
    write_summary_json(os.path.join(base_config.output_dir, "sweep_index.json"), manifest)
    return worst


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file (key = value) or a previous summary.json")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="start from a named preset")
    for f in fields(RunConfig):
        kind = {"int": int, "float": float}.get(f.type, str)
        parser.add_argument(f"--{f.name}", type=kind, default=None)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.preset:
        config = PRESETS[args.preset]()
    elif args.config:
        config = load_config(args.config)
    else:
        config = RunConfig()
    overrides = {
        f.name: getattr(args, f.name)
        for f in fields(RunConfig)
        if getattr(args, f.name) is not None
    }
    return replace(config, **overrides)


def _parse_sweep_values(parameter: str, raw: str) -> list:
    kind = int if parameter in ("trotter_steps", "shots", "initial_state_index") else float
    items = [s for s in (piece.strip() for piece in raw.split(",")) if s]
    return [kind(s) for s in items]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dsfermion", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evolve and write outputs")
    _add_config_flags(p_run)

    p_verify = sub.add_parser("verify", help="run structural identity checks")
    p_verify.add_argument("--max-n", type=int, default=8, dest="max_n")

    p_sweep = sub.add_parser("sweep", help="run one point per parameter value")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--parameter", required=True, choices=SWEEPABLE)
    p_sweep.add_argument("--values", required=True, help="comma-separated list")

    p_preset = sub.add_parser("preset", help="print a preset config")
    p_preset.add_argument("name", choices=sorted(PRESETS))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run(_config_from_args(args))
        if args.command == "verify":
            return verify(args.max_n)
        if args.command == "sweep":
            config = _config_from_args(args)
            return sweep(config, args.parameter, _parse_sweep_values(args.parameter, args.values))
        if args.command == "preset":
            sys.stdout.write(config_to_text(PRESETS[args.name]()))
            return EXIT_OK
    except ValueError as exc:
        print(f"dsfermion: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dsfermion: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NormDriftError as exc:
        print(f"dsfermion: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    raise AssertionError(f"unhandled command {args.command!r}")  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
