"""Command line front end: seeded, config-driven experiment runs.

Subcommands
-----------
modes     coupling profiles and per-mode coupling matrices as CSV
walk      averaged walk distributions (plain, phase, transmissivity, classical)
heat      occupation time series for the optical and nearest-neighbor models
shuttle   single-excitation schedule trajectory plus dissipative validation
validate  self-check suite (fast or full)

Every run writes its artifacts plus a ``run_manifest.json`` echoing the
resolved configuration and the SHA-256 digest of each output.  Identical
(config, seed) pairs reproduce byte-identical CSVs regardless of the thread
count.  Exit codes: 0 success, 2 configuration error, 3 numerical or
invariant failure, 4 I/O error.  The environment variable
``OMARRAY_MAX_THREADS`` caps the worker count.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .config import ResolvedConfig, load_config_file, resolve
from .effective import beta_spectrum
from .errors import ContractError, InstabilityError, IntegrationError, ParameterError
from .excitation import (AmplitudeState, Schedule, Segment, SWITCH_TOL,
                         dissipative_check, phonon_state, run_schedule)
from .gaussian import heat_experiment
from .modes import build_basis, coupling_matrix
from .runio import ManifestBuilder, write_csv
from .seeding import stream_seed
from .validate import run_validation
from .walks import WalkConfig, run_classical_walk, run_walk

_WALK_VARIANTS = ("none", "phase", "transmissivity", "classical")


def _out_path(rc: ResolvedConfig, name: str) -> str:
    os.makedirs(rc.output_dir, exist_ok=True)
    return os.path.join(rc.output_dir, name)


def cmd_modes(rc: ResolvedConfig, manifest: ManifestBuilder):
    basis = build_basis(rc.params.N)
    rows = [(l, j, basis.epsilon[l - 1, j - 1])
            for l in range(1, rc.params.N) for j in range(1, rc.params.N + 1)]
    path = _out_path(rc, "modes.csv")
    manifest.add_output(path, write_csv(path, ["l", "j", "epsilon"], rows))
    for l in range(1, rc.params.N):
        E = coupling_matrix(basis.epsilon[l - 1])
        rows = [(j, jp, E[j - 1, jp - 1])
                for j in range(1, rc.params.N + 1) for jp in range(1, rc.params.N + 1)]
        path = _out_path(rc, f"coupling_matrix_l{l:02d}.csv")
        manifest.add_output(path, write_csv(path, ["j", "jprime", "value"], rows))


def cmd_walk(rc: ResolvedConfig, manifest: ManifestBuilder):
    blk = rc.block
    basis = build_basis(rc.params.N)
    beta = beta_spectrum(rc.params, basis)
    manifest.resolved_defaults["beta_spectrum"] = [float(b) for b in beta.values]
    manifest.resolved_defaults["angle_distribution"] = "gaussian(mean=0, std=sigma)"
    manifest.resolved_defaults["variant_seeds"] = {
        v: stream_seed(rc.seed, i) for i, v in enumerate(_WALK_VARIANTS)}
    for i, variant in enumerate(_WALK_VARIANTS):
        seed = stream_seed(rc.seed, i)
        randomization = "none" if variant in ("none", "classical") else variant
        realizations = 1 if variant in ("none", "classical") else blk["realizations"]
        cfg = WalkConfig(N=rc.params.N, source=blk["source"], active_mode=blk["active_mode"],
                         time=blk["time"], randomization=randomization, sigma=blk["sigma"],
                         realizations=realizations, seed=seed)
        runner = run_classical_walk if variant == "classical" else run_walk
        kwargs = {} if variant == "classical" else {"threads": rc.threads}
        result = runner(cfg, basis, beta, **kwargs)
        path = _out_path(rc, f"walk_{variant}.csv")
        rows = [(j + 1, result.mean[j]) for j in range(rc.params.N)]
        manifest.add_output(path, write_csv(path, ["element", "population"], rows))
        if blk["dump_realizations"] and variant not in ("none", "classical"):
            path = _out_path(rc, f"walk_{variant}_realizations.csv")
            rows = [(k + 1, j + 1, result.realizations[k, j])
                    for k in range(result.realizations.shape[0]) for j in range(rc.params.N)]
            manifest.add_output(path, write_csv(path, ["realization", "element", "population"], rows))


def cmd_heat(rc: ResolvedConfig, manifest: ManifestBuilder):
    blk = rc.block
    basis = build_basis(rc.params.N)
    for model, fname in (("optical", "heat_optical.csv"),
                         ("nearest_neighbor", "heat_nearest_neighbor.csv")):
        result = heat_experiment(rc.params, basis, hot_element=blk["hot_element"],
                                 excess=blk["excess"], model=model,
                                 nn_strength=blk["nn_strength"], t_max=blk["t_max"],
                                 samples=blk["samples"])
        manifest.resolved_defaults[f"t_max_{model}"] = result.t_max
        rows = [(result.times[i], j + 1, result.occupations[i, j])
                for i in range(result.times.size) for j in range(rc.params.N)]
        path = _out_path(rc, fname)
        manifest.add_output(path, write_csv(path, ["time", "element", "occupation"], rows))


def _shuttle_setup(rc: ResolvedConfig):
    blk = rc.block
    N = rc.params.N
    omega_rabi = blk["omega_rabi"]
    if blk["protocol"] == "transfer_1_to_4":
        segments = (Segment(g=[omega_rabi, omega_rabi, 0.0], duration=np.pi / omega_rabi),
                    Segment(g=[0.0, 0.0, 0.0], duration=np.pi / omega_rabi))
        initial = phonon_state(N, 1)
        initial_element = 1
    elif blk["protocol"] == "polariton_hold":
        segments = (Segment(g=[omega_rabi, 0.0, 0.0], duration=np.pi / omega_rabi),
                    Segment(g=[omega_rabi, omega_rabi, 0.0], duration=2.0 * np.pi / omega_rabi))
        amp = np.zeros(2 * N - 1, dtype=complex)
        amp[N - 1] = 1 / np.sqrt(2.0)
        amp[2 * N - 2] = -1 / np.sqrt(2.0)
        initial = AmplitudeState(amp)
        initial_element = 1
    else:
        segments = tuple(Segment(g=s["g"], duration=s["duration"]) for s in blk["segments"])
        initial = phonon_state(N, blk["initial_element"])
        initial_element = blk["initial_element"]
    return Schedule(segments), initial, initial_element


def cmd_shuttle(rc: ResolvedConfig, manifest: ManifestBuilder):
    blk = rc.block
    N = rc.params.N
    schedule, initial, initial_element = _shuttle_setup(rc)
    total = float(schedule.switch_times()[-1])
    times = np.unique(np.concatenate([np.linspace(0.0, total, blk["samples"]),
                                      schedule.switch_times()]))
    result = run_schedule(schedule, initial, times)
    manifest.resolved_defaults["switch_tolerance"] = SWITCH_TOL
    manifest.resolved_defaults["switch_valid"] = [bool(b) for b in result.switch_valid]

    header = (["time", "segment", "switch_ok"]
              + [f"opt_{l}" for l in range(1, N)] + [f"mech_{j}" for j in range(1, N + 1)])
    rows = []
    for i, t in enumerate(result.times):
        # cumulative validity of every switch that has happened at or before t
        ok = bool(np.all(result.switch_valid[result.switch_times <= t + 1e-12]))
        pops = np.abs(result.amplitudes[i]) ** 2
        rows.append((t, int(result.segment_index[i]), ok, *pops))
    path = _out_path(rc, "shuttle_unitary.csv")
    manifest.add_output(path, write_csv(path, header, rows))

    header = ["segment", "t_start", "t_end"] + [f"g_abs_{l}" for l in range(1, N)]
    starts = np.concatenate([[0.0], schedule.switch_times()[:-1]])
    rows = [(k, starts[k], schedule.switch_times()[k], *np.abs(seg.g))
            for k, seg in enumerate(schedule.segments)]
    path = _out_path(rc, "shuttle_schedule.csv")
    manifest.add_output(path, write_csv(path, header, rows))

    if blk["dissipative"]:
        report = dissipative_check(schedule, initial_element, rc.params, samples=blk["samples"])
        header = (["time"] + [f"occ_{j}" for j in range(1, N + 1)]
                  + [f"pred_{j}" for j in range(1, N + 1)] + ["deviation"])
        rows = [(report.times[i], *report.measured[i], *report.predicted[i], report.deviation[i])
                for i in range(report.times.size)]
        path = _out_path(rc, "shuttle_dissipative.csv")
        manifest.add_output(path, write_csv(path, header, rows))
        manifest.resolved_defaults["dissipative_max_deviation"] = report.max_deviation
        manifest.resolved_defaults["counter_rotating_flag"] = bool(report.counter_rotating_flag)


def cmd_validate(rc: ResolvedConfig, manifest: ManifestBuilder) -> int:
    checks = run_validation(rc.block["level"], seed=rc.seed, threads=rc.threads)
    for c in checks:
        print(c.line())
    rows = [(c.name, c.value, c.comparison, c.threshold, c.passed) for c in checks]
    path = _out_path(rc, "validate_report.csv")
    manifest.add_output(path, write_csv(
        path, ["check", "measured", "comparison", "threshold", "passed"], rows))
    failures = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failures)}/{len(checks)} checks passed ({rc.block['level']} level)")
    return 3 if failures else 0


_RUNNERS = {"modes": cmd_modes, "walk": cmd_walk, "heat": cmd_heat,
            "shuttle": cmd_shuttle, "validate": cmd_validate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omarray",
        description="Seeded experiments on collective phonon dynamics in optomechanical arrays.")
    parser.add_argument("--version", action="version", version=f"omarray {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", metavar="PATH", help="JSON configuration file")
        p.add_argument("--seed", type=int, help="64-bit master seed (overrides config)")
        p.add_argument("--out", metavar="DIR", help="output directory (overrides config)")
        p.add_argument("--threads", type=int, help="worker threads (overrides config)")
        if name == "validate":
            p.add_argument("--level", choices=("fast", "full"), help="validation depth")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_doc = load_config_file(args.config) if args.config else None
        rc = resolve(args.experiment, file_doc, seed=args.seed, output_dir=args.out,
                     threads=args.threads, level=getattr(args, "level", None))
        cap = os.environ.get("OMARRAY_MAX_THREADS")
        if cap is not None:
            try:
                rc.threads = max(1, min(rc.threads, int(cap)))
            except ValueError as exc:
                raise ParameterError(f"OMARRAY_MAX_THREADS must be an integer, got {cap!r}") from exc
        manifest = ManifestBuilder(experiment=rc.experiment, version=__version__,
                                   config=rc.echo(), overrides={
                                       k: v for k, v in rc.provenance.items() if v == "flag"})
        status = _RUNNERS[rc.experiment](rc, manifest) or 0
        manifest.write(_out_path(rc, "run_manifest.json"))
        return status
    except ParameterError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (ContractError, InstabilityError, IntegrationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
