"""Command-line front end.

Subcommands: ``dressed``, ``rates``, ``intensity``, ``chirp``, ``sweep``.
Output is CSV or JSON, byte-identical for identical input.  Exit codes:
0 ok, 2 configuration error, 3 atom cap exceeded, 4 numerical contract violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .basis import SizeCapError
from .config import DEFAULTS, PRESETS, ConfigError, ScenarioConfig
from .coupling import DIPOLE_LINEWIDTH_ASSUMPTION, DomainError, FarFieldWarning, beta
from .dressed import NumericalContractError, dress
from .dynamics import comparison_traces, evolve_network, traces_to_csv
from .rates import extract_branches, transition_rates
from .spectrum import ba_scenario_sweep, chirp_schedule, sweep_metadata, sweep_to_csv, SWEEP_COLUMNS

EXIT_OK, EXIT_CONFIG, EXIT_CAP, EXIT_NUMERIC = 0, 2, 3, 4

CONFIG_HELP = f"""\
configuration (JSON, unknown keys rejected):
  samples   list of {{"atoms": int, "phase": rad}} or {{"atoms": int, "position": m}};
            default two two-atom samples at -kr/2, +kr/2
  coupling  "geometry" (default) or "uniform"
  physical  wavelength_nm | omega_rad_s (omit both for dimensionless units),
            linewidth_per_s | dipole_Cm, lambda_coupling, kr | separation_m,
            linewidth_convention ("angular" or "cycles")
            defaults: {json.dumps(DEFAULTS["physical"])}
  run       t_max_tausp, dt_out_tausp, mode (chain|network)
            defaults: {json.dumps(DEFAULTS["run"])}
  sweep     kr_min, kr_max, steps, n_samples
            defaults: {json.dumps(DEFAULTS["sweep"])}
  output    format (csv|json), path
presets: {", ".join(PRESETS)}
"""


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _meta(cfg: ScenarioConfig) -> dict:
    sc = cfg.scenario()
    meta = {
        "kr": sc.kr,
        "units": sc.units,
        "beta": beta(sc),
        "beta_unit": "rad/s" if sc.units == "si" else "Gamma_0",
        "far_field": sc.far_field,
    }
    if sc.units == "si" and sc.dipole is None:
        meta["assumption"] = DIPOLE_LINEWIDTH_ASSUMPTION
    return meta


def cmd_dressed(cfg: ScenarioConfig, args) -> str:
    system = dress(cfg.compound(), cfg.scenario())
    if args.format == "json":
        records = [s.as_record(system.spec) for s in system]
        return _dumps({"meta": _meta(cfg), "states": records})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "sector", "shift_over_hbeta", "label", "symmetry", "amplitudes"])
    for s in system:
        amps = " ".join(
            f"{k.label(system.spec)}:{z.real!r}:{z.imag!r}" for k, z in zip(s.kets, s.amplitudes.tolist())
        )
        w.writerow([s.id, s.p, repr(s.shift), s.label, s.symmetry, amps])
    return buf.getvalue()


def cmd_rates(cfg: ScenarioConfig, args) -> str:
    table = transition_rates(dress(cfg.compound(), cfg.scenario()))
    if args.format == "json":
        rows = [
            {
                "from": t.source,
                "to": t.target,
                "rate_over_Gamma": t.rate if t.allowed else 0.0,
                "rate_over_two_atom": t.rate_over_two_atom if t.allowed else 0.0,
                "offset_over_beta": t.offset,
                "allowed": t.allowed,
            }
            for t in table
            if t.allowed or args.include_forbidden
        ]
        return _dumps({"meta": _meta(cfg), "transitions": rows})
    return table.to_csv(include_forbidden=args.include_forbidden)


def cmd_intensity(cfg: ScenarioConfig, args) -> str:
    run = cfg.run
    mode = args.mode or run["mode"]
    t_max, dt = run["t_max_tausp"], run["dt_out_tausp"]
    traces = comparison_traces(t_max, dt, kr=cfg.reference_kr())
    network = None
    if mode == "network":
        table = transition_rates(dress(cfg.compound(), cfg.scenario()))
        network = evolve_network(table, t_max, dt)
        traces["network"] = network
    integrals = {name: tr.emitted_photons() for name, tr in traces.items()}

    if args.format == "json":
        doc = {
            "meta": {"mode": mode, "time_unit": "tau_sp", "intensity_unit": "I0"},
            "t_over_tausp": traces["main"].times.tolist(),
            "curves": {name: tr.intensity.tolist() for name, tr in traces.items()},
        }
        if network is not None:
            doc["populations"] = {
                sid: network.populations[:, n].tolist() for n, sid in enumerate(network.states)
            }
        if args.integral_check:
            doc["integrals_hbar_omega"] = integrals
        return _dumps(doc)

    text = traces_to_csv(traces, network)
    if args.integral_check:
        row = ["integral_hbar_omega"] + [repr(integrals[n]) for n in traces]
        if network is not None:
            row += [""] * len(network.states)
        text += ",".join(row) + "\n"
    return text


def cmd_chirp(cfg: ScenarioConfig, args) -> str:
    system = dress(cfg.compound(), cfg.scenario())
    chains = extract_branches(transition_rates(system))
    if args.branch:
        chains = [c for c in chains if c.name == args.branch]
        if not chains:
            raise ConfigError(f"no branch named {args.branch!r}")
    schedules = [chirp_schedule(c, system) for c in chains]
    if args.format == "json":
        return _dumps(
            {
                "meta": _meta(cfg),
                "branches": [
                    {
                        "branch": s.branch,
                        "states": list(c.states),
                        "offsets_over_beta": s.offsets.tolist(),
                        "omega_rad_s": [st.frequency for st in s.steps],
                    }
                    for s, c in zip(schedules, chains)
                ],
            }
        )
    parts = [s.to_csv() for s in schedules]
    header = parts[0].split("\n", 1)[0] + "\n"
    return header + "".join(p.split("\n", 1)[1] for p in parts)


def cmd_sweep(cfg: ScenarioConfig, args) -> str:
    sw = cfg.sweep
    phys = cfg.physical
    n = args.N if args.N is not None else sw["n_samples"]
    wavelength = phys.get("wavelength_nm", 493.0) * 1e-9
    rows = ba_scenario_sweep(
        args.kr_min if args.kr_min is not None else sw["kr_min"],
        args.kr_max if args.kr_max is not None else sw["kr_max"],
        args.steps if args.steps is not None else sw["steps"],
        linewidth=phys.get("linewidth_per_s", 1e8),
        wavelength=wavelength,
        n_samples=n,
        linewidth_convention=phys["linewidth_convention"],
    )
    if args.format == "json":
        meta = sweep_metadata(phys["linewidth_convention"])
        meta["n_samples"] = n
        return _dumps({"meta": meta, "columns": list(SWEEP_COLUMNS), "rows": rows})
    return sweep_to_csv(rows)


COMMANDS = {
    "dressed": (cmd_dressed, "per-sector dressed energies and amplitudes"),
    "rates": (cmd_rates, "transition-rate table between dressed states"),
    "intensity": (cmd_intensity, "cascade intensity curves"),
    "chirp": (cmd_chirp, "photon-frequency offsets along each cascade branch"),
    "sweep": (cmd_sweep, "frequency excursion against kr (Ba+ scenario)"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON scenario file")
    common.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")
    common.add_argument("--format", choices=["csv", "json"], help="output format (default csv)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument(
        "--seedless", action="store_true",
        help="check that no random number generator state is touched",
    )

    parser = argparse.ArgumentParser(
        prog="compound-sr",
        description="Dressed states, rates, intensities and chirps of coupled superradiant samples.",
        epilog=CONFIG_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_, epilog=CONFIG_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        if name == "rates":
            p.add_argument("--include-forbidden", action="store_true",
                           help="also list forbidden pairs with rate 0")
        if name == "intensity":
            p.add_argument("--mode", choices=["chain", "network"])
            p.add_argument("--integral-check", action="store_true",
                           help="append the integral of I dt per curve")
        if name == "chirp":
            p.add_argument("--branch", help="only this branch (main, secondary, antisymmetric)")
        if name == "sweep":
            p.add_argument("--N", type=int, help="number of interacting two-atom samples")
            p.add_argument("--kr-min", type=float)
            p.add_argument("--kr-max", type=float)
            p.add_argument("--steps", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    rng_state = np.random.get_state()[1].copy() if args.seedless else None
    try:
        cfg = ScenarioConfig.load(args.config, args.preset)
        args.format = args.format or cfg.output["format"]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", FarFieldWarning)
            text = COMMANDS[args.command][0](cfg, args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except NumericalContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if rng_state is not None and not np.array_equal(rng_state, np.random.get_state()[1]):
        print("error: random number generator state changed", file=sys.stderr)
        return EXIT_NUMERIC

    out = args.out or cfg.output.get("path")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
