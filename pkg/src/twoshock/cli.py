"""Command-line surface: configuration, scenario execution, data export.

Subcommands: profile | riemann | simulate | decompose | verify.
Exit codes: 0 success, 1 check failure, 2 invalid configuration,
3 runtime abort (volume positivity lost).

Configs are flat ``key = value`` text files; every key is typed and
documented in CONFIG_SCHEMA (units in parentheses).  All outputs embed the
fully resolved configuration, so results are self-describing, and repeated
runs with the same config produce byte-identical files.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import functionals as fn
from .pde import PositivityError, read_checkpoint, write_checkpoint
from .verify import (Scenario, SweepSpec, check_lemma_profiles,
                     check_separation_lemmas, check_theorem_behavior,
                     negative_control)

__all__ = ["CONFIG_SCHEMA", "load_config", "resolve_scenario", "main"]

_AUTO = ("auto", "")

# key: (type, default, documentation)
CONFIG_SCHEMA = {
    "gamma": (float, 5.0 / 3.0, "adiabatic exponent (dimensionless, > 1)"),
    "v_plus": (float, 1.0, "right far-field specific volume (volume units)"),
    "u_plus": (float, 0.0, "right far-field velocity (velocity units)"),
    "delta1": (float, 0.1, "1-shock strength, pressure gap (pressure units)"),
    "delta2": (float, 0.1, "2-shock strength, pressure gap (pressure units)"),
    "lam": (float, None, "weight amplitude; auto = min(sqrt(delta_i))/2"),
    "dx": (float, None, "grid spacing (length units); auto = 0.02/max(delta_i)"),
    "T": (float, None, "horizon (time units); auto = 50/min(delta_i)"),
    "cfl": (float, 0.4, "time-step safety factor in (0, 0.55]"),
    "margin": (float, None,
               "domain margin beyond swept supports; auto = 20/min(delta_i)"),
    "pert_shape": (str, "gaussian", "initial v-perturbation: zero|gaussian|bump"),
    "pert_amplitude": (float, 0.01, "v-perturbation amplitude (volume units)"),
    "pert_center": (float, 0.0, "perturbation center (length units)"),
    "pert_width": (float, 5.0, "perturbation width (length units)"),
    "pert_u_amplitude": (float, 0.0, "u-perturbation amplitude (velocity units)"),
    "frame_dt": (float, None,
                 "diagnostics frame spacing (time units); auto = max(0.5, 2.5 dx)"),
    "freeze_shifts": (bool, False, "hold both shifts at zero"),
    "profile_tol": (float, 1e-6,
                    "profile endpoint tolerance, fraction of the strength"),
    "seed": (int, 0, "seed echoed into outputs (sampling campaigns only)"),
    "checkpoint_every": (int, 0, "write a checkpoint every N frames (0 = final only)"),
    "resume_from": (str, "", "checkpoint file to resume a simulation from"),
    "verify_pairs": (str, "0.1:0.1,0.2:0.02",
                     "sweep strength pairs as d1:d2,d1:d2,... (pressure units)"),
    "verify_gammas": (str, "1.6666666666666667", "sweep gammas, comma separated"),
    "verify_run_pairs": (str, "0.1:0.1",
                         "pairs actually simulated by the verify subcommand"),
    "verify_horizon_units": (float, 15.0, "run horizon in units of 1/min(delta_i)"),
    "verify_dx": (float, 0.25, "grid spacing for verify runs (length units)"),
    "verify_drop_factor": (float, 2.0,
                           "required peak-to-final drop of the stability proxies"),
    "verify_windows": (int, 10, "number of windows for the trend proxies"),
}


def _coerce(key, raw):
    kind, default, _doc = CONFIG_SCHEMA[key]
    raw = raw.strip()
    if raw.lower() in _AUTO:
        return default
    if kind is bool:
        if raw.lower() in ("true", "1", "yes", "on"):
            return True
        if raw.lower() in ("false", "0", "no", "off"):
            return False
        raise ValueError(f"config key {key}: expected a boolean, got {raw!r}")
    try:
        return kind(raw)
    except ValueError as exc:
        raise ValueError(f"config key {key}: {exc}") from None


def load_config(path: str | None) -> dict:
    """Read a flat key = value config file; unknown keys are errors."""
    values = {key: spec[1] for key, spec in CONFIG_SCHEMA.items()}
    if path is None:
        return values
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            if "=" not in body:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, raw = body.partition("=")
            key = key.strip()
            if key not in CONFIG_SCHEMA:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            values[key] = _coerce(key, raw)
    return values


def config_echo(values: dict) -> list:
    lines = []
    for key in CONFIG_SCHEMA:
        val = values.get(key)
        lines.append(f"{key} = {'auto' if val is None else val}")
    return lines


def resolve_scenario(values: dict, resolution_scale: float = 1.0) -> Scenario:
    sc = Scenario(
        gamma=values["gamma"], v_plus=values["v_plus"], u_plus=values["u_plus"],
        delta1=values["delta1"], delta2=values["delta2"], lam=values["lam"],
        dx=values["dx"], T=values["T"], cfl=values["cfl"],
        amplitude=values["pert_amplitude"], width=values["pert_width"],
        center=values["pert_center"], u_amplitude=values["pert_u_amplitude"],
        shape=values["pert_shape"], frame_dt=values["frame_dt"],
        freeze_shifts=values["freeze_shifts"], margin=values["margin"],
        profile_tol=values["profile_tol"], seed=values["seed"]).resolved()
    if resolution_scale != 1.0:
        sc.dx /= resolution_scale
    return sc


def _parse_pairs(raw: str):
    pairs = []
    for chunk in raw.split(","):
        d1, _, d2 = chunk.strip().partition(":")
        pairs.append((float(d1), float(d2)))
    return tuple(pairs)


# ---------------------------------------------------------------------------
# subcommands

def cmd_riemann(values, out_dir, scale):
    sc = resolve_scenario(values, scale)
    _, sim, _ = sc.build()
    cfg = sim.cw.config
    consts = sim.consts
    lines = ["# two-shock Riemann configuration"]
    lines += [f"# {line}" for line in config_echo(values)]
    lines += [
        f"v_minus = {cfg.v_minus:.17g}", f"u_minus = {cfg.u_minus:.17g}",
        f"v_m = {cfg.v_m:.17g}", f"u_m = {cfg.u_m:.17g}",
        f"v_plus = {cfg.v_plus:.17g}", f"u_plus = {cfg.u_plus:.17g}",
        f"sigma1 = {cfg.sigma1:.17g}", f"sigma2 = {cfg.sigma2:.17g}",
        f"delta1 = {cfg.delta1:.17g}", f"delta2 = {cfg.delta2:.17g}",
        f"rh_residuals = {' '.join(f'{r:.3e}' for r in cfg.rh_residuals())}",
        f"sigma_m = {consts.sigma_m:.17g}", f"alpha_m = {consts.alpha_m:.17g}",
        f"drift_gain = {consts.M:.17g}",
    ]
    path = os.path.join(out_dir, "riemann.txt")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0


def cmd_profile(values, out_dir, scale):
    sc = resolve_scenario(values, scale)
    _, sim, _ = sc.build()
    for family in (1, 2):
        prof = sim.cw.profile(family)
        path = os.path.join(out_dir, f"profile_family{family}.dat")
        with open(path, "w") as fh:
            fh.write(f"# viscous shock profile, family {family}\n")
            for line in config_echo(values):
                fh.write(f"# {line}\n")
            fh.write(f"# sigma = {prof.sigma:.17g}\n")
            fh.write("# columns: xi v dv u h\n")
            xi = prof.xi_table
            v, dv = prof.v(xi), prof.dv(xi)
            u, h = prof.u(xi), prof.h(xi)
            for k in range(xi.size):
                fh.write(f"{xi[k]:.17g} {v[k]:.17g} {dv[k]:.17g} "
                         f"{u[k]:.17g} {h[k]:.17g}\n")
    print(f"wrote profile tables to {out_dir}")
    return 0


def _simulate(values, out_dir, scale):
    sc = resolve_scenario(values, scale)
    _, sim, pert = sc.build()
    echo = config_echo(values) + [
        f"resolved_dx = {sim.grid.dx!r}", f"resolved_T = {sc.T!r}",
        f"resolved_lam = {sc.lam!r}", f"grid_n = {sim.grid.n}",
        f"grid_x_left = {sim.grid.x_left!r}",
    ]
    resume_path = values["resume_from"]
    if resume_path:
        _, state, dt, start_step = read_checkpoint(resume_path)
        echo.append(f"resumed_from = {resume_path}")
    else:
        state = sim.initial_state(pert)
        dt = sim.dt_policy(state)
        start_step = 0
    stride = max(1, int(round(sc.frame_dt / dt)))
    echo += [f"resolved_dt = {dt!r}", f"frame_stride = {stride}"]
    frames = []
    ckpt_every = values["checkpoint_every"]

    def sink(st, step):
        frames.append(fn.compute_frame(sim, st))
        if ckpt_every and len(frames) % ckpt_every == 0:
            write_checkpoint(os.path.join(out_dir, f"checkpoint_{step:08d}.txt"),
                             sim, st, dt, step)

    run = sim.run(state, sc.T, stride=stride, sink=sink, dt=dt,
                  start_step=start_step)
    if len(frames) >= 3:
        fn.identity_audit(frames, frame_dt=stride * dt, fill=True)
    fn.write_frames_csv(os.path.join(out_dir, "frames.csv"), frames, echo)
    write_checkpoint(os.path.join(out_dir, "checkpoint_final.txt"),
                     sim, run.state, dt, start_step + run.n_steps)
    summary = echo + [
        f"n_steps = {run.n_steps}", f"frames = {len(frames)}",
        f"mass_defect = {run.mass_change - run.mass_flux_integral:.6e}",
        f"momentum_defect = {run.momentum_change - run.momentum_flux_integral:.6e}",
    ]
    for key, val in sorted(sim.perturbation_norms(run.state).items()):
        summary.append(f"final_{key} = {val:.6e}")
    with open(os.path.join(out_dir, "run_summary.txt"), "w") as fh:
        fh.write("\n".join(summary) + "\n")
    return run, frames


def cmd_simulate(values, out_dir, scale):
    _simulate(values, out_dir, scale)
    print(f"wrote frames.csv and checkpoints to {out_dir}")
    return 0


def cmd_decompose(values, out_dir, scale):
    frames_path = os.path.join(out_dir, "frames.csv")
    if not os.path.exists(frames_path):
        _simulate(values, out_dir, scale)
    header, cols = fn.read_frames_csv(frames_path)
    rel = cols["audit_rel"]
    finite = np.isfinite(rel)
    lines = ["# entropy-production decomposition audit"]
    lines += [f"# {line}" for line in header]
    if np.any(finite):
        lines += [
            f"audit_rel_median = {float(np.median(rel[finite])):.6e}",
            f"audit_rel_max = {float(np.max(rel[finite])):.6e}",
        ]
    lines += [
        f"ysum_residual_max = {float(np.nanmax(np.abs(cols['ysum_residual1']) + np.abs(cols['ysum_residual2']))):.6e}",
        f"recomb_residual_max = {float(np.nanmax(np.abs(cols['recomb_residual']))):.6e}",
        f"frames = {rel.size}",
    ]
    with open(os.path.join(out_dir, "audit.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0


def cmd_verify(values, out_dir, scale):
    gammas = tuple(float(g) for g in values["verify_gammas"].split(","))
    sweep = SweepSpec(gammas=gammas, delta_pairs=_parse_pairs(values["verify_pairs"]),
                      amplitudes=(values["pert_amplitude"],),
                      horizons=(values["verify_horizon_units"],),
                      resolutions=(values["verify_dx"],), seed=values["seed"])
    reports = [check_lemma_profiles(sweep)]
    for d1, d2 in _parse_pairs(values["verify_run_pairs"]):
        sc = Scenario(
            gamma=gammas[0], delta1=d1, delta2=d2,
            amplitude=values["pert_amplitude"], width=values["pert_width"],
            dx=values["verify_dx"] / scale,
            T=values["verify_horizon_units"] / min(d1, d2),
            frame_dt=max(1.0, 2.0 / min(d1, d2) / 50.0)).resolved()
        result = sc.run()
        reports.append(check_separation_lemmas(result))
        reports.append(check_theorem_behavior(
            result, drop_factor=values["verify_drop_factor"],
            n_windows=values["verify_windows"]))
        reports.append(negative_control(result.sim.cw, T=sc.T / 4.0))
    text = "\n\n".join(r.to_text() for r in reports)
    payload = "[\n" + ",\n".join(r.to_json() for r in reports) + "\n]\n"
    with open(os.path.join(out_dir, "verify_report.json"), "w") as fh:
        fh.write(payload)
    with open(os.path.join(out_dir, "verify_report.txt"), "w") as fh:
        fh.write(text + "\n")
    print(text)
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="twoshock",
        description="Composite two-shock stability simulator and verifier")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("profile", "integrate and dump the two viscous shock profiles"),
            ("riemann", "construct and print the two-shock Riemann data"),
            ("simulate", "run the initial-value problem with diagnostics"),
            ("decompose", "summarize the entropy-production audit of a run"),
            ("verify", "run the property-check campaigns")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--resolution-scale", type=float, default=1.0,
                       help="multiply the spatial resolution by this factor")
        p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
    args = parser.parse_args(argv)

    try:
        values = load_config(args.config)
        if args.seed is not None:
            values["seed"] = args.seed
        if args.resolution_scale <= 0.0:
            raise ValueError("--resolution-scale must be positive")
    except (ValueError, OSError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2

    os.makedirs(args.out, exist_ok=True)
    handler = {"profile": cmd_profile, "riemann": cmd_riemann,
               "simulate": cmd_simulate, "decompose": cmd_decompose,
               "verify": cmd_verify}[args.command]
    try:
        return handler(values, args.out, args.resolution_scale)
    except PositivityError as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
