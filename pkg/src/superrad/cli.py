"""Command-line front end: ``superrad <subcommand> CONFIG [flags]``.

Exit status is 0 on success, 1 for invalid input and 2 when a numerical
contract (truncation, tolerance, integrator) fails.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import atomic, dynamics, plots, preparation, validation
from .collective import BasisIndex, CouplingConfig
from .config import load_config
from .errors import BasisSizeError, NoClosedFormError, NumericalContractError, TruncationError, ValidationError
from .oracle import evolve_reduced, prepare_density
from .series import TimeSeries, format_csv, format_table, write_text
from .states import DickeSuperposition, MultimodeFock

__all__ = ["main", "build_parser"]


def _need_state(run):
    if run.state is None:
        raise ValidationError(f"{run.source}: this subcommand needs a [state] section")
    return run.state


def _emit(run, suffix, text):
    os.makedirs(run.output_dir, exist_ok=True)
    path = run.output_path(suffix)
    write_text(text, path)
    print(f"wrote {path}")
    return path


def _emit_series(run, name, series, title="", ylabel=""):
    _emit(run, f"{name}.csv", format_csv(series))
    if run.plots:
        curves = {}
        for label, values in series.channels.items():
            if np.iscomplexobj(values):
                curves[f"{label} re"] = values.real
                curves[f"{label} im"] = values.imag
            else:
                curves[label] = values
        _emit(run, f"{name}.svg", plots.line_plot_svg(series.tau, curves, title, "Gamma t", ylabel))


def _oracle_quanta(run, spec):
    if run.oracle_max_quanta is not None:
        return run.oracle_max_quanta
    if isinstance(spec, DickeSuperposition):
        return max(idx.total for _, idx in spec.terms)
    if isinstance(spec, MultimodeFock):
        return sum(spec.occupations)
    raise ValidationError("set [tolerances] oracle_max_quanta to run this state family on the oracle")


def _parse_range(text, flag):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ValidationError(f"{flag} must look like start:stop:count, got {text!r}") from None
    if count < 1 or (count > 1 and hi <= lo):
        raise ValidationError(f"{flag}: need count >= 1 and stop > start")
    return np.linspace(lo, hi, count)


# ---------------------------------------------------------------- subcommands


def cmd_classify(run, args):
    spec = _need_state(run)
    print(dynamics.classify(spec, run.coupling, run.epsilon))
    return 0


def cmd_evolve(run, args):
    spec = _need_state(run)
    cfg = run.coupling
    tau = run.tau
    series = dynamics.mrl_series(spec, cfg, tau)
    if args.oracle:
        rho = prepare_density(spec, cfg, _oracle_quanta(run, spec), tail_tol=run.tail_tol)
        rec = evolve_reduced(rho, cfg, tau / cfg.gamma)
        for key in ("M", "R", "L"):
            series.add(f"oracle_{key}", rec[key])
        series.add("oracle_intensity", -np.gradient(rec["M"], tau, edge_order=2))
    _emit_series(run, "evolve", series, "Collective decay", "quanta / intensity (Gamma)")
    return 0


def cmd_populations(run, args):
    spec = _need_state(run)
    if not isinstance(spec, DickeSuperposition):
        raise ValidationError(f"populations need a Dicke superposition, not family '{spec.family}'")
    pops = dynamics.ladder_populations(spec, run.coupling, run.tau)
    _emit_series(run, "populations", pops.to_series(run.coupling.gamma), "Rung populations", "population")
    return 0


def cmd_correlations(run, args):
    spec = _need_state(run)
    series = dynamics.two_time_correlation(spec, run.coupling, args.i, args.j, run.tau)
    _emit_series(run, f"correlation_{args.i}_{args.j}", series, "Two-time correlation", "c_ij(t, 0)")
    return 0


def cmd_compare_atomic(run, args):
    n = args.n
    if n < 1:
        raise ValidationError("--n must be at least 1")
    tau = run.tau
    cfg = CouplingConfig.uniform(n)
    dicke = DickeSuperposition.single(BasisIndex.ground(n, n))
    boson = dynamics.intensity_series(dicke, cfg, tau)["intensity"]
    pops = atomic.atomic_populations(n, tau)
    series = TimeSeries(tau, {"bosonic_intensity": boson, "atomic_intensity": pops.intensity()})
    _emit_series(run, "compare_atomic", series, f"N = {n}: oscillators vs atoms", "intensity (Gamma)")
    _emit_series(run, "atomic_populations", pops.to_series(), "Atomic populations, n photons emitted", "population")
    boson_pops = dynamics.ladder_populations(dicke, cfg, tau).to_series()
    _emit_series(run, "bosonic_populations", boson_pops, "Bosonic Dicke populations", "population")
    rows = [(float(k),) + atomic.initial_intensity_comparison(n, k) for k in range(n + 1)]
    _emit(run, "initial_intensity.csv", format_table(["K", "atomic", "bosonic"], rows))
    return 0


def cmd_sweep_fraction(run, args):
    alphas = _parse_range(args.alpha_range, "--alpha-range")
    rs = _parse_range(args.r_range, "--r-range")
    closed, piped = dynamics.sweep_fraction(run.coupling, alphas, rs)
    rows = []
    for i, a in enumerate(alphas):
        for j, r in enumerate(rs):
            rows.append((a, r, piped[i, j], closed[i, j]))
    _emit(run, "sweep_fraction.csv", format_table(["alpha", "r", "F", "F_closed"], rows))
    if run.plots:
        svg = plots.heatmap_svg(alphas, rs, piped, "Dark fraction, product squeezed coherent", "alpha", "r")
        _emit(run, "sweep_fraction.svg", svg)
    return 0


def cmd_waveguide(run, args):
    cfg = run.coupling
    q = args.input_guide
    if not 1 <= q <= cfg.n_modes:
        raise ValidationError(f"--input-guide must lie in 1..{cfg.n_modes}")
    jt = np.linspace(0.0, run.t_max, run.samples)
    frac = np.array([preparation.waveguide_dark_fraction(q, args.coupling, t / args.coupling, cfg) for t in jt])
    _, fn = dynamics.dark_fraction(MultimodeFock(tuple(int(k == q - 1) for k in range(cfg.n_modes))), cfg)
    rows = [(t, f, fn) for t, f in zip(jt, frac)]
    _emit(run, "waveguide.csv", format_table(["t_J", "F", "F_N"], rows))
    if run.plots:
        svg = plots.line_plot_svg(jt, {"F": frac, "F_N": np.full_like(jt, fn)}, f"Input guide {q}", "J t", "F")
        _emit(run, "waveguide.svg", svg)
    return 0


def _parse_target(text):
    try:
        c = np.array([complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()])
    except ValueError:
        raise ValidationError(f"--target must be comma-separated complex numbers, got {text!r}") from None
    if c.size == 0:
        raise ValidationError("--target is empty")
    return c


def cmd_law_eberly(run, args):
    target = _parse_target(args.target)
    seq = preparation.law_eberly_synthesize(target, run.coupling.couplings)
    result = preparation.law_eberly_simulate(seq, max_quanta=max(target.size, seq.count(preparation.JaynesCummings) + 1))
    fid = preparation.law_eberly_fidelity(target, seq)
    _emit(run, "schedule.txt", seq.to_text())
    amps = result.mode_amplitudes
    rows = [(float(n), c.real, c.imag, amps[n].real, amps[n].imag) for n, c in enumerate(target)]
    _emit(run, "law_eberly.csv", format_table(["n", "target_re", "target_im", "result_re", "result_im"], rows))
    print(f"steps={len(seq)} fidelity={fid:.15f}")
    if fid < 1 - 1e-8:
        raise NumericalContractError(f"tolerance breach: round-trip fidelity {fid:.3e} below 1 - 1e-8")
    return 0


def cmd_oracle_check(run, args):
    results = validation.run_checks(run, skip_slow=args.skip_slow)
    print(validation.format_table(results))
    rows = [(r.name, "pass" if r.passed else "fail", r.value, r.tolerance) for r in results]
    _emit(run, "oracle_check.csv", format_table(["check", "status", "value", "tolerance"], rows))
    failed = [r.name for r in results if not r.passed]
    if failed:
        raise NumericalContractError(f"tolerance breach: {len(failed)} check(s) failed: {', '.join(failed)}")
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "evolve": cmd_evolve,
    "populations": cmd_populations,
    "correlations": cmd_correlations,
    "compare-atomic": cmd_compare_atomic,
    "sweep-fraction": cmd_sweep_fraction,
    "waveguide": cmd_waveguide,
    "law-eberly": cmd_law_eberly,
    "oracle-check": cmd_oracle_check,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="superrad", description="Superradiance of star-coupled oscillators.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="run configuration file")
        return p

    add("classify", "print the radiance class, F and F_N")
    p = add("evolve", "intensity and M/R/L series")
    p.add_argument("--oracle", action="store_true", help="overlay a brute-force master-equation run")
    add("populations", "rung populations of a Dicke superposition")
    p = add("correlations", "two-time correlation c_ij(t, 0)")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p = add("compare-atomic", "oscillators vs two-level atoms")
    p.add_argument("--n", type=int, required=True, help="number of emitters, all excited")
    p = add("sweep-fraction", "dark fraction of uniform product squeezed coherent states")
    p.add_argument("--alpha-range", default="0:2:41", help="start:stop:count")
    p.add_argument("--r-range", default="0:2:41", help="start:stop:count")
    p = add("waveguide", "dark fraction after coupled-waveguide propagation")
    p.add_argument("--input-guide", type=int, required=True)
    p.add_argument("--coupling", type=float, default=1.0, help="guide coupling J")
    p = add("law-eberly", "synthesize a pulse schedule for sum c_n (d^dag)^n/sqrt(n!) |0>")
    p.add_argument("--target", required=True, help="comma-separated coefficients c_0,c_1,...")
    p = add("oracle-check", "run the invariant suite")
    p.add_argument("--skip-slow", action="store_true", help="skip the ancilla adiabatic-elimination run")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        run = load_config(args.config)
        return COMMANDS[args.command](run, args)
    except NoClosedFormError as exc:
        print(f"error: unsupported state family: {exc}", file=sys.stderr)
        return 1
    except (ValidationError, BasisSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TruncationError as exc:
        print(f"error: truncation leak: {exc}", file=sys.stderr)
        return 2
    except NumericalContractError as exc:
        msg = str(exc)
        print(f"error: {msg if msg.startswith('tolerance breach') else 'tolerance breach: ' + msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
