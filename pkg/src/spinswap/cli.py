"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import metrics
from .checkpoints import checkpoint_deviations
from .circuits import GateSpec, Mode, run_circuit, verify_gate
from .emitter import EmitterParams, LeakConvention
from .hilbert import GateKind, SpinPreparation

OUTPUT_DIR_ENV = "SPINSWAP_OUTPUT_DIR"
CHECKPOINT_TOL = 1e-12


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def parse_m_list(text: str) -> list[int]:
    """``"2"``, ``"1,3,5"`` or an inclusive range ``"1..4"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad m specification {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError(f"m must be >= 1, got {text!r}")
    return values


def parse_m(text: str) -> int:
    values = parse_m_list(text)
    if len(values) != 1:
        raise argparse.ArgumentTypeError("a single m is expected here")
    return values[0]


def parse_range(text: str) -> tuple[float, float, int]:
    """``start:stop:count``."""
    try:
        lo, hi, count = text.split(":")
        out = (float(lo), float(hi), int(count))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r}") from None
    if out[2] < 1 or out[0] < 0 or out[1] < out[0]:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return out


def _emitter_params(args) -> EmitterParams:
    figure = args.g_over_k is not None or args.ks_over_2k is not None
    text = args.g_over_kpks is not None or args.ks_over_k is not None
    if figure and text:
        raise UsageError("use either --g-over-k/--ks-over-2k or --g-over-kpks/--ks-over-k, not both")
    if figure:
        if args.g_over_k is None or args.ks_over_2k is None:
            raise UsageError("--g-over-k and --ks-over-2k must be given together")
        return EmitterParams.from_figure_ratios(args.g_over_k, args.ks_over_2k, args.gamma_over_k)
    if text:
        if args.g_over_kpks is None or args.ks_over_k is None:
            raise UsageError("--g-over-kpks and --ks-over-k must be given together")
        return EmitterParams.from_text_ratios(args.g_over_kpks, args.ks_over_k, args.gamma_over_k)
    raise UsageError("realistic mode needs emitter ratios (--g-over-k/--ks-over-2k or --g-over-kpks/--ks-over-k)")


def cmd_verify(args, out) -> int:
    all_ok = True
    for m in args.m:
        spec = GateSpec(args.gate, m)
        report = verify_gate(spec, args.inputs, seed=args.seed)
        status = "PASS" if report.passed else "FAIL"
        all_ok &= report.passed
        print(
            f"{spec.kind.value} m={m}: {status}  inputs={report.n_inputs}"
            f"  state_err={_fmt(report.max_state_error)}"
            f"  prob_err={_fmt(report.max_probability_error)}"
            f"  operator_err={_fmt(report.max_operator_error)}",
            file=out,
        )
        if len(args.m) == 1:
            rng = np.random.default_rng(args.seed)
            prep = SpinPreparation(*rng.uniform(0, 2 * np.pi, size=3))
            run = run_circuit(spec, prep)
            print(f"  outcomes for alpha={_fmt(prep.alpha)} beta={_fmt(prep.beta)} delta={_fmt(prep.delta)}:", file=out)
            print("  detector  probability  fidelity", file=out)
            for o in run.outcomes:
                print(f"  {o.detector:<8}  {_fmt(o.probability):<11}  {_fmt(o.conditional_fidelity)}", file=out)
    print("PASS" if all_ok else "FAIL", file=out)
    return 0 if all_ok else 1


def _point_result(args) -> tuple[GateSpec, metrics.PointMetrics]:
    if args.mode == "ideal":
        spec = GateSpec(args.gate, args.m)
    else:
        spec = GateSpec(args.gate, args.m, Mode.REALISTIC, args.leak, _emitter_params(args))
    return spec, metrics.point_metrics(spec, args.n, args.fidelity)


def cmd_point(args, out) -> int:
    spec, pm = _point_result(args)
    if args.format == "json":
        doc = {
            "gate": spec.kind.value,
            "m": spec.m,
            "mode": pm.mode,
            "leak_convention": pm.leak_convention,
            "fidelity_convention": pm.fidelity_convention,
            "quadrature_n": pm.grid_resolution,
            "avg_fidelity": pm.avg_fidelity,
            "avg_efficiency": pm.avg_efficiency,
        }
        if spec.params is not None:
            doc["g_over_kappa"] = spec.params.g_over_kappa
            doc["ks_over_2kappa"] = spec.params.ks_over_2kappa
            doc["gamma_over_kappa"] = spec.params.gamma
        print(json.dumps(doc, indent=2), file=out)
        return 0
    line = f"gate={spec.kind.value} m={spec.m} mode={pm.mode}"
    if spec.params is not None:
        p = spec.params
        line += (
            f" g/kappa={_fmt(p.g_over_kappa)} ks/2kappa={_fmt(p.ks_over_2kappa)}"
            f" g/(kappa+ks)={_fmt(p.g_over_kpks)} ks/kappa={_fmt(p.ks_over_kappa)}"
            f" gamma/kappa={_fmt(p.gamma)}"
        )
    print(line, file=out)
    print(
        f"leak={pm.leak_convention} fidelity={pm.fidelity_convention} n={pm.grid_resolution}",
        file=out,
    )
    print(f"F = {_fmt(pm.avg_fidelity)}", file=out)
    print(f"eta = {_fmt(pm.avg_efficiency)}", file=out)
    return 0


def _sweep_path(args) -> Path:
    if args.out:
        path = Path(args.out)
    else:
        name = f"sweep_{GateKind(args.gate).value}_m{args.m}.{args.format}"
        path = Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / name
    return path


def cmd_sweep(args, out) -> int:
    grid = metrics.SweepGrid(
        args.gate,
        args.m,
        args.g_range,
        args.ks2_range,
        args.gamma_over_k,
        args.leak,
        args.fidelity,
    )
    n = args.n or metrics.default_quadrature(grid.kind)
    path = _sweep_path(args)
    if not path.parent.is_dir() or not os.access(path.parent, os.W_OK):
        raise UsageError(f"cannot write to {path}")
    rows = metrics.sweep(grid, n, jobs=args.jobs)
    text = metrics.rows_to_csv(rows) if args.format == "csv" else metrics.rows_to_json(rows, grid, n)
    try:
        path.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write to {path}: {exc}") from None
    best = max(rows, key=lambda r: r.avg_fidelity)
    print(f"wrote {len(rows)} rows to {path}", file=out)
    print(
        f"max F = {_fmt(best.avg_fidelity)} at g/kappa={_fmt(best.g_over_kappa)}"
        f" ks/2kappa={_fmt(best.ks_over_2kappa)}",
        file=out,
    )
    return 0


def cmd_trace(args, out) -> int:
    if args.mode != "ideal":
        raise UsageError("trace is only defined for the ideal scattering rules")
    spec = GateSpec(args.gate, args.m)
    prep = SpinPreparation(args.alpha, args.beta, args.delta)
    devs = checkpoint_deviations(spec, prep)
    from .circuits import trace_checkpoints

    states = dict(trace_checkpoints(spec, prep))
    ok = True
    for label, dev in devs:
        st = states[label]
        ok &= dev < CHECKPOINT_TOL
        n_terms = int(np.sum(np.abs(st.amps) > 1e-12))
        print(f"{label:<6} norm={_fmt(st.norm2())} terms={n_terms} max_dev={dev:.3e}", file=out)
        if args.amplitudes:
            shape = st.shape
            for flat in np.flatnonzero(np.abs(st.amps) > 1e-12):
                idx = np.unravel_index(flat, shape)
                spins = "".join("ud"[i] for i in idx[:-2])
                pol = "RL"[idx[-1]]
                amp = st.amps[flat]
                print(f"    {pol}_{st.paths[idx[-2]]} |{spins}>  {_fmt(amp.real)}{amp.imag:+.6g}j", file=out)
    print(f"{len(devs)} checkpoints, {'all' if ok else 'NOT all'} within {CHECKPOINT_TOL:g}", file=out)
    return 0 if ok else 1


def _add_gate(p, multi_m=False):
    p.add_argument("--gate", required=True, choices=[k.value for k in GateKind])
    if multi_m:
        p.add_argument("--m", type=parse_m_list, default=[2], help="root index: 2, 1,3 or 1..4")
    else:
        p.add_argument("--m", type=parse_m, default=2, help="root index m >= 1")


def _add_physics(p):
    p.add_argument("--mode", choices=[m.value for m in Mode], default="realistic")
    p.add_argument("--g-over-k", type=float, help="g/kappa (figure axes)")
    p.add_argument("--ks-over-2k", type=float, help="kappa_s/(2 kappa) (figure axes)")
    p.add_argument("--g-over-kpks", type=float, help="g/(kappa + kappa_s)")
    p.add_argument("--ks-over-k", type=float, help="kappa_s/kappa")
    p.add_argument("--gamma-over-k", type=float, default=0.1)
    _add_conventions(p)


def _add_conventions(p):
    p.add_argument("--leak", choices=[c.value for c in LeakConvention], default=metrics.DEFAULT_LEAK.value)
    p.add_argument(
        "--fidelity",
        choices=[c.value for c in metrics.FidelityConvention],
        default=metrics.DEFAULT_FIDELITY.value,
    )


def _quadrature(text: str) -> int:
    n = int(text)
    if n < 8:
        raise argparse.ArgumentTypeError("quadrature n must be >= 8")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinswap", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the ideal circuits against the target gates")
    _add_gate(p, multi_m=True)
    p.add_argument("--inputs", type=int, default=50, help="number of random preparations")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("point", help="average fidelity and efficiency at one parameter point")
    _add_gate(p)
    _add_physics(p)
    p.add_argument("--n", type=_quadrature, default=None, help="quadrature points per angle")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="fidelity/efficiency surface over g/kappa and kappa_s/2kappa")
    _add_gate(p)
    p.add_argument("--g-range", type=parse_range, default=(0.0, 5.0, 50), help="start:stop:count")
    p.add_argument("--ks2-range", type=parse_range, default=(0.0, 1.0, 50), help="start:stop:count")
    p.add_argument("--gamma-over-k", type=float, default=0.1)
    _add_conventions(p)
    p.add_argument("--n", type=_quadrature, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help=f"output file (default: ${OUTPUT_DIR_ENV} or cwd)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trace", help="dump the ideal intermediate states")
    _add_gate(p)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="ideal")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--amplitudes", action="store_true", help="print nonzero amplitudes")
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"spinswap {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
