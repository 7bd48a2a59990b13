"""Command-line front end.

Exit status: 0 on success, 2 for usage or parameter errors, 3 when a
numerical check or invariant fails.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from contextlib import contextmanager
from typing import Iterator, Optional, Sequence, TextIO

import numpy as np

from . import analysis
from .analysis import SweepResult
from .cloners import (
    BHMachineParams,
    ClonerSpec,
    Machine,
    StateDepParams,
    apply_cloner,
    verify_unitarity,
)
from .config import TOL
from .core import InputQubit
from .errors import InvariantError, ParameterError
from .measures import concurrence, hs_distance, l1_coherence

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SQRT2 = math.sqrt(2.0)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:steps`` with both endpoints included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ParameterError(f"grid {text!r} must look like start:stop:steps")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ParameterError(f"grid {text!r} must look like start:stop:steps") from None
    if steps < 1:
        raise ParameterError(f"grid {text!r} needs at least one step")
    return np.linspace(start, stop, steps)


def parse_statedep(text: Optional[str]) -> StateDepParams:
    if text is None:
        return StateDepParams.reference_optimum()
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ParameterError("--statedep expects six comma-separated numbers") from None
    if len(values) != 6:
        raise ParameterError("--statedep expects a,b1,b2,a_t,b1_t,b2_t")
    return StateDepParams(*values)


def build_spec(args) -> ClonerSpec:
    kind = Machine.from_token(args.machine)
    if kind is Machine.BH_GENERAL:
        if args.mu is None or args.nu is None:
            raise ParameterError("bh-general needs --mu and --nu")
        return ClonerSpec(kind, BHMachineParams(float(args.mu), float(args.nu)))
    if kind is Machine.STATE_DEPENDENT:
        return ClonerSpec(kind, parse_statedep(args.statedep))
    return ClonerSpec(kind)


def build_input(args) -> InputQubit:
    try:
        alpha = complex(args.alpha)
        beta = None if args.beta is None else complex(args.beta)
    except ValueError:
        raise ParameterError("--alpha/--beta must be numbers (complex allowed, e.g. 0.6+0.8j)") from None
    if beta is None:
        if abs(alpha) > 1.0 + TOL.normalization:
            raise ParameterError(f"|alpha| = {abs(alpha)} exceeds 1")
        beta = math.sqrt(max(1.0 - abs(alpha) ** 2, 0.0))
    return InputQubit(alpha, beta)


@contextmanager
def open_output(path: Optional[str], default_stdout: bool = False) -> Iterator[Optional[TextIO]]:
    if (path is None and not default_stdout) or path == "":
        yield None
    elif path is None or path == "-":
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", newline="")
        except OSError as exc:
            raise ParameterError(f"cannot write {path}: {exc.strerror}") from None
        with fh:
            yield fh


def _line(name: str, value: float, ref: Optional[float] = None, out: Optional[TextIO] = None) -> None:
    text = f"{name}: {value:.6f}"
    if ref is not None:
        text += f" (reference {ref:.6f}, deviation {abs(value - ref):.3g})"
    print(text, file=out or sys.stdout)


def cmd_clone(args) -> int:
    spec = build_spec(args)
    inp = build_input(args)
    out = apply_cloner(spec, inp)
    values = {
        "concurrence": concurrence(out.two_qubit),
        "coherence": l1_coherence(out.two_qubit),
        "clone_coherence": l1_coherence(out.clone_a),
        "copy_quality": hs_distance(inp.density, out.clone_a),
    }
    refs = analysis.reference_values(spec, inp)
    print(f"machine: {spec.kind.value}")
    print(f"input: alpha={inp.alpha:.8g} beta={inp.beta:.8g}")
    for key, label in (
        ("concurrence", "concurrence"),
        ("coherence", "coherence"),
        ("clone_coherence", "clone-coherence"),
        ("copy_quality", "copy-quality"),
    ):
        _line(label, values[key], refs.get(key))
    result = SweepResult(
        ["alpha_re", "alpha_im", "beta_re", "beta_im"],
        ["concurrence", "l1_two_qubit", "l1_clone", "copy_quality"],
        [
            (
                inp.alpha.real, inp.alpha.imag, inp.beta.real, inp.beta.imag,
                values["concurrence"], values["coherence"], values["clone_coherence"], values["copy_quality"],
            )
        ],
    )
    with open_output(args.output) as fh:
        if fh is not None:
            result.write_csv(fh)
    return EXIT_OK


def cmd_sweep(args) -> int:
    kind = Machine.from_token(args.machine)
    alphas = parse_grid(args.alpha)
    summary = sys.stderr if args.output in (None, "-") else sys.stdout
    status = EXIT_OK
    if kind is Machine.BH_GENERAL:
        if args.mu is None:
            raise ParameterError("bh-general sweep needs --mu start:stop:steps (nu = 1 - 2 mu)")
        result = analysis.sweep_bh_concurrence(parse_grid(args.mu), alphas)
        missing = sum(1 for r in result.rows if r[-1] is None)
        print(f"rows: {len(result.rows)} (NA where nu = 1 - 2 mu breaks the Schwarz bound: {missing})", file=summary)
    elif kind is Machine.STATE_DEPENDENT:
        result = analysis.sweep_statedep_concurrence(alphas, parse_statedep(args.statedep))
        conc = result.column("concurrence")
        print(f"rows: {len(result.rows)}; concurrence min {conc.min():.6f} max {conc.max():.6f}", file=summary)
    elif kind is Machine.CNOT:
        result = analysis.cnot_coherence_check(alphas)
        gap = float(np.max(np.abs(result.column("input_l1") - result.column("output_concurrence"))))
        print(f"rows: {len(result.rows)}; max |input l1 - output concurrence| = {gap:.3g}", file=summary)
        if gap > 1e-9:
            status = EXIT_NUMERIC
    else:
        spec = build_spec(args)
        result = analysis.sweep_alpha(spec, alphas, phase=args.phase)
        print(f"rows: {len(result.rows)}", file=summary)
    with open_output(args.output, default_stdout=True) as fh:
        result.write_csv(fh)
    return status


def cmd_optimize(args) -> int:
    res = analysis.optimize_statedep(args.resolution)
    p = res.best_params
    _line("best coherence coefficient", res.best_value, SQRT2)
    print(f"theta={res.theta:.9f} phi={res.phi:.9f} (theta + phi - pi/2 = {res.family_residual:.3g})")
    print(f"a={p.a:.6f} b1=b2={p.b1:.6f} a_t={p.a_t:.6f} b1_t=b2_t={p.b1_t:.6f}")
    tabulated = analysis.statedep_objective(StateDepParams.reference_optimum())
    _line("six-decimal amplitudes", tabulated, SQRT2)
    result = SweepResult(["step"], ["value"], [(float(s), float(v)) for s, v in res.trace])
    with open_output(args.output) as fh:
        if fh is not None:
            result.write_csv(fh)
    return EXIT_OK if abs(res.best_value - SQRT2) <= 1e-6 else EXIT_NUMERIC


def cmd_verify(args) -> int:
    spec = build_spec(args)
    rep = verify_unitarity(spec)
    print(f"machine: {spec.kind.value}")
    print(f"column norms: {rep.column_norms[0]:.12g}, {rep.column_norms[1]:.12g}")
    print(f"column overlap: {rep.overlap:.3g}")
    print(f"max isometry violation: {rep.max_violation:.3g}")
    if rep.machine_vector_violation is not None:
        print(f"max machine-vector relation violation: {rep.machine_vector_violation:.3g}")
    ok = rep.ok(args.tol)
    print(f"isometry within {args.tol:g}: {'yes' if ok else 'no'}")
    result = SweepResult([], ["max_violation", "overlap"], [(rep.max_violation, rep.overlap)])
    with open_output(args.output) as fh:
        if fh is not None:
            result.write_csv(fh)
    return EXIT_OK if ok else EXIT_NUMERIC


_AVERAGE_REFERENCE = {
    Machine.WOOTTERS_ZUREK: 1 / 3,
    Machine.CNOT: 1 / 3,
    Machine.BH_OPTIMAL: 1 / 18,
    Machine.COHERENCE_MACHINE: 0.5,
}


def cmd_average(args) -> int:
    spec = build_spec(args)
    value = analysis.average_copy_quality(spec, args.points)
    ref = _AVERAGE_REFERENCE.get(spec.kind)
    if spec.kind is Machine.BH_GENERAL:
        mu, nu = spec.params.mu, spec.params.nu
        # mean of |alpha|^2 |beta|^2 over uniform |alpha|^2 is 1/6
        ref = 2 * mu**2 / 3 + (nu - 1) ** 2 / 3
    print(f"machine: {spec.kind.value}, points: {args.points}")
    _line("average copy quality", value, ref)
    result = SweepResult(["points"], ["average_copy_quality"], [(float(args.points), value)])
    with open_output(args.output) as fh:
        if fh is not None:
            result.write_csv(fh)
    return EXIT_OK


def cmd_bound(args) -> int:
    rep = analysis.sample_bound(args.samples, args.seed)
    print(f"samples: {rep.num_samples} (seed {rep.seed})")
    print(f"violations: {rep.violations}")
    print(f"max concurrence / l1 ratio: {rep.max_ratio:.6f}")
    print(f"max |closed-form - Wootters| concurrence: {rep.max_oracle_gap:.3g}")
    result = SweepResult(
        ["samples", "seed"],
        ["violations", "max_ratio", "max_oracle_gap"],
        [(float(rep.num_samples), float(rep.seed), float(rep.violations), rep.max_ratio, rep.max_oracle_gap)],
    )
    with open_output(args.output) as fh:
        if fh is not None:
            result.write_csv(fh)
    return EXIT_OK if rep.violations == 0 and rep.max_oracle_gap <= 1e-9 else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcloning", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    machines = [m.value for m in Machine]

    def machine_args(p, grids: bool = False):
        p.add_argument("--machine", required=True, choices=machines)
        if grids:
            p.add_argument("--mu", help="grid start:stop:steps (bh-general, nu = 1 - 2 mu)")
        else:
            p.add_argument("--mu", type=float, help="bh-general: <Y|Y> overlap")
            p.add_argument("--nu", type=float, help="bh-general: 2 <Y0|Q1> overlap")
        p.add_argument("--statedep", help="state-dep amplitudes a,b1,b2,a_t,b1_t,b2_t (default: six-decimal optimum)")

    def output_arg(p):
        p.add_argument("-o", "--output", help="CSV destination ('-' for standard output)")

    p = sub.add_parser("clone", help="clone one input and report all measures")
    machine_args(p)
    p.add_argument("--alpha", required=True, help="amplitude of |0> (complex allowed)")
    p.add_argument("--beta", help="amplitude of |1>; default sqrt(1 - |alpha|^2)")
    output_arg(p)
    p.set_defaults(func=cmd_clone)

    p = sub.add_parser("sweep", help="measures over an alpha grid")
    machine_args(p, grids=True)
    p.add_argument("--alpha", required=True, help="grid start:stop:steps")
    p.add_argument("--phase", type=float, default=0.0, help="relative phase of beta")
    output_arg(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="maximize state-dependent clone coherence")
    p.add_argument("--resolution", type=int, default=41)
    output_arg(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="check that a machine is an isometry")
    machine_args(p)
    p.add_argument("--tol", type=float, default=TOL.isometry)
    output_arg(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("average", help="input-averaged copy quality")
    machine_args(p)
    p.add_argument("--points", type=int, default=10_000)
    output_arg(p)
    p.set_defaults(func=cmd_average)

    p = sub.add_parser("bound", help="sample the concurrence <= l1 coherence bound")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    output_arg(p)
    p.set_defaults(func=cmd_bound)
    return parser


def check_writable(path: Optional[str]) -> None:
    if path in (None, "", "-"):
        return
    directory = os.path.dirname(os.path.abspath(path))
    if os.path.isdir(path) or not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise ParameterError(f"cannot write {path}")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise ParameterError(f"cannot write {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        check_writable(args.output)
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
