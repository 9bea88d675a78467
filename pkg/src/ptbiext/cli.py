"""Command-line interface.

Exit codes: 0 ok, 1 usage or configuration error, 2 invalid spec,
3 closed-form and oracle disagree.
"""

import argparse
import json
import sys

import numpy as np

from . import boundary as B
from . import oracle as O
from . import jsonio, spectral, verify
from .errors import ConfigError, PtBiextError, RankDeficient
from .jsonio import SpecError, dumps
from .ode import OdeConfig, Potential, to_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SPEC = 2
EXIT_DISAGREE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits with 2 by default, which is reserved for invalid specs here
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(arg):
    if arg == "-":
        return sys.stdin.read()
    if arg.lstrip().startswith("{"):
        return arg
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {arg!r}: {exc.strerror}") from exc


def _load_json(arg, what):
    try:
        return json.loads(_read_text(arg))
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed {what} JSON: {exc}") from exc


def load_spec(arg):
    return jsonio.spec_from_dict(_load_json(arg, "spec"))


def load_config(args):
    """Config file (if any) with explicit flags layered on top."""
    d = _load_json(args.config, "config") if args.config else {}
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    cfg = OdeConfig.from_dict(d)
    return OdeConfig(
        Potential.monomial(args.degree) if args.degree is not None else cfg.potential,
        args.X if args.X is not None else cfg.X,
        args.tol if args.tol is not None else cfg.tol,
        args.nodes if args.nodes is not None else cfg.nodes,
    )


def _emit(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------------------------


def cmd_classify(args):
    spec = load_spec(args.spec)
    report = B.classify(spec)
    ref = O.oracle_classify(B.boundary_subspace(spec))
    _emit(args, dumps(jsonio.report_to_dict(report)) + "\n")
    if ref.flags != report.flags:
        print(f"closed form {report.flags} disagrees with oracle {ref.flags}", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_adjoint(args):
    spec = load_spec(args.spec)
    space = B.boundary_subspace(spec)
    comp = O.omega_complement(space)
    if args.mode == "star":
        out, expected = B.adjoint(spec), comp
    else:
        out, expected = B.p_adjoint(spec), O.apply_p(comp)
    residual = O.projection_residual(B.boundary_subspace(out), expected)
    agree = residual < O.EQUAL_TOL
    doc = {
        "mode": args.mode,
        "spec": jsonio.spec_to_dict(out),
        "dimension": out.dimension,
        "oracle_basis": jsonio.subspace_to_list(expected),
        "residual": residual,
        "agree": agree,
    }
    _emit(args, dumps(doc) + "\n")
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_subspace_check(args):
    spec = load_spec(args.spec)
    space = B.boundary_subspace(spec)
    closed = B.classify(spec)
    ref = O.oracle_classify(space)
    comp = O.omega_complement(space)
    r_star = O.projection_residual(B.boundary_subspace(B.adjoint(spec)), comp)
    r_plus = O.projection_residual(B.boundary_subspace(B.p_adjoint(spec)), O.apply_p(comp))
    agree = closed.flags == ref.flags and max(r_star, r_plus) < O.EQUAL_TOL
    doc = {
        "dimension": space.dim,
        "basis": jsonio.subspace_to_list(space),
        "closed_form": jsonio.report_to_dict(closed),
        "oracle": jsonio.report_to_dict(ref),
        "adjoint_residual": r_star,
        "p_adjoint_residual": r_plus,
        "agree": agree,
    }
    _emit(args, dumps(doc) + "\n")
    return EXIT_OK if agree else EXIT_DISAGREE


def _operator(args):
    spec = load_spec(args.spec)
    cfg = load_config(args)
    grid = cfg.grid()
    return spectral.TruncatedOperator.build(spec, cfg.potential, grid, cfg.tol)


def _random_lambdas(args):
    rng = np.random.default_rng(args.seed)
    lo, hi = args.lambda_min, args.lambda_max
    return rng.uniform(lo, hi, args.samples) + 1j * rng.uniform(lo, hi, args.samples)


def cmd_spectrum(args):
    op = _operator(args)
    lines = []
    if op.k == 2:
        if args.newton is not None:
            results = [spectral.eigenvalue_newton(op, complex(*args.newton))]
        else:
            results = spectral.eigenvalues_real_scan(op, args.lambda_min, args.lambda_max, args.count)
        lines = [r.to_dict(op.k) for r in results]
    elif op.k == 3:
        for lam in _random_lambdas(args):
            lines.append(spectral.empty_resolvent_witness(op, lam).to_dict(op.k))
    else:
        rng = np.random.default_rng([args.seed, 1])
        for lam in _random_lambdas(args):
            rep = spectral.residual_spectrum_witness(op, lam, rng)
            lines.append(
                {
                    "lambda": [lam.real, lam.imag],
                    "defect": rep.witness_defect,
                    "k": op.k,
                    "X": op.X,
                    "orthogonality": rep.residual,
                }
            )
    _emit(args, "".join(dumps(line) + "\n" for line in lines))
    return EXIT_OK


def cmd_witness(args):
    op = _operator(args)
    lam = complex(*args.lam)
    if op.k == 3:
        res = spectral.empty_resolvent_witness(op, lam)
        f = spectral.eigenfunction(op, res)
    elif op.k == 2:
        res = spectral.eigen_result(op, lam)
        f = spectral.eigenfunction(op, res)
    else:
        # the function orthogonal to the range of (op - lam)
        adj = spectral.TruncatedOperator.build(B.adjoint(op.spec), op.potential, op.grid, op.tol, op.ref)
        res = spectral.empty_resolvent_witness(adj, lam.conjugate())
        f = spectral.eigenfunction(adj, res)
    print(dumps(res.to_dict(op.k)), file=sys.stderr)
    _emit(args, to_csv(f))
    return EXIT_OK


def cmd_verify(args):
    cfg = load_config(args)
    summary = verify.run_all(cfg, seed=args.seed, sweep=args.sweep, family=args.family)
    _emit(args, dumps(summary) + "\n")
    return EXIT_OK if summary["passed"] else EXIT_DISAGREE


# --- parser -----------------------------------------------------------------------------------


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return conv


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="potential/config JSON file")
    common.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
    common.add_argument("--X", type=float, help="truncation half-width")
    common.add_argument("--tol", type=_positive(float), help="ODE tolerance")
    common.add_argument("--nodes", type=int, help="grid nodes (odd)")
    common.add_argument("--degree", type=int, help="monomial potential degree")
    common.add_argument("-o", "--output", help="write output here instead of stdout")

    p = _Parser(prog="ptbiext", description="Classify and test bi-extensions of a singular Sturm-Liouville operator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def spec_cmd(name, help_text):
        c = sub.add_parser(name, parents=[common], help=help_text)
        c.add_argument("spec", help="spec JSON (inline, file path, or - for stdin)")
        return c

    c = spec_cmd("classify", "classify a boundary condition")
    c.set_defaults(func=cmd_classify)

    c = spec_cmd("adjoint", "closed-form adjoint with oracle check")
    c.add_argument("--mode", choices=("star", "plus"), default="star", help="star: adjoint, plus: parity adjoint")
    c.set_defaults(func=cmd_adjoint)

    c = spec_cmd("subspace-check", "compare closed forms with the subspace oracle")
    c.set_defaults(func=cmd_subspace_check)

    c = spec_cmd("spectrum", "eigenvalues (k=2), eigen-witnesses (k=3) or range witnesses (k=1)")
    c.add_argument("--lambda-min", type=float, default=-10.0)
    c.add_argument("--lambda-max", type=float, default=30.0)
    c.add_argument("--count", type=int, default=200, help="scan samples on the real axis (k=2)")
    c.add_argument("--samples", type=int, default=20, help="random complex lambdas (k=1, k=3)")
    c.add_argument("--newton", type=float, nargs=2, metavar=("RE", "IM"), help="complex seed for Newton (k=2)")
    c.set_defaults(func=cmd_spectrum)

    c = spec_cmd("witness", "eigenfunction at lambda as CSV")
    c.add_argument("--lambda", dest="lam", type=float, nargs=2, metavar=("RE", "IM"), default=(0.0, 0.0))
    c.set_defaults(func=cmd_witness)

    c = sub.add_parser("verify", parents=[common], help="run every invariant suite")
    c.add_argument("--sweep", type=_positive(int), default=10000, help="random specs per variant")
    c.add_argument("--family", type=_positive(int), default=1000, help="specs per targeted family")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecError, RankDeficient) as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except B.InternalInconsistency as exc:
        print(f"disagreement: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except PtBiextError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
