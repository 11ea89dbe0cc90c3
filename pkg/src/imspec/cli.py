"""Command-line front end.

Commands: classify | spectrum | norms | multiplier | shimorin | verify |
catalog-list.  Function specs are either ``catalog:NAME`` or inline
coefficient lists via --num/--den (comma-separated, each entry a real like
``-0.5`` or a complex like ``1+2i``).  Exit codes: 0 ok, 2 parse error,
3 unsupported input, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Optional

from . import bergman, serialize
from .acceptance import run_suite
from .catalog import CatalogEntry, list_names, lookup
from .classify import classify, closed_form_pieces, closed_form_spectrum, factor_derivative
from .config import DEFAULT, RunConfig
from .errors import (BranchTrackingFailed, FunctionSpecParseError, ImspecError,
                     NotInRO, PoleInDisk, QuadratureBudgetExceeded,
                     RootFindingFailed, TruncationUnreliable, UnknownEntry,
                     Unsupported)
from .ims import RationalDerivative, coefficient_growth_spectrum, estimate_spectrum
from .poly import ComplexPoly, RationalFn
from .schwarzian import pre_schwarzian, schwarzian, weighted_sup_norm

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_NUMERICAL = 4


@dataclass
class ResolvedFunction:
    name: str
    entry: Optional[CatalogEntry]
    rational: Optional[RationalFn]
    derivative: object


def _parse_complex(tok: str) -> complex:
    tok = tok.strip().replace(" ", "")
    if not tok:
        raise FunctionSpecParseError("empty coefficient")
    try:
        return complex(tok.replace("i", "j"))
    except ValueError as exc:
        raise FunctionSpecParseError(f"cannot parse coefficient {tok!r}") from exc


def _parse_coeff_list(text: str) -> ComplexPoly:
    return ComplexPoly([_parse_complex(t) for t in text.split(",")])


def resolve_function(spec: Optional[str], num: Optional[str], den: Optional[str],
                     config: RunConfig) -> ResolvedFunction:
    if spec is not None and (num is not None or den is not None):
        raise FunctionSpecParseError("give either catalog:NAME or --num/--den, not both")
    if spec is not None:
        if not spec.startswith("catalog:"):
            raise FunctionSpecParseError(f"function spec {spec!r} must start with 'catalog:'")
        entry = lookup(spec[len("catalog:"):], config)
        return ResolvedFunction(entry.name, entry, entry.rational, entry.derivative)
    if num is None:
        raise FunctionSpecParseError("need a function: catalog:NAME or --num/--den")
    R = RationalFn(_parse_coeff_list(num),
                   _parse_coeff_list(den) if den is not None else ComplexPoly.one(),
                   gcd_tol=config.gcd_tol)
    return ResolvedFunction("inline", None, R,
                            RationalDerivative.from_function(R, config))


def _require_rational(fn: ResolvedFunction) -> RationalFn:
    if fn.rational is None:
        raise Unsupported(f"{fn.name} is not a rational map")
    return fn.rational


def _parse_tau(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise FunctionSpecParseError(f"cannot parse tau {text!r}") from exc


def _emit_raw(body: str, args) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def _emit(payload, args, text_lines=None) -> None:
    if args.format == "text" and text_lines is not None:
        body = "\n".join(text_lines) + "\n"
    else:
        body = serialize.dumps(payload) + "\n"
    _emit_raw(body, args)


# -- subcommands -----------------------------------------------------------------


def cmd_classify(args, config: RunConfig) -> int:
    fn = resolve_function(args.spec, args.num, args.den, config)
    R = _require_rational(fn)
    label = classify(R, config)
    payload = {"name": fn.name, "label": label}
    lines = [f"{fn.name}: family={label.family} in_R_O={label.in_R_O} "
             f"s={label.s} l={label.l} t={label.t}"]
    try:
        payload["factorization"] = factor_derivative(R, config)
    except NotInRO as exc:
        payload["factorization"] = None
        payload["factorization_note"] = str(exc)
        lines.append(f"derivative factorization unavailable: {exc}")
    if label.in_R_O and label.family != "NotClassified":
        payload["spectrum_pieces"] = closed_form_pieces(label)
    _emit(payload, args, lines)
    return EXIT_OK


def cmd_spectrum(args, config: RunConfig) -> int:
    fn = resolve_function(args.spec, args.num, args.den, config)
    tau = _parse_tau(args.tau)
    payload: dict = {"name": fn.name, "tau_re": tau.real, "tau_im": tau.imag,
                     "mode": args.mode}
    lines = [f"{fn.name} at tau={args.tau} [{args.mode}]"]

    closed = None
    if args.mode in ("closed", "both"):
        if tau.imag != 0:
            raise Unsupported("closed forms exist only for real tau")
        label = classify(_require_rational(fn), config)
        closed = closed_form_spectrum(label, tau.real)
        payload["closed_form"] = closed
        lines.append(f"closed form: {closed:g}")
    if args.mode in ("numeric", "both"):
        est = estimate_spectrum(fn.derivative, tau, config)
        payload["estimate"] = est
        payload["numeric"] = est.spectrum()
        lines.append(f"numeric: {est.spectrum():.6f} (slope {est.slope:.6f}, "
                     f"residual {est.residual:.2e}, log_regime={est.log_regime})")
        if closed is not None:
            payload["discrepancy"] = abs(est.spectrum() - closed)
            lines.append(f"discrepancy: {payload['discrepancy']:.3e}")
        if args.format == "csv":
            _emit_raw(serialize.ladder_csv(est.ladder_rows()), args)
            return EXIT_OK
    if args.mode == "coeff":
        R = _require_rational(fn)
        fp = R.derivative(gcd_tol=config.gcd_tol)
        cg = coefficient_growth_spectrum(fp, tau, config=config)
        payload["coefficient_growth"] = {"value": cg.value, "exponent": cg.exponent,
                                         "degenerate": cg.degenerate}
        lines.append(f"coefficient growth estimate: {cg.value:.4f}")
    _emit(payload, args, lines)
    return EXIT_OK


def cmd_norms(args, config: RunConfig) -> int:
    fn = resolve_function(args.spec, args.num, args.den, config)
    if fn.entry is not None and not fn.entry.is_rational:
        s_phi = fn.entry.schwarzian_phi
        n_report = None
    else:
        R = _require_rational(fn)
        s_phi = schwarzian(R, config.gcd_tol)
        n_report = weighted_sup_norm(pre_schwarzian(R, config.gcd_tol), 1, config)
    s_report = weighted_sup_norm(s_phi, 2, config)
    payload = {"name": fn.name, "schwarzian_E2": s_report}
    lines = [f"{fn.name}: ||S||_E2 = {s_report.value:.8f}"]
    if n_report is not None:
        payload["preschwarzian_E1"] = n_report
        lines.append(f"{fn.name}: ||N||_E1 = {n_report.value:.8f}")
    _emit(payload, args, lines)
    return EXIT_OK


def cmd_multiplier(args, config: RunConfig) -> int:
    fn = resolve_function(args.spec, args.num, args.den, config)
    R = _require_rational(fn)
    S = schwarzian(R, config.gcd_tol)
    bound = bergman.multiplier_lower_bound(S, args.alpha, config)
    target = bergman.koebe_target(args.alpha)
    payload = {"name": fn.name, "alpha": args.alpha, "lower_bound": bound,
               "target": target}
    lines = [f"{fn.name} alpha={args.alpha:g}: lower bound {bound.value:.6f} "
             f"({bound.method}), target {target:.6f}"]
    _emit(payload, args, lines)
    return EXIT_OK


def cmd_shimorin(args, config: RunConfig) -> int:
    fn = resolve_function(args.spec, args.num, args.den, config)
    R = _require_rational(fn)
    S = schwarzian(R, config.gcd_tol)
    alphas = [float(a) for a in args.alphas.split(",")]
    report = bergman.shimorin_report(S, alphas, config)
    lines = [f"{fn.name}: {report.verdict}"]
    for row in report.rows:
        lines.append(f"  alpha={row.alpha:g}: lower={row.lower_bound:.6f} "
                     f"target={row.target:.6f} margin={row.margin:+.3e}")
    _emit({"name": fn.name, "report": report}, args, lines)
    return EXIT_OK


def cmd_verify(args, config: RunConfig) -> int:
    report = run_suite(args.suite, config)
    lines = [r.line() for r in report.results]
    lines.append(f"{'PASS' if report.passed else 'FAIL'} suite={report.suite} "
                 f"({sum(r.passed for r in report.results)}/{len(report.results)})")
    _emit(report, args, lines)
    return EXIT_OK if report.passed else 1


def cmd_catalog_list(args, config: RunConfig) -> int:
    names = list_names(config)
    _emit({"entries": names}, args, names)
    return EXIT_OK


# -- entry point -------------------------------------------------------------------


_GLOBAL_DEFAULTS = {"config": None, "out": None, "format": "json", "threads": None}


def _add_globals(p: argparse.ArgumentParser) -> None:
    # accepted both before and after the subcommand; SUPPRESS so whichever
    # position the user filled survives the merge
    p.add_argument("--config", default=argparse.SUPPRESS,
                   help="TOML file with RunConfig overrides")
    p.add_argument("--out", default=argparse.SUPPRESS,
                   help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"),
                   default=argparse.SUPPRESS)
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                   help="ladder/panel parallelism (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="imspec",
                                 description="integral means spectra of rational maps")
    _add_globals(ap)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def add_function_args(p):
        p.add_argument("spec", nargs="?", help="catalog:NAME")
        p.add_argument("--num", help="numerator coefficients, ascending")
        p.add_argument("--den", help="denominator coefficients, ascending")

    p = sub.add_parser("classify", parents=[common], help="family label and derivative factorization")
    add_function_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("spectrum", parents=[common], help="closed-form and/or numeric spectrum")
    add_function_args(p)
    p.add_argument("--tau", required=True, help="real 'a' or complex 'a+bi'")
    p.add_argument("--mode", choices=("closed", "numeric", "both", "coeff"),
                   default="both")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("norms", parents=[common], help="weighted sup-norms of N and S")
    add_function_args(p)
    p.set_defaults(func=cmd_norms)

    p = sub.add_parser("multiplier", parents=[common], help="multiplier-norm lower bound")
    add_function_args(p)
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(func=cmd_multiplier)

    p = sub.add_parser("shimorin", parents=[common], help="lower bound vs target across alphas")
    add_function_args(p)
    p.add_argument("--alphas", default="0.5,1,2")
    p.set_defaults(func=cmd_shimorin)

    p = sub.add_parser("verify", parents=[common], help="run acceptance checks")
    p.add_argument("--suite", default="all",
                   choices=("all", "classify", "spectra", "norms", "bergman",
                            "oracles", "properties", "determinism"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog-list", parents=[common], help="names of built-in catalog entries")
    p.set_defaults(func=cmd_catalog_list)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        config = RunConfig.from_toml(args.config) if args.config else DEFAULT
        config = config.with_overrides(threads=args.threads, out_format=args.format)
        return args.func(args, config)
    except (FunctionSpecParseError, UnknownEntry, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (Unsupported, NotInRO, PoleInDisk) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (RootFindingFailed, BranchTrackingFailed, QuadratureBudgetExceeded,
            TruncationUnreliable) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ImspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
