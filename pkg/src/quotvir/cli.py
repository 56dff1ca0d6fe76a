"""Command line interface.

Exit status: 0 success, 1 usage error, 2 data error, 3 verification failure.
Coefficients are printed exactly; in JSON they are strings ``"num/den"`` (or
a polynomial in the intersection symbols).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .chow import Bundle, ProjectiveBundle, parse_integrand
from .errors import DataError
from .invariants import (
    K2,
    TWIST,
    QuotSetup,
    chi_vir_series,
    euler_top_series,
    gottsche_series,
    pairwise_shift_product,
    segre_integral_series,
    segre_line_series,
)
from .polynomial import IntersectionPolynomial, parse_scalar
from .series import TruncatedSeries
from .universal import (
    CheckResult,
    HomogeneousUniversalPolynomial,
    collapse_universal_polynomial,
    eliminate_twist_exponent,
    euler_top_universal,
    gottsche_universal,
    universal_evaluate,
    universal_extract,
)
from .verification import run_all, segre_sign_report

MAX_TERMS = 64

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 1, 2, 3

COMMANDS = (
    "gottsche",
    "chi-vir",
    "euler-top",
    "segre-line",
    "shift-product",
    "quot1-integral",
    "extract-universal",
    "collapse",
    "verify",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def format_value(value) -> str:
    """Exact string form used in JSON output."""
    if isinstance(value, IntersectionPolynomial):
        if value.is_constant():
            value = value.constant_value()
        else:
            return str(value)
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_value(text: str):
    """Inverse of :func:`format_value`."""
    return parse_scalar(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quotvir", description="Virtual invariants of Quot schemes of surfaces.")
    parser.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with option values; flags override it")
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--terms", type=int, help="truncation order N (coefficients q^0..q^N)")
    common.add_argument("--check", action="store_true", help="also run exact consistency checks")
    common.add_argument(
        "--pairing",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="intersection number, e.g. K2=1 or c1E.K=-2 (repeatable)",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gottsche", parents=[common], help="topological Euler characteristics")
    p.add_argument("--rank", type=int)
    p.add_argument("--chi", help="topological Euler characteristic of S (number or symbol)")

    p = sub.add_parser("chi-vir", parents=[common], help="virtual Euler characteristics")
    p.add_argument("--rank", type=int)
    p.add_argument("--k2", help="c1(S)^2")

    p = sub.add_parser("euler-top", parents=[common], help="int e(L^[l])^r")
    p.add_argument("--rank", type=int)
    p.add_argument("--m", help="c1(E(x)L).c1(S)")

    p = sub.add_parser("segre-line", parents=[common], help="line bundle Segre series")
    p.add_argument("--rank", type=int)
    p.add_argument("--a", help="c1(E(x)L).c1(S)")
    p.add_argument("--k2", help="c1(S)^2")
    p.add_argument(
        "--convention",
        choices=("closed-form", "integral"),
        help="closed-form: the series as printed in closed form; "
        "integral: sum q^l int s(L^[l]) (closed form at -q)",
    )

    p = sub.add_parser("shift-product", parents=[common], help="prod_{i<j}(1-(x_i-x_j)^2)")
    p.add_argument("--rank", type=int)

    p = sub.add_parser("quot1-integral", parents=[common], help="integral over [Quot^1_S(E)]^vir")
    p.add_argument("--rank", type=int)
    p.add_argument("--integrand", help='e.g. "e(L)^2", "c(Tvir)", "s(L)*c(F)"')
    p.add_argument("--ranks", help="ranks of tautological sheaves, e.g. F=2,G=3 (default 1)")

    p = sub.add_parser("extract-universal", parents=[common], help="recover universal factors")
    p.add_argument("--samples", help='JSON file: [{"exponents": {...}, "coefficients": [...]}, ...]')
    p.add_argument("--family", choices=("chi-vir", "euler-top", "gottsche"), help="generate samples")
    p.add_argument("--rank", type=int)
    p.add_argument("--eliminate-twist", action="store_true", help="assert and remove the c1E.K factor")

    p = sub.add_parser("collapse", parents=[common], help="collapse a curve-side universal polynomial")
    p.add_argument("--input", help='JSON file: {"degree", "f", "r", "coefficients": {"i,j,k": value}}')

    sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    return parser


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise DataError("config must be a JSON object")
    return data


def _merge(args: argparse.Namespace) -> dict:
    """Config file values overridden by explicit flags."""
    config = _load_config(args.config)
    opts = {k.replace("-", "_"): v for k, v in config.items() if k != "pairings"}
    pairings = dict(config.get("pairings", {}))
    for key, value in vars(args).items():
        if key in ("pairing", "config", "command"):
            continue
        if value is not None and value is not False:
            opts[key] = value
        else:
            opts.setdefault(key, value)
    for item in args.pairing:
        if "=" not in item:
            raise UsageError(f"--pairing expects NAME=VALUE, got {item!r}")
        name, value = item.split("=", 1)
        pairings[name.strip()] = value.strip()
    opts["pairings"] = pairings
    terms = opts.get("terms")
    if terms is None:
        terms = 10
    terms = int(terms)
    if not 0 <= terms <= MAX_TERMS:
        raise DataError(f"--terms must be between 0 and {MAX_TERMS}")
    opts["terms"] = terms
    return opts


def _need(opts: dict, key: str, flag: str, pairing: str | None = None):
    value = opts.get(key)
    if value is None and pairing:
        value = opts["pairings"].get(pairing)
    if value is None:
        raise DataError(f"missing value: pass {flag}" + (f" or pairing {pairing}" if pairing else ""))
    return parse_scalar(value)


def _rank(opts: dict, default: int = 1) -> int:
    value = opts.get("rank")
    return default if value is None else int(value)


def _series_report(series: TruncatedSeries) -> list[dict]:
    return [{"l": l, "value": format_value(c)} for l, c in enumerate(series)]


def _constant_term_check(series: TruncatedSeries) -> CheckResult:
    return CheckResult("constant term 1", series[0] == 1, f"q^0 coefficient {series[0]}")


def _oracle_q1(integrand: str, rank: int, values: dict):
    space = ProjectiveBundle(Bundle("E", rank))
    got = space.integrate(parse_integrand(integrand, space))
    got = IntersectionPolynomial.coerce(got).substitute(values)
    return got.constant_value() if got.is_constant() else got


def _q1_check(name: str, series: TruncatedSeries, expected) -> CheckResult:
    ok = series.order < 1 or series[1] == expected
    return CheckResult(name, ok, f"series q^1 = {series[1] if series.order else '-'}, length one oracle = {expected}")


def _cmd_gottsche(opts):
    rank = _rank(opts)
    chi = _need(opts, "chi", "--chi", "chiTop")
    series = gottsche_series(rank, chi, opts["terms"])
    checks = [_constant_term_check(series)] if opts["check"] else []
    return {"rank": rank, "chiTop": format_value(chi), "terms": opts["terms"]}, series, checks


def _cmd_chi_vir(opts):
    rank = _rank(opts)
    k2 = _need(opts, "k2", "--k2", K2)
    series = chi_vir_series(QuotSetup(rank, {K2: k2}, opts["terms"]))
    checks = []
    if opts["check"]:
        checks.append(_constant_term_check(series))
        checks.append(_q1_check("length one oracle", series, _oracle_q1("c(Tvir)", rank, {K2: k2})))
    return {"rank": rank, "K2": format_value(k2), "terms": opts["terms"]}, series, checks


def _cmd_euler_top(opts):
    rank = _rank(opts)
    m = _need(opts, "m", "--m", TWIST)
    series = euler_top_series(QuotSetup(rank, {TWIST: m}, opts["terms"]))
    checks = []
    if opts["check"]:
        checks.append(_constant_term_check(series))
        expected = _oracle_q1(f"e(L)^{rank}", rank, {"c1E.K": m, "c1L.K": 0})
        checks.append(_q1_check("length one oracle", series, expected))
    return {"rank": rank, "m": format_value(m), "terms": opts["terms"]}, series, checks


def _cmd_segre_line(opts):
    rank = _rank(opts)
    a = _need(opts, "a", "--a", TWIST)
    k2 = _need(opts, "k2", "--k2", K2)
    convention = opts.get("convention") or "closed-form"
    setup = QuotSetup(rank, {TWIST: a, K2: k2}, opts["terms"])
    series = segre_line_series(setup) if convention == "closed-form" else segre_integral_series(setup)
    checks = []
    if opts["check"]:
        checks.append(_constant_term_check(series))
        integral = segre_integral_series(setup)
        expected = _oracle_q1("s(L)", rank, {"c1E.K": a, "c1L.K": 0})
        res = _q1_check("segre sign convention", integral, expected)
        checks.append(CheckResult(res.name, res.ok, f"{res.detail}; {segre_sign_report()}"))
    return (
        {"rank": rank, "a": format_value(a), "K2": format_value(k2), "terms": opts["terms"], "convention": convention},
        series,
        checks,
    )


def _cmd_shift_product(opts):
    rank = _rank(opts)
    series = pairwise_shift_product(rank, opts["terms"])
    checks = [_constant_term_check(series)] if opts["check"] else []
    return {"rank": rank, "terms": opts["terms"]}, series, checks


def _parse_ranks(text) -> dict:
    if not text:
        return {}
    if isinstance(text, dict):
        return {k: int(v) for k, v in text.items()}
    out = {}
    for item in str(text).split(","):
        name, _, value = item.partition("=")
        if not value:
            raise DataError(f"bad rank assignment {item!r}")
        out[name.strip()] = int(value)
    return out


def _cmd_quot1_integral(opts):
    rank = _rank(opts)
    integrand = opts.get("integrand")
    if not integrand:
        raise DataError("missing value: pass --integrand")
    pairings = {k: parse_scalar(v) for k, v in opts["pairings"].items()} or None
    space = ProjectiveBundle(Bundle("E", rank), pairings)
    value = space.integrate(parse_integrand(integrand, space, _parse_ranks(opts.get("ranks"))))
    setup = {"rank": rank, "integrand": integrand}
    if pairings:
        setup["pairings"] = {k: format_value(v) for k, v in pairings.items()}
    return setup, [{"l": 1, "value": format_value(value)}], []


def _load_samples(path: str) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read samples {path}: {exc}") from None
    samples = []
    for item in data:
        exps = {k: parse_scalar(v) for k, v in item["exponents"].items()}
        coeffs = [parse_scalar(c) for c in item["coefficients"]]
        samples.append((exps, TruncatedSeries(coeffs)))
    return samples


def _family_samples(family: str, rank: int, terms: int) -> list:
    if family == "chi-vir":
        # c1E.K is sampled too so that twist elimination has something to remove
        grid = [{"c1E.K": e, K2: k} for e, k in ((1, 0), (0, 1), (2, 3))]
        return [(exps, chi_vir_series(QuotSetup(rank, {K2: exps[K2]}, terms))) for exps in grid]
    U = euler_top_universal(terms) if family == "euler-top" else gottsche_universal(rank, terms)
    grid = [dict(zip(U.symbols, v)) for v in _unit_grid(len(U.symbols))]
    return [(exps, universal_evaluate(U, exps)) for exps in grid]


def _unit_grid(n: int) -> list[tuple]:
    rows = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return rows + [tuple(range(2, n + 2))]


def _cmd_extract_universal(opts):
    if opts.get("samples"):
        samples = _load_samples(opts["samples"])
        setup = {"samples": opts["samples"]}
    elif opts.get("family"):
        rank = _rank(opts)
        samples = _family_samples(opts["family"], rank, opts["terms"])
        setup = {"family": opts["family"], "rank": rank, "terms": opts["terms"]}
    else:
        raise DataError("missing value: pass --samples or --family")
    U = universal_extract(samples)
    checks = []
    if opts.get("eliminate_twist"):
        rank = _rank(opts)
        U = eliminate_twist_exponent(U, {"c1E.K": rank})
        checks.append(CheckResult("twist elimination", True, "c1E.K factor equals 1 and was removed"))
    if opts["check"]:
        bad = [i for i, (exps, s) in enumerate(samples) if universal_evaluate(U, {n: exps.get(n, 0) for n in U.symbols}) != s]
        checks.append(CheckResult("samples reproduced", not bad, f"mismatching samples {bad}" if bad else "all samples exact"))
    factors = {name: [format_value(c) for c in base] for name, base in U.factors.items()}
    return setup, [], checks, {"factors": factors}


def _cmd_collapse(opts):
    path = opts.get("input")
    if not path:
        raise DataError("missing value: pass --input")
    data = _load_config(path)
    try:
        coeffs = {tuple(int(x) for x in key.split(",")): parse_scalar(v) for key, v in data["coefficients"].items()}
        P = HomogeneousUniversalPolynomial(int(data["degree"]), coeffs, int(data["f"]), int(data["r"]))
    except (KeyError, ValueError) as exc:
        raise DataError(f"malformed collapse input: {exc}") from None
    collapsed = collapse_universal_polynomial(P)
    setup = {"degree": P.degree, "f": P.f, "r": P.r}
    return setup, [{"l": i, "value": format_value(c)} for i, c in enumerate(collapsed)], []


def _cmd_verify(opts):
    return {}, [], run_all()


HANDLERS = {
    "gottsche": _cmd_gottsche,
    "chi-vir": _cmd_chi_vir,
    "euler-top": _cmd_euler_top,
    "segre-line": _cmd_segre_line,
    "shift-product": _cmd_shift_product,
    "quot1-integral": _cmd_quot1_integral,
    "extract-universal": _cmd_extract_universal,
    "collapse": _cmd_collapse,
    "verify": _cmd_verify,
}


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    """Execute one command; returns (exit status, report)."""
    try:
        args = build_parser().parse_args(argv)
        opts = _merge(args)
        out = HANDLERS[args.command](opts)
    except UsageError as exc:
        return EXIT_USAGE, {"error": f"usage: {exc}"}
    except DataError as exc:
        return EXIT_DATA, {"error": str(exc)}
    setup, coefficients, checks, *extra = out
    if isinstance(coefficients, TruncatedSeries):
        coefficients = _series_report(coefficients)
    report = {
        "command": args.command,
        "setup": setup,
        "coefficients": coefficients,
        "checks": [{"name": c.name, "status": c.status, "detail": c.detail} for c in checks],
    }
    for more in extra:
        report.update(more)
    report["_json"] = opts["json"]
    status = EXIT_VERIFY if any(not c.ok for c in checks) else EXIT_OK
    return status, report


def _human(report: dict) -> str:
    setup = "  ".join(f"{k}={_pretty(v) if isinstance(v, str) else v}" for k, v in report["setup"].items())
    lines = [f"# {report['command']}  {setup}".rstrip()]
    if report["coefficients"]:
        lines.append(f"{'l':>3}  value")
        for row in report["coefficients"]:
            lines.append(f"{row['l']:>3}  {_pretty(row['value'])}")
    for name, base in report.get("factors", {}).items():
        lines.append(f"factor {name}: " + ", ".join(_pretty(v) for v in base))
    for check in report["checks"]:
        lines.append(f"[{check['status'].upper()}] {check['name']}: {check['detail']}")
    return "\n".join(lines)


def _pretty(value: str) -> str:
    if value.endswith("/1") and "/" not in value[:-2] and " " not in value:
        return value[:-2]
    return value


def main(argv: Sequence[str] | None = None) -> int:
    status, report = run(argv)
    as_json = report.pop("_json", False)
    if "error" in report:
        print(f"quotvir: {report['error']}", file=sys.stderr)
        return status
    if as_json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(_human(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
