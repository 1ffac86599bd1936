"""Command-line interface: ``lorentz-covol <command> [options]``.

Every command emits records with the keys command, inputs, symbolic,
numeric, digits, checks and details, in that order.  ``--format json``
prints one JSON object per line with all numbers as strings.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import mpmath

from .arith_kernel import HighPrecisionReal
from .errors import BudgetExceeded, CovolError, RatioMismatch, Table1Mismatch

log = logging.getLogger("lorentz_covol")


class UsageError(Exception):
    """Bad input detected after argument parsing; exits with status 2."""


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class OutputRecord:
    command: str
    inputs: dict
    symbolic: str | None = None
    numeric: str | None = None
    digits: int | None = None
    checks: list[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": {k: str(v) for k, v in self.inputs.items()},
            "symbolic": self.symbolic,
            "numeric": self.numeric,
            "digits": None if self.digits is None else str(self.digits),
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks
            ],
            "details": {k: str(v) for k, v in self.details.items()},
        }

    def as_text(self) -> str:
        args = " ".join(f"{k}={v}" for k, v in self.inputs.items())
        lines = [f"{self.command} {args}".rstrip()]
        if self.symbolic is not None:
            lines.append(f"  symbolic: {self.symbolic}")
        if self.numeric is not None:
            lines.append(f"  numeric:  {self.numeric}")
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)


def _numeric(value: HighPrecisionReal, digits: int) -> str:
    return value.to_string(digits)


def _spec(n: int, d: int):
    from .numtheory import QFormSpec

    try:
        return QFormSpec.make(n, d)
    except ValueError as exc:
        raise UsageError(f"--n {n} --d {d}: {exc}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_covol(args) -> list[OutputRecord]:
    from .covolume import covolume

    res = covolume(_spec(args.n, args.d))
    rec = OutputRecord(
        "covol",
        {"n": args.n, "d": args.d},
        res.volume.render(),
        _numeric(res.volume.numeric(args.digits + 2), args.digits),
        args.digits,
    )
    if res.euler_char is not None:
        rec.details["euler_characteristic"] = res.euler_char
    return [rec]


def cmd_euler(args) -> list[OutputRecord]:
    from .covolume import euler_characteristic

    spec = _spec(args.n, args.d)
    if args.n % 2:
        raise UsageError(f"--n {args.n}: the Euler characteristic vanishes for odd n")
    chi = euler_characteristic(spec)
    value = HighPrecisionReal.exact(chi)
    return [OutputRecord("euler", {"n": args.n, "d": args.d}, str(chi), _numeric(value, args.digits), args.digits)]


def cmd_ratio(args) -> list[OutputRecord]:
    from .covolume import commensurability_closed_form, commensurability_ratio

    inputs = {"n": args.n}
    try:
        r = commensurability_ratio(args.n)
    except RatioMismatch as exc:
        return [OutputRecord("ratio", inputs, checks=[Check("closed form", False, str(exc))])]
    except ValueError as exc:
        raise UsageError(f"--n {args.n}: {exc}") from None
    closed = commensurability_closed_form(args.n)
    check = Check("matches (2^((n-1)/2) + (-1)^((n+1)/4))(2^((n+1)/2) + 1)/4", r == closed, str(closed))
    return [OutputRecord("ratio", inputs, str(r), _numeric(HighPrecisionReal.exact(r), args.digits), args.digits, [check])]


def cmd_be_vol(args) -> list[OutputRecord]:
    from .covolume import be_volume

    try:
        vol = be_volume(args.n)
    except ValueError as exc:
        raise UsageError(f"--n {args.n}: {exc}") from None
    return [
        OutputRecord(
            "be-vol", {"n": args.n}, vol.render(), _numeric(vol.numeric(args.digits + 2), args.digits), args.digits
        )
    ]


def cmd_table1(args) -> list[OutputRecord]:
    from .covolume import TABLE1, _check_row

    out = []
    for row in TABLE1:
        rec = OutputRecord(
            "table1",
            {"n": row.n},
            row.volume_gamma.render(),
            row.numeric,
            10,
            details={"sym_order": row.sym_order, "volume_p": row.volume_p.render()},
        )
        if args.check:
            try:
                _check_row(row, args.digits)
                rec.checks.append(Check("recomputed", True, f"{args.digits} digits"))
            except Table1Mismatch as exc:
                rec.checks.append(Check("recomputed", False, str(exc)))
        out.append(rec)
    return out


def cmd_local(args) -> list[OutputRecord]:
    from .local_density import brute_force_count, closed_form_count

    spec = _spec(args.n, args.d)
    if args.q < 2:
        raise UsageError(f"--q {args.q}: modulus must be at least 2")
    closed = closed_form_count(spec, args.q)
    inputs = {"n": args.n, "d": args.d, "q": args.q}
    rec = OutputRecord("local", inputs, digits=0)
    if closed is not None:
        rec.details["closed_form"] = closed
    if args.brute_force:
        res = brute_force_count(spec, args.q, args.budget)
        rec.details["brute_force"] = res.count
        rec.details["nodes_explored"] = res.nodes_explored
        count = res.count
        if closed is not None:
            rec.checks.append(Check("match", res.count == closed, f"brute force {res.count}, closed form {closed}"))
    elif closed is None:
        raise UsageError(f"--q {args.q}: no closed form covers this modulus; add --brute-force")
    else:
        count = closed
    rec.symbolic = str(count)
    rec.numeric = str(count)
    return [rec]


def cmd_lseries(args) -> list[OutputRecord]:
    from .dirichlet import LValueRequest, l_euler_product, l_series

    try:
        req = LValueRequest(args.s, args.D, args.digits)
    except ValueError as exc:
        raise UsageError(f"--s {args.s} --D {args.D}: {exc}") from None
    value = l_series(req, method=args.method)
    rec = OutputRecord(
        "lseries",
        {"s": args.s, "D": args.D},
        f"L({args.s},{args.D})",
        _numeric(value, args.digits),
        args.digits,
        details={"error_bound": mpmath.nstr(value.error_bound, 3)},
    )
    if args.euler_bound:
        prod = l_euler_product(req, args.euler_bound)
        rec.details["euler_product"] = prod.to_string(min(args.digits, 15))
        rec.details["euler_error_bound"] = mpmath.nstr(prod.error_bound, 3)
        rec.checks.append(
            Check("euler product encloses series", prod.overlaps(value), f"primes <= {args.euler_bound}")
        )
    return [rec]


def _graph(path: str):
    from .coxeter import parse_graph

    return parse_graph(_read(path))


def cmd_chiswell(args) -> list[OutputRecord]:
    from .coxeter import chiswell_chi

    chi = chiswell_chi(_graph(args.graph))
    return [
        OutputRecord(
            "chiswell", {"graph": args.graph}, str(chi), _numeric(HighPrecisionReal.exact(chi), args.digits), args.digits
        )
    ]


def cmd_gauss_bonnet(args) -> list[OutputRecord]:
    from .coxeter import chiswell_chi, gauss_bonnet_volume

    if args.n % 2 or args.n < 2:
        raise UsageError(f"--n {args.n}: Gauss-Bonnet needs an even dimension")
    graph = _graph(args.graph)
    vol = gauss_bonnet_volume(graph, args.n)
    return [
        OutputRecord(
            "gauss-bonnet",
            {"graph": args.graph, "n": args.n},
            vol.render(),
            _numeric(vol.numeric(args.digits + 2), args.digits),
            args.digits,
            details={"euler_characteristic": chiswell_chi(graph)},
        )
    ]


def _parse_theta(text: str) -> Fraction:
    """Accept 'a/b' or the same with a 'pi' factor as in 'pi/3' or '2*pi/5'."""
    t = text.replace(" ", "")
    t = t.replace("*pi", "").replace("pi*", "")
    if t.startswith("pi"):
        t = "1" + t[2:]
    if t.endswith("pi"):
        t = t[:-2] or "1"
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--theta {text!r}: expected a rational multiple of pi such as 1/3") from None


def cmd_lobachevsky(args) -> list[OutputRecord]:
    from .lobachevsky import LobachevskyRequest, lobachevsky

    theta = _parse_theta(args.theta)
    value = lobachevsky(LobachevskyRequest(theta.numerator, theta.denominator, args.digits + 1))
    return [
        OutputRecord(
            "lobachevsky",
            {"theta": f"{theta}*pi"},
            None,
            _numeric(value, args.digits),
            args.digits,
            details={"error_bound": mpmath.nstr(value.error_bound, 3)},
        )
    ]


def _polytope(name: str):
    from .polytope_mc import load_fixture, parse_normals

    if not os.path.exists(name):
        try:
            return load_fixture(name)
        except KeyError:
            raise UsageError(
                f"--polytope {name}: no such file and not one of triangle246, p3, delta7, p7"
            ) from None
    return parse_normals(_read(name))


def cmd_mc_vol(args) -> list[OutputRecord]:
    from .polytope_mc import DEFAULT_SWEEP, mc_volume, mc_volume_sweep

    spec = _polytope(args.polytope)
    if args.samples < 1:
        raise UsageError(f"--samples {args.samples}: must be positive")
    inputs = {"polytope": args.polytope, "samples": args.samples, "seed": args.seed}
    if args.eps_sweep:
        res = mc_volume_sweep(spec, args.samples, args.seed, DEFAULT_SWEEP, args.domain)
        inputs["eps"] = ",".join(repr(e) for e in DEFAULT_SWEEP)
    else:
        res = mc_volume(spec, args.samples, args.seed, args.eps, args.domain)
        inputs["eps"] = args.eps
    details = {"std_error": f"{res.std_error:.6e}", "hits": res.hits, "domain": args.domain}
    for eps, est in res.per_eps:
        details[f"estimate_eps_{eps!r}"] = f"{est:.6e}"
    return [OutputRecord("mc-vol", inputs, None, f"{res.estimate:.6e}", 7, details=details)]


def cmd_verify(args) -> list[OutputRecord]:
    from .acceptance import CRITERIA, run_criterion

    wanted = args.only or [num for num, _, _ in CRITERIA]
    out = []
    for num in wanted:
        try:
            res = run_criterion(num)
        except KeyError:
            raise UsageError(f"--only {num}: criteria are numbered 1..{len(CRITERIA)}") from None
        out.append(
            OutputRecord("verify", {"criterion": num}, checks=[Check(res.name, res.passed, res.detail)])
        )
    return out


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="lorentz-covol",
        description="Covolumes of unit groups of diag(1, ..., 1, -d) and related checks.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def nd(p):
        p.add_argument("--n", type=int, required=True, help="dimension, n >= 2")
        p.add_argument("--d", type=int, required=True, help="odd square-free d > 0")

    p = add("covol", cmd_covol, "covolume of the unit group of f_d^n")
    nd(p)
    p.add_argument("--digits", type=int, default=12)

    p = add("euler", cmd_euler, "Euler characteristic for even n")
    nd(p)
    p.add_argument("--digits", type=int, default=12)

    p = add("ratio", cmd_ratio, "covolume(n, 3) / Belolipetsky-Emery volume for n = 3 mod 4")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", type=int, default=12)

    p = add("be-vol", cmd_be_vol, "Belolipetsky-Emery minimal volume for odd n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", type=int, default=12)

    p = add("table1", cmd_table1, "the tabulated d = 3 volumes for n = 2..13")
    p.add_argument("--check", action="store_true", help="recompute every row")
    p.add_argument("--digits", type=int, default=30)

    p = add("local", cmd_local, "E_q(S), the number of A mod q with A^t S A = S")
    nd(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--brute-force", action="store_true", help="count exhaustively as well")
    p.add_argument("--budget", type=int, default=None, help="search node limit")

    p = add("lseries", cmd_lseries, "Dirichlet L-value L(s, D) with an error bound")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--D", type=int, required=True, help="fundamental discriminant")
    p.add_argument("--digits", type=int, default=30)
    p.add_argument("--method", choices=("grouped", "direct"), default="grouped")
    p.add_argument("--euler-bound", type=int, default=None, help="also evaluate the Euler product to this prime")

    p = add("chiswell", cmd_chiswell, "Euler characteristic of a Coxeter group from its diagram")
    p.add_argument("--graph", required=True)
    p.add_argument("--digits", type=int, default=12)

    p = add("gauss-bonnet", cmd_gauss_bonnet, "volume from the Euler characteristic of a diagram")
    p.add_argument("--graph", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", type=int, default=12)

    p = add("lobachevsky", cmd_lobachevsky, "Lobachevsky function at a rational multiple of pi")
    p.add_argument("--theta", required=True, help="a/b meaning (a/b) pi")
    p.add_argument("--digits", type=int, default=20)

    p = add("mc-vol", cmd_mc_vol, "Monte-Carlo volume of a polytope given by unit normals")
    p.add_argument("--polytope", required=True, help="normals file or triangle246, p3, delta7, p7")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--eps", type=float, default=1e-4, help="truncation radius 1 - eps")
    group.add_argument("--eps-sweep", action="store_true", help="extrapolate over eps = 1e-2, 1e-3, 1e-4")
    p.add_argument("--domain", choices=("box", "ball"), default="box")

    p = add("verify", cmd_verify, "run the acceptance suite")
    p.add_argument("--only", type=int, nargs="+", metavar="N", help="run only these criteria")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    for name in ("digits",):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
            parser.error(f"--{name} must be positive")
    try:
        records = args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"{parser.prog} {args.command}: budget exceeded: {exc}", file=sys.stderr)
        return 1
    except (CovolError, ValueError) as exc:
        # malformed input files and out-of-range parameters
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    for rec in records:
        if args.format == "json":
            print(json.dumps(rec.as_json()))
        else:
            print(rec.as_text())
    return 0 if all(r.ok for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
