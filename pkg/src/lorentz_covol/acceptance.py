"""The acceptance suite: eleven end-to-end checks, each returning pass/fail with detail."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import iv

from .arith_kernel import SymbolicVolume, _endpoints, iv_precision
from .covolume import (
    EXAMPLE_VOLUMES,
    TABLE1,
    Table1Mismatch,
    _check_row,
    commensurability_ratio,
    covolume,
    euler_characteristic,
    gauss_bonnet,
    siegel_assembly,
)
from .coxeter import chiswell_chi, parse_graph
from .dirichlet import LValueRequest, l_euler_product, l_series, l_series_interval
from .local_density import (
    brute_force_count,
    closed_form_count,
    e8_closed_form,
    e_p2_p3_closed_form,
    good_prime_count,
)
from .lobachevsky import check_character_identity, vol_p3_via_lobachevsky
from .numtheory import QFormSpec
from .polytope_mc import (
    _data,
    coxeter_admissible,
    load_fixture,
    mc_volume,
    mc_volume_sweep,
    validate_sigma,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def table1_reproduction() -> tuple[bool, str]:
    start = time.perf_counter()
    failures = []
    for row in TABLE1:
        try:
            _check_row(row, 30)
        except Table1Mismatch as exc:
            failures.append(str(exc))
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        failures.append(f"took {elapsed:.1f} s (limit 60 s)")
    if failures:
        return False, "; ".join(failures)
    return True, f"rows n=2..13 match symbolically and numerically in {elapsed:.2f} s"


def density_equalities() -> tuple[bool, str]:
    start = time.perf_counter()
    cases = []
    for n in (2, 3):
        for d in (1, 3, 5, 7, 15):
            spec = QFormSpec.make(n, d)
            cases.append((spec, 8, e8_closed_form(spec).count))
    for n, d, p in ((2, 3, 3), (2, 5, 5)):
        spec = QFormSpec.make(n, d)
        e2, e3 = e_p2_p3_closed_form(spec, p)
        cases += [(spec, p * p, e2), (spec, p**3, e3)]
    for n in (2, 3):
        for d in (1, 3, 5, 7, 15):
            spec = QFormSpec.make(n, d)
            for p in (3, 5, 7, 11, 13):
                if d % p:
                    cases.append((spec, p, good_prime_count(spec, p)))
    bad = []
    for spec, q, expected in cases:
        got = brute_force_count(spec, q).count
        if got != expected:
            bad.append(f"n={spec.n} d={spec.d} q={q}: brute {got} vs closed {expected}")
    elapsed = time.perf_counter() - start
    if elapsed >= 600:
        bad.append(f"took {elapsed:.0f} s (limit 600 s)")
    if bad:
        return False, "; ".join(bad)
    return True, f"{len(cases)} exact count equalities in {elapsed:.1f} s"


def multiplicativity_stabilization() -> tuple[bool, str]:
    spec = QFormSpec.make(2, 5)
    e72 = brute_force_count(spec, 72).count
    e8 = brute_force_count(spec, 8).count
    e9 = brute_force_count(spec, 9).count
    bad = []
    if e72 != e8 * e9:
        bad.append(f"E_72 = {e72} but E_8 E_9 = {e8 * e9}")
    if closed_form_count(spec, 72) != e72:
        bad.append("closed-form E_72 disagrees")
    details = [f"E_72 = {e72} = {e8} * {e9}"]
    for p in (3, 5, 7):
        spec = QFormSpec.make(2, 1)
        # d = 1 keeps every odd prime good
        ep = brute_force_count(spec, p).count
        ep2 = brute_force_count(spec, p * p).count
        if Fraction(ep2, ep) != p**3:
            bad.append(f"p={p}: E_p2/E_p = {Fraction(ep2, ep)}, expected {p**3}")
        details.append(f"E_{p * p}/E_{p} = {Fraction(ep2, ep)}")
    if bad:
        return False, "; ".join(bad)
    return True, ", ".join(details)


def siegel_end_to_end() -> tuple[bool, str]:
    parts = []
    for n, d in ((2, 1), (2, 3), (3, 3), (3, 7)):
        spec = QFormSpec.make(n, d)
        try:
            volume, factors = siegel_assembly(spec, use_brute_force=True)
        except Exception as exc:  # AssemblyMismatch or a counting failure
            return False, f"(n={n}, d={d}): {exc}"
        used = ",".join(f"q={f.prime}^{f.exponent_used}" for f in factors)
        parts.append(f"({n},{d}) {volume.render()} [{used}]")
    return True, "; ".join(parts)


def example_volumes() -> tuple[bool, str]:
    bad, good = [], []
    for (n, d), text in EXAMPLE_VOLUMES:
        got = covolume(QFormSpec.make(n, d)).volume
        if got != SymbolicVolume.parse(text):
            bad.append(f"(n={n}, d={d}) gave {got.render()}, expected {text}")
        good.append(got.render())
    if bad:
        return False, "; ".join(bad)
    return True, ", ".join(good)


def euler_consistency() -> tuple[bool, str]:
    bad = []
    for n in (2, 4, 6, 8, 10, 12):
        spec = QFormSpec.make(n, 3)
        chi = euler_characteristic(spec)
        if gauss_bonnet(chi, n) != covolume(spec).volume:
            bad.append(f"n={n}: Gauss-Bonnet of chi={chi} differs from the covolume")
    chi2 = euler_characteristic(QFormSpec.make(2, 3))
    tri = chiswell_chi(parse_graph(_data("triangle246.cox")))
    if chi2 != Fraction(-1, 24) or tri != chi2:
        bad.append(f"chi(2,3) = {chi2}, Chiswell sum of the (2,4,6) triangle = {tri}")
    if bad:
        return False, "; ".join(bad)
    return True, f"n=2..12 consistent; chi(2,3) = {chi2} = Chiswell {tri}"


def ratios() -> tuple[bool, str]:
    got = {n: commensurability_ratio(n) for n in (3, 7)}
    ok = got[3] == Fraction(5, 4) and got[7] == Fraction(153, 4)
    return ok, f"ratio(3) = {got[3]}, ratio(7) = {got[7]}"


TABLE1_L_VALUES = ((2, -3), (3, 12), (4, -3), (5, 12), (6, -3), (7, 12))


def l_function_cross_validation() -> tuple[bool, str]:
    bad, worst = [], 0.0
    for s, D in TABLE1_L_VALUES:
        req = LValueRequest(s, D, 20)
        a = l_series(req)
        b = l_euler_product(req, 10**4)
        diff = abs(a.value - b.value)
        worst = max(worst, float(diff))
        if diff >= mpmath.mpf("1e-6"):
            bad.append(f"L({s},{D}): series {a.value} vs product {b.value}")
    if not check_character_identity(1000):
        bad.append("sin(2k pi/3) = (sqrt3/2)(-3/k) fails for some k <= 1000")
    if bad:
        return False, "; ".join(bad)
    return True, f"largest series/product gap {worst:.2e}; character identity holds for k <= 1000"


def lobachevsky_check() -> tuple[bool, str]:
    lob = vol_p3_via_lobachevsky(20)
    with iv_precision(20):
        lval = l_series_interval(2, -3, 20)
        other = iv.mpf(5) * iv.sqrt(3) / 64 * lval
        gap = _endpoints(abs(lob.interval() - other))[1]
    ok = gap < mpmath.mpf("1e-18")
    return ok, f"|(5/16)Lob(pi/3) - (5 sqrt3/64)L(2,-3)| <= {mpmath.nstr(gap, 3)}"


def fixture_validation() -> tuple[bool, str]:
    bad = []
    for name in ("delta7", "p7"):
        try:
            spec = load_fixture(name)
        except Exception as exc:  # NotUnitNormal or ParseError
            bad.append(f"{name}: {exc}")
            continue
        wrong = coxeter_admissible(spec)
        if wrong:
            bad.append(f"{name}: non-Coxeter Gram entries {wrong}")
    sigma = validate_sigma()
    if not sigma:
        bad.append(f"sigma {sigma.describe()}")
    if bad:
        return False, "; ".join(bad)
    return True, "delta7 (8 normals) and p7 (9 normals) unit and Coxeter; sigma isometric involution"


P3_VOLUME = 1.057230840e-1
P7_VOLUME = 7.240e-5


def monte_carlo() -> tuple[bool, str]:
    tri = mc_volume(load_fixture("triangle246"), 10**6, 42, 1e-4)
    tri_rel = abs(tri.estimate - math.pi / 12) / (math.pi / 12)
    p3 = mc_volume_sweep(load_fixture("p3"), 10**7, 42, (1e-2, 1e-3, 1e-4))
    p3_rel = abs(p3.estimate - P3_VOLUME) / P3_VOLUME
    p7 = mc_volume_sweep(load_fixture("p7"), 10**8, 42, (1e-2, 1e-3, 1e-4))
    p7_rel = abs(p7.estimate - P7_VOLUME) / P7_VOLUME
    ok = tri_rel < 0.005 and p3_rel < 0.02 and p7_rel < 0.25
    return ok, (
        f"triangle {tri.estimate:.6f} ({tri_rel:.2%}), "
        f"P3 {p3.estimate:.5e} ({p3_rel:.2%}), P7 {p7.estimate:.4e} ({p7_rel:.2%})"
    )


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "tabulated d = 3 volumes", table1_reproduction),
    (2, "brute-force vs closed-form densities", density_equalities),
    (3, "multiplicativity and stabilization", multiplicativity_stabilization),
    (4, "end-to-end Siegel assembly", siegel_end_to_end),
    (5, "example volumes", example_volumes),
    (6, "Euler characteristic consistency", euler_consistency),
    (7, "commensurability ratios", ratios),
    (8, "L-function cross-validation", l_function_cross_validation),
    (9, "Lobachevsky check", lobachevsky_check),
    (10, "exact fixture validation", fixture_validation),
    (11, "Monte-Carlo volumes", monte_carlo),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn in CRITERIA:
        if num == number:
            try:
                passed, detail = fn()
            except Exception as exc:
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            return CriterionResult(num, name, passed, detail)
    raise KeyError(f"no criterion {number}")


def run_all() -> list[CriterionResult]:
    return [run_criterion(num) for num, _, _ in CRITERIA]
