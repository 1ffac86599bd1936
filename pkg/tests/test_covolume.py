import logging
from dataclasses import replace
from fractions import Fraction

import mpmath
import pytest

from lorentz_covol.arith_kernel import SymbolicVolume
from lorentz_covol.covolume import (
    EXAMPLE_VOLUMES,
    TABLE1,
    _check_row,
    be_volume,
    commensurability_closed_form,
    commensurability_ratio,
    covolume,
    euler_characteristic,
    gauss_bonnet,
    siegel_assembly,
    table1,
)
from lorentz_covol.errors import Table1Mismatch
from lorentz_covol.numtheory import QFormSpec, kronecker


def hurwitz_l(s, D):
    m = abs(D)
    return mpmath.fsum(kronecker(D, r) * mpmath.zeta(s, mpmath.mpf(r) / m) for r in range(1, m + 1)) / mpmath.mpf(m) ** s


@pytest.mark.parametrize("nd, text", EXAMPLE_VOLUMES)
def test_example_volumes(nd, text):
    assert covolume(QFormSpec.make(*nd)).volume == SymbolicVolume.parse(text)


def test_n7_rendering():
    assert covolume(QFormSpec.make(7, 3)).volume.render() == "(51*sqrt(3)/1146880)*L(4,-3)"


def test_n3_numeric_against_hurwitz_oracle():
    mpmath.mp.dps = 40
    vol = covolume(QFormSpec.make(3, 3)).volume.numeric(25)
    oracle = 5 * mpmath.sqrt(3) / 64 * hurwitz_l(2, -3)
    assert abs(vol.value - oracle) < mpmath.mpf("1e-24")
    assert mpmath.nstr(oracle, 10) == "0.105723084"


@pytest.mark.parametrize("n", range(2, 10))
@pytest.mark.parametrize("d", [1, 3, 5, 7, 15, 21, 105])
def test_siegel_assembly_closed_forms_agree(n, d):
    spec = QFormSpec.make(n, d)
    volume, factors = siegel_assembly(spec)
    assert volume == covolume(spec).volume
    assert sorted(f.prime for f in factors) == [2, *spec.prime_factors_of_d]


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
@pytest.mark.parametrize("d", [1, 3, 5, 7, 15])
def test_gauss_bonnet_consistency(n, d):
    spec = QFormSpec.make(n, d)
    assert gauss_bonnet(euler_characteristic(spec), n) == covolume(spec).volume


def test_euler_characteristic_values():
    assert euler_characteristic(QFormSpec.make(2, 3)) == Fraction(-1, 24)
    assert euler_characteristic(QFormSpec.make(2, 1)) == Fraction(-1, 8)
    assert euler_characteristic(QFormSpec.make(4, 3)) == Fraction(1, 384)


def test_euler_characteristic_odd_n():
    spec = QFormSpec.make(3, 3)
    with pytest.raises(ValueError):
        euler_characteristic(spec)
    assert euler_characteristic(spec, odd_ok=True) == 0


@pytest.mark.parametrize("n, r", [(3, Fraction(5, 4)), (7, Fraction(153, 4))])
def test_ratio_values(n, r):
    assert commensurability_ratio(n) == r


@pytest.mark.parametrize("n", [3, 7, 11, 15, 19])
def test_ratio_is_symbolic_quotient(n):
    q = covolume(QFormSpec.make(n, 3)).volume / be_volume(n)
    assert q.is_rational()
    assert q.to_fraction() == commensurability_closed_form(n) == commensurability_ratio(n)


def test_be_volume():
    assert be_volume(3) == SymbolicVolume.parse("sqrt(3)/16*L(2,-3)")
    with pytest.raises(ValueError):
        be_volume(5)


def test_table1_rows_and_check(caplog):
    rows = table1()
    assert [r.n for r in rows] == list(range(2, 14))
    assert [r.sym_order for r in rows] == [1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 4]
    with caplog.at_level(logging.WARNING):
        table1(check=True)
    assert any("n=10" in rec.message for rec in caplog.records)


def test_table1_spot_rows():
    by_n = {r.n: r for r in TABLE1}
    assert by_n[2].volume_gamma == SymbolicVolume(Fraction(1, 12), 1)
    assert by_n[10].volume_gamma == SymbolicVolume.parse("341*pi^5/987614208000")
    assert by_n[10].sym_order == 2
    assert by_n[10].numeric == "2.113228256e-7"
    assert by_n[12].numeric == "7.804122909e-9"


@pytest.mark.parametrize(
    "field, value",
    [("numeric", "2.7e-1"), ("volume_gamma", SymbolicVolume(Fraction(1, 11), 1)), ("printed_volume_p", "pi/13")],
)
def test_table1_mismatch_names_field(field, value):
    row = replace(TABLE1[0], **{field: value})
    with pytest.raises(Table1Mismatch) as info:
        _check_row(row, 20)
    assert "n=2" in str(info.value)
