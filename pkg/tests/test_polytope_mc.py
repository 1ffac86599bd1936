import math
from fractions import Fraction

import numpy as np
import pytest

from lorentz_covol.errors import NotHyperbolic, NotUnitNormal, ParseError
from lorentz_covol.polytope_mc import (
    build_orthoscheme_normals,
    build_triangle_normals,
    coxeter_admissible,
    format_normals,
    gram_matrix,
    load_delta7,
    load_fixture,
    load_p7,
    load_sigma7,
    mc_volume,
    mc_volume_sweep,
    normals_from_gram,
    parse_normals,
    validate_sigma,
)
from lorentz_covol.surd import SurdScalar, exact_cos_pi_over


def test_fixture_shapes():
    assert (load_delta7().ambient_dim, load_delta7().sides) == (8, 8)
    assert (load_p7().ambient_dim, load_p7().sides) == (8, 9)
    assert len(load_sigma7()) == 8


@pytest.mark.parametrize("name", ["delta7", "p7", "triangle246", "p3"])
def test_fixtures_unit_and_coxeter(name):
    spec = load_fixture(name)
    G = gram_matrix(spec)
    assert all(G[i][i] == SurdScalar(1) for i in range(spec.sides))
    assert coxeter_admissible(spec) == []


def test_sigma_is_isometric_involution():
    assert validate_sigma()


def test_sigma_failure_is_reported():
    sigma = load_sigma7()
    sigma[0][0], sigma[0][1] = sigma[0][1], sigma[0][0]
    bad = validate_sigma(sigma)
    assert not bad
    assert "failed" in bad.describe()
    scaled = [[x * 2 for x in row] for row in load_sigma7()]
    check = validate_sigma(scaled)
    assert not check.preserves_form and not check.involution


def test_format_parse_round_trip():
    spec = load_delta7()
    again = parse_normals(format_normals(spec))
    assert again.normals == spec.normals


def test_not_unit_normal():
    text = "dim 3\nsides 2\n1 2\n0 0\n0 1\n"
    with pytest.raises(NotUnitNormal) as info:
        parse_normals(text)
    assert info.value.index == 2


@pytest.mark.parametrize(
    "text",
    ["dim 3\nsides 1\n1\n0\n", "sides 1\n1\n0\n0\n", "dim 3\nsides 1\n1\n0\nsqrt(5)\n", "dim 3\nsides 2\n1\n0\n0\n"],
)
def test_malformed_normals(text):
    with pytest.raises((ParseError, ValueError)):
        parse_normals(text)


@pytest.mark.parametrize("angles", [(2, 3, 6), (3, 3, 3), (2, 4, 4), (2, 2, 7)])
def test_non_hyperbolic_triangles(angles):
    with pytest.raises(NotHyperbolic):
        build_triangle_normals(angles)


@pytest.mark.parametrize("angles", [(2, 4, 6), (2, 6, 6)])
def test_triangle_gram_entries_exact(angles):
    spec = build_triangle_normals(angles)
    assert spec.exact
    p, q, r = angles
    G = gram_matrix(spec)
    assert G[0][1] == -exact_cos_pi_over(p)
    assert G[1][2] == -exact_cos_pi_over(q)
    assert G[0][2] == -exact_cos_pi_over(r)


@pytest.mark.parametrize("angles", [(2, 4, 6), (3, 3, 4), (4, 4, 4), (2, 4, 5)])
def test_triangle_gram_entries_numeric(angles):
    N = build_triangle_normals(angles).float_normals
    G = N @ np.diag([1.0, 1.0, -1.0]) @ N.T
    p, q, r = angles
    expected = np.array(
        [
            [1, -math.cos(math.pi / p), -math.cos(math.pi / r)],
            [-math.cos(math.pi / p), 1, -math.cos(math.pi / q)],
            [-math.cos(math.pi / r), -math.cos(math.pi / q), 1],
        ]
    )
    assert np.allclose(G, expected, atol=1e-12)


def test_triangle_outside_field_is_float():
    spec = build_triangle_normals((2, 3, 7))
    assert not spec.exact
    N = spec.float_normals
    J = np.diag([1.0, 1.0, -1.0])
    G = N @ J @ N.T
    assert np.allclose(np.diag(G), 1)
    assert math.isclose(G[1, 2], -math.cos(math.pi / 3), abs_tol=1e-12)
    assert math.isclose(G[0, 2], -math.cos(math.pi / 7), abs_tol=1e-12)


def test_normals_from_gram_rejects_wrong_signature():
    one, h = SurdScalar(1), SurdScalar(Fraction(-1, 2))
    with pytest.raises(NotHyperbolic):
        normals_from_gram([[one, h, SurdScalar(0)], [h, one, h], [SurdScalar(0), h, one]])


def test_orthoscheme_p3_gram():
    G = gram_matrix(build_orthoscheme_normals((4, 3, 6)))
    assert G[0][1] == -exact_cos_pi_over(4)
    assert G[1][2] == -exact_cos_pi_over(3)
    assert G[2][3] == -exact_cos_pi_over(6)
    assert G[0][2] == G[0][3] == G[1][3] == SurdScalar(0)


def test_mc_reproducible():
    spec = load_fixture("triangle246")
    a = mc_volume(spec, 200_000, 5)
    b = mc_volume(spec, 200_000, 5)
    c = mc_volume(spec, 200_000, 6)
    assert a.estimate == b.estimate
    assert a.estimate != c.estimate


@pytest.mark.parametrize("domain", ["box", "ball"])
@pytest.mark.parametrize(
    "angles",
    [(2, 4, 6), (2, 3, 7), (3, 3, 4)],
)
def test_mc_triangle_area_within_error(angles, domain):
    # compact triangles: the area is the angle defect
    p, q, r = angles
    exact = math.pi * (1 - 1 / p - 1 / q - 1 / r)
    res = mc_volume(build_triangle_normals(angles), 1_000_000, 11, domain=domain)
    assert abs(res.estimate - exact) < 5 * res.std_error


def test_mc_sweep_on_cusped_p3():
    res = mc_volume_sweep(load_fixture("p3"), 2_000_000, 3)
    assert res.extrapolated
    assert len(res.per_eps) == 3
    assert abs(res.estimate - 0.1057230840) < 5 * res.std_error


def test_mc_parameter_checks():
    spec = load_fixture("triangle246")
    with pytest.raises(ValueError):
        mc_volume(spec, 100, 1)
    with pytest.raises(ValueError):
        mc_volume(spec, 100_000, 1, truncation_eps=0)
    with pytest.raises(ValueError):
        mc_volume(spec, 100_000, 1, domain="cube")
    with pytest.raises(ValueError):
        mc_volume_sweep(spec, 100_000, 1, eps_values=(1e-3,))
