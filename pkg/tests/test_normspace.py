import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwplane.errors import GeometryError, SpecError
from dwplane.normspace import (
    DualOf,
    Lp,
    Mixed,
    Polygon,
    RegularPolygon,
    build_norm,
    check_polygon,
    dual_eval,
    format_norm,
    parse_norm,
    polar_polygon,
    sphere_polyline,
    unit_vector,
    unit_vectors,
    validate_norm,
)

from conftest import SHIPPED, dual_norm, norm

HEXAGON = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
SQUARE = [(1, 1), (-1, 1), (-1, -1), (1, -1)]

coord = st.floats(-1e3, 1e3, allow_nan=False)
vec = st.tuples(coord, coord)


# -- grammar -----------------------------------------------------------------


@pytest.mark.parametrize(
    "token, spec",
    [
        ("lp:2", Lp(2.0)),
        ("lp:inf", Lp(math.inf)),
        ("mixed:inf,1", Mixed(math.inf, 1.0)),
        ("regular:12", RegularPolygon(12)),
        ("dual(mixed:2,1)", DualOf(Mixed(2.0, 1.0))),
        ("polygon:1,1;-1,1;-1,-1;1,-1", Polygon(SQUARE)),
    ],
)
def test_parse(token, spec):
    assert parse_norm(token) == spec


@pytest.mark.parametrize("token", SHIPPED + ("dual(lp:inf)", "polygon:1,0;1,1;0,1;-1,0;-1,-1;0,-1"))
def test_format_round_trip(token):
    spec = parse_norm(token)
    assert parse_norm(format_norm(spec)) == spec


@pytest.mark.parametrize(
    "token, needle",
    [("foo:1", "foo"), ("lp:0.5", "0.5"), ("lp:abc", "abc"), ("regular:5", "5"), ("mixed:2", "mixed:2")],
)
def test_bad_tokens_name_the_offender(token, needle):
    with pytest.raises(SpecError, match=needle):
        build_norm(parse_norm(token))


@pytest.mark.parametrize(
    "verts",
    [
        [(1, 1), (-1, 1), (-1, -1)],  # odd
        [(1, -1), (-1, -1), (-1, 1), (1, 1)],  # clockwise
        [(2, 1), (-1, 1), (-2, -1), (1, -2)],  # not symmetric
        [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)],  # collinear
    ],
)
def test_malformed_polygons(verts):
    with pytest.raises(SpecError):
        check_polygon(verts)


# -- evaluation ----------------------------------------------------------------


def test_evaluation_examples():
    assert norm("mixed:inf,1")((1, -0.5)) == pytest.approx(1.5)
    assert norm("lp:2")((3, 4)) == pytest.approx(5)
    assert norm("regular:12")((math.sqrt(3) / 2, 0.5)) == pytest.approx(1, abs=1e-12)


def test_mixed_quadrant_rule():
    h = norm("mixed:2,1")
    assert h((1, 1)) == pytest.approx(math.sqrt(2))
    assert h((1, -1)) == pytest.approx(2)
    assert h((0, -3)) == pytest.approx(3)


def test_vectorised_evaluation_matches_scalar():
    h = norm("mixed:2,1")
    pts = np.random.default_rng(3).standard_normal((50, 2))
    batch = h(pts)
    assert batch.shape == (50,)
    assert np.allclose(batch, [h(p) for p in pts], rtol=0, atol=1e-15)


@pytest.mark.parametrize("spec", SHIPPED + ("dual(mixed:2,1)", "lp:1", "lp:3"))
@settings(max_examples=60, deadline=None)
@given(x=vec, y=vec, a=st.floats(-1e3, 1e3, allow_nan=False))
def test_norm_axioms(spec, x, y, a):
    h = norm(spec)
    x = np.array(x)
    y = np.array(y)
    nx, ny = h(x), h(y)
    scale = 1 + nx + ny
    assert nx >= 0
    assert h(a * x) == pytest.approx(abs(a) * nx, rel=1e-9, abs=1e-9)
    assert h(x + y) <= nx + ny + 1e-9 * scale


@pytest.mark.parametrize(
    "spec, theta, expected",
    [
        ("lp:inf", math.pi / 4, (1, 1)),
        ("lp:2", math.pi / 2, (0, 1)),
        ("mixed:inf,1", 3 * math.pi / 4, (-0.5, 0.5)),
    ],
)
def test_unit_vector(spec, theta, expected):
    assert np.allclose(unit_vector(norm(spec), theta), expected, atol=1e-12)


@pytest.mark.parametrize("spec", SHIPPED + ("dual(mixed:2,1)",))
def test_unit_vectors_are_unit(spec):
    h = norm(spec)
    U = unit_vectors(h, np.linspace(0, 2 * math.pi, 101))
    assert np.allclose(h(U), 1, atol=1e-12)


def test_regular_12_sphere_matches_vertex_table():
    pts = sphere_polyline(norm("regular:12"), 12)
    expected = [(math.cos(k * math.pi / 6), math.sin(k * math.pi / 6)) for k in range(12)]
    assert np.allclose(pts, expected, atol=1e-12)


def test_sphere_polyline_requires_points():
    with pytest.raises(ValueError):
        sphere_polyline(norm("lp:2"), 2)


# -- validation ------------------------------------------------------------------


@pytest.mark.parametrize("spec, samples", [("mixed:2,1", 10**5), ("lp:1", 10**4), ("mixed:1,2", 10**5)])
def test_validate_known_norms(spec, samples):
    rep = validate_norm(norm(spec), samples, 1)
    assert rep.is_norm
    assert rep.samples_used == samples
    assert rep.worst_triangle_violation <= 1e-9


def test_validate_flags_a_non_norm():
    from dwplane.normspace import NormHandle

    # the l_{1/2} quasi-norm violates the triangle inequality
    def half(x1, x2):
        return (np.sqrt(np.abs(x1)) + np.sqrt(np.abs(x2))) ** 2

    fake = NormHandle(Lp(2.0), half)
    rep = validate_norm(fake, 1000, 0)
    assert not rep.is_norm
    assert rep.failures


# -- duality -----------------------------------------------------------------------


def test_dual_examples():
    assert dual_eval(norm("lp:inf"), (1, 1)) == pytest.approx(2)
    assert dual_eval(norm("mixed:2,1"), (0, 1)) == pytest.approx(1, abs=1e-8)
    assert dual_eval(build_norm(Polygon(SQUARE)), (1, 0)) == pytest.approx(1)


def test_polar_square_is_diamond():
    assert np.allclose(polar_polygon(SQUARE), [(1, 0), (0, 1), (-1, 0), (0, -1)])


def test_polar_hexagon():
    expected = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    assert np.allclose(polar_polygon(HEXAGON), expected)
    hexagon = build_norm(Polygon(HEXAGON))
    polar = build_norm(Polygon(expected))
    th = 2 * math.pi * np.arange(360) / 360
    for y in np.column_stack([np.cos(th), np.sin(th)]):
        assert dual_eval(hexagon, y) == pytest.approx(polar(y), abs=1e-12)


def test_polar_regular_12():
    P = np.array(polar_polygon(norm("regular:12").polygon.vertices))
    radii = np.hypot(P[:, 0], P[:, 1])
    assert np.allclose(radii, 1 / math.cos(math.pi / 12))
    angles = np.mod(np.arctan2(P[:, 1], P[:, 0]), 2 * math.pi)
    assert np.allclose(angles, math.pi / 12 + np.arange(12) * math.pi / 6)


def test_polar_of_polar_is_original():
    twice = polar_polygon(polar_polygon(HEXAGON))
    assert np.allclose(twice, HEXAGON)


def test_polar_degenerate():
    with pytest.raises((GeometryError, SpecError)):
        polar_polygon([(1, 0), (1, 1e-18), (-1, 0), (-1, -1e-18)])


@pytest.mark.parametrize("spec", ["mixed:2,1", "lp:3", "mixed:inf,1"])
def test_dual_handle_matches_support_function(spec):
    d = dual_norm(spec)
    th = 2 * math.pi * np.arange(97) / 97
    Y = np.column_stack([np.cos(th), np.sin(th)])
    exact = np.array([dual_eval(norm(spec), y) for y in Y])
    assert np.allclose(d(Y), exact, rtol=0, atol=1e-8)


def test_dual_of_mixed_2_1_is_mixed_2_inf():
    th = 2 * math.pi * np.arange(500) / 500
    Y = np.column_stack([np.cos(th), np.sin(th)])
    assert np.allclose(dual_norm("mixed:2,1")(Y), norm("mixed:2,inf")(Y), rtol=0, atol=1e-8)


def test_dual_of_lp_is_conjugate():
    th = np.linspace(0, 2 * math.pi, 50)
    Y = np.column_stack([np.cos(th), np.sin(th)])
    assert np.allclose(dual_norm("lp:3")(Y), norm("lp:1.5")(Y))
    assert np.allclose(dual_norm("lp:inf")(Y), norm("lp:1")(Y))


@settings(max_examples=40, deadline=None)
@given(y=vec)
def test_duality_inequality(y):
    # x . y <= ||x|| ||y||_*  for every x on the sphere
    h = norm("mixed:2,1")
    y = np.array(y)
    X = unit_vectors(h, np.linspace(0, 2 * math.pi, 64, endpoint=False))
    assert np.max(X @ y) <= dual_eval(h, y) * (1 + 1e-9) + 1e-12
