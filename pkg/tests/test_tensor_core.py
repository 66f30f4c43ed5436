import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from shgeff import crystal_db
from shgeff.tensor_core import (
    SymmetryClass,
    SymmetryError,
    classify_symmetry,
    contract_xy,
    contract_xyy,
    contract_yy,
    from_voigt,
    q_forms,
    r_forms,
    random_kleinman,
    random_piezo,
    rotate,
    symmetrize_piezo,
    to_voigt,
    trilinear,
)

from conftest import brute_trilinear

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
tensors = arrays(np.float64, (3, 3, 3), elements=finite)
vec3 = arrays(np.float64, (3,), elements=finite)
angles = st.floats(0, 2 * math.pi, allow_nan=False)


def _b_from(a, theta):
    z1, z2 = math.cos(theta), math.sin(theta)
    return np.array([a[1] * z1, -a[0] * z1, z2])


# ---------------------------------------------------------------- Voigt

def test_from_voigt_kdp_family():
    d = np.zeros((3, 6))
    d[0, 3] = d[1, 4] = d[2, 5] = 1.0
    t = from_voigt(d)
    expected = np.zeros((3, 3, 3))
    for p in itertools.permutations((0, 1, 2)):
        expected[p] = 1.0
    np.testing.assert_array_equal(t, expected)


def test_from_voigt_zero_and_d33():
    np.testing.assert_array_equal(from_voigt(np.zeros((3, 6))), np.zeros((3, 3, 3)))
    d = np.zeros((3, 6))
    d[2, 2] = 2.0
    t = from_voigt(d)
    assert t[2, 2, 2] == 2.0
    assert np.count_nonzero(t) == 1


def test_from_voigt_rejects_bad_input():
    d = np.zeros((3, 6))
    d[0, 0] = np.nan
    with pytest.raises(ValueError):
        from_voigt(d)
    with pytest.raises(ValueError):
        from_voigt(np.zeros((3, 5)))


def test_to_voigt_examples(kdp):
    d = to_voigt(kdp)
    expected = np.zeros((3, 6))
    expected[0, 3] = expected[1, 4] = expected[2, 5] = 1.0
    np.testing.assert_array_equal(d, expected)
    np.testing.assert_array_equal(to_voigt(np.zeros((3, 3, 3))), np.zeros((3, 6)))


def test_to_voigt_symmetry_error_names_worst_index():
    t = np.zeros((3, 3, 3))
    t[0, 1, 2] = 1.0
    with pytest.raises(SymmetryError) as err:
        to_voigt(t)
    assert err.value.worst_index in {(1, 2, 3), (1, 3, 2)}


def test_voigt_round_trip_random(rng):
    for _ in range(50):
        t = random_piezo(rng)
        np.testing.assert_array_equal(from_voigt(to_voigt(t)), t)


# ---------------------------------------------------------------- symmetry

def _is_kleinman_by_enumeration(t):
    for idx in itertools.product(range(3), repeat=3):
        for p in itertools.permutations(idx):
            if t[idx] != t[p]:
                return False
    return True


def test_classify_examples(kdp):
    assert classify_symmetry(kdp) is SymmetryClass.KLEINMAN
    t4mm = crystal_db.build("4mm", {"chi15": 1.0, "chi33": 1.0})
    assert _is_kleinman_by_enumeration(t4mm)
    assert classify_symmetry(t4mm) is SymmetryClass.KLEINMAN
    t = np.zeros((3, 3, 3))
    t[0, 0, 2] = t[0, 2, 0] = 1.0
    assert classify_symmetry(t) is SymmetryClass.PIEZO_TYPE


def test_classify_general_and_tolerance():
    t = np.zeros((3, 3, 3))
    t[0, 1, 2] = 1e-13
    assert classify_symmetry(t) is SymmetryClass.KLEINMAN  # within default tol
    assert classify_symmetry(t, tol=0.0) is SymmetryClass.GENERAL
    with pytest.raises(ValueError):
        classify_symmetry(t, tol=-1.0)


# ---------------------------------------------------------------- contractions

def test_contract_xyy_examples(kdp):
    u = np.full(3, 1 / math.sqrt(3))
    assert contract_xyy(kdp, u, u) == pytest.approx(2 / math.sqrt(3), abs=1e-15)
    assert contract_xyy(kdp, np.zeros(3), u) == 0.0
    t62m = crystal_db.build("-62m", {"chi22": 1.0})
    e2 = np.array([0.0, 1.0, 0.0])
    assert contract_xyy(t62m, -e2, e2) == -1.0
    assert contract_xyy(t62m, e2, e2) == 1.0


def test_contract_yy_examples(kdp):
    u = np.full(3, 1 / math.sqrt(3))
    np.testing.assert_allclose(contract_yy(kdp, u), [2 / 3] * 3, atol=1e-15)
    np.testing.assert_array_equal(contract_yy(kdp, np.zeros(3)), np.zeros(3))
    t6 = crystal_db.build("6", {"chi11": 1.0, "chi22": 0.0})
    y1, y2 = 0.3, -0.7
    np.testing.assert_allclose(contract_yy(t6, [y1, y2, 0.0]),
                               [y1 ** 2 - y2 ** 2, -2 * y1 * y2, 0.0], atol=1e-15)


def test_contract_xy_examples(kdp):
    e1, e2 = np.eye(3)[:2]
    np.testing.assert_array_equal(contract_xy(np.zeros((3, 3, 3)), e1, e2), np.zeros(3))
    np.testing.assert_array_equal(contract_xy(kdp, e1, e2), [0.0, 0.0, 1.0])


@settings(max_examples=100, deadline=None)
@given(tensors, vec3, vec3)
def test_contraction_consistency(t, x, y):
    scale = max(np.abs(t).sum() * np.abs(x).max() * np.abs(y).max() ** 2, 1e-300)
    v = contract_xyy(t, x, y)
    assert abs(v - x @ contract_yy(t, y)) <= 1e-13 * scale
    assert abs(v - brute_trilinear(t, x, y, y)) <= 1e-13 * scale
    ts = symmetrize_piezo(t)
    assert abs(contract_xyy(ts, x, y) - y @ contract_xy(ts, x, y)) <= 1e-13 * scale


@settings(max_examples=50, deadline=None)
@given(tensors, vec3, vec3, vec3)
def test_trilinear_matches_brute_force(t, u, v, w):
    scale = max(np.abs(t).sum() * np.abs(u).max() * np.abs(v).max() * np.abs(w).max(), 1e-300)
    assert abs(float(trilinear(t, u, v, w)) - brute_trilinear(t, u, v, w)) <= 1e-13 * scale


@settings(max_examples=50, deadline=None)
@given(tensors, vec3, vec3, finite)
def test_multilinearity(t, x, y, c):
    scale = max(np.abs(t).sum() * np.abs(x).max() * np.abs(y).max() ** 2 * max(abs(c), 1), 1e-300)
    assert abs(contract_xyy(t, c * x, y) - c * contract_xyy(t, x, y)) <= 1e-13 * scale


# ---------------------------------------------------------------- Q / R forms

def test_q_forms_examples(kdp):
    a1, a2 = 0.6, -0.8
    q = q_forms(kdp, [a1, a2, 0.0])
    assert q.q1 == 0.0 and q.q2 == 0.0
    assert q.q3 == pytest.approx(2 * a1 * a2, abs=1e-15)
    assert tuple(q_forms(kdp, np.zeros(3))) == (0.0, 0.0, 0.0)
    c14, c15 = 3.0, 4.0
    for variant in crystal_db.VARIANTS:
        t = crystal_db.build("4", {"chi14": c14, "chi15": c15}, variant)
        q = q_forms(t, [a1, a2, 0.0])
        assert q.q3 == pytest.approx(c15 * (a1 ** 2 - a2 ** 2) + 2 * c14 * a1 * a2, abs=1e-14)


def test_q_forms_require_in_plane(kdp):
    with pytest.raises(ValueError):
        q_forms(kdp, [0.6, 0.0, 0.8])


def test_r_forms_examples(kdp):
    a1, a2 = 0.6, -0.8
    r = r_forms(kdp, [a1, a2, 0.0])
    assert r.r11 == 0.0 and r.r22 == 0.0
    assert r.r12 == pytest.approx(a2 ** 2 - a1 ** 2, abs=1e-15)
    assert tuple(r_forms(kdp, np.zeros(3))) == (0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        r_forms(kdp, [0.6, 0.0, 0.8])


def test_r_forms_class6_corrected_r11():
    # Collecting terms of the direct expansion gives
    # R11 = chi11 (3 a1 a2^2 - a1^3) + chi22 (3 a1^2 a2 - a2^3).
    c11, c22 = 3.0, 4.0
    t = crystal_db.build("6", {"chi11": c11, "chi22": c22})
    for phi in np.linspace(0, 2 * math.pi, 13):
        a1, a2 = math.sin(phi), -math.cos(phi)
        r = r_forms(t, [a1, a2, 0.0])
        assert r.r11 == pytest.approx(c11 * (3 * a1 * a2 ** 2 - a1 ** 3)
                                      + c22 * (3 * a1 ** 2 * a2 - a2 ** 3), abs=1e-13)
        assert r.r12 == 0.0 and r.r22 == 0.0


@settings(max_examples=100, deadline=None)
@given(tensors, angles, angles)
def test_q_form_identity(t, phi, theta):
    a = np.array([math.sin(phi), -math.cos(phi), 0.0])
    b = _b_from(a, theta)
    q = q_forms(t, a)
    z1, z2 = math.cos(theta), math.sin(theta)
    scale = max(np.abs(t).sum(), 1e-300)
    assert abs(contract_xyy(t, b, a) - (z1 * (a[1] * q.q1 - a[0] * q.q2) + z2 * q.q3)) <= 1e-13 * scale


@settings(max_examples=100, deadline=None)
@given(tensors, angles, angles)
def test_r_form_identity(t, phi, theta):
    t = symmetrize_piezo(t)
    a = np.array([math.sin(phi), -math.cos(phi), 0.0])
    b = _b_from(a, theta)
    r = r_forms(t, a)
    z1, z2 = math.cos(theta), math.sin(theta)
    scale = max(np.abs(t).sum(), 1e-300)
    rhs = z1 ** 2 * r.r11 + 2 * z1 * z2 * r.r12 + z2 ** 2 * r.r22
    assert abs(brute_trilinear(t, a, b, b) - rhs) <= 1e-13 * scale


def test_rotation_preserves_symmetry_class(rng):
    t = random_kleinman(rng)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    assert classify_symmetry(rotate(t, q), tol=1e-12) is SymmetryClass.KLEINMAN
