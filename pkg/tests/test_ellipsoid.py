import numpy as np
import pytest
from hypothesis import given

import oracles
from affinv.corpus import ASYMMETRIC_PENTAGON, SQUARE, TRAPEZOID, corpus, regular_polygon
from affinv.ellipsoid import Ellipsoid, loewner_ellipsoid, normalizer
from affinv.errors import ValidationError
from affinv.geometry import apply_affine, canonicalize
from strategies import affine_maps, polygons

# [DERIVED] symmetric-ellipse reduction for the trapezoid (+-1,0),(+-0.5,1):
# two vertex pairs on the boundary leave one free parameter, minimized exactly
TRAPEZOID_CENTER = (0.0, 0.377160969392890)
TRAPEZOID_SHAPE = np.diag([0.697224362268005, 2.128469547164993])


def test_square_circle():
    E = loewner_ellipsoid(SQUARE)
    assert np.allclose(E.center, 0.0, atol=1e-8)
    assert np.allclose(E.shape, 0.5 * np.eye(2), atol=1e-7)
    assert E.gap <= 1e-7


def test_hexagon_unit_disk():
    E = loewner_ellipsoid(regular_polygon(6))
    assert np.allclose(E.center, 0.0, atol=1e-8)
    assert np.allclose(E.shape, np.eye(2), atol=1e-7)


def test_trapezoid_closed_form():
    E = loewner_ellipsoid(TRAPEZOID)
    assert np.allclose(E.center, TRAPEZOID_CENTER, atol=1e-7)
    assert np.allclose(E.shape, TRAPEZOID_SHAPE, atol=1e-6)


@pytest.mark.parametrize("fx", corpus(), ids=lambda f: f.name)
def test_certificate_on_corpus(fx):
    E = loewner_ellipsoid(fx.body)
    assert E.gap <= 1e-7
    assert E.quadratic(fx.body.array).max() <= 1 + 1e-7


@pytest.mark.parametrize("k", range(3, 9))
def test_regular_polygons_match_minimal_disk(k):
    K = regular_polygon(k, radius=1.7, center=(0.4, -2.0))
    c, r = oracles.minimal_disk(K.array)
    E = loewner_ellipsoid(K)
    assert np.allclose(E.center, c, atol=1e-6)
    assert np.allclose(E.shape, np.eye(2) / r ** 2, atol=1e-6)


def test_triangle_center_oracle():
    T = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    c = oracles.triangle_loewner_center(T)
    assert np.allclose(c, [1 / 3, 1 / 3])
    assert np.allclose(loewner_ellipsoid(canonicalize(T)).center, c, atol=1e-6)


def test_matches_convex_solver():
    cp = pytest.importorskip("cvxpy")
    K = ASYMMETRIC_PENTAGON
    A = cp.Variable((2, 2), PSD=True)
    b = cp.Variable(2)
    cp.Problem(cp.Maximize(cp.log_det(A)), [cp.norm(A @ p + b) <= 1 for p in K.array]).solve()
    center = -np.linalg.solve(A.value, b.value)
    E = loewner_ellipsoid(K)
    # the interior-point solver itself is accurate to about 1e-6
    assert np.allclose(E.center, center, atol=1e-4)
    assert np.allclose(E.shape, A.value.T @ A.value, atol=1e-4)


@given(polygons(), affine_maps())
def test_equivariant(K, g):
    E = loewner_ellipsoid(K)
    F = loewner_ellipsoid(apply_affine(g, K))
    gK = apply_affine(g, K)
    assert np.linalg.norm(F.center - g(E.center)) <= 1e-5 * gK.diameter
    moved = E.transform(g)
    assert np.allclose(F.shape, moved.shape, atol=1e-4 * np.abs(moved.shape).max())


def test_warm_start_agrees():
    K = ASYMMETRIC_PENTAGON
    cold = loewner_ellipsoid(K)
    warm = loewner_ellipsoid(K, init_weights=np.array([0.1, 0.3, 0.3, 0.2, 0.1]))
    assert np.allclose(cold.center, warm.center, atol=1e-6)


def test_bad_warm_start():
    with pytest.raises(ValidationError):
        loewner_ellipsoid(SQUARE, init_weights=[1.0, 0.0])


def test_normalizer_examples():
    unit = Ellipsoid(np.zeros(2), np.eye(2))
    T = normalizer(unit)
    assert np.allclose(T.linear, np.eye(2)) and np.allclose(T.translation, 0)
    T = normalizer(Ellipsoid(np.array([1.0, 0.0]), np.eye(2) / 4))
    assert np.allclose(T([3.0, 2.0]), [1.0, 1.0])


@given(polygons())
def test_normalizer_maps_to_unit_ball(K):
    E = loewner_ellipsoid(K)
    image = normalizer(E)(K.array)
    assert np.linalg.norm(image, axis=1).max() == pytest.approx(1.0, abs=1e-6)
    F = loewner_ellipsoid(apply_affine(normalizer(E), K))
    assert np.allclose(F.shape, np.eye(2), atol=1e-5)


def test_rejects_non_positive_shape():
    with pytest.raises(ValidationError):
        Ellipsoid(np.zeros(2), np.diag([1.0, -1.0]))
