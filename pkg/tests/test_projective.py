"""Fubini-Study charts: normalization, fields, spheres, chart covariance."""

import numpy as np
import pytest

from helpers import random_hermitian, random_state
from qhydro.hilbert import HermitianOperator, StateVector, dispersion_squared, evolve
from qhydro.projective import (
    AffineChart,
    ProjectivePoint,
    TangentAtPoint,
    chart_manifold,
    chart_of,
    dispersion_via_metric,
    fubini_study_distance,
    fubini_study_metric,
    fundamental_field,
    fundamental_field_at,
    geodesic_sphere,
    horizontal_lift,
    project_tangent,
)
from qhydro.riemann import (
    divergence,
    flow_integrate,
    geodesic_integrate,
    lie_derivative_metric,
)

H01 = HermitianOperator.diagonal([0.0, 1.0])


def random_chart_point(rng, dim):
    """Chart of a random state: coordinates inside the unit polydisc."""
    return chart_of(random_state(rng, dim))


# ---------------------------------------------------------------------------
# Charts


def test_chart_round_trip():
    rng = np.random.default_rng(31)
    for dim in (2, 3, 5):
        for _ in range(20):
            state = random_state(rng, dim)
            chart = chart_of(state)
            assert np.abs(chart.coords).max() <= 1.0 + 1e-12
            back = chart.to_state()
            assert state.phase_equal(back, tol=1e-12)
            again = chart_of(back, chart.chart_index)
            assert np.abs(again.coords - chart.coords).max() < 1e-12


def test_chart_requires_nonzero_pivot():
    with pytest.raises(ValueError, match="zero amplitude"):
        chart_of(StateVector.basis(3, 0), chart_index=1)


def test_projective_point_equality_is_phase_blind():
    v = StateVector([1.0, 1.0j], normalize=True)
    w = StateVector(np.exp(0.7j) * v.amplitudes)
    assert ProjectivePoint(v).same_ray(ProjectivePoint(w))
    assert not ProjectivePoint(v).same_ray(StateVector.basis(2, 0))


# ---------------------------------------------------------------------------
# Metric normalization


def test_metric_is_identity_at_chart_origin():
    g = fubini_study_metric(AffineChart(0, np.zeros(2)))
    assert np.abs(g - np.eye(2)).max() < 1e-14


def test_projective_line_circumference_is_pi():
    # the real-axis great circle through both poles, length 2 pi R with R = 1/2
    taus = np.linspace(-np.pi / 2 + 1e-4, np.pi / 2 - 1e-4, 20001)
    length = 0.0
    for a, b in zip(taus[:-1], taus[1:]):
        mid = (a + b) / 2.0
        xy = np.array([np.tan(mid), 0.0])
        g = fubini_study_metric(AffineChart(0, xy))
        speed = np.sqrt(g[0, 0]) / np.cos(mid) ** 2  # |d zeta / d tau| = sec^2
        length += speed * (b - a)
    assert length == pytest.approx(np.pi, abs=1e-3)


def test_distance_between_orthogonal_states():
    assert fubini_study_distance(StateVector.basis(2, 0), StateVector.basis(2, 1)) == pytest.approx(
        np.pi / 2, abs=1e-14
    )


def test_geodesic_distance_matches_arc_length():
    # unit-speed geodesic from the pole travels distance t on the radius-1/2 sphere
    M = chart_manifold(2, 0)
    u0 = np.array([1.0, 0.0])  # unit g-speed at the origin
    curve = geodesic_integrate(M, np.zeros(2), u0, np.pi / 4, 400)
    end = AffineChart(0, curve.points[-1]).to_state()
    start = StateVector.basis(2, 0)
    assert fubini_study_distance(start, end) == pytest.approx(np.pi / 4, abs=1e-7)
    # after pi/4 the geodesic sits on the equator |zeta| = 1
    assert np.linalg.norm(curve.points[-1]) == pytest.approx(1.0, abs=1e-7)


def test_metric_positive_definite_at_random_points():
    rng = np.random.default_rng(32)
    for _ in range(100):
        dim = int(rng.integers(2, 6))
        chart = random_chart_point(rng, dim)
        g = fubini_study_metric(chart)
        assert np.linalg.eigvalsh(g).min() > 0.0


# ---------------------------------------------------------------------------
# Fundamental field


def test_identity_operator_generates_no_motion():
    rng = np.random.default_rng(33)
    eye = HermitianOperator(np.eye(3))
    for _ in range(10):
        chart = random_chart_point(rng, 3)
        assert np.abs(fundamental_field_at(eye, chart)).max() < 1e-14


def test_field_at_equator_is_tangent_with_half_speed():
    chart = chart_of(StateVector(np.array([1.0, 1.0]) / np.sqrt(2.0)))
    X = fundamental_field_at(H01, chart)
    # zeta = 1: the flow moves along the unit circle, g-speed sqrt(1/4)
    assert X @ chart.coords == pytest.approx(0.0, abs=1e-14)  # tangent to |zeta| = 1
    g = fubini_study_metric(chart)
    assert np.sqrt(X @ g @ X) == pytest.approx(0.5, abs=1e-12)


def test_field_vanishes_at_eigenstates():
    assert np.abs(fundamental_field_at(H01, AffineChart(0, np.zeros(2)))).max() < 1e-14
    assert np.abs(fundamental_field_at(H01, AffineChart(1, np.zeros(2)))).max() < 1e-14


def test_field_horizontal_lift_formula():
    rng = np.random.default_rng(34)
    H = random_hermitian(rng, 4)
    state = random_state(rng, 4)
    chart = chart_of(state)
    v, w = horizontal_lift(chart, fundamental_field_at(H, chart))
    mean = np.vdot(v, H.matrix @ v).real
    expected = -1j * (H.matrix @ v - mean * v)
    assert np.abs(w - expected).max() < 1e-12


# ---------------------------------------------------------------------------
# Dispersion identity and isometry properties


def test_dispersion_via_metric_examples():
    assert dispersion_via_metric(H01, StateVector.basis(2, 1)) == pytest.approx(0.0, abs=1e-14)
    equal = StateVector(np.array([1.0, 1.0]) / np.sqrt(2.0))
    assert dispersion_via_metric(H01, equal) == pytest.approx(0.25, abs=1e-13)


def test_dispersion_via_metric_cross_oracle():
    rng = np.random.default_rng(35)
    H = random_hermitian(rng, 5, spectral_range=2.0)
    for _ in range(50):
        v = random_state(rng, 5)
        gap = abs(dispersion_via_metric(H, v) - dispersion_squared(H, v))
        assert gap < 1e-8


def test_schrodinger_field_is_killing():
    rng = np.random.default_rng(36)
    for dim in (2, 3, 4, 5):
        H = random_hermitian(rng, dim)
        for _ in range(8):
            chart = random_chart_point(rng, dim)
            M = chart_manifold(dim, chart.chart_index)
            X = fundamental_field(H, dim, chart.chart_index)
            assert np.abs(lie_derivative_metric(M, X, chart.coords)).max() < 1e-5


def test_schrodinger_field_is_divergence_free():
    rng = np.random.default_rng(37)
    H = random_hermitian(rng, 4)
    for _ in range(10):
        chart = random_chart_point(rng, 4)
        M = chart_manifold(4, chart.chart_index)
        X = fundamental_field(H, 4, chart.chart_index)
        assert abs(divergence(M, X, chart.coords)) < 1e-6


# ---------------------------------------------------------------------------
# Chart covariance


def test_tangent_lengths_agree_across_charts():
    rng = np.random.default_rng(38)
    for _ in range(20):
        # two comparable amplitudes so both charts are usable
        amps = rng.normal(size=3) + 1j * rng.normal(size=3)
        amps[0] = 1.0 + 0.2 * rng.normal()
        amps[1] = 1.0 + 0.2 * rng.normal()
        state = StateVector(amps, normalize=True)
        u = rng.normal(size=4)
        chart_a = chart_of(state, 0)
        v, w = horizontal_lift(chart_a, u)
        len_a = float(u @ fubini_study_metric(chart_a) @ u)
        u_b = project_tangent(v, w, 1)
        chart_b = chart_of(state, 1)
        len_b = float(u_b @ fubini_study_metric(chart_b) @ u_b)
        assert abs(len_a - len_b) < 1e-8 * max(1.0, len_a)


def test_unitary_homogeneity_preserves_inner_products():
    rng = np.random.default_rng(39)
    for _ in range(10):
        dim = 4
        raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        U, _ = np.linalg.qr(raw)
        state = random_state(rng, dim)
        chart = chart_of(state)
        u1, u2 = rng.normal(size=2 * (dim - 1)), rng.normal(size=2 * (dim - 1))
        g = fubini_study_metric(chart)
        before = float(u1 @ g @ u2)
        v, w1 = horizontal_lift(chart, u1)
        _, w2 = horizontal_lift(chart, u2)
        moved = StateVector(U @ v, normalize=True)
        k = int(np.argmax(np.abs(moved.amplitudes)))
        t1 = project_tangent(U @ v, U @ w1, k)
        t2 = project_tangent(U @ v, U @ w2, k)
        g2 = fubini_study_metric(chart_of(moved, k))
        after = float(t1 @ g2 @ t2)
        assert abs(before - after) < 1e-8 * max(1.0, abs(before))


def test_chart_flow_matches_projected_evolution():
    H = HermitianOperator.diagonal([0.3, 1.1, 2.4])
    v0 = StateVector(np.array([0.8, 0.5, 0.33166247903554]), normalize=True)
    chart = chart_of(v0)
    X = fundamental_field(H, 3, chart.chart_index)
    curve = flow_integrate(X, chart.coords, 1.0, 1000)
    worst = 0.0
    for t, xy in zip(curve.times, curve.points):
        exact = evolve(H, v0, float(t))
        flowed = AffineChart(chart.chart_index, xy).to_state()
        worst = max(worst, fubini_study_distance(exact, flowed))
    assert worst < 1e-6


# ---------------------------------------------------------------------------
# Tangent vectors


def test_tangent_requires_horizontality():
    v = StateVector.basis(2, 0)
    with pytest.raises(ValueError, match="not horizontal"):
        TangentAtPoint(ProjectivePoint(v), np.array([1.0, 0.0], dtype=complex))
    TangentAtPoint(ProjectivePoint(v), np.array([0.0, 0.7 - 0.2j]))


# ---------------------------------------------------------------------------
# Geodesic spheres


def test_sphere_poles_are_eigenstates():
    sph = geodesic_sphere(H01, 1, 0)
    assert sph.state(0.0, 0.3).phase_equal(StateVector.basis(2, 0))
    assert sph.state(np.pi, 1.2).phase_equal(StateVector.basis(2, 1))


def test_sphere_rejects_bad_indices():
    with pytest.raises(ValueError):
        geodesic_sphere(H01, 1, 1)
    with pytest.raises(ValueError):
        geodesic_sphere(H01, 0, 1)


def test_sphere_total_area():
    sph = geodesic_sphere(H01, 1, 0)
    thetas = np.linspace(0.0, np.pi, 2001)
    ring = np.trapezoid([sph.area_coefficient(t) for t in thetas], thetas)
    assert ring * 2.0 * np.pi == pytest.approx(np.pi, abs=1e-6)


def test_sphere_induced_metric_matches_pullback():
    rng = np.random.default_rng(40)
    H = random_hermitian(rng, 4, spectral_range=3.0)
    sph = geodesic_sphere(H, 3, 1)
    for _ in range(10):
        theta = rng.uniform(0.2, np.pi - 0.2)
        phi = rng.uniform(0.0, 2 * np.pi)
        v = sph.representative(theta, phi)
        k = int(np.argmax(np.abs(v)))
        d_th, d_ph = sph.embedding_velocities(theta, phi)
        t1 = project_tangent(v, d_th, k)
        t2 = project_tangent(v, d_ph, k)
        g = fubini_study_metric(chart_of(StateVector(v, normalize=True), k))
        pulled = np.array([[t1 @ g @ t1, t1 @ g @ t2], [t2 @ g @ t1, t2 @ g @ t2]])
        assert np.abs(pulled - sph.induced_metric(theta)).max() < 1e-8


def test_sphere_flow_rotates_azimuth_forward():
    # d phi / dt = + omega in the sphere's azimuth convention
    sph = geodesic_sphere(H01, 1, 0)
    theta, phi, dt = 1.0, 0.4, 1e-3
    moved = evolve(H01, sph.state(theta, phi), dt)
    expected = sph.state(theta, phi + sph.omega * dt)
    assert fubini_study_distance(moved, expected) < 1e-8


def test_sphere_frame_is_orthonormal_and_smooth_at_poles():
    sph = geodesic_sphere(H01, 1, 0)
    for theta in (0.0, 0.7, np.pi / 2, 2.5, np.pi):
        chart, u1, u2 = sph.oriented_frame(theta, 0.9)
        g = fubini_study_metric(chart)
        assert u1 @ g @ u1 == pytest.approx(1.0, abs=1e-12)
        assert u2 @ g @ u2 == pytest.approx(1.0, abs=1e-12)
        assert u1 @ g @ u2 == pytest.approx(0.0, abs=1e-12)
