"""Geodesic integration, energy/length, first variation, Jacobi fields."""

import math

import numpy as np
import pytest

from geolens import (
    Euclidean,
    GeodesicSegment,
    Hyperbolic,
    RevolutionProfile,
    SampledCurve,
    Sphere,
    SurfaceOfRevolution,
    energy,
    first_variation_check,
    integrate_geodesic,
    integrate_jacobi,
    length,
)
from geolens.manifolds import ManifoldPoint, TangentVector


@pytest.fixture(scope="module")
def sphere():
    return Sphere(2, 1.0)


@pytest.fixture(scope="module")
def surface():
    return SurfaceOfRevolution(RevolutionProfile.cosine_bump())


# ---------------------------------------------------------- integration


def test_euclidean_integration_is_exact_line():
    e = Euclidean(2)
    p = e.point(1.0, -2.0)
    v = TangentVector(p, np.array([0.6, 0.8]))
    seg = integrate_geodesic(e, p, v, 2.5, step=0.05)
    expect = p.coords[None, :] + seg.ts[:, None] * v.components
    np.testing.assert_allclose(seg.points, expect, atol=1e-12)


def test_sphere_integration_matches_great_circle(sphere):
    north = sphere.point(0.0, 0.0, 1.0)
    v = TangentVector(north, np.array([1.0, 0.0, 0.0]))
    seg = integrate_geodesic(sphere, north, v, math.pi / 2, step=1e-3)
    worst = 0.0
    for t, pt in zip(seg.ts[::50], seg.points[::50]):
        closed, _ = sphere.exp_velocity_coords(north.coords, v.components, t)
        worst = max(worst, np.linalg.norm(pt - closed))
    assert worst < 1e-9


def test_surface_clairaut_constant_conserved(surface):
    p = surface.point(0.1, 0.0)
    v = TangentVector(p, surface.unit_tangent(p.coords, 1.35))
    seg = integrate_geodesic(surface, p, v, 2.0, step=2e-3)
    f = np.asarray(surface.profile.f(seg.points[:, 0]))
    clairaut = f**2 * seg.velocities[:, 1]
    assert np.max(np.abs(clairaut - clairaut[0])) < 1e-9


def test_unit_speed_preserved(sphere, surface):
    for model, base, comp in [
        (sphere, sphere.point(1.0, 0.0, 0.0), np.array([0.0, 1.0, 0.0])),
        (surface, surface.point(0.0, 0.0), surface.unit_tangent([0.0, 0.0], 1.2)),
    ]:
        seg = integrate_geodesic(model, base, TangentVector(base, comp), 1.5, step=2e-3)
        speeds = [
            math.sqrt(model.inner_coords(pt, vel, vel))
            for pt, vel in zip(seg.points[::37], seg.velocities[::37])
        ]
        assert max(abs(s - 1.0) for s in speeds) < 1e-9


def test_integrator_is_fourth_order(sphere):
    north = sphere.point(0.0, 0.0, 1.0)
    v = TangentVector(north, np.array([1.0, 0.0, 0.0]))
    end_exact, _ = sphere.exp_velocity_coords(north.coords, v.components, 1.0)
    errs = []
    for step in (0.02, 0.01):
        seg = integrate_geodesic(sphere, north, v, 1.0, step=step)
        errs.append(np.linalg.norm(seg.points[-1] - end_exact))
    assert errs[0] / errs[1] >= 8.0


def test_non_unit_direction_rejected():
    e = Euclidean(2)
    p = e.point(0.0, 0.0)
    with pytest.raises(ValueError):
        integrate_geodesic(e, p, TangentVector(p, np.array([2.0, 0.0])), 1.0)


# ------------------------------------------------------- energy / length


def test_constant_curve_zero_energy():
    e = Euclidean(2)
    ts = np.linspace(0.0, 1.0, 33)
    pts = np.zeros((33, 2))
    curve = SampledCurve(e, ts, pts, np.zeros((33, 2)))
    assert energy(curve) == 0.0
    assert length(curve) == 0.0


def test_euclidean_segment_energy_length():
    e = Euclidean(2)
    ts = np.linspace(0.0, 1.0, 65)
    pts = np.outer(ts, [3.0, 4.0])
    vels = np.tile([3.0, 4.0], (65, 1))
    curve = SampledCurve(e, ts, pts, vels)
    assert energy(curve) == pytest.approx(25.0, abs=1e-10)
    assert length(curve) == pytest.approx(5.0, abs=1e-10)


def test_reparameterization_keeps_length_raises_energy():
    # quadratic reparameterization tau -> tau^2 of the same Euclidean path
    e = Euclidean(2)
    ts = np.linspace(0.0, 1.0, 201)
    pts = np.outer(ts**2, [3.0, 4.0])
    vels = np.outer(2.0 * ts, [3.0, 4.0])
    curve = SampledCurve(e, ts, pts, vels)
    assert length(curve) == pytest.approx(5.0, abs=1e-6)
    assert energy(curve) > 25.0 + 1.0


def test_cauchy_schwarz_energy_length(sphere):
    north = sphere.point(0.0, 0.0, 1.0)
    v = TangentVector(north, np.array([1.0, 0.0, 0.0]))
    seg = integrate_geodesic(sphere, north, v, 1.2, step=2e-3)
    curve = seg.as_curve(n=201)
    interval = curve.ts[-1] - curve.ts[0]
    assert length(curve) ** 2 <= interval * energy(curve) + 1e-9
    # constant speed: equality within quadrature tolerance
    assert length(curve) ** 2 == pytest.approx(interval * energy(curve), rel=1e-10)


def test_minimizing_unit_interval_geodesic_energy_is_squared_distance(sphere):
    north = sphere.point(0.0, 0.0, 1.0)
    v = TangentVector(north, np.array([1.0, 0.0, 0.0]))
    seg = GeodesicSegment.from_exp(sphere, north, v, 1.3)
    curve = seg.as_curve(n=301, domain=(0.0, 1.0))
    d = sphere.distance(north.coords, seg.endpoint().coords)
    assert energy(curve) == pytest.approx(d * d, abs=1e-9)


def test_energy_needs_two_samples():
    e = Euclidean(2)
    curve = SampledCurve(e, np.array([0.0]), np.zeros((1, 2)), np.zeros((1, 2)))
    with pytest.raises(ValueError):
        energy(curve)


# ------------------------------------------------------ first variation


def test_first_variation_constant_family_vanishes(sphere):
    north = sphere.point(0.0, 0.0, 1.0)

    def family(s):
        return TangentVector(north, np.array([0.7, 0.0, 0.0]))

    assert first_variation_check(sphere, family) < 1e-12


def test_first_variation_euclidean_explicit():
    e = Euclidean(2)
    origin = e.point(0.0, 0.0)

    def family(s):
        return TangentVector(origin, np.array([1.0 + s, 0.0]))

    # dE/ds(0) = 2 and 2 g(sigma'(0), c'(1)) = 2
    assert first_variation_check(e, family) < 1e-10


def test_first_variation_sphere_random_families(sphere):
    rng = np.random.default_rng(31)
    north = sphere.point(0.0, 0.0, 1.0)
    basis = sphere.tangent_basis(north.coords)
    for _ in range(5):
        a = rng.normal(scale=0.5, size=2)
        b = rng.normal(scale=0.3, size=2)

        def family(s):
            comp = (a[0] + s * b[0]) * basis[0] + (a[1] + s * b[1]) * basis[1]
            return TangentVector(north, comp)

        assert first_variation_check(sphere, family, fd_step=1e-4) < 1e-5


# ------------------------------------------------------------- jacobi


def test_jacobi_euclidean_linear():
    e = Euclidean(2)
    p = e.point(0.0, 0.0)
    seg = GeodesicSegment.from_exp(e, p, TangentVector(p, np.array([1.0, 0.0])), 3.0)
    sol = integrate_jacobi(e, seg, step=1e-3)
    np.testing.assert_allclose(sol.j, sol.ts, atol=1e-10)
    assert sol.first_zero("value") is None
    assert sol.first_zero("derivative") is None


def test_jacobi_sphere_sine(sphere):
    north = sphere.point(0.0, 0.0, 1.0)
    seg = GeodesicSegment.from_exp(
        sphere, north, TangentVector(north, np.array([1.0, 0.0, 0.0])), math.pi
    )
    sol = integrate_jacobi(sphere, seg, step=1e-3)
    assert np.max(np.abs(sol.j - np.sin(sol.ts))) < 1e-9


def test_jacobi_hyperbolic_sinh():
    h = Hyperbolic(2, -1.0)
    b = h.basepoint()
    seg = GeodesicSegment.from_exp(
        h, b, TangentVector(b, np.array([0.0, 1.0, 0.0])), 3.0
    )
    sol = integrate_jacobi(h, seg, step=1e-3)
    assert np.max(np.abs(sol.j - np.sinh(sol.ts))) < 1e-9


def test_jacobi_residual_on_surface(surface):
    base = surface.point(0.0, 0.0)
    d = TangentVector(base, surface.unit_tangent(base.coords, math.pi / 2))
    seg = GeodesicSegment(manifold=surface, base=base, direction=d, length=4.0)
    sol = integrate_jacobi(surface, seg, step=2e-3)
    assert sol.j[0] == 0.0 and sol.jp[0] == 1.0
    assert sol.residual_max() < 1e-5


def test_jacobi_comparison_bounds_first_zero(surface):
    # oscillating geodesics near the bulge see K in [K(u_range), K(0)] > 0;
    # their first Jacobi zero must lie between the constant-curvature answers
    base = surface.point(0.0, 0.0)
    for delta in (-0.18, -0.08, 0.0, 0.08, 0.18):
        d = TangentVector(base, surface.unit_tangent(base.coords, math.pi / 2 + delta))
        seg = integrate_geodesic(surface, base, d, 6.4, step=2e-3)
        u_abs = float(np.max(np.abs(seg.points[:, 0])))
        k_min = float(surface.curvature_of_u(u_abs))
        k_max = float(surface.curvature_of_u(0.0))
        sol = integrate_jacobi(surface, seg, step=2e-3)
        zero = sol.first_zero("value")
        assert zero is not None
        assert math.pi / math.sqrt(k_max) - 1e-9 <= zero <= math.pi / math.sqrt(k_min) + 1e-9
