"""Conjugate/focal/convexity radii and their structural identities."""

import math

import numpy as np
import pytest

from geolens import (
    Euclidean,
    Hyperbolic,
    RevolutionProfile,
    Sphere,
    SurfaceOfRevolution,
    closed_form_radii,
    conjugate_radius,
    convexity_from,
    focal_radius,
    radii_report,
)
from geolens.errors import ConfigError
from geolens.radii import CERTIFIED, CLOSED_FORM, NUMERIC, RadiusValue


def test_conjugate_radius_euclidean_is_lower_bound():
    val = conjugate_radius(Euclidean(2), directions=4, horizon=6.0)
    assert val.lower_bound_only
    assert val.value == pytest.approx(6.0)


def test_conjugate_radius_unit_sphere():
    val = conjugate_radius(Sphere(2, 1.0), directions=4)
    assert not val.lower_bound_only
    assert val.value == pytest.approx(math.pi, abs=1e-6)


def test_conjugate_radius_hyperbolic_never_found():
    val = conjugate_radius(Hyperbolic(2, -1.0), directions=4, horizon=5.0)
    assert val.lower_bound_only
    assert val.value == pytest.approx(5.0)


def test_focal_radius_unit_sphere():
    val = focal_radius(Sphere(2, 1.0), directions=4)
    assert val.value == pytest.approx(math.pi / 2, abs=1e-6)


def test_focal_radius_euclidean_infinite():
    val = focal_radius(Euclidean(2), directions=4, horizon=6.0)
    assert val.lower_bound_only


@pytest.mark.parametrize("k", [0.25, 1.0, 4.0])
def test_focal_radius_scales_with_curvature(k):
    # oracle: j(t) = sin(sqrt(k) t)/sqrt(k), first zero of j' at pi/(2 sqrt(k))
    val = focal_radius(Sphere(2, k), directions=2)
    assert val.value == pytest.approx(math.pi / (2 * math.sqrt(k)), abs=1e-6)


def test_focal_radius_monotone_in_curvature():
    values = [focal_radius(Sphere(2, k), directions=1).value for k in (0.25, 0.5, 1.0, 2.0, 4.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_convexity_unit_sphere_closed_form():
    report = closed_form_radii(Sphere(2, 1.0))
    assert report.convexity.value == pytest.approx(math.pi / 2, abs=1e-12)
    assert report.convexity.provenance == CLOSED_FORM


def test_convexity_euclidean_infinite():
    report = closed_form_radii(Euclidean(2))
    assert math.isinf(report.convexity.value)
    residuals = report.identity_residuals()
    assert all(r == 0.0 for r in residuals.values())


@pytest.mark.parametrize(
    "model",
    [Euclidean(3), Sphere(2, 1.0), Sphere(3, 2.0), Hyperbolic(2, -1.0), Hyperbolic(2, -0.5)],
)
def test_identities_hold_closed_form(model):
    report = closed_form_radii(model)
    for name, res in report.identity_residuals().items():
        assert not math.isnan(res)
        assert res <= 1e-6, name


def test_numeric_sphere_radii_match_closed_form():
    conj = conjugate_radius(Sphere(2, 1.0), directions=1)
    foc = focal_radius(Sphere(2, 1.0), directions=1)
    assert conj.value == pytest.approx(math.pi, abs=1e-6)
    assert foc.value == pytest.approx(math.pi / 2, abs=1e-6)
    assert conj.provenance == NUMERIC


def test_surface_report_mixed_provenance():
    sor = SurfaceOfRevolution(RevolutionProfile.cosine_bump())
    report = radii_report(
        sor, certified_injectivity=1.0, base_points=3, directions=8, horizon=7.0
    )
    assert report.injectivity.provenance == CERTIFIED
    assert report.conjugate.provenance == NUMERIC
    assert report.focal.provenance == NUMERIC
    # conv = min(focal, inj/2) = inj/2 = 0.5 here
    assert report.convexity.value == pytest.approx(0.5)
    res = report.identity_residuals()
    assert res["convexity_min"] <= 1e-9
    assert math.isnan(res["injectivity_min"])  # loop length only lower-bounded
    assert res["focal_vs_conjugate"] <= 1e-6


def test_surface_equator_conjugate_value():
    # the equatorial orbit has constant K = 1/3: first zero at pi * sqrt(3)
    sor = SurfaceOfRevolution(RevolutionProfile.cosine_bump())
    report = radii_report(
        sor, certified_injectivity=1.0, base_points=1, directions=4, horizon=7.0
    )
    assert report.conjugate.value <= math.pi * math.sqrt(3) + 1e-5


def test_surface_requires_certified_injectivity():
    sor = SurfaceOfRevolution(RevolutionProfile.cosine_bump())
    with pytest.raises(ConfigError):
        radii_report(sor)


def test_convexity_from_rejects_uninformative_bound():
    with pytest.raises(ConfigError):
        convexity_from(
            RadiusValue(0.3, NUMERIC, lower_bound_only=True),
            RadiusValue(2.0, CERTIFIED),
        )


def test_directions_precondition():
    with pytest.raises(ValueError):
        conjugate_radius(Sphere(2, 1.0), directions=0)
