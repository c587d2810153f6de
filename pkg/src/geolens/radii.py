"""Convexity, injectivity, conjugate, focal, and loop radii of the models.

Constant-curvature models have closed forms.  Numeric surfaces get conjugate
and focal radii from scalar Jacobi integration over sampled directions; their
injectivity radius is never estimated, it must be certified by the user
(e.g. in the run configuration), and the convexity radius is assembled from
the identity  conv = min(focal, injectivity / 2).

Horizon-limited searches report a lower bound, never a fabricated value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from geolens._ode import rk4_trajectory
from geolens.errors import ConfigError
from geolens.geodesics import GeodesicSegment, JacobiSolution, integrate_jacobi
from geolens.manifolds import (
    Euclidean,
    Hyperbolic,
    Manifold,
    ManifoldPoint,
    Sphere,
    SurfaceOfRevolution,
    TangentVector,
    basepoint_of,
)

CLOSED_FORM = "closed-form"
NUMERIC = "numeric-estimate"
CERTIFIED = "user-certified"

DEFAULT_DIRECTIONS = 64
DEFAULT_BASE_POINTS = 16
DEFAULT_STEP = 2e-3


@dataclass(frozen=True)
class RadiusValue:
    """A radius with provenance; ``lower_bound_only`` marks ">= value"."""

    value: float
    provenance: str
    lower_bound_only: bool = False

    def __float__(self):
        return self.value

    def render(self) -> str:
        if math.isinf(self.value):
            return "inf"
        prefix = ">=" if self.lower_bound_only else ""
        return f"{prefix}{self.value:.9g}"


@dataclass(frozen=True)
class RadiiReport:
    """The five radii of one model, each with provenance."""

    manifold_label: str
    injectivity: RadiusValue
    conjugate: RadiusValue
    focal: RadiusValue
    loop_length: RadiusValue
    convexity: RadiusValue

    def fields(self):
        return [
            ("injectivity", self.injectivity),
            ("conjugate", self.conjugate),
            ("focal", self.focal),
            ("loop_length", self.loop_length),
            ("convexity", self.convexity),
        ]

    def identity_residuals(self) -> dict[str, float]:
        """Residuals of the three structural identities (0 when they hold).

        * convexity = min(focal, injectivity/2)
        * injectivity/2 = min(conjugate/2, loop_length/4)  (all finite only)
        * focal <= conjugate/2  (one-sided; negative slack clipped to 0)

        Identities involving a lower-bound-only radius are skipped (nan).
        """
        out = {}
        foc, inj = self.focal, self.injectivity
        if foc.lower_bound_only and foc.value < inj.value / 2:
            out["convexity_min"] = math.nan
        else:
            target = min(foc.value, inj.value / 2)
            out["convexity_min"] = _residual(self.convexity.value, target)
        conj, loop = self.conjugate, self.loop_length
        if conj.lower_bound_only or loop.lower_bound_only:
            out["injectivity_min"] = math.nan
        else:
            target = min(conj.value / 2, loop.value / 4)
            out["injectivity_min"] = _residual(inj.value / 2, target)
        if conj.lower_bound_only and not foc.lower_bound_only:
            out["focal_vs_conjugate"] = max(0.0, foc.value - conj.value / 2)
        elif foc.lower_bound_only:
            out["focal_vs_conjugate"] = math.nan
        else:
            out["focal_vs_conjugate"] = max(0.0, foc.value - conj.value / 2)
        return out


def _residual(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return math.inf
    return abs(a - b)


def closed_form_radii(manifold: Manifold) -> RadiiReport:
    """Exact radii for the constant-curvature models."""
    label = manifold.describe()
    if isinstance(manifold, Euclidean) or isinstance(manifold, Hyperbolic):
        inf = RadiusValue(math.inf, CLOSED_FORM)
        return RadiiReport(label, inf, inf, inf, inf, inf)
    if isinstance(manifold, Sphere):
        a = manifold.radius
        return RadiiReport(
            label,
            injectivity=RadiusValue(math.pi * a, CLOSED_FORM),
            conjugate=RadiusValue(math.pi * a, CLOSED_FORM),
            focal=RadiusValue(0.5 * math.pi * a, CLOSED_FORM),
            loop_length=RadiusValue(2.0 * math.pi * a, CLOSED_FORM),
            convexity=RadiusValue(0.5 * math.pi * a, CLOSED_FORM),
        )
    raise ConfigError(f"no closed-form radii for {label}")


def _default_horizon(manifold: Manifold) -> float:
    if isinstance(manifold, Sphere):
        return 1.25 * math.pi * manifold.radius
    if isinstance(manifold, SurfaceOfRevolution):
        return manifold.horizon
    return 8.0


def _first_zeros_batch(manifold, base_coords, angles, horizon, step):
    """First zeros of j and j' along geodesics in the given directions.

    Returns (j_zero, jp_zero, valid_length) arrays with nan for "no zero
    found"; valid_length is where a direction left the chart (else horizon).
    Used for the numeric surface; vectorizes the joint geodesic+Jacobi system
    over all directions with a chart mask.
    """
    m = len(angles)
    u0 = base_coords[0]
    fu = float(manifold.profile.f(u0))
    state = np.zeros((m, 6))
    state[:, 0] = base_coords[0]
    state[:, 1] = base_coords[1]
    state[:, 2] = np.cos(angles)
    state[:, 3] = np.sin(angles) / fu
    state[:, 5] = 1.0

    n = max(2, int(math.ceil(horizon / step)))
    h = horizon / n
    alive = np.ones(m, dtype=bool)
    valid_length = np.full(m, horizon)
    j_zero = np.full(m, np.nan)
    jp_zero = np.full(m, np.nan)
    u_min, u_max = manifold.profile.u_min, manifold.profile.u_max

    def rhs(s):
        u = np.clip(s[:, 0], u_min, u_max)
        f = np.asarray(manifold.profile.f(u))
        fp = np.asarray(manifold.profile.df(u))
        k = -np.asarray(manifold.profile.d2f(u)) / f
        out = np.empty_like(s)
        out[:, 0] = s[:, 2]
        out[:, 1] = s[:, 3]
        out[:, 2] = f * fp * s[:, 3] ** 2
        out[:, 3] = -2.0 * (fp / f) * s[:, 2] * s[:, 3]
        out[:, 4] = s[:, 5]
        out[:, 5] = -k * s[:, 4]
        return out

    t = 0.0
    prev = state.copy()
    for _ in range(n):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * h * k1)
        k3 = rhs(state + 0.5 * h * k2)
        k4 = rhs(state + h * k3)
        new = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t_new = t + h
        exited = alive & ((new[:, 0] < u_min) | (new[:, 0] > u_max))
        valid_length[exited] = t
        alive &= ~exited
        cross_j = alive & (t > 0) & (prev[:, 4] * new[:, 4] <= 0) & np.isnan(j_zero)
        cross_j &= np.abs(prev[:, 4]) + np.abs(new[:, 4]) > 0
        for i in np.where(cross_j)[0]:
            denom = new[i, 4] - prev[i, 4]
            frac = 0.0 if denom == 0 else -prev[i, 4] / denom
            j_zero[i] = t + frac * h
        cross_jp = alive & (prev[:, 5] * new[:, 5] <= 0) & np.isnan(jp_zero)
        cross_jp &= np.abs(prev[:, 5]) + np.abs(new[:, 5]) > 0
        for i in np.where(cross_jp)[0]:
            denom = new[i, 5] - prev[i, 5]
            frac = 0.0 if denom == 0 else -prev[i, 5] / denom
            jp_zero[i] = t + frac * h
        prev = new
        state = new
        t = t_new
        done = ~alive | (~np.isnan(j_zero) & ~np.isnan(jp_zero))
        if done.all():
            break
    return j_zero, jp_zero, valid_length


def _jacobi_along_direction(manifold, base, angle_or_dir, horizon, step) -> JacobiSolution:
    if isinstance(manifold, SurfaceOfRevolution):
        comp = manifold.unit_tangent(base.coords, angle_or_dir)
    else:
        comp = angle_or_dir
    direction = TangentVector(base, comp)
    seg = GeodesicSegment(
        manifold=manifold, base=base, direction=direction, length=horizon
    )
    return integrate_jacobi(manifold, seg, step=step)


def _scan_radius(manifold, base, directions, horizon, step, of: str) -> RadiusValue:
    base = base if isinstance(base, ManifoldPoint) else basepoint_of(manifold)
    if isinstance(manifold, (Euclidean, Sphere, Hyperbolic)):
        # constant curvature: the scalar equation is direction-independent
        frame = manifold.tangent_basis(base.coords)
        sol = _jacobi_along_direction(manifold, base, frame[0], horizon, step)
        zero = sol.first_zero(of=of)
        if zero is None:
            return RadiusValue(horizon, NUMERIC, lower_bound_only=True)
        return RadiusValue(float(zero), NUMERIC)

    angles = np.linspace(0.0, 2.0 * math.pi, directions, endpoint=False)
    j_zero, jp_zero, valid = _first_zeros_batch(
        manifold, base.coords, angles, horizon, step
    )
    coarse = j_zero if of == "value" else jp_zero
    return _refine_scan(manifold, base, angles, coarse, valid, step, of)


def _refine_scan(manifold, base, angles, coarse, valid, step, of):
    found = ~np.isnan(coarse)
    if not found.any():
        bound = float(np.min(valid))
        return RadiusValue(bound, NUMERIC, lower_bound_only=True)
    # only directions near the coarse minimum can host the true minimum
    # (linear-interpolated crossings are accurate to far below one step)
    coarse_min = float(np.nanmin(coarse))
    near = found & (coarse <= coarse_min + 0.5 * step)
    best = math.inf
    for i in np.where(near)[0]:
        sol = _jacobi_along_direction(
            manifold, base, float(angles[i]), min(valid[i], coarse[i] * 1.1), step
        )
        z = sol.first_zero(of=of)
        if z is not None:
            best = min(best, float(z))
    if math.isinf(best):
        bound = float(np.min(valid))
        return RadiusValue(bound, NUMERIC, lower_bound_only=True)
    return RadiusValue(best, NUMERIC)


def conjugate_radius(
    manifold: Manifold,
    base: ManifoldPoint | None = None,
    directions: int = DEFAULT_DIRECTIONS,
    horizon: float | None = None,
    step: float = DEFAULT_STEP,
) -> RadiusValue:
    """First zero of j(t) (j(0)=0, j'(0)=1), minimized over sampled directions."""
    if directions < 1:
        raise ValueError("directions must be >= 1")
    horizon = horizon if horizon is not None else _default_horizon(manifold)
    return _scan_radius(manifold, base, directions, horizon, step, of="value")


def focal_radius(
    manifold: Manifold,
    base: ManifoldPoint | None = None,
    directions: int = DEFAULT_DIRECTIONS,
    horizon: float | None = None,
    step: float = DEFAULT_STEP,
) -> RadiusValue:
    """First zero of j'(t), minimized over sampled directions."""
    if directions < 1:
        raise ValueError("directions must be >= 1")
    horizon = horizon if horizon is not None else _default_horizon(manifold)
    return _scan_radius(manifold, base, directions, horizon, step, of="derivative")


def convexity_from(focal: RadiusValue, injectivity: RadiusValue) -> RadiusValue:
    """conv = min(focal, injectivity/2), with provenance from the argmin."""
    half_inj = injectivity.value / 2.0
    if focal.lower_bound_only and focal.value < half_inj:
        raise ConfigError(
            "focal radius is only a lower bound below injectivity/2; "
            "raise the search horizon"
        )
    if focal.value <= half_inj:
        return RadiusValue(focal.value, focal.provenance)
    return RadiusValue(half_inj, injectivity.provenance)


def radii_report(
    manifold: Manifold,
    certified_injectivity: float | None = None,
    certified_loop_length: float | None = None,
    base_points: int = DEFAULT_BASE_POINTS,
    directions: int = DEFAULT_DIRECTIONS,
    horizon: float | None = None,
    step: float = DEFAULT_STEP,
) -> RadiiReport:
    """Assemble the radii of a model.

    Constant-curvature models are closed-form.  The numeric surface samples
    ``base_points`` points along its u-interval (rotational symmetry makes v
    irrelevant), takes Jacobi minima over ``directions`` directions at each,
    and requires a certified injectivity bound from the caller.
    """
    if not isinstance(manifold, SurfaceOfRevolution):
        return closed_form_radii(manifold)
    if certified_injectivity is None:
        raise ConfigError(
            "numeric manifolds need a certified injectivity bound (config key "
            "injectivity_bound); it is never estimated"
        )
    horizon = horizon if horizon is not None else _default_horizon(manifold)
    lo, hi = manifold.profile.u_min, manifold.profile.u_max
    us = lo + (hi - lo) * (np.arange(base_points) + 1.0) / (base_points + 1.0)
    angles = np.linspace(0.0, 2.0 * math.pi, directions, endpoint=False)
    conj_best: RadiusValue | None = None
    foc_best: RadiusValue | None = None
    for u in us:
        base = ManifoldPoint(np.array([u, 0.0]))
        # one batched integration serves both scans at this base point
        j_zero, jp_zero, valid = _first_zeros_batch(
            manifold, base.coords, angles, horizon, step
        )
        c = _refine_scan(manifold, base, angles, j_zero, valid, step, "value")
        f = _refine_scan(manifold, base, angles, jp_zero, valid, step, "derivative")
        conj_best = _merge_min(conj_best, c)
        foc_best = _merge_min(foc_best, f)
    inj = RadiusValue(float(certified_injectivity), CERTIFIED)
    loop = (
        RadiusValue(float(certified_loop_length), CERTIFIED)
        if certified_loop_length is not None
        else RadiusValue(horizon * 2.0, CERTIFIED, lower_bound_only=True)
    )
    conv = convexity_from(foc_best, inj)
    return RadiiReport(manifold.describe(), inj, conj_best, foc_best, loop, conv)


def _merge_min(acc: RadiusValue | None, new: RadiusValue) -> RadiusValue:
    if acc is None:
        return new
    if new.lower_bound_only and acc.lower_bound_only:
        return RadiusValue(min(acc.value, new.value), NUMERIC, lower_bound_only=True)
    if new.lower_bound_only:
        return acc if acc.value <= new.value else RadiusValue(
            new.value, NUMERIC, lower_bound_only=True
        )
    if acc.lower_bound_only:
        return new if new.value <= acc.value else RadiusValue(
            acc.value, NUMERIC, lower_bound_only=True
        )
    return acc if acc.value <= new.value else new
