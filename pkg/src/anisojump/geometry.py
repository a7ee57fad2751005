"""Closed smooth interface curves and local coordinate frames.

An interface curve separates the plane into an inner and an outer region.
The orientation convention throughout the package: the unit normal ``n``
points from the minus region into the plus region, and the unit tangent
``tau`` is ``n`` rotated by +90 degrees, so ``(n, tau)`` is a right-handed
pair.  At a frame anchor with normal angle ``theta``,

    n   = (cos theta, sin theta),
    tau = (-sin theta, cos theta).

Near an anchor the curve is the graph ``xi = chi(eta)`` in frame
coordinates, with ``chi(0) = 0`` and ``chi'(0) = 0``; ``chi_second`` is
``chi''(0)``.  Positive ``chi_second`` means the curve bends toward the
plus side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import GeometryError, GraphDomainError

_TWO_PI = 2.0 * np.pi


class InterfaceCurve:
    """Base class for closed C2 curves with a fixed side labeling.

    Subclasses provide ``position``, ``velocity`` and ``acceleration`` as
    functions of the curve parameter ``t`` in ``[0, period)``, with a
    counterclockwise parameterization.  ``minus_inside`` selects which
    region is labeled minus.
    """

    period: float = _TWO_PI
    minus_inside: bool = True

    def position(self, t):
        raise NotImplementedError

    def velocity(self, t):
        raise NotImplementedError

    def acceleration(self, t):
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    def _validate(self, n_samples: int = 256) -> None:
        p0 = self.position(0.0)
        p1 = self.position(self.period)
        if np.linalg.norm(p1 - p0) > 1e-12 * max(1.0, self.diameter):
            raise GeometryError("curve is not closed over one period")
        ts = np.linspace(0.0, self.period, n_samples, endpoint=False)
        speeds = np.array([np.linalg.norm(self.velocity(t)) for t in ts])
        if speeds.min() < 1e-14:
            raise GeometryError("tangent vanishes on the sample set")

    def normal_tangent(self, t):
        """Unit normal (minus -> plus) and unit tangent at parameter t."""
        v = self.velocity(t)
        speed = np.linalg.norm(v)
        if speed < 1e-14:
            raise GeometryError(f"degenerate tangent at t={t}")
        tau = v / speed
        if not self.minus_inside:
            tau = -tau
        n = np.array([tau[1], -tau[0]])
        return n, tau

    def closest_parameter(self, point, n_coarse: int = 256) -> float:
        """Parameter of the curve point nearest to ``point``."""
        p = np.asarray(point, dtype=float)
        ts = np.linspace(0.0, self.period, n_coarse, endpoint=False)
        d2 = [np.dot(self.position(t) - p, self.position(t) - p) for t in ts]
        t = ts[int(np.argmin(d2))]
        # Newton on g(t) = (r(t) - p) . r'(t) = 0
        for _ in range(60):
            r = self.position(t)
            v = self.velocity(t)
            a = self.acceleration(t)
            g = np.dot(r - p, v)
            dg = np.dot(v, v) + np.dot(r - p, a)
            if dg == 0.0:
                break
            step = g / dg
            t -= step
            if abs(step) < 1e-14 * self.period:
                break
        else:
            raise GeometryError("closest-point iteration did not converge")
        return t % self.period

    def level_set(self, x: float, y: float) -> float:
        """Signed distance-like function, negative in the minus region."""
        p = np.array([x, y], dtype=float)
        t = self.closest_parameter(p)
        n, _ = self.normal_tangent(t)
        return float(np.dot(p - self.position(t), n))


class Circle(InterfaceCurve):
    def __init__(self, center=(0.0, 0.0), radius=1.0, minus_inside=True):
        if radius <= 0.0:
            raise GeometryError("radius must be positive")
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        self.minus_inside = bool(minus_inside)
        self._validate()

    def position(self, t):
        return self.center + self.radius * np.array([np.cos(t), np.sin(t)])

    def velocity(self, t):
        return self.radius * np.array([-np.sin(t), np.cos(t)])

    def acceleration(self, t):
        return -self.radius * np.array([np.cos(t), np.sin(t)])

    @property
    def diameter(self):
        return 2.0 * self.radius

    def level_set(self, x, y):
        d = np.hypot(x - self.center[0], y - self.center[1]) - self.radius
        return d if self.minus_inside else -d

    def closest_parameter(self, point, n_coarse=256):
        p = np.asarray(point, dtype=float) - self.center
        if np.hypot(*p) < 1e-14:
            return 0.0
        return float(np.arctan2(p[1], p[0]) % _TWO_PI)


class Ellipse(InterfaceCurve):
    def __init__(self, center=(0.0, 0.0), semi_axes=(1.0, 1.0),
                 rotation=0.0, minus_inside=True):
        a, b = semi_axes
        if a <= 0.0 or b <= 0.0:
            raise GeometryError("semi-axes must be positive")
        self.center = np.asarray(center, dtype=float)
        self.a = float(a)
        self.b = float(b)
        self.rotation = float(rotation)
        c, s = np.cos(self.rotation), np.sin(self.rotation)
        self._rot = np.array([[c, -s], [s, c]])
        self.minus_inside = bool(minus_inside)
        self._validate()

    def position(self, t):
        q = np.array([self.a * np.cos(t), self.b * np.sin(t)])
        return self.center + self._rot @ q

    def velocity(self, t):
        q = np.array([-self.a * np.sin(t), self.b * np.cos(t)])
        return self._rot @ q

    def acceleration(self, t):
        q = np.array([-self.a * np.cos(t), -self.b * np.sin(t)])
        return self._rot @ q

    @property
    def diameter(self):
        return 2.0 * max(self.a, self.b)

    def level_set(self, x, y):
        # Quasi level set: correct sign, smooth, not a distance.
        p = self._rot.T @ (np.array([x, y], dtype=float) - self.center)
        q = (p[0] / self.a) ** 2 + (p[1] / self.b) ** 2 - 1.0
        return q if self.minus_inside else -q


class ParametricCurve(InterfaceCurve):
    """Closed curve through samples, periodic cubic interpolation, t in [0, 1)."""

    period = 1.0

    def __init__(self, samples, minus_inside=True):
        pts = np.asarray(samples, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 4:
            raise GeometryError("need an (N, 2) array with N >= 4 samples")
        if np.linalg.norm(pts[0] - pts[-1]) < 1e-12:
            pts = pts[:-1]
        # enforce counterclockwise sample order (shoelace)
        area2 = np.sum(pts[:, 0] * np.roll(pts[:, 1], -1)
                       - np.roll(pts[:, 0], -1) * pts[:, 1])
        if area2 < 0.0:
            pts = pts[::-1]
        self._samples = pts
        closed = np.vstack([pts, pts[:1]])
        ts = np.linspace(0.0, 1.0, len(closed))
        self._spline = CubicSpline(ts, closed, bc_type="periodic")
        self._dspline = self._spline.derivative()
        self._ddspline = self._dspline.derivative()
        self.minus_inside = bool(minus_inside)
        self._validate()

    def position(self, t):
        return np.asarray(self._spline(t % 1.0), dtype=float)

    def velocity(self, t):
        return np.asarray(self._dspline(t % 1.0), dtype=float)

    def acceleration(self, t):
        return np.asarray(self._ddspline(t % 1.0), dtype=float)

    @property
    def diameter(self):
        lo = self._samples.min(axis=0)
        hi = self._samples.max(axis=0)
        return float(np.linalg.norm(hi - lo))


@dataclass(frozen=True)
class LocalFrame:
    """Rotated frame at an interface point.

    ``theta`` is the angle of the minus-to-plus normal against the x axis;
    ``chi_second`` the second derivative of the local interface graph.
    ``t`` records the curve parameter of the anchor for probing.
    """

    anchor_x: float
    anchor_y: float
    theta: float
    chi_second: float
    t: float = 0.0

    @property
    def anchor(self):
        return np.array([self.anchor_x, self.anchor_y])

    @property
    def normal(self):
        return np.array([np.cos(self.theta), np.sin(self.theta)])

    @property
    def tangent(self):
        return np.array([-np.sin(self.theta), np.cos(self.theta)])

    @property
    def rotation(self):
        """Rows are (normal, tangent): maps world offsets to (xi, eta)."""
        c, s = np.cos(self.theta), np.sin(self.theta)
        return np.array([[c, s], [-s, c]])


def build_local_frame(curve: InterfaceCurve, t: float) -> LocalFrame:
    """Frame at curve parameter ``t`` with the graph curvature chi''(0).

    chi''(0) = (r'' . n) / |r'|^2 : with the anchor velocity parallel to
    the tangent, the graph ordinate runs at speed |r'| while the normal
    offset accelerates at r'' . n.
    """
    v = curve.velocity(t)
    speed2 = float(np.dot(v, v))
    if speed2 < 1e-28:
        raise GeometryError(f"degenerate tangent at t={t}")
    n, _tau = curve.normal_tangent(t)
    acc = curve.acceleration(t)
    chi2 = float(np.dot(acc, n)) / speed2
    p = curve.position(t)
    theta = float(np.arctan2(n[1], n[0]))
    return LocalFrame(anchor_x=float(p[0]), anchor_y=float(p[1]),
                      theta=theta, chi_second=chi2, t=float(t))


def world_to_local(frame: LocalFrame, point):
    """Map a world point to frame coordinates (xi, eta)."""
    d = np.asarray(point, dtype=float) - frame.anchor
    return frame.rotation @ d


def local_to_world(frame: LocalFrame, xi_eta):
    """Inverse of :func:`world_to_local`."""
    return frame.anchor + frame.rotation.T @ np.asarray(xi_eta, dtype=float)


def normal_tangent_at(curve: InterfaceCurve, t: float):
    """Unit normal and tangent at parameter t (delegates to the curve)."""
    return curve.normal_tangent(t)


def graph_parameter(curve: InterfaceCurve, frame: LocalFrame,
                    eta: float) -> float:
    """Curve parameter of the nearby point with frame ordinate ``eta``.

    Safeguarded 1D root solving in the curve parameter (bracketing plus
    Brent iteration to machine tolerance).
    """
    if eta == 0.0:
        return frame.t
    eta_max = 0.5 / max(abs(frame.chi_second), 1.0 / curve.diameter)
    if abs(eta) >= eta_max:
        raise GraphDomainError(
            f"|eta|={abs(eta):g} outside single-valued graph range {eta_max:g}")
    tau = frame.tangent
    anchor = frame.anchor

    def ordinate_err(t):
        return float(np.dot(curve.position(t) - anchor, tau)) - eta

    v0 = curve.velocity(frame.t)
    rate = float(np.dot(v0, tau))  # d eta / d t at the anchor, nonzero
    dt = eta / rate
    lo, hi = sorted((0.0, 2.0 * dt))
    t0 = frame.t
    for _ in range(60):
        if ordinate_err(t0 + lo) * ordinate_err(t0 + hi) <= 0.0:
            break
        lo -= abs(dt)
        hi += abs(dt)
    else:
        raise GraphDomainError(f"could not bracket graph point at eta={eta:g}")
    return brentq(lambda t: ordinate_err(t0 + t), lo, hi,
                  xtol=1e-15, rtol=8.9e-16) + t0


def chi_probe(curve: InterfaceCurve, frame: LocalFrame, eta: float) -> float:
    """Normal offset chi(eta) of the interface at local ordinate ``eta``."""
    if eta == 0.0:
        return 0.0
    t_root = graph_parameter(curve, frame, eta)
    return float(np.dot(curve.position(t_root) - frame.anchor, frame.normal))
