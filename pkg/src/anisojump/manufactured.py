"""Manufactured interface problems with exact reference data.

A case fixes analytic piecewise fields u+- with gradients and Hessians,
one coefficient tensor per side, and an interface curve.  Sources are
derived so each side satisfies  -div(A grad u) + sigma u = f  exactly,
and the prescribed jumps (w, v and their surface derivatives) are
induced by the fields.  Every quantity the jump relations produce can
therefore be checked against a directly evaluated reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import (InterfaceCurve, Circle, Ellipse, LocalFrame,
                       build_local_frame, graph_parameter)
from .jumps import (JumpData, SideState, plus_state_closed_form_constant,
                    plus_state_closed_form_variable, plus_state_oracle)
from .tensors import AnisoTensor, localize


@dataclass(frozen=True)
class AnalyticField:
    """Scalar field with analytic gradient and Hessian."""

    value: Callable[[float, float], float]
    grad: Callable[[float, float], np.ndarray]
    hess: Callable[[float, float], np.ndarray]

    def __call__(self, x, y):
        return self.value(x, y)


def _trig_field():
    return AnalyticField(
        value=lambda x, y: np.sin(x) * np.cos(y),
        grad=lambda x, y: np.array([np.cos(x) * np.cos(y),
                                    -np.sin(x) * np.sin(y)]),
        hess=lambda x, y: np.array([
            [-np.sin(x) * np.cos(y), -np.cos(x) * np.sin(y)],
            [-np.cos(x) * np.sin(y), -np.sin(x) * np.cos(y)]]))


def _saddle_field():
    return AnalyticField(
        value=lambda x, y: x * x - y * y,
        grad=lambda x, y: np.array([2.0 * x, -2.0 * y]),
        hess=lambda x, y: np.array([[2.0, 0.0], [0.0, -2.0]]))


def _poly_trig_field():
    return AnalyticField(
        value=lambda x, y: 0.5 * x * y + np.cos(x + 0.5 * y),
        grad=lambda x, y: np.array([0.5 * y - np.sin(x + 0.5 * y),
                                    0.5 * x - 0.5 * np.sin(x + 0.5 * y)]),
        hess=lambda x, y: np.array([
            [-np.cos(x + 0.5 * y), 0.5 - 0.5 * np.cos(x + 0.5 * y)],
            [0.5 - 0.5 * np.cos(x + 0.5 * y), -0.25 * np.cos(x + 0.5 * y)]]))


def _exp_field():
    return AnalyticField(
        value=lambda x, y: np.exp(0.3 * x) * np.sin(y) + 0.2 * x,
        grad=lambda x, y: np.array([0.3 * np.exp(0.3 * x) * np.sin(y) + 0.2,
                                    np.exp(0.3 * x) * np.cos(y)]),
        hess=lambda x, y: np.array([
            [0.09 * np.exp(0.3 * x) * np.sin(y),
             0.3 * np.exp(0.3 * x) * np.cos(y)],
            [0.3 * np.exp(0.3 * x) * np.cos(y),
             -np.exp(0.3 * x) * np.sin(y)]]))


@dataclass(frozen=True)
class ManufacturedCase:
    """Analytic two-sided problem with induced jump data."""

    name: str
    u_plus: AnalyticField
    u_minus: AnalyticField
    tensor_plus: AnisoTensor
    tensor_minus: AnisoTensor
    curve: InterfaceCurve

    def side(self, sign: str):
        if sign in ("+", "plus"):
            return self.u_plus, self.tensor_plus
        if sign in ("-", "minus"):
            return self.u_minus, self.tensor_minus
        raise ValueError(f"side must be '+' or '-', got {sign!r}")

    def source(self, sign: str, x: float, y: float) -> float:
        """Exact source f = -div(A grad u) + sigma u on one side."""
        u, tensor = self.side(sign)
        m11, m12, m22 = tensor.entries(x, y)
        H = u.hess(x, y)
        g = u.grad(x, y)
        quad = m11 * H[0, 0] + 2.0 * m12 * H[0, 1] + m22 * H[1, 1]
        dg = tensor.entry_gradients(x, y)  # rows dA11, dA12, dA22
        drift = (dg[0, 0] + dg[1, 1]) * g[0] + (dg[1, 0] + dg[2, 1]) * g[1]
        return -(quad + drift) + tensor.sigma(x, y) * u(x, y)

    @property
    def is_variable(self) -> bool:
        return self.tensor_plus.is_variable or self.tensor_minus.is_variable

    def exact(self, x, y) -> float:
        """Exact solution by side of the interface (level set sign)."""
        u = self.u_minus if self.curve.level_set(x, y) <= 0.0 else self.u_plus
        return u(x, y)


def _flux_jump_at_point(case: ManufacturedCase, point, normal) -> float:
    x, y = point
    gp = case.tensor_plus.matrix(x, y) @ case.u_plus.grad(x, y)
    gm = case.tensor_minus.matrix(x, y) @ case.u_minus.grad(x, y)
    return float(np.dot(gp - gm, normal))


def jump_data_at(case: ManufacturedCase, t: float) -> JumpData:
    """Induced jumps and their surface derivatives at curve parameter t.

    w and v are exact; the surface derivatives use 4th-order centered
    differences in the local graph ordinate (step ~ 1e-3 of the curve
    diameter), which equals surface differentiation at the anchor.
    """
    frame = build_local_frame(case.curve, t)
    h = 1e-3 * case.curve.diameter

    def w_of(point):
        x, y = point
        return case.u_plus(x, y) - case.u_minus(x, y)

    anchor = frame.anchor
    w0 = w_of(anchor)
    v0 = _flux_jump_at_point(case, anchor, frame.normal)

    ws, vs = [], []
    for eta in (-2.0 * h, -h, h, 2.0 * h):
        tq = graph_parameter(case.curve, frame, eta)
        pq = case.curve.position(tq)
        nq, _ = case.curve.normal_tangent(tq)
        ws.append(w_of(pq))
        vs.append(_flux_jump_at_point(case, pq, nq))
    wm2, wm1, wp1, wp2 = ws
    vm2, vm1, vp1, vp2 = vs
    w1 = (wm2 - 8.0 * wm1 + 8.0 * wp1 - wp2) / (12.0 * h)
    w2 = (-wm2 + 16.0 * wm1 - 30.0 * w0 + 16.0 * wp1 - wp2) / (12.0 * h * h)
    v1 = (vm2 - 8.0 * vm1 + 8.0 * vp1 - vp2) / (12.0 * h)
    return JumpData(w=w0, w1=w1, w2=w2, v=v0, v1=v1)


def side_state_at(case: ManufacturedCase, t: float, sign: str) -> SideState:
    """One side's value and frame-local derivatives at curve parameter t.

    First derivatives rotate as the gradient, second derivatives by
    conjugating the Hessian with the frame rotation.
    """
    frame = build_local_frame(case.curve, t)
    u, _ = case.side(sign)
    x, y = frame.anchor
    g = u.grad(x, y)
    H = u.hess(x, y)
    Q = frame.rotation
    gl = Q @ g
    Hl = Q @ H @ Q.T
    return SideState(u=float(u(x, y)), u_xi=float(gl[0]), u_eta=float(gl[1]),
                     u_xixi=float(Hl[0, 0]), u_xieta=float(Hl[0, 1]),
                     u_etaeta=float(Hl[1, 1]))


@dataclass(frozen=True)
class TheoremReport:
    """Componentwise discrepancies of the recovered plus state at one point."""

    t: float
    frame: LocalFrame
    closed_vs_analytic: np.ndarray
    oracle_vs_analytic: np.ndarray
    closed_vs_oracle: np.ndarray
    path: str

    @property
    def max_residual(self) -> float:
        return float(max(np.max(np.abs(self.closed_vs_analytic)),
                         np.max(np.abs(self.oracle_vs_analytic))))


def plus_state_via_relations(case: ManufacturedCase, t: float,
                             strict_paper: bool = False):
    """Recover the plus state from minus state + jumps; also the oracle's."""
    frame = build_local_frame(case.curve, t)
    minus = side_state_at(case, t, "-")
    jd = jump_data_at(case, t)
    lp = localize(case.tensor_plus, frame)
    lm = localize(case.tensor_minus, frame)
    x, y = frame.anchor
    sp_ = case.tensor_plus.sigma(x, y)
    sm_ = case.tensor_minus.sigma(x, y)
    fp = case.source("+", x, y)
    fm = case.source("-", x, y)
    if case.is_variable:
        closed = plus_state_closed_form_variable(
            minus, jd, frame, lp, lm, sp_, sm_, fp, fm,
            strict_paper=strict_paper)
        path = "variable"
    else:
        closed = plus_state_closed_form_constant(
            minus, jd, frame, lp, lm, sp_, sm_, fp, fm,
            strict_paper=strict_paper)
        path = "constant"
    oracle = plus_state_oracle(minus, jd, frame, lp, lm, sp_, sm_, fp, fm)
    return closed, oracle, frame, path


def verify_theorem_at(case: ManufacturedCase, t: float,
                      strict_paper: bool = False) -> TheoremReport:
    """Compare the relation-recovered plus state against the analytic one.

    Reports discrepancies, never raises on mismatch.
    """
    closed, oracle, frame, path = plus_state_via_relations(
        case, t, strict_paper=strict_paper)
    analytic = side_state_at(case, t, "+").as_array()
    return TheoremReport(
        t=t, frame=frame,
        closed_vs_analytic=closed.as_array() - analytic,
        oracle_vs_analytic=oracle.as_array() - analytic,
        closed_vs_oracle=closed.as_array() - oracle.as_array(),
        path=path)


def flip_sides(case: ManufacturedCase) -> ManufacturedCase:
    """Exchange the side labels (and the curve orientation with them)."""
    c = case.curve
    if isinstance(c, Circle):
        flipped = Circle(c.center, c.radius, minus_inside=not c.minus_inside)
    elif isinstance(c, Ellipse):
        flipped = Ellipse(c.center, (c.a, c.b), c.rotation,
                          minus_inside=not c.minus_inside)
    else:
        flipped = type(c)(c._samples, minus_inside=not c.minus_inside)
    return ManufacturedCase(name=case.name + "_swapped",
                            u_plus=case.u_minus, u_minus=case.u_plus,
                            tensor_plus=case.tensor_minus,
                            tensor_minus=case.tensor_plus,
                            curve=flipped)


# ---------------------------------------------------------------------------
# built-in case registry
# ---------------------------------------------------------------------------

def _unit_circle():
    return Circle((0.0, 0.0), 1.0)


def _ellipse():
    return Ellipse((0.1, -0.05), (1.2, 0.7), rotation=0.4)


def _tensor_pairs():
    return {
        "isotropic": (AnisoTensor(10.0, 0.0, 10.0),
                      AnisoTensor(1.0, 0.0, 1.0)),
        "diagonal": (AnisoTensor(2.0, 0.0, 0.5, sigma=1.2),
                     AnisoTensor(1.0, 0.0, 3.0, sigma=0.7)),
        "coupled": (AnisoTensor(2.0, 1.0, 3.0),
                    AnisoTensor(1.0, 0.0, 1.0)),
    }


def _variable_tensors():
    plus = AnisoTensor(
        lambda x, y: 2.0 + 0.3 * x,
        lambda x, y: 0.2 + 0.1 * y,
        lambda x, y: 1.5 + 0.2 * y,
        sigma=0.9,
        derivatives={
            "a11_x": lambda x, y: 0.3, "a11_y": lambda x, y: 0.0,
            "a12_x": lambda x, y: 0.0, "a12_y": lambda x, y: 0.1,
            "a22_x": lambda x, y: 0.0, "a22_y": lambda x, y: 0.2,
        },
        check_points=[(-2.0, -2.0), (2.0, 2.0), (0.0, 0.0)])
    minus = AnisoTensor(
        lambda x, y: 1.5 + 0.25 * np.sin(y),
        lambda x, y: -0.1 + 0.05 * x,
        lambda x, y: 1.0 + 0.15 * np.cos(x),
        sigma=0.4,
        derivatives={
            "a11_x": lambda x, y: 0.0,
            "a11_y": lambda x, y: 0.25 * np.cos(y),
            "a12_x": lambda x, y: 0.05, "a12_y": lambda x, y: 0.0,
            "a22_x": lambda x, y: -0.15 * np.sin(x),
            "a22_y": lambda x, y: 0.0,
        },
        check_points=[(-2.0, -2.0), (2.0, 2.0), (0.0, 0.0)])
    return plus, minus


def variable_tensor_family(name: str) -> AnisoTensor:
    """Named analytic variable-tensor families usable from the CLI config."""
    plus, minus = _variable_tensors()
    families = {"mild_drift_plus": plus, "mild_drift_minus": minus}
    try:
        return families[name]
    except KeyError:
        raise KeyError(f"unknown tensor family {name!r}; "
                       f"available: {sorted(families)}") from None


def _build_case(name: str) -> ManufacturedCase:
    if name == "continuous_circle":
        u = _trig_field()
        A = AnisoTensor(1.0, 0.0, 1.0)
        return ManufacturedCase(name, u, u, A, A, _unit_circle())
    if name == "variable_circle":
        tp, tm = _variable_tensors()
        return ManufacturedCase(name, _exp_field(), _trig_field(),
                                tp, tm, _unit_circle())
    kind, _, curve_kind = name.rpartition("_")
    pairs = _tensor_pairs()
    if kind in pairs and curve_kind in ("circle", "ellipse"):
        tp, tm = pairs[kind]
        curve = _unit_circle() if curve_kind == "circle" else _ellipse()
        u_plus = _saddle_field() if kind == "coupled" else _poly_trig_field()
        return ManufacturedCase(name, u_plus, _trig_field(), tp, tm, curve)
    raise KeyError(f"unknown case {name!r}; available: {sorted(CASE_NAMES)}")


CASE_NAMES = tuple(
    [f"{kind}_{curve}" for kind in ("isotropic", "diagonal", "coupled")
     for curve in ("circle", "ellipse")]
    + ["continuous_circle", "variable_circle"])


def get_case(name: str) -> ManufacturedCase:
    return _build_case(name)
