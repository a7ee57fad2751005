"""Diffusion tensors per side and their rotation into a local frame.

``AnisoTensor`` holds the symmetric positive definite coefficient matrix
A together with the reaction coefficient sigma and the source f of one
side.  Entries may be constants or fields ``(x, y) -> float``; variable
entries must come with analytic first partial derivatives so that the
frame-local coefficient combinations c1..c4 stay exact.

Rotation into a frame with normal angle theta is the congruence
a = Q A Q^T with Q the rotation by -theta (rows: normal, tangent):

    a11 = A11 cos^2 + A22 sin^2 + 2 A12 cos sin
    a22 = A11 sin^2 + A22 cos^2 - 2 A12 cos sin
    a12 = (A22 - A11) cos sin + A12 (cos^2 - sin^2)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, CoefficientError


def _as_field(value):
    if callable(value):
        return value
    v = float(value)
    return lambda x, y: v


class AnisoTensor:
    """One side's coefficients: SPD matrix A, reaction sigma, source f.

    Parameters
    ----------
    a11, a12, a22 : float or callable(x, y)
        Tensor entries.  All three must be constants, or all callables.
    sigma : float or callable, >= 0
    f : float or callable
        Source term.
    derivatives : dict, optional
        For variable tensors: keys ``"a11_x", "a11_y", "a12_x", "a12_y",
        "a22_x", "a22_y"`` mapping to callables, the analytic first
        partials of the entries.
    check_points : iterable of (x, y), optional
        Where to verify positive definiteness for variable tensors
        (constants are checked directly).
    """

    _DERIV_KEYS = ("a11_x", "a11_y", "a12_x", "a12_y", "a22_x", "a22_y")

    def __init__(self, a11, a12, a22, sigma=0.0, f=0.0,
                 derivatives=None, check_points=None):
        self.is_variable = any(callable(e) for e in (a11, a12, a22))
        if self.is_variable and not all(callable(e) for e in (a11, a12, a22)):
            raise CoefficientError("mix of constant and variable entries")
        self._a11 = _as_field(a11)
        self._a12 = _as_field(a12)
        self._a22 = _as_field(a22)
        self.sigma = _as_field(sigma)
        self.f = _as_field(f)
        if derivatives is not None:
            missing = [k for k in self._DERIV_KEYS if k not in derivatives]
            if missing:
                raise CoefficientError(f"missing derivative fields: {missing}")
            self._derivs = {k: derivatives[k] for k in self._DERIV_KEYS}
        else:
            self._derivs = None if self.is_variable else {
                k: (lambda x, y: 0.0) for k in self._DERIV_KEYS}
        if check_points is None:
            check_points = [(0.0, 0.0)] if self.is_variable else [(0.0, 0.0)]
        for (x, y) in check_points:
            self._check_spd(x, y)

    def _check_spd(self, x, y):
        m11, m12, m22 = self.entries(x, y)
        det = m11 * m22 - m12 * m12
        if not (m11 > 0.0 and det > 0.0):
            raise CoefficientError(
                f"tensor not SPD at ({x:g},{y:g}): a11={m11:g}, det={det:g}")

    @property
    def has_derivatives(self) -> bool:
        return self._derivs is not None

    def entries(self, x=0.0, y=0.0):
        return self._a11(x, y), self._a12(x, y), self._a22(x, y)

    def matrix(self, x=0.0, y=0.0):
        m11, m12, m22 = self.entries(x, y)
        return np.array([[m11, m12], [m12, m22]])

    def entry_gradients(self, x=0.0, y=0.0):
        """World-frame gradients of the three entries, rows (d/dx, d/dy)."""
        if self._derivs is None:
            raise CapabilityError("variable tensor built without derivatives")
        d = self._derivs
        return np.array([[d["a11_x"](x, y), d["a11_y"](x, y)],
                         [d["a12_x"](x, y), d["a12_y"](x, y)],
                         [d["a22_x"](x, y), d["a22_y"](x, y)]])

    def min_eigenvalue(self, x=0.0, y=0.0) -> float:
        m11, m12, m22 = self.entries(x, y)
        tr, det = m11 + m22, m11 * m22 - m12 * m12
        return 0.5 * (tr - np.sqrt(tr * tr - 4.0 * det))


@dataclass(frozen=True)
class LocalTensor:
    """A side's tensor expressed in a frame, plus the c-combinations.

    ``rotate_to_local`` fills only the entries (c's zero); ``localize``
    attaches the frame-dependent c1..c4.  ``a11_world`` keeps the
    pre-rotation A11 entry, needed only to reproduce the as-printed
    relation that divides by it.
    """

    a11: float
    a12: float
    a22: float
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    a11_world: float = 0.0

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a12

    @property
    def trace(self):
        return self.a11 + self.a22


def _rotated_entries(m11, m12, m22, theta):
    c, s = np.cos(theta), np.sin(theta)
    a11 = m11 * c * c + m22 * s * s + 2.0 * m12 * c * s
    a22 = m11 * s * s + m22 * c * c - 2.0 * m12 * c * s
    a12 = (m22 - m11) * c * s + m12 * (c * c - s * s)
    return a11, a12, a22


def rotate_to_local(tensor: AnisoTensor, theta: float, at=(0.0, 0.0)) -> LocalTensor:
    """Rotate the tensor entries at a point into the frame with angle theta."""
    x, y = at
    m11, m12, m22 = tensor.entries(x, y)
    if not (m11 > 0.0 and m11 * m22 - m12 * m12 > 0.0):
        raise CoefficientError("tensor not SPD at evaluation point")
    a11, a12, a22 = _rotated_entries(m11, m12, m22, theta)
    return LocalTensor(a11=a11, a12=a12, a22=a22, a11_world=m11)


def local_c_coefficients(tensor: AnisoTensor, frame):
    """Frame-local coefficient combinations (c1, c2, c3, c4).

    c1 = da11/dxi + da12/deta        c3 = da11/deta - chi'' a12
    c2 = da12/dxi + da22/deta        c4 = da12/deta - chi'' a22

    Spatial xi/eta derivatives come from the world-frame entry gradients
    by the chain rule through the (constant) frame rotation.
    """
    x, y = frame.anchor
    loc = rotate_to_local(tensor, frame.theta, at=(x, y))
    grads = tensor.entry_gradients(x, y)  # rows: dA11, dA12, dA22
    n, tau = frame.normal, frame.tangent
    # gradient of each rotated entry: same congruence applied per component
    da_dxi = _rotated_entries(*(grads @ n), frame.theta)
    da_deta = _rotated_entries(*(grads @ tau), frame.theta)
    k = frame.chi_second
    c1 = da_dxi[0] + da_deta[1]
    c2 = da_dxi[1] + da_deta[2]
    c3 = da_deta[0] - k * loc.a12
    c4 = da_deta[1] - k * loc.a22
    return c1, c2, c3, c4


def localize(tensor: AnisoTensor, frame) -> LocalTensor:
    """Rotate entries at the frame anchor and attach c1..c4."""
    x, y = frame.anchor
    loc = rotate_to_local(tensor, frame.theta, at=(x, y))
    c1, c2, c3, c4 = local_c_coefficients(tensor, frame)
    return LocalTensor(a11=loc.a11, a12=loc.a12, a22=loc.a22,
                       c1=c1, c2=c2, c3=c3, c4=c4,
                       a11_world=loc.a11_world)
