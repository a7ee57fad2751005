"""Demonstration finite-difference solver driven by the jump relations.

Uniform-grid 9-point discretization of  -div(A grad u) + sigma u = f
on a rectangle, with piecewise-constant A per side of the interface.
Grid points keep the regular stencil of their own side; at stencil arms
that cross the interface, the right-hand side receives a correction
built from the second-order Taylor expansion of the solution jump at
the projected interface point.  The jump expansion is assembled from
the minus-side state and the closed-form plus-state relations, so the
observed convergence order directly exercises those relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as spla

from .errors import GridError, SolverError
from .geometry import build_local_frame, world_to_local
from .jumps import plus_state_closed_form_constant
from .manufactured import ManufacturedCase, jump_data_at, side_state_at
from .tensors import localize


@dataclass(frozen=True)
class GridSpec:
    """Uniform node-centered grid with level-set samples (phi < 0 inside minus)."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    n: int
    h: float
    xs: np.ndarray
    ys: np.ndarray
    phi: np.ndarray  # shape (n+1, n+1), indexed [ix, iy]

    @staticmethod
    def build(domain, n: int, curve) -> "GridSpec":
        if n < 8:
            raise GridError(f"need at least 8 cells per side, got {n}")
        xmin, xmax, ymin, ymax = domain
        hx = (xmax - xmin) / n
        hy = (ymax - ymin) / n
        if abs(hx - hy) > 1e-12 * hx:
            raise GridError("domain must yield equal spacing in x and y")
        xs = xmin + hx * np.arange(n + 1)
        ys = ymin + hy * np.arange(n + 1)
        phi = np.empty((n + 1, n + 1))
        for ix, x in enumerate(xs):
            for iy, y in enumerate(ys):
                phi[ix, iy] = curve.level_set(x, y)
        return GridSpec(xmin, xmax, ymin, ymax, n, hx, xs, ys, phi)

    def minus_mask(self) -> np.ndarray:
        """phi <= 0 counts as the minus side (tie goes to minus)."""
        return self.phi <= 0.0

    def irregular_mask(self) -> np.ndarray:
        """Interior nodes whose 9-point stencil spans both phi signs."""
        minus = self.minus_mask()
        irr = np.zeros_like(minus)
        m = minus[1:-1, 1:-1]
        mixed = np.zeros_like(m)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nb = minus[1 + dx:self.n + dx, 1 + dy:self.n + dy]
                mixed |= nb != m
        irr[1:-1, 1:-1] = mixed
        return irr


@dataclass(frozen=True)
class CorrectionTerm:
    """Right-hand-side correction at one irregular grid point."""

    ix: int
    iy: int
    value: float


@dataclass(frozen=True)
class DiscreteSystem:
    grid: GridSpec
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    corrections: tuple


_STENCIL_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1),
                    (1, 1), (1, -1), (-1, 1), (-1, -1))


def _stencil(m11, m12, m22, sig, h):
    """Weights of -(A11 uxx + 2 A12 uxy + A22 uyy) + sigma u."""
    h2 = h * h
    center = 2.0 * (m11 + m22) / h2 + sig
    axis_x = -m11 / h2
    axis_y = -m22 / h2
    corner_pp = -m12 / (2.0 * h2)   # (+1,+1) and (-1,-1)
    corner_pm = m12 / (2.0 * h2)    # (+1,-1) and (-1,+1)
    weights = {(0, 0): center,
               (1, 0): axis_x, (-1, 0): axis_x,
               (0, 1): axis_y, (0, -1): axis_y,
               (1, 1): corner_pp, (-1, -1): corner_pp,
               (1, -1): corner_pm, (-1, 1): corner_pm}
    return weights


def correction_at(ix: int, iy: int, case: ManufacturedCase, grid: GridSpec,
                  curve=None) -> CorrectionTerm:
    """Correction for one irregular node.

    Expands the solution jump (value through second derivatives, from
    the minus state and the plus-state relations) about the node's
    projected interface point, evaluates it at every stencil neighbor
    on the opposite side, and weighs it with that arm's stencil
    coefficient.
    """
    curve = curve if curve is not None else case.curve
    x, y = grid.xs[ix], grid.ys[iy]
    node_minus = grid.phi[ix, iy] <= 0.0
    t_star = curve.closest_parameter((x, y))
    frame = build_local_frame(curve, t_star)

    minus = side_state_at(case, t_star, "-")
    jd = jump_data_at(case, t_star)
    lp = localize(case.tensor_plus, frame)
    lm = localize(case.tensor_minus, frame)
    ax_, ay_ = frame.anchor
    plus = plus_state_closed_form_constant(
        minus, jd, frame, lp, lm,
        case.tensor_plus.sigma(ax_, ay_), case.tensor_minus.sigma(ax_, ay_),
        case.source("+", ax_, ay_), case.source("-", ax_, ay_))
    jump = plus.as_array() - minus.as_array()
    jw, jux, juy, juxx, juxy, juyy = jump

    _, own_tensor = case.side("-" if node_minus else "+")
    m11, m12, m22 = own_tensor.entries(x, y)
    weights = _stencil(m11, m12, m22, own_tensor.sigma(x, y), grid.h)

    total = 0.0
    for dx, dy in _STENCIL_OFFSETS:
        jx, jy = ix + dx, iy + dy
        if (grid.phi[jx, jy] <= 0.0) == node_minus:
            continue
        xi, eta = world_to_local(frame, (grid.xs[jx], grid.ys[jy]))
        jump_val = (jw + jux * xi + juy * eta
                    + 0.5 * juxx * xi * xi + juxy * xi * eta
                    + 0.5 * juyy * eta * eta)
        total += weights[(dx, dy)] * jump_val
    if not node_minus:
        total = -total
    return CorrectionTerm(ix=ix, iy=iy, value=total)


def discretize(case: ManufacturedCase, grid: GridSpec,
               corrections: bool = True) -> DiscreteSystem:
    """Assemble the sparse system with Dirichlet data from the exact fields."""
    if case.is_variable:
        raise GridError("solver scope is piecewise-constant tensors")
    n = grid.n
    size = (n + 1) * (n + 1)
    minus = grid.minus_mask()
    irregular = grid.irregular_mask() if corrections else None

    rows, cols, vals = [], [], []
    rhs = np.zeros(size)
    correction_terms = []

    def idx(ix, iy):
        return ix * (n + 1) + iy

    for ix in range(n + 1):
        for iy in range(n + 1):
            k = idx(ix, iy)
            x, y = grid.xs[ix], grid.ys[iy]
            on_boundary = ix in (0, n) or iy in (0, n)
            sign = "-" if minus[ix, iy] else "+"
            if on_boundary:
                rows.append(k)
                cols.append(k)
                vals.append(1.0)
                u_field, _ = case.side(sign)
                rhs[k] = u_field(x, y)
                continue
            _, tensor = case.side(sign)
            m11, m12, m22 = tensor.entries(x, y)
            weights = _stencil(m11, m12, m22, tensor.sigma(x, y), grid.h)
            for (dx, dy), wgt in weights.items():
                if wgt == 0.0:
                    continue
                rows.append(k)
                cols.append(idx(ix + dx, iy + dy))
                vals.append(wgt)
            rhs[k] = case.source(sign, x, y)
            if corrections and irregular[ix, iy]:
                term = correction_at(ix, iy, case, grid)
                if term.value != 0.0:
                    correction_terms.append(term)
                    rhs[k] += term.value

    matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(size, size))
    return DiscreteSystem(grid=grid, matrix=matrix, rhs=rhs,
                          corrections=tuple(correction_terms))


def solve(system: DiscreteSystem, rtol: float = 1e-12,
          maxiter: int = 2000) -> np.ndarray:
    """ILU-preconditioned GMRES solve; enforces relative residual < 1e-10."""
    A = system.matrix.tocsc()
    try:
        ilu = spla.spilu(A, drop_tol=1e-6, fill_factor=20.0)
    except RuntimeError as exc:
        raise SolverError(f"ILU factorization failed: {exc}") from exc
    M = spla.LinearOperator(A.shape, ilu.solve)
    b = system.rhs
    try:
        x, info = spla.gmres(A, b, M=M, rtol=rtol, atol=0.0,
                             restart=60, maxiter=maxiter)
    except TypeError:  # scipy < 1.12 spells the tolerance 'tol'
        x, info = spla.gmres(A, b, M=M, tol=rtol, atol=0.0,
                             restart=60, maxiter=maxiter)
    res = np.linalg.norm(b - A @ x) / max(np.linalg.norm(b), 1e-300)
    if info != 0 or res > 1e-10:
        raise SolverError(
            f"GMRES did not converge: info={info}, rel residual={res:.3e}")
    n = system.grid.n
    return x.reshape((n + 1, n + 1))


def solution_errors(case: ManufacturedCase, grid: GridSpec,
                    u: np.ndarray):
    """Max and h-scaled L2 error against the exact piecewise solution."""
    minus = grid.minus_mask()
    err = np.empty_like(u)
    for ix in range(grid.n + 1):
        for iy in range(grid.n + 1):
            f_ = case.u_minus if minus[ix, iy] else case.u_plus
            err[ix, iy] = u[ix, iy] - f_(grid.xs[ix], grid.ys[iy])
    max_err = float(np.max(np.abs(err)))
    l2_err = float(grid.h * np.linalg.norm(err))
    return max_err, l2_err


DEFAULT_DOMAIN = (-2.0, 2.0, -2.0, 2.0)


def solve_case(case: ManufacturedCase, n: int, domain=DEFAULT_DOMAIN,
               corrections: bool = True):
    grid = GridSpec.build(domain, n, case.curve)
    system = discretize(case, grid, corrections=corrections)
    u = solve(system)
    return grid, u


def convergence_study(case: ManufacturedCase, n_list,
                      domain=DEFAULT_DOMAIN, corrections: bool = True):
    """Errors and observed orders over an ascending list of resolutions.

    Returns a list of dicts with keys n, h, max_err, l2_err, order
    (order is NaN on the first row).
    """
    if list(n_list) != sorted(n_list):
        raise GridError("n_list must be ascending")
    rows = []
    prev = None
    for n in n_list:
        grid, u = solve_case(case, n, domain=domain, corrections=corrections)
        max_err, l2_err = solution_errors(case, grid, u)
        order = float("nan") if prev is None else float(
            np.log2(prev / max_err))
        rows.append({"n": n, "h": grid.h, "max_err": max_err,
                     "l2_err": l2_err, "order": order})
        prev = max_err
    return rows
