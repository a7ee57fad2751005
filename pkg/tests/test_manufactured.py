import numpy as np
import pytest

from anisojump.geometry import Circle, build_local_frame
from anisojump.manufactured import (CASE_NAMES, flip_sides, get_case,
                                    jump_data_at, side_state_at,
                                    variable_tensor_family,
                                    verify_theorem_at)

CONSTANT_CASES = [n for n in CASE_NAMES
                  if n not in ("variable_circle",)]


def test_registry_names():
    assert "coupled_circle" in CASE_NAMES
    assert "variable_circle" in CASE_NAMES
    with pytest.raises(KeyError):
        get_case("no_such_case")


class TestInducedData:
    def test_coupled_circle_flux_jump_hand_value(self):
        # at (1, 0): grad u+ = (2, 0), grad u- = (cos 1, 0);
        # v = (A+ grad u+ - A- grad u-) . e_x = 4 - cos(1)
        case = get_case("coupled_circle")
        jd = jump_data_at(case, 0.0)
        assert jd.v == pytest.approx(4.0 - np.cos(1.0), abs=1e-13)
        # w = u+(1,0) - u-(1,0) = 1 - sin(1)
        assert jd.w == pytest.approx(1.0 - np.sin(1.0), abs=1e-13)

    def test_continuous_case_has_zero_jumps(self):
        case = get_case("continuous_circle")
        for t in np.linspace(0.0, 2 * np.pi, 9):
            jd = jump_data_at(case, t)
            vals = (jd.w, jd.w1, jd.w2, jd.v, jd.v1)
            assert max(abs(v) for v in vals) < 1e-9

    def test_surface_derivatives_against_parameter_derivatives(self):
        # on the unit circle the arc length equals the parameter, so w'
        # and w'' can be cross-checked by differencing w along t itself
        case = get_case("diagonal_circle")
        t0 = 0.8

        def w_of(t):
            x, y = case.curve.position(t)
            return case.u_plus(x, y) - case.u_minus(x, y)

        h = 1e-4
        w1_ref = (w_of(t0 - 2 * h) - 8 * w_of(t0 - h)
                  + 8 * w_of(t0 + h) - w_of(t0 + 2 * h)) / (12 * h)
        w2_ref = (-w_of(t0 - 2 * h) + 16 * w_of(t0 - h) - 30 * w_of(t0)
                  + 16 * w_of(t0 + h) - w_of(t0 + 2 * h)) / (12 * h * h)
        jd = jump_data_at(case, t0)
        assert jd.w1 == pytest.approx(w1_ref, abs=1e-9)
        assert jd.w2 == pytest.approx(w2_ref, abs=1e-7)

    def test_source_satisfies_pde(self):
        # -div(A grad u) + sigma u - f = 0 with a finite-difference
        # divergence, including the variable-tensor drift terms
        case = get_case("variable_circle")
        h = 1e-5
        for (x, y, sign) in ((0.3, -0.2, "-"), (1.5, 0.8, "+")):
            u, tensor = case.side(sign)

            def flux(xx, yy):
                return tensor.matrix(xx, yy) @ u.grad(xx, yy)

            div = ((flux(x + h, y)[0] - flux(x - h, y)[0])
                   + (flux(x, y + h)[1] - flux(x, y - h)[1])) / (2 * h)
            f = case.source(sign, x, y)
            assert -div + tensor.sigma(x, y) * u(x, y) == pytest.approx(
                f, abs=1e-8)


class TestSideState:
    def test_rotated_derivatives_hand_values(self):
        # u = x^2 on the unit circle at 45 degrees: grad = (2x, 0),
        # Hessian = diag(2, 0); conjugating with the frame rotation at
        # theta = pi/4 gives u_xixi = u_etaeta = 1, u_xieta = -1
        case = get_case("coupled_circle")
        t = np.pi / 4
        frame = build_local_frame(case.curve, t)
        x, y = frame.anchor
        # coupled cases use u+ = x^2 - y^2; subtract the -y^2 part by hand
        st = side_state_at(case, t, "+")
        c = np.cos(t)
        # grad (x^2 - y^2) = (2x, -2y) = (sqrt2, -sqrt2) at the anchor
        assert st.u == pytest.approx(x * x - y * y, abs=1e-13)
        assert st.u_xi == pytest.approx(2 * x * c - 2 * y * np.sin(t),
                                        abs=1e-12)
        # Hessian diag(2, -2) conjugated by theta = pi/4: off-diagonal -2,
        # diagonal 0
        assert st.u_xixi == pytest.approx(0.0, abs=1e-12)
        assert st.u_xieta == pytest.approx(-2.0, abs=1e-12)
        assert st.u_etaeta == pytest.approx(0.0, abs=1e-12)

    def test_laplacian_invariance(self):
        # trace of the Hessian is frame independent
        case = get_case("isotropic_ellipse")
        for t in (0.3, 1.9, 4.1):
            frame = build_local_frame(case.curve, t)
            st = side_state_at(case, t, "-")
            H = case.u_minus.hess(*frame.anchor)
            assert st.u_xixi + st.u_etaeta == pytest.approx(
                H[0, 0] + H[1, 1], abs=1e-12)


class TestTheoremVerification:
    @pytest.mark.parametrize("name", CONSTANT_CASES)
    def test_constant_cases(self, name):
        case = get_case(name)
        for t in np.linspace(0.0, case.curve.period, 16, endpoint=False):
            rep = verify_theorem_at(case, t)
            assert rep.path == "constant"
            assert rep.max_residual < 1e-8

    def test_variable_case(self):
        case = get_case("variable_circle")
        for t in np.linspace(0.0, 2 * np.pi, 16, endpoint=False):
            rep = verify_theorem_at(case, t)
            assert rep.path == "variable"
            assert rep.max_residual < 1e-7

    def test_strict_paper_fails_anisotropic(self):
        case = get_case("coupled_circle")
        worst = max(verify_theorem_at(case, t, strict_paper=True).max_residual
                    for t in np.linspace(0.0, 2 * np.pi, 8, endpoint=False))
        assert worst > 1e-3

    def test_swapped_sides_verify_too(self):
        for name in ("coupled_circle", "diagonal_ellipse"):
            case = flip_sides(get_case(name))
            for t in np.linspace(0.0, case.curve.period, 8, endpoint=False):
                assert verify_theorem_at(case, t).max_residual < 1e-8

    def test_report_is_diagnostic_not_raising(self):
        rep = verify_theorem_at(get_case("coupled_circle"), 0.0,
                                strict_paper=True)
        assert rep.max_residual > 0.0  # large, but reported, not raised


class TestCurvatureRobustness:
    def test_circle_radii(self):
        base = get_case("coupled_circle")
        for radius in (0.5, 1.0, 5.0):
            case = type(base)(name=f"r{radius}", u_plus=base.u_plus,
                              u_minus=base.u_minus,
                              tensor_plus=base.tensor_plus,
                              tensor_minus=base.tensor_minus,
                              curve=Circle((0.0, 0.0), radius))
            for t in np.linspace(0.0, 2 * np.pi, 8, endpoint=False):
                assert verify_theorem_at(case, t).max_residual < 1e-8


def test_variable_tensor_family_lookup():
    plus = variable_tensor_family("mild_drift_plus")
    assert plus.is_variable and plus.has_derivatives
    with pytest.raises(KeyError):
        variable_tensor_family("nope")
