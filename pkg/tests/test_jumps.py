import numpy as np
import pytest

from anisojump.errors import CoefficientError
from anisojump.geometry import LocalFrame
from anisojump.jumps import (JumpData, SideState, flux_jump_eval,
                             plus_state_closed_form_constant,
                             plus_state_closed_form_variable,
                             plus_state_oracle, primitive_residuals,
                             STATE_COMPONENTS, TYPO_LEDGER)
from anisojump.ledger import DEFAULT_SEED, draw_config, fuzz_deviations
from anisojump.tensors import AnisoTensor, LocalTensor, localize


def _random_config(seed):
    return draw_config(np.random.default_rng(seed))


class TestOracle:
    def test_continuous_data_gives_continuous_state(self):
        # identical tensors and zero jumps: plus state equals minus state
        frame = LocalFrame(0.0, 0.0, theta=0.7, chi_second=1.1)
        loc = localize(AnisoTensor(2.0, 0.5, 1.5), frame)
        minus = SideState(0.3, -0.2, 0.8, 1.1, -0.6, 0.4)
        plus = plus_state_oracle(minus, JumpData(), frame, loc, loc,
                                 0.5, 0.5, 0.2, 0.2)
        assert np.allclose(plus.as_array(), minus.as_array(), atol=1e-13)

    def test_residuals_vanish_for_oracle(self):
        frame, lp, lm, minus, jd, sp, sm, fp, fm = _random_config(42)
        plus = plus_state_oracle(minus, jd, frame, lp, lm, sp, sm, fp, fm)
        res = primitive_residuals(plus, minus, jd, frame, lp, lm,
                                  sp, sm, fp, fm)
        assert np.max(np.abs(res)) < 1e-12

    def test_residuals_detect_perturbation(self):
        frame, lp, lm, minus, jd, sp, sm, fp, fm = _random_config(43)
        plus = plus_state_oracle(minus, jd, frame, lp, lm, sp, sm, fp, fm)
        bad = SideState.from_array(plus.as_array() + 0.01)
        res = primitive_residuals(bad, minus, jd, frame, lp, lm,
                                  sp, sm, fp, fm)
        assert np.max(np.abs(res)) > 1e-4

    def test_rejects_nonpositive_a11(self):
        frame = LocalFrame(0.0, 0.0, theta=0.0, chi_second=0.0)
        bad = LocalTensor(a11=-1.0, a12=0.0, a22=1.0)
        good = LocalTensor(a11=1.0, a12=0.0, a22=1.0)
        with pytest.raises(CoefficientError):
            plus_state_oracle(SideState(), JumpData(), frame, bad, good)
        with pytest.raises(CoefficientError):
            plus_state_closed_form_constant(SideState(), JumpData(), frame,
                                            bad, good)


class TestClosedFormConstant:
    def test_matches_oracle_on_random_draws(self):
        worst = fuzz_deviations(200, DEFAULT_SEED)
        assert float(np.max(worst)) < 1e-10

    def test_scalar_reduction_coefficients(self):
        # A+- = beta+- I: probe each input with unit vectors and read off
        # the scalar-problem coefficients
        beta_p, beta_m = 3.0, 1.25
        frame = LocalFrame(0.0, 0.0, theta=0.9, chi_second=0.7)
        lp = localize(AnisoTensor(beta_p, 0.0, beta_p), frame)
        lm = localize(AnisoTensor(beta_m, 0.0, beta_m), frame)
        k = frame.chi_second
        jbeta = beta_p - beta_m

        def probe(minus=None, jd=None):
            return plus_state_closed_form_constant(
                minus or SideState(), jd or JumpData(), frame, lp, lm)

        # normal derivative: u_xi+ = (beta-/beta+) u_xi- + v/beta+
        st = probe(minus=SideState(u_xi=1.0))
        assert st.u_xi == pytest.approx(beta_m / beta_p, abs=1e-12)
        st = probe(jd=JumpData(v=1.0))
        assert st.u_xi == pytest.approx(1.0 / beta_p, abs=1e-12)
        st = probe(jd=JumpData(w1=1.0))
        assert st.u_xi == pytest.approx(0.0, abs=1e-12)
        # tangential derivative: u_eta+ = u_eta- + w'
        st = probe(minus=SideState(u_eta=1.0), jd=JumpData(w1=2.0))
        assert st.u_eta == pytest.approx(3.0, abs=1e-12)
        # tangential second derivative picks up curvature times the
        # coefficient contrast
        st = probe(minus=SideState(u_xi=1.0))
        assert st.u_etaeta == pytest.approx(k * jbeta / beta_p, abs=1e-12)
        st = probe(jd=JumpData(v=1.0))
        assert st.u_etaeta == pytest.approx(-k / beta_p, abs=1e-12)
        # mixed derivative: u_xieta+ = (beta-/beta+) u_xieta-
        #                   + k (beta+ [beta]... ) terms vanish for a12 = 0
        st = probe(minus=SideState(u_xieta=1.0))
        assert st.u_xieta == pytest.approx(beta_m / beta_p, abs=1e-12)
        st = probe(jd=JumpData(v1=1.0))
        assert st.u_xieta == pytest.approx(1.0 / beta_p, abs=1e-12)
        st = probe(jd=JumpData(w1=1.0))
        assert st.u_xieta == pytest.approx(k * beta_p / beta_p, abs=1e-12)
        # normal-normal: u_xixi+ = (beta-/beta+) u_xixi- + ...
        st = probe(minus=SideState(u_xixi=1.0))
        assert st.u_xixi == pytest.approx(beta_m / beta_p, abs=1e-12)
        st = probe(jd=JumpData(v=1.0))
        assert st.u_xixi == pytest.approx(k * beta_p ** 2 / beta_p ** 3,
                                          abs=1e-12)
        st = probe(jd=JumpData(w2=1.0))
        assert st.u_xixi == pytest.approx(-beta_p ** 2 / beta_p ** 2,
                                          abs=1e-12)

    def test_affine_in_curvature(self):
        # every recovered component is affine in chi'', so three states at
        # equally spaced curvatures are collinear
        rng = np.random.default_rng(5)
        for _ in range(20):
            _, lp, lm, minus, jd, sp, sm, fp, fm = draw_config(rng)
            ks = (-1.3, 0.2, 1.7)  # arithmetic progression
            states = []
            for k in ks:
                frame = LocalFrame(0.0, 0.0, theta=0.0, chi_second=k)
                states.append(plus_state_closed_form_constant(
                    minus, jd, frame, lp, lm, sp, sm, fp, fm).as_array())
            mid = 0.5 * (states[0] + states[2])
            assert np.max(np.abs(states[1] - mid)) < 1e-11

    def test_swap_sides_symmetry(self):
        # relabeling the sides flips the frame by pi and negates the
        # curvature; the relations must recover the old minus state
        rng = np.random.default_rng(17)
        for _ in range(30):
            theta = rng.uniform(0.0, 2 * np.pi)
            k = rng.uniform(-3.0, 3.0)
            tensors = []
            sigmas = rng.uniform(0.0, 2.0, 2)
            fs = rng.uniform(-1.0, 1.0, 2)
            for _ in range(2):
                lam = rng.uniform(0.2, 5.0, 2)
                ang = rng.uniform(0.0, np.pi)
                c, s = np.cos(ang), np.sin(ang)
                R = np.array([[c, -s], [s, c]])
                A = R @ np.diag(lam) @ R.T
                tensors.append(AnisoTensor(A[0, 0], A[0, 1], A[1, 1]))
            minus = SideState(*rng.uniform(-1.0, 1.0, 6))
            jd = JumpData(*rng.uniform(-1.0, 1.0, 5))

            frame = LocalFrame(0.0, 0.0, theta=theta, chi_second=k)
            lp = localize(tensors[0], frame)
            lm = localize(tensors[1], frame)
            plus = plus_state_closed_form_constant(
                minus, jd, frame, lp, lm, sigmas[0], sigmas[1], fs[0], fs[1])

            def mirror(st):
                return SideState(st.u, -st.u_xi, -st.u_eta,
                                 st.u_xixi, st.u_xieta, st.u_etaeta)

            frame2 = LocalFrame(0.0, 0.0, theta=theta + np.pi,
                                chi_second=-k)
            lp2 = localize(tensors[1], frame2)
            lm2 = localize(tensors[0], frame2)
            jd2 = JumpData(w=-jd.w, w1=jd.w1, w2=-jd.w2, v=jd.v, v1=-jd.v1)
            back = plus_state_closed_form_constant(
                mirror(plus), jd2, frame2, lp2, lm2,
                sigmas[1], sigmas[0], fs[1], fs[0])
            assert np.max(np.abs(back.as_array()
                                 - mirror(minus).as_array())) < 1e-10

    def test_strict_paper_diverges_only_in_second_derivatives(self):
        worst = fuzz_deviations(100, DEFAULT_SEED, strict_paper=True)
        by_name = dict(zip(STATE_COMPONENTS, worst))
        for name in ("u", "u_xi", "u_eta", "u_etaeta"):
            assert by_name[name] < 1e-10
        assert by_name["u_xixi"] > 1e-2
        assert by_name["u_xieta"] > 1e-2


class TestClosedFormVariable:
    def test_degenerates_to_constant_path(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            frame, lp, lm, minus, jd, sp, sm, fp, fm = draw_config(rng)
            const = plus_state_closed_form_constant(
                minus, jd, frame, lp, lm, sp, sm, fp, fm)
            var = plus_state_closed_form_variable(
                minus, jd, frame, lp, lm, sp, sm, fp, fm)
            assert np.max(np.abs(const.as_array() - var.as_array())) < 1e-12

    def test_matches_oracle_with_nonzero_c(self):
        rng = np.random.default_rng(29)
        for _ in range(100):
            frame, lp, lm, minus, jd, sp, sm, fp, fm = draw_config(rng)
            # overwrite the constant-tensor c's with arbitrary values; the
            # primitive system and the closed form must stay consistent
            lp = LocalTensor(lp.a11, lp.a12, lp.a22,
                             *rng.uniform(-1.0, 1.0, 4), lp.a11_world)
            lm = LocalTensor(lm.a11, lm.a12, lm.a22,
                             *rng.uniform(-1.0, 1.0, 4), lm.a11_world)
            closed = plus_state_closed_form_variable(
                minus, jd, frame, lp, lm, sp, sm, fp, fm)
            oracle = plus_state_oracle(minus, jd, frame, lp, lm,
                                       sp, sm, fp, fm)
            dev = np.abs(closed.as_array() - oracle.as_array()) \
                / np.maximum(np.abs(oracle.as_array()), 1.0)
            assert np.max(dev) < 1e-11


class TestFluxJumpEval:
    def test_reproduces_prescribed_flux_jump(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            frame, lp, lm, minus, jd, sp, sm, fp, fm = draw_config(rng)
            plus = plus_state_oracle(minus, jd, frame, lp, lm,
                                     sp, sm, fp, fm)
            assert flux_jump_eval(plus, minus, lp, lm) == pytest.approx(
                jd.v, abs=1e-11)

    def test_tilted_conormal_matches_matrix_form(self):
        lp = LocalTensor(2.0, 0.6, 1.4)
        lm = LocalTensor(1.1, -0.3, 0.9)
        plus = SideState(u_xi=0.7, u_eta=-0.4)
        minus = SideState(u_xi=-0.2, u_eta=1.3)
        cp = 0.35
        m = np.array([1.0, -cp]) / np.hypot(1.0, cp)
        Ap = np.array([[lp.a11, lp.a12], [lp.a12, lp.a22]])
        Am = np.array([[lm.a11, lm.a12], [lm.a12, lm.a22]])
        expected = m @ (Ap @ [plus.u_xi, plus.u_eta]
                        - Am @ [minus.u_xi, minus.u_eta])
        assert flux_jump_eval(plus, minus, lp, lm, chi_prime=cp) \
            == pytest.approx(expected, abs=1e-13)


def test_typo_ledger_shape():
    ids = [entry["id"] for entry in TYPO_LEDGER]
    assert len(ids) == len(set(ids)) == 7
    for entry in TYPO_LEDGER:
        assert entry["component"] in STATE_COMPONENTS
        assert entry["printed"] and entry["reconciled"]
