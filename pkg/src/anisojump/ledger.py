"""Typo-ledger measurement: quantify each as-printed reconciliation.

For every entry of ``jumps.TYPO_LEDGER`` this module evaluates, over a
seeded ensemble of random interface configurations, the magnitude of the
difference between the as-printed term and the reconciled term.  The
result is written to ``docs/typo_ledger.json`` together with the printed
and reconciled forms, so the adjudication is reproducible from the repo.
"""

from __future__ import annotations

import json

import numpy as np

from .geometry import LocalFrame
from .jumps import (JumpData, SideState, plus_state_closed_form_constant,
                    plus_state_oracle, TYPO_LEDGER)
from .tensors import AnisoTensor, localize

DEFAULT_SEED = 20260823


def draw_config(rng):
    """One random constant-coefficient interface configuration.

    SPD tensors with eigenvalues in [0.1, 10], uniform frame angle,
    graph curvature in [-5, 5], states and jumps in [-1, 1].
    """
    frame = LocalFrame(0.0, 0.0, theta=rng.uniform(0.0, 2.0 * np.pi),
                       chi_second=rng.uniform(-5.0, 5.0))
    locs = []
    for _ in range(2):
        lam = rng.uniform(0.1, 10.0, 2)
        ang = rng.uniform(0.0, np.pi)
        c, s = np.cos(ang), np.sin(ang)
        R = np.array([[c, -s], [s, c]])
        A = R @ np.diag(lam) @ R.T
        locs.append(localize(AnisoTensor(A[0, 0], A[0, 1], A[1, 1]), frame))
    minus = SideState(*rng.uniform(-1.0, 1.0, 6))
    jd = JumpData(*rng.uniform(-1.0, 1.0, 5))
    sig_p, sig_m = rng.uniform(0.0, 2.0, 2)
    f_p, f_m = rng.uniform(-1.0, 1.0, 2)
    return frame, locs[0], locs[1], minus, jd, sig_p, sig_m, f_p, f_m


def fuzz_deviations(draws: int, seed: int, strict_paper: bool = False):
    """Componentwise max relative deviation, closed form vs 6x6 solve."""
    rng = np.random.default_rng(seed)
    worst = np.zeros(6)
    for _ in range(draws):
        frame, lp, lm, minus, jd, sig_p, sig_m, f_p, f_m = draw_config(rng)
        closed = plus_state_closed_form_constant(
            minus, jd, frame, lp, lm, sig_p, sig_m, f_p, f_m,
            strict_paper=strict_paper)
        oracle = plus_state_oracle(minus, jd, frame, lp, lm,
                                   sig_p, sig_m, f_p, f_m)
        dev = np.abs(closed.as_array() - oracle.as_array()) \
            / np.maximum(np.abs(oracle.as_array()), 1e-12)
        worst = np.maximum(worst, dev)
    return worst


def _term_differences(frame, lp, lm, minus, jd, f_p, f_m):
    """|printed term - reconciled term| for each ledger entry, one config."""
    k = frame.chi_second
    a11p, a12p, a22p = lp.a11, lp.a12, lp.a22
    ja11, ja12, ja22 = a11p - lm.a11, a12p - lm.a12, a22p - lm.a22
    uym, uxym, uyym = minus.u_eta, minus.u_xieta, minus.u_etaeta
    w1, w2 = jd.w1, jd.w2

    s2_core = (2.0 * a11p * a12p * ja22 - 4.0 * a12p ** 2 * ja12
               + a11p * a22p * ja12) / a11p ** 3
    coef_a = (2.0 * a12p * ja12 - a11p * ja22) / a11p ** 2
    coef_b = 2.0 * (a12p * ja11 - a11p * ja12) / a11p ** 2
    w2_coef = 2.0 * a12p ** 2 - a11p * a22p
    return {
        "mixed-w1-denominator": abs(
            k * (a11p * a22p - 2.0 * a12p ** 2) * w1
            * (1.0 / lp.a11_world ** 2 - 1.0 / a11p ** 2)),
        "s2-extra-curvature-factor": abs(
            (k * k * s2_core + k * s2_core) * uym),
        "s3-w1-factor": abs(
            k * 2.0 * a11p * a12p * a22p / a11p ** 3 * w1),
        "s3-w2-factor": abs(
            (a11p * a12p - a11p * a22p) / a11p ** 2 * w2),
        "swapped-second-derivative-coefficients": abs(
            (coef_a - coef_b) * (uxym - uyym)),
        "source-jump-sign": abs(2.0 * (f_p - f_m) / a11p),
        "variable-w2-denominator": abs(
            w2_coef * w2 * (1.0 / a11p - 1.0 / a11p ** 2)),
    }


def measure_typo_deviations(draws: int = 200, seed: int = DEFAULT_SEED):
    """Max observed |printed - reconciled| per ledger entry over the ensemble."""
    rng = np.random.default_rng(seed)
    worst = {entry["id"]: 0.0 for entry in TYPO_LEDGER}
    for _ in range(draws):
        frame, lp, lm, minus, jd, _sp, _sm, f_p, f_m = draw_config(rng)
        diffs = _term_differences(frame, lp, lm, minus, jd, f_p, f_m)
        for key, val in diffs.items():
            worst[key] = max(worst[key], float(val))
    return worst


def build_ledger(draws: int = 200, seed: int = DEFAULT_SEED):
    deviations = measure_typo_deviations(draws, seed)
    entries = []
    for entry in TYPO_LEDGER:
        record = dict(entry)
        record["max_observed_deviation"] = deviations[entry["id"]]
        entries.append(record)
    return {"seed": seed, "draws": draws, "entries": entries}


def write_ledger_json(path, draws: int = 200, seed: int = DEFAULT_SEED):
    ledger = build_ledger(draws, seed)
    with open(path, "w") as fh:
        json.dump(ledger, fh, indent=2)
        fh.write("\n")
    return ledger
