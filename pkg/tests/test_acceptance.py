"""Exit criteria of the build, one test per criterion.

Each test prints a single PASS/FAIL line (visible with ``pytest -s`` or in
the captured-output section of the report).
"""

import math
from contextlib import contextmanager
from functools import lru_cache

import numpy as np
import pytest

from hybrident import (
    ParameterSet,
    build_diffusion,
    build_drift,
    check_stability,
    duan_quantity,
    figure_preset,
    input_tmsv_covariance,
    integrate_covariance_ode,
    log_negativity,
    run_point,
    run_sweep,
    solve_lyapunov,
)
from hybrident.entanglement import PAIRS
from hybrident.steady_state import lyapunov_residual, symplectic_eigenvalues
from hybrident.sweep import G_ON, PRESET_NAMES

from conftest import perturbed_parameters


@contextmanager
def criterion(number, title):
    try:
        yield
    except BaseException as exc:
        reason = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"\n[FAIL] criterion {number}: {title} -- {reason}")
        raise
    print(f"\n[PASS] criterion {number}: {title}")


@lru_cache(maxsize=None)
def preset_rows(name, g_on=G_ON):
    return tuple(run_sweep(figure_preset(name, g_on=g_on)))


def curve(rows, axis, value, pair="cavity-spin"):
    """{r: E_N} along one axis value."""
    return {row.parameters.r: row.log_neg(pair) for row in rows if getattr(row.parameters, axis) == value}


def test_criterion_01_tmsv_oracle():
    with criterion(1, "input TMSV: E_N = 2r and Duan ratio = exp(-2r) within 1e-9"):
        for r in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
            v = input_tmsv_covariance(r)
            en = log_negativity(v).log_neg
            ratio = duan_quantity(v).ratio
            assert abs(en - 2 * r) <= 1e-9, f"r={r}: E_N={en!r}"
            assert abs(ratio - math.exp(-2 * r)) <= 1e-9, f"r={r}: ratio={ratio!r}"


def test_criterion_02_lyapunov_correctness():
    with criterion(2, "Lyapunov residual <= 1e-10 max(1,|D|) and RK4 agreement <= 1e-6 (50 random + default)"):
        rng = np.random.default_rng(20261018)
        params = [ParameterSet()] + perturbed_parameters(rng, 50)
        params = [p for p in params if check_stability(build_drift(p)).stable]
        assert len(params) >= 40, f"only {len(params)} stable draws"
        a = np.stack([build_drift(p) for p in params])
        d = np.stack([build_diffusion(p) for p in params])
        v_ref = [solve_lyapunov(ai, di) for ai, di in zip(a, d)]
        for ai, di, vi in zip(a, d, v_ref):
            assert lyapunov_residual(ai, vi, di) <= 1e-10 * max(1.0, np.linalg.norm(di))
        v_ode = integrate_covariance_ode(a, d, np.broadcast_to(0.5 * np.eye(6), a.shape), dt=1e-3, settle_tol=1e-10)
        worst = max(np.linalg.norm(vo - vr) / np.linalg.norm(vr) for vo, vr in zip(v_ode, v_ref))
        assert worst <= 1e-6, f"worst relative Frobenius gap {worst:.3e}"


def test_criterion_03_decoupled_closed_forms():
    with criterion(3, "G = Gamma_S = 0: V_mm = 1.3 I, V_ss = 1.0 I, V_cc = cosh(2r)/2 I, cross blocks <= 1e-12"):
        for r in (0.0, 0.5, 1.0, 2.0, 3.0):
            p = ParameterSet(g_om=0.0, gamma_readout=0.0, r=r)
            v = solve_lyapunov(build_drift(p), build_diffusion(p))
            np.testing.assert_allclose(v[2:4, 2:4], 1.3 * np.eye(2), rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(v[4:6, 4:6], 1.0 * np.eye(2), rtol=1e-12, atol=1e-12)
            np.testing.assert_allclose(v[0:2, 0:2], math.cosh(2 * r) / 2 * np.eye(2), rtol=1e-12, atol=1e-12)
            for blk in (v[0:2, 2:4], v[0:2, 4:6], v[2:4, 4:6]):
                assert np.max(np.abs(blk)) <= 1e-12


def test_criterion_04_physicality():
    with criterion(4, "fig2 grid: min symplectic eigenvalue >= 1/2 - 1e-8"):
        for row in preset_rows("fig2"):
            p = row.parameters
            assert row.stable, f"unstable at {p}"
            v = solve_lyapunov(build_drift(p), build_diffusion(p))
            nu = symplectic_eigenvalues(v)[0]
            assert nu >= 0.5 - 1e-8, f"g_om={p.g_om}, r={p.r}: nu={nu}"


def test_criterion_05_saturation():
    with criterion(5, "G=0 cavity-spin E_N saturates over r in {2, 2.5, 3}; input E_N exactly linear"):
        rows = preset_rows("fig2")
        en = curve(rows, "g_om", 0.0)
        inp = {row.parameters.r: row.input_log_neg for row in rows if row.parameters.g_om == 0.0}
        d_in = (inp[2.5] - inp[2.0], inp[3.0] - inp[2.5])
        assert abs(d_in[0] - 1.0) <= 1e-9 and abs(d_in[1] - 1.0) <= 1e-9, f"input differences {d_in}"
        values = (en[2.0], en[2.5], en[3.0])
        assert values[0] > 0, f"no cavity-spin entanglement on the G=0 curve: E_N(2, 2.5, 3) = {values}"
        d1, d2 = values[1] - values[0], values[2] - values[1]
        assert d2 < d1, f"forward differences not strictly decreasing: {d1!r}, {d2!r}"
        if not d2 < 0.1 * d1:
            print(f"\n[WARN] criterion 5: increment decay weaker than 10x ({d1:.3e} -> {d2:.3e})")


def test_criterion_06_suppression():
    with criterion(6, "mechanics suppresses cavity-spin E_N and drives it to zero while G=0 stays positive"):
        off = curve(preset_rows("fig2"), "g_om", 0.0)
        tried = []
        for g in (G_ON, 2.0, 4.0, 8.0):
            rows = preset_rows("fig2", g_on=g)
            on = {row.parameters.r: row for row in rows if row.parameters.g_om == g}
            tried.append(g)
            if not all(row.stable for row in on.values()):
                continue
            for r, row in on.items():
                assert row.log_neg("cavity-spin") <= off[r] + 1e-12, f"G={g}, r={r}: suppression violated"
            crossing = [r for r, row in on.items() if row.log_neg("cavity-spin") == 0 and off[r] > 0]
            if crossing:
                print(f"\n[INFO] criterion 6: zero crossing at G={g}, r*={min(crossing)}")
                return
        raise AssertionError(
            f"no r* <= 3 with E_N(G>0) = 0 < E_N(G=0) for G in {tried}; "
            f"max E_N on the G=0 curve is {max(off.values()):.3e}"
        )


def test_criterion_07_criterion_consistency():
    with criterion(7, "Duan ratio < 1 <=> E_N > 0 <=> Simon violated, all presets, all pairs"):
        checked = 0
        for name in PRESET_NAMES:
            for row in preset_rows(name):
                if not row.stable:
                    continue
                for pair in PAIRS:
                    rep = row.pairs[pair]
                    if abs(rep.duan.ratio - 1) <= 1e-6:
                        continue
                    below = rep.duan.ratio < 1
                    assert below == (rep.entanglement.log_neg > 0) == rep.entanglement.simon_violated, (
                        f"{name} {pair} at {row.parameters}: ratio={rep.duan.ratio}, "
                        f"E_N={rep.entanglement.log_neg}, simon={rep.entanglement.simon_violated}"
                    )
                    checked += 1
        assert checked > 0


def test_criterion_08_spin_mechanics_separable():
    with criterion(8, "fig4: mechanics-spin separable everywhere, ratio 1 at zero coupling, cavity-mechanics entangled"):
        for name, axis in (("fig4_I", "g_om"), ("fig4_II", "gamma_readout")):
            rows = preset_rows(name)
            assert any(row.stable for row in rows)
            for row in rows:
                if not row.stable:
                    continue
                p = row.parameters
                assert row.duan_ratio("mechanics-spin") >= 1 - 1e-9, f"{name} {axis}={getattr(p, axis)} r={p.r}"
                assert row.log_neg("mechanics-spin") == 0
                if getattr(p, axis) == 0:
                    assert abs(row.duan_ratio("mechanics-spin") - 1) <= 1e-6, (
                        f"{name} zero coupling r={p.r}: ratio {row.duan_ratio('mechanics-spin')}"
                    )
        assert any(row.stable and row.log_neg("cavity-mechanics") > 0 for row in preset_rows("fig4_I"))


def _peak_axis_value(name, axis):
    rows = preset_rows(name)
    ((_, values),) = figure_preset(name).axes
    peaks = []
    for value in values:
        en = [row.log_neg("cavity-spin") for row in rows if getattr(row.parameters, axis) == value and row.stable]
        peaks.append(max(en) if en else -math.inf)
    best = max(peaks)
    assert best > 0, f"{name}: max_r E_N(cavity-spin) is {best} at every {axis}; the argmax is undefined"
    winners = [v for v, pk in zip(values, peaks) if pk == best]
    assert len(winners) == 1, f"{name}: tie between {winners}"
    return values, winners[0]


def test_criterion_09_peak_location():
    with criterion(9, "cavity-spin E_N peaks at Delta = -omega_s (fig3_Ia) and gamma_s = kappa (fig3_IIb)"):
        values, best = _peak_axis_value("fig3_Ia", "delta")
        assert abs(values.index(best) - values.index(60.0)) <= 1, f"Delta peak at {best}"
        values, best = _peak_axis_value("fig3_IIb", "gamma_s")
        assert abs(values.index(best) - values.index(1.0)) <= 1, f"gamma_s peak at {best}"


def test_criterion_10_stability_regression():
    with criterion(10, "sign-flipped spin block unstable (max Re ~ 59.5); corrected block stable with max Re = -0.5"):
        p = ParameterSet()
        a = build_drift(p)
        stab = check_stability(a)
        assert stab.stable and abs(stab.max_real_part + p.gamma_s / 2) <= 1e-9, stab.max_real_part
        flipped = a.copy()
        flipped[4:, 4:] = [[0.0, p.omega_s], [p.omega_s, -p.gamma_s]]
        bad = check_stability(flipped)
        assert not bad.stable
        assert bad.max_real_part == pytest.approx((-1 + math.sqrt(1 + 4 * 3600)) / 2, rel=1e-9)
