"""One test per acceptance criterion, each at its stated tolerance.

Every test prints a single ``criterion N: PASS|FAIL`` line; the lines are
repeated together in the terminal summary.
"""

import math

import numpy as np
import pytest

from emgr import constants as const
from emgr.fields import VacuumModel, cumulative_charge, cumulative_charge_closed, magnetic_moment_g, total_charge
from emgr.metrics import ChargeProfile, Family, MetricSpec, ParticleParams, build_metric, geometrize, horizon_scan, lapse
from emgr.quadrature import divergence_probe, integrate_radial, kn_self_energy_1d, self_energy
from emgr.stress import closed_T00_kn, closed_T_static, ricci_scalar_closed, stress_from_metric, trace_ricci_consistency
from emgr.tensor import CoordPoint, analyze, jacobian_sqrt, metric_eval

pytestmark = pytest.mark.acceptance

LOG_GRID = np.geomspace(1e-2, 1e2, 81)


def test_criterion_01_static_self_energy(criterion):
    vals = [self_energy(MetricSpec.scaled("static", "regularized", b), 1e-12) for b in (0.01, 0.1, 1.0)]
    w = np.array([v.value for v in vals])
    err, spread = float(np.max(np.abs(w - 1.0))), float(np.ptp(w))
    ok = all(v.converged for v in vals) and err <= 1e-10 and spread <= 1e-10
    criterion(1, ok, f"max |W - 1| = {err:.2e}, beta spread = {spread:.2e} (tol 1e-10)")


def test_criterion_02_kn_self_energy(criterion):
    err2d = rel1d = 0.0
    for a in (0.1, 1.0, 10.0):
        spec = MetricSpec.scaled("kn", "regularized", 1.0, a)
        two = self_energy(spec, 1e-10)
        one = kn_self_energy_1d(spec, 1e-12)
        err2d = max(err2d, abs(two.value - 1.0))
        rel1d = max(rel1d, abs(two.value - one.value) / one.value)
    ok = err2d <= 1e-6 and rel1d <= 1e-8
    criterion(2, ok, f"max |W_2D - 1| = {err2d:.2e} (tol 1e-6), 1-D vs 2-D = {rel1d:.2e} (tol 1e-8)")


def test_criterion_03_oracle_agreement(criterion):
    worst_static = 0.0
    for profile in ChargeProfile:
        spec = MetricSpec.scaled("static", profile, 1.0)
        t = stress_from_metric(build_metric(spec), CoordPoint(0.0, LOG_GRID, 0.5 * math.pi)).components
        c = closed_T_static(spec, LOG_GRID).components
        for i in range(4):
            worst_static = max(worst_static, float(np.max(np.abs(t[i, i] - c[i, i]) / np.abs(c[0, 0]))))
    r = np.geomspace(1e-1, 1e2, 31)
    th = np.linspace(0.1, math.pi - 0.1, 25)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    worst_kn = 0.0
    for a in (0.1, 1.0, 10.0):
        spec = MetricSpec.scaled("kn", "regularized", 1.0, a)
        t00 = stress_from_metric(build_metric(spec), CoordPoint(0.0, rr, tt)).components[0, 0]
        ref = closed_T00_kn(spec, rr, tt)
        worst_kn = max(worst_kn, float(np.max(np.abs(t00 - ref) / np.abs(ref))))
    ok = worst_static <= 1e-9 and worst_kn <= 1e-9
    criterion(3, ok, f"static max rel = {worst_static:.2e}, Kerr-Newman T00 max rel = {worst_kn:.2e} (tol 1e-9)")


def test_criterion_04_ricci_scalar(criterion):
    spec = MetricSpec.scaled("static", "regularized", 1.0)
    geo = analyze(build_metric(spec), CoordPoint(0.0, LOG_GRID, 0.5 * math.pi))
    closed = ricci_scalar_closed(spec, LOG_GRID)
    rel = float(np.max(np.abs(geo.ricci_scalar - closed) / np.abs(closed)))
    trace = max(float(np.max(trace_ricci_consistency(MetricSpec.scaled("static", "regularized", b), LOG_GRID).residual))
                for b in (0.01, 1.0))
    r_cl = np.geomspace(1e-1, 1e2, 31)
    flat = max(float(np.max(np.abs(analyze(build_metric(MetricSpec.scaled("static", "classic", b)),
                                            CoordPoint(0.0, r_cl, 0.5 * math.pi)).ricci_scalar)))
               for b in (0.01, 1.0))
    ok = rel <= 1e-9 and trace <= 1e-10 and flat <= 1e-10
    criterion(4, ok, f"R rel = {rel:.2e} (1e-9), trace residual = {trace:.2e} (1e-10), classic |R| = {flat:.2e} (1e-10)")


def test_criterion_05_jacobian(criterion):
    rng = np.random.default_rng(5)
    worst = 0.0
    a = 1.0
    for profile in ChargeProfile:
        spec = MetricSpec.scaled("kn", profile, 1.0, a)
        r = 10 ** rng.uniform(-1, 2, 100)
        th = rng.uniform(0.01, math.pi - 0.01, 100)
        jac = jacobian_sqrt(build_metric(spec), CoordPoint(0.0, r, th))
        ref = (r * r + a * a * np.cos(th) ** 2) * np.sin(th)
        worst = max(worst, float(np.max(np.abs(jac - ref) / ref)))
    criterion(5, worst <= 1e-12, f"max rel |sqrt(-g) - rho^2 sin| = {worst:.2e} at 200 points (tol 1e-12)")


def test_criterion_06_divergence(criterion):
    st = divergence_probe(MetricSpec.scaled("static", "classic", 1.0), np.geomspace(1e-6, 1e-3, 7))
    kn = divergence_probe(MetricSpec.scaled("kn", "classic", 1.0, 1.0), np.geomspace(1e-2, 1e-1, 5))
    ok = abs(st.exponent + 1) <= 0.01 and abs(st.coefficient - 0.5) <= 0.005 and kn.exponent < -0.5
    criterion(6, ok, f"static p = {st.exponent:.6f}, C = {st.coefficient:.6f} (e^2/2 = 0.5); "
                     f"Kerr-Newman p = {kn.exponent:.4f} (< -0.5)")


def test_criterion_07_total_charge(criterion):
    model = VacuumModel()
    tot = total_charge(model)
    r = np.geomspace(1e-2, 1e2, 41)
    q = np.array([cumulative_charge(model, x).value for x in r])
    pointwise = float(np.max(np.abs(q - cumulative_charge_closed(model, r))))
    ok = abs(tot.value - 1.0) <= 1e-10 and pointwise <= 1e-10
    criterion(7, ok, f"|Q_total - e| = {abs(tot.value - 1):.2e}, max |q(r) - e exp(-r0/2r)| = {pointwise:.2e} (tol 1e-10)")


def test_criterion_08_planck_length(criterion):
    geo = geometrize(ParticleParams.electron())
    r = 1.6e-33
    f_reg = lapse(geo.spec(Family.STATIC, ChargeProfile.REGULARIZED), r)
    f_cl = lapse(geo.spec(Family.STATIC, ChargeProfile.CLASSIC), r)
    dev = float(abs(f_reg - f_cl) / abs(f_cl))
    criterion(8, dev < 0.01, f"|f_reg - f_classic| / |f_classic| = {dev:.4e} at 1.6e-33 cm (< 0.01)")


def test_criterion_09_horizons(criterion):
    beta_e = geometrize(ParticleParams.electron()).beta
    betas = [beta_e, 1e-3, 0.1, 0.5, 0.7, 2.0 / math.e * (1 - 1e-12)]
    counts = [len(horizon_scan(MetricSpec.scaled("static", "regularized", b), (1e-4, 1e4))) for b in betas]
    control = len(horizon_scan(MetricSpec.scaled("static", "regularized", 2.0), (1e-4, 1e4)))
    ok = max(counts) == 0 and control == 2
    criterion(9, ok, f"roots for beta < 2/e (electron beta = {beta_e:.2e}): {counts}; beta = 2: {control}")


def test_criterion_10_g_factor(criterion):
    m = magnetic_moment_g(ParticleParams.electron())
    ref = const.ELEMENTARY_CHARGE * const.HBAR / (2 * const.ELECTRON_MASS * const.C_LIGHT)
    rel = abs(m.mu - ref) / ref
    ok = m.g == 2.0 and rel <= 1e-12
    criterion(10, ok, f"g = {m.g!r}, mu = {m.mu:.10e} erg/G, rel err = {rel:.1e} (1e-12)")


def test_criterion_11_limits(criterion):
    rng = np.random.default_rng(11)
    r = 10 ** rng.uniform(-1, 2, 50)
    th = rng.uniform(0.05, math.pi - 0.05, 50)
    p = CoordPoint(0.0, r, th)
    worst = 0.0
    for profile in ChargeProfile:
        gk, _, _ = metric_eval(build_metric(MetricSpec.scaled("kn", profile, 1.0, 0.0)), p)
        gs, _, _ = metric_eval(build_metric(MetricSpec.scaled("static", profile, 1.0)), p)
        for i in range(4):
            for j in range(4):
                a = np.asarray(getattr(gk[i][j], "value", gk[i][j]))
                b = np.asarray(getattr(gs[i][j], "value", gs[i][j]))
                worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300) * (b != 0)
                                                 + np.abs(a) * (b == 0))))
    flat = max(float(np.max(np.abs(lapse(MetricSpec.scaled("static", "regularized", b), np.array([1e-6, 1e9])) - 1)))
               for b in (0.01, 1.0))
    ok = worst <= 1e-12 and flat < 1e-6
    criterion(11, ok, f"Kerr-Newman(a=0) vs static max rel = {worst:.2e} (1e-12); max |f - 1| at ends = {flat:.2e} (1e-6)")


def test_criterion_12_quadrature_honesty(criterion):
    cases = [
        (lambda x: np.exp(-x), 1.0),
        (lambda x: np.exp(-0.5 / x) / (2 * x * x), 1.0),
        (lambda x: np.exp(-x * x), 0.5 * math.sqrt(math.pi)),
    ]
    errs, conv = [], []
    for f, truth in cases:
        res = integrate_radial(f, 1e-13)
        errs.append(abs(res.value - truth))
        conv.append(res.converged)
    ok = all(conv) and max(errs) <= 1e-12
    criterion(12, ok, f"errors = {[f'{e:.1e}' for e in errs]}, converged = {conv} (tol 1e-12)")
