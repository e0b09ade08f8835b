import math

import numpy as np
import pytest
import sympy as sp

from emgr.errors import DomainError, SingularMetric
from emgr.metrics import ChargeProfile, MetricSpec, build_metric
from emgr.stress import closed_T_static
from emgr.tensor import (
    CoordPoint, analyze, christoffel, curvature, einstein_mixed, flat_metric, jacobian_sqrt,
    metric_covariant_derivative, metric_eval,
)

t_, r_, th_, ph_ = sp.symbols("t r theta phi", positive=True)
COORDS = (t_, r_, th_, ph_)


def _sym_christoffel(g):
    ginv = g.inv()
    return [[[sp.simplify(sum(ginv[l, s] * (sp.diff(g[s, m], COORDS[n]) + sp.diff(g[s, n], COORDS[m])
                                           - sp.diff(g[m, n], COORDS[s])) for s in range(4)) / 2)
              for n in range(4)] for m in range(4)] for l in range(4)]


def _static_sym(f):
    return sp.diag(-f, 1 / f, r_**2, r_**2 * sp.sin(th_) ** 2)


def _values(comps, shape=()):
    return np.array([[np.broadcast_to(np.asarray(getattr(c, "value", c), dtype=float), shape)
                      for c in row] for row in comps])


def _catalog():
    return [
        MetricSpec.scaled("static", "classic", 1.0),
        MetricSpec.scaled("static", "regularized", 1.0),
        MetricSpec.scaled("kn", "classic", 1.0, 1.0),
        MetricSpec.scaled("kn", "regularized", 1.0, 0.7),
    ]


def _random_points(rng, n=100, rlo=0.3, rhi=30.0):
    return CoordPoint(rng.uniform(-5, 5, n), 10 ** rng.uniform(math.log10(rlo), math.log10(rhi), n),
                      rng.uniform(0.1, math.pi - 0.1, n), rng.uniform(0, 2 * math.pi, n))


# metric_eval -------------------------------------------------------------------


def test_flat_metric_components():
    p = CoordPoint(0.0, 2.0, 0.6)
    comps, ginv, det = metric_eval(flat_metric(), p)
    g = _values(comps)
    np.testing.assert_allclose(g, np.diag([-1.0, 1.0, 4.0, 4.0 * math.sin(0.6) ** 2]), rtol=1e-15)
    assert det < 0


def test_inverse_times_metric_is_identity(rng):
    for spec in _catalog():
        p = _random_points(rng, 20)
        comps, ginv, _ = metric_eval(build_metric(spec), p)
        g = _values(comps, p.shape)
        prod = np.einsum("ab...,bc...->ac...", ginv, g)
        np.testing.assert_allclose(prod, np.broadcast_to(np.eye(4)[..., None], prod.shape), atol=1e-13)


def test_regularized_g00_at_classical_radius():
    comps, _, _ = metric_eval(build_metric(MetricSpec.scaled("static", "regularized", 1.0)), CoordPoint(0, 1.0, 1.0))
    assert comps[0][0].value == pytest.approx(-(1.0 - math.exp(-0.5)), rel=1e-15)


def test_kn_zero_spin_has_no_cross_term():
    comps, _, _ = metric_eval(build_metric(MetricSpec.scaled("kn", "regularized", 1.0, 0.0)), CoordPoint(0, 1.5, 1.0))
    assert float(comps[0][3].value) == 0.0


@pytest.mark.parametrize("r,theta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, math.pi)])
def test_domain_errors(r, theta):
    with pytest.raises(DomainError):
        CoordPoint(0.0, r, theta)


def test_singular_metric_at_horizon():
    spec = MetricSpec.scaled("static", "classic", 2.0)  # extremal: f(r0) = 0
    with pytest.raises(SingularMetric), np.errstate(divide="ignore", invalid="ignore"):
        metric_eval(build_metric(spec), CoordPoint(0.0, 1.0, 1.0))


def test_kn_components_match_line_element_expansion(rng):
    a = sp.Rational(7, 10)
    m, q2 = sp.Rational(1, 2), sp.Rational(1, 2)
    f = 1 - 2 * m / r_ * sp.exp(-q2 / (2 * m * r_))
    rho2 = r_**2 + a**2 * sp.cos(th_) ** 2
    delta = a**2 + r_**2 * f
    dt, dr, dth, dph = sp.symbols("dt dr dth dph")
    ds2 = (-(delta / rho2) * (dt - a * sp.sin(th_) ** 2 * dph) ** 2
           + sp.sin(th_) ** 2 / rho2 * ((r_**2 + a**2) * dph - a * dt) ** 2
           + rho2 / delta * dr**2 + rho2 * dth**2)
    ds2 = sp.expand(ds2)
    d = (dt, dr, dth, dph)
    g_sym = [[sp.diff(ds2, d[i], d[j]) / 2 for j in range(4)] for i in range(4)]
    g_fn = sp.lambdify((r_, th_), g_sym)
    spec = MetricSpec.scaled("kn", "regularized", 1.0, 0.7)
    r = 10 ** rng.uniform(-0.5, 1.5, 25)
    th = rng.uniform(0.1, math.pi - 0.1, 25)
    comps, _, _ = metric_eval(build_metric(spec), CoordPoint(0.0, r, th))
    got = _values(comps, r.shape)
    for k in range(r.size):
        ref = np.array(g_fn(r[k], th[k]), dtype=float)
        scale = np.maximum(np.abs(ref), 1e-300)
        mask = np.abs(ref) > 0
        assert np.max(np.abs(got[..., k] - ref)[mask] / scale[mask]) < 1e-12
        assert np.all(np.abs(got[..., k][~mask]) < 1e-15)


# christoffel --------------------------------------------------------------------


def test_flat_christoffel():
    r, th = 1.7, 0.8
    gam = christoffel(flat_metric(), CoordPoint(0.0, r, th)).components
    ref = np.zeros((4, 4, 4))
    s, c = math.sin(th), math.cos(th)
    ref[1, 2, 2] = -r
    ref[1, 3, 3] = -r * s * s
    ref[2, 1, 2] = ref[2, 2, 1] = 1.0 / r
    ref[3, 1, 3] = ref[3, 3, 1] = 1.0 / r
    ref[2, 3, 3] = -s * c
    ref[3, 2, 3] = ref[3, 3, 2] = c / s
    np.testing.assert_allclose(gam, ref, atol=1e-15)


def test_schwarzschild_christoffel():
    m = 1.0
    spec = MetricSpec("static", "classic", m, 0.0)
    r = np.array([2.5, 3.0, 10.0, 40.0])
    gam = christoffel(build_metric(spec), CoordPoint(0.0, r, 1.2)).components
    f = 1 - 2 * m / r
    np.testing.assert_allclose(gam[1, 0, 0], m / r**2 * f, rtol=1e-13)
    np.testing.assert_allclose(gam[0, 0, 1], (2 * m / r**2) / (2 * f), rtol=1e-13)


@pytest.mark.parametrize("profile", list(ChargeProfile))
def test_static_christoffel_against_symbolic(profile, rng):
    m, q2 = sp.Rational(1, 2), sp.Rational(1, 2)
    if profile is ChargeProfile.CLASSIC:
        f = 1 - 2 * m / r_ + q2 / r_**2
    else:
        f = 1 - 2 * m / r_ * sp.exp(-q2 / (2 * m * r_))
    gam_fn = sp.lambdify((r_, th_), _sym_christoffel(_static_sym(f)))
    spec = MetricSpec.scaled("static", profile, 1.0)
    r = 10 ** rng.uniform(-1, 2, 10)
    th = rng.uniform(0.2, 2.9, 10)
    gam = christoffel(build_metric(spec), CoordPoint(0.0, r, th)).components
    for k in range(r.size):
        ref = np.array(gam_fn(r[k], th[k]), dtype=float)
        np.testing.assert_allclose(gam[..., k], ref, rtol=1e-12, atol=1e-14 * np.max(np.abs(ref)))


def test_christoffel_lower_symmetry(rng):
    for spec in _catalog():
        gam = christoffel(build_metric(spec), _random_points(rng, 10)).components
        assert np.array_equal(gam, np.swapaxes(gam, 1, 2))


def test_metric_compatibility(rng):
    for spec in _catalog():
        p = _random_points(rng)
        nab = metric_covariant_derivative(build_metric(spec), p)
        assert np.max(np.abs(nab)) <= 1e-11


# curvature ------------------------------------------------------------------------


def test_flat_curvature_vanishes():
    riem, ric, big_r = curvature(flat_metric(), CoordPoint(0.0, np.array([0.5, 3.0]), 1.0))
    assert np.max(np.abs(riem.components)) < 1e-14
    assert np.max(np.abs(big_r)) < 1e-14


def test_riemann_symmetries(rng):
    for spec in _catalog():
        riem, _, _ = curvature(build_metric(spec), _random_points(rng, 30))
        rc = riem.components
        assert np.array_equal(rc, -np.swapaxes(rc, 2, 3))
        cyc = rc + np.einsum("abcd...->adbc...", rc) + np.einsum("abcd...->acdb...", rc)
        assert np.max(np.abs(cyc)) <= 1e-11 * np.max(np.abs(rc))


@pytest.mark.parametrize("beta", [0.01, 0.5, 1.0, 3.0])
def test_regularized_ricci_scalar_at_classical_radius(beta):
    _, _, big_r = curvature(build_metric(MetricSpec.scaled("static", "regularized", beta)), CoordPoint(0.0, 1.0, 1.0))
    assert big_r == pytest.approx(beta / 4 * math.exp(-0.5), rel=1e-12)


def test_classic_ricci_flat():
    r = np.geomspace(0.1, 100, 20)
    _, _, big_r = curvature(build_metric(MetricSpec.scaled("static", "classic", 1.0)), CoordPoint(0.0, r, 1.0))
    assert np.max(np.abs(big_r)) <= 1e-10


def test_schwarzschild_is_vacuum():
    spec = MetricSpec("static", "classic", 1.0, 0.0)
    g = einstein_mixed(build_metric(spec), CoordPoint(0.0, np.array([2.5, 4.0, 20.0]), 0.9)).components
    assert np.max(np.abs(g)) <= 1e-10


def test_einstein_trace_is_minus_ricci_scalar(rng):
    for spec in _catalog():
        if spec.profile is ChargeProfile.CLASSIC:
            continue
        p = _random_points(rng, 40)
        geo = analyze(build_metric(spec), p)
        tr = np.einsum("naa->n", geo.einstein_mixed)
        np.testing.assert_allclose(tr, -geo.ricci_scalar, rtol=1e-12)


def test_einstein_matches_closed_stress():
    r = np.geomspace(0.05, 50, 15)
    for profile in ChargeProfile:
        spec = MetricSpec.scaled("static", profile, 1.0)
        g = einstein_mixed(build_metric(spec), CoordPoint(0.0, r, 1.0)).components
        np.testing.assert_allclose(g[0, 0], 8 * math.pi * closed_T_static(spec, r)[0, 0], rtol=1e-10)
    classic = MetricSpec.scaled("static", "classic", 1.0)
    g = einstein_mixed(build_metric(classic), CoordPoint(0.0, r, 1.0)).components
    np.testing.assert_allclose(g[0, 0], -classic.charge_sq / r**4, rtol=1e-10)


# jacobian ---------------------------------------------------------------------------


@pytest.mark.parametrize("profile", list(ChargeProfile))
def test_kn_jacobian(profile, rng):
    a = 0.8
    spec = MetricSpec.scaled("kn", profile, 1.0, a)
    p = _random_points(rng)
    ref = (p.r**2 + a * a * np.cos(p.theta) ** 2) * np.sin(p.theta)
    np.testing.assert_allclose(jacobian_sqrt(build_metric(spec), p), ref, rtol=1e-12)


def test_static_and_flat_jacobian(rng):
    p = _random_points(rng, 20)
    ref = p.r**2 * np.sin(p.theta)
    np.testing.assert_allclose(jacobian_sqrt(flat_metric(), p), ref, rtol=1e-13)
    spec = MetricSpec.scaled("static", "regularized", 1.0)
    np.testing.assert_allclose(jacobian_sqrt(build_metric(spec), p), ref, rtol=1e-13)
