import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from emgr import jet
from emgr.jet import Jet2

X = sp.symbols("x0:4")


def _expr_sym(x):
    return (x[0] ** 3 * x[1] + sp.exp(sp.Rational(3, 10) * x[2]) * sp.sin(x[1]) / (1 + x[3] ** 2)
            + sp.log(x[1]) * sp.sqrt(x[1]) - sp.cos(x[0] * x[2]) ** 2)


def _expr_jet(x):
    return (x[0] ** 3 * x[1] + (0.3 * x[2]).exp() * x[1].sin() / (1.0 + x[3] ** 2)
            + x[1].log() * x[1].sqrt() - (x[0] * x[2]).cos() ** 2)


_E = _expr_sym(X)
_F = sp.lambdify(X, _E)
_G = sp.lambdify(X, [sp.diff(_E, v) for v in X])
_H = sp.lambdify(X, [[sp.diff(_E, a, b) for b in X] for a in X])

coord = st.floats(0.2, 3.0)


@settings(max_examples=60, deadline=None)
@given(coord, coord, coord, coord)
def test_composite_matches_symbolic_derivatives(a, b, c, d):
    vals = (a, b, c, d)
    out = _expr_jet([Jet2.variable(v, i) for i, v in enumerate(vals)])
    assert out.value == pytest.approx(_F(*vals), rel=1e-12, abs=1e-12)
    np.testing.assert_allclose(out.grad, _G(*vals), rtol=1e-12, atol=1e-11)
    np.testing.assert_allclose(out.hessian, _H(*vals), rtol=1e-12, atol=1e-11)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 5.0), st.floats(-3.0, 3.0))
def test_quotient_and_power_rules(r, p):
    x = Jet2.variable(r, 1)
    q = (x * x + 1.0) / x
    assert q.grad[1] == pytest.approx(1.0 - 1.0 / r**2, rel=1e-13)
    assert q.hessian[1, 1] == pytest.approx(2.0 / r**3, rel=1e-13)
    w = x**p
    assert w.grad[1] == pytest.approx(p * r ** (p - 1), rel=1e-12, abs=1e-300)
    assert w.hessian[1, 1] == pytest.approx(p * (p - 1) * r ** (p - 2), rel=1e-12, abs=1e-12)


def test_hessian_is_exactly_symmetric():
    x = [Jet2.variable(v, i) for i, v in enumerate((0.4, 1.3, 0.7, 2.1))]
    h = _expr_jet(x).hessian
    assert np.array_equal(h, np.swapaxes(h, 0, 1))


def test_batched_values_match_scalar_evaluation():
    rs = np.array([0.5, 1.0, 2.5])
    batch = _expr_jet([Jet2.variable(np.full(3, 0.3), 0), Jet2.variable(rs, 1),
                       Jet2.variable(np.full(3, 1.1), 2), Jet2.variable(np.full(3, 0.2), 3)])
    for k, r in enumerate(rs):
        one = _expr_jet([Jet2.variable(v, i) for i, v in enumerate((0.3, r, 1.1, 0.2))])
        assert batch.value[k] == one.value
        assert np.array_equal(batch.hessian[..., k], one.hessian)


def test_lifted_functions_accept_plain_numbers():
    assert jet.exp(0.0) == 1.0
    assert jet.value_of(Jet2.constant(2.5)) == 2.5
    assert jet.sin(Jet2.variable(0.0, 2)).grad[2] == 1.0


def test_integer_powers_agree_with_repeated_products():
    x = Jet2.variable(1.7, 1)
    assert (x**2).hessian[1, 1] == 2.0
    cube, prod = x**3, x * x * x
    assert cube.grad[1] == pytest.approx(prod.grad[1], rel=1e-15)
    assert cube.hessian[1, 1] == pytest.approx(prod.hessian[1, 1], rel=1e-15)
