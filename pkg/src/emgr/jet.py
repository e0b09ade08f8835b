"""Second-order jets in four variables.

A :class:`Jet2` carries a value together with its exact gradient and Hessian
with respect to the coordinates ``(t, r, theta, phi)``.  Arithmetic follows the
product and chain rules exactly, so curvature built from jets needs no finite
differencing.

Values may be scalars or numpy arrays (a batch of points).  The gradient is
stored with shape ``(4,) + value.shape`` and the Hessian as its packed upper
triangle with shape ``(10,) + value.shape``, which keeps it symmetric by
construction.
"""

from __future__ import annotations

import numpy as np

NDIM = 4
# packed upper-triangle ordering: (0,0) (0,1) (0,2) (0,3) (1,1) (1,2) ...
TRI_I, TRI_J = np.triu_indices(NDIM)
_FULL_INDEX = np.zeros((NDIM, NDIM), dtype=np.intp)
_FULL_INDEX[TRI_I, TRI_J] = np.arange(TRI_I.size)
_FULL_INDEX[TRI_J, TRI_I] = np.arange(TRI_I.size)


class Jet2:
    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = value
        self.grad = grad
        self.hess = hess

    @classmethod
    def variable(cls, value, index: int) -> "Jet2":
        """Coordinate ``x^index`` evaluated at ``value``."""
        value = np.asarray(value, dtype=float)
        grad = np.zeros((NDIM,) + value.shape)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((TRI_I.size,) + value.shape))

    @classmethod
    def constant(cls, value, shape=()) -> "Jet2":
        value = np.broadcast_to(np.asarray(value, dtype=float), shape).copy()
        return cls(value, np.zeros((NDIM,) + shape), np.zeros((TRI_I.size,) + shape))

    @property
    def hessian(self) -> np.ndarray:
        """Full symmetric Hessian, shape ``(4, 4) + value.shape``."""
        return self.hess[_FULL_INDEX]

    def apply(self, f0, f1, f2) -> "Jet2":
        """Compose with a scalar function given its value and two derivatives at ``self.value``."""
        g = self.grad
        return Jet2(f0, f1 * g, f1 * self.hess + f2 * g[TRI_I] * g[TRI_J])

    def __repr__(self):
        return f"Jet2(value={self.value!r})"

    # arithmetic -----------------------------------------------------------

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)
        return Jet2(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)
        return Jet2(self.value - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet2(other - self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            hess = (
                a.value * b.hess
                + b.value * a.hess
                + a.grad[TRI_I] * b.grad[TRI_J]
                + a.grad[TRI_J] * b.grad[TRI_I]
            )
            return Jet2(a.value * b.value, a.value * b.grad + b.value * a.grad, hess)
        return Jet2(self.value * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def reciprocal(self):
        v = self.value
        inv = 1.0 / v
        return self.apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, Jet2):
            raise TypeError("jet exponents are not supported")
        if n == 2:
            return self * self
        v = self.value
        return self.apply(v**n, n * v ** (n - 1), n * (n - 1) * v ** (n - 2))

    # elementary functions ---------------------------------------------------

    def exp(self):
        e = np.exp(self.value)
        return self.apply(e, e, e)

    def log(self):
        v = self.value
        return self.apply(np.log(v), 1.0 / v, -1.0 / (v * v))

    def sqrt(self):
        s = np.sqrt(self.value)
        return self.apply(s, 0.5 / s, -0.25 / (s * self.value))

    def sin(self):
        s, c = np.sin(self.value), np.cos(self.value)
        return self.apply(s, c, -s)

    def cos(self):
        s, c = np.sin(self.value), np.cos(self.value)
        return self.apply(c, -s, -c)


def _lift(name):
    def fn(x):
        if isinstance(x, Jet2):
            return getattr(x, name)()
        return getattr(np, name)(x)

    fn.__name__ = name
    return fn


exp = _lift("exp")
log = _lift("log")
sqrt = _lift("sqrt")
sin = _lift("sin")
cos = _lift("cos")


def value_of(x):
    return x.value if isinstance(x, Jet2) else x
