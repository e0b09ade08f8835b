"""Metric families, charge profiles, unit conversion and horizon scanning.

Two lapse profiles are supported::

    classic      f(r) = 1 - 2M/r + Q^2/r^2
    regularized  f(r) = 1 - (2M/r) exp(-Q^2 / (2 M r))

Both enter either the static spherical line element or the Kerr-Newman form in
Boyer-Lindquist coordinates with ``Delta = a^2 + r^2 f(r)``.  Lengths are in
whatever unit the caller picks; :meth:`MetricSpec.scaled` uses the natural
scale ``r0 = Q^2/M`` so that ``beta = 2M/r0`` and ``alpha = a/r0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .errors import DomainError
from .jet import Jet2
from .tensor import MetricField


class Family(str, enum.Enum):
    STATIC = "static"
    KERR_NEWMAN = "kn"


class ChargeProfile(str, enum.Enum):
    CLASSIC = "classic"
    REGULARIZED = "regularized"


@dataclass(frozen=True)
class MetricSpec:
    """Geometrized mass, charge and spin (all lengths) plus family and profile."""

    family: Family
    profile: ChargeProfile
    mass: float
    charge: float
    spin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "profile", ChargeProfile(self.profile))
        if not self.mass > 0:
            raise DomainError("mass must be positive")
        if self.charge < 0 or self.spin < 0:
            raise DomainError("charge and spin parameter must be non-negative")
        if self.family is Family.STATIC and self.spin != 0:
            raise DomainError("static family requires zero spin")

    @classmethod
    def scaled(cls, family, profile, beta: float, alpha: float = 0.0) -> "MetricSpec":
        """Spec in units of the classical radius: r0 = 1, M = beta/2, Q^2 = beta/2, a = alpha."""
        if not beta > 0:
            raise DomainError("beta must be positive")
        if alpha < 0:
            raise DomainError("alpha must be non-negative")
        return cls(family, profile, 0.5 * beta, math.sqrt(0.5 * beta), alpha)

    @property
    def charge_sq(self) -> float:
        return self.charge**2

    @property
    def r0(self) -> float:
        return self.charge_sq / self.mass

    @property
    def beta(self) -> float:
        return 2.0 * self.mass / self.r0 if self.charge else math.inf

    @property
    def alpha(self) -> float:
        return self.spin / self.r0 if self.charge else math.inf


def _radial_jet(r) -> Jet2:
    return r if isinstance(r, Jet2) else Jet2.variable(r, 1)


def deviation(spec: MetricSpec, r) -> Jet2:
    """The jet of ``f(r) - 1``, computed without forming ``f`` first."""
    rj = _radial_jet(r)
    m, q2 = spec.mass, spec.charge_sq
    if spec.profile is ChargeProfile.CLASSIC:
        inv = rj.reciprocal()
        return inv * (-2.0 * m) + inv * inv * q2
    # regularized: f - 1 = -2M * exp(-k/r) / r with k = Q^2 / 2M
    k = q2 / (2.0 * m)
    x = rj.value
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        e = np.exp(-k / x)
        h0 = e / x
        h1 = np.where(e > 0, e * (k / x**3 - 1.0 / x**2), 0.0)
        h2 = np.where(e > 0, e * (k * k / x**5 - 4.0 * k / x**4 + 2.0 / x**3), 0.0)
    return rj.apply(-2.0 * m * h0, -2.0 * m * h1, -2.0 * m * h2)


def f_profile(profile, r, beta: float) -> Jet2:
    """Lapse function in units r0 = 1 as a jet in r (derivatives along index 1)."""
    rv = np.asarray(r.value if isinstance(r, Jet2) else r, dtype=float)
    if not np.all(rv > 0):
        raise DomainError("f_profile needs r > 0")
    spec = MetricSpec.scaled(Family.STATIC, profile, beta)
    return deviation(spec, r) + 1.0


def lapse(spec: MetricSpec, r):
    """Plain values of f(r) (no derivatives)."""
    r = np.asarray(r, dtype=float)
    m, q2 = spec.mass, spec.charge_sq
    if spec.profile is ChargeProfile.CLASSIC:
        return 1.0 - 2.0 * m / r + q2 / r**2
    with np.errstate(over="ignore"):
        return 1.0 - 2.0 * m / r * np.exp(-q2 / (2.0 * m * r))


# metric construction -------------------------------------------------------


def _static_parts(spec):
    def background(x):
        _, r, th, _ = x
        s = th.sin()
        r2 = r * r
        return [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, r2, 0.0],
            [0.0, 0.0, 0.0, r2 * s * s],
        ]

    def dev(x):
        fm1 = deviation(spec, x[1])
        return [
            [-fm1, 0.0, 0.0, 0.0],
            [0.0, -fm1 / (fm1 + 1.0), 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]

    def full(x):
        _, r, th, _ = x
        f = deviation(spec, r) + 1.0
        s = th.sin()
        r2 = r * r
        return [
            [-f, 0.0, 0.0, 0.0],
            [0.0, f.reciprocal(), 0.0, 0.0],
            [0.0, 0.0, r2, 0.0],
            [0.0, 0.0, 0.0, r2 * s * s],
        ]

    return background, dev, full


def _kn_parts(spec):
    a = spec.spin
    a2 = a * a

    def background(x):
        _, r, th, _ = x
        c, s = th.cos(), th.sin()
        r2 = r * r
        rho2 = r2 + a2 * c * c
        return [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, rho2 / (r2 + a2), 0.0, 0.0],
            [0.0, 0.0, rho2, 0.0],
            [0.0, 0.0, 0.0, (r2 + a2) * s * s],
        ]

    def dev(x):
        _, r, th, _ = x
        c, s = th.cos(), th.sin()
        r2 = r * r
        rho2 = r2 + a2 * c * c
        fm1 = deviation(spec, r)
        w = r2 * fm1 / rho2  # r^2 (f - 1) / rho^2
        s2 = s * s
        h03 = w * s2 * a
        h11 = -(rho2 * r2 * fm1) / ((r2 + a2 + r2 * fm1) * (r2 + a2))
        return [
            [-w, 0.0, 0.0, h03],
            [0.0, h11, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [h03, 0.0, 0.0, -(w * s2 * s2) * a2],
        ]

    def full(x):
        _, r, th, _ = x
        c, s = th.cos(), th.sin()
        r2 = r * r
        rho2 = r2 + a2 * c * c
        fm1 = deviation(spec, r)
        w = r2 * fm1 / rho2
        s2 = s * s
        g03 = w * s2 * a
        delta = (r2 + a2) + r2 * fm1
        return [
            [-1.0 - w, 0.0, 0.0, g03],
            [0.0, rho2 / delta, 0.0, 0.0],
            [0.0, 0.0, rho2, 0.0],
            [g03, 0.0, 0.0, (r2 + a2) * s2 - (w * s2 * s2) * a2],
        ]

    return background, dev, full


def build_metric(spec: MetricSpec) -> MetricField:
    """MetricField for ``spec``: flat background in the family's coordinates plus deviation."""
    if spec.family is Family.STATIC:
        bg, dev, full = _static_parts(spec)
    else:
        bg, dev, full = _kn_parts(spec)
    name = f"{spec.family.value}-{spec.profile.value}"
    return MetricField(name, dev, background=bg, full=full, family=spec.family.value, params={"spec": spec})


# physical parameters -------------------------------------------------------


@dataclass(frozen=True)
class ParticleParams:
    """Mass (g), charge (esu) and spin angular momentum (erg s)."""

    mass: float
    charge: float
    spin: float = 0.0

    @classmethod
    def electron(cls, spin_factor: float = 0.5) -> "ParticleParams":
        return cls(const.ELECTRON_MASS, const.ELEMENTARY_CHARGE, spin_factor * const.HBAR)


@dataclass(frozen=True)
class Geometrized:
    M: float  # cm
    Q: float  # cm
    S: float  # cm^2
    a: float  # cm
    r0: float  # cm
    beta: float
    alpha: float

    def spec(self, family=Family.STATIC, profile=ChargeProfile.REGULARIZED) -> MetricSpec:
        """Spec in centimetres."""
        spin = self.a if Family(family) is Family.KERR_NEWMAN else 0.0
        return MetricSpec(family, profile, self.M, self.Q, spin)

    def scaled_spec(self, family=Family.STATIC, profile=ChargeProfile.REGULARIZED) -> MetricSpec:
        alpha = self.alpha if Family(family) is Family.KERR_NEWMAN else 0.0
        return MetricSpec.scaled(family, profile, self.beta, alpha)


def geometrize(p: ParticleParams) -> Geometrized:
    if not (p.mass > 0 and p.charge > 0 and p.spin >= 0):
        raise DomainError("particle parameters must be positive")
    c, g = const.C_LIGHT, const.G_NEWTON
    m_len = g * p.mass / c**2
    q_len = math.sqrt(g) * p.charge / c**2
    s_len = g * p.spin / c**3
    a = p.spin / (p.mass * c)
    r0 = p.charge**2 / (p.mass * c**2)
    return Geometrized(m_len, q_len, s_len, a, r0, 2.0 * m_len / r0, a / r0)


def degeometrize(geo: Geometrized) -> ParticleParams:
    c, g = const.C_LIGHT, const.G_NEWTON
    return ParticleParams(geo.M * c**2 / g, geo.Q * c**2 / math.sqrt(g), geo.S * c**3 / g)


# horizons ------------------------------------------------------------------


def horizon_function(spec: MetricSpec, r):
    """f(r) for the static family, Delta(r) = a^2 + r^2 f(r) for Kerr-Newman."""
    r = np.asarray(r, dtype=float)
    f = lapse(spec, r)
    if spec.family is Family.STATIC:
        return f
    return spec.spin**2 + r * r * f


def horizon_scan(spec: MetricSpec, r_range, points_per_decade: int = 1000, rtol: float = 1e-14):
    """All sign-change roots of the horizon function in ``r_range``, ascending.

    Roots are bracketed on a log-spaced grid and refined by bisection.  Double
    roots without a sign change are not reported.
    """
    lo, hi = map(float, r_range)
    if not 0 < lo < hi:
        raise DomainError("r_range must be a positive increasing interval")
    n = max(2, int(math.ceil(math.log10(hi / lo) * points_per_decade)) + 1)
    grid = np.geomspace(lo, hi, n)
    vals = horizon_function(spec, grid)
    roots = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) <= 0):
        a, b = grid[i], grid[i + 1]
        fa = vals[i]
        if fa == 0.0:
            if not roots or roots[-1] != a:
                roots.append(float(a))
            continue
        if vals[i + 1] == 0.0:
            continue
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = float(horizon_function(spec, mid))
            if fm == 0.0:
                a = b = mid
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
            if b - a <= rtol * b:
                break
        roots.append(float(0.5 * (a + b)))
    return roots

