"""Flat-space vacuum-polarization model and Kerr-Newman far fields (Gaussian units).

The vacuum around a point charge ``e`` is given the dielectric function
``eps(r) = exp(r0 / 2r)``.  The displacement keeps its Coulomb form while the
electric field is screened, which makes the field energy finite and equal to
``e^2 / r0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import constants as const
from .errors import DivergencePath, DomainError
from .jet import Jet2
from .metrics import ParticleParams, geometrize
from .quadrature import QuadratureResult, integrate_radial
from .stress import FieldPair, minkowski_T00


@dataclass(frozen=True)
class VacuumModel:
    e: float = 1.0
    r0: float = 1.0

    def __post_init__(self):
        if not (self.e > 0 and self.r0 > 0):
            raise DomainError("charge and radius must be positive")

    @classmethod
    def electron(cls) -> "VacuumModel":
        e = const.ELEMENTARY_CHARGE
        return cls(e, e * e / (const.ELECTRON_MASS * const.C_LIGHT**2))


def _radius(r):
    r = np.asarray(r, dtype=float)
    if not np.all(r > 0):
        raise DomainError("r must be positive")
    return r


def dielectric_fields(model: VacuumModel, r):
    """Return ``(eps, E_r, D_r)``; ``eps`` may overflow to inf as r -> 0 while E_r -> 0."""
    r = _radius(r)
    with np.errstate(over="ignore"):
        eps = np.exp(model.r0 / (2.0 * r))
    d = model.e / r**2
    e_field = d * np.exp(-model.r0 / (2.0 * r))
    return eps, e_field, d


def field_pair(model: VacuumModel, r) -> FieldPair:
    _, e_field, d = dielectric_fields(model, r)
    return FieldPair(np.asarray(r, dtype=float), e_field, d)


def gauss_flux(model: VacuumModel, r):
    """Flux of D through a sphere of radius r (4 pi e for every r)."""
    _, _, d = dielectric_fields(model, r)
    return d * 4.0 * math.pi * np.asarray(r, dtype=float) ** 2


def charge_density(model: VacuumModel, r):
    """Net (free plus polarization) charge density, e r0 exp(-r0/2r) / (8 pi r^4)."""
    r = _radius(r)
    return model.e * model.r0 * np.exp(-model.r0 / (2.0 * r)) / (8.0 * math.pi * r**4)


def charge_density_from_field(model: VacuumModel, r):
    """The same density as the flat-space divergence (1/4 pi r^2) d(r^2 E_r)/dr, differentiated exactly."""
    r = _radius(r)
    rj = Jet2.variable(r, 1)
    e = model.e * (rj.reciprocal() * (-0.5 * model.r0)).exp()  # r^2 E_r
    return e.grad[1] / (4.0 * math.pi * r**2)


def cumulative_charge_closed(model: VacuumModel, r):
    """Charge inside radius r, e exp(-r0/2r)."""
    r = _radius(r)
    return model.e * np.exp(-model.r0 / (2.0 * r))


def cumulative_charge(model: VacuumModel, r, tol: float = 1e-13) -> QuadratureResult:
    """Charge inside radius r by quadrature of the density (r = inf gives the total)."""
    upper = float(r)
    if not upper > 0:
        raise DomainError("r must be positive")
    return integrate_radial(
        lambda x: charge_density(model, x) * 4.0 * math.pi * x * x,
        tol * model.e, upper=upper, mapping="exponential", scale=model.r0,
    )


def total_charge(model: VacuumModel, tol: float = 1e-13) -> QuadratureResult:
    return cumulative_charge(model, math.inf, tol)


def flat_self_energy(model: VacuumModel, tol: float = 1e-13, dielectric: bool = True) -> QuadratureResult:
    """W = (1/8 pi) integral E.D dV, in the model's energy units (e^2/r0 expected).

    Without the dielectric the integral diverges at the origin and
    :class:`DivergencePath` is raised.
    """
    if not dielectric:
        raise DivergencePath("unscreened point-charge self-energy diverges")
    scale = model.e**2 / model.r0
    res = integrate_radial(
        lambda x: _energy_density(VacuumModel(1.0, 1.0), x),
        tol, mapping="exponential", scale=1.0,
    )
    return QuadratureResult(res.value * scale, res.error_estimate * scale, res.evaluations,
                            res.converged, res.tolerance * scale, res.panels)


def _energy_density(model, r):
    _, e_field, d = dielectric_fields(model, r)
    return e_field * d / (8.0 * math.pi) * 4.0 * math.pi * r * r


def minkowski_energy(model: VacuumModel, tol: float = 1e-13) -> QuadratureResult:
    """-integral of T^0_0 dV with T^0_0 = -E_r D_r / 8 pi; must agree with :func:`flat_self_energy`."""
    scale = model.e**2 / model.r0
    unit = VacuumModel(1.0, 1.0)
    res = integrate_radial(
        lambda x: -minkowski_T00(field_pair(unit, x)) * 4.0 * math.pi * x * x,
        tol, mapping="exponential", scale=1.0,
    )
    return QuadratureResult(res.value * scale, res.error_estimate * scale, res.evaluations,
                            res.converged, res.tolerance * scale, res.panels)


# spinning charge ---------------------------------------------------------------


@dataclass(frozen=True)
class MagneticMoment:
    mu: float  # erg / gauss
    g: float
    geometrized: float  # Q a, cm^2


def magnetic_moment_g(params: ParticleParams) -> MagneticMoment:
    """Moment mu = e a with a = s / (m c), and the g-factor mu / (s e / 2 m c).

    The ratio is formed in exact rational arithmetic on the float inputs, so
    g = 2 holds exactly rather than to rounding.
    """
    if not params.spin > 0:
        raise DomainError("spin must be positive")
    e, m, s, c = (Fraction(x) for x in (params.charge, params.mass, params.spin, const.C_LIGHT))
    mu = e * s / (m * c)
    g = mu / (s * e / (2 * m * c))
    geo = geometrize(params)
    return MagneticMoment(float(mu), float(g), geo.Q * geo.a)


@dataclass(frozen=True)
class FarFieldSample:
    r: float
    theta: float
    E_r: float
    E_theta: float
    B_r: float
    B_theta: float
    mu: float


FAR_FIELD_FACTOR = 100.0


def farfield_kn(params: ParticleParams, r, theta) -> FarFieldSample:
    """Leading far-zone fields of a charged spinning ring of radius a (r in cm).

    Requires ``r > 100 max(a, r0)``.
    """
    geo = geometrize(params)
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if not np.all(r > FAR_FIELD_FACTOR * max(geo.a, geo.r0)):
        raise DomainError(f"far-field forms need r > {FAR_FIELD_FACTOR:g} * max(a, r0)")
    e, a = params.charge, geo.a
    mu = magnetic_moment_g(params).mu if params.spin > 0 else 0.0
    c, s = np.cos(theta), np.sin(theta)
    e_r = e / r**2 - 3.0 * e * a * a * c * c / r**4
    e_th = -2.0 * e * a * a * c * s / r**4
    b_r = 2.0 * mu * c / r**3
    b_th = mu * s / r**3
    return FarFieldSample(r, theta, e_r, e_th, b_r, b_th, mu)
