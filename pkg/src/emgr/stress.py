"""Stress-energy tensors: from curvature, from closed forms, and for a polarizable medium.

All tensors are mixed ``T^l_m`` in geometrized units (``G = c = 1``) unless
converted with :meth:`StressTensor.to_gaussian`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants as const
from .errors import DomainError
from .metrics import ChargeProfile, Family, MetricSpec, build_metric, deviation
from .tensor import CoordPoint, MetricField, analyze

EIGHT_PI = 8.0 * math.pi


@dataclass(frozen=True)
class StressTensor:
    components: np.ndarray  # (4, 4) + point shape
    point: object = None
    units: str = "geometrized"

    def __getitem__(self, idx):
        return self.components[idx]

    @property
    def trace(self):
        return np.einsum("ii...->...", self.components)

    def to_gaussian(self) -> "StressTensor":
        """Convert to erg/cm^3; only meaningful when lengths were in centimetres."""
        if self.units == "gaussian":
            return self
        scale = const.C_LIGHT**4 / const.G_NEWTON
        return StressTensor(self.components * scale, self.point, "gaussian")


@dataclass(frozen=True)
class FieldPair:
    """Radial electric field and displacement (Gaussian units) at radius r."""

    r: object
    E_r: object
    D_r: object


def stress_from_metric(metric: MetricField, p: CoordPoint) -> StressTensor:
    """T^l_m = G^l_m / 8 pi from the curvature pipeline."""
    geo = analyze(metric, p)
    comps = np.moveaxis(geo.einstein_mixed / EIGHT_PI, 0, -1).reshape((4, 4) + p.shape)
    return StressTensor(comps, p)


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if not np.all(r > 0):
        raise DomainError("r must be positive")
    return r


def closed_T_static(spec: MetricSpec, r) -> StressTensor:
    """Diagonal stress tensor of the static metric in closed form.

    Classic: ``T00 = T11 = -T22 = -T33 = -Q^2 / (8 pi r^4)``.
    Regularized: ``T00 = T11 = -Q^2 exp(-r0/2r) / (8 pi r^4)`` and
    ``T22 = T33 = -T00 (1 - r0/4r)``.
    """
    r = _check_r(r)
    q2 = spec.charge_sq
    comps = np.zeros((4, 4) + r.shape)
    if spec.profile is ChargeProfile.CLASSIC:
        t00 = -q2 / (EIGHT_PI * r**4)
        t22 = -t00
    else:
        r0 = spec.r0
        t00 = -q2 * np.exp(-r0 / (2.0 * r)) / (EIGHT_PI * r**4)
        t22 = -t00 * (1.0 - r0 / (4.0 * r))
    comps[0, 0] = comps[1, 1] = t00
    comps[2, 2] = comps[3, 3] = t22
    return StressTensor(comps, r)


def ricci_scalar_closed(spec: MetricSpec, r):
    """R = Q^4 exp(-Q^2/2Mr) / (2 M r^5) for the regularized profile; 0 for classic."""
    r = _check_r(r)
    if spec.profile is ChargeProfile.CLASSIC:
        return np.zeros_like(r)
    q2, m = spec.charge_sq, spec.mass
    return q2 * q2 / (2.0 * m * r**5) * np.exp(-q2 / (2.0 * m * r))


def kn_t00_brackets(r, theta, a):
    """Coefficients (c0, c1, c2, c3) multiplying (1, f, f', f'') in the Kerr-Newman T00 bracket."""
    r = np.asarray(r, dtype=float)
    a2 = a * a
    r2 = r * r
    rho2 = r2 + a2 * np.cos(theta) ** 2
    c0 = -4 * a2 * r2 - 4 * r2 * r2 + 2 * a2 * rho2 + 4 * r2 * rho2 - 2 * rho2 * rho2
    c1 = 4 * a2 * r2 + 4 * r2 * r2 - 2 * a2 * rho2 - 4 * r2 * rho2 + 2 * rho2 * rho2
    c2 = 4 * a2 * r2 * r + 4 * r2 * r2 * r - 4 * a2 * r * rho2 - 6 * r2 * r * rho2 + 4 * r * rho2 * rho2
    c3 = -a2 * r2 * rho2 - r2 * r2 * rho2 + r2 * rho2 * rho2
    return c0, c1, c2, c3


def closed_T00_kn(spec: MetricSpec, r, theta):
    """Kerr-Newman T^0_0 from the closed polynomial in f, f', f''.

    The constant and f-proportional brackets are exact negatives, so they are
    combined as ``c1 * (f - 1)`` to keep precision where f is close to 1.
    """
    if spec.family is not Family.KERR_NEWMAN:
        raise DomainError("closed_T00_kn needs a Kerr-Newman spec")
    r = _check_r(r)
    theta = np.asarray(theta, dtype=float)
    if not np.all((theta > 0) & (theta < math.pi)):
        raise DomainError("theta must lie in (0, pi)")
    r, theta = np.broadcast_arrays(r, theta)
    fm1 = deviation(spec, r)
    fp = fm1.grad[1]
    fpp = fm1.hessian[1, 1]
    _, c1, c2, c3 = kn_t00_brackets(r, theta, spec.spin)
    rho2 = r * r + spec.spin**2 * np.cos(theta) ** 2
    return (c1 * fm1.value + c2 * fp + c3 * fpp) / (16.0 * math.pi * rho2**3)


def minkowski_T00(fields: FieldPair):
    """T^0_0 = -E_r D_r / 8 pi for a static radial field in a polarizable medium."""
    _check_r(fields.r)
    return -np.asarray(fields.E_r) * np.asarray(fields.D_r) / EIGHT_PI


@dataclass(frozen=True)
class TraceCheck:
    ricci_scalar: object
    trace: object
    residual: object


def trace_ricci_consistency(spec: MetricSpec, r) -> TraceCheck:
    """Compare the pipeline Ricci scalar with -8 pi times the closed-form trace.

    ``residual = |R + 8 pi T| / |R|``.  The classic profile is Ricci flat, so
    there the residual is the absolute ``|R + 8 pi T|``.
    """
    if spec.family is not Family.STATIC:
        raise DomainError("trace check is defined for the static family")
    r = _check_r(r)
    geo = analyze(build_metric(spec), CoordPoint(0.0, r, 0.5 * math.pi, 0.0))
    big_r = geo.ricci_scalar.reshape(r.shape)
    trace = closed_T_static(spec, r).trace
    num = np.abs(big_r + EIGHT_PI * trace)
    if spec.profile is ChargeProfile.CLASSIC:
        return TraceCheck(big_r, trace, num)
    return TraceCheck(big_r, trace, num / np.abs(big_r))

