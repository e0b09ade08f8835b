"""Adaptive quadrature for the self-energy integrals.

The workhorse is a globally adaptive Gauss-Kronrod (7/15) rule on a finite
interval.  Semi-infinite radial integrals are first mapped onto a bounded
variable:

``algebraic``
    ``u = s / (s + r - r_lo)`` with scale ``s``; for integrands decaying like
    ``r**-2`` the mapped integrand stays bounded at ``u -> 0``.
``exponential``
    ``x = exp(-s / 2r)``.  An integrand carrying the factor ``exp(-s/2r)/r**2``
    becomes a bounded (for the static regularized energy density, constant)
    function of ``x`` on ``[0, 1]``.

Kerr-Newman energies add an angular integral done with a fixed Gauss-Legendre
rule in a graded variable (see :func:`theta_rule`).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergencePath, DomainError, NoConvergence
from .metrics import ChargeProfile, Family, MetricSpec, build_metric
from .stress import EIGHT_PI, closed_T00_kn, closed_T_static
from .tensor import CoordPoint, analyze, jacobian_sqrt

_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
# 15 nodes on [-1, 1] and the matching Kronrod / Gauss weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_K15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G7 = np.zeros(15)
_G7[1:7:2] = _WG[:3]
_G7[7] = _WG[3]
_G7[9:14:2] = _WG[2::-1]
_EPS = np.finfo(float).eps

DEFAULT_BUDGET = 10**6
THETA_NODES = 64


@dataclass
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    tolerance: float = 0.0
    panels: int = field(default=0, repr=False)


def _panels(f, lo, hi):
    """Evaluate the 15-point rule on every panel [lo_i, hi_i] with one call to f."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(y)):
        raise DomainError("integrand returned non-finite values")
    kron = half * (y @ _K15)
    gauss = half * (y @ _G7)
    resabs = np.abs(half) * (np.abs(y) @ _K15)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(np.abs(kron - gauss), floor)
    return kron, err, floor


def integrate(f, a: float, b: float, tol: float = 1e-12, rel_tol: float = 0.0,
              budget: int = DEFAULT_BUDGET, initial_panels: int = 16,
              raise_on_failure: bool = True) -> QuadratureResult:
    """Integrate a vectorized ``f`` over the finite interval [a, b].

    Stops when the summed panel error is at most ``max(tol, rel_tol*|I|)``.
    Failure (budget exhausted, or the target lies below the roundoff floor)
    raises :class:`NoConvergence` unless ``raise_on_failure`` is false, in
    which case the partial result comes back with ``converged=False``.
    """
    edges = np.linspace(a, b, initial_panels + 1)
    vals, errs, floors = _panels(f, edges[:-1], edges[1:])
    evals = 15 * initial_panels
    heap = [(-e, lo, hi, v, fl) for lo, hi, v, e, fl in zip(edges[:-1], edges[1:], vals, errs, floors)]
    heapq.heapify(heap)
    reason = None
    steps = 0
    total_err, value = math.fsum(errs), math.fsum(vals)
    while True:
        if total_err <= max(tol, rel_tol * abs(value)):
            # running sums drift; confirm with exact ones before stopping
            total_err = math.fsum(-item[0] for item in heap)
            value = math.fsum(item[3] for item in heap)
            if total_err <= max(tol, rel_tol * abs(value)):
                break
        if evals + 30 > budget:
            reason = "budget"
            break
        neg_err, lo, hi, v, fl = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if -neg_err <= fl or not lo < mid < hi:
            heapq.heappush(heap, (neg_err, lo, hi, v, fl))
            reason = "roundoff"
            break
        cv, ce, cf = _panels(f, [lo, mid], [mid, hi])
        evals += 30
        heapq.heappush(heap, (-ce[0], lo, mid, cv[0], cf[0]))
        heapq.heappush(heap, (-ce[1], mid, hi, cv[1], cf[1]))
        total_err += ce[0] + ce[1] + neg_err
        value += cv[0] + cv[1] - v
        steps += 1
    ordered = sorted(heap, key=lambda item: item[1])
    value = math.fsum(item[3] for item in ordered)
    total_err = math.fsum(-item[0] for item in ordered)
    target = max(tol, rel_tol * abs(value))
    converged = total_err <= target
    res = QuadratureResult(value, total_err, evals, converged, target, len(ordered))
    if not converged and raise_on_failure:
        raise NoConvergence(
            f"quadrature stopped ({reason}) at error {total_err:.3e} > {target:.3e}",
            result=res, reason=reason or "budget",
        )
    return res


def integrate_radial(f, tol: float = 1e-12, *, lower: float = 0.0, upper: float = math.inf,
                     mapping: str = "algebraic", scale: float = 1.0, rel_tol: float = 0.0,
                     budget: int = DEFAULT_BUDGET, raise_on_failure: bool = True) -> QuadratureResult:
    """Integrate ``f(r)`` over ``[lower, upper]`` (``upper`` may be infinite) after mapping to a bounded variable."""
    if not 0 <= lower < upper:
        raise DomainError("need 0 <= lower < upper")
    if not scale > 0:
        raise DomainError("scale must be positive")
    if mapping == "algebraic":
        u_lo = 0.0 if math.isinf(upper) else scale / (scale + upper - lower)

        def g(u):
            r = lower + scale * (1.0 - u) / u
            return f(r) * scale / (u * u)

        return integrate(g, u_lo, 1.0, tol, rel_tol, budget, raise_on_failure=raise_on_failure)
    if mapping == "exponential":
        x_lo = 0.0 if lower == 0 else math.exp(-scale / (2.0 * lower))
        x_hi = 1.0 if math.isinf(upper) else math.exp(-scale / (2.0 * upper))

        def g(x):
            lx = np.log(x)
            r = -scale / (2.0 * lx)
            y = np.asarray(f(r), dtype=float)
            with np.errstate(over="ignore", invalid="ignore"):
                jac = scale / (2.0 * x * lx * lx)
            # an integrand that has decayed to zero contributes nothing, whatever the Jacobian
            return np.where(y == 0.0, 0.0, y * jac)

        return integrate(g, x_lo, x_hi, tol, rel_tol, budget, raise_on_failure=raise_on_failure)
    raise DomainError(f"unknown mapping {mapping!r}")


# energy integrals -----------------------------------------------------------


def theta_rule(r, a: float, n: int = THETA_NODES):
    """Nodes ``cos(theta)`` in (0, 1) and weights for ``integral_0^1 F dx`` at each radius.

    With ``x = (r/a) sinh(s)`` the ring-shaped peak of Kerr-Newman integrands at
    the equator (width ~ r/a) is resolved by an n-point Gauss-Legendre rule in
    ``s``.  Nodes never touch the axis or the equator exactly.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    t, w = np.polynomial.legendre.leggauss(n)
    if a == 0:
        x = np.broadcast_to(0.5 * (t + 1.0), r.shape + (n,))
        return x, np.broadcast_to(0.5 * w, r.shape + (n,))
    smax = np.arcsinh(a / r)[:, None]
    s = 0.5 * (t + 1.0) * smax
    x = (r[:, None] / a) * np.sinh(s)
    wx = 0.5 * w * smax * (r[:, None] / a) * np.cosh(s)
    return x, wx


def energy_density(spec: MetricSpec, r, source: str = "pipeline", theta_nodes: int = THETA_NODES):
    """dW/dr = -integral of T^0_0 sqrt(-g) over angles, geometrized units.

    ``source="pipeline"`` takes T^0_0 from curvature of the metric; ``"closed"``
    uses the closed-form expressions.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    metric = build_metric(spec)
    if spec.family is Family.STATIC:
        # spherical symmetry: sqrt(-g) = J(r) sin(theta), angular integral gives 4 pi J
        p = CoordPoint(0.0, r, 0.5 * math.pi, 0.0)
        if source == "pipeline":
            geo = analyze(metric, p)
            t00 = geo.einstein_mixed[:, 0, 0] / EIGHT_PI
            jac = np.sqrt(-geo.det)
        else:
            t00 = closed_T_static(spec, r)[0, 0]
            jac = jacobian_sqrt(metric, p)
        return -4.0 * math.pi * t00 * jac
    x, w = theta_rule(r, spec.spin, theta_nodes)
    rr = np.broadcast_to(r[:, None], x.shape)
    theta = np.arccos(x)
    p = CoordPoint(0.0, rr, theta, 0.0)
    if source == "pipeline":
        geo = analyze(metric, p)
        t00 = (geo.einstein_mixed[:, 0, 0] / EIGHT_PI).reshape(x.shape)
        jac = np.sqrt(-geo.det).reshape(x.shape)
    else:
        t00 = closed_T00_kn(spec, rr, theta)
        jac = jacobian_sqrt(metric, p)
    # d(theta) = dx / sin(theta); both hemispheres and the phi integral give 4 pi
    return -4.0 * math.pi * np.sum(w * t00 * jac / np.sqrt(1.0 - x * x), axis=-1)


def self_energy(spec: MetricSpec, tol: float = 1e-12, mapping: str = "exponential",
                theta_nodes: int = THETA_NODES, source: str = "pipeline",
                budget: int = DEFAULT_BUDGET, raise_on_failure: bool = True) -> QuadratureResult:
    """Total field energy in units of the rest energy (W / M)."""
    if spec.profile is ChargeProfile.CLASSIC:
        raise DivergencePath("classic profile has a divergent self-energy; use divergence_probe")
    m = spec.mass

    def dens(r):
        return energy_density(spec, r, source, theta_nodes) / m

    return integrate_radial(dens, tol, mapping=mapping, scale=spec.r0, budget=budget,
                            raise_on_failure=raise_on_failure)


def kn_angular_kernel(spec: MetricSpec, r):
    """Angle-integrated Kerr-Newman energy density for the regularized profile (W per unit r).

    Closed form with the ``arctan(a/r)`` kernel; valid for a > 0.
    """
    a, m, q2 = spec.spin, spec.mass, spec.charge_sq
    if not a > 0:
        raise DomainError("angular kernel needs a > 0")
    r = np.asarray(r, dtype=float)
    bracket = (4 * a * m * r * r + a * q2 * r) - (q2 * r * r - 4 * a * a * m * r + a * a * q2) * np.arctan(a / r)
    return q2 * np.exp(-q2 / (2.0 * m * r)) / (8.0 * a * m * r**4) * bracket


def kn_self_energy_1d(spec: MetricSpec, tol: float = 1e-12, mapping: str = "exponential",
                      budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """W / M from the angle-integrated one-dimensional Kerr-Newman form."""
    if spec.family is not Family.KERR_NEWMAN or spec.profile is not ChargeProfile.REGULARIZED:
        raise DomainError("one-dimensional form applies to the regularized Kerr-Newman metric")
    m = spec.mass
    return integrate_radial(lambda r: kn_angular_kernel(spec, r) / m, tol, mapping=mapping,
                            scale=spec.r0, budget=budget)


# divergence diagnostics ---------------------------------------------------


@dataclass
class DivergenceReport:
    cutoffs: list
    values: list
    exponent: float
    coefficient: float
    residual: float
    evaluations: int = 0

    @property
    def divergent(self) -> bool:
        return self.exponent < -0.5


PROBE_BUDGET = 50_000


def divergence_probe(spec: MetricSpec, r_min, rel_tol: float = 1e-6, source: str = "pipeline",
                     theta_nodes: int = THETA_NODES, budget: int = PROBE_BUDGET) -> DivergenceReport:
    """Energy outside each cutoff and a least-squares power law ``W = C r_min**p``.

    Values are in units of the rest energy and cutoffs in units of r0.  A
    clearly negative exponent with a small log residual certifies divergence.
    The default relative tolerance is far below what the fit needs; the
    Kerr-Newman curvature near small cutoffs carries ~1e-8 relative noise, so
    much tighter targets only exhaust the budget.
    """
    cuts = [float(c) for c in r_min]
    if len(cuts) < 2 or min(cuts) <= 0:
        raise DomainError("need at least two positive cutoffs")
    m, r0 = spec.mass, spec.r0
    values, evals = [], 0
    for c in cuts:
        res = integrate_radial(lambda r: energy_density(spec, r, source, theta_nodes) / m,
                               0.0, lower=c * r0, scale=c * r0, rel_tol=rel_tol, budget=budget)
        values.append(res.value)
        evals += res.evaluations
    lx, ly = np.log(cuts), np.log(np.abs(values))
    slope, icpt = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + icpt)) ** 2)))
    return DivergenceReport(cuts, values, float(slope), float(math.exp(icpt)), resid, evals)
