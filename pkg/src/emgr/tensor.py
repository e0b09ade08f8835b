"""Exact-derivative tensor calculus on four-dimensional metrics.

Metric components are produced as :class:`~emgr.jet.Jet2` values, so the
connection and curvature use exact first and second partials.  Index order is
``x^0 = t, x^1 = r, x^2 = theta, x^3 = phi`` and the signature is (-,+,+,+).

Metrics may be supplied as a flat background plus a deviation.  Curvature is
then assembled from the connection difference ``D = Gamma - Gamma_bar``::

    R^r_{s m v} = nabla_bar_m D^r_{v s} - nabla_bar_v D^r_{m s}
                  + D^r_{m k} D^k_{v s} - D^r_{v k} D^k_{m s}

which is an exact identity when the background is flat.  Every term is
proportional to the deviation, so tiny departures from flatness (for example
``f - 1 ~ 1e-20`` deep inside a regularized core) keep full relative precision
instead of cancelling against O(1) coordinate terms.  Where the deviation is
large the textbook formula is used instead (see :func:`analyze`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import DomainError, SingularMetric
from .jet import NDIM, Jet2

Components = list  # 4x4 nested list of Jet2 or float


@dataclass(frozen=True)
class CoordPoint:
    """Spacetime point(s); fields may be scalars or broadcast-compatible arrays."""

    t: object
    r: object
    theta: object
    phi: object = 0.0

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        th = np.asarray(self.theta, dtype=float)
        if not np.all(r > 0):
            raise DomainError("evaluation point needs r > 0")
        if not np.all((th > 0) & (th < np.pi)) or np.any(np.sin(th) == 0.0):
            raise DomainError("evaluation point needs 0 < theta < pi")

    @property
    def shape(self) -> tuple:
        return np.broadcast_shapes(*(np.shape(x) for x in (self.t, self.r, self.theta, self.phi)))

    def jets(self):
        shape = self.shape
        return [
            Jet2.variable(np.broadcast_to(np.asarray(x, dtype=float), shape), i)
            for i, x in enumerate((self.t, self.r, self.theta, self.phi))
        ]


@dataclass(frozen=True)
class RankedTensor:
    """Tensor components at a point.

    ``variance`` holds one of ``"u"`` (contravariant) or ``"d"`` (covariant)
    per index.  ``components`` has shape ``(4,) * rank + point.shape``.
    """

    variance: tuple
    components: np.ndarray
    point: CoordPoint

    @property
    def rank(self) -> int:
        return len(self.variance)

    def __getitem__(self, idx):
        return self.components[idx]


@dataclass(frozen=True)
class MetricField:
    """A metric given as flat background plus deviation.

    ``deviation(jets)`` and ``background(jets)`` map the four coordinate jets
    to 4x4 nested lists of :class:`Jet2` (or plain floats for vanishing
    entries).  When ``background`` is ``None`` the deviation is the whole
    metric and curvature is computed with the direct formula.  ``full``, if
    given, evaluates the complete metric directly; it avoids the cancellation
    in ``background + deviation`` where the deviation nearly cancels the
    background (e.g. g_rr = 1/f for very large f).
    """

    name: str
    deviation: Callable
    background: Optional[Callable] = None
    full: Optional[Callable] = None
    family: str = "generic"
    params: dict = field(default_factory=dict)
    signature: tuple = (-1, 1, 1, 1)

    def components(self, p: CoordPoint) -> Components:
        x = p.jets()
        if self.full is not None:
            return self.full(x)
        h = self.deviation(x)
        if self.background is None:
            return h
        eta = self.background(x)
        return [[_add(eta[a][b], h[a][b]) for b in range(NDIM)] for a in range(NDIM)]


def _add(u, v):
    if isinstance(u, Jet2) or isinstance(v, Jet2):
        return u + v if isinstance(u, Jet2) else v + u
    return u + v


def _stack(comps: Components, shape: tuple):
    """Pack a 4x4 jet matrix into (value, first, second) arrays with the point axis first."""
    npts = int(np.prod(shape, dtype=int))
    val = np.zeros((npts, NDIM, NDIM))
    d1 = np.zeros((npts, NDIM, NDIM, NDIM))
    d2 = np.zeros((npts, NDIM, NDIM, NDIM, NDIM))
    for a in range(NDIM):
        for b in range(NDIM):
            c = comps[a][b]
            if isinstance(c, Jet2):
                val[:, a, b] = np.broadcast_to(c.value, shape).reshape(npts)
                d1[:, :, a, b] = np.broadcast_to(c.grad, (NDIM,) + shape).reshape(NDIM, npts).T
                d2[:, :, :, a, b] = np.moveaxis(
                    np.broadcast_to(c.hessian, (NDIM, NDIM) + shape).reshape(NDIM, NDIM, npts), -1, 0
                )
            elif c != 0:
                val[:, a, b] = c
    return val, d1, d2


def _unflatten(x: np.ndarray, shape: tuple) -> np.ndarray:
    """(N, i, j, ...) -> (i, j, ..., *shape)."""
    return np.moveaxis(x, 0, -1).reshape(x.shape[1:] + shape)


@dataclass
class Geometry:
    """Everything the pipeline computes at a batch of points (point axis first)."""

    point: CoordPoint
    g: np.ndarray
    ginv: np.ndarray
    det: np.ndarray
    dg: np.ndarray
    gamma_bar: np.ndarray
    diff: np.ndarray
    riemann: Optional[np.ndarray] = None

    @property
    def shape(self):
        return self.point.shape

    @property
    def christoffel(self) -> np.ndarray:
        return self.gamma_bar + self.diff

    @property
    def ricci(self) -> np.ndarray:
        return np.einsum("nrsrv->nsv", self.riemann)

    @property
    def ricci_scalar(self) -> np.ndarray:
        return np.einsum("nsv,nsv->n", self.ginv, self.ricci)

    @property
    def einstein_mixed(self) -> np.ndarray:
        mixed = np.einsum("nls,nsm->nlm", self.ginv, self.ricci)
        return mixed - 0.5 * self.ricci_scalar[:, None, None] * np.eye(NDIM)


def _invert(g: np.ndarray):
    det = np.linalg.det(g)
    if np.any(np.abs(det) < 1e-300) or not np.all(np.isfinite(det)):
        raise SingularMetric("metric determinant vanishes at evaluation point")
    if np.any(det >= 0):
        raise SingularMetric("metric is not Lorentzian at evaluation point")
    return np.linalg.inv(g), det


def _deviation_ratio(eta, h):
    """Per-point size of the deviation relative to the background, max |h_ab| / sqrt|eta_aa eta_bb|."""
    diag = np.sqrt(np.abs(np.einsum("naa->na", eta)))
    return np.max(np.abs(h) / (diag[:, :, None] * diag[:, None, :]), axis=(1, 2))


SPLIT_THRESHOLD = 1.0


def analyze(metric: MetricField, p: CoordPoint, with_curvature: bool = True) -> Geometry:
    """Run the full pipeline at ``p`` (a single point or a batch).

    Points where the deviation is small relative to the flat background use
    the background-split curvature formula; the rest (and metrics without a
    background) use the direct formula, which is the better conditioned of the
    two once the deviation is O(1) or larger.
    """
    shape = p.shape
    x = p.jets()
    h, dh, d2h = _stack(metric.deviation(x), shape)
    npts = h.shape[0]
    gbar = np.zeros((npts, NDIM, NDIM, NDIM))
    dgbar = np.zeros((npts, NDIM, NDIM, NDIM, NDIM))
    if metric.background is None:
        g, dg = h, dh
    else:
        eta, deta, d2eta = _stack(metric.background(x), shape)
        if metric.full is None:
            g, dg, d2g = eta + h, deta + dh, d2eta + d2h
        else:
            g, dg, d2g = _stack(metric.full(x), shape)
        split = _deviation_ratio(eta, h) < SPLIT_THRESHOLD
        if np.any(split):
            etainv, _ = _invert(eta[split])
            gbar[split], dgbar[split] = kernels.connection(
                etainv, deta[split], eta[split], deta[split], d2eta[split],
                gbar[split], dgbar[split],
            )
        direct = ~split
        h[direct], dh[direct], d2h[direct] = g[direct], dg[direct], d2g[direct]
    ginv, det = _invert(g)
    diff, ddiff = kernels.connection(ginv, dg, h, dh, d2h, gbar, dgbar)
    geo = Geometry(p, g, ginv, det, dg, gbar, diff)
    if with_curvature:
        geo.riemann = kernels.riemann(gbar, diff, ddiff)
    return geo


# public operations ---------------------------------------------------------


def metric_eval(metric: MetricField, p: CoordPoint):
    """Covariant jets, inverse metric values and determinant at ``p``."""
    comps = metric.components(p)
    g, _, _ = _stack(comps, p.shape)
    ginv, det = _invert(g)
    return comps, _unflatten(ginv, p.shape), det.reshape(p.shape)


def christoffel(metric: MetricField, p: CoordPoint) -> RankedTensor:
    geo = analyze(metric, p, with_curvature=False)
    return RankedTensor(("u", "d", "d"), _unflatten(geo.christoffel, p.shape), p)


def curvature(metric: MetricField, p: CoordPoint):
    """Riemann ``R^l_{m n s}``, Ricci ``R_{mn}`` and the Ricci scalar."""
    geo = analyze(metric, p)
    riem = RankedTensor(("u", "d", "d", "d"), _unflatten(geo.riemann, p.shape), p)
    ric = RankedTensor(("d", "d"), _unflatten(geo.ricci, p.shape), p)
    return riem, ric, geo.ricci_scalar.reshape(p.shape)


def einstein_mixed(metric: MetricField, p: CoordPoint) -> RankedTensor:
    geo = analyze(metric, p)
    return RankedTensor(("u", "d"), _unflatten(geo.einstein_mixed, p.shape), p)


def jacobian_sqrt(metric: MetricField, p: CoordPoint):
    """sqrt(-det g)."""
    _, _, det = metric_eval(metric, p)
    return np.sqrt(-det)


def metric_covariant_derivative(metric: MetricField, p: CoordPoint) -> np.ndarray:
    """nabla_l g_{mn}, shape (4, 4, 4) + point shape; vanishes for a Levi-Civita connection."""
    geo = analyze(metric, p, with_curvature=False)
    gam = geo.christoffel
    nab = (
        geo.dg
        - np.einsum("nklm,nkv->nlmv", gam, geo.g)
        - np.einsum("nklv,nmk->nlmv", gam, geo.g)
    )
    return _unflatten(nab, p.shape)


def flat_metric() -> MetricField:
    """Minkowski space in spherical coordinates."""

    def comps(x):
        _, r, th, _ = x
        s = th.sin()
        return [
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, r * r, 0.0],
            [0.0, 0.0, 0.0, r * r * s * s],
        ]

    return MetricField("flat", comps, family="flat")
