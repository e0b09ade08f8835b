"""Curvature, stress-energy and self-energy of regularized charged metrics."""

from .errors import DivergencePath, DomainError, EmgrError, NoConvergence, SingularMetric
from .jet import Jet2
from .kernels import BACKEND
from .metrics import (
    ChargeProfile, Family, Geometrized, MetricSpec, ParticleParams, build_metric,
    degeometrize, f_profile, geometrize, horizon_scan, lapse,
)
from .quadrature import (
    DivergenceReport, QuadratureResult, divergence_probe, integrate, integrate_radial,
    kn_self_energy_1d, self_energy,
)
from .stress import (
    FieldPair, StressTensor, closed_T00_kn, closed_T_static, minkowski_T00,
    stress_from_metric, trace_ricci_consistency,
)
from .fields import (
    FarFieldSample, VacuumModel, charge_density, dielectric_fields, farfield_kn,
    flat_self_energy, magnetic_moment_g,
)
from .tensor import (
    CoordPoint, MetricField, RankedTensor, christoffel, curvature, einstein_mixed,
    flat_metric, jacobian_sqrt, metric_eval,
)

__version__ = "0.1.0"
