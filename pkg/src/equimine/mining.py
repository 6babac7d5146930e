"""Mining-revenue model: a located/scaled Student-t curve for the extraction rate.

The extraction rate rises to a peak and falls again, so it is modeled as a
Student-t probability density shifted to the peak year and stretched by a
scale factor. Only t >= 0 is physical, so the density is renormalized by its
mass on the positive half-line; total extractable value then integrates to
exactly the configured total.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import QuadratureError, ValidationError

DEFAULT_DOF = 5.0
DEFAULT_LOCATION = 15.0  # years until peak extraction
DEFAULT_SCALE = 5.0
DEFAULT_TOTAL_VALUE = 70e12

INCOME_MODES = ("cumulative", "paper-literal")

_RATE_QUAD_ABSTOL = 1e-9  # on the rate integral, i.e. 1e-9 * V on income


def t_density(y, dof: float):
    """Standard Student-t probability density with `dof` degrees of freedom."""
    y = np.asarray(y, dtype=float)
    log_coef = math.lgamma((dof + 1) / 2) - math.lgamma(dof / 2) - 0.5 * math.log(dof * math.pi)
    out = np.exp(log_coef - ((dof + 1) / 2) * np.log1p(y * y / dof))
    return out if out.ndim else float(out)


@dataclass
class MiningCurveParams:
    """Curve parameters: t-distribution dof, peak year, scale, total value.

    positive_mass caches the curve's mass on t in [0, inf) before
    renormalization; it is computed by quadrature when not supplied.
    """

    dof: float = DEFAULT_DOF
    location: float = DEFAULT_LOCATION
    scale: float = DEFAULT_SCALE
    total_value: float = DEFAULT_TOTAL_VALUE
    positive_mass: float = None

    def __post_init__(self):
        if not (self.dof > 0 and math.isfinite(self.dof)):
            raise ValidationError("dof must be a positive real")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValidationError("scale must be a positive real")
        if not math.isfinite(self.location):
            raise ValidationError("location must be finite")
        if not (self.total_value >= 0 and math.isfinite(self.total_value)):
            raise ValidationError("total_value must be >= 0")
        if self.positive_mass is None:
            density = lambda t: t_density((t - self.location) / self.scale, self.dof) / self.scale
            mass, err = quad(density, 0.0, np.inf, epsabs=1e-12, epsrel=1e-12, limit=200)
            self.positive_mass = mass
        if not (0.0 < self.positive_mass <= 1.0 + 1e-12):
            raise ValidationError(f"positive_mass must be in (0, 1], got {self.positive_mass}")


@dataclass
class RevenueWindow:
    """Integration window [t1, t2] in years plus the venture cost."""

    t1: float
    t2: float
    cost: float = 0.0

    def __post_init__(self):
        if not (0 <= self.t1 < self.t2):
            raise ValidationError(f"need 0 <= t1 < t2, got [{self.t1}, {self.t2}]")
        if not (self.cost >= 0 and math.isfinite(self.cost)):
            raise ValidationError("cost must be finite and >= 0")


def extraction_rate(t, params: MiningCurveParams):
    """Fraction of total value extracted per year at time t >= 0.

    This is the located/scaled t density divided by its positive-half mass,
    so it integrates to 1 over [0, inf). Accepts scalars or arrays; the rate
    at t = +inf is 0.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("extraction rate is defined for t >= 0 only")
    with np.errstate(invalid="ignore"):
        y = (t_arr - params.location) / params.scale
        rate = t_density(y, params.dof) / (params.scale * params.positive_mass)
    rate = np.where(np.isinf(t_arr), 0.0, rate)
    return rate if rate.ndim else float(rate)


def income(window: RevenueWindow, params: MiningCurveParams, mode: str = "cumulative") -> float:
    """Income over the window.

    "cumulative" integrates rate * V over [t1, t2] by adaptive quadrature
    (absolute tolerance 1e-9 * V). "paper-literal" evaluates the rate
    difference at the window edges, V * (rate(t2) - rate(t1)): the literal
    result of integrating the rate's derivative instead of the rate itself.
    """
    if mode == "paper-literal":
        return params.total_value * (
            extraction_rate(window.t2, params) - extraction_rate(window.t1, params)
        )
    if mode != "cumulative":
        raise ValidationError(f"unknown income mode {mode!r}")
    frac, err = quad(
        lambda t: extraction_rate(t, params),
        window.t1,
        window.t2,
        epsabs=_RATE_QUAD_ABSTOL,
        epsrel=1e-10,
        limit=200,
    )
    if err > _RATE_QUAD_ABSTOL and err > 1e-10 * abs(frac):
        raise QuadratureError("income quadrature missed tolerance", err)
    return params.total_value * frac


def profit(income_value: float, cost: float) -> float:
    """Income minus cost; may be negative."""
    return income_value - cost
