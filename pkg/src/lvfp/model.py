"""Model parameters, mean-field coefficient maps, and closed-form fixed points.

The two populations evolve under drift-diffusion equations whose drift and
diffusion coefficients are functions of the instantaneous mean sizes
``(m1, m2)``:

    sigma1^2(m) = sigma1^2 (m1 + m2)      lambda1(m) = beta m2 + (alpha/K) m1 + alpha chi
    mu1(m)      = alpha (chi + 1) m1
    sigma2^2(m) = sigma2^2 m1             lambda2(m) = gamma (mu - m1) + nu theta
    mu2(m)      = nu (theta + 1) m2

With these maps the mean of each density follows dm_k/dt = -lambda_k m_k + mu_k,
which is algebraically identical to the logistic Lotka-Volterra system once
delta = gamma*mu - nu.  Everything here is a pure function of value types.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ParameterError",
    "ModelParams",
    "MomentState",
    "CoefficientSet",
    "coefficients_from_means",
    "equilibrium_mean",
    "asymptotic_coefficients",
    "stationary_variances",
    "TABLE1",
]


class ParameterError(ValueError):
    """Raised when parameters violate a model admissibility condition."""


@dataclass(frozen=True)
class ModelParams:
    """Biological and diffusion parameters of the coupled system.

    ``delta`` is always the derived quantity gamma*mu - nu; it is exposed as a
    property instead of a field so the mean/coefficient consistency identity
    stays exact.
    """

    alpha: float = 1.0      # prey growth rate (1/time)
    beta: float = 0.5       # prey removal rate per unit predator density
    gamma: float = 0.15     # predator growth rate per unit prey density
    K: float = 100.0        # prey carrying capacity
    sigma1: float = 0.05    # diffusion strength, species 1
    sigma2: float = 0.05    # diffusion strength, species 2
    chi: float = 0.0        # redistribution intensity, species 1 (> -1)
    theta: float = 0.0      # redistribution intensity, species 2 (> -1)
    nu: float = 1.0         # birth/death rate scale, species 2 (1/time)
    mu: float = 10.0        # prey-density threshold in the predator drift
    p: float = 0.5          # diffusion exponent, x^(2p), 1/2 <= p <= 1

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "K", "nu", "mu", "sigma1", "sigma2"):
            if getattr(self, name) <= 0.0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.chi <= -1.0 or self.theta <= -1.0:
            raise ParameterError("chi and theta must be > -1")
        if not 0.5 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [1/2, 1], got {self.p}")
        if self.delta <= 0.0:
            raise ParameterError(
                f"derived delta = gamma*mu - nu = {self.delta} must be > 0"
            )

    @property
    def delta(self) -> float:
        """Predator decay rate, always the derived combination gamma*mu - nu."""
        return self.gamma * self.mu - self.nu

    def coexistence_admissible(self) -> bool:
        return self.gamma * self.K - self.delta > 0.0


#: Benchmark parameter set (the published table lists K = 0.01, which makes the
#: coexistence point inadmissible; the working default uses K = 100, see README).
TABLE1 = ModelParams()


@dataclass(frozen=True)
class MomentState:
    """Means and variances of the two densities at a time instant."""

    m1: float
    m2: float
    v1: float
    v2: float
    t: float = 0.0

    def __post_init__(self):
        if self.m1 <= 0.0 or self.m2 <= 0.0:
            raise ParameterError(f"means must be positive, got ({self.m1}, {self.m2})")
        if self.v1 < 0.0 or self.v2 < 0.0:
            raise ParameterError(f"variances must be >= 0, got ({self.v1}, {self.v2})")


@dataclass(frozen=True)
class CoefficientSet:
    """Frozen drift/diffusion coefficients (sigma_k^2, lambda_k, mu_k)."""

    sigma1_sq: float
    sigma2_sq: float
    lambda1: float
    lambda2: float
    mu1: float
    mu2: float

    def species(self, k: int) -> tuple[float, float, float]:
        """Return (sigma_sq, lam, mu) for species k in {1, 2}."""
        if k == 1:
            return self.sigma1_sq, self.lambda1, self.mu1
        if k == 2:
            return self.sigma2_sq, self.lambda2, self.mu2
        raise ValueError(f"species must be 1 or 2, got {k}")


def coefficients_from_means(params: ModelParams, m1: float, m2: float) -> CoefficientSet:
    """Evaluate the mean-field coefficient maps at means (m1, m2).

    Raises ParameterError for non-positive means.
    """
    if m1 <= 0.0 or m2 <= 0.0:
        raise ParameterError(f"means must be positive, got ({m1}, {m2})")
    return CoefficientSet(
        sigma1_sq=params.sigma1 ** 2 * (m1 + m2),
        sigma2_sq=params.sigma2 ** 2 * m1,
        lambda1=params.beta * m2 + (params.alpha / params.K) * m1 + params.alpha * params.chi,
        lambda2=params.gamma * (params.mu - m1) + params.nu * params.theta,
        mu1=params.alpha * (params.chi + 1.0) * m1,
        mu2=params.nu * (params.theta + 1.0) * m2,
    )


def equilibrium_mean(params: ModelParams) -> tuple[float, float]:
    """Unique coexistence fixed point of the mean system.

    m_inf = (delta/gamma, alpha*(gamma*K - delta)/(beta*gamma*K)); requires
    gamma*K > delta, otherwise the second component is not positive.
    """
    delta = params.delta
    if params.gamma * params.K - delta <= 0.0:
        raise ParameterError(
            "coexistence equilibrium inadmissible: gamma*K - delta = "
            f"{params.gamma * params.K - delta} must be > 0 "
            f"(gamma*K = {params.gamma * params.K}, delta = {delta})"
        )
    m1_inf = delta / params.gamma
    m2_inf = params.alpha * (params.gamma * params.K - delta) / (params.beta * params.gamma * params.K)
    return m1_inf, m2_inf


def asymptotic_coefficients(params: ModelParams) -> CoefficientSet:
    """Coefficient set at the coexistence point (the large-time limit values)."""
    m1_inf, m2_inf = equilibrium_mean(params)
    return coefficients_from_means(params, m1_inf, m2_inf)


def stationary_variances(params: ModelParams) -> tuple[float, float]:
    """Closed-form stationary variances, available for p = 1/2 and p = 1.

    p = 1/2:
        V1 = sigma1^2 m1_inf (m1_inf + m2_inf) / (2 alpha (chi+1))
        V2 = sigma2^2 m1_inf m2_inf / (2 (gamma*mu - delta + nu*theta))
    p = 1:
        V1 = sigma1^2 (m1_inf + m2_inf) m1_inf^2 / (2 alpha (chi+1) - sigma1^2 (m1_inf + m2_inf))
        V2 = sigma2^2 m1_inf m2_inf^2 / (2 (gamma*mu - delta + nu*theta) - sigma2^2 m1_inf)

    The p = 1 values require the denominators to be positive, otherwise the
    variance equations have no finite stationary point.
    """
    m1_inf, m2_inf = equilibrium_mean(params)
    s1 = params.sigma1 ** 2
    s2 = params.sigma2 ** 2
    rate1 = 2.0 * params.alpha * (params.chi + 1.0)
    rate2 = 2.0 * (params.gamma * params.mu - params.delta + params.nu * params.theta)
    if params.p == 0.5:
        return (
            s1 * m1_inf * (m1_inf + m2_inf) / rate1,
            s2 * m1_inf * m2_inf / rate2,
        )
    if params.p == 1.0:
        den1 = rate1 - s1 * (m1_inf + m2_inf)
        den2 = rate2 - s2 * m1_inf
        if den1 <= 0.0 or den2 <= 0.0:
            raise ParameterError(
                "stationary variances for p=1 require "
                "2*alpha*(chi+1) > sigma1^2*(m1_inf+m2_inf) and "
                "2*(gamma*mu - delta + nu*theta) > sigma2^2*m1_inf"
            )
        return (
            s1 * (m1_inf + m2_inf) * m1_inf ** 2 / den1,
            s2 * m1_inf * m2_inf ** 2 / den2,
        )
    raise ParameterError(
        f"no closed-form stationary variance for p = {params.p}; only p in {{1/2, 1}}"
    )
