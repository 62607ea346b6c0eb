"""Macroscopic moment system: Lotka-Volterra means plus variance equations.

The means follow the logistic Lotka-Volterra system

    dm1/dt = alpha (1 - m1/K) m1 - beta m1 m2
    dm2/dt = -delta m2 + gamma m1 m2,        delta = gamma*mu - nu,

and each variance obeys dV_k/dt = sigma_k^2(t) m_k^(2p) - 2 lambda_k(t) V_k,
where m^(2p) is the moment of order 2p of species k.  For p = 1/2 the source
moment is the mean itself; for p = 1 it is V + m^2.  For intermediate p there
is no closure in (m, V) and the caller must supply m^(2p) from a density.

Integration uses the classical fourth-order Runge-Kutta one-step method with a
fixed step, so trajectories are bit-for-bit reproducible for a given (dt, t_end).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, MomentState, coefficients_from_means

__all__ = [
    "ClosureError",
    "MomentTrajectory",
    "lv_rhs",
    "variance_rhs",
    "integrate_moments",
]

#: Default step for the moment ODEs; two orders of magnitude below the fastest
#: O(1) rate constant of the benchmark set.
DEFAULT_DT = 1e-3


class ClosureError(ValueError):
    """No (m, V) closure exists for the requested diffusion exponent."""


@dataclass(frozen=True)
class MomentTrajectory:
    """Time series of MomentState values on a strictly increasing time grid."""

    times: np.ndarray            # shape (n,)
    m1: np.ndarray
    m2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> MomentState:
        return MomentState(
            m1=float(self.m1[i]), m2=float(self.m2[i]),
            v1=float(self.v1[i]), v2=float(self.v2[i]), t=float(self.times[i]),
        )

    def final(self) -> MomentState:
        return self.state(len(self) - 1)

    def means_at(self, t: float) -> tuple[float, float]:
        """Linear interpolation of the mean pair at time t."""
        return (
            float(np.interp(t, self.times, self.m1)),
            float(np.interp(t, self.times, self.m2)),
        )


def lv_rhs(params: ModelParams, m1: float, m2: float) -> tuple[float, float]:
    """Right-hand side of the logistic Lotka-Volterra system."""
    dm1 = params.alpha * (1.0 - m1 / params.K) * m1 - params.beta * m1 * m2
    dm2 = -params.delta * m2 + params.gamma * m1 * m2
    return dm1, dm2


def variance_rhs(
    params: ModelParams,
    state: MomentState,
    m2p_1: float,
    m2p_2: float,
) -> tuple[float, float]:
    """Variance equations dV_k/dt = sigma_k^2 m_k^(2p) - 2 lambda_k V_k.

    The caller supplies the order-2p moments m2p_k (for p = 1/2 these are the
    means, for p = 1 they are V_k + m_k^2).
    """
    if m2p_1 < 0.0 or m2p_2 < 0.0:
        raise ValueError(f"order-2p moments must be >= 0, got ({m2p_1}, {m2p_2})")
    c = coefficients_from_means(params, state.m1, state.m2)
    dv1 = c.sigma1_sq * m2p_1 - 2.0 * c.lambda1 * state.v1
    dv2 = c.sigma2_sq * m2p_2 - 2.0 * c.lambda2 * state.v2
    return dv1, dv2


def _moment_2p(params: ModelParams, m: float, v: float) -> float:
    if params.p == 0.5:
        return m
    if params.p == 1.0:
        return v + m * m
    raise ClosureError(
        f"p = {params.p} has no (m, V) closure; obtain the order-2p moment "
        "from a density field instead"
    )


def _rhs(params: ModelParams, y: np.ndarray) -> np.ndarray:
    m1, m2, v1, v2 = y
    dm1, dm2 = lv_rhs(params, m1, m2)
    c = coefficients_from_means(params, m1, m2)
    dv1 = c.sigma1_sq * _moment_2p(params, m1, v1) - 2.0 * c.lambda1 * v1
    dv2 = c.sigma2_sq * _moment_2p(params, m2, v2) - 2.0 * c.lambda2 * v2
    return np.array([dm1, dm2, dv1, dv2])


def integrate_moments(
    params: ModelParams,
    initial: MomentState,
    t_end: float,
    dt: float = DEFAULT_DT,
) -> MomentTrajectory:
    """Integrate (m1, m2, V1, V2) with fixed-step classical RK4.

    Only p in {1/2, 1} close at the variance level; other p raise ClosureError.
    The returned trajectory contains every step, starting at initial.t.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if t_end < 0.0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    _moment_2p(params, initial.m1, initial.v1)  # fail fast on unsupported p

    n_steps = int(round(t_end / dt))
    times = initial.t + dt * np.arange(n_steps + 1)
    out = np.empty((n_steps + 1, 4))
    y = np.array([initial.m1, initial.m2, initial.v1, initial.v2])
    out[0] = y
    for i in range(n_steps):
        k1 = _rhs(params, y)
        k2 = _rhs(params, y + 0.5 * dt * k1)
        k3 = _rhs(params, y + 0.5 * dt * k2)
        k4 = _rhs(params, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return MomentTrajectory(
        times=times, m1=out[:, 0], m2=out[:, 1], v1=out[:, 2], v2=out[:, 3]
    )
