"""
Center prediction with the graph total variation prior

    min_x |y - Hx|^2 + gamma * sum_ij w_ij |x_i - x_j|

solved by ADMM on the split z = Fx. The x-step is a linear solve, the z-step a nested proximal
gradient descent with soft thresholding, the u-step the scaled dual update.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import logging
from typing import ClassVar, Optional, Tuple, Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from graphrdh.config import PredictorParams
from graphrdh.exceptions import RdhConfigurationError
from graphrdh.graph import (
    CENTER_NODE,
    INCIDENCE,
    RING_NODES,
    SAMPLING_DIAGONAL,
    SimilarityGraph,
    embed_ring,
)
from graphrdh.predictors.base import GraphPredictor, center_to_intensity
from graphrdh.predictors.quadratic import cholesky_solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GtvParams:
    gamma: float = 0.5
    rho: float = 5.0
    step_t: float = 0.1
    admm_max_iters: int = 200
    pg_max_iters: int = 50
    primal_tol: float = 1e-5
    pg_tol: float = 1e-7
    x_tol: float = 1e-6

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if not getattr(self, name) > 0:
                raise RdhConfigurationError(f"GTV parameter '{ name }' must be positive")

    @classmethod
    def from_predictor_params(cls, p: PredictorParams) -> "GtvParams":
        return cls(
            gamma=p.gamma,
            rho=p.rho,
            step_t=p.step_t,
            admm_max_iters=p.admm_max_iters,
            pg_max_iters=p.pg_max_iters,
            primal_tol=p.primal_tol,
            pg_tol=p.pg_tol,
            x_tol=p.x_tol,
        )


@dataclass(eq=False)
class GtvState:
    x: np.ndarray
    z: np.ndarray  # edge differences, canonical edge order
    u: np.ndarray  # scaled dual variable
    iteration: int = 0


@dataclass(eq=False)
class GtvResult:
    x_star: np.ndarray
    center_real: float
    center_int: int
    iterations: int
    converged: bool
    primal_residual: float
    state: Optional[GtvState] = field(default=None, repr=False)


def soft_threshold(
    z: Union[float, np.ndarray], theta: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """Proximal mapping of theta * |z|."""
    result = np.sign(z) * np.maximum(np.abs(z) - theta, 0.0)
    if np.ndim(result) == 0:
        return float(result)
    return result


@lru_cache(maxsize=16)
def x_step_factor(rho: float) -> Tuple[np.ndarray, bool]:
    """Cholesky factor of 2 H^T H + rho F^T F. The matrix only depends on rho."""
    a = 2 * np.diag(SAMPLING_DIAGONAL) + rho * (INCIDENCE.T @ INCIDENCE)
    c, lower = cho_factor(a, lower=True, check_finite=False)
    c.setflags(write=False)
    return c, lower


def x_step(y: np.ndarray, f: np.ndarray, z: np.ndarray, u: np.ndarray, rho: float) -> np.ndarray:
    """Solve (2 H^T H + rho F^T F) x = 2 H^T y - rho F^T (u - z)."""
    rhs = 2 * embed_ring(y) - rho * (f.T @ (u - z))
    if f is INCIDENCE:
        return cho_solve(x_step_factor(rho), rhs, check_finite=False)
    a = 2 * np.diag(SAMPLING_DIAGONAL) + rho * (f.T @ f)
    return cholesky_solve(a, rhs)


def z_step(
    fx_next: np.ndarray,
    u: np.ndarray,
    weights: np.ndarray,
    params: GtvParams,
    z: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Proximal gradient descent on (rho/2) |Fx - z + u|^2 + gamma * sum w |z|, started at z (or at
    Fx + u if not given). Stops when no component changes by more than pg_tol or after
    pg_max_iters iterations.
    """
    v = fx_next + u
    z = v.copy() if z is None else np.array(z, dtype=np.float64)
    t = params.step_t
    theta = t * params.gamma * np.asarray(weights, dtype=np.float64)
    # z - t * grad with grad = -rho (v - z)
    keep, pull = 1 - t * params.rho, t * params.rho * v
    for _ in range(params.pg_max_iters):
        z_next = soft_threshold(keep * z + pull, theta)
        change = np.max(np.abs(z_next - z))
        z = z_next
        if change <= params.pg_tol:
            break
    return z


def z_exact(
    fx_next: np.ndarray, u: np.ndarray, weights: np.ndarray, params: GtvParams
) -> np.ndarray:
    """Closed-form minimizer of the separable z-subproblem."""
    return soft_threshold(fx_next + u, params.gamma * np.asarray(weights) / params.rho)


def u_step(u: np.ndarray, fx_next: np.ndarray, z_next: np.ndarray) -> np.ndarray:
    return u + (fx_next - z_next)


def gtv_objective(x: np.ndarray, y: np.ndarray, g: SimilarityGraph, gamma: float) -> float:
    r = y - x[list(RING_NODES)]
    return float(np.sum(r * r) + gamma * np.sum(g.weights * np.abs(INCIDENCE @ x)))


def augmented_lagrangian(
    x: np.ndarray,
    z: np.ndarray,
    u: np.ndarray,
    y: np.ndarray,
    g: SimilarityGraph,
    params: GtvParams,
) -> float:
    r = y - x[list(RING_NODES)]
    s = INCIDENCE @ x - z + u
    return float(
        np.sum(r * r)
        + params.gamma * np.sum(g.weights * np.abs(z))
        + params.rho / 2 * np.sum(s * s)
    )


def initial_state(y: np.ndarray) -> GtvState:
    x = embed_ring(y)
    x[CENTER_NODE] = float(np.mean(y))
    return GtvState(x, INCIDENCE @ x, np.zeros(len(INCIDENCE)))


def predict_gtv(
    y: np.ndarray, g: SimilarityGraph, params: GtvParams, exact_z: bool = False
) -> GtvResult:
    """
    ADMM iterations from x = (y, center = mean(y)), z = Fx, u = 0 until the iterate change is at
    most x_tol and the primal residual |Fx - z| is at most primal_tol, or until admm_max_iters.
    The last iterate is returned in any case, converged tells which criterion ended the loop.
    exact_z replaces the nested proximal gradient by the closed-form z minimizer.
    """
    y = np.asarray(y, dtype=np.float64)
    weights = np.asarray(g.weights, dtype=np.float64)
    state = initial_state(y)
    converged = False
    residual = float("inf")
    while state.iteration < params.admm_max_iters:
        x_next = x_step(y, INCIDENCE, state.z, state.u, params.rho)
        fx = INCIDENCE @ x_next
        if exact_z:
            z_next = z_exact(fx, state.u, weights, params)
        else:
            z_next = z_step(fx, state.u, weights, params, state.z)
        u_next = u_step(state.u, fx, z_next)
        x_change = float(np.max(np.abs(x_next - state.x)))
        residual = float(np.max(np.abs(fx - z_next)))
        state = GtvState(x_next, z_next, u_next, state.iteration + 1)
        if x_change <= params.x_tol and residual <= params.primal_tol:
            converged = True
            break
    if not converged:
        logger.debug("ADMM stopped after %d iterations, residual %g", state.iteration, residual)
    center = float(state.x[CENTER_NODE])
    return GtvResult(
        state.x, center, center_to_intensity(center), state.iteration, converged, residual, state
    )


@dataclass
class GtvGraphPredictor(GraphPredictor):
    name: ClassVar[str] = "gtv"
    gtv_params: GtvParams = field(init=False)

    def __post_init__(self):
        self.gtv_params = GtvParams.from_predictor_params(self.params)

    def solve(self, y: np.ndarray, graph: SimilarityGraph) -> int:
        return predict_gtv(y, graph, self.gtv_params).center_int
