"""Center prediction with the quadratic graph Laplacian regularizer, solved in closed form."""
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from graphrdh.exceptions import RdhConfigurationError, RdhSolveFailedError
from graphrdh.graph import CENTER_NODE, SAMPLING_DIAGONAL, SimilarityGraph, embed_ring, laplacian
from graphrdh.predictors.base import GraphPredictor, center_to_intensity


@dataclass(eq=False)
class QuadSolveResult:
    x_star: np.ndarray
    center_real: float
    center_int: int


def quad_system_matrix(g: SimilarityGraph, gamma: float) -> np.ndarray:
    """H^T H + gamma L"""
    return np.diag(SAMPLING_DIAGONAL) + gamma * laplacian(g)


def cholesky_solve(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve symmetric positive definite system a x = rhs by Cholesky factorization."""
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError as e:
        raise RdhSolveFailedError(f"System matrix is not positive definite: { e }") from e
    return cho_solve(factor, rhs, check_finite=False)


def predict_quad(y: np.ndarray, g: SimilarityGraph, gamma: float) -> QuadSolveResult:
    """x* = (H^T H + gamma L)^-1 H^T y, the minimizer of |y - Hx|^2 + gamma x^T L x."""
    if not gamma > 0:
        raise RdhConfigurationError(f"gamma must be positive, got { gamma }")
    x = cholesky_solve(quad_system_matrix(g, gamma), embed_ring(y))
    center = float(x[CENTER_NODE])
    return QuadSolveResult(x, center, center_to_intensity(center))


@dataclass
class QuadraticGraphPredictor(GraphPredictor):
    name: ClassVar[str] = "quad"

    def solve(self, y: np.ndarray, graph: SimilarityGraph) -> int:
        return predict_quad(y, graph, self.params.gamma).center_int
