"""
8-connected similarity graph over a 3x3 patch. Nodes are numbered row-major (0..8, center = 4),
edges are kept in one canonical order shared by the weight vector, the incidence matrix rows and
the edge variables of the total variation solver.
"""
from dataclasses import dataclass
import math
from typing import List, Tuple

import numpy as np

from graphrdh.exceptions import RdhConfigurationError
from graphrdh.image import NormalizedPatch

NODE_COUNT = 9
CENTER_NODE = 4
RING_NODES: Tuple[int, ...] = tuple(n for n in range(NODE_COUNT) if n != CENTER_NODE)


def _node_location(n: int) -> Tuple[int, int]:
    return divmod(n, 3)


def _grid_edges() -> List[Tuple[int, int]]:
    edges = []
    for i in range(NODE_COUNT):
        for j in range(i + 1, NODE_COUNT):
            (ri, ci), (rj, cj) = _node_location(i), _node_location(j)
            if max(abs(ri - rj), abs(ci - cj)) == 1:
                edges.append((i, j))
    return edges


EDGES: Tuple[Tuple[int, int], ...] = tuple(_grid_edges())
EDGE_COUNT = len(EDGES)  # 6 horizontal + 6 vertical + 8 diagonal


def _incidence() -> np.ndarray:
    f = np.zeros((EDGE_COUNT, NODE_COUNT))
    for k, (i, j) in enumerate(EDGES):
        f[k, i] = 1.0
        f[k, j] = -1.0
    f.setflags(write=False)
    return f


INCIDENCE = _incidence()


def _sampling_diagonal() -> np.ndarray:
    d = np.ones(NODE_COUNT)
    d[CENTER_NODE] = 0.0
    d.setflags(write=False)
    return d


# diagonal of H^T H: observed ring nodes 1, predicted center 0
SAMPLING_DIAGONAL = _sampling_diagonal()


def sampling_matrix() -> np.ndarray:
    """8x9 matrix H selecting the ring nodes in ring vector order."""
    h = np.zeros((len(RING_NODES), NODE_COUNT))
    for slot, node in enumerate(RING_NODES):
        h[slot, node] = 1.0
    return h


def embed_ring(y: np.ndarray) -> np.ndarray:
    """H^T y: ring values at their nodes, zero at the center."""
    x = np.zeros(NODE_COUNT)
    x[list(RING_NODES)] = y
    return x


@dataclass(eq=False)
class SimilarityGraph:
    weights: np.ndarray  # one weight per edge in EDGES order
    sigma_l: float = 0.5
    sigma_x: float = 0.5

    @property
    def edges(self) -> List[Tuple[int, int, float]]:
        return [(i, j, float(w)) for (i, j), w in zip(EDGES, self.weights)]

    def adjacency(self) -> np.ndarray:
        w = np.zeros((NODE_COUNT, NODE_COUNT))
        for (i, j), wij in zip(EDGES, self.weights):
            w[i, j] = wij
            w[j, i] = wij
        return w

    def laplacian(self) -> np.ndarray:
        return laplacian(self)

    def incidence(self) -> np.ndarray:
        return incidence(self)


def build_graph(matched: NormalizedPatch, sigma_l: float, sigma_x: float) -> SimilarityGraph:
    """Edge weights exp(-|l_i - l_j|^2 / sigma_l^2 - (x'_i - x'_j)^2 / sigma_x^2) with grid
    locations in pixel units and intensities of the matched patch in [0, 1]."""
    if not sigma_l > 0 or not sigma_x > 0:
        raise RdhConfigurationError(
            f"Graph parameters must be positive, got sigma_l={ sigma_l }, sigma_x={ sigma_x }"
        )
    x = matched.values
    weights = np.empty(EDGE_COUNT)
    for k, (i, j) in enumerate(EDGES):
        (ri, ci), (rj, cj) = _node_location(i), _node_location(j)
        dl = (ri - rj) ** 2 + (ci - cj) ** 2
        dx = x[i] - x[j]
        weights[k] = math.exp(-dl / sigma_l**2 - dx * dx / sigma_x**2)
    return SimilarityGraph(weights, sigma_l, sigma_x)


def laplacian(g: SimilarityGraph) -> np.ndarray:
    """Combinatorial Laplacian L = D - W."""
    w = g.adjacency()
    return np.diag(w.sum(axis=1)) - w


def incidence(g: SimilarityGraph) -> np.ndarray:
    """Edge-node incidence matrix F with +1 at the smaller and -1 at the larger node index."""
    return INCIDENCE.copy()
