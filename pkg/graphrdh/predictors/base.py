from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import math
from typing import ClassVar, Optional

import numpy as np

from graphrdh.config import PredictorParams
from graphrdh.graph import SimilarityGraph, build_graph
from graphrdh.image import GrayImage, Position
from graphrdh.layers import LayerPlan
from graphrdh.patches import find_similar_patch, ring_vector
from graphrdh.tensor import eigen_min, eigen_min_map, structure_tensor_at


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def center_to_intensity(center_real: float) -> int:
    """Normalized real-valued center prediction to an 8-bit intensity."""
    return min(max(round_half_up(center_real * 255), 0), 255)


@dataclass
class Predictor(ABC):
    """
    Base class of center pixel predictors used by the codec. A predictor provides two things:

    * a local complexity measure that is compared against the layer threshold to decide whether a
      pixel is used for embedding (the gate) and
    * the integer prediction of the center pixel.

    Both must only depend on pixels that are identical in the embedding and the extraction pass
    at the time the pixel is visited, i.e. never on the center pixel itself.
    """

    name: ClassVar[str] = "predictor"
    params: PredictorParams = field(default_factory=PredictorParams)

    @classmethod
    def from_params(cls, params: Optional[PredictorParams] = None) -> "Predictor":
        return cls(params or PredictorParams())

    @abstractmethod
    def complexity(self, image: GrayImage, pos: Position) -> float:
        """Gate value of a pixel, the pixel passes the gate if this value is below tau."""

    def complexity_map(self, image: GrayImage) -> np.ndarray:
        """Gate values of all pixels with complete footprint, +inf elsewhere. Subclasses should
        override this with a vectorized computation."""
        out = np.full((image.height, image.width), np.inf)
        for r in range(1, image.height - 1):
            for c in range(1, image.width - 1):
                out[r, c] = self.complexity(image, (r, c))
        return out

    @abstractmethod
    def predict(self, image: GrayImage, pos: Position, layer: Optional[LayerPlan] = None) -> int:
        """Predicted 8-bit value of the pixel at pos. layer is the layer currently processed."""


@dataclass
class GraphPredictor(Predictor, ABC):
    """
    Predictors that restore the center of a 3x3 patch from its ring using a graph whose edge
    weights are derived from the most similar patch in a semi-local window. The structure tensor
    of the ring is the gate value.
    """

    def complexity(self, image: GrayImage, pos: Position) -> float:
        return eigen_min(structure_tensor_at(image, pos))

    def complexity_map(self, image: GrayImage) -> np.ndarray:
        return eigen_min_map(image)

    def graph_for(
        self, image: GrayImage, pos: Position, layer: Optional[LayerPlan] = None
    ) -> SimilarityGraph:
        reserved_rows = layer.reserved_rows if layer is not None else 1
        match = find_similar_patch(
            image, pos, self.params.window_radius, layer, reserved_rows=reserved_rows
        )
        return build_graph(match.patch, self.params.sigma_l, self.params.sigma_x)

    def predict(self, image: GrayImage, pos: Position, layer: Optional[LayerPlan] = None) -> int:
        y = ring_vector(image, pos)
        prediction = self.solve(y, self.graph_for(image, pos, layer))
        # within the ring range, like the rhombus mean
        lo, hi = (round_half_up(v * 255) for v in (y.min(), y.max()))
        return min(max(prediction, lo), hi)

    @abstractmethod
    def solve(self, y: np.ndarray, graph: SimilarityGraph) -> int:
        """Integer center prediction from ring observation y and the similarity graph."""
