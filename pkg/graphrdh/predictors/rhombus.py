"""
Rhombus baseline: the center is predicted as the mean of its four nearest neighbors, the gate
value is the local variance of these neighbors. This is an approximation of the sorting-based
rhombus scheme, used as reference in capacity/distortion comparisons.
"""
from dataclasses import dataclass
from typing import ClassVar, Optional

import numpy as np

from graphrdh.exceptions import RdhFootprintError
from graphrdh.image import GrayImage, Position
from graphrdh.layers import LayerPlan
from graphrdh.predictors.base import Predictor

RHOMBUS_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))  # up, down, left, right
VARIANCE_SCALE = 100.0  # raw intensity variance per threshold unit


def _neighbors(image: GrayImage, pos: Position) -> np.ndarray:
    r, c = pos
    if not (1 <= r <= image.height - 2 and 1 <= c <= image.width - 2):
        raise RdhFootprintError(f"Rhombus neighborhood of { pos } exceeds image")
    return np.array([int(image.pixels[r + dr, c + dc]) for dr, dc in RHOMBUS_OFFSETS])


def rhombus_predict(image: GrayImage, pos: Position) -> int:
    """Mean of the four nearest neighbors, rounded half up."""
    return (int(_neighbors(image, pos).sum()) + 2) // 4


def rhombus_complexity(image: GrayImage, pos: Position) -> float:
    n = _neighbors(image, pos).astype(np.float64)
    return float(np.mean((n - n.mean()) ** 2)) / VARIANCE_SCALE


@dataclass
class RhombusPredictor(Predictor):
    name: ClassVar[str] = "rhombus"

    def complexity(self, image: GrayImage, pos: Position) -> float:
        return rhombus_complexity(image, pos)

    def complexity_map(self, image: GrayImage) -> np.ndarray:
        f = image.pixels.astype(np.float64)
        h, w = f.shape
        out = np.full((h, w), np.inf)
        if h < 3 or w < 3:
            return out
        n = np.stack([f[1 + dr : h - 1 + dr, 1 + dc : w - 1 + dc] for dr, dc in RHOMBUS_OFFSETS])
        out[1 : h - 1, 1 : w - 1] = np.mean((n - n.mean(axis=0)) ** 2, axis=0) / VARIANCE_SCALE
        return out

    def predict(self, image: GrayImage, pos: Position, layer: Optional[LayerPlan] = None) -> int:
        return rhombus_predict(image, pos)
