"""
Structure tensor smoothness gate. A pixel is "predictable" if the smaller eigenvalue of the
structure tensor of its 8-pixel ring is below the layer threshold tau. The center pixel is never
read, so the gate decision survives the modification of the center by embedding.
"""
from dataclasses import dataclass
import logging
import math
from typing import Callable, Dict

import numpy as np

from graphrdh.exceptions import RdhCapacityUnreachableError, RdhConfigurationError
from graphrdh.image import GrayImage, Position

logger = logging.getLogger(__name__)

TAU_QUANTUM = 0.01
TAU_MAX_CODE = 500  # tau range [0, 5]
TAU_CODE_BITS = 9

# (row offset, column offset) of the corner gradient samples
CORNERS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class StructureTensor:
    jxx: float
    jxy: float
    jyy: float

    def eigen_min(self) -> float:
        return eigen_min(self)


@dataclass(frozen=True)
class GateThreshold:
    """Threshold tau on the 0.01 grid. The code is what is transmitted in the side information."""

    code: int

    def __post_init__(self):
        if not 0 <= self.code < 1 << TAU_CODE_BITS:
            raise RdhConfigurationError(f"Threshold code { self.code } doesn't fit into 9 bits")

    @classmethod
    def from_tau(cls, tau: float) -> "GateThreshold":
        return cls(int(math.floor(tau / TAU_QUANTUM + 0.5)))

    @property
    def tau(self) -> float:
        return tau_from_code(self.code)


def tau_from_code(code: int) -> float:
    return code / 100


def _corner_gradients(v: Callable[[int, int], float], dr: int, dc: int):
    """One-sided differences at a corner toward the edge midpoints of its row and column, signed
    so that positive means increasing toward higher column (gx) or row (gy) index."""
    if dc < 0:
        gx = v(dr, 0) - v(dr, dc)
    else:
        gx = v(dr, dc) - v(dr, 0)
    if dr < 0:
        gy = v(0, dc) - v(dr, dc)
    else:
        gy = v(dr, dc) - v(0, dc)
    return gx, gy


def structure_tensor_at(image: GrayImage, pos: Position) -> StructureTensor:
    """Structure tensor of the 8-pixel ring around pos, intensities normalized to [0, 1]."""
    image.check_footprint(pos)
    r, c = pos

    def v(dr: int, dc: int) -> float:
        return float(image.pixels[r + dr, c + dc]) / 255

    jxx = jxy = jyy = 0.0
    for dr, dc in CORNERS:
        gx, gy = _corner_gradients(v, dr, dc)
        jxx += gx * gx
        jxy += gx * gy
        jyy += gy * gy
    return StructureTensor(jxx, jxy, jyy)


def eigen_min(t: StructureTensor) -> float:
    tr = t.jxx + t.jyy
    det = t.jxx * t.jyy - t.jxy * t.jxy
    disc = max(tr * tr - 4 * det, 0.0)
    return max((tr - math.sqrt(disc)) / 2, 0.0)


def is_predictable(image: GrayImage, pos: Position, tau: float) -> bool:
    return eigen_min(structure_tensor_at(image, pos)) < tau


def eigen_min_map(image: GrayImage) -> np.ndarray:
    """
    Smaller structure tensor eigenvalue for every pixel of the image with a complete footprint.
    Border pixels are set to +inf so that they never pass the gate. The accumulation order equals
    the one of structure_tensor_at().
    """
    f = image.normalized()
    h, w = f.shape
    out = np.full((h, w), np.inf)
    if h < 3 or w < 3:
        return out

    def v(dr: int, dc: int) -> np.ndarray:
        return f[1 + dr : h - 1 + dr, 1 + dc : w - 1 + dc]

    jxx = np.zeros((h - 2, w - 2))
    jxy = np.zeros((h - 2, w - 2))
    jyy = np.zeros((h - 2, w - 2))
    for dr, dc in CORNERS:
        gx, gy = _corner_gradients(v, dr, dc)
        jxx = jxx + gx * gx
        jxy = jxy + gx * gy
        jyy = jyy + gy * gy
    tr = jxx + jyy
    det = jxx * jyy - jxy * jxy
    disc = np.maximum(tr * tr - 4 * det, 0.0)
    out[1 : h - 1, 1 : w - 1] = np.maximum((tr - np.sqrt(disc)) / 2, 0.0)
    return out


def find_threshold(target_bits: int, dry_run: Callable[[float], int]) -> GateThreshold:
    """
    Binary search for the smallest threshold on the 0.01 grid in [0, 5] whose dry run embeds at
    least target_bits. dry_run(tau) must return the number of bits embeddable at threshold tau.
    Dry run results are cached, each code is evaluated at most once.
    """
    cache: Dict[int, int] = {}

    def bits_at(code: int) -> int:
        if code not in cache:
            cache[code] = dry_run(tau_from_code(code))
            logger.debug("tau=%.2f: %d of %d bits", tau_from_code(code), cache[code], target_bits)
        return cache[code]

    if bits_at(TAU_MAX_CODE) < target_bits:
        raise RdhCapacityUnreachableError(
            f"Only { cache[TAU_MAX_CODE] } of { target_bits } bits embeddable at tau=5.00"
        )
    lo, hi = 0, TAU_MAX_CODE
    while lo < hi:
        mid = (lo + hi) // 2
        if bits_at(mid) >= target_bits:
            hi = mid
        else:
            lo = mid + 1
    return GateThreshold(hi)
