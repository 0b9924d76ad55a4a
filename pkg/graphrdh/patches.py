"""
Semi-local search for the patch whose ring is most similar to the ring of a target pixel. The
matched 3x3 patch defines the edge weights of the prediction graph.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from graphrdh.image import GrayImage, NormalizedPatch, Position
from graphrdh.layers import LayerPlan

DEFAULT_WINDOW_RADIUS = 15  # 31x31 window
RING_OFFSETS: Tuple[Tuple[int, int], ...] = tuple(
    (dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if (dr, dc) != (0, 0)
)


def ring_vector(image: GrayImage, pos: Position) -> np.ndarray:
    """The 8 normalized ring intensities around pos in row-major order, center skipped."""
    image.check_footprint(pos)
    r, c = pos
    ring = [image.pixels[r + dr, c + dc] for dr, dc in RING_OFFSETS]
    return np.array(ring, dtype=np.float64) / 255


def ac_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Euclidean distance of the mean-removed ring vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = (a - a.mean()) - (b - b.mean())
    return float(np.sqrt(np.sum(d * d)))


@dataclass(eq=False)
class MatchResult:
    center: Position
    distance: float
    patch: NormalizedPatch
    self_match: bool = False


def self_match(image: GrayImage, pos: Position) -> MatchResult:
    """Fallback if no candidate exists: the target ring with its center filled by the ring mean."""
    ring = ring_vector(image, pos)
    values = np.insert(ring, 4, ring.mean())
    return MatchResult(pos, 0.0, NormalizedPatch(values), self_match=True)


def find_similar_patch(
    image: GrayImage,
    pos: Position,
    window_radius: int = DEFAULT_WINDOW_RADIUS,
    excluded_layer: Optional[LayerPlan] = None,
    reserved_rows: int = 1,
) -> MatchResult:
    """
    Exhaustive scan of all candidate centers in the (clipped) window around pos for the ring with
    minimal mean-removed distance to the target ring. Candidates are excluded if:

    * their footprint leaves the image or touches the first reserved_rows rows,
    * their footprint contains the target pixel itself,
    * they belong to excluded_layer, the layer currently being processed.

    Ties are resolved in favour of the first candidate in row-major order.
    """
    image.check_footprint(pos)
    r, c = pos
    h, w = image.height, image.width
    r0 = max(r - window_radius, 1 + reserved_rows)
    r1 = min(r + window_radius, h - 2)
    c0 = max(c - window_radius, 1)
    c1 = min(c + window_radius, w - 2)
    if r0 > r1 or c0 > c1:
        return self_match(image, pos)

    # window plus a one pixel margin for the candidate rings
    f = image.pixels[r0 - 1 : r1 + 2, c0 - 1 : c1 + 2].astype(np.float64) / 255
    rows = r1 - r0 + 1
    cols = c1 - c0 + 1
    rings = np.stack(
        [f[1 + dr : 1 + rows + dr, 1 + dc : 1 + cols + dc] for dr, dc in RING_OFFSETS], axis=-1
    )
    target = ring_vector(image, pos)
    target_ac = target - target.mean()
    ac = rings - rings.mean(axis=-1, keepdims=True)
    diff = ac - target_ac
    dist = np.sqrt(np.sum(diff * diff, axis=-1))

    rr, cc = np.meshgrid(np.arange(r0, r1 + 1), np.arange(c0, c1 + 1), indexing="ij")
    invalid = (np.abs(rr - r) <= 1) & (np.abs(cc - c) <= 1)
    if excluded_layer is not None:
        pr, pc = excluded_layer.parity
        invalid |= (rr % 2 == pr) & (cc % 2 == pc)
    dist = np.where(invalid, np.inf, dist)
    if not np.isfinite(dist).any():
        return self_match(image, pos)

    best = int(np.argmin(dist))  # first minimum in row-major order
    br, bc = divmod(best, cols)
    center = (r0 + br, c0 + bc)
    return MatchResult(center, float(dist[br, bc]), NormalizedPatch.from_image(image, center))
