"""
Single-layer passes of the codec. The embedding pass visits the layer pixels in row-major order,
the extraction pass in reverse row-major order. At the time a pixel is visited, all other pixels
of the image are in the same state in both passes, which makes gate decisions and predictions
identical.
"""
from dataclasses import dataclass
import logging
from typing import List, Tuple

import numpy as np

from graphrdh.codec.mapping import is_embeddable, map_error_embed, map_error_extract
from graphrdh.codec.sideinfo import LocationMap
from graphrdh.exceptions import RdhMalformedStegoError
from graphrdh.image import BitStream, GrayImage
from graphrdh.layers import LayerPlan
from graphrdh.patches import RING_OFFSETS
from graphrdh.predictors.base import Predictor

logger = logging.getLogger(__name__)

BOUNDARY_SHIFTS = {0: 1, 255: 254}
BOUNDARY_MARKED = (1, 254)
# ring values a gate-passing pixel may see
RING_MIN, RING_MAX = 2, 253


def boundary_guard_map(image: GrayImage) -> np.ndarray:
    """
    True for pixels with complete footprint whose 8-pixel ring lies within [2, 253]. Predictions
    of such pixels lie within the same range, so a pixel moved by boundary preprocessing is only
    ever modified back toward its original value and no pixel changes by more than 1.
    """
    f = image.pixels
    h, w = f.shape
    out = np.zeros((h, w), dtype=bool)
    if h < 3 or w < 3:
        return out
    ring = np.stack([f[1 + dr : h - 1 + dr, 1 + dc : w - 1 + dc] for dr, dc in RING_OFFSETS])
    out[1 : h - 1, 1 : w - 1] = (ring.min(axis=0) >= RING_MIN) & (ring.max(axis=0) <= RING_MAX)
    return out


def layer_gate_map(image: GrayImage, predictor: Predictor) -> np.ndarray:
    """Gate values of the predictor, +inf for pixels next to near-saturated values."""
    return np.where(boundary_guard_map(image), predictor.complexity_map(image), np.inf)


def preprocess_layer_boundaries(
    image: GrayImage, layer: LayerPlan
) -> Tuple[GrayImage, LocationMap]:
    """Move 0 to 1 and 255 to 254 on the layer pixels and record the moves in a location map."""
    out = image.copy()
    lm = LocationMap()
    for pos in layer:
        value = out[pos]
        if value in BOUNDARY_SHIFTS:
            out[pos] = BOUNDARY_SHIFTS[value]
            lm.bits.append(1)
        elif value in BOUNDARY_MARKED:
            lm.bits.append(0)
    return out, lm


def restore_layer_boundaries(image: GrayImage, layer: LayerPlan, lm: LocationMap) -> GrayImage:
    """Inverse of preprocess_layer_boundaries."""
    out = image.copy()
    marked = [pos for pos in layer if out[pos] in BOUNDARY_MARKED]
    if len(marked) != len(lm):
        raise RdhMalformedStegoError(
            f"Location map of layer { layer.layer_index } has { len(lm) } entries, but the layer "
            f"contains { len(marked) } boundary pixels"
        )
    for pos, bit in zip(marked, lm.bits):
        if bit:
            out[pos] = 0 if out[pos] == 1 else 255
    return out


@dataclass
class LayerPassResult:
    image: GrayImage
    bits_consumed: int = 0
    gate_pixels: int = 0
    embeddable_pixels: int = 0


def embed_layer(
    image: GrayImage,
    layer: LayerPlan,
    tau: float,
    bits: BitStream,
    predictor: Predictor,
    stop_when_exhausted: bool = False,
) -> LayerPassResult:
    """
    Embed bits from the stream into the gate-passing pixels of the layer. Bits are consumed from
    pixels with prediction error 0 or -1. After the stream is exhausted such pixels carry a 0
    bit, all other gate-passing pixels are shifted. With stop_when_exhausted the pass ends as soon
    as the last bit has been embedded, which is what threshold dry runs need.
    """
    result = LayerPassResult(image.copy())
    work = result.image
    if stop_when_exhausted and bits.exhausted():
        return result
    gates = layer_gate_map(work, predictor)
    for pos in layer:
        if not gates[pos] < tau:
            continue
        result.gate_pixels += 1
        value = work[pos]
        e = value - predictor.predict(work, pos, layer)
        bit = 0
        if is_embeddable(e):
            result.embeddable_pixels += 1
            if not bits.exhausted():
                bit = bits.read()
                result.bits_consumed += 1
        work[pos] = value + map_error_embed(e, bit) - e
        if stop_when_exhausted and bits.exhausted():
            break
    logger.debug(
        "layer %d, tau=%.2f: %d gate pixels, %d embeddable, %d bits",
        layer.layer_index,
        tau,
        result.gate_pixels,
        result.embeddable_pixels,
        result.bits_consumed,
    )
    return result


def extract_layer(
    image: GrayImage,
    layer: LayerPlan,
    tau: float,
    expected_bits: int,
    predictor: Predictor,
) -> Tuple[List[int], GrayImage]:
    """
    Inverse of embed_layer: returns the first expected_bits embedded bits in stream order and the
    image with the layer restored.
    """
    work = image.copy()
    gates = layer_gate_map(work, predictor)
    collected: List[int] = []
    for pos in reversed(layer.pixels()):
        if not gates[pos] < tau:
            continue
        value = work[pos]
        e_stego = value - predictor.predict(work, pos, layer)
        e, bit = map_error_extract(e_stego)
        restored = value - e_stego + e
        if not 0 <= restored <= 255:
            raise RdhMalformedStegoError(
                f"Restored value { restored } of pixel { pos } in layer { layer.layer_index } is "
                "outside of the 8-bit range"
            )
        work[pos] = restored
        if bit is not None:
            collected.append(bit)
    if len(collected) < expected_bits:
        raise RdhMalformedStegoError(
            f"Layer { layer.layer_index } carries { len(collected) } bits, "
            f"expected { expected_bits }"
        )
    collected.reverse()
    return collected[:expected_bits], work
