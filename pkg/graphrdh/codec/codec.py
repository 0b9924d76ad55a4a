from dataclasses import dataclass, field
import logging
from typing import List, Sequence, Tuple, Union

import numpy as np

from graphrdh.codec.passes import (
    embed_layer,
    extract_layer,
    preprocess_layer_boundaries,
    restore_layer_boundaries,
)
from graphrdh.codec.sideinfo import SIDE_INFO_BITS, LocationMap, SideInfo
from graphrdh.exceptions import RdhCapacityUnreachableError, RdhImageTooSmallError
from graphrdh.image import BitStream, GrayImage, psnr
from graphrdh.layers import LayerPlan
from graphrdh.predictors.base import Predictor
from graphrdh.tensor import find_threshold, tau_from_code

logger = logging.getLogger(__name__)

MIN_WIDTH = SIDE_INFO_BITS
MIN_HEIGHT = 5
LAYER_COUNT = 4


@dataclass
class LayerReport:
    layer_index: int
    tau_code: int
    lm_entries: int
    lm_bits: int
    payload_bits: int
    gate_pixels: int
    embeddable_pixels: int

    @property
    def tau(self) -> float:
        return tau_from_code(self.tau_code)

    @property
    def capacity_bits(self) -> int:
        """Bits carried by the layer including its location map."""
        return self.lm_bits + self.payload_bits


@dataclass
class EmbedReport:
    predictor: str
    message_bits: int
    psnr: float
    side_info: SideInfo
    layers: List[LayerReport] = field(default_factory=list)

    @property
    def taus(self) -> Tuple[float, ...]:
        return tuple(layer.tau for layer in self.layers)

    @property
    def lm_sizes(self) -> Tuple[int, ...]:
        return tuple(layer.lm_bits for layer in self.layers)

    def render(self) -> str:
        from graphrdh.report import EmbedReportTemplate

        return EmbedReportTemplate().render(self)


def check_image_size(image: GrayImage) -> None:
    if image.width < MIN_WIDTH or image.height < MIN_HEIGHT:
        raise RdhImageTooSmallError(
            f"Image of size { image.width }x{ image.height } is too small, at least "
            f"{ MIN_WIDTH }x{ MIN_HEIGHT } pixels are required"
        )


def payload_quarters(n: int) -> List[int]:
    """Split n payload bits into four layer shares, the first n mod 4 layers carry one more."""
    return [n // LAYER_COUNT + (1 if i < n % LAYER_COUNT else 0) for i in range(LAYER_COUNT)]


def _row_lsbs(image: GrayImage) -> List[int]:
    return [int(v) & 1 for v in image.pixels[0, :SIDE_INFO_BITS]]


def _write_row_lsbs(image: GrayImage, bits: Sequence[int]) -> None:
    row = image.pixels[0, : len(bits)]
    row[:] = (row & 0xFE) | np.asarray(bits, dtype=np.uint8)


def embed(
    image: GrayImage,
    message: Union[BitStream, Sequence[int]],
    predictor: Predictor,
) -> Tuple[GrayImage, EmbedReport]:
    """
    Embed message into image. The payload, consisting of the first-row LSBs replaced by the side
    information followed by the message, is split into four quarters. Each layer carries its
    compressed location map followed by its quarter; its threshold is the smallest one at which a
    dry run on the current image state embeds the whole segment.
    """
    check_image_size(image)
    message_bits = list(message.bits if isinstance(message, BitStream) else message)
    payload = _row_lsbs(image) + message_bits
    quarters = payload_quarters(len(payload))

    work = image.copy()
    reports: List[LayerReport] = []
    offset = 0
    for layer, quarter in zip(LayerPlan.all_layers(image.height, image.width), quarters):
        work, lm = preprocess_layer_boundaries(work, layer)
        lm_bits = lm.compress()
        segment = lm_bits + payload[offset : offset + quarter]
        offset += quarter

        def dry_run(tau: float) -> int:
            return embed_layer(
                work, layer, tau, BitStream(segment), predictor, stop_when_exhausted=True
            ).bits_consumed

        try:
            threshold = find_threshold(len(segment), dry_run)
        except RdhCapacityUnreachableError as e:
            raise RdhCapacityUnreachableError(
                f"Layer { layer.layer_index } can't carry { len(segment) } bits: { e }"
            ) from e
        result = embed_layer(work, layer, threshold.tau, BitStream(segment), predictor)
        if result.bits_consumed < len(segment):
            raise RdhCapacityUnreachableError(
                f"Layer { layer.layer_index } embedded only { result.bits_consumed } of "
                f"{ len(segment) } bits"
            )
        work = result.image
        reports.append(
            LayerReport(
                layer.layer_index,
                threshold.code,
                len(lm),
                len(lm_bits),
                quarter,
                result.gate_pixels,
                result.embeddable_pixels,
            )
        )
        logger.info(
            "Layer %d: tau=%.2f, %d payload bits, %d location map bits",
            layer.layer_index,
            threshold.tau,
            quarter,
            len(lm_bits),
        )

    side_info = SideInfo(
        len(message_bits),
        tuple(r.tau_code for r in reports),
        tuple(r.lm_bits for r in reports),
    )
    _write_row_lsbs(work, side_info.to_bits())
    report = EmbedReport(predictor.name, len(message_bits), psnr(image, work), side_info, reports)
    logger.info("Embedded %d message bits, PSNR %.4f dB", len(message_bits), report.psnr)
    return work, report


def extract(stego: GrayImage, predictor: Predictor) -> Tuple[BitStream, GrayImage]:
    """Recover message and cover image from a stego image produced by embed."""
    check_image_size(stego)
    side_info = SideInfo.from_bits(_row_lsbs(stego))
    quarters = payload_quarters(SIDE_INFO_BITS + side_info.message_length)

    work = stego.copy()
    segments: List[List[int]] = [[] for _ in range(LAYER_COUNT)]
    for layer in reversed(LayerPlan.all_layers(stego.height, stego.width)):
        i = layer.layer_index - 1
        lm_len = side_info.lm_lengths[i]
        bits, work = extract_layer(
            work,
            layer,
            tau_from_code(side_info.tau_codes[i]),
            lm_len + quarters[i],
            predictor,
        )
        work = restore_layer_boundaries(work, layer, LocationMap.decompress(bits[:lm_len]))
        segments[i] = bits[lm_len:]
        logger.info("Layer %d: extracted %d payload bits", layer.layer_index, quarters[i])

    payload = [bit for segment in segments for bit in segment]
    _write_row_lsbs(work, payload[:SIDE_INFO_BITS])
    return BitStream(payload[SIDE_INFO_BITS:]), work
