from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from graphrdh.exceptions import (
    RdhBitStreamError,
    RdhMalformedStegoError,
    RdhSideInfoOverflowError,
    RdhThresholdDeltaOverflowError,
)
from graphrdh.image import BitStream
from graphrdh.tensor import TAU_CODE_BITS, TAU_MAX_CODE

MESSAGE_LENGTH_BITS = 20
TAU_DELTA_BITS = 8
LM_LENGTH_BITS = 12
LM_DELTA_BITS = 8
SIDE_INFO_BITS = (
    MESSAGE_LENGTH_BITS + TAU_CODE_BITS + 3 * TAU_DELTA_BITS + LM_LENGTH_BITS + 3 * LM_DELTA_BITS
)  # 89


def _fits_signed(value: int, width: int) -> bool:
    return -(1 << (width - 1)) <= value < 1 << (width - 1)


@dataclass(frozen=True)
class SideInfo:
    """
    Everything the extractor needs besides the stego image: the message length and the threshold
    code and compressed location map length of each layer. Serialized MSB-first into a fixed
    89 bit layout; layers 2 to 4 are stored as signed differences to the previous layer.
    """

    message_length: int
    tau_codes: Tuple[int, int, int, int]
    lm_lengths: Tuple[int, int, int, int]

    def __post_init__(self):
        object.__setattr__(self, "tau_codes", tuple(int(c) for c in self.tau_codes))
        object.__setattr__(self, "lm_lengths", tuple(int(n) for n in self.lm_lengths))
        if len(self.tau_codes) != 4 or len(self.lm_lengths) != 4:
            raise RdhSideInfoOverflowError("Side information describes exactly four layers")

    def to_bits(self) -> List[int]:
        if not 0 <= self.message_length < 1 << MESSAGE_LENGTH_BITS:
            raise RdhSideInfoOverflowError(
                f"Message length { self.message_length } exceeds { MESSAGE_LENGTH_BITS } bits"
            )
        if not 0 <= self.tau_codes[0] < 1 << TAU_CODE_BITS:
            raise RdhSideInfoOverflowError(f"Threshold code { self.tau_codes[0] } exceeds 9 bits")
        if not 0 <= self.lm_lengths[0] < 1 << LM_LENGTH_BITS:
            raise RdhSideInfoOverflowError(
                f"Location map length { self.lm_lengths[0] } exceeds { LM_LENGTH_BITS } bits"
            )
        stream = BitStream()
        stream.write_uint(self.message_length, MESSAGE_LENGTH_BITS)
        stream.write_uint(self.tau_codes[0], TAU_CODE_BITS)
        for i in range(1, 4):
            delta = self.tau_codes[i] - self.tau_codes[i - 1]
            if not _fits_signed(delta, TAU_DELTA_BITS):
                raise RdhThresholdDeltaOverflowError(
                    f"Threshold difference { delta / 100:.2f} between layers { i } and { i + 1 } "
                    f"doesn't fit into { TAU_DELTA_BITS } bits"
                )
            stream.write_int(delta, TAU_DELTA_BITS)
        stream.write_uint(self.lm_lengths[0], LM_LENGTH_BITS)
        for i in range(1, 4):
            delta = self.lm_lengths[i] - self.lm_lengths[i - 1]
            if not _fits_signed(delta, LM_DELTA_BITS):
                raise RdhSideInfoOverflowError(
                    f"Location map length difference { delta } between layers { i } and { i + 1 } "
                    f"doesn't fit into { LM_DELTA_BITS } bits"
                )
            stream.write_int(delta, LM_DELTA_BITS)
        return stream.bits

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "SideInfo":
        if len(bits) != SIDE_INFO_BITS:
            raise RdhMalformedStegoError(
                f"Side information must have { SIDE_INFO_BITS } bits, got { len(bits) }"
            )
        stream = BitStream(list(bits))
        message_length = stream.read_uint(MESSAGE_LENGTH_BITS)
        taus = [stream.read_uint(TAU_CODE_BITS)]
        for _ in range(3):
            taus.append(taus[-1] + stream.read_int(TAU_DELTA_BITS))
        lms = [stream.read_uint(LM_LENGTH_BITS)]
        for _ in range(3):
            lms.append(lms[-1] + stream.read_int(LM_DELTA_BITS))
        if any(not 0 <= t <= TAU_MAX_CODE for t in taus):
            raise RdhMalformedStegoError(f"Threshold codes { taus } outside of [0, 500]")
        if any(n < 0 for n in lms):
            raise RdhMalformedStegoError(f"Negative location map length in { lms }")
        return cls(message_length, tuple(taus), tuple(lms))

    @property
    def taus(self) -> Tuple[float, ...]:
        return tuple(c / 100 for c in self.tau_codes)


### Location map ###
def _elias_gamma(n: int) -> List[int]:
    binary = [int(b) for b in bin(n)[2:]]
    return [0] * (len(binary) - 1) + binary


@dataclass
class LocationMap:
    """
    One bit per boundary-valued layer pixel in processing order: 1 if the pixel was 0 or 255 and
    has been moved to 1 or 254, 0 if it was 1 or 254 already.
    """

    bits: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.bits)

    def compress(self) -> List[int]:
        """Run-length code: value of the first run, then Elias-gamma coded run lengths. The empty
        map compresses to the empty bit sequence."""
        if not self.bits:
            return []
        out = [self.bits[0]]
        run = 1
        for prev, bit in zip(self.bits, self.bits[1:]):
            if bit == prev:
                run += 1
            else:
                out.extend(_elias_gamma(run))
                run = 1
        out.extend(_elias_gamma(run))
        return out

    @classmethod
    def decompress(cls, data: Sequence[int]) -> "LocationMap":
        if len(data) == 0:
            return cls([])
        stream = BitStream(list(data))
        value = stream.read()
        bits: List[int] = []
        try:
            while not stream.exhausted():
                zeros = 0
                while stream.read() == 0:
                    zeros += 1
                run = 1
                for b in stream.read_bits(zeros):
                    run = (run << 1) | b
                bits.extend([value] * run)
                value ^= 1
        except RdhBitStreamError as e:
            raise RdhMalformedStegoError(f"Truncated location map: { e }") from e
        if not bits:
            raise RdhMalformedStegoError("Location map stream without runs")
        return cls(bits)
