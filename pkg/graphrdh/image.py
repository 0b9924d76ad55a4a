from dataclasses import dataclass, field
import math
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from graphrdh.exceptions import (
    RdhBitStreamError,
    RdhDimensionMismatchError,
    RdhFootprintError,
    RdhImageLocation,
    RdhMaxvalUnsupportedError,
    RdhPgmHeaderError,
    RdhPixelValueError,
    RdhTruncatedDataError,
)

Position = Tuple[int, int]

PSNR_IDENTICAL = math.inf  # returned by psnr() for identical images
PGM_MAXVAL = 255


@dataclass
class GrayImage:
    """
    8-bit grayscale image. Pixels are stored as (height, width) array of unsigned 8-bit integers
    in row-major order. Images are value objects: use copy() before handing an image to code that
    modifies it in place.
    """

    pixels: np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 2 or pixels.size == 0:
            raise RdhDimensionMismatchError(
                f"Image pixels must be a non-empty 2-dimensional array, got shape { pixels.shape }"
            )
        if pixels.dtype != np.uint8:
            if np.issubdtype(pixels.dtype, np.floating) and np.any(pixels != np.floor(pixels)):
                raise RdhPixelValueError("Pixel intensities must be integral")
            if np.any(pixels < 0) or np.any(pixels > 255):
                raise RdhPixelValueError("Pixel intensities must be in [0, 255]")
            pixels = pixels.astype(np.uint8)
        self.pixels = pixels

    @classmethod
    def from_list(cls, width: int, height: int, values: Sequence[int]) -> "GrayImage":
        """Create image from row-major list of intensities."""
        if len(values) != width * height:
            raise RdhDimensionMismatchError(
                f"Expected { width * height } pixel values for { width }x{ height } image, "
                f"got { len(values) }"
            )
        return cls(np.asarray(values, dtype=np.int64).reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def to_list(self) -> List[int]:
        return [int(v) for v in self.pixels.ravel()]

    def copy(self) -> "GrayImage":
        return GrayImage(self.pixels.copy())

    def normalized(self) -> np.ndarray:
        """Intensities divided by 255 as float array."""
        return self.pixels.astype(np.float64) / PGM_MAXVAL

    def has_footprint(self, pos: Position) -> bool:
        """Returns True if the 3x3 footprint centered at pos is completely inside the image."""
        r, c = pos
        return 1 <= r <= self.height - 2 and 1 <= c <= self.width - 2

    def check_footprint(self, pos: Position) -> None:
        if not self.has_footprint(pos):
            raise RdhFootprintError(
                f"3x3 footprint of pixel { pos } exceeds { self.width }x{ self.height } image"
            )

    def __getitem__(self, pos: Position) -> int:
        return int(self.pixels[pos])

    def __setitem__(self, pos: Position, value: int) -> None:
        if not 0 <= value <= 255:
            raise RdhPixelValueError(f"Pixel value { value } at { pos } outside of [0, 255]")
        self.pixels[pos] = value

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )


@dataclass(eq=False)
class NormalizedPatch:
    """3x3 patch with intensities scaled to [0, 1], row-major."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).reshape(9)

    @classmethod
    def from_image(cls, image: GrayImage, pos: Position) -> "NormalizedPatch":
        image.check_footprint(pos)
        r, c = pos
        return cls(image.pixels[r - 1 : r + 2, c - 1 : c + 2].astype(np.float64) / PGM_MAXVAL)

    def to_intensities(self) -> np.ndarray:
        return np.floor(self.values * PGM_MAXVAL + 0.5).astype(np.int64)

    def grid(self) -> np.ndarray:
        return self.values.reshape(3, 3)


@dataclass
class BitStream:
    """Ordered bit sequence with a read cursor."""

    bits: List[int] = field(default_factory=list)
    cursor: int = 0

    def __post_init__(self):
        self.bits = [int(b) for b in self.bits]
        if any(b not in (0, 1) for b in self.bits):
            raise RdhBitStreamError("Bit streams may only contain 0 and 1")

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitStream":
        """Bits of data, most significant bit of each byte first."""
        return cls([(byte >> (7 - i)) & 1 for byte in data for i in range(8)])

    def to_bytes(self) -> bytes:
        """Pack bits MSB-first, the last byte is padded with zero bits."""
        out = bytearray()
        for i in range(0, len(self.bits), 8):
            chunk = self.bits[i : i + 8]
            chunk = chunk + [0] * (8 - len(chunk))
            out.append(int("".join(str(b) for b in chunk), 2))
        return bytes(out)

    def to_text(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self):
        return iter(self.bits)

    @property
    def remaining(self) -> int:
        return len(self.bits) - self.cursor

    def exhausted(self) -> bool:
        return self.cursor >= len(self.bits)

    def read(self) -> int:
        if self.cursor >= len(self.bits):
            raise RdhBitStreamError(f"Read past end of bit stream of length { len(self.bits) }")
        bit = self.bits[self.cursor]
        self.cursor += 1
        return bit

    def read_bits(self, n: int) -> List[int]:
        if n > self.remaining:
            raise RdhBitStreamError(
                f"Attempt to read { n } bits with only { self.remaining } bits remaining"
            )
        bits = self.bits[self.cursor : self.cursor + n]
        self.cursor += n
        return bits

    def read_uint(self, width: int) -> int:
        """Read unsigned integer of width bits, MSB first."""
        value = 0
        for b in self.read_bits(width):
            value = (value << 1) | b
        return value

    def read_int(self, width: int) -> int:
        """Read two's-complement signed integer of width bits."""
        value = self.read_uint(width)
        if value >= 1 << (width - 1):
            value -= 1 << width
        return value

    def write(self, bits: Iterable[int]) -> None:
        for b in bits:
            if b not in (0, 1):
                raise RdhBitStreamError(f"Invalid bit value { b }")
            self.bits.append(int(b))

    def write_uint(self, value: int, width: int) -> None:
        if not 0 <= value < 1 << width:
            raise RdhBitStreamError(f"Value { value } doesn't fit into { width } unsigned bits")
        self.write((value >> (width - 1 - i)) & 1 for i in range(width))

    def write_int(self, value: int, width: int) -> None:
        if not -(1 << (width - 1)) <= value < 1 << (width - 1):
            raise RdhBitStreamError(f"Value { value } doesn't fit into { width } signed bits")
        self.write_uint(value & ((1 << width) - 1), width)


### PGM I/O ###
def _header_tokens(data: bytes, path: Union[str, Path]) -> Tuple[List[bytes], int]:
    """Split PGM header into magic number, width, height and maxval. Returns tokens and offset of
    the first raster byte."""
    tokens: List[bytes] = []
    pos = 0
    n = len(data)
    while len(tokens) < 4:
        while pos < n and data[pos : pos + 1].isspace():
            pos += 1
        if pos < n and data[pos : pos + 1] == b"#":  # comment runs until end of line
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise RdhPgmHeaderError("Unexpected end of PGM header", source=RdhImageLocation(path))
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[start:pos])
    if pos >= n or not data[pos : pos + 1].isspace():
        raise RdhPgmHeaderError(
            "PGM header must be terminated by whitespace", source=RdhImageLocation(path)
        )
    return tokens, pos + 1


def load_pgm(path: Union[str, Path]) -> GrayImage:
    """Load binary (P5) or ASCII (P2) PGM file with maxval 255 without any value scaling."""
    data = Path(path).read_bytes()
    tokens, offset = _header_tokens(data, path)
    magic = tokens[0]
    if magic not in (b"P5", b"P2"):
        raise RdhPgmHeaderError(
            f"Unsupported magic number '{ magic.decode(errors='replace') }'",
            source=RdhImageLocation(path),
        )
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
    except ValueError:
        raise RdhPgmHeaderError("Non-numeric PGM header field", source=RdhImageLocation(path))
    if width <= 0 or height <= 0:
        raise RdhPgmHeaderError(
            f"Invalid image dimensions { width }x{ height }", source=RdhImageLocation(path)
        )
    if maxval != PGM_MAXVAL:
        raise RdhMaxvalUnsupportedError(
            f"PGM maxval { maxval } not supported, only 255", source=RdhImageLocation(path)
        )

    count = width * height
    if magic == b"P5":
        raster = data[offset : offset + count]
        if len(raster) < count:
            raise RdhTruncatedDataError(
                f"Expected { count } raster bytes, got { len(raster) }",
                source=RdhImageLocation(path),
            )
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        fields = data[offset:].split()
        if len(fields) < count:
            raise RdhTruncatedDataError(
                f"Expected { count } ASCII samples, got { len(fields) }",
                source=RdhImageLocation(path),
            )
        try:
            values = np.array([int(f) for f in fields[:count]], dtype=np.int64)
        except ValueError:
            raise RdhPgmHeaderError("Non-numeric ASCII sample", source=RdhImageLocation(path))
        if np.any(values < 0) or np.any(values > PGM_MAXVAL):
            raise RdhPixelValueError(
                "ASCII sample exceeds maxval 255", source=RdhImageLocation(path)
            )
    return GrayImage(values.reshape(height, width).astype(np.uint8))


def save_pgm(image: GrayImage, path: Union[str, Path], ascii: bool = False) -> None:
    """Write image as binary (default) or ASCII PGM with maxval 255."""
    if ascii:
        rows = "\n".join(" ".join(str(int(v)) for v in row) for row in image.pixels)
        content = f"P2\n{ image.width } { image.height }\n{ PGM_MAXVAL }\n{ rows }\n".encode()
    else:
        header = f"P5\n{ image.width } { image.height }\n{ PGM_MAXVAL }\n".encode()
        content = header + image.pixels.astype(np.uint8).tobytes()
    Path(path).write_bytes(content)


### Metrics ###
def mse(a: GrayImage, b: GrayImage) -> float:
    if a.pixels.shape != b.pixels.shape:
        raise RdhDimensionMismatchError(
            f"Image dimensions differ: { a.width }x{ a.height } vs { b.width }x{ b.height }"
        )
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return float(np.mean(diff * diff))


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal to noise ratio in dB. Identical images yield PSNR_IDENTICAL (+inf)."""
    error = mse(a, b)
    if error == 0:
        return PSNR_IDENTICAL
    return 10 * math.log10(PGM_MAXVAL**2 / error)


def max_abs_difference(a: GrayImage, b: GrayImage) -> int:
    if a.pixels.shape != b.pixels.shape:
        raise RdhDimensionMismatchError("Image dimensions differ")
    return int(np.max(np.abs(a.pixels.astype(np.int64) - b.pixels.astype(np.int64))))
