import numpy as np
import pytest

from graphrdh.codec import SIDE_INFO_BITS, LocationMap, SideInfo
from graphrdh.exceptions import (
    RdhMalformedStegoError,
    RdhSideInfoOverflowError,
    RdhThresholdDeltaOverflowError,
)
from graphrdh.image import BitStream


def random_side_info(rng):
    taus = [int(rng.integers(0, 501))]
    lms = [int(rng.integers(0, 4096))]
    for _ in range(3):
        taus.append(int(rng.integers(max(0, taus[-1] - 128), min(500, taus[-1] + 127) + 1)))
        lms.append(int(rng.integers(max(0, lms[-1] - 128), min(4095, lms[-1] + 127) + 1)))
    return SideInfo(int(rng.integers(0, 1 << 20)), tuple(taus), tuple(lms))


def test_side_info_size():
    assert SIDE_INFO_BITS == 89
    bits = SideInfo(0, (0, 0, 0, 0), (0, 0, 0, 0)).to_bits()
    assert bits == [0] * 89


def test_side_info_layout():
    info = SideInfo(5, (11, 14, 16, 18), (100, 90, 90, 92))
    stream = BitStream(info.to_bits())
    assert stream.read_uint(20) == 5
    assert stream.read_uint(9) == 11
    assert [stream.read_int(8) for _ in range(3)] == [3, 2, 2]
    assert stream.read_uint(12) == 100
    assert [stream.read_int(8) for _ in range(3)] == [-10, 0, 2]
    assert stream.exhausted()
    assert info.taus == (0.11, 0.14, 0.16, 0.18)


def test_side_info_roundtrip_random():
    rng = np.random.default_rng(0)
    for _ in range(10000):
        info = random_side_info(rng)
        assert SideInfo.from_bits(info.to_bits()) == info


@pytest.mark.parametrize(
    "info,error",
    [
        (SideInfo(1 << 20, (0, 0, 0, 0), (0, 0, 0, 0)), RdhSideInfoOverflowError),
        (SideInfo(0, (0, 200, 200, 200), (0, 0, 0, 0)), RdhThresholdDeltaOverflowError),
        (SideInfo(0, (300, 100, 100, 100), (0, 0, 0, 0)), RdhThresholdDeltaOverflowError),
        (SideInfo(0, (0, 0, 0, 0), (4096, 4096, 4096, 4096)), RdhSideInfoOverflowError),
        (SideInfo(0, (0, 0, 0, 0), (0, 128, 128, 128)), RdhSideInfoOverflowError),
    ],
)
def test_side_info_overflow(info, error):
    with pytest.raises(error):
        info.to_bits()


def test_side_info_wrong_length():
    with pytest.raises(RdhMalformedStegoError):
        SideInfo.from_bits([0] * 88)


def test_side_info_malformed_tau():
    stream = BitStream()
    stream.write_uint(0, 20)
    stream.write_uint(500, 9)
    stream.write_int(100, 8)
    stream.write_int(0, 8)
    stream.write_int(0, 8)
    stream.write_uint(0, 12)
    for _ in range(3):
        stream.write_int(0, 8)
    with pytest.raises(RdhMalformedStegoError, match="outside"):
        SideInfo.from_bits(stream.bits)


def test_side_info_malformed_lm_length():
    stream = BitStream()
    stream.write_uint(0, 20)
    stream.write_uint(0, 9)
    for _ in range(3):
        stream.write_int(0, 8)
    stream.write_uint(3, 12)
    stream.write_int(-4, 8)
    stream.write_int(0, 8)
    stream.write_int(0, 8)
    with pytest.raises(RdhMalformedStegoError, match="Negative"):
        SideInfo.from_bits(stream.bits)


@pytest.mark.parametrize(
    "bits,compressed",
    [
        ([], []),
        ([1], [1, 1]),
        ([1, 0, 1], [1, 1, 1, 1]),
        ([0, 0, 0, 1], [0, 0, 1, 1, 1]),
        ([1, 1, 1, 1, 1], [1, 0, 0, 1, 0, 1]),
    ],
)
def test_location_map_compress(bits, compressed):
    assert LocationMap(bits).compress() == compressed
    assert LocationMap.decompress(compressed) == LocationMap(bits)


def test_location_map_roundtrip_random():
    rng = np.random.default_rng(1)
    for _ in range(10000):
        n = int(rng.integers(0, 200))
        bits = (rng.random(n) < rng.choice([0.02, 0.1, 0.5, 0.95])).astype(int).tolist()
        lm = LocationMap(bits)
        assert LocationMap.decompress(lm.compress()).bits == bits


@pytest.mark.parametrize("compressed", [[1], [1, 0, 0, 1], [0, 0, 0]])
def test_location_map_truncated(compressed):
    with pytest.raises(RdhMalformedStegoError):
        LocationMap.decompress(compressed)
