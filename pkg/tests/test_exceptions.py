from pathlib import Path
import re

import pytest

from graphrdh.exceptions import (
    RdhCapacityError,
    RdhCapacityUnreachableError,
    RdhError,
    RdhImageLocation,
    RdhImageTooSmallError,
    RdhPgmHeaderError,
    RdhSideInfoOverflowError,
    RdhThresholdDeltaOverflowError,
)


@pytest.fixture
def image_path():
    return Path("/path/to/cover.pgm")


def test_location_pathify():
    assert RdhImageLocation("cover.pgm") == RdhImageLocation(Path("cover.pgm"))


def test_location_file(image_path):
    locstr = str(RdhImageLocation(image_path))
    assert locstr == "/path/to/cover.pgm" or locstr.endswith("\\path\\to\\cover.pgm")


def test_location_with_pixel(image_path):
    locstr = str(RdhImageLocation(image_path, 3, 7))
    assert locstr == "/path/to/cover.pgm:3:7" or locstr.endswith("\\path\\to\\cover.pgm:3:7")


def test_exception_with_location(image_path):
    errstr = str(RdhPgmHeaderError("Bad magic", source=RdhImageLocation(image_path)))
    assert errstr == "Bad magic in /path/to/cover.pgm" or re.match(
        "Bad magic in \\w:\\\\path\\\\to\\\\cover.pgm", errstr
    )


def test_exception_equalness():
    assert RdhError("A") == RdhError("A")


def test_exception_unequalness_same_type():
    assert RdhError("A") != RdhError("B")


def test_exception_unequalness_different_type():
    assert RdhError("A") != RdhCapacityError("A")


def test_exception_unequalness_different_source(image_path):
    assert RdhError("A", source=RdhImageLocation(image_path)) != RdhError("A")


def test_exception_unequalness_other_type():
    assert RdhError("A") != ValueError("A")


@pytest.mark.parametrize(
    "error,base",
    [
        (RdhCapacityUnreachableError, RdhCapacityError),
        (RdhImageTooSmallError, RdhCapacityError),
        (RdhThresholdDeltaOverflowError, RdhSideInfoOverflowError),
        (RdhError, ValueError),
    ],
)
def test_exception_hierarchy(error, base):
    assert issubclass(error, base)
