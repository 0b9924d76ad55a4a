from dataclasses import dataclass
from pathlib import Path
from typing import Optional


@dataclass
class RdhImageLocation:
    """Describes an image file and optionally a pixel position inside it."""

    path: Path
    row: Optional[int] = None
    col: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.path, str):
            self.path = Path(self.path)

    def __str__(self):
        s = str(self.path)
        if self.row is not None:
            s += ":" + str(self.row)
            if self.col is not None:
                s += ":" + str(self.col)
        return s


class RdhError(ValueError):
    """Generic error and super-class of all graphrdh exceptions"""

    def __init__(self, *args, **kwargs):
        try:
            self.source = kwargs["source"]
            del kwargs["source"]
        except KeyError:
            self.source = None
        super().__init__(*args, **kwargs)

    def __str__(self):
        if self.source is not None:
            return super().__str__() + " in " + str(self.source)
        else:
            return super().__str__()

    def __eq__(self, other: object) -> bool:
        try:
            return (
                type(self) is type(other)
                and self.source == other.source
                and self.args == other.args
            )
        except AttributeError:
            return False

    def __hash__(self):
        return hash((type(self), self.args))


class RdhImageError(RdhError):
    """Error in image content or image file"""

    pass


class RdhPgmHeaderError(RdhImageError):
    """Malformed PGM header"""

    pass


class RdhMaxvalUnsupportedError(RdhImageError):
    """PGM maxval other than 255"""

    pass


class RdhTruncatedDataError(RdhImageError):
    """PGM raster shorter than announced by the header"""

    pass


class RdhDimensionMismatchError(RdhImageError):
    """Two images or arrays that must agree in shape don't"""

    pass


class RdhPixelValueError(RdhImageError):
    """Pixel intensity outside of [0, 255]"""

    pass


class RdhBitStreamError(RdhError):
    """Read past the end of a bit stream or invalid bit value"""

    pass


class RdhFootprintError(RdhError):
    """3x3 footprint of a pixel is not completely inside the image"""

    pass


class RdhConfigurationError(RdhError):
    """Invalid parameter or configuration document"""

    pass


class RdhSolveFailedError(RdhError):
    """Factorization of a system matrix detected a non-positive pivot"""

    pass


class RdhCapacityError(RdhError):
    """Payload doesn't fit into the cover image"""

    pass


class RdhCapacityUnreachableError(RdhCapacityError):
    """Even the largest gate threshold doesn't provide the required capacity"""

    pass


class RdhImageTooSmallError(RdhCapacityError):
    """Image can't hold side information or the four embedding layers"""

    pass


class RdhSideInfoOverflowError(RdhError):
    """A side information value doesn't fit into its bit field"""

    pass


class RdhThresholdDeltaOverflowError(RdhSideInfoOverflowError):
    """Difference between thresholds of consecutive layers doesn't fit into 8 bits"""

    pass


class RdhMalformedStegoError(RdhError):
    """Stego image can't be decoded consistently"""

    pass
