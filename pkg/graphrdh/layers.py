from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

import numpy as np

from graphrdh.exceptions import RdhConfigurationError
from graphrdh.image import Position

# (row parity, column parity) of the four embedding layers
LAYER_PARITIES: Dict[int, Tuple[int, int]] = {
    1: (1, 1),
    2: (1, 0),
    3: (0, 1),
    4: (0, 0),
}
RESERVED_ROWS = 1  # first image row carries the side information


@dataclass(frozen=True)
class LayerPlan:
    """
    Candidate pixels of one embedding layer: all pixels of one 2x2 parity coset whose 3x3
    footprint is inside the image and doesn't touch the reserved rows. The embedder visits them in
    row-major order, the extractor in reverse row-major order.
    """

    layer_index: int
    height: int
    width: int
    reserved_rows: int = RESERVED_ROWS

    def __post_init__(self):
        if self.layer_index not in LAYER_PARITIES:
            raise RdhConfigurationError(f"Layer index must be 1..4, not { self.layer_index }")

    @classmethod
    def all_layers(
        cls, height: int, width: int, reserved_rows: int = RESERVED_ROWS
    ) -> List["LayerPlan"]:
        return [cls(i, height, width, reserved_rows) for i in sorted(LAYER_PARITIES)]

    @property
    def parity(self) -> Tuple[int, int]:
        return LAYER_PARITIES[self.layer_index]

    @property
    def first_row(self) -> int:
        return self.reserved_rows + 1

    def rows(self) -> range:
        start = self.first_row + (self.first_row - self.parity[0]) % 2
        return range(start, self.height - 1, 2)

    def cols(self) -> range:
        start = 1 + (1 - self.parity[1]) % 2
        return range(start, self.width - 1, 2)

    def pixels(self) -> List[Position]:
        """Layer pixels in processing (row-major) order."""
        return [(r, c) for r in self.rows() for c in self.cols()]

    def __iter__(self) -> Iterator[Position]:
        return iter(self.pixels())

    def __len__(self) -> int:
        return len(self.rows()) * len(self.cols())

    def __contains__(self, pos: object) -> bool:
        if not isinstance(pos, tuple) or len(pos) != 2:
            return False
        r, c = pos
        return r in self.rows() and c in self.cols()

    def mask(self) -> np.ndarray:
        """Boolean (height, width) mask of the layer pixels."""
        m = np.zeros((self.height, self.width), dtype=bool)
        rows, cols = self.rows(), self.cols()
        if len(rows) and len(cols):
            m[rows.start : rows.stop : 2, cols.start : cols.stop : 2] = True
        return m
