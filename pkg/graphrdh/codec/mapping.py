"""
Prediction error expansion with maximum modification 1: errors 0 and -1 are expanded to carry one
bit, all other errors are shifted outwards by one.
"""
from typing import Optional, Tuple


def is_embeddable(e: int) -> bool:
    return e in (0, -1)


def map_error_embed(e: int, bit: int = 0) -> int:
    """Stego prediction error for original error e. bit is only used if e is embeddable."""
    if e == 0:
        return bit
    if e == -1:
        return -1 - bit
    if e >= 1:
        return e + 1
    return e - 1


def map_error_extract(e_stego: int) -> Tuple[int, Optional[int]]:
    """Original prediction error and embedded bit (None for shifted errors)."""
    if e_stego in (0, 1):
        return 0, e_stego
    if e_stego in (-1, -2):
        return -1, -1 - e_stego
    if e_stego >= 2:
        return e_stego - 1, None
    return e_stego + 1, None
