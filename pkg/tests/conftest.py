import numpy as np
import pytest

from graphrdh.config import PredictorParams
from graphrdh.image import GrayImage, save_pgm


def smooth_pixels(height: int, width: int, seed: int = 0) -> np.ndarray:
    """Slowly varying intensities with a little noise, no values near 0 or 255."""
    rr, cc = np.meshgrid(np.arange(height), np.arange(width), indexing="ij")
    rng = np.random.default_rng(seed)
    f = 120 + 30 * np.sin(rr / 7) + 20 * np.cos(cc / 11) + rng.normal(0, 0.6, (height, width))
    return np.clip(np.round(f), 20, 235).astype(np.uint8)


@pytest.fixture
def smooth_image():
    return GrayImage(smooth_pixels(24, 96))


@pytest.fixture
def small_smooth_image():
    return GrayImage(smooth_pixels(8, 92, seed=3))


@pytest.fixture
def boundary_image():
    """Smooth image with saturated black and white stripes."""
    pixels = smooth_pixels(24, 96, seed=1)
    pixels[:, 30:38] = 0
    pixels[:, 60:66] = 255
    pixels[10:12, 70:80] = 1
    return GrayImage(pixels)


@pytest.fixture
def random_image():
    return GrayImage(np.random.default_rng(42).integers(0, 256, (16, 16), dtype=np.uint8))


@pytest.fixture
def fast_params():
    return PredictorParams(window=7)


@pytest.fixture
def fast_gtv_params():
    return PredictorParams(window=5, admm_max_iters=40, pg_max_iters=20)


@pytest.fixture
def cover_file(tmp_path):
    path = tmp_path / "cover.pgm"
    save_pgm(GrayImage(smooth_pixels(24, 96, seed=2)), path)
    return path
