import numpy as np
import pytest

from graphrdh.exceptions import RdhFootprintError
from graphrdh.image import GrayImage
from graphrdh.layers import LayerPlan
from graphrdh.patches import ac_distance, find_similar_patch, ring_vector, self_match


def brute_force_match(image, pos, radius, layer=None, reserved_rows=1):
    r, c = pos
    target = ring_vector(image, pos)
    best = None
    for cr in range(r - radius, r + radius + 1):
        for cc in range(c - radius, c + radius + 1):
            if not (1 + reserved_rows <= cr <= image.height - 2 and 1 <= cc <= image.width - 2):
                continue
            if max(abs(cr - r), abs(cc - c)) <= 1:
                continue
            if layer is not None and (cr % 2, cc % 2) == layer.parity:
                continue
            d = ac_distance(target, ring_vector(image, (cr, cc)))
            if best is None or d < best[1] - 1e-12:
                best = ((cr, cc), d)
    return best


def test_ring_vector(random_image):
    ring = ring_vector(random_image, (3, 4))
    expected = np.delete(random_image.pixels[2:5, 3:6].ravel(), 4) / 255
    assert np.array_equal(ring, expected)
    assert len(ring) == 8


def test_ring_vector_footprint(random_image):
    with pytest.raises(RdhFootprintError):
        ring_vector(random_image, (0, 0))


def test_ac_distance_offset_invariant():
    a = np.linspace(0, 0.5, 8)
    assert ac_distance(a, a + 0.2) == pytest.approx(0.0, abs=1e-12)
    assert ac_distance(a, a[::-1]) > 0


@pytest.mark.parametrize("pos", [(5, 5), (2, 2), (13, 14), (8, 1)])
def test_find_similar_patch_matches_brute_force(random_image, pos):
    match = find_similar_patch(random_image, pos, window_radius=4)
    expected_center, expected_distance = brute_force_match(random_image, pos, 4)
    assert match.center == expected_center
    assert match.distance == pytest.approx(expected_distance, abs=1e-12)
    assert not match.self_match


def test_find_similar_patch_excludes_layer(random_image):
    layer = LayerPlan(1, random_image.height, random_image.width)
    match = find_similar_patch(random_image, (7, 7), window_radius=5, excluded_layer=layer)
    assert (match.center[0] % 2, match.center[1] % 2) != layer.parity
    assert match.center == brute_force_match(random_image, (7, 7), 5, layer)[0]


def test_find_similar_patch_never_overlaps_target(smooth_image):
    for pos in [(5, 10), (12, 40), (20, 90)]:
        match = find_similar_patch(smooth_image, pos, window_radius=3)
        assert max(abs(match.center[0] - pos[0]), abs(match.center[1] - pos[1])) >= 2
        assert match.center[0] >= 2


def test_find_similar_patch_finds_exact_copy():
    pixels = np.full((12, 12), 50, dtype=np.uint8)
    pixels[2:5, 2:5] = [[10, 20, 30], [40, 99, 60], [70, 80, 90]]
    pixels[7:10, 6:9] = [[10, 20, 30], [40, 5, 60], [70, 80, 90]]
    image = GrayImage(pixels)
    match = find_similar_patch(image, (8, 7), window_radius=6)
    assert match.center == (3, 3)
    assert match.distance == pytest.approx(0.0, abs=1e-12)
    assert match.patch.to_intensities()[4] == 99


def test_find_similar_patch_independent_of_target_value(smooth_image):
    pos = (10, 20)
    a = find_similar_patch(smooth_image, pos, window_radius=4)
    modified = smooth_image.copy()
    modified[pos] = modified[pos] + 1
    b = find_similar_patch(modified, pos, window_radius=4)
    assert a.center == b.center
    assert np.array_equal(a.patch.values, b.patch.values)


def test_self_match_fallback():
    image = GrayImage(np.arange(15, dtype=np.uint8).reshape(3, 5) * 10)
    match = find_similar_patch(image, (1, 2), window_radius=1, reserved_rows=0)
    assert match.self_match
    assert match.center == (1, 2)
    ring = ring_vector(image, (1, 2))
    assert match.patch.values[4] == pytest.approx(ring.mean())
    assert np.array_equal(self_match(image, (1, 2)).patch.values, match.patch.values)
