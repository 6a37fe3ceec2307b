import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from insideness import (
    CURVE,
    INSIDE,
    OUTSIDE,
    BinaryImage,
    InsidenessMask,
    InvalidCurveError,
    flood_fill_outside,
    horizontal_crossings,
    masks_equal_on_background,
    per_image_accuracy,
    ray_parity_insideness,
)
from insideness.oracles import outside_region_4connected


def brute_force_crossings(img):
    """Direct evaluation of the crossing definition, independent of numpy."""
    h, w = img.shape
    counts = np.zeros((h, w), dtype=np.int64)
    px = img.pixels
    for i in range(h):
        for j in range(w):
            total = 0
            for v in range(j, w):
                below = px[i + 1, v] if i + 1 < h else 0
                total += int(px[i, v]) * int(below)
            counts[i, j] = total
    return counts


class TestFloodFill:
    def test_ring_single_inside(self, ring5):
        mask = flood_fill_outside(ring5)
        assert mask.inside_pixels() == ((2, 2),)
        assert mask.curve_pixels() == tuple(ring5.one_pixels())

    def test_all_zero_everything_outside(self):
        mask = flood_fill_outside(BinaryImage.zeros(4, 6))
        assert (mask.labels == OUTSIDE).all()

    def test_diagonal_inside_chain(self, diagonal_inside_curve):
        mask = flood_fill_outside(diagonal_inside_curve)
        assert set(mask.inside_pixels()) == {(2, 2), (2, 3), (3, 2), (3, 3), (4, 4)}

    def test_outside_pocket_is_outside(self, outside_pocket_curve):
        # (4,4) is 4-enclosed by curve pixels but 8-connected to the border
        mask = flood_fill_outside(outside_pocket_curve)
        assert mask.labels[4, 4] == OUTSIDE
        assert not outside_region_4connected(outside_pocket_curve)

    def test_partition(self, all_small_curves):
        for curve in all_small_curves:
            mask = flood_fill_outside(curve.image)
            n = mask.labels.size
            counts = [int((mask.labels == v).sum()) for v in (OUTSIDE, INSIDE, CURVE)]
            assert sum(counts) == n

    def test_border_always_outside(self, all_small_curves):
        for curve in all_small_curves:
            mask = flood_fill_outside(curve.image)
            border = np.zeros(mask.shape, dtype=bool)
            border[0, :] = border[-1, :] = True
            border[:, 0] = border[:, -1] = True
            assert (mask.labels[border] == OUTSIDE).all()


class TestHorizontalCrossings:
    def test_ring_pixel(self, ring5):
        assert horizontal_crossings(ring5).counts[2, 2] == 1

    def test_all_zero(self):
        assert (horizontal_crossings(BinaryImage.zeros(5, 5)).counts == 0).all()

    def test_matches_brute_force(self, small_corpus):
        for curve in small_corpus["polar24"]:
            field = horizontal_crossings(curve.image)
            assert (field.counts == brute_force_crossings(curve.image)).all()

    def test_counts_bounded_by_width(self, all_small_curves):
        for curve in all_small_curves:
            assert horizontal_crossings(curve.image).counts.max() <= curve.image.width


class TestRayParity:
    def test_ring(self, ring5):
        assert ray_parity_insideness(ring5).inside_pixels() == ((2, 2),)

    def test_rejects_invalid_curve(self):
        rows = [
            "............",
            ".###....###.",
            ".#.#....#.#.",
            ".###....###.",
            "............",
        ]
        with pytest.raises(InvalidCurveError):
            ray_parity_insideness(BinaryImage.from_rows(rows))

    def test_equals_flood_fill(self, all_small_curves):
        for curve in all_small_curves:
            flood = flood_fill_outside(curve.image)
            parity = ray_parity_insideness(curve.image)
            assert flood == parity  # identical labels everywhere, curve included

    def test_equals_flood_on_pocket_curves(self, outside_pocket_curve, diagonal_inside_curve):
        for img in (outside_pocket_curve, diagonal_inside_curve):
            assert flood_fill_outside(img) == ray_parity_insideness(img)

    def test_transpose_invariance(self, all_small_curves):
        # vertical rays via transpose give the same inside set
        for curve in all_small_curves:
            img = curve.image
            transposed = BinaryImage(img.pixels.T)
            direct = ray_parity_insideness(img)
            via_transpose = ray_parity_insideness(transposed)
            assert (direct.labels == via_transpose.labels.T).all()


class TestPerImageAccuracy:
    def test_identical(self, ring5):
        mask = flood_fill_outside(ring5)
        assert per_image_accuracy(mask, mask) == (1.0, 1)
        assert per_image_accuracy(mask, mask, include_curve=True) == (1.0, 1)

    def test_single_background_error(self, ring5):
        truth = flood_fill_outside(ring5)
        labels = truth.labels.copy()
        labels[0, 0] = INSIDE
        pred = InsidenessMask(labels)
        per_pixel, per_image = per_image_accuracy(pred, truth)
        assert per_image == 0
        assert per_pixel == pytest.approx(16 / 17)  # 17 background pixels in 5x5 ring

    def test_curve_only_differences_ignored(self, ring5):
        truth = flood_fill_outside(ring5)
        labels = truth.labels.copy()
        labels[truth.labels == CURVE] = OUTSIDE
        pred = InsidenessMask(labels)
        assert per_image_accuracy(pred, truth, include_curve=False) == (1.0, 1)
        per_pixel, per_image = per_image_accuracy(pred, truth, include_curve=True)
        assert per_image == 0
        assert per_pixel < 1.0

    def test_dimension_mismatch(self, ring5):
        with pytest.raises(ValueError):
            per_image_accuracy(
                flood_fill_outside(ring5), flood_fill_outside(BinaryImage.zeros(4, 4))
            )


_BINARY_IMAGES = hnp.arrays(
    np.uint8,
    hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=10),
    elements=st.integers(0, 1),
)


@given(_BINARY_IMAGES)
@settings(max_examples=80, deadline=None)
def test_crossings_match_brute_force_on_any_image(arr):
    img = BinaryImage(arr)
    assert (horizontal_crossings(img).counts == brute_force_crossings(img)).all()


@given(_BINARY_IMAGES)
@settings(max_examples=80, deadline=None)
def test_flood_fill_total_on_any_image(arr):
    img = BinaryImage(arr)
    mask = flood_fill_outside(img)
    assert (mask.labels == CURVE).sum() == arr.sum()
    # outside pixels always include every zero border pixel
    border = np.zeros(arr.shape, dtype=bool)
    border[0, :] = border[-1, :] = True
    border[:, 0] = border[:, -1] = True
    zero_border = border & (arr == 0)
    assert (mask.labels[zero_border] == OUTSIDE).all()


@given(st.integers(min_value=0, max_value=2**63))
@settings(max_examples=20, deadline=None)
def test_masks_equal_on_background_reflexive(seed):
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 3, size=(6, 6)).astype(np.uint8)
    mask = InsidenessMask(labels)
    assert masks_equal_on_background(mask, mask)
