import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from insideness import (
    BinaryImage,
    InvalidCurveError,
    JordanCurve,
    Violation,
    ViolationKind,
    is_border,
    neighbors4,
    neighbors8,
    render_cycle,
    require_jordan_curve,
    validate_cycle_witness,
    validate_jordan_curve,
)


class TestNeighbors:
    def test_corner(self):
        assert neighbors4((0, 0), (3, 3)) == {(0, 1), (1, 0)}

    def test_interior(self):
        assert neighbors4((1, 1), (3, 3)) == {(0, 1), (1, 0), (1, 2), (2, 1)}

    def test_edge(self):
        assert neighbors4((2, 1), (3, 3)) == {(1, 1), (2, 0), (2, 2)}

    def test_corner8(self):
        assert neighbors8((0, 0), (3, 3)) == {(0, 1), (1, 0), (1, 1)}

    def test_interior8(self):
        assert neighbors8((1, 1), (3, 3)) == {
            (0, 0), (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2)
        }

    def test_edge8_rect(self):
        assert neighbors8((0, 1), (2, 3)) == {(0, 0), (0, 2), (1, 0), (1, 1), (1, 2)}

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            neighbors4((3, 0), (3, 3))
        with pytest.raises(ValueError):
            neighbors8((-1, 0), (3, 3))

    @given(
        st.integers(min_value=2, max_value=12),
        st.integers(min_value=2, max_value=12),
        st.data(),
    )
    @settings(max_examples=60)
    def test_neighbors4_subset_of_neighbors8(self, h, w, data):
        p = (
            data.draw(st.integers(min_value=0, max_value=h - 1)),
            data.draw(st.integers(min_value=0, max_value=w - 1)),
        )
        assert neighbors4(p, (h, w)) <= neighbors8(p, (h, w))


class TestIsBorder:
    @pytest.mark.parametrize(
        "p,expected",
        [((0, 3), True), ((2, 2), False), ((4, 0), True), ((4, 4), True), ((1, 3), False)],
    )
    def test_examples(self, p, expected):
        assert is_border(p, (5, 5)) is expected


class TestBinaryImage:
    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            BinaryImage(np.array([[0, 2], [1, 0]]))

    def test_rejects_wrong_ndim(self):
        with pytest.raises(ValueError):
            BinaryImage(np.zeros(4))

    def test_immutable(self):
        img = BinaryImage.zeros(3, 3)
        with pytest.raises((ValueError, AttributeError)):
            img.pixels[0, 0] = 1

    def test_from_rows_roundtrip(self, ring5):
        assert BinaryImage.from_rows(ring5.render().splitlines()) == ring5


class TestValidateJordanCurve:
    def test_smallest_ring_is_valid(self, ring5):
        curve = validate_jordan_curve(ring5)
        assert isinstance(curve, JordanCurve)
        assert curve.length == 8
        assert curve.cycle[0] == curve.cycle[-1]

    def test_block_2x2_too_short(self):
        img = BinaryImage.from_rows([".....", ".##..", ".##..", ".....", "....."])
        violation = validate_jordan_curve(img)
        assert isinstance(violation, Violation)
        # every block pixel has exactly two 4-neighbours, so the failure is
        # the length bound: 4 pixels cannot support a closed sequence of 8
        assert violation.kind is ViolationKind.TOO_SHORT

    def test_domino_block_rejected(self):
        img = BinaryImage.from_rows([".....", ".###.", ".###.", ".....", "....."])
        violation = validate_jordan_curve(img)
        assert isinstance(violation, Violation)
        assert violation.kind is ViolationKind.TOO_SHORT

    def test_chorded_eight_cycle_rejected(self):
        # 8 pixels tracing an L-shaped grid cycle: pixels along the inner
        # corner get a third 4-neighbour, violating the exactly-two condition
        img = BinaryImage.from_rows(
            [".....", ".###.", ".###.", ".##..", "....."]
        )
        violation = validate_jordan_curve(img)
        assert isinstance(violation, Violation)
        assert violation.kind is ViolationKind.DEGREE_NOT_TWO
        assert violation.pixel == (1, 2)

    def test_open_path_not_closed(self):
        img = BinaryImage.from_rows(
            ["..........", ".########.", "..........", ".........."]
        )
        violation = validate_jordan_curve(img)
        assert violation.kind is ViolationKind.NOT_CLOSED
        assert violation.pixel == (1, 1)

    def test_ring_on_border_touches(self):
        rows = ["###", "#.#", "###"]
        violation = validate_jordan_curve(BinaryImage.from_rows(rows))
        assert violation.kind is ViolationKind.TOUCHES_BORDER
        assert violation.pixel == (0, 0)

    def test_two_rings_disconnected(self):
        rows = [
            "............",
            ".###....###.",
            ".#.#....#.#.",
            ".###....###.",
            "............",
        ]
        violation = validate_jordan_curve(BinaryImage.from_rows(rows))
        assert violation.kind is ViolationKind.DISCONNECTED

    def test_empty_image(self):
        violation = validate_jordan_curve(BinaryImage.zeros(5, 5))
        assert violation.kind is ViolationKind.TOO_SHORT

    def test_diagonal_touching_is_legal(self, diagonal_inside_curve):
        assert isinstance(validate_jordan_curve(diagonal_inside_curve), JordanCurve)

    def test_outside_pocket_curve_is_legal(self, outside_pocket_curve):
        assert isinstance(validate_jordan_curve(outside_pocket_curve), JordanCurve)

    def test_require_raises(self):
        with pytest.raises(InvalidCurveError):
            require_jordan_curve(BinaryImage.zeros(4, 4))

    def test_witness_rerenders_to_image(self, ring5, all_small_curves):
        for curve in [validate_jordan_curve(ring5)] + list(all_small_curves):
            img = curve.image
            rerendered = render_cycle(curve.cycle, img.height, img.width)
            assert rerendered == img

    def test_every_cycle_pixel_has_two_cycle_neighbors(self, all_small_curves):
        for curve in all_small_curves:
            pixels = curve.pixel_set()
            dims = curve.image.shape
            for p in pixels:
                assert len(neighbors4(p, dims) & pixels) == 2

    def test_witness_is_deterministic(self, ring5):
        a = validate_jordan_curve(ring5)
        b = validate_jordan_curve(BinaryImage(ring5.pixels.copy()))
        assert a.cycle == b.cycle


class TestValidateFuzz:
    @given(
        hnp.arrays(
            np.uint8,
            hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=10),
            elements=st.integers(0, 1),
        )
    )
    @settings(max_examples=120, deadline=None)
    def test_total_on_arbitrary_images(self, arr):
        result = validate_jordan_curve(BinaryImage(arr))
        if isinstance(result, JordanCurve):
            # a positive answer must round-trip: the witness re-renders the image
            assert render_cycle(result.cycle, *arr.shape) == BinaryImage(arr)
            assert result.length >= 8
        else:
            assert isinstance(result, Violation)
            assert result.detail


class TestCycleWitness:
    def test_valid_witness_passes(self, ring5):
        curve = require_jordan_curve(ring5)
        assert validate_cycle_witness(ring5, curve.cycle) is None

    def test_unclosed_witness(self, ring5):
        curve = require_jordan_curve(ring5)
        assert (
            validate_cycle_witness(ring5, curve.cycle[:-1]).kind
            is ViolationKind.NOT_CLOSED
        )

    def test_repeated_pixel_witness(self, ring5):
        curve = require_jordan_curve(ring5)
        doubled = curve.cycle[:-1] + curve.cycle
        assert (
            validate_cycle_witness(ring5, doubled).kind is ViolationKind.SELF_TOUCHING
        )
