"""Two independent exact ground truths for inside/outside of a curve.

``flood_fill_outside`` implements the definition: the outside region is
every 0-pixel with an 8-connected 0-pixel path to the image border, the
inside is the remaining 0-pixels.  ``ray_parity_insideness`` classifies a
0-pixel by the parity of curve crossings along the horizontal ray to its
right, counting a crossing whenever rows i and i+1 both carry a curve
pixel in the same column.  The two must agree on every valid curve; the
test suite enforces that over generated datasets and exhaustively
enumerated small images.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .grid import BinaryImage, require_jordan_curve

OUTSIDE = 0
INSIDE = 1
CURVE = 2

_LABEL_NAMES = {OUTSIDE: "outside", INSIDE: "inside", CURVE: "curve"}


class InsidenessMask:
    """Per-pixel labels in {OUTSIDE, INSIDE, CURVE}, immutable."""

    __slots__ = ("labels",)

    def __init__(self, labels: np.ndarray):
        arr = np.asarray(labels)
        if arr.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {arr.shape}")
        if not np.isin(arr, (OUTSIDE, INSIDE, CURVE)).all():
            raise ValueError("mask entries must be 0 (outside), 1 (inside) or 2 (curve)")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    def __setattr__(self, name, value):
        raise AttributeError("InsidenessMask is immutable")

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.labels.shape

    def inside_pixels(self) -> Tuple:
        rows, cols = np.nonzero(self.labels == INSIDE)
        return tuple(zip(rows.tolist(), cols.tolist()))

    def outside_pixels(self) -> Tuple:
        rows, cols = np.nonzero(self.labels == OUTSIDE)
        return tuple(zip(rows.tolist(), cols.tolist()))

    def curve_pixels(self) -> Tuple:
        rows, cols = np.nonzero(self.labels == CURVE)
        return tuple(zip(rows.tolist(), cols.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, InsidenessMask):
            return NotImplemented
        return self.shape == other.shape and bool((self.labels == other.labels).all())

    def __hash__(self) -> int:
        return hash((self.shape, self.labels.tobytes()))

    def __repr__(self) -> str:
        counts = {name: int((self.labels == code).sum()) for code, name in _LABEL_NAMES.items()}
        return f"InsidenessMask({self.height}x{self.width}, {counts})"


@dataclass(frozen=True)
class CrossingsField:
    """counts[i, j] = number of (row i, row i+1) curve-pixel pairs at columns >= j."""

    counts: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.counts)
        if arr.ndim != 2:
            raise ValueError("crossings field must be 2-D")
        object.__setattr__(self, "counts", arr.astype(np.int64, copy=True))


def flood_fill_outside(img: BinaryImage) -> InsidenessMask:
    """Label pixels by flooding 0-pixels inward from the border, 8-connected.

    Works on any binary image; it is the defining oracle when the image is
    a valid Jordan curve.  Uses an explicit worklist, no recursion.
    """
    outside = _flood_outside_map(img, diagonal=True)
    labels = np.full(img.shape, INSIDE, dtype=np.uint8)
    labels[outside] = OUTSIDE
    labels[img.pixels == 1] = CURVE
    return InsidenessMask(labels)


def _flood_outside_map(img: BinaryImage, diagonal: bool) -> np.ndarray:
    pixels = img.pixels
    h, w = pixels.shape
    outside = np.zeros((h, w), dtype=bool)
    queue: deque = deque()
    for r in range(h):
        for c in range(w):
            if (r in (0, h - 1) or c in (0, w - 1)) and pixels[r, c] == 0:
                outside[r, c] = True
                queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        if diagonal:
            neighbours = (
                (r - 1, c - 1), (r - 1, c), (r - 1, c + 1), (r, c - 1),
                (r, c + 1), (r + 1, c - 1), (r + 1, c), (r + 1, c + 1),
            )
        else:
            neighbours = ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
        for rr, cc in neighbours:
            if 0 <= rr < h and 0 <= cc < w and pixels[rr, cc] == 0 and not outside[rr, cc]:
                outside[rr, cc] = True
                queue.append((rr, cc))
    return outside


def outside_region_4connected(img: BinaryImage) -> bool:
    """True iff 4-connected growth from the border covers the whole outside.

    The outside region is defined through 8-adjacency, and a curve may
    touch itself diagonally so that an outside pocket is reachable only
    through a diagonal gap (the smallest examples live in 9x9 images).
    The border-coloring routine grows through 4-neighbourhoods and labels
    such pockets wrongly, so the dataset generators reject curves for
    which this predicate is false.
    """
    return bool(
        (_flood_outside_map(img, diagonal=True) == _flood_outside_map(img, diagonal=False)).all()
    )


def horizontal_crossings(img: BinaryImage) -> CrossingsField:
    """Crossing counts of rightward rays between each row and the next.

    counts[i, j] = sum over v >= 0 of X[i, j+v] * X[i+1, j+v], with the row
    below the image read as zeros.
    """
    x = img.pixels.astype(np.int64)
    below = np.vstack([x[1:, :], np.zeros((1, x.shape[1]), dtype=np.int64)])
    pair = x * below
    # suffix sums along each row
    counts = np.flip(np.cumsum(np.flip(pair, axis=1), axis=1), axis=1)
    return CrossingsField(counts)


def ray_parity_insideness(img: BinaryImage) -> InsidenessMask:
    """Inside iff the rightward ray crosses the curve an odd number of times.

    The parity characterisation only holds for valid Jordan curves, so the
    image is validated first; InvalidCurveError is raised otherwise.
    """
    require_jordan_curve(img)
    counts = horizontal_crossings(img).counts
    labels = np.where(counts % 2 == 1, INSIDE, OUTSIDE).astype(np.uint8)
    labels[img.pixels == 1] = CURVE
    return InsidenessMask(labels)


def per_image_accuracy(
    pred: InsidenessMask, truth: InsidenessMask, include_curve: bool = False
) -> Tuple[float, int]:
    """(fraction of compared pixels that match, 1 if all match else 0).

    With include_curve=False, pixels labelled CURVE in the truth mask are
    excluded from the comparison.
    """
    if pred.shape != truth.shape:
        raise ValueError(f"mask shapes differ: {pred.shape} vs {truth.shape}")
    if include_curve:
        compared = np.ones(truth.shape, dtype=bool)
    else:
        compared = truth.labels != CURVE
    total = int(compared.sum())
    if total == 0:
        return 1.0, 1
    matches = int((pred.labels[compared] == truth.labels[compared]).sum())
    per_pixel = matches / total
    return per_pixel, int(matches == total)


def masks_equal_on_background(a: InsidenessMask, b: InsidenessMask) -> bool:
    """True iff the two masks agree wherever neither labels a curve pixel."""
    if a.shape != b.shape:
        raise ValueError(f"mask shapes differ: {a.shape} vs {b.shape}")
    compared = (a.labels != CURVE) & (b.labels != CURVE)
    return bool((a.labels[compared] == b.labels[compared]).all())
