"""Pixel grids, adjacency relations, and digital Jordan curve validation.

Conventions used throughout the package:

* a pixel coordinate is a ``(row, col)`` tuple, 0-based, row-major;
* a binary image stores curve pixels as 1 and background as 0, with
  4-adjacency for 1-pixels and 8-adjacency for 0-pixels;
* a digital Jordan curve is a closed 4-connected sequence of at least 8
  distinct pixels in which every curve pixel has exactly two 4-adjacent
  curve pixels, and no other 1-pixels exist in the image.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np

Pixel = Tuple[int, int]

MIN_CYCLE_LEN = 8


class BinaryImage:
    """An H x W grid of {0, 1} values, immutable after construction."""

    __slots__ = ("pixels",)

    def __init__(self, pixels: np.ndarray):
        arr = np.asarray(pixels)
        if arr.ndim != 2:
            raise ValueError(f"binary image must be 2-D, got shape {arr.shape}")
        if arr.size == 0:
            raise ValueError("binary image must be non-empty")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("binary image entries must be 0 or 1")
        arr = arr.astype(np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryImage is immutable")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.pixels.shape

    @classmethod
    def zeros(cls, height: int, width: int) -> "BinaryImage":
        return cls(np.zeros((height, width), dtype=np.uint8))

    @classmethod
    def from_pixel_set(cls, height: int, width: int, ones: Iterable[Pixel]) -> "BinaryImage":
        arr = np.zeros((height, width), dtype=np.uint8)
        for r, c in ones:
            arr[r, c] = 1
        return cls(arr)

    @classmethod
    def from_rows(cls, rows: Iterable[str]) -> "BinaryImage":
        """Build from strings of '0'/'1' (or '.'/'#'), one per row."""
        table = {"0": 0, ".": 0, "1": 1, "#": 1}
        data = [[table[ch] for ch in row if not ch.isspace()] for row in rows]
        return cls(np.array(data, dtype=np.uint8))

    def one_pixels(self) -> Tuple[Pixel, ...]:
        """All 1-pixels in row-major order."""
        rows, cols = np.nonzero(self.pixels)
        return tuple(zip(rows.tolist(), cols.tolist()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self.shape == other.shape and bool((self.pixels == other.pixels).all())

    def __hash__(self) -> int:
        return hash((self.shape, self.pixels.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryImage({self.height}x{self.width}, {int(self.pixels.sum())} ones)"

    def render(self) -> str:
        """ASCII art, '#' for 1 and '.' for 0."""
        return "\n".join("".join("#" if v else "." for v in row) for row in self.pixels)


def in_bounds(p: Pixel, dims: Tuple[int, int]) -> bool:
    return 0 <= p[0] < dims[0] and 0 <= p[1] < dims[1]


def _require_in_bounds(p: Pixel, dims: Tuple[int, int]) -> None:
    if not in_bounds(p, dims):
        raise ValueError(f"pixel {p} out of bounds for {dims[0]}x{dims[1]} image")


def neighbors4(p: Pixel, dims: Tuple[int, int]) -> set:
    """In-bounds edge-sharing neighbours of p."""
    _require_in_bounds(p, dims)
    r, c = p
    cand = ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
    return {q for q in cand if in_bounds(q, dims)}


def neighbors8(p: Pixel, dims: Tuple[int, int]) -> set:
    """In-bounds edge- or corner-sharing neighbours of p."""
    _require_in_bounds(p, dims)
    r, c = p
    cand = (
        (r - 1, c - 1), (r - 1, c), (r - 1, c + 1),
        (r, c - 1), (r, c + 1),
        (r + 1, c - 1), (r + 1, c), (r + 1, c + 1),
    )
    return {q for q in cand if in_bounds(q, dims)}


def is_border(p: Pixel, dims: Tuple[int, int]) -> bool:
    """True iff p lies on the outermost ring of the image."""
    _require_in_bounds(p, dims)
    return p[0] in (0, dims[0] - 1) or p[1] in (0, dims[1] - 1)


class ViolationKind(enum.Enum):
    NOT_CLOSED = "NotClosed"
    SELF_TOUCHING = "SelfTouching"
    DEGREE_NOT_TWO = "DegreeNotTwo"
    TOUCHES_BORDER = "TouchesBorder"
    TOO_SHORT = "TooShort"
    DISCONNECTED = "Disconnected"


@dataclass(frozen=True)
class Violation:
    """Why an image is not a digital Jordan curve."""

    kind: ViolationKind
    pixel: Optional[Pixel]
    detail: str

    def __str__(self) -> str:
        at = f" at {self.pixel}" if self.pixel is not None else ""
        return f"{self.kind.value}{at}: {self.detail}"


@dataclass(frozen=True)
class JordanCurve:
    """A validated digital Jordan curve: the image plus a witness cycle.

    ``cycle`` is the ordered pixel sequence s_0 ... s_L with s_L == s_0,
    anchored at the row-major smallest curve pixel and oriented toward its
    row-major smaller neighbour, so equal pixel sets yield equal witnesses.
    """

    image: BinaryImage
    cycle: Tuple[Pixel, ...]

    @property
    def length(self) -> int:
        """Number of distinct pixels on the curve."""
        return len(self.cycle) - 1

    def pixel_set(self) -> frozenset:
        return frozenset(self.cycle[:-1])


class InvalidCurveError(ValueError):
    """Raised when an operation requires a valid Jordan curve but got none."""

    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


def _degree4_map(pixels: np.ndarray) -> np.ndarray:
    """Per-pixel count of 4-adjacent 1-pixels, for 1-pixels only."""
    padded = np.pad(pixels, 1)
    deg = (
        padded[:-2, 1:-1].astype(np.int32)
        + padded[2:, 1:-1]
        + padded[1:-1, :-2]
        + padded[1:-1, 2:]
    )
    return deg


def validate_jordan_curve(img: BinaryImage) -> Union[JordanCurve, Violation]:
    """Check the five digital Jordan curve conditions plus the border rule.

    Returns the witness cycle on success, otherwise the first violation
    found, scanning pixels row-major.  Checks run in a fixed order:
    minimum size, per-pixel degree, connectedness, border contact.
    """
    pixels = img.pixels
    ones = img.one_pixels()
    if len(ones) == 0:
        return Violation(ViolationKind.TOO_SHORT, None, "image has no 1-pixels")
    if len(ones) < MIN_CYCLE_LEN:
        return Violation(
            ViolationKind.TOO_SHORT,
            ones[0],
            f"a digital Jordan curve needs at least {MIN_CYCLE_LEN} pixels, got {len(ones)}",
        )

    deg = _degree4_map(pixels)
    for p in ones:
        d = int(deg[p])
        if d > 2:
            return Violation(
                ViolationKind.DEGREE_NOT_TWO, p, f"pixel has {d} 4-adjacent curve pixels"
            )
        if d < 2:
            kind = ViolationKind.NOT_CLOSED
            return Violation(
                kind, p, f"pixel has {d} 4-adjacent curve pixels; curve is not closed"
            )

    # Connected + 2-regular over 4-adjacency means a single simple cycle.
    component = _component4(pixels, ones[0])
    if len(component) != len(ones):
        outlier = next(p for p in ones if p not in component)
        return Violation(
            ViolationKind.DISCONNECTED,
            outlier,
            f"1-pixels split into multiple components ({len(component)} of {len(ones)} reachable)",
        )

    dims = img.shape
    for p in ones:
        if is_border(p, dims):
            return Violation(ViolationKind.TOUCHES_BORDER, p, "curve pixel on the image border")

    return JordanCurve(image=img, cycle=_trace_cycle(pixels, ones[0]))


def _component4(pixels: np.ndarray, start: Pixel) -> set:
    dims = pixels.shape
    seen = {start}
    stack = [start]
    while stack:
        p = stack.pop()
        for q in neighbors4(p, dims):
            if pixels[q] and q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


def _trace_cycle(pixels: np.ndarray, anchor: Pixel) -> Tuple[Pixel, ...]:
    """Walk a 2-regular 4-connected pixel set into its witness sequence."""
    dims = pixels.shape
    first = min(q for q in neighbors4(anchor, dims) if pixels[q])
    cycle = [anchor, first]
    prev, cur = anchor, first
    while cur != anchor:
        nxt = next(q for q in neighbors4(cur, dims) if pixels[q] and q != prev)
        cycle.append(nxt)
        prev, cur = cur, nxt
    return tuple(cycle)


def validate_cycle_witness(img: BinaryImage, cycle: Iterable[Pixel]) -> Optional[Violation]:
    """Check an explicit pixel sequence against the curve conditions.

    Used for round-trip checks on user-supplied witnesses; returns None if
    the sequence is a valid witness for the image.
    """
    seq = list(cycle)
    if len(seq) < 2 or seq[0] != seq[-1]:
        return Violation(ViolationKind.NOT_CLOSED, seq[-1] if seq else None, "s_0 != s_L")
    body = seq[:-1]
    if len(body) < MIN_CYCLE_LEN:
        return Violation(ViolationKind.TOO_SHORT, body[0], f"L = {len(body)} < {MIN_CYCLE_LEN}")
    if len(set(body)) != len(body):
        dup = next(p for i, p in enumerate(body) if p in body[:i])
        return Violation(ViolationKind.SELF_TOUCHING, dup, "pixel repeated in the sequence")
    dims = img.shape
    for p, q in zip(seq, seq[1:]):
        if abs(p[0] - q[0]) + abs(p[1] - q[1]) != 1:
            return Violation(ViolationKind.NOT_CLOSED, q, f"{p} and {q} are not 4-adjacent")
    if frozenset(body) != frozenset(img.one_pixels()):
        return Violation(
            ViolationKind.DISCONNECTED, None, "sequence does not cover the image 1-pixels"
        )
    result = validate_jordan_curve(img)
    return result if isinstance(result, Violation) else None


def require_jordan_curve(img: BinaryImage) -> JordanCurve:
    """validate_jordan_curve, raising InvalidCurveError on failure."""
    result = validate_jordan_curve(img)
    if isinstance(result, Violation):
        raise InvalidCurveError(result)
    return result


def render_cycle(cycle: Iterable[Pixel], height: int, width: int) -> BinaryImage:
    """Image whose 1-pixels are exactly the cycle pixels."""
    return BinaryImage.from_pixel_set(height, width, cycle)
