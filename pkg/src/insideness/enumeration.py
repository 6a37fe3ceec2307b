"""Counting digital Jordan curves: grid-graph cycles, upsampling, bounds.

A cycle on a k x k vertex grid maps to a digital Jordan curve in a
(2k-1) x (2k-1) image by placing each vertex at pixel (2r, 2c) and filling
the midpoint pixel of every edge; padding a 1-pixel zero margin keeps the
curve off the border.  Distinct cycles give distinct pixel sets, so the
number of cycles in the ((N-1)/2)^2 grid is a lower bound on the number of
digital Jordan curves in an N x N image.  ``enumerate_jordan_curves_exact``
independently enumerates every curve on tiny images, which both checks the
construction and shows the bound is not tight.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .grid import BinaryImage, JordanCurve, Pixel, require_jordan_curve

MAX_GRID_CELLS = 30
MAX_EXACT_IMAGE = 9


class SizeTooLarge(ValueError):
    """The requested exhaustive enumeration is beyond the feasibility bound."""


@dataclass(frozen=True)
class CycleEnumeration:
    count: int
    cycles: Optional[Tuple[Tuple[Pixel, ...], ...]] = None


def _grid_neighbors(v: Pixel, rows: int, cols: int) -> Tuple[Pixel, ...]:
    r, c = v
    return tuple(
        (rr, cc)
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
        if 0 <= rr < rows and 0 <= cc < cols
    )


def enumerate_grid_cycles(
    rows: int, cols: int, want_cycles: bool = False
) -> CycleEnumeration:
    """Count all simple cycles in the rows x cols grid graph.

    Each cycle is counted once, anchored at its smallest vertex with the
    smaller of its two anchor neighbours first (so both traversal
    directions collapse to one canonical sequence).
    """
    if rows < 2 or cols < 2:
        raise ValueError("grid must be at least 2x2 to contain a cycle")
    if rows * cols > MAX_GRID_CELLS:
        raise SizeTooLarge(
            f"{rows}x{cols} grid exceeds the exhaustive bound of {MAX_GRID_CELLS} vertices"
        )
    count = 0
    collected: List[Tuple[Pixel, ...]] = []
    vertices = [(r, c) for r in range(rows) for c in range(cols)]

    def extend(path: List[Pixel], on_path: set, anchor: Pixel):
        nonlocal count
        end = path[-1]
        for v in _grid_neighbors(end, rows, cols):
            if v == anchor:
                if len(path) >= 3 and path[1] < end:
                    count += 1
                    if want_cycles:
                        collected.append(tuple(path))
                continue
            if v < anchor or v in on_path:
                continue
            path.append(v)
            on_path.add(v)
            extend(path, on_path, anchor)
            on_path.discard(v)
            path.pop()

    for anchor in vertices:
        extend([anchor], {anchor}, anchor)
    return CycleEnumeration(count=count, cycles=tuple(collected) if want_cycles else None)


def canonicalize_cycle(cycle: Sequence[Pixel]) -> Tuple[Pixel, ...]:
    """Canonical form of a closed vertex sequence: anchored at the smallest
    vertex, oriented toward its smaller neighbour.  Accepts sequences with
    or without the repeated final vertex."""
    verts = list(cycle)
    if len(verts) > 1 and verts[0] == verts[-1]:
        verts.pop()
    k = verts.index(min(verts))
    verts = verts[k:] + verts[:k]
    if verts[-1] < verts[1]:
        verts = [verts[0]] + verts[1:][::-1]
    return tuple(verts)


def upsample_cycle(cycle: Sequence[Pixel], rows: int, cols: int) -> BinaryImage:
    """Map a grid-graph cycle on rows x cols vertices to a curve image.

    Vertex (r, c) becomes pixel (2r, 2c) in a (2*rows-1) x (2*cols-1)
    image, and every cycle edge fills the midpoint pixel between its
    endpoint pixels.
    """
    verts = list(cycle)
    if len(verts) > 1 and verts[0] == verts[-1]:
        verts.pop()
    ones = set()
    for v, w in zip(verts, verts[1:] + verts[:1]):
        ones.add((2 * v[0], 2 * v[1]))
        ones.add((v[0] + w[0], v[1] + w[1]))
    return BinaryImage.from_pixel_set(2 * rows - 1, 2 * cols - 1, ones)


def pad(img: BinaryImage, margin: int = 1) -> BinaryImage:
    """Embed the image centred in a zero canvas grown by margin on each side."""
    if margin < 0:
        raise ValueError("margin must be non-negative")
    return BinaryImage(np.pad(img.pixels, margin))


def jordan_lower_bound(image_size: int) -> int:
    """Number of distinct padded upsampled curves in image_size^2 images.

    Equals the cycle count of the ((image_size-1)/2)-square grid graph.
    """
    if image_size < 5 or image_size % 2 == 0:
        raise ValueError("image_size must be odd and at least 5")
    k = (image_size - 1) // 2
    return enumerate_grid_cycles(k, k).count


def upsampled_curves(image_size: int) -> List[JordanCurve]:
    """All padded upsampled curves behind jordan_lower_bound(image_size)."""
    k = (image_size - 1) // 2
    enum = enumerate_grid_cycles(k, k, want_cycles=True)
    curves = []
    for cycle in enum.cycles:
        curves.append(require_jordan_curve(pad(upsample_cycle(cycle, k, k))))
    return curves


def enumerate_jordan_curves_exact(
    image_size: int, want_curves: bool = True
) -> Tuple[int, List[JordanCurve]]:
    """Every digital Jordan curve in an image_size^2 image, by closed-walk
    search over the interior with the exactly-two-neighbours condition
    enforced during the walk, deduplicated by pixel set."""
    if image_size < 5:
        raise ValueError("no digital Jordan curve fits an image smaller than 5x5")
    if image_size > MAX_EXACT_IMAGE:
        raise SizeTooLarge(
            f"exact enumeration beyond {MAX_EXACT_IMAGE}x{MAX_EXACT_IMAGE} images is infeasible"
        )
    lo, hi = 1, image_size - 2
    seen = set()
    curves: List[JordanCurve] = []

    def neighbors(p: Pixel) -> Tuple[Pixel, ...]:
        r, c = p
        return tuple(
            (rr, cc)
            for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
            if lo <= rr <= hi and lo <= cc <= hi
        )

    def extend(path: List[Pixel], on_path: set, anchor: Pixel):
        end = path[-1]
        for p in neighbors(end):
            if p in on_path or p < anchor:
                continue
            touching = {q for q in neighbors(p) if q in on_path}
            if touching == {end}:
                path.append(p)
                on_path.add(p)
                extend(path, on_path, anchor)
                on_path.discard(p)
                path.pop()
            elif touching == {end, anchor} and len(path) + 1 >= 8 and path[1] < p:
                pixel_set = frozenset(path) | {p}
                if pixel_set not in seen:
                    seen.add(pixel_set)
                    if want_curves:
                        img = BinaryImage.from_pixel_set(image_size, image_size, pixel_set)
                        curves.append(require_jordan_curve(img))

    for anchor in [(r, c) for r in range(lo, hi + 1) for c in range(lo, hi + 1)]:
        extend([anchor], {anchor}, anchor)
    return len(seen), curves
