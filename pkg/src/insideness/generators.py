"""Seeded generators for the four curve families, plus dataset assembly.

Every generator is rejection sampling around ``validate_jordan_curve``:
draw a candidate from the family's recipe, keep it only if it satisfies
all digital Jordan curve conditions, and retry with fresh randomness
otherwise.  Generation is a pure function of the seed (Mersenne Twister
via ``random.Random``), so identical seeds give bit-identical curves.

Families:

* polar: star polygon around a random centre, vertices at random angles
  and radii in [3, 14], edges rasterised as 4-connected segments;
* spiral: a fattened random walk (segment length 3-10, half-thickness
  1-4, each extension rejected if it would touch older arms), emitting
  the boundary ring of the walked region;
* digs: a rectangle outline with 1-10 notches of random width and depth
  carved into its walls, depths clamped so notches never touch;
* random_walk: a self-avoiding 4-connected walk that keeps the exactly-
  two-neighbours condition at every step, backtracking when stuck, and
  closing once it can legally rejoin the start.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .grid import BinaryImage, JordanCurve, Pixel, validate_jordan_curve
from .oracles import InsidenessMask, flood_fill_outside, outside_region_4connected

POLAR = "polar"
SPIRAL = "spiral"
DIGS = "digs"
RANDOM_WALK = "random_walk"

FAMILIES = (POLAR, SPIRAL, DIGS, RANDOM_WALK)

#: image sizes the recipes were designed around
DEFAULT_SIZES = {POLAR: 32, SPIRAL: 42, DIGS: 42, RANDOM_WALK: 42}

POLAR_RADIUS_MIN = 3.0
POLAR_RADIUS_MAX = 14.0
POLAR_VERTEX_CHOICES = (4, 9, 14, 19, 24)

DEFAULT_MAX_RETRIES = 10_000

_MASK64 = (1 << 64) - 1


class RetryExhausted(RuntimeError):
    """A generator failed to produce a valid curve within its retry budget."""


def accept_curve(img: BinaryImage) -> Optional[JordanCurve]:
    """The shared acceptance test behind every generator's rejection loop.

    A candidate is kept iff it is a valid digital Jordan curve whose
    outside region is 4-connected to the border.  The extra connectivity
    condition rules out curves with outside pockets reachable only through
    a diagonal gap, which the border-coloring networks cannot label; see
    oracles.outside_region_4connected.
    """
    result = validate_jordan_curve(img)
    if not isinstance(result, JordanCurve):
        return None
    if not outside_region_4connected(img):
        return None
    return result


def derive_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit child seed (splitmix64 finaliser)."""
    z = (seed + 0x9E3779B97F4A7C15 * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def segment4(p: Pixel, q: Pixel) -> List[Pixel]:
    """4-connected digital straight segment from p to q, inclusive."""
    r0, c0 = p
    r1, c1 = q
    dr, dc = r1 - r0, c1 - c0
    nr, nc = abs(dr), abs(dc)
    sr = 1 if dr > 0 else -1
    sc = 1 if dc > 0 else -1
    pixels = [p]
    r, c = r0, c0
    err = 0
    for _ in range(nr + nc):
        err_r = err + nc  # error after a row step
        err_c = err - nr  # error after a col step
        if abs(err_r) < abs(err_c):
            r += sr
            err = err_r
        else:
            c += sc
            err = err_c
        pixels.append((r, c))
    return pixels


# --- polar ------------------------------------------------------------------


def _polar_attempt(
    rng: random.Random, max_vertices: int, size: int
) -> Tuple[Optional[BinaryImage], Pixel]:
    margin = int(math.ceil(POLAR_RADIUS_MAX)) + 1
    centre = (
        rng.randint(margin, size - 1 - margin),
        rng.randint(margin, size - 1 - margin),
    )
    n_vertices = rng.randint(3, max_vertices)
    angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n_vertices))
    vertices = []
    for angle in angles:
        radius = rng.uniform(POLAR_RADIUS_MIN, POLAR_RADIUS_MAX)
        v = (
            centre[0] + round(radius * math.sin(angle)),
            centre[1] + round(radius * math.cos(angle)),
        )
        if not vertices or v != vertices[-1]:
            vertices.append(v)
    if len(vertices) > 1 and vertices[0] == vertices[-1]:
        vertices.pop()
    if len(vertices) < 3:
        return None, centre
    ones = set()
    for a, b in zip(vertices, vertices[1:] + vertices[:1]):
        ones.update(segment4(a, b))
    return BinaryImage.from_pixel_set(size, size, ones), centre


def gen_polar(
    seed: int,
    max_vertices: int,
    size: int = 32,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> JordanCurve:
    """Star-polygon curve: random centre, <= max_vertices vertices at random
    angles, radii uniform in [3, 14], connected by digital straight segments."""
    if max_vertices < 3:
        raise ValueError("need at least 3 vertices")
    if size < 2 * (int(POLAR_RADIUS_MAX) + 1) + 1:
        raise ValueError(f"size {size} cannot contain a radius-14 figure off the border")
    rng = random.Random(seed)
    for _ in range(max_retries):
        img, _ = _polar_attempt(rng, max_vertices, size)
        if img is None:
            continue
        curve = accept_curve(img)
        if curve is not None:
            return curve
    raise RetryExhausted(f"polar generator exhausted {max_retries} attempts")


# --- spiral -----------------------------------------------------------------

_DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))

SPIRAL_SEGMENT_RANGE = (3, 10)
SPIRAL_THICKNESS_CHOICES = (1, 2, 3, 4)
SPIRAL_START_RANGE = (10, 20)


def _box_bounds(pos: Pixel, direction: Tuple[int, int], length: int, thickness: int):
    r0, c0 = pos
    r1, c1 = r0 + direction[0] * length, c0 + direction[1] * length
    if direction[0] != 0:  # vertical segment, thicken across columns
        return (min(r0, r1), max(r0, r1), c0 - thickness, c0 + thickness)
    return (r0 - thickness, r0 + thickness, min(c0, c1), max(c0, c1))


def _spiral_region(
    rng: random.Random, size: int
) -> Optional[Tuple[np.ndarray, Pixel]]:
    lo, hi = 2, size - 3
    region = np.zeros((size, size), dtype=bool)
    last_box = np.zeros((size, size), dtype=bool)
    start = (
        rng.randint(SPIRAL_START_RANGE[0], SPIRAL_START_RANGE[1]),
        rng.randint(SPIRAL_START_RANGE[0], SPIRAL_START_RANGE[1]),
    )
    pos = start
    combos = [
        (d, length, t)
        for d in _DIRECTIONS
        for length in range(SPIRAL_SEGMENT_RANGE[0], SPIRAL_SEGMENT_RANGE[1] + 1)
        for t in SPIRAL_THICKNESS_CHOICES
    ]
    placed_any = False
    while True:
        rng.shuffle(combos)
        placed = False
        for direction, length, thickness in combos:
            r0, r1, c0, c1 = _box_bounds(pos, direction, length, thickness)
            if r0 < lo or c0 < lo or r1 > hi or c1 > hi:
                continue
            new_box = np.zeros_like(region)
            new_box[r0 : r1 + 1, c0 : c1 + 1] = True
            if not (new_box & ~region).any():
                continue  # walking back inside the tube adds nothing
            g = (max(0, r0 - 1), min(size, r1 + 2), max(0, c0 - 1), min(size, c1 + 2))
            older = region & ~last_box
            if older[g[0] : g[1], g[2] : g[3]].any():
                continue  # the grown box would touch an older arm
            region |= new_box
            last_box = new_box
            pos = (pos[0] + direction[0] * length, pos[1] + direction[1] * length)
            placed = True
            placed_any = True
            break
        if not placed:
            break
    return (region, start) if placed_any else None


def region_outline(region: np.ndarray) -> np.ndarray:
    """Region pixels 8-adjacent to the complement (image edge counts too)."""
    comp = np.pad(~region, 1, constant_values=True)
    near_comp = np.zeros(region.shape, dtype=bool)
    for dr in (0, 1, 2):
        for dc in (0, 1, 2):
            if dr == 1 and dc == 1:
                continue
            h, w = region.shape
            near_comp |= comp[dr : dr + h, dc : dc + w]
    return region & near_comp


def gen_spiral(
    seed: int, size: int = 42, max_retries: int = DEFAULT_MAX_RETRIES
) -> JordanCurve:
    """Boundary ring of a fattened random walk that never touches itself."""
    if size < 27:
        raise ValueError(f"size {size} too small for the spiral recipe")
    rng = random.Random(seed)
    for _ in range(max_retries):
        attempt = _spiral_region(rng, size)
        if attempt is None:
            continue
        region, _ = attempt
        img = BinaryImage(region_outline(region).astype(np.uint8))
        curve = accept_curve(img)
        if curve is not None:
            return curve
    raise RetryExhausted(f"spiral generator exhausted {max_retries} attempts")


# --- digs -------------------------------------------------------------------

DIGS_COUNT_RANGE = (1, 10)


def _digs_region(
    rng: random.Random, size: int
) -> Optional[Tuple[np.ndarray, int]]:
    lo, hi = 2, size - 3
    min_side = 12
    height = rng.randint(min_side, hi - lo + 1)
    width = rng.randint(min_side, hi - lo + 1)
    r0 = rng.randint(lo, hi - height + 1)
    c0 = rng.randint(lo, hi - width + 1)
    r1, c1 = r0 + height - 1, c0 + width - 1

    region = np.zeros((size, size), dtype=bool)
    region[r0 : r1 + 1, c0 : c1 + 1] = True
    slots = np.zeros_like(region)

    n_digs = rng.randint(DIGS_COUNT_RANGE[0], DIGS_COUNT_RANGE[1])
    for _ in range(n_digs):
        if not _place_dig(rng, region, slots, (r0, r1, c0, c1)):
            return None
    return region, n_digs


def _place_dig(rng, region, slots, rect, inner_tries: int = 100) -> bool:
    r0, r1, c0, c1 = rect
    size = region.shape[0]
    for _ in range(inner_tries):
        wall = rng.choice(("top", "bottom", "left", "right"))
        if wall in ("top", "bottom"):
            span_lo, span_hi = c0 + 3, c1 - 3
            wall_len, depth_len = c1 - c0 + 1, r1 - r0 + 1
        else:
            span_lo, span_hi = r0 + 3, r1 - 3
            wall_len, depth_len = r1 - r0 + 1, c1 - c0 + 1
        if span_hi < span_lo:
            continue
        width = min(rng.randint(1, wall_len - 2), span_hi - span_lo + 1)
        a = rng.randint(span_lo, span_hi - width + 1)
        b = a + width - 1
        depth_cap = depth_len - 3  # keep lining, a gap and the far wall intact
        depth = min(rng.randint(1, depth_len - 2), depth_cap)
        while depth >= 1:
            if wall == "top":
                bounds = (r0, r0 + depth - 1, a, b)
            elif wall == "bottom":
                bounds = (r1 - depth + 1, r1, a, b)
            elif wall == "left":
                bounds = (a, b, c0, c0 + depth - 1)
            else:
                bounds = (a, b, c1 - depth + 1, c1)
            sr0, sr1, sc0, sc1 = bounds
            # 3-pixel halo keeps one untouched wall/interior line between
            # the 1-pixel linings of any two digs
            h = (
                max(0, sr0 - 3),
                min(size, sr1 + 4),
                max(0, sc0 - 3),
                min(size, sc1 + 4),
            )
            if not slots[h[0] : h[1], h[2] : h[3]].any():
                region[sr0 : sr1 + 1, sc0 : sc1 + 1] = False
                slots[sr0 : sr1 + 1, sc0 : sc1 + 1] = True
                return True
            depth -= 1
        # could not fit at this position, resample wall and span
    return False


def gen_digs(
    seed: int, size: int = 42, max_retries: int = DEFAULT_MAX_RETRIES
) -> JordanCurve:
    """Rectangle outline with 1-10 notches dug into its walls."""
    if size < 16:
        raise ValueError(f"size {size} too small for the digs recipe")
    rng = random.Random(seed)
    for _ in range(max_retries):
        attempt = _digs_region(rng, size)
        if attempt is None:
            continue
        region, _ = attempt
        img = BinaryImage(region_outline(region).astype(np.uint8))
        curve = accept_curve(img)
        if curve is not None:
            return curve
    raise RetryExhausted(f"digs generator exhausted {max_retries} attempts")


# --- random walk ------------------------------------------------------------


_NEIGHBOR_TABLES: Dict[int, Tuple[tuple, ...]] = {}


def _interior_neighbors(size: int) -> Tuple[tuple, ...]:
    """Cell-id -> ids of interior 4-neighbours, for cells off the border."""
    table = _NEIGHBOR_TABLES.get(size)
    if table is None:
        rows = []
        for r in range(size):
            for c in range(size):
                ids = []
                for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                    if 1 <= rr <= size - 2 and 1 <= cc <= size - 2:
                        ids.append(rr * size + cc)
                rows.append(tuple(ids))
        table = tuple(rows)
        _NEIGHBOR_TABLES[size] = table
    return table


def _walk_options(end: int, start: int, length: int, occupied, nbrs):
    """Extensions from the walk end: positive id = step, negative = close."""
    options = []
    for p in nbrs[end]:
        if occupied[p]:
            continue
        count = 0
        first = second = -1
        for q in nbrs[p]:
            if occupied[q]:
                count += 1
                if count == 1:
                    first = q
                elif count == 2:
                    second = q
                else:
                    break
        if count == 1 and first == end:
            options.append(p)
        elif (
            count == 2
            and length + 1 >= 8
            and (first == end and second == start or first == start and second == end)
        ):
            options.append(-p - 1)
    return options


def _walk_attempt(rng: random.Random, size: int, step_budget: int) -> Optional[List[Pixel]]:
    nbrs = _interior_neighbors(size)
    occupied = bytearray(size * size)
    start = rng.randint(1, size - 2) * size + rng.randint(1, size - 2)
    occupied[start] = 1
    path = [start]
    first_frame = _walk_options(start, start, 1, occupied, nbrs)
    rng.shuffle(first_frame)
    frames = [first_frame]
    while frames:
        step_budget -= 1
        if step_budget <= 0:
            return None
        options = frames[-1]
        if not options:
            frames.pop()
            occupied[path.pop()] = 0
            continue
        p = options.pop()
        if p < 0:
            path.append(-p - 1)
            return [divmod(q, size) for q in path]
        path.append(p)
        occupied[p] = 1
        nxt = _walk_options(p, start, len(path), occupied, nbrs)
        rng.shuffle(nxt)
        frames.append(nxt)
    return None


def gen_random_walk(
    seed: int,
    size: int,
    max_retries: int = DEFAULT_MAX_RETRIES,
    step_budget: int = 25_000,
) -> JordanCurve:
    """Self-avoiding walk closed into a curve, with backtracking when stuck.

    Every step keeps the candidate 4-adjacent only to the walk's current
    end (so the exactly-two-neighbours condition survives), and the walk
    closes once a step can legally rejoin the start with total length >= 8.
    An attempt that exceeds ``step_budget`` backtracking steps is abandoned
    and restarted with fresh randomness; the DFS tail on doomed regions is
    heavy, so bounded restarts are much cheaper than exhausting it.
    """
    if size < 5:
        raise ValueError("size must be at least 5 to fit the smallest curve")
    rng = random.Random(seed)
    for _ in range(max_retries):
        pixels = _walk_attempt(rng, size, step_budget)
        if pixels is None:
            continue
        img = BinaryImage.from_pixel_set(size, size, pixels)
        curve = accept_curve(img)
        if curve is not None:
            return curve
    raise RetryExhausted(f"random walk generator exhausted {max_retries} attempts")


# --- dataset assembly ---------------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    """Everything a family needs to generate one dataset deterministically."""

    family: str
    image_size: int
    seed: int
    max_vertices: Optional[int] = None  # polar only
    max_retries: int = DEFAULT_MAX_RETRIES

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.image_size < 8:
            raise ValueError("image_size must be at least 8")
        if self.family == POLAR:
            if self.max_vertices is None:
                raise ValueError("polar needs max_vertices")
        elif self.max_vertices is not None:
            raise ValueError(f"max_vertices only applies to polar, not {self.family}")

    def dataset_name(self) -> str:
        if self.family == POLAR:
            return f"polar{self.max_vertices}"
        return self.family


@dataclass(frozen=True)
class Dataset:
    curves: Tuple[JordanCurve, ...]
    masks: Tuple[InsidenessMask, ...]
    manifest: Dict

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "masks", tuple(self.masks))

    def split_indices(self, split: str) -> List[int]:
        return [
            i for i, rec in enumerate(self.manifest["records"]) if rec["split"] == split
        ]


def generate_curve(params: GeneratorParams, seed: int) -> JordanCurve:
    """One curve of the configured family from an explicit seed."""
    if params.family == POLAR:
        return gen_polar(seed, params.max_vertices, params.image_size, params.max_retries)
    if params.family == SPIRAL:
        return gen_spiral(seed, params.image_size, params.max_retries)
    if params.family == DIGS:
        return gen_digs(seed, params.image_size, params.max_retries)
    return gen_random_walk(seed, params.image_size, max_retries=params.max_retries)


def dissimilar(a: JordanCurve, b: JordanCurve, threshold: float = 0.25) -> bool:
    """True iff the curves' pixel sets differ in at least ``threshold`` of
    the larger curve's pixels (symmetric difference over max size)."""
    if a.image.shape != b.image.shape:
        raise ValueError(f"image shapes differ: {a.image.shape} vs {b.image.shape}")
    fa, fb = a.pixel_set(), b.pixel_set()
    ratio = len(fa ^ fb) / max(len(fa), len(fb))
    return ratio >= threshold


def build_dataset(
    params: GeneratorParams, n_train: int, n_val: int, n_test: int
) -> Dataset:
    """Generate train first, then val/test curves dissimilar to every train
    curve, with flood-fill masks and a provenance manifest."""
    if min(n_train, n_val, n_test) < 0:
        raise ValueError("split sizes must be non-negative")
    curves: List[JordanCurve] = []
    records: List[Dict] = []
    counter = 0

    def next_curve() -> JordanCurve:
        nonlocal counter
        curve = generate_curve(params, derive_seed(params.seed, counter))
        counter += 1
        return curve

    train: List[JordanCurve] = []
    for i in range(n_train):
        train.append(next_curve())
    curves.extend(train)
    records.extend({"split": "train", "index": i} for i in range(n_train))

    for split, count in (("val", n_val), ("test", n_test)):
        for i in range(count):
            for _ in range(params.max_retries):
                candidate = next_curve()
                if all(dissimilar(candidate, t) for t in train):
                    break
            else:
                raise RetryExhausted(
                    f"could not find a {split} curve dissimilar to the training set"
                )
            curves.append(candidate)
            records.append({"split": split, "index": i})

    for rec in records:
        stem = f"{rec['split']}_{rec['index']:04d}"
        rec["image"] = stem + ".pbm"
        rec["mask"] = stem + ".pgm"

    masks = tuple(flood_fill_outside(c.image) for c in curves)
    manifest = {
        "format_version": 1,
        "family": params.family,
        "dataset": params.dataset_name(),
        "image_size": params.image_size,
        "seed": params.seed,
        "generator": {
            "max_vertices": params.max_vertices,
            "max_retries": params.max_retries,
        },
        "counts": {"train": n_train, "val": n_val, "test": n_test},
        "records": records,
    }
    return Dataset(curves=tuple(curves), masks=masks, manifest=manifest)
