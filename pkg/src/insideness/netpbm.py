"""Plain-text netpbm readers and writers (PBM P1 for curve images, PGM P2
for label masks).

The text variants are deliberate: files are dependency-free, human
readable, and byte-stable, so regenerating a dataset with the same seed
reproduces the tree bit for bit.  Masks use maxval 2 with the encoding
0 = outside, 1 = inside, 2 = curve.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Union

import numpy as np

from .grid import BinaryImage
from .oracles import InsidenessMask

MASK_MAXVAL = 2

PathLike = Union[str, Path]


def _format_grid(arr: np.ndarray) -> str:
    return "\n".join(" ".join(str(int(v)) for v in row) for row in arr)


def pbm_dumps(img: BinaryImage) -> str:
    return f"P1\n{img.width} {img.height}\n{_format_grid(img.pixels)}\n"


def pgm_dumps(mask: InsidenessMask) -> str:
    return (
        f"P2\n{mask.width} {mask.height}\n{MASK_MAXVAL}\n{_format_grid(mask.labels)}\n"
    )


def _tokens(text: str) -> List[str]:
    out: List[str] = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0]
        out.extend(stripped.split())
    return out


def _parse_grid(tokens: List[str], width: int, height: int, maxval: int, what: str):
    if width <= 0 or height <= 0:
        raise ValueError(f"{what}: bad dimensions {width}x{height}")
    if len(tokens) != width * height:
        raise ValueError(
            f"{what}: expected {width * height} samples, got {len(tokens)}"
        )
    values = np.array([int(t) for t in tokens], dtype=np.int64)
    if values.min() < 0 or values.max() > maxval:
        raise ValueError(f"{what}: sample out of range 0..{maxval}")
    return values.reshape(height, width)


def pbm_loads(text: str) -> BinaryImage:
    tokens = _tokens(text)
    if not tokens or tokens[0] != "P1":
        raise ValueError("not a plain PBM (P1) file")
    width, height = int(tokens[1]), int(tokens[2])
    return BinaryImage(_parse_grid(tokens[3:], width, height, 1, "PBM"))


def pgm_loads(text: str) -> InsidenessMask:
    tokens = _tokens(text)
    if not tokens or tokens[0] != "P2":
        raise ValueError("not a plain PGM (P2) file")
    width, height = int(tokens[1]), int(tokens[2])
    maxval = int(tokens[3])
    if maxval != MASK_MAXVAL:
        raise ValueError(f"mask PGM must use maxval {MASK_MAXVAL}, got {maxval}")
    return InsidenessMask(_parse_grid(tokens[4:], width, height, maxval, "PGM"))


def write_pbm(img: BinaryImage, path: PathLike) -> None:
    Path(path).write_text(pbm_dumps(img), encoding="ascii")


def read_pbm(path: PathLike) -> BinaryImage:
    return pbm_loads(Path(path).read_text(encoding="ascii"))


def write_pgm(mask: InsidenessMask, path: PathLike) -> None:
    Path(path).write_text(pgm_dumps(mask), encoding="ascii")


def read_pgm(path: PathLike) -> InsidenessMask:
    return pgm_loads(Path(path).read_text(encoding="ascii"))
