"""On-disk dataset layout: PBM images, PGM masks and a JSON manifest.

A dataset directory contains manifest.json plus one .pbm/.pgm pair per
curve, named {split}_{index:04d}.  The manifest pins its key order and the
writers emit fixed text formats, so writing the same dataset twice gives a
byte-identical tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple, Union

from .generators import Dataset
from .grid import BinaryImage
from .netpbm import read_pbm, read_pgm, write_pbm, write_pgm
from .oracles import InsidenessMask

MANIFEST_NAME = "manifest.json"

PathLike = Union[str, Path]


def manifest_dumps(manifest: Dict) -> str:
    return json.dumps(manifest, indent=2) + "\n"


def write_dataset(dataset: Dataset, out_dir: PathLike) -> Path:
    """Write curves, masks and manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records = dataset.manifest["records"]
    if len(records) != len(dataset.curves) or len(records) != len(dataset.masks):
        raise ValueError("manifest records out of sync with curves/masks")
    for curve, mask, record in zip(dataset.curves, dataset.masks, records):
        write_pbm(curve.image, out / record["image"])
        write_pgm(mask, out / record["mask"])
    manifest_path = out / MANIFEST_NAME
    manifest_path.write_text(manifest_dumps(dataset.manifest), encoding="ascii")
    return manifest_path


@dataclass(frozen=True)
class LoadedDataset:
    manifest: Dict
    images: Tuple[BinaryImage, ...]
    masks: Tuple[InsidenessMask, ...]

    @property
    def records(self) -> List[Dict]:
        return self.manifest["records"]


def load_dataset(directory: PathLike) -> LoadedDataset:
    """Read a dataset directory back; errors on missing or mismatched files."""
    root = Path(directory)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise FileNotFoundError(f"no {MANIFEST_NAME} in {root}")
    manifest = json.loads(manifest_path.read_text(encoding="ascii"))
    if "records" not in manifest:
        raise ValueError(f"{manifest_path} has no records")
    images, masks = [], []
    for record in manifest["records"]:
        img = read_pbm(root / record["image"])
        mask = read_pgm(root / record["mask"])
        if img.shape != mask.shape:
            raise ValueError(
                f"{record['image']} and {record['mask']} disagree on dimensions"
            )
        images.append(img)
        masks.append(mask)
    return LoadedDataset(manifest=manifest, images=tuple(images), masks=tuple(masks))
