"""Verification reports: delimited text, JSON, and rendered figures.

A report aggregates per-image comparisons of a solver against the stored
ground-truth masks.  Formatting is deterministic: fixed key order, tab
separated per-image rows, six fractional digits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

PathLike = Union[str, Path]

REPORT_TEXT = "report.txt"
REPORT_JSON = "report.json"
REPORT_FIGURE = "report.png"


@dataclass(frozen=True)
class ImageResult:
    index: int
    image_file: str
    per_pixel: float
    per_image: int
    compared_pixels: int
    steps: Optional[int] = None


@dataclass(frozen=True)
class VerificationReport:
    solver: str
    dataset_id: str
    include_curve: bool
    results: Tuple[ImageResult, ...]

    @property
    def per_image_accuracy(self) -> float:
        if not self.results:
            return 1.0
        return sum(r.per_image for r in self.results) / len(self.results)

    @property
    def per_pixel_accuracy(self) -> float:
        total = sum(r.compared_pixels for r in self.results)
        if total == 0:
            return 1.0
        matched = sum(r.per_pixel * r.compared_pixels for r in self.results)
        return matched / total

    @property
    def failures(self) -> List[int]:
        return [r.index for r in self.results if r.per_image == 0]

    def steps_stats(self) -> Optional[Dict[str, float]]:
        steps = [r.steps for r in self.results if r.steps is not None]
        if not steps:
            return None
        return {
            "min": float(min(steps)),
            "mean": float(sum(steps) / len(steps)),
            "max": float(max(steps)),
        }

    def all_exact(self) -> bool:
        return self.per_image_accuracy == 1.0

    def to_dict(self) -> Dict:
        doc = {
            "solver": self.solver,
            "dataset": self.dataset_id,
            "include_curve": self.include_curve,
            "images": len(self.results),
            "per_pixel_accuracy": round(self.per_pixel_accuracy, 6),
            "per_image_accuracy": round(self.per_image_accuracy, 6),
            "failures": self.failures,
            "steps": self.steps_stats(),
            "per_image": [
                {
                    "index": r.index,
                    "image": r.image_file,
                    "per_pixel": round(r.per_pixel, 6),
                    "per_image": r.per_image,
                    "steps": r.steps,
                }
                for r in self.results
            ],
        }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        lines = [
            f"solver\t{self.solver}",
            f"dataset\t{self.dataset_id}",
            f"include_curve\t{int(self.include_curve)}",
            f"images\t{len(self.results)}",
            f"per_pixel_accuracy\t{self.per_pixel_accuracy:.6f}",
            f"per_image_accuracy\t{self.per_image_accuracy:.6f}",
            f"failures\t{','.join(map(str, self.failures)) if self.failures else '-'}",
        ]
        stats = self.steps_stats()
        if stats is not None:
            lines.append(
                f"steps\tmin={stats['min']:.0f}\tmean={stats['mean']:.6f}\tmax={stats['max']:.0f}"
            )
        lines.append("")
        lines.append("index\timage\tper_pixel\tper_image\tsteps")
        for r in self.results:
            steps = "-" if r.steps is None else str(r.steps)
            lines.append(
                f"{r.index}\t{r.image_file}\t{r.per_pixel:.6f}\t{r.per_image}\t{steps}"
            )
        return "\n".join(lines) + "\n"


def render_report_figure(report: VerificationReport, path: PathLike) -> Path:
    """Render accuracy-per-image and steps histogram panels to a PNG."""
    steps = [r.steps for r in report.results if r.steps is not None]
    n_panels = 2 if steps else 1
    fig, axes = plt.subplots(1, n_panels, figsize=(5 * n_panels, 3.5))
    if n_panels == 1:
        axes = [axes]

    acc = [r.per_pixel for r in report.results]
    axes[0].plot(range(len(acc)), acc, ".", markersize=4)
    axes[0].set_ylim(-0.02, 1.02)
    axes[0].set_xlabel("image index")
    axes[0].set_ylabel("per-pixel accuracy")
    axes[0].set_title(
        f"{report.solver} on {report.dataset_id}\n"
        f"per-image accuracy {report.per_image_accuracy:.4f}"
    )
    for idx in report.failures:
        axes[0].axvline(idx, color="red", alpha=0.3, linewidth=0.8)

    if steps:
        axes[1].hist(steps, bins=min(30, max(5, len(set(steps)))), color="tab:blue")
        axes[1].set_xlabel("steps to fixpoint")
        axes[1].set_ylabel("images")
        axes[1].set_title("recurrent unrolling")

    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def write_report(
    report: VerificationReport, out_dir: PathLike, figure: bool = True
) -> Dict[str, Path]:
    """Write report.txt, report.json and optionally report.png."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "text": out / REPORT_TEXT,
        "json": out / REPORT_JSON,
    }
    paths["text"].write_text(report.to_text(), encoding="ascii")
    paths["json"].write_text(report.to_json(), encoding="ascii")
    if figure:
        paths["figure"] = render_report_figure(report, out / REPORT_FIGURE)
    return paths
