"""Command-line interface.

Subcommands:

* gen         generate a seeded dataset (PBM images, PGM masks, manifest)
* verify      run a solver over a dataset and write report.txt/.json/.png
* enumerate   cycle counts, Jordan-curve lower bounds, exact enumeration
* truth-table print the 64-case one-step coloring oracle
* parity      build the parity head and evaluate it

All randomness enters through --seed; there is no implicit clock seeding.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .enumeration import (
    SizeTooLarge,
    enumerate_grid_cycles,
    enumerate_jordan_curves_exact,
    jordan_lower_bound,
)
from .generators import (
    DEFAULT_SIZES,
    DIGS,
    POLAR,
    POLAR_VERTEX_CHOICES,
    RANDOM_WALK,
    SPIRAL,
    GeneratorParams,
    RetryExhausted,
    build_dataset,
)
from .networks import build_parity_head, parity
from .oracles import flood_fill_outside, per_image_accuracy
from .recurrent import coloring_truth_table
from .report import ImageResult, VerificationReport, write_report
from .solvers import SOLVERS, get_solver
from .storage import load_dataset, write_dataset

FAMILY_CHOICES = tuple(f"polar{v}" for v in POLAR_VERTEX_CHOICES) + (
    SPIRAL,
    DIGS,
    "random-walk",
)


def _params_for(family: str, size: Optional[int], seed: int) -> GeneratorParams:
    if family.startswith("polar"):
        max_vertices = int(family[len("polar") :])
        return GeneratorParams(
            family=POLAR,
            image_size=size if size is not None else DEFAULT_SIZES[POLAR],
            seed=seed,
            max_vertices=max_vertices,
        )
    name = RANDOM_WALK if family == "random-walk" else family
    return GeneratorParams(
        family=name,
        image_size=size if size is not None else DEFAULT_SIZES[name],
        seed=seed,
    )


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        params = _params_for(args.family, args.size, args.seed)
        dataset = build_dataset(params, args.train, args.val, args.test)
    except (RetryExhausted, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        manifest_path = write_dataset(dataset, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    total = len(dataset.curves)
    print(f"wrote {total} curve/mask pairs and {manifest_path}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        loaded = load_dataset(args.dataset)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    solver = get_solver(args.solver)
    results = []
    for i, (img, truth) in enumerate(zip(loaded.images, loaded.masks)):
        predicted, steps = solver(img)
        per_pixel, per_image = per_image_accuracy(
            predicted, truth, include_curve=args.include_curve
        )
        compared = truth.labels.size
        if not args.include_curve:
            compared = int((truth.labels != 2).sum())
        results.append(
            ImageResult(
                index=i,
                image_file=loaded.records[i]["image"],
                per_pixel=per_pixel,
                per_image=per_image,
                compared_pixels=compared,
                steps=steps,
            )
        )
    dataset_id = loaded.manifest.get("dataset", Path(args.dataset).name)
    report = VerificationReport(
        solver=args.solver,
        dataset_id=str(dataset_id),
        include_curve=args.include_curve,
        results=tuple(results),
    )
    out_dir = args.out if args.out is not None else args.dataset
    paths = write_report(report, out_dir, figure=not args.no_figure)
    print(report.to_text(), end="")
    print(f"report written to {paths['text']} and {paths['json']}")
    if "figure" in paths:
        print(f"figure written to {paths['figure']}")
    return 0 if report.all_exact() else 1


def cmd_enumerate(args: argparse.Namespace) -> int:
    try:
        if args.grid is not None:
            enum = enumerate_grid_cycles(args.grid, args.grid)
            print(f"cycles in {args.grid}x{args.grid} grid graph: {enum.count}")
            return 0
        n = args.image_size
        if n % 2 == 1 and n >= 5:
            bound = jordan_lower_bound(n)
            print(f"lower bound for digital Jordan curves in {n}x{n} images: {bound}")
        elif not args.exact:
            print(
                "error: the lower-bound construction needs an odd image size >= 5; "
                "use --exact for an exhaustive count",
                file=sys.stderr,
            )
            return 2
        if args.exact:
            count, curves = enumerate_jordan_curves_exact(n, want_curves=args.emit is not None)
            print(f"exact count of digital Jordan curves in {n}x{n} images: {count}")
            if args.emit is not None:
                _emit_curves(curves, n, Path(args.emit))
                print(f"wrote {count} curve/mask pairs to {args.emit}")
    except SizeTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def _emit_curves(curves, image_size: int, out: Path) -> None:
    from .netpbm import write_pbm, write_pgm
    from .storage import MANIFEST_NAME, manifest_dumps

    out.mkdir(parents=True, exist_ok=True)
    records = []
    for i, curve in enumerate(curves):
        record = {
            "split": "test",
            "index": i,
            "image": f"test_{i:04d}.pbm",
            "mask": f"test_{i:04d}.pgm",
        }
        write_pbm(curve.image, out / record["image"])
        write_pgm(flood_fill_outside(curve.image), out / record["mask"])
        records.append(record)
    manifest = {
        "format_version": 1,
        "family": "enumeration",
        "dataset": f"enumeration{image_size}",
        "image_size": image_size,
        "seed": None,
        "generator": {"exact": True},
        "counts": {"train": 0, "val": 0, "test": len(records)},
        "records": records,
    }
    (out / MANIFEST_NAME).write_text(manifest_dumps(manifest), encoding="ascii")


def cmd_truth_table(args: argparse.Namespace) -> int:
    print("curve\tself\tup\tdown\tleft\tright\tout")
    for x, bits, out in coloring_truth_table():
        print(f"{x}\t" + "\t".join(str(b) for b in bits) + f"\t{out}")
    return 0


def cmd_parity(args: argparse.Namespace) -> int:
    head = build_parity_head(args.c)
    if args.n is not None:
        if not 0 <= args.n <= args.c:
            print(f"error: n must be within [0, {args.c}]", file=sys.stderr)
            return 2
        value = parity(head, args.n)
        print(f"parity({args.n}) = {value:g}")
        return 0
    if not args.sweep:
        print("error: pass --n VALUE or --sweep", file=sys.stderr)
        return 2
    failures = 0
    for n in range(args.c + 1):
        value = parity(head, n)
        ok = value == n % 2
        failures += 0 if ok else 1
        print(f"n={n}\thead={value:g}\texpected={n % 2}\t{'PASS' if ok else 'FAIL'}")
    return 0 if failures == 0 else 1


def build_argument_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="insideness",
        description="Digital Jordan curve datasets and exact insideness solvers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded dataset")
    gen.add_argument("--family", required=True, choices=FAMILY_CHOICES)
    gen.add_argument("--train", type=int, default=0, help="training curves")
    gen.add_argument("--val", type=int, default=0, help="validation curves")
    gen.add_argument("--test", type=int, default=0, help="test curves")
    gen.add_argument("--size", type=int, default=None, help="image side (family default)")
    gen.add_argument("--seed", type=int, required=True, help="dataset seed (required)")
    gen.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(func=cmd_gen)

    verify = sub.add_parser("verify", help="run a solver against stored masks")
    verify.add_argument("--dataset", required=True, help="dataset directory")
    verify.add_argument("--solver", required=True, choices=sorted(SOLVERS))
    verify.add_argument(
        "--include-curve",
        action="store_true",
        help="also compare curve pixels (default compares background only)",
    )
    verify.add_argument("--out", default=None, help="report directory (default: dataset)")
    verify.add_argument("--no-figure", action="store_true", help="skip report.png")
    verify.set_defaults(func=cmd_verify)

    enum = sub.add_parser("enumerate", help="count cycles and Jordan curves")
    group = enum.add_mutually_exclusive_group(required=True)
    group.add_argument("--grid", type=int, help="count cycles in a k x k grid graph")
    group.add_argument("--image-size", type=int, help="bound/count curves in N x N images")
    enum.add_argument("--exact", action="store_true", help="exhaustively enumerate curves")
    enum.add_argument("--emit", default=None, help="write enumerated curves as a dataset")
    enum.set_defaults(func=cmd_enumerate)

    table = sub.add_parser("truth-table", help="print the 64-case coloring step oracle")
    table.set_defaults(func=cmd_truth_table)

    par = sub.add_parser("parity", help="evaluate the constructed parity head")
    par.add_argument("--c", type=int, required=True, help="crossing bound C")
    par.add_argument("--n", type=int, default=None, help="single value to evaluate")
    par.add_argument("--sweep", action="store_true", help="evaluate all n in [0, C]")
    par.set_defaults(func=cmd_parity)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_argument_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
