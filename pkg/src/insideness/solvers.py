"""Registry of insideness solvers used by verification.

Each solver maps a curve image to an InsidenessMask (plus steps to
fixpoint for the recurrent ones).  Feed-forward networks are cached per
image size; the dilated variant embeds images into the next power-of-two
canvas, since zero padding adds no crossings.
"""

from __future__ import annotations

from typing import Callable, Dict, Optional, Tuple

from .grid import BinaryImage, require_jordan_curve
from .networks import RayNetSpec, build_dilated_ray_net, build_ray_net, eval_net
from .oracles import InsidenessMask, flood_fill_outside, ray_parity_insideness
from .recurrent import (
    build_coloring_convlstm,
    build_identity_convlstm,
    run_coloring,
    run_convlstm,
    unroll_stack,
    mask_from_binary,
)

SolverResult = Tuple[InsidenessMask, Optional[int]]

_ray_nets: Dict[int, RayNetSpec] = {}
_dilated_nets: Dict[int, RayNetSpec] = {}


def next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def _ray_net_for(side: int) -> RayNetSpec:
    net = _ray_nets.get(side)
    if net is None:
        net = build_ray_net(side)
        _ray_nets[side] = net
    return net


def _dilated_net_for(side: int) -> RayNetSpec:
    padded = next_pow2(max(side, 4))
    net = _dilated_nets.get(padded)
    if net is None:
        net = build_dilated_ray_net(padded)
        _dilated_nets[padded] = net
    return net


def solve_flood(img: BinaryImage) -> SolverResult:
    return flood_fill_outside(img), None


def solve_ray_oracle(img: BinaryImage) -> SolverResult:
    return ray_parity_insideness(img), None


def solve_ray_net(img: BinaryImage) -> SolverResult:
    return eval_net(_ray_net_for(max(img.height, img.width)), img), None


def solve_dilated_net(img: BinaryImage) -> SolverResult:
    return eval_net(_dilated_net_for(max(img.height, img.width)), img), None


def solve_rnn(img: BinaryImage) -> SolverResult:
    result = run_coloring(img)
    return result.mask, result.steps


def solve_convlstm(img: BinaryImage) -> SolverResult:
    result = run_convlstm(build_coloring_convlstm(), img)
    return result.mask, result.steps


def solve_stacked(img: BinaryImage) -> SolverResult:
    require_jordan_curve(img)
    cells = [build_coloring_convlstm(), build_identity_convlstm()]
    final, steps = unroll_stack(cells, img, monotone=True)
    return mask_from_binary(final, img), steps


SOLVERS: Dict[str, Callable[[BinaryImage], SolverResult]] = {
    "flood": solve_flood,
    "ray-oracle": solve_ray_oracle,
    "ray-net": solve_ray_net,
    "dilated-net": solve_dilated_net,
    "rnn": solve_rnn,
    "convlstm": solve_convlstm,
    "stacked": solve_stacked,
}

ANALYTIC_SOLVERS = ("ray-net", "dilated-net", "rnn", "convlstm", "stacked")


def get_solver(name: str) -> Callable[[BinaryImage], SolverResult]:
    try:
        return SOLVERS[name]
    except KeyError:
        raise ValueError(
            f"unknown solver {name!r}; choose from {', '.join(sorted(SOLVERS))}"
        ) from None
