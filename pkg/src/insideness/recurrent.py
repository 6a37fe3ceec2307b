"""Recurrent cells that realise the border-coloring routine.

The routine labels the image border "outside" and grows that label one
step per iteration through 4-neighbourhoods, blocked by curve pixels:
a pixel becomes outside iff it is not on the curve and at least one of
{itself, up, down, left, right} already is.  Growth from the border is
enough, because for a valid digital Jordan curve the outside region is
4-connected to the border (the test suite verifies this exhaustively on
small images); the inside is simply what never gets coloured.

Two cells implement one routine step:

* a single sigmoid unit per pixel,
  h' = sigmoid(q * (sum of the 5 neighbourhood values - 5*X - 1/2)),
  with q large enough that activations saturate and labels cannot fade;
* a convolutional LSTM whose output gate computes the same expression,
  with input/forget/candidate gates saturated so the cell state only
  feeds tanh(c) ~= 1 into h = o * tanh(c).  The binarised hidden state
  of both cells follows the identical step dynamics.

Neighbourhood values beyond the image read as 1 for the sigmoid cell
(everything beyond the border counts as outside); the LSTM zero-pads.
Both conventions agree because border pixels are initialised to 1 and a
pixel's own value is part of its neighbourhood, so border pixels stay
coloured either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .grid import BinaryImage, require_jordan_curve
from .oracles import CURVE, INSIDE, OUTSIDE, InsidenessMask
from .networks import sigmoid

DEFAULT_Q = 64.0
BINARIZE_THRESHOLD = 0.5


class NoConvergence(RuntimeError):
    """The recurrent unrolling did not reach a fixpoint within max_steps."""


@dataclass(frozen=True)
class ColoringState:
    """Hidden map of one coloring cell plus the step count that produced it."""

    hidden: np.ndarray
    step: int = 0

    def __post_init__(self):
        arr = np.asarray(self.hidden, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("hidden state must be 2-D")
        object.__setattr__(self, "hidden", arr)

    def binarized(self) -> np.ndarray:
        return self.hidden >= BINARIZE_THRESHOLD


@dataclass(frozen=True)
class ColoringResult:
    mask: InsidenessMask
    steps: int


def border_init(height: int, width: int) -> np.ndarray:
    """1.0 on the border ring, 0.0 elsewhere."""
    state = np.zeros((height, width), dtype=np.float64)
    state[0, :] = state[-1, :] = 1.0
    state[:, 0] = state[:, -1] = 1.0
    return state


def initial_coloring_state(img: BinaryImage) -> ColoringState:
    return ColoringState(hidden=border_init(img.height, img.width), step=0)


def _cross_sum(hidden: np.ndarray, pad_value: float) -> np.ndarray:
    """Sum of the pixel and its 4 neighbours, out-of-image reads pad_value."""
    padded = np.pad(hidden, 1, constant_values=pad_value)
    return (
        padded[:-2, 1:-1]
        + padded[2:, 1:-1]
        + padded[1:-1, :-2]
        + padded[1:-1, 2:]
        + hidden
    )


def coloring_step_rnn(
    state: ColoringState, img: BinaryImage, q: float = DEFAULT_Q
) -> ColoringState:
    """One synchronous update of the sigmoid coloring cell."""
    if q <= 0:
        raise ValueError("q must be positive")
    if state.hidden.shape != img.shape:
        raise ValueError(f"state {state.hidden.shape} does not match image {img.shape}")
    neighbourhood = _cross_sum(state.hidden, pad_value=1.0)
    arg = neighbourhood - 5.0 * img.pixels - 0.5
    return ColoringState(hidden=sigmoid(q * arg), step=state.step + 1)


def mask_from_binary(outside_map: np.ndarray, img: BinaryImage) -> InsidenessMask:
    labels = np.where(outside_map, OUTSIDE, INSIDE).astype(np.uint8)
    labels[img.pixels == 1] = CURVE
    return InsidenessMask(labels)


def _iterate_to_fixpoint(step_fn, first_binary: np.ndarray, max_steps: int):
    """Run binarised dynamics until stable; returns (binary_map, steps).

    Raises NoConvergence past max_steps and RuntimeError if the coloured
    set ever shrinks (the dynamics are monotone by construction).
    """
    prev = first_binary
    for step in range(1, max_steps + 1):
        current = step_fn()
        if (prev & ~current).any():
            raise RuntimeError("coloured set shrank; saturation scale q is too small")
        if (current == prev).all():
            return current, step
        prev = current
    raise NoConvergence(f"no fixpoint within {max_steps} steps")


def run_coloring(
    img: BinaryImage,
    q: float = DEFAULT_Q,
    max_steps: Optional[int] = None,
) -> ColoringResult:
    """Unroll the sigmoid cell from the border until the labels stabilise.

    The image must be a valid Jordan curve.  Returns the resulting mask
    (coloured 0-pixels are outside, uncoloured ones inside) and the number
    of steps taken to reach the fixpoint.
    """
    require_jordan_curve(img)
    if max_steps is None:
        max_steps = img.height * img.width
    state = initial_coloring_state(img)
    holder = {"state": state}

    def advance():
        holder["state"] = coloring_step_rnn(holder["state"], img, q)
        return holder["state"].binarized()

    final, steps = _iterate_to_fixpoint(advance, state.binarized(), max_steps)
    return ColoringResult(mask=mask_from_binary(final, img), steps=steps)


def coloring_truth_table() -> List[Tuple[int, Tuple[int, int, int, int, int], int]]:
    """All 64 one-step cases of the coloring routine.

    Rows are (curve_bit, neighbourhood_bits, output_bit) in ascending binary
    order of (curve_bit, bits); neighbourhood bits are ordered (self, up,
    down, left, right).  Output is 1 iff the pixel is off the curve and at
    least one neighbourhood bit is set.
    """
    rows = []
    for x in (0, 1):
        for packed in range(32):
            bits = tuple((packed >> (4 - i)) & 1 for i in range(5))
            out = 1 if x == 0 and any(bits) else 0
            rows.append((x, bits, out))
    return rows


def probe_coloring_step(
    curve_bit: int, bits: Sequence[int], q: float = DEFAULT_Q
) -> int:
    """Evaluate one step of the sigmoid cell on a single 5-point case.

    Builds a 3x3 image whose centre carries curve_bit, sets the hidden
    state to the given (self, up, down, left, right) bits, and returns the
    binarised centre output.
    """
    img_arr = np.zeros((3, 3), dtype=np.uint8)
    img_arr[1, 1] = curve_bit
    hidden = np.zeros((3, 3), dtype=np.float64)
    b_self, b_up, b_down, b_left, b_right = bits
    hidden[1, 1] = b_self
    hidden[0, 1] = b_up
    hidden[2, 1] = b_down
    hidden[1, 0] = b_left
    hidden[1, 2] = b_right
    state = ColoringState(hidden=hidden, step=0)
    # the probed centre sits at (1,1), so its whole neighbourhood is
    # in-image and the out-of-image reads cannot reach it
    new = coloring_step_rnn(state, BinaryImage(img_arr), q)
    return int(new.hidden[1, 1] >= BINARIZE_THRESHOLD)


# --- convolutional LSTM ----------------------------------------------------


@dataclass(frozen=True)
class GateSpec:
    """One gate: kernel on the input image, kernel on the hidden map, bias."""

    w_x: np.ndarray
    w_h: np.ndarray
    bias: float

    def __post_init__(self):
        object.__setattr__(self, "w_x", np.asarray(self.w_x, dtype=np.float64))
        object.__setattr__(self, "w_h", np.asarray(self.w_h, dtype=np.float64))


@dataclass(frozen=True)
class ConvLstmSpec:
    """Gate parameters of one convolutional LSTM cell.

    Step equations (zero padding, centred odd kernels):
        i = sigmoid(w_xi * x + w_hi * h + b_i)
        f = sigmoid(w_xf * x + w_hf * h + b_f)
        g = tanh   (w_xg * x + w_hg * h + b_g)
        o = sigmoid(w_xo * x + w_ho * h + b_o)
        c' = f . c + i . g
        h' = o . tanh(c')
    """

    input_gate: GateSpec
    forget_gate: GateSpec
    cell_gate: GateSpec
    output_gate: GateSpec


def _conv_centered(arr: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Centred single-channel conv with zero padding; odd kernel dims."""
    kh, kw = kernel.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise ValueError("kernel dims must be odd")
    out = np.zeros_like(arr, dtype=np.float64)
    h, w = arr.shape
    cr, cc = kh // 2, kw // 2
    for u in range(kh):
        for v in range(kw):
            weight = kernel[u, v]
            if weight == 0.0:
                continue
            dr, dc = u - cr, v - cc
            src_r0, src_r1 = max(0, dr), min(h, h + dr)
            src_c0, src_c1 = max(0, dc), min(w, w + dc)
            if src_r0 >= src_r1 or src_c0 >= src_c1:
                continue
            out[src_r0 - dr : src_r1 - dr, src_c0 - dc : src_c1 - dc] += (
                weight * arr[src_r0:src_r1, src_c0:src_c1]
            )
    return out


def _gate(gate: GateSpec, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    return _conv_centered(x, gate.w_x) + _conv_centered(h, gate.w_h) + gate.bias


CROSS_KERNEL = np.array(
    [[0.0, 1.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 0.0]]
)


def build_coloring_convlstm(q: float = DEFAULT_Q) -> ConvLstmSpec:
    """A ConvLSTM cell whose binarised hidden state runs the coloring step.

    Input, forget and candidate gates are saturated constants, so the cell
    state integrates to tanh(c) ~= 1 and h' ~= o.  The output gate carries
    the whole routine: o = sigmoid(q * (neighbourhood sum - 5x - 1/2)).
    """
    if q <= 0:
        raise ValueError("q must be positive")
    zero1 = np.zeros((1, 1))
    saturated = GateSpec(w_x=zero1, w_h=zero1, bias=q / 2.0)
    output = GateSpec(
        w_x=np.array([[-5.0 * q]]),
        w_h=q * CROSS_KERNEL,
        bias=-q / 2.0,
    )
    return ConvLstmSpec(
        input_gate=saturated,
        forget_gate=saturated,
        cell_gate=saturated,
        output_gate=output,
    )


def build_identity_convlstm(q: float = DEFAULT_Q) -> ConvLstmSpec:
    """A ConvLSTM cell that reproduces its input after binarisation.

    The output gate reads only the input, o = sigmoid(q * (x - 1/2)), with
    the hidden-to-output kernel zeroed out.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    zero1 = np.zeros((1, 1))
    saturated = GateSpec(w_x=zero1, w_h=zero1, bias=q / 2.0)
    output = GateSpec(w_x=np.array([[q]]), w_h=zero1, bias=-q / 2.0)
    return ConvLstmSpec(
        input_gate=saturated,
        forget_gate=saturated,
        cell_gate=saturated,
        output_gate=output,
    )


def convlstm_step(
    cell: ConvLstmSpec, h: np.ndarray, c: np.ndarray, x: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """One step of the standard ConvLSTM equations."""
    i = sigmoid(_gate(cell.input_gate, x, h))
    f = sigmoid(_gate(cell.forget_gate, x, h))
    g = np.tanh(_gate(cell.cell_gate, x, h))
    o = sigmoid(_gate(cell.output_gate, x, h))
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    return h_new, c_new


def unroll_stack(
    cells: Sequence[ConvLstmSpec],
    img: BinaryImage,
    max_steps: Optional[int] = None,
    monotone: bool = False,
) -> Tuple[np.ndarray, int]:
    """Unroll stacked cells until the last one's binarised output is stable.

    The first cell reads the image at every step; each further cell reads
    the hidden map of the one below.  Hidden and cell states start at 1 on
    the border and 0 elsewhere.  Returns the final binarised map of the
    top cell and the number of steps to the fixpoint.
    """
    if not cells:
        raise ValueError("need at least one cell")
    if max_steps is None:
        max_steps = img.height * img.width
    x_img = img.pixels.astype(np.float64)
    init = border_init(img.height, img.width)
    hs = [init.copy() for _ in cells]
    cs = [init.copy() for _ in cells]

    def advance():
        signal = x_img
        for k, cell in enumerate(cells):
            hs[k], cs[k] = convlstm_step(cell, hs[k], cs[k], signal)
            signal = hs[k]
        return hs[-1] >= BINARIZE_THRESHOLD

    prev = init >= BINARIZE_THRESHOLD
    for step in range(1, max_steps + 1):
        current = advance()
        if monotone and (prev & ~current).any():
            raise RuntimeError("coloured set shrank; saturation scale q is too small")
        if (current == prev).all():
            return current, step
        prev = current
    raise NoConvergence(f"no fixpoint within {max_steps} steps")


def run_convlstm(
    cell: ConvLstmSpec, img: BinaryImage, max_steps: Optional[int] = None
) -> ColoringResult:
    """Unroll a single coloring ConvLSTM on a valid Jordan curve."""
    require_jordan_curve(img)
    final, steps = unroll_stack([cell], img, max_steps=max_steps, monotone=True)
    return ColoringResult(mask=mask_from_binary(final, img), steps=steps)


def stack_convlstms(
    cells: Sequence[ConvLstmSpec], img: BinaryImage, max_steps: Optional[int] = None
) -> InsidenessMask:
    """Insideness mask from a stack of ConvLSTM cells.

    With [coloring] or [coloring, identity, ...] stacks the result equals
    run_coloring; identity cells pass the labels through unchanged.
    """
    require_jordan_curve(img)
    final, _ = unroll_stack(cells, img, max_steps=max_steps)
    return mask_from_binary(final, img)
