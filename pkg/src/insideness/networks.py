"""Hand-constructed feed-forward networks that solve insideness exactly.

Everything here is weights written down by hand, not learned.  The central
construction is a 4-layer ReLU convnet: layer 1 detects vertically adjacent
curve-pixel pairs ([X(i,j) + X(i+1,j) - 1]_+ with a 2x1 kernel), layer 2
sums them along the rightward ray with a 1xN all-ones kernel (the crossing
count), and layers 3-4 are a parity head that maps an integer count to
odd=1 / even=0.  A variant replaces the 1xN layer with log2(N) dilated
3x3 convolutions whose dilation doubles per layer; its sums are exactly
equal, not approximately.

Conventions: activations are float64 arrays of shape (H, W, C); kernels
zero-pad at the image boundary; a kernel is "anchored" by the index of the
tap that reads the output pixel itself, so the 2x1 layer-1 kernel anchored
at (0, 0) reads rows i and i+1.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .grid import BinaryImage
from .oracles import CURVE, INSIDE, OUTSIDE, CrossingsField, InsidenessMask

FeatureTensor = np.ndarray  # (H, W, C) float64

RELU = "relu"
SIGMOID = "sigmoid"
LINEAR = "linear"

#: Kernel accumulating a ray sum pairwise; with dilations 1, 2, 4, ... it
#: doubles the accumulated ray length at every layer.
RAY_SUM_KERNEL = np.array([[0.0, 0.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.0]])


@dataclass(frozen=True)
class ConvLayerSpec:
    """One convolutional layer: kernel (kh, kw, cin, cout), per-channel bias,
    dilation factor, anchor tap, and nonlinearity."""

    kernel: np.ndarray
    bias: np.ndarray
    dilation: int = 1
    anchor: Tuple[int, int] = (0, 0)
    nonlinearity: str = RELU
    sigmoid_scale: float = 1.0

    def __post_init__(self):
        k = np.asarray(self.kernel, dtype=np.float64)
        if k.ndim != 4:
            raise ValueError(f"kernel must have shape (kh, kw, cin, cout), got {k.shape}")
        b = np.asarray(self.bias, dtype=np.float64)
        if b.shape != (k.shape[3],):
            raise ValueError(f"bias shape {b.shape} does not match cout={k.shape[3]}")
        if self.dilation < 1:
            raise ValueError("dilation must be >= 1")
        ar, ac = self.anchor
        if not (0 <= ar < k.shape[0] and 0 <= ac < k.shape[1]):
            raise ValueError(f"anchor {self.anchor} outside kernel {k.shape[:2]}")
        if self.nonlinearity not in (RELU, SIGMOID, LINEAR):
            raise ValueError(f"unknown nonlinearity {self.nonlinearity!r}")
        object.__setattr__(self, "kernel", k)
        object.__setattr__(self, "bias", b)

    @property
    def cin(self) -> int:
        return self.kernel.shape[2]

    @property
    def cout(self) -> int:
        return self.kernel.shape[3]


@dataclass(frozen=True)
class RayNetSpec:
    """An ordered layer list plus the image side N and crossing bound C."""

    layers: Tuple[ConvLayerSpec, ...]
    side: int
    max_crossings: int

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.max_crossings > self.side:
            raise ValueError("crossing bound cannot exceed the image side")


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically safe logistic function."""
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _as_tensor(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ValueError(f"expected (H, W) or (H, W, C) input, got shape {arr.shape}")
    return arr


def conv2d(inputs, layer: ConvLayerSpec) -> FeatureTensor:
    """Dilated convolution with zero padding, same spatial dims as the input.

    output[i, j, o] = nl( sum_{u,v,c} input[i + d*(u-ar), j + d*(v-ac), c]
                          * K[u, v, c, o] + bias[o] )
    with out-of-range reads as 0.
    """
    x = _as_tensor(inputs)
    h, w, cin = x.shape
    if cin != layer.cin:
        raise ValueError(f"input has {cin} channels, layer expects {layer.cin}")
    kh, kw, _, cout = layer.kernel.shape
    d = layer.dilation
    ar, ac = layer.anchor
    out = np.zeros((h, w, cout), dtype=np.float64)
    for u in range(kh):
        for v in range(kw):
            weights = layer.kernel[u, v]
            if not weights.any():
                continue
            dr, dc = d * (u - ar), d * (v - ac)
            src_r0, src_r1 = max(0, dr), min(h, h + dr)
            src_c0, src_c1 = max(0, dc), min(w, w + dc)
            if src_r0 >= src_r1 or src_c0 >= src_c1:
                continue
            dst_r0, dst_r1 = src_r0 - dr, src_r1 - dr
            dst_c0, dst_c1 = src_c0 - dc, src_c1 - dc
            out[dst_r0:dst_r1, dst_c0:dst_c1] += (
                x[src_r0:src_r1, src_c0:src_c1] @ weights
            )
    out += layer.bias
    if layer.nonlinearity == RELU:
        np.maximum(out, 0.0, out=out)
    elif layer.nonlinearity == SIGMOID:
        out = sigmoid(layer.sigmoid_scale * out)
    return out


def run_layers(layers: Sequence[ConvLayerSpec], inputs) -> FeatureTensor:
    x = _as_tensor(inputs)
    for layer in layers:
        x = conv2d(x, layer)
    return x


def _require_binary(arr: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(arr)
    if not np.isin(a, (0, 1)).all():
        raise ValueError(f"{what} must contain only 0 and 1")
    return a.astype(np.float64)


def boolean_not_net(x) -> np.ndarray:
    """Elementwise NOT as a ReLU net: [-x + 1]_+."""
    arr = _require_binary(x, "NOT input")
    layer = ConvLayerSpec(
        kernel=np.array([[[[-1.0]]]]), bias=np.array([1.0]), nonlinearity=RELU
    )
    return conv2d(arr, layer)[:, :, 0]


def boolean_and_net(x1, x2) -> np.ndarray:
    """Elementwise AND as a ReLU net: [x1 + x2 - 1]_+."""
    a = _require_binary(x1, "AND input")
    b = _require_binary(x2, "AND input")
    if a.shape != b.shape:
        raise ValueError(f"AND inputs must share a shape: {a.shape} vs {b.shape}")
    stacked = np.stack([a, b], axis=-1)
    layer = ConvLayerSpec(
        kernel=np.array([[[[1.0], [1.0]]]]), bias=np.array([-1.0]), nonlinearity=RELU
    )
    return conv2d(stacked, layer)[:, :, 0]


def build_parity_head(max_value: int) -> List[ConvLayerSpec]:
    """Two 1x1 ReLU layers mapping an integer n in [0, max_value] to n mod 2.

    The hidden layer has one triplet of units per even number 2u up to
    max_value, thresholding at 2u - 1/2, 2u and 2u + 1/2; the output layer
    weights each triplet (-2, +4, -2) and adds 1.  On integer inputs each
    triplet contributes -1 exactly when n == 2u, so the output is 0 for
    even n and 1 for odd n, with integer-valued activations throughout.
    """
    if max_value < 0:
        raise ValueError("parity bound must be non-negative")
    n_triplets = max_value // 2 + 1
    hidden = 3 * n_triplets
    k1 = np.ones((1, 1, 1, hidden))
    b1 = np.empty(hidden)
    for u in range(n_triplets):
        b1[3 * u] = -(2 * u - 0.5)
        b1[3 * u + 1] = -(2 * u)
        b1[3 * u + 2] = -(2 * u + 0.5)
    k2 = np.zeros((1, 1, hidden, 1))
    k2[0, 0, 0::3, 0] = -2.0
    k2[0, 0, 1::3, 0] = 4.0
    k2[0, 0, 2::3, 0] = -2.0
    b2 = np.array([1.0])
    return [
        ConvLayerSpec(kernel=k1, bias=b1, nonlinearity=RELU),
        ConvLayerSpec(kernel=k2, bias=b2, nonlinearity=RELU),
    ]


def parity(head: Sequence[ConvLayerSpec], n: int) -> float:
    """Evaluate a parity head on a single integer."""
    x = np.full((1, 1, 1), float(n))
    return float(run_layers(head, x)[0, 0, 0])


def build_ray_net(side: int, max_crossings: Optional[int] = None) -> RayNetSpec:
    """The 4-layer ray-crossing network for side x side images.

    Layer 1: 2x1 kernel, [X(i,j) + X(i+1,j) - 1]_+, one pair-detection per
    pixel.  Layer 2: 1xN all-ones kernel anchored at its left tap, summing
    the detections rightward (the crossing count).  Layers 3-4: parity head.
    Thresholding the output at 0.5 yields insideness at 0-pixels.
    """
    if side < 3:
        raise ValueError("side must be at least 3")
    c = side if max_crossings is None else max_crossings
    layer1 = ConvLayerSpec(
        kernel=np.array([1.0, 1.0]).reshape(2, 1, 1, 1),
        bias=np.array([-1.0]),
        anchor=(0, 0),
        nonlinearity=RELU,
    )
    layer2 = ConvLayerSpec(
        kernel=np.ones((1, side, 1, 1)),
        bias=np.array([0.0]),
        anchor=(0, 0),
        nonlinearity=RELU,
    )
    return RayNetSpec(
        layers=(layer1, layer2, *build_parity_head(c)), side=side, max_crossings=c
    )


def build_dilated_ray_net(side: int) -> RayNetSpec:
    """Ray net with the 1xN layer replaced by log2(N) dilated convolutions.

    Each dilated layer applies the two-tap rightward kernel with dilation
    1, 2, 4, ..., N/2, doubling the accumulated ray length; after the last
    one every unit holds the full N-long ray sum, exactly.
    """
    if side < 2 or side & (side - 1) != 0:
        raise ValueError(f"side must be a power of two, got {side}")
    layer1 = ConvLayerSpec(
        kernel=np.array([1.0, 1.0]).reshape(2, 1, 1, 1),
        bias=np.array([-1.0]),
        anchor=(0, 0),
        nonlinearity=RELU,
    )
    dilated = [
        ConvLayerSpec(
            kernel=RAY_SUM_KERNEL.reshape(3, 3, 1, 1),
            bias=np.array([0.0]),
            dilation=2**i,
            anchor=(1, 1),
            nonlinearity=RELU,
        )
        for i in range(side.bit_length() - 1)
    ]
    return RayNetSpec(
        layers=(layer1, *dilated, *build_parity_head(side)),
        side=side,
        max_crossings=side,
    )


def crossing_layers(net: RayNetSpec) -> Tuple[ConvLayerSpec, ...]:
    """The layers of a ray net up to (and excluding) its parity head."""
    return net.layers[:-2]


def network_crossings(net: RayNetSpec, img: BinaryImage) -> CrossingsField:
    """Crossing counts as computed by the network's summing layers."""
    x = _embed(img, net.side)
    h = run_layers(crossing_layers(net), x)
    counts = h[: img.height, : img.width, 0]
    return CrossingsField(np.rint(counts).astype(np.int64))


def _embed(img: BinaryImage, side: int) -> np.ndarray:
    if img.height > side or img.width > side:
        raise ValueError(
            f"image {img.height}x{img.width} exceeds network side {side}"
        )
    canvas = np.zeros((side, side), dtype=np.float64)
    canvas[: img.height, : img.width] = img.pixels
    return canvas


def eval_net(net: RayNetSpec, img: BinaryImage) -> InsidenessMask:
    """Run the network and threshold its output at 0.5.

    Images smaller than the network side are embedded top-left in a zero
    canvas (zeros add no crossings) and the output is cropped back.
    """
    x = _embed(img, net.side)
    y = run_layers(net.layers, x)[: img.height, : img.width, 0]
    labels = np.where(y >= 0.5, INSIDE, OUTSIDE).astype(np.uint8)
    labels[img.pixels == 1] = CURVE
    return InsidenessMask(labels)


# --- plain-text serialization -------------------------------------------

_FORMAT = "insideness-net/1"


def net_to_text(net: RayNetSpec) -> str:
    """Serialize constructed weights to a stable, diffable JSON text."""
    doc = {
        "format": _FORMAT,
        "side": net.side,
        "max_crossings": net.max_crossings,
        "layers": [
            {
                "kernel_shape": list(layer.kernel.shape),
                "kernel": layer.kernel.ravel().tolist(),
                "bias": layer.bias.tolist(),
                "dilation": layer.dilation,
                "anchor": list(layer.anchor),
                "nonlinearity": layer.nonlinearity,
                "sigmoid_scale": layer.sigmoid_scale,
            }
            for layer in net.layers
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def net_from_text(text: str) -> RayNetSpec:
    doc = json.loads(text)
    if doc.get("format") != _FORMAT:
        raise ValueError(f"unknown net format {doc.get('format')!r}")
    layers = []
    for entry in doc["layers"]:
        shape = tuple(entry["kernel_shape"])
        layers.append(
            ConvLayerSpec(
                kernel=np.array(entry["kernel"], dtype=np.float64).reshape(shape),
                bias=np.array(entry["bias"], dtype=np.float64),
                dilation=entry["dilation"],
                anchor=tuple(entry["anchor"]),
                nonlinearity=entry["nonlinearity"],
                sigmoid_scale=entry["sigmoid_scale"],
            )
        )
    return RayNetSpec(
        layers=tuple(layers), side=doc["side"], max_crossings=doc["max_crossings"]
    )


def save_net(net: RayNetSpec, path) -> None:
    with io.open(path, "w", encoding="ascii") as fh:
        fh.write(net_to_text(net))


def load_net(path) -> RayNetSpec:
    with io.open(path, "r", encoding="ascii") as fh:
        return net_from_text(fh.read())
