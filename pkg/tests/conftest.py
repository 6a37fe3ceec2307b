import pytest

from insideness import (
    BinaryImage,
    derive_seed,
    gen_digs,
    gen_polar,
    gen_random_walk,
    gen_spiral,
)

RING_ROWS = [
    ".....",
    ".###.",
    ".#.#.",
    ".###.",
    ".....",
]

# A valid 9x9 curve whose inside is a diagonal chain of pockets: the inside
# block {(2,2),(2,3),(3,2),(3,3)} connects to the inside pixel (4,4) only
# through the diagonal gap between the curve pixels (3,4) and (4,3).
DIAGONAL_INSIDE_ROWS = [
    ".........",
    ".####....",
    ".#..#....",
    ".#..##...",
    ".###.#...",
    "...###...",
    ".........",
    ".........",
    ".........",
]

# A valid 9x9 curve whose OUTSIDE contains the pixel (4,4), reachable from
# the border only through the diagonal gap at (3,5): 4-connected growth from
# the border cannot colour it, while the definition (8-adjacency) and ray
# parity both call it outside.  Curves like this are rejected by the
# generators but remain valid inputs for the exact oracles.
DIAGONAL_OUTSIDE_POCKET_ROWS = [
    ".........",
    ".####....",
    ".#..#....",
    ".#.##....",
    ".#.#.###.",
    ".#.###.#.",
    ".##....#.",
    "..######.",
    ".........",
]


@pytest.fixture(scope="session")
def ring5():
    return BinaryImage.from_rows(RING_ROWS)


@pytest.fixture(scope="session")
def diagonal_inside_curve():
    return BinaryImage.from_rows(DIAGONAL_INSIDE_ROWS)


@pytest.fixture(scope="session")
def outside_pocket_curve():
    return BinaryImage.from_rows(DIAGONAL_OUTSIDE_POCKET_ROWS)


UNIT_SEED = 1729


@pytest.fixture(scope="session")
def small_corpus():
    """A few curves of every family, for cross-module properties."""
    curves = {
        "polar24": [gen_polar(derive_seed(UNIT_SEED, i), 24) for i in range(6)],
        "polar4": [gen_polar(derive_seed(UNIT_SEED, 100 + i), 4) for i in range(4)],
        "spiral": [gen_spiral(derive_seed(UNIT_SEED, 200 + i)) for i in range(6)],
        "digs": [gen_digs(derive_seed(UNIT_SEED, 300 + i)) for i in range(6)],
        "random_walk": [
            gen_random_walk(derive_seed(UNIT_SEED, 400 + i), 42) for i in range(6)
        ],
    }
    return curves


@pytest.fixture(scope="session")
def all_small_curves(small_corpus):
    return [c for curves in small_corpus.values() for c in curves]
