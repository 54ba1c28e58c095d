"""Shared hypothesis strategies and small builders for the test suite."""
import itertools
import random

from hypothesis import strategies as st

from nilwitt.nilcat import NilObject
from nilwitt.rings import Z, Matrix, parse_ring
from nilwitt.witt import WittVector

RING_DESCRIPTORS = ["Z", "Z/12", "Z/5", "Z[1/{2,3}]", "Q2(0,1)", "Q2(1,1)/4"]
TORSION_FREE = ["Z", "Z[1/{2,3}]", "Q2(0,1)"]

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def rng_from(seed: int) -> random.Random:
    return random.Random(seed)


def random_elements(ring, seed: int, count: int, bound: int = 3) -> list:
    rng = rng_from(seed)
    return [ring.random(rng, bound) for _ in range(count)]


def random_matrix(ring, rng, nrows: int, ncols: int, bound: int = 2) -> Matrix:
    return Matrix.from_entries(ring, [[ring.random(rng, bound) for _ in range(ncols)] for _ in range(nrows)], ncols)


def rings(descriptors=RING_DESCRIPTORS):
    return st.sampled_from(descriptors).map(parse_ring)


def random_witt(ring, N: int, rng, bound: int = 3):
    return WittVector(ring, N, tuple(ring.random(rng, bound) for _ in range(N)))


def lift_to_integers(w):
    """Lift a Witt vector over Z/n coefficientwise to Z (residues in 0..n-1)."""
    return WittVector(Z, w.N, tuple(int(c) for c in w.coeffs))


def strictly_lower_grid(ring, rank: int):
    """Every strictly lower triangular rank x rank matrix over a finite ring."""
    slots = [(i, j) for i in range(rank) for j in range(i)]
    elems = list(ring.elements())
    for values in itertools.product(elems, repeat=len(slots)):
        rows = [[ring.zero()] * rank for _ in range(rank)]
        for (i, j), v in zip(slots, values):
            rows[i][j] = v
        yield rows


NIL_GRID_CONTEXTS = [("Z/4", "id"), ("Z/9", "id"), ("Q2(0,1)/2", "conj")]


def nil_grid(contexts=NIL_GRID_CONTEXTS, max_rank: int = 2):
    """The exhaustive desk grid of strictly lower triangular nil objects."""
    for desc, tag in contexts:
        R = parse_ring(desc)
        for rank in range(1, max_rank + 1):
            for rows in strictly_lower_grid(R, rank):
                yield NilObject.from_rows(R, rows, tag)
