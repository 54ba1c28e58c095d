import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from nilwitt.endk import (
    EndClass,
    EndObject,
    char_series,
    charpoly_coeffs,
    check_homomorphism,
    class_from_json,
    companion,
    end_from_json,
    end_sum,
    end_tensor,
    eta,
    eta_section,
)
from nilwitt.rings import Matrix, parse_ring
from nilwitt.witt import RationalWittVector, WittVector, rational_witt_equal, witt_ghost, witt_mul
from strategies import random_matrix, rng_from, seeds

T = sympy.Symbol("t")


def det_oracle(rows) -> list:
    """Coefficients of det(1 - tM) via sympy over Z."""
    n = len(rows)
    if n == 0:
        return [1]
    M = sympy.eye(n) - T * sympy.Matrix(rows)
    p = sympy.Poly(M.det(method="berkowitz"), T)
    return [int(p.coeff_monomial(T**k)) for k in range(n + 1)]


def random_end(ring, rng, rank, bound=2):
    return EndObject(random_matrix(ring, rng, rank, rank, bound))


def test_char_series_examples():
    assert char_series(EndObject.zero(parse_ring("Z"), 2), 3) == WittVector.one(parse_ring("Z"), 3)
    assert char_series(EndObject.from_rows("Z", [[5]]), 3) == WittVector.from_values("Z", 3, [-5])
    assert char_series(companion([-1, -1]), 3) == WittVector.from_values("Z", 3, [1, 1])


def test_companion_examples():
    assert companion([5]).matrix.rows == ((5,),)
    with pytest.raises(ValueError):
        companion([])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_companion_identity_small(n):
    for lams in itertools.product(range(-2, 3), repeat=n):
        C = companion([-l for l in lams])
        assert charpoly_coeffs(C.matrix) == (1, *lams)
        assert det_oracle(C.matrix.rows) == [1, *lams]


@given(seeds, st.integers(0, 4))
def test_charpoly_matches_sympy_over_z(seed, n):
    x = random_end(parse_ring("Z"), rng_from(seed), n, 3)
    assert list(charpoly_coeffs(x.matrix)) == det_oracle(x.matrix.rows)


@given(seeds, st.integers(1, 4))
def test_charpoly_over_z12_reduces_integer_determinant(seed, n):
    R = parse_ring("Z/12")
    x = random_end(R, rng_from(seed), n, 11)
    assert list(charpoly_coeffs(x.matrix)) == [c % 12 for c in det_oracle(x.matrix.rows)]


def test_eta_of_zero_class_and_blocks():
    R = parse_ring("Z")
    z = EndClass.of(EndObject.zero(R, 3))
    assert rational_witt_equal(eta(z), RationalWittVector.from_values(R, [1]))
    A, B = EndObject.from_rows(R, [[1, 2], [0, 3]]), EndObject.from_rows(R, [[4]])
    assert eta(EndClass.of(end_sum(A, B))) == eta(EndClass.of(A)) + eta(EndClass.of(B))


def test_tensor_of_scalars():
    R = parse_ring("Z")
    x = end_tensor(EndObject.from_rows(R, [[3]]), EndObject.from_rows(R, [[-2]]))
    assert char_series(x, 4) == WittVector.from_values(R, 4, [6])
    assert char_series(x, 4) == witt_mul(WittVector.from_values(R, 4, [-3]), WittVector.from_values(R, 4, [2]))


def test_eta_section_examples():
    R = parse_ring("Z")
    assert eta(eta_section(RationalWittVector.from_values(R, [1]))) == RationalWittVector.from_values(R, [1])
    assert eta_section(RationalWittVector.from_values(R, [1])) == EndClass.of(EndObject.zero(R))
    w = RationalWittVector.from_values(R, [1, 1, 1])
    cls = eta_section(w)
    assert cls.plus.matrix == companion([-1, -1]).matrix
    assert eta(cls) == w
    q = RationalWittVector.from_values(R, [1, -2], [1, -3])
    cq = eta_section(q)
    assert cq.plus.matrix.rows == ((2,),) and cq.minus.matrix.rows == ((3,),)
    assert eta(cq) == q


def test_sum_with_zero_and_tensor_with_one():
    R = parse_ring("Z/12")
    x = random_end(R, rng_from(1), 3, 11)
    assert end_sum(x, EndObject.zero(R)) == x
    assert end_tensor(x, EndObject.from_rows(R, [[1]])) == x


@pytest.mark.parametrize("desc", ["Z", "Z/12"])
@given(seed=seeds)
def test_eta_is_ring_homomorphism(desc, seed):
    R = parse_ring(desc)
    rng = rng_from(seed)
    x = random_end(R, rng, rng.randint(0, 3))
    y = random_end(R, rng, rng.randint(0, 3))
    report = check_homomorphism(x, y, 9)
    assert report == {"additive": True, "multiplicative": True}


@given(seeds)
def test_tensor_against_ghost_oracle(seed):
    # ghost of the tensor characteristic series is the pointwise product of traces of powers
    R = parse_ring("Z")
    rng = rng_from(seed)
    A, B = random_end(R, rng, 2), random_end(R, rng, 2)
    def traces(x, N):
        M = sympy.Matrix(x.matrix.rows)
        return [int((M**k).trace()) for k in range(1, N + 1)]

    assert witt_ghost(char_series(A, 8)) == traces(A, 8)
    assert witt_ghost(char_series(end_tensor(A, B), 8)) == [a * b for a, b in zip(traces(A, 8), traces(B, 8))]


@pytest.mark.parametrize("desc", ["Z", "Z/12", "Q2(0,1)"])
@given(seed=seeds)
def test_eta_section_round_trip(desc, seed):
    R = parse_ring(desc)
    rng = rng_from(seed)
    num = [R.one()] + [R.random(rng, 3) for _ in range(rng.randint(0, 4))]
    den = [R.one()] + [R.random(rng, 3) for _ in range(rng.randint(0, 4))]
    w = RationalWittVector.from_values(R, num, den)
    assert eta(eta_section(w)) == w


@given(seeds)
def test_section_of_eta_reproduces_eta(seed):
    R = parse_ring("Z")
    rng = rng_from(seed)
    c = EndClass(random_end(R, rng, 2), random_end(R, rng, 1))
    assert eta(eta_section(eta(c))) == eta(c)
    assert eta_section(eta(c)) == c


def test_class_arithmetic():
    R = parse_ring("Z")
    a = EndClass.of(EndObject.from_rows(R, [[2]]))
    b = EndClass.of(EndObject.from_rows(R, [[3]]))
    assert eta(a * b) == RationalWittVector.from_values(R, [1, -6])
    assert a + (-a) == EndClass.of(EndObject.zero(R))


def test_json_round_trip_and_errors():
    x = EndObject.from_rows("Z/12", [[1, 2], [3, 4]])
    assert end_from_json(x.to_json()) == x
    assert class_from_json(x.to_json()) == EndClass.of(x)
    with pytest.raises(ValueError):
        end_from_json({"ring": "Z", "matrix": [[1, 2]]})
    with pytest.raises(ValueError):
        EndObject(Matrix.from_entries(parse_ring("Z"), [[1, 2]]))
