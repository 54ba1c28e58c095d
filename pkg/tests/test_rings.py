from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from nilwitt.fingroup import cyclic, dihedral, named_group, quaternion
from nilwitt.rings import (
    Automorphism,
    Matrix,
    RingError,
    TwistedGroupRingElement,
    TwistedLaurentMatrix,
    action_from_generators,
    kronecker,
    laurent_compose,
    matrix_compose,
    parse_ring,
    permutation_matrix,
    ring_eval,
    twisted_group_ring_mul,
)
from strategies import random_elements, random_matrix, rng_from, rings, seeds

Q = parse_ring("Q2(0,1)")
OMEGA = Q.omega()


# ---------------------------------------------------------------------------
# literals


def test_mod_literal_reduces():
    assert ring_eval("Z/12", "7+8") == 3


def test_omega_squared_is_minus_one():
    assert ring_eval("Q2(0,1)", "ω·ω") == -1
    assert ring_eval("Q2(0,1)", "w*w").value == (-1, 0)


def test_localized_fraction_is_canonical():
    x = ring_eval("Z[1/{2}]", "3/4")
    assert x.value == Fraction(3, 4)
    assert ring_eval("Z[1/{2}]", "6/8") == x


def test_division_by_non_unit_rejected():
    with pytest.raises(RingError):
        ring_eval("Z[1/{2}]", "1/3")
    with pytest.raises(RingError):
        ring_eval("Z/12", "1/4")


@pytest.mark.parametrize("text", ["7+", "x", "2**w", "'a'"])
def test_malformed_literal(text):
    with pytest.raises(RingError):
        ring_eval("Z", text)


@pytest.mark.parametrize("desc", ["Z", "Z/12", "Z[1/{2,3}]", "Q2(0,1)", "Q2(1,1)/4", "Q2(0,1)[1/{2}]"])
def test_descriptor_round_trip(desc):
    assert parse_ring(desc).descriptor == desc
    assert parse_ring(parse_ring(desc).descriptor) == parse_ring(desc)


@pytest.mark.parametrize("desc", ["Z/1", "Z[1/{4}]", "R", "Q2(0,1)/"])
def test_bad_descriptor(desc):
    with pytest.raises(RingError):
        parse_ring(desc)


# ---------------------------------------------------------------------------
# ring laws


@given(rings(), seeds)
def test_ring_axioms(R, seed):
    x, y, z = random_elements(R, seed, 3)
    add, mul = R.add, R.mul
    assert R.eq(add(x, add(y, z)), add(add(x, y), z))
    assert R.eq(mul(x, mul(y, z)), mul(mul(x, y), z))
    assert R.eq(add(x, y), add(y, x))
    assert R.eq(mul(x, y), mul(y, x))
    assert R.eq(mul(x, add(y, z)), add(mul(x, y), mul(x, z)))
    assert R.eq(add(x, R.zero()), x)
    assert R.eq(mul(x, R.one()), x)
    assert R.is_zero(add(x, R.neg(x)))


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_mod_ring_matches_python_ints(a, b):
    R = parse_ring("Z/12")
    assert R.mul(R.from_int(a), R.from_int(b)) == (a * b) % 12
    assert R.add(R.from_int(a), R.from_int(b)) == (a + b) % 12


@given(st.integers(-3, 3), st.integers(-3, 3), seeds)
def test_quadratic_product_matches_polynomial_remainder(b, c, seed):
    R = parse_ring(f"Q2({b},{c})")
    x, y = random_elements(R, seed, 2)
    w = sympy.Symbol("w")
    px = x[0] + x[1] * w
    py = y[0] + y[1] * w
    rem = sympy.Poly(sympy.rem(sympy.expand(px * py), w**2 + b * w + c, w), w)
    want = (int(rem.coeff_monomial(1)), int(rem.coeff_monomial(w)))
    assert R.mul(x, y) == want


def test_units():
    R = parse_ring("Z/12")
    assert [u for u in range(12) if R.is_unit(u)] == [1, 5, 7, 11]
    S = parse_ring("Z[1/{2,3}]")
    assert S.is_unit(Fraction(6)) and not S.is_unit(Fraction(5))
    assert S.mul(S.inv(Fraction(-9, 2)), Fraction(-9, 2)) == 1


# ---------------------------------------------------------------------------
# automorphisms


@given(rings(["Q2(0,1)", "Q2(1,1)/4", "Q2(2,-3)", "Q2(0,1)/2"]), seeds)
def test_conjugation_is_involutive_ring_automorphism(R, seed):
    s = Automorphism(R, True)
    x, y = random_elements(R, seed, 2)
    assert s(R.mul(x, y)) == R.mul(s(x), s(y))
    assert s(R.add(x, y)) == R.add(s(x), s(y))
    assert s(s(x)) == x
    assert s(R.one()) == R.one()


def test_conjugation_on_omega():
    R = parse_ring("Q2(3,1)")
    assert R.conj(R.omega()) == R.sub(R.from_int(-3), R.omega())


def test_conjugation_needs_quadratic_ring():
    with pytest.raises(RingError):
        Automorphism(parse_ring("Z"), True)


def test_automorphism_powers():
    s = Automorphism(Q, True)
    assert s.power(2) == Automorphism(Q, False)
    assert s.power(-1) == s
    assert s.then(s).tag == "id"


# ---------------------------------------------------------------------------
# matrices


def test_identity_compose():
    U = Matrix.from_entries(parse_ring("Z"), [[1, 2], [3, 4], [5, 6]])
    assert matrix_compose(U, Matrix.identity(U.ring, 3)) == U
    assert matrix_compose(Matrix.identity(U.ring, 2), U) == U


def test_entry_formula_scalar():
    # U has one column and two rows, V has two columns and one row
    Zr = parse_ring("Z")
    U = Matrix.from_entries(Zr, [[1], [2]], 1)
    V = Matrix.from_entries(Zr, [[3, 4]], 2)
    W = matrix_compose(U, V)
    assert W.shape == (1, 1) and W.rows == ((11,),)


def test_entry_formula_against_sympy():
    Zr = parse_ring("Z")
    rng = rng_from(7)
    U = random_matrix(Zr, rng, 3, 2)
    V = random_matrix(Zr, rng, 4, 3)
    want = sympy.Matrix(V.rows) * sympy.Matrix(U.rows)
    assert [list(r) for r in matrix_compose(U, V).rows] == want.tolist()


def test_dimension_mismatch():
    Zr = parse_ring("Z")
    with pytest.raises(ValueError):
        matrix_compose(Matrix.identity(Zr, 2), Matrix.identity(Zr, 3))


def test_ring_mismatch():
    with pytest.raises(ValueError):
        matrix_compose(Matrix.identity(parse_ring("Z"), 2), Matrix.identity(parse_ring("Z/3"), 2))


@given(st.permutations(range(4)), st.permutations(range(4)))
def test_permutation_matrices_compose_like_permutations(p, q):
    Zr = parse_ring("Z")
    P = permutation_matrix(Zr, p)
    Qm = permutation_matrix(Zr, q)
    # first p, then q
    assert matrix_compose(P, Qm) == permutation_matrix(Zr, [q[p[i]] for i in range(4)])


@given(rings(), seeds, st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_matrix_compose_associative(R, seed, a, b, c, d):
    rng = rng_from(seed)
    A = random_matrix(R, rng, b, a)
    B = random_matrix(R, rng, c, b)
    C = random_matrix(R, rng, d, c)
    assert matrix_compose(matrix_compose(A, B), C) == matrix_compose(A, matrix_compose(B, C))


def test_kronecker_shape_and_mixed_product():
    Zr = parse_ring("Z")
    rng = rng_from(3)
    A, B = random_matrix(Zr, rng, 2, 2), random_matrix(Zr, rng, 3, 3)
    C, D = random_matrix(Zr, rng, 2, 2), random_matrix(Zr, rng, 3, 3)
    assert kronecker(A, B).shape == (6, 6)
    assert kronecker(A, B) @ kronecker(C, D) == kronecker(A @ C, B @ D)


# ---------------------------------------------------------------------------
# twisted Laurent matrices


def _mono(twist, rows, l):
    return TwistedLaurentMatrix.monomial(twist, Matrix.from_entries(twist.ring, rows), l)


def test_identity_laurent_compose():
    s = Automorphism(Q, True)
    f = _mono(s, [[OMEGA]], 1) + _mono(s, [[(2, 1)]], -2)
    one = TwistedLaurentMatrix.identity(s, 1)
    assert laurent_compose(f, one) == f
    assert laurent_compose(one, f) == f


def test_twist_moves_past_t():
    # g = w t^1 after f = w t^0: coefficient at t^1 is w * conj(w)
    s = Automorphism(Q, True)
    f = _mono(s, [[OMEGA]], 0)
    g = _mono(s, [[OMEGA]], 1)
    h = laurent_compose(f, g)
    assert h.support == [1]
    assert h.coeff(1).rows[0][0] == Q.mul(OMEGA, Q.conj(OMEGA))
    # and in the other order no twist is applied
    k = laurent_compose(g, f)
    assert k.coeff(1).rows[0][0] == Q.mul(OMEGA, OMEGA)


def test_untwisted_scalar_is_laurent_polynomial_product():
    Zr = parse_ring("Z")
    e = Automorphism(Zr)
    f = _mono(e, [[2]], -1) + _mono(e, [[3]], 2)
    g = _mono(e, [[1]], 0) + _mono(e, [[-1]], 1)
    t = sympy.Symbol("t")
    want = sympy.expand((2 / t + 3 * t**2) * (1 - t))
    got = sum(c * t**l for l, c in ((l, M.rows[0][0]) for l, M in laurent_compose(f, g).coeffs))
    assert sympy.simplify(got - want) == 0


@given(st.sampled_from(["Q2(0,1)", "Q2(1,1)/4"]), st.booleans(), seeds)
def test_laurent_compose_associative(desc, conj, seed):
    R = parse_ring(desc)
    tw = Automorphism(R, conj)
    rng = rng_from(seed)
    dims = [rng.randint(1, 3) for _ in range(4)]

    def rand(nr, nc):
        out = TwistedLaurentMatrix.zero(tw, nr, nc)
        for _ in range(2):
            out = out + _mono(tw, random_matrix(R, rng, nr, nc).rows, rng.randint(-3, 3))
        return out

    A, B, C = rand(dims[1], dims[0]), rand(dims[2], dims[1]), rand(dims[3], dims[2])
    assert (C @ B) @ A == C @ (B @ A)


# ---------------------------------------------------------------------------
# twisted group rings


def test_untwisted_group_ring_square():
    G = cyclic(2)
    Zr = parse_ring("Z")
    x = TwistedGroupRingElement(Zr, G, (False, False), {0: 1, 1: 1})
    sq = twisted_group_ring_mul(x, x)
    assert sq.coeff(0) == 2 and sq.coeff(1) == 2


def test_twisted_square_of_omega_s():
    G = cyclic(2)
    x = TwistedGroupRingElement(Q, G, (False, True), {1: OMEGA})
    sq = x * x
    assert sq.terms == ((0, Q.mul(OMEGA, Q.conj(OMEGA))),)
    assert sq.coeff(0) == (1, 0)


def test_group_ring_unit():
    G = dihedral(4)
    rho = tuple(False for _ in range(G.order))
    e = TwistedGroupRingElement.unit(Q, G, rho)
    x = TwistedGroupRingElement(Q, G, rho, {3: OMEGA, 5: (1, 1)})
    assert e * x == x and x * e == x


def test_mismatched_contexts():
    G = cyclic(2)
    a = TwistedGroupRingElement(Q, G, (False, True), {1: OMEGA})
    b = TwistedGroupRingElement(Q, G, (False, False), {1: OMEGA})
    with pytest.raises(ValueError):
        a * b


def _group_with_sign(name):
    G = named_group(name)
    # sign character: conjugate on elements outside the first index-2 subgroup, if any
    for mask in G.subgroup_masks():
        if bin(mask).count("1") * 2 == G.order:
            return G, tuple(not (mask >> g) & 1 for g in range(G.order))
    return G, tuple(False for _ in range(G.order))


@given(st.sampled_from(["C2", "C4", "S3", "D4", "Q8", "V4", "C6"]), seeds)
def test_twisted_group_ring_associative(name, seed):
    G, rho = _group_with_sign(name)
    R = parse_ring("Q2(1,1)/4")
    rng = rng_from(seed)

    def rand():
        return TwistedGroupRingElement(R, G, rho, {rng.randrange(G.order): R.random(rng, 3) for _ in range(3)})

    a, b, c = rand(), rand(), rand()
    assert (a * b) * c == a * (b * c)


def test_action_from_generators_rejects_non_homomorphism():
    G = cyclic(3)
    with pytest.raises(ValueError):
        action_from_generators(G, [1], [True])
    assert action_from_generators(quaternion(), [1, 2], [False, False]) == (False,) * 8
