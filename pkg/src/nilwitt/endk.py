"""Endomorphisms of free modules and the characteristic-series map into Witt vectors."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rings import Matrix, Polynomial, Ring, block_diagonal, kronecker, parse_ring, poly_mul
from .witt import RationalWittVector, WittError, WittVector


@dataclass(frozen=True)
class EndObject:
    """A free module of rank ``matrix.nrows`` with an endomorphism."""

    matrix: Matrix

    def __post_init__(self):
        if self.matrix.nrows != self.matrix.ncols:
            raise ValueError("endomorphism matrix must be square")

    @property
    def ring(self) -> Ring:
        return self.matrix.ring

    @property
    def rank(self) -> int:
        return self.matrix.nrows

    @classmethod
    def from_rows(cls, ring, rows) -> "EndObject":
        ring = parse_ring(ring)
        rows = list(rows)
        return cls(Matrix.from_entries(ring, rows, len(rows)))

    @classmethod
    def zero(cls, ring: Ring, rank: int = 0) -> "EndObject":
        return cls(Matrix.zero(ring, rank, rank))

    def to_json(self):
        return {"ring": self.ring.descriptor, "rank": self.rank, "matrix": self.matrix.to_json()}


def end_from_json(data) -> EndObject:
    try:
        ring = parse_ring(data["ring"])
        rows = data["matrix"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"endomorphism object needs ring and matrix: {exc}") from exc
    rank = int(data.get("rank", len(rows)))
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise ValueError(f"matrix is not {rank}x{rank}")
    return EndObject(Matrix.from_entries(ring, rows, rank))


def charpoly_coeffs(M: Matrix) -> tuple:
    """Coefficients of ``det(1 - t M)``, lowest degree first.

    Division-free (Berkowitz), so it is valid over rings with zero divisors.
    """
    R = M.ring
    n = M.nrows
    A = M.rows
    add, mul, neg, zero = R.add, R.mul, R.neg, R.zero()
    p = (R.one(),)
    for k in range(1, n + 1):
        a = A[k - 1][k - 1]
        row = A[k - 1][: k - 1]
        col = [A[i][k - 1] for i in range(k - 1)]
        sub = [A[i][: k - 1] for i in range(k - 1)]
        T = [R.one(), neg(a)]
        vec = col
        for _ in range(k - 1):
            s = zero
            for x, y in zip(row, vec):
                s = add(s, mul(x, y))
            T.append(neg(s))
            vec = [_dot(R, sub[i], vec) for i in range(k - 1)]
        p = poly_mul(R, T, p, k)
        p = p + (zero,) * (k + 1 - len(p))
    return p


def _dot(R, a, b):
    s = R.zero()
    for x, y in zip(a, b):
        s = R.add(s, R.mul(x, y))
    return s


def char_polynomial(x: EndObject) -> Polynomial:
    return Polynomial(x.ring, charpoly_coeffs(x.matrix))


def char_series(x: EndObject, N: int) -> WittVector:
    """``det(1 - t f)`` truncated to ``W_N``."""
    c = charpoly_coeffs(x.matrix)
    return WittVector(x.ring, N, tuple(c[1 : N + 1]))


def companion(lams: Sequence, ring=None) -> EndObject:
    """Subdiagonal identities and last column ``(lam_n, ..., lam_1)`` from top to bottom."""
    ring = parse_ring(ring) if ring is not None else parse_ring("Z")
    n = len(lams)
    if n == 0:
        raise ValueError("companion matrix needs n >= 1")
    z, o = ring.zero(), ring.one()
    vals = [ring.coerce(v) for v in lams]
    rows = [[z] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i + 1][i] = o
    for i in range(n):
        rows[i][n - 1] = vals[n - 1 - i]
    return EndObject(Matrix(ring, tuple(tuple(r) for r in rows), n))


def end_sum(x: EndObject, y: EndObject) -> EndObject:
    if x.ring != y.ring:
        raise ValueError("ring mismatch")
    return EndObject(block_diagonal(x.ring, [x.matrix, y.matrix]))


def end_tensor(x: EndObject, y: EndObject) -> EndObject:
    if x.ring != y.ring:
        raise ValueError("ring mismatch")
    return EndObject(kronecker(x.matrix, y.matrix))


@dataclass(frozen=True)
class EndClass:
    """The formal difference ``[plus] - [minus]``; equality is tested through :func:`eta`."""

    plus: EndObject
    minus: EndObject

    @property
    def ring(self) -> Ring:
        return self.plus.ring

    @classmethod
    def of(cls, x: EndObject) -> "EndClass":
        return cls(x, EndObject.zero(x.ring))

    def __add__(self, other: "EndClass") -> "EndClass":
        return EndClass(end_sum(self.plus, other.plus), end_sum(self.minus, other.minus))

    def __neg__(self) -> "EndClass":
        return EndClass(self.minus, self.plus)

    def __mul__(self, other: "EndClass") -> "EndClass":
        # (a - b)(c - d) = (ac + bd) - (ad + bc)
        a, b, c, d = self.plus, self.minus, other.plus, other.minus
        return EndClass(end_sum(end_tensor(a, c), end_tensor(b, d)), end_sum(end_tensor(a, d), end_tensor(b, c)))

    def __eq__(self, other):
        return isinstance(other, EndClass) and eta(self) == eta(other)

    def __hash__(self):
        return hash(self.ring)

    def to_json(self):
        return {"plus": self.plus.to_json(), "minus": self.minus.to_json()}


def class_from_json(data) -> EndClass:
    if "plus" not in data:
        return EndClass.of(end_from_json(data))
    plus = end_from_json(data["plus"])
    minus = end_from_json(data["minus"]) if data.get("minus") else EndObject.zero(plus.ring)
    return EndClass(plus, minus)


def eta(x: EndClass) -> RationalWittVector:
    return RationalWittVector(char_polynomial(x.plus), char_polynomial(x.minus))


def eta_section(w: RationalWittVector) -> EndClass:
    """A class whose image under :func:`eta` is ``w`` (built from companion matrices)."""
    R = w.ring

    def part(poly: Polynomial) -> EndObject:
        if poly.coeff(0) != R.one():
            raise WittError("constant term must be 1")
        if poly.degree <= 0:
            return EndObject.zero(R)
        return companion([R.neg(c) for c in poly.coeffs[1:]], R)

    return EndClass(part(w.numerator), part(w.denominator))


def check_homomorphism(x: EndObject, y: EndObject, N: int) -> dict:
    """Compare characteristic series of sums and tensor products with Witt operations."""
    from .witt import witt_add, witt_mul

    cx, cy = char_series(x, N), char_series(y, N)
    additive = char_series(end_sum(x, y), N) == witt_add(cx, cy)
    multiplicative = char_series(end_tensor(x, y), N) == witt_mul(cx, cy)
    return {"additive": additive, "multiplicative": multiplicative}
