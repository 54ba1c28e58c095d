"""Truncated big Witt vectors ``1 + t*L[[t]]`` and rational Witt vectors.

Addition is the series product.  Multiplication is determined by
``(1 - a t^m) * (1 - b t^n) = (1 - a^(n/d) b^(m/d) t^(mn/d))^d`` with
``d = gcd(m, n)``, extended bilinearly after writing each operand as a
product of factors ``1 - c_n t^n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd
from typing import Sequence

from sympy import Poly, GF, ZZ, isprime
from sympy.abc import t as _t

from .rings import Polynomial, Ring, parse_ring, poly_mul


class WittError(ValueError):
    pass


@dataclass(frozen=True)
class WittVector:
    """``1 + c_1 t + ... + c_N t^N`` in ``W_N(ring)``."""

    ring: Ring
    N: int
    coeffs: tuple

    def __post_init__(self):
        if self.N < 1:
            raise WittError("truncation order must be at least 1")
        c = tuple(self.coeffs)
        if len(c) > self.N:
            c = c[: self.N]
        c = c + (self.ring.zero(),) * (self.N - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_values(cls, ring, N: int, values: Sequence) -> "WittVector":
        ring = parse_ring(ring)
        return cls(ring, N, tuple(ring.coerce(v) for v in values))

    @classmethod
    def one(cls, ring: Ring, N: int) -> "WittVector":
        """The additive unit, the series ``1``."""
        return cls(ring, N, ())

    @classmethod
    def unit(cls, ring: Ring, N: int) -> "WittVector":
        """The multiplicative unit ``1 - t``."""
        return cls(ring, N, (ring.neg(ring.one()),))

    @property
    def series(self) -> tuple:
        return (self.ring.one(),) + self.coeffs

    def _check(self, other: "WittVector"):
        if self.ring != other.ring or self.N != other.N:
            raise WittError(f"context mismatch: W_{self.N}({self.ring}) vs W_{other.N}({other.ring})")

    def __add__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, other)

    def __neg__(self) -> "WittVector":
        return witt_neg(self)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return witt_add(self, witt_neg(other))

    def __mul__(self, other: "WittVector") -> "WittVector":
        return witt_mul(self, other)

    def truncate(self, N: int) -> "WittVector":
        if N > self.N:
            raise WittError("cannot truncate to a larger order")
        return WittVector(self.ring, N, self.coeffs[:N])

    def to_json(self):
        return {"ring": self.ring.descriptor, "N": self.N, "coeffs": [self.ring.to_json(c) for c in self.coeffs]}

    def __str__(self):
        terms = ["1"]
        for i, c in enumerate(self.coeffs, 1):
            if not self.ring.is_zero(c):
                terms.append(f"({self.ring.format(c)})t^{i}")
        return " + ".join(terms)


def witt_from_json(data) -> WittVector:
    try:
        ring = parse_ring(data["ring"])
        N = int(data["N"])
        coeffs = data["coeffs"]
    except (KeyError, TypeError) as exc:
        raise WittError(f"Witt vector needs ring, N and coeffs: {exc}") from exc
    if len(coeffs) > N:
        raise WittError(f"{len(coeffs)} coefficients given for N={N}")
    return WittVector.from_values(ring, N, coeffs)


@dataclass(frozen=True)
class ElementaryFactor:
    """``1 - coeff * t^n``."""

    n: int
    coeff: object

    def __post_init__(self):
        if self.n < 1:
            raise WittError("elementary factor needs n >= 1")


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    prod = poly_mul(a.ring, a.series, b.series, a.N)
    return WittVector(a.ring, a.N, prod[1:])


def witt_neg(a: WittVector) -> WittVector:
    """Additive inverse: the series inverse of ``a``."""
    R = a.ring
    s = a.series
    out = [R.one()]
    for n in range(1, a.N + 1):
        acc = R.zero()
        for k in range(1, n + 1):
            acc = R.add(acc, R.mul(s[k], out[n - k]))
        out.append(R.neg(acc))
    return WittVector(R, a.N, tuple(out[1:]))


def _divide_elementary(R: Ring, series: list, n: int, lam, N: int) -> list:
    """Multiply ``series`` by ``1/(1 - lam t^n) = sum_j lam^j t^(nj)`` mod ``t^(N+1)``."""
    out = list(series)
    # out[k] = sum_j lam^j series[k - n j]; compute recursively out[k] = series[k] + lam*out[k-n]
    for k in range(n, N + 1):
        out[k] = R.add(series[k], R.mul(lam, out[k - n]))
    return out


def witt_decompose(a: WittVector) -> list[ElementaryFactor]:
    """Greedy factorisation ``a = prod_n (1 - lam_n t^n)`` mod ``t^(N+1)``; zero factors are omitted."""
    R = a.ring
    cur = list(a.series)
    factors = []
    for n in range(1, a.N + 1):
        lam = R.neg(cur[n])
        if R.is_zero(lam):
            continue
        factors.append(ElementaryFactor(n, lam))
        cur = _divide_elementary(R, cur, n, lam, a.N)
    return factors


def recompose(ring: Ring, N: int, factors: Sequence[ElementaryFactor]) -> WittVector:
    series = (ring.one(),)
    for f in factors:
        if f.n > N:
            continue
        fac = [ring.zero()] * (f.n + 1)
        fac[0] = ring.one()
        fac[f.n] = ring.neg(f.coeff)
        series = poly_mul(ring, series, fac, N)
    return WittVector(ring, N, tuple(series[1:]))


def _power_of_elementary(R: Ring, e: int, c, d: int, N: int) -> tuple:
    """Series of ``(1 - c t^e)^d`` truncated at ``t^N``."""
    out = [R.zero()] * (N + 1)
    negc = R.neg(c)
    term = R.one()
    for j in range(0, d + 1):
        if e * j > N:
            break
        out[e * j] = R.mul(R.from_int(comb(d, j)), term)
        term = R.mul(term, negc)
    return tuple(out)


def witt_mul_elementary(f: ElementaryFactor, g: ElementaryFactor, ring: Ring, N: int) -> WittVector:
    R = ring
    m, n = f.n, g.n
    d = gcd(m, n)
    e = m * n // d
    if e > N:
        return WittVector.one(R, N)
    c = R.mul(R.pow(f.coeff, n // d), R.pow(g.coeff, m // d))
    return WittVector(R, N, _power_of_elementary(R, e, c, d, N)[1:])


def witt_mul(a: WittVector, b: WittVector) -> WittVector:
    a._check(b)
    R, N = a.ring, a.N
    fa = witt_decompose(a)
    fb = witt_decompose(b)
    series = (R.one(),) + (R.zero(),) * N
    for f in fa:
        for g in fb:
            d = gcd(f.n, g.n)
            e = f.n * g.n // d
            if e > N:
                continue
            c = R.mul(R.pow(f.coeff, g.n // d), R.pow(g.coeff, f.n // d))
            series = poly_mul(R, series, _power_of_elementary(R, e, c, d, N), N)
    return WittVector(R, N, tuple(series[1:]))


def witt_ghost(a: WittVector) -> list:
    """Coefficients ``w_1..w_N`` of ``-t d/dt log(a)``; only over torsion-free rings."""
    R = a.ring
    if not R.torsion_free:
        raise WittError(f"ghost components need a torsion-free ring, got {R}")
    c = a.series
    w = []
    # -t a' = a * sum w_m t^m   =>   -m c_m = w_m + sum_{j<m} w_j c_{m-j}
    for m in range(1, a.N + 1):
        acc = R.neg(R.mul(R.from_int(m), c[m]))
        for j in range(1, m):
            acc = R.sub(acc, R.mul(w[j - 1], c[m - j]))
        w.append(acc)
    return w


def ideal_membership(a: WittVector, k: int) -> bool:
    """Whether ``a`` lies in ``I_k = 1 + t^k L[[t]]``."""
    if k < 1 or k > a.N:
        raise WittError(f"ideal index {k} outside 1..{a.N}")
    return all(a.ring.is_zero(c) for c in a.coeffs[: k - 1])


# ---------------------------------------------------------------------------
# rational Witt vectors


@dataclass(frozen=True)
class RationalWittVector:
    """``numerator / denominator`` with both constant terms equal to 1."""

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        R = self.numerator.ring
        if self.denominator.ring != R:
            raise WittError("numerator and denominator over different rings")
        for p in (self.numerator, self.denominator):
            if p.coeff(0) != R.one():
                raise WittError("rational Witt vectors need constant term 1")

    @property
    def ring(self) -> Ring:
        return self.numerator.ring

    @classmethod
    def from_values(cls, ring, num: Sequence, den: Sequence = (1,)) -> "RationalWittVector":
        ring = parse_ring(ring)
        return cls(Polynomial.from_values(ring, num), Polynomial.from_values(ring, den))

    def __eq__(self, other):
        return rational_witt_equal(self, other)

    def __hash__(self):
        return hash(self.ring)

    def __add__(self, other: "RationalWittVector") -> "RationalWittVector":
        return RationalWittVector(self.numerator * other.numerator, self.denominator * other.denominator)

    def __neg__(self) -> "RationalWittVector":
        return RationalWittVector(self.denominator, self.numerator)

    def __sub__(self, other: "RationalWittVector") -> "RationalWittVector":
        return self + (-other)

    def expand(self, N: int) -> WittVector:
        """Power-series expansion truncated to ``W_N``."""
        R = self.ring
        den = self.denominator.truncate(N)
        inv = [R.one()]
        for n in range(1, N + 1):
            acc = R.zero()
            for k in range(1, n + 1):
                acc = R.add(acc, R.mul(den[k], inv[n - k]))
            inv.append(R.neg(acc))
        s = poly_mul(R, self.numerator.truncate(N), inv, N)
        return WittVector(R, N, tuple(s[1:]))

    def reduced(self) -> "RationalWittVector":
        return reduce_rational(self)

    def to_json(self):
        return {"ring": self.ring.descriptor, "numerator": self.numerator.to_json(), "denominator": self.denominator.to_json()}


def rational_witt_equal(x: RationalWittVector, y: RationalWittVector) -> bool:
    if x.ring != y.ring:
        return False
    return x.numerator * y.denominator == y.numerator * x.denominator


def rational_from_json(data) -> RationalWittVector:
    try:
        return RationalWittVector.from_values(data["ring"], data["numerator"], data.get("denominator", [1]))
    except (KeyError, TypeError) as exc:
        raise WittError(f"rational Witt vector needs ring and numerator: {exc}") from exc


def reduce_rational(x: RationalWittVector) -> RationalWittVector:
    """Cancel the common factor of numerator and denominator over Z or a prime field.

    Other rings are returned unchanged; equality never depends on this step.
    """
    R = x.ring
    if R.kind == "Z":
        dom = ZZ
    elif R.kind == "ZN" and isprime(R.modulus):
        dom = GF(R.modulus)
    else:
        return x
    p = Poly(list(reversed(x.numerator.coeffs)), _t, domain=dom)
    q = Poly(list(reversed(x.denominator.coeffs)), _t, domain=dom)
    g = p.gcd(q)
    if g.degree() <= 0:
        return x
    p2, q2 = p.exquo(g), q.exquo(g)
    # normalise so both constant terms are 1 again
    c0 = p2.eval(0)
    if R.kind == "Z":
        if c0 not in (1, -1):
            return x
        p2, q2 = p2 * int(c0), q2 * int(c0)
    else:
        c0 = int(c0) % R.modulus
        inv = pow(c0, -1, R.modulus)
        p2, q2 = p2 * inv, q2 * inv

    def coeffs(poly):
        return [int(v) % R.modulus if R.kind == "ZN" else int(v) for v in reversed(poly.all_coeffs())]

    return RationalWittVector(Polynomial.from_values(R, coeffs(p2)), Polynomial.from_values(R, coeffs(q2)))
