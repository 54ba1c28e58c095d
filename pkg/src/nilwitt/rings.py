"""Exact coefficient rings, matrices and twisted Laurent matrices.

Ring elements are stored as plain Python values in canonical form:

* ``Z``            -> ``int``
* ``Z/N``          -> ``int`` in ``range(N)``
* ``Z[1/{p,...}]`` -> ``fractions.Fraction`` whose denominator only has primes from S
* ``Q2(b,c)``      -> ``(a0, a1)`` meaning ``a0 + a1*w`` with ``w^2 + b*w + c = 0``

All arithmetic goes through :class:`Ring` methods, so the hot loops never
allocate wrapper objects.  :class:`RingElement` is a thin operator-overloading
wrapper for interactive use.

Matrices are stored as tuples of rows; row index = target summand, column
index = source summand.  Composition ``g after f`` is the ordinary product
``g.rows @ f.rows``.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Iterable, Sequence

from sympy import factorint, isprime


class RingError(ValueError):
    """Raised for malformed ring literals, descriptors or non-invertible divisors."""


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class Ring:
    kind: str  # "Z", "ZN", "ZS", "Q2"
    modulus: int = 0
    primes: frozenset = frozenset()
    b: int = 0
    c: int = 0
    base: "Ring | None" = None

    # --- construction -----------------------------------------------------
    def __post_init__(self):
        if self.kind == "ZN" and self.modulus < 2:
            raise RingError("modulus must be at least 2")
        if self.kind == "ZS":
            for p in self.primes:
                if not isprime(p):
                    raise RingError(f"{p} is not prime")
        if self.kind == "Q2":
            if self.base is None or self.base.kind == "Q2":
                raise RingError("quadratic extension needs a non-quadratic base")
        if self.kind not in ("Z", "ZN", "ZS", "Q2"):
            raise RingError(f"unknown ring kind {self.kind!r}")

    @property
    def descriptor(self) -> str:
        if self.kind == "Z":
            return "Z"
        if self.kind == "ZN":
            return f"Z/{self.modulus}"
        if self.kind == "ZS":
            return "Z[1/{" + ",".join(str(p) for p in sorted(self.primes)) + "}]"
        suffix = "" if self.base.kind == "Z" else self.base.descriptor[1:]
        return f"Q2({self.b},{self.c})" + suffix

    def __str__(self):
        return self.descriptor

    def __repr__(self):
        return f"Ring({self.descriptor!r})"

    @property
    def is_quadratic(self) -> bool:
        return self.kind == "Q2"

    @property
    def characteristic(self) -> int:
        if self.kind == "ZN":
            return self.modulus
        if self.kind == "Q2":
            return self.base.characteristic
        return 0

    @property
    def torsion_free(self) -> bool:
        return self.characteristic == 0

    # --- elements -----------------------------------------------------------
    def zero(self):
        if self.kind == "Q2":
            return (self.base.zero(), self.base.zero())
        if self.kind == "ZS":
            return Fraction(0)
        return 0

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        if self.kind == "Z":
            return int(n)
        if self.kind == "ZN":
            return int(n) % self.modulus
        if self.kind == "ZS":
            return Fraction(int(n))
        return (self.base.from_int(n), self.base.zero())

    def omega(self):
        if self.kind != "Q2":
            raise RingError(f"{self} has no quadratic generator")
        return (self.base.zero(), self.base.one())

    def coerce(self, x):
        """Bring a raw value (int, Fraction, pair, literal string) into canonical form."""
        if isinstance(x, RingElement):
            if x.ring != self:
                raise RingError(f"element of {x.ring} used in {self}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "Q2":
            if isinstance(x, (tuple, list)):
                if len(x) != 2:
                    raise RingError(f"quadratic element needs two coordinates, got {x!r}")
                return (self.base.coerce(x[0]), self.base.coerce(x[1]))
            return (self.base.coerce(x), self.base.zero())
        if isinstance(x, bool):
            raise RingError(f"cannot read {x!r} as a ring element")
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return self.from_int(x.numerator)
            return self.mul(self.from_int(x.numerator), self.inv(self.from_int(x.denominator)))
        raise RingError(f"cannot read {x!r} as an element of {self}")

    # --- arithmetic -----------------------------------------------------------
    def add(self, x, y):
        k = self.kind
        if k == "Z" or k == "ZS":
            return x + y
        if k == "ZN":
            return (x + y) % self.modulus
        B = self.base
        return (B.add(x[0], y[0]), B.add(x[1], y[1]))

    def neg(self, x):
        k = self.kind
        if k == "Z" or k == "ZS":
            return -x
        if k == "ZN":
            return (-x) % self.modulus
        B = self.base
        return (B.neg(x[0]), B.neg(x[1]))

    def sub(self, x, y):
        k = self.kind
        if k == "Z" or k == "ZS":
            return x - y
        if k == "ZN":
            return (x - y) % self.modulus
        B = self.base
        return (B.sub(x[0], y[0]), B.sub(x[1], y[1]))

    def mul(self, x, y):
        k = self.kind
        if k == "Z" or k == "ZS":
            return x * y
        if k == "ZN":
            return (x * y) % self.modulus
        B = self.base
        a0, a1 = x
        b0, b1 = y
        # w^2 = -c - b w
        t = B.mul(a1, b1)
        r0 = B.sub(B.mul(a0, b0), B.mul(B.from_int(self.c), t))
        r1 = B.sub(B.add(B.mul(a0, b1), B.mul(a1, b0)), B.mul(B.from_int(self.b), t))
        return (r0, r1)

    def pow(self, x, n: int):
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self.one()
        while n:
            if n & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            n >>= 1
        return result

    def is_zero(self, x) -> bool:
        if self.kind == "Q2":
            return self.base.is_zero(x[0]) and self.base.is_zero(x[1])
        return x == 0

    def eq(self, x, y) -> bool:
        return x == y

    def conj(self, x):
        """Quadratic conjugation w -> -b - w; the identity on non-quadratic rings."""
        if self.kind != "Q2":
            return x
        B = self.base
        return (B.sub(x[0], B.mul(B.from_int(self.b), x[1])), B.neg(x[1]))

    def norm(self, x):
        if self.kind != "Q2":
            return x
        return self.mul(x, self.conj(x))[0]

    def is_unit(self, x) -> bool:
        k = self.kind
        if k == "Z":
            return x in (1, -1)
        if k == "ZN":
            return gcd(x, self.modulus) == 1
        if k == "ZS":
            if x == 0:
                return False
            return all(p in self.primes for p in factorint(abs(x.numerator)))
        return self.base.is_unit(self.norm(x))

    def inv(self, x):
        if not self.is_unit(x):
            raise RingError(f"{self.format(x)} is not invertible in {self}")
        k = self.kind
        if k == "Z":
            return x
        if k == "ZN":
            return pow(x, -1, self.modulus)
        if k == "ZS":
            return 1 / x
        n_inv = self.base.inv(self.norm(x))
        cx = self.conj(x)
        return (self.base.mul(cx[0], n_inv), self.base.mul(cx[1], n_inv))

    # --- literals -----------------------------------------------------------
    def parse(self, literal: str):
        """Evaluate an arithmetic literal such as ``"7+8"``, ``"3/4"`` or ``"w*w"``."""
        text = literal.replace("·", "*").replace("ω", "w").replace("^", "**").replace("−", "-")
        try:
            tree = ast.parse(text.strip(), mode="eval")
        except SyntaxError as exc:
            raise RingError(f"malformed literal {literal!r}") from exc
        return self._eval(tree.body, literal)

    def _eval(self, node, literal):
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return self.from_int(node.value)
        if isinstance(node, ast.Name) and node.id == "w":
            return self.omega()
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand, literal)
            return self.neg(v) if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise RingError(f"exponent must be an integer in {literal!r}")
                return self.pow(self._eval(node.left, literal), node.right.value)
            a = self._eval(node.left, literal)
            b = self._eval(node.right, literal)
            if isinstance(node.op, ast.Add):
                return self.add(a, b)
            if isinstance(node.op, ast.Sub):
                return self.sub(a, b)
            if isinstance(node.op, ast.Mult):
                return self.mul(a, b)
            if isinstance(node.op, ast.Div):
                return self.mul(a, self.inv(b))
        raise RingError(f"malformed literal {literal!r}")

    def format(self, x) -> str:
        if self.kind == "Q2":
            a0, a1 = (self.base.format(v) for v in x)
            if self.base.is_zero(x[1]):
                return a0
            return f"{a0}+{a1}*w"
        return str(x)

    def to_json(self, x):
        if self.kind == "Q2":
            return [self.base.to_json(x[0]), self.base.to_json(x[1])]
        if self.kind == "ZS":
            return x.numerator if x.denominator == 1 else str(x)
        return x

    # --- sampling -------------------------------------------------------------
    def random(self, rng, bound: int = 3):
        """A small random element, used by property tests."""
        if self.kind == "Q2":
            return (self.base.random(rng, bound), self.base.random(rng, bound))
        if self.kind == "ZS":
            num = rng.randint(-bound, bound)
            den = 1
            for p in sorted(self.primes):
                den *= p ** rng.randint(0, 1)
            return Fraction(num, den)
        return self.from_int(rng.randint(-bound, bound))

    def elements(self):
        """All elements of a finite ring, in a fixed order."""
        if self.kind == "ZN":
            return list(range(self.modulus))
        if self.kind == "Q2" and self.base.kind == "ZN":
            els = self.base.elements()
            return [(a, b) for a in els for b in els]
        raise RingError(f"{self} is infinite")


Z = Ring("Z")


def integers_mod(n: int) -> Ring:
    return Ring("ZN", modulus=n)


def localized(primes: Iterable[int]) -> Ring:
    return Ring("ZS", primes=frozenset(primes))


def quadratic(b: int, c: int, base: Ring = Z) -> Ring:
    return Ring("Q2", b=b, c=c, base=base)


_DESCRIPTOR_RE = re.compile(
    r"^(?:(?P<z>Z)"
    r"|Z/(?P<n>\d+)"
    r"|Z\[1/\{(?P<s>[\d,\s]*)\}\]"
    r"|Q2\((?P<b>-?\d+),(?P<c>-?\d+)\)(?:/(?P<qn>\d+)|\[1/\{(?P<qs>[\d,\s]*)\}\])?)$"
)


def parse_ring(text: str) -> Ring:
    """Parse a ring descriptor such as ``"Z/12"`` or ``"Q2(0,1)/2"``."""
    if isinstance(text, Ring):
        return text
    m = _DESCRIPTOR_RE.match(str(text).replace(" ", ""))
    if not m:
        raise RingError(f"unknown ring descriptor {text!r}")
    if m.group("z"):
        return Z
    if m.group("n"):
        return integers_mod(int(m.group("n")))
    if m.group("s") is not None:
        return localized(_prime_set(m.group("s")))
    if m.group("qn"):
        base = integers_mod(int(m.group("qn")))
    elif m.group("qs") is not None:
        base = localized(_prime_set(m.group("qs")))
    else:
        base = Z
    return quadratic(int(m.group("b")), int(m.group("c")), base)


def _prime_set(text: str) -> frozenset:
    items = [s for s in text.split(",") if s.strip()]
    return frozenset(int(s) for s in items)


# ---------------------------------------------------------------------------
# elements and automorphisms


@dataclass(frozen=True)
class RingElement:
    ring: Ring
    value: Any

    def _other(self, y):
        return self.ring.coerce(y)

    def __add__(self, y):
        return RingElement(self.ring, self.ring.add(self.value, self._other(y)))

    __radd__ = __add__

    def __sub__(self, y):
        return RingElement(self.ring, self.ring.sub(self.value, self._other(y)))

    def __rsub__(self, y):
        return RingElement(self.ring, self.ring.sub(self._other(y), self.value))

    def __mul__(self, y):
        return RingElement(self.ring, self.ring.mul(self.value, self._other(y)))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.ring, self.ring.neg(self.value))

    def __pow__(self, n: int):
        return RingElement(self.ring, self.ring.pow(self.value, n))

    def __truediv__(self, y):
        return RingElement(self.ring, self.ring.mul(self.value, self.ring.inv(self._other(y))))

    def __eq__(self, y):
        if isinstance(y, RingElement):
            return self.ring == y.ring and self.value == y.value
        try:
            return self.value == self.ring.coerce(y)
        except RingError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.value))

    def __str__(self):
        return self.ring.format(self.value)


def ring_eval(descriptor, literal) -> RingElement:
    ring = parse_ring(descriptor)
    return RingElement(ring, ring.coerce(literal))


@dataclass(frozen=True)
class Automorphism:
    """Identity or quadratic conjugation on a ring."""

    ring: Ring
    conj: bool = False

    def __post_init__(self):
        if self.conj and not self.ring.is_quadratic:
            raise RingError(f"conjugation needs a quadratic ring, got {self.ring}")

    @classmethod
    def from_tag(cls, ring: Ring, tag: str) -> "Automorphism":
        if tag not in ("id", "conj"):
            raise RingError(f"unknown automorphism tag {tag!r}")
        return cls(ring, tag == "conj")

    @property
    def tag(self) -> str:
        return "conj" if self.conj else "id"

    def __call__(self, x):
        return self.ring.conj(x) if self.conj else x

    def power(self, n: int) -> "Automorphism":
        return Automorphism(self.ring, self.conj and n % 2 == 1)

    def then(self, other: "Automorphism") -> "Automorphism":
        return Automorphism(self.ring, self.conj != other.conj)

    def apply_matrix(self, M: "Matrix") -> "Matrix":
        if not self.conj:
            return M
        return Matrix(M.ring, tuple(tuple(self.ring.conj(x) for x in row) for row in M.rows), M.ncols)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    """A matrix over ``ring``; rows are targets, columns are sources."""

    ring: Ring
    rows: tuple
    ncols: int = -1

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.ncols < 0:
            object.__setattr__(self, "ncols", len(rows[0]) if rows else 0)
        for r in rows:
            if len(r) != self.ncols:
                raise ValueError("ragged matrix rows")

    @classmethod
    def from_entries(cls, ring: Ring, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        data = tuple(tuple(ring.coerce(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        return cls(ring, data, ncols)

    @classmethod
    def zero(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        z = ring.zero()
        return cls(ring, tuple((z,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return cls(ring, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @classmethod
    def scalar(cls, ring: Ring, n: int, x) -> "Matrix":
        z = ring.zero()
        return cls(ring, tuple(tuple(x if i == j else z for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def entry(self, source: int, target: int):
        """Component from source summand ``source`` to target summand ``target``."""
        return self.rows[target][source]

    def compose_after(self, f: "Matrix") -> "Matrix":
        """``self o f``: first ``f``, then ``self``."""
        if self.ring != f.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {f.ring}")
        if self.ncols != f.nrows:
            raise ValueError(f"dimension mismatch: {self.shape} after {f.shape}")
        R = self.ring
        add, mul, zero = R.add, R.mul, R.zero()
        fcols = list(zip(*f.rows)) if f.rows else [()] * f.ncols
        out = []
        for row in self.rows:
            new = []
            for col in fcols:
                acc = zero
                for a, b in zip(row, col):
                    acc = add(acc, mul(a, b))
                new.append(acc)
            out.append(tuple(new))
        return Matrix(R, tuple(out), f.ncols)

    __matmul__ = compose_after

    def _check(self, other: "Matrix"):
        if self.ring != other.ring or self.shape != other.shape:
            raise ValueError(f"shape/ring mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        add = self.ring.add
        return Matrix(self.ring, tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        sub = self.ring.sub
        return Matrix(self.ring, tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols)

    def __neg__(self) -> "Matrix":
        neg = self.ring.neg
        return Matrix(self.ring, tuple(tuple(neg(a) for a in r) for r in self.rows), self.ncols)

    def scale(self, x) -> "Matrix":
        mul = self.ring.mul
        return Matrix(self.ring, tuple(tuple(mul(x, a) for a in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        isz = self.ring.is_zero
        return all(isz(a) for r in self.rows for a in r)

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def to_json(self):
        tj = self.ring.to_json
        return [[tj(a) for a in r] for r in self.rows]

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(self.ring.format(a) for a in r) + "]" for r in self.rows) + "]"


def block_matrix(ring: Ring, blocks: Sequence[Sequence[Matrix | None]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    """Assemble a matrix from blocks; ``None`` stands for a zero block."""
    z = ring.zero()
    rows = []
    for bi, h in enumerate(row_sizes):
        for r in range(h):
            row = []
            for bj, w in enumerate(col_sizes):
                blk = blocks[bi][bj]
                row.extend(blk.rows[r] if blk is not None else (z,) * w)
            rows.append(tuple(row))
    return Matrix(ring, tuple(rows), sum(col_sizes))


def block_diagonal(ring: Ring, mats: Sequence[Matrix]) -> Matrix:
    n = len(mats)
    blocks = [[mats[i] if i == j else None for j in range(n)] for i in range(n)]
    return block_matrix(ring, blocks, [m.nrows for m in mats], [m.ncols for m in mats])


def matrix_block(M: Matrix, i: int, j: int, h: int, w: int) -> Matrix:
    """The ``h x w`` block in block-row ``i`` and block-column ``j``."""
    return Matrix(M.ring, tuple(r[j * w:(j + 1) * w] for r in M.rows[i * h:(i + 1) * h]), w)


def matrix_compose(U: Matrix, V: Matrix) -> Matrix:
    """First ``U`` then ``V``; ``w_{i,k} = sum_j v_{j,k} u_{i,j}``."""
    return V.compose_after(U)


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    R = A.ring
    mul = R.mul
    rows = []
    for ar in A.rows:
        for br in B.rows:
            rows.append(tuple(mul(a, b) for a in ar for b in br))
    return Matrix(R, tuple(rows), A.ncols * B.ncols)


def permutation_matrix(ring: Ring, perm: Sequence[int]) -> Matrix:
    """Matrix sending basis vector ``i`` to basis vector ``perm[i]``."""
    n = len(perm)
    z, o = ring.zero(), ring.one()
    rows = [[z] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = o
    return Matrix(ring, tuple(tuple(r) for r in rows), n)


# ---------------------------------------------------------------------------
# twisted Laurent matrices


@dataclass(frozen=True)
class TwistedLaurentMatrix:
    """A finite sum ``sum_l f_l t^l`` with ``t^l M = alpha^l(M) t^l``."""

    twist: Automorphism
    nrows: int
    ncols: int
    coeffs: tuple = ()  # sorted ((l, Matrix), ...) with nonzero matrices

    def __post_init__(self):
        items = dict(self.coeffs) if not isinstance(self.coeffs, dict) else self.coeffs
        clean = []
        for l in sorted(items):
            M = items[l]
            if M.shape != (self.nrows, self.ncols):
                raise ValueError(f"coefficient at t^{l} has shape {M.shape}, expected {(self.nrows, self.ncols)}")
            if not M.is_zero():
                clean.append((l, M))
        object.__setattr__(self, "coeffs", tuple(clean))

    @property
    def ring(self) -> Ring:
        return self.twist.ring

    @classmethod
    def monomial(cls, twist: Automorphism, M: Matrix, l: int = 0) -> "TwistedLaurentMatrix":
        return cls(twist, M.nrows, M.ncols, {l: M})

    @classmethod
    def zero(cls, twist: Automorphism, nrows: int, ncols: int) -> "TwistedLaurentMatrix":
        return cls(twist, nrows, ncols, {})

    @classmethod
    def identity(cls, twist: Automorphism, n: int) -> "TwistedLaurentMatrix":
        return cls.monomial(twist, Matrix.identity(twist.ring, n), 0)

    def coeff(self, l: int) -> Matrix:
        for k, M in self.coeffs:
            if k == l:
                return M
        return Matrix.zero(self.ring, self.nrows, self.ncols)

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    @property
    def support(self) -> list[int]:
        return [l for l, _ in self.coeffs]

    def compose_after(self, f: "TwistedLaurentMatrix") -> "TwistedLaurentMatrix":
        """``self o f``: coefficient of ``t^(l+l')`` collects ``g_l' alpha^l'(f_l)``."""
        if self.twist != f.twist:
            raise ValueError("twist mismatch")
        if self.ncols != f.nrows:
            raise ValueError(f"dimension mismatch: {self.nrows}x{self.ncols} after {f.nrows}x{f.ncols}")
        out: dict[int, Matrix] = {}
        for lp, g in self.coeffs:
            a = self.twist.power(lp)
            for l, fl in f.coeffs:
                term = g.compose_after(a.apply_matrix(fl))
                out[l + lp] = out[l + lp] + term if l + lp in out else term
        return TwistedLaurentMatrix(self.twist, self.nrows, f.ncols, out)

    __matmul__ = compose_after

    def _combine(self, other, op):
        if self.twist != other.twist or (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("mismatched Laurent matrices")
        a, b = self.as_dict(), other.as_dict()
        out = {}
        zero = Matrix.zero(self.ring, self.nrows, self.ncols)
        for l in set(a) | set(b):
            out[l] = op(a.get(l, zero), b.get(l, zero))
        return TwistedLaurentMatrix(self.twist, self.nrows, self.ncols, out)

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __neg__(self):
        return TwistedLaurentMatrix(self.twist, self.nrows, self.ncols, {l: -M for l, M in self.coeffs})

    def __eq__(self, other):
        if not isinstance(other, TwistedLaurentMatrix):
            return NotImplemented
        return (self.twist, self.nrows, self.ncols, self.coeffs) == (other.twist, other.nrows, other.ncols, other.coeffs)

    def __hash__(self):
        return hash((self.twist, self.nrows, self.ncols, self.coeffs))

    def entry(self, row: int, col: int) -> dict:
        """Laurent polynomial ``{l: scalar}`` at position (row=target, col=source)."""
        return {l: M.rows[row][col] for l, M in self.coeffs if not self.ring.is_zero(M.rows[row][col])}

    def block(self, i: int, j: int, h: int, w: int) -> "TwistedLaurentMatrix":
        return TwistedLaurentMatrix(self.twist, h, w, {l: matrix_block(M, i, j, h, w) for l, M in self.coeffs})

    def to_json(self):
        return {str(l): M.to_json() for l, M in self.coeffs}


def laurent_compose(f: TwistedLaurentMatrix, g: TwistedLaurentMatrix) -> TwistedLaurentMatrix:
    """First ``f`` then ``g``."""
    return g.compose_after(f)


def laurent_from_blocks(twist: Automorphism, blocks, row_sizes, col_sizes) -> TwistedLaurentMatrix:
    """Assemble a Laurent matrix from a grid of Laurent blocks (``None`` = zero)."""
    R = twist.ring
    exps = set()
    for brow in blocks:
        for blk in brow:
            if blk is not None:
                exps.update(blk.support)
    out = {}
    for l in exps:
        grid = [[blk.coeff(l) if blk is not None else None for blk in brow] for brow in blocks]
        out[l] = block_matrix(R, grid, row_sizes, col_sizes)
    return TwistedLaurentMatrix(twist, sum(row_sizes), sum(col_sizes), out)


# ---------------------------------------------------------------------------
# polynomials and truncated series


def trim(coeffs: Sequence, ring: Ring) -> tuple:
    c = list(coeffs)
    while c and ring.is_zero(c[-1]):
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    ring: Ring
    coeffs: tuple = ()  # coefficient of t^i at index i

    def __post_init__(self):
        object.__setattr__(self, "coeffs", trim(self.coeffs, self.ring))

    @classmethod
    def from_values(cls, ring: Ring, values: Iterable) -> "Polynomial":
        return cls(ring, tuple(ring.coerce(v) for v in values))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero()

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.ring, tuple(self.ring.add(self.coeff(i), other.coeff(i)) for i in range(n)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.ring, tuple(self.ring.sub(self.coeff(i), other.coeff(i)) for i in range(n)))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(self.ring, poly_mul(self.ring, self.coeffs, other.coeffs))

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def truncate(self, N: int) -> tuple:
        """Coefficients of ``t^0 .. t^N``."""
        return tuple(self.coeff(i) for i in range(N + 1))

    def to_json(self):
        return [self.ring.to_json(c) for c in self.coeffs]


def poly_mul(ring: Ring, a: Sequence, b: Sequence, limit: int | None = None) -> tuple:
    """Product of coefficient sequences, optionally keeping only degrees ``<= limit``."""
    if not a or not b:
        return ()
    n = len(a) + len(b) - 1
    if limit is not None:
        n = min(n, limit + 1)
    add, mul = ring.add, ring.mul
    out = [ring.zero()] * n
    for i, x in enumerate(a):
        if i >= n:
            break
        if ring.is_zero(x):
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] = add(out[i + j], mul(x, b[j]))
    return tuple(out)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of ``t^0 .. t^N`` of a power series."""

    ring: Ring
    N: int
    coeffs: tuple

    def __post_init__(self):
        c = tuple(self.coeffs)[: self.N + 1]
        c = c + (self.ring.zero(),) * (self.N + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        N = min(self.N, other.N)
        return TruncatedSeries(self.ring, N, poly_mul(self.ring, self.coeffs, other.coeffs, N))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        N = min(self.N, other.N)
        return TruncatedSeries(self.ring, N, tuple(self.ring.add(a, b) for a, b in zip(self.coeffs[: N + 1], other.coeffs[: N + 1])))

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs a unit constant term."""
        R = self.ring
        c0inv = R.inv(self.coeffs[0])
        out = [c0inv]
        for n in range(1, self.N + 1):
            acc = R.zero()
            for k in range(1, n + 1):
                acc = R.add(acc, R.mul(self.coeffs[k], out[n - k]))
            out.append(R.neg(R.mul(c0inv, acc)))
        return TruncatedSeries(R, self.N, tuple(out))


# ---------------------------------------------------------------------------
# twisted group rings


@dataclass(frozen=True)
class TwistedGroupRingElement:
    """``sum_g r_g g`` in ``R_rho[G]``; ``rho`` lists, per group element, whether it acts by conjugation."""

    ring: Ring
    group: Any
    rho: tuple
    terms: tuple = ()  # sorted ((g, r_g), ...) with r_g nonzero

    def __post_init__(self):
        items = dict(self.terms) if not isinstance(self.terms, dict) else self.terms
        clean = tuple((g, items[g]) for g in sorted(items) if not self.ring.is_zero(items[g]))
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "rho", tuple(bool(x) for x in self.rho))
        if len(self.rho) != self.group.order:
            raise ValueError("rho must give one automorphism tag per group element")

    def act(self, g: int, x):
        return self.ring.conj(x) if self.rho[g] else x

    def _check(self, other):
        if self.ring != other.ring or self.group is not other.group and self.group != other.group or self.rho != other.rho:
            raise ValueError("mismatched twisted group ring contexts")

    def __mul__(self, other: "TwistedGroupRingElement") -> "TwistedGroupRingElement":
        self._check(other)
        R = self.ring
        mul = self.group.mul
        out: dict = {}
        for g, r in self.terms:
            for h, s in other.terms:
                k = mul(g, h)
                v = R.mul(r, self.act(g, s))
                out[k] = R.add(out[k], v) if k in out else v
        return TwistedGroupRingElement(R, self.group, self.rho, out)

    def __add__(self, other: "TwistedGroupRingElement") -> "TwistedGroupRingElement":
        self._check(other)
        out = dict(self.terms)
        for g, r in other.terms:
            out[g] = self.ring.add(out[g], r) if g in out else r
        return TwistedGroupRingElement(self.ring, self.group, self.rho, out)

    def __eq__(self, other):
        return isinstance(other, TwistedGroupRingElement) and self.ring == other.ring and self.rho == other.rho and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.rho, self.terms))

    def coeff(self, g: int):
        return dict(self.terms).get(g, self.ring.zero())

    @classmethod
    def unit(cls, ring: Ring, group, rho) -> "TwistedGroupRingElement":
        return cls(ring, group, rho, {group.identity: ring.one()})


def twisted_group_ring_mul(a: TwistedGroupRingElement, b: TwistedGroupRingElement) -> TwistedGroupRingElement:
    return a * b


def action_from_generators(group, gens: Sequence[int], conj_flags: Sequence[bool]) -> tuple:
    """Extend a generator assignment ``g -> {id, conj}`` to a homomorphism ``G -> Z/2``."""
    tags = {group.identity: False}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, f in zip(gens, conj_flags):
                y = group.mul(x, g)
                v = tags[x] != bool(f)
                if y in tags:
                    if tags[y] != v:
                        raise ValueError("generator tags do not define a homomorphism")
                else:
                    tags[y] = v
                    nxt.append(y)
        frontier = nxt
    if len(tags) != group.order:
        raise ValueError("generators do not generate the group")
    return tuple(tags[g] for g in range(group.order))
