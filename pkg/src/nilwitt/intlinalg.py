"""Integer and p-local linear algebra on top of sympy's Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy import ZZ, Matrix as SMatrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp


def valuation(x, p: int) -> float:
    """p-adic valuation of an integer or fraction; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def is_p_local(x, p: int) -> bool:
    return Fraction(x).denominator % p != 0


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def matmul(A, B) -> list:
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def smith(A: Sequence[Sequence[int]], nrows: int | None = None, ncols: int | None = None):
    """``(D, U, V)`` with ``U A V = D`` as lists of integer rows."""
    m = nrows if nrows is not None else len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if m == 0 or n == 0:
        U = [[int(i == j) for j in range(m)] for i in range(m)]
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        return [[0] * n for _ in range(m)], U, V
    M = SMatrix(m, n, lambda i, j: int(A[i][j]))
    D, U, V = smith_normal_decomp(M, domain=ZZ)
    tolist = lambda X: [[int(v) for v in row] for row in X.tolist()]
    return tolist(D), tolist(U), tolist(V)


@dataclass
class Infeasible:
    """Certificate: ``functional . A`` lies in ``p Z_(p)`` while ``functional . b`` is a p-unit."""

    prime: int
    functional: list
    values_on_columns: list
    value_on_target: Fraction

    def verify(self) -> bool:
        p = self.prime
        return all(valuation(v, p) >= 1 for v in self.values_on_columns) and valuation(self.value_on_target, p) == 0


def p_local_solve(A: Sequence[Sequence[int]], b: Sequence[int], p: int, ncols: int | None = None):
    """Solve ``A x = b`` with entries of ``x`` in ``Z_(p)``; returns a list of Fractions or :class:`Infeasible`."""
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if len(b) != m:
        raise ValueError("right-hand side has the wrong length")
    D, U, V = smith(A, m, n)
    c = [sum(U[i][k] * int(b[k]) for k in range(m)) for i in range(m)]
    rank = sum(1 for i in range(min(m, n)) if D[i][i] != 0)
    y = [Fraction(0)] * n
    for i in range(m):
        d = D[i][i] if i < min(m, n) else 0
        if i < rank:
            if valuation(d, p) > valuation(c[i], p):
                return _certificate(A, b, U[i], c[i], p, n)
            y[i] = Fraction(c[i], d)
        elif c[i] != 0:
            return _certificate(A, b, U[i], c[i], p, n)
    x = [sum((V[i][j] * y[j] for j in range(n)), Fraction(0)) for i in range(n)]
    return x


def _certificate(A, b, row, ci, p, n) -> Infeasible:
    v = int(valuation(ci, p))
    scale = Fraction(1, p ** v)
    functional = [Fraction(u) * scale for u in row]
    values = [sum((functional[k] * A[k][j] for k in range(len(A))), Fraction(0)) for j in range(n)]
    target = sum((functional[k] * int(b[k]) for k in range(len(A))), Fraction(0))
    cert = Infeasible(p, functional, values, target)
    if not cert.verify():
        raise ArithmeticError("internal error: infeasibility certificate failed to verify")
    return cert


def integer_solve(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> list[int] | None:
    """An integer solution of ``A x = b`` or ``None``."""
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    D, U, V = smith(A, m, n)
    c = [sum(U[i][k] * int(b[k]) for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < min(m, n) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d:
                return None
            y[i] = c[i] // d
    return [sum(V[i][j] * y[j] for j in range(n)) for i in range(n)]


def column_hnf(A: Sequence[Sequence[int]], nrows: int) -> list[list[int]]:
    """Column Hermite normal form: a basis (as columns) of the lattice spanned by the columns of ``A``."""
    if not A or not A[0]:
        return [[] for _ in range(nrows)]
    H = hermite_normal_form(SMatrix(A))
    return [[int(v) for v in row] for row in H.tolist()]


def rational_inverse(B: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(B)
    inv = SMatrix(B).inv()
    return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)] for i in range(n)]


def rational_nullspace(A: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer vectors spanning the rational kernel of ``A``."""
    if not A:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    out = []
    for v in SMatrix(A).nullspace():
        den = lcm(*(int(x.q) for x in v))
        out.append([int(x * den) for x in v])
    return out
