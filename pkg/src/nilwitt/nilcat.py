"""Twisted nilpotent endomorphisms and the Verschiebung/Frobenius block matrices.

A context is a ring ``R`` with an automorphism ``alpha`` acting entrywise on
matrices.  An object is a square matrix ``phi`` (a map ``alpha(A) -> A`` with
``alpha`` acting trivially on the free module itself) whose twisted powers

    phi^(n) = phi . alpha(phi) . alpha^2(phi) ... alpha^(n-1)(phi)

eventually vanish.  All the identities below are checked as literal
equalities of matrices or of twisted Laurent matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .endk import EndObject
from .rings import (
    Automorphism,
    Matrix,
    Ring,
    TwistedLaurentMatrix,
    block_diagonal,
    block_matrix,
    laurent_from_blocks,
    parse_ring,
    permutation_matrix,
)

NILPOTENCY_FACTOR = 64


class NilError(ValueError):
    pass


@dataclass(frozen=True)
class NilContext:
    twist: Automorphism

    @property
    def ring(self) -> Ring:
        return self.twist.ring

    @classmethod
    def of(cls, ring, tag: str = "id") -> "NilContext":
        return cls(Automorphism.from_tag(parse_ring(ring), tag))

    def power(self, k: int) -> "NilContext":
        return NilContext(self.twist.power(k))

    @property
    def tag(self) -> str:
        return self.twist.tag


def twisted_power_matrix(phi: Matrix, twist: Automorphism, n: int) -> Matrix:
    if n < 1:
        raise NilError("twisted powers start at n = 1")
    P = phi
    for i in range(1, n):
        P = P @ twist.power(i).apply_matrix(phi)
    return P


def _degree(phi: Matrix, twist: Automorphism, bound: int) -> int | None:
    if phi.is_zero():
        return 1
    P = phi
    for n in range(2, bound + 1):
        P = P @ twist.power(n - 1).apply_matrix(phi)
        if P.is_zero():
            return n
    return None


@dataclass(frozen=True)
class NilObject:
    context: NilContext
    matrix: Matrix

    def __post_init__(self):
        M = self.matrix
        if M.nrows != M.ncols:
            raise NilError("nil object matrix must be square")
        if M.ring != self.context.ring:
            raise NilError("matrix ring differs from context ring")
        bound = max(1, M.nrows) * NILPOTENCY_FACTOR
        d = _degree(M, self.context.twist, bound)
        if d is None:
            raise NilError(f"matrix is not twisted-nilpotent within {bound} steps")
        object.__setattr__(self, "_degree", d)

    @classmethod
    def from_rows(cls, ring, rows, twist: str = "id") -> "NilObject":
        ctx = NilContext.of(ring, twist)
        rows = list(rows)
        return cls(ctx, Matrix.from_entries(ctx.ring, rows, len(rows)))

    @property
    def rank(self) -> int:
        return self.matrix.nrows

    @property
    def ring(self) -> Ring:
        return self.context.ring

    @property
    def twist(self) -> Automorphism:
        return self.context.twist

    def to_json(self):
        return {"ring": self.ring.descriptor, "twist": self.context.tag, "rank": self.rank, "matrix": self.matrix.to_json()}


def nil_from_json(data) -> NilObject:
    try:
        ring = parse_ring(data["ring"])
        rows = data["matrix"]
    except (KeyError, TypeError) as exc:
        raise NilError(f"nil object needs ring and matrix: {exc}") from exc
    rank = int(data.get("rank", len(rows)))
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise NilError(f"matrix is not {rank}x{rank}")
    ctx = NilContext.of(ring, data.get("twist", "id"))
    return NilObject(ctx, Matrix.from_entries(ring, rows, rank))


def twisted_power(x: NilObject, n: int) -> Matrix:
    return twisted_power_matrix(x.matrix, x.twist, n)


def nilpotence_degree(x: NilObject) -> int:
    return x._degree


def nil_sum(x: NilObject, y: NilObject) -> NilObject:
    if x.context != y.context:
        raise NilError("context mismatch")
    return NilObject(x.context, block_diagonal(x.ring, [x.matrix, y.matrix]))


def verschiebung_matrix(phi: Matrix, k: int) -> Matrix:
    """``phi`` in the top-right block, identities on the block subdiagonal."""
    if k < 1:
        raise NilError("k must be at least 1")
    r = phi.nrows
    R = phi.ring
    I = Matrix.identity(R, r)
    blocks = [[None] * k for _ in range(k)]
    blocks[0][k - 1] = phi
    for i in range(k - 1):
        blocks[i + 1][i] = I
    return block_matrix(R, blocks, [r] * k, [r] * k)


def verschiebung(x: NilObject, k: int) -> NilObject:
    """``V_k``: reads ``x.matrix`` as a map out of ``alpha^k(A)`` and returns a rank ``k r`` object."""
    return NilObject(x.context, verschiebung_matrix(x.matrix, k))


def frobenius(x: NilObject, k: int) -> NilObject:
    """``F_k``: the k-th twisted power, over the context twisted by ``alpha^k``."""
    if k < 1:
        raise NilError("k must be at least 1")
    return NilObject(x.context.power(k), twisted_power(x, k))


def fv_expected(x: NilObject, k: int) -> Matrix:
    return block_diagonal(x.ring, [x.twist.power(i).apply_matrix(x.matrix) for i in range(k)])


def check_fv_lemma(x: NilObject, k: int) -> bool:
    """``F_k V_k (A, phi)`` equals ``diag(phi, alpha(phi), ..., alpha^(k-1)(phi))``."""
    V = verschiebung_matrix(x.matrix, k)
    return twisted_power_matrix(V, x.twist, k) == fv_expected(x, k)


def sum_permutation(k: int, r1: int, r2: int) -> list[int]:
    """Where each basis vector of ``V_k(x + y)`` lands in ``V_k(x) + V_k(y)``."""
    perm = []
    for i in range(k):
        for a in range(r1):
            perm.append(i * r1 + a)
        for b in range(r2):
            perm.append(k * r1 + i * r2 + b)
    return perm


def check_verschiebung_additive(x: NilObject, y: NilObject, k: int) -> bool:
    P = permutation_matrix(x.ring, sum_permutation(k, x.rank, y.rank))
    lhs = verschiebung_matrix(nil_sum(x, y).matrix, k)
    rhs = block_diagonal(x.ring, [verschiebung_matrix(x.matrix, k), verschiebung_matrix(y.matrix, k)])
    return P @ lhs == rhs @ P


def pair_end(C: EndObject, x: NilObject) -> NilObject:
    """Block ``(i, j)`` is ``c_ij * phi``; the block shuffle is the identity in this model."""
    if C.ring.kind != "Z":
        raise NilError("the endomorphism must have integer entries")
    R = x.ring
    n, r = C.rank, x.rank
    blocks = [[x.matrix.scale(R.from_int(C.matrix.rows[i][j])) for j in range(n)] for i in range(n)]
    return NilObject(x.context, block_matrix(R, blocks, [r] * n, [r] * n))


# ---------------------------------------------------------------------------
# twisted Laurent identities


def _mono(twist: Automorphism, M: Matrix, l: int = 0) -> TwistedLaurentMatrix:
    return TwistedLaurentMatrix.monomial(twist, M, l)


def laurent_unit_candidate(x: NilObject) -> TwistedLaurentMatrix:
    """``id t^-1 - phi t^0``."""
    R, r = x.ring, x.rank
    return TwistedLaurentMatrix(x.twist, r, r, {-1: Matrix.identity(R, r), 0: -x.matrix})


def laurent_inverse(x: NilObject) -> TwistedLaurentMatrix:
    """Two-sided inverse ``sum_i alpha(phi^(i)) t^(i+1)`` of :func:`laurent_unit_candidate`."""
    R, r = x.ring, x.rank
    a = x.twist
    coeffs = {1: Matrix.identity(R, r)}
    P = Matrix.identity(R, r)
    for i in range(1, nilpotence_degree(x)):
        P = P @ a.power(i).apply_matrix(x.matrix)
        coeffs[i + 1] = P
    return TwistedLaurentMatrix(a, r, r, coeffs)


def restrict_k(f: TwistedLaurentMatrix, k: int) -> TwistedLaurentMatrix:
    """The restriction to ``alpha^k``-twisted Laurent matrices as a ``k x k`` block matrix.

    ``f_l t^l`` contributes ``alpha^j(f_l) t^m`` from source block ``i`` to
    target block ``j`` whenever ``i + m k = j + l``.
    """
    a = f.twist
    h, w = f.nrows, f.ncols
    R = f.ring
    out: dict[int, list] = {}
    for l, M in f.coeffs:
        for i in range(k):
            for j in range(k):
                if (j + l - i) % k:
                    continue
                m = (j + l - i) // k
                grid = out.setdefault(m, [[None] * k for _ in range(k)])
                blk = a.power(j).apply_matrix(M)
                grid[j][i] = blk if grid[j][i] is None else grid[j][i] + blk
    return TwistedLaurentMatrix(
        a.power(k), k * h, k * w, {m: block_matrix(R, g, [h] * k, [w] * k) for m, g in out.items()}
    )


def induction_matrices(x: NilObject, k: int) -> tuple[TwistedLaurentMatrix, TwistedLaurentMatrix]:
    """The block matrices ``u`` and ``v`` over the ``alpha^k``-twisted Laurent ring."""
    R, r, a = x.ring, x.rank, x.twist
    ak = a.power(k)
    I = Matrix.identity(R, r)
    phi = x.matrix
    u = [[None] * k for _ in range(k)]
    v = [[None] * k for _ in range(k)]
    for c in range(k - 1):
        u[0][c] = _mono(ak, -twisted_power_matrix(phi, a, c + 1))
        u[c + 1][c] = _mono(ak, I)
    corner = _mono(ak, I, -1) - _mono(ak, twisted_power_matrix(phi, a, k))
    if k == 1:
        u[0][0] = corner
    else:
        u[0][k - 1] = corner if u[0][k - 1] is None else u[0][k - 1] + corner
    for i in range(k):
        v[i][i] = _mono(ak, I)
        if i + 1 < k:
            v[i][i + 1] = _mono(ak, -a.power(i + 1).apply_matrix(phi))
    sizes = [r] * k
    return laurent_from_blocks(ak, u, sizes, sizes), laurent_from_blocks(ak, v, sizes, sizes)


def check_induction_identity(x: NilObject, k: int) -> bool:
    """``u o v`` equals the restriction of ``id t^-1 - phi t^0``."""
    u, v = induction_matrices(x, k)
    return u @ v == restrict_k(laurent_unit_candidate(x), k)


# ---------------------------------------------------------------------------
# triangular decomposition of the paired unit candidate


@dataclass
class TriangularReport:
    matches_form: bool
    nonpositive: bool
    zero_clause_applies: bool
    zero_clause_holds: bool
    F_hat: TwistedLaurentMatrix
    w: list

    @property
    def ok(self) -> bool:
        return self.matches_form and self.nonpositive and (self.zero_clause_holds or not self.zero_clause_applies)


def _check_lambdas(lams: Sequence[int]):
    for v in lams:
        if not isinstance(v, int) or isinstance(v, bool):
            raise NilError("the coefficients lambda must be integers")


def unit_matrix_U(x: NilObject, lams: Sequence[int]) -> TwistedLaurentMatrix:
    """``id t^-1 - F(C_n(lams), phi) t^0``."""
    _check_lambdas(lams)
    n = len(lams)
    C = _companion_int(lams)
    paired = pair_end(C, x).matrix
    R, r = x.ring, x.rank
    return TwistedLaurentMatrix(x.twist, n * r, n * r, {-1: Matrix.identity(R, n * r), 0: -paired})


def _companion_int(lams):
    from .endk import companion

    return companion(list(lams), "Z")


def matrix_E(x: NilObject, n: int) -> TwistedLaurentMatrix:
    """Lower triangular Toeplitz matrix with ``phi^(i-j) t^(i-j)`` at block ``(i, j)``."""
    R, r, a = x.ring, x.rank, x.twist
    blocks = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            m = i - j
            M = Matrix.identity(R, r) if m == 0 else twisted_power_matrix(x.matrix, a, m)
            blocks[i][j] = _mono(a, M, m)
    return laurent_from_blocks(a, blocks, [r] * n, [r] * n)


def shift(twist: Automorphism, size: int, l: int) -> TwistedLaurentMatrix:
    return _mono(twist, Matrix.identity(twist.ring, size), l)


def w_terms(x: NilObject, lams: Sequence[int], k: int) -> TwistedLaurentMatrix:
    """``w_k = sum_{i<k} lam_{n+1-k+i} alpha^(1-n)(phi^(i+1)) t^(i+1-n)``."""
    n = len(lams)
    R, r, a = x.ring, x.rank, x.twist
    out = TwistedLaurentMatrix.zero(a, r, r)
    for i in range(k):
        lam = lams[n - k + i]  # lam_{n+1-k+i} with 1-based lambdas
        if lam == 0:
            continue
        M = a.power(1 - n).apply_matrix(twisted_power_matrix(x.matrix, a, i + 1)).scale(R.from_int(lam))
        out = out + _mono(a, M, i + 1 - n)
    return out


def expected_F_hat(x: NilObject, lams: Sequence[int]) -> TwistedLaurentMatrix:
    n = len(lams)
    r, a = x.rank, x.twist
    blocks = [[None] * n for _ in range(n)]
    for i in range(n):
        blocks[i][i] = shift(a, r, -n)
    for k in range(1, n + 1):
        wk = w_terms(x, lams, k)
        blocks[k - 1][n - 1] = (blocks[k - 1][n - 1] - wk) if blocks[k - 1][n - 1] is not None else -wk
    return laurent_from_blocks(a, blocks, [r] * n, [r] * n)


def triangular_decomposition(x: NilObject, lams: Sequence[int], N: int | None = None) -> TriangularReport:
    _check_lambdas(lams)
    n = len(lams)
    if n < 1:
        raise NilError("need at least one coefficient")
    r, a = x.rank, x.twist
    U = unit_matrix_U(x, lams)
    E = matrix_E(x, n)
    E_hat = shift(a, n * r, 1 - n) @ E
    F_hat = E_hat @ U
    matches = F_hat == expected_F_hat(x, lams)
    nonpos = all(l <= 0 for l in E_hat.support) and all(l <= 0 for l in F_hat.support)
    corner = F_hat.block(n - 1, n - 1, r, r)
    w_n = shift(a, r, -n) - corner
    applies = False
    holds = True
    if N is not None and N >= 1:
        applies = twisted_power(x, N).is_zero() and all(v == 0 for v in lams[: N - 1])
        if applies:
            holds = not w_n.coeffs
    ws = [w_terms(x, lams, k) for k in range(1, n + 1)]
    return TriangularReport(matches, nonpos, applies, holds, F_hat, ws)


def check_triangular_decomposition(x: NilObject, lams: Sequence[int], N: int | None = None) -> bool:
    return triangular_decomposition(x, lams, N).ok
