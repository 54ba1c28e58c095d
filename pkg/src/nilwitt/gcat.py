"""Equivariant matrix categories over a finite G-set with ring coefficients.

An object is a pair ``(R^r, x)`` with ``x`` a point of a G-set ``X``.  A
morphism ``(R^r, x) -> (R^s, x')`` is a finite formal sum
``sum_g f_g . g`` over the elements with ``g x = x'``, where ``f_g`` is an
``s x r`` matrix.  Group elements act on the coefficients through ``rho``,
which assigns to every element either the identity or conjugation of a
quadratic ring.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fingroup import FiniteGroup, group_from_json, mask_elements
from .mackey import GMap, GSet, coset_gset
from .rings import (
    Matrix,
    Ring,
    TwistedGroupRingElement,
    action_from_generators,
    block_matrix,
    kronecker,
    parse_ring,
)


class GCatError(ValueError):
    pass


@dataclass(frozen=True)
class Coefficients:
    """Ring ``R`` with the action ``rho`` of a finite group on it."""

    ring: Ring
    group: FiniteGroup
    rho: tuple

    def __post_init__(self):
        rho = tuple(bool(v) for v in self.rho)
        object.__setattr__(self, "rho", rho)
        G = self.group
        if len(rho) != G.order:
            raise GCatError("rho needs one entry per group element")
        if any(rho) and not self.ring.is_quadratic:
            raise GCatError("a nontrivial action needs a quadratic ring")
        for g in range(G.order):
            for h in range(G.order):
                if rho[G.mul(g, h)] != (rho[g] != rho[h]):
                    raise GCatError("rho is not a homomorphism to {id, conj}")

    @classmethod
    def trivial(cls, ring: Ring, group: FiniteGroup) -> "Coefficients":
        return cls(ring, group, (False,) * group.order)

    def act(self, g: int, M: Matrix) -> Matrix:
        if not self.rho[g]:
            return M
        R = self.ring
        return Matrix(R, tuple(tuple(R.conj(x) for x in row) for row in M.rows), M.ncols)


@dataclass(frozen=True)
class EquivariantObject:
    gset: GSet
    point: int
    rank: int

    def __post_init__(self):
        if not 0 <= self.point < self.gset.size:
            raise GCatError(f"point {self.point} is not in the G-set")
        if self.rank < 0:
            raise GCatError("rank must be non-negative")


@dataclass(frozen=True)
class EquivariantMorphism:
    coeffs: Coefficients
    source: EquivariantObject
    target: EquivariantObject
    terms: tuple = ()  # sorted ((g, f_g), ...), zero matrices dropped

    def __post_init__(self):
        items = dict(self.terms)
        X = self.source.gset
        if self.target.gset.action != X.action:
            raise GCatError("source and target lie over different G-sets")
        clean = []
        for g in sorted(items):
            M = items[g]
            if M.shape != (self.target.rank, self.source.rank):
                raise GCatError(f"component at {g} has shape {M.shape}, expected {(self.target.rank, self.source.rank)}")
            if M.is_zero():
                continue
            if X.act(g, self.source.point) != self.target.point:
                raise GCatError(f"element {g} does not carry {self.source.point} to {self.target.point}")
            clean.append((g, M))
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def ring(self) -> Ring:
        return self.coeffs.ring

    def coeff(self, g: int) -> Matrix:
        return dict(self.terms).get(g, Matrix.zero(self.ring, self.target.rank, self.source.rank))

    def support(self) -> list[int]:
        return [g for g, _ in self.terms]

    def __add__(self, other: "EquivariantMorphism") -> "EquivariantMorphism":
        if (self.source, self.target) != (other.source, other.target):
            raise GCatError("cannot add morphisms between different objects")
        out = dict(self.terms)
        for g, M in other.terms:
            out[g] = out[g] + M if g in out else M
        return EquivariantMorphism(self.coeffs, self.source, self.target, tuple(out.items()))

    def __matmul__(self, other: "EquivariantMorphism") -> "EquivariantMorphism":
        return compose(self, other)

    def to_json(self):
        return {
            "source": {"point": self.source.point, "rank": self.source.rank},
            "target": {"point": self.target.point, "rank": self.target.rank},
            "terms": [{"g": g, "matrix": M.to_json()} for g, M in self.terms],
        }


def identity(coeffs: Coefficients, obj: EquivariantObject) -> EquivariantMorphism:
    return EquivariantMorphism(coeffs, obj, obj, ((coeffs.group.identity, Matrix.identity(coeffs.ring, obj.rank)),))


def zero_morphism(coeffs: Coefficients, source: EquivariantObject, target: EquivariantObject) -> EquivariantMorphism:
    return EquivariantMorphism(coeffs, source, target, ())


def compose(after: EquivariantMorphism, first: EquivariantMorphism) -> EquivariantMorphism:
    """``after o first``: the ``g' g`` coefficient collects ``after_{g'} o rho(g')(first_g)``."""
    if first.target != after.source:
        raise GCatError("target of the first morphism is not the source of the second")
    C = after.coeffs
    G = C.group
    out: dict = {}
    for h, B in after.terms:
        for g, A in first.terms:
            k = G.mul(h, g)
            v = B @ C.act(h, A)
            out[k] = out[k] + v if k in out else v
    return EquivariantMorphism(C, first.source, after.target, tuple(out.items()))


def induce(f: GMap, phi: EquivariantMorphism) -> EquivariantMorphism:
    """Push base points along ``f``; the formal sum is unchanged."""
    if f.source.action != phi.source.gset.action:
        raise GCatError("map does not start at the G-set of the morphism")
    Y = f.target
    src = EquivariantObject(Y, f(phi.source.point), phi.source.rank)
    tgt = EquivariantObject(Y, f(phi.target.point), phi.target.rank)
    return EquivariantMorphism(phi.coeffs, src, tgt, phi.terms)


@dataclass(frozen=True)
class BlockMorphism:
    """A matrix of equivariant morphisms between finite direct sums of objects."""

    coeffs: Coefficients
    sources: tuple
    targets: tuple
    components: tuple  # components[j][i]: sources[i] -> targets[j]

    def component(self, i: int, j: int) -> EquivariantMorphism:
        return self.components[j][i]

    def __matmul__(self, other: "BlockMorphism") -> "BlockMorphism":
        if other.targets != self.sources:
            raise GCatError("block morphisms are not composable")
        rows = []
        for k, tgt in enumerate(self.targets):
            row = []
            for i, src in enumerate(other.sources):
                acc = zero_morphism(self.coeffs, src, tgt)
                for j in range(len(self.sources)):
                    acc = acc + compose(self.components[k][j], other.components[j][i])
                row.append(acc)
            rows.append(tuple(row))
        return BlockMorphism(self.coeffs, other.sources, self.targets, tuple(rows))

    def __eq__(self, other):
        return (
            isinstance(other, BlockMorphism)
            and self.sources == other.sources
            and self.targets == other.targets
            and all(a.terms == b.terms for ra, rb in zip(self.components, other.components) for a, b in zip(ra, rb))
        )

    def __hash__(self):
        return hash((self.sources, self.targets))

    def to_json(self):
        return {
            "sources": [{"point": o.point, "rank": o.rank} for o in self.sources],
            "targets": [{"point": o.point, "rank": o.rank} for o in self.targets],
            "components": [[m.to_json()["terms"] for m in row] for row in self.components],
        }


def fiber(f: GMap, y: int) -> list[int]:
    return [x for x in range(f.source.size) if f(x) == y]


def restrict(f: GMap, phi: EquivariantMorphism) -> BlockMorphism:
    """Restriction along ``f: X -> Y``: the ``(x, x')`` component is ``sum over g x = x'`` of ``phi_g . g``."""
    if f.target.action != phi.source.gset.action:
        raise GCatError("map does not end at the G-set of the morphism")
    X = f.source
    xs = fiber(f, phi.source.point)
    xts = fiber(f, phi.target.point)
    sources = tuple(EquivariantObject(X, x, phi.source.rank) for x in xs)
    targets = tuple(EquivariantObject(X, x, phi.target.rank) for x in xts)
    rows = []
    for tgt in targets:
        row = []
        for src in sources:
            terms = tuple((g, M) for g, M in phi.terms if X.act(g, src.point) == tgt.point)
            row.append(EquivariantMorphism(phi.coeffs, src, tgt, terms))
        rows.append(tuple(row))
    return BlockMorphism(phi.coeffs, sources, targets, tuple(rows))


def as_block(phi: EquivariantMorphism) -> BlockMorphism:
    return BlockMorphism(phi.coeffs, (phi.source,), (phi.target,), ((phi,),))


# ---------------------------------------------------------------------------
# Swan coefficient systems


@dataclass(frozen=True)
class SwanCoefficientSystem:
    """A functor from the transport groupoid of ``X`` to free abelian groups.

    ``action[(g, x)]`` is the integer matrix of ``M(x) -> M(g x)``.
    """

    gset: GSet
    ranks: tuple
    action: dict

    def __post_init__(self):
        X = self.gset
        G = X.group
        if len(self.ranks) != X.size:
            raise GCatError("one rank per point is required")
        for g in range(G.order):
            for x in range(X.size):
                if (g, x) not in self.action:
                    raise GCatError(f"missing matrix for element {g} at point {x}")
                M = self.action[(g, x)]
                r, s = self.ranks[x], self.ranks[X.act(g, x)]
                if len(M) != s or any(len(row) != r for row in M):
                    raise GCatError(f"matrix for ({g}, {x}) has the wrong shape")
        e = G.identity
        for x in range(X.size):
            if self.action[(e, x)] != _eye(self.ranks[x]):
                raise GCatError(f"identity does not act as the identity at point {x}")
        for g in range(G.order):
            for h in range(G.order):
                for x in range(X.size):
                    lhs = self.action[(G.mul(g, h), x)]
                    rhs = _imul(self.action[(g, X.act(h, x))], self.action[(h, x)])
                    if lhs != rhs:
                        raise GCatError(f"not functorial at ({g}, {h}) on point {x}")

    def matrix(self, g: int, x: int) -> list:
        return self.action[(g, x)]

    @classmethod
    def trivial(cls, X: GSet, rank: int = 1) -> "SwanCoefficientSystem":
        return cls(X, (rank,) * X.size, {(g, x): _eye(rank) for g in range(X.group.order) for x in range(X.size)})

    @classmethod
    def from_character(cls, X: GSet, signs: Sequence[int]) -> "SwanCoefficientSystem":
        """Rank one, ``g`` acting by ``signs[g]`` everywhere (``signs`` a homomorphism to ``{1, -1}``)."""
        G = X.group
        return cls(X, (1,) * X.size, {(g, x): [[int(signs[g])]] for g in range(G.order) for x in range(X.size)})

    @classmethod
    def permutation(cls, X: GSet, Y: GSet) -> "SwanCoefficientSystem":
        """Constant system ``Z[Y]`` with ``g`` permuting the basis."""
        n = Y.size
        act = {}
        for g in range(X.group.order):
            P = [[int(Y.act(g, c) == r) for c in range(n)] for r in range(n)]
            for x in range(X.size):
                act[(g, x)] = P
        return cls(X, (n,) * X.size, act)

    def direct_sum(self, other: "SwanCoefficientSystem") -> "SwanCoefficientSystem":
        if self.gset.action != other.gset.action:
            raise GCatError("systems over different G-sets")
        act = {k: _iblock(self.action[k], other.action[k]) for k in self.action}
        return SwanCoefficientSystem(self.gset, tuple(a + b for a, b in zip(self.ranks, other.ranks)), act)

    def pull(self, f: GMap) -> "SwanCoefficientSystem":
        """``f^* M``: the value at ``x`` is ``M(f(x))``."""
        X = f.source
        act = {(g, x): self.action[(g, f(x))] for g in range(X.group.order) for x in range(X.size)}
        return SwanCoefficientSystem(X, tuple(self.ranks[f(x)] for x in range(X.size)), act)

    def push(self, f: GMap) -> "SwanCoefficientSystem":
        """``f_* M``: the value at ``y`` is the sum of ``M(x)`` over the fiber, in point order."""
        Y = f.target
        G = Y.group
        fibers = [fiber(f, y) for y in range(Y.size)]
        offsets = []
        for fib in fibers:
            off, acc = {}, 0
            for x in fib:
                off[x] = acc
                acc += self.ranks[x]
            offsets.append((off, acc))
        act = {}
        for g in range(G.order):
            for y in range(Y.size):
                off_s, rs = offsets[y]
                gy = Y.act(g, y)
                off_t, rt = offsets[gy]
                M = [[0] * rs for _ in range(rt)]
                for x in fibers[y]:
                    gx = f.source.act(g, x)
                    blk = self.action[(g, x)]
                    for a, row in enumerate(blk):
                        for b, v in enumerate(row):
                            M[off_t[gx] + a][off_s[x] + b] = v
                act[(g, y)] = M
        return SwanCoefficientSystem(Y, tuple(o[1] for o in offsets), act)

    def to_json(self):
        return {
            "ranks": {str(x): r for x, r in enumerate(self.ranks)},
            "action": [{"g": g, "point": x, "matrix": M} for (g, x), M in sorted(self.action.items())],
        }


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _imul(A, B):
    cols = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A] if cols else [[] for _ in A]


def _iblock(A, B):
    ca = len(A[0]) if A else 0
    cb = len(B[0]) if B else 0
    return [list(r) + [0] * cb for r in A] + [[0] * ca + list(r) for r in B]


def swan_from_json(data, X: GSet) -> SwanCoefficientSystem:
    try:
        ranks_in = data["ranks"]
        if isinstance(ranks_in, dict):
            ranks = tuple(int(ranks_in[str(x)]) for x in range(X.size))
        else:
            ranks = tuple(int(r) for r in ranks_in)
        act = {}
        raw = data["action"]
        if isinstance(raw, dict):
            for key, M in raw.items():
                g, x = (int(s) for s in key.strip("()[] ").split(","))
                act[(g, x)] = [[int(v) for v in row] for row in M]
        else:
            for item in raw:
                act[(int(item["g"]), int(item["point"]))] = [[int(v) for v in row] for row in item["matrix"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GCatError(f"malformed Swan coefficient system: {exc}") from exc
    return SwanCoefficientSystem(X, ranks, act)


def swan_pair(M: SwanCoefficientSystem, phi: EquivariantMorphism) -> EquivariantMorphism:
    """Component ``(i, i')`` of the result is ``sum_g rho(g)_{i,i'} f_g . g``; bases are ordered ``(i, a)``."""
    if M.gset.action != phi.source.gset.action:
        raise GCatError("coefficient system and morphism live over different G-sets")
    R = phi.ring
    x, xt = phi.source.point, phi.target.point
    src = EquivariantObject(phi.source.gset, x, phi.source.rank * M.ranks[x])
    tgt = EquivariantObject(phi.target.gset, xt, phi.target.rank * M.ranks[xt])
    terms = []
    for g, F in phi.terms:
        P = Matrix.from_entries(R, M.matrix(g, x), M.ranks[x])
        terms.append((g, kronecker(P, F)))
    return EquivariantMorphism(phi.coeffs, src, tgt, tuple(terms))


def _flatten(B: BlockMorphism) -> list:
    """Per group element, the assembled block matrix of a block morphism."""
    coeffs = B.coeffs
    R = coeffs.ring
    out = {}
    rs = [o.rank for o in B.sources]
    ts = [o.rank for o in B.targets]
    support = sorted({g for row in B.components for m in row for g in m.support()})
    for g in support:
        blocks = [[m.coeff(g) for m in row] for row in B.components]
        out[g] = block_matrix(R, blocks, ts, rs)
    return sorted(out.items())


def check_pairing_conditions(M: SwanCoefficientSystem, N: SwanCoefficientSystem, f: GMap, phi_y: EquivariantMorphism, phi_x: EquivariantMorphism) -> dict:
    """The three projection formulas for ``f: X -> Y`` as matrix identities.

    ``M`` lives over ``Y`` and ``N`` over ``X``; ``phi_y`` is a morphism over ``Y``
    and ``phi_x`` one over ``X``.
    """
    # restriction is multiplicative: res(M . phi) = f^*M . res(phi)
    lhs = restrict(f, swan_pair(M, phi_y))
    res = restrict(f, phi_y)
    Mx = M.pull(f)
    rhs = BlockMorphism(
        res.coeffs,
        tuple(EquivariantObject(o.gset, o.point, o.rank * Mx.ranks[o.point]) for o in res.sources),
        tuple(EquivariantObject(o.gset, o.point, o.rank * Mx.ranks[o.point]) for o in res.targets),
        tuple(tuple(swan_pair(Mx, m) for m in row) for row in res.components),
    )
    restriction = lhs == rhs
    # M . f_*(phi_x) = f_*(f^*M . phi_x)
    a = swan_pair(M, induce(f, phi_x))
    b = induce(f, swan_pair(Mx, phi_x))
    push_right = a.terms == b.terms and (a.source, a.target) == (b.source, b.target)
    # f_*N . phi_y = f_*(N . res(phi_y)), comparing assembled matrices over the fibers
    c = swan_pair(N.push(f), phi_y)
    paired = BlockMorphism(
        res.coeffs,
        tuple(EquivariantObject(o.gset, o.point, o.rank * N.ranks[o.point]) for o in res.sources),
        tuple(EquivariantObject(o.gset, o.point, o.rank * N.ranks[o.point]) for o in res.targets),
        tuple(tuple(swan_pair(N, m) for m in row) for row in res.components),
    )
    # both sides order the basis at a point of Y by (fiber point, i, a)
    push_left = list(c.terms) == _flatten(paired)
    return {"restriction": restriction, "induction_right": push_right, "induction_left": push_left}


# ---------------------------------------------------------------------------
# transport groupoid and the equivalence T(H)


@dataclass(frozen=True)
class TransportGroupoid:
    gset: GSet

    @property
    def objects(self) -> list[int]:
        return list(range(self.gset.size))

    def hom(self, x0: int, x1: int) -> list[int]:
        return [g for g in range(self.gset.group.order) if self.gset.act(g, x0) == x1]

    def compose(self, h: int, g: int) -> int:
        return self.gset.group.mul(h, g)

    def check(self) -> bool:
        X = self.gset
        for x0 in range(X.size):
            for x1 in range(X.size):
                for g in self.hom(x0, x1):
                    for x2 in range(X.size):
                        for h in self.hom(x1, x2):
                            if self.compose(h, g) not in self.hom(x0, x2):
                                return False
        return True

    def to_json(self):
        n = self.gset.size
        return {
            "objects": self.objects,
            "hom": [{"from": a, "to": b, "elements": self.hom(a, b)} for a in range(n) for b in range(n) if self.hom(a, b)],
        }


def transport_groupoid(X: GSet) -> TransportGroupoid:
    return TransportGroupoid(X)


def t_functor(coeffs: Coefficients, H: int, element: TwistedGroupRingElement) -> EquivariantMorphism:
    """Image of ``sum_h r_h h`` as an endomorphism of ``(R, eH)`` in the category over ``G/H``."""
    G = coeffs.group
    if any(not (H >> g & 1) for g, _ in element.terms):
        raise GCatError("element is not supported on the subgroup")
    X = coset_gset(G, H)
    base = _base_point(G, H)
    obj = EquivariantObject(X, base, 1)
    R = coeffs.ring
    return EquivariantMorphism(coeffs, obj, obj, tuple((g, Matrix(R, ((r,),), 1)) for g, r in element.terms))


def _base_point(G: FiniteGroup, H: int) -> int:
    for i, c in enumerate(G.cosets(H)):
        if c >> G.identity & 1:
            return i
    raise AssertionError("identity lies in no coset")


def random_element(coeffs: Coefficients, H: int, rng: random.Random, bound: int = 3, density: float = 0.5) -> TwistedGroupRingElement:
    terms = {}
    for h in mask_elements(H):
        if rng.random() < density:
            terms[h] = coeffs.ring.random(rng, bound)
    return TwistedGroupRingElement(coeffs.ring, coeffs.group, coeffs.rho, terms)


@dataclass
class THReport:
    pairs: int
    multiplicative: bool
    unit: bool
    zero: bool
    full: bool
    essentially_surjective: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.multiplicative and self.unit and self.zero and self.full and self.essentially_surjective

    def to_json(self):
        return {
            "pairs": self.pairs,
            "multiplicative": self.multiplicative,
            "unit": self.unit,
            "zero": self.zero,
            "full": self.full,
            "essentially_surjective": self.essentially_surjective,
            "ok": self.ok,
            "failures": self.failures,
        }


def th_equivalence(coeffs: Coefficients, H: int, samples: Iterable[tuple[TwistedGroupRingElement, TwistedGroupRingElement]]) -> THReport:
    """Check that ``T(H)`` is a fully faithful multiplicative embedding hitting every object up to isomorphism."""
    G = coeffs.group
    R = coeffs.ring
    failures = []
    n = 0
    for a, b in samples:
        n += 1
        if t_functor(coeffs, H, a * b) != compose(t_functor(coeffs, H, a), t_functor(coeffs, H, b)):
            failures.append({"a": _tgr_json(a), "b": _tgr_json(b)})
    one = TwistedGroupRingElement.unit(R, G, coeffs.rho)
    T1 = t_functor(coeffs, H, one)
    unit = T1 == identity(coeffs, T1.source)
    zero = t_functor(coeffs, H, TwistedGroupRingElement(R, G, coeffs.rho, {})).terms == ()
    X = coset_gset(G, H)
    base = _base_point(G, H)
    groupoid = TransportGroupoid(X)
    full = sorted(groupoid.hom(base, base)) == mask_elements(H)
    ess = True
    obj = EquivariantObject(X, base, 1)
    one_m = Matrix.identity(R, 1)
    for y in range(X.size):
        g = groupoid.hom(base, y)[0]
        tgt = EquivariantObject(X, y, 1)
        fwd = EquivariantMorphism(coeffs, obj, tgt, ((g, one_m),))
        back = EquivariantMorphism(coeffs, tgt, obj, ((G.inv(g), one_m),))
        if compose(back, fwd) != identity(coeffs, obj) or compose(fwd, back) != identity(coeffs, tgt):
            ess = False
    return THReport(n, not failures, unit, zero, full, ess, failures)


def _tgr_json(x: TwistedGroupRingElement):
    return [{"g": g, "r": x.ring.to_json(r)} for g, r in x.terms]


# ---------------------------------------------------------------------------
# JSON input


def coefficients_from_json(data) -> Coefficients:
    try:
        G = group_from_json(data["group"])
        R = parse_ring(data.get("ring", "Z"))
    except (KeyError, TypeError) as exc:
        raise GCatError(f"need group and ring: {exc}") from exc
    if "rho" in data:
        rho = tuple(str(v) == "conj" or v is True for v in data["rho"])
    elif "rho_generators" in data:
        gens = [int(e["g"]) for e in data["rho_generators"]]
        flags = [e["tag"] == "conj" for e in data["rho_generators"]]
        rho = action_from_generators(G, gens, flags)
    else:
        rho = (False,) * G.order
    return Coefficients(R, G, rho)


def gset_from_json(G: FiniteGroup, data) -> GSet:
    if data is None or data == "point":
        return coset_gset(G, G.full_mask)
    if "subgroup" in data:
        m = 0
        for g in data["subgroup"]:
            m |= 1 << int(g)
        if G.closure([], m) != m:
            raise GCatError("listed elements do not form a subgroup")
        return coset_gset(G, m)
    if "action" in data:
        X = GSet(G, tuple(tuple(int(v) for v in row) for row in data["action"]))
        X.validate()
        return X
    raise GCatError("G-set needs 'subgroup' or 'action'")


def morphism_from_json(coeffs: Coefficients, X: GSet, data) -> EquivariantMorphism:
    try:
        src = EquivariantObject(X, int(data["source"]["point"]), int(data["source"]["rank"]))
        tgt = EquivariantObject(X, int(data["target"]["point"]), int(data["target"]["rank"]))
        terms = tuple((int(t["g"]), Matrix.from_entries(coeffs.ring, t["matrix"], src.rank)) for t in data["terms"])
    except (KeyError, TypeError) as exc:
        raise GCatError(f"malformed morphism: {exc}") from exc
    return EquivariantMorphism(coeffs, src, tgt, terms)
