"""Finite G-sets, Mackey and Green functors on orbits, Burnside rings and Dress induction.

A Mackey functor is stored on the orbit category.  Levels are the conjugacy
classes of subgroups (representative ``H_i``); every G-map
``G/H_i -> G/H_j`` has the form ``g H_i -> g a H_j`` with
``a^-1 H_i a <= H_j`` and is recorded by the least element of the coset
``a H_j``.  For each such map the data holds an integer push matrix
``M(H_i) -> M(H_j)`` and a pull matrix ``M(H_j) -> M(H_i)``.  Values on
arbitrary finite G-sets are direct sums over orbits, so additivity holds by
construction.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .fingroup import (
    FiniteGroup,
    classify,
    group_from_json,
    mask_elements,
    mask_order,
)
from .intlinalg import (
    Infeasible,
    column_hnf,
    integer_solve,
    is_p_local,
    matmul,
    matvec,
    p_local_solve,
    rational_inverse,
    rational_nullspace,
)


class MackeyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# G-sets


@dataclass(frozen=True)
class GSet:
    group: FiniteGroup = field(compare=False, hash=False)
    action: tuple  # action[g][x]
    labels: tuple = ()

    @property
    def size(self) -> int:
        return len(self.action[0]) if self.action else 0

    def act(self, g: int, x: int) -> int:
        return self.action[g][x]

    def validate(self):
        G = self.group
        n = self.size
        for x in range(n):
            if self.action[G.identity][x] != x:
                raise MackeyError("identity does not act trivially")
        for g in range(G.order):
            for h in range(G.order):
                gh = G.mul(g, h)
                for x in range(n):
                    if self.action[gh][x] != self.action[g][self.action[h][x]]:
                        raise MackeyError("action is not compatible with the group law")

    def orbits(self) -> list[list[int]]:
        seen = set()
        out = []
        for x in range(self.size):
            if x in seen:
                continue
            orb = sorted({self.action[g][x] for g in range(self.group.order)})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, x: int) -> int:
        mask = 0
        for g in range(self.group.order):
            if self.action[g][x] == x:
                mask |= 1 << g
        return mask


def coset_gset(G: FiniteGroup, H: int) -> GSet:
    """``G/H`` with points the left cosets, ordered by least element."""
    cosets = G.cosets(H)
    where = {}
    for i, c in enumerate(cosets):
        for g in mask_elements(c):
            where[g] = i
    reps = [mask_elements(c)[0] for c in cosets]
    action = tuple(tuple(where[G.mul(g, r)] for r in reps) for g in range(G.order))
    return GSet(G, action, tuple(f"{G.names[r]}H" for r in reps))


def disjoint_union(X: GSet, Y: GSet) -> GSet:
    n = X.size
    action = tuple(tuple(list(X.action[g]) + [n + y for y in Y.action[g]]) for g in range(X.group.order))
    return GSet(X.group, action, X.labels + Y.labels)


@dataclass(frozen=True)
class GMap:
    source: GSet
    target: GSet
    images: tuple

    def __post_init__(self):
        G = self.source.group
        if len(self.images) != self.source.size:
            raise MackeyError("map must send every point somewhere")
        for g in range(G.order):
            for x in range(self.source.size):
                if self.images[self.source.action[g][x]] != self.target.action[g][self.images[x]]:
                    raise MackeyError("map is not G-equivariant")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def then(self, other: "GMap") -> "GMap":
        return GMap(self.source, other.target, tuple(other.images[y] for y in self.images))


def pullback(f: GMap, g: GMap) -> tuple[GSet, GMap, GMap]:
    """Fibre product of ``f: X -> Z`` and ``g: Y -> Z`` with its two projections."""
    if f.target.action != g.target.action:
        raise MackeyError("maps need a common codomain")
    X, Y = f.source, g.source
    pts = [(x, y) for x in range(X.size) for y in range(Y.size) if f(x) == g(y)]
    index = {p: i for i, p in enumerate(pts)}
    G = X.group
    action = tuple(tuple(index[(X.action[h][x], Y.action[h][y])] for x, y in pts) for h in range(G.order))
    P = GSet(G, action, tuple(f"({x},{y})" for x, y in pts))
    return P, GMap(P, X, tuple(x for x, _ in pts)), GMap(P, Y, tuple(y for _, y in pts))


# ---------------------------------------------------------------------------
# orbit bookkeeping


class OrbitCategory:
    """Conjugacy classes of subgroups and the G-maps between the standard orbits."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.reps = G.class_representatives()
        self.maps: dict[tuple[int, int], list[int]] = {}
        for i, H in enumerate(self.reps):
            for j, L in enumerate(self.reps):
                keys = set()
                for a in range(G.order):
                    if G.conjugate_mask(G.inv(a), H) & ~L == 0:
                        keys.add(self.canonical(a, j))
                self.maps[(i, j)] = sorted(keys)

    @property
    def top(self) -> int:
        return len(self.reps) - 1

    def canonical(self, a: int, j: int) -> int:
        """Least element of the coset ``a H_j``."""
        G = self.G
        return min(G.mul(a, h) for h in mask_elements(self.reps[j]))

    def compose(self, i: int, j: int, a: int, k: int, b: int) -> int:
        """Element of ``(G/H_j -> G/H_k by b) o (G/H_i -> G/H_j by a)``."""
        return self.canonical(self.G.mul(a, b), k)

    def identify(self, S: int) -> tuple[int, int]:
        """``(l, d)`` with ``S = d H_l d^-1``."""
        G = self.G
        l = G.class_index(S)
        H = self.reps[l]
        for d in range(G.order):
            if G.conjugate_mask(d, H) == S:
                return l, d
        raise AssertionError("subgroup not conjugate to its class representative")

    def cartesian_square(self, i: int, a: int, k: int, b: int, j: int) -> list[tuple[int, int, int]]:
        """Decompose the pullback of ``G/H_i -a-> G/H_j <-b- G/H_k`` into standard orbits.

        Returns triples ``(l, x, y)``: an orbit ``G/H_l`` mapping to ``G/H_i`` by ``x``
        and to ``G/H_k`` by ``y``.
        """
        G = self.G
        Hi, Hk = self.reps[i], self.reps[k]
        X, Y, Z = coset_gset(G, Hi), coset_gset(G, Hk), coset_gset(G, self.reps[j])
        zi = coset_index(G, self.reps[j])
        f = GMap(X, Z, tuple(zi[G.mul(r, a)] for r in _coset_reps(G, Hi)))
        g = GMap(Y, Z, tuple(zi[G.mul(r, b)] for r in _coset_reps(G, Hk)))
        P, px, py = pullback(f, g)
        xreps, yreps = _coset_reps(G, Hi), _coset_reps(G, Hk)
        out = []
        for orb in P.orbits():
            pt = orb[0]
            S = P.stabilizer(pt)
            l, d = self.identify(S)
            dinv = G.inv(d)
            x = G.mul(dinv, xreps[px(pt)])
            y = G.mul(dinv, yreps[py(pt)])
            out.append((l, self.canonical(x, i), self.canonical(y, k)))
        return out


def _coset_reps(G: FiniteGroup, H: int) -> list[int]:
    return [mask_elements(c)[0] for c in G.cosets(H)]


def coset_index(G: FiniteGroup, H: int) -> dict[int, int]:
    where = {}
    for i, c in enumerate(G.cosets(H)):
        for g in mask_elements(c):
            where[g] = i
    return where


# ---------------------------------------------------------------------------
# Green functor data


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass
class GreenFunctorData:
    group: FiniteGroup
    name: str
    levels: list  # subgroup masks (class representatives)
    bases: list  # list of basis labels per level
    push: dict  # (i, j, a) -> matrix rows (target x source)
    pull: dict  # (i, j, a) -> matrix rows (source-level x target-level)
    mult: list  # per level: mult[i][a][b] = coordinate vector of e_a e_b
    unit: list  # per level: coordinate vector of 1
    ghost: list | None = None  # optional per-level marks data for display

    def rank(self, i: int) -> int:
        return len(self.bases[i])

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def maps_between(self, i: int, j: int) -> list[int]:
        return sorted(a for (s, t, a) in self.push if s == i and t == j)

    def projection(self, i: int) -> tuple[int, int, int]:
        """The map ``G/H_i -> G/G``."""
        return (i, self.top, self.group.identity)

    def multiply(self, i: int, x: Sequence, y: Sequence) -> list:
        n = self.rank(i)
        out = [0] * n
        for a in range(n):
            if not x[a]:
                continue
            for b in range(n):
                if not y[b]:
                    continue
                c = x[a] * y[b]
                prod = self.mult[i][a][b]
                for k in range(n):
                    out[k] += c * prod[k]
        return out

    def to_json(self):
        G = self.group
        return {
            "name": self.name,
            "group": G.label or {"order": G.order, "table": [list(r) for r in G.table]},
            "levels": [
                {"subgroup": mask_elements(H), "basis": list(self.bases[i]), "unit": list(self.unit[i]),
                 "mult": [[list(v) for v in row] for row in self.mult[i]]}
                for i, H in enumerate(self.levels)
            ],
            "maps": [
                {"source": i, "target": j, "element": a, "push": self.push[(i, j, a)], "pull": self.pull[(i, j, a)]}
                for (i, j, a) in sorted(self.push)
            ],
        }


def green_from_json(data) -> GreenFunctorData:
    try:
        G = group_from_json(data["group"])
        levels = []
        for lv in data["levels"]:
            m = 0
            for g in lv["subgroup"]:
                m |= 1 << int(g)
            levels.append(m)
        reps = G.class_representatives()
        if sorted(levels) != sorted(reps) or len(levels) != len(reps):
            raise MackeyError("levels must be the conjugacy class representatives of subgroups, in class order")
        if levels != reps:
            raise MackeyError("levels must be listed in class order (by order, then least element mask)")
        bases = [list(lv["basis"]) for lv in data["levels"]]
        unit = [list(lv["unit"]) for lv in data["levels"]]
        mult = [[[list(v) for v in row] for row in lv["mult"]] for lv in data["levels"]]
        push, pull = {}, {}
        for mp in data["maps"]:
            key = (int(mp["source"]), int(mp["target"]), int(mp["element"]))
            push[key] = [list(r) for r in mp["push"]]
            pull[key] = [list(r) for r in mp["pull"]]
    except (KeyError, TypeError) as exc:
        raise MackeyError(f"malformed Green functor data: {exc}") from exc
    data_obj = GreenFunctorData(G, data.get("name", "custom"), levels, bases, push, pull, mult, unit)
    _validate_shapes(data_obj)
    return data_obj


def _validate_shapes(M: GreenFunctorData):
    oc = OrbitCategory(M.group)
    for (i, j), elems in oc.maps.items():
        for a in elems:
            key = (i, j, a)
            if key not in M.push or key not in M.pull:
                raise MackeyError(f"missing structure maps for orbit map {key}")
            P, Q = M.push[key], M.pull[key]
            if len(P) != M.rank(j) or any(len(r) != M.rank(i) for r in P):
                raise MackeyError(f"push matrix for {key} has the wrong shape")
            if len(Q) != M.rank(i) or any(len(r) != M.rank(j) for r in Q):
                raise MackeyError(f"pull matrix for {key} has the wrong shape")
    for i in range(len(M.levels)):
        n = M.rank(i)
        if len(M.unit[i]) != n or len(M.mult[i]) != n:
            raise MackeyError(f"level {i} multiplication data has the wrong shape")


# ---------------------------------------------------------------------------
# Burnside functor


@dataclass
class TableOfMarks:
    classes: list  # representative masks ordered by size
    marks: list  # marks[H][K] = |(G/H)^K|

    def to_json(self):
        return {"classes": [mask_elements(H) for H in self.classes], "orders": [mask_order(H) for H in self.classes], "marks": self.marks}


def _subgroup_classes_within(G: FiniteGroup, H: int) -> tuple[list[int], dict[int, int]]:
    """H-conjugacy classes of subgroups of H: (representatives sorted by order, lookup mask -> index)."""
    subs = [K for K in G.subgroup_masks() if K & ~H == 0]
    hs = mask_elements(H)
    reps, lookup = [], {}
    for K in subs:
        if K in lookup:
            continue
        idx = len(reps)
        reps.append(K)
        for h in hs:
            lookup[G.conjugate_mask(h, K)] = idx
    return reps, lookup


def _marks_within(G: FiniteGroup, H: int, reps: list[int]) -> list[list[int]]:
    """``marks[a][b] = |(H/K_a)^{K_b}|`` for H-class representatives ``K``."""
    hs = mask_elements(H)
    out = []
    for K in reps:
        row = []
        k = mask_order(K)
        for J in reps:
            cnt = sum(1 for h in hs if G.conjugate_mask(G.inv(h), J) & ~K == 0)
            row.append(cnt // k)
        out.append(row)
    return out


def table_of_marks(G: FiniteGroup) -> TableOfMarks:
    reps = G.class_representatives()
    return TableOfMarks(reps, _marks_within(G, G.full_mask, reps))


def _solve_marks(marks: list[list[int]], target: list[int]) -> list[int]:
    """Coordinates ``c`` with ``sum_K c_K marks[K] = target`` (triangular back substitution)."""
    n = len(marks)
    c = [0] * n
    for b in reversed(range(n)):
        acc = target[b] - sum(c[a] * marks[a][b] for a in range(b + 1, n))
        d = marks[b][b]
        if acc % d:
            raise ArithmeticError("mark vector is not in the Burnside lattice")
        c[b] = acc // d
    return c


def burnside_product_by_cosets(G: FiniteGroup, H: int, A: int, B: int) -> dict[int, int]:
    """``[H/A][H/B] = sum over A h B of [H/(A n hBh^-1)]`` as ``{mask: multiplicity}``."""
    out: dict[int, int] = {}
    for dc in G.double_cosets(A, B) if H == G.full_mask else _double_cosets_in(G, H, A, B):
        h = mask_elements(dc)[0]
        S = A & G.conjugate_mask(h, B)
        out[S] = out.get(S, 0) + 1
    return out


def _double_cosets_in(G, H, A, B):
    seen = 0
    out = []
    as_, bs = mask_elements(A), mask_elements(B)
    for g in mask_elements(H):
        if seen >> g & 1:
            continue
        c = 0
        for a in as_:
            ag = G.mul(a, g)
            for b in bs:
                c |= 1 << G.mul(ag, b)
        seen |= c
        out.append(c)
    return out


@dataclass
class _BurnsideLevel:
    H: int
    reps: list
    lookup: dict
    marks: list


def burnside(G: FiniteGroup) -> GreenFunctorData:
    """Burnside Green functor: level ``H`` is ``A(H)`` with basis ``[H/K]``."""
    oc = OrbitCategory(G)
    lv = []
    for H in oc.reps:
        reps, lookup = _subgroup_classes_within(G, H)
        lv.append(_BurnsideLevel(H, reps, lookup, _marks_within(G, H, reps)))
    push, pull = {}, {}
    for (i, j), elems in oc.maps.items():
        for a in elems:
            push[(i, j, a)] = _burnside_push(G, lv[i], lv[j], a)
            pull[(i, j, a)] = _burnside_pull(G, lv[i], lv[j], a)
    mult, unit, bases = [], [], []
    for L in lv:
        n = len(L.reps)
        table = []
        for x in range(n):
            row = []
            for y in range(n):
                target = [L.marks[x][b] * L.marks[y][b] for b in range(n)]
                row.append(_solve_marks(L.marks, target))
            table.append(row)
        mult.append(table)
        unit.append([int(k == n - 1) for k in range(n)])
        bases.append([_label(G, K) for K in L.reps])
    data = GreenFunctorData(G, "burnside", list(oc.reps), bases, push, pull, mult, unit)
    data.ghost = [L.marks for L in lv]
    return data


def _label(G: FiniteGroup, K: int) -> str:
    return "[H/<" + ",".join(G.names[g] for g in mask_elements(K)) + ">]"


def _burnside_push(G, src: _BurnsideLevel, dst: _BurnsideLevel, a: int) -> list[list[int]]:
    ainv = G.inv(a)
    M = [[0] * len(src.reps) for _ in dst.reps]
    for col, K in enumerate(src.reps):
        M[dst.lookup[G.conjugate_mask(ainv, K)]][col] += 1
    return M


def _burnside_pull(G, src: _BurnsideLevel, dst: _BurnsideLevel, a: int) -> list[list[int]]:
    """Restrict the ``L``-set ``L/K`` along ``h -> a^-1 h a`` and decompose into ``H``-orbits."""
    H, L = src.H, dst.H
    ainv = G.inv(a)
    Hp = mask_elements(G.conjugate_mask(ainv, H))
    M = [[0] * len(dst.reps) for _ in src.reps]
    for col, K in enumerate(dst.reps):
        where = {}
        cos = []
        ls = mask_elements(L)
        ks = mask_elements(K)
        for l in ls:
            if l in where:
                continue
            idx = len(cos)
            cos.append(l)
            for k in ks:
                where[G.mul(l, k)] = idx
        seen = set()
        for ci, l in enumerate(cos):
            if ci in seen:
                continue
            orb = {where[G.mul(h, l)] for h in Hp}
            seen.update(orb)
            # stabiliser of lK in H' is H' n lKl^-1; transport back to H by conjugating with a
            stab = G.conjugate_mask(ainv, H) & G.conjugate_mask(l, K)
            S = G.conjugate_mask(a, stab)
            M[src.lookup[S]][col] += 1
    return M


# ---------------------------------------------------------------------------
# cyclic-marks quotient


def cyclic_marks_functor(G: FiniteGroup) -> GreenFunctorData:
    """Quotient of the Burnside functor by elements whose marks vanish on all cyclic subgroups.

    Level ``H`` has the Hermite basis of the image of ``A(H)`` in the marks
    at ``H``-classes of cyclic subgroups.
    """
    B = burnside(G)
    n_levels = len(B.levels)
    gm, basis, lifts, inv = [], [], [], []
    cyc_idx = []
    for i, H in enumerate(B.levels):
        reps, _ = _subgroup_classes_within(G, H)
        marks = B.ghost[i]
        cyc = [b for b, K in enumerate(reps) if G.is_cyclic(K)]
        cyc_idx.append([reps[b] for b in cyc])
        Gam = [[marks[a][b] for a in range(len(reps))] for b in cyc]  # rows: cyclic classes, cols: basis
        Bm = column_hnf(Gam, len(cyc))
        if len(Bm[0]) != len(cyc):
            raise ArithmeticError("marks at cyclic subgroups should have full rank")
        Z = []
        for c in range(len(cyc)):
            z = integer_solve(Gam, [Bm[r][c] for r in range(len(cyc))], len(reps))
            if z is None:
                raise ArithmeticError("Hermite basis vector not in the image lattice")
            Z.append(z)
        lifts.append([[Z[c][a] for c in range(len(cyc))] for a in range(len(reps))])
        gm.append(Gam)
        basis.append(Bm)
        inv.append(rational_inverse(Bm))

    def descend(i, j, P):
        # B_j^-1 . Gamma_j . P . Z_i
        M = matmul(inv[j], matmul(gm[j], matmul(P, lifts[i])))
        out = []
        for row in M:
            if any(Fraction(v).denominator != 1 for v in row):
                raise ArithmeticError("structure map does not descend to the quotient")
            out.append([int(v) for v in row])
        return out

    kernels = [rational_nullspace(gm[i], B.rank(i)) for i in range(n_levels)]
    push, pull = {}, {}
    for (i, j, a), P in B.push.items():
        _check_kernel(gm[j], P, kernels[i], "push", (i, j, a))
        push[(i, j, a)] = descend(i, j, P)
    for (i, j, a), Q in B.pull.items():
        _check_kernel(gm[i], Q, kernels[j], "pull", (i, j, a))
        pull[(i, j, a)] = descend(j, i, Q)
    mult, unit, bases = [], [], []
    for i in range(n_levels):
        Bm, Bi = basis[i], inv[i]
        r = len(Bm)
        cols = [[Bm[k][c] for k in range(r)] for c in range(r)]
        table = []
        for x in range(r):
            row = []
            for y in range(r):
                prod = [cols[x][k] * cols[y][k] for k in range(r)]
                coords = matvec(Bi, prod)
                if any(Fraction(v).denominator != 1 for v in coords):
                    raise ArithmeticError("image lattice is not closed under products")
                row.append([int(v) for v in coords])
            table.append(row)
        mult.append(table)
        u = matvec(Bi, [1] * r)
        unit.append([int(v) for v in u])
        bases.append(["marks" + str(c) for c in cols])
    data = GreenFunctorData(G, "cyclic-marks", list(B.levels), bases, push, pull, mult, unit)
    data.ghost = [{"cyclic": [mask_elements(C) for C in cyc_idx[i]], "basis_columns": basis[i]} for i in range(n_levels)]
    return data


def _check_kernel(gamma_target, P, kernel, what, key):
    for v in kernel:
        img = matvec(gamma_target, matvec(P, v))
        if any(img):
            raise ArithmeticError(f"{what} along {key} does not preserve the kernel of the marks map")


def ghost_coordinates(M: GreenFunctorData, i: int, x: Sequence) -> list:
    """Marks of a cyclic-marks element at the cyclic classes of level ``i``."""
    Bm = M.ghost[i]["basis_columns"]
    return matvec(Bm, x)


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    functor: str
    checked: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        return {"functor": self.functor, "ok": self.ok, "checked": self.checked, "violations": self.violations}


def _matmul_int(A, B):
    return matmul(A, B)


def _add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def _zeros(m, n):
    return [[0] * n for _ in range(m)]


def mackey_axiom_check(M: GreenFunctorData, full: bool = False, green: bool = True) -> AxiomReport:
    """Check the Mackey (and optionally Green) axioms on the orbit category.

    * double coset formula for every pair ``G/H -> G/G <- G/K`` (every cospan of orbits when ``full``)
    * functoriality of push and pull for composable orbit maps, identities act as identities
    * additivity on two-orbit G-sets
    * for Green data: unit and associativity, pull is a ring map, Frobenius reciprocity
    """
    G = M.group
    oc = OrbitCategory(G)
    viol = []
    checked = {"double_coset": 0, "functoriality": 0, "identity": 0, "additivity": 0, "green": 0}
    n = len(M.levels)
    ident = G.identity

    # identities
    for i in range(n):
        key = (i, i, oc.canonical(ident, i))
        checked["identity"] += 1
        if M.push[key] != _identity(M.rank(i)) or M.pull[key] != _identity(M.rank(i)):
            viol.append({"kind": "identity", "pair": [i, i], "element": key[2]})

    # functoriality
    for (i, j), elems in oc.maps.items():
        for a in elems:
            for k in range(n):
                for b in oc.maps[(j, k)]:
                    c = oc.compose(i, j, a, k, b)
                    checked["functoriality"] += 1
                    if _matmul_int(M.push[(j, k, b)], M.push[(i, j, a)]) != M.push[(i, k, c)]:
                        viol.append({"kind": "functoriality_push", "pair": [i, k], "via": j, "elements": [a, b]})
                    if _matmul_int(M.pull[(i, j, a)], M.pull[(j, k, b)]) != M.pull[(i, k, c)]:
                        viol.append({"kind": "functoriality_pull", "pair": [i, k], "via": j, "elements": [a, b]})

    # double coset formula
    cospans = []
    for i in range(n):
        for k in range(n):
            if full:
                for j in range(n):
                    for a in oc.maps[(i, j)]:
                        for b in oc.maps[(k, j)]:
                            cospans.append((i, a, k, b, j))
            else:
                cospans.append((i, oc.canonical(ident, M.top), k, oc.canonical(ident, M.top), M.top))
    for (i, a, k, b, j) in cospans:
        lhs = _matmul_int(M.pull[(k, j, b)], M.push[(i, j, a)])
        rhs = _zeros(M.rank(k), M.rank(i))
        for (l, x, y) in oc.cartesian_square(i, a, k, b, j):
            rhs = _add(rhs, _matmul_int(M.push[(l, k, y)], M.pull[(l, i, x)]))
        checked["double_coset"] += 1
        if lhs != rhs:
            viol.append({"kind": "double_coset", "pair": [i, k], "over": j, "elements": [a, b]})

    # additivity on X = G/H_i + G/H_k: the inclusions give M(X) = M(H_i) + M(H_k)
    for i in range(n):
        for k in range(n):
            ri, rk = M.rank(i), M.rank(k)
            incl_i = [[int(r == c) for c in range(ri + rk)] for r in range(ri)]
            incl_k = [[int(r + ri == c) for c in range(ri + rk)] for r in range(rk)]
            stacked = incl_i + incl_k
            checked["additivity"] += 1
            if stacked != _identity(ri + rk):
                viol.append({"kind": "additivity", "pair": [i, k]})

    if green:
        _green_checks(M, oc, viol, checked)
    return AxiomReport(M.name, checked, viol)


def _basis(n, a):
    return [int(k == a) for k in range(n)]


def _green_checks(M: GreenFunctorData, oc: OrbitCategory, viol: list, checked: dict):
    n = len(M.levels)
    for i in range(n):
        r = M.rank(i)
        u = M.unit[i]
        for a in range(r):
            ea = _basis(r, a)
            checked["green"] += 1
            if M.multiply(i, u, ea) != ea or M.multiply(i, ea, u) != ea:
                viol.append({"kind": "unit", "level": i, "basis": a})
            for b in range(r):
                eb = _basis(r, b)
                if M.multiply(i, ea, eb) != M.multiply(i, eb, ea):
                    viol.append({"kind": "commutativity", "level": i, "basis": [a, b]})
                for c in range(r):
                    ec = _basis(r, c)
                    if M.multiply(i, M.multiply(i, ea, eb), ec) != M.multiply(i, ea, M.multiply(i, eb, ec)):
                        viol.append({"kind": "associativity", "level": i, "basis": [a, b, c]})
    for (i, j), elems in oc.maps.items():
        ri, rj = M.rank(i), M.rank(j)
        for a in elems:
            P, Q = M.push[(i, j, a)], M.pull[(i, j, a)]
            checked["green"] += 1
            if matvec(Q, M.unit[j]) != M.unit[i]:
                viol.append({"kind": "pull_unit", "pair": [i, j], "element": a})
            for x in range(rj):
                ex = _basis(rj, x)
                for y in range(rj):
                    ey = _basis(rj, y)
                    if matvec(Q, M.multiply(j, ex, ey)) != M.multiply(i, matvec(Q, ex), matvec(Q, ey)):
                        viol.append({"kind": "pull_multiplicative", "pair": [i, j], "element": a})
                for s in range(ri):
                    es = _basis(ri, s)
                    # Frobenius reciprocity: push(x . pull y) = push(x) . y on both sides
                    lhs = matvec(P, M.multiply(i, es, matvec(Q, ex)))
                    rhs = M.multiply(j, matvec(P, es), ex)
                    if lhs != rhs:
                        viol.append({"kind": "frobenius", "pair": [i, j], "element": a})


def corrupt(M: GreenFunctorData, i: int, j: int | None = None, element: int | None = None) -> GreenFunctorData:
    """A copy whose pull matrix along one orbit map is perturbed (negative control)."""
    j = M.top if j is None else j
    bad = copy.copy(M)
    bad.push = copy.deepcopy(M.push)
    bad.pull = copy.deepcopy(M.pull)
    keys = [k for k in bad.pull if k[0] == i and k[1] == j and (element is None or k[2] == element)]
    if not keys:
        raise MackeyError(f"no orbit map from level {i} to level {j}")
    key = keys[0]
    bad.pull[key][0][0] += 1
    bad.name = M.name + "-corrupted"
    return bad


# ---------------------------------------------------------------------------
# Dress induction


def hyperelementary_family(G: FiniteGroup, p: int) -> list[int]:
    return [i for i, H in enumerate(G.class_representatives()) if classify(G, H, p).p_hyperelementary]


def proper_family(G: FiniteGroup) -> list[int]:
    return list(range(len(G.class_representatives()) - 1))


def validate_family(G: FiniteGroup, family: Sequence[int]):
    oc = OrbitCategory(G)
    fam = set(family)
    for i in fam:
        if not 0 <= i < len(oc.reps):
            raise MackeyError(f"unknown subgroup class {i}")
        for j in range(len(oc.reps)):
            if oc.maps[(j, i)] and j not in fam:
                raise MackeyError(f"family is not closed under subgroups: class {j} lies below class {i}")


@dataclass
class DressWitness:
    prime: int
    terms: list  # (level, a_H, u_H)
    target: list
    units_only: bool
    transcript: list = field(default_factory=list)

    @property
    def denominators(self) -> list[int]:
        dens = set()
        for _, a, u in self.terms:
            for v in [a] + list(u):
                d = Fraction(v).denominator
                if d != 1:
                    dens.add(d)
        return sorted(dens)

    def to_json(self, M: GreenFunctorData):
        return {
            "status": "witness",
            "prime": self.prime,
            "units_only": self.units_only,
            "terms": [
                {"class": i, "subgroup": mask_elements(M.levels[i]), "a": _fmt(a), "u": [_fmt(v) for v in u]}
                for i, a, u in self.terms
            ],
            "target": [_fmt(v) for v in self.target],
            "denominators": self.denominators,
            "verified": True,
            "transcript": self.transcript,
        }


def _fmt(v):
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass
class DressInfeasible:
    prime: int
    certificate: Infeasible
    columns: list

    def to_json(self, M: GreenFunctorData):
        c = self.certificate
        return {
            "status": "infeasible",
            "prime": self.prime,
            "functional": [_fmt(v) for v in c.functional],
            "values_on_induced": [_fmt(v) for v in c.values_on_columns],
            "value_on_target": _fmt(c.value_on_target),
            "verified": c.verify(),
        }


def induce_from(M: GreenFunctorData, i: int, u: Sequence, z: Sequence) -> list:
    """``ind_H (u . res_H z)`` at the top level."""
    key = M.projection(i)
    res = matvec(M.pull[key], z)
    return matvec(M.push[key], M.multiply(i, u, res))


def dress_solve(M: GreenFunctorData, family: Sequence[int], p: int, z: Sequence | None = None):
    """Find ``u_H`` over ``Z_(p)`` with ``z = sum_H ind_H(u_H . res_H z)``, or prove none exists."""
    G = M.group
    validate_family(G, family)
    top = M.top
    z = list(M.unit[top]) if z is None else [int(v) for v in z]
    if len(z) != M.rank(top):
        raise MackeyError("target element has the wrong length")
    fam = sorted(set(family))

    # units first: one column per family member
    cols = [induce_from(M, i, M.unit[i], z) for i in fam]
    sol = p_local_solve(_columns_to_matrix(cols, len(z)), z, p, len(cols))
    if not isinstance(sol, Infeasible):
        terms = [(i, a, list(M.unit[i])) for i, a in zip(fam, sol) if a != 0]
        return _finish(M, p, terms, z, True)

    owners = []
    cols = []
    for i in fam:
        for b in range(M.rank(i)):
            cols.append(induce_from(M, i, _basis(M.rank(i), b), z))
            owners.append((i, b))
    A = _columns_to_matrix(cols, len(z))
    sol = p_local_solve(A, z, p, len(cols))
    if isinstance(sol, Infeasible):
        return DressInfeasible(p, sol, cols)
    us: dict[int, list] = {}
    for (i, b), x in zip(owners, sol):
        us.setdefault(i, [Fraction(0)] * M.rank(i))[b] += x
    terms = [(i, Fraction(1), u) for i, u in sorted(us.items()) if any(u)]
    return _finish(M, p, terms, z, False)


def _columns_to_matrix(cols, m):
    return [[c[r] for c in cols] for r in range(m)]


def _finish(M, p, terms, z, units_only):
    total = [Fraction(0)] * len(z)
    transcript = []
    for i, a, u in terms:
        contrib = [Fraction(a) * v for v in induce_from(M, i, [Fraction(x) for x in u], z)]
        transcript.append({"class": i, "contribution": [_fmt(v) for v in contrib]})
        total = [s + c for s, c in zip(total, contrib)]
    if total != [Fraction(v) for v in z]:
        raise ArithmeticError("Dress witness failed to re-verify")
    for _, a, u in terms:
        if not all(is_p_local(v, p) for v in [a] + list(u)):
            raise ArithmeticError("Dress witness has a denominator divisible by p")
    return DressWitness(p, terms, list(z), units_only, transcript)


def verify_witness(M: GreenFunctorData, w: DressWitness) -> bool:
    total = [Fraction(0)] * len(w.target)
    for i, a, u in w.terms:
        contrib = induce_from(M, i, [Fraction(x) for x in u], w.target)
        total = [s + Fraction(a) * c for s, c in zip(total, contrib)]
    return total == [Fraction(v) for v in w.target] and all(is_p_local(v, w.prime) for _, a, u in w.terms for v in [a] + list(u))
