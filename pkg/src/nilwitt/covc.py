"""Covirtually cyclic groups ``V = K x|_alpha Z`` and their finite quotients.

Elements of ``V`` are pairs ``(k, n)`` standing for ``k t^n`` with
``t k t^-1 = alpha(k)``, so ``(k, n)(k', n') = (k alpha^n(k'), n + n')``.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Sequence

from .fingroup import (
    FiniteGroup,
    classify,
    group_from_json,
    group_pset,
    hyper_implies_elementary_check,
    is_prime_power,
    mask_elements,
    mask_order,
    named_group,
)
from .intlinalg import valuation
from .rings import Automorphism, Ring, TwistedGroupRingElement


class CovcError(ValueError):
    pass


QUOTIENT_ORDER_BOUND = 400


# ---------------------------------------------------------------------------
# automorphisms of a finite group


def is_automorphism(K: FiniteGroup, perm: Sequence[int]) -> bool:
    n = K.order
    if sorted(perm) != list(range(n)):
        return False
    return all(perm[K.mul(a, b)] == K.mul(perm[a], perm[b]) for a in range(n) for b in range(n))


def perm_compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """``p o q``."""
    return tuple(p[x] for x in q)


def perm_inverse(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_power(p: Sequence[int], n: int) -> tuple:
    if n < 0:
        return perm_power(perm_inverse(p), -n)
    out = tuple(range(len(p)))
    for _ in range(n):
        out = perm_compose(p, out)
    return out


def automorphism_order(alpha: Sequence[int]) -> int:
    ident = tuple(range(len(alpha)))
    cur, m = tuple(alpha), 1
    while cur != ident:
        cur = perm_compose(alpha, cur)
        m += 1
    return m


def _generators(K: FiniteGroup) -> list[int]:
    gens, mask = [], 1 << K.identity
    for g in sorted(range(K.order), key=lambda x: (-K.element_order(x), x)):
        if not mask >> g & 1:
            gens.append(g)
            mask = K.closure(gens)
            if mask == K.full_mask:
                break
    return gens


def automorphisms(K: FiniteGroup) -> list[tuple]:
    """All automorphisms of ``K`` as permutations, sorted."""
    gens = _generators(K)
    orders = [K.element_order(g) for g in gens]
    cands = [[x for x in range(K.order) if K.element_order(x) == o] for o in orders]
    out = []
    for images in itertools.product(*cands):
        phi = {K.identity: K.identity}
        frontier = [K.identity]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, im in zip(gens, images):
                    y = K.mul(x, g)
                    v = K.mul(phi[x], im)
                    if y in phi:
                        if phi[y] != v:
                            ok = False
                            break
                    else:
                        phi[y] = v
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if not ok or len(phi) != K.order:
            continue
        perm = tuple(phi[x] for x in range(K.order))
        if is_automorphism(K, perm):
            out.append(perm)
    return sorted(set(out))


def automorphism_class_representatives(K: FiniteGroup) -> list[tuple]:
    """One automorphism per conjugacy class in ``Aut(K)`` (the lexicographically least)."""
    auts = automorphisms(K)
    seen = set()
    reps = []
    for a in auts:
        if a in seen:
            continue
        cls = {perm_compose(perm_compose(s, a), perm_inverse(s)) for s in auts}
        seen |= cls
        reps.append(min(cls))
    return sorted(reps)


# ---------------------------------------------------------------------------
# V = K x| Z


@dataclass(frozen=True)
class CovCyclicGroup:
    K: FiniteGroup = field(compare=False)
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(int(v) for v in self.alpha))
        if len(self.alpha) != self.K.order or not is_automorphism(self.K, self.alpha):
            raise CovcError("alpha is not an automorphism of K")

    @property
    def m(self) -> int:
        return automorphism_order(self.alpha)

    def alpha_power(self, n: int) -> tuple:
        return perm_power(self.alpha, n % self.m)

    def mul(self, a: tuple, b: tuple) -> tuple:
        (k, n), (k2, n2) = a, b
        return (self.K.mul(k, self.alpha_power(n)[k2]), n + n2)

    def inv(self, a: tuple) -> tuple:
        k, n = a
        return (self.alpha_power(-n)[self.K.inv(k)], -n)

    def power(self, a: tuple, j: int) -> tuple:
        out = (self.K.identity, 0)
        base = a if j >= 0 else self.inv(a)
        for _ in range(abs(j)):
            out = self.mul(out, base)
        return out

    def to_json(self):
        return {"K": self.K.label or {"order": self.K.order, "table": [list(r) for r in self.K.table]}, "alpha": list(self.alpha)}


def covc_from_json(data) -> CovCyclicGroup:
    try:
        K = group_from_json(data["K"])
        alpha = data.get("alpha")
    except (KeyError, TypeError) as exc:
        raise CovcError(f"covirtually cyclic group needs K and alpha: {exc}") from exc
    if alpha is None:
        alpha = list(range(K.order))
    return CovCyclicGroup(K, tuple(alpha))


# ---------------------------------------------------------------------------
# finite quotients


@dataclass
class FiniteQuotient:
    V: CovCyclicGroup
    M: int
    m: int
    F: FiniteGroup
    F_hat: FiniteGroup
    beta: tuple  # F -> F_hat on indices
    incl: tuple  # K -> F
    ker_beta: int  # mask

    def nu(self, v: tuple) -> int:
        k, n = v
        return k + self.V.K.order * (n % (self.M * self.m))

    def t(self) -> int:
        return self.nu((self.V.K.identity, 1))

    @property
    def K_mask(self) -> int:
        mask = 0
        for x in self.incl:
            mask |= 1 << x
        return mask

    def beta_mask(self, H: int) -> int:
        mask = 0
        for h in mask_elements(H):
            mask |= 1 << self.beta[h]
        return mask

    def to_json(self):
        return {
            "M": self.M,
            "m": self.m,
            "order_F": self.F.order,
            "order_F_hat": self.F_hat.order,
            "beta": list(self.beta),
            "i": list(self.incl),
            "ker_beta": mask_elements(self.ker_beta),
            "t": self.t(),
        }


def _semidirect(K: FiniteGroup, alpha: tuple, n: int, label: str) -> FiniteGroup:
    """``K x| Z/n`` with element ``k + |K| j`` standing for ``k t^j``; needs ``alpha^n = id``."""
    k = K.order
    pows = [perm_power(alpha, j) for j in range(n)]
    table = []
    names = []
    for j in range(n):
        for a in range(k):
            names.append(f"{K.names[a]}t^{j}" if j else K.names[a])
            row = []
            for j2 in range(n):
                pj = pows[j]
                for b in range(k):
                    row.append(K.mul(a, pj[b]) + k * ((j + j2) % n))
            table.append(row)
    return FiniteGroup(table, names, label=label, check=False)


def finite_quotient(V: CovCyclicGroup, M: int, bound: int = QUOTIENT_ORDER_BOUND) -> FiniteQuotient:
    if M < 1:
        raise CovcError("M must be at least 1")
    K, m = V.K, V.m
    n = M * m
    if n * K.order > bound:
        raise CovcError(f"|F| = {n * K.order} exceeds the bound {bound}")
    F = _semidirect(K, V.alpha, n, f"{K.label or 'K'} x| Z/{n}")
    F_hat = _semidirect(K, V.alpha, m, f"{K.label or 'K'} x| Z/{m}")
    beta = tuple(x % K.order + K.order * ((x // K.order) % m) for x in range(F.order))
    incl = tuple(range(K.order))
    ker = 0
    for x in range(F.order):
        if beta[x] == F_hat.identity:
            ker |= 1 << x
    Q = FiniteQuotient(V, M, m, F, F_hat, beta, incl, ker)
    _validate_quotient(Q)
    return Q


def _validate_quotient(Q: FiniteQuotient):
    V, F, Fh = Q.V, Q.F, Q.F_hat
    K = V.K
    if F.order != Q.M * Q.m * K.order:
        raise CovcError("|F| != M m |K|")
    # beta is a homomorphism and beta o nu is the quotient by <t^m>
    for a in range(F.order):
        for b in range(F.order):
            if Q.beta[F.mul(a, b)] != Fh.mul(Q.beta[a], Q.beta[b]):
                raise CovcError("beta is not a homomorphism")
    span = range(-2 * Q.M * Q.m, 2 * Q.M * Q.m + 1)
    for k in range(K.order):
        for n in span:
            v = (k, n)
            if Q.beta[Q.nu(v)] != k + K.order * (n % Q.m):
                raise CovcError("the square of projections does not commute")
    # nu is a homomorphism on a window of V
    for a in itertools.product(range(K.order), range(-Q.m, Q.m + 1)):
        for b in itertools.product(range(K.order), range(-Q.m, Q.m + 1)):
            if Q.nu(V.mul(a, b)) != F.mul(Q.nu(a), Q.nu(b)):
                raise CovcError("nu is not a homomorphism")
    # beta o i injective
    if len({Q.beta[x] for x in Q.incl}) != K.order:
        raise CovcError("beta o i is not injective")


# ---------------------------------------------------------------------------
# index estimates


@dataclass
class IndexRecord:
    H: list
    q: int
    index: int
    nu_index: int
    nu_M: int
    nu_hat_index: int
    nu_j: int
    equality: bool
    inequality: bool
    special_hypothesis: list  # primes p for which the special-estimate hypotheses hold
    special_ok: bool

    def to_json(self):
        return self.__dict__.copy()


@dataclass
class IndexReport:
    M: int
    q: int
    records: list

    @property
    def ok(self) -> bool:
        return all(r.equality and r.inequality and r.special_ok for r in self.records)

    @property
    def special_cases(self) -> int:
        return sum(1 for r in self.records if r.special_hypothesis)

    def to_json(self):
        return {"M": self.M, "q": self.q, "ok": self.ok, "subgroups": len(self.records),
                "special_cases": self.special_cases, "records": [r.to_json() for r in self.records]}


def index_record(Q: FiniteQuotient, H: int, q: int, primes: Sequence[int] = (2, 3, 5, 7)) -> IndexRecord:
    """q-valuations of ``[F:H] = M [F_hat : beta(H)] / |H n ker beta|`` and the special estimate."""
    F = Q.F
    index = F.order // mask_order(H)
    hat_index = Q.F_hat.order // mask_order(Q.beta_mask(H))
    j_size = mask_order(H & Q.ker_beta)
    i_size = mask_order(H & Q.K_mask)
    v = lambda n: int(valuation(n, q))
    lhs = v(index)
    rhs = v(Q.M) + v(hat_index) - v(j_size)
    ineq = lhs >= v(Q.M) - v(j_size)
    hyp = []
    special_ok = True
    if i_size % q == 0:
        for p in primes:
            if p != q and classify(F, H, p).p_hyperelementary:
                hyp.append(p)
                if lhs < v(Q.M):
                    special_ok = False
    return IndexRecord(mask_elements(H), q, index, lhs, v(Q.M), v(hat_index), v(j_size), lhs == rhs, ineq, hyp, special_ok)


def index_estimate_check(Q: FiniteQuotient, q: int, subgroups: Sequence[int] | None = None) -> IndexReport:
    Hs = Q.F.subgroup_masks(bound=QUOTIENT_ORDER_BOUND) if subgroups is None else subgroups
    return IndexReport(Q.M, q, [index_record(Q, H, q) for H in Hs])


# ---------------------------------------------------------------------------
# finite-index subgroups


@dataclass(frozen=True)
class FiniteIndexSubgroup:
    """``W = <L, y t^d>`` with ``L = W n K`` stable under ``c_y o alpha^d``."""

    d: int
    L: int  # mask in K
    y: int  # least element of the coset L y

    def index(self, V: CovCyclicGroup) -> int:
        return self.d * (V.K.order // mask_order(self.L))

    def generator(self) -> tuple:
        return (self.y, self.d)

    def contains(self, V: CovCyclicGroup, v: tuple) -> bool:
        k, n = v
        if n % self.d:
            return False
        s = V.power(self.generator(), n // self.d)
        l = V.K.mul(k, V.K.inv(s[0]))
        return bool(self.L >> l & 1)

    def is_full_layer(self, V: CovCyclicGroup) -> bool:
        """Whether ``W`` is the preimage ``V[d]`` of ``dZ``, i.e. contains ``K``."""
        return self.L == V.K.full_mask

    def image(self, Q: FiniteQuotient) -> int:
        gens = [Q.nu((k, 0)) for k in mask_elements(self.L)] + [Q.nu(self.generator())]
        return Q.F.closure(gens)

    def to_json(self, V: CovCyclicGroup | None = None):
        out = {"d": self.d, "K_W": mask_elements(self.L), "y": self.y}
        if V is not None:
            out["index"] = self.index(V)
            out["y_name"] = V.K.names[self.y]
        return out


def _stable(V: CovCyclicGroup, L: int, y: int, d: int) -> bool:
    K = V.K
    a = V.alpha_power(d)
    img = 0
    for l in mask_elements(L):
        img |= 1 << K.conj(y, a[l])
    return img == L


def canonical_y(V: CovCyclicGroup, L: int, y: int) -> int:
    K = V.K
    return min(K.mul(l, y) for l in mask_elements(L))


def canonical_record(V: CovCyclicGroup, d: int, L: int, y: int) -> FiniteIndexSubgroup:
    """The record for ``<L, y t^d>``; any two valid choices of ``y`` give equal records."""
    if not _stable(V, L, y, d):
        raise CovcError("L is not stable under c_y o alpha^d")
    return FiniteIndexSubgroup(d, L, canonical_y(V, L, y))


def enumerate_finite_index_subgroups(V: CovCyclicGroup, d_max: int) -> list[FiniteIndexSubgroup]:
    if d_max < 1:
        raise CovcError("d_max must be at least 1")
    K = V.K
    out = []
    for d in range(1, d_max + 1):
        for L in K.subgroup_masks():
            reps = sorted({canonical_y(V, L, y) for y in range(K.order)})
            for y in reps:
                if _stable(V, L, y, d):
                    out.append(FiniteIndexSubgroup(d, L, y))
    return sorted(out, key=lambda w: (w.d, mask_order(w.L), w.L, w.y))


def vp_set(V: CovCyclicGroup, p: int, d_max: int) -> list[FiniteIndexSubgroup]:
    return [w for w in enumerate_finite_index_subgroups(V, d_max) if is_prime_power(mask_order(w.L), p)]


def coverage_modulus(V: CovCyclicGroup, d_max: int) -> int:
    """An ``M`` such that every ``W`` with ``d(W) <= d_max`` contains ``t^(Mm)``."""
    K = V.K
    exponent = lcm(*(K.element_order(k) for k in range(K.order)))
    return lcm(*range(1, d_max + 1)) * exponent


def bruteforce_subgroups(Q: FiniteQuotient, d_max: int) -> set[int]:
    """Subgroups of ``F`` whose image in ``Z/Mm`` has index at most ``d_max``."""
    F = Q.F
    k = Q.V.K.order
    n = Q.M * Q.m
    out = set()
    for H in F.subgroup_masks(bound=QUOTIENT_ORDER_BOUND):
        g = 0
        for x in mask_elements(H):
            g = gcd(g, x // k)
        d = gcd(g, n)
        if d <= d_max:
            out.add(H)
    return out


def enumeration_crosscheck(V: CovCyclicGroup, d_max: int, M: int | None = None) -> dict:
    """Compare the ``(d, L, y)`` parameterization with all subgroups of a finite quotient."""
    M = coverage_modulus(V, d_max) if M is None else M
    Q = finite_quotient(V, M)
    records = enumerate_finite_index_subgroups(V, d_max)
    t_top = Q.nu((V.K.identity, Q.M * Q.m))
    kernel_gen = (V.K.identity, Q.M * Q.m)
    images = {}
    uncovered = 0
    for w in records:
        if not w.contains(V, kernel_gen):
            uncovered += 1
            continue
        images[Q.F.closure([Q.nu((k, 0)) for k in mask_elements(w.L)] + [Q.nu(w.generator())])] = w
    brute = bruteforce_subgroups(Q, d_max)
    injective = len(images) == len(records) - uncovered
    return {
        "M": M,
        "order_F": Q.F.order,
        "records": len(records),
        "uncovered": uncovered,
        "bruteforce": len(brute),
        "injective": injective,
        "match": injective and set(images) == brute,
        "identity_in_F": t_top == Q.F.identity,
    }


# ---------------------------------------------------------------------------
# T_p triples and the automorphisms psi


@dataclass(frozen=True)
class TpTriple:
    P: int
    k: int
    y: int

    def to_json(self, F: FiniteGroup | None = None):
        out = {"P": mask_elements(self.P), "k": self.k, "y": self.y}
        if F is not None:
            out["y_name"] = F.names[self.y]
        return out


def p_subgroups(F: FiniteGroup, p: int, literal: bool = False) -> list[int]:
    subs = F.subgroup_masks(bound=QUOTIENT_ORDER_BOUND)
    ps = [H for H in subs if is_prime_power(mask_order(H), p)]
    if literal:
        return ps
    reps = F.class_representatives()
    return [H for H in ps if H in set(reps)]


def _image(F: FiniteGroup, perm: Sequence[int], y: int, P: int) -> int:
    out = 0
    for x in mask_elements(P):
        out |= 1 << F.conj(y, perm[x])
    return out


def tp_triples(F: FiniteGroup, alpha: Sequence[int], p: int, k_max: int, literal: bool = False) -> list[TpTriple]:
    """All ``(P, k, y)`` with ``c_y o alpha^k (P) = P``, ``1 <= k <= k_max``.

    ``P`` runs over representatives of conjugacy classes of p-subgroups, or over
    all p-subgroups when ``literal`` is set.
    """
    if k_max < 1:
        raise CovcError("k_max must be at least 1")
    alpha = tuple(alpha)
    if not is_automorphism(F, alpha):
        raise CovcError("alpha is not an automorphism of F")
    out = []
    for P in p_subgroups(F, p, literal):
        for k in range(1, k_max + 1):
            ak = perm_power(alpha, k)
            for y in range(F.order):
                if _image(F, ak, y, P) == P:
                    out.append(TpTriple(P, k, y))
    return out


@dataclass
class PsiData:
    triple: TpTriple
    group_map: dict  # element of P -> element of P
    ring_twist: Automorphism

    def apply(self, x: TwistedGroupRingElement) -> TwistedGroupRingElement:
        """``sum r_p p -> sum mu(y t^k)(r_p) psi(p)``."""
        terms = {self.group_map[g]: self.ring_twist(r) for g, r in x.terms}
        return TwistedGroupRingElement(x.ring, x.group, x.rho, terms)

    def to_json(self):
        return {"triple": self.triple.to_json(), "group_map": {str(k): v for k, v in sorted(self.group_map.items())},
                "ring_twist": self.ring_twist.tag}


def psi_data(F: FiniteGroup, alpha: Sequence[int], triple: TpTriple, ring: Ring, rho: Sequence[bool] | None = None,
             mu_t: bool = False) -> PsiData:
    """``c_y o alpha^k`` on ``P`` with the coefficient twist ``rho(y) o mu(t)^k``."""
    ak = perm_power(tuple(alpha), triple.k)
    if _image(F, ak, triple.y, triple.P) != triple.P:
        raise CovcError("c_y o alpha^k does not preserve P")
    gm = {x: F.conj(triple.y, ak[x]) for x in mask_elements(triple.P)}
    rho = tuple(rho) if rho is not None else (False,) * F.order
    conj = bool(rho[triple.y]) != (bool(mu_t) and triple.k % 2 == 1)
    return PsiData(triple, gm, Automorphism(ring, conj))


# ---------------------------------------------------------------------------
# corpus


def quotient_corpus(max_K: int = 8, max_Mm: int = 12) -> list[tuple[str, tuple, int]]:
    """``(K name, alpha, M)`` for corpus groups ``|K| <= max_K``, automorphisms up to conjugacy, ``Mm <= max_Mm``."""
    names = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "V4", "S3", "D4", "Q8", "C2xC4", "C2xC2xC2"]
    out = []
    for name in names:
        K = named_group(name)
        if K.order > max_K:
            continue
        for a in automorphism_class_representatives(K):
            m = automorphism_order(a)
            for M in range(1, max_Mm // m + 1):
                out.append((name, a, M))
    return out


@functools.lru_cache(maxsize=None)
def corpus_quotient(name: str, alpha: tuple, M: int) -> FiniteQuotient:
    return finite_quotient(CovCyclicGroup(named_group(name), alpha), M)


def covc_pset(V: CovCyclicGroup, ring) -> list[int]:
    return group_pset(V, ring)


def hyper_elementary_sweep(corpus=None, primes=(2, 3, 5)) -> dict:
    """Run the hyperelementary-implies-elementary check on ``(F, i(K), p)`` for every quotient."""
    corpus = quotient_corpus() if corpus is None else corpus
    checked = 0
    violations = []
    for name, a, M in corpus:
        Q = corpus_quotient(name, a, M)
        for p in primes:
            rep = hyper_implies_elementary_check(Q.F, Q.K_mask, p)
            checked += rep.checked
            for H in rep.violations:
                violations.append({"K": name, "alpha": list(a), "M": M, "p": p, "H": H})
    return {"quotients": len(corpus), "checked": checked, "violations": violations}
