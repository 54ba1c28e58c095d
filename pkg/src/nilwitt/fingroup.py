"""Finite groups given by multiplication tables, and their subgroup lattices.

Subgroups are handled as bitmasks over element indices, which keeps lattice
enumeration and intersection tests cheap at the group orders used here
(at most a few hundred elements).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sympy import factorint, isprime

DEFAULT_ORDER_BOUND = 96


class GroupError(ValueError):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


class FiniteGroup:
    """A finite group on the elements ``0..n-1``.

    The table is validated on construction (closure, identity, inverses,
    associativity).  Subgroup data is computed lazily and memoised.
    """

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                 perm_gens: Sequence[Sequence[int]] | None = None, label: str = "", check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        if n == 0:
            raise GroupError("empty group table")
        self.order = n
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        self.perm_gens = tuple(tuple(g) for g in perm_gens) if perm_gens else None
        self.label = label
        if any(len(row) != n or any(not 0 <= x < n for x in row) for row in self.table):
            raise GroupError(f"table must be {n}x{n} with entries in 0..{n - 1}")
        ident = [e for e in range(n) if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n))]
        if check:
            for row in self.table:
                if sorted(row) != list(range(n)):
                    raise GroupError("table rows must be permutations of the elements")
            if len(ident) != 1:
                raise GroupError("table has no two-sided identity")
        self.identity = ident[0] if ident else 0
        self.inverses = tuple(next(y for y in range(n) if self.table[x][y] == self.identity) for x in range(n))
        if check:
            for x in range(n):
                if self.table[self.inverses[x]][x] != self.identity:
                    raise GroupError("inverses are not two-sided")
            t = self.table
            for a in range(n):
                ta = t[a]
                for b in range(n):
                    tab = t[ta[b]]
                    tb = t[b]
                    for c in range(n):
                        if tab[c] != ta[tb[c]]:
                            raise GroupError("table is not associative")
        self._lock = threading.Lock()
        self._cache: dict = {}

    # --- basic operations ---------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self.inverses[g]]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverses[g], -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][g]
        return r

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.table[x][g]
            k += 1
        return k

    def __repr__(self):
        return f"FiniteGroup({self.label or self.order})"

    def _memo(self, key, compute):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    # --- masks ----------------------------------------------------------------
    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def closure(self, gens: Iterable[int], start: int = 0) -> int:
        """Bitmask of the subgroup generated by ``gens`` together with the subgroup ``start``."""
        gens = list(dict.fromkeys(list(gens) + _bits(start)))
        mask = 1 << self.identity
        frontier = [self.identity]
        t = self.table
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for g in gens:
                    y = row[g]
                    if not mask >> y & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def conjugate_mask(self, g: int, mask: int) -> int:
        out = 0
        for x in _bits(mask):
            out |= 1 << self.conj(g, x)
        return out

    def cyclic_mask(self, g: int) -> int:
        return self._memo(("cyc", g), lambda: self._cyclic(g))

    def _cyclic(self, g):
        mask, x = 1 << self.identity, g
        while x != self.identity:
            mask |= 1 << x
            x = self.table[x][g]
        return mask

    # --- subgroup lattice -------------------------------------------------
    def subgroup_masks(self, bound: int = DEFAULT_ORDER_BOUND) -> tuple:
        """All subgroups as bitmasks, sorted by (order, mask)."""
        if self.order > bound:
            raise GroupError(f"group order {self.order} exceeds the bound {bound}")
        return self._memo("subgroups", self._enumerate_subgroups)

    def _enumerate_subgroups(self):
        cyclic = sorted({self.cyclic_mask(g) for g in range(self.order)})
        gens_of = {c: next(g for g in _bits(c) if self.cyclic_mask(g) == c) for c in cyclic}
        found = set(cyclic)
        frontier = list(cyclic)
        while frontier:
            nxt = []
            for H in frontier:
                for C in cyclic:
                    if C & ~H:
                        J = self.closure([gens_of[C]], H)
                        if J not in found:
                            found.add(J)
                            nxt.append(J)
            frontier = nxt
        return tuple(sorted(found, key=lambda m: (bin(m).count("1"), m)))

    def subgroups(self) -> list["Subgroup"]:
        return [Subgroup(self, m) for m in self.subgroup_masks()]

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        mask = 0
        for x in elements:
            mask |= 1 << int(x)
        if self.closure([], mask) != mask:
            raise GroupError("element set is not a subgroup")
        return Subgroup(self, mask)

    def generated(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, self.closure(list(gens)))

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.full_mask)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, 1 << self.identity)

    def conjugacy_classes_of_subgroups(self) -> tuple:
        """Tuple of classes; each class is a sorted tuple of masks. Classes sorted by (order, first mask)."""
        def compute():
            seen = {}
            classes = []
            for H in self.subgroup_masks():
                if H in seen:
                    continue
                cls = sorted({self.conjugate_mask(g, H) for g in range(self.order)})
                for K in cls:
                    seen[K] = len(classes)
                classes.append(tuple(cls))
            return tuple(classes)
        return self._memo("classes", compute)

    def class_index(self, mask: int) -> int:
        table = self._memo("class_index", lambda: {K: i for i, cls in enumerate(self.conjugacy_classes_of_subgroups()) for K in cls})
        return table[mask]

    def class_representatives(self) -> list[int]:
        return [cls[0] for cls in self.conjugacy_classes_of_subgroups()]

    def normalizer(self, mask: int) -> int:
        out = 0
        for g in range(self.order):
            if self.conjugate_mask(g, mask) == mask:
                out |= 1 << g
        return out

    def centralizer(self, mask: int) -> int:
        els = _bits(mask)
        out = 0
        t = self.table
        for g in range(self.order):
            if all(t[g][x] == t[x][g] for x in els):
                out |= 1 << g
        return out

    def is_normal(self, mask: int, within: int | None = None) -> bool:
        within = self.full_mask if within is None else within
        return all(self.conjugate_mask(g, mask) == mask for g in _bits(within))

    def is_abelian(self, mask: int | None = None) -> bool:
        els = _bits(self.full_mask if mask is None else mask)
        t = self.table
        return all(t[a][b] == t[b][a] for a in els for b in els)

    def is_cyclic(self, mask: int) -> bool:
        n = bin(mask).count("1")
        return any(self.element_order(g) == n for g in _bits(mask))

    def cosets(self, mask: int, side: str = "left") -> list[int]:
        """Left cosets ``gH`` (or right ``Hg``) as bitmasks, ordered by least element."""
        seen = 0
        out = []
        els = _bits(mask)
        for g in range(self.order):
            if seen >> g & 1:
                continue
            c = 0
            for h in els:
                c |= 1 << (self.table[g][h] if side == "left" else self.table[h][g])
            seen |= c
            out.append(c)
        return out

    def double_cosets(self, H: int, K: int) -> list[int]:
        """Double cosets ``H g K`` as bitmasks, ordered by least element."""
        seen = 0
        out = []
        hs, ks = _bits(H), _bits(K)
        t = self.table
        for g in range(self.order):
            if seen >> g & 1:
                continue
            c = 0
            for h in hs:
                hg = t[h][g]
                for k in ks:
                    c |= 1 << t[hg][k]
            seen |= c
            out.append(c)
        return out

    def exponent_primes(self) -> list[int]:
        return sorted(factorint(self.order))


def mask_order(mask: int) -> int:
    return bin(mask).count("1")


def mask_elements(mask: int) -> list[int]:
    return _bits(mask)


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup = field(compare=False, hash=False)
    mask: int

    @property
    def order(self) -> int:
        return mask_order(self.mask)

    @property
    def elements(self) -> list[int]:
        return _bits(self.mask)

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.group, self.group.conjugate_mask(g, self.mask))

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.mask & other.mask)

    @property
    def normalizer(self) -> "Subgroup":
        return Subgroup(self.group, self.group.normalizer(self.mask))

    @property
    def centralizer(self) -> "Subgroup":
        return Subgroup(self.group, self.group.centralizer(self.mask))

    @property
    def class_index(self) -> int:
        return self.group.class_index(self.mask)

    def is_normal(self) -> bool:
        return self.group.is_normal(self.mask)

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """The subgroup as a standalone group, with the embedding list."""
        els = self.elements
        pos = {g: i for i, g in enumerate(els)}
        G = self.group
        table = [[pos[G.mul(a, b)] for b in els] for a in els]
        return FiniteGroup(table, [G.names[g] for g in els], check=False), els


# ---------------------------------------------------------------------------
# constructions


def from_table(table, names=None, label="") -> FiniteGroup:
    return FiniteGroup(table, names, label=label)


def _parse_cycles(text: str, degree: int | None = None) -> list[int] | None:
    cycles = []
    s = text.replace(" ", "")
    if s in ("", "()", "e", "id"):
        return []
    i = 0
    while i < len(s):
        if s[i] != "(":
            raise GroupError(f"malformed cycle notation {text!r}")
        j = s.index(")", i)
        body = s[i + 1:j]
        cycles.append([int(x) for x in body.split(",")] if "," in body else [int(ch) for ch in body])
        i = j + 1
    return cycles


def perm_from_cycles(cycles, degree: int) -> tuple[int, ...]:
    """Permutation of ``1..degree`` (stored 0-based) from a list of cycles of 1-based points."""
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def perm_to_cycles(p: Sequence[int]) -> str:
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + ",".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) or "()"


def from_permutations(gens: Sequence[Sequence[int]], label: str = "") -> FiniteGroup:
    """Closure of 0-based permutation tuples; element 0 is the identity, then BFS order."""
    if not gens:
        raise GroupError("need at least one generator")
    deg = len(gens[0])
    ident = tuple(range(deg))
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    # composition convention: (p*q)(i) = p(q(i)), i.e. apply q first
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[g[i]] for i in range(deg))
                if y not in index:
                    index[y] = len(elems)
                    elems.append(y)
                    nxt.append(y)
        frontier = nxt
    table = [[index[tuple(a[b[i]] for i in range(deg))] for b in elems] for a in elems]
    names = [perm_to_cycles(p) for p in elems]
    return FiniteGroup(table, names, perm_gens=gens, label=label, check=False)


def from_cycle_strings(gens: Sequence[str], degree: int | None = None, label: str = "") -> FiniteGroup:
    parsed = [_parse_cycles(g) for g in gens]
    if degree is None:
        degree = max([x for cyc in parsed for c in cyc for x in c] + [1])
    return from_permutations([perm_from_cycles(c, degree) for c in parsed], label)


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], [str(i) for i in range(n)], label=f"C{n}", check=False)


def direct_product(G: FiniteGroup, H: FiniteGroup, label: str = "") -> FiniteGroup:
    """Element ``(g, h)`` has index ``g * |H| + h``."""
    n, m = G.order, H.order
    table = [[G.mul(a // m, b // m) * m + H.mul(a % m, b % m) for b in range(n * m)] for a in range(n * m)]
    names = [f"({G.names[a // m]},{H.names[a % m]})" for a in range(n * m)]
    return FiniteGroup(table, names, label=label or f"{G.label}x{H.label}", check=False)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n``: element ``r^i s^j`` has index ``i + n*j``."""
    if n == 1:
        G = cyclic(2)
        G.label = "D1"
        return G

    def mul(a, b):
        i, j = a % n, a // n
        k, l = b % n, b // n
        # r^i s^j r^k s^l = r^(i + (-1)^j k) s^(j+l)
        return ((i + (k if j == 0 else -k)) % n) + n * ((j + l) % 2)

    table = [[mul(a, b) for b in range(2 * n)] for a in range(2 * n)]
    names = [("r^%d" % (a % n) if a % n else "e") if a < n else ("r^%ds" % (a % n) if a % n else "s") for a in range(2 * n)]
    return FiniteGroup(table, names, label=f"D{n}", check=False)


def symmetric(n: int) -> FiniteGroup:
    if n == 1:
        return from_permutations([(0,)], label="S1")
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return from_permutations(gens, label=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n <= 2:
        return from_permutations([tuple(range(max(n, 1)))], label=f"A{n}")
    gens = [perm_from_cycles([[1, 2, k]], n) for k in range(3, n + 1)]
    return from_permutations(gens, label=f"A{n}")


def quaternion() -> FiniteGroup:
    """Q8 as a permutation group on 8 points (left regular action)."""
    # elements 1,i,j,k,-1,-i,-j,-k -> 0..7
    base = {"1": 0, "i": 1, "j": 2, "k": 3}
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    units = ["1", "i", "j", "k"]

    def mul(a, b):
        sa, ua = (1 if a < 4 else -1), units[a % 4]
        sb, ub = (1 if b < 4 else -1), units[b % 4]
        s, u = prod[(ua, ub)]
        s *= sa * sb
        return base[u] + (0 if s == 1 else 4)

    table = [[mul(a, b) for b in range(8)] for a in range(8)]
    names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    return FiniteGroup(table, names, label="Q8")


def _corpus_builders():
    out = {}
    for n in range(1, 25):
        out[f"C{n}"] = (lambda n=n: cyclic(n))
    for n in range(2, 13):
        out[f"D{n}"] = (lambda n=n: dihedral(n))
    out["S3"] = lambda: symmetric(3)
    out["S4"] = lambda: symmetric(4)
    out["A4"] = lambda: alternating(4)
    out["Q8"] = quaternion
    out["V4"] = lambda: direct_product(cyclic(2), cyclic(2), "V4")
    out["C2xC4"] = lambda: direct_product(cyclic(2), cyclic(4), "C2xC4")
    out["C2xC2xC2"] = lambda: direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2), "C2xC2xC2")
    out["C2xC6"] = lambda: direct_product(cyclic(2), cyclic(6), "C2xC6")
    out["C3xS3"] = lambda: direct_product(cyclic(3), symmetric(3), "C3xS3")
    out["C2xA4"] = lambda: direct_product(cyclic(2), alternating(4), "C2xA4")
    out["C2xQ8"] = lambda: direct_product(cyclic(2), quaternion(), "C2xQ8")
    return out


_CORPUS = _corpus_builders()
_CORPUS_CACHE: dict[str, FiniteGroup] = {}
_CORPUS_LOCK = threading.Lock()


def corpus_names() -> list[str]:
    return list(_CORPUS)


def named_group(name: str) -> FiniteGroup:
    """A group from the built-in corpus (``C6``, ``D4`` = order 8, ``S3``, ``A4``, ``Q8``, ...)."""
    with _CORPUS_LOCK:
        if name not in _CORPUS_CACHE:
            if name not in _CORPUS:
                raise GroupError(f"unknown group {name!r}; known: {', '.join(_CORPUS)}")
            G = _CORPUS[name]()
            G.label = name
            _CORPUS_CACHE[name] = G
        return _CORPUS_CACHE[name]


def group_from_json(data) -> FiniteGroup:
    """``{"order": n, "table": [...]}``, ``{"perm_gens": [...]}`` or a corpus name."""
    if isinstance(data, str):
        return named_group(data)
    if "name" in data:
        return named_group(data["name"])
    if "table" in data:
        table = data["table"]
        if "order" in data and data["order"] != len(table):
            raise GroupError("order does not match table size")
        return FiniteGroup(table, data.get("names"))
    if "perm_gens" in data:
        gens = data["perm_gens"]
        if all(isinstance(g, str) for g in gens):
            return from_cycle_strings(gens, data.get("degree"))
        return from_permutations([tuple(g) for g in gens])
    raise GroupError("group description needs 'table', 'perm_gens' or 'name'")


# ---------------------------------------------------------------------------
# double cosets and subgroup-category morphisms


def subfin_morphisms(G: FiniteGroup, H: int, K: int) -> list[int]:
    """Representatives of ``K \\ {g : g H g^-1 <= K} / C_G(H)``."""
    T = [g for g in range(G.order) if G.conjugate_mask(g, H) & ~K == 0]
    Tset = set(T)
    C = mask_elements(G.centralizer(H))
    ks = mask_elements(K)
    seen = set()
    reps = []
    t = G.table
    for g in T:
        if g in seen:
            continue
        reps.append(g)
        for k in ks:
            kg = t[k][g]
            for c in C:
                seen.add(t[kg][c])
    assert seen <= Tset
    return reps


def conhom_orbits_bruteforce(G: FiniteGroup, H: int, K: int) -> int:
    """Count ``Inn(K) \\ conhom_G(H, K)`` by listing conjugation maps as functions."""
    hs = mask_elements(H)
    maps = set()
    for g in range(G.order):
        img = tuple(G.conj(g, h) for h in hs)
        if all(K >> y & 1 for y in img):
            maps.add(img)
    ks = mask_elements(K)
    orbits = 0
    seen = set()
    for f in sorted(maps):
        if f in seen:
            continue
        orbits += 1
        for k in ks:
            seen.add(tuple(G.conj(k, y) for y in f))
    return orbits


# ---------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    prime: int
    order: int
    cyclic: bool
    p_group: bool
    p_elementary: bool
    p_hyperelementary: bool
    hyper_witness: tuple | None = None  # (C mask, quotient order)
    elementary_witness: tuple | None = None  # (C mask, P mask)

    def to_json(self, G: FiniteGroup | None = None):
        def els(m):
            return mask_elements(m)
        d = {
            "prime": self.prime, "order": self.order, "cyclic": self.cyclic, "p_group": self.p_group,
            "p_elementary": self.p_elementary, "p_hyperelementary": self.p_hyperelementary,
        }
        if self.hyper_witness:
            d["normal_cyclic"] = els(self.hyper_witness[0])
            d["quotient_order"] = self.hyper_witness[1]
        if self.elementary_witness:
            d["cyclic_factor"] = els(self.elementary_witness[0])
            d["p_factor"] = els(self.elementary_witness[1])
        return d


def _subgroups_of(G: FiniteGroup, H: int) -> list[int]:
    return [K for K in G.subgroup_masks() if K & ~H == 0]


def _cyclic_subgroups_of(G: FiniteGroup, H: int) -> list[int]:
    return sorted({G.cyclic_mask(g) for g in mask_elements(H)}, key=lambda m: (mask_order(m), m))


def classify(G: FiniteGroup, H: int, p: int) -> ClassificationReport:
    """Decide cyclic / p-group / p-elementary / p-hyperelementary for the subgroup ``H``."""
    if not isprime(p):
        raise GroupError(f"{p} is not prime")
    n = mask_order(H)
    is_cyc = G.is_cyclic(H)
    pgroup = is_prime_power(n, p)
    hyper = None
    hs = mask_elements(H)
    for C in sorted(_cyclic_subgroups_of(G, H), key=lambda m: (-mask_order(m), m)):
        if is_prime_power(n // mask_order(C), p) and all(G.conjugate_mask(h, C) == C for h in hs):
            hyper = (C, n // mask_order(C))
            break
    elem = None
    if hyper is not None:
        ppart = 1
        m = n
        while m % p == 0:
            m //= p
            ppart *= p
        t = G.table
        Cs = [C for C in _cyclic_subgroups_of(G, H) if mask_order(C) == m]
        Ps = [P for P in _subgroups_of(G, H) if mask_order(P) == ppart]
        for C in Cs:
            cs = mask_elements(C)
            for P in Ps:
                if C & P != 1 << G.identity:
                    continue
                if all(t[a][b] == t[b][a] for a in cs for b in mask_elements(P)):
                    elem = (C, P)
                    break
            if elem:
                break
    return ClassificationReport(p, n, is_cyc, pgroup, elem is not None, hyper is not None, hyper, elem)


def p_hyperelementary_classes(G: FiniteGroup, p: int) -> list[int]:
    """Indices of subgroup conjugacy classes that are p-hyperelementary."""
    return [i for i, cls in enumerate(G.conjugacy_classes_of_subgroups()) if classify(G, cls[0], p).p_hyperelementary]


@dataclass
class HyperElementaryReport:
    prime: int
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def hyper_implies_elementary_check(F: FiniteGroup, K: int, p: int) -> HyperElementaryReport:
    """For ``K`` normal in ``F`` with cyclic quotient: every p-hyperelementary ``H``
    meeting ``K`` in a p-group must be p-elementary."""
    if not F.is_normal(K):
        raise GroupError("K is not normal")
    if not _quotient_is_cyclic(F, K):
        raise GroupError("F/K is not cyclic")
    checked = 0
    bad = []
    for H in F.subgroup_masks():
        if not is_prime_power(mask_order(H & K), p):
            continue
        rep = classify(F, H, p)
        if rep.p_hyperelementary:
            checked += 1
            if not rep.p_elementary:
                bad.append(mask_elements(H))
    return HyperElementaryReport(p, checked, bad)


def _quotient_is_cyclic(F: FiniteGroup, K: int) -> bool:
    idx = F.order // mask_order(K)
    return any(F.closure([g], K) == F.full_mask for g in range(F.order)) or idx == 1


# ---------------------------------------------------------------------------
# prime sets


def pset(order_of_finite_part: int, ring) -> list[int]:
    """Primes dividing the order of the finite part and not invertible in ``ring``."""
    return [p for p in sorted(factorint(order_of_finite_part)) if not ring.is_unit(ring.from_int(p))]


def group_pset(group, ring) -> list[int]:
    """Prime set for a finite group or a covirtually cyclic group (routed through ``K``)."""
    if isinstance(group, FiniteGroup):
        return pset(group.order, ring)
    K = getattr(group, "K", None)
    if isinstance(K, FiniteGroup):
        return pset(K.order, ring)
    raise GroupError(f"unsupported group description {group!r}")
