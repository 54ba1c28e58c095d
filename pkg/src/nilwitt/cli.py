"""Command-line front end.  Every command prints JSON (or a plain-text rendering of it).

Exit status: 0 on success, 1 when the answer is a mathematical negative
(an infeasible Dress system or a failed identity check), 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from sympy import isprime

from . import covc, endk, fingroup, gcat, mackey, nilcat, witt
from .rings import RingError, parse_ring


class InputError(Exception):
    pass


class Negative(Exception):
    """Raised with a payload when the computation answers 'no'."""

    def __init__(self, payload):
        super().__init__("negative result")
        self.payload = payload


# ---------------------------------------------------------------------------
# argument loading


def load_json(text: str, where: str):
    if text.startswith("@"):
        path = Path(text[1:])
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"{where}: cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def arg(ns, name: str, loader=None, required: bool = True):
    raw = getattr(ns, name)
    flag = "--" + name.replace("_", "-")
    if raw is None:
        if required:
            raise InputError(f"{flag}: required")
        return None
    data = load_json(raw, flag)
    if loader is None:
        return data
    try:
        return loader(data)
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise InputError(f"{flag}: {exc}") from exc


def group_arg(ns, name: str = "group") -> fingroup.FiniteGroup:
    raw = getattr(ns, name)
    flag = "--" + name
    if raw is None:
        raise InputError(f"{flag}: required")
    try:
        if raw.startswith("{") or raw.startswith("@"):
            return fingroup.group_from_json(load_json(raw, flag))
        return fingroup.named_group(raw)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{flag}: {exc}") from exc


def mask_arg(ns, name: str, G: fingroup.FiniteGroup) -> int:
    elems = arg(ns, name)
    flag = "--" + name.replace("_", "-")
    if not isinstance(elems, list) or not all(isinstance(e, int) and 0 <= e < G.order for e in elems):
        raise InputError(f"{flag}: expected a list of element indices below {G.order}")
    mask = 0
    for e in elems:
        mask |= 1 << e
    if G.closure([], mask) != mask:
        raise InputError(f"{flag}: the elements do not form a subgroup")
    return mask


def positive(ns, name: str) -> int:
    v = getattr(ns, name)
    if v is None or v < 1:
        raise InputError(f"--{name.replace('_', '-')}: a positive integer is required")
    return v


def prime(ns, name: str = "prime") -> int:
    v = getattr(ns, name)
    if v is None or not isprime(v):
        raise InputError(f"--{name}: a prime is required")
    return v


# ---------------------------------------------------------------------------
# witt


def cmd_witt(ns):
    a = arg(ns, "a", witt.witt_from_json)
    R = a.ring
    if ns.op in ("add", "mul"):
        b = arg(ns, "b", witt.witt_from_json)
        if (a.ring, a.N) != (b.ring, b.N):
            raise InputError("--b: ring and N must agree with --a")
        return (a + b if ns.op == "add" else a * b).to_json()
    if ns.op == "decompose":
        return {"ring": R.descriptor, "N": a.N,
                "factors": [{"n": f.n, "coeff": R.to_json(f.coeff)} for f in witt.witt_decompose(a)]}
    if ns.op == "ghost":
        try:
            g = witt.witt_ghost(a)
        except witt.WittError as exc:
            raise InputError(f"--a: {exc}") from exc
        return {"ring": R.descriptor, "N": a.N, "ghost": [R.to_json(v) for v in g]}
    if ns.op == "ideal":
        k = positive(ns, "k")
        if k > a.N:
            raise InputError(f"--k: must be at most N = {a.N}")
        return {"k": k, "member": witt.ideal_membership(a, k)}
    raise InputError(f"unknown witt command {ns.op}")


# ---------------------------------------------------------------------------
# endk


def cmd_endk(ns):
    if ns.op == "charpoly":
        x = arg(ns, "x", endk.end_from_json)
        return {"ring": x.ring.descriptor, "charpoly": endk.char_polynomial(x).to_json()}
    if ns.op == "eta":
        x = arg(ns, "x", endk.class_from_json)
        w = endk.eta(x)
        out = w.to_json()
        if ns.N:
            out["expansion"] = w.expand(ns.N).to_json()
        return out
    if ns.op == "section":
        w = arg(ns, "w", witt.rational_from_json)
        c = endk.eta_section(w)
        return {"class": c.to_json(), "round_trip": endk.eta(c) == w}
    if ns.op == "check-hom":
        x = arg(ns, "x", endk.end_from_json)
        y = arg(ns, "y", endk.end_from_json)
        if x.ring != y.ring:
            raise InputError("--y: ring must agree with --x")
        rep = endk.check_homomorphism(x, y, positive(ns, "N"))
        if not all(rep.values()):
            raise Negative(rep)
        return rep
    raise InputError(f"unknown endk command {ns.op}")


# ---------------------------------------------------------------------------
# nil


def cmd_nil(ns):
    if ns.op == "pair":
        C = arg(ns, "c", endk.end_from_json)
        x = arg(ns, "x", nilcat.nil_from_json)
        try:
            return nilcat.pair_end(C, x).to_json()
        except nilcat.NilError as exc:
            raise InputError(f"--c: {exc}") from exc
    x = arg(ns, "x", nilcat.nil_from_json)
    if ns.op == "degree":
        return {"degree": nilcat.nilpotence_degree(x)}
    if ns.op == "vk":
        return nilcat.verschiebung(x, positive(ns, "k")).to_json()
    if ns.op == "fk":
        y = nilcat.frobenius(x, positive(ns, "k"))
        out = y.to_json()
        out["zero"] = y.matrix.is_zero()
        return out
    if ns.op == "check-fv":
        k = positive(ns, "k")
        ok = nilcat.check_fv_lemma(x, k)
        rep = {"k": k, "ok": ok}
        if not ok:
            raise Negative(rep)
        return rep
    if ns.op == "check-induction":
        k = positive(ns, "k")
        u, v = nilcat.induction_matrices(x, k)
        ok = nilcat.check_induction_identity(x, k)
        rep = {"k": k, "ok": ok, "u": u.to_json(), "v": v.to_json()}
        if not ok:
            raise Negative(rep)
        return rep
    if ns.op == "check-triangular":
        lams = arg(ns, "lambdas")
        if not isinstance(lams, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in lams) or not lams:
            raise InputError("--lambdas: expected a non-empty list of integers")
        rep = nilcat.triangular_decomposition(x, lams, ns.N)
        out = {
            "matches_form": rep.matches_form,
            "nonpositive": rep.nonpositive,
            "zero_clause_applies": rep.zero_clause_applies,
            "zero_clause_holds": rep.zero_clause_holds,
            "ok": rep.ok,
            "F_hat": rep.F_hat.to_json(),
            "w": [w.to_json() for w in rep.w],
        }
        if not rep.ok:
            raise Negative(out)
        return out
    raise InputError(f"unknown nil command {ns.op}")


# ---------------------------------------------------------------------------
# group


def cmd_group(ns):
    if ns.op == "pset":
        try:
            R = parse_ring(ns.ring or "Z")
        except RingError as exc:
            raise InputError(f"--ring: {exc}") from exc
        if ns.covc:
            V = arg(ns, "covc", covc.covc_from_json)
            return {"ring": R.descriptor, "finite_part_order": V.K.order, "primes": fingroup.group_pset(V, R)}
        G = group_arg(ns)
        return {"ring": R.descriptor, "primes": fingroup.group_pset(G, R)}
    G = group_arg(ns)
    if ns.op == "subgroups":
        classes = G.conjugacy_classes_of_subgroups()
        return {
            "order": G.order,
            "classes": [
                {"index": i, "order": fingroup.mask_order(c[0]), "representative": fingroup.mask_elements(c[0]),
                 "size": len(c), "normal": G.is_normal(c[0]), "cyclic": G.is_cyclic(c[0])}
                for i, c in enumerate(classes)
            ],
        }
    if ns.op == "classify":
        H = mask_arg(ns, "subgroup", G)
        return fingroup.classify(G, H, prime(ns)).to_json(G)
    if ns.op == "subfin-mor":
        H = mask_arg(ns, "h", G)
        K = mask_arg(ns, "k_sub", G)
        reps = fingroup.subfin_morphisms(G, H, K)
        return {"count": len(reps), "representatives": reps}
    raise InputError(f"unknown group command {ns.op}")


# ---------------------------------------------------------------------------
# mackey


def functor_arg(ns, G) -> mackey.GreenFunctorData:
    f = ns.functor or "burnside"
    if f == "burnside":
        return mackey.burnside(G)
    if f == "cyclic-marks":
        return mackey.cyclic_marks_functor(G)
    data = load_json(f, "--functor")
    try:
        return mackey.green_from_json(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"--functor: {exc}") from exc


def family_arg(ns, G, p) -> list[int]:
    fam = ns.family or "hyperelementary"
    if fam == "hyperelementary":
        return mackey.hyperelementary_family(G, p)
    if fam == "proper":
        return mackey.proper_family(G)
    if fam == "all":
        return list(range(len(G.class_representatives())))
    data = load_json(fam, "--family")
    if not isinstance(data, list) or not all(isinstance(i, int) for i in data):
        raise InputError("--family: expected hyperelementary, proper, all or a list of class indices")
    return data


def cmd_mackey(ns):
    if ns.op == "marks":
        G = group_arg(ns)
        return mackey.table_of_marks(G).to_json()
    if ns.op == "axiom-check":
        G = None if (ns.functor or "").startswith(("{", "@")) else group_arg(ns)
        M = functor_arg(ns, G)
        rep = mackey.mackey_axiom_check(M, full=ns.full)
        if not rep.ok:
            raise Negative(rep.to_json())
        return rep.to_json()
    if ns.op == "dress-solve":
        G = None if (ns.functor or "").startswith(("{", "@")) else group_arg(ns)
        M = functor_arg(ns, G)
        G = M.group
        p = prime(ns)
        fam = family_arg(ns, G, p)
        z = arg(ns, "z", required=False)
        try:
            res = mackey.dress_solve(M, fam, p, z)
        except mackey.MackeyError as exc:
            raise InputError(f"--family: {exc}") from exc
        out = res.to_json(M)
        out["family"] = sorted(set(fam))
        out["functor"] = M.name
        if isinstance(res, mackey.DressInfeasible):
            raise Negative(out)
        return out
    raise InputError(f"unknown mackey command {ns.op}")


# ---------------------------------------------------------------------------
# gcat


def context_arg(ns):
    data = arg(ns, "context")
    try:
        C = gcat.coefficients_from_json(data)
        X = gcat.gset_from_json(C.group, data.get("gset"))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"--context: {exc}") from exc
    return data, C, X


def morphism_arg(ns, name, C, X):
    return arg(ns, name, lambda d: gcat.morphism_from_json(C, X, d))


def cmd_gcat(ns):
    data, C, X = context_arg(ns)
    G = C.group
    if ns.op == "compose":
        first = morphism_arg(ns, "first", C, X)
        second = morphism_arg(ns, "second", C, X)
        try:
            return gcat.compose(second, first).to_json()
        except gcat.GCatError as exc:
            raise InputError(f"--second: {exc}") from exc
    if ns.op == "restrict":
        H = mask_arg(ns, "subgroup", G)
        if "gset" not in data or "subgroup" not in data["gset"]:
            raise InputError("--context: restriction needs the target G-set given by a subgroup K")
        K = 0
        for g in data["gset"]["subgroup"]:
            K |= 1 << int(g)
        if H & ~K:
            raise InputError("--subgroup: must lie inside the subgroup of the context G-set")
        Xs = mackey.coset_gset(G, H)
        idx = mackey.coset_index(G, K)
        reps = [fingroup.mask_elements(c)[0] for c in G.cosets(H)]
        f = mackey.GMap(Xs, X, tuple(idx[r] for r in reps))
        phi = morphism_arg(ns, "morphism", C, X)
        return gcat.restrict(f, phi).to_json()
    if ns.op == "swan-pair":
        M = arg(ns, "system", lambda d: gcat.swan_from_json(d, X))
        phi = morphism_arg(ns, "morphism", C, X)
        return gcat.swan_pair(M, phi).to_json()
    if ns.op == "th-check":
        H = mask_arg(ns, "subgroup", G)
        rng = random.Random(ns.seed)
        n = ns.samples
        samples = [(gcat.random_element(C, H, rng), gcat.random_element(C, H, rng)) for _ in range(n)]
        rep = gcat.th_equivalence(C, H, samples)
        if not rep.ok:
            raise Negative(rep.to_json())
        return rep.to_json()
    raise InputError(f"unknown gcat command {ns.op}")


# ---------------------------------------------------------------------------
# covc


def cmd_covc(ns):
    if ns.op in ("tp", "psi"):
        F = group_arg(ns)
        alpha = arg(ns, "alpha", required=False)
        alpha = tuple(range(F.order)) if alpha is None else tuple(alpha)
        if not covc.is_automorphism(F, alpha):
            raise InputError("--alpha: not an automorphism of the group")
        if ns.op == "tp":
            triples = covc.tp_triples(F, alpha, prime(ns), positive(ns, "k_max"), literal=ns.literal)
            return {"count": len(triples), "literal": ns.literal, "triples": [t.to_json(F) for t in triples]}
        P = mask_arg(ns, "P", F)
        try:
            R = parse_ring(ns.ring or "Z")
        except RingError as exc:
            raise InputError(f"--ring: {exc}") from exc
        rho = arg(ns, "rho", required=False)
        if rho is not None:
            rho = [v == "conj" or v is True for v in rho]
            if len(rho) != F.order:
                raise InputError("--rho: one tag per group element is required")
        y = ns.y if ns.y is not None else F.identity
        if not 0 <= y < F.order:
            raise InputError("--y: not an element of the group")
        try:
            d = covc.psi_data(F, alpha, covc.TpTriple(P, positive(ns, "k"), y), R, rho, ns.mu_t == "conj")
        except (covc.CovcError, RingError) as exc:
            raise InputError(str(exc)) from exc
        return d.to_json()
    V = arg(ns, "covc", covc.covc_from_json)
    if ns.op == "quotient":
        try:
            return covc.finite_quotient(V, positive(ns, "M")).to_json()
        except covc.CovcError as exc:
            raise InputError(f"--M: {exc}") from exc
    if ns.op == "index-check":
        try:
            Q = covc.finite_quotient(V, positive(ns, "M"))
        except covc.CovcError as exc:
            raise InputError(f"--M: {exc}") from exc
        rep = covc.index_estimate_check(Q, prime(ns, "q"))
        out = rep.to_json()
        if not rep.ok:
            raise Negative(out)
        return out
    if ns.op == "enumerate":
        ws = covc.enumerate_finite_index_subgroups(V, positive(ns, "d_max"))
        return {"count": len(ws), "subgroups": [w.to_json(V) for w in ws]}
    if ns.op == "vp":
        ws = covc.vp_set(V, prime(ns), positive(ns, "d_max"))
        return {"count": len(ws), "subgroups": [w.to_json(V) for w in ws]}
    raise InputError(f"unknown covc command {ns.op}")


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilwitt", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    sub = p.add_subparsers(dest="area", required=True)

    def area(name, ops, handler):
        a = sub.add_parser(name)
        a.set_defaults(handler=handler)
        a.add_argument("op", choices=ops)
        a.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
        a.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        return a

    a = area("witt", ["add", "mul", "decompose", "ghost", "ideal"], cmd_witt)
    a.add_argument("--a", help="Witt vector JSON {ring, N, coeffs}")
    a.add_argument("--b", help="second Witt vector")
    a.add_argument("--k", type=int)

    a = area("endk", ["charpoly", "eta", "section", "check-hom"], cmd_endk)
    a.add_argument("--x", help="endomorphism {ring, matrix} or class {plus, minus}")
    a.add_argument("--y")
    a.add_argument("--w", help="rational Witt vector {ring, numerator, denominator}")
    a.add_argument("--N", type=int)

    a = area("nil", ["vk", "fk", "degree", "check-fv", "check-induction", "check-triangular", "pair"], cmd_nil)
    a.add_argument("--x", help="nil object {ring, twist, matrix}")
    a.add_argument("--k", type=int)
    a.add_argument("--c", help="integer endomorphism for pairing")
    a.add_argument("--lambdas", help="JSON list of integers")
    a.add_argument("--N", type=int)

    a = area("group", ["subgroups", "classify", "subfin-mor", "pset"], cmd_group)
    a.add_argument("--group", help="corpus name or group JSON")
    a.add_argument("--subgroup")
    a.add_argument("--prime", type=int)
    a.add_argument("--h", help="subgroup H as element list")
    a.add_argument("--k", dest="k_sub", help="subgroup K as element list")
    a.add_argument("--ring")
    a.add_argument("--covc", help="covirtually cyclic group {K, alpha}")

    a = area("mackey", ["marks", "axiom-check", "dress-solve"], cmd_mackey)
    a.add_argument("--group")
    a.add_argument("--functor", help="burnside, cyclic-marks or Green functor JSON")
    a.add_argument("--prime", type=int)
    a.add_argument("--family", help="hyperelementary, proper, all or class list")
    a.add_argument("--z", help="target element at the top level")
    a.add_argument("--full", action="store_true", help="check every cospan of orbits")

    a = area("gcat", ["compose", "restrict", "swan-pair", "th-check"], cmd_gcat)
    a.add_argument("--context", help="{group, ring, rho, gset}")
    a.add_argument("--first")
    a.add_argument("--second")
    a.add_argument("--morphism")
    a.add_argument("--subgroup")
    a.add_argument("--system", help="Swan coefficient system JSON")
    a.add_argument("--samples", type=int, default=100)

    a = area("covc", ["quotient", "index-check", "enumerate", "vp", "tp", "psi"], cmd_covc)
    a.add_argument("--covc", help="{K, alpha}")
    a.add_argument("--M", type=int)
    a.add_argument("--q", type=int)
    a.add_argument("--d-max", dest="d_max", type=int)
    a.add_argument("--prime", type=int)
    a.add_argument("--group")
    a.add_argument("--alpha")
    a.add_argument("--k-max", dest="k_max", type=int)
    a.add_argument("--literal", action="store_true")
    a.add_argument("--P")
    a.add_argument("--k", type=int)
    a.add_argument("--y", type=int)
    a.add_argument("--ring")
    a.add_argument("--rho")
    a.add_argument("--mu-t", dest="mu_t", choices=["id", "conj"], default="id")
    return p


def render_text(data, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(data, dict):
        lines = []
        for k in sorted(data):
            v = data[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(data, list):
        return "\n".join(f"{pad}- {_inline(v)}" if _flat(v) or not isinstance(v, (dict, list)) else f"{pad}-\n" + render_text(v, indent + 1) for v in data)
    return pad + _inline(data)


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return False


def _inline(v) -> str:
    return json.dumps(v, sort_keys=True)


def emit(data, form: str, stream):
    if form == "text":
        stream.write(render_text(data) + "\n")
    else:
        stream.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        out = ns.handler(ns)
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except Negative as neg:
        emit(neg.payload, ns.format, stdout)
        return 1
    except (ValueError, KeyError, TypeError) as exc:
        stderr.write(f"error: {ns.area} {ns.op}: {exc}\n")
        return 2
    emit(out, ns.format, stdout)
    return 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
