import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nilwitt.fingroup import cyclic, mask_elements, mask_order, named_group, symmetric
from nilwitt.intlinalg import matvec
from nilwitt.mackey import (
    _subgroup_classes_within,
    DressInfeasible,
    DressWitness,
    GMap,
    GSet,
    MackeyError,
    OrbitCategory,
    burnside_product_by_cosets,
    coset_gset,
    corrupt,
    disjoint_union,
    dress_solve,
    ghost_coordinates,
    green_from_json,
    hyperelementary_family,
    induce_from,
    mackey_axiom_check,
    proper_family,
    pullback,
    table_of_marks,
    validate_family,
    verify_witness,
)
from cached import burnside_of, cyclic_marks_of


def fixed_points(X: GSet, K: int) -> int:
    return sum(1 for x in range(X.size) if all(X.act(k, x) == x for k in mask_elements(K)))


def to_top(G, X: GSet) -> GMap:
    point = GSet(G, tuple((0,) for _ in range(G.order)))
    return GMap(X, point, (0,) * X.size)


def marks_of_top(M, x):
    """Marks at every class representative of an element of A(G) given in the basis [G/H_a]."""
    marks = M.ghost[M.top]
    return [sum(x[a] * marks[a][b] for a in range(len(x))) for b in range(len(x))]


# ---------------------------------------------------------------------------
# G-sets and pullbacks


def test_coset_gset_is_transitive_with_right_stabilizer():
    G = symmetric(3)
    for H in G.subgroup_masks():
        X = coset_gset(G, H)
        X.validate()
        assert X.size == G.order // mask_order(H)
        assert len(X.orbits()) == 1
        assert X.stabilizer(0) == H  # the coset of the identity


def test_pullback_over_point_counts_double_cosets():
    G = named_group("D4")
    for H in G.subgroup_masks():
        for K in G.subgroup_masks():
            X, Y = coset_gset(G, H), coset_gset(G, K)
            P, px, py = pullback(to_top(G, X), to_top(G, Y))
            P.validate()
            assert len(P.orbits()) == len(G.double_cosets(H, K))
            assert P.size == X.size * Y.size


def test_pullback_with_identity():
    G = symmetric(3)
    X = coset_gset(G, G.cyclic_mask(1))
    ident = GMap(X, X, tuple(range(X.size)))
    f = GMap(X, X, tuple(range(X.size)))
    P, px, py = pullback(f, ident)
    assert P.size == X.size
    assert px.images == py.images


def test_pullback_s3_alternating():
    G = symmetric(3)
    A3 = G.cyclic_mask(2)
    X = coset_gset(G, A3)
    P, _, _ = pullback(to_top(G, X), to_top(G, X))
    assert len(P.orbits()) == 2


def test_pullback_needs_common_codomain():
    G = symmetric(3)
    X = coset_gset(G, G.cyclic_mask(1))
    Y = coset_gset(G, G.cyclic_mask(2))
    with pytest.raises(MackeyError):
        pullback(GMap(X, X, tuple(range(3))), GMap(Y, Y, tuple(range(2))))


def test_non_equivariant_map_rejected():
    G = symmetric(3)
    X = coset_gset(G, G.cyclic_mask(1))
    with pytest.raises(MackeyError):
        GMap(X, X, (0, 0, 1))


def test_disjoint_union():
    G = cyclic(4)
    X = disjoint_union(coset_gset(G, G.cyclic_mask(2)), coset_gset(G, 1))
    X.validate()
    assert [len(o) for o in X.orbits()] == [2, 4]


# ---------------------------------------------------------------------------
# table of marks and the Burnside functor


def test_s3_table_of_marks():
    T = table_of_marks(symmetric(3))
    assert [mask_order(H) for H in T.classes] == [1, 2, 3, 6]
    assert T.marks == [[6, 0, 0, 0], [3, 1, 0, 0], [2, 0, 2, 0], [1, 1, 1, 1]]


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "Q8", "S4", "C2xC6"])
def test_table_of_marks_matches_fixed_point_count(name):
    G = named_group(name)
    T = table_of_marks(G)
    for a, H in enumerate(T.classes):
        X = coset_gset(G, H)
        for b, K in enumerate(T.classes):
            assert T.marks[a][b] == fixed_points(X, K)
        # diagonal is |N(H)/H|, and the table is lower triangular
        assert T.marks[a][a] == mask_order(G.normalizer(H)) // mask_order(H)
        assert all(T.marks[a][b] == 0 for b in range(a + 1, len(T.classes)))


def test_trivial_group_burnside_is_z():
    M = burnside_of("C1")
    assert M.levels == [1] and M.rank(0) == 1 and M.mult[0][0][0] == [1]


def test_s3_burnside_product():
    M = burnside_of("S3")
    e = [0, 1, 0, 0]
    prod = M.multiply(M.top, e, e)
    assert marks_of_top(M, prod) == [9, 1, 0, 0]
    assert prod == [1, 1, 0, 0]


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "Q8", "C2xC4", "S4"])
def test_burnside_product_matches_double_coset_formula(name):
    M = burnside_of(name)
    G = M.group
    oc = OrbitCategory(G)
    reps = oc.reps
    for a, A in enumerate(reps):
        for b, B in enumerate(reps):
            ea = [int(k == a) for k in range(len(reps))]
            eb = [int(k == b) for k in range(len(reps))]
            want = [0] * len(reps)
            for S, mult in burnside_product_by_cosets(G, G.full_mask, A, B).items():
                want[G.class_index(S)] += mult
            assert M.multiply(M.top, ea, eb) == want


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "C2xC6"])
def test_burnside_induction_and_restriction_preserve_marks(name):
    # restriction keeps marks at subgroups of H; induction sums marks over fixed cosets
    M = burnside_of(name)
    G = M.group
    T = table_of_marks(G)
    for i, H in enumerate(M.levels):
        push = M.push[M.projection(i)]
        pull = M.pull[M.projection(i)]
        X = coset_gset(G, H)
        local = M.ghost[i]
        local_reps, _ = _subgroup_classes_within(G, H)
        for a in range(len(T.classes)):
            y = matvec_cols(pull, a)
            for b, J in enumerate(local_reps):
                got = sum(y[c] * local[c][b] for c in range(len(y)))
                assert got == T.marks[a][G.class_index(J)]
        for c, K in enumerate(local_reps):
            x = matvec_cols(push, c)
            for b, J in enumerate(T.classes):
                got = sum(x[a] * T.marks[a][b] for a in range(len(x)))
                want = 0
                for pt in range(X.size):
                    if all(X.act(j, pt) == pt for j in mask_elements(J)):
                        g = mask_elements(G.cosets(H)[pt])[0]
                        conj = G.conjugate_mask(G.inv(g), J)
                        want += local[c][_local_index(G, H, local_reps, conj)]
                assert got == want


def matvec_cols(A, col):
    return [row[col] for row in A]


def _local_index(G, H, reps, S):
    for idx, K in enumerate(reps):
        if any(G.conjugate_mask(h, K) == S for h in mask_elements(H)):
            return idx
    raise AssertionError


# ---------------------------------------------------------------------------
# axioms


@pytest.mark.parametrize("name", ["S3", "D4", "A4"])
def test_burnside_axioms_full(name):
    rep = mackey_axiom_check(burnside_of(name), full=True)
    assert rep.ok, rep.violations[:3]
    assert rep.checked["double_coset"] > 0


def test_cyclic_marks_axioms_full():
    rep = mackey_axiom_check(cyclic_marks_of("S3"), full=True)
    assert rep.ok


@pytest.mark.parametrize("name", ["S3", "D4"])
def test_corruption_is_localized(name):
    M = burnside_of(name)
    bad = corrupt(M, 0)
    rep = mackey_axiom_check(bad, green=False)
    assert not rep.ok
    kinds = {v["kind"] for v in rep.violations}
    assert "double_coset" in kinds
    # every double coset violation involves the corrupted level
    assert all(0 in v["pair"] for v in rep.violations if v["kind"] == "double_coset")
    # the original is untouched
    assert mackey_axiom_check(M, green=False).ok


def test_corrupt_unknown_map():
    with pytest.raises(MackeyError):
        corrupt(burnside_of("C2"), 1, 0)


# ---------------------------------------------------------------------------
# cyclic marks quotient


def test_cyclic_marks_ranks_s3():
    M = cyclic_marks_of("S3")
    assert M.rank(M.top) == 3
    assert [M.rank(i) for i in range(len(M.levels))] == [1, 2, 2, 3]


@pytest.mark.parametrize("name", ["C6", "C8", "C12"])
def test_cyclic_group_quotient_keeps_burnside_ranks(name):
    B, C = burnside_of(name), cyclic_marks_of(name)
    assert [B.rank(i) for i in range(len(B.levels))] == [C.rank(i) for i in range(len(C.levels))]


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4"])
def test_image_of_orbit_is_permutation_character(name):
    # ghost of the image of [G/H] is the number of fixed points at each cyclic subgroup
    B, C = burnside_of(name), cyclic_marks_of(name)
    G = C.group
    top = C.top
    cyc = [sum(1 << g for g in els) for els in C.ghost[top]["cyclic"]]
    for a, H in enumerate(B.levels):
        # push the unit of level a to the top in both functors
        img = C.push[C.projection(a)]
        x = matvec(img, C.unit[a])
        marks = ghost_coordinates(C, top, x)
        X = coset_gset(G, H)
        assert marks == [fixed_points(X, K) for K in cyc]


def test_green_json_round_trip():
    M = cyclic_marks_of("S3")
    data = json.loads(json.dumps(M.to_json()))
    N = green_from_json(data)
    assert N.push == M.push and N.pull == M.pull and N.mult == M.mult and N.unit == M.unit
    assert mackey_axiom_check(N).ok


def test_green_json_rejects_bad_shapes():
    data = burnside_of("C2").to_json()
    data["maps"][0]["push"] = [[1, 2, 3]]
    with pytest.raises(MackeyError):
        green_from_json(data)


# ---------------------------------------------------------------------------
# Dress induction


def test_s3_witness_p3():
    M = cyclic_marks_of("S3")
    fam = hyperelementary_family(M.group, 3)
    assert [mask_order(M.levels[i]) for i in fam] == [1, 2, 3]
    w = dress_solve(M, fam, 3)
    assert isinstance(w, DressWitness) and w.units_only
    coeffs = {mask_order(M.levels[i]): a for i, a, _ in w.terms}
    assert coeffs == {1: Fraction(-1, 2), 2: Fraction(1), 3: Fraction(1, 2)}
    assert all(d % 3 for d in w.denominators)
    assert verify_witness(M, w)
    # the same identity in marks coordinates at the cyclic subgroups 1, C2, C3
    total = [Fraction(0)] * 3
    for i, a, u in w.terms:
        m = ghost_coordinates(M, M.top, induce_from(M, i, u, M.unit[M.top]))
        total = [t + a * v for t, v in zip(total, m)]
    assert total == [1, 1, 1]


def test_s3_burnside_proper_family_infeasible():
    M = burnside_of("S3")
    out = dress_solve(M, proper_family(M.group), 3)
    assert isinstance(out, DressInfeasible)
    assert out.certificate.verify()
    # the obstruction is the mark at the whole group
    assert [Fraction(v) for v in out.certificate.functional] == [0, 0, 0, 1]


def test_family_with_whole_group():
    M = burnside_of("S3")
    fam = list(range(len(M.levels)))
    w = dress_solve(M, fam, 2)
    assert isinstance(w, DressWitness)
    assert w.terms == [(M.top, Fraction(1), M.unit[M.top])]


def test_family_must_be_subgroup_closed():
    G = symmetric(3)
    with pytest.raises(MackeyError):
        validate_family(G, [2])
    with pytest.raises(MackeyError):
        dress_solve(cyclic_marks_of("S3"), [1, 2], 3)


@given(st.sampled_from(["S3", "D4", "A4", "Q8", "C2xC4"]), st.sampled_from([2, 3, 5]), st.data())
def test_dress_solve_on_random_targets(name, p, data):
    M = cyclic_marks_of(name)
    z = data.draw(st.lists(st.integers(-3, 3), min_size=M.rank(M.top), max_size=M.rank(M.top)))
    out = dress_solve(M, hyperelementary_family(M.group, p), p, z)
    if isinstance(out, DressWitness):
        assert verify_witness(M, out)
    else:
        assert out.certificate.verify()


def test_witness_json_reports_denominators():
    M = cyclic_marks_of("S3")
    w = dress_solve(M, hyperelementary_family(M.group, 3), 3)
    doc = w.to_json(M)
    assert doc["denominators"] == [2] and doc["verified"]
    assert len(doc["transcript"]) == 3
