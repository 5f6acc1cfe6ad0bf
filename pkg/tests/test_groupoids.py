"""Groupoid layer: constructors, validation, functors, covers, involutions."""

from __future__ import annotations

import pytest

import oracles as O
from conftest import graded_from_raw, table_from
from twistbench import (
    CapExceeded,
    FiniteGroupoid,
    GradedGroupoid,
    GroupTable,
    GroupoidError,
    GroupoidFunctor,
    Morphism,
    NatTransformation,
    RealStructure,
    as_graded,
    common_refinement,
    compose_functors,
    covering_groupoid,
    default_modulus,
    delooping,
    action_groupoid,
    discrete_groupoid,
    enumeration_cap,
    even_part,
    fibre_product,
    functor_is_even,
    groupoids_isomorphic,
    identity_functor,
    is_weak_equivalence,
    nat_is_even,
    nerve,
    pair_groupoid,
    phi_double_cover,
    semidirect_with_involution,
    validate_functor,
    validate_groupoid,
    validate_group_table,
    validate_nat,
    validate_real_structure,
    validate_sign_character,
)


# ---------------------------------------------------------------------------
# corpus construction agrees with the raw, library-independent builders


def test_corpus_validates(corpus):
    for g in corpus.values():
        validate_groupoid(g)


@pytest.mark.parametrize("name", sorted(O.CORPUS_BUILDERS))
def test_constructors_match_raw_builders(corpus, name):
    g = corpus[name]
    raw = O.CORPUS_BUILDERS[name]()
    assert sorted(g.objects) == sorted(raw["objects"])
    assert sorted(m.name for m in g.morphisms) == sorted(n for n, _, _ in raw["mors"])
    for n, s, t in raw["mors"]:
        assert g.src(n) == s and g.tgt(n) == t
        assert g.grade(n) == raw["phi"][n]
        assert g.inv(n) == raw["inv"][n]
    assert dict(g.base.compose) == raw["comp"]
    assert {x: g.id_of(x) for x in g.objects} == raw["ident"]


@pytest.mark.parametrize("name", sorted(O.CORPUS_BUILDERS))
def test_raw_twins_are_isomorphic(corpus, name):
    twin = graded_from_raw(O.CORPUS_BUILDERS[name]())
    validate_groupoid(twin)
    assert groupoids_isomorphic(corpus[name], twin) is not None


def test_nonisomorphic_pairs(corpus):
    assert groupoids_isomorphic(corpus["BZ2_triv"], corpus["BK4"]) is None
    assert groupoids_isomorphic(corpus["point"], corpus["pair"]) is None
    # same underlying groupoid, different grading
    assert groupoids_isomorphic(corpus["BZ2_triv"], corpus["BZ2_id"]) is None


# ---------------------------------------------------------------------------
# validation catches every axiom violation with a pointed message


def _loop(name="g", obj="x"):
    return Morphism(name, obj, obj)


def test_validate_rejects_reserved_name():
    base = FiniteGroupoid(
        ("x",), (_loop("a|b"),), {("a|b", "a|b"): "a|b"}, {"x": "a|b"}, {"a|b": "a|b"}
    )
    with pytest.raises(GroupoidError, match="reserved"):
        validate_groupoid(GradedGroupoid(base, {"a|b": +1}))


def test_validate_rejects_duplicate_morphisms():
    base = FiniteGroupoid(
        ("x",), (_loop("e"), _loop("e")), {("e", "e"): "e"}, {"x": "e"}, {"e": "e"}
    )
    with pytest.raises(GroupoidError, match="duplicate morphism"):
        validate_groupoid(GradedGroupoid(base, {"e": +1}))


def test_validate_rejects_missing_identity():
    base = FiniteGroupoid(("x",), (_loop("e"),), {("e", "e"): "e"}, {}, {"e": "e"})
    with pytest.raises(GroupoidError, match="no identity"):
        validate_groupoid(GradedGroupoid(base, {"e": +1}))


def test_validate_rejects_missing_composition():
    base = FiniteGroupoid(("x",), (_loop("e"),), {}, {"x": "e"}, {"e": "e"})
    with pytest.raises(GroupoidError, match="missing composition"):
        validate_groupoid(GradedGroupoid(base, {"e": +1}))


def test_validate_rejects_endpoint_mismatch():
    mors = (Morphism("e", "x", "x"), Morphism("f", "x", "y"))
    comp = {("e", "e"): "e", ("f", "e"): "f", ("e", "f"): "f"}  # (e, f) illegal
    base = FiniteGroupoid(("x", "y"), mors, comp, {"x": "e", "y": "f"}, {"e": "e", "f": "f"})
    with pytest.raises(GroupoidError):
        validate_groupoid(GradedGroupoid(base, {"e": +1, "f": +1}))


def test_validate_rejects_bad_inverse():
    els, mul, unit = O.cyclic(3)
    raw = O.raw_delooping(els, mul, unit)
    raw["inv"] = {x: x for x in els}  # c1 is not its own inverse
    with pytest.raises(GroupoidError, match="inverse"):
        validate_groupoid(graded_from_raw(raw))


def test_validate_rejects_nonassociative():
    els = ("e", "a")
    mors = tuple(Morphism(x, "*", "*") for x in els)
    comp = {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "e"}
    base = FiniteGroupoid(("*",), mors, comp, {"*": "e"}, {"e": "e", "a": "a"})
    bad = dict(comp)
    bad[("a", "a")] = "a"  # breaks unit/associativity structure
    base_bad = FiniteGroupoid(("*",), mors, bad, {"*": "e"}, {"e": "e", "a": "a"})
    validate_groupoid(GradedGroupoid(base, {"e": +1, "a": +1}))
    with pytest.raises(GroupoidError):
        validate_groupoid(GradedGroupoid(base_bad, {"e": +1, "a": +1}))


def test_validate_rejects_bad_grading():
    els, mul, unit = O.cyclic(2)
    raw = O.raw_delooping(els, mul, unit)
    g = graded_from_raw(raw)
    with pytest.raises(GroupoidError, match="grade"):
        validate_groupoid(GradedGroupoid(g.base, {"e": +1, "t": 0}))
    with pytest.raises(GroupoidError, match="odd"):
        validate_groupoid(GradedGroupoid(g.base, {"e": -1, "t": -1}))


def test_validate_rejects_nonmultiplicative_grading():
    els, mul, unit = O.cyclic(3)
    raw = O.raw_delooping(els, mul, unit)
    g = graded_from_raw(raw)
    with pytest.raises(GroupoidError, match="multiplicative"):
        validate_groupoid(GradedGroupoid(g.base, {"e": +1, "c1": -1, "c2": +1}))


# ---------------------------------------------------------------------------
# group tables and sign characters


def test_group_table_from_rows_roundtrip(s3_table):
    els, mul, unit = O.sym3()
    assert s3_table.unit == unit
    for x in els:
        assert mul[(x, s3_table.inverse(x))] == unit


def test_group_table_rejects_bad_shapes():
    with pytest.raises(GroupoidError, match="square"):
        GroupTable.from_rows(["e", "t"], [["e", "t"]])
    with pytest.raises(GroupoidError, match="unit"):
        GroupTable.from_rows(["a", "b"], [["b", "a"], ["b", "a"]])


def test_group_table_rejects_nonassociative():
    # a "multiplication" with unit e but no associativity
    els = ["e", "a", "b"]
    rows = [["e", "a", "b"], ["a", "e", "a"], ["b", "b", "e"]]
    with pytest.raises(GroupoidError):
        GroupTable.from_rows(els, rows)


def test_sign_character_validation(z2_table, z3_table):
    validate_sign_character(z2_table, {"e": +1, "t": -1})
    with pytest.raises(GroupoidError, match="multiplicative"):
        validate_sign_character(z2_table, {"e": -1, "t": -1})
    with pytest.raises(GroupoidError, match="undefined"):
        validate_sign_character(z2_table, {"e": +1})
    # Z3 has no nontrivial sign character
    with pytest.raises(GroupoidError):
        validate_sign_character(z3_table, {"e": +1, "c1": -1, "c2": +1})


# ---------------------------------------------------------------------------
# constructors


def test_delooping_shape(bs3):
    assert bs3.objects == ("*",)
    assert len(bs3.morphisms) == 6
    assert len(bs3.isotropy("*")) == 6
    assert bs3.is_even()


def test_action_groupoid_rejects_broken_action(z2_table):
    act = {("p", "e"): "p", ("p", "t"): "q", ("q", "e"): "q", ("q", "t"): "q"}
    with pytest.raises(GroupoidError, match="action"):
        action_groupoid(z2_table, ("p", "q"), act)


def test_action_groupoid_orientation(z2_table):
    # the one-point action recovers the delooping's composition table
    act = {("*", "e"): "*", ("*", "t"): "*"}
    g = action_groupoid(z2_table, ("*",), act)
    validate_groupoid(g)
    assert g.comp("t@*", "t@*") == "e@*"


def test_conjugation_groupoid_memoized(z2_table, z2_conj):
    from twistbench import conjugation_groupoid

    assert conjugation_groupoid(z2_table) is z2_conj


def test_conjugation_components(z2_conj, s3_conj):
    # conjugation on an abelian group is trivial: one component per element
    assert len(z2_conj.components()) == 2
    # S3 has three conjugacy classes
    assert len(s3_conj.components()) == 3


def test_pair_point_discrete(pair, point, swap2):
    assert len(pair.components()) == 1
    assert pair.isotropy("a") == [pair.id_of("a")]
    assert point.objects == ("*",)
    d = discrete_groupoid(["p", "q", "r"])
    validate_groupoid(d)
    assert len(d.components()) == 3
    assert not swap2.is_even()
    assert swap2.grade("a<b") == -1 and swap2.grade("a<a") == +1


def test_as_graded_memoized(bz2_triv):
    assert as_graded(bz2_triv) is bz2_triv
    base = bz2_triv.base
    assert as_graded(base) is as_graded(base)
    assert as_graded(base).is_even()


# ---------------------------------------------------------------------------
# nerve sizes and the enumeration cap


def test_nerve_counts(bs3, pair, corpus):
    assert len(nerve(bs3, 0)) == 1
    assert len(nerve(bs3, 1)) == 6
    assert len(nerve(bs3, 2)) == 36
    assert len(nerve(pair, 3)) == 2 ** 4
    # action groupoid: |G|^k * |X|
    assert len(nerve(corpus["S3//S3"], 2)) == 6 * 6 * 6


def test_nerve_cap(bs3):
    with pytest.raises(CapExceeded, match="cap"):
        nerve(bs3, 2, cap=10)


def test_enumeration_cap_env(monkeypatch):
    monkeypatch.delenv("TWISTBENCH_CAP", raising=False)
    assert enumeration_cap(None) == 20000
    assert enumeration_cap(7) == 7
    monkeypatch.setenv("TWISTBENCH_CAP", "123")
    assert enumeration_cap(None) == 123


# ---------------------------------------------------------------------------
# functors and weak equivalences


def test_identity_functor_is_weak_equivalence(corpus):
    for g in corpus.values():
        f = identity_functor(g)
        validate_functor(f)
        assert functor_is_even(f)
        assert is_weak_equivalence(f).ok


def test_collapse_is_not_weak_equivalence(bz2_triv, point):
    f = GroupoidFunctor(bz2_triv, point, {"*": "*"}, {"e": "*<*", "t": "*<*"})
    validate_functor(f)
    rep = is_weak_equivalence(f)
    assert not rep.ok
    assert "non-injectively" in rep.witness


def test_point_into_pair_is_weak_equivalence(point, pair):
    f = GroupoidFunctor(point, pair, {"*": "a"}, {"*<*": "a<a"})
    validate_functor(f)
    assert is_weak_equivalence(f).ok


def test_point_into_discrete_not_essentially_surjective(point):
    d = discrete_groupoid(["p", "q"])
    f = GroupoidFunctor(point, d, {"*": "p"}, {"*<*": "p<p"})
    rep = is_weak_equivalence(f)
    assert not rep.essentially_surjective
    assert "not isomorphic" in rep.witness


def test_non_full_functor_detected(point, bz2_triv):
    f = GroupoidFunctor(point, bz2_triv, {"*": "*"}, {"*<*": "e"})
    rep = is_weak_equivalence(f)
    assert not rep.fully_faithful
    assert "onto" in rep.witness


def test_validate_functor_rejects_noncommuting(bz2_triv, point):
    f = GroupoidFunctor(bz2_triv, bz2_triv, {"*": "*"}, {"e": "t", "t": "e"})
    with pytest.raises(GroupoidError):
        validate_functor(f)
    els, mul, unit = O.cyclic(4)
    bz4 = delooping(table_from(els, mul, unit))
    g = GroupoidFunctor(bz4, bz2_triv, {"*": "*"},
                        {"e": "e", "c1": "t", "c2": "t", "c3": "t"})
    with pytest.raises(GroupoidError):
        validate_functor(g)


def test_compose_functors(point, pair, bz2_triv):
    f = GroupoidFunctor(point, pair, {"*": "a"}, {"*<*": "a<a"})
    g = GroupoidFunctor(pair, point, {"a": "*", "b": "*"},
                        {m.name: "*<*" for m in pair.morphisms})
    h = compose_functors(g, f)
    validate_functor(h)
    assert h.source is point and h.target is point
    with pytest.raises(GroupoidError):
        compose_functors(f, f)  # target of f is not source of f


def test_nat_transformation(bz2_triv):
    f = identity_functor(bz2_triv)
    n = NatTransformation(f, f, {"*": "e"})
    validate_nat(n)
    assert nat_is_even(n)
    bad = NatTransformation(f, f, {"*": "t"})
    # t conjugates e<->t trivially on an abelian group, so this is natural too
    validate_nat(bad)


# ---------------------------------------------------------------------------
# covers, double covers, fibre products, common refinements


def test_covering_projection_is_weak_equivalence(bz2_id, pair):
    cover, proj = covering_groupoid(bz2_id, ("u", "v", "w"), {"u": "*", "v": "*", "w": "*"})
    validate_groupoid(cover)
    validate_functor(proj)
    assert is_weak_equivalence(proj).ok
    assert len(cover.morphisms) == 9 * 2
    # grading is pulled back
    assert cover.grade("u:t:v") == -1

    c2, p2 = covering_groupoid(pair, ("a1", "a2", "b1"), {"a1": "a", "a2": "a", "b1": "b"})
    validate_groupoid(c2)
    assert is_weak_equivalence(p2).ok


def test_covering_rejects_bad_fibre(bz2_id):
    with pytest.raises(GroupoidError, match="over"):
        covering_groupoid(bz2_id, ("u",), {"u": "nope"})


def test_phi_double_cover_odd_case(bz2_id):
    cover, proj = phi_double_cover(bz2_id)
    validate_groupoid(cover)
    validate_functor(proj)
    assert len(cover.objects) == 2 and len(cover.morphisms) == 4
    # odd loop becomes a sheet exchange; the cover is connected
    assert len(cover.components()) == 1
    assert cover.src("t:+") == "*:+" and cover.tgt("t:+") == "*:-"
    assert cover.grade("t:+") == -1


def test_phi_double_cover_even_case(bz2_triv):
    cover, proj = phi_double_cover(bz2_triv)
    validate_groupoid(cover)
    assert len(cover.components()) == 2
    assert is_weak_equivalence(proj).ok is False  # hom sets split over sheets


def test_fibre_product_of_covers(bz2_triv):
    c1, p1 = covering_groupoid(bz2_triv, ("u", "v"), {"u": "*", "v": "*"})
    c2, p2 = covering_groupoid(bz2_triv, ("w",), {"w": "*"})
    prod, q1, q2 = fibre_product(p1, p2)
    validate_groupoid(prod)
    validate_functor(q1)
    validate_functor(q2)
    assert is_weak_equivalence(q1).ok and is_weak_equivalence(q2).ok
    assert compose_functors(p1, q1).objects == compose_functors(p2, q2).objects


def test_common_refinement(bz2_id):
    cover1 = (("u", "v"), {"u": "*", "v": "*"})
    cover2 = (("w",), {"w": "*"})
    joint, cmp_functor, prod = common_refinement(bz2_id, cover1, cover2)
    validate_groupoid(joint)
    validate_functor(cmp_functor)
    assert cmp_functor.target is prod
    assert is_weak_equivalence(cmp_functor).ok


# ---------------------------------------------------------------------------
# real structures and the semidirect double


def test_real_structure_swap(pair):
    tau = GroupoidFunctor(
        pair, pair, {"a": "b", "b": "a"},
        {"a<a": "b<b", "b<b": "a<a", "a<b": "b<a", "b<a": "a<b"},
    )
    r = RealStructure(pair, tau)
    validate_real_structure(r)
    doubled, embed = semidirect_with_involution(r)
    validate_groupoid(doubled)
    validate_functor(embed)
    assert functor_is_even(embed)
    assert len(doubled.morphisms) == 8
    assert not doubled.is_even()
    ev, incl = even_part(doubled)
    validate_groupoid(ev)
    assert groupoids_isomorphic(ev, pair) is not None


def test_real_structure_identity(bz2_triv):
    r = RealStructure(bz2_triv, identity_functor(bz2_triv))
    validate_real_structure(r)
    doubled, _ = semidirect_with_involution(r)
    validate_groupoid(doubled)
    # doubling BZ2 by the trivial involution gives B(Z2 x Z2) with grading
    assert len(doubled.morphisms) == 4
    assert len(doubled.isotropy(doubled.objects[0])) == 4


def test_real_structure_rejects_non_involution(pair):
    # a functor whose square is not the identity cannot be a real structure
    els, mul, unit = O.cyclic(4)
    t = table_from(els, mul, unit)
    g = delooping(t)
    shift = {x: mul[(x, "c1")] for x in els}
    f = GroupoidFunctor(g, g, {"*": "*"}, shift)
    with pytest.raises(GroupoidError):
        validate_real_structure(RealStructure(g, f))


def test_even_part_of_swap2(swap2):
    ev, incl = even_part(swap2)
    validate_groupoid(ev)
    assert len(ev.morphisms) == 2
    assert all(ev.is_identity(m.name) for m in ev.morphisms)
    validate_functor(incl)


# ---------------------------------------------------------------------------
# numerics helpers


def test_default_modulus(point, bz2_triv, bs3):
    assert default_modulus(point) == 2
    assert default_modulus(bz2_triv) == 4
    assert default_modulus(bs3) == 12
