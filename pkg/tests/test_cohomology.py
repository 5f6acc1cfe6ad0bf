"""Exact twisted cohomology: differentials, Smith forms, solver coordinates."""

from __future__ import annotations

import numpy as np
import pytest

import oracles as O
from twistbench import (
    Cochain,
    CoefficientModule,
    GroupoidFunctor,
    NotACocycle,
    UnsupportedInput,
    cohomology_group,
    differential_matrix,
    graded_differential,
    identity_functor,
    nerve,
    phi_double_cover,
    pullback_cochain,
    smith_normal_form,
)

Z2T = CoefficientModule(2, "trivial")
Z4N = CoefficientModule(4, "negation")
Z4T = CoefficientModule(4, "trivial")
ZZ = CoefficientModule(0, "trivial")


# ---------------------------------------------------------------------------
# coefficient modules and cochain arithmetic


def test_coefficient_module_guards():
    with pytest.raises(ValueError, match="modulus"):
        CoefficientModule(-1, "trivial")
    with pytest.raises(ValueError, match="involution"):
        CoefficientModule(2, "conjugation")
    assert Z4N.act(-1, 3) == -3
    assert Z4N.act(+1, 3) == 3
    assert Z2T.act(-1, 1) == 1
    assert Z4N.normalize(-1) == 3
    assert ZZ.normalize(-1) == -1


def test_cochain_from_mapping_accepts_str_and_tuple(bz2_id):
    c = Cochain.from_mapping(bz2_id, 1, Z4N, {"t": 3})
    assert c.value("t") == 3 and c.value(("e",)) == 0
    d = Cochain.from_mapping(bz2_id, 2, Z4N, {("t", "t"): 2})
    assert d.value(("t", "t")) == 2
    assert d.as_mapping() == {("t", "t"): 2}


def test_cochain_from_mapping_rejects_non_nerve_keys(bz2_id, pair):
    with pytest.raises(ValueError, match="composable"):
        Cochain.from_mapping(bz2_id, 1, Z4N, {"nope": 1})
    with pytest.raises(ValueError, match="composable"):
        # (a<b, a<b) is not composable in the pair groupoid
        Cochain.from_mapping(pair, 2, Z2T, {("a<b", "a<b"): 1})


def test_cochain_arithmetic(bz2_id):
    a = Cochain.from_mapping(bz2_id, 1, Z4N, {"t": 3})
    b = Cochain.from_mapping(bz2_id, 1, Z4N, {"t": 2, "e": 1})
    assert (a + b).value("t") == 1  # values are kept normalized mod m
    assert (a - b).value("e") == 3
    assert (-a).value("t") == 1
    assert a.scale(2).value("t") == 2
    assert Cochain.zero(bz2_id, 1, Z4N).is_zero()
    with pytest.raises(ValueError, match="different"):
        a + Cochain.zero(bz2_id, 1, Z4T)


# ---------------------------------------------------------------------------
# the twisted differential against the hand-rolled oracle formulas


@pytest.mark.parametrize("name", sorted(O.CORPUS_BUILDERS))
@pytest.mark.parametrize("m,inv", [(2, "trivial"), (4, "negation")])
def test_differential_matches_oracle_formulas(corpus, name, m, inv):
    g = corpus[name]
    raw = O.CORPUS_BUILDERS[name]()
    coeff = CoefficientModule(m, inv)
    rng = np.random.default_rng(hash((name, m, inv)) % 2**32)

    f0 = {x: int(rng.integers(0, m)) for x in raw["objects"]}
    c0 = Cochain.from_mapping(g, 0, coeff, f0)
    d0 = graded_differential(c0)
    want0 = O.oracle_d0(raw, m, inv, f0)
    for key in nerve(g, 1):
        assert d0.value(key) % m == want0[key]

    f1 = {mm[0]: int(rng.integers(0, m)) for mm in raw["mors"]}
    c1 = Cochain.from_mapping(g, 1, coeff, f1)
    d1 = graded_differential(c1)
    want1 = O.oracle_d1(raw, m, inv, f1)
    for key in nerve(g, 2):
        assert d1.value(key) % m == want1[key]

    f2 = {t: int(rng.integers(0, m)) for t in O.raw_tuples(raw, 2)}
    c2 = Cochain.from_mapping(g, 2, coeff, f2)
    d2 = graded_differential(c2)
    want2 = O.oracle_d2(raw, m, inv, f2)
    for key in nerve(g, 3):
        assert d2.value(key) % m == want2[key]


def test_differential_squares_to_zero_samples(corpus):
    for name in ("BZ2_id", "swap2", "Z2//Z2"):
        g = corpus[name]
        for coeff in (Z2T, Z4N):
            for level in (0, 1):
                keys = nerve(g, level)
                for i in range(len(keys)):
                    delta = Cochain.from_mapping(g, level, coeff, {keys[i]: 1})
                    dd = graded_differential(graded_differential(delta))
                    assert all(coeff.normalize(v) == 0 for v in dd.values)


def test_differential_matrix_shapes(bs3):
    for level in (0, 1, 2):
        dm = differential_matrix(bs3, level, Z4N, None, False)
        assert dm.matrix.shape == (len(nerve(bs3, level + 1)), len(nerve(bs3, level)))
        assert list(dm.col_keys) == list(nerve(bs3, level))


# ---------------------------------------------------------------------------
# Smith normal form


def test_smith_known_matrix():
    s = smith_normal_form(np.array([[2, 4], [6, 8]], dtype=np.int64))
    assert s.diagonal() == [2, 4]


def test_smith_decomposition_properties():
    rng = np.random.default_rng(7)
    for _ in range(25):
        a = rng.integers(-9, 10, size=rng.integers(1, 5, size=2))
        s = smith_normal_form(a)
        u, v = np.array(s.U, dtype=object), np.array(s.V, dtype=object)
        prod = u @ a.astype(object) @ v
        d = s.diagonal()
        want = np.zeros_like(prod)
        for i, di in enumerate(d):
            want[i, i] = di
        assert (prod == want).all()
        assert abs(round(float(np.linalg.det(u.astype(float))))) == 1
        assert abs(round(float(np.linalg.det(v.astype(float))))) == 1
        for i in range(len(d) - 1):
            if d[i + 1] != 0:
                assert d[i] != 0 and d[i + 1] % d[i] == 0


# ---------------------------------------------------------------------------
# cohomology groups: frozen orders, brute-force agreement, coordinates


def test_frozen_expected_orders(corpus):
    for key, want in O.EXPECTED.items():
        if key[0] != "H":
            continue
        _, name, n, m, inv = key
        got = cohomology_group(corpus[name], n, CoefficientModule(m, inv))
        assert got.order() == want, key


@pytest.mark.parametrize("name", ["point", "pair", "BZ2_triv", "BZ2_id", "swap2", "Z2//Z2"])
@pytest.mark.parametrize("m,inv", [(2, "trivial"), (3, "trivial"), (4, "negation")])
def test_brute_force_agreement_low_degrees(corpus, name, m, inv):
    g = corpus[name]
    raw = O.CORPUS_BUILDERS[name]()
    for n in (0, 1):
        if m ** len(O.raw_tuples(raw, n)) > 2**14:
            continue
        want = O.brute_cohomology_order(raw, n, m, inv)
        assert cohomology_group(g, n, CoefficientModule(m, inv)).order() == want


@pytest.mark.parametrize("name", ["point", "BZ2_triv", "BZ2_id"])
def test_brute_force_agreement_degree_two(corpus, name):
    raw = O.CORPUS_BUILDERS[name]()
    for m, inv in ((2, "trivial"), (4, "negation")):
        want = O.brute_cohomology_order(raw, 2, m, inv)
        got = cohomology_group(corpus[name], 2, CoefficientModule(m, inv))
        assert got.order() == want


def test_component_counting_in_degree_zero(corpus):
    assert cohomology_group(corpus["Z2//Z2"], 0, Z2T).group == (2, 2)
    assert cohomology_group(corpus["S3//S3"], 0, Z2T).group == (2, 2, 2)
    # on the odd pair groupoid, H^0 with negation sees f(a) = -f(b)
    assert cohomology_group(corpus["swap2"], 0, Z4N).group == (4,)


def test_integer_coefficients(point, bz2_triv):
    assert cohomology_group(point, 0, ZZ).group == (0,)
    assert cohomology_group(bz2_triv, 1, ZZ).group == ()
    assert cohomology_group(bz2_triv, 2, ZZ).group == (2,)
    free = cohomology_group(point, 0, ZZ)
    with pytest.raises(UnsupportedInput, match="infinite"):
        free.order()
    with pytest.raises(UnsupportedInput):
        list(free.classes())
    with pytest.raises(UnsupportedInput):
        next(free.cocycles())


def test_class_coordinates_roundtrip(corpus):
    for name, n, coeff in (("BK4", 2, Z2T), ("BZ2_id", 2, Z4N), ("BZ2_triv", 1, Z2T)):
        sol = cohomology_group(corpus[name], n, coeff)
        seen = set()
        for cls in sol.classes():
            rep = sol.representative(cls)
            sol.check_cocycle(rep)
            assert sol.reduce_to_class(rep) == cls
            seen.add(cls)
        assert len(seen) == sol.order()


def test_is_cohomologous_returns_working_witness(bz2_id):
    sol = cohomology_group(bz2_id, 2, Z4N)
    x = sol.representative(next(iter(sol.classes())))
    eta = Cochain.from_mapping(bz2_id, 1, Z4N, {"t": 1, "e": 2})
    y = x + graded_differential(eta)
    ok, wit = sol.is_cohomologous(x, y)
    assert ok
    diff = graded_differential(wit)
    assert all(Z4N.normalize(a - b) == 0 for a, b in zip((y - x).values, diff.values))


def test_is_cohomologous_rejects_distinct_classes(bz2_id):
    sol = cohomology_group(bz2_id, 2, Z4N)
    classes = list(sol.classes())
    assert len(classes) == 2
    a, b = (sol.representative(c) for c in classes)
    ok, wit = sol.is_cohomologous(a, b)
    assert not ok and wit is None


def test_is_coboundary(bz2_id):
    sol = cohomology_group(bz2_id, 2, Z4N)
    eta = Cochain.from_mapping(bz2_id, 1, Z4N, {"t": 3})
    ok, wit = sol.is_coboundary(graded_differential(eta))
    assert ok and wit is not None


def test_check_cocycle_rejects(bz2_triv):
    sol = cohomology_group(bz2_triv, 1, Z4T)
    bad = Cochain.from_mapping(bz2_triv, 1, Z4T, {"t": 1})
    # (d bad)(t, t) = bad(t) - bad(e) + bad(t) = 2 mod 4
    with pytest.raises(NotACocycle):
        sol.check_cocycle(bad)
    with pytest.raises(ValueError):
        sol.check_cocycle(Cochain.zero(bz2_triv, 2, Z4T))  # wrong level


def test_cocycle_enumeration_counts(corpus):
    raw = O.CORPUS_BUILDERS["BZ2_triv"]()
    sol = cohomology_group(corpus["BZ2_triv"], 1, Z2T)
    got = list(sol.cocycles())
    keys = [mm[0] for mm in raw["mors"]]
    want = [
        f
        for f in O._all_maps(keys, 2)
        if all(v == 0 for v in O.oracle_d1(raw, 2, "trivial", f).values())
    ]
    assert len(got) == len(want)
    as_sets = {tuple(sorted(c.as_mapping().items())) for c in got}
    assert len(as_sets) == len(got)  # each exactly once
    for c in got:
        sol.check_cocycle(c)


def test_normalized_complex_gives_same_groups(corpus):
    for name, n, coeff in (
        ("BZ2_id", 1, Z4N),
        ("BZ2_id", 2, Z4N),
        ("BK4", 2, Z2T),
        ("swap2", 1, Z4N),
        ("Z2//Z2", 2, Z4T),
    ):
        full = cohomology_group(corpus[name], n, coeff)
        norm = cohomology_group(corpus[name], n, coeff, normalized=True)
        assert full.group == norm.group
        with pytest.raises(UnsupportedInput):
            norm.reduce_to_class(Cochain.zero(corpus[name], n, coeff))


def test_degree_guard(bz2_id):
    with pytest.raises(ValueError, match="degree"):
        cohomology_group(bz2_id, -1, Z2T)


# ---------------------------------------------------------------------------
# pullbacks


def test_pullback_along_identity(bz2_id):
    lam = Cochain.from_mapping(bz2_id, 2, Z4N, {("t", "t"): 2})
    back = pullback_cochain(identity_functor(bz2_id), lam)
    assert back.values == lam.values


def test_pullback_of_cocycle_is_cocycle(bz2_id):
    cover, proj = phi_double_cover(bz2_id)
    lam = Cochain.from_mapping(bz2_id, 2, Z4N, {("t", "t"): 2})
    cohomology_group(bz2_id, 2, Z4N).check_cocycle(lam)
    up = pullback_cochain(proj, lam)
    cohomology_group(cover, 2, Z4N).check_cocycle(up)
    assert up.value(("t:-", "t:+")) == 2


def test_pullback_commutes_with_differential(bz2_id):
    cover, proj = phi_double_cover(bz2_id)
    eta = Cochain.from_mapping(bz2_id, 1, Z4N, {"t": 1, "e": 3})
    a = pullback_cochain(proj, graded_differential(eta))
    b = graded_differential(pullback_cochain(proj, eta))
    assert a.values == b.values
