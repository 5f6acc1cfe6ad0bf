"""Shared fixtures: the corpus of small graded groupoids plus raw twins.

Library-built groupoids are session-scoped on purpose: the cohomology solver
caches per groupoid instance, so reusing one instance keeps the suite fast
and lets extension/equivalence machinery (which compares by identity) work
across tests.
"""

from __future__ import annotations

import pytest

import oracles as O
from twistbench import (
    FiniteGroupoid,
    GradedGroupoid,
    GroupTable,
    Morphism,
    conjugation_groupoid,
    delooping,
    pair_groupoid,
    point_groupoid,
    validate_groupoid,
)


def table_from(els, mul, unit) -> GroupTable:
    rows = [[mul[(x, y)] for y in els] for x in els]
    t = GroupTable.from_rows(els, rows)
    assert t.unit == unit
    return t


def graded_from_raw(raw) -> GradedGroupoid:
    """Build a graded groupoid straight from a raw oracle dict."""
    base = FiniteGroupoid(
        tuple(raw["objects"]),
        tuple(Morphism(n, s, t) for n, s, t in raw["mors"]),
        dict(raw["comp"]),
        dict(raw["ident"]),
        dict(raw["inv"]),
    )
    return GradedGroupoid(base, dict(raw["phi"]))


@pytest.fixture(scope="session")
def z2_table():
    return table_from(*O.cyclic(2))


@pytest.fixture(scope="session")
def z3_table():
    return table_from(*O.cyclic(3))


@pytest.fixture(scope="session")
def k4_table():
    return table_from(*O.klein_four())


@pytest.fixture(scope="session")
def s3_table():
    return table_from(*O.sym3())


@pytest.fixture(scope="session")
def point():
    return point_groupoid()


@pytest.fixture(scope="session")
def pair():
    return pair_groupoid(["a", "b"])


@pytest.fixture(scope="session")
def bz2_triv(z2_table):
    return delooping(z2_table)


@pytest.fixture(scope="session")
def bz2_id(z2_table):
    return delooping(z2_table, epsilon={"e": +1, "t": -1})


@pytest.fixture(scope="session")
def bk4(k4_table):
    return delooping(k4_table)


@pytest.fixture(scope="session")
def bs3(s3_table):
    return delooping(s3_table)


@pytest.fixture(scope="session")
def swap2():
    return pair_groupoid(["a", "b"], odd_pairs={("a", "b"), ("b", "a")})


@pytest.fixture(scope="session")
def z2_conj(z2_table):
    return conjugation_groupoid(z2_table)


@pytest.fixture(scope="session")
def s3_conj(s3_table):
    return conjugation_groupoid(s3_table)


@pytest.fixture(scope="session")
def corpus(point, pair, bz2_triv, bz2_id, bk4, bs3, swap2, z2_conj, s3_conj):
    """name -> groupoid, with names matching oracles.CORPUS_BUILDERS."""
    named = {
        "point": point,
        "pair": pair,
        "BZ2_triv": bz2_triv,
        "BZ2_id": bz2_id,
        "BK4": bk4,
        "BS3": bs3,
        "swap2": swap2,
        "Z2//Z2": z2_conj,
        "S3//S3": s3_conj,
    }
    assert set(named) == set(O.CORPUS_BUILDERS)
    for g in named.values():
        validate_groupoid(g)
    return named
