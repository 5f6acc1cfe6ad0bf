"""CLI behaviour: schemas, exit codes, determinism, round-trips."""

from __future__ import annotations

import json

import pytest

from twistbench.cli import main

POINT = {
    "format": 1,
    "objects": ["x"],
    "morphisms": [{"id": "i", "src": "x", "tgt": "x"}],
    "compose": [["i", "i", "i"]],
    "identities": {"x": "i"},
    "inverses": {"i": "i"},
}

BZ2_ID = {
    "format": 1,
    "group": {"elements": ["e", "t"], "table": [["e", "t"], ["t", "e"]], "epsilon": {"t": -1}},
}

BZ2_TRIV = {
    "format": 1,
    "group": {"elements": ["e", "t"], "table": [["e", "t"], ["t", "e"]]},
}

Z2_CONJ = {
    "format": 1,
    "action": {
        "elements": ["e", "t"],
        "table": [["e", "t"], ["t", "e"]],
        "points": ["e", "t"],
        "action": {"e|e": "e", "e|t": "e", "t|e": "t", "t|t": "t"},
    },
}

MULT_Z2 = {
    "format": 1,
    "group": {"elements": ["e", "t"], "table": [["e", "t"], ["t", "e"]]},
    "modulus": 2,
    "omega": {"t|t|t": 1},
}

REP_J_OPS = {
    "e": {"matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]},
    "t": {"matrix": [[[0, 0], [-1, 0]], [[1, 0], [0, 0]]], "antilinear": True},
}


@pytest.fixture
def ws(tmp_path):
    def write(name, doc=None, raw=None):
        p = tmp_path / name
        p.write_text(raw if raw is not None else json.dumps(doc))
        return str(p)

    write.dir = tmp_path
    return write


# ---------------------------------------------------------------------------
# validate: every kind, every exit code


def test_validate_groupoid_forms(ws, capsys):
    paths = [
        ws("point.json", POINT),
        ws("bz2_id.json", BZ2_ID),
        ws("z2_conj.json", Z2_CONJ),
    ]
    assert main(["validate", *paths]) == 0
    out = capsys.readouterr().out
    assert out.count("ok") == 3


def test_validate_law_violation_exits_1(ws, capsys):
    bad = dict(POINT, compose=[])
    p = ws("bad.json", bad)
    assert main(["validate", p]) == 1
    assert "missing composition" in capsys.readouterr().out


def test_validate_malformed_json_exits_2(ws, capsys):
    p = ws("broken.json", raw="{not json")
    assert main(["validate", p]) == 2


def test_validate_unknown_key_exits_2(ws):
    p = ws("extra.json", dict(POINT, extra=1))
    assert main(["validate", p]) == 2


def test_validate_duplicate_key_exits_2(ws):
    p = ws("dup.json", raw='{"format": 1, "objects": ["x"], "objects": ["y"]}')
    assert main(["validate", p]) == 2


def test_validate_dangling_reference_exits_2(ws):
    p = ws("ext.json", {"format": 1, "groupoid": "missing.json", "modulus": 4})
    assert main(["validate", p]) == 2


def test_validate_missing_file_exits_2(ws):
    assert main(["validate", str(ws.dir / "nope.json")]) == 2


def test_validate_severity_aggregation(ws, capsys):
    good = ws("point.json", POINT)
    bad = ws("bad.json", dict(POINT, compose=[]))
    broken = ws("broken.json", raw="{")
    assert main(["validate", good, bad]) == 1
    assert main(["validate", good, bad, broken]) == 2


def test_validate_json_report(ws, capsys):
    good = ws("point.json", POINT)
    assert main(["validate", good, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    entry = doc["files"][0] if "files" in doc else doc[0]
    assert entry["kind"] == "groupoid" and entry["valid"]


def test_validate_extension_modulus_paths(ws):
    ws("bz2_id.json", BZ2_ID)
    with_m = ws("ext.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    without_m = ws("ext2.json", {"format": 1, "groupoid": "bz2_id.json", "lambda": {"t|t": 2}})
    assert main(["validate", with_m]) == 0
    assert main(["validate", without_m]) == 2  # modulus required
    assert main(["validate", without_m, "--modulus", "4"]) == 0


def test_validate_cochain_file(ws, capsys):
    ws("bz2_id.json", BZ2_ID)
    ws("bz2_triv.json", BZ2_TRIV)
    ok = ws("c1.json", {
        "format": 1, "level": 1, "modulus": 4, "involution": "negation",
        "values": {"t": 1}, "groupoid": "bz2_id.json",
    })
    noncocycle = ws("c2.json", {
        "format": 1, "level": 1, "modulus": 4, "involution": "trivial",
        "values": {"t": 1}, "groupoid": "bz2_triv.json",
    })
    assert main(["validate", ok]) == 0
    assert "cocycle=True" in capsys.readouterr().out
    # a cochain need not be a cocycle to be well-formed; the report says which
    assert main(["validate", noncocycle]) == 0
    assert "cocycle=False" in capsys.readouterr().out


def test_validate_real_file(ws):
    base = {
        "format": 1,
        "groupoid": "point.json",
        "modulus": 4,
        "involution_map": {"objects": {"x": "x"}, "morphisms": {"i": "i"}},
    }
    ws("point.json", POINT)
    ok = ws("real_ok.json", {**base, "lambda": {"i|i": 1}, "beta": {"i": 2}})
    bad = ws("real_bad.json", {**base, "lambda": {"i|i": 1}, "beta": {"i": 0}})
    assert main(["validate", ok]) == 0
    assert main(["validate", bad]) == 1


def test_validate_dfm_file(ws, capsys):
    ws("bz2_triv.json", BZ2_TRIV)
    p = ws("dfm.json", {
        "format": 1, "groupoid": "bz2_triv.json", "modulus": 4,
        "d": {"*:+": 0, "*:-": 1},
    })
    assert main(["validate", p]) == 0
    assert main(["classify", p]) == 0
    out = capsys.readouterr().out
    assert "alpha" in out or "*:+" in out


def test_validate_rep_file(ws):
    ws("bz2_id.json", BZ2_ID)
    ws("ext_J.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    good = ws("rep.json", {"format": 1, "extension": "ext_J.json", "dims": {"*": [2, 0]}, "ops": REP_J_OPS})
    assert main(["validate", good]) == 0
    bad_ops = {
        "e": REP_J_OPS["e"],
        "t": {"matrix": REP_J_OPS["t"]["matrix"], "antilinear": False},
    }
    bad = ws("rep_bad.json", {"format": 1, "extension": "ext_J.json", "dims": {"*": [2, 0]}, "ops": bad_ops})
    assert main(["validate", bad]) == 1


def test_validate_cap_exceeded_exits_4(ws):
    ws("bz2_id.json", BZ2_ID)
    p = ws("ext.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    assert main(["validate", p, "--cap", "1"]) == 4


# ---------------------------------------------------------------------------
# cohomology


def test_cohomology_text_and_machine_line(ws, capsys):
    p = ws("bz2_id.json", BZ2_ID)
    assert main(["cohomology", p, "--degree", "2", "--modulus", "4",
                 "--involution", "negation"]) == 0
    out = capsys.readouterr().out
    assert "Z/2" in out
    machine = [l for l in out.splitlines() if l.startswith("machine:")]
    doc = json.loads(machine[0].split("machine:", 1)[1])
    assert doc["invariant_factors"] == [2]


def test_cohomology_json_format(ws, capsys):
    p = ws("point.json", POINT)
    assert main(["cohomology", p, "--degree", "0", "--modulus", "0"]) == 0
    out = capsys.readouterr().out
    assert "Z" in out
    assert main(["cohomology", p, "--degree", "0", "--modulus", "2",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["invariant_factors"] == [2]


def test_cohomology_degree_guard_exits_3(ws):
    p = ws("point.json", POINT)
    assert main(["cohomology", p, "--degree", "4", "--modulus", "2"]) == 3


# ---------------------------------------------------------------------------
# classify


def test_classify_extension(ws, capsys):
    ws("bz2_id.json", BZ2_ID)
    p = ws("ext_J.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    assert main(["classify", p, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["phase_class"] == [1]
    assert doc["phase_invariants"] == [2]
    assert doc["trivial"] is False
    q = ws("ext_triv.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4})
    assert main(["classify", q, "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["trivial"] is True


# ---------------------------------------------------------------------------
# transgress: determinism and round-trip


def test_transgress_deterministic_and_revalidates(ws, capsys):
    p = ws("mult.json", MULT_Z2)
    out1 = str(ws.dir / "out1.json")
    out2 = str(ws.dir / "out2.json")
    assert main(["transgress", p, "--output", out1]) == 0
    assert main(["transgress", p, "--output", out2]) == 0
    b1 = open(out1, "rb").read()
    assert b1 == open(out2, "rb").read()
    assert b1.endswith(b"\n")
    assert main(["validate", out1]) == 0
    capsys.readouterr()
    assert main(["count_simples", out1]) == 0
    assert "4" in capsys.readouterr().out
    assert main(["classify", out1, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["phase_invariants"] == [2, 2]
    assert sorted(doc["phase_class"]) == [0, 1]


def test_transgress_stdout_is_canonical_json(ws, capsys):
    p = ws("mult.json", MULT_Z2)
    assert main(["transgress", p]) == 0
    first = capsys.readouterr().out
    assert main(["transgress", p]) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first[first.index("{"):])
    assert doc["modulus"] == 2


def test_transgress_rejects_non_cocycle(ws):
    bad = dict(MULT_Z2, omega={"e|e|e": 1})
    p = ws("mult_bad.json", bad)
    assert main(["transgress", p]) == 1


# ---------------------------------------------------------------------------
# reps


def test_reps_validate_and_analyze(ws, capsys):
    ws("bz2_id.json", BZ2_ID)
    ws("ext_J.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    p = ws("rep.json", {"format": 1, "extension": "ext_J.json", "dims": {"*": [2, 0]}, "ops": REP_J_OPS})
    assert main(["reps", p]) == 0
    capsys.readouterr()
    assert main(["reps", p, "--analyze", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["valid"] is True
    assert doc["irreducible"] is True
    assert doc["endo_type"] == "H"


def test_reps_invalid_exits_1(ws):
    ws("bz2_id.json", BZ2_ID)
    ws("ext_J.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    bad_ops = {
        "e": REP_J_OPS["e"],
        "t": {"matrix": REP_J_OPS["t"]["matrix"], "antilinear": False},
    }
    p = ws("rep_bad.json", {"format": 1, "extension": "ext_J.json", "dims": {"*": [2, 0]}, "ops": bad_ops})
    assert main(["reps", p]) == 1


# ---------------------------------------------------------------------------
# count_simples


def test_count_simples_text(ws, capsys):
    ws("z2_conj.json", Z2_CONJ)
    p = ws("ext.json", {"format": 1, "groupoid": "z2_conj.json", "modulus": 2})
    assert main(["count_simples", p]) == 0
    out = capsys.readouterr().out
    assert "simple objects: 4" in out
    assert "gap" in out


def test_count_simples_graded_exits_3(ws):
    ws("bz2_id.json", BZ2_ID)
    p = ws("ext.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4})
    assert main(["count_simples", p]) == 3


# ---------------------------------------------------------------------------
# compare


def test_compare_weak_equivalence_verdicts(ws, capsys):
    ws("bz2_id.json", BZ2_ID)
    ws("point.json", POINT)
    ident = ws("id.json", {"format": 1, "functor": {
        "source": "bz2_id.json", "target": "bz2_id.json",
        "objects": {"*": "*"}, "morphisms": {"e": "e", "t": "t"}}})
    collapse = ws("collapse.json", {"format": 1, "functor": {
        "source": "bz2_id.json", "target": "point.json",
        "objects": {"*": "x"}, "morphisms": {"e": "i", "t": "i"}}})
    assert main(["compare", ident]) == 0
    out = capsys.readouterr().out
    assert "yes" in out
    assert main(["compare", collapse]) == 0
    out = capsys.readouterr().out
    assert "no" in out and "non-injectively" in out


def test_compare_transports_classes(ws, capsys):
    ws("bz2_id.json", BZ2_ID)
    ident = ws("id.json", {"format": 1, "functor": {
        "source": "bz2_id.json", "target": "bz2_id.json",
        "objects": {"*": "*"}, "morphisms": {"e": "e", "t": "t"}}})
    ext = ws("ext_J.json", {"format": 1, "groupoid": "bz2_id.json", "modulus": 4, "lambda": {"t|t": 2}})
    assert main(["compare", ident, ext, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["weak_equivalence"] is True
    assert doc["pullback"]["target_class"]["phase_class"] == [1]
    assert doc["pullback"]["pullback_class"]["phase_class"] == [1]
    assert main(["compare", ident, ext, ext, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pullback"]["classes_identified"] is True


def test_compare_inline_groupoids_lack_shared_identity(ws):
    # inline copies are distinct instances: operations needing one groupoid
    # must be given the same path, otherwise the request is unsupported
    inline = json.loads(json.dumps(BZ2_ID))
    ident = ws("id.json", {"format": 1, "functor": {
        "source": inline, "target": inline,
        "objects": {"*": "*"}, "morphisms": {"e": "e", "t": "t"}}})
    ext = ws("ext.json", {"format": 1, "groupoid": inline, "modulus": 4, "lambda": {"t|t": 2}})
    assert main(["compare", ident, ext]) == 3
