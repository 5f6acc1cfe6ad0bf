"""Versioned JSON file formats.

One reader/writer pair per object kind (groupoid, cochain, extension,
multiplicative twisting, real central extension, double-cover twisting,
representation, functor).  Every file carries "format": 1.  The error split
is fixed: `FileFormatError` means the file cannot be turned into a well-typed
object at all (syntax, wrong shapes, unknown keys, references to undeclared
names, non-composable tuple keys); mathematical law violations are left to
the validate_* functions so callers can distinguish the two.

Groupoid references inside other files are path-or-inline: a string is a
path relative to the referencing file, an object is an inline groupoid
document.  Path loads are cached per (file identity, mtime), so several
files referencing one groupoid path share a single in-memory instance —
required by operations that compare twistings on one groupoid.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .cohomology import Cochain, CoefficientModule
from .groupoids import (
    FiniteGroupoid,
    GradedGroupoid,
    GroupoidFunctor,
    GroupTable,
    Morphism,
    RealStructure,
    action_groupoid,
    as_graded,
    delooping,
)
from .reps import MorphismOp, TwistedMorphismData
from .twistings import (
    DFMTwisting,
    MultiplicativeTwisting,
    RealCentralExtension,
    TwistedExtension,
)

__all__ = [
    "FORMAT_VERSION",
    "FileFormatError",
    "read_json_file",
    "detect_kind",
    "load_path",
    "load_document",
    "load_groupoid_doc",
    "load_cochain_doc",
    "load_extension_doc",
    "load_multiplicative_doc",
    "load_real_doc",
    "load_dfm_doc",
    "load_rep_doc",
    "load_functor_doc",
    "groupoid_to_doc",
    "extension_to_doc",
    "cochain_to_doc",
    "canonical_json",
    "save_doc",
    "split_key",
    "join_key",
]

FORMAT_VERSION = 1


class FileFormatError(ValueError):
    """The file content does not describe a well-typed object."""


# ---------------------------------------------------------------------------
# primitive checks


def _no_dupes(pairs):
    seen = set()
    for k, _ in pairs:
        if k in seen:
            raise FileFormatError(f"duplicate key {k!r} in one JSON object")
        seen.add(k)
    return dict(pairs)


def read_json_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh, object_pairs_hook=_no_dupes)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level must be a JSON object")
    return doc


def _as_map(v, what) -> dict:
    if not isinstance(v, dict):
        raise FileFormatError(f"{what} must be a JSON object")
    return v


def _as_list(v, what) -> list:
    if not isinstance(v, list):
        raise FileFormatError(f"{what} must be a JSON array")
    return v


def _as_str(v, what) -> str:
    if not isinstance(v, str) or not v:
        raise FileFormatError(f"{what} must be a nonempty string")
    return v


def _as_int(v, what) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FileFormatError(f"{what} must be an integer")
    return v


def _as_real(v, what) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FileFormatError(f"{what} must be a number")
    return float(v)


def _as_id(v, what) -> str:
    s = _as_str(v, what)
    if "|" in s:
        raise FileFormatError(f"{what} must not contain '|' (reserved as the tuple separator)")
    return s


def _check_keys(doc: dict, allowed: set, what: str) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise FileFormatError(f"{what} has unknown keys {unknown}; allowed keys are {sorted(allowed)}")


def _check_format(doc: dict, what: str) -> None:
    if "format" not in doc:
        raise FileFormatError(f'{what} is missing the "format" field')
    v = doc["format"]
    if v != FORMAT_VERSION:
        raise FileFormatError(f"{what} has format {v!r}; this tool reads format {FORMAT_VERSION}")


def split_key(key: str, arity: int, what: str) -> tuple:
    parts = tuple(_as_str(key, what).split("|"))
    if len(parts) != arity or any(not p for p in parts):
        raise FileFormatError(f"{what}: key {key!r} is not a '|'-joined {arity}-tuple")
    return parts


def join_key(parts) -> str:
    return "|".join(parts)


# ---------------------------------------------------------------------------
# kind detection

_KIND_HINTS = (
    ("functor", "functor"),
    ("omega", "multiplicative"),
    ("ops", "rep"),
    ("beta", "real"),
    ("involution_map", "real"),
    ("d", "dfm"),
    ("level", "cochain"),
    ("groupoid", "extension"),
    ("objects", "groupoid"),
    ("group", "groupoid"),
    ("action", "groupoid"),
)


def detect_kind(doc: dict) -> str:
    """Which schema a parsed document follows, from its distinguishing key."""
    _as_map(doc, "document")
    for key, kind in _KIND_HINTS:
        if key in doc:
            return kind
    raise FileFormatError(
        "cannot determine the file kind: none of the distinguishing keys "
        "(functor, omega, ops, beta, d, level, groupoid, objects, group, action) is present"
    )


# ---------------------------------------------------------------------------
# groupoid files

_groupoid_cache: dict[tuple, GradedGroupoid] = {}


def _load_group_table(sub: dict, what: str) -> tuple[GroupTable, dict | None]:
    _check_keys(sub, {"elements", "table", "epsilon"}, what)
    if "elements" not in sub or "table" not in sub:
        raise FileFormatError(f"{what} needs elements and table")
    elements = [_as_id(e, f"{what}: element") for e in _as_list(sub["elements"], f"{what}: elements")]
    if len(set(elements)) != len(elements):
        raise FileFormatError(f"{what}: duplicate element names")
    rows = _as_list(sub["table"], f"{what}: table")
    if len(rows) != len(elements):
        raise FileFormatError(f"{what}: table must have one row per element")
    elset = set(elements)
    table_rows = []
    for i, row in enumerate(rows):
        row = _as_list(row, f"{what}: table row {i}")
        if len(row) != len(elements):
            raise FileFormatError(f"{what}: table row {i} has wrong length")
        for v in row:
            if _as_str(v, f"{what}: table entry") not in elset:
                raise FileFormatError(f"{what}: table entry {v!r} is not an element")
        table_rows.append(list(row))
    epsilon = None
    if "epsilon" in sub:
        eps = _as_map(sub["epsilon"], f"{what}: epsilon")
        epsilon = {e: 1 for e in elements}
        for k, v in eps.items():
            if k not in elset:
                raise FileFormatError(f"{what}: epsilon key {k!r} is not an element")
            if v not in (1, -1) or isinstance(v, bool):
                raise FileFormatError(f"{what}: epsilon[{k!r}] must be 1 or -1")
            epsilon[k] = v
    return GroupTable.from_rows(elements, table_rows), epsilon


def _load_sign_map(doc_val, names, what: str) -> dict[str, int]:
    out = {n: 1 for n in names}
    sub = _as_map(doc_val, what)
    nameset = set(names)
    for k, v in sub.items():
        if k not in nameset:
            raise FileFormatError(f"{what}: key {k!r} is not a declared morphism")
        if v not in (1, -1) or isinstance(v, bool):
            raise FileFormatError(f"{what}[{k!r}] must be 1 or -1")
        out[k] = v
    return out


def load_groupoid_doc(doc: dict, what: str = "groupoid file") -> GradedGroupoid:
    """Full table form or one of the two shorthands (group, action)."""
    _as_map(doc, what)
    _check_format(doc, what)
    if "group" in doc:
        _check_keys(doc, {"format", "group"}, what)
        table, epsilon = _load_group_table(_as_map(doc["group"], f"{what}: group"), f"{what}: group")
        return delooping(table, epsilon)
    if "action" in doc:
        _check_keys(doc, {"format", "action"}, what)
        sub = _as_map(doc["action"], f"{what}: action")
        _check_keys(sub, {"elements", "table", "epsilon", "points", "action"}, f"{what}: action")
        if "points" not in sub or "action" not in sub:
            raise FileFormatError(f"{what}: action shorthand needs points and action")
        table, epsilon = _load_group_table(
            {k: sub[k] for k in ("elements", "table", "epsilon") if k in sub}, f"{what}: action"
        )
        points = [_as_id(p, f"{what}: point") for p in _as_list(sub["points"], f"{what}: points")]
        if len(set(points)) != len(points):
            raise FileFormatError(f"{what}: duplicate point names")
        ptset, elset = set(points), set(table.elements)
        act = {}
        for key, v in _as_map(sub["action"], f"{what}: action table").items():
            x, g = split_key(key, 2, f"{what}: action table")
            if x not in ptset or g not in elset:
                raise FileFormatError(f"{what}: action key {key!r} is not a (point, element) pair")
            if _as_str(v, f"{what}: action[{key!r}]") not in ptset:
                raise FileFormatError(f"{what}: action[{key!r}] = {v!r} is not a point")
            act[(x, g)] = v
        return action_groupoid(table, points, act, epsilon)

    allowed = {"format", "objects", "morphisms", "compose", "identities", "inverses", "phi"}
    _check_keys(doc, allowed, what)
    for req in ("objects", "morphisms", "compose", "identities", "inverses"):
        if req not in doc:
            raise FileFormatError(f"{what} is missing {req}")
    objects = [_as_id(x, f"{what}: object") for x in _as_list(doc["objects"], f"{what}: objects")]
    if len(set(objects)) != len(objects):
        raise FileFormatError(f"{what}: duplicate object names")
    objset = set(objects)
    morphisms = []
    names = []
    for i, entry in enumerate(_as_list(doc["morphisms"], f"{what}: morphisms")):
        entry = _as_map(entry, f"{what}: morphisms[{i}]")
        _check_keys(entry, {"id", "src", "tgt"}, f"{what}: morphisms[{i}]")
        for req in ("id", "src", "tgt"):
            if req not in entry:
                raise FileFormatError(f"{what}: morphisms[{i}] is missing {req}")
        name = _as_id(entry["id"], f"{what}: morphisms[{i}].id")
        src = _as_str(entry["src"], f"{what}: morphisms[{i}].src")
        tgt = _as_str(entry["tgt"], f"{what}: morphisms[{i}].tgt")
        if src not in objset or tgt not in objset:
            raise FileFormatError(f"{what}: morphism {name!r} has an undeclared endpoint")
        morphisms.append(Morphism(name, src, tgt))
        names.append(name)
    if len(set(names)) != len(names):
        raise FileFormatError(f"{what}: duplicate morphism ids")
    nameset = set(names)
    compose = {}
    for i, triple in enumerate(_as_list(doc["compose"], f"{what}: compose")):
        triple = _as_list(triple, f"{what}: compose[{i}]")
        if len(triple) != 3:
            raise FileFormatError(f"{what}: compose[{i}] must be [g1, g2, result]")
        g1, g2, r = (_as_str(v, f"{what}: compose[{i}]") for v in triple)
        for v in (g1, g2, r):
            if v not in nameset:
                raise FileFormatError(f"{what}: compose[{i}] references undeclared morphism {v!r}")
        if (g1, g2) in compose and compose[(g1, g2)] != r:
            raise FileFormatError(f"{what}: conflicting compose entries for ({g1!r}, {g2!r})")
        compose[(g1, g2)] = r
    identity = {}
    for k, v in _as_map(doc["identities"], f"{what}: identities").items():
        if k not in objset:
            raise FileFormatError(f"{what}: identities key {k!r} is not an object")
        if _as_str(v, f"{what}: identities[{k!r}]") not in nameset:
            raise FileFormatError(f"{what}: identities[{k!r}] references undeclared morphism {v!r}")
        identity[k] = v
    inverse = {}
    for k, v in _as_map(doc["inverses"], f"{what}: inverses").items():
        if k not in nameset:
            raise FileFormatError(f"{what}: inverses key {k!r} is not a morphism")
        if _as_str(v, f"{what}: inverses[{k!r}]") not in nameset:
            raise FileFormatError(f"{what}: inverses[{k!r}] references undeclared morphism {v!r}")
        inverse[k] = v
    phi = _load_sign_map(doc.get("phi", {}), names, f"{what}: phi")
    base = FiniteGroupoid(tuple(objects), tuple(morphisms), compose, identity, inverse)
    return GradedGroupoid(base, phi)


def _resolve_groupoid(ref, base_dir: str | None, what: str) -> GradedGroupoid:
    if isinstance(ref, dict):
        return load_groupoid_doc(ref, f"{what}: inline groupoid")
    path = _as_str(ref, f"{what}: groupoid reference")
    full = os.path.normpath(os.path.join(base_dir or ".", path))
    try:
        st = os.stat(full)
    except OSError as exc:
        raise FileFormatError(f"{what}: cannot read groupoid file {full}: {exc}") from exc
    key = (os.path.realpath(full), st.st_mtime_ns, st.st_size)
    if key not in _groupoid_cache:
        doc = read_json_file(full)
        if detect_kind(doc) != "groupoid":
            raise FileFormatError(f"{what}: {full} is not a groupoid file")
        _groupoid_cache[key] = load_groupoid_doc(doc, f"groupoid file {full}")
    return _groupoid_cache[key]


# ---------------------------------------------------------------------------
# cochain files

_INVOLUTIONS = ("trivial", "negation")


def _int_map(doc_val, what: str) -> dict[str, int]:
    return {
        _as_str(k, f"{what}: key"): _as_int(v, f"{what}[{k!r}]")
        for k, v in _as_map(doc_val, what).items()
    }


def _tuple_map(doc_val, arity: int, what: str) -> dict[tuple, int]:
    out = {}
    for k, v in _as_map(doc_val, what).items():
        out[split_key(k, arity, what)] = _as_int(v, f"{what}[{k!r}]")
    return out


def load_cochain_doc(doc: dict, base_dir: str | None = None, groupoid=None) -> Cochain:
    what = "cochain file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "level", "modulus", "involution", "values", "groupoid"}, what)
    for req in ("level", "modulus", "involution", "values"):
        if req not in doc:
            raise FileFormatError(f"{what} is missing {req}")
    level = _as_int(doc["level"], f"{what}: level")
    if level < 0:
        raise FileFormatError(f"{what}: level must be nonnegative")
    modulus = _as_int(doc["modulus"], f"{what}: modulus")
    if modulus < 0:
        raise FileFormatError(f"{what}: modulus must be nonnegative (0 means integer coefficients)")
    involution = doc["involution"]
    if involution not in _INVOLUTIONS:
        raise FileFormatError(f"{what}: involution must be one of {_INVOLUTIONS}")
    if groupoid is None:
        if "groupoid" not in doc:
            raise FileFormatError(f"{what} needs a groupoid (inline or by path) to interpret its keys")
        groupoid = _resolve_groupoid(doc["groupoid"], base_dir, what)
    g = as_graded(groupoid)
    values = {}
    for k, v in _as_map(doc["values"], f"{what}: values").items():
        values[split_key(k, max(level, 1) if level else 1, f"{what}: values")] = _as_int(
            v, f"{what}: values[{k!r}]"
        )
    try:
        return Cochain.from_mapping(g, level, CoefficientModule(modulus, involution), values)
    except ValueError as exc:
        raise FileFormatError(f"{what}: {exc}") from exc


# ---------------------------------------------------------------------------
# extension / multiplicative / real / double-cover files


def _parity_map(doc_val, what: str) -> dict[str, int]:
    out = {}
    for k, v in _as_map(doc_val, what).items():
        if v not in (0, 1) or isinstance(v, bool):
            raise FileFormatError(f"{what}[{k!r}] must be 0 or 1")
        out[_as_str(k, f"{what}: key")] = v
    return out


def _required_modulus(doc: dict, what: str, override: int | None) -> int:
    if override is not None:
        return override
    if "modulus" not in doc:
        raise FileFormatError(f"{what} is missing modulus (and no --modulus override was given)")
    m = _as_int(doc["modulus"], f"{what}: modulus")
    if m < 1:
        raise FileFormatError(f"{what}: modulus must be a positive integer")
    return m


def load_extension_doc(
    doc: dict, base_dir: str | None = None, modulus_override: int | None = None
) -> TwistedExtension:
    what = "extension file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "groupoid", "modulus", "c", "lambda"}, what)
    if "groupoid" not in doc:
        raise FileFormatError(f"{what} is missing groupoid")
    g = _resolve_groupoid(doc["groupoid"], base_dir, what)
    modulus = _required_modulus(doc, what, modulus_override)
    parity = _parity_map(doc.get("c", {}), f"{what}: c")
    phase = _tuple_map(doc.get("lambda", {}), 2, f"{what}: lambda")
    try:
        return TwistedExtension.build(g, modulus, parity, phase)
    except ValueError as exc:
        if isinstance(exc, (FileFormatError,)) or type(exc) is ValueError:
            raise FileFormatError(f"{what}: {exc}") from exc
        raise


def load_multiplicative_doc(doc: dict, base_dir: str | None = None) -> MultiplicativeTwisting:
    what = "multiplicative file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "group", "modulus", "omega"}, what)
    for req in ("group", "modulus", "omega"):
        if req not in doc:
            raise FileFormatError(f"{what} is missing {req}")
    sub = _as_map(doc["group"], f"{what}: group")
    _check_keys(sub, {"elements", "table"}, f"{what}: group")
    table, _ = _load_group_table(sub, f"{what}: group")
    modulus = _required_modulus(doc, what, None)
    elset = set(table.elements)
    omega = {}
    for k, v in _as_map(doc["omega"], f"{what}: omega").items():
        t = split_key(k, 3, f"{what}: omega")
        if any(p not in elset for p in t):
            raise FileFormatError(f"{what}: omega key {k!r} is not an element triple")
        omega[t] = _as_int(v, f"{what}: omega[{k!r}]")
    return MultiplicativeTwisting(table, modulus, omega)


def load_real_doc(doc: dict, base_dir: str | None = None) -> RealCentralExtension:
    what = "real extension file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "groupoid", "modulus", "involution_map", "lambda", "beta"}, what)
    for req in ("groupoid", "involution_map"):
        if req not in doc:
            raise FileFormatError(f"{what} is missing {req}")
    g = _resolve_groupoid(doc["groupoid"], base_dir, what)
    modulus = _required_modulus(doc, what, None)
    invmap = _as_map(doc["involution_map"], f"{what}: involution_map")
    _check_keys(invmap, {"objects", "morphisms"}, f"{what}: involution_map")
    for req in ("objects", "morphisms"):
        if req not in invmap:
            raise FileFormatError(f"{what}: involution_map is missing {req}")
    objset = set(g.objects)
    names = {m.name for m in g.morphisms}
    on_obj = {}
    for k, v in _as_map(invmap["objects"], f"{what}: involution_map.objects").items():
        if k not in objset or _as_str(v, f"{what}: involution_map.objects[{k!r}]") not in objset:
            raise FileFormatError(f"{what}: involution_map.objects entry ({k!r}: {v!r}) is not an object pair")
        on_obj[k] = v
    on_mor = {}
    for k, v in _as_map(invmap["morphisms"], f"{what}: involution_map.morphisms").items():
        if k not in names or _as_str(v, f"{what}: involution_map.morphisms[{k!r}]") not in names:
            raise FileFormatError(
                f"{what}: involution_map.morphisms entry ({k!r}: {v!r}) is not a morphism pair"
            )
        on_mor[k] = v
    real = RealStructure(g, GroupoidFunctor(g, g, on_obj, on_mor))
    phase = _tuple_map(doc.get("lambda", {}), 2, f"{what}: lambda")
    beta = _int_map(doc.get("beta", {}), f"{what}: beta")
    try:
        return RealCentralExtension.build(real, modulus, phase, beta)
    except ValueError as exc:
        if type(exc) is ValueError:
            raise FileFormatError(f"{what}: {exc}") from exc
        raise


def load_dfm_doc(
    doc: dict, base_dir: str | None = None, modulus_override: int | None = None
) -> DFMTwisting:
    what = "double-cover twisting file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "groupoid", "modulus", "d", "c", "lambda"}, what)
    for req in ("groupoid", "d"):
        if req not in doc:
            raise FileFormatError(f"{what} is missing {req}")
    g = _resolve_groupoid(doc["groupoid"], base_dir, what)
    modulus = _required_modulus(doc, what, modulus_override)
    degree = _int_map(doc["d"], f"{what}: d")
    parity = _parity_map(doc.get("c", {}), f"{what}: c")
    phase = _tuple_map(doc.get("lambda", {}), 2, f"{what}: lambda")
    try:
        return DFMTwisting.build(g, degree, modulus, parity, phase)
    except ValueError as exc:
        if type(exc) is ValueError:
            raise FileFormatError(f"{what}: {exc}") from exc
        raise


# ---------------------------------------------------------------------------
# representation files


def _parse_matrix(rows, want: tuple[int, int] | None, what: str) -> np.ndarray:
    rows = _as_list(rows, what)
    parsed = []
    width = None
    for i, row in enumerate(rows):
        row = _as_list(row, f"{what}: row {i}")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise FileFormatError(f"{what}: ragged rows")
        out_row = []
        for j, entry in enumerate(row):
            entry = _as_list(entry, f"{what}: entry ({i},{j})")
            if len(entry) != 2:
                raise FileFormatError(f"{what}: entry ({i},{j}) must be [re, im]")
            re = _as_real(entry[0], f"{what}: entry ({i},{j}) real part")
            im = _as_real(entry[1], f"{what}: entry ({i},{j}) imaginary part")
            out_row.append(complex(re, im))
        parsed.append(out_row)
    if not parsed:
        shape = want if want and 0 in want else (0, 0)
        return np.zeros(shape, dtype=complex)
    arr = np.array(parsed, dtype=complex)
    if arr.size == 0 and want and 0 in want:
        return np.zeros(want, dtype=complex)
    return arr


def _resolve_extension(ref, base_dir: str | None, what: str) -> TwistedExtension:
    if isinstance(ref, dict):
        return load_extension_doc(ref, base_dir)
    path = _as_str(ref, f"{what}: extension reference")
    full = os.path.normpath(os.path.join(base_dir or ".", path))
    doc = read_json_file(full)
    if detect_kind(doc) != "extension":
        raise FileFormatError(f"{what}: {full} is not an extension file")
    return load_extension_doc(doc, os.path.dirname(full))


def load_rep_doc(
    doc: dict, base_dir: str | None = None, tolerance_override: float | None = None
) -> TwistedMorphismData:
    what = "representation file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "extension", "dims", "ops", "tolerance"}, what)
    for req in ("extension", "dims", "ops"):
        if req not in doc:
            raise FileFormatError(f"{what} is missing {req}")
    ext = _resolve_extension(doc["extension"], base_dir, what)
    g = ext.groupoid
    objset = set(g.objects)
    dims = {}
    for k, v in _as_map(doc["dims"], f"{what}: dims").items():
        if k not in objset:
            raise FileFormatError(f"{what}: dims key {k!r} is not an object")
        v = _as_list(v, f"{what}: dims[{k!r}]")
        if len(v) != 2:
            raise FileFormatError(f"{what}: dims[{k!r}] must be [p, q]")
        p, q = (_as_int(x, f"{what}: dims[{k!r}]") for x in v)
        if p < 0 or q < 0:
            raise FileFormatError(f"{what}: dims[{k!r}] must be nonnegative")
        dims[k] = (p, q)
    names = {m.name: m for m in g.morphisms}
    ops = {}
    for k, v in _as_map(doc["ops"], f"{what}: ops").items():
        if k not in names:
            raise FileFormatError(f"{what}: ops key {k!r} is not a morphism")
        v = _as_map(v, f"{what}: ops[{k!r}]")
        _check_keys(v, {"matrix", "antilinear"}, f"{what}: ops[{k!r}]")
        if "matrix" not in v:
            raise FileFormatError(f"{what}: ops[{k!r}] is missing matrix")
        anti = v.get("antilinear", False)
        if not isinstance(anti, bool):
            raise FileFormatError(f"{what}: ops[{k!r}].antilinear must be a boolean")
        mor = names[k]
        want = None
        if mor.tgt in dims and mor.src in dims:
            want = (sum(dims[mor.tgt]), sum(dims[mor.src]))
        ops[k] = MorphismOp(_parse_matrix(v["matrix"], want, f"{what}: ops[{k!r}].matrix"), anti)
    tolerance = tolerance_override
    if tolerance is None:
        tolerance = _as_real(doc.get("tolerance", 1e-9), f"{what}: tolerance")
    return TwistedMorphismData.rep(ext, dims, ops, tolerance)


# ---------------------------------------------------------------------------
# functor files


def load_functor_doc(doc: dict, base_dir: str | None = None) -> GroupoidFunctor:
    what = "functor file"
    _as_map(doc, what)
    _check_format(doc, what)
    _check_keys(doc, {"format", "functor"}, what)
    sub = _as_map(doc["functor"], f"{what}: functor")
    _check_keys(sub, {"source", "target", "objects", "morphisms"}, f"{what}: functor")
    for req in ("source", "target", "objects", "morphisms"):
        if req not in sub:
            raise FileFormatError(f"{what}: functor is missing {req}")
    source = _resolve_groupoid(sub["source"], base_dir, f"{what}: source")
    target = _resolve_groupoid(sub["target"], base_dir, f"{what}: target")
    src_objs, tgt_objs = set(source.objects), set(target.objects)
    src_mors = {m.name for m in source.morphisms}
    tgt_mors = {m.name for m in target.morphisms}
    objects = {}
    for k, v in _as_map(sub["objects"], f"{what}: objects").items():
        if k not in src_objs or _as_str(v, f"{what}: objects[{k!r}]") not in tgt_objs:
            raise FileFormatError(f"{what}: objects entry ({k!r}: {v!r}) is not a source/target object pair")
        objects[k] = v
    morphisms = {}
    for k, v in _as_map(sub["morphisms"], f"{what}: morphisms").items():
        if k not in src_mors or _as_str(v, f"{what}: morphisms[{k!r}]") not in tgt_mors:
            raise FileFormatError(
                f"{what}: morphisms entry ({k!r}: {v!r}) is not a source/target morphism pair"
            )
        morphisms[k] = v
    return GroupoidFunctor(source, target, objects, morphisms)


# ---------------------------------------------------------------------------
# dispatch


def load_document(doc: dict, base_dir: str | None = None, **overrides):
    """Sniff the kind and load; returns (kind, object).

    Overrides: modulus (extension, double-cover), tolerance (rep),
    groupoid (cochain).
    """
    kind = detect_kind(doc)
    modulus = overrides.get("modulus")
    if kind == "groupoid":
        return kind, load_groupoid_doc(doc)
    if kind == "cochain":
        return kind, load_cochain_doc(doc, base_dir, overrides.get("groupoid"))
    if kind == "extension":
        return kind, load_extension_doc(doc, base_dir, modulus)
    if kind == "multiplicative":
        return kind, load_multiplicative_doc(doc, base_dir)
    if kind == "real":
        return kind, load_real_doc(doc, base_dir)
    if kind == "dfm":
        return kind, load_dfm_doc(doc, base_dir, modulus)
    if kind == "rep":
        return kind, load_rep_doc(doc, base_dir, overrides.get("tolerance"))
    if kind == "functor":
        return kind, load_functor_doc(doc, base_dir)
    raise FileFormatError(f"unhandled kind {kind!r}")


def load_path(path: str, **overrides):
    """Read, sniff, and load one file; returns (kind, object)."""
    doc = read_json_file(path)
    return load_document(doc, os.path.dirname(os.path.abspath(path)), **overrides)


# ---------------------------------------------------------------------------
# emission


def groupoid_to_doc(g) -> dict:
    gg = as_graded(g)
    base = gg.base
    return {
        "format": FORMAT_VERSION,
        "objects": list(base.objects),
        "morphisms": [{"id": m.name, "src": m.src, "tgt": m.tgt} for m in base.morphisms],
        "compose": [[g1, g2, r] for (g1, g2), r in sorted(base.compose.items())],
        "identities": dict(base.identity),
        "inverses": dict(base.inverse),
        "phi": {k: v for k, v in gg.phi.items() if v == -1},
    }


def extension_to_doc(e: TwistedExtension, groupoid_ref=None) -> dict:
    """groupoid_ref: a path string to reference, or None to inline."""
    return {
        "format": FORMAT_VERSION,
        "groupoid": groupoid_ref if groupoid_ref is not None else groupoid_to_doc(e.groupoid),
        "modulus": e.modulus,
        "c": {k: v for k, v in e.parity.as_mapping().items()},
        "lambda": {join_key(k): v for k, v in e.phase.as_mapping().items()},
    }


def cochain_to_doc(c: Cochain, groupoid_ref=None) -> dict:
    return {
        "format": FORMAT_VERSION,
        "groupoid": groupoid_ref if groupoid_ref is not None else groupoid_to_doc(c.groupoid),
        "level": c.level,
        "modulus": c.coeff.modulus,
        "involution": c.coeff.involution,
        "values": {join_key(k): v for k, v in c.as_mapping().items()},
    }


def canonical_json(doc) -> str:
    """Deterministic, byte-stable serialization."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_doc(doc, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(doc))
