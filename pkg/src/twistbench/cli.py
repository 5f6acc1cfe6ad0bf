"""Batch command line: validate, cohomology, classify, transgress, reps,
count_simples, compare.

Exit codes: 0 success; 1 semantic invalidity (an object fails its defining
laws); 2 parse or format error (including bad flags); 3 unsupported request
(e.g. degree above 3, simple counts of graded twistings); 4 enumeration cap
exceeded.  All outputs are deterministic given identical inputs and options.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cohomology import (
    CoefficientModule,
    NotACocycle,
    cohomology_group,
    graded_differential,
)
from .groupoids import (
    CapExceeded,
    GroupoidError,
    UnsupportedInput,
    default_modulus,
    functor_is_even,
    is_weak_equivalence,
    validate_functor,
    validate_groupoid,
)
from .fileio import (
    FileFormatError,
    canonical_json,
    extension_to_doc,
    load_path,
)
from .reps import (
    RepError,
    intertwiner_space,
    is_irreducible,
    endo_type,
    simple_count_report,
    validate_rep,
)
from .twistings import (
    TwistedExtension,
    TwistingError,
    dfm_to_descriptor,
    extension_class,
    pullback_extension,
    transgress,
    validate_dfm,
    validate_extension,
    validate_multiplicative,
    validate_real_extension,
)

MAX_DEGREE = 3


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _machine(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _pretty_group(factors) -> str:
    if not factors:
        return "0"
    return " ⊕ ".join("Z" if d == 0 else f"Z/{d}" for d in factors)


def _class_doc(cls) -> dict:
    return {
        "parity_class": list(cls.parity_class),
        "parity_invariants": list(cls.parity_invariants),
        "phase_class": list(cls.phase_class),
        "phase_invariants": list(cls.phase_invariants),
        "trivial": cls.is_trivial(),
    }


def _describe(g) -> str:
    return f"{len(g.objects)} objects, {len(g.morphisms)} morphisms"


# ---------------------------------------------------------------------------
# validate


def _validate_loaded(kind: str, obj, cap) -> dict:
    """Run the matching validator; returns an info dict, raises on invalid."""
    if kind == "groupoid":
        validate_groupoid(obj)
        return {"size": _describe(obj), "even": obj.is_even()}
    if kind == "cochain":
        d = graded_differential(obj, cap)
        cocycle = all(obj.coeff.normalize(v) == 0 for v in d.values)
        return {"level": obj.level, "cocycle": cocycle}
    if kind == "extension":
        validate_extension(obj, cap)
        return {"modulus": obj.modulus, "groupoid": _describe(obj.groupoid)}
    if kind == "multiplicative":
        validate_multiplicative(obj)
        return {"modulus": obj.modulus, "group_order": len(obj.group.elements)}
    if kind == "real":
        validate_real_extension(obj, cap)
        return {"modulus": obj.modulus}
    if kind == "dfm":
        validate_dfm(obj, cap)
        return {"modulus": obj.extension.modulus, "cover": _describe(obj.cover)}
    if kind == "rep":
        report = validate_rep(obj, cap)
        if not report.ok:
            raise RepError("; ".join(report.failures))
        return {"total_dimension": sum(obj.total_dim(x) for x in obj.groupoid.objects)}
    if kind == "functor":
        validate_functor(obj)
        return {"even": functor_is_even(obj)}
    raise UnsupportedInput(f"no validator for kind {kind!r}")


def cmd_validate(args) -> int:
    entries = []
    saw_parse_error = saw_invalid = False
    for path in args.paths:
        try:
            kind, obj = load_path(path, modulus=args.modulus, tolerance=args.tolerance)
        except FileFormatError as exc:
            saw_parse_error = True
            entries.append({"path": path, "kind": None, "valid": False, "error": str(exc)})
            continue
        except CapExceeded:
            raise
        try:
            info = _validate_loaded(kind, obj, args.cap)
        except CapExceeded:
            raise
        except ValueError as exc:
            saw_invalid = True
            entries.append({"path": path, "kind": kind, "valid": False, "error": str(exc)})
            continue
        entries.append({"path": path, "kind": kind, "valid": True, "error": None, "info": info})
    if args.format == "json":
        _emit(args, canonical_json({"format": 1, "kind": "validation", "files": entries}))
    else:
        lines = []
        for e in entries:
            if e["valid"]:
                extra = ", ".join(f"{k}={v}" for k, v in sorted(e.get("info", {}).items()))
                lines.append(f"{e['path']}: ok ({e['kind']}{'; ' + extra if extra else ''})")
            elif e["kind"] is None:
                lines.append(f"{e['path']}: parse error: {e['error']}")
            else:
                lines.append(f"{e['path']}: INVALID ({e['kind']}): {e['error']}")
        _emit(args, "\n".join(lines) + "\n")
    if saw_parse_error:
        return 2
    return 1 if saw_invalid else 0


# ---------------------------------------------------------------------------
# cohomology


def cmd_cohomology(args) -> int:
    if args.degree > MAX_DEGREE:
        raise UnsupportedInput(f"cohomology above degree {MAX_DEGREE} is not supported")
    if args.degree < 0:
        raise UnsupportedInput("cohomology degree must be nonnegative")
    kind, g = load_path(args.groupoid)
    if kind != "groupoid":
        raise FileFormatError(f"{args.groupoid} is not a groupoid file (found {kind})")
    validate_groupoid(g)
    modulus = args.modulus if args.modulus is not None else default_modulus(g)
    solver = cohomology_group(g, args.degree, CoefficientModule(modulus, args.involution), args.cap)
    doc = {
        "format": 1,
        "kind": "cohomology",
        "degree": args.degree,
        "modulus": modulus,
        "involution": args.involution,
        "invariant_factors": list(solver.group),
        "pretty": _pretty_group(solver.group),
    }
    if args.format == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(
            args,
            f"Ȟ^{args.degree}({_describe(g)}; Z/{modulus}, {args.involution}) = "
            f"{doc['pretty']}\n"
            f"invariant factors: {tuple(solver.group)}\n"
            f"machine: {_machine(doc)}\n",
        )
    return 0


# ---------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    kind, obj = load_path(args.path, modulus=args.modulus)
    alpha = None
    if kind == "dfm":
        desc = dfm_to_descriptor(obj, args.cap)
        ext, alpha = desc.extension, desc.alpha
    elif kind == "extension":
        ext = obj
        validate_extension(ext, args.cap)
    else:
        raise FileFormatError(f"{args.path} is not an extension or double-cover twisting file (found {kind})")
    cls = extension_class(ext, args.cap)
    doc = {"format": 1, "kind": "classification", **_class_doc(cls)}
    if alpha is not None:
        doc["alpha"] = {k: alpha[k] for k in sorted(alpha)}
    if args.format == "json":
        _emit(args, canonical_json(doc))
    else:
        lines = [
            f"c class (Ȟ^1 coordinates): {tuple(cls.parity_class)} in factors {tuple(cls.parity_invariants)}",
            f"λ class (Ȟ^2 coordinates): {tuple(cls.phase_class)} in factors {tuple(cls.phase_invariants)}",
            f"trivial: {'yes' if cls.is_trivial() else 'no'}",
        ]
        if alpha is not None:
            lines.append("alpha: " + ", ".join(f"{k} -> {alpha[k]}" for k in sorted(alpha)))
        _emit(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# transgress


def cmd_transgress(args) -> int:
    kind, obj = load_path(args.path)
    if kind != "multiplicative":
        raise FileFormatError(f"{args.path} is not a multiplicative twisting file (found {kind})")
    ext = transgress(obj, args.cap)
    validate_extension(ext, args.cap)
    body = canonical_json(extension_to_doc(ext))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body)
        cls = extension_class(ext, args.cap)
        if args.format == "json":
            sys.stdout.write(canonical_json({"format": 1, "kind": "transgression", "output": args.output, **_class_doc(cls)}))
        else:
            sys.stdout.write(
                f"wrote extension on {_describe(ext.groupoid)} to {args.output}; "
                f"λ class {tuple(cls.phase_class)} in factors {tuple(cls.phase_invariants)}\n"
            )
    else:
        sys.stdout.write(body)
    return 0


# ---------------------------------------------------------------------------
# reps


def cmd_reps(args) -> int:
    kind, r = load_path(args.path, tolerance=args.tolerance)
    if kind != "rep":
        raise FileFormatError(f"{args.path} is not a representation file (found {kind})")
    report = validate_rep(r, args.cap)
    doc = {
        "format": 1,
        "kind": "rep_report",
        "valid": report.ok,
        "failures": list(report.failures),
        "dims": {x: list(r.dims[x]) for x in r.groupoid.objects},
        "total_dimension": sum(r.total_dim(x) for x in r.groupoid.objects),
    }
    lines = [
        f"valid: {'yes' if report.ok else 'no'}",
        *(f"  {f}" for f in report.failures),
        "dims: " + ", ".join(f"{x} -> C^({p}|{q})" for x, (p, q) in sorted(r.dims.items())),
        f"total dimension: {doc['total_dimension']}",
    ]
    if args.analyze and report.ok:
        irr = is_irreducible(r, args.seed)
        space = intertwiner_space(r, r)
        doc.update(
            irreducible=irr,
            endo_type=endo_type(r, args.seed) if irr else None,
            commutant_real_dimension=space.real_dimension,
            commutant_even_real_dimension=space.even_real_dimension,
        )
        lines.append(f"irreducible: {'yes' if irr else 'no'}")
        if irr:
            lines.append(f"endomorphism type: {doc['endo_type']}")
        lines.append(
            f"self-intertwiners: real dimension {space.real_dimension} "
            f"(even part {space.even_real_dimension})"
        )
    if args.format == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# count_simples


def cmd_count_simples(args) -> int:
    kind, obj = load_path(args.path, modulus=args.modulus)
    if kind != "extension":
        raise FileFormatError(f"{args.path} is not an extension file (found {kind})")
    report = simple_count_report(obj, args.tolerance, args.cap)
    doc = {
        "format": 1,
        "kind": "simple_count",
        "count": report.count,
        "gap": report.gap,
        "tolerance": report.tolerance,
    }
    if args.format == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(
            args,
            f"simple objects: {report.count}\n"
            f"spectral gap: {report.gap:.6e} (tolerance {report.tolerance:g})\n",
        )
    return 0


# ---------------------------------------------------------------------------
# compare


def cmd_compare(args) -> int:
    kind, f = load_path(args.functor)
    if kind != "functor":
        raise FileFormatError(f"{args.functor} is not a functor file (found {kind})")
    validate_functor(f)
    we = is_weak_equivalence(f)
    doc = {
        "format": 1,
        "kind": "comparison",
        "weak_equivalence": we.ok,
        "essentially_surjective": we.essentially_surjective,
        "fully_faithful": we.fully_faithful,
        "witness": we.witness,
        "even": functor_is_even(f),
    }
    lines = [f"weak equivalence: {'yes' if we.ok else 'no'}"]
    if not we.ok and we.witness:
        lines.append(f"witness: {we.witness}")
    lines.append(f"even: {'yes' if doc['even'] else 'no'}")

    exts = []
    for p in args.extensions:
        ekind, e = load_path(p, modulus=args.modulus)
        if ekind != "extension":
            raise FileFormatError(f"{p} is not an extension file (found {ekind})")
        exts.append(e)
    if exts:
        target_ext = exts[0]
        validate_extension(target_ext, args.cap)
        pulled = pullback_extension(f, target_ext, args.cap)
        validate_extension(pulled, args.cap)
        sub = {
            "target_class": _class_doc(extension_class(target_ext, args.cap)),
            "pullback_class": _class_doc(extension_class(pulled, args.cap)),
        }
        lines.append(
            f"target λ class: {tuple(extension_class(target_ext, args.cap).phase_class)}"
        )
        lines.append(
            f"pullback λ class: {tuple(extension_class(pulled, args.cap).phase_class)}"
        )
        if len(exts) > 1:
            source_ext = exts[1]
            validate_extension(source_ext, args.cap)
            scls = extension_class(source_ext, args.cap)
            pcls = extension_class(pulled, args.cap)
            identified = (
                scls.parity_class == pcls.parity_class and scls.phase_class == pcls.phase_class
            )
            sub["source_class"] = _class_doc(scls)
            sub["classes_identified"] = identified
            lines.append(f"source λ class: {tuple(scls.phase_class)}")
            lines.append(f"pullback identifies the classes: {'yes' if identified else 'no'}")
        doc["pullback"] = sub
    if args.format == "json":
        _emit(args, canonical_json(doc))
    else:
        _emit(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# wiring


def _add_common(sp, cap=True):
    sp.add_argument("--format", choices=("text", "json"), default="text", help="report style")
    sp.add_argument("--output", metavar="PATH", help="write the report to PATH instead of stdout")
    if cap:
        sp.add_argument("--cap", type=int, default=None, help="enumeration cap (default: TWISTBENCH_CAP or 20000)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="twistbench",
        description="Twistings over finite graded groupoids: validation, cohomology, classification, transgression, representations.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="run the matching validator on each file")
    v.add_argument("paths", nargs="+", metavar="FILE")
    v.add_argument("--modulus", type=int, default=None, help="override the modulus of extension files")
    v.add_argument("--tolerance", type=float, default=None, help="override the tolerance of representation files")
    _add_common(v)
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("cohomology", help="invariant factors of a twisted cohomology group")
    c.add_argument("groupoid", metavar="GROUPOID_FILE")
    c.add_argument("--degree", type=int, required=True, help="cohomology degree (0..3)")
    c.add_argument("--modulus", type=int, default=None, help="coefficient modulus (default: groupoid-derived)")
    c.add_argument("--involution", choices=("trivial", "negation"), default="trivial")
    _add_common(c)
    c.set_defaults(func=cmd_cohomology)

    k = sub.add_parser("classify", help="cohomology class coordinates of a twisting")
    k.add_argument("path", metavar="EXTENSION_FILE")
    k.add_argument("--modulus", type=int, default=None)
    _add_common(k)
    k.set_defaults(func=cmd_classify)

    t = sub.add_parser("transgress", help="push a multiplicative twisting onto the conjugation groupoid")
    t.add_argument("path", metavar="MULTIPLICATIVE_FILE")
    _add_common(t)
    t.set_defaults(func=cmd_transgress)

    r = sub.add_parser("reps", help="validate (and optionally analyze) a twisted representation")
    r.add_argument("path", metavar="REP_FILE")
    r.add_argument("--analyze", action="store_true", help="also report irreducibility, type, intertwiners")
    r.add_argument("--tolerance", type=float, default=None)
    r.add_argument("--seed", type=int, default=0)
    _add_common(r)
    r.set_defaults(func=cmd_reps)

    s = sub.add_parser("count_simples", help="number of simple objects of an ungraded twisting")
    s.add_argument("path", metavar="EXTENSION_FILE")
    s.add_argument("--tolerance", type=float, default=1e-9)
    s.add_argument("--modulus", type=int, default=None)
    _add_common(s)
    s.set_defaults(func=cmd_count_simples)

    m = sub.add_parser("compare", help="weak-equivalence verdict for a functor; optional class transport")
    m.add_argument("functor", metavar="FUNCTOR_FILE")
    m.add_argument("extensions", nargs="*", metavar="EXTENSION_FILE",
                   help="optionally one extension on the target, then one on the source")
    m.add_argument("--modulus", type=int, default=None)
    _add_common(m)
    m.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except UnsupportedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GroupoidError, TwistingError, NotACocycle, RepError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
