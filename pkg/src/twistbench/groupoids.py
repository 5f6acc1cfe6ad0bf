"""Finite graded groupoids and the constructions the rest of the library runs on.

Objects and morphisms are opaque strings.  A groupoid is stored as explicit
tables (composition, identities, inverses) plus a grading map to {+1, -1}.
Everything is validated eagerly and enumerated in a deterministic order so
that cochain indexing and file output are reproducible byte for byte.

Composition convention: ``compose[(g1, g2)]`` is defined exactly when
``src(g1) == tgt(g2)`` and represents "g1 after g2", a morphism
``src(g2) -> tgt(g1)``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache


DEFAULT_CAP = 20000
CAP_ENV_VAR = "TWISTBENCH_CAP"


class GroupoidError(ValueError):
    """A structural axiom failed; the message names the offending cell."""


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured cap."""


class UnsupportedInput(ValueError):
    """The operation is defined, but not for this kind of input."""


def enumeration_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from exc


@dataclass(frozen=True)
class Morphism:
    name: str
    src: str
    tgt: str


@dataclass(eq=False)
class FiniteGroupoid:
    """Plain finite groupoid given by tables.

    Hash/eq are by identity on purpose: groupoids are treated as immutable
    after construction and used as cache keys for nerves and complexes.
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    compose: dict[tuple[str, str], str]
    identity: dict[str, str]
    inverse: dict[str, str]
    _by_name: dict[str, Morphism] = field(init=False, repr=False)

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.morphisms = tuple(self.morphisms)
        self._by_name = {m.name: m for m in self.morphisms}

    def morphism(self, name: str) -> Morphism:
        try:
            return self._by_name[name]
        except KeyError:
            raise GroupoidError(f"unknown morphism {name!r}") from None

    def src(self, name: str) -> str:
        return self.morphism(name).src

    def tgt(self, name: str) -> str:
        return self.morphism(name).tgt

    def comp(self, g1: str, g2: str) -> str:
        try:
            return self.compose[(g1, g2)]
        except KeyError:
            raise GroupoidError(f"morphisms {g1!r} after {g2!r} do not compose") from None

    def inv(self, g: str) -> str:
        return self.inverse[g]

    def id_of(self, obj: str) -> str:
        return self.identity[obj]

    def is_identity(self, g: str) -> bool:
        m = self.morphism(g)
        return m.src == m.tgt and self.identity.get(m.src) == g

    def components(self) -> list[frozenset[str]]:
        parent = {x: x for x in self.objects}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for m in self.morphisms:
            ra, rb = find(m.src), find(m.tgt)
            if ra != rb:
                parent[ra] = rb
        groups: dict[str, set[str]] = {}
        for x in self.objects:
            groups.setdefault(find(x), set()).add(x)
        return [frozenset(groups[r]) for r in sorted(groups)]

    def isotropy(self, obj: str) -> list[str]:
        return [m.name for m in self.morphisms if m.src == obj and m.tgt == obj]


@dataclass(eq=False)
class GradedGroupoid:
    """A finite groupoid with a multiplicative sign on morphisms."""

    base: FiniteGroupoid
    phi: dict[str, int]

    @classmethod
    def ungraded(cls, base: FiniteGroupoid) -> "GradedGroupoid":
        return cls(base, {m.name: +1 for m in base.morphisms})

    # passthroughs so downstream code handles one object
    @property
    def objects(self):
        return self.base.objects

    @property
    def morphisms(self):
        return self.base.morphisms

    def src(self, g):
        return self.base.src(g)

    def tgt(self, g):
        return self.base.tgt(g)

    def comp(self, g1, g2):
        return self.base.comp(g1, g2)

    def inv(self, g):
        return self.base.inv(g)

    def id_of(self, obj):
        return self.base.id_of(obj)

    def is_identity(self, g):
        return self.base.is_identity(g)

    def grade(self, g: str) -> int:
        return self.phi[g]

    def is_even(self) -> bool:
        return all(v == +1 for v in self.phi.values())

    def components(self):
        return self.base.components()

    def isotropy(self, obj):
        return self.base.isotropy(obj)


def as_graded(g) -> GradedGroupoid:
    if isinstance(g, GradedGroupoid):
        return g
    # one stable wrapper per base, so solver caches keyed by identity hit
    wrapper = getattr(g, "_graded_wrapper", None)
    if wrapper is None:
        wrapper = GradedGroupoid.ungraded(g)
        g._graded_wrapper = wrapper
    return wrapper


def validate_groupoid(g) -> None:
    """Check every axiom; raise GroupoidError naming the first violation."""
    gg = as_graded(g)
    base = gg.base
    if len(set(base.objects)) != len(base.objects):
        raise GroupoidError("duplicate object names")
    names = [m.name for m in base.morphisms]
    if len(set(names)) != len(names):
        raise GroupoidError("duplicate morphism names")
    objset = set(base.objects)
    for m in base.morphisms:
        if "|" in m.name:
            raise GroupoidError(f"morphism name {m.name!r} contains reserved '|'")
        if m.src not in objset or m.tgt not in objset:
            raise GroupoidError(f"morphism {m.name!r} has endpoint outside objects")
    for x in base.objects:
        if x not in base.identity:
            raise GroupoidError(f"object {x!r} has no identity")
        e = base.identity[x]
        me = base.morphism(e)
        if me.src != x or me.tgt != x:
            raise GroupoidError(f"identity of {x!r} is not a loop at {x!r}")
    byname = base._by_name
    for (g1, g2), g12 in base.compose.items():
        m1, m2 = byname.get(g1), byname.get(g2)
        if m1 is None or m2 is None or g12 not in byname:
            raise GroupoidError(f"composition table mentions unknown morphism in ({g1}, {g2})")
        if m1.src != m2.tgt:
            raise GroupoidError(f"composition ({g1}, {g2}) defined but sources do not match")
        m12 = byname[g12]
        if m12.src != m2.src or m12.tgt != m1.tgt:
            raise GroupoidError(f"composite of ({g1}, {g2}) has wrong endpoints")
    for m1 in base.morphisms:
        for m2 in base.morphisms:
            if m1.src == m2.tgt and (m1.name, m2.name) not in base.compose:
                raise GroupoidError(f"missing composition for ({m1.name}, {m2.name})")
    for m in base.morphisms:
        e_t, e_s = base.identity[m.tgt], base.identity[m.src]
        if base.compose[(e_t, m.name)] != m.name or base.compose[(m.name, e_s)] != m.name:
            raise GroupoidError(f"unit law fails at {m.name!r}")
    for m in base.morphisms:
        if m.name not in base.inverse:
            raise GroupoidError(f"{m.name!r} has no inverse")
        w = base.inverse[m.name]
        mw = base.morphism(w)
        if mw.src != m.tgt or mw.tgt != m.src:
            raise GroupoidError(f"inverse of {m.name!r} has wrong endpoints")
        if base.compose[(m.name, w)] != base.identity[m.tgt]:
            raise GroupoidError(f"{m.name!r} composed with its inverse is not the identity")
        if base.compose[(w, m.name)] != base.identity[m.src]:
            raise GroupoidError(f"inverse of {m.name!r} composed with it is not the identity")
    # associativity over all composable triples
    for m1 in base.morphisms:
        for m2 in base.morphisms:
            if m1.src != m2.tgt:
                continue
            for m3 in base.morphisms:
                if m2.src != m3.tgt:
                    continue
                left = base.compose[(base.compose[(m1.name, m2.name)], m3.name)]
                right = base.compose[(m1.name, base.compose[(m2.name, m3.name)])]
                if left != right:
                    raise GroupoidError(
                        f"associativity fails at ({m1.name}, {m2.name}, {m3.name})"
                    )
    # grading
    for m in base.morphisms:
        if m.name not in gg.phi:
            raise GroupoidError(f"{m.name!r} has no grade")
        if gg.phi[m.name] not in (+1, -1):
            raise GroupoidError(f"grade of {m.name!r} is not +1 or -1")
    for x in base.objects:
        if gg.phi[base.identity[x]] != +1:
            raise GroupoidError(f"identity of {x!r} is odd")
    for (g1, g2), g12 in base.compose.items():
        if gg.phi[g12] != gg.phi[g1] * gg.phi[g2]:
            raise GroupoidError(f"grading not multiplicative at ({g1}, {g2})")


@lru_cache(maxsize=None)
def _nerve_cached(gg: GradedGroupoid, k: int, cap: int):
    base = gg.base
    if k == 0:
        if len(base.objects) > cap:
            raise CapExceeded(f"nerve level 0 has {len(base.objects)} entries, cap {cap}")
        return tuple((x,) for x in base.objects)
    names = [m.name for m in base.morphisms]
    src = {m.name: m.src for m in base.morphisms}
    tgt = {m.name: m.tgt for m in base.morphisms}
    by_tgt: dict[str, list[str]] = {}
    for n in names:
        by_tgt.setdefault(tgt[n], []).append(n)
    out = [(n,) for n in names]
    if len(out) > cap:
        raise CapExceeded(f"nerve level 1 has {len(out)} entries, cap {cap}")
    for _ in range(k - 1):
        nxt = []
        for t in out:
            for n in by_tgt.get(src[t[-1]], ()):
                nxt.append(t + (n,))
                if len(nxt) > cap:
                    raise CapExceeded(f"nerve level {k} exceeds cap {cap}")
        out = nxt
    return tuple(out)


def nerve(g, k: int, cap: int | None = None):
    """Composable k-tuples (g1, ..., gk) with src(g_i) = tgt(g_{i+1}).

    Level 0 returns objects as 1-tuples.  Order is lexicographic in the
    position of each morphism in the groupoid's morphism list, so it is
    deterministic for a fixed groupoid.
    """
    if k < 0:
        raise ValueError("nerve level must be >= 0")
    return _nerve_cached(as_graded(g), k, enumeration_cap(cap))


# ---------------------------------------------------------------------------
# group tables and standard constructions


@dataclass(frozen=True)
class GroupTable:
    elements: tuple[str, ...]
    mul: dict[tuple[str, str], str] = field(hash=False)
    unit: str

    def inverse(self, x: str) -> str:
        for y in self.elements:
            if self.mul[(x, y)] == self.unit:
                return y
        raise GroupoidError(f"{x!r} has no inverse in the group table")

    @classmethod
    def from_rows(cls, elements, rows) -> "GroupTable":
        elements = tuple(elements)
        if len(rows) != len(elements) or any(len(r) != len(elements) for r in rows):
            raise GroupoidError("group table is not square")
        mul = {}
        for i, x in enumerate(elements):
            for j, y in enumerate(elements):
                mul[(x, y)] = rows[i][j]
        unit = None
        for x in elements:
            if all(mul[(x, y)] == y and mul[(y, x)] == y for y in elements):
                unit = x
                break
        if unit is None:
            raise GroupoidError("group table has no two-sided unit")
        table = cls(elements, mul, unit)
        validate_group_table(table)
        return table


def validate_group_table(t: GroupTable) -> None:
    els = t.elements
    for x in els:
        for y in els:
            if t.mul[(x, y)] not in els:
                raise GroupoidError(f"group table leaves the element set at ({x}, {y})")
    for x in els:
        for y in els:
            for z in els:
                if t.mul[(t.mul[(x, y)], z)] != t.mul[(x, t.mul[(y, z)])]:
                    raise GroupoidError(f"group table not associative at ({x}, {y}, {z})")
    for x in els:
        t.inverse(x)


def validate_sign_character(t: GroupTable, eps: dict[str, int]) -> None:
    for x in t.elements:
        if eps.get(x) not in (+1, -1):
            raise GroupoidError(f"sign character undefined or out of range at {x!r}")
    for x in t.elements:
        for y in t.elements:
            if eps[t.mul[(x, y)]] != eps[x] * eps[y]:
                raise GroupoidError(f"sign character not multiplicative at ({x}, {y})")


def delooping(table: GroupTable, epsilon: dict[str, int] | None = None) -> GradedGroupoid:
    """One-object groupoid whose loops are the group elements."""
    if epsilon is not None:
        validate_sign_character(table, epsilon)
    obj = "*"
    mors = tuple(Morphism(x, obj, obj) for x in table.elements)
    comp = {(x, y): table.mul[(x, y)] for x in table.elements for y in table.elements}
    inv = {x: table.inverse(x) for x in table.elements}
    phi = {x: (epsilon[x] if epsilon else +1) for x in table.elements}
    base = FiniteGroupoid((obj,), mors, comp, {obj: table.unit}, inv)
    return GradedGroupoid(base, phi)


def action_groupoid(
    table: GroupTable,
    points: tuple[str, ...],
    act: dict[tuple[str, str], str],
    epsilon: dict[str, int] | None = None,
) -> GradedGroupoid:
    """Right action groupoid: the morphism (g, x), named "g@x", runs x.g -> x.

    The delooping is recovered as the one-point case; a regression test pins
    this orientation.
    """
    if epsilon is not None:
        validate_sign_character(table, epsilon)
    points = tuple(points)
    for x in points:
        if act.get((x, table.unit)) != x:
            raise GroupoidError(f"action: unit does not fix {x!r}")
        for g in table.elements:
            if (x, g) not in act or act[(x, g)] not in points:
                raise GroupoidError(f"action undefined or leaves the point set at ({x}, {g})")
            for h in table.elements:
                if act[(act[(x, g)], h)] != act[(x, table.mul[(g, h)])]:
                    raise GroupoidError(f"action law fails at ({x}, {g}, {h})")
    mors = []
    phi = {}
    for g in table.elements:
        for x in points:
            nm = f"{g}@{x}"
            mors.append(Morphism(nm, act[(x, g)], x))
            phi[nm] = epsilon[g] if epsilon else +1
    comp = {}
    for g1 in table.elements:
        for x1 in points:
            x2 = act[(x1, g1)]
            for g2 in table.elements:
                comp[(f"{g1}@{x1}", f"{g2}@{x2}")] = f"{table.mul[(g1, g2)]}@{x1}"
    ident = {x: f"{table.unit}@{x}" for x in points}
    inv = {
        f"{g}@{x}": f"{table.inverse(g)}@{act[(x, g)]}"
        for g in table.elements
        for x in points
    }
    base = FiniteGroupoid(points, tuple(mors), comp, ident, inv)
    return GradedGroupoid(base, phi)


def conjugation_action(table: GroupTable) -> dict[tuple[str, str], str]:
    inv = {x: table.inverse(x) for x in table.elements}
    return {
        (x, g): table.mul[(table.mul[(inv[g], x)], g)]
        for x in table.elements
        for g in table.elements
    }


def conjugation_groupoid(table: GroupTable, epsilon=None) -> GradedGroupoid:
    # memoized per table instance so twistings built from one table share a
    # groupoid identity (solver caches and comparisons key on identity)
    key = None if epsilon is None else tuple(sorted(epsilon.items()))
    cache = getattr(table, "_conj_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(table, "_conj_cache", cache)
    if key not in cache:
        cache[key] = action_groupoid(table, table.elements, conjugation_action(table), epsilon)
    return cache[key]


def pair_groupoid(points, odd_pairs=None) -> GradedGroupoid:
    """Pair groupoid; morphism "y<x" runs x -> y.  odd_pairs get grade -1."""
    points = tuple(points)
    odd = set(odd_pairs or ())
    mors = tuple(Morphism(f"{y}<{x}", x, y) for y in points for x in points)
    comp = {}
    for z in points:
        for y in points:
            for x in points:
                comp[(f"{z}<{y}", f"{y}<{x}")] = f"{z}<{x}"
    ident = {x: f"{x}<{x}" for x in points}
    inv = {f"{y}<{x}": f"{x}<{y}" for x in points for y in points}
    phi = {
        f"{y}<{x}": (-1 if (x, y) in odd else +1) for x in points for y in points
    }
    base = FiniteGroupoid(points, mors, comp, ident, inv)
    g = GradedGroupoid(base, phi)
    validate_groupoid(g)  # odd_pairs must make a multiplicative sign
    return g


def point_groupoid() -> GradedGroupoid:
    return pair_groupoid(("*",))


# ---------------------------------------------------------------------------
# functors, natural transformations, real structures


@dataclass(eq=False)
class GroupoidFunctor:
    source: GradedGroupoid
    target: GradedGroupoid
    objects: dict[str, str]
    morphisms: dict[str, str]

    def on_obj(self, x: str) -> str:
        return self.objects[x]

    def on_mor(self, g: str) -> str:
        return self.morphisms[g]


def validate_functor(f: GroupoidFunctor) -> None:
    src, tgt = f.source, f.target
    for x in src.objects:
        if x not in f.objects or f.objects[x] not in set(tgt.objects):
            raise GroupoidError(f"functor undefined or out of range on object {x!r}")
    for m in src.morphisms:
        if m.name not in f.morphisms:
            raise GroupoidError(f"functor undefined on morphism {m.name!r}")
        im = tgt.base._by_name.get(f.morphisms[m.name])
        if im is None:
            raise GroupoidError(f"functor image of {m.name!r} is unknown")
        if im.src != f.objects[m.src] or im.tgt != f.objects[m.tgt]:
            raise GroupoidError(f"functor breaks endpoints at {m.name!r}")
    for x in src.objects:
        if f.morphisms[src.id_of(x)] != tgt.id_of(f.objects[x]):
            raise GroupoidError(f"functor breaks the identity at {x!r}")
    for (g1, g2), g12 in src.base.compose.items():
        if tgt.comp(f.morphisms[g1], f.morphisms[g2]) != f.morphisms[g12]:
            raise GroupoidError(f"functor breaks composition at ({g1}, {g2})")


def functor_is_even(f: GroupoidFunctor) -> bool:
    return all(f.target.grade(f.morphisms[m.name]) == f.source.grade(m.name) for m in f.source.morphisms)


def identity_functor(g: GradedGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(
        g, g, {x: x for x in g.objects}, {m.name: m.name for m in g.morphisms}
    )


def compose_functors(g2: GroupoidFunctor, g1: GroupoidFunctor) -> GroupoidFunctor:
    """g2 after g1."""
    if g1.target is not g2.source:
        raise GroupoidError("functors do not compose: middle groupoid differs")
    return GroupoidFunctor(
        g1.source,
        g2.target,
        {x: g2.objects[g1.objects[x]] for x in g1.source.objects},
        {m.name: g2.morphisms[g1.morphisms[m.name]] for m in g1.source.morphisms},
    )


@dataclass(eq=False)
class NatTransformation:
    """Components x -> (morphism F(x) -> G(x)) between parallel functors."""

    source: GroupoidFunctor
    target: GroupoidFunctor
    components: dict[str, str]


def validate_nat(n: NatTransformation) -> None:
    f, g = n.source, n.target
    if f.source is not g.source or f.target is not g.target:
        raise GroupoidError("natural transformation between non-parallel functors")
    tgt = f.target
    for x in f.source.objects:
        c = n.components.get(x)
        if c is None:
            raise GroupoidError(f"no component at {x!r}")
        mc = tgt.base._by_name.get(c)
        if mc is None or mc.src != f.objects[x] or mc.tgt != g.objects[x]:
            raise GroupoidError(f"component at {x!r} has wrong endpoints")
    for m in f.source.morphisms:
        lhs = tgt.comp(g.morphisms[m.name], n.components[m.src])
        rhs = tgt.comp(n.components[m.tgt], f.morphisms[m.name])
        if lhs != rhs:
            raise GroupoidError(f"naturality fails at {m.name!r}")


def nat_is_even(n: NatTransformation) -> bool:
    tgt = n.source.target
    return all(tgt.grade(c) == +1 for c in n.components.values())


@dataclass(eq=False)
class RealStructure:
    """A strict involution of a groupoid: tau . tau = id on the nose."""

    groupoid: GradedGroupoid
    tau: GroupoidFunctor


def validate_real_structure(r: RealStructure) -> None:
    if r.tau.source is not r.groupoid or r.tau.target is not r.groupoid:
        raise GroupoidError("involution is not an endofunctor of its groupoid")
    validate_functor(r.tau)
    if not functor_is_even(r.tau):
        raise GroupoidError("involution must preserve the grading")
    for x in r.groupoid.objects:
        if r.tau.objects[r.tau.objects[x]] != x:
            raise GroupoidError(f"involution squared moves object {x!r}")
    for m in r.groupoid.morphisms:
        if r.tau.morphisms[r.tau.morphisms[m.name]] != m.name:
            raise GroupoidError(f"involution squared moves morphism {m.name!r}")


# ---------------------------------------------------------------------------
# constructions: semidirect double, even part, covers, fibre products


def semidirect_with_involution(r: RealStructure):
    """The groupoid with morphisms (g, s), s = +-1, graded by s.

    (g, -1) runs tau(src g) -> tgt g; composition twists the second factor by
    tau when the first has s = -1.  Returns (groupoid, embedding of the even
    part), where the embedding sends g to (g, +1).
    """
    validate_real_structure(r)
    g = r.groupoid
    if not g.is_even():
        raise UnsupportedInput("semidirect double needs an ungraded (all even) input")
    tau_o, tau_m = r.tau.objects, r.tau.morphisms

    def twist(name, s):
        return name if s == +1 else tau_m[name]

    mors = []
    phi = {}
    for m in g.morphisms:
        for s, tag in ((+1, "+"), (-1, "-")):
            nm = f"{m.name}:{tag}"
            src = m.src if s == +1 else tau_o[m.src]
            mors.append(Morphism(nm, src, m.tgt))
            phi[nm] = s
    comp = {}
    for m1 in g.morphisms:
        for s1, t1 in ((+1, "+"), (-1, "-")):
            for m2 in g.morphisms:
                for s2, t2 in ((+1, "+"), (-1, "-")):
                    src1 = m1.src if s1 == +1 else tau_o[m1.src]
                    if src1 != m2.tgt:
                        continue
                    inner = twist(m2.name, s1)
                    prod = g.comp(m1.name, inner)
                    tag = "+" if s1 * s2 == +1 else "-"
                    comp[(f"{m1.name}:{t1}", f"{m2.name}:{t2}")] = f"{prod}:{tag}"
    ident = {x: f"{g.id_of(x)}:+" for x in g.objects}
    inv = {}
    for m in g.morphisms:
        inv[f"{m.name}:+"] = f"{g.inv(m.name)}:+"
        inv[f"{m.name}:-"] = f"{tau_m[g.inv(m.name)]}:-"
    base = FiniteGroupoid(g.objects, tuple(mors), comp, ident, inv)
    doubled = GradedGroupoid(base, phi)
    embed = GroupoidFunctor(
        g, doubled, {x: x for x in g.objects}, {m.name: f"{m.name}:+" for m in g.morphisms}
    )
    return doubled, embed


def even_part(g: GradedGroupoid):
    """The wide subgroupoid of even morphisms, with its inclusion functor."""
    keep = [m for m in g.morphisms if g.grade(m.name) == +1]
    names = {m.name for m in keep}
    comp = {k: v for k, v in g.base.compose.items() if k[0] in names and k[1] in names}
    inv = {n: g.inv(n) for n in names}
    base = FiniteGroupoid(g.objects, tuple(keep), comp, dict(g.base.identity), inv)
    sub = GradedGroupoid.ungraded(base)
    incl = GroupoidFunctor(sub, g, {x: x for x in g.objects}, {n: n for n in names})
    return sub, incl


def covering_groupoid(g: GradedGroupoid, fibre_objects, pi: dict[str, str]):
    """Cover with objects Y over pi: Y -> objects(g).

    Morphisms are triples "y2:g:y1" with pi(y1) = src(g), pi(y2) = tgt(g);
    grading is pulled back.  Returns (cover, projection functor).
    """
    fibre_objects = tuple(fibre_objects)
    objset = set(g.objects)
    for y in fibre_objects:
        if pi.get(y) not in objset:
            raise GroupoidError(f"cover point {y!r} does not sit over an object")
    fibre: dict[str, list[str]] = {x: [] for x in g.objects}
    for y in fibre_objects:
        fibre[pi[y]].append(y)
    mors = []
    phi = {}
    down = {}
    for m in g.morphisms:
        for y2 in fibre[m.tgt]:
            for y1 in fibre[m.src]:
                nm = f"{y2}:{m.name}:{y1}"
                mors.append(Morphism(nm, y1, y2))
                phi[nm] = g.grade(m.name)
                down[nm] = m.name
    comp = {}
    for (g1, g2), g12 in g.base.compose.items():
        m1, m2 = g.base.morphism(g1), g.base.morphism(g2)
        for y3 in fibre[m1.tgt]:
            for y2 in fibre[m1.src]:
                for y1 in fibre[m2.src]:
                    comp[(f"{y3}:{g1}:{y2}", f"{y2}:{g2}:{y1}")] = f"{y3}:{g12}:{y1}"
    ident = {y: f"{y}:{g.id_of(pi[y])}:{y}" for y in fibre_objects}
    inv = {}
    for m in g.morphisms:
        w = g.inv(m.name)
        for y2 in fibre[m.tgt]:
            for y1 in fibre[m.src]:
                inv[f"{y2}:{m.name}:{y1}"] = f"{y1}:{w}:{y2}"
    base = FiniteGroupoid(fibre_objects, tuple(mors), comp, ident, inv)
    cover = GradedGroupoid(base, phi)
    proj = GroupoidFunctor(cover, g, dict(pi), down)
    return cover, proj


def discrete_groupoid(points) -> GradedGroupoid:
    """Only identity morphisms."""
    points = tuple(points)
    mors = tuple(Morphism(f"{x}<{x}", x, x) for x in points)
    comp = {(f"{x}<{x}", f"{x}<{x}"): f"{x}<{x}" for x in points}
    ident = {x: f"{x}<{x}" for x in points}
    inv = {f"{x}<{x}": f"{x}<{x}" for x in points}
    return GradedGroupoid.ungraded(FiniteGroupoid(points, mors, comp, ident, inv))


def phi_double_cover(g: GradedGroupoid):
    """The two-sheet cover split by the grading.

    Objects are "x:+", "x:-"; the morphism "g:s" starts on sheet s and ends on
    sheet s * phi(g).  The grading upstairs is the pullback of phi.  Returns
    (cover, projection functor).
    """
    sheets = ((+1, "+"), (-1, "-"))
    objs = tuple(f"{x}:{t}" for x in g.objects for _, t in sheets)
    mors = []
    phi = {}
    for m in g.morphisms:
        for s, t in sheets:
            nm = f"{m.name}:{t}"
            s_out = s * g.grade(m.name)
            mors.append(Morphism(nm, f"{m.src}:{t}", f"{m.tgt}:{'+' if s_out == 1 else '-'}"))
            phi[nm] = g.grade(m.name)
    comp = {}
    for (g1, g2), g12 in g.base.compose.items():
        for s2, t2 in sheets:
            s_mid = s2 * g.grade(g2)
            t_mid = "+" if s_mid == 1 else "-"
            comp[(f"{g1}:{t_mid}", f"{g2}:{t2}")] = f"{g12}:{t2}"
    ident = {f"{x}:{t}": f"{g.id_of(x)}:{t}" for x in g.objects for _, t in sheets}
    inv = {}
    for m in g.morphisms:
        for s, t in sheets:
            s_out = s * g.grade(m.name)
            t_out = "+" if s_out == 1 else "-"
            inv[f"{m.name}:{t}"] = f"{g.inv(m.name)}:{t_out}"
    base = FiniteGroupoid(objs, tuple(mors), comp, ident, inv)
    cover = GradedGroupoid(base, phi)
    proj = GroupoidFunctor(
        cover,
        g,
        {f"{x}:{t}": x for x in g.objects for _, t in sheets},
        {m.name: m.name.rsplit(":", 1)[0] for m in cover.morphisms},
    )
    return cover, proj


def fibre_product(t1: GroupoidFunctor, t2: GroupoidFunctor):
    """Iso-comma pullback of two even functors with the same target.

    Objects are "p:a:q" where a: t1(p) -> t2(q) is an even iso; morphisms are
    pairs of morphisms making the square commute (their grades then agree,
    which is the grading of the pair).  Returns (groupoid, proj1, proj2).
    """
    if t1.target is not t2.target:
        raise GroupoidError("fibre product needs functors with the same target")
    validate_functor(t1)
    validate_functor(t2)
    if not functor_is_even(t1) or not functor_is_even(t2):
        raise GroupoidError("fibre product needs even functors")
    gam = t1.target
    la, lb = t1.source, t2.source
    hom_even: dict[tuple[str, str], list[str]] = {}
    for m in gam.morphisms:
        if gam.grade(m.name) == +1:
            hom_even.setdefault((m.src, m.tgt), []).append(m.name)

    objs = []
    obj_parts = {}
    for p in la.objects:
        for q in lb.objects:
            for a in hom_even.get((t1.objects[p], t2.objects[q]), ()):
                nm = f"{p}:{a}:{q}"
                objs.append(nm)
                obj_parts[(p, a, q)] = nm

    mors = []
    phi = {}
    comp_pairs = {}
    for m1 in la.morphisms:
        for m2 in lb.morphisms:
            if la.grade(m1.name) != lb.grade(m2.name):
                continue
            for a in hom_even.get((t1.objects[m1.src], t2.objects[m2.src]), ()):
                # target connecting iso forced by the commuting square
                b = gam.comp(gam.comp(t2.morphisms[m2.name], a), gam.inv(t1.morphisms[m1.name]))
                tgt_o = obj_parts.get((m1.tgt, b, m2.tgt))
                if tgt_o is None:
                    continue
                src_o = obj_parts[(m1.src, a, m2.src)]
                nm = f"{m1.name}:{m2.name}:{a}"
                mors.append(Morphism(nm, src_o, tgt_o))
                phi[nm] = la.grade(m1.name)
                comp_pairs[nm] = (m1.name, m2.name, a, b)
    comp = {}
    for nm1, (a1, b1, al1, be1) in comp_pairs.items():
        for nm2, (a2, b2, al2, be2) in comp_pairs.items():
            if be2 != al1:
                continue
            if la.src(a1) != la.tgt(a2) or lb.src(b1) != lb.tgt(b2):
                continue
            comp[(nm1, nm2)] = f"{la.comp(a1, a2)}:{lb.comp(b1, b2)}:{al2}"
    ident = {}
    for (p, a, q), o in obj_parts.items():
        ident[o] = f"{la.id_of(p)}:{lb.id_of(q)}:{a}"
    inv = {}
    for nm, (a1, b1, al, be) in comp_pairs.items():
        inv[nm] = f"{la.inv(a1)}:{lb.inv(b1)}:{be}"
    base = FiniteGroupoid(tuple(objs), tuple(mors), comp, ident, inv)
    prod = GradedGroupoid(base, phi)
    proj1 = GroupoidFunctor(
        prod,
        la,
        {o: p for (p, a, q), o in obj_parts.items()},
        {nm: parts[0] for nm, parts in comp_pairs.items()},
    )
    proj2 = GroupoidFunctor(
        prod,
        lb,
        {o: q for (p, a, q), o in obj_parts.items()},
        {nm: parts[1] for nm, parts in comp_pairs.items()},
    )
    return prod, proj1, proj2


def common_refinement(g: GradedGroupoid, cover1, cover2):
    """Comparison functor from the joint cover into the fibre product.

    cover1 and cover2 are (fibre_objects, pi) pairs over g.  Returns
    (joint cover, comparison functor into fibre_product(P1, P2)).
    """
    (y1, pi1), (y2, pi2) = cover1, cover2
    c1, p1 = covering_groupoid(g, y1, pi1)
    c2, p2 = covering_groupoid(g, y2, pi2)
    prod, _, _ = fibre_product(p1, p2)
    pairs = [(a, b) for a in y1 for b in y2 if pi1[a] == pi2[b]]
    zeta_objs = tuple(f"{a}&{b}" for a, b in pairs)
    zeta_pi = {f"{a}&{b}": pi1[a] for a, b in pairs}
    joint, joint_proj = covering_groupoid(g, zeta_objs, zeta_pi)
    obj_map = {f"{a}&{b}": f"{a}:{g.id_of(pi1[a])}:{b}" for a, b in pairs}
    fibre: dict[str, list[tuple[str, str]]] = {x: [] for x in g.objects}
    for a, b in pairs:
        fibre[pi1[a]].append((a, b))
    mor_map = {}
    for m in g.morphisms:
        for a_t, b_t in fibre[m.tgt]:
            for a_s, b_s in fibre[m.src]:
                joint_name = f"{a_t}&{b_t}:{m.name}:{a_s}&{b_s}"
                alpha = g.id_of(m.src)
                prod_name = f"{a_t}:{m.name}:{a_s}:{b_t}:{m.name}:{b_s}:{alpha}"
                mor_map[joint_name] = prod_name
    f = GroupoidFunctor(joint, prod, obj_map, mor_map)
    return joint, f, prod


@dataclass(frozen=True)
class WeakEquivalenceReport:
    essentially_surjective: bool
    fully_faithful: bool
    witness: str | None

    @property
    def ok(self) -> bool:
        return self.essentially_surjective and self.fully_faithful


def is_weak_equivalence(f: GroupoidFunctor) -> WeakEquivalenceReport:
    """Essential surjectivity plus bijectivity on all hom sets."""
    validate_functor(f)
    src, tgt = f.source, f.target
    hom: dict[tuple[str, str], list[str]] = {}
    for m in tgt.morphisms:
        hom.setdefault((m.src, m.tgt), []).append(m.name)
    image_objs = {f.objects[x] for x in src.objects}
    ess = True
    witness = None
    for y in tgt.objects:
        if not any(hom.get((x, y)) for x in image_objs):
            ess = False
            witness = f"object {y!r} is not isomorphic to anything in the image"
            break
    ff = True
    if witness is None:
        shom: dict[tuple[str, str], list[str]] = {}
        for m in src.morphisms:
            shom.setdefault((m.src, m.tgt), []).append(m.name)
        for x1 in src.objects:
            for x2 in src.objects:
                dom = shom.get((x1, x2), [])
                cod = hom.get((f.objects[x1], f.objects[x2]), [])
                images = [f.morphisms[g] for g in dom]
                if len(set(images)) != len(images):
                    ff = False
                    witness = f"hom({x1!r}, {x2!r}) maps non-injectively"
                    break
                if set(images) != set(cod):
                    ff = False
                    witness = f"hom({x1!r}, {x2!r}) does not map onto its target hom set"
                    break
            if not ff:
                break
    else:
        ff = False
    return WeakEquivalenceReport(ess, ff if ess else False, witness)


# ---------------------------------------------------------------------------
# small utilities used across the library and the tests


def morphism_order(g, loop: str) -> int:
    gg = as_graded(g)
    if gg.src(loop) != gg.tgt(loop):
        raise GroupoidError(f"{loop!r} is not a loop")
    e = gg.id_of(gg.src(loop))
    k, cur = 1, loop
    while cur != e:
        cur = gg.comp(loop, cur)
        k += 1
        if k > len(gg.morphisms) + 1:
            raise GroupoidError(f"loop {loop!r} does not have finite order")
    return k


def default_modulus(g) -> int:
    """Twice the lcm of all loop orders; the doubling leaves room for signs."""
    import math

    gg = as_graded(g)
    m = 1
    for mor in gg.morphisms:
        if mor.src == mor.tgt:
            m = math.lcm(m, morphism_order(gg, mor.name))
    return 2 * m


def groupoids_isomorphic(g1, g2) -> dict[str, str] | None:
    """Exhaustive isomorphism search (intended for tests; <= 12 objects)."""
    a, b = as_graded(g1), as_graded(g2)
    if len(a.objects) > 12:
        raise UnsupportedInput("isomorphism search is exhaustive; too many objects")
    if len(a.objects) != len(b.objects) or len(a.morphisms) != len(b.morphisms):
        return None

    def profile(g, x):
        loops = len(g.isotropy(x))
        outs = sum(1 for m in g.morphisms if m.src == x)
        ins = sum(1 for m in g.morphisms if m.tgt == x)
        return (loops, outs, ins)

    prof_a = {x: profile(a, x) for x in a.objects}
    prof_b = {x: profile(b, x) for x in b.objects}
    b_hom: dict[tuple[str, str], list[str]] = {}
    for m in b.morphisms:
        b_hom.setdefault((m.src, m.tgt), []).append(m.name)

    for perm in itertools.permutations(b.objects):
        omap = dict(zip(a.objects, perm))
        if any(prof_a[x] != prof_b[omap[x]] for x in a.objects):
            continue
        mmap = _extend_iso_on_morphisms(a, b, omap, b_hom)
        if mmap is not None:
            return mmap
    return None


def _extend_iso_on_morphisms(a, b, omap, b_hom):
    mors = list(a.morphisms)
    assignment: dict[str, str] = {}
    used: set[str] = set()

    def consistent(new_name, new_img):
        trial = dict(assignment)
        trial[new_name] = new_img
        for g1 in trial:
            for g2 in trial:
                if (g1, g2) in a.base.compose:
                    g12 = a.base.compose[(g1, g2)]
                    if g12 in trial and b.base.compose.get((trial[g1], trial[g2])) != trial[g12]:
                        return False
        return True

    def backtrack(i):
        if i == len(mors):
            return True
        m = mors[i]
        want_src, want_tgt = omap[m.src], omap[m.tgt]
        for cand in b_hom.get((want_src, want_tgt), []):
            if cand in used:
                continue
            if a.grade(m.name) != b.grade(cand):
                continue
            if a.is_identity(m.name) != b.is_identity(cand):
                continue
            if consistent(m.name, cand):
                assignment[m.name] = cand
                used.add(cand)
                if backtrack(i + 1):
                    return True
                del assignment[m.name]
                used.discard(cand)
        return False

    if backtrack(0):
        return dict(assignment)
    return None
