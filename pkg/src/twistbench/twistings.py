"""Twisted extensions of graded groupoids, and bridges between their models.

In the fully trivialized finite setting a twisting of a graded groupoid is a
pair of cocycles: a parity part c valued in Z/2 on morphisms (the super-line
grading) and a phase part lambda valued in Z/m on composable pairs, the
latter a cocycle for the grading-twisted differential.  This module holds
that data structure together with the constructions that move twistings
between presentations:

* tensor and pullback along even functors,
* refinement witnesses (a phase per morphism) and full equivalence witnesses
  (refinement extended by a per-object parity/phase shift),
* the doubling of a central extension with involutive symmetry into a
  twisted extension of the associated graded semidirect groupoid,
* transgression of a group 3-cocycle to the conjugation action groupoid,
  computed by reducing formal fusion symbols rather than by a closed formula,
* the double-cover-with-degree presentation and its two-line descriptor.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from .cohomology import (
    CoefficientModule,
    Cochain,
    cohomology_group,
    graded_differential,
    nerve,
    pullback_cochain,
)
from .groupoids import (
    GradedGroupoid,
    GroupoidError,
    GroupoidFunctor,
    GroupTable,
    RealStructure,
    UnsupportedInput,
    as_graded,
    conjugation_groupoid,
    functor_is_even,
    phi_double_cover,
    semidirect_with_involution,
    validate_group_table,
    validate_real_structure,
)

__all__ = [
    "TwistingError",
    "TwistedExtension",
    "validate_extension",
    "trivial_extension",
    "tensor_extensions",
    "pullback_extension",
    "ExtensionClass",
    "extension_class",
    "is_refinement",
    "find_refinement",
    "EquivalenceWitness",
    "find_equivalence",
    "RealCentralExtension",
    "validate_real_extension",
    "real_to_graded",
    "MultiplicativeTwisting",
    "validate_multiplicative",
    "pentagon_defect",
    "FusionReduction",
    "transgression_phase",
    "transgress",
    "DFMTwisting",
    "validate_dfm",
    "TwoLineDescriptor",
    "validate_descriptor",
    "dfm_to_descriptor",
]


class TwistingError(ValueError):
    """A twisting datum violates one of its defining identities."""


PARITY_COEFF = CoefficientModule(2, "trivial")


def _phase_coeff(modulus: int) -> CoefficientModule:
    return CoefficientModule(modulus, "negation")


# ---------------------------------------------------------------------------
# twisted extensions


@dataclass(eq=False)
class TwistedExtension:
    """Trivialized twisting: a parity 1-cochain and a phase 2-cochain.

    parity holds the Z/2 grading of the (trivialized) line attached to each
    morphism; phase holds the Z/m value on each composable pair.  Neither is
    checked here; validate_extension performs the cocycle checks.
    """

    groupoid: GradedGroupoid
    modulus: int
    parity: Cochain
    phase: Cochain

    def __post_init__(self):
        self.groupoid = as_graded(self.groupoid)
        if self.modulus < 1:
            raise UnsupportedInput("twisted extensions need a finite modulus >= 1")
        for name, want_level, want_coeff, c in (
            ("parity", 1, PARITY_COEFF, self.parity),
            ("phase", 2, _phase_coeff(self.modulus), self.phase),
        ):
            if c.groupoid is not self.groupoid:
                raise TwistingError(f"{name} part lives on a different groupoid")
            if c.level != want_level or c.coeff != want_coeff:
                raise TwistingError(
                    f"{name} part must be a level-{want_level} cochain over {want_coeff}"
                )

    @classmethod
    def build(cls, g, modulus: int, parity=None, phase=None, cap=None):
        """Assemble from mappings; missing keys default to 0."""
        gg = as_graded(g)
        pc = Cochain.from_mapping(gg, 1, PARITY_COEFF, parity or {})
        fc = Cochain.from_mapping(gg, 2, _phase_coeff(modulus), phase or {})
        return cls(gg, modulus, pc, fc)

    def parity_of(self, morphism: str) -> int:
        return self.parity.value(morphism)

    def phase_of(self, g1: str, g2: str) -> int:
        return self.phase.value((g1, g2))

    def values_equal(self, other: "TwistedExtension") -> bool:
        return (
            self.groupoid is other.groupoid
            and self.modulus == other.modulus
            and self.parity.values == other.parity.values
            and self.phase.values == other.phase.values
        )


def trivial_extension(g, modulus: int) -> TwistedExtension:
    return TwistedExtension.build(g, modulus)


def validate_extension(e: TwistedExtension, cap=None) -> None:
    """Check both cocycle identities, naming the first failing tuple.

    The parity part must satisfy c(g1 o g2) = c(g1) + c(g2) mod 2 (the
    grading cannot act on Z/2 values, so this is the plain cocycle identity);
    the phase part must be killed by the grading-twisted differential.
    """
    gg = e.groupoid
    for pair in nerve(gg, 2, cap):
        g1, g2 = pair
        if (e.parity_of(gg.comp(g1, g2)) - e.parity_of(g1) - e.parity_of(g2)) % 2:
            raise TwistingError(f"parity part fails the cocycle identity on {pair}")
    defect = graded_differential(e.phase, cap)
    for key, val in zip(nerve(gg, 3, cap), defect.values):
        if val:
            raise TwistingError(
                f"phase part fails the twisted cocycle identity on {key}"
            )


def tensor_extensions(e1: TwistedExtension, e2: TwistedExtension) -> TwistedExtension:
    """Pointwise sum, with moduli merged to their lcm."""
    if e1.groupoid is not e2.groupoid:
        raise UnsupportedInput("tensor needs extensions on the same groupoid")
    m = math.lcm(e1.modulus, e2.modulus)
    coeff = _phase_coeff(m)
    lifted1 = Cochain(e1.groupoid, 2, coeff, tuple(v * (m // e1.modulus) for v in e1.phase.values))
    lifted2 = Cochain(e1.groupoid, 2, coeff, tuple(v * (m // e2.modulus) for v in e2.phase.values))
    return TwistedExtension(e1.groupoid, m, e1.parity + e2.parity, lifted1 + lifted2)


def pullback_extension(f: GroupoidFunctor, e: TwistedExtension, cap=None) -> TwistedExtension:
    """Precompose both parts with an even functor into e's groupoid."""
    if as_graded(f.target) is not e.groupoid:
        raise UnsupportedInput("extension does not live on the functor's target")
    if not functor_is_even(f):
        raise GroupoidError("pullback needs an even functor")
    return TwistedExtension(
        as_graded(f.source),
        e.modulus,
        pullback_cochain(f, e.parity, cap),
        pullback_cochain(f, e.phase, cap),
    )


@dataclass(frozen=True)
class ExtensionClass:
    """Coordinates of (parity class, phase class) in invariant-factor form."""

    parity_class: tuple[int, ...]
    phase_class: tuple[int, ...]
    parity_invariants: tuple[int, ...]
    phase_invariants: tuple[int, ...]

    def is_trivial(self) -> bool:
        return not any(self.parity_class) and not any(self.phase_class)


def _solvers(e: TwistedExtension, cap=None):
    s1 = cohomology_group(e.groupoid, 1, PARITY_COEFF, cap)
    s2 = cohomology_group(e.groupoid, 2, _phase_coeff(e.modulus), cap)
    return s1, s2


def extension_class(e: TwistedExtension, cap=None) -> ExtensionClass:
    """The complete invariant: degree-1 and degree-2 class coordinates."""
    s1, s2 = _solvers(e, cap)
    return ExtensionClass(
        s1.reduce_to_class(e.parity),
        s2.reduce_to_class(e.phase),
        s1.group,
        s2.group,
    )


def is_refinement(e1: TwistedExtension, e2: TwistedExtension, eta: Cochain) -> bool:
    """Whether the per-morphism phase eta carries e1 onto e2.

    Requires equal parity parts and, for every composable pair,
    phase2 - phase1 = eta(g1 o g2) - phi(g2) |> eta(g1) - eta(g2),
    which is exactly -(twisted differential of eta).
    """
    if e1.groupoid is not e2.groupoid or e1.modulus != e2.modulus:
        raise UnsupportedInput("refinement compares extensions on one groupoid and modulus")
    coeff = _phase_coeff(e1.modulus)
    if eta.groupoid is not e1.groupoid or eta.level != 1 or eta.coeff != coeff:
        raise TwistingError("refinement witness must be a level-1 phase cochain")
    if e1.parity.values != e2.parity.values:
        return False
    want = e2.phase - e1.phase
    have = -graded_differential(eta)
    return want.values == have.values


def find_refinement(e1: TwistedExtension, e2: TwistedExtension, cap=None):
    """A witness eta with is_refinement(e1, e2, eta), or None."""
    if e1.groupoid is not e2.groupoid or e1.modulus != e2.modulus:
        raise UnsupportedInput("refinement compares extensions on one groupoid and modulus")
    if e1.parity.values != e2.parity.values:
        return None
    _, s2 = _solvers(e1, cap)
    ok, eta = s2.is_cohomologous(e2.phase, e1.phase)
    if not ok:
        return None
    assert is_refinement(e1, e2, eta)
    return eta


@dataclass(eq=False)
class EquivalenceWitness:
    """Data carrying e1 onto e2 up to a per-object parity shift.

    parity_shift w satisfies parity2 - parity1 = w(s gamma) + w(t gamma);
    phase_shift eta satisfies phase2 - phase1 = -(twisted differential eta).
    """

    parity_shift: Cochain
    phase_shift: Cochain


def find_equivalence(e1: TwistedExtension, e2: TwistedExtension, cap=None):
    """Refinement extended by a rank-one parity shift; None when classes differ.

    Succeeds exactly when extension_class(e1) == extension_class(e2): the
    parity parts may then differ by the boundary of an object-indexed Z/2
    function (realized by conjugating with odd lines on those objects) and
    the phase parts by the boundary of a per-morphism phase.
    """
    if e1.groupoid is not e2.groupoid or e1.modulus != e2.modulus:
        raise UnsupportedInput("equivalence compares extensions on one groupoid and modulus")
    s1, s2 = _solvers(e1, cap)
    ok, w = s1.is_cohomologous(e1.parity, e2.parity)
    if not ok:
        return None
    ok, eta = s2.is_cohomologous(e2.phase, e1.phase)
    if not ok:
        return None
    if w is None:
        w = Cochain.zero(e1.groupoid, 0, PARITY_COEFF)
    if eta is None:
        eta = Cochain.zero(e1.groupoid, 1, _phase_coeff(e1.modulus))
    return EquivalenceWitness(w, eta)


# ---------------------------------------------------------------------------
# central extensions with involutive symmetry


@dataclass(eq=False)
class RealCentralExtension:
    """A phase 2-cocycle on an ungraded groupoid with involution, plus the
    per-morphism datum beta comparing the extension with its involution
    conjugate."""

    real: RealStructure
    modulus: int
    phase: Cochain
    beta: Cochain

    def __post_init__(self):
        g = as_graded(self.real.groupoid)
        if self.modulus < 1:
            raise UnsupportedInput("central extensions need a finite modulus >= 1")
        coeff = CoefficientModule(self.modulus, "trivial")
        if self.phase.groupoid is not g or self.phase.level != 2 or self.phase.coeff != coeff:
            raise TwistingError("phase part must be a level-2 cochain over the plain modulus")
        if self.beta.groupoid is not g or self.beta.level != 1 or self.beta.coeff != coeff:
            raise TwistingError("beta must be a level-1 cochain over the plain modulus")

    @classmethod
    def build(cls, real: RealStructure, modulus: int, phase=None, beta=None):
        g = as_graded(real.groupoid)
        coeff = CoefficientModule(modulus, "trivial")
        return cls(
            real,
            modulus,
            Cochain.from_mapping(g, 2, coeff, phase or {}),
            Cochain.from_mapping(g, 1, coeff, beta or {}),
        )


def validate_real_extension(r: RealCentralExtension, cap=None) -> None:
    """Check the cocycle identity and both involution compatibilities."""
    validate_real_structure(r.real)
    g = as_graded(r.real.groupoid)
    if not g.is_even():
        raise UnsupportedInput("the underlying groupoid of a central extension must be ungraded")
    m = r.modulus
    tau_m = r.real.tau.morphisms
    defect = graded_differential(r.phase, cap)
    for key, val in zip(nerve(g, 3, cap), defect.values):
        if val:
            raise TwistingError(f"phase part fails the cocycle identity on {key}")
    for mor in g.morphisms:
        if (r.beta.value(tau_m[mor.name]) - r.beta.value(mor.name)) % m:
            raise TwistingError(f"beta is not involution invariant at {mor.name!r}")
    for g1, g2 in nerve(g, 2, cap):
        lhs = r.beta.value(g.comp(g1, g2)) - r.phase.value((g1, g2))
        rhs = r.beta.value(g1) + r.beta.value(g2) + r.phase.value((tau_m[g1], tau_m[g2]))
        if (lhs - rhs) % m:
            raise TwistingError(f"beta fails the compatibility identity on {(g1, g2)}")


def real_to_graded(r: RealCentralExtension, cap=None):
    """Fold an involution-compatible central extension over the doubled groupoid.

    Returns (extension, embed) where embed is the even inclusion of the
    original groupoid into its graded semidirect double.  The output phase on
    a composable pair ((a, x), (d, y)) depends on the two signs:

        (+,+) -> phase(a, d)
        (-,+) -> phase(tau a, d)
        (+,-) -> beta(a) + phase(tau a, tau d)
        (-,-) -> beta(a) + phase(a, tau d)

    The output parity part is zero and its phase module carries the negation
    involution, so odd morphisms conjugate coefficients downstream.
    """
    validate_real_extension(r, cap)
    doubled, embed = semidirect_with_involution(r.real)
    tau_m = r.real.tau.morphisms
    m = r.modulus
    sign_of = {}
    base_of = {}
    for mor in r.real.groupoid.morphisms:
        for tag, s in (("+", +1), ("-", -1)):
            nm = f"{mor.name}:{tag}"
            sign_of[nm] = s
            base_of[nm] = mor.name
    values = {}
    for n1, n2 in nerve(doubled, 2, cap):
        a, x = base_of[n1], sign_of[n1]
        d, y = base_of[n2], sign_of[n2]
        if x == +1 and y == +1:
            v = r.phase.value((a, d))
        elif x == -1 and y == +1:
            v = r.phase.value((tau_m[a], d))
        elif x == +1 and y == -1:
            v = r.beta.value(a) + r.phase.value((tau_m[a], tau_m[d]))
        else:
            v = r.beta.value(a) + r.phase.value((a, tau_m[d]))
        values[(n1, n2)] = v % m
    out = TwistedExtension.build(doubled, m, {}, values)
    return out, embed


# ---------------------------------------------------------------------------
# multiplicative twistings and transgression


@dataclass(eq=False)
class MultiplicativeTwisting:
    """A 3-cochain on a finite group, the skeletal form of an associativity
    twisting; valid when it satisfies the pentagon identity."""

    group: GroupTable
    modulus: int
    omega: dict[tuple[str, str, str], int]

    def __post_init__(self):
        if self.modulus < 1:
            raise UnsupportedInput("multiplicative twistings need a finite modulus >= 1")
        els = set(self.group.elements)
        clean = {}
        for key, v in self.omega.items():
            t = tuple(key)
            if len(t) != 3 or any(x not in els for x in t):
                raise TwistingError(f"associator key {key!r} is not a triple of group elements")
            clean[t] = v % self.modulus
        self.omega = clean

    def value(self, a: str, b: str, c: str) -> int:
        return self.omega.get((a, b, c), 0)


def pentagon_defect(t: MultiplicativeTwisting, quad) -> int:
    a, b, c, d = quad
    mul = t.group.mul
    return (
        t.value(b, c, d)
        - t.value(mul[(a, b)], c, d)
        + t.value(a, mul[(b, c)], d)
        - t.value(a, b, mul[(c, d)])
        + t.value(a, b, c)
    ) % t.modulus


def validate_multiplicative(t: MultiplicativeTwisting) -> None:
    """Pentagon identity over all element quadruples; first failure named."""
    validate_group_table(t.group)
    for quad in itertools.product(t.group.elements, repeat=4):
        if pentagon_defect(t, quad):
            raise TwistingError(f"associator fails the pentagon identity on {quad}")


@dataclass(eq=False)
class FusionReduction:
    """Phase bookkeeping while cancelling formal fusion symbols.

    A factor (a, b, +1) stands for the chosen map line(a) (x) line(b) ->
    line(ab); (a, b, -1) for its inverse.  Rewriting a pair of factors along
    the associator shifts the accumulated phase by the associator value, with
    the opposite shift on inverse factors; a factor and its inverse may be
    created or cancelled freely.  Factors commute because every symbol is a
    map between one-dimensional spaces.
    """

    table: GroupTable
    omega: dict[tuple[str, str, str], int]
    modulus: int
    factors: Counter = field(default_factory=Counter)
    phase: int = 0

    def _value(self, a, b, c):
        return self.omega.get((a, b, c), 0)

    def _take(self, a, b, sign):
        key = (a, b, sign)
        if self.factors[key] <= 0:
            raise TwistingError(f"reduction step needs an absent factor {key}")
        self.factors[key] -= 1
        if not self.factors[key]:
            del self.factors[key]

    def _put(self, a, b, sign):
        self.factors[(a, b, sign)] += 1

    def seed(self, a, b, sign):
        self._put(a, b, sign)
        return self

    def create(self, a, b):
        self._put(a, b, +1)
        self._put(a, b, -1)

    def annihilate(self, a, b):
        self._take(a, b, +1)
        self._take(a, b, -1)

    def assoc(self, a, b, c, sign=+1):
        """Rewrite {(a,b), (ab,c)} -> {(b,c), (a,bc)} on factors of one sign.

        On direct factors (sign +1) the phase moves by +omega(a,b,c); on
        inverse factors by -omega(a,b,c).
        """
        mul = self.table.mul
        self._take(a, b, sign)
        self._take(mul[(a, b)], c, sign)
        self._put(b, c, sign)
        self._put(a, mul[(b, c)], sign)
        self.phase = (self.phase + sign * self._value(a, b, c)) % self.modulus

    def assoc_back(self, a, b, c, sign=+1):
        mul = self.table.mul
        self._take(b, c, sign)
        self._take(a, mul[(b, c)], sign)
        self._put(a, b, sign)
        self._put(mul[(a, b)], c, sign)
        self.phase = (self.phase - sign * self._value(a, b, c)) % self.modulus

    def is_vacuum(self) -> bool:
        return not self.factors


def _conjugate(table: GroupTable, w: str, u: str) -> str:
    return table.mul[(table.mul[(table.inverse(u), w)], u)]


def _seed_pair_state(red: FusionReduction, u: str, w: str, v: str):
    """Load the symbols of two composable conjugation morphisms and the dual
    of their composite: morphism (g, x) at point x carries {(x,g)+, (g,s)-}
    with s the source point."""
    mul = red.table.mul
    b = _conjugate(red.table, w, u)
    h = _conjugate(red.table, b, v)
    red.seed(w, u, +1).seed(u, b, -1)
    red.seed(b, v, +1).seed(v, h, -1)
    red.seed(mul[(u, v)], h, +1).seed(w, mul[(u, v)], -1)
    return b, h


def transgression_phase(table: GroupTable, omega, modulus: int, u: str, w: str, v: str, order: str = "inner-first") -> int:
    """Phase of the composite fusion map on one composable pair.

    u acts at point w, v acts at the conjugated point; the value is read off
    by cancelling all fusion symbols of the pair against the composite's.
    Two reduction orders are implemented to witness path independence.
    """
    red = FusionReduction(table, dict(omega), modulus)
    b, h = _seed_pair_state(red, u, w, v)
    mul = red.table.mul
    ub, vh, uv = mul[(u, b)], mul[(v, h)], mul[(u, v)]
    if order == "inner-first":
        red.create(u, v)
        red.assoc(u, v, h, +1)
        red.annihilate(v, h)
        red.create(ub, v)
        red.assoc(u, b, v, -1)
        red.annihilate(b, v)
        red.annihilate(u, vh)
        red.assoc(w, u, v, +1)
        red.annihilate(u, v)
        red.annihilate(w, uv)
    elif order == "outer-first":
        red.create(ub, v)
        red.assoc(w, u, v, +1)
        red.annihilate(w, uv)
        red.assoc(u, b, v, -1)
        red.annihilate(b, v)
        red.assoc(u, v, h, +1)
        red.annihilate(v, h)
        red.annihilate(u, vh)
    else:
        raise ValueError(f"unknown reduction order {order!r}")
    if not red.is_vacuum():
        raise AssertionError("fusion reduction did not reach the vacuum state")
    return red.phase


def transgress(t: MultiplicativeTwisting, cap=None, order: str = "inner-first"):
    """Push an associator twisting onto the conjugation action groupoid.

    The output is an ungraded extension (parity 0, trivial grading) whose
    phase on a composable pair of conjugation morphisms is the fusion-symbol
    reduction phase.  The input must satisfy the pentagon identity.
    """
    validate_multiplicative(t)
    conj = conjugation_groupoid(t.group)
    values = {}
    for n1, n2 in nerve(conj, 2, cap):
        u, w = n1.split("@")
        v, b = n2.split("@")
        values[(n1, n2)] = transgression_phase(t.group, t.omega, t.modulus, u, w, v, order)
    return TwistedExtension.build(conj, t.modulus, {}, values)


# ---------------------------------------------------------------------------
# double-cover-with-degree twistings


@dataclass(eq=False)
class DFMTwisting:
    """A twisting presented on the grading-induced double cover: an integer
    degree per cover object, constant along morphisms, plus a twisted
    extension of the cover."""

    base: GradedGroupoid
    cover: GradedGroupoid
    projection: GroupoidFunctor
    degree: dict[str, int]
    extension: TwistedExtension

    @classmethod
    def build(cls, base, degree, modulus: int, parity=None, phase=None):
        base = as_graded(base)
        cover, proj = phi_double_cover(base)
        ext = TwistedExtension.build(cover, modulus, parity, phase)
        return cls(base, cover, proj, dict(degree), ext)


def validate_dfm(t: DFMTwisting, cap=None) -> None:
    if t.extension.groupoid is not t.cover:
        raise TwistingError("extension must live on the cover")
    missing = [x for x in t.cover.objects if x not in t.degree]
    if missing:
        raise TwistingError(f"degree map is missing cover objects {missing}")
    for mor in t.cover.morphisms:
        if t.degree[mor.src] != t.degree[mor.tgt]:
            raise TwistingError(f"degree map is not constant along {mor.name!r}")
    validate_extension(t.extension, cap)


@dataclass(eq=False)
class TwoLineDescriptor:
    """Classification triple in coordinates: a Z/2 component label per object
    together with a twisted extension."""

    extension: TwistedExtension
    alpha: dict[str, int]


def validate_descriptor(d: TwoLineDescriptor, cap=None) -> None:
    g = d.extension.groupoid
    missing = [x for x in g.objects if x not in d.alpha]
    if missing:
        raise TwistingError(f"alpha is missing objects {missing}")
    for mor in g.morphisms:
        if (d.alpha[mor.src] - d.alpha[mor.tgt]) % 2:
            raise TwistingError(f"alpha is not constant along {mor.name!r}")
    validate_extension(d.extension, cap)


def dfm_to_descriptor(t: DFMTwisting, cap=None) -> TwoLineDescriptor:
    """Reduce the integer degree to its parity label, keeping the extension."""
    validate_dfm(t, cap)
    alpha = {x: t.degree[x] % 2 for x in t.cover.objects}
    return TwoLineDescriptor(t.extension, alpha)
