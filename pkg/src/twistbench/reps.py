"""Twisted, possibly antiunitary, parity-graded representations.

A twisted morphism datum carries one complex block matrix per groupoid
morphism, acting between super vector spaces attached to the objects; the
operator is antilinear exactly on odd morphisms and its matrices satisfy

    T(g1) o T(g2) = sigma(phase difference) . T(g1 o g2)

where the scalar is conjugated when the composite morphism is odd.  On top of
the validator this module provides direct sums, tensor composition with the
Koszul sign, intertwiner spaces solved as real-linear systems, the R/C/H
endomorphism trichotomy, centre-dimension simple counts, and the evenness
check for antiunitary generators squaring to -1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .cohomology import nerve
from .groupoids import UnsupportedInput
from .twistings import TwistedExtension, extension_class, trivial_extension, validate_extension

__all__ = [
    "RepError",
    "MorphismOp",
    "TwistedMorphismData",
    "RepReport",
    "validate_rep",
    "direct_sum",
    "compose_morphisms",
    "IntertwinerSpace",
    "intertwiner_space",
    "is_irreducible",
    "endo_type",
    "SimpleCountReport",
    "simple_count_report",
    "count_simples",
    "KramersReport",
    "kramers_check",
]


class RepError(ValueError):
    """Representation data is structurally unusable (shapes, coverage)."""


def _phase(value: int, modulus: int) -> complex:
    return cmath.exp(2j * math.pi * value / modulus)


@dataclass(eq=False)
class MorphismOp:
    """One operator: a complex matrix, applied to conjugated coordinates when
    antilinear is set."""

    matrix: np.ndarray
    antilinear: bool = False

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)

    def apply_after(self, other: "MorphismOp") -> np.ndarray:
        """Matrix of self composed after other (self o other)."""
        m2 = np.conj(other.matrix) if self.antilinear else other.matrix
        return self.matrix @ m2


@dataclass(eq=False)
class TwistedMorphismData:
    """A super vector space per object with one operator per morphism,
    conjugating the source twisting into the target twisting."""

    source: TwistedExtension
    target: TwistedExtension
    dims: dict[str, tuple[int, int]]
    ops: dict[str, MorphismOp]
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.source.groupoid is not self.target.groupoid:
            raise RepError("source and target twistings live on different groupoids")
        if self.source.modulus != self.target.modulus:
            raise RepError("source and target twistings have different moduli")
        if not self.tolerance > 0:
            raise RepError("tolerance must be positive")
        g = self.source.groupoid
        for x in g.objects:
            if x not in self.dims:
                raise RepError(f"dims is missing object {x!r}")
            p, q = self.dims[x]
            if p < 0 or q < 0:
                raise RepError(f"dims at {x!r} must be nonnegative")
        for m in g.morphisms:
            if m.name not in self.ops:
                raise RepError(f"ops is missing morphism {m.name!r}")
            op = self.ops[m.name]
            want = (self.total_dim(m.tgt), self.total_dim(m.src))
            if op.matrix.shape != want:
                raise RepError(
                    f"operator at {m.name!r} has shape {op.matrix.shape}, needs {want}"
                )

    @classmethod
    def rep(cls, extension: TwistedExtension, dims, ops, tolerance: float = 1e-9):
        """A twisted representation: target taken to be the trivial twisting."""
        return cls(
            extension,
            trivial_extension(extension.groupoid, extension.modulus),
            dict(dims),
            {k: v if isinstance(v, MorphismOp) else MorphismOp(*v) for k, v in ops.items()},
            tolerance,
        )

    @property
    def groupoid(self):
        return self.source.groupoid

    def total_dim(self, obj: str) -> int:
        p, q = self.dims[obj]
        return p + q

    def parity_vector(self, obj: str) -> np.ndarray:
        p, q = self.dims[obj]
        return np.array([0] * p + [1] * q, dtype=int)

    def op_degree(self, morphism: str) -> int:
        return (self.source.parity_of(morphism) + self.target.parity_of(morphism)) % 2

    def phase_difference(self, g1: str, g2: str) -> int:
        return (self.source.phase_of(g1, g2) - self.target.phase_of(g1, g2)) % self.source.modulus


@dataclass(frozen=True)
class RepReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def validate_rep(r: TwistedMorphismData, cap=None) -> RepReport:
    """Check flags, invertibility, parity homogeneity, and the composition
    relation on every composable pair; structural defects raise RepError."""
    g = r.groupoid
    tol = r.tolerance
    failures = []
    for m in g.morphisms:
        op = r.ops[m.name]
        if op.antilinear != (g.grade(m.name) == -1):
            failures.append(f"antilinear flag at {m.name!r} disagrees with the grading")
        if min(op.matrix.shape) != max(op.matrix.shape):
            failures.append(f"operator at {m.name!r} is not square, cannot be invertible")
            continue
        if op.matrix.size:
            sv = np.linalg.svd(op.matrix, compute_uv=False)
            if sv[-1] <= tol * max(1.0, sv[0]):
                failures.append(f"operator at {m.name!r} is singular at tolerance {tol}")
        deg = r.op_degree(m.name)
        pt, ps = r.parity_vector(m.tgt), r.parity_vector(m.src)
        bad = (pt[:, None] + ps[None, :] + deg) % 2 == 1
        if op.matrix.size and np.abs(op.matrix[bad]).max(initial=0.0) > tol:
            failures.append(f"operator at {m.name!r} is not parity homogeneous of degree {deg}")
    m_ = r.source.modulus
    for g1, g2 in nerve(g, 2, cap):
        lhs = r.ops[g1].apply_after(r.ops[g2])
        scalar = _phase(r.phase_difference(g1, g2), m_)
        prod = g.comp(g1, g2)
        if g.grade(prod) == -1:
            scalar = scalar.conjugate()
        rhs = scalar * r.ops[prod].matrix
        scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
        if lhs.size and np.abs(lhs - rhs).max(initial=0.0) > tol * scale:
            failures.append(f"composition relation fails on {(g1, g2)}")
    return RepReport(tuple(failures))


# ---------------------------------------------------------------------------
# sums and tensor composition


def _even_first(parities):
    """Positions sorted stably with even entries first; returns the list of
    original indices in new order."""
    order = [i for i, p in enumerate(parities) if p % 2 == 0]
    order += [i for i, p in enumerate(parities) if p % 2 == 1]
    return order


def direct_sum(r1: TwistedMorphismData, r2: TwistedMorphismData) -> TwistedMorphismData:
    """Blockwise sum with the even-first basis convention restored."""
    if r1.source is not r2.source and not r1.source.values_equal(r2.source):
        raise RepError("direct sum needs equal source twistings")
    if r1.target is not r2.target and not r1.target.values_equal(r2.target):
        raise RepError("direct sum needs equal target twistings")
    g = r1.groupoid
    dims = {}
    place = {}
    for x in g.objects:
        p1, q1 = r1.dims[x]
        p2, q2 = r2.dims[x]
        dims[x] = (p1 + p2, q1 + q2)
        parities = [0] * p1 + [1] * q1 + [0] * p2 + [1] * q2
        place[x] = _even_first(parities)
    ops = {}
    for m in g.morphisms:
        a, b = r1.ops[m.name].matrix, r2.ops[m.name].matrix
        block = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
        block[: a.shape[0], : a.shape[1]] = a
        block[a.shape[0] :, a.shape[1] :] = b
        mat = block[np.ix_(place[m.tgt], place[m.src])]
        ops[m.name] = MorphismOp(mat, r1.ops[m.name].antilinear)
    return TwistedMorphismData(r1.source, r1.target, dims, ops, min(r1.tolerance, r2.tolerance))


def compose_morphisms(outer: TwistedMorphismData, inner: TwistedMorphismData) -> TwistedMorphismData:
    """Tensor composition: outer conjugates e2 into e3, inner conjugates e1
    into e2; the result conjugates e1 into e3.  The operator on the tensor
    factor picks up the Koszul sign (-1)^{|inner op| . |outer source vector|}.
    """
    if outer.source is not inner.target and not outer.source.values_equal(inner.target):
        raise RepError("composition needs outer.source == inner.target")
    g = outer.groupoid
    # The Koszul sign makes the composite relation pick up
    # (-1)^(deg_inner(g1) * deg_outer(g2)) on composable pairs; that product of
    # parity degrees is a cocycle no per-morphism gauge can remove, so the
    # composite is only a valid datum when it vanishes (e.g. one factor even).
    for g1, g2 in nerve(g, 2):
        if inner.op_degree(g1) * outer.op_degree(g2) % 2:
            raise UnsupportedInput(
                f"composite is obstructed: odd operator degrees pair up on {(g1, g2)}"
            )
    dims = {}
    place = {}
    for x in g.objects:
        po, qo = outer.dims[x]
        pi_, qi = inner.dims[x]
        dims[x] = (po * pi_ + qo * qi, po * qi + qo * pi_)
        par_o = [0] * po + [1] * qo
        par_i = [0] * pi_ + [1] * qi
        pair_par = [(a + b) % 2 for a in par_o for b in par_i]
        place[x] = _even_first(pair_par)
    ops = {}
    for m in g.morphisms:
        mo, mi = outer.ops[m.name], inner.ops[m.name]
        deg = inner.op_degree(m.name)
        par_src_outer = outer.parity_vector(m.src)
        di = inner.total_dim(m.src)
        kron = np.kron(mo.matrix, mi.matrix)
        if deg % 2:
            col_sign = np.array(
                [(-1) ** int(par_src_outer[a]) for a in range(len(par_src_outer)) for _ in range(di)],
                dtype=complex,
            )
            kron = kron * col_sign[None, :]
        mat = kron[np.ix_(place[m.tgt], place[m.src])]
        ops[m.name] = MorphismOp(mat, mo.antilinear)
    return TwistedMorphismData(
        inner.source, outer.target, dims, ops, min(outer.tolerance, inner.tolerance)
    )


# ---------------------------------------------------------------------------
# intertwiners and the endomorphism trichotomy


@dataclass(eq=False)
class IntertwinerSpace:
    """Solutions X (one block per object) of X T1 = T2 X, as a real vector
    space; the even part restricts X to parity-preserving blocks."""

    real_dimension: int
    basis: tuple[dict[str, np.ndarray], ...]
    even_real_dimension: int


def _solve_intertwiners(r1, r2, even_only: bool):
    g = r1.groupoid
    tol = min(r1.tolerance, r2.tolerance)
    offsets = {}
    shapes = {}
    entries = {}
    total = 0
    for x in g.objects:
        d1, d2 = r1.total_dim(x), r2.total_dim(x)
        shapes[x] = (d2, d1)
        if even_only:
            p1, p2 = r1.parity_vector(x), r2.parity_vector(x)
            keep = [(i, j) for i in range(d2) for j in range(d1) if (p2[i] + p1[j]) % 2 == 0]
        else:
            keep = [(i, j) for i in range(d2) for j in range(d1)]
        entries[x] = keep
        offsets[x] = total
        total += len(keep)
    if total == 0:
        return [], shapes
    rows = []
    for m in g.morphisms:
        x, y = m.src, m.tgt
        a1 = r1.ops[m.name].matrix
        a2 = r2.ops[m.name].matrix
        anti = r1.ops[m.name].antilinear
        # X_y a1 - a2 K(X_x) = 0, K = conj on antilinear morphisms
        for i in range(shapes[y][0]):
            for j in range(a1.shape[1]):
                row_re = np.zeros(2 * total)
                row_im = np.zeros(2 * total)
                for pos, (ii, kk) in enumerate(entries[y]):
                    if ii != i:
                        continue
                    c = a1[kk, j]
                    col = offsets[y] + pos
                    # (re + i im) * c contributes to both real and imag rows
                    row_re[col] += c.real
                    row_re[total + col] -= c.imag
                    row_im[col] += c.imag
                    row_im[total + col] += c.real
                for pos, (kk, jj) in enumerate(entries[x]):
                    if jj != j:
                        continue
                    c = a2[i, kk]
                    col = offsets[x] + pos
                    sgn = -1.0 if anti else 1.0
                    # minus a2[i,kk] * (re + sgn * i im)
                    row_re[col] -= c.real
                    row_re[total + col] += sgn * c.imag
                    row_im[col] -= c.imag
                    row_im[total + col] -= sgn * c.real
                rows.append(row_re)
                rows.append(row_im)
    if not rows:
        system = np.zeros((1, 2 * total))
    else:
        system = np.array(rows)
    _, sv, vh = np.linalg.svd(system)
    cut = tol * max(1.0, sv[0] if sv.size else 0.0)
    null = [vh[k] for k in range(vh.shape[0]) if k >= sv.size or sv[k] <= cut]
    basis = []
    for vec in null:
        mats = {}
        for x in g.objects:
            mat = np.zeros(shapes[x], dtype=complex)
            for pos, (i, j) in enumerate(entries[x]):
                col = offsets[x] + pos
                mat[i, j] = vec[col] + 1j * vec[total + col]
            mats[x] = mat
        basis.append(mats)
    return basis, shapes


def intertwiner_space(r1: TwistedMorphismData, r2: TwistedMorphismData) -> IntertwinerSpace:
    """Real-linear solve of the intertwiner equations between two data with
    the same source and target twistings."""
    if r1.source is not r2.source or r1.target is not r2.target:
        if not (r1.source.values_equal(r2.source) and r1.target.values_equal(r2.target)):
            raise RepError("intertwiners need matching source and target twistings")
    full, _ = _solve_intertwiners(r1, r2, even_only=False)
    even, _ = _solve_intertwiners(r1, r2, even_only=True)
    return IntertwinerSpace(len(full), tuple(full), len(even))


def _random_selfadjoint_commutant(r, basis, seed):
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(len(basis))
    combo = {}
    for x in r.groupoid.objects:
        acc = np.zeros((r.total_dim(x), r.total_dim(x)), dtype=complex)
        for c, mats in zip(coeffs, basis):
            acc = acc + c * mats[x]
        combo[x] = (acc + acc.conj().T) / 2
    return combo


def is_irreducible(r: TwistedMorphismData, seed: int = 0) -> bool:
    """No proper invariant sub-datum: the even self-intertwiner space is a
    division algebra (real dimension 1, 2 or 4) and a random self-adjoint
    commutant element has a single eigenvalue cluster."""
    report = validate_rep(r)
    if not report.ok:
        raise RepError("cannot test irreducibility of invalid data: " + report.failures[0])
    total = sum(r.total_dim(x) for x in r.groupoid.objects)
    if total == 0:
        return False
    space = intertwiner_space(r, r)
    if space.even_real_dimension not in (1, 2, 4):
        return False
    even_basis, _ = _solve_intertwiners(r, r, even_only=True)
    combo = _random_selfadjoint_commutant(r, even_basis, seed)
    eigs = np.concatenate([np.linalg.eigvalsh(combo[x]) for x in r.groupoid.objects if r.total_dim(x)])
    spread = float(eigs.max() - eigs.min()) if eigs.size else 0.0
    cut = max(r.tolerance * 1e3, 1e-8) * max(1.0, float(np.abs(eigs).max(initial=0.0)))
    return spread <= cut


def endo_type(r: TwistedMorphismData, seed: int = 0) -> str:
    """The real division algebra of even self-intertwiners: R, C or H."""
    if not is_irreducible(r, seed):
        raise UnsupportedInput("endomorphism type is defined for irreducible data only")
    dim = intertwiner_space(r, r).even_real_dimension
    return {1: "R", 2: "C", 4: "H"}[dim]


# ---------------------------------------------------------------------------
# simple counts via the centre of the twisted groupoid algebra


@dataclass(frozen=True)
class SimpleCountReport:
    count: int
    gap: float
    tolerance: float


def simple_count_report(e: TwistedExtension, tolerance: float = 1e-9, cap=None) -> SimpleCountReport:
    """Dimension of the centre of the twisted groupoid algebra.

    The algebra has one generator per morphism, with u(g1) u(g2) equal to
    phase(g1, g2) times u(g1 o g2) when composable and zero otherwise; the
    centre dimension counts simple modules.  Only ungraded (all even)
    twistings are supported: with antilinear generators the centre is a real
    algebra and a single integer is not a meaningful summary.
    """
    g = e.groupoid
    if not g.is_even():
        raise UnsupportedInput("simple counting needs an ungraded twisting (phi = 1)")
    if any(v for v in e.parity.values):
        raise UnsupportedInput("simple counting needs a purely even (parity 0) twisting")
    validate_extension(e, cap)
    names = [m.name for m in g.morphisms]
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    m_ = e.modulus
    rows: dict[tuple[str, str], np.ndarray] = {}
    for g1, g2 in nerve(g, 2, cap):
        prod = g.comp(g1, g2)
        # z u(g2): the g1 coordinate of z lands on u(prod)
        key = (g2, prod)
        row = rows.get(key)
        if row is None:
            row = rows[key] = np.zeros(n, dtype=complex)
        row[index[g1]] += _phase(e.phase_of(g1, g2), m_)
        # u(g1) z: the g2 coordinate of z lands on u(prod)
        key = (g1, prod)
        row = rows.get(key)
        if row is None:
            row = rows[key] = np.zeros(n, dtype=complex)
        row[index[g2]] -= _phase(e.phase_of(g1, g2), m_)
    system = np.array([rows[k] for k in sorted(rows)]) if rows else np.zeros((1, n), dtype=complex)
    sv = np.linalg.svd(system, compute_uv=False)
    sv = np.concatenate([sv, np.zeros(max(0, n - sv.size))])
    cut = tolerance * max(1.0, float(sv[0]) if sv.size else 0.0)
    null = int(np.sum(sv <= cut))
    above = sorted(float(s) for s in sv if s > cut)
    gap = above[0] if above else math.inf
    return SimpleCountReport(null, gap, tolerance)


def count_simples(e: TwistedExtension, tolerance: float = 1e-9, cap=None) -> int:
    return simple_count_report(e, tolerance, cap).count


# ---------------------------------------------------------------------------
# evenness of antiunitary representations (Kramers degeneracy)


@dataclass(frozen=True)
class KramersReport:
    phase_class_nontrivial: bool
    checked: int
    odd_dimensional: tuple[int, ...]
    invalid: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.odd_dimensional


def kramers_check(e: TwistedExtension, reps, cap=None) -> KramersReport:
    """For a nontrivial phase class, every valid representation must have even
    total dimension; lists the indices of counterexamples."""
    validate_extension(e, cap)
    nontrivial = any(extension_class(e, cap).phase_class)
    odd, invalid = [], []
    checked = 0
    for i, r in enumerate(reps):
        if not (r.source is e or r.source.values_equal(e)):
            raise RepError(f"representation {i} does not have the given twisting as source")
        if not validate_rep(r, cap).ok:
            invalid.append(i)
            continue
        checked += 1
        total = sum(r.total_dim(x) for x in r.groupoid.objects)
        if nontrivial and total % 2 == 1:
            odd.append(i)
    return KramersReport(nontrivial, checked, tuple(odd), tuple(invalid))
