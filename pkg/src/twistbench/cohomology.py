"""Cohomology of graded groupoids with sign-twisted integer coefficients.

Cochains in degree l are integer-valued functions on composable l-tuples
(degree 0: on objects), with values in Z or Z/m.  The grading enters the
last face of the differential: the coefficient involution acts there through
the sign of the last morphism.  With 1-based tuple entries,

    (Df)(g_1, ..., g_{l+1}) = f(g_2, ..)
                              + sum_p (-1)^p f(.., g_p g_{p+1}, ..)
                              + (-1)^{l+1} phi(g_{l+1}) |> f(g_1, ..)

and in degree 0, (Df)(g) = f(src g) - phi(g) |> f(tgt g).

Everything downstream is exact: the solver runs on integer Smith normal
forms, so invariant factors, class coordinates and coboundary witnesses are
certificates, not floating point guesses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .groupoids import (
    GradedGroupoid,
    GroupoidError,
    GroupoidFunctor,
    UnsupportedInput,
    as_graded,
    functor_is_even,
    nerve,
)

INVOLUTIONS = ("trivial", "negation")


class NotACocycle(ValueError):
    def __init__(self, level, where):
        self.level = level
        self.where = where
        super().__init__(f"not a cocycle in degree {level}: differential is nonzero at {where}")


@dataclass(frozen=True)
class CoefficientModule:
    """Z (modulus 0) or Z/m, with the sign action used on the last face."""

    modulus: int = 0
    involution: str = "trivial"

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be >= 0 (0 means the integers)")
        if self.involution not in INVOLUTIONS:
            raise ValueError(f"involution must be one of {INVOLUTIONS}")

    def act(self, sign: int, value: int) -> int:
        if sign == -1 and self.involution == "negation":
            return -value
        return value

    def normalize(self, value: int) -> int:
        return value % self.modulus if self.modulus else value


@lru_cache(maxsize=None)
def _nerve_index(g: GradedGroupoid, level: int, cap: int | None):
    return {t: i for i, t in enumerate(nerve(g, level, cap))}


@dataclass(eq=False)
class Cochain:
    groupoid: GradedGroupoid
    level: int
    coeff: CoefficientModule
    values: tuple[int, ...]

    def __post_init__(self):
        self.groupoid = as_graded(self.groupoid)
        keys = nerve(self.groupoid, self.level)
        if len(self.values) != len(keys):
            raise ValueError(
                f"degree {self.level} cochain needs {len(keys)} values, got {len(self.values)}"
            )
        self.values = tuple(self.coeff.normalize(int(v)) for v in self.values)

    @classmethod
    def zero(cls, g, level, coeff):
        g = as_graded(g)
        return cls(g, level, coeff, (0,) * len(nerve(g, level)))

    @classmethod
    def from_mapping(cls, g, level, coeff, mapping):
        """Missing keys default to 0; keys outside the nerve are rejected."""
        g = as_graded(g)
        index = _nerve_index(g, level, None)
        vals = [0] * len(index)
        for key, v in mapping.items():
            t = (key,) if isinstance(key, str) else tuple(key)
            if t not in index:
                raise ValueError(f"key {t!r} is not a composable {level}-tuple")
            vals[index[t]] = int(v)
        return cls(g, level, coeff, tuple(vals))

    def value(self, key) -> int:
        t = (key,) if isinstance(key, str) else tuple(key)
        return self.values[_nerve_index(self.groupoid, self.level, None)[t]]

    def as_mapping(self) -> dict:
        keys = nerve(self.groupoid, self.level)
        return {t: v for t, v in zip(keys, self.values) if v != 0}

    def _compatible(self, other: "Cochain"):
        if self.groupoid is not other.groupoid or self.level != other.level:
            raise ValueError("cochains live on different complexes")
        if self.coeff != other.coeff:
            raise ValueError("cochains have different coefficients")

    def __add__(self, other):
        self._compatible(other)
        return Cochain(
            self.groupoid,
            self.level,
            self.coeff,
            tuple(a + b for a, b in zip(self.values, other.values)),
        )

    def __sub__(self, other):
        self._compatible(other)
        return Cochain(
            self.groupoid,
            self.level,
            self.coeff,
            tuple(a - b for a, b in zip(self.values, other.values)),
        )

    def __neg__(self):
        return Cochain(self.groupoid, self.level, self.coeff, tuple(-a for a in self.values))

    def scale(self, k: int):
        return Cochain(self.groupoid, self.level, self.coeff, tuple(k * a for a in self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


def _faces(gg: GradedGroupoid, t: tuple[str, ...]):
    """Faces of a composable tuple, with sign and involution weight.

    Yields (face_key, sign, weight); the weight is the grade fed to the
    coefficient involution (always +1 except on the last face).
    """
    l1 = len(t)
    if l1 == 1:
        g = t[0]
        yield (gg.src(g),), +1, +1
        yield (gg.tgt(g),), -1, gg.grade(g)
        return
    yield t[1:], +1, +1
    sign = +1
    for p in range(1, l1):
        sign = -sign
        yield t[: p - 1] + (gg.comp(t[p - 1], t[p]),) + t[p + 1 :], sign, +1
    yield t[:-1], (-1) ** l1, gg.grade(t[-1])


def graded_differential(c: Cochain, cap: int | None = None) -> Cochain:
    """The degree-raising twisted differential."""
    gg = c.groupoid
    out_keys = nerve(gg, c.level + 1, cap)
    idx = _nerve_index(gg, c.level, cap)
    vals = []
    for t in out_keys:
        acc = 0
        for face, sign, weight in _faces(gg, t):
            acc += sign * c.coeff.act(weight, c.values[idx[face]])
        vals.append(acc)
    return Cochain(gg, c.level + 1, c.coeff, tuple(vals))


@dataclass(frozen=True)
class DifferentialMatrix:
    matrix: np.ndarray  # shape (len(row_keys), len(col_keys)), integer
    row_keys: tuple
    col_keys: tuple


def _is_degenerate(gg: GradedGroupoid, t: tuple[str, ...]) -> bool:
    return any(gg.is_identity(g) for g in t)


@lru_cache(maxsize=None)
def differential_matrix(
    g: GradedGroupoid,
    level: int,
    coeff: CoefficientModule,
    cap: int | None = None,
    normalized: bool = False,
) -> DifferentialMatrix:
    """Matrix of the twisted differential from degree `level` to `level + 1`.

    With normalized=True both index sets drop tuples containing an identity
    morphism; entries through dropped faces vanish.
    """
    gg = as_graded(g)
    rows = nerve(gg, level + 1, cap)
    cols = nerve(gg, level, cap)
    if normalized and level >= 1:
        cols = tuple(t for t in cols if not _is_degenerate(gg, t))
    if normalized:
        rows = tuple(t for t in rows if not _is_degenerate(gg, t))
    col_index = {t: i for i, t in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, t in enumerate(rows):
        for face, sign, weight in _faces(gg, t):
            j = col_index.get(face)
            if j is None:
                continue  # normalized: value pinned to zero there
            mat[r, j] += sign * (-1 if (weight == -1 and coeff.involution == "negation") else 1)
    return DifferentialMatrix(mat, rows, cols)


# ---------------------------------------------------------------------------
# exact Smith normal form


class _NeedExact(Exception):
    pass


_INT64_GUARD = 1 << 30


@dataclass
class SmithResult:
    """U @ A @ V == S with S diagonal, nonnegative, divisibility ordered.

    U and Uinv are None when the decomposition was requested without them.
    """

    S: np.ndarray
    U: np.ndarray | None
    V: np.ndarray
    Uinv: np.ndarray | None
    Vinv: np.ndarray

    def diagonal(self) -> list[int]:
        k = min(self.S.shape)
        return [int(self.S[i, i]) for i in range(k)]


def _object_copy(M: np.ndarray) -> np.ndarray:
    """Object-dtype copy holding plain Python ints (never numpy scalars)."""
    out = np.empty(M.shape, dtype=object)
    if M.size:
        out[:] = np.array(M.tolist(), dtype=object).reshape(M.shape)
    return out


def smith_normal_form(a, want_u: bool = True) -> SmithResult:
    A0 = np.asarray(a)
    if A0.ndim != 2:
        raise ValueError("smith_normal_form expects a matrix")
    try:
        return _smith_engine(A0.astype(np.int64).copy(), want_u, exact=False)
    except (_NeedExact, OverflowError):
        return _smith_engine(_object_copy(A0), want_u, exact=True)


def _smith_engine(A, want_u, exact):
    rows, cols = A.shape

    def eye(n):
        if exact:
            out = np.zeros((n, n), dtype=object)
            for i in range(n):
                out[i, i] = 1
            return out
        return np.eye(n, dtype=np.int64)

    U = eye(rows) if want_u else None
    Uinv = eye(rows) if want_u else None
    V = eye(cols)
    Vinv = eye(cols)

    def guard():
        if exact:
            return
        for M in (A, U, V, Uinv, Vinv):
            if M is not None and M.size and int(np.abs(M).max()) > _INT64_GUARD:
                raise _NeedExact

    def row_swap(i, j):
        if i == j:
            return
        A[[i, j], :] = A[[j, i], :]
        if want_u:
            U[[i, j], :] = U[[j, i], :]
            Uinv[:, [i, j]] = Uinv[:, [j, i]]

    def col_swap(i, j):
        if i == j:
            return
        A[:, [i, j]] = A[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]
        Vinv[[i, j], :] = Vinv[[j, i], :]

    def row_negate(i):
        A[i, :] = -A[i, :]
        if want_u:
            U[i, :] = -U[i, :]
            Uinv[:, i] = -Uinv[:, i]

    def eliminate(t):
        """Clear row t and column t beyond the diagonal; False if the
        remaining block is zero."""
        while True:
            sub = A[t:, t:]
            nz = np.nonzero(sub)
            if len(nz[0]) == 0:
                return False
            vals = np.abs(sub[nz])
            k = int(np.argmin(vals))
            row_swap(t, t + int(nz[0][k]))
            col_swap(t, t + int(nz[1][k]))
            if A[t, t] < 0:
                row_negate(t)
            pivot = A[t, t]
            colv = A[t + 1 :, t]
            rowv = A[t, t + 1 :]
            if not np.any(colv) and not np.any(rowv):
                return True
            if np.any(colv):
                q = colv // pivot
                A[t + 1 :, :] -= q[:, None] * A[t, :][None, :]
                if want_u:
                    U[t + 1 :, :] -= q[:, None] * U[t, :][None, :]
                    Uinv[:, t] = Uinv[:, t] + Uinv[:, t + 1 :] @ q
            if np.any(A[t, t + 1 :]):
                q = A[t, t + 1 :] // pivot
                A[:, t + 1 :] -= A[:, t][:, None] * q[None, :]
                V[:, t + 1 :] -= V[:, t][:, None] * q[None, :]
                Vinv[t, :] = Vinv[t, :] + q @ Vinv[t + 1 :, :]
            guard()

    limit = min(rows, cols)
    rank = 0
    for t in range(limit):
        if not eliminate(t):
            break
        rank = t + 1

    # enforce the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(rank - 1):
            a_i, b_i = int(A[i, i]), int(A[i + 1, i + 1])
            if a_i and b_i % a_i != 0:
                A[i, :] += A[i + 1, :]
                if want_u:
                    U[i, :] += U[i + 1, :]
                    Uinv[:, i + 1] -= Uinv[:, i]
                eliminate(i)
                changed = True
    for i in range(rank):
        if A[i, i] < 0:
            row_negate(i)
    guard()
    return SmithResult(A, U, V, Uinv, Vinv)


# ---------------------------------------------------------------------------
# the cohomology solver


@dataclass(eq=False)
class CohomologyGroup:
    """Invariant factors plus exact coordinates on a fixed degree.

    `group` lists the invariant factors of the cohomology in this degree,
    with 1s dropped; a factor 0 stands for a free summand.  Coordinates from
    `reduce` are taken against those factors in order.
    """

    groupoid: GradedGroupoid
    degree: int
    coeff: CoefficientModule
    group: tuple[int, ...]
    _kernel_basis: np.ndarray = field(repr=False)
    _kernel_cols: list = field(repr=False)
    _t: list = field(repr=False)
    _v1inv: np.ndarray = field(repr=False)
    _rel: SmithResult = field(repr=False)
    _rel_cols: int = field(repr=False)
    _prev_cols: int = field(repr=False)
    _d: list = field(repr=False)
    _positions: list = field(repr=False)
    _cap: int | None = field(repr=False)

    def order(self) -> int:
        if any(d == 0 for d in self.group):
            raise UnsupportedInput("cohomology has a free summand; order is infinite")
        return math.prod(self.group) if self.group else 1

    def check_cocycle(self, x: Cochain) -> None:
        self._accept(x)
        dx = graded_differential(x, self._cap)
        for key, v in zip(nerve(x.groupoid, x.level + 1, self._cap), dx.values):
            if x.coeff.normalize(v) != 0:
                raise NotACocycle(self.degree, key)

    def _accept(self, x: Cochain):
        if x.groupoid is not self.groupoid:
            raise ValueError("cochain lives on a different groupoid")
        if x.level != self.degree or x.coeff != self.coeff:
            raise ValueError("cochain degree or coefficients do not match this solver")

    def _coords(self, x: Cochain) -> np.ndarray:
        z = self._v1inv @ np.array(x.values, dtype=object)
        out = []
        for i, t in zip(self._kernel_cols, self._t):
            if z[i] % t != 0:
                raise NotACocycle(self.degree, f"coordinate {i}")
            out.append(z[i] // t)
        for i in range(len(z)):
            if self.coeff.modulus == 0 and i not in self._kernel_cols and z[i] != 0:
                raise NotACocycle(self.degree, f"coordinate {i}")
        return np.array(out, dtype=object)

    def reduce_to_class(self, x: Cochain) -> tuple[int, ...]:
        """Class coordinates of a cocycle; raises NotACocycle otherwise."""
        self.check_cocycle(x)
        w = self._rel.U @ self._coords(x)
        out = []
        for i in self._positions:
            d = self._d[i]
            out.append(int(w[i] % d) if d else int(w[i]))
        return tuple(out)

    def representative(self, cls: tuple[int, ...]) -> Cochain:
        if len(cls) != len(self._positions):
            raise ValueError(f"class needs {len(self._positions)} coordinates")
        k = len(self._kernel_cols)
        w = np.zeros(k, dtype=object)
        for i, c in zip(self._positions, cls):
            w[i] = int(c)
        z = self._rel.Uinv @ w
        x = self._kernel_basis @ z
        return Cochain(self.groupoid, self.degree, self.coeff, tuple(int(v) for v in x))

    def is_cohomologous(self, x: Cochain, y: Cochain):
        """(True, eta) with y - x = D eta up to the modulus, else (False, None).

        In degree 0 a successful check returns (True, None): there is nothing
        below degree 0 for a witness to live in.
        """
        self.check_cocycle(x)
        self.check_cocycle(y)
        z = self._coords(y) - self._coords(x)
        u = self._rel.U @ z
        k = len(self._kernel_cols)
        v = np.zeros(self._rel_cols, dtype=object)
        for i in range(k):
            d = self._d[i]
            if d:
                if u[i] % d != 0:
                    return False, None
                if i < self._rel_cols:
                    v[i] = u[i] // d
            elif u[i] != 0:
                return False, None
        w = self._rel.V @ v
        if self.degree == 0:
            return True, None
        eta = Cochain(
            self.groupoid,
            self.degree - 1,
            self.coeff,
            tuple(int(t) for t in w[: self._prev_cols]),
        )
        diff = graded_differential(eta, self._cap)
        want = y - x
        assert all(
            self.coeff.normalize(a - b) == 0 for a, b in zip(diff.values, want.values)
        ), "internal witness check failed"
        return True, eta

    def is_coboundary(self, x: Cochain):
        return self.is_cohomologous(Cochain.zero(self.groupoid, self.degree, self.coeff), x)

    def classes(self):
        """Iterate all class coordinate tuples (finite case only)."""
        if any(d == 0 for d in self.group):
            raise UnsupportedInput("cannot enumerate classes of an infinite group")
        ranges = [range(self._d[i]) for i in self._positions]
        return itertools.product(*ranges)

    def cocycles(self):
        """Iterate all cocycles (finite coefficients only), each exactly once."""
        m = self.coeff.modulus
        if m == 0:
            raise UnsupportedInput("cannot enumerate cocycles over the integers")
        ranges = [range(m // t) for t in self._t]
        for z in itertools.product(*ranges):
            x = self._kernel_basis @ np.array(z, dtype=object)
            yield Cochain(self.groupoid, self.degree, self.coeff, tuple(int(v) for v in x))


@lru_cache(maxsize=None)
def cohomology_group(
    g,
    degree: int,
    coeff: CoefficientModule,
    cap: int | None = None,
    normalized: bool = False,
) -> CohomologyGroup:
    """Exact solver for the degree-n twisted cohomology of a graded groupoid.

    normalized=True computes the invariant factors from the subcomplex of
    cochains vanishing on tuples with identity entries; that solver only
    reports the group (no coordinates).
    """
    gg = as_graded(g)
    if degree < 0:
        raise ValueError("degree must be >= 0")
    m = coeff.modulus
    dn = differential_matrix(gg, degree, coeff, cap, normalized)
    a_n = len(dn.col_keys)
    if degree > 0:
        dp = differential_matrix(gg, degree - 1, coeff, cap, normalized)
        prev = dp.matrix
        prev_cols = len(dp.col_keys)
    else:
        prev = np.zeros((a_n, 0), dtype=np.int64)
        prev_cols = 0

    sm1 = _kernel_smith(dn.matrix, m)
    s = sm1.diagonal() + [0] * (a_n - min(sm1.S.shape))
    if m:
        kernel_cols = list(range(a_n))
        t = [m // math.gcd(s[i], m) for i in kernel_cols]
    else:
        kernel_cols = [i for i in range(a_n) if s[i] == 0]
        t = [1] * len(kernel_cols)
    basis = _object_copy(sm1.V)[:, kernel_cols]
    for j, tj in enumerate(t):
        basis[:, j] = basis[:, j] * tj
    k = len(kernel_cols)
    _assert_in_kernel(dn.matrix, basis, m)

    v1inv = _object_copy(sm1.Vinv)
    prev_mod = np.mod(prev, m) if m else prev
    if m:
        rel_raw = np.concatenate(
            [prev_mod, m * np.eye(a_n, dtype=np.int64)], axis=1
        )
    else:
        rel_raw = prev_mod
    Z = _exact_matmul(v1inv, _object_copy(rel_raw))
    R = np.zeros((k, rel_raw.shape[1]), dtype=object)
    for row, (i, ti) in enumerate(zip(kernel_cols, t)):
        for j in range(rel_raw.shape[1]):
            if Z[i, j] % ti != 0:
                raise AssertionError("relation vector escapes the cocycle lattice")
            R[row, j] = Z[i, j] // ti
    if m == 0:
        for i in range(a_n):
            if i not in kernel_cols and any(Z[i, j] != 0 for j in range(rel_raw.shape[1])):
                raise AssertionError("relation vector escapes the cocycle lattice")
    sm2 = smith_normal_form(R, want_u=True)
    d = sm2.diagonal() + [0] * (k - min(sm2.S.shape))
    positions = [i for i in range(k) if d[i] != 1]
    group = tuple(d[i] for i in positions)
    cls = _NormalizedGroupOnly if normalized else CohomologyGroup
    return cls(
        gg, degree, coeff, group, basis, kernel_cols, t, v1inv, sm2, R.shape[1], prev_cols, d, positions, cap
    )


class _NormalizedGroupOnly(CohomologyGroup):
    """Coordinates index the full complex, so only the group is exposed."""

    def _blocked(self, *a, **k):
        raise UnsupportedInput("normalized solver only reports the group")

    reduce_to_class = _blocked
    representative = _blocked
    is_cohomologous = _blocked
    is_coboundary = _blocked
    check_cocycle = _blocked
    cocycles = _blocked


def _exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Integer matrix product that never wraps silently."""
    if A.dtype == object or B.dtype == object:
        return A @ B
    if A.size and B.size:
        bound = int(np.abs(A).max()) * int(np.abs(B).max()) * max(1, A.shape[1])
        if bound >= 1 << 62:
            return _object_copy(A) @ _object_copy(B)
    return A @ B


def _kernel_smith(A, m: int) -> SmithResult:
    """Diagonalization good enough to read off the mod-m solution lattice.

    For m > 0 the working matrix is reduced mod m after every operation
    (legitimate: row and column operations commute with shifting entries by
    multiples of m as far as {x : Ax = 0 mod m} is concerned), which pins
    the int64 entries below m^2 and keeps the column transforms mild.
    """
    if m == 0:
        sm = smith_normal_form(A, want_u=False)
    else:
        try:
            sm = _kernel_engine_mod(np.mod(np.asarray(A, dtype=np.int64), m), m, exact_v=False)
        except _NeedExact:
            sm = _kernel_engine_mod(np.mod(np.asarray(A, dtype=np.int64), m), m, exact_v=True)
    check = _exact_matmul(sm.Vinv, sm.V)
    assert not (check != np.eye(check.shape[0], dtype=np.int64)).any(), (
        "column transform failed to invert"
    )
    return sm


def _kernel_engine_mod(A, m, exact_v):
    rows, cols = A.shape
    if exact_v:
        V = np.zeros((cols, cols), dtype=object)
        Vinv = np.zeros((cols, cols), dtype=object)
        for i in range(cols):
            V[i, i] = 1
            Vinv[i, i] = 1
    else:
        V = np.eye(cols, dtype=np.int64)
        Vinv = np.eye(cols, dtype=np.int64)

    def guard():
        if exact_v:
            return
        for M in (V, Vinv):
            if M.size and int(np.abs(M).max()) > _INT64_GUARD:
                raise _NeedExact

    t = 0
    limit = min(rows, cols)
    while t < limit:
        sub = A[t:, t:]
        nz = np.nonzero(sub)
        if len(nz[0]) == 0:
            break
        k = int(np.argmin(sub[nz]))
        pi, pj = t + int(nz[0][k]), t + int(nz[1][k])
        if pi != t:
            A[[t, pi], :] = A[[pi, t], :]
        if pj != t:
            A[:, [t, pj]] = A[:, [pj, t]]
            V[:, [t, pj]] = V[:, [pj, t]]
            Vinv[[t, pj], :] = Vinv[[pj, t], :]
        pivot = int(A[t, t])
        colv = A[t + 1 :, t]
        rowv = A[t, t + 1 :]
        if not np.any(colv) and not np.any(rowv):
            t += 1
            continue
        if np.any(colv):
            q = colv // pivot
            A[t + 1 :, :] = np.mod(A[t + 1 :, :] - q[:, None] * A[t, :][None, :], m)
        if np.any(A[t, t + 1 :]):
            q = A[t, t + 1 :] // pivot
            A[:, t + 1 :] = np.mod(A[:, t + 1 :] - A[:, t][:, None] * q[None, :], m)
            # plain-int copy: object-array updates must not see numpy scalars
            qv = np.array(q.tolist(), dtype=object) if exact_v else q
            V[:, t + 1 :] -= V[:, t][:, None] * qv[None, :]
            Vinv[t, :] = Vinv[t, :] + qv @ Vinv[t + 1 :, :]
            guard()
    return SmithResult(A, None, V, None, Vinv)


def _assert_in_kernel(D: np.ndarray, B: np.ndarray, m: int) -> None:
    """Every basis column must solve D x = 0 (mod m); cheap and decisive."""
    Bi = None
    try:
        Bi = B.astype(np.int64)
    except (OverflowError, TypeError):
        pass
    if Bi is not None and (
        not D.size
        or not Bi.size
        or int(np.abs(D).max()) * int(np.abs(Bi).max()) * max(1, D.shape[1]) < 1 << 62
    ):
        P = D @ Bi
    else:
        P = _object_copy(D) @ B
    bad = np.mod(P, m).any() if m else P.any()
    assert not bad, "kernel basis fails the defining equations"


def pullback_cochain(f: GroupoidFunctor, c: Cochain, cap: int | None = None) -> Cochain:
    """Precompose a cochain with an even functor, degree by degree."""
    if c.groupoid is not as_graded(f.target) and c.groupoid is not f.target:
        raise ValueError("cochain does not live on the functor's target")
    if not functor_is_even(f):
        raise GroupoidError("pullback needs an even functor")
    src = as_graded(f.source)
    keys = nerve(src, c.level, cap)
    if c.level == 0:
        vals = tuple(c.value((f.objects[t[0]],)) for t in keys)
    else:
        vals = tuple(c.value(tuple(f.morphisms[g] for g in t)) for t in keys)
    return Cochain(src, c.level, c.coeff, vals)
