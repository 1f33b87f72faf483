"""Projective space P(F_q^n) with a diagonal quadratic form.

Points are stored by canonical representative: the first nonzero coordinate
is 1.  Enumeration order is lexicographic on the coordinate indices, and every
matrix built downstream is indexed in that order.

Scalar queries (``quadratic``, ``bilinear``, ``perp_profile``...) work point by
point through :class:`~polarinc.ffield.FieldSpec` arithmetic.  The array
helpers (``point_array``, ``gram_matrix``, ``plane_point_indices``) evaluate
the same quantities in bulk through the field's lookup tables; the test-suite
checks the two paths against each other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigurationError, DegenerateForm, SamePoint
from .ffield import Chi, FieldSpec

PRESETS = ("paper-square", "paper-nonsquare", "dim3")


class PointClass(enum.Enum):
    ISOTROPIC = "isotropic"
    SQUARE_ANISO = "square"
    NONSQUARE_ANISO = "nonsquare"

    @property
    def code(self) -> str:
        return {"isotropic": "I", "square": "S", "nonsquare": "T"}[self.value]


_CHI_TO_CLASS = {
    Chi.ZERO: PointClass.ISOTROPIC,
    Chi.SQUARE: PointClass.SQUARE_ANISO,
    Chi.NONSQUARE: PointClass.NONSQUARE_ANISO,
}


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Canonical representative of a 1-dimensional subspace."""

    coords: tuple[int, ...]

    @classmethod
    def normalize(cls, F: FieldSpec, vec: Sequence[int]) -> "ProjPoint":
        vec = tuple(int(x) for x in vec)
        lead = next((x for x in vec if x != 0), None)
        if lead is None:
            raise ValueError("the zero vector does not span a projective point")
        if lead == F.one:
            return cls(vec)
        s = F.inv(lead)
        return cls(tuple(F.mul(s, x) for x in vec))

    def is_canonical(self) -> bool:
        lead = next((x for x in self.coords if x != 0), None)
        return lead == 1

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


class PerpProfile(NamedTuple):
    iso_count: int
    aniso_count: int


class Plane(NamedTuple):
    """A 2-dimensional subspace given by its reduced row-echelon basis."""

    u: ProjPoint
    v: ProjPoint


@dataclass(frozen=True)
class QuadraticSpace:
    """F_q^n with Q(X) = sum(d_i * x_i**2) and its polar form."""

    field: FieldSpec
    diag: tuple[int, ...]
    preset: str | None = None

    def __post_init__(self):
        diag = tuple(int(d) for d in self.diag)
        if len(diag) < 2:
            raise ConfigurationError(f"dimension must be at least 2, got {len(diag)}")
        for d in diag:
            if not 0 <= d < self.field.q:
                raise ConfigurationError(f"coefficient {d} is not an element of {self.field}")
        if any(d == 0 for d in diag):
            raise DegenerateForm(f"diagonal {diag} has a zero coefficient")
        object.__setattr__(self, "diag", diag)

    @classmethod
    def from_preset(cls, F: FieldSpec, name: str) -> "QuadraticSpace":
        """``paper-square`` (1,-1,1,-1), ``paper-nonsquare`` (1,-1,1,-beta), ``dim3`` (1,-1,1).

        beta is the field's canonical nonsquare.
        """
        m1 = F.neg(F.one)
        if name == "paper-square":
            diag = (1, m1, 1, m1)
        elif name == "paper-nonsquare":
            diag = (1, m1, 1, F.neg(F.canonical_nonsquare))
        elif name == "dim3":
            diag = (1, m1, 1)
        else:
            raise ConfigurationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        return cls(F, diag, preset=name)

    @classmethod
    def from_ints(cls, F: FieldSpec, coeffs: Sequence[int]) -> "QuadraticSpace":
        """Diagonal from ordinary integers (negative values allowed), reduced into F_p."""
        return cls(F, tuple(F.from_int(c) for c in coeffs))

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def discriminant(self) -> int:
        out = self.field.one
        for d in self.diag:
            out = self.field.mul(out, d)
        return out

    @property
    def alpha_class(self) -> Chi:
        """Square class of the discriminant.

        For (1, -1, 1, -alpha) this is chi(alpha): SQUARE is the hyperbolic
        case and NONSQUARE the elliptic one.
        """
        return self.field.chi(self.discriminant)

    def describe(self) -> dict:
        return {
            "field": self.field.describe(),
            "n": self.n,
            "diag": list(self.diag),
            "preset": self.preset,
            "alpha_class": self.alpha_class.name.lower(),
        }

    @property
    def num_points(self) -> int:
        return (self.q**self.n - 1) // (self.q - 1)

    # -- bulk data, computed once --------------------------------------------

    @cached_property
    def points(self) -> tuple[ProjPoint, ...]:
        return tuple(ProjPoint(c) for c in _canonical_vectors(self.q, self.n))

    @cached_property
    def point_array(self) -> np.ndarray:
        arr = np.array([p.coords for p in self.points], dtype=np.int64).reshape(-1, self.n)
        arr.setflags(write=False)
        return arr

    @cached_property
    def _key_to_index(self) -> np.ndarray:
        """Dense lookup from base-q vector key to point position (-1 if not canonical)."""
        table = np.full(self.q**self.n, -1, dtype=np.int64)
        table[vector_keys(self.point_array, self.q)] = np.arange(len(self.points))
        return table

    @cached_property
    def q_values(self) -> np.ndarray:
        add, mul, _, _ = self.field.tables()
        P = self.point_array
        out = np.zeros(len(P), dtype=np.int64)
        for i, d in enumerate(self.diag):
            out = add[out, mul[d, mul[P[:, i], P[:, i]]]]
        out.setflags(write=False)
        return out

    @cached_property
    def class_codes(self) -> np.ndarray:
        """Per-point character of Q: 0 isotropic, 1 square, -1 nonsquare."""
        _, _, _, chi = self.field.tables()
        out = chi[self.q_values].astype(np.int8)
        out.setflags(write=False)
        return out

    def index_of(self, X) -> int:
        X = X if isinstance(X, ProjPoint) else ProjPoint.normalize(self.field, X)
        return int(self._key_to_index[vector_keys(np.array([X.coords]), self.q)[0]])

    def indices_of(self, vectors: np.ndarray) -> np.ndarray:
        """Positions of already-canonical vectors (rows of ``vectors``)."""
        return self._key_to_index[vector_keys(vectors, self.q)]

    def gram_matrix(self, rows: np.ndarray | None = None, cols: np.ndarray | None = None) -> np.ndarray:
        """Field values <X, Y> for point positions ``rows`` x ``cols``.

        Uses the diagonal expansion sum(d_i x_i y_i); defaults to all points.
        """
        add, mul, _, _ = self.field.tables()
        P = self.point_array
        R = P if rows is None else P[np.asarray(rows)]
        C = P if cols is None else P[np.asarray(cols)]
        out = np.zeros((len(R), len(C)), dtype=np.int64)
        for i, d in enumerate(self.diag):
            scaled = mul[d, R[:, i]]
            out = add[out, mul[scaled[:, None], C[None, :, i]]]
        return out

    @cached_property
    def orthogonality(self) -> np.ndarray:
        """Boolean N x N matrix of ``<X, Y> == 0``."""
        out = self.gram_matrix() == 0
        out.setflags(write=False)
        return out


def _canonical_vectors(q: int, n: int):
    for v in product(range(q), repeat=n):
        for x in v:
            if x:
                if x == 1:
                    yield v
                break


def vector_keys(vectors: np.ndarray, q: int) -> np.ndarray:
    vectors = np.asarray(vectors, dtype=np.int64)
    weights = q ** np.arange(vectors.shape[1] - 1, -1, -1, dtype=np.int64)
    return vectors @ weights


# -- scalar operations --------------------------------------------------------


def enumerate_points(space: QuadraticSpace) -> tuple[ProjPoint, ...]:
    return space.points


def _as_point(space: QuadraticSpace, X) -> ProjPoint:
    if isinstance(X, ProjPoint):
        if len(X) != space.n:
            raise ConfigurationError(f"point {X} does not live in dimension {space.n}")
        return X
    return ProjPoint.normalize(space.field, X)


def _quadratic_vec(space: QuadraticSpace, vec) -> int:
    F = space.field
    acc = F.zero
    for d, x in zip(space.diag, vec):
        acc = F.add(acc, F.mul(d, F.mul(x, x)))
    return acc


def quadratic(space: QuadraticSpace, X) -> int:
    """Q(X) on the canonical representative of ``X``."""
    return _quadratic_vec(space, _as_point(space, X).coords)


def bilinear(space: QuadraticSpace, X, Y) -> int:
    """Polar form (Q(X+Y) - Q(X) - Q(Y)) / 2 on canonical representatives."""
    x, y = _as_point(space, X).coords, _as_point(space, Y).coords
    return bilinear_vec(space, x, y)


def bilinear_vec(space: QuadraticSpace, x, y) -> int:
    """Polar form on raw coordinate vectors (no normalization)."""
    F = space.field
    s = tuple(F.add(a, b) for a, b in zip(x, y))
    num = F.sub(F.sub(_quadratic_vec(space, s), _quadratic_vec(space, x)), _quadratic_vec(space, y))
    return F.mul(num, F.inv(F.from_int(2)))


def classify_value(F: FieldSpec, value: int) -> PointClass:
    return _CHI_TO_CLASS[F.chi(value)]


def classify(space: QuadraticSpace, X) -> PointClass:
    return classify_value(space.field, quadratic(space, X))


def class_counts(space: QuadraticSpace) -> tuple[int, int, int]:
    """(isotropic, square anisotropic, nonsquare anisotropic) tallies."""
    codes = space.class_codes
    return int((codes == 0).sum()), int((codes == 1).sum()), int((codes == -1).sum())


def expected_class_counts(space: QuadraticSpace) -> dict:
    """Closed-form point counts where they are known.

    n=4 uses the hyperbolic/elliptic formulas; n=3 uses the conic count.
    Keys absent from the result have no closed form here.
    """
    q, n = space.q, space.n
    out = {"points": space.num_points}
    if n == 4:
        if space.alpha_class is Chi.SQUARE:
            iso, aniso = q * q + 2 * q + 1, q**3 - q
        else:
            iso, aniso = q * q + 1, q**3 + q
        out.update(isotropic=iso, anisotropic=aniso, square=aniso // 2, nonsquare=aniso // 2)
    elif n == 3:
        out.update(isotropic=q + 1, anisotropic=q * q)
    return out


def perp_profile(space: QuadraticSpace, X) -> PerpProfile:
    """Isotropic and anisotropic points on the hyperplane X-perp, by scanning."""
    X = _as_point(space, X)
    iso = aniso = 0
    for Y in space.points:
        if bilinear(space, X, Y) == 0:
            if quadratic(space, Y) == 0:
                iso += 1
            else:
                aniso += 1
    return PerpProfile(iso, aniso)


def perp_pair_isotropic_count(space: QuadraticSpace, X, Y) -> int:
    """Isotropic points orthogonal to both ``X`` and ``Y``."""
    X, Y = _as_point(space, X), _as_point(space, Y)
    if X == Y:
        raise SamePoint(f"{X} and {Y} are the same projective point")
    count = 0
    for Z in space.points:
        if quadratic(space, Z) == 0 and bilinear(space, X, Z) == 0 and bilinear(space, Y, Z) == 0:
            count += 1
    return count


def enumerate_planes(space: QuadraticSpace) -> list[Plane]:
    """Every 2-dimensional subspace once, as an RREF basis pair ``(u, v)``.

    ``u`` has its leading 1 at column i, ``v`` at column j > i, and ``u`` is
    zero at column j.
    """
    q, n = space.q, space.n
    if n < 2:
        return []
    planes = []
    for i in range(n):
        for j in range(i + 1, n):
            free_u = [k for k in range(i + 1, n) if k != j]
            free_v = list(range(j + 1, n))
            for fu in product(range(q), repeat=len(free_u)):
                u = [0] * n
                u[i] = 1
                for k, c in zip(free_u, fu):
                    u[k] = c
                for fv in product(range(q), repeat=len(free_v)):
                    v = [0] * n
                    v[j] = 1
                    for k, c in zip(free_v, fv):
                        v[k] = c
                    planes.append(Plane(ProjPoint(tuple(u)), ProjPoint(tuple(v))))
    return planes


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def plane_points(space: QuadraticSpace, plane: Plane) -> list[ProjPoint]:
    """The q+1 points of a plane: v, then u + t v for every t."""
    F = space.field
    u, v = plane
    pts = [v]
    for t in F.elements():
        pts.append(ProjPoint(tuple(F.add(a, F.mul(t, b)) for a, b in zip(u.coords, v.coords))))
    return pts


def plane_isotropic_count(space: QuadraticSpace, plane: Plane) -> int:
    return sum(1 for P in plane_points(space, plane) if quadratic(space, P) == 0)


def plane_point_indices(space: QuadraticSpace, planes: Sequence[Plane] | None = None) -> np.ndarray:
    """(num_planes, q+1) array of point positions, in :func:`plane_points` order."""
    if planes is None:
        planes = enumerate_planes(space)
    if not planes:
        return np.zeros((0, space.q + 1), dtype=np.int64)
    add, mul, _, _ = space.field.tables()
    U = np.array([pl.u.coords for pl in planes], dtype=np.int64)
    V = np.array([pl.v.coords for pl in planes], dtype=np.int64)
    t = np.arange(space.q)
    # u + t v stays canonical: v vanishes left of and at u's pivot
    combos = add[U[:, None, :], mul[t[None, :, None], V[:, None, :]]]
    vecs = np.concatenate([V[:, None, :], combos], axis=1)
    idx = space.indices_of(vecs.reshape(-1, space.n)).reshape(len(planes), space.q + 1)
    assert (idx >= 0).all()
    return idx
