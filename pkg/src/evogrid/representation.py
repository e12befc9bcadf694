"""Diagonal-form representations and projection-valued measures.

The Hilbert space attached to a grid evolution space is the direct sum of
one copy of the complex line per full-set grid point, so its dimension N is
the product of the per-time grid sizes.  In the distinguished basis indexed
by full-set points, a bounded function f on the full point set acts as the
diagonal operator with entries f(x); the spectral measure of that action
assigns to each point subset V the diagonal projection onto the basis
vectors it contains.

Measures over a smaller time subset T arise by pushing the full measure
forward along restriction: the projection of V, a set of points over T, is
diagonal with a one at each full point whose restriction lies in V.  The
spectral integral of a function over T against that measure is computed as
an explicit atom sum, one rank-|fiber| projection per point of T; the fact
that it agrees, entry for entry, with representing the pullback of the
function is one of the identities the test suites keep pinned.

Conjugating everything by a unitary W on the Hilbert space produces unitarily
equivalent data.  Conjugated measures keep the (W, diagonal rule) pair and
materialize dense matrices only on demand, with a configurable dimension cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import CapExceededError, DomainError, PreconditionError, StructureError
from .evolution import GridEvolutionSpace, GridFunction, GridPoint, pullback

__all__ = [
    "DENSE_CAP_DEFAULT",
    "DiagonalOperator",
    "DenseOperator",
    "ConjugatedDiagonalOperator",
    "RepresentationSpace",
    "PureRepresentation",
    "SpectralMeasure",
    "represent",
    "spectral_projection",
    "pushforward",
    "integrate",
    "conjugate",
    "embed_eta",
    "matrix_element",
    "theta_represent",
    "theta_projection",
    "identity_operator",
    "projection_rank",
]

DENSE_CAP_DEFAULT = 4096

Operator = Union["DiagonalOperator", "DenseOperator", "ConjugatedDiagonalOperator"]


def _frozen_vector(v) -> np.ndarray:
    a = np.array(v, dtype=np.complex128, order="C").ravel()
    a.setflags(write=False)
    return a


def _frozen_square(m) -> np.ndarray:
    a = np.array(m, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {a.shape}")
    a.setflags(write=False)
    return a


def check_unitary(u: np.ndarray, tol: float = 1e-10) -> None:
    u = np.asarray(u)
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2))
    if defect > tol:
        raise PreconditionError(f"matrix is not unitary within {tol:g} (defect {defect:.3e})")


@dataclass(frozen=True, eq=False)
class DiagonalOperator:
    """Operator that is diagonal in the distinguished basis."""

    diag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", _frozen_vector(self.diag))

    @property
    def dimension(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag)

    def norm(self) -> float:
        """Exact operator norm, the largest entry modulus."""
        return float(np.max(np.abs(self.diag))) if self.diag.size else 0.0

    def adjoint(self) -> "DiagonalOperator":
        return DiagonalOperator(np.conj(self.diag))

    def entry(self, i: int, j: int) -> complex:
        return complex(self.diag[i]) if i == j else 0.0 + 0.0j

    def trace(self) -> complex:
        return complex(np.sum(self.diag))

    def _binary(self, other, op):
        if isinstance(other, DiagonalOperator):
            return DiagonalOperator(op(self.diag, other.diag))
        return DenseOperator(op(self.to_dense(), _dense_of(other)))

    def __matmul__(self, other) -> Operator:
        if isinstance(other, DiagonalOperator):
            return DiagonalOperator(self.diag * other.diag)
        return DenseOperator(self.to_dense() @ _dense_of(other))

    def __add__(self, other) -> Operator:
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other) -> Operator:
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, scalar) -> "DiagonalOperator":
        return DiagonalOperator(self.diag * complex(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Operator stored as a full matrix in the distinguished basis."""

    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen_square(self.matrix))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def to_dense(self) -> np.ndarray:
        return self.matrix

    def norm(self) -> float:
        """Largest singular value."""
        return float(np.linalg.norm(self.matrix, 2))

    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T)

    def entry(self, i: int, j: int) -> complex:
        return complex(self.matrix[i, j])

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def __matmul__(self, other) -> "DenseOperator":
        return DenseOperator(self.matrix @ _dense_of(other))

    def __add__(self, other) -> "DenseOperator":
        return DenseOperator(self.matrix + _dense_of(other))

    def __sub__(self, other) -> "DenseOperator":
        return DenseOperator(self.matrix - _dense_of(other))

    def __mul__(self, scalar) -> "DenseOperator":
        return DenseOperator(self.matrix * complex(scalar))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class ConjugatedDiagonalOperator:
    """The operator W* diag(d) W, kept as the (W, d) pair until needed.

    Algebraic operations and norms go through the dense form on purpose:
    identities that are exact for diagonal operators are only required to
    hold within rounding once a conjugation is involved, and the dense path
    is what exhibits that rounding honestly.
    """

    conjugator: np.ndarray
    diag: np.ndarray

    def __post_init__(self):
        w = _frozen_square(self.conjugator)
        d = _frozen_vector(self.diag)
        if w.shape[0] != d.size:
            raise StructureError("conjugator and diagonal sizes differ")
        object.__setattr__(self, "conjugator", w)
        object.__setattr__(self, "diag", d)

    @property
    def dimension(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        w = self.conjugator
        return w.conj().T @ (self.diag[:, None] * w)

    def norm(self) -> float:
        """Largest singular value of the materialized matrix."""
        return float(np.linalg.norm(self.to_dense(), 2))

    def adjoint(self) -> "ConjugatedDiagonalOperator":
        return ConjugatedDiagonalOperator(self.conjugator, np.conj(self.diag))

    def entry(self, i: int, j: int) -> complex:
        w = self.conjugator
        return complex(np.sum(np.conj(w[:, i]) * self.diag * w[:, j]))

    def trace(self) -> complex:
        # trace is basis independent but computed from the pair directly
        w = self.conjugator
        return complex(np.sum(self.diag * np.sum(w * np.conj(w), axis=1)))

    def __matmul__(self, other) -> DenseOperator:
        return DenseOperator(self.to_dense() @ _dense_of(other))

    def __add__(self, other) -> DenseOperator:
        return DenseOperator(self.to_dense() + _dense_of(other))

    def __sub__(self, other) -> DenseOperator:
        return DenseOperator(self.to_dense() - _dense_of(other))

    def __mul__(self, scalar) -> "ConjugatedDiagonalOperator":
        return ConjugatedDiagonalOperator(self.conjugator, self.diag * complex(scalar))

    __rmul__ = __mul__


def _dense_of(op) -> np.ndarray:
    if isinstance(op, (DiagonalOperator, DenseOperator, ConjugatedDiagonalOperator)):
        return op.to_dense()
    return np.asarray(op, dtype=np.complex128)


def identity_operator(n: int) -> DiagonalOperator:
    return DiagonalOperator(np.ones(n, dtype=np.complex128))


def projection_rank(op: Operator, tol: float = 1e-8) -> int:
    """Rank of a projection, read off the trace; sanity-checks idempotency."""
    defect = (op @ op - op).norm()
    if defect > tol:
        raise PreconditionError(f"operator is not a projection (idempotency defect {defect:.3e})")
    return int(round(op.trace().real))


@dataclass(frozen=True, eq=False)
class RepresentationSpace:
    """Hilbert space data: dimension, basis points, and the dense cap."""

    space: GridEvolutionSpace
    cap: int = DENSE_CAP_DEFAULT

    def __post_init__(self):
        n = self.space.dimension
        if n > self.cap:
            raise CapExceededError(f"representation dimension {n} exceeds the cap {self.cap}")

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def basis_points(self) -> list[GridPoint]:
        """Basis labels: the full-set grid points in linear-index order."""
        return self.space.enumerate_points(self.space.full)

    def basis_index(self, x: GridPoint | int) -> int:
        if isinstance(x, GridPoint):
            if x.subset != self.space.full:
                raise DomainError("basis labels are points over the full time set")
            return self.space.linear_index(x)
        i = int(x)
        if not 0 <= i < self.dimension:
            raise DomainError(f"basis index {i} out of range")
        return i


@dataclass(frozen=True, eq=False)
class PureRepresentation:
    """Diagonal-form representation, optionally conjugated by a unitary."""

    rep_space: RepresentationSpace
    conjugator: np.ndarray | None = None

    def __post_init__(self):
        if self.conjugator is not None:
            w = _frozen_square(self.conjugator)
            if w.shape[0] != self.rep_space.dimension:
                raise StructureError("conjugator dimension does not match the space")
            check_unitary(w)
            object.__setattr__(self, "conjugator", w)

    @property
    def space(self) -> GridEvolutionSpace:
        return self.rep_space.space

    @property
    def dimension(self) -> int:
        return self.rep_space.dimension

    def _wrap(self, diag: np.ndarray) -> Operator:
        if self.conjugator is None:
            return DiagonalOperator(diag)
        return ConjugatedDiagonalOperator(self.conjugator, diag)

    def represent(self, f: GridFunction) -> Operator:
        """Action of a function on the full point set, diagonal entry f(x)."""
        if f.subset != self.space.full:
            raise DomainError("represent expects a function over the full time set")
        return self._wrap(f.values.astype(np.complex128))

    def spectral_measure(self, subset=None) -> "SpectralMeasure":
        subset = self.space.full if subset is None else frozenset(subset)
        if not subset <= self.space.full:
            raise DomainError("measure subset contains unknown time labels")
        return SpectralMeasure(self, subset)

    def integrate(self, f: GridFunction) -> Operator:
        return integrate(f, self.spectral_measure(f.subset))


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Projection-valued measure over the points of one time subset.

    For the full subset this is the spectral resolution of the diagonal
    representation; for smaller subsets it is the pushforward along
    restriction.  `projection` accepts a set of points over the subset,
    given as linear indices or GridPoints.
    """

    representation: PureRepresentation
    subset: frozenset

    @property
    def space(self) -> GridEvolutionSpace:
        return self.representation.space

    @property
    def conjugator(self) -> np.ndarray | None:
        return self.representation.conjugator

    @property
    def npoints(self) -> int:
        return self.space.npoints(self.subset)

    def _point_indices(self, members: Iterable) -> list[int]:
        out = []
        for m in members:
            if isinstance(m, GridPoint):
                if m.subset != self.subset:
                    raise DomainError("point lies over a different subset than the measure")
                out.append(self.space.linear_index(m))
            else:
                i = int(m)
                if not 0 <= i < self.npoints:
                    raise DomainError(f"point index {i} outside the measure's point set")
                out.append(i)
        return out

    def small_indicator(self, members: Iterable) -> np.ndarray:
        """0/1 vector over points(subset) marking the members."""
        mask = np.zeros(self.npoints, dtype=np.complex128)
        for i in self._point_indices(members):
            mask[i] = 1.0
        return mask

    def projection(self, members: Iterable) -> Operator:
        """Projection onto the basis vectors whose restriction lies in V."""
        mask = GridFunction(self.space, self.subset, self.small_indicator(members))
        diag = pullback(mask).values
        return self.representation._wrap(diag)

    def atom(self, index: int) -> Operator:
        return self.projection([index])

    def total(self) -> Operator:
        return self.projection(range(self.npoints))

    def empty(self) -> Operator:
        return self.projection([])


def represent(rep: PureRepresentation, f: GridFunction) -> Operator:
    return rep.represent(f)


def spectral_projection(E: SpectralMeasure, members: Iterable) -> Operator:
    return E.projection(members)


def pushforward(E: SpectralMeasure, subset) -> SpectralMeasure:
    """Measure over a smaller subset, E composed with restriction preimage."""
    target = frozenset(subset)
    if E.subset != E.space.full:
        raise DomainError("pushforward starts from the measure over the full time set")
    if not target <= E.space.full:
        raise DomainError("pushforward subset contains unknown time labels")
    return SpectralMeasure(E.representation, target)


def integrate(f: GridFunction, E: SpectralMeasure) -> Operator:
    """Spectral integral of f against E, summed atom by atom.

    This is deliberately the atom-sum route: one projection per point of the
    subset, scaled by the value there.  Agreement with representing the
    pullback of f is a verified identity, not an implementation shortcut.
    """
    if f.subset != E.subset:
        raise DomainError("function and measure live over different subsets")
    restricted = E.space.restricted_index_array(E.subset)
    diag = np.zeros(E.space.dimension, dtype=np.complex128)
    for b in range(E.npoints):
        diag[restricted == b] += f.values[b]
    return E.representation._wrap(diag)


def conjugate(u: np.ndarray, obj, tol: float = 1e-10):
    """Conjugation by a unitary: representations, measures, or operators."""
    u = np.asarray(u, dtype=np.complex128)
    check_unitary(u, tol)
    if isinstance(obj, PureRepresentation):
        combined = u if obj.conjugator is None else obj.conjugator @ u
        return PureRepresentation(obj.rep_space, combined)
    if isinstance(obj, SpectralMeasure):
        return SpectralMeasure(conjugate(u, obj.representation, tol), obj.subset)
    if isinstance(obj, DiagonalOperator):
        return ConjugatedDiagonalOperator(u, obj.diag)
    if isinstance(obj, (DenseOperator, ConjugatedDiagonalOperator)):
        return DenseOperator(u.conj().T @ obj.to_dense() @ u)
    raise StructureError(f"cannot conjugate object of type {type(obj).__name__}")


def theta_represent(space: GridEvolutionSpace, f: GridFunction) -> DiagonalOperator:
    """Diagonal action of f on the small space spanned by points(subset)."""
    return DiagonalOperator(f.values.astype(np.complex128))


def theta_projection(space: GridEvolutionSpace, subset, members: Iterable) -> DiagonalOperator:
    """Spectral projection of the small-space action for V subset points(T)."""
    target = frozenset(subset)
    n = space.npoints(target)
    mask = np.zeros(n, dtype=np.complex128)
    for m in members:
        if isinstance(m, GridPoint):
            if m.subset != target:
                raise DomainError("point lies over a different subset")
            mask[space.linear_index(m)] = 1.0
        else:
            i = int(m)
            if not 0 <= i < n:
                raise DomainError(f"point index {i} outside the subset's point set")
            mask[i] = 1.0
    return DiagonalOperator(mask)


def embed_eta(rep_space: RepresentationSpace, subset, op: DiagonalOperator) -> DiagonalOperator:
    """Embed a small-space diagonal operator into the full space.

    Sends the diagonal entry at a point of the subset to every full point
    restricting to it; unital, injective, norm preserving, and a
    *-homomorphism, all of which the suites check.  Only diagonal input is
    meaningful here; anything else is a domain error.
    """
    space = rep_space.space
    target = frozenset(subset)
    if not isinstance(op, DiagonalOperator):
        raise DomainError("embedding is defined on diagonal operators of the small space")
    if op.dimension != space.npoints(target):
        raise DomainError("operator dimension does not match the subset's point count")
    f = GridFunction(space, target, op.diag)
    return DiagonalOperator(pullback(f).values)


def matrix_element(E: SpectralMeasure, x, y, members: Iterable) -> complex:
    """Entry <basis_x, E(V) basis_y> of a measure projection."""
    rep_space = E.representation.rep_space
    i = rep_space.basis_index(x)
    j = rep_space.basis_index(y)
    return E.projection(members).entry(i, j)
