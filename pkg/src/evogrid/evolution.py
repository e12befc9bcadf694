"""Finite-grid evolution spaces.

A time frame fixes an ordered list of time labels, a nonnegative weight per
label (the measure of a subset of labels is the sum of its weights), and a
union-closed family of admissible label subsets.  For each time the space
carries a finite grid of linear contractions on a fixed block algebra; grid
points stand in for evolutions of the algebra, automorphisms being the main
case and unit-ball limit points (convex mixtures, trace averaging) the rest.

A point of the space over a subset T of times is a choice of one grid entry
per time in T.  Points are enumerated in mixed-radix order: times ascend in
frame order and the earliest time is the most significant digit.  With sizes
(2, 3, 2) over times (1, 2, 3), the point with per-time indices (1, 2, 0)
has linear index 1*6 + 2*2 + 0 = 10.  The empty subset has exactly one
point, the empty tuple, so every construction below degenerates gracefully
instead of special-casing T = {}.

Complex functions on the finite point set over T are stored as value vectors
in that linear order.  Restriction of points and pullback of functions along
restriction are the two moves everything later builds on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .algebra import Automorphism, AlgebraElement, WStarAlgebra, linear_map_matrix
from .errors import DomainError, StructureError
from .rng import SplitMix64

__all__ = [
    "TimeFrame",
    "GridPointMap",
    "GridPoint",
    "GridEvolutionSpace",
    "GridFunction",
    "restrict_point",
    "pullback",
    "named_contraction",
    "contraction_norm_estimate",
    "NAMED_CONTRACTIONS",
]

CONTRACTION_TOL = 1e-10  # slack allowed on the unit-ball membership check


def _as_frozenset(subset) -> frozenset:
    if isinstance(subset, frozenset):
        return subset
    return frozenset(subset)


@dataclass(frozen=True)
class TimeFrame:
    """Ordered time labels with weights and an admissible subset family.

    `weights` maps every label to a nonnegative float.  `sigma0` is the
    family of admissible subsets; None means all subsets of the label set.
    The family must be closed under unions so that joint evolutions of two
    admissible subsets are again admissible.
    """

    times: tuple
    weights: tuple[float, ...]
    sigma0: tuple[frozenset, ...] | None = None

    def __post_init__(self):
        times = tuple(self.times)
        if len(set(times)) != len(times) or not times:
            raise StructureError("time labels must be nonempty and distinct")
        weights = tuple(float(w) for w in self.weights)
        if len(weights) != len(times):
            raise StructureError("one weight per time label is required")
        if any(w < 0 or not math.isfinite(w) for w in weights):
            raise StructureError("weights must be finite and nonnegative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "weights", weights)
        if self.sigma0 is not None:
            family = tuple(_as_frozenset(s) for s in self.sigma0)
            known = set(times)
            for s in family:
                if not s <= known:
                    raise DomainError(f"admissible subset {sorted(map(str, s))} uses unknown time labels")
            fam_set = set(family)
            if len(fam_set) != len(family):
                raise StructureError("admissible family contains duplicates")
            for s1 in family:
                for s2 in family:
                    if s1 | s2 not in fam_set:
                        raise StructureError("admissible family is not closed under unions")
            object.__setattr__(self, "sigma0", family)

    @property
    def full(self) -> frozenset:
        return frozenset(self.times)

    def position(self, t) -> int:
        try:
            return self.times.index(t)
        except ValueError:
            raise DomainError(f"unknown time label {t!r}") from None

    def weight(self, t) -> float:
        return self.weights[self.position(t)]

    def ordered(self, subset) -> tuple:
        """Labels of `subset` in frame order; validates membership."""
        s = _as_frozenset(subset)
        positions = sorted(self.position(t) for t in s)
        return tuple(self.times[i] for i in positions)

    def mu(self, subset) -> float:
        """Measure of a label subset: sum of weights in frame order."""
        return float(sum(self.weight(t) for t in self.ordered(subset)))

    def admissible(self) -> tuple[frozenset, ...]:
        """The admissible family, in a deterministic (size, position) order."""
        if self.sigma0 is None:
            family = [
                frozenset(c)
                for r in range(len(self.times) + 1)
                for c in itertools.combinations(self.times, r)
            ]
        else:
            family = list(self.sigma0)
        keyed = sorted(family, key=lambda s: (len(s), tuple(sorted(self.position(t) for t in s))))
        return tuple(keyed)

    def is_admissible(self, subset) -> bool:
        s = _as_frozenset(subset)
        if self.sigma0 is None:
            return s <= self.full
        return s in set(self.sigma0)


@dataclass(frozen=True, eq=False)
class GridPointMap:
    """A linear map on the algebra used as a grid entry.

    Backed either by an automorphism (applied blockwise, exactly norm one)
    or by a dense matrix on coordinate vectors.  Arithmetic on maps (needed
    when probes are evaluated at differences like alpha - tau) produces
    dense-backed maps; those may leave the unit ball, and only maps placed
    in a grid are held to the contraction invariant.
    """

    algebra: WStarAlgebra
    automorphism: Automorphism | None = None
    dense: np.ndarray | None = None

    def __post_init__(self):
        if (self.automorphism is None) == (self.dense is None):
            raise StructureError("exactly one backing (automorphism or dense) is required")
        if self.dense is not None:
            d = self.algebra.dimension
            m = np.array(self.dense, dtype=np.complex128, order="C")
            if m.shape != (d, d):
                raise StructureError(f"dense backing must be {d}x{d}, got {m.shape}")
            m.setflags(write=False)
            object.__setattr__(self, "dense", m)
        elif self.automorphism.algebra != self.algebra:
            raise StructureError("automorphism acts on a different algebra")

    @classmethod
    def from_automorphism(cls, alpha: Automorphism) -> "GridPointMap":
        return cls(alpha.algebra, automorphism=alpha)

    @classmethod
    def from_matrix(cls, algebra: WStarAlgebra, matrix) -> "GridPointMap":
        return cls(algebra, dense=matrix)

    @classmethod
    def identity(cls, algebra: WStarAlgebra) -> "GridPointMap":
        return cls.from_automorphism(Automorphism.identity(algebra))

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        if self.automorphism is not None:
            return self.automorphism.apply(a)
        return self.algebra.from_coordinates(self.dense @ self.algebra.coordinates(a))

    def matrix(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        return linear_map_matrix(self.automorphism)

    def _peer(self, other: "GridPointMap") -> None:
        if not isinstance(other, GridPointMap) or other.algebra != self.algebra:
            raise StructureError("grid maps act on different algebras")

    def __sub__(self, other: "GridPointMap") -> "GridPointMap":
        self._peer(other)
        return GridPointMap.from_matrix(self.algebra, self.matrix() - other.matrix())

    def __add__(self, other: "GridPointMap") -> "GridPointMap":
        self._peer(other)
        return GridPointMap.from_matrix(self.algebra, self.matrix() + other.matrix())

    def __mul__(self, scalar) -> "GridPointMap":
        return GridPointMap.from_matrix(self.algebra, self.matrix() * complex(scalar))

    __rmul__ = __mul__


def _trace_average_matrix(algebra: WStarAlgebra) -> np.ndarray:
    """Coordinate matrix of a |-> (+)_i (trace(a_i)/n_i) * identity."""

    class _Avg:
        def __init__(self, alg):
            self.algebra = alg

        def apply(self, a):
            blocks = [np.trace(b) / n * np.eye(n) for b, n in zip(a.blocks, self.algebra.block_dims)]
            return self.algebra.element(blocks)

    return linear_map_matrix(_Avg(algebra))


NAMED_CONTRACTIONS: dict[str, Callable[[WStarAlgebra], GridPointMap]] = {
    "identity": GridPointMap.identity,
    "trace_average": lambda algebra: GridPointMap.from_matrix(algebra, _trace_average_matrix(algebra)),
}


def named_contraction(name: str, algebra: WStarAlgebra) -> GridPointMap:
    try:
        builder = NAMED_CONTRACTIONS[name]
    except KeyError:
        raise DomainError(f"unknown named contraction {name!r}") from None
    return builder(algebra)


def contraction_norm_estimate(phi: GridPointMap, seed: int = 0, samples: int = 32) -> float:
    """Lower bound for the C*-operator norm of a grid map.

    Automorphism-backed maps have norm exactly one.  For dense-backed maps
    the supremum over the unit ball is attained at tuples of per-block
    unitaries (the extreme points), so the estimate maximizes over the
    identity plus seeded Haar tuples.  Being a lower bound, a value above
    1 + tol certifies a violation; a value below it cannot certify
    membership, which is the honest trade at this scale.
    """
    if phi.automorphism is not None:
        return 1.0
    algebra = phi.algebra
    rng = SplitMix64(seed)
    best = phi.apply(algebra.identity()).norm()
    for _ in range(samples):
        u = algebra.element([rng.haar_unitary(n) for n in algebra.block_dims])
        best = max(best, phi.apply(u).norm())
    return best


@dataclass(frozen=True)
class GridPoint:
    """Point over a subset of times: labels in frame order plus grid indices."""

    times: tuple
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(self.times))
        if len(self.times) != len(self.indices):
            raise StructureError("one grid index per time label is required")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))

    @property
    def subset(self) -> frozenset:
        return frozenset(self.times)

    def index_at(self, t) -> int:
        try:
            return self.indices[self.times.index(t)]
        except ValueError:
            raise DomainError(f"point has no coordinate at time {t!r}") from None


@dataclass(frozen=True, eq=False)
class GridEvolutionSpace:
    """Per-time grids of maps over a time frame, with product-point plumbing."""

    frame: TimeFrame
    grids: tuple[tuple[GridPointMap, ...], ...]

    def __post_init__(self):
        if isinstance(self.grids, Mapping):
            aligned = tuple(tuple(self.grids[t]) for t in self.frame.times)
        else:
            aligned = tuple(tuple(g) for g in self.grids)
        if len(aligned) != len(self.frame.times):
            raise StructureError("one grid per time label is required")
        if any(len(g) == 0 for g in aligned):
            raise StructureError("every per-time grid must be nonempty")
        algebras = {m.algebra for g in aligned for m in g}
        if len(algebras) != 1:
            raise StructureError("all grid maps must act on the same algebra")
        object.__setattr__(self, "grids", aligned)

    @property
    def algebra(self) -> WStarAlgebra:
        return self.grids[0][0].algebra

    @property
    def full(self) -> frozenset:
        return self.frame.full

    # -- subset geometry -------------------------------------------------

    def axes(self, subset) -> tuple[int, ...]:
        return tuple(sorted(self.frame.position(t) for t in _as_frozenset(subset)))

    def shape(self, subset) -> tuple[int, ...]:
        return tuple(len(self.grids[i]) for i in self.axes(subset))

    def npoints(self, subset) -> int:
        return math.prod(self.shape(subset))

    def full_shape(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.grids)

    @property
    def dimension(self) -> int:
        """Number of points over the full label set."""
        return math.prod(self.full_shape())

    def grid_size(self, t) -> int:
        return len(self.grids[self.frame.position(t)])

    def map_at(self, t, index: int) -> GridPointMap:
        grid = self.grids[self.frame.position(t)]
        if not 0 <= index < len(grid):
            raise DomainError(f"grid index {index} out of range at time {t!r}")
        return grid[index]

    def maps_of(self, point: GridPoint) -> tuple[GridPointMap, ...]:
        return tuple(self.map_at(t, i) for t, i in zip(point.times, point.indices))

    # -- points ----------------------------------------------------------

    def enumerate_points(self, subset) -> list[GridPoint]:
        """All points over `subset` in ascending mixed-radix order."""
        labels = self.frame.ordered(subset)
        ranges = [range(self.grid_size(t)) for t in labels]
        return [GridPoint(labels, idx) for idx in itertools.product(*ranges)]

    def linear_index(self, point: GridPoint) -> int:
        """Mixed-radix index; earliest time is the most significant digit."""
        labels = self.frame.ordered(point.subset)
        if labels != point.times:
            point = GridPoint(labels, tuple(point.index_at(t) for t in labels))
        index = 0
        for t, i in zip(point.times, point.indices):
            size = self.grid_size(t)
            if not 0 <= i < size:
                raise DomainError(f"grid index {i} out of range at time {t!r}")
            index = index * size + i
        return index

    def point_from_index(self, subset, index: int) -> GridPoint:
        labels = self.frame.ordered(subset)
        sizes = [self.grid_size(t) for t in labels]
        total = math.prod(sizes)
        if not 0 <= index < total:
            raise DomainError(f"linear index {index} out of range for subset {labels}")
        digits = [0] * len(sizes)
        for k in range(len(sizes) - 1, -1, -1):
            index, digits[k] = divmod(index, sizes[k])
        return GridPoint(labels, tuple(digits))

    def restrict_point(self, point: GridPoint, subset) -> GridPoint:
        """Forget the coordinates outside `subset`."""
        target = _as_frozenset(subset)
        if not target <= point.subset:
            raise DomainError("cannot restrict to a subset with extra time labels")
        labels = self.frame.ordered(target)
        return GridPoint(labels, tuple(point.index_at(t) for t in labels))

    def restricted_index_array(self, subset) -> np.ndarray:
        """For each full-set point index, the linear index of its restriction.

        Computed by placing each retained digit's place value along its own
        axis of the full mixed-radix grid and summing with broadcasting.
        """
        full_shape = self.full_shape()
        axes = self.axes(subset)
        out = np.zeros(full_shape, dtype=np.int64)
        place = 1
        for ax in reversed(axes):
            size = full_shape[ax]
            shape = [1] * len(full_shape)
            shape[ax] = size
            out += (np.arange(size, dtype=np.int64) * place).reshape(shape)
            place *= size
        return out.ravel()

    # -- functions on point sets ------------------------------------------

    def function(self, subset, values) -> "GridFunction":
        return GridFunction(self, _as_frozenset(subset), np.asarray(values))

    def constant(self, subset, value) -> "GridFunction":
        n = self.npoints(subset)
        return self.function(subset, np.full(n, value, dtype=np.complex128))

    def indicator(self, subset, members: Iterable[int]) -> "GridFunction":
        vals = np.zeros(self.npoints(subset), dtype=np.complex128)
        for i in members:
            vals[i] = 1.0
        return self.function(subset, vals)

    def random_function(self, subset, rng: SplitMix64, unimodular: bool = False) -> "GridFunction":
        n = self.npoints(subset)
        if unimodular:
            phases = np.array([rng.uniform() for _ in range(n)])
            vals = np.exp(2j * np.pi * phases)
        else:
            vals = np.array([rng.complex_normal() for _ in range(n)])
        return self.function(subset, vals)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Function on the points over one subset, stored in linear-index order."""

    space: GridEvolutionSpace
    subset: frozenset
    values: np.ndarray

    def __post_init__(self):
        subset = _as_frozenset(self.subset)
        vals = np.array(self.values, order="C")
        if vals.dtype not in (np.float64, np.complex128):
            vals = vals.astype(np.complex128)
        expected = self.space.npoints(subset)
        if vals.shape != (expected,):
            raise StructureError(f"value vector has shape {vals.shape}, expected ({expected},)")
        vals.setflags(write=False)
        object.__setattr__(self, "subset", subset)
        object.__setattr__(self, "values", vals)

    def at(self, point: GridPoint) -> complex:
        if point.subset != self.subset:
            raise DomainError("point lies over a different subset")
        return complex(self.values[self.space.linear_index(point)])

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def _peer(self, other: "GridFunction") -> None:
        if other.space is not self.space or other.subset != self.subset:
            raise StructureError("grid functions live over different point sets")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._peer(other)
        return GridFunction(self.space, self.subset, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._peer(other)
        return GridFunction(self.space, self.subset, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            self._peer(other)
            return GridFunction(self.space, self.subset, self.values * other.values)
        return GridFunction(self.space, self.subset, self.values * other)

    __rmul__ = __mul__

    def conjugate(self) -> "GridFunction":
        return GridFunction(self.space, self.subset, np.conj(self.values))

    def same_values(self, other: "GridFunction") -> bool:
        self._peer(other)
        return bool(np.array_equal(self.values, other.values))


def restrict_point(space: GridEvolutionSpace, point: GridPoint, subset) -> GridPoint:
    return space.restrict_point(point, subset)


def pullback(f: GridFunction) -> GridFunction:
    """Extend `f` to the full label set by composing with restriction.

    The value vector is reshaped onto the axes of its subset and broadcast
    over the remaining axes, so values are copied bit for bit and the sup
    norm is preserved exactly.
    """
    space = f.space
    full_shape = space.full_shape()
    axes = space.axes(f.subset)
    shape = [1] * len(full_shape)
    for ax in axes:
        shape[ax] = full_shape[ax]
    cube = np.broadcast_to(f.values.reshape(shape), full_shape)
    return GridFunction(space, space.full, np.ascontiguousarray(cube).ravel())
