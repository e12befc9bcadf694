"""Finite-dimensional W*-algebras and their automorphisms.

An algebra here is a finite direct sum of full complex matrix blocks,

    A = M_{n_1} (+) M_{n_2} (+) ... (+) M_{n_k},

stored blockwise.  The C*-norm of an element is the largest spectral norm
over its blocks, and every normal linear functional is a trace pairing
against a tuple of density matrices, one per block.

Automorphisms of such an algebra are exactly the maps that permute blocks of
equal dimension and conjugate each block by a unitary.  They are stored that
way: a permutation plus one unitary per source block.  General linear maps on
the algebra (convex mixtures, trace averaging, differences of automorphisms)
appear elsewhere as dense matrices acting on the coordinate vector; this
module only needs them to expose `algebra` and `apply`.

Duality probes are elementary tensors: finite lists of (element, functional)
pairs.  Pairing one against a linear map phi gives the scalar
sum_j g_j(phi(a_j)), the value that separates points of the unit ball of
bounded maps on A in its natural weak topology.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import StructureError
from .rng import SplitMix64

__all__ = [
    "WStarAlgebra",
    "AlgebraElement",
    "NormalFunctional",
    "Automorphism",
    "ElementaryTensor",
    "AutomorphismReport",
    "apply_automorphism",
    "compose_automorphisms",
    "verify_automorphism",
    "weakstar_pairing",
    "functional_at",
]

UNITARY_TOL = 1e-8  # construction-time sanity bound; laws are verified separately


def _frozen_matrix(m, dim: int | None = None) -> np.ndarray:
    a = np.array(m, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise StructureError(f"expected a {dim}x{dim} block, got {a.shape[0]}x{a.shape[1]}")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class WStarAlgebra:
    """Direct sum of full matrix blocks, identified by its block dimensions."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.block_dims)
        if not dims or any(n < 1 for n in dims):
            raise StructureError("block dimensions must be a nonempty tuple of positive integers")
        object.__setattr__(self, "block_dims", dims)

    @property
    def nblocks(self) -> int:
        return len(self.block_dims)

    @property
    def dimension(self) -> int:
        """Linear dimension sum of n_i^2, the length of coordinate vectors."""
        return sum(n * n for n in self.block_dims)

    def element(self, blocks: Sequence) -> "AlgebraElement":
        if len(blocks) != self.nblocks:
            raise StructureError(f"expected {self.nblocks} blocks, got {len(blocks)}")
        mats = tuple(_frozen_matrix(b, n) for b, n in zip(blocks, self.block_dims))
        return AlgebraElement(self, mats)

    def zero(self) -> "AlgebraElement":
        return self.element([np.zeros((n, n)) for n in self.block_dims])

    def identity(self) -> "AlgebraElement":
        return self.element([np.eye(n) for n in self.block_dims])

    def coordinates(self, a: "AlgebraElement") -> np.ndarray:
        """Row-major vectorization of the blocks, concatenated in order."""
        self._own(a)
        return np.concatenate([b.ravel() for b in a.blocks])

    def from_coordinates(self, v: np.ndarray) -> "AlgebraElement":
        v = np.asarray(v, dtype=np.complex128).ravel()
        if v.size != self.dimension:
            raise StructureError(f"coordinate vector has length {v.size}, expected {self.dimension}")
        blocks, k = [], 0
        for n in self.block_dims:
            blocks.append(v[k : k + n * n].reshape(n, n))
            k += n * n
        return self.element(blocks)

    def random_element(self, rng: SplitMix64, scale: float = 1.0) -> "AlgebraElement":
        """Blocks with independent scaled complex Gaussian entries."""
        return self.element([rng.complex_matrix(n, n) * scale for n in self.block_dims])

    def random_functional(self, rng: SplitMix64, scale: float = 1.0) -> "NormalFunctional":
        return NormalFunctional(self, tuple(rng.complex_matrix(n, n) * scale for n in self.block_dims))

    def _own(self, a: "AlgebraElement") -> None:
        if a.algebra != self:
            raise StructureError("element belongs to a different algebra")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Immutable element of a block algebra; arithmetic is blockwise."""

    algebra: WStarAlgebra
    blocks: tuple[np.ndarray, ...]

    def _check_peer(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement) or other.algebra != self.algebra:
            raise StructureError("operands live in different algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_peer(other)
        return self.algebra.element([x + y for x, y in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_peer(other)
        return self.algebra.element([x - y for x, y in zip(self.blocks, other.blocks)])

    def __mul__(self, scalar) -> "AlgebraElement":
        return self.algebra.element([b * complex(scalar) for b in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        """Algebra product, blockwise matrix multiplication."""
        self._check_peer(other)
        return self.algebra.element([x @ y for x, y in zip(self.blocks, other.blocks)])

    def star(self) -> "AlgebraElement":
        """Adjoint, conjugate transpose on every block."""
        return self.algebra.element([b.conj().T for b in self.blocks])

    def norm(self) -> float:
        """C*-norm: the largest spectral norm over the blocks."""
        return max(float(np.linalg.norm(b, 2)) for b in self.blocks)

    def allclose(self, other: "AlgebraElement", tol: float = 0.0) -> bool:
        self._check_peer(other)
        return (self - other).norm() <= tol


@dataclass(frozen=True, eq=False)
class NormalFunctional:
    """Normal functional a |-> sum_i trace(rho_i a_i) with one density per block."""

    algebra: WStarAlgebra
    densities: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(
            _frozen_matrix(d, n) for d, n in zip(self.densities, self.algebra.block_dims)
        )
        if len(self.densities) != self.algebra.nblocks:
            raise StructureError("one density matrix per block is required")
        object.__setattr__(self, "densities", mats)

    def __call__(self, a: AlgebraElement) -> complex:
        self.algebra._own(a)
        return complex(sum(np.trace(d @ b) for d, b in zip(self.densities, a.blocks)))


def _identity_perm(k: int) -> tuple[int, ...]:
    return tuple(range(k))


@dataclass(frozen=True, eq=False)
class Automorphism:
    """Block permutation combined with per-block unitary conjugation.

    Block i of the argument is conjugated by `unitaries[i]` and lands in
    block `perm[i]` of the result; the permutation may only connect blocks
    of equal dimension.
    """

    algebra: WStarAlgebra
    unitaries: tuple[np.ndarray, ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        dims = self.algebra.block_dims
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(len(dims))):
            raise StructureError("perm is not a permutation of the block indices")
        if any(dims[i] != dims[p] for i, p in enumerate(perm)):
            raise StructureError("perm may only connect blocks of equal dimension")
        mats = tuple(_frozen_matrix(u, n) for u, n in zip(self.unitaries, dims))
        if len(mats) != len(dims):
            raise StructureError("one unitary per block is required")
        for u in mats:
            defect = np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0]), 2)
            if defect > UNITARY_TOL:
                raise StructureError(f"block matrix is not unitary (defect {defect:.2e})")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "unitaries", mats)

    @classmethod
    def identity(cls, algebra: WStarAlgebra) -> "Automorphism":
        return cls(algebra, tuple(np.eye(n) for n in algebra.block_dims), _identity_perm(algebra.nblocks))

    @classmethod
    def conjugation(cls, algebra: WStarAlgebra, unitaries: Sequence, perm: Sequence[int] | None = None) -> "Automorphism":
        if perm is None:
            perm = _identity_perm(algebra.nblocks)
        return cls(algebra, tuple(unitaries), tuple(perm))

    @classmethod
    def haar(cls, algebra: WStarAlgebra, rng: SplitMix64) -> "Automorphism":
        """Trivial permutation, independent Haar unitary on every block."""
        return cls.conjugation(algebra, [rng.haar_unitary(n) for n in algebra.block_dims])

    def apply(self, a: AlgebraElement) -> AlgebraElement:
        self.algebra._own(a)
        out: list[np.ndarray | None] = [None] * self.algebra.nblocks
        for i, (u, b) in enumerate(zip(self.unitaries, a.blocks)):
            out[self.perm[i]] = u @ b @ u.conj().T
        return self.algebra.element(out)

    def inverse(self) -> "Automorphism":
        k = self.algebra.nblocks
        inv_perm = [0] * k
        for i, p in enumerate(self.perm):
            inv_perm[p] = i
        # block m of the inverse is conjugated by the adjoint of the unitary
        # that produced it, then sent back where it came from
        unitaries = tuple(self.unitaries[inv_perm[m]].conj().T for m in range(k))
        return Automorphism(self.algebra, unitaries, tuple(inv_perm))

    def matrix(self) -> np.ndarray:
        """Dense matrix of the map on coordinate vectors."""
        return linear_map_matrix(self)


def apply_automorphism(alpha: Automorphism, a: AlgebraElement) -> AlgebraElement:
    return alpha.apply(a)


def compose_automorphisms(alpha: Automorphism, beta: Automorphism) -> Automorphism:
    """The automorphism a |-> alpha(beta(a))."""
    if alpha.algebra != beta.algebra:
        raise StructureError("cannot compose automorphisms of different algebras")
    perm = tuple(alpha.perm[q] for q in beta.perm)
    unitaries = tuple(alpha.unitaries[beta.perm[i]] @ beta.unitaries[i] for i in range(alpha.algebra.nblocks))
    return Automorphism(alpha.algebra, unitaries, perm)


def linear_map_matrix(phi) -> np.ndarray:
    """Dense coordinate matrix of any linear map exposing algebra/apply."""
    algebra = phi.algebra
    d = algebra.dimension
    cols = np.empty((d, d), dtype=np.complex128)
    basis = np.zeros(d, dtype=np.complex128)
    for j in range(d):
        basis[j] = 1.0
        cols[:, j] = algebra.coordinates(phi.apply(algebra.from_coordinates(basis)))
        basis[j] = 0.0
    return cols


@dataclass(frozen=True)
class AutomorphismReport:
    """Max deviation per automorphism law over the sampled elements."""

    multiplicative: float
    star_preserving: float
    unital: float
    isometric: float
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        worst = max(self.multiplicative, self.star_preserving, self.unital, self.isometric)
        return worst <= self.tolerance

    def failing_laws(self) -> tuple[str, ...]:
        pairs = [
            ("multiplicative", self.multiplicative),
            ("star_preserving", self.star_preserving),
            ("unital", self.unital),
            ("isometric", self.isometric),
        ]
        return tuple(name for name, dev in pairs if dev > self.tolerance)


def verify_automorphism(phi, sample_count: int = 20, seed: int = 0, tol: float = 1e-10) -> AutomorphismReport:
    """Check the *-automorphism laws on seeded random elements.

    `phi` may be any linear map exposing `algebra` and `apply`; maps that are
    not automorphisms (e.g. trace averaging) show up as a law failure in the
    report rather than as an exception.
    """
    algebra = phi.algebra
    rng = SplitMix64(seed)
    one = algebra.identity()
    unital = (phi.apply(one) - one).norm()
    mult = star = isom = 0.0
    for _ in range(sample_count):
        a = algebra.random_element(rng)
        b = algebra.random_element(rng)
        mult = max(mult, (phi.apply(a @ b) - phi.apply(a) @ phi.apply(b)).norm())
        star = max(star, (phi.apply(a.star()) - phi.apply(a).star()).norm())
        isom = max(isom, abs(phi.apply(a).norm() - a.norm()))
    return AutomorphismReport(mult, star, unital, isom, tol, sample_count)


@dataclass(frozen=True, eq=False)
class ElementaryTensor:
    """Finite list of (element, functional) pairs used as a duality probe."""

    algebra: WStarAlgebra
    pairs: tuple[tuple[AlgebraElement, NormalFunctional], ...]

    def __post_init__(self):
        for a, g in self.pairs:
            if a.algebra != self.algebra or g.algebra != self.algebra:
                raise StructureError("tensor pairs must live in the declared algebra")

    def __add__(self, other: "ElementaryTensor") -> "ElementaryTensor":
        if other.algebra != self.algebra:
            raise StructureError("cannot add tensors over different algebras")
        return ElementaryTensor(self.algebra, self.pairs + other.pairs)

    def __mul__(self, scalar) -> "ElementaryTensor":
        z = complex(scalar)
        scaled = tuple((a * z, g) for a, g in self.pairs)
        return ElementaryTensor(self.algebra, scaled)

    __rmul__ = __mul__


def weakstar_pairing(phi, tensor: ElementaryTensor) -> complex:
    """Duality value sum_j g_j(phi(a_j)) of a linear map against a probe."""
    if phi.algebra != tensor.algebra:
        raise StructureError("map and tensor live over different algebras")
    total = 0.0 + 0.0j
    for a, g in tensor.pairs:
        total += g(phi.apply(a))
    return total


def functional_at(tensor: ElementaryTensor, phi) -> complex:
    """The probe read as a scalar function evaluated at the map `phi`."""
    return weakstar_pairing(phi, tensor)
