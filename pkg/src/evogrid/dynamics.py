"""Action weights and the unitaries they integrate to.

An action weight assigns to every admissible time subset T a unimodular
function u_T on the points over T, subject to two laws: u_T is identically
one whenever T has measure zero, and for measure-disjoint T1, T2 the weight
of the union factors pointwise through restriction,

    u_{T1 u T2}(x|_{T1 u T2}) = u_{T1}(x|_{T1}) * u_{T2}(x|_{T2}).

Integrating u_T against the spectral measure over T yields one unitary per
admissible subset.  The factorization law above turns into the group law
U_{T1} U_{T2} = U_{T1 u T2} for measure-disjoint subsets, all of these
unitaries commute within one representation, and conjugating the
representation conjugates every U_T along with it.  Each of those statements
is a check in the verification suites, not an assumption.

The module also provides the concrete action built from duality probes:
S_T(alpha) = sum over t in T of g_t(f_t(alpha_t - tau_t)) with f_t an
elementary tensor, tau_t a reference grid map, and g_t drawn from a small
registry of real-valued post-maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .algebra import ElementaryTensor, functional_at
from .errors import DataError, DomainError, PreconditionError, StructureError
from .evolution import GridEvolutionSpace, GridFunction, GridPointMap
from .representation import (
    Operator,
    PureRepresentation,
    check_unitary,
    conjugate,
    identity_operator,
    integrate,
)
from .rng import SplitMix64

__all__ = [
    "ActionWeight",
    "ActionWeightReport",
    "EvolutionUnitary",
    "GroupLawReport",
    "CommutantReport",
    "validate_action_weight",
    "evolution_unitary",
    "check_group_law",
    "commutant_witness",
    "example_action",
    "G_REGISTRY",
    "register_g",
    "resolve_g",
]

# registry of real-valued post-maps applied to probe values
G_REGISTRY: dict[str, Callable[[complex], float]] = {
    "abs": lambda z: abs(z),
    "abs2": lambda z: abs(z) ** 2,
    "re": lambda z: z.real,
}


def register_g(name: str, fn: Callable[[complex], float]) -> None:
    G_REGISTRY[name] = fn


def resolve_g(spec) -> Callable[[complex], float]:
    """Accepts a callable, a registry name, or {name, scale, offset}."""
    if callable(spec):
        return spec
    if isinstance(spec, str):
        try:
            return G_REGISTRY[spec]
        except KeyError:
            raise DomainError(f"unknown post-map {spec!r}") from None
    if isinstance(spec, Mapping):
        base = resolve_g(spec["name"])
        scale = float(spec.get("scale", 1.0))
        offset = float(spec.get("offset", 0.0))
        return lambda z: scale * base(z) + offset
    raise DomainError(f"cannot interpret post-map spec {spec!r}")


@dataclass(frozen=True, eq=False)
class ActionWeight:
    """One unimodular function per admissible subset, stored extensionally."""

    space: GridEvolutionSpace
    functions: Mapping[frozenset, GridFunction]

    def __post_init__(self):
        frame = self.space.frame
        table = {frozenset(k): v for k, v in dict(self.functions).items()}
        admissible = set(frame.admissible())
        for subset, f in table.items():
            if subset not in admissible:
                raise DomainError(f"weight defined on inadmissible subset {sorted(map(str, subset))}")
            if f.space is not self.space or f.subset != subset:
                raise StructureError("weight function does not match its subset")
        missing = admissible - set(table)
        if missing:
            names = sorted(sorted(map(str, s)) for s in missing)
            raise StructureError(f"weight missing admissible subsets: {names}")
        object.__setattr__(self, "functions", table)

    def domain(self) -> tuple[frozenset, ...]:
        return self.space.frame.admissible()

    def function(self, subset) -> GridFunction:
        key = frozenset(subset)
        try:
            return self.functions[key]
        except KeyError:
            raise DomainError(f"subset {sorted(map(str, key))} is not admissible") from None


@dataclass(frozen=True)
class ActionWeightReport:
    """Max deviation per action-weight law."""

    unimodular: float
    cocycle: float
    null_subset: float
    tolerance: float
    pairs_checked: int
    sampled: bool

    @property
    def passed(self) -> bool:
        return max(self.unimodular, self.cocycle, self.null_subset) <= self.tolerance


def validate_action_weight(
    weight: ActionWeight,
    tol: float = 1e-12,
    max_points: int = 10_000,
    seed: int = 0,
) -> ActionWeightReport:
    """Check unimodularity, the null-subset law, and the cocycle law.

    The cocycle law is checked for every ordered pair of measure-disjoint
    admissible subsets, evaluated over all full-set points, or over a seeded
    sample when the full point set is larger than `max_points`.
    """
    space = weight.space
    frame = space.frame
    n_full = space.dimension
    if n_full > max_points:
        rng = SplitMix64(seed)
        idx = np.array(sorted(rng.sample_indices(n_full, max_points)), dtype=np.int64)
        sampled = True
    else:
        idx = np.arange(n_full, dtype=np.int64)
        sampled = False

    unimodular = 0.0
    null_subset = 0.0
    pulled: dict[frozenset, np.ndarray] = {}
    for subset in weight.domain():
        f = weight.function(subset)
        unimodular = max(unimodular, float(np.max(np.abs(np.abs(f.values) - 1.0))) if f.values.size else 0.0)
        if frame.mu(subset) == 0.0:
            null_subset = max(null_subset, float(np.max(np.abs(f.values - 1.0))))
        restricted = space.restricted_index_array(subset)[idx]
        pulled[subset] = f.values[restricted]

    cocycle = 0.0
    pairs = 0
    domain = weight.domain()
    for t1 in domain:
        for t2 in domain:
            if frame.mu(t1 & t2) != 0.0:
                continue
            union = t1 | t2
            dev = np.max(np.abs(pulled[union] - pulled[t1] * pulled[t2]))
            cocycle = max(cocycle, float(dev))
            pairs += 1
    return ActionWeightReport(unimodular, cocycle, null_subset, tol, pairs, sampled)


@dataclass(frozen=True, eq=False)
class EvolutionUnitary:
    """The unitary attached to one admissible subset."""

    subset: frozenset
    operator: Operator

    def norm_defect(self) -> float:
        """Distance of U*U from the identity."""
        n = self.operator.dimension
        return (self.operator.adjoint() @ self.operator - identity_operator(n)).norm()


def evolution_unitary(weight: ActionWeight, subset, rep: PureRepresentation) -> EvolutionUnitary:
    """Integrate the subset's weight function against its spectral measure."""
    key = frozenset(subset)
    f = weight.function(key)  # raises DomainError off the admissible family
    op = integrate(f, rep.spectral_measure(key))
    return EvolutionUnitary(key, op)


@dataclass(frozen=True)
class GroupLawReport:
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance


def check_group_law(
    weight: ActionWeight, t1, t2, rep: PureRepresentation, tol: float = 1e-12
) -> GroupLawReport:
    """Norm of U_{T1} U_{T2} - U_{T1 u T2} for measure-disjoint subsets."""
    s1, s2 = frozenset(t1), frozenset(t2)
    overlap = weight.space.frame.mu(s1 & s2)
    if overlap != 0.0:
        raise PreconditionError(f"subsets overlap with measure {overlap:g}; the group law does not apply")
    u1 = evolution_unitary(weight, s1, rep).operator
    u2 = evolution_unitary(weight, s2, rep).operator
    u12 = evolution_unitary(weight, s1 | s2, rep).operator
    return GroupLawReport((u1 @ u2 - u12).norm(), tol)


@dataclass(frozen=True, eq=False)
class CommutantReport:
    """Commutation and covariance data for one weight and one conjugator."""

    same_rep_commutator: float
    covariance: float
    witness: float
    witness_pair: tuple
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.same_rep_commutator, self.covariance) <= self.tolerance


def commutant_witness(
    weight: ActionWeight,
    rep: PureRepresentation,
    conjugator: np.ndarray,
    tol: float = 1e-12,
) -> CommutantReport:
    """Commutators within one representation versus across a conjugation.

    Within a single representation all evolution unitaries commute; that max
    commutator norm is reported alongside the covariance defect
    ||U'_T - W* U_T W||.  The witness value is the largest commutator norm
    between a unitary of the original representation and one of the
    conjugated representation: a strictly positive value exhibits an
    operator outside the commutant of the conjugated family.
    """
    check_unitary(np.asarray(conjugator, dtype=np.complex128))
    rep_conj = conjugate(conjugator, rep)
    domain = weight.domain()
    plain = {s: evolution_unitary(weight, s, rep).operator for s in domain}
    twisted = {s: evolution_unitary(weight, s, rep_conj).operator for s in domain}

    same = 0.0
    for i, s1 in enumerate(domain):
        for s2 in domain[i:]:
            same = max(same, (plain[s1] @ plain[s2] - plain[s2] @ plain[s1]).norm())

    covariance = 0.0
    for s in domain:
        direct = conjugate(conjugator, plain[s])
        covariance = max(covariance, (twisted[s] - direct).norm())

    witness = -1.0
    witness_pair: tuple = ()
    for s1 in domain:
        for s2 in domain:
            value = (plain[s1] @ twisted[s2] - twisted[s2] @ plain[s1]).norm()
            if value > witness:
                witness = value
                witness_pair = (tuple(map(str, weight.space.frame.ordered(s1))),
                                tuple(map(str, weight.space.frame.ordered(s2))))
    return CommutantReport(same, covariance, witness, witness_pair, tol)


def example_action(
    space: GridEvolutionSpace,
    subset,
    probes: Mapping,
    post_maps: Mapping,
    references: Mapping,
) -> GridFunction:
    """The probe-difference action S_T(alpha) = sum_t g_t(f_t(alpha_t - tau_t)).

    `probes` maps each time in T to an elementary tensor f_t, `post_maps` to
    a real-valued g_t (name, spec, or callable), and `references` to a grid
    map tau_t.  Each time's contribution depends only on that time's grid
    coordinate, so the sum is assembled by broadcasting one value table per
    time across the product grid.
    """
    target = frozenset(subset)
    labels = space.frame.ordered(target)
    for t in labels:
        if t not in probes or t not in post_maps or t not in references:
            raise StructureError(f"missing probe, post-map, or reference at time {t!r}")

    shape = space.shape(target)
    values = np.zeros(shape, dtype=np.float64)
    for pos, t in enumerate(labels):
        f_t: ElementaryTensor = probes[t]
        g_t = resolve_g(post_maps[t])
        tau_t: GridPointMap = references[t]
        base = functional_at(f_t, tau_t)
        table = np.empty(space.grid_size(t), dtype=np.float64)
        for j in range(space.grid_size(t)):
            z = functional_at(f_t, space.map_at(t, j)) - base
            g_val = g_t(z)
            try:
                table[j] = float(g_val)
            except (TypeError, ValueError):
                raise DataError(f"post-map at time {t!r} returned a non-real value {g_val!r}") from None
            if not math.isfinite(table[j]):
                raise DataError(f"post-map produced a non-finite value at time {t!r}, grid index {j}")
        bshape = [1] * len(shape)
        bshape[pos] = space.grid_size(t)
        values = values + table.reshape(bshape)
    return GridFunction(space, target, values.ravel())
