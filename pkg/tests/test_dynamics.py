import numpy as np
import pytest

from evogrid import (
    ActionWeight,
    DataError,
    DiagonalOperator,
    DomainError,
    ElementaryTensor,
    GridPointMap,
    Lagrangian,
    NormalFunctional,
    PreconditionError,
    StructureError,
    check_group_law,
    commutant_witness,
    evolution_unitary,
    example_action,
    named_contraction,
    resolve_g,
    validate_action_weight,
    weight_from_lagrangian,
)
from evogrid.rng import SplitMix64

from conftest import HADAMARD


def make_weight(space):
    table = {t: [0.3 * (j + 1) for j in range(space.grid_size(t))] for t in space.frame.times}
    return weight_from_lagrangian(Lagrangian.from_table(space, table))


# -- post-map registry ---------------------------------------------------------


def test_resolve_g_forms():
    assert resolve_g("abs2")(3.0 + 4.0j) == pytest.approx(25.0)
    assert resolve_g("re")(2.0 - 1.0j) == pytest.approx(2.0)
    scaled = resolve_g({"name": "abs", "scale": 2.0, "offset": 1.0})
    assert scaled(-3.0) == pytest.approx(7.0)
    assert resolve_g(lambda z: 5.0)(0) == 5.0
    with pytest.raises(DomainError):
        resolve_g("nope")
    with pytest.raises(DomainError):
        resolve_g(42)


# -- action weights ------------------------------------------------------------


def test_weight_requires_every_admissible_subset(weighted_space):
    weight = make_weight(weighted_space)
    partial = {s: f for s, f in weight.functions.items() if s != frozenset({"1"})}
    with pytest.raises(StructureError):
        ActionWeight(weighted_space, partial)


def test_weight_rejects_inadmissible_subsets(m2, flip):
    from evogrid import GridEvolutionSpace, TimeFrame

    frame = TimeFrame(
        ("1", "2"),
        (1.0, 1.0),
        sigma0=(frozenset(), frozenset({"1"}), frozenset({"1", "2"})),
    )
    ident = GridPointMap.identity(m2)
    space = GridEvolutionSpace(frame, ((ident, GridPointMap.from_automorphism(flip)), (ident,)))
    weight = make_weight(space)
    bad = dict(weight.functions)
    bad[frozenset({"2"})] = space.constant({"2"}, 1.0)
    with pytest.raises(DomainError):
        ActionWeight(space, bad)


def test_weight_from_lagrangian_satisfies_all_laws(weighted_space):
    weight = make_weight(weighted_space)
    report = validate_action_weight(weight, tol=1e-12)
    assert report.passed
    assert report.unimodular <= 1e-15
    assert report.cocycle <= 1e-15
    assert report.null_subset == 0.0
    assert report.pairs_checked > 0


def test_perturbed_cocycle_deviation_frozen(weighted_space):
    weight = make_weight(weighted_space)
    tweaked = dict(weight.functions)
    sub = frozenset({"1"})
    values = weight.function(sub).values.copy()
    values *= np.exp(0.1j)
    tweaked[sub] = weighted_space.function(sub, values)
    report = validate_action_weight(ActionWeight(weighted_space, tweaked), tol=1e-12)
    assert not report.passed
    # every violated pair differs by the same unimodular factor
    assert report.cocycle == pytest.approx(abs(np.exp(0.1j) - 1.0), abs=1e-13)


def test_non_unimodular_weight_flagged(weighted_space):
    weight = make_weight(weighted_space)
    tweaked = dict(weight.functions)
    sub = frozenset({"2"})
    tweaked[sub] = weighted_space.function(sub, weight.function(sub).values * 1.5)
    report = validate_action_weight(ActionWeight(weighted_space, tweaked), tol=1e-12)
    assert report.unimodular == pytest.approx(0.5, abs=1e-13)
    assert not report.passed


# -- evolution unitaries ---------------------------------------------------------


def test_unitaries_are_unitary(weighted_space, rep8):
    weight = make_weight(weighted_space)
    for subset in weighted_space.frame.admissible():
        u = evolution_unitary(weight, subset, rep8)
        assert u.norm_defect() <= 1e-14
        assert isinstance(u.operator, DiagonalOperator)


def test_empty_set_unitary_is_exactly_identity(weighted_space, rep8):
    weight = make_weight(weighted_space)
    u = evolution_unitary(weight, frozenset(), rep8)
    assert np.array_equal(u.operator.diag, np.ones(8, dtype=np.complex128))


def test_null_weight_subset_unitary_is_exactly_identity(weighted_space, rep8):
    # time "3" has weight zero, so its action vanishes and u is one
    weight = make_weight(weighted_space)
    u = evolution_unitary(weight, {"3"}, rep8)
    assert np.array_equal(u.operator.diag, np.ones(8, dtype=np.complex128))


def test_group_law_all_disjoint_pairs(weighted_space, rep8):
    weight = make_weight(weighted_space)
    domain = weighted_space.frame.admissible()
    checked = 0
    for t1 in domain:
        for t2 in domain:
            if weighted_space.frame.mu(t1 & t2) != 0.0:
                continue
            report = check_group_law(weight, t1, t2, rep8, tol=1e-12)
            assert report.passed, (sorted(t1), sorted(t2), report.deviation)
            checked += 1
    assert checked > len(domain)  # includes genuinely overlapping-by-null pairs


def test_group_law_spans_weight_zero_overlap(weighted_space, rep8):
    # {1,3} and {2,3} overlap exactly in the measure-zero time 3
    weight = make_weight(weighted_space)
    report = check_group_law(weight, {"1", "3"}, {"2", "3"}, rep8, tol=1e-12)
    assert report.passed


def test_group_law_rejects_positive_overlap(weighted_space, rep8):
    weight = make_weight(weighted_space)
    with pytest.raises(PreconditionError):
        check_group_law(weight, {"1"}, {"1", "2"}, rep8)


def test_same_representation_unitaries_commute(weighted_space, rep8):
    # diagonal products commute up to one ulp of complex-multiply rounding
    weight = make_weight(weighted_space)
    domain = weighted_space.frame.admissible()
    ops = [evolution_unitary(weight, s, rep8).operator for s in domain]
    for i, u in enumerate(ops):
        for v in ops[i + 1 :]:
            assert (u @ v - v @ u).norm() <= 1e-14


def test_conjugation_covariance_of_unitaries(weighted_space, rep8):
    weight = make_weight(weighted_space)
    w = SplitMix64(23).haar_unitary(8)
    report = commutant_witness(weight, rep8, w, tol=1e-12)
    assert report.same_rep_commutator <= 1e-14
    assert report.covariance <= 1e-12
    assert report.passed


def test_commutant_witness_frozen_value(m2):
    # designed witness: U = diag(1, -1) at the only grid pair, conjugated by
    # the Hadamard matrix; the commutator of diag(1,-1) with its Hadamard
    # conjugate has operator norm exactly 2
    from evogrid import GridEvolutionSpace, PureRepresentation, RepresentationSpace, TimeFrame

    frame = TimeFrame(("1",), (1.0,))
    space = GridEvolutionSpace(
        frame, ((GridPointMap.identity(m2), named_contraction("trace_average", m2)),)
    )
    rep = PureRepresentation(RepresentationSpace(space))
    functions = {
        frozenset(): space.constant(frozenset(), 1.0),
        frozenset({"1"}): space.function({"1"}, [1.0, -1.0]),
    }
    weight = ActionWeight(space, functions)
    report = commutant_witness(weight, rep, HADAMARD, tol=1e-12)
    assert report.witness == pytest.approx(2.0, abs=1e-12)
    assert report.witness_pair == (("1",), ("1",))
    # independent dense oracle for the same commutator
    u = np.diag([1.0, -1.0]).astype(np.complex128)
    u_conj = HADAMARD.conj().T @ u @ HADAMARD
    oracle = np.linalg.norm(u @ u_conj - u_conj @ u, 2)
    assert report.witness == pytest.approx(oracle, abs=1e-12)


# -- probe-difference actions ----------------------------------------------------


def test_example_action_frozen_value(m2, flip):
    from evogrid import GridEvolutionSpace, TimeFrame

    frame = TimeFrame(("1",), (1.0,))
    ident = GridPointMap.identity(m2)
    space = GridEvolutionSpace(frame, ((ident, GridPointMap.from_automorphism(flip)),))
    probe = ElementaryTensor(
        m2, ((m2.element([np.diag([1.0, 0.0])]), NormalFunctional(m2, (np.diag([1.0, 0.0]),))),)
    )
    action = example_action(
        space,
        {"1"},
        probes={"1": probe},
        post_maps={"1": "abs2"},
        references={"1": ident},
    )
    # identity point contributes 0; the flip point probes to -1, squared to 1
    assert np.array_equal(action.values, np.array([0.0, 1.0]))


def test_example_action_requires_real_post_values(m2, flip):
    from evogrid import GridEvolutionSpace, TimeFrame

    frame = TimeFrame(("1",), (1.0,))
    ident = GridPointMap.identity(m2)
    space = GridEvolutionSpace(frame, ((ident, GridPointMap.from_automorphism(flip)),))
    probe = ElementaryTensor(
        m2, ((m2.element([np.diag([1.0, 0.0])]), NormalFunctional(m2, (np.diag([1.0, 0.0]),))),)
    )
    with pytest.raises(DataError):
        example_action(space, {"1"}, {"1": probe}, {"1": lambda z: 1.0j}, {"1": ident})


def test_example_action_missing_time_data(m2, flip):
    from evogrid import GridEvolutionSpace, TimeFrame

    frame = TimeFrame(("1",), (1.0,))
    ident = GridPointMap.identity(m2)
    space = GridEvolutionSpace(frame, ((ident, GridPointMap.from_automorphism(flip)),))
    with pytest.raises(StructureError):
        example_action(space, {"1"}, {}, {"1": "abs"}, {"1": ident})
