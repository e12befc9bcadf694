import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evogrid import (
    Automorphism,
    DomainError,
    GridEvolutionSpace,
    GridPoint,
    GridPointMap,
    StructureError,
    TimeFrame,
    WStarAlgebra,
    contraction_norm_estimate,
    named_contraction,
    pullback,
)
from evogrid.rng import SplitMix64

from conftest import FLIP


def make_232_space():
    # grid sizes (2, 3, 2) across three times
    algebra = WStarAlgebra((2,))
    flip = Automorphism.conjugation(algebra, [FLIP])
    ident = GridPointMap.identity(algebra)
    frame = TimeFrame(("1", "2", "3"), (1.0, 1.0, 1.0))
    grids = (
        (ident, GridPointMap.from_automorphism(flip)),
        (ident, GridPointMap.from_automorphism(flip), named_contraction("trace_average", algebra)),
        (ident, named_contraction("trace_average", algebra)),
    )
    return GridEvolutionSpace(frame, grids)


# -- time frames ------------------------------------------------------------


def test_frame_weights_and_measure():
    frame = TimeFrame(("1", "2", "3"), (0.5, 2.0, 0.0))
    assert frame.mu(frozenset()) == 0.0
    assert frame.mu({"1", "2"}) == 2.5
    assert frame.mu({"3"}) == 0.0
    assert frame.weight("2") == 2.0
    assert frame.ordered({"3", "1"}) == ("1", "3")


def test_frame_rejects_duplicates_and_negative_weights():
    with pytest.raises(StructureError):
        TimeFrame(("1", "1"), (1.0, 1.0))
    with pytest.raises(StructureError):
        TimeFrame(("1",), (-1.0,))


def test_admissible_family_defaults_to_all_subsets():
    frame = TimeFrame(("1", "2"), (1.0, 1.0))
    fam = frame.admissible()
    assert len(fam) == 4
    assert fam[0] == frozenset()
    assert fam[-1] == frozenset({"1", "2"})
    assert frame.is_admissible({"2"})


def test_admissible_family_must_be_union_closed():
    with pytest.raises(StructureError):
        TimeFrame(("1", "2"), (1.0, 1.0), sigma0=(frozenset({"1"}), frozenset({"2"})))
    frame = TimeFrame(
        ("1", "2"),
        (1.0, 1.0),
        sigma0=(frozenset(), frozenset({"1"}), frozenset({"2"}), frozenset({"1", "2"})),
    )
    assert len(frame.admissible()) == 4


def test_admissible_rejects_unknown_labels():
    with pytest.raises(DomainError):
        TimeFrame(("1",), (1.0,), sigma0=(frozenset({"9"}),))


# -- grid maps ---------------------------------------------------------------


def test_map_backings_agree(m2, flip):
    from_auto = GridPointMap.from_automorphism(flip)
    from_dense = GridPointMap.from_matrix(m2, from_auto.matrix())
    a = m2.random_element(SplitMix64(4))
    assert (from_auto.apply(a) - from_dense.apply(a)).norm() < 1e-12


def test_map_difference_is_dense_backed(m2, flip):
    diff = GridPointMap.from_automorphism(flip) - GridPointMap.identity(m2)
    assert diff.dense is not None
    a = m2.element([np.diag([1.0, 0.0])])
    out = diff.apply(a)
    assert np.allclose(out.blocks[0], np.diag([-1.0, 1.0]))


def test_contraction_estimate_automorphism_is_exactly_one(flip):
    assert contraction_norm_estimate(GridPointMap.from_automorphism(flip)) == 1.0


def test_contraction_estimate_flags_expansion(m2):
    doubled = GridPointMap.from_matrix(m2, 2.0 * np.eye(m2.dimension))
    assert contraction_norm_estimate(doubled) >= 2.0 - 1e-12


def test_trace_average_is_contractive(m2):
    phi = named_contraction("trace_average", m2)
    assert contraction_norm_estimate(phi, samples=16) <= 1.0 + 1e-12


def test_unknown_named_contraction(m2):
    with pytest.raises(DomainError):
        named_contraction("nope", m2)


# -- product point sets -------------------------------------------------------


def test_mixed_radix_frozen_value():
    space = make_232_space()
    point = GridPoint(("1", "2", "3"), (1, 2, 0))
    # earliest time most significant: (1*3 + 2)*2 + 0 = 10
    assert space.linear_index(point) == 10
    assert space.point_from_index(space.full, 10) == point


def test_enumeration_matches_linear_index():
    space = make_232_space()
    for subset in space.frame.admissible():
        points = space.enumerate_points(subset)
        assert len(points) == space.npoints(subset)
        for i, p in enumerate(points):
            assert space.linear_index(p) == i
            assert space.point_from_index(subset, i) == p


def test_empty_subset_has_one_point():
    space = make_232_space()
    assert space.npoints(frozenset()) == 1
    pts = space.enumerate_points(frozenset())
    assert pts == [GridPoint((), ())]
    assert space.linear_index(pts[0]) == 0


def test_dimension_is_grid_product():
    space = make_232_space()
    assert space.dimension == 2 * 3 * 2
    assert space.full_shape() == (2, 3, 2)
    assert space.shape({"1", "3"}) == (2, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=11))
def test_index_roundtrip_property(index):
    space = make_232_space()
    point = space.point_from_index(space.full, index)
    assert space.linear_index(point) == index


def test_restriction_composes():
    space = make_232_space()
    for x in space.enumerate_points(space.full):
        mid = space.restrict_point(x, {"1", "2"})
        assert space.restrict_point(mid, {"2"}) == space.restrict_point(x, {"2"})


def test_restricted_index_array_matches_pointwise():
    space = make_232_space()
    for subset in space.frame.admissible():
        table = space.restricted_index_array(subset)
        for x in space.enumerate_points(space.full):
            r = space.restrict_point(x, subset)
            assert table[space.linear_index(x)] == space.linear_index(r)


def test_restrict_rejects_extra_labels():
    space = make_232_space()
    p = space.point_from_index(frozenset({"1"}), 0)
    with pytest.raises(DomainError):
        space.restrict_point(p, {"1", "2"})


# -- grid functions -----------------------------------------------------------


def test_pullback_frozen_values(small_space):
    f = small_space.function({"1"}, [7.0, 9.0])
    lifted = pullback(f)
    assert lifted.subset == small_space.full
    assert np.array_equal(lifted.values, np.array([7.0, 7.0, 9.0, 9.0]))


def test_pullback_of_full_function_is_identity(small_space):
    rng = SplitMix64(9)
    f = small_space.random_function(small_space.full, rng)
    assert pullback(f).same_values(f)


def test_pullback_agrees_with_pointwise_composition():
    space = make_232_space()
    rng = SplitMix64(10)
    for subset in space.frame.admissible():
        f = space.random_function(subset, rng)
        lifted = pullback(f)
        for x in space.enumerate_points(space.full):
            assert lifted.at(x) == f.at(space.restrict_point(x, subset))


def test_function_value_length_enforced(small_space):
    with pytest.raises(StructureError):
        small_space.function({"1"}, [1.0, 2.0, 3.0])


def test_function_peer_space_enforced(small_space):
    other = make_232_space()
    f = small_space.function({"1"}, [1.0, 2.0])
    g = other.function({"1"}, [1.0, 2.0])
    with pytest.raises(StructureError):
        f + g


def test_indicator_and_constant(small_space):
    ind = small_space.indicator(small_space.full, [0, 3])
    assert np.array_equal(ind.values, np.array([1.0, 0.0, 0.0, 1.0], dtype=np.complex128))
    one = small_space.constant(frozenset(), 1.0)
    assert one.values.shape == (1,)
    assert one.sup_norm() == 1.0


def test_unimodular_random_function(small_space):
    f = small_space.random_function(small_space.full, SplitMix64(2), unimodular=True)
    assert np.allclose(np.abs(f.values), 1.0, atol=1e-12)
