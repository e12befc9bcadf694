import math

import numpy as np
import pytest

from evogrid.rng import MASK64, SplitMix64, derive_seed, fnv1a64

# published splitmix64 outputs for seed 0; any drift here breaks every
# seeded value in the package, so these are pinned first
SEED0_STREAM = (
    0xE220A8397B1DCDAF,
    0x6E789E6AA1B965F4,
    0x06C45D188009454F,
    0xF88BB8A8724C81EC,
    0x1B39896A51A8749B,
)


def test_seed0_known_answers():
    r = SplitMix64(0)
    assert [r.next_uint64() for _ in range(5)] == list(SEED0_STREAM)


def test_seed_1234567_known_answer():
    r = SplitMix64(1234567)
    assert r.next_uint64() == 0x599ED017FB08FC85
    assert r.next_uint64() == 0x2C73F08458540FA5


def test_uniform_matches_bit_contract():
    r1, r2 = SplitMix64(99), SplitMix64(99)
    raw = r2.next_uint64()
    assert r1.uniform() == (raw >> 11) * 2.0**-53
    assert 0.0 <= r1.uniform() < 1.0


def test_integer_is_modulo_reduction():
    r1, r2 = SplitMix64(5), SplitMix64(5)
    raw = r2.next_uint64()
    assert r1.integer(17) == raw % 17
    with pytest.raises(ValueError):
        r1.integer(0)


def test_normal_pair_box_muller_contract():
    r1, r2 = SplitMix64(12), SplitMix64(12)
    u1, u2 = r2.uniform(), r2.uniform()
    expect = (
        math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2),
        math.sqrt(-2.0 * math.log(1.0 - u1)) * math.sin(2.0 * math.pi * u2),
    )
    assert r1.normal_pair() == expect


def test_standard_normal_consumes_two_uniforms():
    r1, r2 = SplitMix64(3), SplitMix64(3)
    r1.standard_normal()
    r2.uniform()
    r2.uniform()
    assert r1.next_uint64() == r2.next_uint64()


def test_complex_normal_scaling():
    r1, r2 = SplitMix64(8), SplitMix64(8)
    x, y = r2.normal_pair()
    assert r1.complex_normal() == complex(x, y) / math.sqrt(2.0)


def test_complex_matrix_row_major_order():
    r1, r2 = SplitMix64(21), SplitMix64(21)
    m = r1.complex_matrix(2, 3)
    flat = [r2.complex_normal() for _ in range(6)]
    assert m.shape == (2, 3)
    assert list(m.ravel()) == flat


def test_haar_unitary_is_unitary_and_deterministic():
    u1 = SplitMix64(77).haar_unitary(5)
    u2 = SplitMix64(77).haar_unitary(5)
    assert np.array_equal(u1, u2)
    assert np.allclose(u1 @ u1.conj().T, np.eye(5), atol=1e-12)
    # phase normalization leaves the implied R diagonal positive
    g = SplitMix64(77).complex_matrix(5, 5)
    r = u1.conj().T @ g
    assert np.all(np.diagonal(r).real > 0)
    assert np.allclose(np.diagonal(r).imag, 0.0, atol=1e-12)


def test_sample_indices_distinct_and_in_range():
    r = SplitMix64(31)
    idx = r.sample_indices(10, 10)
    assert sorted(idx) == list(range(10))
    with pytest.raises(ValueError):
        r.sample_indices(3, 4)


def test_fnv1a64_known_answers():
    # reference FNV-1a 64-bit values
    assert fnv1a64("") == 0xCBF29CE484222325
    assert fnv1a64("a") == 0xAF63DC4C8601EC8C
    assert fnv1a64("foobar") == 0x85944171F73967E8


def test_derive_seed_stable_and_label_sensitive():
    s1 = derive_seed(42, "alpha")
    s2 = derive_seed(42, "alpha")
    s3 = derive_seed(42, "beta")
    assert s1 == s2
    assert s1 != s3
    assert 0 <= s1 <= MASK64


def test_spawn_does_not_consume_parent_stream():
    r1, r2 = SplitMix64(6), SplitMix64(6)
    child = r1.spawn("sub")
    assert isinstance(child, SplitMix64)
    assert r1.next_uint64() == r2.next_uint64()
