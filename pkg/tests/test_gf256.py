"""Tests for GF(2^8) arithmetic."""

from itertools import combinations

import numpy as np
import pytest

from src.sis_rdhei.errors import FieldError, ParameterError
from src.sis_rdhei.gf256 import (
    INV_TABLE,
    MUL_TABLE,
    eval_poly,
    eval_poly_batch,
    gf_add,
    gf_inv,
    gf_mul,
    gf_mul_array,
    gf_pow,
    recover_coeffs,
    recover_coeffs_batch,
)


def _carryless_mod(a, b):
    """Schoolbook product: carry-less multiply, then long division by 0x11B."""
    product = 0
    for bit in range(8):
        if (b >> bit) & 1:
            product ^= a << bit
    for bit in range(14, 7, -1):
        if (product >> bit) & 1:
            product ^= 0x11B << (bit - 8)
    return product


def test_add_is_xor():
    """Test addition and subtraction coincide with XOR."""
    assert gf_add(0x57, 0x83) == 0xD4
    assert gf_add(0xAB, 0xAB) == 0


def test_mul_known_products():
    """Test textbook products and the worked-example values."""
    assert gf_mul(0x57, 0x83) == 0xC1
    assert gf_mul(0x57, 0x13) == 0xFE
    assert gf_mul(181, 21) == 242
    assert gf_mul(21, 21) == 10
    assert gf_mul(154, 10) == 147
    assert gf_mul(0, 77) == 0
    assert gf_mul(1, 77) == 77


def test_mul_matches_oracle_exhaustively():
    """Test every one of the 65,536 products against long division."""
    oracle = np.array(
        [[_carryless_mod(a, b) for b in range(256)] for a in range(256)], dtype=np.uint8
    )
    assert np.array_equal(MUL_TABLE, oracle)
    for a in range(0, 256, 17):
        for b in range(256):
            assert gf_mul(a, b) == oracle[a, b]


def test_mul_table_is_read_only():
    """Test the shared tables cannot be modified."""
    with pytest.raises(ValueError):
        MUL_TABLE[1, 1] = 0
    with pytest.raises(ValueError):
        INV_TABLE[1] = 0


def test_field_axioms():
    """Test commutativity, identities, associativity and distributivity."""
    assert np.array_equal(MUL_TABLE, MUL_TABLE.T)
    values = np.arange(256, dtype=np.uint8)
    assert np.array_equal(MUL_TABLE[1], values)
    assert not MUL_TABLE[0].any()
    rng = np.random.default_rng(5)
    a, b, c = rng.integers(0, 256, size=(3, 20000), dtype=np.uint8)
    assert np.array_equal(gf_mul_array(gf_mul_array(a, b), c), gf_mul_array(a, gf_mul_array(b, c)))
    assert np.array_equal(gf_mul_array(a, b ^ c), gf_mul_array(a, b) ^ gf_mul_array(a, c))


def test_inverse_of_every_nonzero_element():
    """Test a · a⁻¹ = 1 for all 255 nonzero elements."""
    for a in range(1, 256):
        inv = gf_inv(a)
        assert gf_mul(a, inv) == 1
        assert INV_TABLE[a] == inv


def test_inverse_of_zero_raises():
    """Test zero has no inverse."""
    with pytest.raises(FieldError):
        gf_inv(0)
    with pytest.raises(ZeroDivisionError):
        gf_inv(0)


def test_pow():
    """Test powers, including the multiplicative group order."""
    assert gf_pow(21, 2) == 10
    assert gf_pow(7, 0) == 1
    assert all(gf_pow(a, 255) == 1 for a in range(1, 256))
    with pytest.raises(ParameterError):
        gf_pow(3, -1)


def test_eval_poly_worked_example():
    """Test the first pixel 125 with coefficients (181, 154) at x=21 shares to 28."""
    assert eval_poly([125, 181, 154], 21) == 28
    assert eval_poly([120, 181, 154], 21) == 25
    assert eval_poly([9], 200) == 9


def test_recover_coeffs_worked_example():
    """Test three first-pixel shares give back the secret and both coefficients."""
    points = [(21, 28), (208, 112), (221, 150)]
    assert recover_coeffs(points, 3) == [125, 181, 154]


def test_recover_coeffs_inverts_evaluation(rng):
    """Test recovery from random points for several thresholds."""
    for r in range(2, 8):
        for _ in range(200):
            coeffs = [int(v) for v in rng.integers(0, 256, size=r)]
            xs = [int(v) for v in rng.choice(np.arange(1, 256), size=r, replace=False)]
            points = [(x, eval_poly(coeffs, x)) for x in xs]
            assert recover_coeffs(points, r) == coeffs


def test_recover_coeffs_rejects_bad_points():
    """Test wrong point counts, zero and duplicate abscissae raise."""
    with pytest.raises(ParameterError):
        recover_coeffs([(1, 2), (3, 4)], 3)
    with pytest.raises(ParameterError):
        recover_coeffs([(0, 2), (3, 4)], 2)
    with pytest.raises(ParameterError):
        recover_coeffs([(5, 2), (5, 4)], 2)


def test_batch_matches_scalar(rng):
    """Test the vectorised evaluation and recovery agree with the scalar ones."""
    r, count = 4, 300
    coeffs = rng.integers(0, 256, size=(count, r), dtype=np.uint8)
    xs = np.stack(
        [rng.choice(np.arange(1, 256), size=6, replace=False) for _ in range(count)]
    ).astype(np.uint8)
    ys = eval_poly_batch(coeffs, xs)
    for row in range(0, count, 37):
        for col in range(6):
            assert ys[row, col] == eval_poly(coeffs[row].tolist(), int(xs[row, col]))
    assert np.array_equal(recover_coeffs_batch(xs[:, :r], ys[:, :r]), coeffs)


def test_batch_recovery_rejects_duplicates():
    """Test a repeated abscissa in any row is refused."""
    xs = np.array([[1, 2], [3, 3]], dtype=np.uint8)
    with pytest.raises(ParameterError):
        recover_coeffs_batch(xs, np.zeros_like(xs))


@pytest.mark.parametrize("r,n", [(2, 3), (3, 5), (4, 6), (5, 7)])
def test_every_subset_recovers_the_same_secret(rng, r, n):
    """Test all r-subsets of n shares agree, over 1000 random draws."""
    draws = 1000
    coeffs = rng.integers(0, 256, size=(draws, r), dtype=np.uint8)
    xs = np.stack(
        [rng.choice(np.arange(1, 256), size=n, replace=False) for _ in range(draws)]
    ).astype(np.uint8)
    ys = eval_poly_batch(coeffs, xs)
    for subset in combinations(range(n), r):
        cols = list(subset)
        assert np.array_equal(recover_coeffs_batch(xs[:, cols], ys[:, cols]), coeffs)
