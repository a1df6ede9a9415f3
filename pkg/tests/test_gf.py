import numpy as np
import pytest

from rscm import Field
from rscm.gf import DEFAULT_PRIMITIVE_POLY


def test_default_polynomials_construct_for_all_supported_degrees():
    for m in range(2, 13):
        f = Field(m)
        assert f.q == 1 << m
        assert f.primitive_poly == DEFAULT_PRIMITIVE_POLY[m]


def test_degree_out_of_range_rejected():
    with pytest.raises(ValueError):
        Field(1)
    with pytest.raises(ValueError):
        Field(13)


def test_irreducible_but_nonprimitive_polynomial_rejected():
    # x^4 + x^3 + x^2 + x + 1 is irreducible but its root has order 5
    with pytest.raises(ValueError, match="not primitive"):
        Field(4, primitive_poly=0b11111)
    with pytest.raises(ValueError, match="degree"):
        Field(4, primitive_poly=0b1011)


def test_add_examples():
    f = Field(4)
    for x in range(16):
        assert f.add(x, x) == 0
        assert f.add(x, 0) == x
    assert f.add(0b0011, 0b0101) == 0b0110


def test_mul_examples():
    f = Field(4)
    alpha = 0b0010
    for a in range(16):
        assert f.mul(a, 1) == a
        assert f.mul(a, 0) == 0
    # alpha * alpha^3 = alpha^4 = alpha + 1 under x^4 + x + 1
    assert f.mul(alpha, f.pow(alpha, 3)) == 0b0011


def test_inverse():
    f = Field(4)
    for a in range(1, 16):
        assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_field_mismatch_rejected():
    f = Field(3)
    with pytest.raises(ValueError):
        f.add(1, 8)
    with pytest.raises(ValueError):
        f.mul(9, 1)


def test_multiplicative_order_exhaustive_small_fields():
    for m in range(2, 9):
        f = Field(m)
        for a in range(1, f.q):
            assert f.pow(a, f.q - 1) == 1


def test_distributivity_randomized():
    f = Field(6)
    rng = np.random.default_rng(0)
    triples = rng.integers(0, f.q, size=(10_000, 3))
    for a, b, c in triples:
        a, b, c = int(a), int(b), int(c)
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_eval_poly():
    f = Field(4)
    alpha = 0b0010
    assert f.eval_poly([7], alpha) == 7
    assert f.eval_poly([0, 0, 0], alpha) == 0
    assert f.eval_poly([1, 1], alpha) == 1 ^ alpha
    # Horner against direct power expansion
    coeffs = [3, 0, 5, 9]
    want = 0
    for i, c in enumerate(coeffs):
        want ^= f.mul(c, f.pow(alpha, i))
    assert f.eval_poly(coeffs, alpha) == want


def test_mul_vec_matches_scalar():
    f = Field(5)
    rng = np.random.default_rng(1)
    a = rng.integers(0, f.q, size=500)
    for b in (0, 1, 17, f.q - 1):
        out = f.mul_vec(a, b)
        assert all(int(o) == f.mul(int(x), b) for x, o in zip(a, out))
