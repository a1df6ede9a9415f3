"""Arithmetic over the binary extension fields GF(2^m), 2 <= m <= 12.

Field elements are plain ints in [0, 2^m): bit i is the coefficient of
alpha^i in the polynomial basis {1, alpha, ..., alpha^(m-1)}.  Addition is
XOR; multiplication and inversion go through log/antilog tables built once
at construction, which keeps the Monte-Carlo inner loops cheap.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# Conventional primitive polynomials, bit i = coefficient of x^i
# (the x^m term is included).
DEFAULT_PRIMITIVE_POLY = {
    2: 0b111,                # x^2 + x + 1
    3: 0b1011,               # x^3 + x + 1
    4: 0b10011,              # x^4 + x + 1
    5: 0b100101,             # x^5 + x^2 + 1
    6: 0b1000011,            # x^6 + x + 1
    7: 0b10001001,           # x^7 + x^3 + 1
    8: 0b100011101,          # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,         # x^9 + x^4 + 1
    10: 0b10000001001,       # x^10 + x^3 + 1
    11: 0b100000000101,      # x^11 + x^2 + 1
    12: 0b1000001010011,     # x^12 + x^6 + x^4 + x + 1
}


class Field:
    """GF(2^m) with table-based multiplication.

    Parameters
    ----------
    m : int
        Extension degree, 2 <= m <= 12 (field size q = 2^m).
    primitive_poly : int, optional
        Degree-m polynomial over GF(2), bit-packed with bit i the
        coefficient of x^i.  Must be primitive; defaults to the
        conventional choice for m so that codeword enumeration is
        reproducible across runs.
    """

    def __init__(self, m: int, primitive_poly: int | None = None):
        if not 2 <= m <= 12:
            raise ValueError(f"extension degree must be in [2, 12], got {m}")
        if primitive_poly is None:
            primitive_poly = DEFAULT_PRIMITIVE_POLY[m]
        q = 1 << m
        if primitive_poly >> m != 1:
            raise ValueError(
                f"primitive polynomial 0b{primitive_poly:b} does not have degree {m}"
            )
        self.m = m
        self.q = q
        self.primitive_poly = primitive_poly

        # antilog[i] = alpha^i; doubled so mul never needs an explicit mod.
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= primitive_poly
        # alpha generates the full multiplicative group iff the polynomial
        # is irreducible and primitive.
        if x != 1 or len(set(exp[: q - 1])) != q - 1:
            raise ValueError(
                f"0b{primitive_poly:b} is not primitive over GF(2): "
                f"alpha does not have multiplicative order {q - 1}"
            )
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self._exp = exp
        self._log = log
        # numpy copies for vectorised codebook construction
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    def __repr__(self) -> str:
        return f"Field(m={self.m}, primitive_poly=0x{self.primitive_poly:x})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and other.m == self.m
            and other.primitive_poly == self.primitive_poly
        )

    def __hash__(self) -> int:
        return hash((self.m, self.primitive_poly))

    def _check(self, *elems: int) -> None:
        for a in elems:
            if not 0 <= a < self.q:
                raise ValueError(f"{a} is not an element of GF(2^{self.m})")

    def add(self, a: int, b: int) -> int:
        """Field addition (XOR); also subtraction in characteristic 2."""
        self._check(a, b)
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero is not invertible")
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a^e by square-and-multiply (e >= 0; 0^0 = 1)."""
        self._check(a)
        if e < 0:
            raise ValueError("negative exponent")
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def alpha_power(self, i: int) -> int:
        """alpha^i for the fixed primitive element alpha = x."""
        return self._exp[i % (self.q - 1)]

    def eval_poly(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate c[0] + c[1] x + ... + c[deg] x^deg by Horner's rule."""
        self._check(x)
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, x) ^ c
        return acc

    def mul_vec(self, a: np.ndarray, b: int) -> np.ndarray:
        """Elementwise a[i] * b for an int array a and scalar b (no checks)."""
        if b == 0:
            return np.zeros_like(a)
        out = self._exp_np[self._log_np[a] + self._log[b]]
        return np.where(a == 0, 0, out)
