"""Arithmetic over GF(2)[x] and GF(2^m).

Polynomials over GF(2) are stored as Python ints: bit ``i`` holds the
coefficient of ``x**i``.  Field elements of GF(2^m) are ints below ``2**m``
in the polynomial basis defined by a primitive polynomial.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# Primitive polynomials, lowest weight choice per degree.
PRIMITIVE_POLYNOMIALS = {
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
    9: 0b1000010001,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000001010011,
    13: 0b10000000011011,
    14: 0b100010001000011,
    15: 0b1000000000000011,
    16: 0b10001000000001011,
}


def poly_degree(p: int) -> int:
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    q = 0
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_to_string(p: int) -> str:
    """Render ``p`` as e.g. ``x^8 + x^7 + x^6 + x^4 + 1``."""
    if p == 0:
        return "0"
    terms = []
    for i in range(poly_degree(p), -1, -1):
        if (p >> i) & 1:
            terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
    return " + ".join(terms)


class GF2m:
    """The field GF(2^m) with exp/log tables over a primitive element."""

    def __init__(self, m: int, primitive: int | None = None):
        if m not in PRIMITIVE_POLYNOMIALS and primitive is None:
            raise ValueError(f"no built-in primitive polynomial for m={m}")
        self.m = m
        self.primitive = PRIMITIVE_POLYNOMIALS[m] if primitive is None else primitive
        self.order = (1 << m) - 1
        exp = np.zeros(2 * self.order, dtype=np.int64)
        log = np.full(1 << m, -1, dtype=np.int64)
        x = 1
        for i in range(self.order):
            if log[x] != -1:
                raise ValueError(f"polynomial {self.primitive:#b} is not primitive")
            exp[i] = x
            log[x] = i
            x <<= 1
            if x >> m:
                x ^= self.primitive
        exp[self.order:] = exp[: self.order]
        self._exp = exp
        self._log = log

    def alpha_power(self, i: int) -> int:
        return int(self._exp[i % self.order])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def cyclotomic_coset(self, i: int) -> list[int]:
        """Exponents conjugate to ``i`` under the Frobenius map x -> x^2."""
        coset = []
        j = i % self.order
        while j not in coset:
            coset.append(j)
            j = (2 * j) % self.order
        return coset

    def minimal_polynomial(self, i: int) -> int:
        """Minimal polynomial of alpha**i over GF(2), as a GF(2) polynomial int."""
        # coefficients stored low degree first, each a field element
        coeffs = [1]
        for c in self.cyclotomic_coset(i):
            root = self.alpha_power(c)
            nxt = [0] * (len(coeffs) + 1)
            for k, co in enumerate(coeffs):
                nxt[k + 1] ^= co
                nxt[k] ^= self.mul(co, root)
            coeffs = nxt
        if any(co not in (0, 1) for co in coeffs):
            raise ArithmeticError("minimal polynomial has coefficients outside GF(2)")
        return sum(co << k for k, co in enumerate(coeffs))


@lru_cache(maxsize=None)
def field(m: int) -> GF2m:
    return GF2m(m)


def gf2_rank(matrix: np.ndarray) -> int:
    """Rank of a 0/1 matrix over GF(2)."""
    g = np.array(matrix, dtype=np.uint8) % 2
    rows, cols = g.shape
    rank = 0
    for c in range(cols):
        pivots = np.nonzero(g[rank:, c])[0]
        if pivots.size == 0:
            continue
        p = rank + pivots[0]
        g[[rank, p]] = g[[p, rank]]
        others = np.nonzero(g[:, c])[0]
        others = others[others != rank]
        g[others] ^= g[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def gf2_rref(matrix: np.ndarray) -> np.ndarray:
    """Reduced row echelon form over GF(2); raises if rows are dependent."""
    g = np.array(matrix, dtype=np.uint8) % 2
    rows, cols = g.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivots = np.nonzero(g[r:, c])[0]
        if pivots.size == 0:
            continue
        p = r + pivots[0]
        g[[r, p]] = g[[p, r]]
        others = np.nonzero(g[:, c])[0]
        others = others[others != r]
        g[others] ^= g[r]
        r += 1
    if r < rows:
        raise ValueError(f"matrix has GF(2) rank {r} < {rows} rows")
    return g
