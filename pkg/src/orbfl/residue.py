"""Finite residue fields F_p and F_{p^2} with explicit conjugation.

Elements are encoded as plain ints in ``range(p**deg)``: the element
``c0 + c1*theta`` is stored as ``c0 + c1*p`` where ``theta`` is the class of
``x`` modulo the defining polynomial.  Degree-1 fields store the value itself.
Only odd characteristic is supported.
"""

from __future__ import annotations

import functools

from .errors import DegenerateInputError, UnsupportedError


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, int(n ** 0.5) + 1):
        if n % d == 0:
            return False
    return True


@functools.cache
def residue_field(p, deg=1, modulus=None):
    """Shared-instance constructor; modulus is a tuple (c0, c1) with
    defining polynomial x^2 + c1*x + c0 when deg == 2."""
    return ResidueField(p, deg, modulus)


class ResidueField:
    """F_p (deg 1) or F_{p^2} (deg 2) with arithmetic on int-encoded elements."""

    def __init__(self, p, deg=1, modulus=None):
        if not _is_prime(p):
            raise UnsupportedError("characteristic must be prime, got %r" % (p,))
        if p == 2:
            raise UnsupportedError("even residue characteristic is not supported")
        if deg not in (1, 2):
            raise UnsupportedError("residue degree must be 1 or 2")
        self.p = p
        self.deg = deg
        self.q = p ** deg
        if deg == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = self._find_irreducible()
            c0, c1 = modulus
            c0 %= p
            c1 %= p
            if self._has_root(c0, c1):
                raise DegenerateInputError("modulus x^2 + %d x + %d is reducible" % (c1, c0))
            self.modulus = (c0, c1)

    def _has_root(self, c0, c1):
        return any((x * x + c1 * x + c0) % self.p == 0 for x in range(self.p))

    def _find_irreducible(self):
        for c0 in range(1, self.p):
            for c1 in range(self.p):
                if not self._has_root(c0, c1):
                    return (c0, c1)
        raise AssertionError("no irreducible quadratic found")  # pragma: no cover

    def __repr__(self):
        if self.deg == 1:
            return "ResidueField(%d)" % self.p
        return "ResidueField(%d, 2, modulus=%r)" % (self.p, self.modulus)

    # -- encoding helpers ---------------------------------------------------

    def coords(self, a):
        """Digit vector (c0,) or (c0, c1) of an encoded element."""
        if self.deg == 1:
            return (a,)
        return (a % self.p, a // self.p)

    def from_coords(self, digits):
        digits = [d % self.p for d in digits]
        if self.deg == 1:
            if len(digits) != 1:
                raise DegenerateInputError("expected 1 digit")
            return digits[0]
        if len(digits) == 1:
            digits = digits + [0]
        if len(digits) != 2:
            raise DegenerateInputError("expected 2 digits")
        return digits[0] + digits[1] * self.p

    def embed(self, c):
        """Embed an integer (element of the prime field) into this field."""
        return c % self.p

    def elements(self):
        return range(self.q)

    def units(self):
        return (a for a in range(1, self.q))

    # -- arithmetic ---------------------------------------------------------

    def add(self, a, b):
        p = self.p
        if self.deg == 1:
            return (a + b) % p
        return (a + b) % p + (a // p + b // p) % p * p

    def sub(self, a, b):
        p = self.p
        if self.deg == 1:
            return (a - b) % p
        return (a - b) % p + (a // p - b // p) % p * p

    def neg(self, a):
        p = self.p
        if self.deg == 1:
            return (-a) % p
        return (-a) % p + (-(a // p)) % p * p

    def mul(self, a, b):
        p = self.p
        if self.deg == 1:
            return (a * b) % p
        a0, a1 = a % p, a // p
        b0, b1 = b % p, b // p
        # (a0 + a1 x)(b0 + b1 x) with x^2 = -c1 x - c0
        c0, c1 = self.modulus
        hi = a1 * b1
        r0 = (a0 * b0 - hi * c0) % p
        r1 = (a0 * b1 + a1 * b0 - hi * c1) % p
        return r0 + r1 * p

    def smul(self, c, a):
        """Multiply by a prime-field scalar."""
        p = self.p
        c %= p
        if self.deg == 1:
            return (c * a) % p
        return (c * (a % p)) % p + (c * (a // p)) % p * p

    def conj(self, a):
        """The nontrivial field automorphism (identity in degree 1)."""
        if self.deg == 1:
            return a
        p = self.p
        a0, a1 = a % p, a // p
        # conj(x) = -c1 - x
        c1 = self.modulus[1]
        return (a0 - a1 * c1) % p + (-a1) % p * p

    def norm(self, a):
        """Norm down to the prime field, returned as a degree-1 int."""
        if self.deg == 1:
            return a % self.p
        return self.mul(a, self.conj(a)) % self.p

    def trace(self, a):
        if self.deg == 1:
            return a % self.p
        return self.add(a, self.conj(a)) % self.p

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError("residue inverse of zero")
        if self.deg == 1:
            return pow(a, self.p - 2, self.p)
        n = self.norm(a)
        ninv = pow(n, self.p - 2, self.p)
        return self.smul(ninv, self.conj(a))

    def pow(self, a, e):
        r = 1
        b = a % self.q
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def is_square(self, a):
        if a % self.q == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a):
        """A square root of ``a``, by scan (fields here are tiny)."""
        a %= self.q
        for x in range(self.q):
            if self.mul(x, x) == a:
                return x
        raise DegenerateInputError("%r is not a square" % (a,))
