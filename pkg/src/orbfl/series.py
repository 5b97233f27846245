"""Truncated Laurent series over a finite residue field.

A :class:`Series` stores a valuation ``val``, a coefficient tuple starting at
``t^val`` (leading coefficient nonzero), and an absolute precision ``prec``:
coefficients of ``t^k`` are known exactly for ``k < prec``.  A series whose
known coefficients all vanish is represented with ``val = None`` and an empty
coefficient tuple ("zero up to the stated precision").  Arithmetic tracks the
largest precision that the operands justify and raises
:class:`InsufficientPrecisionError` when a required fact (for example, that a
divisor is nonzero) cannot be certified.
"""

from __future__ import annotations

from .errors import DegenerateInputError, InsufficientPrecisionError

DEFAULT_PREC = 32

INF = float("inf")


class Series:
    __slots__ = ("field", "val", "coeffs", "prec")

    def __init__(self, field, val, coeffs, prec):
        """Normalizing constructor: strips zero leading/overflowing coefficients."""
        coeffs = list(coeffs)
        if val is not None:
            # trim to precision
            if val >= prec:
                val, coeffs = None, []
            else:
                del coeffs[prec - val:]
                i = 0
                while i < len(coeffs) and coeffs[i] % field.q == 0:
                    i += 1
                if i == len(coeffs):
                    val, coeffs = None, []
                else:
                    val += i
                    coeffs = coeffs[i:]
                    while coeffs and coeffs[-1] % field.q == 0:
                        coeffs.pop()
        else:
            coeffs = []
        self.field = field
        self.val = val
        self.coeffs = tuple(c % field.q for c in coeffs)
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field, prec=DEFAULT_PREC):
        return cls(field, None, (), prec)

    @classmethod
    def one(cls, field, prec=DEFAULT_PREC):
        return cls(field, 0, (1,), prec)

    @classmethod
    def t_power(cls, field, k, prec=DEFAULT_PREC):
        return cls(field, k, (1,), prec)

    @classmethod
    def from_residue(cls, field, a, prec=DEFAULT_PREC):
        return cls(field, 0, (a,), prec)

    @classmethod
    def from_int(cls, field, n, prec=DEFAULT_PREC):
        return cls(field, 0, (field.embed(n),), prec)

    @classmethod
    def from_coeff_map(cls, field, pairs, prec=DEFAULT_PREC):
        """Build from {exponent: residue element} data."""
        pairs = {k: v for k, v in dict(pairs).items() if v % field.q != 0}
        if not pairs:
            return cls.zero(field, prec)
        lo = min(pairs)
        hi = max(pairs)
        coeffs = [pairs.get(k, 0) for k in range(lo, hi + 1)]
        return cls(field, lo, coeffs, prec)

    # -- inspection -----------------------------------------------------

    @property
    def is_zero(self):
        """True when no nonzero coefficient is known (zero up to precision)."""
        return self.val is None

    def valuation(self):
        """t-adic valuation; +inf for a series with no known nonzero term."""
        return INF if self.val is None else self.val

    def certified_valuation(self):
        """Valuation, raising when the series may be an undetected nonzero."""
        if self.val is None:
            raise InsufficientPrecisionError(
                "valuation not certified below t^%d" % self.prec)
        return self.val

    def coeff(self, k):
        """Coefficient of t^k (raises past the precision)."""
        if k >= self.prec:
            raise InsufficientPrecisionError("coefficient of t^%d beyond prec %d" % (k, self.prec))
        if self.val is None or k < self.val or k >= self.val + len(self.coeffs):
            return 0
        return self.coeffs[k - self.val]

    def leading(self):
        if self.val is None:
            raise InsufficientPrecisionError("leading coefficient of (certified-)zero series")
        return self.coeffs[0]

    def __repr__(self):
        if self.val is None:
            return "O(t^%d)" % self.prec
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                k = self.val + i
                base = "%d" % c if self.field.deg == 1 else "[%d]" % c
                if k == 0:
                    terms.append(base)
                elif k == 1:
                    terms.append("%s*t" % base)
                else:
                    terms.append("%s*t^%d" % (base, k))
        return " + ".join(terms) + " + O(t^%d)" % self.prec

    def __eq__(self, other):
        """Exact equality of the stored data (same known content and precision)."""
        if not isinstance(other, Series):
            return NotImplemented
        return (self.field is other.field and self.val == other.val
                and self.coeffs == other.coeffs and self.prec == other.prec)

    def __hash__(self):
        return hash((id(self.field), self.val, self.coeffs, self.prec))

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        f = self.field
        prec = min(self.prec, other.prec)
        if self.val is None:
            return Series(f, other.val, other.coeffs, prec)
        if other.val is None:
            return Series(f, self.val, self.coeffs, prec)
        lo = min(self.val, other.val)
        hi = min(prec, max(self.val + len(self.coeffs), other.val + len(other.coeffs)))
        out = []
        add = f.add
        for k in range(lo, hi):
            out.append(add(self.coeff(k) if k < self.prec else 0,
                           other.coeff(k) if k < other.prec else 0))
        return Series(f, lo, out, prec)

    def __neg__(self):
        neg = self.field.neg
        return Series(self.field, self.val, [neg(c) for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        if self.val is None or other.val is None:
            # zero (up to prec) times x has valuation >= zero.prec + val(x)
            za, zb = (self, other) if self.val is None else (other, self)
            shift = zb.prec if zb.val is None else zb.val
            return Series(f, None, (), za.prec + shift)
        prec = min(self.val + other.prec, other.val + self.prec)
        n1, n2 = len(self.coeffs), len(other.coeffs)
        out_len = min(n1 + n2 - 1, prec - self.val - other.val)
        out = [0] * out_len
        mul, add = f.mul, f.add
        for i in range(n1):
            ci = self.coeffs[i]
            if ci == 0:
                continue
            jmax = min(n2, out_len - i)
            for j in range(jmax):
                cj = other.coeffs[j]
                if cj:
                    out[i + j] = add(out[i + j], mul(ci, cj))
        return Series(f, self.val + other.val, out, prec)

    def scale(self, a):
        """Multiply by a residue-field constant."""
        mul = self.field.mul
        return Series(self.field, self.val, [mul(a, c) for c in self.coeffs], self.prec)

    def shift(self, k):
        """Multiply by t^k."""
        if self.val is None:
            return Series(self.field, None, (), self.prec + k)
        return Series(self.field, self.val + k, self.coeffs, self.prec + k)

    def inv(self):
        f = self.field
        if self.val is None:
            raise InsufficientPrecisionError("inverting a series not certified nonzero")
        v = self.val
        rel = self.prec - v  # relative precision, preserved by inversion
        a = self.coeffs
        lead_inv = f.inv(a[0])
        out = [lead_inv] + [0] * (rel - 1)
        mul, sub = f.mul, f.sub
        for k in range(1, rel):
            s = 0
            for j in range(1, min(k, len(a) - 1) + 1):
                s = sub(s, mul(a[j], out[k - j]))
            out[k] = mul(lead_inv, s)
        return Series(f, -v, out, -v + rel)

    def __truediv__(self, other):
        return self * other.inv()

    def truncate(self, prec):
        return Series(self.field, self.val, self.coeffs, min(self.prec, prec))

    def map_coeffs(self, fn, new_field=None):
        """Apply ``fn`` to every coefficient (e.g. residue conjugation or embedding)."""
        f = new_field if new_field is not None else self.field
        if self.val is None:
            return Series(f, None, (), self.prec)
        return Series(f, self.val, [fn(c) for c in self.coeffs], self.prec)

    # -- predicates ------------------------------------------------------

    def is_unit(self):
        return self.val == 0

    def agrees_with(self, other, prec=None):
        """True when self - other is zero up to the shared (or given) precision."""
        d = self - other
        if prec is not None:
            if d.prec < prec:
                raise InsufficientPrecisionError(
                    "comparison requested at prec %d but only %d available" % (prec, d.prec))
            d = d.truncate(prec)
        return d.is_zero

    # -- serialization ----------------------------------------------------

    def to_json(self):
        f = self.field
        return {
            "val": self.val,
            "coeffs": [list(f.coords(c)) for c in self.coeffs],
            "prec": self.prec,
        }

    @classmethod
    def from_json(cls, field, data):
        coeffs = [field.from_coords(d) for d in data["coeffs"]]
        val = data["val"]
        if val is None and coeffs:
            raise DegenerateInputError("null valuation with nonempty coefficients")
        return cls(field, val, coeffs, data["prec"])
