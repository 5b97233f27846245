"""Quadratic etale algebras over the Laurent series field F = k((t)).

Three canonical kinds are provided:

* ``split``      -- F x F, elements stored as coordinate pairs, generator (1, 0);
* ``unramified`` -- F[x]/(x^2 - x - c) with 1 + 4c a non-square unit;
* ``ramified``   -- F[x]/(x^2 - d) with v(d) = 1 (both classes d = t, d = eps*t);

plus a ``generic`` kind for algebras presented by an arbitrary separable monic
quadratic (elements in coordinates over the basis {1, gen}).  The nontrivial
automorphism, trace, norm, normalized absolute values, the order filtration
R_n = O_F + t^n O_L, unit indices and sublattice counts live here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegenerateInputError, UnsupportedError
from .lattice import Lattice, index_exp
from .series import DEFAULT_PREC, INF, Series


class QuadAlg:
    """A quadratic etale algebra L/F with a distinguished generator."""

    def __init__(self, kind, rf, minpoly, prec=DEFAULT_PREC, label=""):
        self.kind = kind
        self.rf = rf
        self.prec = prec
        self.minpoly = minpoly  # (c0, c1): gen^2 + c1*gen + c0 = 0
        self.label = label
        c0, c1 = minpoly
        self.gen_trace = -c1
        self.gen_norm = c0

    # -- canonical constructors ------------------------------------------

    @classmethod
    def split(cls, rf, prec=DEFAULT_PREC):
        z = Series.zero(rf, prec)
        mone = -Series.one(rf, prec)
        return cls("split", rf, (z, mone), prec, label="split")

    @classmethod
    def unramified(cls, rf, prec=DEFAULT_PREC, c=None):
        if c is None:
            c = next(a for a in rf.elements()
                     if not rf.is_square(rf.add(rf.embed(1), rf.smul(4, a))))
        disc = rf.add(rf.embed(1), rf.smul(4, c))
        if rf.is_square(disc):
            raise DegenerateInputError("1 + 4c must be a non-square unit")
        c0 = -Series.from_residue(rf, c, prec)
        c1 = -Series.one(rf, prec)
        a = cls("unramified", rf, (c0, c1), prec, label="unramified(c=%d)" % c)
        a.c = c
        return a

    @classmethod
    def ramified(cls, rf, prec=DEFAULT_PREC, eps=1):
        eps = rf.embed(eps)
        if eps == 0:
            raise DegenerateInputError("eps must be a unit")
        d = Series.from_coeff_map(rf, {1: eps}, prec)
        a = cls("ramified", rf, (-d, Series.zero(rf, prec)), prec,
                label="ramified(eps=%d)" % eps)
        a.d = d
        a.eps = eps
        return a

    @classmethod
    def generic(cls, rf, c0, c1, prec=DEFAULT_PREC):
        """Algebra F[x]/(x^2 + c1 x + c0), kind detected from the discriminant."""
        disc = c1 * c1 - Series.from_int(rf, 4, prec) * c0
        v = disc.certified_valuation()
        if v % 2 == 1:
            kind = "ramified*"
        elif rf.is_square(disc.leading()):
            kind = "split*"
        else:
            kind = "unramified*"
        return cls(kind, rf, (c0, c1), prec, label="generic[%s]" % kind)

    def __repr__(self):
        return "QuadAlg(%s over GF(%d))" % (self.label or self.kind, self.rf.q)

    @property
    def is_field(self):
        return self.kind in ("unramified", "ramified")

    @property
    def pair_repr(self):
        return self.kind == "split"

    # -- element constructors ----------------------------------------------

    def elem_from_coords(self, a, b):
        """a*1 + b*gen."""
        if self.pair_repr:
            return QuadElem(self, (a + b, a))
        return QuadElem(self, (a, b))

    def elem_from_pair(self, u, v):
        if not self.pair_repr:
            raise DegenerateInputError("pair coordinates only for the split algebra")
        return QuadElem(self, (u, v))

    def zero(self):
        z = Series.zero(self.rf, self.prec)
        return QuadElem(self, (z, z))

    def one(self):
        o = Series.one(self.rf, self.prec)
        if self.pair_repr:
            return QuadElem(self, (o, o))
        return QuadElem(self, (o, Series.zero(self.rf, self.prec)))

    def gen(self):
        o = Series.one(self.rf, self.prec)
        z = Series.zero(self.rf, self.prec)
        return self.elem_from_coords(z, o)

    def embed_base(self, s):
        if self.pair_repr:
            return QuadElem(self, (s, s))
        return QuadElem(self, (s, Series.zero(self.rf, self.prec)))

    def uniformizer(self):
        if self.kind == "ramified":
            return self.gen()
        if self.kind == "unramified":
            return self.embed_base(Series.t_power(self.rf, 1, self.prec))
        raise UnsupportedError("no single uniformizer for kind %r" % self.kind)

    # -- residue data ------------------------------------------------------

    def ramification_index(self):
        if self.kind == "ramified":
            return 2
        if self.kind in ("unramified", "split"):
            return 1
        raise UnsupportedError("ramification index for kind %r" % self.kind)

    def residue_degree(self):
        if self.kind == "unramified":
            return 2
        if self.kind in ("ramified", "split"):
            return 1
        raise UnsupportedError("residue degree for kind %r" % self.kind)

    # -- orders R_n = O_F + t^n O_L ------------------------------------------

    def order_lattice(self, n, prec=None):
        """R_n as a lattice in coordinate space (pair coords if split)."""
        if n < 0:
            raise DegenerateInputError("order index must be >= 0")
        p = prec if prec is not None else self.prec
        rf = self.rf
        one = Series.one(rf, p)
        tn = Series.t_power(rf, n, p)
        z = Series.zero(rf, p)
        if self.pair_repr:
            # O_F*(1,1) + t^n (O x O): columns (1,1), (0,t^n)
            return Lattice([(one, one), (z, tn)], 2)
        return Lattice([(one, z), (z, tn)], 2)

    def maximal_order_lattice(self, prec=None):
        return self.order_lattice(0, prec)

    def unit_index(self, n):
        """[O_L^x : R_n^x] in closed form."""
        q = self.rf.q
        if n == 0:
            return 1
        if self.kind == "unramified":
            return q ** n + q ** (n - 1)
        if self.kind == "ramified":
            return q ** n
        if self.kind == "split":
            return q ** (n - 1) * (q - 1)
        raise UnsupportedError("unit index for kind %r" % self.kind)

    def count_sublattices_by_type(self, n):
        """Multiplicities {n': count} of index-q sublattices x*R_{n'} of R_n,
        grouped by order type."""
        q = self.rf.q
        if n >= 1:
            return {n + 1: q, n - 1: 1}
        if self.kind == "unramified":
            return {1: q + 1}
        if self.kind == "ramified":
            return {1: q, 0: 1}
        if self.kind == "split":
            return {1: q - 1, 0: 2}
        raise UnsupportedError("sublattice counts for kind %r" % self.kind)

    # -- element utilities ---------------------------------------------------

    def mult_matrix(self, x):
        """2x2 matrix of multiplication by x on coordinate space."""
        a, b = x.data
        if self.pair_repr:
            z = Series.zero(self.rf, min(a.prec, b.prec))
            return ((a, z), (z, b))
        c0, c1 = self.minpoly
        return ((a, -(c0 * b)), (b, a - c1 * b))

    def elem_from_vector(self, vec):
        return QuadElem(self, (vec[0], vec[1]))

    def units_mod(self, k):
        """Representatives of O_L^x / O_F^x acting nontrivially on lattices,
        complete modulo 1 + t^k O_L: (1 + b*gen) and (a + gen) with v(a) >= 1."""
        rf = self.rf
        reps = []
        for b in _poly_series(rf, 0, k, self.prec):
            u = self.elem_from_coords(Series.one(rf, self.prec), b)
            if u.is_unit():
                reps.append(u)
        for a in _poly_series(rf, 1, k, self.prec):
            u = self.elem_from_coords(a, Series.one(rf, self.prec))
            if u.is_unit():
                reps.append(u)
        return reps

    def elements_mod(self, k):
        """All elements of O_L / t^k O_L (coordinate coefficients of degree < k)."""
        out = []
        for a in _poly_series(self.rf, 0, k, self.prec):
            for b in _poly_series(self.rf, 0, k, self.prec):
                out.append(self.elem_from_coords(a, b))
        return out

    # -- serialization ---------------------------------------------------------

    def to_json(self):
        return {
            "kind": self.kind,
            "q": self.rf.q,
            "p": self.rf.p,
            "deg": self.rf.deg,
            "modulus": list(self.rf.modulus) if self.rf.modulus else None,
            "minpoly": [self.minpoly[0].to_json(), self.minpoly[1].to_json()],
            "prec": self.prec,
        }

    @classmethod
    def from_json(cls, data):
        from .residue import residue_field
        rf = residue_field(data["p"], data["deg"],
                           tuple(data["modulus"]) if data["modulus"] else None)
        c0 = Series.from_json(rf, data["minpoly"][0])
        c1 = Series.from_json(rf, data["minpoly"][1])
        alg = cls(data["kind"], rf, (c0, c1), data["prec"])
        if data["kind"] == "unramified":
            alg.c = rf.neg(c0.coeff(0))
        elif data["kind"] == "ramified":
            alg.d = -c0
            alg.eps = rf.neg(c0.coeff(1))
        return alg


def _poly_series(rf, lo, hi, prec):
    """All series with support in [lo, hi) and coefficients in rf."""
    if lo >= hi:
        yield Series.zero(rf, prec)
        return
    span = hi - lo
    for digits in _digit_tuples(rf, span):
        yield Series(rf, lo, digits, prec)


def _digit_tuples(rf, n):
    if n == 0:
        yield ()
        return
    for head in rf.elements():
        for rest in _digit_tuples(rf, n - 1):
            yield (head,) + rest


class QuadElem:
    """Element of a QuadAlg; ``data`` is (a, b): coordinates over {1, gen} for
    coordinate-represented algebras, the pair (x1, x2) for the split algebra."""

    __slots__ = ("alg", "data")

    def __init__(self, alg, data):
        self.alg = alg
        self.data = tuple(data)

    def coords(self):
        """Coordinates over the basis {1, gen} regardless of representation."""
        a, b = self.data
        if self.alg.pair_repr:
            return (b, a - b)
        return (a, b)

    def vector(self):
        """Coordinate-space vector (matches order_lattice / mult_matrix)."""
        return self.data

    def __repr__(self):
        if self.alg.pair_repr:
            return "(%r, %r)" % self.data
        return "(%r) + (%r)*gen" % self.data

    def __eq__(self, other):
        return (isinstance(other, QuadElem) and self.alg is other.alg
                and self.data == other.data)

    def is_zero(self):
        return self.data[0].is_zero and self.data[1].is_zero

    def agrees_with(self, other, prec=None):
        return all(x.agrees_with(y, prec) for x, y in zip(self.data, other.data))

    def __add__(self, other):
        return QuadElem(self.alg, (self.data[0] + other.data[0],
                                   self.data[1] + other.data[1]))

    def __neg__(self):
        return QuadElem(self.alg, (-self.data[0], -self.data[1]))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self.data
        if isinstance(other, Series):
            return QuadElem(self.alg, (a * other, b * other))
        c, d = other.data
        if self.alg.pair_repr:
            return QuadElem(self.alg, (a * c, b * d))
        c0, c1 = self.alg.minpoly
        bd = b * d
        return QuadElem(self.alg, (a * c - c0 * bd, a * d + b * c - c1 * bd))

    def scale(self, s):
        return QuadElem(self.alg, (self.data[0] * s, self.data[1] * s))

    def shift(self, k):
        return QuadElem(self.alg, (self.data[0].shift(k), self.data[1].shift(k)))

    def conj(self):
        if self.alg.pair_repr:
            return QuadElem(self.alg, (self.data[1], self.data[0]))
        a, b = self.data
        return QuadElem(self.alg, (a - self.alg.minpoly[1] * b, -b))

    def trace(self):
        if self.alg.pair_repr:
            return self.data[0] + self.data[1]
        a, b = self.data
        return a + a - self.alg.minpoly[1] * b

    def norm(self):
        if self.alg.pair_repr:
            return self.data[0] * self.data[1]
        a, b = self.data
        c0, c1 = self.alg.minpoly
        return a * a - c1 * (a * b) + c0 * (b * b)

    def inv(self):
        if self.alg.pair_repr:
            return QuadElem(self.alg, (self.data[0].inv(), self.data[1].inv()))
        n_inv = self.norm().inv()
        c = self.conj()
        return QuadElem(self.alg, (c.data[0] * n_inv, c.data[1] * n_inv))

    def __truediv__(self, other):
        return self * other.inv()

    def square(self):
        return self * self

    # -- valuations -----------------------------------------------------------

    def valuation_L(self):
        """Normalized valuation of L (field kinds only): v_L(uniformizer) = 1."""
        a, b = self.data
        kind = self.alg.kind
        if kind == "unramified":
            return min(a.valuation(), b.valuation())
        if kind == "ramified":
            return min(2 * a.valuation(), 2 * b.valuation() + 1)
        raise UnsupportedError("valuation_L for kind %r" % kind)

    def abs_exponent(self):
        """log_q #(O_L / x O_L) as a Fraction (INF for zero-up-to-precision)."""
        kind = self.alg.kind
        a, b = self.data
        if kind == "split":
            va, vb = a.valuation(), b.valuation()
            if va == INF or vb == INF:
                return INF
            return Fraction(va + vb)
        if kind == "unramified":
            v = self.valuation_L()
            return INF if v == INF else Fraction(2 * v)
        if kind == "ramified":
            v = self.valuation_L()
            return INF if v == INF else Fraction(v)
        raise UnsupportedError("abs_exponent for kind %r" % kind)

    def is_unit(self):
        kind = self.alg.kind
        if kind in ("split", "unramified", "ramified"):
            return self.abs_exponent() == 0
        return self.norm().is_unit()

    def is_integral(self):
        a, b = self.data
        ok = lambda s: s.val is None or s.val >= 0
        if self.alg.kind == "ramified" or not self.alg.pair_repr:
            return ok(a) and ok(b)
        return ok(a) and ok(b)

    def conductor(self):
        """Order index r with O_F[self] = R_r, for generators of L over F."""
        a, b = self.coords()
        if b.val is None:
            raise DegenerateInputError("element does not generate L at working precision")
        return b.certified_valuation()

    def minpoly_coeffs(self):
        """(c0, c1) with self^2 + c1*self + c0 = 0."""
        return (self.norm(), -self.trace())

    def to_json(self):
        return {"data": [self.data[0].to_json(), self.data[1].to_json()],
                "repr": "pair" if self.alg.pair_repr else "coords"}

    @classmethod
    def from_json(cls, alg, data):
        return cls(alg, (Series.from_json(alg.rf, data["data"][0]),
                         Series.from_json(alg.rf, data["data"][1])))


# -- lattice classification --------------------------------------------------


def classify_fractional(alg, lat):
    """Write a full-rank lattice in L as x * R_n; returns (n, x).

    Verification-based: candidate scaling elements are drawn from small
    coefficient combinations of the basis columns, and the result is checked
    exactly against the canonical order basis.
    """
    if lat.rank != 2:
        raise DegenerateInputError("classification requires full-rank lattices in L")
    cands = [x for x in _scaling_candidates(alg, lat) if x.abs_exponent() != INF]
    if not cands:
        raise DegenerateInputError("no invertible element found in lattice")
    cands.sort(key=lambda y: y.abs_exponent())
    for x in cands:
        xi = x.inv()
        scaled = lat.apply(alg.mult_matrix(xi))
        n = index_exp(alg.maximal_order_lattice(scaled.cols[0][0].prec), scaled)
        if n < 0:
            continue
        if scaled == alg.order_lattice(n, scaled.cols[0][0].prec):
            return n, x
    raise DegenerateInputError("lattice is not of the form x * R_n at working precision")


def _scaling_candidates(alg, lat):
    rf = alg.rf
    c1 = alg.elem_from_vector(lat.cols[0])
    c2 = alg.elem_from_vector(lat.cols[1])
    cands = [c1, c2]
    for u in rf.elements():
        if u == 0:
            continue
        us = Series.from_residue(rf, u, alg.prec)
        cands.append(c1 + c2.scale(us))
        cands.append(c2 + c1.scale(us))
    return cands
