"""Orbital integrals by direct lattice enumeration.

The analytic side is a transfer-factor-weighted count of order-filtered
lattices in L; the geometric side counts stable-lattice orbits in the rank-2
space over the unramified quadratic base extension.  Both sides work at a
fixed (q, L, w, z^2) datum and exact arithmetic.
"""

from __future__ import annotations

from collections import Counter

from .errors import DegenerateInputError, GuardError, UnsupportedError
from .lattice import (ENUMERATION_GUARD, Lattice, enumerate_between, index_exp,
                      split_by_idempotent)
from .matrices import identity, mat_inv, mat_sub
from .quadratic import QuadAlg, QuadElem
from .residue import residue_field
from .series import INF, Series


class OrbitalPolynomial:
    """Polynomial in u = -q^s with non-negative integer coefficients."""

    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs, q):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if any(c < 0 for c in coeffs):
            raise DegenerateInputError("orbital coefficients must be non-negative counts")
        self.coeffs = tuple(coeffs)
        self.q = q

    @classmethod
    def from_exponent_counter(cls, counter, q):
        if not counter:
            return cls((), q)
        top = max(counter)
        if min(counter) < 0:
            raise DegenerateInputError("negative transfer exponent")
        return cls([counter.get(k, 0) for k in range(top + 1)], q)

    def __eq__(self, other):
        return (isinstance(other, OrbitalPolynomial)
                and self.coeffs == other.coeffs and self.q == other.q)

    def __repr__(self):
        return "OrbitalPolynomial(%r, q=%d)" % (self.coeffs, self.q)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return OrbitalPolynomial([x + y for x, y in zip(a, b)], self.q)

    def scale(self, c):
        return OrbitalPolynomial([c * x for x in self.coeffs], self.q)

    def value_at_s0(self):
        """Value at s = 0, i.e. u = -1."""
        return sum(c * (-1) ** k for k, c in enumerate(self.coeffs))

    def afl_derivative(self):
        """-(1/log q) d/ds at s = 0: sum of k * a_k * (-1)^(k+1)."""
        return sum(k * c * (-1) ** (k + 1) for k, c in enumerate(self.coeffs))

    def to_json(self):
        return {"u_coeffs": list(self.coeffs), "q": self.q}


# ---------------------------------------------------------------------------
# analytic side
# ---------------------------------------------------------------------------


def orbital_analytic(inst, f=None, guard=ENUMERATION_GUARD):
    """Analytic orbital integral: for the unit function, a weighted count over
    the order filtration R_0, ..., R_r of (w, z^2)-compatible sublattices; for
    a general Hecke word, a direct kernel-weighted pair enumeration."""
    if f is None or (f.n == 0 and not f.steps):
        counter = analytic_exponent_counter(inst, guard)
    else:
        counter = hecke_exponent_counter(inst, f, guard)
    return OrbitalPolynomial.from_exponent_counter(counter, inst.q)


def analytic_exponent_counter(inst, guard=ENUMERATION_GUARD):
    """Multiset {transfer exponent: multiplicity} behind orbital_analytic."""
    alg = inst.L
    prec = alg.prec
    mw = alg.mult_matrix(inst.w)
    mz2 = alg.mult_matrix(inst.zsq)
    counter = Counter()
    for n in range(inst.r + 1):
        rn = alg.order_lattice(n, prec)
        bot = rn.apply(mz2)
        weight = alg.unit_index(n)
        for lam in enumerate_between(rn, bot, stable_under=(mw,), guard=guard):
            counter[index_exp(rn, lam)] += weight
    return counter


def transfer_exponent(lam, z, e):
    """Signed exponent log_q[lam_minus : z * lam_plus] of the transfer factor,
    for a lattice split by the idempotent e (lam_plus = e*lam)."""
    rf = lam.field
    n = lam.dim
    prec = min(x.prec for col in lam.cols for x in col)
    co = mat_sub(identity(rf, n, prec), e)
    plus, minus = split_by_idempotent(lam, e, co)
    zplus = plus.apply(z)
    if zplus.rank != minus.rank:
        raise DegenerateInputError("z image does not match the minus rank")
    return index_exp(minus, zplus)


def _min_coord_valuation(x):
    vals = [s.certified_valuation() for s in x.coords() if not s.is_zero]
    if not vals:
        raise DegenerateInputError("zero element has no valuation")
    return int(min(vals))


def _analytic_blocks(inst):
    """4x4 block matrices of w and z in split plus/minus coordinates over L,
    plus the 2x2 factor blocks of z (z0: minus -> plus, z1: plus -> minus,
    z0 * z1 = z^2 with v_L(z0) = ceil(v_L(z^2)/2))."""
    L = inst.L
    prec = L.prec
    v = inst.zsq.valuation_L()
    if v == INF:
        raise DegenerateInputError("z^2 vanishes at working precision")
    z0 = L.one()
    pw = L.uniformizer()
    for _ in range((int(v) + 1) // 2):
        z0 = z0 * pw
    z1 = inst.zsq * z0.inv()
    mw = L.mult_matrix(inst.w)
    m0 = L.mult_matrix(z0)
    m1 = L.mult_matrix(z1)
    zero = Series.zero(L.rf, prec)

    def block(a, b, c, d):
        null = [[zero, zero], [zero, zero]]
        a, b, c, d = (m if m is not None else null for m in (a, b, c, d))
        return [tuple(a[i]) + tuple(b[i]) for i in range(2)] + \
               [tuple(c[i]) + tuple(d[i]) for i in range(2)]

    w4 = block(mw, None, None, mw)
    z4 = block(None, m0, m1, None)
    return w4, z4, m0, m1, z0, z1


def _ol_span(L, lam):
    """O_L-span of an O_F-lattice in the coordinate space of L."""
    g = L.mult_matrix(L.gen())
    return lam.join(lam.apply(g))


def _direct_sum_lattice(plus, minus, rf, prec):
    zero = Series.zero(rf, prec)
    cols = [(c[0], c[1], zero, zero) for c in plus.cols]
    cols += [(zero, zero, c[0], c[1]) for c in minus.cols]
    return Lattice(cols, 4)


def _stable_closure(lam, mats, rounds=6):
    out = lam
    for _ in range(rounds):
        nxt = out
        for m in mats:
            nxt = nxt.join(out.apply(m))
        if nxt == out:
            return out
        out = nxt
    raise GuardError("stable closure did not terminate")


def hecke_exponent_counter(inst, f, guard=ENUMERATION_GUARD):
    """Exponent multiset of the analytic orbital integral for a Hecke word
    f = R_n * T_{m1} * ... * T_{mk}, by direct enumeration of kernel pairs.

    The first lattice runs over split primitive candidates (minus component
    spanning O_L) inside windows set by the conductor, v_L(z^2), and the
    support radius sum(m_i) of f; the second runs over stable sublattices at
    the matching index; the R_n factor rescales by t^n and leaves both the
    kernel value and the transfer exponent unchanged.
    """
    L = inst.L
    rf = L.rf
    prec = L.prec
    s_tot = sum(f.steps)
    w4, z4, m0, m1, z0, z1 = _analytic_blocks(inst)
    top2 = L.maximal_order_lattice(prec)
    depth = inst.r + s_tot + 1
    minus_cands = [lam for lam in enumerate_between(top2, top2.scale_t(depth),
                                                    guard=guard)
                   if _ol_span(L, lam) == top2]
    a_up = s_tot + _min_coord_valuation(z1) + 1
    a_low = s_tot + inst.r + _min_coord_valuation(z0) + 2
    plus_cands = enumerate_between(top2.scale_t(-a_up), top2.scale_t(a_low),
                                   guard=max(guard, 2 * (a_up + a_low)))
    mw2 = L.mult_matrix(inst.w)
    # cheap per-component preconditions on any stable sublattice of index
    # s_tot: it contains the t^s-scaled components and is stable, forcing
    # these 2x2-level containments
    plus_cands = [lp for lp in plus_cands
                  if lp.contains(lp.apply(mw2).scale_t(s_tot))]
    minus_cands = [lm for lm in minus_cands
                   if lm.contains(lm.apply(mw2).scale_t(s_tot))]
    counter = Counter()
    for lp in plus_cands:
        zp = lp.apply(m1)
        zp_shift = zp.scale_t(s_tot)
        for lm in minus_cands:
            if not lm.contains(zp_shift):
                continue
            if not lp.contains(lm.apply(m0).scale_t(s_tot)):
                continue
            lam0 = _direct_sum_lattice(lp, lm, rf, prec)
            shifted = lam0.scale_t(s_tot)
            closure = _stable_closure(shifted, (w4, z4))
            if not lam0.contains(closure):
                continue
            expnt = index_exp(lm, zp)
            if s_tot == 0:
                counter[expnt] += 1
                continue
            for x in enumerate_between(lam0, shifted, stable_under=(w4, z4),
                                       guard=guard):
                if index_exp(lam0, x) != s_tot:
                    continue
                chains = _count_chains(lam0, x, f.steps, guard)
                if chains:
                    counter[expnt] += chains
    return counter


# ---------------------------------------------------------------------------
# geometric side
# ---------------------------------------------------------------------------


def _base_extension_field(inst):
    """Residue field of K1 = the unramified quadratic extension: F_{q^2} with
    generator theta satisfying theta^2 = theta + c."""
    rf = inst.L.rf
    if rf.deg != 1:
        raise UnsupportedError("geometric side requires a prime base residue field")
    c = inst.c1
    return residue_field(rf.p, 2, ((-c) % rf.p, (-1) % rf.p))


class GeometricModel:
    """The rank-2 model of the 4-dimensional space over K1: the algebra
    L' = K1 (x) L together with the embedding of L, the twisted involution s,
    and the semilinear operator z(x) = xi * s(x) with xi * s(xi) = z^2."""

    def __init__(self, inst):
        self.inst = inst
        rf2 = _base_extension_field(inst)
        self.rf2 = rf2
        rf = inst.L.rf
        prec = inst.L.prec
        self.prec = prec
        self.embed_coeff = lambda a: rf2.embed(a)  # prime field -> F_{q^2}
        kind = inst.L.kind
        if kind == "unramified":
            self.alg = QuadAlg.split(rf2, prec)
            self.theta = rf2.from_coords((0, 1))
            self.theta_bar = rf2.conj(self.theta)
        elif kind == "ramified":
            eps2 = rf2.embed(inst.L.eps)
            self.alg = QuadAlg.ramified(rf2, prec, eps=eps2)
        else:
            raise UnsupportedError("geometric model requires L a field")
        self.kind = kind
        self.xi = self._solve_norm_equation()

    # -- transport ---------------------------------------------------------

    def lift_series(self, s):
        return s.map_coeffs(self.embed_coeff, self.rf2)

    def embed_L(self, x):
        """Image of x in L' = K1 (x) L."""
        a, b = x.coords()
        al, bl = self.lift_series(a), self.lift_series(b)
        if self.kind == "ramified":
            return self.alg.elem_from_coords(al, bl)
        # unramified: the two characters send gen(L) to theta and conj(theta)
        one = Series.one(self.rf2, al.prec)
        u = al + bl.scale(self.theta)
        v = al + bl.scale(self.theta_bar)
        return self.alg.elem_from_pair(u, v)

    def s_map(self, x):
        """The involution sigma (x) 1 on L' (conjugate K1-coefficients)."""
        conj = self.rf2.conj
        a, b = x.data
        ac = a.map_coeffs(conj)
        bc = b.map_coeffs(conj)
        if self.kind == "ramified":
            return QuadElem(self.alg, (ac, bc))
        return QuadElem(self.alg, (bc, ac))

    def s_vector(self, vec):
        conj = self.rf2.conj
        a, b = vec
        ac = a.map_coeffs(conj)
        bc = b.map_coeffs(conj)
        if self.kind == "ramified":
            return (ac, bc)
        return (bc, ac)

    # -- the norm equation xi * s(xi) = z^2 ---------------------------------

    def _solve_norm_equation(self):
        zsq = self.embed_L(self.inst.zsq)
        if self.kind == "unramified":
            one = Series.one(self.rf2, self.prec)
            xi = QuadElem(self.alg, (zsq.data[0], one))
        else:
            v = self.inst.zsq.valuation_L()
            if v == INF:
                raise DegenerateInputError("z^2 is zero at working precision")
            if v % 2 == 1:
                raise DegenerateInputError(
                    "z^2 has odd valuation: no geometric partner (division-algebra orbit)")
            k = v // 2
            pw = self.alg.gen()  # uniformizer of L'
            pk = _power(pw, k)
            unit = zsq * _power(pw, 2 * k).inv() if k else zsq
            eta = self._solve_unit_norm(unit)
            xi = pk * eta
        check = xi * self.s_map(xi)
        if not check.agrees_with(zsq, prec=min(self.prec - 2, check.data[0].prec)):
            raise AssertionError("norm equation solution failed verification")
        return xi

    def _solve_unit_norm(self, u):
        """eta with eta * s(eta) = u for a unit u fixed by s (ramified case)."""
        rf2 = self.rf2
        alg = self.alg
        # residue step: eta0^(1+q) = residue of u in F_q
        u0 = u.data[0].leading()
        eta0 = None
        for x in rf2.units():
            if rf2.norm(x) == u0 % rf2.p:
                eta0 = x
                break
        if eta0 is None:
            raise DegenerateInputError("residue norm equation unsolvable")
        eta = alg.embed_base(Series.from_residue(rf2, eta0, self.prec))
        half = Series.from_int(rf2, pow(2, rf2.p - 2, rf2.p), self.prec)
        for _ in range(2 * self.prec):
            ratio = u * (eta * self.s_map(eta)).inv()
            err = ratio - alg.one()
            vals = [x.valuation() for x in err.data]
            if min(vals) == INF:
                break
            # err lies in L (s-fixed); correct by eta *= 1 + err/2
            delta = QuadElem(alg, (err.data[0] * half, err.data[1] * half))
            eta = eta * (alg.one() + delta)
        return eta

    # -- operators -----------------------------------------------------------

    def w_matrix(self):
        return self.alg.mult_matrix(self.embed_L(self.inst.w))

    def z_apply(self, vec):
        """z(x) = xi * s(x) on coordinate vectors."""
        sx = self.s_vector(vec)
        m = self.alg.mult_matrix(self.xi)
        return (m[0][0] * sx[0] + m[0][1] * sx[1],
                m[1][0] * sx[0] + m[1][1] * sx[1])

    def lat_stable_z(self, lat):
        binv = mat_inv(lat.basis_matrix())
        for col in lat.cols:
            img = self.z_apply(col)
            coords = (binv[0][0] * img[0] + binv[0][1] * img[1],
                      binv[1][0] * img[0] + binv[1][1] * img[1])
            for x in coords:
                if x.val is not None and x.val < 0:
                    return False
                if x.val is None and x.prec <= 0:
                    raise GuardError("precision exhausted in stability check")
        return True

    def span_OL(self, lat):
        """O_{L'}-span of a lattice."""
        g = self.alg.mult_matrix(self.alg.gen())
        cols = list(lat.cols)
        for c in lat.cols:
            cols.append((g[0][0] * c[0] + g[0][1] * c[1],
                         g[1][0] * c[0] + g[1][1] * c[1]))
        return Lattice(cols, 2)

    def unit_action_matrices(self, k):
        """Matrices on L' of a covering family of units O_L^x / O_F^x mod t^k."""
        out = []
        for u in self.inst.L.units_mod(k):
            out.append(self.alg.mult_matrix(self.embed_L(u)))
        return out


def orbital_geometric(inst, guard=ENUMERATION_GUARD, window=None):
    """Number of stable-lattice orbits on the geometric side (unit function)."""
    model = GeometricModel(inst)
    alg = model.alg
    prec = model.prec
    r = inst.r
    mw = model.w_matrix()
    if window is None:
        window = inst.v + r + 2
    if model.kind == "ramified":
        tops = [(0, alg.maximal_order_lattice(prec))]
    else:
        tops = [(m, Lattice.diagonal(model.rf2, (m, 0), prec))
                for m in range(-window, window + 1)]
    survivors = []
    boundary_hit = False
    for m, top in tops:
        bot = top.scale_t(r)
        if r == 0:
            cands = [top]
        else:
            cands = enumerate_between(top, bot, guard=guard)
        for lam in cands:
            if model.span_OL(lam) != top:
                continue
            if not lam.is_stable_under(mw):
                continue
            if not model.lat_stable_z(lam):
                continue
            survivors.append(lam)
            if model.kind == "unramified" and abs(m) == window:
                boundary_hit = True
    if boundary_hit:
        raise GuardError("geometric window too small: stable lattice at boundary")
    units = model.unit_action_matrices(r + 1)
    orbits = set()
    for lam in survivors:
        key = min(lam.apply(u).key() for u in units)
        orbits.add(key)
    return len(orbits)


def _power(x, k):
    out = x.alg.one()
    for _ in range(k):
        out = out * x
    return out


# ---------------------------------------------------------------------------
# Hecke functions
# ---------------------------------------------------------------------------


class HeckeFunction:
    """Word R_n * T_{m1} * ... * T_{mk} in the convolution algebra; T_m counts
    chains descending by index q^m, R_n rescales the comparison lattice."""

    def __init__(self, n=0, steps=()):
        if n < 0 or any(m <= 0 for m in steps):
            raise DegenerateInputError("invalid Hecke word")
        self.n = n
        self.steps = tuple(steps)

    @classmethod
    def unit(cls):
        return cls(0, ())

    def __repr__(self):
        parts = []
        if self.n:
            parts.append("R_%d" % self.n)
        parts.extend("T_%d" % m for m in self.steps)
        return " * ".join(parts) if parts else "unit"


def hecke_eval(f, top, bottom, guard=ENUMERATION_GUARD):
    """Value of the kernel f(Lambda_top, Lambda_bottom): the number of flags
    top = X_0 > X_1 > ... > X_k = t^{-n} * bottom with [X_{i-1} : X_i] = q^{m_i}."""
    target = bottom.scale_t(-f.n)
    return _count_chains(top, target, f.steps, guard)


def _count_chains(cur, target, steps, guard):
    if not steps:
        return 1 if cur == target else 0
    m = steps[0]
    if index_exp(cur, target) < m or not cur.contains(target):
        return 0
    total = 0
    for nxt in enumerate_between(cur, cur.scale_t(m), guard=guard):
        if index_exp(cur, nxt) != m:
            continue
        if not nxt.contains(target):
            continue
        total += _count_chains(nxt, target, steps[1:], guard)
    return total
