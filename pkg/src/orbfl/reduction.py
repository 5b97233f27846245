"""Maximal-order reduction: rank 4 over the base field to rank 2 over L.

When the order generated by w is the maximal order of L = F[w] and 1 + z is
invertible over the integers, shifting the second embedding by

    zeta  ->  (1 + z)^{-1} (zeta - conj(zeta)) + conj(zeta)

turns a rank-4 pair into a rank-2 pair over L with the same orbital integral,
lattice by lattice.  This module computes the shifted pair and the closed-form
reduced (w, z), then re-derives the orbital data by an independent enumeration
over L (series in the uniformizer of L) and compares transfer exponents as
multisets.
"""

from __future__ import annotations

from collections import Counter

from .errors import (DegenerateInputError, GuardError,
                     InsufficientPrecisionError, UnsupportedError)
from .lattice import ENUMERATION_GUARD, Lattice
from .matrices import (identity, mat_add, mat_agrees, mat_det, mat_inv,
                       mat_mul, mat_scale, mat_sub)
from .orbital import (OrbitalPolynomial, analytic_exponent_counter,
                      orbital_geometric)
from .quadratic import QuadAlg, QuadElem
from .residue import residue_field
from .series import INF, Series


def conductor_of_minpoly(c0, c1):
    """Conductor of the order generated by a root of x^2 + c1 x + c0."""
    four = Series.from_int(c0.field, 4, c0.prec)
    disc = c1 * c1 - four * c0
    return disc.certified_valuation() // 2


class ReducedPair:
    """Shifted second embedding together with the reduced (w, z) matrices."""

    def __init__(self, base, img1, eta, w_red, z_red,
                 one_plus_z_unit, one_minus_z_unit):
        self.base = base
        self.img1 = img1
        self.eta = eta
        self.w_red = w_red
        self.z_red = z_red
        self.one_plus_z_unit = one_plus_z_unit
        self.one_minus_z_unit = one_minus_z_unit


def _unit_det(m):
    try:
        return mat_det(m).certified_valuation() == 0
    except InsufficientPrecisionError:
        return False


def reduced_wz(pair):
    """Closed forms of the reduced pair's (w, z):

    w_red = (1 - z^2)^{-1} (g - conj(g))^2 + 2 g conj(g)
    z_red = -z (1 - z^2)^{-1} (g - conj(g))^2

    where g is the first embedding's generator image.
    """
    rf = pair.alg1.rf
    prec = min(x.prec for row in pair.w for x in row)
    ident = identity(rf, 4, prec)
    zsq = mat_mul(pair.z, pair.z)
    one_minus_zsq = mat_sub(ident, zsq)
    if not _unit_det(one_minus_zsq):
        raise DegenerateInputError("1 - z^2 is not invertible over the integers")
    inv = mat_inv(one_minus_zsq)
    diff = mat_sub(pair.img1, pair.conj1)
    diff_sq = mat_mul(diff, diff)
    two = Series.from_int(rf, 2, prec)
    w_red = mat_add(mat_mul(inv, diff_sq),
                    mat_scale(two, mat_mul(pair.img1, pair.conj1)))
    z_red = mat_scale(-Series.one(rf, prec),
                      mat_mul(pair.z, mat_mul(inv, diff_sq)))
    return w_red, z_red


def shift_pair(pair):
    """Shifted embedding and reduced (w, z) for a conductor-zero pair.

    Checks: w regular semisimple with conductor-zero minimal polynomial,
    1 + z invertible over the integers, the shifted generator keeps the trace
    and norm of the original one, and the closed-form (w_red, z_red) agrees
    with recomputing (w, z) directly from the shifted pair.
    """
    from .pairs import regularity
    rep = regularity(pair)
    if not rep.is_rss:
        raise DegenerateInputError("reduction requires a regular semisimple pair")
    c0, c1 = rep.w_minpoly
    if conductor_of_minpoly(c0, c1) != 0:
        raise DegenerateInputError(
            "reduction requires w to generate the maximal order")
    rf = pair.alg1.rf
    prec = min(x.prec for row in pair.w for x in row)
    ident = identity(rf, 4, prec)
    one_plus = mat_add(ident, pair.z)
    one_minus = mat_sub(ident, pair.z)
    plus_unit = _unit_det(one_plus)
    minus_unit = _unit_det(one_minus)
    if not plus_unit:
        raise DegenerateInputError("1 + z is not invertible over the integers")
    inv_plus = mat_inv(one_plus)
    diff = mat_sub(pair.img1, pair.conj1)
    eta = mat_add(mat_mul(inv_plus, diff), pair.conj1)
    eta_conj = mat_add(mat_mul(inv_plus, mat_sub(pair.conj1, pair.img1)),
                       pair.img1)
    tr1 = pair.alg1.gen().trace()
    n1 = pair.alg1.gen().norm()
    if not mat_agrees(mat_add(eta, eta_conj), mat_scale(tr1, ident)):
        raise AssertionError("shifted generator trace not preserved")
    if not mat_agrees(mat_mul(eta, eta_conj), mat_scale(n1, ident)):
        raise AssertionError("shifted generator norm not preserved")
    w_red, z_red = reduced_wz(pair)
    # second path: (w, z) of the pair (img1, eta) computed directly
    w_two = mat_add(mat_mul(eta, pair.img1), mat_mul(pair.conj1, eta_conj))
    z_two = mat_sub(mat_mul(eta, pair.img1), mat_mul(pair.img1, eta))
    if not mat_agrees(w_red, w_two) or not mat_agrees(z_red, z_two):
        raise AssertionError("closed-form reduced (w, z) disagrees with "
                             "direct recomputation from the shifted pair")
    base = QuadAlg.generic(rf, c0, c1, prec=prec)
    return ReducedPair(base, pair.img1, eta, w_red, z_red,
                       plus_unit, minus_unit)


# ---------------------------------------------------------------------------
# L as a Laurent series field in its own uniformizer
# ---------------------------------------------------------------------------


class BaseChangeL:
    """Re-expansion of a quadratic field L as a series field.

    Unramified L: series in t with coefficients in the degree-2 residue
    field.  Ramified L: series in the square root of eps * t with prime
    residue field (t = pi^2 / eps).
    """

    def __init__(self, L):
        if L.kind == "unramified":
            p = L.rf.p
            self.rfL = residue_field(p, 2, ((-L.c) % p, (-1) % p))
            self.gen_res = self.rfL.from_coords((0, 1))
            self.f = 2
        elif L.kind == "ramified":
            self.rfL = L.rf
            self.f = 1
        else:
            raise UnsupportedError("re-expansion requires L to be a field")
        self.L = L
        self.prec = L.prec

    def expand(self, x):
        """Series form of a field element in the uniformizer of L."""
        a, b = x.coords()
        rfL = self.rfL
        prec = min(a.prec, b.prec)
        pairs = {}
        if self.L.kind == "unramified":
            for s, is_gen in ((a, False), (b, True)):
                if s.is_zero:
                    continue
                for k in range(int(s.valuation()), s.prec):
                    c = s.coeff(k)
                    if not c:
                        continue
                    term = rfL.smul(c, self.gen_res) if is_gen else rfL.embed(c)
                    pairs[k] = rfL.add(pairs.get(k, 0), term)
            pairs = {k: v for k, v in pairs.items() if v}
            if not pairs:
                return Series.zero(rfL, prec)
            return Series.from_coeff_map(rfL, pairs, prec)
        # ramified: t^k contributes eps^{-k} at pi^{2k}, shifted by one for
        # the uniformizer coordinate
        p = rfL.p
        eps_inv = pow(int(self.L.eps), p - 2, p)
        for s, off in ((a, 0), (b, 1)):
            if s.is_zero:
                continue
            for k in range(int(s.valuation()), s.prec):
                c = s.coeff(k)
                if not c:
                    continue
                scale = pow(eps_inv, k, p) if k >= 0 \
                    else pow(int(self.L.eps), -k, p)
                pairs[2 * k + off] = (c * scale) % p
        pairs = {k: v for k, v in pairs.items() if v}
        if not pairs:
            return Series.zero(rfL, 2 * prec)
        return Series.from_coeff_map(rfL, pairs, 2 * prec)


def _half_factorization(L, zsq):
    """z0 with v_L(z0) = ceil(v_L(z^2) / 2), and z1 = z^2 / z0."""
    v = zsq.valuation_L()
    if v == INF:
        raise DegenerateInputError("z^2 vanishes at working precision")
    z0 = L.one()
    pw = L.uniformizer()
    for _ in range((int(v) + 1) // 2):
        z0 = z0 * pw
    return z0, zsq * z0.inv()


# ---------------------------------------------------------------------------
# rank-2-over-L enumerations
# ---------------------------------------------------------------------------


def reduced_analytic_counter(inst, window_pad=2):
    """Transfer exponents of the shifted split-side pair over L.

    With conductor zero, every stable lattice splits along the idempotents
    as O_L + pi^m O_L after primitivity normalization; the shifted generator
    acts through (1 - z^2)^{-1} on the idempotent coordinates and the
    transfer exponent of the class at m is f * (v(z1) - m).
    """
    if inst.r != 0:
        raise DegenerateInputError("reduction requires conductor 0")
    L = inst.L
    bc = BaseChangeL(L)
    rfL = bc.rfL
    zsq = bc.expand(inst.zsq)
    one = Series.one(rfL, zsq.prec)
    u = one - zsq
    if u.certified_valuation() != 0:
        raise DegenerateInputError(
            "1 - z^2 is not a unit: shifted pair undefined")
    uinv = u.inv()
    z0_elem, z1_elem = _half_factorization(L, inst.zsq)
    z0 = bc.expand(z0_elem)
    z1 = bc.expand(z1_elem)
    eta = [[uinv, uinv * z0],
           [-(uinv * z1), one - uinv]]
    v0 = int(z0.certified_valuation())
    v1 = int(z1.certified_valuation())
    window = v0 + v1 + window_pad
    counter = Counter()
    for m in range(-window, window + 1):
        lam = Lattice.diagonal(rfL, (0, m))
        if not lam.is_stable_under(eta):
            continue
        if abs(m) == window:
            raise GuardError("reduced enumeration window too small")
        counter[bc.f * (v1 - m)] += 1
    return counter


def _extension_over_L(bc, inst, prec):
    """The first algebra extended to L, as a quadratic algebra over the
    re-expanded base: split when L is unramified, unramified when L is
    ramified."""
    if bc.L.kind == "unramified":
        return QuadAlg.split(bc.rfL, prec=prec)
    return QuadAlg.unramified(bc.rfL, prec=prec, c=inst.c1)


def _solve_norm_over_L(ext, zsq):
    """xi in the unramified quadratic extension of L with xi * conj(xi)
    equal to z^2 (ramified L only)."""
    rfL = ext.rf
    v = zsq.certified_valuation()
    if v % 2 == 1:
        raise DegenerateInputError("norm equation needs even valuation")
    prec = zsq.prec
    unit = zsq.shift(-int(v))
    u0 = unit.leading()
    p = rfL.p
    c0 = int(ext.minpoly[0].leading()) % p
    c1 = (int(ext.minpoly[1].leading()) % p) if not ext.minpoly[1].is_zero else 0
    rf2 = residue_field(p, 2, (c0, c1))
    eta0 = None
    for x in rf2.units():
        if rf2.norm(x) == u0 % p:
            eta0 = x
            break
    if eta0 is None:
        raise DegenerateInputError("residue norm equation unsolvable")
    a0, b0 = rf2.coords(eta0)
    eta = ext.elem_from_coords(Series.from_residue(rfL, a0, prec),
                               Series.from_residue(rfL, b0, prec))
    half = Series.from_int(rfL, pow(2, p - 2, p), prec)
    for _ in range(2 * prec):
        ratio = ext.embed_base(unit) * (eta * eta.conj()).inv()
        err = ratio - ext.one()
        if err.data[0].is_zero and err.data[1].is_zero:
            break
        delta = QuadElem(ext, (err.data[0] * half, err.data[1] * half))
        eta = eta * (ext.one() + delta)
    out = eta.shift(int(v) // 2)
    check = out * out.conj()
    if not check.agrees_with(ext.embed_base(zsq),
                             prec=min(prec - 4, check.data[0].prec)):
        raise AssertionError("norm equation solution failed verification")
    return out


def _twisted_stable(lam, ext, xi):
    """Stability of a lattice under x -> xi * conj(x)."""
    mxi = ext.mult_matrix(xi)
    binv = mat_inv(lam.basis_matrix())
    c1 = ext.minpoly[1]
    for col in lam.cols:
        a, b = col
        ca, cb = a - c1 * b, -b
        img = (mxi[0][0] * ca + mxi[0][1] * cb,
               mxi[1][0] * ca + mxi[1][1] * cb)
        for i in range(2):
            coord = binv[i][0] * img[0] + binv[i][1] * img[1]
            if coord.val is not None and coord.val < 0:
                return False
    return True


def reduced_geometric_count(inst, window_pad=2):
    """Stable lattice classes of the shifted pair, enumerated over L.

    Conductor zero makes every stable lattice a full module over the maximal
    order of the extension of L generated by the first algebra, so classes
    are scanned along uniformizer windows of the idempotent components
    (split extension) or reduce to the single maximal-order class
    (field extension).
    """
    if inst.r != 0:
        raise DegenerateInputError("reduction requires conductor 0")
    if not inst.has_geometric_partner:
        raise UnsupportedError(
            "z^2 has odd valuation over L: division-algebra orbit")
    L = inst.L
    bc = BaseChangeL(L)
    rfL = bc.rfL
    zsq = bc.expand(inst.zsq)
    prec = zsq.prec
    ext = _extension_over_L(bc, inst, prec)
    if L.kind == "ramified":
        xi = _solve_norm_over_L(ext, zsq)
        lam = ext.maximal_order_lattice(prec)
        return 1 if _twisted_stable(lam, ext, xi) else 0
    # split extension: z acts by (x1, x2) -> (xi1 * x2, xi2 * x1) with
    # xi1 * xi2 = z^2; the generator acts diagonally by residue units
    zero = Series.zero(rfL, prec)
    one = Series.one(rfL, prec)
    theta = Series.from_residue(rfL, bc.gen_res, prec)
    theta_conj = Series.from_residue(rfL, rfL.conj(bc.gen_res), prec)
    zmat = [[zero, one], [zsq, zero]]
    gmat = [[theta, zero], [zero, theta_conj]]
    v = int(zsq.certified_valuation())
    window = v + window_pad
    count = 0
    for m in range(-window, window + 1):
        lam = Lattice.diagonal(rfL, (m, 0))
        if not (lam.is_stable_under(zmat) and lam.is_stable_under(gmat)):
            continue
        if abs(m) == window:
            raise GuardError("reduced geometric window too small")
        count += 1
    return count


# ---------------------------------------------------------------------------
# full comparison
# ---------------------------------------------------------------------------


class ReductionReport:
    """Comparison of the rank-4 and rank-2-over-L orbital computations."""

    def __init__(self, inst):
        self.inst = inst
        self.rank4_poly = None
        self.rank2_poly = None
        self.rank4_counter = None
        self.rank2_counter = None
        self.geometric_rank4 = None
        self.geometric_rank2 = None
        self.verdicts = []
        self.notes = []

    @property
    def passed(self):
        return all(ok for _, ok in self.verdicts)

    def lines(self):
        out = ["%s: %s" % (name, "PASS" if ok else "FAIL")
               for name, ok in self.verdicts]
        out.extend("note: %s" % n for n in self.notes)
        return out

    def to_json(self):
        return {
            "rank4": self.rank4_poly.to_json() if self.rank4_poly else None,
            "rank2": self.rank2_poly.to_json() if self.rank2_poly else None,
            "geometric_rank4": self.geometric_rank4,
            "geometric_rank2": self.geometric_rank2,
            "verdicts": [{"name": n, "pass": ok} for n, ok in self.verdicts],
            "notes": list(self.notes),
            "passed": self.passed,
        }


def reduced_instance_data(inst):
    """JSON-ready description of the rank-2-over-L shifted datum: the base
    field re-expansion, z^2 and its balanced factorization in the uniformizer
    of L, and the invertibility flags of 1 +/- z."""
    if inst.r != 0:
        raise DegenerateInputError("reduction requires conductor 0")
    L = inst.L
    bc = BaseChangeL(L)
    zsq = bc.expand(inst.zsq)
    z0_elem, z1_elem = _half_factorization(L, inst.zsq)
    z0 = bc.expand(z0_elem)
    z1 = bc.expand(z1_elem)
    try:
        shift_unit = (L.one() - inst.zsq).norm().certified_valuation() == 0
    except InsufficientPrecisionError:
        shift_unit = False
    return {
        "version": "orbfl-reduced/1",
        "q": inst.q,
        "base_kind": L.kind,
        "residue_degree": bc.f,
        "zsq_uniformizer_series": zsq.to_json(),
        "z0_uniformizer_series": z0.to_json(),
        "z1_uniformizer_series": z1.to_json(),
        "zsq_valuation": int(zsq.certified_valuation()),
        "one_plus_z_unit": shift_unit,
        "one_minus_z_unit": shift_unit,
    }


def verify_orbit_reduction(inst, guard=ENUMERATION_GUARD):
    """Equality of orbital data before and after maximal-order reduction."""
    if inst.r != 0:
        raise DegenerateInputError("reduction requires conductor 0")
    report = ReductionReport(inst)
    c4 = analytic_exponent_counter(inst, guard)
    c2 = reduced_analytic_counter(inst)
    report.rank4_counter = c4
    report.rank2_counter = c2
    report.rank4_poly = OrbitalPolynomial.from_exponent_counter(c4, inst.q)
    report.rank2_poly = OrbitalPolynomial.from_exponent_counter(c2, inst.q)
    report.verdicts.append(("transfer exponent multisets equal", c4 == c2))
    report.verdicts.append(
        ("orbital polynomials equal", report.rank4_poly == report.rank2_poly))
    if inst.has_geometric_partner:
        g4 = orbital_geometric(inst, guard)
        g2 = reduced_geometric_count(inst)
        report.geometric_rank4 = g4
        report.geometric_rank2 = g2
        report.verdicts.append(("geometric counts equal", g4 == g2))
    else:
        report.notes.append(
            "z^2 has odd valuation over L: division-algebra orbit, "
            "geometric comparison skipped")
    # det(1 + z) and det(1 - z) both equal the norm of 1 - z^2, so the two
    # shift directions are units or non-units together
    try:
        unit = (inst.L.one() - inst.zsq).norm().certified_valuation() == 0
    except InsufficientPrecisionError:
        unit = False
    report.notes.append("1 + z and 1 - z are %s over the integers"
                        % ("units" if unit else "non-units"))
    return report
