"""Pairs of quadratic embeddings into Mat_4(F).

A pair of embeddings of two quadratic algebras into a matrix algebra carries
two canonical elements: a central element w and a twisting element z.  This
module builds such pairs from generator images, validates the defining
relations, recovers the second embedding from (w, z), tests regular
semisimplicity and matching, synthesizes a matched split-side partner, and
certifies that matched pairs become conjugate after the unramified quadratic
base extension.
"""

from __future__ import annotations

from .errors import (DegenerateInputError, InsufficientPrecisionError,
                     RelationError, UnsupportedError)
from .matrices import (identity, mat_agrees, mat_det, mat_inv, mat_map,
                       mat_mul, mat_scale, mat_sub, mat_add, mat_vec,
                       minimal_polynomial, nullspace, zero_matrix)
from .quadratic import QuadAlg
from .residue import residue_field
from .series import Series


def intermediate_invariants(alg1, alg2):
    """Trace and norm of the intermediate generator built from the two
    distinguished generators: z1*w2 + conj(z1)*conj(w2)."""
    tr1 = alg1.gen().trace()
    n1 = alg1.gen().norm()
    tr2 = alg2.gen().trace()
    n2 = alg2.gen().norm()
    trace3 = tr1 * tr2
    # z1^2 + conj(z1)^2 = tr1^2 - 2 n1, and symmetrically for w2
    two_n1 = n1 + n1
    two_n2 = n2 + n2
    norm3 = (tr1 * tr1 - two_n1) * n2 + n1 * (tr2 * tr2 - two_n2)
    return trace3, norm3


class EmbeddingPair:
    """Two quadratic embeddings into Mat_{2h}(F) with their w, z elements."""

    def __init__(self, alg1, alg2, img1, img2, side, h=2):
        self.h = h
        self.side = side
        self.alg1 = alg1
        self.alg2 = alg2
        self.img1 = img1
        self.img2 = img2
        self.trace3, self.norm3 = intermediate_invariants(alg1, alg2)
        n = len(img1)
        field = alg1.rf
        prec = min(x.prec for row in img1 for x in row)
        ident = identity(field, n, prec)
        self.conj1 = mat_sub(mat_scale(alg1.gen().trace(), ident), img1)
        self.conj2 = mat_sub(mat_scale(alg2.gen().trace(), ident), img2)
        self.w = mat_add(mat_mul(img1, img2), mat_mul(self.conj2, self.conj1))
        self.z = mat_sub(mat_mul(img2, img1), mat_mul(img1, img2))
        self._ident = ident

    def to_json(self):
        return {
            "h": self.h,
            "side": self.side,
            "alg1": self.alg1.to_json(),
            "alg2": self.alg2.to_json(),
            "img_gen1": [[x.to_json() for x in row] for row in self.img1],
            "img_gen2": [[x.to_json() for x in row] for row in self.img2],
            "prec": min(x.prec for row in self.img1 for x in row),
        }

    @classmethod
    def from_json(cls, data):
        alg1 = QuadAlg.from_json(data["alg1"])
        alg2 = QuadAlg.from_json(data["alg2"])
        rf = alg1.rf
        img1 = [[Series.from_json(rf, x) for x in row] for row in data["img_gen1"]]
        img2 = [[Series.from_json(rf, x) for x in row] for row in data["img_gen2"]]
        return build_pair(alg1, alg2, img1, img2, side=data["side"], h=data["h"])


def _check_minpoly(alg, img, label):
    """img must satisfy the quadratic minimal polynomial of alg's generator."""
    c0, c1 = alg.minpoly
    res = poly_image(img, c0, c1)
    if not _is_zero_matrix(res):
        raise RelationError("%s does not satisfy its quadratic minimal polynomial" % label)


def poly_image(img, c0, c1):
    """img^2 + c1*img + c0*I."""
    n = len(img)
    field = img[0][0].field
    prec = min(x.prec for row in img for x in row)
    ident = identity(field, n, prec)
    return mat_add(mat_mul(img, img), mat_add(mat_scale(c1, img), mat_scale(c0, ident)))


def _is_zero_matrix(m):
    return all(x.is_zero for row in m for x in row)


def build_pair(alg1, alg2, img1, img2, side="geometric", h=2):
    """Assemble a pair from generator images, validating all four relations."""
    _check_minpoly(alg1, img1, "first generator image")
    _check_minpoly(alg2, img2, "second generator image")
    pair = EmbeddingPair(alg1, alg2, img1, img2, side, h)
    w, z = pair.w, pair.z
    if not _is_zero_matrix(mat_sub(mat_mul(w, img1), mat_mul(img1, w))):
        raise RelationError("relation (1) failed: w does not commute with the first image")
    if not _is_zero_matrix(mat_sub(mat_mul(w, z), mat_mul(z, w))):
        raise RelationError("relation (2) failed: w does not commute with z")
    if not _is_zero_matrix(mat_sub(mat_mul(z, img1), mat_mul(pair.conj1, z))):
        raise RelationError("relation (3) failed: z does not intertwine the conjugation")
    lhs = mat_add(mat_mul(w, w),
                  mat_add(mat_scale(-pair.trace3, w),
                          mat_scale(pair.norm3, pair._ident)))
    if not _is_zero_matrix(mat_sub(lhs, mat_mul(z, z))):
        raise RelationError("relation (4) failed: w^2 - trace3*w + norm3 != z^2")
    return pair


def embed_partner_from_wz(alg1, img1, w, z, alg2):
    """Second generator image (w + z - conj(z1)*trace(w2)) / (z1 - conj(z1)).

    Requires the commutation relations among img1, w, z; the result satisfies
    the quadratic minimal polynomial of alg2's generator.
    """
    n = len(img1)
    field = img1[0][0].field
    prec = min(x.prec for row in img1 for x in row)
    ident = identity(field, n, prec)
    tr1 = alg1.gen().trace()
    conj1 = mat_sub(mat_scale(tr1, ident), img1)
    if not _is_zero_matrix(mat_sub(mat_mul(w, img1), mat_mul(img1, w))):
        raise RelationError("w does not commute with the first image")
    if not _is_zero_matrix(mat_sub(mat_mul(w, z), mat_mul(z, w))):
        raise RelationError("w does not commute with z")
    if not _is_zero_matrix(mat_sub(mat_mul(z, img1), mat_mul(conj1, z))):
        raise RelationError("z does not intertwine the conjugation")
    tr2 = alg2.gen().trace()
    num = mat_add(w, mat_sub(z, mat_scale(tr2, conj1)))
    den = mat_sub(img1, conj1)
    img2 = mat_mul(num, mat_inv(den))
    c0, c1 = alg2.minpoly
    if not _is_zero_matrix(poly_image(img2, c0, c1)):
        raise RelationError("recovered image violates the quadratic relation")
    return img2


# ---------------------------------------------------------------------------
# pair construction from orbit instances
# ---------------------------------------------------------------------------


def _split_rf2_series(s, rf2, rf):
    """Decompose a series over F_{q^2} into base-field series (a, b) = a + b*theta."""
    a = s.map_coeffs(lambda c: rf2.coords(c)[0], rf)
    b = s.map_coeffs(lambda c: rf2.coords(c)[1], rf)
    return a, b


def _restrict_operator(op, rf2, rf, prec):
    """4x4 base-field matrix of an additive operator on the rank-2 module
    over F_{q^2}((t)), in the basis (1,0), (theta,0), (0,1), (0,theta)."""
    theta = rf2.from_coords((0, 1))
    zero = Series.zero(rf2, prec)
    one = Series.one(rf2, prec)
    th = Series.from_residue(rf2, theta, prec)
    basis = [(one, zero), (th, zero), (zero, one), (zero, th)]
    cols = []
    for v in basis:
        img = op(v)
        a0, b0 = _split_rf2_series(img[0], rf2, rf)
        a1, b1 = _split_rf2_series(img[1], rf2, rf)
        cols.append((a0, b0, a1, b1))
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def k2_algebra(inst):
    """The second quadratic algebra recorded with an instance."""
    if inst.k2 is None:
        raise UnsupportedError(
            "instance has no quadratic partner data (division-algebra orbit)")
    return QuadAlg.generic(inst.L.rf, inst.k2["norm"], -inst.k2["trace"],
                           prec=inst.L.prec)


def geometric_pair(inst):
    """The (K1, K2)-side pair of an instance as explicit 4x4 matrices."""
    from .orbital import GeometricModel
    model = GeometricModel(inst)
    rf2, rf, prec = model.rf2, inst.L.rf, inst.L.prec
    theta = rf2.from_coords((0, 1))
    mw = model.w_matrix()

    def op_zeta(v):
        return (v[0].scale(theta), v[1].scale(theta))

    def op_w(v):
        return tuple(mat_vec(mw, list(v)))

    img1 = _restrict_operator(op_zeta, rf2, rf, prec)
    w4 = _restrict_operator(op_w, rf2, rf, prec)
    z4 = _restrict_operator(model.z_apply, rf2, rf, prec)
    alg1 = QuadAlg.unramified(rf, prec, c=inst.c1)
    alg2 = k2_algebra(inst)
    img2 = embed_partner_from_wz(alg1, img1, w4, z4, alg2)
    return build_pair(alg1, alg2, img1, img2, side="geometric")


# ---------------------------------------------------------------------------
# regularity and matching
# ---------------------------------------------------------------------------


class RegularityReport:
    def __init__(self, is_rss, w_minpoly, z_det_valuation):
        self.is_rss = is_rss
        self.w_minpoly = w_minpoly
        self.z_det_valuation = z_det_valuation

    def __repr__(self):
        return ("RegularityReport(is_rss=%r, deg=%d, v(det z)=%r)"
                % (self.is_rss, len(self.w_minpoly), self.z_det_valuation))


def regularity(pair):
    """Separability of w's quadratic polynomial plus invertibility of z."""
    try:
        mp = minimal_polynomial(pair.w, max_deg=2)
    except DegenerateInputError:
        return RegularityReport(False, (), None)
    if len(mp) < 2:
        return RegularityReport(False, mp, None)
    c0, c1 = mp
    disc = c1 * c1 - (c0 + c0 + c0 + c0)
    try:
        disc.certified_valuation()
    except InsufficientPrecisionError:
        raise InsufficientPrecisionError(
            "cannot certify separability: discriminant is zero at precision")
    det_z = mat_det(pair.z)
    try:
        zv = det_z.certified_valuation()
    except InsufficientPrecisionError:
        return RegularityReport(False, mp, None)
    return RegularityReport(True, mp, zv)


def matching_invariant(pair):
    """Characteristic polynomial of w over the base field (conjugacy invariant)."""
    rep = regularity(pair)
    if not rep.is_rss:
        raise DegenerateInputError("matching is only defined for regular semisimple pairs")
    c0, c1 = rep.w_minpoly
    # charpoly = minpoly^2 for a 4x4 w generating a quadratic algebra
    return (c0 * c0, (c0 * c1) + (c0 * c1), c1 * c1 + c0 + c0, c1 + c1)


def invariants_agree(p1, p2, prec=None):
    if len(p1) != len(p2):
        return False
    return all(a.agrees_with(b, prec=prec) for a, b in zip(p1, p2))


def build_matched_partner(pair):
    """Split-side partner pair with the same matching invariant.

    The first algebra is split with idempotent generator; w acts blockwise by
    the companion matrix of its quadratic polynomial and z anti-diagonally by
    a factorization z0 * (z^2/z0) of the element z^2 = w^2 - trace3*w + norm3.
    """
    if pair.side != "geometric":
        raise UnsupportedError("partner synthesis starts from a (K1, K2)-side pair")
    if pair.h > 2:
        raise UnsupportedError("partner synthesis supports h <= 2 only")
    rep = regularity(pair)
    if not rep.is_rss:
        raise DegenerateInputError("partner synthesis requires a regular semisimple pair")
    rf = pair.alg1.rf
    prec = min(x.prec for row in pair.w for x in row)
    c0, c1 = rep.w_minpoly
    L = QuadAlg.generic(rf, c0, c1, prec=prec)
    w_elem = L.gen()
    zsq = w_elem * w_elem - w_elem.scale(pair.trace3) + L.embed_base(pair.norm3)
    z0 = _half_valuation_element(L, zsq, c0, c1)
    z1 = zsq * z0.inv()

    def mult2(x):
        return L.mult_matrix(x)

    mw2 = mult2(w_elem)
    b2 = mult2(z0)
    c2 = mult2(z1)
    zed = Series.zero(rf, prec)
    one = Series.one(rf, prec)

    def block(m11, m12, m21, m22):
        out = []
        for i in range(2):
            out.append(list(m11[i]) + list(m12[i]))
        for i in range(2):
            out.append(list(m21[i]) + list(m22[i]))
        return out

    z2x2_zero = zero_matrix(rf, 2, 2, prec)
    w4 = block(mw2, z2x2_zero, z2x2_zero, mw2)
    z4 = block(z2x2_zero, b2, c2, z2x2_zero)
    img1 = [[one if i == j and i < 2 else zed for j in range(4)] for i in range(4)]
    alg1 = QuadAlg.split(rf, prec)
    alg3 = QuadAlg.generic(rf, pair.norm3, -pair.trace3, prec=prec)
    img2 = embed_partner_from_wz(alg1, img1, w4, z4, alg3)
    partner = build_pair(alg1, alg3, img1, img2, side="analytic")
    if not invariants_agree(matching_invariant(partner), matching_invariant(pair)):
        raise AssertionError("partner invariant mismatch")
    return partner


def _half_valuation_element(L, zsq, c0, c1):
    """Element z0 of L whose valuation is the upper half of that of z^2.

    Works in the generic presentation F[x]/(x^2 + c1 x + c0) of a field L by
    completing the square: y = gen + c1/2 satisfies y^2 = d with d scalar, and
    the parity of v(d) separates the ramified and unramified cases.
    """
    rf = L.rf
    prec = L.prec
    half = Series.from_int(rf, pow(2, rf.p - 2, rf.p), prec)
    hc1 = c1 * half
    d = hc1 * hc1 - c0
    m = d.certified_valuation()
    u, v = zsq.coords()
    u2 = u - v * hc1
    if m % 2 == 0:
        # unramified residue data: valuations measured in t, no cancellation
        # between the scalar part and the shifted-generator part
        vl = min(u2.valuation(), v.valuation() + m // 2)
        k = (int(vl) + 1) // 2
        return L.embed_base(Series.t_power(rf, k, prec))
    # ramified: v_L(t) = 2, v_L(y) = m, gcd(2, m) = 1
    y = L.gen() + L.embed_base(hc1)
    vl = min(2 * int(u2.valuation()) if not u2.is_zero else 10 ** 9,
             2 * int(v.valuation()) + m if not v.is_zero else 10 ** 9)
    k = (vl + 1) // 2
    j = k % 2
    a = (k - j * m) // 2
    out = L.one().shift(a)
    if j:
        out = out * y
    return out


# ---------------------------------------------------------------------------
# base change verification
# ---------------------------------------------------------------------------


def verify_base_change(pair_g, pair_a, prec_margin=4):
    """Certify that the two pairs become conjugate over the unramified
    quadratic base extension, by solving for an intertwiner g with
    g * w_a = w_g * g, g * z_a = z_g * g, and g aligning the idempotent with
    the extended image of the first generator, then checking the second
    generator image transforms as theta*img2 + conj(theta)*conj(img2)."""
    if pair_g.side == pair_a.side:
        raise UnsupportedError("base change compares pairs on opposite sides")
    if not invariants_agree(matching_invariant(pair_g), matching_invariant(pair_a)):
        raise DegenerateInputError("matching invariants differ")
    rf = pair_g.alg1.rf
    if rf.deg != 1:
        raise UnsupportedError("base change requires a prime base residue field")
    c0, c1 = pair_g.alg1.minpoly
    rf2 = residue_field(rf.p, 2, (int(c0.leading()) % rf.p if not c0.is_zero else 0,
                                  int(c1.leading()) % rf.p if not c1.is_zero else 0))
    prec = min(x.prec for row in pair_g.img1 for x in row)
    lift = lambda m: mat_map(m, lambda s: s.map_coeffs(rf2.embed, rf2))
    theta = Series.from_residue(rf2, rf2.from_coords((0, 1)), prec)
    theta_bar = Series.from_residue(rf2, rf2.conj(rf2.from_coords((0, 1))), prec)

    g_zeta = lift(pair_g.img1)
    g_w = lift(pair_g.w)
    g_z = lift(pair_g.z)
    a_w = lift(pair_a.w)
    a_z = lift(pair_a.z)
    a_idem = lift(pair_a.img1)
    ident = identity(rf2, 4, prec)
    tr1 = theta + theta_bar
    g_zeta_conj = mat_sub(mat_scale(tr1, ident), g_zeta)
    denom = (theta * theta - theta_bar * theta_bar).inv()
    # extended image of the idempotent: (theta*zeta - conj(theta)*conj(zeta)) / (theta^2 - conj(theta)^2)
    c_idem = mat_scale(denom, mat_sub(mat_scale(theta, g_zeta),
                                      mat_scale(theta_bar, g_zeta_conj)))

    rows = []
    for x_mat, y_mat in ((a_w, g_w), (a_z, g_z), (a_idem, c_idem)):
        for i in range(4):
            for j in range(4):
                row = [Series.zero(rf2, prec) for _ in range(16)]
                for l in range(4):
                    row[4 * i + l] = row[4 * i + l] + x_mat[l][j]
                for k in range(4):
                    row[4 * k + j] = row[4 * k + j] - y_mat[i][k]
                rows.append(tuple(row))
    basis = nullspace(rows)
    g = _invertible_combination(basis, rf2, prec)
    if g is None:
        return False
    # the final identity: g conjugates the analytic second image onto
    # theta*img2 + conj(theta)*(trace2 - img2) over the extension
    g_pi2 = lift(pair_g.img2)
    tr2 = pair_g.alg2.gen().trace().map_coeffs(rf2.embed, rf2)
    g_pi2_conj = mat_sub(mat_scale(tr2, ident), g_pi2)
    rhs = mat_add(mat_scale(theta, g_pi2), mat_scale(theta_bar, g_pi2_conj))
    lhs = mat_mul(g, lift(pair_a.img2))
    rhs_g = mat_mul(rhs, g)
    avail = min(min(x.prec for row in lhs for x in row),
                min(x.prec for row in rhs_g for x in row))
    if avail < 8:
        raise InsufficientPrecisionError(
            "only %d certified coefficients left for the base change check" % avail)
    return mat_agrees(lhs, rhs_g, prec=min(avail, prec - prec_margin))


def _invertible_combination(basis, rf2, prec):
    """A certified-invertible 4x4 matrix in the span of nullspace vectors."""
    if not basis:
        return None

    def reshape(vec):
        return [[vec[4 * i + j] for j in range(4)] for i in range(4)]

    for vec in basis:
        g = reshape(vec)
        try:
            mat_det(g).certified_valuation()
            return g
        except InsufficientPrecisionError:
            continue
    if len(basis) >= 2:
        for a in rf2.elements():
            for b in rf2.elements():
                if a == 0 and b == 0:
                    continue
                vec = [x.scale(a) + y.scale(b) for x, y in zip(basis[0], basis[1])]
                g = reshape(vec)
                try:
                    mat_det(g).certified_valuation()
                    return g
                except InsufficientPrecisionError:
                    continue
    return None
