"""Rank-4 to rank-2-over-L reduction of conductor-zero orbital data."""

import pytest

from conftest import cached_instance, cached_pair
from orbfl.errors import DegenerateInputError
from orbfl.matrices import mat_agrees, mat_add, mat_mul, mat_scale, mat_sub
from orbfl.orbital import analytic_exponent_counter
from orbfl.reduction import (BaseChangeL, conductor_of_minpoly,
                             reduced_analytic_counter, reduced_geometric_count,
                             reduced_instance_data, reduced_wz, shift_pair,
                             verify_orbit_reduction)
from orbfl.residue import residue_field
from orbfl.series import Series

RF = residue_field(3)


def test_conductor_of_minpoly():
    # x^2 - (1+4c) has conductor 0; scaling the root by t^r shifts it by r
    c0 = Series.from_coeff_map(RF, {0: 1})
    c1 = Series.zero(RF)
    assert conductor_of_minpoly(-c0, c1) == 0
    for r in (1, 2):
        assert conductor_of_minpoly(-c0.shift(2 * r), c1) == r


def test_shift_pair_preserves_trace_norm_and_wz():
    for params in ((3, "small_w", "unramified", 0, None, 0),
                   (3, "small_w", "ramified", 0, None, 0),
                   (3, "unit_w", "unramified", 0, None, 0)):
        pair = cached_pair(*params)
        red = shift_pair(pair)
        assert red.one_plus_z_unit
        # direct recomputation of (w, z) from the shifted second embedding
        rf = pair.alg1.rf
        prec = min(x.prec for row in pair.w for x in row)
        tr1 = pair.alg1.gen().trace()
        ident = [[Series.one(rf, prec) if i == j else Series.zero(rf, prec)
                  for j in range(4)] for i in range(4)]
        eta_conj = mat_sub(mat_scale(tr1, ident), red.eta)
        w_two = mat_add(mat_mul(red.eta, pair.img1),
                        mat_mul(pair.conj1, eta_conj))
        z_two = mat_sub(mat_mul(red.eta, pair.img1),
                        mat_mul(pair.img1, red.eta))
        assert mat_agrees(red.w_red, w_two)
        assert mat_agrees(red.z_red, z_two)
        w_closed, z_closed = reduced_wz(pair)
        assert mat_agrees(red.w_red, w_closed)
        assert mat_agrees(red.z_red, z_closed)


def test_shift_pair_requires_conductor_zero():
    pair = cached_pair(3, "small_w", "unramified", 1, None, 0)
    with pytest.raises(DegenerateInputError):
        shift_pair(pair)


def test_base_change_expansion():
    # unramified L: residue degree 2, trace/norm expand consistently
    inst = cached_instance(3, "small_w", "unramified")
    bc = BaseChangeL(inst.L)
    assert bc.f == 2
    x = inst.w
    ex = bc.expand(x)
    prod = bc.expand(x * x)
    assert (ex * ex).agrees_with(prod, prec=min(prod.prec, ex.prec * 2 - 4))
    # ramified L: uniformizer has valuation 1 in its own series variable
    inst = cached_instance(3, "uniformizer_w", "ramified", v=3)
    bc = BaseChangeL(inst.L)
    assert bc.f == 1
    pw = bc.expand(inst.L.uniformizer())
    assert pw.certified_valuation() == 1
    # t = pi^2 / eps
    t_img = bc.expand(inst.L.embed_base(Series.t_power(RF, 1)))
    assert t_img.certified_valuation() == 2
    prod2 = bc.expand(inst.w * inst.w)
    ww = bc.expand(inst.w) * bc.expand(inst.w)
    assert ww.agrees_with(prod2, prec=min(prod2.prec, ww.prec))


def test_reduced_counters_match_rank4():
    for regime, kind, v in (("small_w", "unramified", None),
                            ("small_w", "ramified", None),
                            ("unit_w", "unramified", None),
                            ("uniformizer_w", "ramified", 1),
                            ("uniformizer_w", "ramified", 3)):
        inst = cached_instance(3, regime, kind, v=v)
        assert reduced_analytic_counter(inst) == analytic_exponent_counter(inst)


def test_reduced_geometric_counts():
    assert reduced_geometric_count(cached_instance(3, "small_w", "unramified")) == 2
    assert reduced_geometric_count(cached_instance(3, "small_w", "ramified")) == 1
    assert reduced_geometric_count(cached_instance(3, "unit_w", "unramified")) == 1


def test_verify_orbit_reduction():
    for regime, kind, v in (("uniformizer_w", "ramified", 1),
                            ("uniformizer_w", "ramified", 3),
                            ("small_w", "unramified", None),
                            ("small_w", "ramified", None),
                            ("unit_w", "unramified", None)):
        inst = cached_instance(3, regime, kind, v=v)
        rep = verify_orbit_reduction(inst)
        assert rep.passed, rep.lines()
        assert rep.rank4_poly == rep.rank2_poly
        assert any("1 + z and 1 - z" in n for n in rep.notes)


def test_reduction_rejects_conductor_one():
    inst = cached_instance(3, "small_w", "unramified", r=1)
    with pytest.raises(DegenerateInputError):
        verify_orbit_reduction(inst)


def test_unit_w_ramified_shift_degenerate():
    # here 1 - z^2 is not a unit, so the shifted pair does not exist
    inst = cached_instance(3, "unit_w", "ramified")
    with pytest.raises(DegenerateInputError):
        reduced_analytic_counter(inst)


def test_reduced_instance_data():
    inst = cached_instance(3, "uniformizer_w", "ramified", v=3)
    data = reduced_instance_data(inst)
    assert data["version"] == "orbfl-reduced/1"
    assert data["zsq_valuation"] == 3
    assert data["residue_degree"] == 1
    assert data["one_plus_z_unit"] == data["one_minus_z_unit"]
