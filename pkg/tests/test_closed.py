"""Closed-form predictions and verification reports."""

import pytest

from conftest import cached_instance
from orbfl.closed import (RAMIFIED_STATED_CENTER, closed_form_analytic,
                          closed_form_geometric, verify_afl, verify_fl)
from orbfl.errors import UnsupportedError


def test_closed_form_analytic_values():
    assert closed_form_analytic(3, "small_w", "unramified", r=0).coeffs == (1, 0, 1)
    assert closed_form_analytic(3, "small_w", "unramified", r=1).coeffs == (5, 8, 5)
    assert closed_form_analytic(3, "small_w", "ramified", r=1).coeffs == (4, 7, 4)
    assert closed_form_analytic(3, "uniformizer_w", v=3).coeffs == (1, 1, 1, 1)
    with pytest.raises(UnsupportedError):
        closed_form_analytic(3, "unit_w", "unramified")
    with pytest.raises(UnsupportedError):
        closed_form_analytic(3, "uniformizer_w")


def test_closed_form_centers():
    # unramified central value is 2 for every conductor
    for q in (3, 5):
        for r in range(4):
            assert closed_form_analytic(q, "small_w", "unramified",
                                        r=r).value_at_s0() == 2
            assert closed_form_analytic(q, "small_w", "ramified",
                                        r=r).value_at_s0() == 1
    assert closed_form_geometric("unramified") == 2
    assert closed_form_geometric("ramified") == 1
    assert RAMIFIED_STATED_CENTER == 2


def test_verify_fl_small_w():
    for kind in ("unramified", "ramified"):
        rep = verify_fl(cached_instance(3, "small_w", kind))
        assert rep.passed, rep.lines()
        assert rep.verdicts["analytic matches closed form"] == "PASS"
    rep = verify_fl(cached_instance(3, "small_w", "ramified"))
    assert any("ramified center" in n for n in rep.notes)


def test_verify_fl_unit_and_uniformizer():
    rep = verify_fl(cached_instance(3, "unit_w", "ramified"))
    assert rep.passed
    assert rep.verdicts["geometric = analytic count"] == "PASS"
    rep = verify_fl(cached_instance(3, "uniformizer_w", "ramified", v=1))
    assert rep.passed
    assert rep.verdicts["value at s=0 vanishes (division-orbit partner)"] == "PASS"


def test_verify_afl():
    rep = verify_afl(cached_instance(3, "uniformizer_w", "ramified", v=1))
    assert rep.passed
    rep = verify_afl(cached_instance(3, "uniformizer_w", "ramified", v=3))
    assert rep.passed
    with pytest.raises(UnsupportedError):
        verify_afl(cached_instance(3, "small_w", "unramified"))


def test_report_serialization():
    rep = verify_fl(cached_instance(3, "small_w", "unramified"))
    data = rep.to_json()
    assert data["analytic_u_coeffs"] == [1, 0, 1]
    assert data["geometric"] == 2
    assert all(v in ("PASS", "FAIL", "SKIP") for v in data["verdicts"].values())
    assert any("PASS" in line for line in rep.lines())
