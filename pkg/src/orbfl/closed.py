"""Closed-form predictions and verification reports."""

from __future__ import annotations

from .errors import UnsupportedError
from .orbital import OrbitalPolynomial, orbital_analytic, orbital_geometric


def closed_form_analytic(q, regime, L_kind=None, r=0, v=None):
    """Predicted analytic polynomial in u = -q^s.

    small_w unramified: (1+q^{2s}) + (1-q^s)^2 (1+1/q)(q+...+q^r);
    small_w ramified:   (1-q^s+q^{2s}) + (1-q^s)^2 (q+...+q^r);
    uniformizer_w:      1 + u + ... + u^v.
    """
    if regime == "uniformizer_w":
        if v is None:
            raise UnsupportedError("uniformizer_w closed form needs v")
        return OrbitalPolynomial([1] * (v + 1), q)
    if regime != "small_w":
        raise UnsupportedError("no closed form for regime %r (use the "
                               "trivial-case checker for unit_w)" % regime)
    if L_kind == "unramified":
        # substitute q^s = -u: 1 + u^2 + (1+u)^2 * c with c = sum (q^j + q^{j-1})
        c = sum(q ** j + q ** (j - 1) for j in range(1, r + 1))
        return OrbitalPolynomial([1 + c, 2 * c, 1 + c], q)
    if L_kind == "ramified":
        c = sum(q ** j for j in range(1, r + 1))
        return OrbitalPolynomial([1 + c, 1 + 2 * c, 1 + c], q)
    raise UnsupportedError("no closed form for L kind %r" % L_kind)


def closed_form_geometric(L_kind, regime="small_w"):
    """Predicted geometric orbit count in the small_w regime: 2 for L
    unramified, 1 for L ramified."""
    if regime != "small_w":
        raise UnsupportedError("geometric closed form only for small_w")
    if L_kind == "unramified":
        return 2
    if L_kind == "ramified":
        return 1
    raise UnsupportedError("no geometric closed form for L kind %r" % L_kind)


# The stated central value for the ramified small_w case in the source
# identity is 2, but the displayed ramified closed form evaluates to 1 at
# s = 0, which also equals the geometric count.  verify_fl reports which of
# the two the brute-force enumeration supports instead of asserting either.
RAMIFIED_STATED_CENTER = 2


class Report:
    """Outcome of verifying one instance against the matching identity."""

    def __init__(self, inst):
        self.inst = inst
        self.analytic = None
        self.closed = None
        self.geometric = None
        self.value_at_s0 = None
        self.verdicts = {}
        self.notes = []

    @property
    def passed(self):
        return all(v == "PASS" for v in self.verdicts.values() if v != "SKIP")

    def to_json(self):
        return {
            "instance": self.inst.to_json(),
            "analytic_u_coeffs": list(self.analytic.coeffs) if self.analytic else None,
            "closed_u_coeffs": list(self.closed.coeffs) if self.closed else None,
            "geometric": self.geometric,
            "value_at_s0": self.value_at_s0,
            "verdicts": self.verdicts,
            "notes": self.notes,
        }

    def lines(self):
        out = ["%r" % self.inst,
               "  analytic: %r  value@s=0: %r" % (
                   self.analytic.coeffs if self.analytic else None, self.value_at_s0)]
        if self.closed is not None:
            out.append("  closed:   %r" % (self.closed.coeffs,))
        if self.geometric is not None:
            out.append("  geometric: %d" % self.geometric)
        for k, v in self.verdicts.items():
            out.append("  [%s] %s" % (v, k))
        for n in self.notes:
            out.append("  note: %s" % n)
        return out


def verify_fl(inst, guard=None):
    """Brute-force both sides and compare with the closed forms."""
    from .lattice import ENUMERATION_GUARD
    g = guard if guard is not None else ENUMERATION_GUARD
    rep = Report(inst)
    rep.analytic = orbital_analytic(inst, guard=g)
    rep.value_at_s0 = rep.analytic.value_at_s0()
    regime = inst.regime
    if regime in ("small_w", "uniformizer_w"):
        rep.closed = closed_form_analytic(inst.q, regime, inst.L.kind, inst.r, inst.v)
        rep.verdicts["analytic matches closed form"] = (
            "PASS" if rep.analytic == rep.closed else "FAIL")
    if inst.has_geometric_partner:
        rep.geometric = orbital_geometric(inst, guard=g)
        if regime == "small_w" and inst.L.kind == "unramified":
            rep.verdicts["geometric = analytic value at s=0"] = (
                "PASS" if rep.geometric == rep.value_at_s0 else "FAIL")
        elif regime == "small_w":
            # ramified center: report which stated value brute force supports
            brute = rep.value_at_s0
            agree_geom = brute == rep.geometric
            agree_stated = brute == RAMIFIED_STATED_CENTER
            rep.notes.append(
                "ramified center: brute-force value %d; geometric count %d; "
                "stated central value %d; brute force agrees with %s"
                % (brute, rep.geometric, RAMIFIED_STATED_CENTER,
                   "geometric count" if agree_geom and not agree_stated else
                   "stated value" if agree_stated and not agree_geom else
                   "both" if agree_geom else "neither"))
            rep.verdicts["ramified center supported by exactly one stated value"] = (
                "PASS" if agree_geom != agree_stated else "FAIL")
        elif regime == "unit_w":
            rep.verdicts["geometric = analytic count"] = (
                "PASS" if rep.geometric == rep.value_at_s0 == sum(rep.analytic.coeffs)
                else "FAIL")
    else:
        rep.verdicts["value at s=0 vanishes (division-orbit partner)"] = (
            "PASS" if rep.value_at_s0 == 0 else "FAIL")
    return rep


def verify_afl(inst, guard=None):
    """AFL check in the odd-valuation regime: derivative of the brute-force
    polynomial against the predicted intersection number."""
    from .lattice import ENUMERATION_GUARD
    g = guard if guard is not None else ENUMERATION_GUARD
    if inst.v % 2 == 0:
        raise UnsupportedError("AFL comparison requires odd v_L(z^2)")
    rep = Report(inst)
    rep.analytic = orbital_analytic(inst, guard=g)
    rep.value_at_s0 = rep.analytic.value_at_s0()
    rep.verdicts["value at s=0 is 0"] = "PASS" if rep.value_at_s0 == 0 else "FAIL"
    der = rep.analytic.afl_derivative()
    if inst.v == 1:
        expected, label = 1, "intersection length 1"
    else:
        # derived prediction for the all-ones polynomial of odd degree v
        expected, label = (inst.v + 1) // 2, "(v+1)/2 [derived]"
    rep.notes.append("afl_derivative = %d, expected %s" % (der, label))
    rep.verdicts["afl derivative = %s" % label] = "PASS" if der == expected else "FAIL"
    return rep
