"""Reproducible orbit instances.

An instance is a tuple (L, w, z^2, r, regime) together with the intermediate
trace/norm data (trace3, norm3) satisfying z^2 = w^2 - trace3*w + norm3 and,
when available, the provenance of the second quadratic algebra.  Instances are
deterministic functions of (q, regime, L_kind, r, v, seed).
"""

from __future__ import annotations

import json
import random

from .errors import DegenerateInputError, UnsupportedError
from .quadratic import QuadAlg
from .residue import residue_field
from .series import DEFAULT_PREC, Series

INSTANCE_VERSION = "orbfl-instance/1"

REGIMES = ("unit_w", "small_w", "uniformizer_w")


class OrbitInstance:
    """All data of one orbit comparison problem."""

    def __init__(self, q, regime, L, w, trace3, norm3, r, seed=0, k2=None, c1=None):
        self.q = q
        self.regime = regime
        self.L = L
        self.w = w
        self.trace3 = trace3
        self.norm3 = norm3
        self.zsq = w * w - w.scale(trace3) + L.embed_base(norm3)
        self.r = r
        self.seed = seed
        self.k2 = k2  # {"kind": ..., "trace": Series, "norm": Series} or None
        self.c1 = c1  # residue parameter of the unramified base extension
        self._validate()

    def _validate(self):
        if self.regime not in REGIMES:
            raise UnsupportedError("unknown regime %r" % self.regime)
        if self.w.conductor() != self.r:
            raise DegenerateInputError("conductor(w) = %d != r = %d"
                                       % (self.w.conductor(), self.r))
        e = self.zsq.abs_exponent()
        if e == float("inf"):
            raise DegenerateInputError("z^2 vanishes at working precision (not regular)")
        self.v = int(e) if self.L.kind != "unramified" else int(e)
        if self.regime == "unit_w":
            if self.v != 0:
                raise DegenerateInputError("unit_w regime requires unit z^2")
            if self.r != 0:
                # equality of both counts needs O_F[w] to be the maximal
                # order; conductor >= 1 demonstrably breaks it
                raise DegenerateInputError("unit_w regime requires conductor 0")
        elif self.regime == "small_w":
            if self.v != 2:
                raise DegenerateInputError("small_w regime requires |z^2| exponent 2")
        else:
            if self.L.kind != "ramified":
                raise DegenerateInputError("uniformizer_w regime requires L ramified")
            if self.r != 0:
                raise DegenerateInputError("uniformizer_w regime requires r = 0")

    @property
    def has_geometric_partner(self):
        if self.L.kind == "unramified":
            return True
        return self.zsq.valuation_L() % 2 == 0

    @property
    def has_biquadratic_provenance(self):
        return self.k2 is not None

    def __repr__(self):
        return ("OrbitInstance(q=%d, %s, L=%s, r=%d, v=%d, seed=%d)"
                % (self.q, self.regime, self.L.kind, self.r, self.v, self.seed))

    def to_json(self):
        return {
            "version": INSTANCE_VERSION,
            "q": self.q,
            "regime": self.regime,
            "L": self.L.to_json(),
            "w": self.w.to_json(),
            "trace3": self.trace3.to_json(),
            "norm3": self.norm3.to_json(),
            "r": self.r,
            "v": self.v,
            "seed": self.seed,
            "c1": self.c1,
            "k2": ({"kind": self.k2["kind"], "trace": self.k2["trace"].to_json(),
                    "norm": self.k2["norm"].to_json()} if self.k2 else None),
        }

    @classmethod
    def from_json(cls, data):
        if data.get("version") != INSTANCE_VERSION:
            raise DegenerateInputError("unsupported instance version %r" % data.get("version"))
        L = QuadAlg.from_json(data["L"])
        from .quadratic import QuadElem
        w = QuadElem.from_json(L, data["w"])
        tr3 = Series.from_json(L.rf, data["trace3"])
        n3 = Series.from_json(L.rf, data["norm3"])
        k2 = None
        if data["k2"]:
            k2 = {"kind": data["k2"]["kind"],
                  "trace": Series.from_json(L.rf, data["k2"]["trace"]),
                  "norm": Series.from_json(L.rf, data["k2"]["norm"])}
        return cls(data["q"], data["regime"], L, w, tr3, n3, data["r"],
                   seed=data["seed"], k2=k2, c1=data["c1"])


def base_parameter(rf, rng=None):
    """A residue constant c with 1 + 4c a non-square unit."""
    choices = [a for a in rf.elements()
               if not rf.is_square(rf.add(rf.embed(1), rf.smul(4, a)))]
    if rng is None:
        return choices[0]
    return rng.choice(choices)


def generate(q, regime, L_kind, r=0, v=None, seed=0, prec=DEFAULT_PREC):
    """Deterministic instance construction; see the regime recipes below.

    The returned instance always satisfies z^2 = w^2 - trace3*w + norm3 with
    (trace3, norm3) realizable by an actual quadratic algebra K2 whenever
    possible; the one exception (uniformizer_w with v = 1, which matches a
    division-algebra orbit and admits no such K2) carries k2 = None.
    """
    rng = random.Random((q, regime, L_kind, r, v, seed).__repr__())
    rf = residue_field(q)
    c = base_parameter(rf, rng)
    one4c = rf.add(rf.embed(1), rf.smul(4, c))  # non-square unit
    lam = rng.choice([u for u in rf.units()])  # global rescaling of (w, pi3)
    if regime == "uniformizer_w":
        if v is None or v % 2 == 0 or v < 1:
            raise UnsupportedError("uniformizer_w requires odd v >= 1")
        inst = _gen_uniformizer(rf, c, one4c, v, lam, rng, prec)
    elif regime == "small_w":
        if L_kind not in ("unramified", "ramified"):
            raise UnsupportedError("small_w requires L a field")
        inst = _gen_small(rf, c, one4c, L_kind, r, lam, rng, prec)
    elif regime == "unit_w":
        inst = _gen_unit(rf, c, one4c, L_kind, r, lam, rng, prec)
    else:
        raise UnsupportedError("unknown regime %r" % regime)
    inst.q = q
    inst.seed = seed
    inst.c1 = c
    return inst


def _series_const(rf, a, prec):
    return Series.from_residue(rf, a, prec)


def _rescale(rf, lam, w, tr3, n3, prec):
    """Simultaneous unit rescaling (w, pi3) -> (lam*w, lam*pi3)."""
    ls = _series_const(rf, lam, prec)
    return w.scale(ls), tr3 * ls, n3 * ls * ls


def _gen_small(rf, c, one4c, L_kind, r, lam, rng, prec):
    q = rf.q
    if L_kind == "unramified":
        L = QuadAlg.unramified(rf, prec, c=c)
        if r >= 1:
            # w = t^r * gen; K2 ramified with trace-0 uniformizer
            w = L.elem_from_coords(Series.zero(rf, prec), Series.t_power(rf, r, prec))
            tr3 = Series.zero(rf, prec)
            n3 = -Series.from_coeff_map(rf, {1: one4c}, prec)
            k2 = {"kind": "ramified", "trace": Series.zero(rf, prec),
                  "norm": -Series.t_power(rf, 1, prec)}
        else:
            # w a unit generator; |z^2| forced to exponent 2 via split K2
            w = L.gen()
            tr3 = Series.one(rf, prec) - Series.t_power(rf, 1, prec)
            quarter = Series.from_int(rf, pow(4, rf.p - 2, rf.p), prec)
            n3 = (tr3 * tr3 - _series_const(rf, one4c, prec)) * quarter
            k2 = {"kind": "split", "trace": tr3,
                  "norm": (n3 + _series_const(rf, c, prec) * tr3 * tr3)
                  * _series_const(rf, one4c, prec).inv()}
    else:
        eps = rng.choice([1, _nonsquare(rf)])
        L = QuadAlg.ramified(rf, prec, eps=eps)
        if r >= 1:
            w = L.elem_from_coords(Series.zero(rf, prec), Series.t_power(rf, r, prec))
            tr3 = Series.zero(rf, prec)
            n3 = -Series.from_coeff_map(rf, {1: one4c}, prec)
            k2 = {"kind": "ramified", "trace": Series.zero(rf, prec),
                  "norm": -Series.t_power(rf, 1, prec)}
        else:
            # w = 1 + pi; trace3 = 2 + mu*t with K2 the unramified quadratic
            mu = rng.choice([u for u in rf.units()])
            w = L.elem_from_coords(Series.one(rf, prec), Series.one(rf, prec))
            tr3 = Series.from_coeff_map(rf, {0: rf.embed(2), 1: mu}, prec)
            n3 = Series.from_coeff_map(rf, {0: 1, 1: mu}, prec)
            k2_norm = (n3 + _series_const(rf, c, prec) * tr3 * tr3) \
                * _series_const(rf, one4c, prec).inv()
            k2 = {"kind": "unramified", "trace": tr3, "norm": k2_norm}
    w, tr3, n3 = _rescale(rf, lam, w, tr3, n3, prec)
    k2 = _rescale_k2(rf, lam, k2, prec)
    return OrbitInstance(q, "small_w", L, w, tr3, n3, r, k2=k2)


def _gen_uniformizer(rf, c, one4c, v, lam, rng, prec):
    q = rf.q
    eps = rng.choice([1, _nonsquare(rf)])
    L = QuadAlg.ramified(rf, prec, eps=eps)
    if v == 1:
        # matches a division-algebra orbit: no quadratic K2 realizes these
        # intermediate invariants (valuation parity), so k2 is None
        if eps != 1:
            L = QuadAlg.ramified(rf, prec, eps=1)
        w = L.gen()
        tr3 = -Series.one(rf, prec)
        n3 = Series.zero(rf, prec)
        k2 = None
    else:
        j = (v - 1) // 2
        b = one4c
        # w = t^j + b*pi with b^2 * eps = eps2 * (1+4c); K2 = ramified(eps2*t)
        w = L.elem_from_coords(Series.t_power(rf, j, prec),
                               _series_const(rf, b, prec))
        eps2 = rf.mul(rf.mul(b, b), rf.mul(eps, rf.inv(one4c)))
        tr3 = Series.zero(rf, prec)
        n3 = -Series.from_coeff_map(rf, {1: rf.mul(eps2, one4c)}, prec)
        k2 = {"kind": "ramified", "trace": Series.zero(rf, prec),
              "norm": -Series.from_coeff_map(rf, {1: eps2}, prec)}
    w, tr3, n3 = _rescale(rf, lam, w, tr3, n3, prec)
    k2 = _rescale_k2(rf, lam, k2, prec)
    inst = OrbitInstance(q, "uniformizer_w", L, w, tr3, n3, 0, k2=k2)
    if inst.v != v:
        raise AssertionError("generated v = %d, wanted %d" % (inst.v, v))
    return inst


def _gen_unit(rf, c, one4c, L_kind, r, lam, rng, prec):
    q = rf.q
    if r != 0:
        raise UnsupportedError("unit_w supports conductor 0 only")
    tr3 = Series.zero(rf, prec)
    n3 = -Series.from_coeff_map(rf, {1: one4c}, prec)
    k2 = {"kind": "ramified", "trace": Series.zero(rf, prec),
          "norm": -Series.t_power(rf, 1, prec)}
    if L_kind == "unramified":
        L = QuadAlg.unramified(rf, prec, c=c)
        w = L.gen()
    elif L_kind == "ramified":
        eps = rng.choice([1, _nonsquare(rf)])
        L = QuadAlg.ramified(rf, prec, eps=eps)
        w = L.elem_from_coords(Series.one(rf, prec), Series.one(rf, prec))
    else:
        raise UnsupportedError("unit_w instances require L a field here")
    w, tr3, n3 = _rescale(rf, lam, w, tr3, n3, prec)
    k2 = _rescale_k2(rf, lam, k2, prec)
    return OrbitInstance(q, "unit_w", L, w, tr3, n3, 0, k2=k2)


def _rescale_k2(rf, lam, k2, prec):
    if k2 is None:
        return None
    ls = _series_const(rf, lam, prec)
    return {"kind": k2["kind"], "trace": k2["trace"] * ls, "norm": k2["norm"] * ls * ls}


def _nonsquare(rf):
    return next(a for a in rf.units() if not rf.is_square(a))


def dump_instance(inst, fp=None):
    data = inst.to_json()
    if fp is None:
        return json.dumps(data, indent=2)
    json.dump(data, fp, indent=2)
    return None


def load_instance(text):
    return OrbitInstance.from_json(json.loads(text))
