"""Instance generation: determinism, validation, serialization."""

import pytest

from orbfl.errors import DegenerateInputError, UnsupportedError
from orbfl.instances import (REGIMES, OrbitInstance, dump_instance, generate,
                             load_instance)


def test_deterministic_generation():
    a = dump_instance(generate(3, "small_w", "unramified", r=2, seed=7))
    b = dump_instance(generate(3, "small_w", "unramified", r=2, seed=7))
    assert a == b
    c = dump_instance(generate(3, "small_w", "unramified", r=2, seed=8))
    assert a != c


def test_conductor_matches_request():
    for r in (0, 1, 2, 3):
        inst = generate(3, "small_w", "unramified", r=r)
        assert inst.w.conductor() == r
        assert inst.r == r


def test_defining_relation_of_zsq():
    inst = generate(3, "small_w", "ramified", r=1)
    direct = inst.w * inst.w - inst.w.scale(inst.trace3) \
        + inst.L.embed_base(inst.norm3)
    assert direct.agrees_with(inst.zsq)


def test_regime_valuations():
    assert generate(3, "unit_w", "unramified").v == 0
    assert generate(3, "small_w", "ramified").zsq.abs_exponent() == 2
    for v in (1, 3, 5):
        assert generate(3, "uniformizer_w", "ramified", v=v).v == v


def test_uniformizer_v1_is_division_orbit():
    inst = generate(3, "uniformizer_w", "ramified", v=1)
    assert inst.k2 is None
    assert not inst.has_geometric_partner
    assert not inst.has_biquadratic_provenance
    assert generate(3, "uniformizer_w", "ramified", v=3).k2 is not None


def test_invalid_specs_rejected():
    with pytest.raises(UnsupportedError):
        generate(3, "uniformizer_w", "ramified", v=2)
    # the uniformizer regime forces L ramified regardless of the request
    assert generate(3, "uniformizer_w", "unramified", v=1).L.kind == "ramified"
    with pytest.raises(UnsupportedError):
        generate(3, "unit_w", "unramified", r=1)
    with pytest.raises(UnsupportedError):
        generate(3, "nonsense", "unramified")
    with pytest.raises(UnsupportedError):
        generate(3, "small_w", "split")


def test_validation_on_inconsistent_data():
    good = generate(3, "small_w", "unramified", r=1)
    with pytest.raises(DegenerateInputError):
        OrbitInstance(3, "small_w", good.L, good.w, good.trace3, good.norm3,
                      r=2, k2=good.k2)


def test_json_round_trip():
    for regime, kind, r, v in (("small_w", "unramified", 1, None),
                               ("small_w", "ramified", 0, None),
                               ("unit_w", "ramified", 0, None),
                               ("uniformizer_w", "ramified", 0, 3)):
        inst = generate(3, regime, kind, r=r, v=v, seed=4)
        back = load_instance(dump_instance(inst))
        assert dump_instance(back) == dump_instance(inst)
        assert back.v == inst.v and back.r == inst.r
        assert back.L.kind == inst.L.kind


def test_regime_tuple_is_stable():
    assert REGIMES == ("unit_w", "small_w", "uniformizer_w")
