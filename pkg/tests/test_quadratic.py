"""Quadratic algebras over F_q((t)): orders, units, element arithmetic."""

import itertools

import pytest

from orbfl.errors import UnsupportedError
from orbfl.lattice import index_exp, sublattices_of_index_one
from orbfl.quadratic import QuadAlg, classify_fractional
from orbfl.residue import residue_field
from orbfl.series import Series

RF = residue_field(3)


def algebras(rf):
    c = next(a for a in rf.elements()
             if not rf.is_square(rf.add(rf.embed(1), rf.smul(4, a))))
    return {
        "unramified": QuadAlg.unramified(rf, c=c),
        "ramified": QuadAlg.ramified(rf),
        "split": QuadAlg.split(rf),
    }


def digit_polys(rf, n):
    """All series with support in [0, n)."""
    out = []
    for digits in itertools.product(list(rf.elements()), repeat=n):
        d = {k: c for k, c in enumerate(digits) if c}
        if d:
            out.append(Series.from_coeff_map(rf, d))
        else:
            out.append(Series.zero(rf))
    return out


def unit_index_by_enumeration(alg, n):
    """[O_L^x : R_n^x] counted directly in O_L / t^n O_L.

    Units of the quotient ring are counted coordinate-wise; the image of
    R_n^x = (O_F + t^n O_L)^x is exactly the units with vanishing generator
    coordinate, of which there are (q-1) q^(n-1).
    """
    rf = alg.rf
    q = rf.q
    if n == 0:
        return 1
    units = 0
    for a in digit_polys(rf, n):
        for b in digit_polys(rf, n):
            x = alg.elem_from_coords(a, b)
            if x.is_unit():
                units += 1
    image = (q - 1) * q ** (n - 1)
    assert units % image == 0
    return units // image


@pytest.mark.parametrize("kind", ["unramified", "ramified"])
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_unit_index_matches_direct_enumeration(kind, n):
    alg = algebras(RF)[kind]
    assert alg.unit_index(n) == unit_index_by_enumeration(alg, n)


@pytest.mark.parametrize("kind", ["unramified", "ramified"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_sublattice_type_counts(kind, n):
    alg = algebras(RF)[kind]
    rn = alg.order_lattice(n)
    found = {}
    for sub in sublattices_of_index_one(rn):
        m, _ = classify_fractional(alg, sub)
        found[m] = found.get(m, 0) + 1
    assert found == alg.count_sublattices_by_type(n)
    assert sum(found.values()) == RF.q + 1


def test_order_lattices_nested():
    for alg in algebras(RF).values():
        prev = alg.maximal_order_lattice()
        for n in range(1, 4):
            cur = alg.order_lattice(n)
            assert prev.contains(cur)
            assert index_exp(alg.maximal_order_lattice(), cur) == n
            prev = cur


def test_order_stability_under_conductor_elements():
    alg = algebras(RF)["unramified"]
    # t^n * gen generates R_n, so R_m is stable under it exactly for m <= n
    for n in range(3):
        x = alg.gen().shift(n)
        m = alg.mult_matrix(x)
        for k in range(4):
            assert alg.order_lattice(k).is_stable_under(m) == (k <= n)


def test_uniformizer_valuations():
    algs = algebras(RF)
    assert algs["ramified"].uniformizer().valuation_L() == 1
    assert algs["unramified"].uniformizer().valuation_L() == 1
    with pytest.raises(UnsupportedError):
        algs["split"].uniformizer()


def test_element_identities():
    for kind, alg in algebras(RF).items():
        g = alg.gen()
        x = g + alg.embed_base(Series.from_coeff_map(RF, {1: 2}))
        assert (x * x.conj()).agrees_with(alg.embed_base(x.norm()))
        assert (x + x.conj()).agrees_with(alg.embed_base(x.trace()))
        assert x.conj().conj().agrees_with(x)
        c0, c1 = x.minpoly_coeffs()
        zero = x * x + x.scale(c1) + alg.embed_base(c0)
        assert zero.data[0].is_zero and zero.data[1].is_zero
        if kind != "split":
            y = x * x.inv()
            assert y.agrees_with(alg.one(), prec=y.data[0].prec)


def test_conductor():
    alg = algebras(RF)["unramified"]
    for r in range(4):
        assert alg.gen().shift(r).conductor() == r
        one_plus = alg.one() + alg.gen().shift(r)
        assert one_plus.conductor() == r


def test_classify_fractional_round_trip():
    alg = algebras(RF)["ramified"]
    for n in range(3):
        x = alg.one() + alg.gen()
        lat = alg.order_lattice(n).apply(alg.mult_matrix(x))
        m, y = classify_fractional(alg, lat)
        assert m == n
        recovered = alg.order_lattice(n).apply(alg.mult_matrix(y))
        assert recovered == lat


def test_json_round_trip_preserves_kind_data():
    for kind, alg in algebras(RF).items():
        back = QuadAlg.from_json(alg.to_json())
        assert back.kind == alg.kind
        assert back.unit_index(2) == alg.unit_index(2)
        if kind == "ramified":
            assert back.eps == alg.eps
            assert back.uniformizer().valuation_L() == 1
        if kind == "unramified":
            assert back.c == alg.c
