from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equigerm.arcs import (
    Arc,
    ArcNotOnGerm,
    arc_dependence_test,
    pull_back,
    pull_back_orders,
)
from equigerm.basis import SubmoduleOfFree
from equigerm.family import load_family
from equigerm.ring import RingSpec, parse_polynomial
from equigerm.series import INF, Series

from oracles import arc_pullback_order

R1 = RingSpec(("t",))


def series(coeffs: dict, known_to=INF) -> Series:
    return Series(coeffs, known_to)


def test_series_basic_arithmetic():
    a = series({1: Fraction(1), 3: Fraction(2)})
    b = series({2: Fraction(-1)})
    assert (a + b).coefficient(2) == -1
    assert (a * b).coefficient(3) == -1
    assert (a * b).coefficient(5) == -2
    assert a.valuation() == (1, True)
    assert Series.zero().valuation() == (INF, True)


def test_truncation_limits_certainty():
    a = series({5: Fraction(1)}, known_to=4)
    val, certified = a.valuation()
    assert not certified


def test_inverse_of_unit():
    u = series({0: Fraction(1), 1: Fraction(1)})
    inv = u.inverse(8)
    prod = u * inv
    assert prod.coefficient(0) == 1
    assert all(prod.coefficient(k) == 0 for k in range(1, 8))


@given(
    st.dictionaries(st.integers(1, 6), st.integers(-9, 9), min_size=1, max_size=4),
    st.dictionaries(st.integers(1, 6), st.integers(-9, 9), min_size=1, max_size=4),
)
@settings(max_examples=50, deadline=None)
def test_product_valuation_additive(ad, bd):
    a = series({k: Fraction(v) for k, v in ad.items() if v})
    b = series({k: Fraction(v) for k, v in bd.items() if v})
    va, _ = a.valuation()
    vb, _ = b.valuation()
    vp, certified = (a * b).valuation()
    assert certified
    if va is INF or vb is INF:
        assert vp is INF
    else:
        assert vp == va + vb  # integral domain: no cancellation of leads


@pytest.fixture(scope="module")
def f13():
    return load_family("examples/example_1_3.germ")


def modules_of(fam):
    M = SubmoduleOfFree.ideal(fam.ring, fam.ideals["M"])
    N = SubmoduleOfFree.ideal(fam.ring, fam.ideals["N"])
    return M, N


def test_pull_back_matches_oracle(f13):
    phi = f13.arcs["phi"]
    for text in ("s*t^2 + t^3", "s*t^4", "t^3"):
        p = parse_polynomial(text, f13.ring)
        s = pull_back(phi, p)
        val, certified = s.valuation()
        assert certified
        want = arc_pullback_order(text.replace("^", "**"), {"t": "u", "s": "-u"})
        assert (val is INF and want == "INFINITE") or val == want


def test_pull_back_orders_on_nested_ideals(f13):
    M, N = modules_of(f13)
    phi = f13.arcs["phi"]
    assert pull_back_orders(M, phi).orders == (3,)
    assert pull_back_orders(N, phi).orders == (5,)


def test_orders_stable_under_doubled_truncation(f13):
    M, N = modules_of(f13)
    phi = f13.arcs["phi"]
    for module in (M, N):
        low = pull_back_orders(module, phi, precision=24).orders
        high = pull_back_orders(module, phi, precision=48).orders
        assert low == high


def test_dependence_verdicts(f13):
    M, N = modules_of(f13)
    phi = f13.arcs["phi"]
    h = f13.elements["h"]
    assert arc_dependence_test(h, M, phi).verdict == "CONSISTENT"
    res = arc_dependence_test(h, N, phi)
    assert res.verdict == "REFUTED"
    assert res.section_orders == (3,)
    assert res.required == (5,)


def test_strict_dependence_raises_required_order(f13):
    M, _ = modules_of(f13)
    phi = f13.arcs["phi"]
    h = f13.elements["h"]
    # h has exactly the module order, so the strict test must refute
    assert arc_dependence_test(h, M, phi, strict=True).verdict == "REFUTED"


def test_inconclusive_when_truncation_too_short():
    deep = SubmoduleOfFree.ideal(R1, [parse_polynomial("t^30", R1)])
    h = parse_polynomial("t^29", R1)
    arc = Arc(R1, (Series.t_power(1),), truncation=8, parameter="u")
    res = arc_dependence_test(h, deep, arc)
    assert res.verdict == "INCONCLUSIVE"
    assert any("doubled" in n for n in res.notes)


def test_doubling_resolves_when_it_can():
    deep = SubmoduleOfFree.ideal(R1, [parse_polynomial("t^10", R1)])
    h = parse_polynomial("t^9", R1)
    arc = Arc(R1, (Series.t_power(1),), truncation=8, parameter="u")
    assert arc_dependence_test(h, deep, arc).verdict == "REFUTED"


def test_arc_must_vanish_at_origin():
    with pytest.raises(ArcNotOnGerm):
        Arc(R1, (Series.constant(Fraction(1)),), truncation=8)


def test_arc_off_the_germ_is_rejected():
    b2 = load_family("examples/umbrella_b2.germ")
    rows = [[eq.derivative(v) for v in b2.fiber_variables] for eq in b2.equations]
    jm = SubmoduleOfFree.from_matrix(b2.ring, rows, relations=b2.equations)
    with pytest.raises(ArcNotOnGerm):
        pull_back_orders(jm, b2.arcs["off_germ"])


def test_exact_polynomial_arcs_verify_on_germ():
    for name in ("umbrella_b1", "umbrella_b2"):
        fam = load_family(f"examples/{name}.germ")
        rows = [[eq.derivative(v) for v in fam.fiber_variables] for eq in fam.equations]
        jm = SubmoduleOfFree.from_matrix(fam.ring, rows, relations=fam.equations)
        assert pull_back_orders(jm, fam.arcs["witness"]).on_germ_verified


def test_strict_umbrella_pair():
    """The parameter partial is strictly dependent only for the b = 2 form."""
    for name, expected in (("umbrella_b1", "REFUTED"), ("umbrella_b2", "CONSISTENT")):
        fam = load_family(f"examples/{name}.germ")
        dFdy = [eq.derivative("y") for eq in fam.equations]
        rows = [[eq.derivative(v) for v in fam.fiber_variables] for eq in fam.equations]
        jm = SubmoduleOfFree.from_matrix(fam.ring, rows, relations=fam.equations)
        res = arc_dependence_test(dFdy, jm, fam.arcs["witness"], strict=True)
        assert res.verdict == expected, name
