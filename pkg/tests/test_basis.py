"""Standard-basis colengths against the truncated-Macaulay oracle."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from equigerm.basis import (
    INFINITE,
    BasisConfig,
    ResourceLimitExceeded,
    SubmoduleOfFree,
    colength,
    standard_basis,
)
from equigerm.invariants import (
    GenericityConfig,
    br_multiplicity,
    localized_colength,
    samuel_multiplicity,
)
from equigerm.ring import Polynomial, RingSpec, parse_polynomial

from oracles import macaulay_colength

LOCAL = BasisConfig(order="local")
GLOBAL = BasisConfig(order="global")


def ideal(ring, *gens):
    return SubmoduleOfFree.ideal(ring, [parse_polynomial(g, ring) for g in gens])


R2 = RingSpec(("x", "y"))
R3 = RingSpec(("x", "y", "z"))

# (variables, generators as engine syntax / oracle syntax pairs share ^ vs **)
BATTERY = [
    (R2, ("x", "y")),
    (R2, ("x^2", "y^2")),
    (R2, ("x^2", "x*y", "y^3")),
    (R2, ("x^3 - y^2", "y^3")),
    (R2, ("x^2 + y^2", "x*y")),
    (R3, ("x", "y", "z")),
    (R3, ("x^2", "y^2", "z^2")),
    (R3, ("x^2 + y^3", "z^2", "x*y")),
]


@pytest.mark.parametrize("ring,gens", BATTERY)
def test_colength_matches_oracle(ring, gens):
    got = colength(ideal(ring, *gens), LOCAL)
    want = macaulay_colength([g.replace("^", "**") for g in gens], ring.variables)
    assert got == want


def test_infinite_detected_from_completed_basis():
    assert colength(ideal(R2, "x"), LOCAL) is INFINITE
    assert colength(ideal(R2, "x^2", "x*y"), LOCAL) is INFINITE
    assert colength(ideal(R3, "x*y", "y*z", "x*z"), LOCAL) is INFINITE


def test_local_units_are_invertible():
    # x - x^2 = x(1 - x) generates (x) in the local ring
    assert colength(ideal(R2, "x - x^2", "y"), LOCAL) == 1
    assert colength(ideal(R2, "x - x^2", "y"), GLOBAL) == 2


def test_deep_staircase_crosses_truncation_levels():
    # forces the iterative deepening past levels 8 and 16
    assert colength(ideal(R2, "x^20", "y"), LOCAL) == 20
    assert colength(ideal(R2, "x^29", "y"), LOCAL) == 29


def test_degenerate_corners():
    assert colength(ideal(R2), LOCAL) is INFINITE
    assert colength(SubmoduleOfFree.ideal(R2, [Polynomial.constant(R2, 1)]), LOCAL) == 0


def test_step_budget_raises_instead_of_lying():
    with pytest.raises(ResourceLimitExceeded):
        colength(ideal(R3, "x^5 + y^4*z", "y^5 + z^4*x", "z^5 + x^4*y"),
                 BasisConfig(order="local", step_budget=5))


def test_quotient_basis_monomials():
    basis = standard_basis(ideal(R2, "x^2", "y^2"), LOCAL)
    monos = sorted(mono for _, mono in basis.quotient_basis())
    assert monos == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_module_colength_with_relations():
    # O/(x^2+y^2) as a module over the plane: relations cut the ambient
    sub = SubmoduleOfFree.ideal(
        R2,
        [parse_polynomial("x", R2)],
        relations=[parse_polynomial("x^2 + y^2", R2)],
    )
    # quotient is C{x,y}/(x, x^2+y^2) = C{y}/(y^2)
    assert colength(sub, LOCAL) == 2


def test_colength_invariant_under_recombination():
    """Twenty random invertible recombinations of the generators."""
    rng = random.Random("recombination")
    base_cases = [
        (R2, ("x^2", "x*y", "y^3")),
        (R2, ("x^3 - y^2", "y^3")),
        (R3, ("x^2 + y^3", "z^2", "x*y")),
    ]
    done = 0
    while done < 20:
        ring, gens = base_cases[done % len(base_cases)]
        sub = ideal(ring, *gens)
        reference = colength(sub, LOCAL)
        cols = [list(c) for c in sub.columns]
        n = len(cols)
        # random elementary operations keep the generated submodule
        for _ in range(6):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            c = rng.randint(-3, 3)
            if not c:
                continue
            scale = Polynomial.constant(ring, c)
            cols[i] = [a + scale * b for a, b in zip(cols[i], cols[j])]
        mixed = SubmoduleOfFree(
            ring=ring,
            rank=1,
            columns=tuple(tuple(c) for c in cols),
            ambient_relations=(),
        )
        assert colength(mixed, LOCAL) == reference
        done += 1


def test_br_equals_samuel_for_ideals():
    cfg = GenericityConfig()
    cases = [
        (R2, ("3*x^2", "2*y"), 1),       # jacobian of cusp
        (R2, ("x^2", "y^2"), 2),
        (R3, ("x^2", "y^2", "z^3"), 2),
    ]
    for ring, gens, dim in cases:
        sub = ideal(ring, *gens)
        br = br_multiplicity(sub, dim, cfg, tag="parity:br", basis_config=LOCAL)
        sam = samuel_multiplicity(sub, dim, cfg, tag="parity:sam", basis_config=LOCAL)
        assert br.value == sam.value


def test_modulus_agrees_with_rationals():
    fp = BasisConfig(order="local", modulus=2**31 - 1)
    for ring, gens in BATTERY:
        assert colength(ideal(ring, *gens), fp) == colength(ideal(ring, *gens), LOCAL)


def test_localized_colength_splits_support():
    # (x^2 (x - 1)) has colength 2 at the origin, 1 at x = 1
    sub = ideal(RingSpec(("x",)), "x^3 - x^2")
    at_origin = [parse_polynomial("x", RingSpec(("x",)))]
    assert localized_colength(sub, at_origin, GLOBAL) == 2


gen_terms = st.lists(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5)),
    min_size=1,
    max_size=4,
)


@given(st.lists(gen_terms, min_size=2, max_size=3))
@settings(max_examples=25, deadline=None)
def test_random_ideals_match_oracle(raw):
    gens = []
    for terms in raw:
        p = Polynomial.constant(R2, 0)
        for a, b, c in terms:
            t = Polynomial.constant(R2, c)
            t = t * Polynomial.variable(R2, "x") ** a
            t = t * Polynomial.variable(R2, "y") ** b
            p = p + t
        if p.constant_term():
            p = p - Polynomial.constant(R2, p.constant_term())
        if not p.is_zero():
            gens.append(p)
    if not gens:
        return
    sub = SubmoduleOfFree.ideal(R2, gens)
    got = colength(sub, LOCAL)
    want = macaulay_colength([str(g).replace("^", "**") for g in gens], ("x", "y"))
    if want == "INFINITE":
        assert got is INFINITE
    else:
        assert got == want
