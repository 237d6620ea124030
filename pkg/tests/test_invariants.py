"""Frozen multiplicity values with oracle confirmations.

Expected numbers come from the truncated-Macaulay oracle (Milnor numbers,
colengths) or were frozen after agreeing across independent routes (direct
definition, sectional Milnor sums, polar cross-sums).  Nothing here is
compared against the engine's own output recycled as an expectation.
"""

import math
from fractions import Fraction

import pytest

from equigerm.basis import BasisConfig, SubmoduleOfFree, colength
from equigerm.family import JacobianKind, jacobian_module, load_family, parse_family
from equigerm.invariants import (
    GenericityConfig,
    NotICIS,
    associated_multiplicities,
    br_multiplicity,
    cosupport_summed_associated,
    em_invariant,
    em_via_milnor,
    milnor_hypersurface,
    milnor_icis,
    polar_multiplicity,
    samuel_multiplicity,
    sectional_milnor_sequence,
    segre_numbers,
)
from equigerm.ring import RingSpec, parse_polynomial

from oracles import milnor_oracle

LOCAL = BasisConfig(order="local")
CFG = GenericityConfig()


def fiber(source: str):
    return parse_family(source).specialize([])


NODE = fiber("vars: x y\nF: x^2 + y^2\nf: y\n")
GRAPH = fiber("vars: x y z\nF: z\nf: x^2 + y^2\n")
CUSP_SURFACE = fiber("vars: x y z\nF: x^2 + y^3 + z^2\nf: z\n")


@pytest.fixture(scope="module")
def hm_fibers():
    fam = load_family("examples/example_2_3.germ")
    return fam.specialize([Fraction(0)]), fam.specialize([Fraction(1)])


def test_milnor_engine_matches_oracle():
    R2 = RingSpec(("x", "y"))
    cases = ["x^2 + y^2", "x^3 + y^2", "x^4 + y^4", "x^2 + y^5", "x^3 + x*y^3"]
    for text in cases:
        g = parse_polynomial(text, R2)
        got = milnor_hypersurface(g, LOCAL)
        assert got == milnor_oracle(text.replace("^", "**"), ("x", "y"))


def test_milnor_icis_empty_is_zero():
    assert milnor_icis([], CFG, "empty", LOCAL).value == 0


def test_milnor_icis_rejects_nonisolated():
    R2 = RingSpec(("x", "y"))
    with pytest.raises(NotICIS):
        milnor_icis([parse_polynomial("x^2", R2)], CFG, "fat", LOCAL)


def test_henry_merle_multiplicities(hm_fibers):
    at0, at1 = hm_fibers
    for fib, expected in ((at0, (36, 4)), (at1, (36, 0))):
        jm = jacobian_module(fib, JacobianKind.ABSOLUTE)
        assoc = associated_multiplicities(jm, fib.dim, CFG, tag="hm")
        values = tuple(r.value for r in assoc)
        assert values == expected
        assert all(r.draws_agreeing >= 2 for r in assoc)
        # br is the top associated multiplicity
        br = br_multiplicity(jm, fib.dim, CFG, tag="hm:br")
        assert br.value == expected[0]


def test_henry_merle_segre_numbers(hm_fibers):
    at0, at1 = hm_fibers
    for fib, want in ((at0, {0: 0, 1: 0, 2: 4, 3: 32}), (at1, {0: 0, 1: 0, 2: 0, 3: 36})):
        jm = jacobian_module(fib, JacobianKind.ABSOLUTE)
        values = [r.value for r in associated_multiplicities(jm, fib.dim, CFG, tag="hm")]
        segre = segre_numbers(values, fib.dim, jm.rank)
        assert segre == want
        assert sum(segre.values()) == values[0]
        assert all(segre[i] == 0 for i in range(fib.dim))


def test_henry_merle_cosupport_sum_away_from_origin(hm_fibers):
    """At y = 1 the singular point stays at the origin but the module's
    second stage goes free: the cosupport-summed stages see (36, 0)."""
    _, at1 = hm_fibers
    values = tuple(
        r.value for r in cosupport_summed_associated(at1, CFG, "hm:sum", LOCAL)
    )
    assert values == (36, 0)


def test_umbrella_samuel_multiplicities():
    for name in ("umbrella_b1", "umbrella_b2"):
        fam = load_family(f"examples/{name}.germ")
        got = []
        for s in (0, 1):
            fib = fam.specialize([Fraction(s)])
            jm = jacobian_module(fib, JacobianKind.ABSOLUTE)
            got.append(samuel_multiplicity(jm, fib.dim, CFG, tag=f"{name}:{s}").value)
        assert got == [3, 2], name


EM_TABLE = [
    # fiber, em, mu_i(X), mu_i(Z), polar list
    (NODE, 6, [1, 1], [1, 1], [2, 2]),
    (GRAPH, 7, [0, 0, 0], [1, 1, 1], [1, 1, 1]),
    (CUSP_SURFACE, 16, [2, 1, 1], [2, 1, 1], [4, 2, 2]),
]


@pytest.mark.parametrize("fib,em,mx,mz,polars", EM_TABLE)
def test_em_three_routes_inline_fibers(fib, em, mx, mz, polars):
    direct = em_invariant(fib, CFG, "em", LOCAL)
    via, seqs = em_via_milnor(fib, CFG, "emmu", LOCAL)
    assert direct.value == em
    assert via.value == em
    assert [m.value for m in seqs["X"]] == mx
    assert [m.value for m in seqs["Z"]] == mz
    got_polars = [
        polar_multiplicity(fib, i, CFG, f"pol:{i}", LOCAL).value
        for i in range(fib.dim + 1)
    ]
    assert got_polars == polars
    cross = sum(math.comb(fib.ambient_dim, i) * m for i, m in enumerate(got_polars))
    assert cross == em


def test_em_three_routes_bundled_fibers():
    a1 = load_family("examples/a1_surface_with_f.germ").specialize([Fraction(0)])
    mj = load_family("examples/mu_jump_af.germ")
    table = [
        (a1, 14, [1, 1, 1], [1, 1, 1]),
        (mj.specialize([Fraction(0)]), 5, [0, 0, 0], [2, 1, 1]),
        (mj.specialize([Fraction(1)]), 4, [0, 0, 0], [1, 1, 1]),
    ]
    for fib, em, mx, mz in table:
        direct = em_invariant(fib, CFG, "em", LOCAL)
        via, seqs = em_via_milnor(fib, CFG, "emmu", LOCAL)
        assert direct.value == via.value == em
        assert [m.value for m in seqs["X"]] == mx
        assert [m.value for m in seqs["Z"]] == mz


def test_sectional_sequence_of_a1_surface():
    a1 = load_family("examples/a1_surface_with_f.germ").specialize([Fraction(0)])
    seq = sectional_milnor_sequence(a1, CFG, "sect", LOCAL)
    assert [m.value for m in seq["X"]] == [1, 1, 1]
    assert [m.value for m in seq["Z"]] == [1, 1, 1]


def test_polar_zero_is_deterministic():
    r = polar_multiplicity(CUSP_SURFACE, 0, CFG, "pol0", LOCAL)
    assert r.value == 4
    assert r.seed_used == "deterministic"


def test_genericity_retry_resolves_unlucky_draws():
    """A draw sequence whose first two section slopes disagree must keep
    drawing instead of raising; the cusp multiplicity stays 2."""
    mj = load_family("examples/mu_jump_af.germ").specialize([Fraction(0)])
    via, seqs = em_via_milnor(mj, CFG, "invariants:emmu", LOCAL)
    assert via.value == 5
    mult_result = seqs["Z"][1]
    assert mult_result.value == 1
    assert mult_result.draws_agreeing >= 2


def test_semicontinuity_spot_checks():
    mj = load_family("examples/mu_jump_af.germ")
    em0 = em_invariant(mj.specialize([Fraction(0)]), CFG, "s0", LOCAL).value
    em1 = em_invariant(mj.specialize([Fraction(1)]), CFG, "s1", LOCAL).value
    assert em0 >= em1
    hm = load_family("examples/example_2_3.germ")
    for j in range(2):
        a0 = associated_multiplicities(
            jacobian_module(hm.specialize([Fraction(0)]), JacobianKind.ABSOLUTE),
            2, CFG, tag="hm",
        )[j].value
        a1 = associated_multiplicities(
            jacobian_module(hm.specialize([Fraction(1)]), JacobianKind.ABSOLUTE),
            2, CFG, tag="hm",
        )[j].value
        assert a0 >= a1


def test_two_seeds_agree_on_key_values():
    other = GenericityConfig(seed=1)
    hm0 = load_family("examples/example_2_3.germ").specialize([Fraction(0)])
    jm = jacobian_module(hm0, JacobianKind.ABSOLUTE)
    for cfg in (CFG, other):
        values = tuple(
            r.value for r in associated_multiplicities(jm, hm0.dim, cfg, tag="seeds")
        )
        assert values == (36, 4)
    assert em_invariant(NODE, other, "em", LOCAL).value == 6
