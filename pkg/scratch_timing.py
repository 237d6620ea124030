import time
from fractions import Fraction

from equigerm.ring import RingSpec, parse_polynomial
from equigerm.basis import (
    BasisConfig,
    SubmoduleOfFree,
    INFINITE,
    standard_basis,
)
from equigerm.family import parse_family, jacobian_module, JacobianKind
from equigerm import invariants as inv


CFG = inv.GenericityConfig(seed=0)


def timed(label, fn):
    t0 = time.perf_counter()
    val = fn()
    dt = time.perf_counter() - t0
    print(f"{label}: {val}  ({dt:.2f}s)", flush=True)
    return val


r2 = RingSpec(("x", "y"))
x_gen = parse_polynomial("x", r2)
timed(
    "colength (x) [expect INFINITE]",
    lambda: standard_basis(
        SubmoduleOfFree.ideal(r2, [x_gen]), BasisConfig(order="local")
    ).colength(),
)

cusp = parse_polynomial("x^3 + y^2", r2)
timed("mu(x^3+y^2) [expect 2]", lambda: inv.milnor_hypersurface(cusp))

hm_text = """vars: x1 x2 x3 x4
params: y
F: x1^2 + x2^2 + x3^2 + y*x4 ; x1^4 + x2^4 + x3^4 + x4^2
"""
hm = parse_family(hm_text)
fiber0 = hm.specialize([Fraction(0)])
mod0 = jacobian_module(fiber0, JacobianKind.ABSOLUTE)
timed(
    "HM e0(0) [expect 36]",
    lambda: inv.br_multiplicity(mod0, fiber0.dim, CFG).value,
)
assoc0 = timed(
    "HM associated(0) [expect (36, 4)]",
    lambda: tuple(
        r.value for r in inv.associated_multiplicities(mod0, fiber0.dim, CFG)
    ),
)
timed(
    "HM segre(0) [expect s2=4 s3=32]",
    lambda: inv.segre_numbers(assoc0, fiber0.dim, mod0.rank),
)

fiber1 = hm.specialize([Fraction(1)])
mod1 = jacobian_module(fiber1, JacobianKind.ABSOLUTE)
assoc1 = timed(
    "HM associated(1) [expect (36, 0)]",
    lambda: tuple(
        r.value for r in inv.associated_multiplicities(mod1, fiber1.dim, CFG)
    ),
)
timed(
    "HM segre(1) [expect s2=0 s3=36]",
    lambda: inv.segre_numbers(assoc1, fiber1.dim, mod1.rank),
)

cusp_text = """vars: x y z
params: t
F: x^2 + y^3 + z^2
f: z
"""
cs = parse_family(cusp_text)
cs0 = cs.specialize([Fraction(0)])
timed("cusp-surface em [expect 16]", lambda: inv.em_invariant(cs0, CFG).value)
