"""Multiplicities of module germs on complete intersections.

Every generic choice (reduction combos, recombinations, section planes,
linear forms) is drawn from a seeded generator, computed for a fixed number
of independent draws, and accepted only when the minimum is attained at
least twice.  Results carry the seed they were derived from.  A draw that
comes out infinite is discarded as degenerate and replaced, up to a retry
budget; only when every attempt is infinite does the value surface as
INFINITE (or NotICIS where finiteness is part of the claim being made).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from . import _linalg
from .basis import (
    INFINITE,
    BasisConfig,
    SubmoduleOfFree,
    matrix_minors,
    scale_module,
    standard_basis,
    colength,
)
from .family import FiberGerm, JacobianKind, jacobian_matrix, jacobian_module
from .ring import Polynomial, RingSpec

Value = Union[int, float]


class GenericityUnstable(RuntimeError):
    """Independent generic draws disagreed; re-run with another seed."""


class NotICIS(ValueError):
    """The germ does not have an isolated singularity of the expected kind."""


class InternalConsistencyError(RuntimeError):
    """Two computations that must agree did not; this is a bug or a broken
    genericity assumption, never a legitimate verdict."""


class NegativeSegre(InternalConsistencyError):
    """A Segre number came out negative."""


@dataclass(frozen=True)
class GenericityConfig:
    seed: Union[int, str] = 0
    bound: int = 100
    draws: int = 2
    retry_limit: int = 3

    def __post_init__(self):
        if self.bound < 10:
            raise ValueError("coefficient bound must be at least 10")
        if self.draws < 2:
            raise ValueError("at least two draws are required")

    def rng(self, tag: str) -> random.Random:
        return random.Random(f"{self.seed}:{tag}")

    def seed_label(self, tag: str) -> str:
        return f"{self.seed}:{tag}"


@dataclass(frozen=True)
class MultiplicityResult:
    value: Value
    draws_agreeing: int
    seed_used: str

    @staticmethod
    def deterministic(value: Value) -> "MultiplicityResult":
        return MultiplicityResult(value, 0, "deterministic")


# -- draw plumbing -------------------------------------------------------------


def _random_vector(rng: random.Random, n: int, bound: int) -> list[int]:
    while True:
        v = [rng.randint(-bound, bound) for _ in range(n)]
        if any(v):
            return v


def _random_matrix(rng, rows, cols, bound) -> list[list[int]]:
    return [_random_vector(rng, cols, bound) for _ in range(rows)]


def _rank(matrix: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in row] for row in matrix]
    red, pivots = _linalg.rref(rows)
    return len(pivots)


def _invertible_matrix(rng, n, bound) -> list[list[int]]:
    while True:
        m = _random_matrix(rng, n, n, bound)
        if _rank(m) == n:
            return m


def _full_rank_matrix(rng, rows, cols, bound) -> list[list[int]]:
    while True:
        m = _random_matrix(rng, rows, cols, bound)
        if _rank(m) == min(rows, cols):
            return m


def _stable_min(
    cfg: GenericityConfig,
    tag: str,
    sampler: Callable[[random.Random], Value],
) -> MultiplicityResult:
    """Run the draw doctrine for a scalar-valued sampler."""
    finite: list[Value] = []
    infinite_seen = 0
    attempts = 0
    budget = cfg.draws + cfg.retry_limit
    while attempts < budget:
        if len(finite) >= cfg.draws and finite.count(min(finite)) >= 2:
            break
        rng = cfg.rng(f"{tag}:{attempts}")
        v = sampler(rng)
        attempts += 1
        if v is INFINITE:
            infinite_seen += 1
        else:
            finite.append(v)
    if not finite:
        return MultiplicityResult(INFINITE, infinite_seen, cfg.seed_label(tag))
    if len(finite) < cfg.draws:
        raise GenericityUnstable(
            f"{tag}: only {len(finite)} of {cfg.draws} draws were finite; "
            "re-run with a different seed"
        )
    low = min(finite)
    agreeing = finite.count(low)
    if agreeing < 2:
        raise GenericityUnstable(
            f"{tag}: minimum {low} attained once among draws {sorted(finite)}; "
            "re-run with a different seed"
        )
    return MultiplicityResult(low, agreeing, cfg.seed_label(tag))


def _stable_min_vector(
    cfg: GenericityConfig,
    tag: str,
    sampler: Callable[[random.Random], Optional[list[Value]]],
    length: int,
) -> list[MultiplicityResult]:
    """Draw doctrine for vector-valued samplers; None marks a degenerate draw.

    The minimum is taken componentwise and each component must be attained at
    least twice, so mixing components from different draws is allowed."""
    good: list[list[Value]] = []
    attempts = 0
    budget = cfg.draws + cfg.retry_limit

    def settled() -> bool:
        if len(good) < cfg.draws:
            return False
        for j in range(length):
            column = [vec[j] for vec in good]
            if column.count(min(column)) < 2:
                return False
        return True

    while attempts < budget and not settled():
        rng = cfg.rng(f"{tag}:{attempts}")
        vec = sampler(rng)
        attempts += 1
        if vec is not None:
            if len(vec) != length:
                raise InternalConsistencyError("sampler length mismatch")
            good.append(vec)
    if not good:
        return [
            MultiplicityResult(INFINITE, attempts, cfg.seed_label(tag))
            for _ in range(length)
        ]
    if len(good) < cfg.draws:
        raise GenericityUnstable(
            f"{tag}: only {len(good)} of {cfg.draws} draws were non-degenerate; "
            "re-run with a different seed"
        )
    out = []
    for j in range(length):
        column = [vec[j] for vec in good]
        low = min(column)
        agreeing = column.count(low)
        if agreeing < 2:
            raise GenericityUnstable(
                f"{tag}[{j}]: minimum {low} attained once among draws "
                f"{sorted(column)}; re-run with a different seed"
            )
        out.append(MultiplicityResult(low, agreeing, cfg.seed_label(tag)))
    return out


# -- reductions and stage quotients --------------------------------------------


def generic_reduction(
    sub: SubmoduleOfFree, count: int, rng: random.Random, bound: int
) -> SubmoduleOfFree:
    """Submodule generated by `count` random constant combinations of the
    generators (a candidate reduction when count = dim + rank - 1)."""
    zero = tuple(
        Polynomial.constant(sub.ring, 0) for _ in range(sub.rank)
    )
    cols = []
    for _ in range(count):
        c = _random_vector(rng, len(sub.columns), bound)
        acc = list(zero)
        for coeff, col in zip(c, sub.columns):
            if coeff:
                for i in range(sub.rank):
                    acc[i] = acc[i] + col[i] * coeff
        cols.append(tuple(acc))
    return SubmoduleOfFree(
        sub.ring, sub.rank, tuple(cols), sub.ambient_relations
    )


def stage_quotient(sub: SubmoduleOfFree, section: Sequence[int]) -> SubmoduleOfFree:
    """Quotient of the ambient free module by a generic constant section.

    The section spans a line in the free module; coordinates are recombined
    so that line becomes a coordinate axis, which is then dropped."""
    if sub.rank < 2:
        raise ValueError("cannot quotient a rank-1 module by a section")
    if len(section) != sub.rank or not any(section):
        raise ValueError("section must be a nonzero constant vector")
    pivot = max(range(sub.rank), key=lambda i: abs(section[i]))
    gp = section[pivot]
    rest = [i for i in range(sub.rank) if i != pivot]
    cols = []
    for col in sub.columns:
        cols.append(
            tuple(col[i] * gp - col[pivot] * section[i] for i in rest)
        )
    return SubmoduleOfFree(
        sub.ring, sub.rank - 1, tuple(cols), sub.ambient_relations
    )


def _reduction_fitting_ideal(
    sub: SubmoduleOfFree, dim: int, rng: random.Random, bound: int
) -> SubmoduleOfFree:
    count = dim + sub.rank - 1
    reduction = generic_reduction(sub, count, rng, bound)
    fitt = matrix_minors(reduction.matrix(), sub.rank)
    return SubmoduleOfFree.ideal(
        sub.ring, fitt, relations=sub.ambient_relations
    )


# -- the multiplicities ---------------------------------------------------------


def samuel_multiplicity(
    ideal: SubmoduleOfFree,
    dim: int,
    cfg: GenericityConfig,
    tag: str = "samuel",
    basis_config: BasisConfig = BasisConfig(),
) -> MultiplicityResult:
    """Multiplicity of an ideal on a germ of the given dimension.

    On a zero-dimensional germ this is the length of the local ring itself,
    whatever the ideal; in higher dimension it is the colength of dim generic
    combinations of the generators."""
    if ideal.rank != 1:
        raise ValueError("samuel multiplicity is for ideals")
    if dim == 0:
        ring_only = SubmoduleOfFree.ideal(
            ideal.ring, [], relations=ideal.ambient_relations
        )
        return MultiplicityResult.deterministic(colength(ring_only, basis_config))

    def sampler(rng):
        reduced = generic_reduction(ideal, dim, rng, cfg.bound)
        return colength(reduced, basis_config)

    return _stable_min(cfg, tag, sampler)


def br_multiplicity(
    sub: SubmoduleOfFree,
    dim: int,
    cfg: GenericityConfig,
    tag: str = "br",
    basis_config: BasisConfig = BasisConfig(),
) -> MultiplicityResult:
    """Buchsbaum-Rim multiplicity of a finite-colength submodule of O^rank
    on a germ of the given dimension."""
    if dim == 0:
        return MultiplicityResult.deterministic(colength(sub, basis_config))

    def sampler(rng):
        fitting = _reduction_fitting_ideal(sub, dim, rng, cfg.bound)
        return colength(fitting, basis_config)

    return _stable_min(cfg, tag, sampler)


def associated_multiplicities(
    sub: SubmoduleOfFree,
    dim: int,
    cfg: GenericityConfig,
    tag: str = "assoc",
    basis_config: BasisConfig = BasisConfig(),
) -> list[MultiplicityResult]:
    """The multiplicity sequence e^0, ..., e^(rank-1): e^j is the
    Buchsbaum-Rim multiplicity of the image of the module in the quotient of
    the ambient free module by j generic constant sections."""
    length = sub.rank

    def sampler(rng):
        values: list[Value] = []
        stage = sub
        for j in range(length):
            fitting = _reduction_fitting_ideal(stage, dim, rng, cfg.bound)
            v = colength(fitting, basis_config)
            if v is INFINITE:
                return None
            values.append(v)
            if j + 1 < length:
                section = _random_vector(rng, stage.rank, cfg.bound)
                stage = stage_quotient(stage, section)
        return values

    return _stable_min_vector(cfg, tag, sampler, length)


def segre_numbers(
    associated: Sequence[Value], dim: int, rank: int
) -> dict[int, Value]:
    """Segre numbers from the associated multiplicities by differencing.

    s^i = e^(r-i) - e^(r-i+1) for 0 <= i <= r = dim + rank - 1, reading
    e^j = 0 for j >= rank.  They are nonnegative, vanish below i = dim, and
    sum to e^0; violations are internal errors."""
    if len(associated) != rank:
        raise ValueError("need one associated multiplicity per quotient stage")
    r = dim + rank - 1

    def e(j: int) -> Value:
        return associated[j] if j < rank else 0

    out: dict[int, Value] = {}
    for i in range(r + 1):
        s = e(r - i) - e(r - i + 1)
        if s < 0:
            raise NegativeSegre(
                f"s^{i} = {s} < 0 from associated multiplicities {associated}"
            )
        out[i] = s
    if sum(out.values()) != e(0):
        raise InternalConsistencyError(
            "Segre numbers do not sum to the top multiplicity"
        )
    return out


# -- localization at the cosupport ----------------------------------------------


def cosupport_ideal(fiber: FiberGerm) -> list[Polynomial]:
    """Generators of the ideal cutting out where the Jacobian module of the
    fiber fails to have full rank, together with the fiber equations."""
    module = jacobian_module(fiber, JacobianKind.ABSOLUTE)
    minors = matrix_minors(module.matrix(), module.rank)
    return list(fiber.equations) + minors


def localized_colength(
    sub: SubmoduleOfFree,
    at: Sequence[Polynomial],
    basis_config: BasisConfig,
) -> Value:
    """Sum of the local colengths of an ideal over the points cut out by
    `at`, inside the finite set the ideal already defines.

    Works in the polynomial ring: the quotient algebra splits over its
    support, and the elements annihilated by a power of the localizing ideal
    span exactly the factors at its zeros.  The annihilator chain stabilizes
    as soon as two consecutive kernels agree."""
    if sub.rank != 1:
        raise ValueError("localized colength is for ideals")
    if basis_config.order != "global":
        raise ValueError("localization needs the polynomial-ring order")
    basis = standard_basis(sub, basis_config)
    total = basis.colength()
    if total is INFINITE:
        return INFINITE
    if total == 0:
        return 0
    quotient = basis.quotient_basis()
    monos = [m for _, m in quotient]
    index = {m: i for i, m in enumerate(monos)}
    n = len(monos)
    mats = []
    for g in at:
        rows = [[Fraction(0)] * n for _ in range(n)]
        for j, m in enumerate(monos):
            prod = g * Polynomial.monomial(sub.ring, m)
            coords = basis.normal_form_coordinates(prod)
            for m2, c in coords.items():
                rows[index[m2]][j] = c
        if any(any(row) for row in rows):
            mats.append(rows)
    if not mats:
        return total  # the localizing ideal is zero on the whole algebra
    stacked = [row for mat in mats for row in mat]
    kernel = _linalg.kernel_basis(stacked, n)
    while len(kernel) < n:
        q = _linalg.residual_map(kernel, n)
        constraints = [row for mat in mats for row in _linalg.mat_mul(q, mat)]
        bigger = _linalg.kernel_basis(constraints, n)
        if len(bigger) == len(kernel):
            break
        kernel = bigger
    return len(kernel)


def cosupport_summed_associated(
    fiber: FiberGerm,
    cfg: GenericityConfig,
    tag: str = "assoc_sum",
    basis_config: BasisConfig = BasisConfig(),
) -> list[MultiplicityResult]:
    """Associated multiplicities of the fiber's Jacobian module, summed over
    every point of the fiber where the module drops rank (not only the
    origin).  This is the quantity whose constancy in the family is the
    Whitney criterion at nonzero parameter values."""
    sub = jacobian_module(fiber, JacobianKind.ABSOLUTE)
    dim = fiber.dim
    at = cosupport_ideal(fiber)
    global_config = BasisConfig(
        order="global",
        degree_bound=basis_config.degree_bound,
        step_budget=basis_config.step_budget,
        modulus=basis_config.modulus,
    )
    length = sub.rank

    def sampler(rng):
        values: list[Value] = []
        stage = sub
        for j in range(length):
            fitting = _reduction_fitting_ideal(stage, dim, rng, cfg.bound)
            v = localized_colength(fitting, at, global_config)
            if v is INFINITE:
                return None
            values.append(v)
            if j + 1 < length:
                section = _random_vector(rng, stage.rank, cfg.bound)
                stage = stage_quotient(stage, section)
        return values

    return _stable_min_vector(cfg, tag, sampler, length)


# -- Milnor numbers --------------------------------------------------------------


def milnor_hypersurface(
    g: Polynomial, basis_config: BasisConfig = BasisConfig()
) -> int:
    """Milnor number of a hypersurface germ: colength of the Jacobian ideal
    in the ambient ring.  No generic choices are involved."""
    jac = [g.derivative(v) for v in g.ring.variables]
    value = colength(
        SubmoduleOfFree.ideal(g.ring, jac), basis_config
    )
    if value is INFINITE:
        raise NotICIS("the singularity is not isolated")
    return value


def _milnor_once(
    equations: Sequence[Polynomial],
    rng: random.Random,
    bound: int,
    basis_config: BasisConfig,
) -> Value:
    """One pass of the iterated-section formula with a random recombination.

    Returns INFINITE when some level is not finite (degenerate draw, or a
    genuinely non-isolated singularity)."""
    k = len(equations)
    ring = equations[0].ring
    recombined: list[Polynomial] = []
    matrix = _invertible_matrix(rng, k, bound)
    for row in matrix:
        acc = Polynomial.constant(ring, 0)
        for c, g in zip(row, equations):
            if c:
                acc = acc + g * c
        recombined.append(acc)
    total = 0
    sign = (-1) ** (k - 1)
    for j in range(1, k + 1):
        rows = jacobian_matrix(recombined[:j], ring.variables)
        minors = matrix_minors(rows, j)
        gens = list(recombined[: j - 1]) + minors
        level = colength(SubmoduleOfFree.ideal(ring, gens), basis_config)
        if level is INFINITE:
            return INFINITE
        total += sign * level
        sign = -sign
    if total < 0:
        raise InternalConsistencyError(
            "alternating sum of section levels came out negative"
        )
    return total


def milnor_icis(
    equations: Sequence[Polynomial],
    cfg: GenericityConfig,
    tag: str = "milnor",
    basis_config: BasisConfig = BasisConfig(),
) -> MultiplicityResult:
    """Milnor number of the complete intersection germ cut by the equations.

    A single equation needs no choices; deeper intersections recombine the
    equations generically and take the alternating sum of section-level
    colengths.  Raises NotICIS when every draw is infinite."""
    equations = list(equations)
    if not equations:
        return MultiplicityResult.deterministic(0)
    if len(equations) == 1:
        return MultiplicityResult.deterministic(
            milnor_hypersurface(equations[0], basis_config)
        )

    def sampler(rng):
        return _milnor_once(equations, rng, cfg.bound, basis_config)

    result = _stable_min(cfg, tag, sampler)
    if result.value is INFINITE:
        raise NotICIS(
            "every recombination had a non-finite section level; the germ "
            "is not an isolated complete intersection singularity"
        )
    return result


def _germ_multiplicity(
    equations: Sequence[Polynomial],
    dim: int,
    cfg: GenericityConfig,
    tag: str,
    basis_config: BasisConfig,
) -> MultiplicityResult:
    """Multiplicity of the germ cut by the equations: colength of dim generic
    linear forms on it (its length when it is already zero-dimensional)."""
    ring = equations[0].ring if equations else None
    if ring is None:
        raise ValueError("no equations; ambient space has multiplicity 1")
    if dim == 0:
        return MultiplicityResult.deterministic(
            colength(
                SubmoduleOfFree.ideal(ring, list(equations)), basis_config
            )
        )

    def sampler(rng):
        forms = []
        for _ in range(dim):
            coeffs = _random_vector(rng, ring.nvars, cfg.bound)
            form = Polynomial.constant(ring, 0)
            for c, v in zip(coeffs, ring.variables):
                if c:
                    form = form + Polynomial.variable(ring, v) * c
            forms.append(form)
        gens = list(equations) + forms
        return colength(SubmoduleOfFree.ideal(ring, gens), basis_config)

    return _stable_min(cfg, tag, sampler)


def _generic_section(
    equations: Sequence[Polynomial],
    codim: int,
    rng: random.Random,
    bound: int,
) -> list[Polynomial]:
    """Restrict the equations to a generic linear subspace of the given
    codimension, writing them in fresh coordinates on the subspace."""
    ring = equations[0].ring
    l = ring.nvars
    keep = l - codim
    matrix = _full_rank_matrix(rng, l, keep, bound)
    target = RingSpec(tuple(f"u{i+1}" for i in range(keep)))
    images = {}
    for j, name in enumerate(ring.variables):
        img = Polynomial.constant(target, 0)
        for k in range(keep):
            if matrix[j][k]:
                img = img + Polynomial.variable(target, target.variables[k]) * matrix[j][k]
        images[name] = img
    return [g.substitute(target, images) for g in equations]


def sectional_milnor_sequence(
    fiber: FiberGerm,
    cfg: GenericityConfig,
    tag: str = "sections",
    basis_config: BasisConfig = BasisConfig(),
) -> dict[str, list[MultiplicityResult]]:
    """Milnor numbers of generic plane sections of X = V(F) and, when f is
    declared, of Z = V(F, f).

    mu_i is the Milnor number of the intersection with a generic plane of
    codimension i.  At the top, mu_d(X) and mu_(d-1)(Z) are one less than
    the respective multiplicities, and mu_d(Z) is 1 by convention."""
    d = fiber.dim
    if d < 1:
        raise ValueError("sectional sequences need a positive-dimensional germ")
    out: dict[str, list[MultiplicityResult]] = {}

    def section_value(equations, i, subtag):
        if i == 0:
            return milnor_icis(
                equations, cfg, f"{tag}:{subtag}:0", basis_config
            )

        def sampler(rng):
            cut = _generic_section(equations, i, rng, cfg.bound)
            return _milnor_once(cut, rng, cfg.bound, basis_config) if len(
                cut
            ) > 1 else _section_hypersurface_value(cut[0], basis_config)

        result = _stable_min(cfg, f"{tag}:{subtag}:{i}", sampler)
        if result.value is INFINITE:
            raise NotICIS(
                f"generic codimension-{i} sections are not isolated"
            )
        return result

    mu_x: list[MultiplicityResult] = []
    if fiber.equations:
        for i in range(d):
            mu_x.append(section_value(fiber.equations, i, "X"))
        mult_x = _germ_multiplicity(
            fiber.equations, d, cfg, f"{tag}:X:mult", basis_config
        )
        mu_x.append(
            MultiplicityResult(
                mult_x.value - 1, mult_x.draws_agreeing, mult_x.seed_used
            )
        )
    else:
        mu_x = [MultiplicityResult.deterministic(0) for _ in range(d + 1)]
    out["X"] = mu_x

    if fiber.function is not None:
        z_equations = list(fiber.equations) + [fiber.function]
        mu_z: list[MultiplicityResult] = []
        for i in range(d - 1):
            mu_z.append(section_value(z_equations, i, "Z"))
        mult_z = _germ_multiplicity(
            z_equations, d - 1, cfg, f"{tag}:Z:mult", basis_config
        )
        mu_z.append(
            MultiplicityResult(
                mult_z.value - 1, mult_z.draws_agreeing, mult_z.seed_used
            )
        )
        mu_z.append(MultiplicityResult.deterministic(1))
        out["Z"] = mu_z
    return out


def _section_hypersurface_value(g: Polynomial, basis_config) -> Value:
    jac = [g.derivative(v) for v in g.ring.variables]
    return colength(SubmoduleOfFree.ideal(g.ring, jac), basis_config)


# -- the invariant for Whitney conditions on the pair (function, family) --------


def em_invariant(
    fiber: FiberGerm,
    cfg: GenericityConfig,
    tag: str = "em",
    basis_config: BasisConfig = BasisConfig(),
) -> MultiplicityResult:
    """Buchsbaum-Rim multiplicity of the maximal-ideal multiple of the
    Jacobian module of (F; f) on the fiber."""
    if fiber.function is None:
        raise ValueError("em needs a function f")
    module = jacobian_module(fiber, JacobianKind.AUGMENTED)
    scalars = [
        Polynomial.variable(fiber.ring, v) for v in fiber.ring.variables
    ]
    scaled = scale_module(scalars, module)
    return br_multiplicity(scaled, fiber.dim, cfg, tag, basis_config)


def em_via_milnor(
    fiber: FiberGerm,
    cfg: GenericityConfig,
    tag: str = "em_mu",
    basis_config: BasisConfig = BasisConfig(),
) -> tuple[MultiplicityResult, dict[str, list[MultiplicityResult]]]:
    """The same invariant from the sectional Milnor numbers of X and Z:
    sum over i of binom(l, i) * (mu_i(X) + mu_i(Z)).

    The binomial weight is binom(l, i), l being the Buchsbaum-Rim degree
    parameter d + rank - 1 of the scaled module (rank p+1 on a germ of
    dimension d, so l = d + p).  Checked against the direct construction
    on a plane node (6), a smooth graph surface (7), and the A1 surface
    germ (14); a weight of binom(l-1, i) reproduces none of these.
    """
    if fiber.function is None:
        raise ValueError("em needs a function f")
    seq = sectional_milnor_sequence(fiber, cfg, tag, basis_config)
    l = fiber.ambient_dim
    total = 0
    agree = None
    for i in range(fiber.dim + 1):
        mx = seq["X"][i]
        mz = seq["Z"][i]
        total += math.comb(l, i) * (mx.value + mz.value)
        for part in (mx, mz):
            if part.draws_agreeing:
                agree = (
                    part.draws_agreeing
                    if agree is None
                    else min(agree, part.draws_agreeing)
                )
    result = MultiplicityResult(
        total, agree or 0, cfg.seed_label(tag)
    )
    return result, seq


def polar_multiplicity(
    fiber: FiberGerm,
    i: int,
    cfg: GenericityConfig,
    tag: str = "polar",
    basis_config: BasisConfig = BasisConfig(),
) -> MultiplicityResult:
    """Multiplicity of the codimension-i polar variety of (F; f).

    i = 0 involves no generic data: it is the colength of the ideal of
    maximal minors of the Jacobian of (F; f) together with F itself.  For
    i >= 1 the Jacobian is augmented by i generic linear forms and the germ
    is cut by i more; when the stacked matrix has more rows than columns the
    minor ideal is zero and only the linear slices remain."""
    if fiber.function is None:
        raise ValueError("polar multiplicities need a function f")
    if not 0 <= i <= fiber.dim:
        raise ValueError("polar index out of range")
    ring = fiber.ring
    polys = list(fiber.equations) + [fiber.function]
    size = len(polys)

    if i == 0:
        rows = jacobian_matrix(polys, ring.variables)
        minors = matrix_minors(rows, size)
        gens = list(fiber.equations) + minors
        return MultiplicityResult.deterministic(
            colength(SubmoduleOfFree.ideal(ring, gens), basis_config)
        )

    def sampler(rng):
        rows = jacobian_matrix(polys, ring.variables)
        slices = []
        for _ in range(i):
            coeffs = _random_vector(rng, ring.nvars, cfg.bound)
            rows.append(
                [Polynomial.constant(ring, c) for c in coeffs]
            )
            form_coeffs = _random_vector(rng, ring.nvars, cfg.bound)
            form = Polynomial.constant(ring, 0)
            for c, v in zip(form_coeffs, ring.variables):
                if c:
                    form = form + Polynomial.variable(ring, v) * c
            slices.append(form)
        minors = matrix_minors(rows, size + i)
        gens = list(fiber.equations) + minors + slices
        return colength(SubmoduleOfFree.ideal(ring, gens), basis_config)

    return _stable_min(cfg, f"{tag}:{i}", sampler)
