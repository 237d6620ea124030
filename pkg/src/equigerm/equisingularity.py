"""Constancy certificates across a family of germs.

Each checker evaluates one numerical invariant at the origin of the
parameter space and at finitely many nonzero sample points, then compares.
The certification standard: the invariants here are upper semicontinuous,
so their generic value is the minimum; equality between the origin and at
least two independent nonzero samples certifies constancy near 0.  Sampling
can never prove a strict inequality wrong, so a witnessed drop at a sample
is reported as NOT_CONSTANT, errors and disagreeing samples as INCONCLUSIVE.

The checkers never collapse their dual routes: A_f computes e(r, y) both as
a Fitting-ideal colength and as a sum of two Milnor numbers, W_f computes
em both from the scaled module and from the sectional Milnor sums.  A
mismatch between routes is an internal error, never a verdict.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .basis import (
    INFINITE,
    BasisConfig,
    ResourceLimitExceeded,
    SubmoduleOfFree,
    colength,
    matrix_minors,
)
from .family import (
    FamilyShapeError,
    FiberGerm,
    GermFamily,
    JacobianKind,
    apply_retraction,
    jacobian_matrix,
    jacobian_module,
)
from .invariants import (
    GenericityConfig,
    GenericityUnstable,
    InternalConsistencyError,
    NotICIS,
    Value,
    associated_multiplicities,
    cosupport_summed_associated,
    em_invariant,
    em_via_milnor,
    milnor_icis,
)
from .ring import Polynomial


_RECOVERABLE = (
    NotICIS,
    GenericityUnstable,
    ResourceLimitExceeded,
    FamilyShapeError,
)


@dataclass(frozen=True)
class CheckConfig:
    """Sampling plan shared by the checkers.

    sample_points are nonzero parameter values tried verbatim; when fewer
    than sample_count are given, small random rationals fill the gap.  The
    origin is always evaluated in addition.  retraction_draws counts the
    linear retractions tried by the A_f checker (the first is always the
    canonical one).
    """

    sample_points: tuple = (Fraction(1), Fraction(-2))
    sample_count: int = 2
    retraction_draws: int = 3
    genericity: GenericityConfig = GenericityConfig()
    basis_config: BasisConfig = BasisConfig(order="local")

    def __post_init__(self):
        if self.sample_count < 2:
            raise ValueError("at least two sample points are required")
        if self.retraction_draws < 1:
            raise ValueError("at least one retraction is required")
        for q in self.sample_points:
            if Fraction(q) == 0:
                raise ValueError("sample points must be nonzero")

    def points(self, tag: str) -> list:
        pts = [Fraction(q) for q in self.sample_points]
        rng = self.genericity.rng(f"{tag}:samples")
        while len(pts) < self.sample_count:
            q = Fraction(
                rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4)
            )
            if q and q not in pts:
                pts.append(q)
        return pts[: max(self.sample_count, len(self.sample_points))]


@dataclass
class SampleValue:
    """One evaluated point: either a value or an error annotation."""

    point: Fraction
    value: object = None
    error: Optional[str] = None

    def defined(self) -> bool:
        return self.error is None


def _encode_value(v):
    if v is INFINITE:
        return "INFINITE"
    if isinstance(v, (tuple, list)):
        return [_encode_value(x) for x in v]
    return v


def _encode_sample(sv: SampleValue) -> dict:
    if sv.error is not None:
        return {"point": str(sv.point), "error": sv.error}
    return {"point": str(sv.point), "value": _encode_value(sv.value)}


@dataclass
class ConstancyReport:
    invariant: str
    at_origin: SampleValue
    samples: list
    verdict: str
    seed: str
    notes: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        if self.at_origin.error is not None:
            origin = {"error": self.at_origin.error}
        else:
            origin = _encode_value(self.at_origin.value)
        return {
            "invariant": self.invariant,
            "at_origin": origin,
            "samples": [_encode_sample(s) for s in self.samples],
            "verdict": self.verdict,
            "seed": self.seed,
            "notes": list(self.notes),
        }


def _ge(a, b) -> bool:
    """Semicontinuity comparison: a at the origin, b at a sample."""
    if isinstance(a, (tuple, list)):
        return all(_ge(x, y) for x, y in zip(a, b))
    if a is INFINITE:
        return True
    if b is INFINITE:
        return False
    return a >= b


def _assemble(
    invariant: str,
    origin: SampleValue,
    samples: Sequence[SampleValue],
    seed: str,
    notes: list,
    semicontinuous: bool = True,
) -> ConstancyReport:
    """Verdict from the evaluated points, with the semicontinuity audit.

    A sample strictly above the origin value contradicts upper
    semicontinuity and means the computation itself is broken, so it raises
    instead of reporting."""
    if semicontinuous and origin.defined():
        for s in samples:
            if s.defined() and not _ge(origin.value, s.value):
                raise InternalConsistencyError(
                    f"{invariant}: value at sample {s.point} exceeds the "
                    f"origin value ({s.value!r} > {origin.value!r})"
                )
    if not origin.defined() or any(not s.defined() for s in samples):
        verdict = "INCONCLUSIVE"
    else:
        generic = samples[0].value
        if any(s.value != generic for s in samples[1:]):
            verdict = "INCONCLUSIVE"
            notes = list(notes) + [
                "sample values disagree with each other; no generic value "
                "is witnessed"
            ]
        elif origin.value == generic:
            verdict = "CERTIFIED"
        else:
            verdict = "NOT_CONSTANT"
    return ConstancyReport(
        invariant=invariant,
        at_origin=origin,
        samples=list(samples),
        verdict=verdict,
        seed=seed,
        notes=list(notes),
    )


def _direction(family: GermFamily, cfg: CheckConfig, tag: str) -> tuple:
    """Scaling vector realizing sample points as points of parameter space.

    One parameter: samples used verbatim.  Several: a random integer line
    through 0, so the m > 1 theorems reduce to the one-parameter procedure
    along a generic line."""
    m = len(family.parameters)
    if m <= 1:
        return (1,) * m
    rng = cfg.genericity.rng(f"{tag}:direction")
    while True:
        v = tuple(rng.randint(-9, 9) for _ in range(m))
        if any(v):
            return v


def _fiber_at(
    family: GermFamily, direction: tuple, s: Fraction
) -> FiberGerm:
    return family.specialize([s * c for c in direction])


# -- Whitney's condition A ------------------------------------------------------


def check_whitney_a(
    family: GermFamily, cfg: CheckConfig = CheckConfig()
) -> ConstancyReport:
    """Constancy of the associated multiplicities e^0..e^(p-1) of the fiber
    Jacobian module.

    Constant e^j certify Whitney's condition A along the parameter axis.
    The criterion is sufficient only, so NOT_CONSTANT draws no negative
    conclusion; the notes say so.  At the origin the multiplicities are the
    local ones; at a nonzero sample the fiber's singular points move away
    from the origin (and may split), so the sample value sums the local
    multiplicities over the whole cosupport of the specialized module.
    """
    if not family.equations:
        raise FamilyShapeError(
            "the Whitney criterion needs at least one defining equation"
        )
    gcfg = cfg.genericity
    direction = _direction(family, cfg, "whitney")
    points = cfg.points("whitney")

    origin_fiber = _fiber_at(family, direction, Fraction(0))
    origin = SampleValue(Fraction(0))
    try:
        results = associated_multiplicities(
            jacobian_module(origin_fiber, JacobianKind.ABSOLUTE),
            origin_fiber.dim,
            gcfg,
            tag="whitney:origin",
            basis_config=cfg.basis_config,
        )
        origin.value = tuple(r.value for r in results)
    except _RECOVERABLE as exc:
        origin.error = f"{type(exc).__name__}: {exc}"

    samples = []
    for s in points:
        sv = SampleValue(s)
        try:
            fiber = _fiber_at(family, direction, s)
            results = cosupport_summed_associated(
                fiber,
                gcfg,
                tag=f"whitney:sample:{s}",
                basis_config=cfg.basis_config,
            )
            sv.value = tuple(r.value for r in results)
        except _RECOVERABLE as exc:
            sv.error = f"{type(exc).__name__}: {exc}"
        samples.append(sv)

    notes = [
        "values are (e^0, ..., e^(p-1)) of the fiber Jacobian module; "
        "sample values sum local multiplicities over the cosupport of the "
        "specialized fiber",
        "constant associated multiplicities are a sufficient criterion for "
        "Whitney's condition A; NOT_CONSTANT does not certify failure",
    ]
    if direction != (1,) * len(family.parameters):
        notes.append(f"parameters sampled along the line {direction}")
    return _assemble(
        "associated multiplicities e^j",
        origin,
        samples,
        gcfg.seed_label("whitney"),
        notes,
    )


# -- Thom's condition A_f ---------------------------------------------------------


def le_greuel_colength(
    prefix: Sequence[Polynomial],
    last: Polynomial,
    basis_config: BasisConfig = BasisConfig(),
) -> Value:
    """Colength of (prefix) + (maximal minors of the Jacobian of
    (prefix, last)), the zeroth Fitting ideal of the relative augmented
    module of the pair.  Deterministic: no generic choices."""
    ring = last.ring
    polys = list(prefix) + [last]
    rows = jacobian_matrix(polys, ring.variables)
    minors = matrix_minors(rows, len(polys))
    gens = list(prefix) + minors
    return colength(SubmoduleOfFree.ideal(ring, gens), basis_config)


def _af_single(fiber: FiberGerm, gcfg, tag, basis_config):
    """e(r, y) for one retraction fiber, by both routes."""
    route_fitting = le_greuel_colength(
        fiber.equations, fiber.function, basis_config
    )
    if route_fitting is INFINITE:
        raise NotICIS(
            "the augmented Fitting ideal is not finite on this fiber"
        )
    mu_x = milnor_icis(
        list(fiber.equations), gcfg, f"{tag}:X", basis_config
    ).value
    mu_z = milnor_icis(
        list(fiber.equations) + [fiber.function],
        gcfg,
        f"{tag}:Z",
        basis_config,
    ).value
    if route_fitting != mu_x + mu_z:
        raise InternalConsistencyError(
            f"e(r, y) routes disagree: Fitting colength {route_fitting} vs "
            f"Milnor sum {mu_x} + {mu_z}"
        )
    return route_fitting


def check_af(
    family: GermFamily, cfg: CheckConfig = CheckConfig()
) -> ConstancyReport:
    """Constancy of e(r, y) over sampled linear retractions r.

    For each retraction (the canonical one first, then random integer
    twists), e(r, y) is computed on the retraction fiber both as the
    colength of the Fitting ideal of the relative augmented module and as
    mu(X(y) cut by the fiber) + mu(Z(y) cut by the fiber); the two must
    agree exactly.  Values are per-retraction tuples and constancy is
    required for every retraction.
    """
    if family.function is None:
        raise FamilyShapeError("the A_f criterion needs a function f")
    family.require_param_axis_on_variety("the A_f criterion")
    gcfg = cfg.genericity
    direction = _direction(family, cfg, "af")
    points = cfg.points("af")
    nvars = len(family.fiber_variables)
    nparams = len(family.parameters)

    rng = gcfg.rng("af:retractions")
    twists = [[[0] * nvars for _ in range(nparams)]]
    while len(twists) < cfg.retraction_draws:
        twists.append(
            [[rng.randint(-9, 9) for _ in range(nvars)] for _ in range(nparams)]
        )
    twisted = [apply_retraction(family, t) for t in twists]

    def evaluate(s: Fraction) -> SampleValue:
        sv = SampleValue(s)
        values = []
        for k, fam in enumerate(twisted):
            try:
                fiber = _fiber_at(fam, direction, s)
                values.append(
                    _af_single(
                        fiber, gcfg, f"af:r{k}:{s}", cfg.basis_config
                    )
                )
            except _RECOVERABLE as exc:
                sv.error = (
                    f"retraction {k}: {type(exc).__name__}: {exc}"
                )
                return sv
        sv.value = tuple(values)
        return sv

    origin = evaluate(Fraction(0))
    samples = [evaluate(s) for s in points]

    notes = [
        "values are e(r, y) per retraction, canonical retraction first; "
        "each was computed both as the augmented Fitting-ideal colength "
        "and as the sum of the two fiber Milnor numbers, and the routes "
        "agree on every run",
        "the theorem's hypothesis is constancy for every linear retraction; "
        "certifying from finitely many rests on the single-retraction "
        "sufficiency result for families of isolated complete intersection "
        "germs, whose Whitney-A hypothesis on (Z - Y, Y) is not checked "
        "here",
    ]
    return _assemble(
        "Thom A_f multiplicity e(r, y)",
        origin,
        samples,
        gcfg.seed_label("af"),
        notes,
    )


# -- the W_f condition -----------------------------------------------------------


def check_wf(
    family: GermFamily, cfg: CheckConfig = CheckConfig()
) -> ConstancyReport:
    """Constancy of em(y), the multiplicity of the maximal-ideal multiple of
    the augmented Jacobian module of the fiber.

    em is evaluated by its direct construction and through the sectional
    Milnor sums; a mismatch is an internal error.  Constant em certifies
    W_f (and with it both absolute Whitney conditions for X - Y and Z - Y);
    because the criterion is an equivalence, NOT_CONSTANT certifies that
    W_f fails, and the notes say so.  The per-index Milnor sequences are
    reported, and their componentwise constancy must match the em verdict.
    """
    if family.function is None:
        raise FamilyShapeError("the W_f criterion needs a function f")
    family.require_param_axis_on_variety("the W_f criterion")
    gcfg = cfg.genericity
    direction = _direction(family, cfg, "wf")
    points = cfg.points("wf")

    sequences: dict = {}

    def evaluate(s: Fraction) -> SampleValue:
        sv = SampleValue(s)
        try:
            fiber = _fiber_at(family, direction, s)
            direct = em_invariant(
                fiber, gcfg, f"wf:em:{s}", cfg.basis_config
            )
            from_mu, seq = em_via_milnor(
                fiber, gcfg, f"wf:emmu:{s}", cfg.basis_config
            )
            if direct.value != from_mu.value:
                raise InternalConsistencyError(
                    f"em routes disagree at y = {s}: direct "
                    f"{direct.value} vs sectional {from_mu.value}"
                )
            sequences[s] = {
                side: tuple(r.value for r in seq[side]) for side in seq
            }
            sv.value = direct.value
        except _RECOVERABLE as exc:
            sv.error = f"{type(exc).__name__}: {exc}"
        return sv

    origin = evaluate(Fraction(0))
    samples = [evaluate(s) for s in points]

    notes = [
        "em was computed both from the scaled augmented module and from "
        "the sectional Milnor sums; the routes agree on every run",
        "constant em is equivalent to W_f for the pair (X - Y, Y) with f; "
        "NOT_CONSTANT certifies failure, not mere inconclusiveness",
    ]
    for s in [Fraction(0)] + points:
        if s in sequences:
            mus = sequences[s]
            notes.append(
                f"mu_i at y = {s}: X {mus['X']}, Z {mus['Z']}"
            )

    report = _assemble(
        "W_f multiplicity em(y)",
        origin,
        samples,
        gcfg.seed_label("wf"),
        notes,
    )

    # em is a positively weighted sum of the mu_i, each upper semicontinuous,
    # so em constancy and componentwise mu_i constancy must coincide.
    defined = [s for s in [Fraction(0)] + points if s in sequences]
    if origin.defined() and len(defined) == 1 + len(points):
        base = sequences[Fraction(0)]
        mus_constant = all(sequences[s] == base for s in defined)
        if mus_constant != (report.verdict == "CERTIFIED"):
            raise InternalConsistencyError(
                "sectional Milnor constancy disagrees with em constancy"
            )
    return report


# -- Milnor reports along a chain --------------------------------------------------


def chain_milnor_report(
    family: GermFamily, cfg: CheckConfig = CheckConfig()
) -> list:
    """Per-level constancy reports along the declared chain.

    Level k compares, across the parameter samples, the colength of the
    Fitting ideal of the relative augmented module of (first k functions;
    next one).  That colength equals the sum of the Milnor numbers of the
    two adjacent intersections; the identity is asserted exactly on every
    run and a violation raises instead of reporting.
    """
    if not family.chain:
        raise FamilyShapeError("no chain declared in this family")
    gcfg = cfg.genericity
    direction = _direction(family, cfg, "chain")
    points = cfg.points("chain")
    target = family.fiber_ring

    reports = []
    for level in range(len(family.chain)):

        def evaluate(s: Fraction) -> SampleValue:
            sv = SampleValue(s)
            values = {
                name: Fraction(s) * c
                for name, c in zip(family.parameters, direction)
            }
            try:
                specialized = [
                    g.substitute(target, values)
                    for g in family.chain[: level + 1]
                ]
                for g in specialized:
                    if g.constant_term():
                        raise FamilyShapeError(
                            "chain level does not pass through the origin "
                            f"at parameter {s}"
                        )
                prefix, last = specialized[:-1], specialized[-1]
                cl = le_greuel_colength(prefix, last, cfg.basis_config)
                if cl is INFINITE:
                    raise NotICIS(
                        f"chain level {level} has a non-finite Fitting "
                        "ideal"
                    )
                mu_top = milnor_icis(
                    prefix, gcfg, f"chain:{level}:top:{s}", cfg.basis_config
                ).value
                mu_bottom = milnor_icis(
                    specialized,
                    gcfg,
                    f"chain:{level}:bottom:{s}",
                    cfg.basis_config,
                ).value
                if cl != mu_top + mu_bottom:
                    raise InternalConsistencyError(
                        f"chain level {level} at y = {s}: colength {cl} "
                        f"is not the Milnor sum {mu_top} + {mu_bottom}"
                    )
                sv.value = cl
            except _RECOVERABLE as exc:
                sv.error = f"{type(exc).__name__}: {exc}"
            return sv

        origin = evaluate(Fraction(0))
        samples = [evaluate(s) for s in points]
        reports.append(
            _assemble(
                f"chain level {level} Milnor sum",
                origin,
                samples,
                gcfg.seed_label(f"chain:{level}"),
                [
                    "the value is the colength of the level's augmented "
                    "Fitting ideal, equal on every run to the sum of the "
                    "Milnor numbers of the two adjacent intersections",
                ],
            )
        )
    return reports
