"""Arcs through the origin and valuation tests against module pullbacks.

An arc assigns to every ambient variable a series in one parameter t with
zero constant term.  Pulling a submodule of a free module back along the arc
gives a matrix over the discrete valuation ring Q[[t]]; row reduction by
valuation pivots brings it to diagonal form t^{n_1}, ..., t^{n_s} while
recording the row transforms.  Membership of a pulled-back section then
reduces to componentwise valuation bounds, which is what the dependence test
checks.  Verdicts are only ever REFUTED on a certified violation and only
CONSISTENT on a certified satisfaction; truncation shortfalls surface as
INCONCLUSIVE and the test retries once at doubled precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .ring import Polynomial, RingSpec
from .basis import SubmoduleOfFree
from .series import INF, Series

DEFAULT_TRUNCATION = 24


class ArcNotOnGerm(ValueError):
    """The arc certifiably fails to satisfy a defining equation."""


@dataclass(frozen=True)
class Arc:
    ring: RingSpec
    components: tuple[Series, ...]
    truncation: int = DEFAULT_TRUNCATION
    name: Optional[str] = None
    parameter: str = "t"

    def __post_init__(self):
        if len(self.components) != self.ring.nvars:
            raise ValueError("arc must assign every variable")
        for var, comp in zip(self.ring.variables, self.components):
            if comp.coefficient(0):
                raise ArcNotOnGerm(
                    f"component for {var} has nonzero constant term"
                )

    def component(self, var: str) -> Series:
        return self.components[self.ring.index(var)]


def pull_back(arc: Arc, poly: Polynomial, precision=None) -> Series:
    """Substitute the arc components into a polynomial of the arc's ring."""
    if poly.ring.variables != arc.ring.variables:
        raise ValueError("polynomial ring does not match arc ring")
    cap = INF if precision is None else precision
    powers: dict[tuple[int, int], Series] = {}

    def var_power(i: int, e: int) -> Series:
        key = (i, e)
        hit = powers.get(key)
        if hit is None:
            hit = arc.components[i].power(e).truncated(cap)
            powers[key] = hit
        return hit

    total = Series.zero()
    for mono, coeff in poly.terms:
        term = Series.constant(coeff)
        for i, e in enumerate(mono):
            if e:
                term = term * var_power(i, e)
        total = total + term
    return total.truncated(cap)


@dataclass
class OrderProfile:
    """Diagonal valuations of a pulled-back module with the row transform.

    orders[i] is the valuation of the i-th diagonal entry; rows beyond
    len(orders) pulled back to (certified or apparent) zero.  transform is
    the recorded row operation matrix U, so membership of a section h is
    read off from U*h.  complete is False when truncation prevented a
    certified pivot choice, in which case verdicts relying on the missing
    rows degrade to INCONCLUSIVE.
    """

    rank: int
    orders: tuple[int, ...]
    transform: list[list[Series]]
    complete: bool
    precision: int
    on_germ_verified: bool
    notes: list[str] = field(default_factory=list)


def pull_back_orders(
    module: SubmoduleOfFree, arc: Arc, precision: Optional[int] = None
) -> OrderProfile:
    prec = arc.truncation if precision is None else precision
    on_germ = True
    for rel in module.ambient_relations:
        # uncapped: arc components are finite series, so the pullback is
        # exact and vanishing is decidable whenever they carry full precision
        s = pull_back(arc, rel)
        val, certified = s.valuation()
        if certified and val is not INF:
            raise ArcNotOnGerm(
                f"defining equation pulls back to t-order {val}, not zero"
            )
        if not certified:
            on_germ = False
    matrix = [
        [pull_back(arc, col[i], prec) for col in module.columns]
        for i in range(module.rank)
    ]
    orders, transform, complete, notes = _valuation_reduce(matrix, prec)
    return OrderProfile(
        rank=module.rank,
        orders=tuple(orders),
        transform=transform,
        complete=complete,
        precision=prec,
        on_germ_verified=on_germ,
        notes=notes,
    )


def _valuation_reduce(matrix, precision):
    """Row reduce over Q[[t]] picking minimal-valuation pivots.

    Returns (orders, U, complete, notes).  U tracks every row operation so
    U*original keeps the recorded diagonal structure.  Stops early, with
    complete=False, if no pivot valuation can be certified against the
    remaining entries' precision bounds.
    """
    rows = len(matrix)
    work = [list(r) for r in matrix]
    transform = [
        [Series.constant(1) if i == j else Series.zero() for j in range(rows)]
        for i in range(rows)
    ]
    cols = list(range(len(matrix[0]) if rows else 0))
    orders: list[int] = []
    notes: list[str] = []
    complete = True

    for step in range(rows):
        if not cols:
            break
        best = None
        bound = INF
        for i in range(step, rows):
            for j in cols:
                val, certified = work[i][j].valuation()
                if certified and val is not INF:
                    if best is None or val < best[0]:
                        best = (val, i, j)
                else:
                    bound = min(bound, val)
        if best is None:
            leftovers = [work[i][j] for i in range(step, rows) for j in cols]
            if not all(s.is_exactly_zero() for s in leftovers):
                complete = False
                notes.append(
                    "remaining entries vanish only up to the truncation order"
                )
            break
        pivot_val, pi, pj = best
        if pivot_val > bound:
            complete = False
            notes.append(
                "pivot choice not certified at precision "
                f"{precision} (entry known only to order >= {bound})"
            )
            break
        if pi != step:
            work[step], work[pi] = work[pi], work[step]
            transform[step], transform[pi] = transform[pi], transform[step]
        pivot = work[step][pj]
        unit_inverse = Series(
            {k - pivot_val: c for k, c in pivot.coeffs.items()},
            pivot.known_to if pivot.known_to is INF else pivot.known_to - pivot_val,
        ).inverse(precision)
        for r in range(step + 1, rows):
            entry = work[r][pj]
            if not entry.coeffs and entry.known_to is INF:
                continue
            shifted = Series(
                {k - pivot_val: c for k, c in entry.coeffs.items() if k >= pivot_val},
                entry.known_to
                if entry.known_to is INF
                else entry.known_to - pivot_val,
            )
            quotient = shifted * unit_inverse
            for j in cols:
                work[r][j] = work[r][j] - quotient * work[step][j]
            for j in range(rows):
                transform[r][j] = transform[r][j] - quotient * transform[step][j]
        orders.append(int(pivot_val))
        cols.remove(pj)
    return orders, transform, complete, notes


@dataclass
class ArcTestResult:
    verdict: str
    orders: tuple[int, ...]
    section_orders: tuple
    required: tuple
    truncation_used: int
    strict: bool
    notes: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "module_orders": [_order_repr(o) for o in self.orders],
            "section_orders": [_order_repr(o) for o in self.section_orders],
            "required_orders": [_order_repr(o) for o in self.required],
            "strict": self.strict,
            "truncation": self.truncation_used,
            "notes": list(self.notes),
        }


def _order_repr(o):
    if o is INF:
        return "INFINITE"
    if o is None:
        return "UNKNOWN"
    return o


def arc_dependence_test(
    section: Union[Polynomial, Sequence[Polynomial]],
    module: SubmoduleOfFree,
    arc: Arc,
    strict: bool = False,
) -> ArcTestResult:
    """Test whether the section pulled back along the arc lies in the pullback
    of the module (strict: in the parameter-maximal-ideal multiple of it).

    REFUTED and CONSISTENT are certified; INCONCLUSIVE means the truncation
    was too short even after one retry at doubled precision.
    """
    result = _dependence_once(section, module, arc, strict, arc.truncation)
    if result.verdict == "INCONCLUSIVE":
        doubled = _dependence_once(
            section, module, arc, strict, 2 * arc.truncation
        )
        doubled.notes.append(
            f"retried at doubled truncation {2 * arc.truncation}"
        )
        return doubled
    return result


def _dependence_once(section, module, arc, strict, precision) -> ArcTestResult:
    if isinstance(section, Polynomial):
        section_vec = [section] + [
            Polynomial.constant(section.ring, 0) for _ in range(module.rank - 1)
        ]
        if module.rank != 1 and not all(
            v.is_zero() for v in section_vec[1:]
        ):  # pragma: no cover - constants above are zero by construction
            raise ValueError("scalar section against higher-rank module")
    else:
        section_vec = list(section)
        if len(section_vec) != module.rank:
            raise ValueError("section length does not match module rank")

    profile = pull_back_orders(module, arc, precision)
    pulled = [pull_back(arc, h, precision) for h in section_vec]
    transformed = [
        _dot_row(profile.transform[i], pulled) for i in range(module.rank)
    ]

    required = []
    for i in range(module.rank):
        if i < len(profile.orders):
            required.append(profile.orders[i] + (1 if strict else 0))
        elif profile.complete:
            required.append(INF)
        else:
            required.append(None)

    notes = list(profile.notes)
    if not profile.on_germ_verified:
        notes.append(
            "arc satisfies the defining equations only up to the truncation order"
        )
    verdict = "CONSISTENT"
    section_orders = []
    for i, w in enumerate(transformed):
        val, certified = w.valuation()
        section_orders.append(val if certified else None)
        need = required[i]
        if w.is_exactly_zero():
            continue
        if need is None:
            verdict = "INCONCLUSIVE"
            notes.append(
                f"component {i}: required order unknown at this truncation"
            )
            break
        if certified and val is not INF and val < need:
            verdict = "REFUTED"
            notes.append(
                f"component {i} has order {val}, below the required "
                f"{_order_repr(need)}"
            )
            break
        if need is INF:
            if certified and val is not INF:
                verdict = "REFUTED"
                notes.append(
                    f"component {i} has order {val} but the module pulls back "
                    "to zero there"
                )
            else:
                verdict = "INCONCLUSIVE"
                notes.append(
                    f"component {i} must vanish identically but is only known "
                    f"to order >= {val}"
                )
            break
        # val may be an uncertified lower bound; enough iff it clears need
        if val < need:
            verdict = "INCONCLUSIVE"
            notes.append(
                f"component {i} known only to order >= {val}, need {need}"
            )
            break
    return ArcTestResult(
        verdict=verdict,
        orders=profile.orders,
        section_orders=tuple(section_orders),
        required=tuple(required),
        truncation_used=precision,
        strict=strict,
        notes=notes,
    )


def _dot_row(urow: Sequence[Series], vec: Sequence[Series]) -> Series:
    total = Series.zero()
    for u, v in zip(urow, vec):
        total = total + u * v
    return total
