"""Families of complete intersection germs and the text format they load from.

A family file declares fiber variables, parameters, the tuple F cutting the
family X out of (fiber x parameter)-space, an optional function f vanishing
on the parameter axis, named arcs, a chain of functions for iterated Milnor
reports, and optionally named ideals and elements for raw dependence tests.

The parameter axis Y = {fiber vars = 0} is expected to lie in X; files where
some F_i fails that are still loaded (the singular locus may genuinely move)
but carry the param_axis_off_variety flag, and every computation that needs
Y inside X refuses to run on them.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arcs import Arc, DEFAULT_TRUNCATION
from .basis import SubmoduleOfFree
from .ring import ParseError, Polynomial, RingSpec, Scalar
from .series import Series

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class FamilyShapeError(ValueError):
    """The family violates a structural requirement of the computation."""


class JacobianKind(enum.Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"
    PARAM = "param"
    AUGMENTED = "augmented"
    AUGMENTED_RELATIVE = "augmented_relative"
    AUGMENTED_PARAM = "augmented_param"

    @property
    def augmented(self) -> bool:
        return self in (
            JacobianKind.AUGMENTED,
            JacobianKind.AUGMENTED_RELATIVE,
            JacobianKind.AUGMENTED_PARAM,
        )


@dataclass(frozen=True)
class FiberGerm:
    """One member of the family: the parameters are fixed scalars."""

    ring: RingSpec
    equations: tuple[Polynomial, ...]
    function: Optional[Polynomial]
    point: tuple[Fraction, ...]

    @property
    def ambient_dim(self) -> int:
        return self.ring.nvars

    @property
    def codim(self) -> int:
        return len(self.equations)

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.codim


@dataclass(frozen=True)
class GermFamily:
    ring: RingSpec
    fiber_variables: tuple[str, ...]
    parameters: tuple[str, ...]
    equations: tuple[Polynomial, ...]
    function: Optional[Polynomial]
    arcs: dict[str, Arc] = field(default_factory=dict)
    chain: tuple[Polynomial, ...] = ()
    ideals: dict[str, tuple[Polynomial, ...]] = field(default_factory=dict)
    elements: dict[str, Polynomial] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()
    source_path: Optional[str] = None

    @property
    def fiber_ring(self) -> RingSpec:
        return RingSpec(self.fiber_variables)

    @property
    def codim(self) -> int:
        return len(self.equations)

    @property
    def fiber_dim(self) -> int:
        return len(self.fiber_variables) - len(self.equations)

    @property
    def param_count(self) -> int:
        return len(self.parameters)

    def specialize(self, point: Sequence[Scalar]) -> FiberGerm:
        if len(point) != len(self.parameters):
            raise ValueError(
                f"expected {len(self.parameters)} parameter values, "
                f"got {len(point)}"
            )
        target = self.fiber_ring
        images = {
            name: Fraction(v) for name, v in zip(self.parameters, point)
        }
        eqs = tuple(g.substitute(target, images) for g in self.equations)
        fn = (
            self.function.substitute(target, images)
            if self.function is not None
            else None
        )
        return FiberGerm(
            ring=target,
            equations=eqs,
            function=fn,
            point=tuple(Fraction(v) for v in point),
        )

    def require_param_axis_on_variety(self, what: str):
        if "param_axis_off_variety" in self.warnings:
            raise FamilyShapeError(
                f"{what} needs the parameter axis inside the variety, but a "
                "defining equation has a pure-parameter term"
            )


def jacobian_matrix(
    polys: Sequence[Polynomial], variables: Sequence[str]
) -> list[list[Polynomial]]:
    return [[g.derivative(v) for v in variables] for g in polys]


def jacobian_module(
    source: Union[GermFamily, FiberGerm], kind: JacobianKind
) -> SubmoduleOfFree:
    """Columns are the partial derivative vectors; relations are the defining
    equations, so the module lives over the germ of the variety (augmented
    kinds still use only F as relations: the module sits over X, not V(f))."""
    if isinstance(source, FiberGerm):
        if kind in (JacobianKind.PARAM, JacobianKind.AUGMENTED_PARAM):
            raise ValueError("a fiber germ has no parameters to derive by")
        polys = list(source.equations)
        if kind.augmented:
            if source.function is None:
                raise FamilyShapeError("no function f declared in this germ")
            polys.append(source.function)
        if not polys:
            raise FamilyShapeError("no equations to build a Jacobian from")
        rows = jacobian_matrix(polys, source.ring.variables)
        return SubmoduleOfFree.from_matrix(
            source.ring, rows, relations=source.equations
        )
    family = source
    polys = list(family.equations)
    if kind.augmented:
        if family.function is None:
            raise FamilyShapeError("no function f declared in this family")
        polys.append(family.function)
    if not polys:
        raise FamilyShapeError("no equations to build a Jacobian from")
    if kind in (JacobianKind.RELATIVE, JacobianKind.AUGMENTED_RELATIVE):
        variables: Sequence[str] = family.fiber_variables
    elif kind in (JacobianKind.PARAM, JacobianKind.AUGMENTED_PARAM):
        variables = family.parameters
    else:
        variables = family.ring.variables
    rows = jacobian_matrix(polys, variables)
    return SubmoduleOfFree.from_matrix(
        family.ring, rows, relations=family.equations
    )


def apply_retraction(
    family: GermFamily, twist: Sequence[Sequence[int]]
) -> GermFamily:
    """Precompose with the retraction r(z, y) = y - A*z by substituting
    y_j -> y_j + (A*z)_j.  The fiber of r over y0 is then the plain fiber of
    the twisted family, and Y stays inside the twisted variety."""
    if len(twist) != len(family.parameters):
        raise ValueError("one twist row per parameter required")
    images: dict[str, Polynomial] = {}
    for j, name in enumerate(family.parameters):
        row = twist[j]
        if len(row) != len(family.fiber_variables):
            raise ValueError("one twist coefficient per fiber variable required")
        img = Polynomial.variable(family.ring, name)
        for c, var in zip(row, family.fiber_variables):
            if c:
                img = img + Polynomial.variable(family.ring, var) * c
        images[name] = img
    eqs = tuple(g.substitute(family.ring, images) for g in family.equations)
    fn = (
        family.function.substitute(family.ring, images)
        if family.function is not None
        else None
    )
    return GermFamily(
        ring=family.ring,
        fiber_variables=family.fiber_variables,
        parameters=family.parameters,
        equations=eqs,
        function=fn,
        warnings=family.warnings,
        source_path=family.source_path,
    )


def restrict_to_line(
    family: GermFamily, direction: Sequence[int], parameter: str = "tau"
) -> GermFamily:
    """Replace an m-parameter family by its restriction to a line through 0."""
    if len(direction) != len(family.parameters):
        raise ValueError("one direction coefficient per parameter required")
    if all(c == 0 for c in direction):
        raise ValueError("direction must be nonzero")
    name = parameter
    while name in family.ring:
        name = "_" + name
    target = RingSpec(tuple(family.fiber_variables) + (name,))
    tau = Polynomial.variable(target, name)
    images: dict[str, Union[Polynomial, Scalar]] = {
        p: tau * c for p, c in zip(family.parameters, direction)
    }
    eqs = tuple(g.substitute(target, images) for g in family.equations)
    fn = (
        family.function.substitute(target, images)
        if family.function is not None
        else None
    )
    chain = tuple(g.substitute(target, images) for g in family.chain)
    return GermFamily(
        ring=target,
        fiber_variables=family.fiber_variables,
        parameters=(name,),
        equations=eqs,
        function=fn,
        chain=chain,
        warnings=family.warnings,
        source_path=family.source_path,
    )


# -- the text format ----------------------------------------------------------


def load_family(path, truncation: int = DEFAULT_TRUNCATION) -> GermFamily:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_family(text, source_path=str(path), truncation=truncation)


def parse_family(
    text: str,
    source_path: Optional[str] = None,
    truncation: int = DEFAULT_TRUNCATION,
) -> GermFamily:
    lines = text.split("\n")
    fiber_vars: Optional[tuple[str, ...]] = None
    params: tuple[str, ...] = ()
    ring: Optional[RingSpec] = None
    equations: Optional[list[Polynomial]] = None
    function: Optional[Polynomial] = None
    function_line = 0
    chain: Optional[list[Polynomial]] = None
    ideals: dict[str, tuple[Polynomial, ...]] = {}
    elements: dict[str, Polynomial] = {}
    arc_blocks: list[tuple[str, int, list[tuple[int, int, str]]]] = []

    def strip_comment(raw: str) -> str:
        cut = raw.find("#")
        return raw if cut < 0 else raw[:cut]

    def need_ring(lineno: int) -> RingSpec:
        if ring is None:
            raise ParseError("vars must be declared first", lineno, 1)
        return ring

    i = 0
    while i < len(lines):
        lineno = i + 1
        line = strip_comment(lines[i])
        i += 1
        if not line.strip():
            continue
        head, colon, payload = line.partition(":")
        keyword = head.strip()
        col0 = len(head) + 2
        if keyword == "vars" and colon:
            if fiber_vars is not None:
                raise ParseError("duplicate vars line", lineno, 1)
            fiber_vars = _parse_names(payload, lineno, col0)
            if not fiber_vars:
                raise ParseError("vars line declares no variables", lineno, col0)
            ring = _combine_names(fiber_vars, params, lineno, col0)
        elif keyword == "params" and colon:
            if params:
                raise ParseError("duplicate params line", lineno, 1)
            params = _parse_names(payload, lineno, col0)
            if fiber_vars is not None:
                ring = _combine_names(fiber_vars, params, lineno, col0)
        elif keyword == "F" and colon:
            if equations is not None:
                raise ParseError("duplicate F line", lineno, 1)
            equations = _parse_poly_list(payload, need_ring(lineno), lineno, col0)
        elif keyword == "f" and colon:
            if function is not None:
                raise ParseError("duplicate f line", lineno, 1)
            chunks = _parse_poly_list(payload, need_ring(lineno), lineno, col0)
            if len(chunks) != 1:
                raise ParseError("f line must hold a single polynomial", lineno, col0)
            function = chunks[0]
            function_line = lineno
        elif keyword == "chain" and colon:
            if chain is not None:
                raise ParseError("duplicate chain line", lineno, 1)
            chain = _parse_poly_list(payload, need_ring(lineno), lineno, col0)
        elif keyword.startswith("ideal ") and colon:
            name = keyword[len("ideal "):].strip()
            _check_name(name, lineno)
            if name in ideals:
                raise ParseError(f"duplicate ideal {name}", lineno, 1)
            ideals[name] = tuple(
                _parse_poly_list(payload, need_ring(lineno), lineno, col0)
            )
        elif keyword.startswith("element ") and colon:
            name = keyword[len("element "):].strip()
            _check_name(name, lineno)
            if name in elements:
                raise ParseError(f"duplicate element {name}", lineno, 1)
            chunks = _parse_poly_list(payload, need_ring(lineno), lineno, col0)
            if len(chunks) != 1:
                raise ParseError(
                    "element line must hold a single polynomial", lineno, col0
                )
            elements[name] = chunks[0]
        elif line.lstrip().startswith("arc "):
            name, body, i = _collect_arc_block(lines, i - 1, strip_comment)
            _check_name(name, lineno)
            if any(name == existing for existing, _, _ in arc_blocks):
                raise ParseError(f"duplicate arc {name}", lineno, 1)
            arc_blocks.append((name, lineno, body))
        else:
            raise ParseError(
                "expected one of vars:, params:, F:, f:, chain:, "
                "ideal NAME:, element NAME:, arc NAME { ... }",
                lineno,
                1,
            )

    if fiber_vars is None or ring is None:
        raise ParseError("missing vars line", len(lines), 1)
    if equations is None:
        equations = []

    for g in equations:
        if g.constant_term():
            raise ParseError(
                "defining equation has a nonzero constant term", 1, 1
            )
    warnings: list[str] = []
    zero_fiber = {v: 0 for v in fiber_vars}
    if any(
        not g.substitute(ring, zero_fiber).is_zero() for g in equations
    ):
        warnings.append("param_axis_off_variety")
    if function is not None:
        if not function.substitute(ring, zero_fiber).is_zero():
            raise FamilyShapeError(
                "f must vanish on the parameter axis "
                f"(line {function_line})"
            )

    arc_parameter = _pick_arc_parameter(ring)
    arcs: dict[str, Arc] = {}
    for name, lineno, body in arc_blocks:
        arcs[name] = _build_arc(
            name, body, ring, arc_parameter, truncation, lineno
        )

    return GermFamily(
        ring=ring,
        fiber_variables=fiber_vars,
        parameters=params,
        equations=tuple(equations),
        function=function,
        arcs=arcs,
        chain=tuple(chain or ()),
        ideals=ideals,
        elements=elements,
        warnings=tuple(warnings),
        source_path=source_path,
    )


def _combine_names(fiber_vars, params, lineno, col0) -> RingSpec:
    try:
        return RingSpec(fiber_vars + params)
    except ValueError as exc:
        raise ParseError(str(exc), lineno, col0) from None


def _parse_names(payload: str, lineno: int, col0: int) -> tuple[str, ...]:
    names = payload.split()
    seen = set()
    for n in names:
        if not _IDENT.match(n):
            raise ParseError(f"invalid name {n!r}", lineno, col0)
        if n in seen:
            raise ParseError(f"repeated name {n!r}", lineno, col0)
        seen.add(n)
    return tuple(names)


def _check_name(name: str, lineno: int):
    if not _IDENT.match(name):
        raise ParseError(f"invalid name {name!r}", lineno, 1)


def _parse_poly_list(
    payload: str, ring: RingSpec, lineno: int, col0: int
) -> list[Polynomial]:
    from .ring import parse_polynomial

    polys = []
    offset = 0
    for chunk in payload.split(";"):
        if not chunk.strip():
            raise ParseError("empty polynomial in list", lineno, col0 + offset)
        polys.append(
            parse_polynomial(chunk, ring, line=lineno, column=col0 + offset)
        )
        offset += len(chunk) + 1
    return polys


def _collect_arc_block(lines, start, strip_comment):
    """Gather `arc NAME { ... }`, possibly spanning lines.  Returns the name,
    the positioned interior chunks, and the index after the block."""
    first = strip_comment(lines[start])
    lineno = start + 1
    m = re.match(r"\s*arc\s+([A-Za-z][A-Za-z0-9_]*)\s*\{", first)
    if not m:
        raise ParseError("malformed arc header, expected arc NAME {", lineno, 1)
    name = m.group(1)
    chunks: list[tuple[int, int, str]] = []
    text = first
    pos = m.end()
    idx = start
    while True:
        close = text.find("}", pos)
        if close >= 0:
            chunks.append((idx + 1, pos + 1, text[pos:close]))
            trailing = text[close + 1:].strip()
            if trailing:
                raise ParseError(
                    "unexpected text after closing brace", idx + 1, close + 2
                )
            return name, chunks, idx + 1
        chunks.append((idx + 1, pos + 1, text[pos:]))
        idx += 1
        if idx >= len(lines):
            raise ParseError(f"arc {name} is missing a closing brace", lineno, 1)
        text = strip_comment(lines[idx])
        pos = 0


def _split_positioned(chunks, separator=","):
    """Split positioned text chunks on a separator at paren depth zero."""
    parts: list[list[tuple[int, int, str]]] = [[]]
    depth = 0
    for lineno, col0, text in chunks:
        piece_start = 0
        for k, ch in enumerate(text):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == separator and depth == 0:
                parts[-1].append((lineno, col0 + piece_start, text[piece_start:k]))
                parts.append([])
                piece_start = k + 1
        parts[-1].append((lineno, col0 + piece_start, text[piece_start:]))
    return parts


def _pick_arc_parameter(ring: RingSpec) -> str:
    for candidate in ("t", "u"):
        if candidate not in ring:
            return candidate
    raise FamilyShapeError(
        "both t and u are taken; no name left for the arc parameter"
    )


def _build_arc(name, chunks, ring, parameter, truncation, header_line) -> Arc:
    from .ring import parse_polynomial

    arc_ring = RingSpec((parameter,))
    components: dict[str, Series] = {}
    for part in _split_positioned(chunks):
        text = "".join(piece for _, _, piece in part)
        if not text.strip():
            if len(part) == 1 and not components:
                raise ParseError(f"arc {name} is empty", header_line, 1)
            continue
        lineno, col0, _ = next(p for p in part if p[2].strip())
        m = re.match(r"\s*([A-Za-z][A-Za-z0-9_]*)\s*=", text)
        if not m:
            raise ParseError(
                f"arc component must look like name = series", lineno, col0
            )
        var = m.group(1)
        if var not in ring:
            raise ParseError(
                f"arc assigns unknown variable {var!r}", lineno, col0
            )
        if var in components:
            raise ParseError(
                f"arc assigns {var!r} twice", lineno, col0
            )
        rhs = text[m.end():]
        poly = parse_polynomial(rhs, arc_ring, line=lineno, column=col0 + m.end())
        if poly.constant_term():
            raise ParseError(
                f"arc component for {var!r} must vanish at {parameter} = 0",
                lineno,
                col0,
            )
        components[var] = Series(
            {mono[0]: coeff for mono, coeff in poly.terms}
        )
    full = tuple(
        components.get(v, Series.zero()) for v in ring.variables
    )
    return Arc(
        ring=ring,
        components=full,
        truncation=truncation,
        name=name,
        parameter=parameter,
    )
