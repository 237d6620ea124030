"""Command-line front end.

Subcommands parse a germ-family file, dispatch the requested computation,
and emit a human-readable summary plus an optional JSON report.  Every
source of nondeterminism (genericity seed, sample points, draw counts, arc
truncation, retraction count, coefficient field) is surfaced as a flag, so
identical invocations produce byte-identical JSON.

Exit codes: 0 for CERTIFIED / CONSISTENT / a clean computation, 1 for
NOT_CONSTANT / REFUTED, 2 for INCONCLUSIVE or a computation error, 64 for
usage errors, 65 for files that do not parse.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .arcs import Arc, ArcNotOnGerm, arc_dependence_test, pull_back_orders
from .basis import BasisConfig, SubmoduleOfFree
from .equisingularity import (
    CheckConfig,
    ConstancyReport,
    chain_milnor_report,
    check_af,
    check_wf,
    check_whitney_a,
)
from .family import FamilyShapeError, GermFamily, JacobianKind, jacobian_module, load_family
from .invariants import (
    GenericityConfig,
    GenericityUnstable,
    NotICIS,
    associated_multiplicities,
    em_invariant,
    em_via_milnor,
    milnor_icis,
    segre_numbers,
)
from .basis import ResourceLimitExceeded
from .ring import ParseError

EX_OK = 0
EX_NOT_CONSTANT = 1
EX_INCONCLUSIVE = 2
EX_USAGE = 64
EX_PARSE = 65

_RECOVERABLE = (NotICIS, GenericityUnstable, ResourceLimitExceeded, FamilyShapeError)

# witnesses for a^(n-1) mod n; deterministic for every n < 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("path", help="germ-family file")
    p.add_argument("--seed", type=int, default=0, help="genericity seed (default 0)")
    p.add_argument(
        "--samples",
        default="1,-2",
        help="comma-separated nonzero parameter samples (default '1,-2')",
    )
    p.add_argument("--draws", type=int, default=2, help="generic draws per value (default 2)")
    p.add_argument("--trunc", type=int, default=24, help="arc series truncation (default 24)")
    p.add_argument(
        "--retractions", type=int, default=3, help="linear retractions for af (default 3)"
    )
    p.add_argument(
        "--field",
        default="qq",
        help="coefficient field: qq, or fp:PRIME with PRIME > 2^30 (default qq)",
    )
    p.add_argument("--json", dest="json_path", metavar="PATH", help="write the JSON report here")
    p.add_argument(
        "--degree-bound", type=int, default=30, help="standard-basis degree budget (default 30)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="equigerm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="invariant panel of the special fiber")
    _add_common_flags(p)

    p = sub.add_parser("check", help="constancy check across the family")
    p.add_argument("kind", choices=("whitney-a", "af", "wf"))
    _add_common_flags(p)

    p = sub.add_parser("chain-report", help="Milnor sums along the bundled chain")
    _add_common_flags(p)

    p = sub.add_parser("arc-test", help="pull-back orders and dependence along an arc")
    _add_common_flags(p)
    p.add_argument("--arc", help="arc name (default: the only arc in the file)")
    p.add_argument("--strict", action="store_true", help="test strict dependence")
    return parser


def _parse_field(parser: argparse.ArgumentParser, text: str) -> Optional[int]:
    if text == "qq":
        return None
    if text.startswith("fp:"):
        try:
            p = int(text[3:])
        except ValueError:
            parser.error(f"--field fp wants an integer prime, got {text[3:]!r}")
        if p <= 2**30:
            parser.error(f"--field fp:{p}: modulus must exceed 2^30 to keep draws generic")
        if not _is_prime(p):
            parser.error(f"--field fp:{p}: {p} is not prime")
        return p
    parser.error(f"--field must be qq or fp:PRIME, got {text!r}")
    return None


def _parse_samples(parser: argparse.ArgumentParser, text: str) -> tuple:
    points = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            q = Fraction(chunk)
        except (ValueError, ZeroDivisionError):
            parser.error(f"--samples: {chunk!r} is not a rational number")
        if q == 0:
            parser.error("--samples: sample points must be nonzero")
        points.append(q)
    if not points:
        parser.error("--samples: need at least one nonzero point")
    return tuple(points)


def _configs(parser, args) -> CheckConfig:
    modulus = _parse_field(parser, args.field)
    points = _parse_samples(parser, args.samples)
    return CheckConfig(
        sample_points=points,
        sample_count=max(2, len(points)),
        retraction_draws=args.retractions,
        genericity=GenericityConfig(seed=args.seed, draws=args.draws),
        basis_config=BasisConfig(
            order="local", degree_bound=args.degree_bound, modulus=modulus
        ),
    )


def _load(path: str) -> GermFamily:
    return load_family(path)


def _emit(reports: list, json_path: Optional[str]) -> None:
    if json_path:
        text = json.dumps(reports, separators=(", ", ": ")) + "\n"
        with open(json_path, "w") as fh:
            fh.write(text)


def _print_report(rep: dict) -> None:
    print(f"invariant: {rep['invariant']}")
    print(f"  at origin: {rep['at_origin']}")
    for s in rep["samples"]:
        value = s.get("value", {"error": s.get("error")})
        print(f"  at {s['point']}: {value}")
    print(f"  verdict: {rep['verdict']}")
    print(f"  seed: {rep['seed']}")
    for note in rep["notes"]:
        print(f"  note: {note}")


def _verdict_exit(verdicts: Sequence[str]) -> int:
    if any(v == "NOT_CONSTANT" for v in verdicts):
        return EX_NOT_CONSTANT
    if all(v in ("CERTIFIED", "COMPUTED") for v in verdicts) and verdicts:
        return EX_OK
    return EX_INCONCLUSIVE


def _point_report(invariant: str, value, seed: str, notes: list) -> dict:
    return {
        "invariant": invariant,
        "at_origin": value,
        "samples": [],
        "verdict": "COMPUTED",
        "seed": seed,
        "notes": notes,
    }


def _run_invariants(fam: GermFamily, cfg: CheckConfig) -> list:
    gcfg = cfg.genericity
    bc = cfg.basis_config
    fiber = fam.specialize([Fraction(0)] * fam.param_count)
    reports = []
    if fam.equations:
        jm = jacobian_module(fiber, JacobianKind.ABSOLUTE)
        assoc = associated_multiplicities(
            jm, fiber.dim, gcfg, tag="invariants:assoc", basis_config=bc
        )
        values = [r.value for r in assoc]
        reports.append(
            _point_report(
                "associated multiplicities e^j",
                values,
                gcfg.seed_label("invariants:assoc"),
                [f"draws agreeing: {[r.draws_agreeing for r in assoc]}"],
            )
        )
        segre = segre_numbers(values, fiber.dim, jm.rank)
        reports.append(
            _point_report(
                "Segre numbers s^i",
                {str(i): v for i, v in sorted(segre.items())},
                gcfg.seed_label("invariants:assoc"),
                [],
            )
        )
        mu = milnor_icis(list(fiber.equations), gcfg, "invariants:mu", bc)
        reports.append(
            _point_report(
                "Milnor number mu", mu.value, gcfg.seed_label("invariants:mu"), []
            )
        )
    if fiber.function is not None:
        em = em_invariant(fiber, gcfg, "invariants:em", bc)
        via, seqs = em_via_milnor(fiber, gcfg, "invariants:emmu", bc)
        notes = [
            f"em by sectional Milnor sums: {via.value}",
            f"mu_i(X): {[m.value for m in seqs['X']]}",
            f"mu_i(Z): {[m.value for m in seqs['Z']]}",
        ]
        reports.append(
            _point_report("em invariant", em.value, gcfg.seed_label("invariants:em"), notes)
        )
    return reports


def _pick_arc(parser, fam: GermFamily, name: Optional[str], trunc: int) -> Arc:
    if not fam.arcs:
        parser.error("the file defines no arcs")
    if name is None:
        if len(fam.arcs) > 1:
            parser.error(
                "several arcs in the file; pick one with --arc "
                f"({', '.join(sorted(fam.arcs))})"
            )
        name = next(iter(fam.arcs))
    if name not in fam.arcs:
        parser.error(f"no arc named {name!r} ({', '.join(sorted(fam.arcs)) or 'none'})")
    return dataclasses.replace(fam.arcs[name], truncation=trunc)


def _run_arc_test(parser, fam: GermFamily, args) -> tuple[list, int]:
    arc = _pick_arc(parser, fam, args.arc, args.trunc)
    reports = []
    verdicts = []

    def order_report(label: str, module: SubmoduleOfFree) -> None:
        profile = pull_back_orders(module, arc)
        reports.append(
            {
                "kind": "pullback-orders",
                "module": label,
                "arc": arc.name,
                "orders": list(profile.orders),
                "complete": profile.complete,
                "on_germ_verified": profile.on_germ_verified,
                "notes": list(profile.notes),
            }
        )

    def dependence_report(label: str, section, module: SubmoduleOfFree) -> None:
        res = arc_dependence_test(section, module, arc, strict=args.strict)
        body = res.to_json_dict()
        reports.append({"kind": "dependence", "section": label, "arc": arc.name, **body})
        verdicts.append(res.verdict)

    if fam.ideals:
        for name in sorted(fam.ideals):
            module = SubmoduleOfFree.ideal(fam.ring, fam.ideals[name])
            order_report(name, module)
            for ename in sorted(fam.elements):
                dependence_report(
                    f"{ename} on {name}", fam.elements[ename], module
                )
    elif fam.equations:
        rows = [
            [eq.derivative(v) for v in fam.fiber_variables] for eq in fam.equations
        ]
        module = SubmoduleOfFree.from_matrix(fam.ring, rows, relations=fam.equations)
        order_report("JM(F)", module)
        for param in fam.parameters:
            section = [eq.derivative(param) for eq in fam.equations]
            dependence_report(f"dF/d{param} on JM(F)", section, module)
    else:
        parser.error("the file has neither named ideals nor defining equations")

    if any(v == "REFUTED" for v in verdicts):
        code = EX_NOT_CONSTANT
    elif verdicts and all(v == "CONSISTENT" for v in verdicts):
        code = EX_OK
    elif not verdicts:
        code = EX_OK
    else:
        code = EX_INCONCLUSIVE
    return reports, code


def _print_arc_report(rep: dict) -> None:
    if rep["kind"] == "pullback-orders":
        flags = []
        if not rep["on_germ_verified"]:
            flags.append("on-germ unverified at this truncation")
        if not rep["complete"]:
            flags.append("profile incomplete")
        suffix = f"  ({'; '.join(flags)})" if flags else ""
        print(f"pullback of {rep['module']} along {rep['arc']}: orders {rep['orders']}{suffix}")
    else:
        print(
            f"dependence of {rep['section']} along {rep['arc']}: {rep['verdict']}"
            f"  (module orders {rep['module_orders']}, section {rep['section_orders']},"
            f" required {rep['required_orders']}, strict={rep['strict']})"
        )
    for note in rep["notes"]:
        print(f"  note: {note}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _configs(parser, args)

    try:
        fam = _load(args.path)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EX_PARSE
    except FamilyShapeError as e:
        print(f"rejected family: {e}", file=sys.stderr)
        return EX_PARSE
    except OSError as e:
        print(f"cannot read {args.path}: {e}", file=sys.stderr)
        return EX_USAGE

    try:
        if args.command == "invariants":
            reports = _run_invariants(fam, cfg)
            payload = reports
            for rep in reports:
                _print_report(rep)
            if not reports:
                print("nothing to compute: the file has no equations and no function")
            code = EX_OK
        elif args.command == "check":
            fn = {
                "whitney-a": check_whitney_a,
                "af": check_af,
                "wf": check_wf,
            }[args.kind]
            report: ConstancyReport = fn(fam, cfg)
            payload = [report.to_json_dict()]
            _print_report(payload[0])
            code = _verdict_exit([report.verdict])
        elif args.command == "chain-report":
            if not fam.chain:
                print("the file has no chain", file=sys.stderr)
                return EX_INCONCLUSIVE
            results = chain_milnor_report(fam, cfg)
            payload = [r.to_json_dict() for r in results]
            for rep in payload:
                _print_report(rep)
            code = _verdict_exit([r.verdict for r in results])
        else:
            payload, code = _run_arc_test(parser, fam, args)
            for rep in payload:
                _print_arc_report(rep)
    except ArcNotOnGerm as e:
        print(f"arc not on the germ: {e}", file=sys.stderr)
        return EX_INCONCLUSIVE
    except _RECOVERABLE as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EX_INCONCLUSIVE

    _emit(payload, args.json_path)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
