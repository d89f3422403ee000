"""Command-line front end. Every command builds a JSON report; the text output
is a rendering of that same report.

Exit codes: 0 affirmative verdict, 1 negative verdict, 2 input or usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from . import __version__, anomalies, arith, correspond, equiv, families, gf, projgeom, search
from .arith import FactoredInteger

SCHEMA_VERSION = 1
FAMILIES = ("line", "triangle", "hessian", "tallini", "quadric")
FAMILY_ARITY = {"line": 2, "triangle": 3, "hessian": 3, "tallini": 4, "quadric": 4}


class UsageError(Exception):
    pass


def parse_element(token: Any) -> FactoredInteger | int:
    """A decimal integer, a product like ``2^4*3^4*7``, or a ``{prime: exp}`` map."""
    if isinstance(token, dict):
        try:
            factors = {int(p): int(e) for p, e in token.items()}
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad factored element {token!r}") from exc
        return _factored(factors, token)
    if isinstance(token, int) and not isinstance(token, bool):
        token = str(token)
    if not isinstance(token, str):
        raise UsageError(f"cannot read element {token!r}")
    text = token.strip()
    if not text:
        raise UsageError("empty element")
    if "*" in text or "^" in text:
        sign = 1
        if text.startswith("-"):
            sign, text = -1, text[1:]
        factors: dict[int, int] = {}
        for part in text.split("*"):
            base, _, exp = part.partition("^")
            try:
                b, e = int(base), int(exp or 1)
            except ValueError as exc:
                raise UsageError(f"bad factor {part!r} in {token!r}") from exc
            if e < 0:
                raise UsageError(f"negative exponent in {token!r}")
            if b == 1:
                continue
            factors[b] = factors.get(b, 0) + e
        return _factored(factors, token, sign)
    try:
        n = int(text)
    except ValueError as exc:
        raise UsageError(f"{token!r} is not an integer") from exc
    if n == 0:
        raise UsageError("0 is not allowed in a set")
    if abs(n) >= arith.MAX_ABS:
        raise UsageError(f"{token} does not fit in 64 bits; give it in factored form")
    return n


def _factored(factors: dict[int, int], token, sign: int = 1) -> FactoredInteger:
    composite = [p for p, e in factors.items() if e and not gf._is_prime(p)]
    if composite:
        raise UsageError(f"{composite} in {token!r} are not prime")
    return FactoredInteger(sign, factors)


def parse_set(value: Any) -> list:
    if value is None:
        raise UsageError("a set is required")
    items = value.split(",") if isinstance(value, str) else list(value)
    if not items:
        raise UsageError("the set is empty")
    return [parse_element(x) for x in items]


def parse_primes(value: Any) -> list[int]:
    items = value.split(",") if isinstance(value, str) else list(value or [])
    try:
        return [int(x) for x in items]
    except ValueError as exc:
        raise UsageError(f"bad prime list {value!r}") from exc


def check_q(q: Any) -> int:
    try:
        return gf.check_modulus(int(q))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"q must be an odd prime, got {q!r}") from exc


def element_json(f: FactoredInteger | int) -> dict:
    f = arith.as_factored(f)
    out = {"factored": str(f), "factors": {str(p): e for p, e in f.factors.items()}}
    if abs(f.value) < arith.MAX_ABS:
        out["value"] = str(f.value)
    return out


def _pgl_json(g: equiv.PglElement) -> list[list[int]]:
    return [list(r) for r in g.matrix]


def _base(command: str, q: int | None, args) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "q": q,
        "verdict": None,
        "certificate": {},
        "anomalies": [],
        "bounds": {},
        "seed": args.seed,
    }


def _point_cap(args) -> int:
    return projgeom.DEFAULT_CAP if args.cap is None else args.cap


def report_json(rep: correspond.LocalPowerReport) -> dict:
    return {
        "verdict": rep.locally,
        "locally": rep.locally,
        "trivial": rep.trivial,
        "dimension": rep.dimension,
        "minimal": rep.minimal,
        "size": rep.size,
        "classes": rep.classes,
        "primes": list(rep.primes),
        "certificate": {"kind": rep.certificate.kind, **rep.certificate.data},
    }


def bounds_json(q: int, k: int) -> dict:
    if k < 3:
        return {}
    b = correspond.size_bounds(q, k)
    return {
        "k": k,
        "lower_any": b.lower_any,
        "lower_nontrivial": str(b.lower_nontrivial),
        "upper": b.upper,
        "upper_strict": b.upper_strict,
        "upper_approximate": b.upper_approximate,
    }


def cmd_check(args) -> dict:
    q = check_q(args.q)
    B = parse_set(args.set)
    out = _base("check", q, args)
    rep = correspond.decide_locally(B, q, cap=_point_cap(args))
    out.update(report_json(rep))
    out["certificate_replayed"] = correspond.verify_certificate(rep, B)
    out["anomalies"] = anomalies.matching(B, q)
    out["bounds"] = bounds_json(q, rep.dimension + 1) if rep.dimension is not None else {}
    return out


def cmd_witness(args) -> dict:
    q = check_q(args.q)
    B = parse_set(args.set)
    bound = arith.DEFAULT_WITNESS_BOUND if args.bound is None else args.bound
    if not isinstance(bound, int) or bound < 1:
        raise UsageError("--bound must be a positive integer")
    out = _base("witness", q, args)
    w = arith.witness_prime(B, q, bound)
    check = correspond.decide_locally(B, q, cap=_point_cap(args))
    out.update(
        {
            "verdict": w.witness is not None,
            "witness": w.witness,
            "bound": w.searched_bound,
            "skipped": list(w.skipped),
            "check_verdict": check.locally,
            "certificate": {"kind": "witness-prime", "prime": w.witness},
        }
    )
    if w.witness is not None:
        out["certificate_replayed"] = w.witness % q == 1 and not any(
            arith.is_qth_power_residue(b, w.witness, q) for b in B
        )
    return out


def cmd_construct(args) -> dict:
    family = args.family
    if family not in FAMILIES:
        raise UsageError(f"family must be one of {', '.join(FAMILIES)}")
    primes = parse_primes(args.primes) if args.primes else [2, 3, 5, 7][: FAMILY_ARITY[family]]
    if len(primes) != FAMILY_ARITY[family]:
        raise UsageError(f"{family} needs {FAMILY_ARITY[family]} primes")
    if family == "hessian":
        q = 7 if args.q is None else check_q(args.q)
        if q != families.HESSIAN_Q:
            raise UsageError("the Hessian construction lives in PG(F_7^3)")
        res = families.hessian_set(*primes)
    else:
        if args.q is None:
            raise UsageError("--q is required")
        q = check_q(args.q)
        builder = {
            "line": families.line_set,
            "triangle": families.projective_triangle_set,
            "tallini": families.tallini_set,
            "quadric": families.elliptic_quadric_set,
        }[family]
        res = builder(q, *primes)
    v = res.verification
    out = _base("construct", q, args)
    out.update(
        {
            "family": family,
            "primes": list(res.primes),
            "set": [element_json(f) for f in res.elements],
            "points": [list(p) for p in res.points.sorted()],
            "verification": dict(v.__dict__),
            "size": v.size,
            "dimension": v.set_dimension,
            "minimal": v.set_minimal,
            "verdict": bool(v.blocking and v.minimal and v.locally and v.set_minimal),
            "certificate": {"kind": "recomputed-verification"},
            "notes": [],
        }
    )
    if family == "hessian":
        tri = families.projective_triangle_points(7)
        cert = equiv.points_equivalent(tri, res.points)
        out["notes"].append(
            "inequivalent to triangle" if not cert.equivalent else "equivalent to triangle"
        )
        out["equivalent_to_triangle"] = cert.equivalent
    return out


def cmd_equiv(args) -> dict:
    q = check_q(args.q)
    A = parse_set(args.set_a)
    B = parse_set(args.set_b)
    out = _base("equiv", q, args)
    cert = equiv.sets_equivalent(A, B, q)
    out.update({"verdict": cert.equivalent, "equivalent": cert.equivalent})
    if cert.witness is not None:
        primes = sorted(set(correspond.exponent_matrix(A, q).primes) | set(correspond.exponent_matrix(B, q).primes))
        sa = correspond.exponent_matrix(A, q, primes).point_set()
        sb = correspond.exponent_matrix(B, q, primes).point_set()
        out["certificate"] = {"kind": "pgl-witness", "matrix": _pgl_json(cert.witness), "primes": primes}
        out["certificate_replayed"] = equiv.apply(cert.witness, sa) == sb
        va, vb = correspond.decide_locally(A, q).locally, correspond.decide_locally(B, q).locally
        out["locally"] = {"set_a": va, "set_b": vb, "equal": va == vb}
    else:
        out["certificate"] = {"kind": "inequivalence", "separating_invariant": cert.separating_invariant or "exhaustive search"}
    return out


def cmd_reduce(args) -> dict:
    q = check_q(args.q)
    B = parse_set(args.set)
    m, s = correspond.point_set_of(B, q)
    d = projgeom.span_projective_dimension(s)
    targets = parse_primes(args.primes) if args.primes else list(m.primes[: d + 1])
    reduced, g = correspond.reduce_primes(B, q, targets)
    before = correspond.decide_locally(B, q).locally
    after = correspond.decide_locally(reduced, q).locally
    image = equiv.apply(g, s)
    embedded = [tuple(arith.rad_q(b, q).vector(targets)) + (0,) * (m.k - len(targets)) for b in reduced]
    out = _base("reduce", q, args)
    out.update(
        {
            "verdict": before == after,
            "dimension": d,
            "target_primes": targets,
            "set": [element_json(b) for b in reduced],
            "certificate": {"kind": "pgl-map", "matrix": _pgl_json(g), "primes": list(m.primes)},
            "certificate_replayed": image == projgeom.PointSet.of(q, embedded, k=m.k),
            "locally": {"before": before, "after": after, "equal": before == after},
        }
    )
    return out


def cmd_gapsearch(args) -> dict:
    q = check_q(args.q)
    if args.size is None:
        raise UsageError("--size is required")
    cap = search.DEFAULT_SUBSET_CAP if args.cap is None else args.cap
    res = search.gapsearch(q, args.size, k=args.k or 3, method=args.method, cap=cap)
    out = _base("gapsearch", q, args)
    out.update(
        {
            "k": res.k,
            "size": res.size,
            "method": args.method,
            "candidates": res.candidates,
            "examined": res.examined,
            "blocking": res.blocking,
            "minimal_found": len(res.minimal),
            "minimal_sets": [[list(p) for p in s.sorted()] for s in res.minimal],
            "verdict": not res.minimal,
            "certificate": {"kind": "exhaustive-search", "candidates": res.candidates},
        }
    )
    return out


def cmd_bounds(args) -> dict:
    q = check_q(args.q)
    k = args.k if args.k is not None else 3
    out = _base("bounds", q, args)
    out.update({"k": k, "verdict": True, "bounds": bounds_json(q, k)})
    out["certificate"] = {"kind": "closed-form", "q": q, "k": k}
    return out


def cmd_anomalies(args) -> dict:
    out = _base("anomalies", None, args)
    out.update({"verdict": True, "anomalies": anomalies.run_all()})
    return out


COMMANDS = {
    "check": cmd_check,
    "witness": cmd_witness,
    "construct": cmd_construct,
    "equiv": cmd_equiv,
    "reduce": cmd_reduce,
    "gapsearch": cmd_gapsearch,
    "bounds": cmd_bounds,
    "anomalies": cmd_anomalies,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpowerset",
        description="Decide and construct locally q-th power sets of integers.",
        epilog="Exit codes: 0 affirmative verdict, 1 negative verdict, 2 input error.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="odd prime exponent")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--seed", type=int, default=0, help="recorded in the report for reproducibility")
    common.add_argument("--cap", type=int, help="enumeration cap (points for check, subsets for gapsearch)")
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--request", help="JSON request document supplying q and the sets")
    sub = parser.add_subparsers(dest="command", required=True)

    set_help = "comma-separated integers, each decimal or factored like 2^4*3^4*7"
    p = sub.add_parser("check", parents=[common], help="decide the locally q-th power property")
    p.add_argument("--set", help=set_help)
    p = sub.add_parser("witness", parents=[common], help="search for a witness prime")
    p.add_argument("--set", help=set_help)
    p.add_argument("--bound", type=int, help=f"largest prime to try (default {arith.DEFAULT_WITNESS_BOUND})")
    p = sub.add_parser("construct", parents=[common], help="build a canonical family")
    p.add_argument("family_pos", nargs="?", metavar="family", choices=FAMILIES)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--primes", help="comma-separated distinct primes")
    p = sub.add_parser("equiv", parents=[common], help="geometric q-equivalence of two sets")
    p.add_argument("--set-a", dest="set_a", help=set_help)
    p.add_argument("--set-b", dest="set_b", help=set_help)
    p = sub.add_parser("reduce", parents=[common], help="move a set onto fewer primes")
    p.add_argument("--set", help=set_help)
    p.add_argument("--primes", help="target primes (default: the smallest d+1 primes of the support)")
    p = sub.add_parser("gapsearch", parents=[common], help="exhaustive gap search in PG(F_q^3)")
    p.add_argument("--size", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--method", choices=("exhaustive", "branch"), default="exhaustive")
    p = sub.add_parser("bounds", parents=[common], help="size bounds for minimal sets")
    p.add_argument("--k", type=int)
    sub.add_parser("anomalies", parents=[common], help="run the known inconsistent examples")
    return parser


def _apply_request(args) -> None:
    """Fill unset flags from a JSON request document. Sets may be lists of
    decimal strings or of ``{prime: exponent}`` maps."""
    with open(args.request) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise UsageError("a request document must be a JSON object")
    for key in ("q", "set", "set_a", "set_b", "primes", "family", "bound", "size", "k"):
        if key in doc and getattr(args, key, None) is None:
            setattr(args, key, doc[key])


def render_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.command == "construct":
        args.family = args.family or args.family_pos
    start = time.perf_counter()
    try:
        if args.request:
            _apply_request(args)
        report = COMMANDS[args.command](args)
    except (UsageError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    text = json.dumps(report, indent=2) if args.json else render_text(report)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    return 0 if report["verdict"] else 1


if __name__ == "__main__":
    sys.exit(main())
