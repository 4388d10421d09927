"""Command-line entry point.  Every invocation prints one JSON report.

Exit codes: 0 ok, 1 property failure, 2 usage or parse error, 3 budget or
cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from json.scanner import py_make_scanner

from . import factorization as sf
from .errors import BudgetExceeded, CapExceeded, ParseError, SerialFactError
from .ideals import all_right_ideals, generation_number_at_most, is_two_sided, right_ideal
from .integers import (
    classify_int,
    factor_int,
    left_divisor_factorization_int,
    rigid_factorization_int,
    rigid_refinement_of_divisor,
)
from .lattice import are_similar, cyclic_homs, is_uniserial_quotient
from .rings import (
    DEFAULT_CAP,
    MatrixRing,
    Product,
    Quotient,
    UpperTriangular,
    ZMod,
    build_ring,
    ring_axioms_report,
    spec_label,
    spec_to_dict,
)
from .suites import SUITES

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

# ---------------------------------------------------------------------------
# ring-spec parsing


class _Node(dict):
    """A JSON object that remembers the offset of its opening brace."""

    offset = 0


class _PositionDecoder(json.JSONDecoder):
    def __init__(self):
        super().__init__()
        plain = self.parse_object

        def parse_object(state, *args):
            obj, end = plain(state, *args)
            node = _Node(obj)
            node.offset = state[1] - 1
            return node, end

        self.parse_object = parse_object
        self.scan_once = py_make_scanner(self)


_FIELDS = {
    "zmod": {"n"},
    "matrix": {"size", "base"},
    "triangular": {"size", "base"},
    "product": {"factors"},
    "quotient": {"base", "ideal_generators"},
}


def _location(text: str, offset: int) -> tuple:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def parse_ring_spec(text: str):
    """Parse the JSON ring grammar into a spec tree, rejecting unknown keys."""
    try:
        tree = _PositionDecoder().decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return _to_spec(tree, text)


def _to_spec(node, text):
    if not isinstance(node, dict):
        raise ParseError("ring spec must be a JSON object", 1, 1)
    where = _location(text, getattr(node, "offset", 0))

    def fail(message):
        raise ParseError(message, *where)

    kind = node.get("type")
    if kind not in _FIELDS:
        fail(f"unknown or missing ring type {kind!r}")
    allowed = _FIELDS[kind]
    unknown = sorted(set(node) - allowed - {"type"})
    if unknown:
        at = text.find(json.dumps(unknown[0]), getattr(node, "offset", 0))
        if at >= 0:
            where = _location(text, at)
        fail(f"unknown key(s) for {kind}: {', '.join(unknown)}")
    missing = sorted(allowed - set(node))
    if missing:
        fail(f"missing key(s) for {kind}: {', '.join(missing)}")

    def integer(key):
        value = node[key]
        if isinstance(value, bool) or not isinstance(value, int):
            fail(f"{key} must be an integer")
        return value

    if kind == "zmod":
        return ZMod(integer("n"))
    if kind in ("matrix", "triangular"):
        cls = MatrixRing if kind == "matrix" else UpperTriangular
        return cls(integer("size"), _to_spec(node["base"], text))
    if kind == "product":
        if not isinstance(node["factors"], list):
            fail("factors must be a list")
        return Product([_to_spec(f, text) for f in node["factors"]])
    gens = node["ideal_generators"]
    if not isinstance(gens, list) or not all(isinstance(g, int) and not isinstance(g, bool) for g in gens):
        fail("ideal_generators must be a list of integers")
    return Quotient(_to_spec(node["base"], text), gens)


def _read_ring_argument(value: str):
    if value is None:
        raise ParseError("--ring is required", 1, 1)
    if os.path.isfile(value):
        with open(value, encoding="utf-8") as fh:
            value = fh.read()
    return parse_ring_spec(value)


def _parse_generators(text) -> list:
    if text is None or not text.strip():
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParseError(f"generators must be comma-separated integers, got {text!r}", 1, 1) from None


def _parse_factor_groups(text) -> list:
    if not text:
        raise ParseError("--factors is required, e.g. '3;4'", 1, 1)
    return [_parse_generators(group) for group in text.split(";")]


# ---------------------------------------------------------------------------
# commands


class _Outcome:
    def __init__(self, ok: bool, payload: dict, witnesses=None):
        self.ok = ok
        self.payload = payload
        self.witnesses = witnesses or []


def _canonical_generators(I) -> list:
    # fewest generators, lexicographically first among minimal-index representatives
    for k in range(0, 4):
        try:
            found = generation_number_at_most(I, k)
        except BudgetExceeded:
            break
        if found is not None:
            return found
    return list(I.generators) or list(I.elements)


def _ideal_payload(I) -> dict:
    return {"generators": _canonical_generators(I), "elements": list(I.elements)}


def _factorization_payload(result) -> dict:
    if result.ok:
        factors = [_ideal_payload(f) for f in result.factors]
        return {
            "factorizable": True,
            "factors": [f["generators"] for f in factors],
            "factor_elements": [f["elements"] for f in factors],
            "certificate": result.certificate,
        }
    return {"factorizable": False, **result.to_dict()}


def _ring(args):
    spec = _read_ring_argument(args.ring)
    return spec, build_ring(spec, cap=args.cap)


def cmd_ring_check(args):
    spec, ring = _ring(args)
    report = ring_axioms_report(ring)
    payload = {"ring": spec_to_dict(spec), "label": spec_label(spec), "order": ring.order, **report.to_dict()}
    return _Outcome(report.ok, payload, [report.first_violation] if report.first_violation else [])


def cmd_ideal_factor(args):
    _, ring = _ring(args)
    A = right_ideal(ring, _parse_generators(args.generators))
    result = sf.find_serial_factorization(A, args.cap)
    payload = {"ideal": _ideal_payload(A), **_factorization_payload(result)}
    if A.is_proper:
        # cross-check against the exhaustive search
        budget = sf.DEFAULT_SEARCH_BUDGET if args.budget is None else args.budget
        orderings = sf.all_serial_factorizations(A, budget=budget, cap=args.cap)
        payload["exhaustive_orderings"] = len(orderings)
        agrees = bool(orderings) == result.ok and (not result.ok or orderings[0].factor_set() == result.factor_set())
        payload["exhaustive_agrees"] = agrees
    witnesses = [] if result.ok else [result.witness]
    return _Outcome(result.ok, payload, witnesses)


def cmd_ideal_verify(args):
    _, ring = _ring(args)
    A = right_ideal(ring, _parse_generators(args.generators))
    factors = [right_ideal(ring, group) for group in _parse_factor_groups(args.factors)]
    result = sf.verify_serial_factorization(A, factors, args.cap)
    witnesses = [] if result.ok else [result.witness]
    return _Outcome(result.ok, {"ideal": _ideal_payload(A), **_factorization_payload(result)}, witnesses)


def cmd_ideal_list(args):
    _, ring = _ring(args)
    rows = []
    for I in all_right_ideals(ring, args.cap):
        row = {**_ideal_payload(I), "two_sided": is_two_sided(I)}
        if I.is_proper:
            row["uniserial_quotient"] = is_uniserial_quotient(I, args.cap)
            row["factorizable"] = sf.find_serial_factorization(I, args.cap).ok
        rows.append(row)
    return _Outcome(True, {"order": ring.order, "count": len(rows), "ideals": rows})


def cmd_overideal_factor(args):
    _, ring = _ring(args)
    A = right_ideal(ring, _parse_generators(args.generators))
    B = right_ideal(ring, _parse_generators(args.overideal))
    fact = sf.find_serial_factorization(A, args.cap)
    if not fact.ok:
        return _Outcome(False, {"base_factorizable": False, **fact.to_dict()}, [fact.witness])
    criterion = sf.overideal_has_factorization(fact, B)
    payload = {"base_factors": [_canonical_generators(f) for f in fact.factors], "criterion": criterion}
    if not criterion:
        return _Outcome(False, payload, [{"overideal": list(B.elements)}])
    built = sf.overideal_factorization(fact, B, args.cap)
    payload.update(_factorization_payload(built))
    payload["divisor_injection"] = list(sf.divisor_injection(fact, built))
    return _Outcome(True, payload)


def cmd_similarity(args):
    _, ring = _ring(args)
    A = right_ideal(ring, _parse_generators(args.generators))
    B = right_ideal(ring, _parse_generators(args.other))
    similar = are_similar(A, B, args.cap)
    isos = [h.to_dict() for h in cyclic_homs(A, B, args.cap) if h.is_iso] if A.size == B.size else []
    payload = {"similar": similar, "first": _ideal_payload(A), "second": _ideal_payload(B)}
    return _Outcome(True, payload, isos[:1])


def cmd_classify_ring(args):
    _, ring = _ring(args)
    result = sf.classify_all_factor(ring, args.cap)
    return _Outcome(result.consistent, result.to_dict())


def cmd_int_factor(args):
    fact = factor_int(args.value)
    return _Outcome(True, {"value": args.value, "class": classify_int(args.value).value, **fact.to_dict()})


def cmd_int_rigid(args):
    if args.divisor is not None:
        refinement = rigid_refinement_of_divisor(args.value, args.divisor)
        payload = {
            "value": args.value,
            "divisor": args.divisor,
            "left_divisor_factors": left_divisor_factorization_int(args.value, args.divisor),
            **refinement.to_dict(),
        }
        return _Outcome(True, payload)
    fact = rigid_factorization_int(args.value)
    return _Outcome(True, {"value": args.value, "class": classify_int(args.value).value, **fact.to_dict()})


def cmd_suite(args):
    name = args.name or args.suite
    if name not in SUITES:
        raise ParseError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}", 1, 1)
    result = SUITES[name]()
    payload = result.to_dict()
    return _Outcome(result.passed, payload, [result.counterexample] if result.counterexample else [])


COMMANDS = {
    "ring-check": cmd_ring_check,
    "ideal-factor": cmd_ideal_factor,
    "ideal-verify": cmd_ideal_verify,
    "ideal-list": cmd_ideal_list,
    "overideal-factor": cmd_overideal_factor,
    "similarity": cmd_similarity,
    "classify-ring": cmd_classify_ring,
    "int-factor": cmd_int_factor,
    "int-rigid": cmd_int_rigid,
    "suite": cmd_suite,
}


# ---------------------------------------------------------------------------
# argument handling and reports


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _common(p):
    p.add_argument("--ring", help="ring spec: a JSON file path or inline JSON")
    p.add_argument("--generators", help="comma-separated element indices of the right ideal")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest ring order accepted")
    p.add_argument("--budget", type=int, default=None, help="search budget for exhaustive commands")
    p.add_argument("--out", help="also write the report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="serialfact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _common(p)
        if name == "ideal-verify":
            p.add_argument("--factors", help="factor generator groups, e.g. '3;4'")
        if name == "overideal-factor":
            p.add_argument("--overideal", help="generators of the overideal B")
        if name == "similarity":
            p.add_argument("--other", help="generators of the second right ideal")
        if name in ("int-factor", "int-rigid"):
            p.add_argument("value", type=int)
        if name == "int-rigid":
            p.add_argument("--divisor", type=int, default=None, help="split this divisor instead")
        if name == "suite":
            p.add_argument("name", nargs="?", help=f"one of: {', '.join(SUITES)}")
            p.add_argument("--suite", dest="suite", help="same as the positional name")
    return parser


def run(argv) -> tuple:
    """Execute one invocation and return (report, exit code); never raises."""
    start = time.perf_counter()
    argv = list(argv)
    report = {"command": argv[0] if argv else None, "arguments": argv[1:], "status": "error"}
    payload, witnesses = {}, []
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise _UsageError(f"a command is required: {', '.join(COMMANDS)}")
        outcome = COMMANDS[args.command](args)
        payload, witnesses = outcome.payload, outcome.witnesses
        status, code = ("ok", EXIT_OK) if outcome.ok else ("fail", EXIT_FAIL)
    except (CapExceeded, BudgetExceeded) as exc:
        status, code = "error", EXIT_BUDGET
        payload = {"error": type(exc).__name__, "message": str(exc)}
    except (_UsageError, SerialFactError, ValueError, OSError) as exc:
        status, code = "error", EXIT_USAGE
        payload = {"error": type(exc).__name__ if not isinstance(exc, _UsageError) else "UsageError", "message": str(exc)}
        if isinstance(exc, ParseError):
            payload.update(line=exc.line, column=exc.column)
    report.update(status=status, payload=payload, witnesses=witnesses)
    report["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return report, code


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = run(argv)
    text = json.dumps(report, default=_jsonable)
    print(text)
    out = _out_path(argv)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


def _out_path(argv):
    for i, arg in enumerate(argv):
        if arg == "--out" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--out="):
            return arg.split("=", 1)[1]
    return None


def _jsonable(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
