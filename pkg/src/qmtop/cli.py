"""Batch command line: documents in, verdict reports out.

Exit codes follow one contract everywhere: 0 when the property holds (or no
witness exists), 1 when it fails (or the searched-for witness was found),
2 on input errors.  Reports go to stdout as JSON, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import continuity, qmetric, representation, topology
from ._tails import TailAnalysisError
from .core import (
    DirectedNet,
    DocumentError,
    PositiveSet,
    QuasiFamily,
    SequenceSpec,
    Topology,
    ValueSemigroup,
    parse_document,
    serialize,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


@dataclass
class Verdict:
    op: str
    verdict: str
    witness: str | None = None
    reason: str | None = None
    detail: dict = field(default_factory=dict)

    def emit(self) -> None:
        obj = {"op": self.op, "verdict": self.verdict}
        if self.reason is not None:
            obj["reason"] = self.reason
        if self.witness is not None:
            obj["witness"] = json.loads(self.witness)
        if self.detail:
            obj["detail"] = self.detail
        print(json.dumps(obj, separators=(",", ":")))


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _fail_input(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INPUT


# ---------------------------------------------------------------------------


def cmd_check(args) -> int:
    value = parse_document(_read(args.file), validate=False)
    kind = args.kind
    if kind == "topology":
        if not isinstance(value, Topology):
            return _fail_input("document is not a topology")
        violations = topology.check_topology(value.space, value.opens)
    elif kind == "qmetric":
        if not isinstance(value, QuasiFamily):
            return _fail_input("document is not a quasimetric family")
        violations = qmetric.check_quasifamily(value)
    elif kind == "semigroup":
        sg = value.semigroup if isinstance(value, PositiveSet) else value
        if not isinstance(sg, ValueSemigroup):
            return _fail_input("document is not a semigroup")
        violations = continuity.check_value_semigroup(sg)
    else:  # positives
        if not isinstance(value, PositiveSet):
            return _fail_input("document carries no set of positives")
        violations = continuity.check_value_semigroup(value.semigroup)
        if not violations:
            violations = continuity.check_positives(value)
    if violations:
        Verdict("check", "fail", reason=str(violations[0]),
                detail={"violations": [v.to_json() for v in violations]}).emit()
        return EXIT_FAIL
    Verdict("check", "pass").emit()
    return EXIT_PASS


def cmd_canonical(args) -> int:
    t = parse_document(_read(args.file))
    if not isinstance(t, Topology):
        return _fail_input("canonical expects a topology document")
    print(serialize(representation.canonical_family(t)))
    return EXIT_PASS


def cmd_topology(args) -> int:
    q = parse_document(_read(args.file))
    if not isinstance(q, QuasiFamily):
        return _fail_input("topology expects a qmetric document")
    print(serialize(qmetric.to_topology(q)))
    return EXIT_PASS


def cmd_roundtrip(args) -> int:
    if args.n is not None:
        if not 1 <= args.n <= 4:
            return _fail_input("roundtrip enumeration supports --n 1..4")
        checked = equal = 0
        first_failure = None
        for t in topology.enumerate_topologies(args.n):
            report = representation.roundtrip(t)
            checked += 1
            if report.equal:
                equal += 1
            elif first_failure is None:
                first_failure = serialize(t)
        verdict = Verdict("roundtrip", "pass" if checked == equal else "fail",
                          witness=first_failure,
                          detail={"n": args.n, "checked": checked, "equal": equal,
                                  "message": f"{checked} topologies, {equal} equal"})
        verdict.emit()
        return EXIT_PASS if checked == equal else EXIT_FAIL
    if args.file is None:
        return _fail_input("roundtrip needs a topology file or --n")
    t = parse_document(_read(args.file))
    if not isinstance(t, Topology):
        return _fail_input("roundtrip expects a topology document")
    report = representation.roundtrip(t)
    Verdict("roundtrip", "pass" if report.equal else "fail",
            detail={"missing": [s.members() for s in report.missing],
                    "extra": [s.members() for s in report.extra]}).emit()
    return EXIT_PASS if report.equal else EXIT_FAIL


def _as_family(value) -> QuasiFamily:
    if isinstance(value, QuasiFamily):
        return value
    if isinstance(value, Topology):
        return representation.canonical_family(value)
    raise DocumentError("need a topology or qmetric document")


def _as_topology(value) -> Topology:
    if isinstance(value, Topology):
        return value
    if isinstance(value, QuasiFamily):
        return qmetric.to_topology(value)
    raise DocumentError("need a topology or qmetric document")


def cmd_separation(args) -> int:
    value = parse_document(_read(args.file))
    t = _as_topology(value)
    direct = {"t0": topology.is_t0(t), "t1": topology.is_t1(t), "t2": topology.is_t2(t)}
    if args.method == "direct":
        Verdict("separation", "pass", detail={"method": "direct", **direct}).emit()
        return EXIT_PASS
    q = _as_family(value)
    if args.method == "metric":
        metric = {"t0": qmetric.sep_metric(q, "t0_unordered"),
                  "t1": qmetric.sep_metric(q, "t1_amended"),
                  "t2": direct["t2"]}
        mismatches = [axiom for axiom in ("t0", "t1") if metric[axiom] != direct[axiom]]
        Verdict("separation", "fail" if mismatches else "pass",
                reason=f"metric and direct verdicts disagree on {mismatches}"
                if mismatches else None,
                detail={"method": "metric", **metric,
                        "note": "t2 from the generated topology; no sound "
                                "metric criterion is available",
                        "direct": direct, "disagreements": mismatches}).emit()
        return EXIT_FAIL if mismatches else EXIT_PASS
    axiom = {"literal_r3": "t0", "literal_r4": "t1", "literal_r5": "t2"}[args.method]
    pairs = representation.discrepancy_pairs(q, args.method, axiom)
    Verdict("separation", "fail" if pairs else "pass",
            reason=f"literal condition disagrees with direct {axiom} at some pair"
            if pairs else None,
            detail={"method": args.method, "axiom": axiom,
                    "condition": qmetric.sep_metric(q, args.method),
                    "direct": direct[axiom],
                    "disagreeing_pairs": pairs}).emit()
    return EXIT_FAIL if pairs else EXIT_PASS


def cmd_converge(args) -> int:
    seq = parse_document(_read(args.sequence))
    space_doc = parse_document(_read(args.space))
    x = args.point
    mode = args.mode
    if mode == "topological":
        if not isinstance(seq, SequenceSpec):
            return _fail_input("topological mode needs a sequence document")
        t = _as_topology(space_doc)
        ok = topology.converges_topologically(seq, t, x, horizon=args.horizon)
        Verdict("converge", "pass" if ok else "fail",
                reason=None if ok else "sequence leaves the minimal neighbourhood "
                                       "unboundedly often",
                detail={"mode": mode, "point": x}).emit()
        return EXIT_PASS if ok else EXIT_FAIL
    q = _as_family(space_doc)
    if mode in ("right", "left", "cauchy"):
        if not isinstance(seq, (SequenceSpec, DirectedNet)):
            return _fail_input(f"{mode} mode needs a sequence or net document")
        if mode == "right":
            ok = qmetric.right_converges(seq, q, x)
        elif mode == "left":
            ok = qmetric.left_converges(seq, q, x)
        else:
            ok = qmetric.is_right_cauchy(seq, q)
        Verdict("converge", "pass" if ok else "fail",
                reason=None if ok else f"{mode} condition fails at some index",
                detail={"mode": mode, "point": x}).emit()
        return EXIT_PASS if ok else EXIT_FAIL
    if not isinstance(seq, SequenceSpec):
        return _fail_input(f"{mode} mode needs a sequence document")
    if mode == "product":
        ok = qmetric.product_converges(seq, q, x)
        Verdict("converge", "pass" if ok else "fail",
                reason=None if ok else "some coordinate never settles",
                detail={"mode": mode, "point": x}).emit()
        return EXIT_PASS if ok else EXIT_FAIL
    result = qmetric.stat_converges(seq, q, x)
    per_index = []
    for rep in result.per_index:
        per_index.append({
            "index": rep.index,
            "density": rep.density.to_json(),
            "empirical": [{"horizon": h, "count": c,
                           "density": c / h} for h, c in rep.empirical],
        })
    verdict = {"true": "pass", "false": "fail", "undecided": "undecided"}[result.verdict]
    Verdict("converge", verdict,
            reason=None if verdict == "pass" else
            "some index has positive deviation density" if verdict == "fail"
            else "some deviation density is unknown",
            detail={"mode": mode, "point": x, "per_index": per_index}).emit()
    if verdict == "fail":
        return EXIT_FAIL
    if verdict == "undecided" and args.strict:
        return EXIT_FAIL
    return EXIT_PASS


def _preorder_doc(p) -> str:
    matrix = tuple(tuple(1 - e for e in row) for row in p.matrix)
    return serialize(QuasiFamily(p.space, ("i0",), (matrix,)))


def cmd_enumerate(args) -> int:
    n, kind = args.n, args.kind
    try:
        if kind == "topologies":
            items, to_doc = topology.enumerate_topologies(n), serialize
        else:
            items, to_doc = topology.enumerate_preorders(n), _preorder_doc
        if args.count_only:
            print(sum(1 for _ in items))
        else:
            for item in items:
                print(to_doc(item))
    except ValueError as e:
        return _fail_input(str(e))
    return EXIT_PASS


def cmd_discrepancy(args) -> int:
    def normalize(name: str) -> str:
        return name.removeprefix("direct-")

    left, right = normalize(args.left), normalize(args.right)
    try:
        witness = representation.find_discrepancy(left, right, args.n, args.indices)
    except ValueError as e:
        return _fail_input(str(e))
    if witness is None:
        Verdict("discrepancy", "none",
                detail={"left": left, "right": right, "n": args.n,
                        "indices": args.indices}).emit()
        return EXIT_PASS
    Verdict("discrepancy", "witness", witness=serialize(witness),
            reason=f"{left} and {right} disagree",
            detail={"left": left, "right": right,
                    "pairs": representation.discrepancy_pairs(witness, left, right)}).emit()
    return EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmtop",
        description="Finite topologies as families of 0-1 valued quasimetrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run an axiom checker over a document")
    p.add_argument("file")
    p.add_argument("--kind", required=True,
                   choices=["topology", "qmetric", "semigroup", "positives"])
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("canonical", help="topology document to its quasimetric family")
    p.add_argument("file")
    p.set_defaults(handler=cmd_canonical)

    p = sub.add_parser("topology", help="qmetric document to its generated topology")
    p.add_argument("file")
    p.set_defaults(handler=cmd_topology)

    p = sub.add_parser("roundtrip", help="verify topology -> family -> topology")
    p.add_argument("file", nargs="?")
    p.add_argument("--n", type=int, default=None,
                   help="check every topology on this many points")
    p.set_defaults(handler=cmd_roundtrip)

    p = sub.add_parser("separation", help="separation verdicts for a space")
    p.add_argument("file")
    p.add_argument("--method", required=True,
                   choices=["direct", "metric", "literal_r3", "literal_r4", "literal_r5"])
    p.set_defaults(handler=cmd_separation)

    p = sub.add_parser("converge", help="convergence verdict for a sequence or net")
    p.add_argument("sequence")
    p.add_argument("space")
    p.add_argument("--point", type=int, required=True)
    p.add_argument("--mode", required=True,
                   choices=["right", "left", "cauchy", "topological", "product",
                            "statistical"])
    p.add_argument("--strict", action="store_true",
                   help="treat an undecided statistical verdict as failure")
    p.add_argument("--horizon", type=int, default=100_000,
                   help="direct-evaluation cross-check bound (topological mode)")
    p.set_defaults(handler=cmd_converge)

    p = sub.add_parser("enumerate", help="stream every topology or preorder of a size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", required=True, choices=["topologies", "preorders"])
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("discrepancy",
                       help="search families where two predicates disagree")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--indices", type=int, default=1)
    p.set_defaults(handler=cmd_discrepancy)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (DocumentError, TailAnalysisError) as e:
        return _fail_input(str(e))
    except FileNotFoundError as e:
        return _fail_input(str(e))
    except ValueError as e:
        return _fail_input(str(e))


def entry() -> None:
    sys.exit(main())
