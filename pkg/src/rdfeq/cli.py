"""Command-line front end.

Output precedence on standard output: query answers (TSV), then the
exported store when no ``--out`` is given, then statistics. Anything that
would compete for standard output goes to standard error instead.

Exit codes: 0 consistent, 2 contradiction, 1 usage, IO or parse errors.
With ``--verify`` the status is 0 when the rewriting guarantees hold
and 3 when one is violated, whatever the outcome of the run.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .materialise import CONTRADICTION, EngineConfig, MaterialisationStats, Mode, materialise
from .ntriples import NTriplesError, parse_ntriples, write_ntriples
from .oracle import check_rewriting, expand_store
from .rules import Program, RuleSyntaxError, UnsafeRuleError, parse_rules
from .sparql import ExpansionError, QuerySyntaxError, answer, parse_query
from .terms import Dictionary

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONTRADICTION = 2
EXIT_VERIFY = 3


@dataclass
class RunReport:
    mode: str
    thread_count: int
    wall_time_seconds: float
    stats: MaterialisationStats = field(default_factory=MaterialisationStats)
    triples_after_unmarked: int = 0
    triples_after_total: int = 0
    outcome: str = "consistent"

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "thread_count": self.thread_count,
            "wall_time_seconds": self.wall_time_seconds,
            "stats": self.stats.as_dict(),
            "triples_after_unmarked": self.triples_after_unmarked,
            "triples_after_total": self.triples_after_total,
            "outcome": self.outcome,
        }

    def table(self) -> str:
        rows = [
            ("mode", self.mode),
            ("threads", self.thread_count),
            ("outcome", self.outcome),
            ("seconds", f"{self.wall_time_seconds:.3f}"),
            ("triples (unmarked)", self.triples_after_unmarked),
            ("triples (total)", self.triples_after_total),
        ]
        rows += list(self.stats.as_dict().items())
        width = max(len(str(k)) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rdfeq",
        description="Materialise datalog rules over RDF data with owl:sameAs by axioms or by rewriting.",
    )
    ap.add_argument("--rules", required=True, metavar="FILE", help="rule file")
    ap.add_argument("--data", required=True, metavar="FILE", help="N-Triples data file")
    ap.add_argument("--mode", choices=["ax", "rew"], default="rew")
    ap.add_argument("--threads", type=int, default=1, metavar="N")
    ap.add_argument("--stats", action="store_true", help="print run statistics as one JSON object")
    ap.add_argument("--export", choices=["plain", "expanded"], help="write the resulting store")
    ap.add_argument("--out", metavar="FILE", help="destination for --export (default: standard output)")
    ap.add_argument("--query", metavar="FILE", help="SELECT query to answer over the result")
    ap.add_argument("--verify", action="store_true", help="check the rewriting guarantees against a naive fixpoint")
    ap.add_argument("--base-iri", metavar="IRI", help="prefix stripped by STR() in query answers")
    return ap


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load(rules_path: str, data_path: str) -> tuple[Dictionary, list, Program]:
    """Data is interned first in line order, then any new rule constants."""
    d = Dictionary()
    facts = parse_ntriples(_read(data_path), d)
    program = parse_rules(_read(rules_path), d)
    return d, facts, program


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    if args.threads < 1:
        print("rdfeq: --threads must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        d, facts, program = load(args.rules, args.data)
        query = parse_query(_read(args.query)) if args.query else None
    except OSError as exc:
        print(f"rdfeq: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (NTriplesError, RuleSyntaxError, UnsafeRuleError, QuerySyntaxError) as exc:
        print(f"rdfeq: {exc}", file=sys.stderr)
        return EXIT_ERROR

    mode = Mode(args.mode)
    result = materialise(facts, program, EngineConfig(mode=mode, threads=args.threads), size=len(d))
    report = RunReport(
        mode=mode.value,
        thread_count=args.threads,
        wall_time_seconds=result.wall_time,
        stats=result.stats,
        triples_after_unmarked=result.stats.facts_unmarked,
        triples_after_total=result.stats.facts_total,
        outcome=result.outcome,
    )
    stdout_taken = False

    if query is not None:
        try:
            answers = answer(result.store, result.rho, d, query, base_iri=args.base_iri)
        except ExpansionError as exc:
            print(f"rdfeq: {exc}", file=sys.stderr)
            return EXIT_ERROR
        sys.stdout.write(answers.to_tsv())
        stdout_taken = True

    if args.export:
        triples = sorted(result.store.triples())
        if args.export == "expanded":
            triples = sorted(expand_store(triples, result.rho, d.ids()))
        try:
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    write_ntriples(triples, d, fh)
            elif stdout_taken:
                write_ntriples(triples, d, sys.stderr)
            else:
                write_ntriples(triples, d, sys.stdout)
                stdout_taken = True
        except OSError as exc:
            print(f"rdfeq: {exc}", file=sys.stderr)
            return EXIT_ERROR

    stream = sys.stderr if stdout_taken else sys.stdout
    if args.stats:
        stream.write(json.dumps(report.as_dict(), sort_keys=True) + "\n")
    elif not stdout_taken:
        stream.write(report.table())

    code = EXIT_CONTRADICTION if result.outcome == CONTRADICTION else EXIT_OK
    if args.verify:
        if mode is Mode.REW:
            check = check_rewriting(result, facts, program, d.ids())
        else:
            check = verify_rew(facts, program, args.threads, d)
        print(f"verify: {'ok' if check.ok else 'FAILED'} ({check.summary()})", file=sys.stderr)
        # with --verify the exit status reports the check alone
        return EXIT_OK if check.ok else EXIT_VERIFY
    return code


def verify_rew(facts, program: Program, threads: int, d: Dictionary):
    result = materialise(facts, program, EngineConfig(mode=Mode.REW, threads=threads), size=len(d))
    return check_rewriting(result, facts, program, d.ids())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
