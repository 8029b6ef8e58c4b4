"""A small N-Triples subset: IRIs in angle brackets, plain string literals."""

from __future__ import annotations

import re
from typing import Iterable, Iterator, TextIO

from .rules import unescape
from .terms import Dictionary, Term

_TERM = r'(<[^<>"{}|^`\\\s]*>|"(?:[^"\\\n]|\\.)*")'
_LINE = re.compile(rf"^\s*{_TERM}\s*{_TERM}\s*{_TERM}\s*\.\s*(?:#.*)?$")


class NTriplesError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _term(token: str) -> Term:
    if token.startswith("<"):
        return Term.iri(token[1:-1])
    return Term.literal(unescape(token[1:-1]))


def parse_terms(text: str) -> Iterator[tuple[Term, Term, Term]]:
    for n, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.match(line)
        if m is None:
            raise NTriplesError(n, f"not a triple: {stripped[:60]!r}")
        yield tuple(_term(g) for g in m.groups())  # type: ignore[misc]


def parse_ntriples(text: str, dictionary: Dictionary) -> list[tuple[int, int, int]]:
    """Encode each line's triple, interning terms in reading order."""
    return [tuple(dictionary.intern(t) for t in terms) for terms in parse_terms(text)]  # type: ignore[misc]


def format_triple(triple, dictionary: Dictionary) -> str:
    s, p, o = (dictionary.lookup(r).n3() for r in triple)
    return f"{s} {p} {o} ."


def write_ntriples(triples: Iterable, dictionary: Dictionary, out: TextIO) -> int:
    count = 0
    for t in triples:
        out.write(format_triple(t, dictionary))
        out.write("\n")
        count += 1
    return count
