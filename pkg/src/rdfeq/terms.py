"""Term dictionary: dense integer ids for IRIs and plain string literals."""

from __future__ import annotations

import threading
from dataclasses import dataclass

OWL = "http://www.w3.org/2002/07/owl#"
SAME_AS_IRI = OWL + "sameAs"
DIFFERENT_FROM_IRI = OWL + "differentFrom"

# Interned eagerly by every Dictionary, so their ids are fixed.
SAME_AS = 1
DIFFERENT_FROM = 2


class UnknownResource(KeyError):
    pass


@dataclass(frozen=True, order=True)
class Term:
    kind: str  # "iri" or "literal"
    lexical: str

    def __post_init__(self):
        if self.kind not in ("iri", "literal"):
            raise ValueError(f"bad term kind {self.kind!r}")

    @classmethod
    def iri(cls, lexical: str) -> "Term":
        return cls("iri", lexical)

    @classmethod
    def literal(cls, lexical: str) -> "Term":
        return cls("literal", lexical)

    def n3(self) -> str:
        if self.kind == "iri":
            return f"<{self.lexical}>"
        escaped = (
            self.lexical.replace("\\", "\\\\")
            .replace('"', '\\"')
            .replace("\n", "\\n")
            .replace("\r", "\\r")
            .replace("\t", "\\t")
        )
        return f'"{escaped}"'

    def __str__(self) -> str:
        return self.n3()


class Dictionary:
    """Bijection between terms and ids 1..k, assigned in first-intern order."""

    def __init__(self) -> None:
        self._ids: dict[Term, int] = {}
        self._terms: list[Term | None] = [None]
        self._lock = threading.Lock()
        self.intern(Term.iri(SAME_AS_IRI))
        self.intern(Term.iri(DIFFERENT_FROM_IRI))

    def intern(self, term: Term) -> int:
        found = self._ids.get(term)
        if found is not None:
            return found
        with self._lock:
            found = self._ids.get(term)
            if found is None:
                found = len(self._terms)
                self._terms.append(term)
                self._ids[term] = found
            return found

    def iri(self, lexical: str) -> int:
        return self.intern(Term.iri(lexical))

    def literal(self, lexical: str) -> int:
        return self.intern(Term.literal(lexical))

    def lookup(self, rid: int) -> Term:
        if not isinstance(rid, int) or rid <= 0 or rid >= len(self._terms):
            raise UnknownResource(f"unknown resource {rid!r}")
        return self._terms[rid]  # type: ignore[return-value]

    def get(self, term: Term) -> int | None:
        return self._ids.get(term)

    def __len__(self) -> int:
        return len(self._terms) - 1

    def __contains__(self, term: object) -> bool:
        return term in self._ids

    def ids(self) -> range:
        return range(1, len(self._terms))

    def show(self, rid: int) -> str:
        """Short human label, used in traces and error messages."""
        term = self.lookup(rid)
        if term.kind == "literal":
            return term.n3()
        lex = term.lexical
        for sep in ("#", "/"):
            if sep in lex:
                lex = lex.rsplit(sep, 1)[1] or lex
        return lex


def precedes(a: int, b: int) -> bool:
    """Strict total order on resources used to pick merge direction."""
    return a < b
