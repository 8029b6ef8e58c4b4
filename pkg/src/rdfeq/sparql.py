"""SELECT queries over a rewritten store, answered as if over its expansion.

Supported surface::

    SELECT ?x ?y WHERE { ?x <p> ?y . ?y <q> "lit" . BIND(STR(?x) AS ?s) }

Matching runs on representatives only. Each variable is then expanded to
its clique members exactly once: just before the first BIND that reads it,
or at projection time if it is kept. A variable that is projected away
without having been expanded instead multiplies the answer count by its
clique size, which is what preserves bag semantics.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Union

from .rules import Var, unescape
from .store import FactStore
from .terms import Dictionary, Term

QTerm = Union[Var, Term, int]


class QuerySyntaxError(ValueError):
    pass


class ExpansionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Bind:
    source: Var
    target: Var


@dataclass(frozen=True)
class SelectQuery:
    variables: tuple[Var, ...]
    patterns: tuple[tuple[QTerm, QTerm, QTerm], ...]
    binds: tuple[Bind, ...] = ()

    def __post_init__(self):
        bound = {t for pat in self.patterns for t in pat if isinstance(t, Var)}
        for b in self.binds:
            if b.source not in bound:
                raise QuerySyntaxError(f"BIND reads unbound variable {b.source!r}")
            if b.target in bound:
                raise QuerySyntaxError(f"BIND target {b.target!r} is not fresh")
            bound.add(b.target)
        for v in self.variables:
            if v not in bound:
                raise QuerySyntaxError(f"projected variable {v!r} does not occur in the query")

    def pattern_variables(self) -> list[Var]:
        return list(dict.fromkeys(t for pat in self.patterns for t in pat if isinstance(t, Var)))


@dataclass
class AnswerMultiset:
    variables: tuple[Var, ...]
    counts: Counter

    def __len__(self) -> int:
        return sum(self.counts.values())

    def items(self):
        """(binding, multiplicity) pairs; bindings map variable names to terms."""
        for row, n in self.counts.items():
            yield {v.name: t for v, t in zip(self.variables, row)}, n

    def rows(self) -> list[tuple[Term, ...]]:
        """One row per multiplicity unit, in a stable order."""
        out = []
        for row in sorted(self.counts):
            out.extend([row] * self.counts[row])
        return out

    def to_tsv(self) -> str:
        lines = ["\t".join(f"?{v.name}" for v in self.variables)]
        lines += ["\t".join(t.n3() for t in row) for row in self.rows()]
        return "\n".join(lines) + "\n"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnswerMultiset):
            return NotImplemented
        return self.variables == other.variables and +self.counts == +other.counts


# -- parsing --------------------------------------------------------------

_QTOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<kw>(?i:SELECT|WHERE|BIND|STR|AS)\b)
  | (?P<var>[?$][A-Za-z_][A-Za-z0-9_]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<lit>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}().])
    """,
    re.VERBOSE,
)


def _qtokens(text: str) -> list[tuple[str, str]]:
    out, pos = [], 0
    while pos < len(text):
        m = _QTOKEN.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected text at offset {pos}: {text[pos:pos + 20]!r}")
        if m.lastgroup != "ws":
            kind, value = m.lastgroup, m.group()
            out.append((kind, value.upper() if kind == "kw" else value))
        pos = m.end()
    return out


def parse_query(text: str) -> SelectQuery:
    toks = _qtokens(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("eof", "")

    def take(kind: str, value: str | None = None) -> str:
        nonlocal pos
        k, v = peek()
        if k != kind or (value is not None and v != value):
            raise QuerySyntaxError(f"expected {value or kind}, got {v or 'end of query'!r}")
        pos += 1
        return v

    def term():
        nonlocal pos
        k, v = peek()
        pos += 1
        if k == "var":
            return Var(v[1:])
        if k == "iri":
            return Term.iri(v[1:-1])
        if k == "lit":
            return Term.literal(unescape(v[1:-1]))
        raise QuerySyntaxError(f"expected a term, got {v or 'end of query'!r}")

    take("kw", "SELECT")
    variables = []
    while peek()[0] == "var":
        variables.append(Var(take("var")[1:]))
    if not variables:
        raise QuerySyntaxError("SELECT needs at least one variable")
    take("kw", "WHERE")
    take("punct", "{")
    patterns, binds = [], []
    while peek() != ("punct", "}"):
        if peek() == ("kw", "BIND"):
            pos += 1
            take("punct", "(")
            take("kw", "STR")
            take("punct", "(")
            source = Var(take("var")[1:])
            take("punct", ")")
            take("kw", "AS")
            target = Var(take("var")[1:])
            take("punct", ")")
            binds.append(Bind(source, target))
        else:
            if binds:
                raise QuerySyntaxError("triple patterns must precede BIND clauses")
            patterns.append((term(), term(), term()))
        if peek() == ("punct", "."):
            pos += 1
    take("punct", "}")
    if pos != len(toks):
        raise QuerySyntaxError(f"trailing input {toks[pos][1]!r}")
    if not patterns:
        raise QuerySyntaxError("empty graph pattern")
    return SelectQuery(tuple(variables), tuple(patterns), tuple(binds))


# -- evaluation over the rewritten store ------------------------------------

def encode_term(t: QTerm, dictionary: Dictionary) -> QTerm:
    """Terms become ids; terms never interned become 0, which matches nothing."""
    if isinstance(t, Term):
        return dictionary.get(t) or 0
    return t


def normalize_query(rho, query: SelectQuery, dictionary: Dictionary | None = None) -> SelectQuery:
    def norm(t):
        if isinstance(t, Var):
            return t
        if isinstance(t, Term):
            if dictionary is None:
                raise ValueError("a dictionary is needed to encode query constants")
            t = encode_term(t, dictionary)
        return rho.resolve(t) if t else 0

    patterns = tuple(tuple(norm(t) for t in pat) for pat in query.patterns)
    return SelectQuery(query.variables, patterns, query.binds)  # type: ignore[arg-type]


def match_bgp(store: FactStore, patterns) -> list[dict]:
    solutions: list[dict] = [{}]
    for pat in patterns:
        nxt = []
        for sol in solutions:
            probe = tuple(sol.get(t) if isinstance(t, Var) else t for t in pat)
            if 0 in probe:
                continue
            for fact in store.scan(probe):
                ext = dict(sol)
                for term, value in zip(pat, fact.triple):
                    if isinstance(term, Var):
                        if ext.setdefault(term, value) != value:
                            break
                else:
                    nxt.append(ext)
        solutions = nxt
    return solutions


def expand_variable(solutions: list[dict], var: Var, rho, expanded: set) -> list[dict]:
    if var in expanded:
        raise ExpansionError(f"{var!r} was already expanded")
    expanded.add(var)
    out = []
    for sol in solutions:
        for member in rho.clique_members(sol[var]):
            copy = dict(sol)
            copy[var] = member
            out.append(copy)
    return out


def str_of(term: Term, base_iri: str | None = None) -> Term:
    if term.kind == "literal":
        return term
    lex = term.lexical
    if base_iri and lex.startswith(base_iri):
        lex = lex[len(base_iri) :]
    return Term.literal(lex)


def _as_term(value, dictionary: Dictionary) -> Term:
    return value if isinstance(value, Term) else dictionary.lookup(value)


def apply_bind(
    solutions: list[dict],
    bind: Bind,
    dictionary: Dictionary,
    expanded: set,
    base_iri: str | None = None,
) -> list[dict]:
    if bind.source not in expanded:
        raise ExpansionError(f"{bind.source!r} must be expanded before STR reads it")
    out = []
    for sol in solutions:
        copy = dict(sol)
        copy[bind.target] = str_of(_as_term(sol[bind.source], dictionary), base_iri)
        out.append(copy)
    expanded.add(bind.target)
    return out


def project(
    solutions: list[dict],
    variables: Iterable[Var],
    rho,
    expanded: set,
    dictionary: Dictionary,
) -> AnswerMultiset:
    variables = tuple(variables)
    counts: Counter = Counter()
    for sol in solutions:
        weight = 1
        for v, value in sol.items():
            if v not in variables and v not in expanded:
                weight *= rho.clique_size(value)
        choices = []
        for v in variables:
            value = sol[v]
            if v in expanded:
                choices.append((_as_term(value, dictionary),))
            else:
                choices.append(tuple(dictionary.lookup(m) for m in rho.clique_members(value)))
        for row in itertools.product(*choices):
            counts[row] += weight
    return AnswerMultiset(variables, counts)


def answer(
    store: FactStore,
    rho,
    dictionary: Dictionary,
    query: SelectQuery | str,
    base_iri: str | None = None,
) -> AnswerMultiset:
    if isinstance(query, str):
        query = parse_query(query)
    normal = normalize_query(rho, query, dictionary)
    solutions = match_bgp(store, normal.patterns)
    expanded: set = set()
    for bind in normal.binds:
        if bind.source not in expanded:
            solutions = expand_variable(solutions, bind.source, rho, expanded)
        solutions = apply_bind(solutions, bind, dictionary, expanded, base_iri)
    return project(solutions, normal.variables, rho, expanded, dictionary)
