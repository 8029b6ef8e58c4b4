"""Rules, programs, the sameAs axioms, and the rule text format.

Rule text, one statement per ``.``::

    [?x, <http://www.w3.org/2002/07/owl#sameAs>, <http://ex.org/USA>]
        :- [<http://ex.org/Obama>, <http://ex.org/presidentOf>, ?x] .

A bare ``[s, p, o] .`` statement is a fact. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Union

from .store import Window
from .terms import DIFFERENT_FROM, SAME_AS, Dictionary, Term


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


TermRef = Union[int, Var]


@dataclass(frozen=True)
class Atom:
    s: TermRef
    p: TermRef
    o: TermRef

    def __iter__(self):
        return iter((self.s, self.p, self.o))

    def variables(self) -> list[Var]:
        seen: list[Var] = []
        for t in self:
            if isinstance(t, Var) and t not in seen:
                seen.append(t)
        return seen

    def map_constants(self, fn: Callable[[int], int]) -> "Atom":
        return Atom(*(t if isinstance(t, Var) else fn(t) for t in self))

    def substitute(self, sigma: dict) -> tuple:
        """Apply a substitution; unbound variables become None."""
        return tuple(sigma.get(t) if isinstance(t, Var) else t for t in self)

    def ground(self, sigma: dict) -> tuple[int, int, int]:
        return tuple(sigma[t] if isinstance(t, Var) else t for t in self)  # type: ignore[return-value]

    def match(self, triple, sigma: dict | None = None) -> dict | None:
        """Extend ``sigma`` so that this atom maps onto ``triple``, or None."""
        out = dict(sigma) if sigma else {}
        for term, value in zip(self, triple):
            if isinstance(term, Var):
                bound = out.get(term)
                if bound is None:
                    out[term] = value
                elif bound != value:
                    return None
            elif term != value:
                return None
        return out

    def show(self, dictionary: Dictionary | None = None) -> str:
        def one(t):
            if isinstance(t, Var):
                return repr(t)
            return dictionary.show(t) if dictionary else str(t)

        return "[" + ", ".join(one(t) for t in self) + "]"


AnnotatedQuery = tuple[tuple[Atom, Window], ...]


class UnsafeRuleError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Atom, ...]

    def __post_init__(self):
        if not self.body:
            raise ValueError("rule body must be nonempty")
        body_vars = {v for atom in self.body for v in atom.variables()}
        for v in self.head.variables():
            if v not in body_vars:
                raise UnsafeRuleError(f"head variable {v!r} does not occur in the body")

    def map_constants(self, fn: Callable[[int], int]) -> "Rule":
        return Rule(self.head.map_constants(fn), tuple(a.map_constants(fn) for a in self.body))

    def constants(self) -> set[int]:
        return {t for atom in (self.head, *self.body) for t in atom if not isinstance(t, Var)}

    def show(self, dictionary: Dictionary | None = None) -> str:
        body = ", ".join(a.show(dictionary) for a in self.body)
        return f"{self.head.show(dictionary)} :- {body} ."


def body_annotated(rule: Rule) -> AnnotatedQuery:
    return tuple((atom, Window.INCLUSIVE) for atom in rule.body)


def _pivot_query(rule: Rule, i: int) -> AnnotatedQuery:
    before = tuple((a, Window.STRICT) for a in rule.body[:i])
    after = tuple((a, Window.INCLUSIVE) for a in rule.body[i + 1 :])
    return before + after


def _signature(atom: Atom) -> tuple:
    terms = tuple(atom)
    mask = tuple(i for i, t in enumerate(terms) if not isinstance(t, Var))
    return mask, tuple(terms[i] for i in mask)


@dataclass
class Program:
    rules: tuple[Rule, ...] = ()
    contradiction: Atom | None = None
    facts: tuple[tuple[int, int, int], ...] = ()
    _index: dict | None = field(default=None, init=False, repr=False, compare=False)
    _masks: tuple | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        # structurally equal rules collapse; first occurrence keeps its place
        self.rules = tuple(dict.fromkeys(self.rules))
        self._ruleset = frozenset(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, rule: object) -> bool:
        return rule in self._ruleset

    def __or__(self, other: "Program") -> "Program":
        return Program(
            self.rules + other.rules,
            self.contradiction or other.contradiction,
            self.facts + other.facts,
        )

    def map_constants(self, fn: Callable[[int], int]) -> "Program":
        contradiction = self.contradiction.map_constants(fn) if self.contradiction else None
        return Program(tuple(r.map_constants(fn) for r in self.rules), contradiction, self.facts)

    def _build_index(self) -> None:
        index: dict[tuple, list] = {}
        for rule in self.rules:
            for i, atom in enumerate(rule.body):
                mask, consts = _signature(atom)
                index.setdefault((mask, consts), []).append((rule, i, atom, _pivot_query(rule, i)))
        # masks go first: readers test _index, so it must be published last
        self._masks = tuple(sorted({mask for mask, _ in index}))
        self._index = index

    def rules_for(self, fact) -> list[tuple[Rule, AnnotatedQuery, dict]]:
        """Each (rule, pivot query, matching substitution) for a body atom matching ``fact``."""
        if self._index is None:
            self._build_index()
        triple = tuple(fact)
        out = []
        for mask in self._masks:  # type: ignore[union-attr]
            bucket = self._index.get((mask, tuple(triple[i] for i in mask)))  # type: ignore[union-attr]
            if not bucket:
                continue
            for rule, _i, atom, query in bucket:
                sigma = atom.match(triple)
                if sigma is not None:
                    out.append((rule, query, sigma))
        return out

    def matches_contradiction(self, fact) -> bool:
        return self.contradiction is not None and self.contradiction.match(tuple(fact)) is not None


def rewrite_rule(rho, rule: Rule) -> Rule:
    return rule.map_constants(rho.resolve)


def rewrite_program(rho, program: Program) -> tuple[Program, list[Rule]]:
    """Normalise a program under ``rho``; also return the rules that changed and are new."""
    rewritten = program.map_constants(rho.resolve)
    changed = [r for r in rewritten.rules if r not in program]
    return rewritten, list(dict.fromkeys(changed))


def eq_axiomatisation() -> Program:
    """sameAs as a congruence: reflexivity per position, replacement per position, clash."""
    x1, x2, x3 = Var("x1"), Var("x2"), Var("x3")
    y1, y2, y3 = Var("y1"), Var("y2"), Var("y3")
    any_triple = Atom(x1, x2, x3)
    rules = (
        Rule(Atom(x1, SAME_AS, x1), (any_triple,)),
        Rule(Atom(x2, SAME_AS, x2), (any_triple,)),
        Rule(Atom(x3, SAME_AS, x3), (any_triple,)),
        Rule(Atom(y1, x2, x3), (any_triple, Atom(x1, SAME_AS, y1))),
        Rule(Atom(x1, y2, x3), (any_triple, Atom(x2, SAME_AS, y2))),
        Rule(Atom(x1, x2, y3), (any_triple, Atom(x3, SAME_AS, y3))),
    )
    # the seventh rule is the clash rule, kept out of band
    return Program(rules, contradiction=Atom(Var("x"), DIFFERENT_FROM, Var("x")))


# -- text format --------------------------------------------------------

class RuleSyntaxError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<implies>:-)
  | (?P<punct>[\[\],.])
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<lit>"(?:[^"\\\n]|\\.)*")
    """,
    re.VERBOSE,
)

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "'": "'"}


def unescape(body: str) -> str:
    return re.sub(r"\\(.)", lambda m: _ESCAPES.get(m.group(1), m.group(1)), body)


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos, line = 0, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise RuleSyntaxError(line, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            yield kind, value, line  # type: ignore[misc]
        line += value.count("\n")
        pos = m.end()


def parse_term(kind: str, value: str, dictionary: Dictionary) -> TermRef:
    if kind == "var":
        return Var(value[1:])
    if kind == "iri":
        return dictionary.intern(Term.iri(value[1:-1]))
    return dictionary.intern(Term.literal(unescape(value[1:-1])))


def parse_rules(text: str, dictionary: Dictionary) -> Program:
    toks = list(_tokens(text))
    pos = 0
    rules: list[Rule] = []
    facts: list[tuple[int, int, int]] = []

    def peek():
        return toks[pos] if pos < len(toks) else ("eof", "", toks[-1][2] if toks else 1)

    def expect(kind: str, value: str | None = None):
        nonlocal pos
        k, v, line = peek()
        if k != kind or (value is not None and v != value):
            want = value or kind
            got = v or "end of input"
            raise RuleSyntaxError(line, f"expected {want!r}, got {got!r}")
        pos += 1
        return v, line

    def atom() -> Atom:
        nonlocal pos
        expect("punct", "[")
        terms = []
        for i in range(3):
            k, v, line = peek()
            if k not in ("var", "iri", "lit"):
                raise RuleSyntaxError(line, f"expected a term, got {v or 'end of input'!r}")
            pos += 1
            terms.append(parse_term(k, v, dictionary))
            if i < 2:
                expect("punct", ",")
        expect("punct", "]")
        return Atom(*terms)

    while pos < len(toks):
        _, _, start_line = peek()
        head = atom()
        k, v, line = peek()
        if k == "punct" and v == ".":
            pos += 1
            if head.variables():
                raise RuleSyntaxError(start_line, "a fact may not contain variables")
            facts.append(tuple(head))  # type: ignore[arg-type]
            continue
        expect("implies")
        body = [atom()]
        while peek()[:2] == ("punct", ","):
            pos += 1
            body.append(atom())
        expect("punct", ".")
        try:
            rules.append(Rule(head, tuple(body)))
        except UnsafeRuleError as exc:
            raise UnsafeRuleError(f"line {start_line}: {exc}") from None
    return Program(tuple(rules), facts=tuple(facts))


def format_rule(rule: Rule, dictionary: Dictionary) -> str:
    """Render ``rule`` in the text format that ``parse_rules`` reads."""

    def term(t) -> str:
        return f"?{t.name}" if isinstance(t, Var) else dictionary.lookup(t).n3()

    def atom(a: Atom) -> str:
        return "[" + ", ".join(term(t) for t in a) + "]"

    return f"{atom(rule.head)} :- {', '.join(atom(a) for a in rule.body)} ."
