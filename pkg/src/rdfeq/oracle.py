"""Slow, independent reference implementations used to check the engine.

Nothing here touches the fact store, the rule index, the representative
map's clique lists or the annotated-query machinery. The equality axioms
are applied directly rather than through the rule objects the engine uses.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .rules import Program, Var
from .sparql import AnswerMultiset, SelectQuery, encode_term, str_of
from .terms import DIFFERENT_FROM, SAME_AS, Dictionary

FactSet = set


def _matches(atom, triple, sigma: dict) -> dict | None:
    out = sigma
    for term, value in zip(atom, triple):
        if isinstance(term, Var):
            bound = out.get(term)
            if bound is None:
                if out is sigma:
                    out = dict(sigma)
                out[term] = value
            elif bound != value:
                return None
        elif term != value:
            return None
    return out


class _Lookup:
    """Facts grouped by (position, value), rebuilt every round."""

    def __init__(self, facts: Iterable) -> None:
        self.facts = list(facts)
        self.by = defaultdict(list)
        for t in self.facts:
            for i in range(3):
                self.by[i, t[i]].append(t)

    def candidates(self, atom, sigma: dict) -> list:
        best = self.facts
        for i, term in enumerate(atom):
            value = sigma.get(term) if isinstance(term, Var) else term
            if value is not None:
                bucket = self.by.get((i, value), [])
                if len(bucket) < len(best):
                    best = bucket
        return best


def _fire(rule, lookup: _Lookup) -> Iterable[tuple]:
    subs = [{}]
    for atom in rule.body:
        subs = [ext for s in subs for t in lookup.candidates(atom, s) if (ext := _matches(atom, t, s)) is not None]
    for s in subs:
        yield tuple(s[t] if isinstance(t, Var) else t for t in rule.head)


def naive_materialise(facts: Iterable, program: Program, equality: bool = True) -> tuple[FactSet, bool]:
    """Round-based least fixpoint of ``program`` (plus the sameAs axioms if ``equality``).

    Returns the fact set and whether a resource was derived different from itself.
    """
    current = {tuple(t) for t in facts} | {tuple(t) for t in program.facts}
    while True:
        lookup = _Lookup(current)
        new = set()
        for rule in program.rules:
            new.update(_fire(rule, lookup))
        if equality:
            equal = defaultdict(set)
            for s, p, o in current:
                if p == SAME_AS:
                    equal[s].add(o)
            for s, p, o in current:
                new.update(((s, SAME_AS, s), (p, SAME_AS, p), (o, SAME_AS, o)))
                new.update((s2, p, o) for s2 in equal.get(s, ()))
                new.update((s, p2, o) for p2 in equal.get(p, ()))
                new.update((s, p, o2) for o2 in equal.get(o, ()))
        if new <= current:
            break
        current |= new
    clash = equality and any(p == DIFFERENT_FROM and s == o for s, p, o in current)
    if program.contradiction is not None:
        clash = clash or any(_matches(program.contradiction, t, {}) is not None for t in current)
    return current, clash


def classes(rho, universe: Iterable[int]) -> dict[int, list[int]]:
    """Group resources by their representative, using resolution only."""
    out = defaultdict(list)
    for r in universe:
        out[rho.resolve(r)].append(r)
    return out


def expand_store(triples: Iterable, rho, universe: Iterable[int]) -> FactSet:
    """All triples over ``universe`` whose representative image lies in ``triples``."""
    members = classes(rho, universe)
    out = set()
    for s, p, o in triples:
        out.update(itertools.product(members.get(s, ()), members.get(p, ()), members.get(o, ())))
    return out


@dataclass
class RewritingReport:
    no_equalities: bool
    minimal: bool
    represents: bool
    contradiction_agrees: bool
    missing: set = field(default_factory=set)
    extra: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return self.no_equalities and self.minimal and self.represents and self.contradiction_agrees

    def summary(self) -> str:
        parts = [
            f"equalities captured: {self.no_equalities}",
            f"minimal: {self.minimal}",
            f"represents fixpoint: {self.represents}",
            f"contradiction agrees: {self.contradiction_agrees}",
        ]
        if self.missing:
            parts.append(f"missing {len(self.missing)}")
        if self.extra:
            parts.append(f"extra {len(self.extra)}")
        return "; ".join(parts)


def check_rewriting(result, facts: Iterable, program: Program, universe: Iterable[int] | None = None) -> RewritingReport:
    """Check the three guarantees of a finished REW run against the naive fixpoint."""
    rho = result.rho
    triples = [f.triple for f in result.store.unmarked()]
    if universe is None:
        universe = range(1, len(rho) + 1)
    universe = list(universe)
    no_equalities = all(s == o for s, p, o in triples if p == SAME_AS)
    minimal = all(rho.normalize_fact(t) == t for t in triples)
    expected, clash = naive_materialise(facts, program, equality=True)
    got = expand_store(triples, rho, universe)
    return RewritingReport(
        no_equalities=no_equalities,
        minimal=minimal,
        represents=got == expected,
        contradiction_agrees=clash == (result.outcome == "contradiction"),
        missing=expected - got,
        extra=got - expected,
    )


def clique_derivation_formula(n: int) -> int:
    return 2 * n**3 + n**2 + n


def count_clique_derivations(n: int) -> int:
    """Count the derivations of a clique's n² sameAs triples under the sameAs axioms.

    The clique is seeded with a reflexive fact on its first member and a
    chain of n-1 sameAs facts, then closed under the axioms. Replacement
    derivations are (rule, ground substitution) pairs whose body holds in
    the closure and whose head is an intra-clique sameAs triple;
    reflexivity is counted once per reflexive triple it produces.
    """
    if n < 1:
        raise ValueError("clique size must be positive")
    members = list(range(100, 100 + n))
    seed = [(members[0], SAME_AS, members[0])]
    seed += [(a, SAME_AS, b) for a, b in zip(members, members[1:])]
    closure, _ = naive_materialise(seed, Program(), equality=True)
    targets = {(a, SAME_AS, b) for a in members for b in members}
    if not targets <= closure:
        raise AssertionError("closure is missing intra-clique sameAs triples")
    equal = defaultdict(list)
    for s, p, o in closure:
        if p == SAME_AS:
            equal[s].append(o)
    count = 0
    for s, p, o in closure:
        # replacement in subject, predicate and object position
        count += sum((s2, p, o) in targets for s2 in equal[s])
        count += sum((s, p2, o) in targets for p2 in equal[p])
        count += sum((s, p, o2) in targets for o2 in equal[o])
    count += sum(1 for a, _, b in targets if a == b)
    return count


def reference_answer(
    facts: Iterable,
    query: SelectQuery,
    dictionary: Dictionary,
    base_iri: str | None = None,
) -> AnswerMultiset:
    """Bag-semantics evaluation straight over a set of triples."""
    facts = {tuple(t) for t in facts}
    patterns = [tuple(encode_term(t, dictionary) for t in pat) for pat in query.patterns]
    solutions = [{}]
    for pat in patterns:
        solutions = [ext for s in solutions for t in facts if (ext := _matches(pat, t, s)) is not None]
    rows = []
    for sol in solutions:
        values = {v: dictionary.lookup(i) for v, i in sol.items()}
        for b in query.binds:
            values[b.target] = str_of(values[b.source], base_iri)
        rows.append(tuple(values[v] for v in query.variables))
    return AnswerMultiset(tuple(query.variables), Counter(rows))
