"""Ready-made inputs: the presidents example, random small instances, a clique-heavy bulk load."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .ntriples import parse_ntriples
from .rules import Atom, Program, Rule, Var, parse_rules
from .terms import DIFFERENT_FROM, SAME_AS, SAME_AS_IRI, Dictionary

EX = "http://example.org/"

PEX_RULES = f"""\
# whoever Obama is president of is the USA
[?x, <{SAME_AS_IRI}>, <{EX}USA>] :- [<{EX}Obama>, <{EX}presidentOf>, ?x] .
# whoever is president of the USA is Obama
[?x, <{SAME_AS_IRI}>, <{EX}Obama>] :- [?x, <{EX}presidentOf>, <{EX}USA>] .
"""

PEX_DATA = f"""\
<{EX}USPresident> <{EX}presidentOf> <{EX}US> .
<{EX}Obama> <{EX}presidentOf> <{EX}America> .
<{EX}Obama> <{EX}presidentOf> <{EX}US> .
"""

Q1 = f"SELECT ?x WHERE {{ ?x <{EX}presidentOf> ?y }}"
Q2 = f"SELECT ?y WHERE {{ ?x <{EX}presidentOf> <{EX}US> . BIND(STR(?x) AS ?y) }}"

# Interning in this order reproduces the merge choices of the worked
# example: America into USA, USA into US, USPresident into Obama.
TRACE_ORDER = ("Obama", "presidentOf", "US", "USA", "America", "USPresident")


@dataclass
class Instance:
    dictionary: Dictionary
    facts: list
    program: Program

    @property
    def universe(self) -> range:
        return self.dictionary.ids()


def pex(order: tuple[str, ...] | None = TRACE_ORDER) -> Instance:
    """The presidents example; ``order=None`` interns data first, then rule constants."""
    d = Dictionary()
    for name in order or ():
        d.iri(EX + name)
    facts = parse_ntriples(PEX_DATA, d)
    program = parse_rules(PEX_RULES, d)
    return Instance(d, facts, program)


def pex_names(d: Dictionary) -> dict[str, int]:
    return {name: d.iri(EX + name) for name in TRACE_ORDER}


@dataclass
class RandomShape:
    max_plain: int = 6
    max_facts: int = 12
    max_rules: int = 6
    max_body: int = 3
    same_as_rate: float = 0.3
    different_rate: float = 0.04
    variables: tuple[str, ...] = ("x", "y", "z")
    extras: dict = field(default_factory=dict)


def random_instance(rng: random.Random, shape: RandomShape | None = None) -> Instance:
    """A small random program and data set over at most eight resources.

    Two of the eight are sameAs and differentFrom; the rest are plain
    resources, the first two of which also serve as predicates.
    """
    shape = shape or RandomShape()
    d = Dictionary()
    k = rng.randint(2, shape.max_plain)
    names = [f"r{i}" for i in range(k)]
    rng.shuffle(names)
    plain = [d.iri(EX + n) for n in names]
    preds = plain[:2]

    def pick_pred() -> int:
        roll = rng.random()
        if roll < shape.same_as_rate:
            return SAME_AS
        if roll < shape.same_as_rate + shape.different_rate:
            return DIFFERENT_FROM
        return rng.choice(preds)

    facts = [
        (rng.choice(plain), pick_pred(), rng.choice(plain))
        for _ in range(rng.randint(0, shape.max_facts))
    ]

    variables = [Var(v) for v in shape.variables]
    rules = []
    for _ in range(rng.randint(0, shape.max_rules)):
        body = []
        for _ in range(rng.randint(1, shape.max_body)):
            s = rng.choice(variables) if rng.random() < 0.65 else rng.choice(plain)
            p = rng.choice(variables) if rng.random() < 0.15 else pick_pred()
            o = rng.choice(variables) if rng.random() < 0.65 else rng.choice(plain)
            body.append(Atom(s, p, o))
        body_vars = [v for a in body for v in a.variables()]

        def head_term(allow_pred: bool = False):
            if body_vars and rng.random() < 0.7:
                return rng.choice(body_vars)
            return pick_pred() if allow_pred else rng.choice(plain)

        head_p = head_term(True) if rng.random() < 0.1 else pick_pred()
        rules.append(Rule(Atom(head_term(), head_p, head_term()), tuple(body)))
    return Instance(d, facts, Program(tuple(rules)))


def clique_workload(
    triples: int = 100_000,
    clique_size: int = 1_000,
    cliques: int = 10,
    predicates: int = 5,
    seed: int = 7,
) -> Instance:
    """A bulk load dominated by a few large sameAs-cliques.

    Each clique is stated as a chain of sameAs facts over its members; the
    remaining triples link random members through a handful of predicates,
    and two rules add a little derived data on top.
    """
    rng = random.Random(seed)
    d = Dictionary()
    preds = [d.iri(f"{EX}p{i}") for i in range(predicates)]
    members = [[d.iri(f"{EX}c{c}_m{i}") for i in range(clique_size)] for c in range(cliques)]
    everyone = [m for group in members for m in group]
    facts = []
    for group in members:
        order = group[:]
        rng.shuffle(order)
        facts += [(a, SAME_AS, b) for a, b in zip(order, order[1:])]
    while len(facts) < triples:
        facts.append((rng.choice(everyone), rng.choice(preds), rng.choice(everyone)))
    x, y = Var("x"), Var("y")
    program = Program(
        (
            Rule(Atom(y, preds[1], x), (Atom(x, preds[0], y),)),
            Rule(Atom(x, preds[2], x), (Atom(x, preds[3], y),)),
        )
    )
    return Instance(d, facts, program)


def random_query(rng: random.Random, instance: Instance):
    """A random SELECT over the instance's vocabulary, occasionally naming an unknown IRI."""
    from .sparql import Bind, SelectQuery
    from .terms import Term

    d = instance.dictionary
    pool = [d.lookup(r) for r in d.ids()]
    names = ["a", "b", "c"]

    def term():
        roll = rng.random()
        if roll < 0.6:
            return Var(rng.choice(names))
        if roll < 0.97:
            return rng.choice(pool)
        return Term.iri(EX + "unknown")

    patterns = tuple((term(), term(), term()) for _ in range(rng.randint(1, 3)))
    used = list(dict.fromkeys(t for pat in patterns for t in pat if isinstance(t, Var)))
    if not used:
        patterns = patterns + ((Var("a"), rng.choice(pool), Var("b")),)
        used = [Var("a"), Var("b")]
    binds = []
    if rng.random() < 0.4:
        binds.append(Bind(rng.choice(used), Var("s")))
    available = used + [b.target for b in binds]
    k = rng.randint(1, len(available))
    projected = tuple(rng.sample(available, k))
    return SelectQuery(projected, patterns, tuple(binds))
