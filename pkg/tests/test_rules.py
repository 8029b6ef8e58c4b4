import random

import pytest

from rdfeq.repmap import RepresentativeMap
from rdfeq.rules import (
    Atom,
    Program,
    Rule,
    RuleSyntaxError,
    UnsafeRuleError,
    Var,
    body_annotated,
    eq_axiomatisation,
    parse_rules,
    rewrite_program,
    rewrite_rule,
)
from rdfeq.store import Window
from rdfeq.terms import DIFFERENT_FROM, SAME_AS, Dictionary
from rdfeq.workloads import EX, pex, pex_names

x, y, z = Var("x"), Var("y"), Var("z")


def test_parse_presidents_rules():
    inst = pex()
    n = pex_names(inst.dictionary)
    r, s = inst.program.rules
    assert r == Rule(Atom(x, SAME_AS, n["USA"]), (Atom(n["Obama"], n["presidentOf"], x),))
    assert s == Rule(Atom(x, SAME_AS, n["Obama"]), (Atom(x, n["presidentOf"], n["USA"]),))


def test_parse_empty_and_comments():
    assert len(parse_rules("", Dictionary())) == 0
    assert len(parse_rules("# nothing here\n", Dictionary())) == 0


def test_parse_multi_atom_body_and_literal():
    d = Dictionary()
    prog = parse_rules('[?x, <p>, "a \\"b\\""] :- [?x, <q>, ?y], [?y, <r>, ?x] .', d)
    (rule,) = prog.rules
    assert len(rule.body) == 2
    assert d.lookup(rule.head.o).lexical == 'a "b"'


def test_parse_inline_fact():
    d = Dictionary()
    prog = parse_rules("[<a>, <p>, <b>] .", d)
    assert prog.rules == ()
    assert prog.facts == ((d.iri("a"), d.iri("p"), d.iri("b")),)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(RuleSyntaxError) as err:
        parse_rules("[?x, <p>, ?x] :- [?x, <q>, ?x] .\n[?x <p> ?y] :- [?x, <q>, ?y] .", Dictionary())
    assert err.value.line == 2
    with pytest.raises(RuleSyntaxError):
        parse_rules("[?x, <p>, ?x] :- [?x, <q>, ?x]", Dictionary())
    with pytest.raises(RuleSyntaxError):
        parse_rules("[?x, <p>, <o>] .", Dictionary())


def test_unsafe_rule_names_variable():
    with pytest.raises(UnsafeRuleError, match="z"):
        parse_rules("[?z, <p>, ?x] :- [?x, <q>, <o>] .", Dictionary())
    with pytest.raises(UnsafeRuleError):
        Rule(Atom(z, 5, 5), (Atom(x, 5, 5),))


def test_axiomatisation_shape():
    ax = eq_axiomatisation()
    assert len(ax.rules) == 6
    assert ax.contradiction == Atom(Var("x"), DIFFERENT_FROM, Var("x"))
    x1, x2, x3, y1 = Var("x1"), Var("x2"), Var("x3"), Var("y1")
    assert Rule(Atom(y1, x2, x3), (Atom(x1, x2, x3), Atom(x1, SAME_AS, y1))) in ax
    # neither symmetry nor transitivity is stated
    heads = [r.head for r in ax.rules]
    assert all(len(r.body) <= 2 for r in ax.rules)
    assert sum(1 for r in ax.rules if len(r.body) == 1) == 3
    assert len(set(heads)) == 6


def test_rules_for_single_match():
    inst = pex()
    n = pex_names(inst.dictionary)
    r = inst.program.rules[0]
    out = inst.program.rules_for((n["Obama"], n["presidentOf"], n["America"]))
    assert out == [(r, (), {x: n["America"]})]


def test_rules_for_no_match():
    inst = pex()
    assert inst.program.rules_for((SAME_AS, SAME_AS, SAME_AS)) == []


def test_rules_for_repeated_atom_gives_two_annotations():
    a = Atom(x, 7, y)
    rule = Rule(Atom(x, 8, y), (a, a))
    out = Program((rule,)).rules_for((1, 7, 2))
    assert len(out) == 2
    queries = sorted(q[0][1].value for _, q, _ in out)
    assert queries == ["<", "<="]


def test_body_annotated_is_all_inclusive():
    rule = Rule(Atom(x, 8, y), (Atom(x, 7, y), Atom(y, 7, z), Atom(z, 7, x)))
    assert [w for _, w in body_annotated(rule)] == [Window.INCLUSIVE] * 3


def _brute_rules_for(program, fact):
    out = []
    for rule in program.rules:
        for i, atom in enumerate(rule.body):
            sigma = atom.match(fact)
            if sigma is not None:
                q = tuple((a, Window.STRICT) for a in rule.body[:i])
                q += tuple((a, Window.INCLUSIVE) for a in rule.body[i + 1 :])
                out.append((rule, q, sigma))
    return out


def _key(entry):
    rule, q, sigma = entry
    return repr((rule, q, sorted(sigma.items(), key=lambda kv: kv[0].name)))


def test_rules_for_matches_brute_force(random_instances):
    rng = random.Random(11)
    for inst in random_instances(300, seed=5):
        program = inst.program
        ids = list(inst.universe)
        for _ in range(10):
            fact = tuple(rng.choice(ids) for _ in range(3))
            got = sorted(map(_key, program.rules_for(fact)))
            assert got == sorted(map(_key, _brute_rules_for(program, fact)))


def test_rewrite_program_queues_only_new_rules():
    inst = pex()
    n = pex_names(inst.dictionary)
    rho = RepresentativeMap(len(inst.dictionary))
    same, changed = rewrite_program(rho, inst.program)
    assert changed == [] and same.rules == inst.program.rules
    rho.merge_into(n["USA"], n["US"])
    new, changed = rewrite_program(rho, inst.program)
    r_prime = Rule(Atom(x, SAME_AS, n["US"]), (Atom(n["Obama"], n["presidentOf"], x),))
    s_prime = Rule(Atom(x, SAME_AS, n["Obama"]), (Atom(x, n["presidentOf"], n["US"]),))
    assert set(changed) == {r_prime, s_prime}
    assert rewrite_program(rho, new)[1] == []
    assert rewrite_rule(rho, r_prime) == r_prime


def test_rewrite_only_touched_rule():
    d = Dictionary()
    prog = parse_rules(
        f"[?x, <{EX}p>, <{EX}b>] :- [?x, <{EX}q>, <{EX}c>] .\n[?x, <{EX}p>, <{EX}d>] :- [?x, <{EX}q>, <{EX}a>] .", d
    )
    rho = RepresentativeMap(len(d))
    rho.merge_into(d.iri(EX + "d"), d.iri(EX + "p"))
    _, changed = rewrite_program(rho, prog)
    assert len(changed) == 1
    assert changed[0].head.o == d.iri(EX + "p")


def test_duplicate_rules_collapse():
    r = Rule(Atom(x, 5, 5), (Atom(x, 6, 6),))
    assert len(Program((r, r))) == 1
    rho = RepresentativeMap(8)
    rho.merge_into(6, 5)
    prog = Program((Rule(Atom(x, 5, 5), (Atom(x, 6, 6),)), Rule(Atom(x, 5, 5), (Atom(x, 5, 6),))))
    assert len(rho.normalize_program(prog)) == 1
