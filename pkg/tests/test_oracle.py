import pytest

from rdfeq.materialise import materialise
from rdfeq.oracle import (
    check_rewriting,
    clique_derivation_formula,
    count_clique_derivations,
    expand_store,
    naive_materialise,
)
from rdfeq.repmap import RepresentativeMap
from rdfeq.rules import Program
from rdfeq.terms import DIFFERENT_FROM, SAME_AS

SA = SAME_AS


@pytest.mark.parametrize("n, expected", [(1, 4), (2, 22), (3, 66), (4, 148)])
def test_clique_counts_frozen(n, expected):
    assert count_clique_derivations(n) == expected
    assert clique_derivation_formula(n) == expected


def test_clique_count_rejects_empty():
    with pytest.raises(ValueError):
        count_clique_derivations(0)


def test_naive_closure_of_a_pair():
    facts, clash = naive_materialise([(5, SA, 6)], Program())
    assert not clash
    assert {(5, SA, 6), (6, SA, 5), (5, SA, 5), (6, SA, 6), (SA, SA, SA)} == facts


def test_naive_without_equality():
    facts, clash = naive_materialise([(5, SA, 6), (5, DIFFERENT_FROM, 5)], Program(), equality=False)
    assert facts == {(5, SA, 6), (5, DIFFERENT_FROM, 5)}
    assert not clash


def test_naive_clash():
    _, clash = naive_materialise([(5, DIFFERENT_FROM, 6), (6, SA, 5)], Program())
    assert clash


def test_expand_store():
    rho = RepresentativeMap(6)
    rho.merge_into(6, 5)
    assert expand_store({(5, 3, 5)}, rho, range(1, 7)) == {(5, 3, 5), (5, 3, 6), (6, 3, 5), (6, 3, 6)}


def test_checker_detects_sabotage(pex_instance):
    r = materialise(pex_instance.facts, pex_instance.program)
    assert check_rewriting(r, pex_instance.facts, pex_instance.program, pex_instance.universe).ok
    victim = next(iter(sorted(r.store.triples())))
    r.store.mark_outdated(victim)
    report = check_rewriting(r, pex_instance.facts, pex_instance.program, pex_instance.universe)
    assert not report.represents
    assert report.missing
    assert "missing" in report.summary()


def test_checker_detects_non_minimal_store(pex_instance):
    r = materialise(pex_instance.facts, pex_instance.program)
    r.store.add(pex_instance.facts[0])  # USPresident is not a representative
    report = check_rewriting(r, pex_instance.facts, pex_instance.program, pex_instance.universe)
    assert not report.minimal
