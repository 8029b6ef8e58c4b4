import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from rdfeq.repmap import MergeOrderError, RepresentativeMap
from rdfeq.rules import Atom, Program, Rule, Var


def test_fresh_map_is_identity():
    rho = RepresentativeMap(5)
    assert [rho.resolve(i) for i in range(1, 6)] == [1, 2, 3, 4, 5]
    assert rho.clique_members(3) == [3]
    assert rho.merged_count() == 0


def test_merge_requires_smaller_target():
    rho = RepresentativeMap(5)
    with pytest.raises(MergeOrderError):
        rho.merge_into(2, 4)
    with pytest.raises(MergeOrderError):
        rho.merge_into(3, 3)


def test_merge_is_once_only():
    rho = RepresentativeMap(5)
    assert rho.merge_into(4, 2)
    assert not rho.merge_into(4, 1)
    assert rho.resolve(4) == 2


def test_chain_resolution_and_cliques():
    # the merges of the presidents example: America->USA, USA->US, USPresident->Obama
    rho = RepresentativeMap(8)
    assert rho.merge_into(7, 6)
    assert rho.merge_into(6, 5)
    assert rho.merge_into(8, 3)
    assert rho.resolve(7) == 5
    assert sorted(rho.clique_members(5)) == [5, 6, 7]
    assert sorted(rho.clique_members(3)) == [3, 8]
    assert sorted(rho.cliques()[5]) == [5, 6, 7]
    assert rho.normalize_fact((8, 4, 7)) == (3, 4, 5)
    assert rho.mapping()[6] == 5
    assert rho.merged_count() == 3


def test_normalize_rule_and_program():
    rho = RepresentativeMap(6)
    rho.merge_into(6, 5)
    x = Var("x")
    r = Rule(Atom(x, 1, 6), (Atom(3, 4, x),))
    assert rho.normalize_rule(r) == Rule(Atom(x, 1, 5), (Atom(3, 4, x),))
    assert rho.normalize_program(Program((r,))).rules[0].head.o == 5


def test_ids_beyond_range_represent_themselves():
    rho = RepresentativeMap(2)
    assert rho.resolve(10) == 10
    assert rho.is_representative(10)
    rho.grow(10)
    assert rho.merge_into(10, 1)
    assert rho.resolve(10) == 1


def _reference_classes(n, pairs):
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return {a: find(a) for a in range(1, n + 1)}


def _merge_pair(rho, a, b):
    # what a worker does with <a sameAs b>: merge the larger representative into the smaller
    while True:
        ra, rb = rho.resolve(a), rho.resolve(b)
        if ra == rb:
            return
        c, d = min(ra, rb), max(ra, rb)
        if rho.merge_into(d, c):
            return


@settings(max_examples=200, deadline=None)
@given(hs.lists(hs.tuples(hs.integers(1, 12), hs.integers(1, 12)), max_size=30))
def test_merges_agree_with_union_find(pairs):
    rho = RepresentativeMap(12)
    for a, b in pairs:
        _merge_pair(rho, a, b)
    expected = _reference_classes(12, pairs)
    assert rho.mapping() == expected
    for rep, members in rho.cliques().items():
        assert min(members) == rep
        assert all(rho.resolve(m) == rep for m in members)
    assert sum(len(m) for m in rho.cliques().values()) == 12


def test_concurrent_merges_build_consistent_cliques():
    n = 400
    rng = random.Random(3)
    pairs = [(rng.randint(1, n), rng.randint(1, n)) for _ in range(600)]
    rho = RepresentativeMap(n)
    chunks = [pairs[k::8] for k in range(8)]

    def work(chunk):
        for a, b in chunk:
            _merge_pair(rho, a, b)

    threads = [threading.Thread(target=work, args=(c,)) for c in chunks]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert rho.mapping() == _reference_classes(n, pairs)
    cliques = rho.cliques()
    everyone = sorted(m for members in cliques.values() for m in members)
    assert everyone == list(range(1, n + 1))
