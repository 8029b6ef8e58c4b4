import io

import pytest

from rdfeq.ntriples import NTriplesError, parse_ntriples, parse_terms, write_ntriples
from rdfeq.terms import Dictionary, Term
from rdfeq.workloads import EX, PEX_DATA


def test_parse_presidents_data_in_reading_order():
    d = Dictionary()
    facts = parse_ntriples(PEX_DATA, d)
    assert facts == [(3, 4, 5), (6, 4, 7), (6, 4, 5)]
    assert d.lookup(3) == Term.iri(EX + "USPresident")


def test_literals_comments_and_blank_lines():
    text = '# header\n\n<a> <p> "x y \\"z\\"" .   # trailing\n<a> <p> <b>.\n'
    terms = list(parse_terms(text))
    assert terms[0][2] == Term.literal('x y "z"')
    assert terms[1][2] == Term.iri("b")


@pytest.mark.parametrize("line", ["<a> <p> <b>", "<a> <p> .", "a p b .", '<a> "p" <b> <c> .'])
def test_malformed_lines(line):
    with pytest.raises(NTriplesError) as err:
        parse_ntriples("<x> <y> <z> .\n" + line, Dictionary())
    assert err.value.line == 2


def test_round_trip():
    d = Dictionary()
    text = '<http://e/a> <http://e/p> "tab\\there" .\n<http://e/a> <http://e/p> <http://e/b> .\n'
    facts = parse_ntriples(text, d)
    out = io.StringIO()
    assert write_ntriples(facts, d, out) == 2
    d2 = Dictionary()
    assert [tuple(d2.lookup(r) for r in t) for t in parse_ntriples(out.getvalue(), d2)] == [
        tuple(d.lookup(r) for r in t) for t in facts
    ]
