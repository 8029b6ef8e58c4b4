"""In-memory datalog materialisation over RDF with owl:sameAs by axioms or by rewriting."""

from .evaluate import evaluate, evaluate_all
from .materialise import (
    CONSISTENT,
    CONTRADICTION,
    INCOMPLETE,
    EngineConfig,
    MaterialisationResult,
    MaterialisationStats,
    Materialiser,
    Mode,
    materialise,
)
from .ntriples import NTriplesError, parse_ntriples, write_ntriples
from .repmap import MergeOrderError, RepresentativeMap
from .rules import (
    Atom,
    Program,
    Rule,
    RuleSyntaxError,
    UnsafeRuleError,
    Var,
    eq_axiomatisation,
    parse_rules,
    rewrite_program,
)
from .sparql import AnswerMultiset, SelectQuery, answer, parse_query
from .store import Fact, FactStore, Window
from .terms import DIFFERENT_FROM, SAME_AS, Dictionary, Term, UnknownResource

__all__ = [
    "Atom", "AnswerMultiset", "CONSISTENT", "CONTRADICTION", "DIFFERENT_FROM", "Dictionary",
    "EngineConfig", "Fact", "FactStore", "INCOMPLETE", "MaterialisationResult",
    "MaterialisationStats", "Materialiser", "MergeOrderError", "Mode", "NTriplesError",
    "Program", "RepresentativeMap", "Rule", "RuleSyntaxError", "SAME_AS", "SelectQuery",
    "Term", "UnknownResource", "UnsafeRuleError", "Var", "Window", "answer", "eq_axiomatisation",
    "evaluate", "evaluate_all", "materialise", "parse_ntriples", "parse_query", "parse_rules",
    "rewrite_program", "write_ntriples",
]
