"""Annotated query evaluation by nested index-loop joins over the fact store."""

from __future__ import annotations

from typing import Iterator

from .rules import AnnotatedQuery, Var
from .store import FactStore


def evaluate(
    store: FactStore,
    query: AnnotatedQuery,
    limit: int,
    sigma: dict | None = None,
) -> Iterator[dict]:
    """Yield each minimal extension of ``sigma`` matching every atom inside its window.

    ``limit`` is a log position; a strict atom may only match facts before
    it, an inclusive atom facts up to and including it. Marked facts are
    skipped. Atoms are joined in the order given.
    """
    sigma = dict(sigma) if sigma else {}
    yield from _join(store, query, 0, limit, sigma)


def _join(store: FactStore, query: AnnotatedQuery, i: int, limit: int, sigma: dict) -> Iterator[dict]:
    if i == len(query):
        yield dict(sigma)
        return
    atom, window = query[i]
    pattern = atom.substitute(sigma)
    terms = tuple(atom)
    for fact in store.scan(pattern, limit, window):
        triple = fact.triple
        added = []
        ok = True
        for term, value in zip(terms, triple):
            if isinstance(term, Var):
                bound = sigma.get(term)
                if bound is None:
                    sigma[term] = value
                    added.append(term)
                elif bound != value:
                    ok = False
                    break
        if ok:
            yield from _join(store, query, i + 1, limit, sigma)
        for term in added:
            del sigma[term]


def evaluate_all(store: FactStore, query: AnnotatedQuery, limit: int, sigma: dict | None = None) -> list[dict]:
    return list(evaluate(store, query, limit, sigma))


__all__ = ["evaluate", "evaluate_all", "Var"]
