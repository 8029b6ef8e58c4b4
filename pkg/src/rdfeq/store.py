"""The fact table: an append-only, duplicate-free log of triples.

Every fact keeps the log position it was appended at, and a status bit
recording whether it has been marked outdated. Marked facts are never
removed while reasoning runs; they stay in the log (so ``add`` keeps
rejecting them) and become invisible to matching. ``compact`` drops them
afterwards.

A single shared cursor walks the log. Facts are handed out by ``next`` in
log order, so "the facts returned before F" is exactly "the facts with a
smaller position than F", and positional windows stand in for the
strict/inclusive views of the table relative to a fact.
"""

from __future__ import annotations

import enum
import threading
from typing import Iterator

Triple = tuple[int, int, int]


class Window(enum.Enum):
    STRICT = "<"
    INCLUSIVE = "<="

    def admits(self, position: int, limit: int) -> bool:
        return position < limit if self is Window.STRICT else position <= limit


class StoreError(RuntimeError):
    pass


class Fact:
    __slots__ = ("s", "p", "o", "position", "marked")

    def __init__(self, s: int, p: int, o: int, position: int) -> None:
        self.s = s
        self.p = p
        self.o = o
        self.position = position
        self.marked = False

    @property
    def triple(self) -> Triple:
        return (self.s, self.p, self.o)

    def __iter__(self):
        return iter((self.s, self.p, self.o))

    def __repr__(self) -> str:
        flag = " marked" if self.marked else ""
        return f"Fact#{self.position}({self.s}, {self.p}, {self.o}{flag})"


# index name -> positions it keys on
_INDEXES = {
    "s": (0,),
    "p": (1,),
    "o": (2,),
    "sp": (0, 1),
    "po": (1, 2),
    "so": (0, 2),
}
_BY_MASK = {positions: name for name, positions in _INDEXES.items()}


class FactStore:
    def __init__(self, triples=()) -> None:
        self._log: list[Fact] = []
        self._by_triple: dict[Triple, Fact] = {}
        self._indexes: dict[str, dict[tuple, list[Fact]]] = {name: {} for name in _INDEXES}
        self._occurrences: dict[int, list[Fact]] = {}
        self._add_lock = threading.Lock()
        self._cursor_lock = threading.Lock()
        self._mark_lock = threading.Lock()
        self._cursor = 0
        self._last: Fact | None = None
        self.busy = False
        for t in triples:
            self.add(t)

    # -- mutation -----------------------------------------------------

    def add(self, triple: Triple) -> bool:
        """Append ``triple`` unless present (marked or not). Returns True on change."""
        if triple in self._by_triple:
            return False
        with self._add_lock:
            if triple in self._by_triple:
                return False
            s, p, o = triple
            fact = Fact(s, p, o, len(self._log))
            self._by_triple[triple] = fact
            for name, positions in _INDEXES.items():
                key = tuple(triple[i] for i in positions)
                self._indexes[name].setdefault(key, []).append(fact)
            for r in {s, p, o}:
                self._occurrences.setdefault(r, []).append(fact)
            # Publishing to the log last means a fact handed out by next()
            # is already reachable through every index.
            self._log.append(fact)
            return True

    def mark_outdated(self, fact: Fact | Triple) -> bool:
        """Set the outdated bit. Exactly one caller sees True per fact."""
        if not isinstance(fact, Fact):
            found = self._by_triple.get(tuple(fact))
            if found is None:
                raise StoreError(f"{fact!r} is not in the store")
            fact = found
        elif self._by_triple.get(fact.triple) is not fact:
            raise StoreError(f"{fact!r} is not in the store")
        with self._mark_lock:
            if fact.marked:
                return False
            fact.marked = True
            return True

    # -- consumption iterator ----------------------------------------

    def next(self) -> Fact | None:
        with self._cursor_lock:
            if self._cursor >= len(self._log):
                return None
            fact = self._log[self._cursor]
            self._cursor += 1
            self._last = fact
            return fact

    def has_next(self) -> bool:
        return self._cursor < len(self._log)

    def last(self) -> Fact:
        if self._last is None:
            raise StoreError("last() called before any next()")
        return self._last

    @property
    def cursor(self) -> int:
        return self._cursor

    def last_position(self) -> int:
        """Position of the last returned fact, or -1 if none was returned."""
        return -1 if self._last is None else self._last.position

    # -- lookup -------------------------------------------------------

    def get(self, triple: Triple) -> Fact | None:
        return self._by_triple.get(tuple(triple))

    def __contains__(self, triple) -> bool:
        fact = self._by_triple.get(tuple(triple))
        return fact is not None and not fact.marked

    def __len__(self) -> int:
        return len(self._log)

    def __iter__(self) -> Iterator[Fact]:
        return iter(self._log)

    def __getitem__(self, position: int) -> Fact:
        return self._log[position]

    def unmarked(self) -> Iterator[Fact]:
        return (f for f in self._log if not f.marked)

    def triples(self) -> set[Triple]:
        """The set of unmarked triples."""
        return {f.triple for f in self._log if not f.marked}

    def count_marked(self) -> int:
        return sum(1 for f in self._log if f.marked)

    def candidates(self, pattern: tuple) -> list[Fact] | tuple:
        """The narrowest position-ordered fact list for a pattern (None = wildcard)."""
        bound = tuple(i for i in range(3) if pattern[i] is not None)
        if not bound:
            return self._log
        if len(bound) == 3:
            fact = self._by_triple.get(tuple(pattern))
            return (fact,) if fact is not None else ()
        key = tuple(pattern[i] for i in bound)
        return self._indexes[_BY_MASK[bound]].get(key, ())

    def scan(
        self,
        pattern: tuple,
        limit: int | None = None,
        window: Window = Window.INCLUSIVE,
        skip_marked: bool = True,
    ) -> Iterator[Fact]:
        """Facts matching ``pattern`` whose position lies inside the window."""
        for fact in self.candidates(pattern):
            if limit is not None and not window.admits(fact.position, limit):
                # candidate lists are position-ordered
                break
            if skip_marked and fact.marked:
                continue
            yield fact

    def facts_containing(self, resource: int) -> Iterator[Fact]:
        for fact in self._occurrences.get(resource, ()):
            if not fact.marked:
                yield fact

    # -- post-processing ----------------------------------------------

    def compact(self) -> "FactStore":
        if self.busy:
            raise StoreError("cannot compact while materialisation is running")
        return FactStore(f.triple for f in self._log if not f.marked)
