"""Mapping of resources to their sameAs-clique representatives.

Two id-indexed arrays: ``succ[d]`` is the resource ``d`` was merged into
(0 while ``d`` represents itself) and ``pred`` threads each clique into a
singly linked list starting at its representative. A resource is merged at
most once and always into a smaller id, so succ-chains strictly decrease
and resolution terminates without locks.
"""

from __future__ import annotations

import threading

from .terms import precedes


class MergeOrderError(ValueError):
    pass


class RepresentativeMap:
    def __init__(self, size: int = 0) -> None:
        self.succ: list[int] = [0] * (size + 1)
        self.pred: list[int] = [0] * (size + 1)
        # Python offers no user-level compare-and-set; this lock only ever
        # guards a single read-compare-write on one array slot.
        self._cas_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.succ) - 1

    def grow(self, size: int) -> None:
        """Extend both arrays to cover ids up to ``size``. Not for use while merging."""
        extra = size + 1 - len(self.succ)
        if extra > 0:
            self.succ.extend([0] * extra)
            self.pred.extend([0] * extra)

    def _cas(self, array: list[int], index: int, expected: int, new: int) -> int:
        with self._cas_lock:
            old = array[index]
            if old == expected:
                array[index] = new
            return old

    def merge_into(self, d: int, c: int) -> bool:
        """Make ``c`` the representative of ``d``'s clique; False if ``d`` was already merged."""
        if not precedes(c, d):
            raise MergeOrderError(f"merge_into({d}, {c}) requires {c} to precede {d}")
        if self._cas(self.succ, d, 0, c) != 0:
            return False
        e = c
        while self.pred[e] != 0 or self._cas(self.pred, e, 0, d) != 0:
            e = self.pred[e]
        return True

    def resolve(self, c: int) -> int:
        succ = self.succ
        r = c
        while True:
            nxt = succ[r] if r < len(succ) else 0
            if nxt == 0:
                return r
            r = nxt

    __call__ = resolve

    def is_representative(self, c: int) -> bool:
        return c >= len(self.succ) or self.succ[c] == 0

    def clique_members(self, rep: int) -> list[int]:
        members = [rep]
        pred = self.pred
        e = pred[rep] if rep < len(pred) else 0
        while e != 0:
            members.append(e)
            e = pred[e]
        return members

    def clique_size(self, rep: int) -> int:
        return len(self.clique_members(rep))

    def cliques(self) -> dict[int, list[int]]:
        """Every representative in the id range mapped to its member list."""
        return {r: self.clique_members(r) for r in range(1, len(self.succ)) if self.succ[r] == 0}

    def normalize_fact(self, fact) -> tuple[int, int, int]:
        s, p, o = fact
        resolve = self.resolve
        return (resolve(s), resolve(p), resolve(o))

    def normalize_rule(self, rule):
        return rule.map_constants(self.resolve)

    def normalize_program(self, program):
        return program.map_constants(self.resolve)

    def mapping(self) -> dict[int, int]:
        """Snapshot of resolve over the whole id range."""
        return {r: self.resolve(r) for r in range(1, len(self.succ))}

    def merged_count(self) -> int:
        return sum(1 for v in self.succ[1:] if v != 0)
