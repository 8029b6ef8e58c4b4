"""Parallel fixpoint computation with sameAs handled by rewriting or by axioms.

Every worker repeats three kinds of step, in priority order: re-evaluate a
rule whose constants were rewritten, rewrite the facts mentioning a freshly
merged resource, or take the next fact from the store and process it. A
worker with nothing to do parks at a gate; the last one to park runs the
serial phase that renormalises the program and either queues rules for
re-evaluation or ends the run.

In REW mode a non-reflexive sameAs fact merges its two resources (larger
id into smaller). In AX mode the map stays the identity and the sameAs
axioms are simply added to the program.
"""

from __future__ import annotations

import enum
import random
import threading
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

from .evaluate import evaluate
from .repmap import RepresentativeMap
from .rules import Program, Rule, body_annotated, eq_axiomatisation, rewrite_program
from .store import Fact, FactStore
from .terms import DIFFERENT_FROM, SAME_AS


class Mode(str, enum.Enum):
    AX = "ax"
    REW = "rew"


CONSISTENT = "consistent"
CONTRADICTION = "contradiction"
INCOMPLETE = "incomplete"


@dataclass
class MaterialisationStats:
    rule_applications: int = 0
    # every add attempted by rule heads, rewriting and reflexivity
    derivations: int = 0
    rule_derivations: int = 0
    rewrite_derivations: int = 0
    reflexive_derivations: int = 0
    merged_resources: int = 0
    marked_facts: int = 0
    serial_phases: int = 0
    facts_total: int = 0
    facts_unmarked: int = 0

    def absorb(self, other: "MaterialisationStats") -> None:
        for name, value in asdict(other).items():
            setattr(self, name, getattr(self, name) + value)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class EngineConfig:
    mode: Mode = Mode.REW
    threads: int = 1
    # reflexive sameAs adds per processed fact; switching them off only
    # serves to replay hand-written traces that leave them out
    reflexive: bool = True
    # probability of yielding the interpreter at scheduling checkpoints
    jitter: float = 0.0
    seed: int | None = None
    record_firings: bool = False
    record_trace: bool = False
    stop_when: Callable[[MaterialisationStats, int], bool] | None = None

    def __post_init__(self):
        self.mode = Mode(self.mode)
        if self.threads < 1:
            raise ValueError("thread count must be at least 1")


@dataclass
class MaterialisationResult:
    store: FactStore
    rho: RepresentativeMap
    stats: MaterialisationStats
    outcome: str
    program: Program
    raw_store: FactStore
    firings: list | None = None
    trace: list | None = None
    wall_time: float = 0.0

    @property
    def consistent(self) -> bool:
        return self.outcome == CONSISTENT


class _Abort(Exception):
    pass


@dataclass
class _WorkerState:
    stats: MaterialisationStats = field(default_factory=MaterialisationStats)
    rng: random.Random | None = None
    ticks: int = 0


class Materialiser:
    def __init__(
        self,
        facts: Iterable,
        program: Program,
        config: EngineConfig | None = None,
        size: int | None = None,
    ) -> None:
        self.config = config or EngineConfig()
        self.rew = self.config.mode is Mode.REW
        self.store = FactStore()
        explicit = list(facts) + list(program.facts)
        for t in explicit:
            self.store.add(tuple(t))
        top = max(
            [size or 0]
            + [max(t) for t in explicit]
            + [max(r.constants() or {0}) for r in program.rules]
        )
        self.rho = RepresentativeMap(top)
        if self.rew:
            self.original = Program(program.rules)
        else:
            axioms = eq_axiomatisation()
            self.original = Program(program.rules + axioms.rules, contradiction=axioms.contradiction)
        self.current = self.original
        self.rule_queue: deque[Rule] = deque()
        self.resource_queue: deque[int] = deque()
        self.waiting = 0
        self.running = True
        self.limit = -1
        self.gate = threading.Condition()
        self.contradiction = False
        self.aborted = False
        self.firings: list | None = [] if self.config.record_firings else None
        self.trace: list | None = [] if self.config.record_trace else None
        self._stats_live: list[MaterialisationStats] = []
        self._errors: list[BaseException] = []

    # -- helpers -------------------------------------------------------

    def _notify(self) -> None:
        if self.waiting:
            with self.gate:
                self.gate.notify_all()

    def _yield(self, ws: _WorkerState) -> None:
        if ws.rng is not None and ws.rng.random() < self.config.jitter:
            time.sleep(0)

    def _log(self, *event) -> None:
        if self.trace is not None:
            self.trace.append(event)

    def _derive(self, ws: _WorkerState, rule: Rule, tau: dict) -> None:
        head = rule.head.ground(tau)
        st = ws.stats
        st.derivations += 1
        st.rule_derivations += 1
        if self.firings is not None:
            self.firings.append((rule, frozenset(tau.items())))
        if self.store.add(head):
            self._log("add", head, "rule", rule)
            self._notify()

    def _rewrite(self, ws: _WorkerState, fact: Fact) -> None:
        if self.store.mark_outdated(fact):
            st = ws.stats
            st.marked_facts += 1
            self._log("mark", fact.position)
            target = self.rho.normalize_fact(fact.triple)
            st.derivations += 1
            st.rewrite_derivations += 1
            if self.store.add(target):
                self._log("add", target, "rewrite", fact.position)
                self._notify()

    # -- the three kinds of work ----------------------------------------

    def evaluate_updated_rules(self, ws: _WorkerState) -> bool:
        try:
            rule = self.rule_queue.popleft()
        except IndexError:
            return False
        ws.stats.rule_applications += 1
        self._log("reevaluate", rule)
        for tau in evaluate(self.store, body_annotated(rule), self.limit):
            self._derive(ws, rule, tau)
        return True

    def rewrite_facts(self, ws: _WorkerState) -> bool:
        try:
            c = self.resource_queue.popleft()
        except IndexError:
            return False
        for fact in self.store.facts_containing(c):
            self._yield(ws)
            self._rewrite(ws, fact)
        return True

    def apply_rules(self, ws: _WorkerState) -> bool:
        fact = self.store.next()
        if fact is None:
            return False
        self._yield(ws)
        if fact.marked:
            return True
        triple = fact.triple
        self._log("next", fact.position)
        s, p, o = triple
        if self.rew:
            if self.rho.normalize_fact(triple) != triple:
                self._rewrite(ws, fact)
                return True
            if p == SAME_AS and s != o:
                c, d = (s, o) if s < o else (o, s)
                self._yield(ws)
                if self.rho.merge_into(d, c):
                    ws.stats.merged_resources += 1
                    self._log("merge", d, c)
                    self.resource_queue.append(d)
                    self._notify()
                return True
            # differentFrom may itself have been merged (only ever into sameAs)
            clash = s == o and p == self.rho.resolve(DIFFERENT_FROM)
        else:
            clash = self.current.matches_contradiction(triple)
        if clash:
            self.contradiction = True
            self._log("contradiction", triple)
            self._notify()
        # Reflexive sameAs facts and clashes fall through to rule
        # application too: their consequences belong to the fixpoint.
        st = ws.stats
        for rule, query, sigma in self.current.rules_for(triple):
            st.rule_applications += 1
            for tau in evaluate(self.store, query, fact.position, sigma):
                self._derive(ws, rule, tau)
        if self.rew and self.config.reflexive:
            for c in dict.fromkeys(triple):
                st.derivations += 1
                st.reflexive_derivations += 1
                reflexive = (c, SAME_AS, c)
                if self.store.add(reflexive):
                    self._log("add", reflexive, "reflexive", fact.position)
                    self._notify()
        return True

    # -- coordination ---------------------------------------------------

    def _late_clash(self) -> None:
        # A self-difference processed before differentFrom lost its
        # representative status looks like an ordinary fact; catch it here.
        rep = self.rho.resolve(DIFFERENT_FROM)
        if not self.rew or self.contradiction or rep == DIFFERENT_FROM:
            return
        for fact in self.store.scan((None, rep, None)):
            if fact.s == fact.o:
                self.contradiction = True
                self._log("contradiction", fact.triple)
                return

    def serial_phase(self, ws: _WorkerState) -> None:
        self._late_clash()
        _, changed = rewrite_program(self.rho, self.current)
        self.rule_queue.extend(changed)
        self.limit = self.store.last_position()
        self.current = self.rho.normalize_program(self.original)
        self.running = bool(changed)
        ws.stats.serial_phases += 1
        self._log("serial", tuple(changed), self.limit)
        self.gate.notify_all()

    def _has_work(self) -> bool:
        return bool(self.rule_queue) or bool(self.resource_queue) or self.store.has_next()

    def _check_budget(self, ws: _WorkerState) -> None:
        stop = self.config.stop_when
        if stop is None:
            return
        ws.ticks += 1
        if ws.ticks % 64 != 1:
            return
        total = MaterialisationStats()
        for st in self._stats_live:
            total.absorb(st)
        if stop(total, len(self.store)):
            self.aborted = True
            raise _Abort

    def worker_loop(self, ws: _WorkerState) -> None:
        threads = self.config.threads
        try:
            while self.running:
                self._check_budget(ws)
                if not (self.evaluate_updated_rules(ws) or self.rewrite_facts(ws) or self.apply_rules(ws)):
                    with self.gate:
                        self.waiting += 1
                        while not self._has_work() and self.running:
                            if self.waiting == threads:
                                self.serial_phase(ws)
                            else:
                                self.gate.wait()
                        self.waiting -= 1
        except _Abort:
            self._halt()
        except BaseException as exc:
            self._errors.append(exc)
            self._halt()

    def _halt(self) -> None:
        with self.gate:
            self.running = False
            self.gate.notify_all()

    def run(self) -> MaterialisationResult:
        cfg = self.config
        states = []
        for i in range(cfg.threads):
            rng = None
            if cfg.jitter > 0:
                rng = random.Random(None if cfg.seed is None else cfg.seed * 1000 + i)
            states.append(_WorkerState(rng=rng))
        self._stats_live = [ws.stats for ws in states]
        started = time.perf_counter()
        self.store.busy = True
        try:
            if cfg.threads == 1:
                self.worker_loop(states[0])
            else:
                workers = [threading.Thread(target=self.worker_loop, args=(ws,), daemon=True) for ws in states]
                for t in workers:
                    t.start()
                for t in workers:
                    t.join()
        finally:
            self.store.busy = False
        if self._errors:
            raise self._errors[0]
        stats = MaterialisationStats()
        for ws in states:
            stats.absorb(ws.stats)
        stats.facts_total = len(self.store)
        compacted = self.store.compact()
        stats.facts_unmarked = len(compacted)
        if self.aborted:
            outcome = INCOMPLETE
        elif self.contradiction:
            outcome = CONTRADICTION
        else:
            outcome = CONSISTENT
        return MaterialisationResult(
            store=compacted,
            rho=self.rho,
            stats=stats,
            outcome=outcome,
            program=self.current,
            raw_store=self.store,
            firings=self.firings,
            trace=self.trace,
            wall_time=time.perf_counter() - started,
        )


def materialise(
    facts: Iterable,
    program: Program,
    config: EngineConfig | None = None,
    size: int | None = None,
    **options,
) -> MaterialisationResult:
    """Compute the fixpoint of ``program`` over ``facts``.

    Keyword options are forwarded to :class:`EngineConfig` when no config
    is given, e.g. ``materialise(facts, program, mode="ax", threads=4)``.
    """
    if config is None:
        config = EngineConfig(**options)
    elif options:
        raise TypeError("pass either a config or keyword options, not both")
    return Materialiser(facts, program, config, size=size).run()
