"""Observation-table learner for bottom-up tree automata.

Rows are indexed by trees (``S`` plus its frontier), columns by contexts
(``E``). A cell holds the membership bit of the context filled with the tree;
rows are stored as Python ints with bit ``j`` for ``E[j]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .advice import NO_ADVICE, AdviceConfig, AdviceSession
from .dfta import Dfta, minimize
from .oracle import Teacher
from .terms import HOLE, Context, Node, Signature, Term, Var, sort_key, subterms


class LearningError(RuntimeError):
    pass


class IterationLimitExceeded(LearningError):
    pass


@dataclass
class Hypothesis:
    dfta: Dfta
    row_of: Dict[Term, int]  # state of every tree in S


@dataclass
class LearnStats:
    equivalence_queries: int = 0  # answered by the teacher
    inferred: int = 0  # answered by advice
    membership_queries: int = 0  # answered by the teacher
    cache_hits: int = 0
    tokens: int = 0
    hypotheses: int = 0
    learned_states: int = 0
    heuristic_calls: int = 0
    heuristic_rejections: int = 0
    heuristic_unsound: int = 0
    audit_failures: int = 0


class ObservationTable:
    def __init__(self, signature: Signature, membership: Callable[[Term], bool]):
        self.signature = signature
        self.membership = membership
        self._inner = [(name, k) for name, k in signature if k > 0]
        self.S: List[Term] = []
        self._in_s = set()
        self.E: List[Context] = [Context.trivial()]
        self.frontier: Dict[Term, None] = {}
        self.rows: Dict[Term, int] = {}
        for c in signature.constants:
            self.add_to_s(Node(c))

    def _fill(self, t: Term) -> None:
        row = 0
        for j, e in enumerate(self.E):
            if self.membership(e.plug(t)):
                row |= 1 << j
        self.rows[t] = row

    def add_to_s(self, t: Term) -> None:
        if t in self._in_s:
            return
        if any(c not in self._in_s for c in t.children):
            raise LearningError(f"{t} would break subtree closure of S")
        self.frontier.pop(t, None)
        if t not in self.rows:
            self._fill(t)
        self.S.append(t)
        self._in_s.add(t)
        older = self.S[:-1]
        # each new tuple is listed once, keyed by the first position holding t
        for name, k in self._inner:
            for i in range(k):
                pools = [older] * i + [[t]] + [self.S] * (k - i - 1)
                for kids in product(*pools):
                    u = Node(name, kids)
                    if u not in self._in_s and u not in self.frontier:
                        self.frontier[u] = None
                        if u not in self.rows:
                            self._fill(u)

    def add_context(self, e: Context) -> None:
        if e in self.E:
            raise LearningError(f"context {e} already present")
        bit = 1 << len(self.E)
        self.E.append(e)
        for t in self.rows:
            if self.membership(e.plug(t)):
                self.rows[t] |= bit

    def s_rows(self) -> Dict[int, Term]:
        """Smallest S tree for every distinct S row."""
        out: Dict[int, Term] = {}
        for s in self.S:
            r = self.rows[s]
            if r not in out or sort_key(s) < sort_key(out[r]):
                out[r] = s
        return out

    def unclosed(self) -> Optional[Term]:
        known = {self.rows[s] for s in self.S}
        missing = [u for u in self.frontier if self.rows[u] not in known]
        return min(missing, key=sort_key) if missing else None

    def inconsistency(self) -> Optional[Context]:
        """A context separating two extensions of equal-row S trees."""
        groups: Dict[int, List[Term]] = {}
        for s in self.S:
            groups.setdefault(self.rows[s], []).append(s)
        for members in groups.values():
            if len(members) < 2:
                continue
            first = members[0]
            for other in members[1:]:
                for name, k in self._inner:
                    for i in range(k):
                        for sib in product(self.S, repeat=k - 1):
                            left = Node(name, sib[:i] + (first,) + sib[i:])
                            right = Node(name, sib[:i] + (other,) + sib[i:])
                            diff = self.rows[left] ^ self.rows[right]
                            if diff:
                                j = (diff & -diff).bit_length() - 1
                                layer = Context(Node(name, sib[:i] + (Var(HOLE),) + sib[i:]))
                                return self.E[j].compose(layer)
        return None

    def close_and_consist(self) -> "ObservationTable":
        while True:
            u = self.unclosed()
            if u is not None:
                self.add_to_s(u)
                continue
            e = self.inconsistency()
            if e is not None:
                self.add_context(e)
                continue
            return self

    def hypothesis(self) -> Hypothesis:
        reps = self.s_rows()
        order = sorted(reps, key=lambda r: sort_key(reps[r]))
        state = {r: q for q, r in enumerate(order)}
        rep_list = [reps[r] for r in order]
        n = len(order)
        transitions = {}
        for name, k in self.signature:
            if k == 0:
                row = self.rows[Node(name)]
                if row not in state:
                    raise LearningError("table is not closed")
                transitions[name] = state[row]
                continue
            flat = []
            for combo in product(rep_list, repeat=k):
                row = self.rows.get(Node(name, combo))
                if row not in state:
                    raise LearningError("table is not closed")
                flat.append(state[row])
            transitions[name] = np.array(flat, dtype=np.intp).reshape((n,) * k)
        accepting = [q for q, r in enumerate(order) if r & 1]
        dfta = Dfta(self.signature, n, accepting, transitions)
        return Hypothesis(dfta, {s: state[self.rows[s]] for s in self.S})

    def add_counterexample(self, cex: Term) -> None:
        for t in subterms(cex):
            self.add_to_s(t)


def close_and_consist(table: ObservationTable) -> ObservationTable:
    return table.close_and_consist()


def build_hypothesis(table: ObservationTable) -> Hypothesis:
    return table.hypothesis()


def process_counterexample(table: ObservationTable, cex: Term) -> ObservationTable:
    table.add_counterexample(cex)
    return table


def default_iteration_cap(teacher: Teacher) -> int:
    if teacher.target_size is not None:
        return 10 * teacher.target_size + 100
    return 1000


def learn(
    teacher: Teacher,
    advice: Optional[AdviceConfig] = None,
    max_iterations: Optional[int] = None,
    callback: Optional[Callable[[int, ObservationTable, Hypothesis], None]] = None,
) -> Tuple[Dfta, LearnStats]:
    """Learn the teacher's language; returns the final hypothesis, minimized."""
    session = AdviceSession(teacher, advice or NO_ADVICE)
    eq0, mq0, tok0 = teacher.equivalence_queries, teacher.membership_queries, teacher.tokens
    table = ObservationTable(teacher.signature, session.membership)
    cap = max_iterations if max_iterations is not None else default_iteration_cap(teacher)
    stats = LearnStats()
    for iteration in range(cap):
        table.close_and_consist()
        hyp = table.hypothesis()
        stats.hypotheses += 1
        if callback is not None:
            callback(iteration, table, hyp)
        cex = session.equivalence(hyp.dfta)
        if cex is None:
            result = minimize(hyp.dfta)
            break
        table.add_counterexample(cex)
    else:
        raise IterationLimitExceeded(f"no answer after {cap} hypotheses")
    adv = session.stats
    stats.equivalence_queries = teacher.equivalence_queries - eq0
    stats.membership_queries = teacher.membership_queries - mq0
    stats.tokens = teacher.tokens - tok0
    stats.inferred = adv.inferred
    stats.cache_hits = session.cache.hits
    stats.learned_states = result.n_states
    stats.heuristic_calls = adv.heuristic_calls
    stats.heuristic_rejections = adv.heuristic_rejections
    stats.heuristic_unsound = adv.heuristic_unsound
    stats.audit_failures = adv.audit_failures
    return result, stats
