"""Advice: intercept equivalence queries with rewrite systems, and cache
membership answers modulo a convergent rewrite system.

Before a candidate reaches the teacher it is checked against the advice
systems. A violated rule yields a pair ``s -> t`` the candidate separates; one
membership query on ``s`` tells which of the two the candidate gets wrong.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .consistency import (
    FULL,
    NEGATIVE,
    POSITIVE,
    HeuristicVerdict,
    Violation,
    acceptance_order,
    check_rule,
    heuristic_filter,
    minimal_complement,
    violation_to_tree_pair,
)
from .dfta import Dfta, minimize
from .oracle import Teacher, make_rng
from .terms import Rule, Signature, Term, TermError, Trs, normal_form

EXACT = "exact"
APPROX = "approx"
COUNTING = "counting"
CHECK_MODES = (EXACT, APPROX, COUNTING)


@dataclass(frozen=True)
class AdviceConfig:
    """Advice systems for one learning session.

    ``mem`` must be convergent and consistent with the target; it keys the
    membership cache by normal form. ``seed`` drives sampling in approx mode.
    """

    full: Optional[Trs] = None
    positive: Optional[Trs] = None
    negative: Optional[Trs] = None
    mem: Optional[Trs] = None
    check_mode: str = EXACT
    approx_factor: int = 10
    seed: Tuple[int, ...] = (0,)  # master seed followed by stream coordinates
    audit: bool = False

    def __post_init__(self):
        if isinstance(self.seed, int):
            object.__setattr__(self, "seed", (self.seed,))
        if self.check_mode not in CHECK_MODES:
            raise ValueError(f"check_mode must be one of {CHECK_MODES}, got {self.check_mode!r}")
        if self.approx_factor < 1:
            raise ValueError("approx_factor must be positive")
        sigs = {trs.signature for _, trs in self.systems()}
        if self.mem is not None:
            sigs.add(self.mem.signature)
        if len(sigs) > 1:
            raise TermError("advice systems use different signatures")
        if self.mem is not None:
            known = set(self.full.rules) if self.full is not None else set()
            stray = [r for r in self.mem if r not in known]
            if stray:
                raise TermError(f"membership rules must also be full advice: {stray[0]}")

    def systems(self) -> List[Tuple[str, Trs]]:
        out = [(FULL, self.full), (POSITIVE, self.positive), (NEGATIVE, self.negative)]
        return [(mode, trs) for mode, trs in out if trs is not None and len(trs)]

    @property
    def active(self) -> bool:
        return bool(self.systems())


NO_ADVICE = AdviceConfig()


class MembershipCache:
    """Membership answers keyed by normal form under ``trs`` (structural if empty)."""

    def __init__(self, teacher: Teacher, trs: Optional[Trs] = None):
        self.teacher = teacher
        self.trs = trs if trs is not None and len(trs) else None
        self.answers: Dict[Term, bool] = {}
        self.hits = 0
        self._nf_memo: Dict[Term, Term] = {}

    def key(self, t: Term) -> Term:
        if self.trs is None:
            return t
        return normal_form(self.trs, t, memo=self._nf_memo)

    def __call__(self, t: Term) -> bool:
        k = self.key(t)
        answer = self.answers.get(k)
        if answer is not None:
            self.hits += 1
            return answer
        answer = self.answers[k] = self.teacher.membership(t)
        return answer


def cached_membership(t: Term, cache: MembershipCache) -> bool:
    return cache(t)


@dataclass(frozen=True)
class Passed:
    pass


@dataclass(frozen=True)
class Inferred:
    counterexample: Term
    violation: Violation
    membership_queries_used: int = 1


InterceptOutcome = Union[Passed, Inferred]


@dataclass
class AdviceStats:
    inferred: int = 0
    forwarded: int = 0
    exact_checks: int = 0
    heuristic_calls: int = 0
    heuristic_rejections: int = 0
    heuristic_unsound: int = 0
    heuristic_exact: int = 0
    audit_failures: int = 0
    inferred_by_mode: Dict[str, int] = field(default_factory=lambda: {FULL: 0, POSITIVE: 0, NEGATIVE: 0})


def _sampled_violation(a: Dfta, rule: Rule, mode: str, samples: int, rng: np.random.Generator) -> Optional[Violation]:
    order = rule.variables
    n, k = a.n_states, len(order)
    if k == 0:
        vectors = np.zeros((1, 0), dtype=np.intp)
    else:
        vectors = rng.integers(n, size=(samples, k))
    if mode == FULL:
        bad = lambda l, r: l != r
    else:
        leq = acceptance_order(a if mode == POSITIVE else minimal_complement(a)).leq
        bad = lambda l, r: not leq[l, r]
    for vec in vectors:
        assignment = dict(zip(order, (int(q) for q in vec)))
        l = a.evaluate_term(rule.lhs, assignment)
        r = a.evaluate_term(rule.rhs, assignment)
        if bad(l, r):
            return Violation(rule, tuple(int(q) for q in vec), l, r, mode)
    return None


class AdviceSession:
    """Membership cache plus advised equivalence for one learner run."""

    def __init__(self, teacher: Teacher, config: AdviceConfig = NO_ADVICE):
        sig = teacher.signature
        for _, trs in config.systems():
            if trs.signature != sig:
                raise TermError(f"advice signature {trs.signature} differs from the teacher's {sig}")
        self.teacher = teacher
        self.config = config
        self.cache = MembershipCache(teacher, config.mem)
        self.stats = AdviceStats()
        self._rng = make_rng(*config.seed, 1)

    @property
    def signature(self) -> Signature:
        return self.teacher.signature

    def membership(self, t: Term) -> bool:
        return self.cache(t)

    def find_violation(self, cand: Dfta) -> Optional[Violation]:
        for mode, trs in self.config.systems():
            for rule in trs:
                v = self._check(cand, rule, mode)
                if v is not None:
                    return v
        return None

    def _check(self, cand: Dfta, rule: Rule, mode: str) -> Optional[Violation]:
        cm = self.config.check_mode
        if cm == APPROX:
            return _sampled_violation(cand, rule, mode, self.config.approx_factor * cand.n_states, self._rng)
        if cm == COUNTING and rule.linear:
            self.stats.heuristic_calls += 1
            verdict = heuristic_filter(cand, rule, mode)
            if verdict is HeuristicVerdict.DEFINITELY_INCONSISTENT:
                self.stats.heuristic_rejections += 1
                self.stats.exact_checks += 1
                v = check_rule(cand, rule, mode)
                if v is None:
                    self.stats.heuristic_unsound += 1
                return v
            if verdict is HeuristicVerdict.CONSISTENT:
                self.stats.heuristic_exact += 1
                if self.config.audit and check_rule(cand, rule, mode) is not None:
                    self.stats.audit_failures += 1
            return None
        self.stats.exact_checks += 1
        return check_rule(cand, rule, mode)

    def intercept(self, cand: Dfta) -> InterceptOutcome:
        cand = minimize(cand)
        v = self.find_violation(cand)
        if v is None:
            return Passed()
        s, t = violation_to_tree_pair(cand, v)
        in_target = self.membership(s)
        cex = s if in_target != cand.accepts(s) else t
        if self.config.audit and self.teacher_truth(cex) == cand.accepts(cex):
            self.stats.audit_failures += 1
        return Inferred(cex, v)

    def teacher_truth(self, t: Term) -> bool:
        # side channel for audits; does not touch the query counters
        target = getattr(self.teacher, "target", None)
        if target is None:
            return self.teacher._member(t)
        return target.accepts(t)

    def equivalence(self, cand: Dfta) -> Optional[Term]:
        if self.config.active:
            outcome = self.intercept(cand)
            if isinstance(outcome, Inferred):
                self.stats.inferred += 1
                self.stats.inferred_by_mode[outcome.violation.mode] += 1
                return outcome.counterexample
        self.stats.forwarded += 1
        return self.teacher.equivalence(cand)


def advised_equivalence(cand: Dfta, cfg: AdviceConfig, teacher: Teacher, cache: Optional[MembershipCache] = None) -> Optional[Term]:
    """One advised equivalence query outside a learner session."""
    session = AdviceSession(teacher, cfg)
    if cache is not None:
        session.cache = cache
    return session.equivalence(cand)
