"""Consistency of rewrite systems with the language of a minimal DFTA.

A rule ``l -> r`` is consistent with ``L(A)`` iff the state transformations of
``l`` and ``r`` coincide; positively consistent iff ``l``'s transformation is
pointwise below ``r``'s in the acceptance order. Negative consistency is
positive consistency for the complement.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Set, Tuple

import numpy as np

from .dfta import (
    DEFAULT_ENUMERATION_BUDGET,
    BudgetExceeded,
    Dfta,
    Letters,
    chain_context,
    distinguishing_context,
    iter_assignment_chunks,
    minimize,
    pair_closure,
    state_representatives,
)
from .terms import Context, Rule, Term, TermError, Trs, is_linear, substitute, variables

FULL = "full"
POSITIVE = "positive"
NEGATIVE = "negative"
MODES = (FULL, POSITIVE, NEGATIVE)


class NonLinearTermError(TermError):
    pass


class AcceptanceOrder:
    """``p <= q`` iff every context accepting a ``p``-tree accepts a ``q``-tree.

    Computed as a greatest fixed point: start from ``Q x Q``, drop pairs that
    go from accepting to rejecting, then drop pairs some height-one context
    maps onto a dropped pair.
    """

    def __init__(self, a: Dfta):
        acc = a.accept_mask
        self.automaton = a
        self._closure = pair_closure(Letters.of(a).maps, acc[:, None] & ~acc[None, :])
        self.leq = ~self._closure[0]
        self.leq.flags.writeable = False

    @property
    def pairs(self) -> Set[Tuple[int, int]]:
        return {(int(p), int(q)) for p, q in zip(*np.nonzero(self.leq))}

    def __contains__(self, pair) -> bool:
        p, q = pair
        return bool(self.leq[p, q])

    def separating_context(self, p: int, q: int) -> Context:
        """A context ``c`` with ``c(rep p)`` accepted and ``c(rep q)`` rejected."""
        if self.leq[p, q]:
            raise ValueError(f"state {p} is below {q}; no separating context exists")
        acc = self.automaton.accept_mask
        return chain_context(self.automaton, self._closure, p, q, lambda x, y: acc[x] and not acc[y])


def acceptance_order(a: Dfta) -> AcceptanceOrder:
    order = a._cache.get("order")
    if order is None:
        order = a._cache["order"] = AcceptanceOrder(a)
    return order


def minimal_complement(a: Dfta) -> Dfta:
    """Complement of a minimal DFTA, itself minimal with the same state numbering."""
    comp = a._cache.get("complement")
    if comp is None:
        if a.minimal:
            # swapping acceptance keeps states reachable and pairwise distinguishable
            comp = a.complement()
            comp.minimal = True
            comp._cache["reps"] = state_representatives(a)
        else:
            comp = minimize(a.complement())
        a._cache["complement"] = comp
    return comp


@dataclass(frozen=True)
class Violation:
    """A rule and a state vector on which the rule breaks (positive/negative) consistency."""

    rule: Rule
    witness: Tuple[int, ...]
    lhs_state: int
    rhs_state: int
    mode: str = FULL

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self.rule.variables)


def _first_violation(a: Dfta, rule: Rule, bad, mode: str, budget: int) -> Optional[Violation]:
    order = rule.variables
    n, k = a.n_states, len(order)
    if n**k > budget:
        raise BudgetExceeded(f"rule {rule} needs {n}^{k} assignments, budget {budget}")
    for prefix, free in iter_assignment_chunks(n, k):
        fixed = dict(zip(order, prefix))
        lhs = a.grid(rule.lhs, order, fixed)
        rhs = a.grid(rule.rhs, order, fixed)
        shape = (n,) * free
        mask = np.broadcast_to(bad(lhs, rhs), shape)
        if mask.any():
            pos = np.unravel_index(int(np.argmax(mask)), shape)
            lstate = int(np.broadcast_to(lhs, shape)[pos])
            rstate = int(np.broadcast_to(rhs, shape)[pos])
            witness = tuple(prefix) + tuple(int(i) for i in pos)
            return Violation(rule, witness, lstate, rstate, mode)
    return None


def check_rule(a: Dfta, rule: Rule, mode: str = FULL, budget: int = DEFAULT_ENUMERATION_BUDGET) -> Optional[Violation]:
    if mode == FULL:
        return _first_violation(a, rule, lambda l, r: l != r, FULL, budget)
    if mode == POSITIVE:
        leq = acceptance_order(a).leq
        return _first_violation(a, rule, lambda l, r: ~leq[l, r], POSITIVE, budget)
    if mode == NEGATIVE:
        leq = acceptance_order(minimal_complement(a)).leq
        return _first_violation(a, rule, lambda l, r: ~leq[l, r], NEGATIVE, budget)
    raise ValueError(f"unknown consistency mode {mode!r}")


def check_full(a: Dfta, trs: Iterable[Rule], budget: int = DEFAULT_ENUMERATION_BUDGET) -> Optional[Violation]:
    """``None`` if every rule's sides induce the same state transformation.

    Otherwise the first violation: rules in order, state vectors in
    lexicographic order.
    """
    for rule in trs:
        v = check_rule(a, rule, FULL, budget)
        if v is not None:
            return v
    return None


def check_positive(
    a: Dfta,
    trs: Iterable[Rule],
    order: Optional[AcceptanceOrder] = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> Optional[Violation]:
    leq = (order or acceptance_order(a)).leq
    for rule in trs:
        v = _first_violation(a, rule, lambda l, r: ~leq[l, r], POSITIVE, budget)
        if v is not None:
            return v
    return None


def check_negative(a: Dfta, trs: Iterable[Rule], budget: int = DEFAULT_ENUMERATION_BUDGET) -> Optional[Violation]:
    comp = minimal_complement(a)
    v = check_positive(comp, trs, acceptance_order(comp), budget)
    if v is None:
        return None
    return Violation(v.rule, v.witness, v.lhs_state, v.rhs_state, NEGATIVE)


def check(a: Dfta, trs: Iterable[Rule], mode: str = FULL, budget: int = DEFAULT_ENUMERATION_BUDGET) -> Optional[Violation]:
    if mode == FULL:
        return check_full(a, trs, budget)
    if mode == POSITIVE:
        return check_positive(a, trs, budget=budget)
    if mode == NEGATIVE:
        return check_negative(a, trs, budget)
    raise ValueError(f"unknown consistency mode {mode!r}")


def violation_to_tree_pair(a: Dfta, v: Violation) -> Tuple[Term, Term]:
    """Trees ``s -> t`` (one rewrite step) on which ``a`` breaks the rule.

    For full violations exactly one of ``s``, ``t`` is accepted; for positive
    ones ``s`` is accepted and ``t`` rejected; negative ones the reverse.
    """
    reps = state_representatives(a)
    sigma = {x: reps[q] for x, q in zip(v.variables, v.witness)}
    lhat = substitute(v.rule.lhs, sigma)
    rhat = substitute(v.rule.rhs, sigma)
    if v.mode == FULL:
        c = distinguishing_context(a, v.lhs_state, v.rhs_state)
    elif v.mode == POSITIVE:
        c = acceptance_order(a).separating_context(v.lhs_state, v.rhs_state)
    else:
        c = acceptance_order(minimal_complement(a)).separating_context(v.lhs_state, v.rhs_state)
    return c.plug(lhat), c.plug(rhat)


# -- state counting ------------------------------------------------------------------


@dataclass(frozen=True)
class StateCount:
    """``counts[q]`` = number of state vectors the term maps to ``q``."""

    counts: np.ndarray
    arity: int

    def __getitem__(self, q: int) -> int:
        return int(self.counts[q])

    def as_dict(self):
        return {q: int(c) for q, c in enumerate(self.counts)}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StateCount) and self.arity == other.arity and np.array_equal(self.counts, other.counts)


def _count_dtype(n: int, k: int):
    return np.int64 if n**k < 2**62 else object


def state_count(a: Dfta, t: Term) -> StateCount:
    """Preimage sizes of ``t``'s state transformation, computed bottom-up."""
    if not is_linear(t):
        raise NonLinearTermError(f"state counting needs a linear term, got {t}")
    n = a.n_states
    k = len(variables(t))
    dtype = _count_dtype(n, k)

    def go(u: Term) -> np.ndarray:
        if u.ground:
            out = np.zeros(n, dtype=dtype)
            out[a.evaluate(u)] = 1
            return out
        if not u.children:  # variable
            return np.ones(n, dtype=dtype)
        weight = np.ones((), dtype=dtype)
        for i, child in enumerate(u.children):
            shape = [1] * len(u.children)
            shape[i] = n
            weight = weight * go(child).reshape(shape)
        out = np.zeros(n, dtype=dtype)
        np.add.at(out, a.tables[u.symbol].ravel(), np.broadcast_to(weight, a.tables[u.symbol].shape).ravel())
        return out

    return StateCount(go(t), k)


def cumulative_count(sc: StateCount, order: AcceptanceOrder) -> StateCount:
    """``result[q]`` = sum of ``sc[q']`` over ``q <= q'``."""
    leq = order.leq.astype(sc.counts.dtype)
    return StateCount(leq @ sc.counts, sc.arity)


class HeuristicVerdict(enum.Enum):
    MAYBE_CONSISTENT = "maybe-consistent"
    DEFINITELY_INCONSISTENT = "definitely-inconsistent"
    CONSISTENT = "consistent"  # exact answer (ground right-hand side)


def _lifted_counts(a: Dfta, rule: Rule) -> Tuple[StateCount, StateCount]:
    left = state_count(a, rule.lhs)
    right = state_count(a, rule.rhs)
    # rhs may drop lhs variables; count it over the same vectors
    scale = a.n_states ** (left.arity - right.arity)
    return left, StateCount(right.counts * scale, left.arity)


def heuristic_filter(a: Dfta, rule: Rule, mode: str = FULL, order: Optional[AcceptanceOrder] = None) -> HeuristicVerdict:
    """Cheap necessary condition for (positive) consistency of a linear rule.

    Exact when the right-hand side's transformation is constant, in
    particular when it is ground.
    """
    if not rule.linear:
        raise NonLinearTermError(f"heuristic needs linear sides: {rule}")
    if mode == NEGATIVE:
        comp = minimal_complement(a)
        return heuristic_filter(comp, rule, POSITIVE, acceptance_order(comp))
    left, right = _lifted_counts(a, rule)
    if mode == FULL:
        if not np.array_equal(left.counts, right.counts):
            return HeuristicVerdict.DEFINITELY_INCONSISTENT
        # a constant transformation on one side makes equal counts decisive
        if np.count_nonzero(right.counts) == 1:
            return HeuristicVerdict.CONSISTENT
        return HeuristicVerdict.MAYBE_CONSISTENT
    if mode != POSITIVE:
        raise ValueError(f"unknown consistency mode {mode!r}")
    order = order or acceptance_order(a)
    cumulative = cumulative_count(right, order)
    if (left.counts > cumulative.counts).any():
        return HeuristicVerdict.DEFINITELY_INCONSISTENT
    if np.count_nonzero(right.counts) == 1:
        return HeuristicVerdict.CONSISTENT
    return HeuristicVerdict.MAYBE_CONSISTENT
