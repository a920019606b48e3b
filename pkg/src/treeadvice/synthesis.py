"""Synthesis of advice from an automaton.

``ground_characterization`` lists one ground rule per transition, which pins
the language down completely. ``context_rule_exists`` looks for a rule
``c(X) -> c(r)``: such a rule is consistent exactly when ``c`` sends every
state to the same state, i.e. when the word automaton whose letters are the
height-one contexts has a synchronizing word.
"""
from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from .dfta import Dfta, Letters, letter_layer, pair_closure, state_representatives
from .terms import HOLE, Context, Node, Rule, Term, Trs, Var


def ground_characterization(a: Dfta) -> Trs:
    """Rules ``f(rep q1, .., rep qk) -> rep(delta(q, f))``, skipping identities."""
    reps = state_representatives(a)
    rules = []
    for name, k in a.signature:
        T = a.tables[name]
        for q in np.ndindex(*T.shape):
            lhs = Node(name, [reps[p] for p in q])
            rhs = reps[int(T[q])]
            if lhs is not rhs:
                rules.append(Rule(lhs, rhs))
    return Trs(rules, a.signature, "ground")


class SyncDfa:
    """The word automaton over height-one contexts of ``a``.

    Letter ``l`` stands for ``f(q_1..q_{i-1}, [], q_{i+1}..q_k)`` and maps a
    state ``p`` to the state of that context with ``p`` in the hole.
    """

    def __init__(self, a: Dfta, budget: int = 10**6):
        self.automaton = a
        letters = Letters(a, budget)
        self.info = letters.info
        self.maps = letters.maps
        self.n_states = a.n_states
        self._closure = None

    @property
    def alphabet_size(self) -> int:
        return len(self.info)

    def step(self, states: Sequence[int], word: Sequence[int]) -> np.ndarray:
        cur = np.asarray(states, dtype=np.intp)
        for l in word:
            cur = self.maps[l][cur]
        return cur

    @property
    def closure(self):
        # pairs from which some word reaches the diagonal
        if self._closure is None:
            self._closure = pair_closure(self.maps, np.eye(self.n_states, dtype=bool))
        return self._closure

    def merging_word(self, p: int, q: int) -> Optional[List[int]]:
        marked, letter, succ = self.closure
        if not marked[p, q]:
            return None
        word = []
        while p != q:
            word.append(int(letter[p, q]))
            p, q = int(succ[p, q, 0]), int(succ[p, q, 1])
        return word

    def is_synchronizing(self) -> bool:
        return bool(self.closure[0].all())

    def synchronizing_word(self) -> Optional[List[int]]:
        """Greedy pair merging; not necessarily shortest."""
        if not self.is_synchronizing():
            return None
        word: List[int] = []
        cur = sorted(set(range(self.n_states)))
        while len(cur) > 1:
            w = self.merging_word(cur[0], cur[1])
            word.extend(w)
            cur = sorted(set(self.step(cur, w).tolist()))
        return word

    def context(self, word: Sequence[int]) -> Context:
        reps = state_representatives(self.automaton)
        term: Term = Var(HOLE)
        for l in word:
            term = letter_layer(self.info[l], reps, term)
        return Context(term)


def context_rule_exists(a: Dfta, budget: int = 10**6) -> Optional[Rule]:
    """A consistent rule ``c(X) -> c(r)`` with ``r`` ground, or None if there is none."""
    reps = state_representatives(a)
    r0 = reps[a.transition(a.signature.constants[0])]
    if a.n_states == 1:
        inner = sorted((k, name) for name, k in a.signature if k > 0)
        if not inner:
            return None
        k, name = inner[0]
        c = Context(Node(name, [Var(HOLE)] + [r0] * (k - 1)))
        return Rule(c.term, c.plug(r0))
    sync = SyncDfa(a, budget)
    word = sync.synchronizing_word()
    if word is None:
        return None
    c = sync.context(word)
    return Rule(c.term, c.plug(r0))
