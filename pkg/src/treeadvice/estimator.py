"""scikit-learn style front end to the learner.

``fit`` takes a teacher (or a target DFTA, wrapped in an exact teacher)
instead of a feature matrix: the learner chooses its own queries.
``predict`` and ``transform`` take sequences of ground trees.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .advice import AdviceConfig
from .dfta import Dfta
from .learner import learn
from .oracle import ExactTeacher, Teacher
from .terms import Term, Trs, check_term, parse_term


class TreeAutomatonLearner(ClassifierMixin, BaseEstimator):
    def __init__(
        self,
        advice_full: Optional[Trs] = None,
        advice_positive: Optional[Trs] = None,
        advice_negative: Optional[Trs] = None,
        mem_trs: Optional[Trs] = None,
        check_mode: str = "exact",
        max_iterations: Optional[int] = None,
    ):
        self.advice_full = advice_full
        self.advice_positive = advice_positive
        self.advice_negative = advice_negative
        self.mem_trs = mem_trs
        self.check_mode = check_mode
        self.max_iterations = max_iterations

    def _advice(self) -> AdviceConfig:
        return AdviceConfig(
            full=self.advice_full,
            positive=self.advice_positive,
            negative=self.advice_negative,
            mem=self.mem_trs,
            check_mode=self.check_mode,
        )

    def fit(self, X, y=None):
        if isinstance(X, Dfta):
            X = ExactTeacher(X)
        if not isinstance(X, Teacher):
            raise TypeError(f"fit expects a Teacher or a Dfta, got {type(X).__name__}")
        self.automaton_, self.stats_ = learn(X, self._advice(), self.max_iterations)
        self.signature_ = self.automaton_.signature
        self.classes_ = np.array([0, 1])
        self.n_states_ = self.automaton_.n_states
        return self

    def _trees(self, X) -> Sequence[Term]:
        check_is_fitted(self, "automaton_")
        if isinstance(X, (Term, str)):
            raise TypeError("expected a sequence of trees, not a single tree")
        out = []
        for t in X:
            t = parse_term(t, self.signature_) if isinstance(t, str) else check_term(t, self.signature_)
            if not t.ground:
                raise ValueError(f"cannot classify the non-ground term {t}")
            out.append(t)
        return out

    def transform(self, X) -> np.ndarray:
        """Automaton state of every tree."""
        trees = self._trees(X)
        a, memo = self.automaton_, {}
        return np.array([a.evaluate(t, memo) for t in trees], dtype=np.intp)

    def predict(self, X) -> np.ndarray:
        states = self.transform(X)
        return self.automaton_.accept_mask[states].astype(int) if len(states) else np.zeros(0, dtype=int)
