"""Teachers: membership and equivalence oracles for a hidden target DFTA.

The exact teacher answers equivalence through the product construction. The
approximate teacher tests the candidate on random trees and charges one token
per tested node.

Random streams: every session draws from ``numpy.random.PCG64`` seeded with
``SeedSequence(master_seed, spawn_key=(instance, repetition))``, so a run is
reproducible from the master seed and its coordinates alone.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .dfta import Dfta, check_equivalence, minimize
from .terms import Node, Signature, Term, TermError, check_term


class SignatureMismatch(TermError):
    pass


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """A portable generator for the given master seed and stream coordinates."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))))


def _same_signature(target: Dfta, cand: Dfta):
    if target.signature != cand.signature:
        raise SignatureMismatch(f"candidate signature {cand.signature} differs from {target.signature}")


@dataclass(frozen=True)
class SamplerConfig:
    sample_count: int = 1000
    max_tree_size: int = 50
    seed: int = 0
    leaf_probability: float = 0.35

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if self.max_tree_size < 1:
            raise ValueError("max_tree_size must be at least 1")
        if not 0.0 < self.leaf_probability < 1.0:
            raise ValueError("leaf_probability must lie in (0, 1)")


class TokenLedger:
    """Counts tree nodes shipped to the (simulated) expensive oracle."""

    def __init__(self):
        self.tokens = 0

    def charge(self, t: Term) -> None:
        self.tokens += t.size


def sample_tree(sig: Signature, cfg: SamplerConfig, rng: np.random.Generator) -> Term:
    """A random ground tree with at most ``cfg.max_tree_size`` nodes.

    A node with budget ``b`` becomes a leaf with probability ``max(p, 1/b)``,
    so leaves are forced only near the end of the budget; inner nodes split
    their budget randomly among children.
    """
    constants = sig.constants
    inner = sorted(((name, k) for name, k in sig if k > 0), key=lambda s: s[1])
    p = cfg.leaf_probability
    top = cfg.max_tree_size

    def build(budget: int) -> Term:
        options = [s for s in inner if s[1] <= budget - 1]
        p_leaf = max(p, 1.0 / budget)
        if not options or rng.random() < p_leaf:
            return Node(constants[int(rng.integers(len(constants)))])
        name, k = options[int(rng.integers(len(options)))]
        spare = budget - 1 - k
        shares = rng.multinomial(spare, [1.0 / k] * k) + 1
        return Node(name, [build(int(b)) for b in shares])

    return build(top)


class Teacher(ABC):
    """Minimally adequate teacher for one fixed target language.

    ``equivalence`` returns ``None`` when the candidate is accepted and a
    counterexample tree otherwise.
    """

    target_size: Optional[int] = None

    def __init__(self, signature: Signature):
        self.signature = signature
        self.membership_queries = 0
        self.equivalence_queries = 0

    def membership(self, t: Term) -> bool:
        self.membership_queries += 1
        return self._member(t)

    def equivalence(self, cand: Dfta) -> Optional[Term]:
        if cand.signature != self.signature:
            raise SignatureMismatch(f"candidate signature {cand.signature} differs from {self.signature}")
        self.equivalence_queries += 1
        return self._equivalent(cand)

    @property
    def tokens(self) -> int:
        return 0

    @abstractmethod
    def _member(self, t: Term) -> bool: ...

    @abstractmethod
    def _equivalent(self, cand: Dfta) -> Optional[Term]: ...


class ExactTeacher(Teacher):
    def __init__(self, target: Dfta):
        super().__init__(target.signature)
        self.target = minimize(target)
        self.target_size = self.target.n_states
        self._memo: Dict[Term, int] = {}

    def _member(self, t: Term) -> bool:
        check_term(t, self.signature)
        if not t.ground:
            raise TermError(f"membership needs a ground tree, got {t}")
        return self.target.accepts(t, self._memo)

    def _equivalent(self, cand: Dfta) -> Optional[Term]:
        return check_equivalence(self.target, cand)


class ApproximateTeacher(ExactTeacher):
    """Exact membership, sampled equivalence with token accounting."""

    def __init__(self, target: Dfta, config: SamplerConfig = SamplerConfig(), rng: Optional[np.random.Generator] = None):
        super().__init__(target)
        self.target_size = None
        self.config = config
        self.rng = rng if rng is not None else make_rng(config.seed)
        self.ledger = TokenLedger()

    @property
    def tokens(self) -> int:
        return self.ledger.tokens

    def _equivalent(self, cand: Dfta) -> Optional[Term]:
        return approx_equivalence(self.target, cand, self.config, self.ledger, self.rng, self._memo)


def exact_membership(target: Dfta, t: Term) -> bool:
    check_term(t, target.signature)
    return target.accepts(t)


def exact_equivalence(target: Dfta, cand: Dfta) -> Optional[Term]:
    _same_signature(target, cand)
    return check_equivalence(target, cand)


def approx_equivalence(
    target: Dfta,
    cand: Dfta,
    cfg: SamplerConfig,
    ledger: TokenLedger,
    rng: Optional[np.random.Generator] = None,
    memo: Optional[Dict[Term, int]] = None,
) -> Optional[Term]:
    """First sampled tree on which ``cand`` and ``target`` disagree, if any."""
    _same_signature(target, cand)
    rng = rng if rng is not None else make_rng(cfg.seed)
    memo = {} if memo is None else memo
    cand_memo: Dict[Term, int] = {}
    for _ in range(cfg.sample_count):
        t = sample_tree(target.signature, cfg, rng)
        ledger.charge(t)
        if target.accepts(t, memo) != cand.accepts(t, cand_memo):
            return t
    return None

