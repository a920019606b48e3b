import numpy as np
import pytest

from treeadvice.dfta import Dfta, minimize
from treeadvice.terms import Signature

BOOL_SIG = Signature([("bot", 0), ("top", 0), ("not", 1), ("and", 2), ("or", 2)])
FAB = Signature([("f", 2), ("a", 0), ("b", 0)])


def bool_eval():
    """Two-state evaluator of boolean formulas: q0 = false, q1 = true."""
    return Dfta(
        BOOL_SIG,
        2,
        [1],
        {
            "bot": 0,
            "top": 1,
            "not": [1, 0],
            "and": [[0, 0], [0, 1]],
            "or": [[0, 1], [1, 1]],
        },
    )


def contains_a():
    """Trees over f/2, a, b containing at least one ``a``: q0 = none, q1 = has."""
    return Dfta(FAB, 2, [1], {"a": 1, "b": 0, "f": [[0, 1], [1, 1]]})


def even_a():
    """Trees with an even number of ``a`` leaves: q0 = even, q1 = odd."""
    return Dfta(FAB, 2, [0], {"a": 1, "b": 0, "f": [[0, 1], [1, 0]]})


def all_trees(sig=FAB):
    return Dfta(sig, 1, [0], {name: np.zeros((1,) * k, dtype=int) for name, k in sig})


@pytest.fixture
def a_eval():
    return minimize(bool_eval())


@pytest.fixture
def has_a():
    return minimize(contains_a())


@pytest.fixture
def parity():
    return minimize(even_a())
