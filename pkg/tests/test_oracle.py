import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treeadvice.dfta import check_equivalence, minimize, state_representatives
from treeadvice.oracle import (
    ApproximateTeacher,
    ExactTeacher,
    SamplerConfig,
    SignatureMismatch,
    TokenLedger,
    approx_equivalence,
    exact_equivalence,
    exact_membership,
    make_rng,
    sample_tree,
)
from treeadvice.terms import Signature, parse_term

import brute
from conftest import BOOL_SIG, FAB, contains_a

FG = Signature([("f", 2), ("g", 1), ("a", 0), ("b", 0)])
seeds = st.integers(0, 2**32 - 1)


def test_exact_membership_examples(a_eval):
    assert exact_membership(a_eval, parse_term("top", BOOL_SIG))
    assert not exact_membership(a_eval, parse_term("bot", BOOL_SIG))
    for q in a_eval.accepting:
        assert exact_membership(a_eval, state_representatives(a_eval)[q])
    with pytest.raises(Exception):
        exact_membership(a_eval, parse_term("f(a,a)", FAB))


def test_exact_equivalence_examples(a_eval):
    assert exact_equivalence(a_eval, a_eval) is None
    cex = exact_equivalence(a_eval, a_eval.complement())
    assert cex.size == 1 and a_eval.accepts(cex) != a_eval.complement().accepts(cex)
    with pytest.raises(SignatureMismatch):
        exact_equivalence(a_eval, minimize(contains_a()))


def test_teacher_counters(a_eval):
    teacher = ExactTeacher(a_eval)
    teacher.membership(parse_term("top", BOOL_SIG))
    teacher.membership(parse_term("top", BOOL_SIG))
    assert (teacher.membership_queries, teacher.equivalence_queries) == (2, 0)
    assert teacher.equivalence(a_eval) is None
    assert (teacher.membership_queries, teacher.equivalence_queries) == (2, 1)
    assert teacher.target_size == 2 and teacher.tokens == 0
    with pytest.raises(Exception):
        teacher.membership(parse_term("not(X)", BOOL_SIG))


def test_sampler_config_validation():
    with pytest.raises(ValueError):
        SamplerConfig(sample_count=0)
    with pytest.raises(ValueError):
        SamplerConfig(max_tree_size=0)
    with pytest.raises(ValueError):
        SamplerConfig(leaf_probability=1.0)


def test_sample_tree_examples():
    rng = make_rng(3)
    cfg = SamplerConfig(max_tree_size=1)
    assert all(sample_tree(FG, cfg, rng).size == 1 for _ in range(50))
    cfg = SamplerConfig()
    assert sample_tree(FG, cfg, make_rng(7, 1)) is sample_tree(FG, cfg, make_rng(7, 1))
    rng = make_rng(11)
    sizes = np.array([sample_tree(FG, cfg, rng).size for _ in range(10_000)])
    assert sizes.min() >= 1 and sizes.max() <= cfg.max_tree_size
    assert 1 <= sizes.mean() <= cfg.max_tree_size


def test_streams_are_independent():
    a = make_rng(5, 0).integers(1 << 30, size=4)
    b = make_rng(5, 1).integers(1 << 30, size=4)
    c = make_rng(5, 0).integers(1 << 30, size=4)
    assert not np.array_equal(a, b) and np.array_equal(a, c)


def test_approx_equivalence_examples(a_eval):
    cfg = SamplerConfig(sample_count=200, seed=4)
    ledger = TokenLedger()
    rng = make_rng(4)
    assert approx_equivalence(a_eval, a_eval, cfg, ledger, rng) is None
    rng = make_rng(4)
    expected = sum(sample_tree(BOOL_SIG, cfg, rng).size for _ in range(200))
    assert ledger.tokens == expected
    # the complement disagrees on every tree, so the first sample is returned
    ledger = TokenLedger()
    cex = approx_equivalence(a_eval, a_eval.complement(), cfg, ledger, make_rng(4))
    assert cex is sample_tree(BOOL_SIG, cfg, make_rng(4))
    assert ledger.tokens == cex.size


def test_approximate_teacher_ledger(a_eval):
    teacher = ApproximateTeacher(a_eval, SamplerConfig(sample_count=50), make_rng(1))
    assert teacher.target_size is None
    teacher.equivalence(a_eval)
    first = teacher.tokens
    assert first > 0 and teacher.equivalence_queries == 1
    teacher.equivalence(a_eval)
    assert teacher.tokens > first


@settings(max_examples=50, deadline=None)
@given(seeds, seeds)
def test_approx_counterexamples_are_genuine(s1, s2):
    r1, r2 = np.random.default_rng(s1), np.random.default_rng(s2)
    a = minimize(brute.random_dfta(FG, int(r1.integers(1, 5)), r1))
    b = minimize(brute.random_dfta(FG, int(r2.integers(1, 5)), r2))
    ledger = TokenLedger()
    cex = approx_equivalence(a, b, SamplerConfig(sample_count=100), ledger, make_rng(s1))
    if cex is not None:
        assert a.accepts(cex) != b.accepts(cex)
    else:
        assert ledger.tokens >= 100


@settings(max_examples=50, deadline=None)
@given(seeds, seeds)
def test_enumeration_agrees_with_exact(s1, s2):
    # enumerating every tree up to size k in place of sampling
    r1, r2 = np.random.default_rng(s1), np.random.default_rng(s2)
    a = minimize(brute.random_dfta(FG, int(r1.integers(1, 4)), r1))
    b = minimize(brute.random_dfta(FG, int(r2.integers(1, 4)), r2))
    k = 5
    enumerated = brute.language_differs(a, b, k)
    exact = check_equivalence(a, b)
    if exact is None or exact.size <= k:
        assert (enumerated is None) == (exact is None)
    else:
        assert enumerated is None
