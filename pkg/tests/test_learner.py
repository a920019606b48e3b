import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treeadvice.dfta import Dfta, check_equivalence, equivalent, minimize
from treeadvice.learner import (
    IterationLimitExceeded,
    LearningError,
    ObservationTable,
    build_hypothesis,
    close_and_consist,
    default_iteration_cap,
    learn,
    process_counterexample,
)
from treeadvice.oracle import ApproximateTeacher, ExactTeacher, SamplerConfig, make_rng
from treeadvice.terms import Context, Signature, parse_term

import brute
from conftest import FAB, all_trees, bool_eval, even_a

F1 = Signature([("f", 2), ("a", 0)])
FG = Signature([("f", 2), ("g", 1), ("a", 0), ("b", 0)])
seeds = st.integers(0, 2**32 - 1)


class RecordingTeacher(ExactTeacher):
    def __init__(self, target):
        super().__init__(target)
        self.asked = []

    def _member(self, t):
        self.asked.append(t)
        return super()._member(t)


def table_for(target):
    teacher = ExactTeacher(target)
    return ObservationTable(target.signature, teacher.membership), teacher


def test_initial_table_parity_is_closed(parity):
    table, _ = table_for(parity)
    assert [str(s) for s in table.S] == ["a", "b"]
    assert table.rows[table.S[0]] != table.rows[table.S[1]]
    assert table.unclosed() is None and table.inconsistency() is None


def test_fresh_frontier_row_moves_into_s():
    # trees over f/2, a containing an f
    target = Dfta(F1, 2, [1], {"a": 0, "f": [[1, 1], [1, 1]]})
    table, _ = table_for(target)
    assert table.unclosed() is parse_term("f(a,a)", F1)
    close_and_consist(table)
    assert parse_term("f(a,a)", F1) in table.S


def test_closed_table_is_a_fixed_point(parity):
    table, teacher = table_for(parity)
    close_and_consist(table)
    before = (list(table.S), list(table.E), dict(table.rows), teacher.membership_queries)
    close_and_consist(table)
    assert (list(table.S), list(table.E), dict(table.rows), teacher.membership_queries) == before


def test_build_hypothesis_examples(parity):
    table, _ = table_for(parity)
    hyp = build_hypothesis(close_and_consist(table))
    assert hyp.dfta.n_states == 2 and equivalent(hyp.dfta, parity)
    for s, q in hyp.row_of.items():
        assert hyp.dfta.evaluate(s) == q
    one, _ = table_for(minimize(all_trees()))
    h1 = build_hypothesis(close_and_consist(one))
    assert h1.dfta.n_states == 1 and h1.dfta.accepting == {0}


def test_hypothesis_needs_closed_table():
    target = Dfta(F1, 2, [1], {"a": 0, "f": [[1, 1], [1, 1]]})
    table, _ = table_for(target)
    with pytest.raises(LearningError):
        build_hypothesis(table)


def test_process_counterexample_adds_subtrees(parity):
    table, _ = table_for(parity)
    process_counterexample(table, parse_term("f(a,b)", FAB))
    assert parse_term("f(a,b)", FAB) in table.S
    table, _ = table_for(parity)
    process_counterexample(table, parse_term("f(f(a,a),b)", FAB))
    assert parse_term("f(a,a)", FAB) in table.S
    assert parse_term("f(f(a,a),b)", FAB) in table.S
    for s in table.S:
        assert all(c in table.S for c in s.children)


def test_learn_examples(parity, a_eval):
    got, stats = learn(ExactTeacher(even_a()))
    assert equivalent(got, parity) and got.n_states == 2
    got, stats = learn(ExactTeacher(bool_eval()))
    assert equivalent(got, a_eval)
    got, stats = learn(ExactTeacher(all_trees()))
    assert got.n_states == 1 and stats.equivalence_queries == 1 and stats.hypotheses == 1


def test_iteration_cap():
    target = minimize(brute.random_dfta(FG, 5, np.random.default_rng(1)))
    teacher = ExactTeacher(target)
    assert default_iteration_cap(teacher) == 10 * target.n_states + 100
    assert default_iteration_cap(ApproximateTeacher(target)) == 1000
    if learn(ExactTeacher(target))[1].equivalence_queries > 1:
        with pytest.raises(IterationLimitExceeded):
            learn(ExactTeacher(target), max_iterations=1)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_learns_minimal_target(seed):
    rng = np.random.default_rng(seed)
    target = minimize(brute.random_dfta(FG, int(rng.integers(1, 7)), rng))
    teacher = RecordingTeacher(target)
    got, stats = learn(teacher)
    assert check_equivalence(got, target) is None
    assert got.n_states == target.n_states == stats.learned_states
    # structural caching: no composed tree is asked twice
    assert len(teacher.asked) == len(set(teacher.asked)) == stats.membership_queries
    assert stats.equivalence_queries == stats.hypotheses


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_table_grows_monotonically_and_makes_progress(seed):
    rng = np.random.default_rng(seed)
    target = minimize(brute.random_dfta(FG, int(rng.integers(2, 7)), rng))
    history = []

    def watch(iteration, table, hyp):
        history.append((len(table.S), len(table.E), hyp.dfta.n_states, hyp))

    learn(ExactTeacher(target), callback=watch)
    for (s0, e0, n0, h0), (s1, e1, n1, h1) in zip(history, history[1:]):
        assert s1 >= s0 and e1 >= e0 and n1 >= n0
        cex = check_equivalence(target, h0.dfta)
        assert n1 > n0 or h1.dfta.accepts(cex) == target.accepts(cex)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_approximate_teacher_learns_something_consistent(seed):
    rng = np.random.default_rng(seed)
    target = minimize(brute.random_dfta(FG, int(rng.integers(1, 5)), rng))
    teacher = ApproximateTeacher(target, SamplerConfig(sample_count=200), make_rng(seed))
    got, stats = learn(teacher)
    assert stats.tokens == teacher.tokens > 0
    assert got.n_states <= target.n_states
