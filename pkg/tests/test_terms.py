import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from treeadvice.dfta import Dfta
from treeadvice.terms import (
    ArityError,
    Context,
    Node,
    RewriteBudgetExceeded,
    Rule,
    Signature,
    TermError,
    TermSyntaxError,
    Trs,
    UnknownSymbolError,
    Var,
    builtin_rules,
    is_linear,
    is_normal,
    match,
    normal_form,
    parse_term,
    parse_trs,
    dump_trs,
    plug,
    rewrite_once,
    substitute,
    subterms,
    yield_of,
)

import brute

F2 = Signature([("f", 2), ("a", 0)])
FG = Signature([("f", 2), ("g", 1), ("a", 0), ("b", 0)])
ABC = Signature([("f", 2), ("a", 0), ("b", 0), ("c", 0)])


def T(text, sig=FG):
    return parse_term(text, sig)


def test_parse_examples():
    assert parse_term("f(a,X)", F2) is Node("f", [Node("a"), Var("X")])
    with pytest.raises(ArityError):
        parse_term("f(a)", F2)
    sig = Signature([("f", 2), ("g", 1), ("a", 0)])
    assert parse_term("g(f(X,Y))", sig) is Node("g", [Node("f", [Var("X"), Var("Y")])])


def test_parse_errors_carry_position():
    with pytest.raises(TermSyntaxError) as exc:
        parse_term("f(a,", F2)
    assert exc.value.position == 4
    with pytest.raises(UnknownSymbolError):
        parse_term("h(a)", F2)
    with pytest.raises(TermSyntaxError):
        parse_term("f(a,a) a", F2)


def test_signature_invariants():
    with pytest.raises(TermError):
        Signature([("f", 2)])
    with pytest.raises(TermError):
        Signature([("a", 0), ("a", 0)])


def test_hash_consing_and_print_roundtrip():
    t = T("f(g(a),f(X,b))")
    assert T(str(t)) is t
    assert t.size == 6
    assert not t.ground and is_linear(t)
    assert not is_linear(T("f(X,X)"))
    assert yield_of(T("f(f(a,b),g(b))")) == ["a", "b", "b"]


def test_substitute_examples():
    assert substitute(T("f(X,Y)"), {"X": T("a"), "Y": T("b")}) is T("f(a,b)")
    assert substitute(T("a"), {"X": T("b")}) is T("a")
    assert substitute(T("f(X,X)"), {"X": T("g(a)")}) is T("f(g(a),g(a))")
    assert substitute(T("f(X,Y)"), {"X": T("a")}) is T("f(a,Y)")


def test_plug_examples():
    t = T("f(a,b)")
    assert plug(Context.trivial(), t) is t
    assert plug(Context(T("g(X)")), T("a")) is T("g(a)")
    assert plug(Context(T("f(b,X)")), T("f(a,a)")) is T("f(b,f(a,a))")
    with pytest.raises(TermError):
        Context(T("f(X,X)"))


def test_context_compose():
    outer, inner = Context(T("f(b,X)")), Context(T("g(X)"))
    assert outer.compose(inner).plug(T("a")) is outer.plug(inner.plug(T("a")))


def test_rule_well_formedness():
    with pytest.raises(TermError):
        Rule(Var("X"), T("a"))
    with pytest.raises(TermError):
        Rule(T("g(X)"), T("f(X,Y)"))


def test_rewrite_once_examples():
    comm = builtin_rules("comm", ["f"], ABC)
    got = rewrite_once(comm, parse_term("f(a,f(a,b))", ABC))
    assert set(got) == {parse_term("f(f(a,b),a)", ABC), parse_term("f(a,f(b,a))", ABC)}
    assert rewrite_once(comm, parse_term("a", ABC)) == []
    assoc = builtin_rules("assoc", ["f"], ABC)
    assert rewrite_once(assoc, parse_term("f(a,f(b,c))", ABC)) == [parse_term("f(f(a,b),c)", ABC)]


def test_normal_form_examples():
    assoc = builtin_rules("assoc", ["f"], ABC)
    P = lambda s: parse_term(s, ABC)
    assert normal_form(assoc, P("f(a,f(b,a))")) is P("f(f(a,b),a)")
    assert normal_form(assoc, P("f(a,f(b,f(c,a)))")) is P("f(f(f(a,b),c),a)")
    t = P("f(f(a,b),c)")
    assert normal_form(assoc, t) is t


def test_normal_form_budget():
    comm = builtin_rules("comm", ["f"], ABC)
    with pytest.raises(RewriteBudgetExceeded):
        normal_form(comm, parse_term("f(a,b)", ABC), step_budget=50)


def test_builtin_families():
    sig = Signature([("f", 2), ("g", 1), ("a", 0)])
    (r,) = builtin_rules("assoc", ["f"], sig).rules
    assert str(r) == "f(X,f(Y,Z)) -> f(f(X,Y),Z)"
    (r,) = builtin_rules("distrib-unary", ["g", "f"], sig).rules
    assert str(r) == "g(f(X,Y)) -> f(g(X),g(Y))"
    (r,) = builtin_rules("idempotence", ["g"], sig).rules
    assert str(r) == "g(g(X)) -> g(X)"
    with pytest.raises(ArityError):
        builtin_rules("idempotence", ["f"], sig)
    with pytest.raises(ValueError):
        builtin_rules("nonsense", ["f"], sig)


def test_trs_file_roundtrip():
    text = "# advice\nsignature: f/2 g/1 a/0 b/0\nf(X,f(Y,Z)) -> f(f(X,Y),Z)  # assoc\n\ng(g(X)) -> g(X)\n"
    trs = parse_trs(text)
    assert len(trs) == 2 and trs.signature == FG
    assert parse_trs(dump_trs(trs)) == trs
    with pytest.raises(TermError):
        parse_trs("f(a,a) -> a")
    with pytest.raises(TermError):
        parse_trs("signature: f/2 a/0\nf(a,a) a")


# -- properties -----------------------------------------------------------------

ASSOC = builtin_rules("assoc", ["f"], ABC)
SMALL_ABC = brute.trees_upto(ABC, 9)
SMALL_FG = brute.trees_upto(FG, 6)
seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_substitute_then_evaluate(seed):
    rng = np.random.default_rng(seed)
    a = brute.random_dfta(FG, int(rng.integers(1, 5)), rng)
    t = brute.random_term(FG, rng, 7)
    sigma = {x: SMALL_FG[rng.integers(len(SMALL_FG))] for x in ("X", "Y")}
    assignment = {x: a.evaluate(s) for x, s in sigma.items()}
    assert a.evaluate_term(t, assignment) == a.evaluate(substitute(t, sigma))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_rewrite_once_replays(seed):
    rng = np.random.default_rng(seed)
    lhs = brute.random_term(FG, rng, 4)
    if isinstance(lhs, Var):
        lhs = Node("g", [lhs])
    rhs_vars = [v for v in ("X", "Y") if v in str(lhs)] or ["X"]
    rhs = brute.random_term(FG, rng, 4, variables=rhs_vars)
    if not set(rhs_vars) <= set(str(lhs)):
        rhs = Node("a")
    trs = Trs((Rule(lhs, rhs),), FG)
    t = SMALL_FG[rng.integers(len(SMALL_FG))]
    # every successor is one redex replacement at some position
    expected = set()
    for pos, sub in _positions(t):
        sigma = match(lhs, sub)
        if sigma is not None:
            expected.add(_replace(t, pos, substitute(rhs, sigma)))
    assert set(rewrite_once(trs, t)) == expected


def _positions(t, path=()):
    yield path, t
    for i, c in enumerate(t.children):
        yield from _positions(c, path + (i,))


def _replace(t, path, new):
    if not path:
        return new
    kids = list(t.children)
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return Node(t.symbol, kids)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SMALL_ABC))
def test_normal_form_reachable_irreducible_idempotent(t):
    nf = normal_form(ASSOC, t)
    assert is_normal(ASSOC, nf)
    assert normal_form(ASSOC, nf) is nf
    # replay: nf is reachable by some rewrite sequence
    frontier, seen = {t}, {t}
    while nf not in seen and frontier:
        frontier = {u for s in frontier for u in rewrite_once(ASSOC, s)} - seen
        seen |= frontier
    assert nf in seen


def test_assoc_normal_forms_determined_by_yield():
    by_yield = {}
    for t in SMALL_ABC:
        by_yield.setdefault(tuple(yield_of(t)), set()).add(normal_form(ASSOC, t))
    assert all(len(nfs) == 1 for nfs in by_yield.values())


def test_subterms_are_closed():
    t = T("f(g(a),f(a,g(a)))")
    subs = subterms(t)
    assert subs[-1] is t
    assert len(subs) == len(set(subs))
    for s in subs:
        assert all(c in subs for c in s.children)
