"""Bottom-up deterministic finite tree automata.

States are dense integers ``0..n-1``. The transition table of a symbol of
arity ``k`` is a numpy array of shape ``(n,) * k``; automata are always total.
"""
from __future__ import annotations

import itertools
import warnings
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .terms import (
    HOLE,
    Context,
    Node,
    Signature,
    Term,
    TermError,
    UnknownSymbolError,
    Var,
    sort_key,
    variables,
)

DEFAULT_ENUMERATION_BUDGET = 10**8
DEFAULT_TABLE_BUDGET = 10**7
_CHUNK = 1 << 20
_INF = 1 << 50


class BudgetExceeded(RuntimeError):
    pass


class UnreachableStateError(ValueError):
    pass


class IncompleteAutomatonWarning(UserWarning):
    pass


class Dfta:
    """A total bottom-up DFTA.

    ``transitions`` maps each symbol to an array-like of shape ``(n,) * arity``
    holding target states.
    """

    def __init__(
        self,
        signature: Signature,
        n_states: int,
        accepting: Iterable[int],
        transitions: Mapping[str, object],
        state_names: Optional[Sequence[str]] = None,
    ):
        n = int(n_states)
        if n < 1:
            raise ValueError("a DFTA needs at least one state")
        tables = {}
        for name, k in signature:
            if name not in transitions:
                raise ValueError(f"no transitions for symbol {name!r}")
            arr = np.array(transitions[name], dtype=np.intp)
            if arr.shape != (n,) * k:
                raise ValueError(f"table of {name!r} has shape {arr.shape}, expected {(n,) * k}")
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError(f"table of {name!r} refers to a state outside 0..{n - 1}")
            arr.flags.writeable = False
            tables[name] = arr
        acc = sorted({int(q) for q in accepting})
        if acc and (acc[0] < 0 or acc[-1] >= n):
            raise ValueError("accepting state out of range")
        mask = np.zeros(n, dtype=bool)
        mask[acc] = True
        mask.flags.writeable = False
        self.signature = signature
        self.n_states = n
        self.tables = tables
        self.accepting = frozenset(acc)
        self.accept_mask = mask
        self.state_names = tuple(state_names) if state_names is not None else tuple(f"q{i}" for i in range(n))
        if len(self.state_names) != n:
            raise ValueError("state_names length mismatch")
        self._flat = {name: arr.ravel().tolist() for name, arr in tables.items()}
        self._cache: Dict[str, object] = {}
        self.minimal = False

    def __repr__(self) -> str:
        return f"<Dfta {self.n_states} states, {len(self.accepting)} accepting over {self.signature}>"

    @property
    def states(self) -> range:
        return range(self.n_states)

    def transition(self, symbol: str, states: Sequence[int] = ()) -> int:
        idx = 0
        for q in states:
            idx = idx * self.n_states + q
        return self._flat[symbol][idx]

    # -- evaluation --------------------------------------------------------------

    def _run(self, t: Term, memo: Dict[Term, int]) -> int:
        flat = self._flat
        n = self.n_states
        stack = [t]
        while stack:
            node = stack[-1]
            if node in memo:
                stack.pop()
                continue
            if isinstance(node, Var):
                raise ValueError(f"no state assigned to variable {node.name!r}")
            pending = [c for c in node.children if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            idx = 0
            for c in node.children:
                idx = idx * n + memo[c]
            try:
                memo[node] = flat[node.symbol][idx]
            except KeyError:
                raise UnknownSymbolError(f"symbol {node.symbol!r} not in the automaton's signature") from None
        return memo[t]

    def evaluate(self, t: Term, memo: Optional[Dict[Term, int]] = None) -> int:
        """The state reached on the ground tree ``t``."""
        return self._run(t, {} if memo is None else memo)

    def accepts(self, t: Term, memo: Optional[Dict[Term, int]] = None) -> bool:
        return self.evaluate(t, memo) in self.accepting

    def evaluate_term(self, t: Term, assignment: Mapping[str, int]) -> int:
        """Evaluate a term with variables, reading ``assignment[X]`` at leaves ``X``."""
        memo: Dict[Term, int] = {}
        for name in variables(t):
            if name not in assignment:
                raise ValueError(f"no state assigned to variable {name!r}")
            memo[Var(name)] = int(assignment[name])
        return self._run(t, memo)

    def grid(self, t: Term, order: Sequence[str], fixed: Mapping[str, int] = {}) -> np.ndarray:
        """Vectorised ``evaluate_term`` over all assignments of the free variables.

        Free variables are those of ``order`` not in ``fixed``; the result
        broadcasts to ``(n,) * len(free)`` with axes in ``order``.
        """
        n = self.n_states
        free = [v for v in order if v not in fixed]
        axis = {v: i for i, v in enumerate(free)}
        k = len(free)
        memo: Dict[Term, np.ndarray] = {}

        def go(u: Term) -> np.ndarray:
            r = memo.get(u)
            if r is not None:
                return r
            if u.ground:
                r = np.asarray(self.evaluate(u), dtype=np.intp)
            elif isinstance(u, Var):
                if u.name in fixed:
                    r = np.asarray(fixed[u.name], dtype=np.intp)
                else:
                    shape = [1] * k
                    shape[axis[u.name]] = n
                    r = np.arange(n, dtype=np.intp).reshape(shape)
            else:
                kids = tuple(go(c) for c in u.children)
                r = np.asarray(self.tables[u.symbol][kids])
            memo[u] = r
            return r

        return go(t)

    def transformation(
        self,
        t: Term,
        order: Optional[Sequence[str]] = None,
        budget: int = DEFAULT_ENUMERATION_BUDGET,
    ) -> "StateTransformation":
        """The full table of the state transformation induced by ``t``."""
        order = list(variables(t) if order is None else order)
        size = self.n_states ** len(order)
        if size > budget:
            raise BudgetExceeded(f"{self.n_states}^{len(order)} assignments exceed the budget of {budget}")
        table = np.broadcast_to(self.grid(t, order), (self.n_states,) * len(order)).copy()
        return StateTransformation(tuple(order), table)

    # -- derived automata ----------------------------------------------------------

    def complement(self) -> "Dfta":
        out = Dfta(
            self.signature,
            self.n_states,
            [q for q in self.states if q not in self.accepting],
            self.tables,
            self.state_names,
        )
        return out

    def restrict(self, keep: Sequence[int]) -> "Dfta":
        """Sub-automaton on ``keep``, which must be closed under transitions."""
        keep = np.asarray(keep, dtype=np.intp)
        index = np.full(self.n_states, -1, dtype=np.intp)
        index[keep] = np.arange(len(keep))
        tables = {}
        for name, k in self.signature:
            sub = self.tables[name][np.ix_(*[keep] * k)] if k else self.tables[name]
            sub = index[sub]
            if (sub < 0).any():
                raise ValueError("restriction is not closed under transitions")
            tables[name] = sub
        return Dfta(
            self.signature,
            len(keep),
            [int(index[q]) for q in self.accepting if index[q] >= 0],
            tables,
            [self.state_names[q] for q in keep],
        )

    def relabel(self, order: Sequence[int]) -> "Dfta":
        """Same automaton with old state ``order[i]`` renamed to ``i``."""
        return self.restrict(order)


class StateTransformation:
    """The map ``Q^k -> Q`` induced by a term over ``k`` variables."""

    __slots__ = ("variables", "table")

    def __init__(self, variables: Tuple[str, ...], table: np.ndarray):
        self.variables = variables
        self.table = table

    @property
    def arity(self) -> int:
        return len(self.variables)

    def __call__(self, *states: int) -> int:
        return int(self.table[tuple(states)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, StateTransformation)
            and self.variables == other.variables
            and np.array_equal(self.table, other.table)
        )

    def as_dict(self) -> Dict[Tuple[int, ...], int]:
        return {tuple(int(i) for i in idx): int(v) for idx, v in np.ndenumerate(self.table)}

    def __repr__(self) -> str:
        return f"StateTransformation({self.variables}, {self.as_dict()})"


def evaluate(a: Dfta, t: Term) -> int:
    return a.evaluate(t)


def evaluate_term(a: Dfta, t: Term, assignment: Mapping[str, int]) -> int:
    return a.evaluate_term(t, assignment)


def transformation(a: Dfta, t: Term, budget: int = DEFAULT_ENUMERATION_BUDGET) -> StateTransformation:
    return a.transformation(t, budget=budget)


def complement(a: Dfta) -> Dfta:
    return a.complement()


def iter_assignment_chunks(n: int, k: int, chunk: int = _CHUNK):
    """Split ``Q^k`` into lexicographic blocks by fixing a prefix of variables.

    Yields ``(prefix, free)`` where ``free`` variables are enumerated per block.
    """
    fixed = 0
    while fixed < k and n ** (k - fixed) > chunk:
        fixed += 1
    for prefix in itertools.product(range(n), repeat=fixed):
        yield prefix, k - fixed


# -- reachability, shortest trees --------------------------------------------------


def reachable_states(a: Dfta) -> np.ndarray:
    reach = np.zeros(a.n_states, dtype=bool)
    for name, k in a.signature:
        if k == 0:
            reach[a.tables[name]] = True
    changed = True
    while changed:
        changed = False
        idx = np.flatnonzero(reach)
        for name, k in a.signature:
            if k == 0:
                continue
            vals = a.tables[name][np.ix_(*[idx] * k)]
            if not reach[vals].all():
                reach[vals] = True
                changed = True
    return np.flatnonzero(reach)


def _shortest_sizes(tables: Mapping[str, np.ndarray], arities: Sequence[Tuple[str, int]], n: int) -> np.ndarray:
    best = np.full(n, _INF, dtype=np.int64)
    while True:
        new = best.copy()
        for name, k in arities:
            T = tables[name]
            if k == 0:
                new[T] = min(new[T], 1)
                continue
            cand = np.ones((1,) * k, dtype=np.int64)
            for i in range(k):
                shape = [1] * k
                shape[i] = n
                cand = cand + best.reshape(shape)
            cand = np.minimum(np.broadcast_to(cand, T.shape), _INF)
            np.minimum.at(new, T.ravel(), cand.ravel())
        if np.array_equal(new, best):
            return best
        best = new


class _RepresentativeBuilder:
    """Lazily builds a minimum-size tree for each state, ties broken by print order."""

    def __init__(self, tables, arities, n, sizes):
        self.tables = tables
        self.arities = arities
        self.n = n
        self.sizes = sizes
        self.built: Dict[int, Term] = {}
        self._cands: Optional[Dict[int, List[Tuple[str, Tuple[int, ...]]]]] = None

    def _candidates(self):
        if self._cands is None:
            cands: Dict[int, List[Tuple[str, Tuple[int, ...]]]] = {}
            sizes = self.sizes
            for name, k in self.arities:
                T = self.tables[name]
                if k == 0:
                    cands.setdefault(int(T), []).append((name, ()))
                    continue
                total = np.ones((1,) * k, dtype=np.int64)
                for i in range(k):
                    shape = [1] * k
                    shape[i] = self.n
                    total = total + sizes.reshape(shape)
                ok = (total == sizes[T]) & (total < _INF)
                for cell in np.argwhere(ok):
                    cell = tuple(int(c) for c in cell)
                    cands.setdefault(int(T[cell]), []).append((name, cell))
            self._cands = cands
        return self._cands

    def get(self, q: int) -> Term:
        if q in self.built:
            return self.built[q]
        if self.sizes[q] >= _INF:
            raise UnreachableStateError(f"state {q} is not reachable")
        # children have strictly smaller sizes, so handle them first iteratively
        todo = [q]
        while todo:
            s = todo[-1]
            if s in self.built:
                todo.pop()
                continue
            missing = [c for _, cell in self._candidates()[s] for c in cell if c not in self.built]
            if missing:
                todo.extend(dict.fromkeys(missing))
                continue
            todo.pop()
            best = None
            for name, cell in self._candidates()[s]:
                t = Node(name, [self.built[c] for c in cell])
                if best is None or sort_key(t) < sort_key(best):
                    best = t
            self.built[s] = best
        return self.built[q]


def state_representatives(a: Dfta) -> List[Term]:
    """A minimum-size tree reaching each state (index = state)."""
    reps = a._cache.get("reps")
    if reps is None:
        sizes = _shortest_sizes(a.tables, a.signature.symbols, a.n_states)
        builder = _RepresentativeBuilder(a.tables, a.signature.symbols, a.n_states, sizes)
        reps = [builder.get(q) for q in a.states]
        a._cache["reps"] = reps
    return reps


# -- minimisation ----------------------------------------------------------------------


def _refine(a: Dfta) -> np.ndarray:
    n = a.n_states
    _, block = np.unique(a.accept_mask, return_inverse=True)
    block = block.reshape(-1)
    count = block.max() + 1
    while True:
        cols = [block[:, None]]
        for name, k in a.signature:
            if k == 0:
                continue
            image = block[a.tables[name]]
            for i in range(k):
                cols.append(np.moveaxis(image, i, 0).reshape(n, -1))
        _, new = np.unique(np.hstack(cols), axis=0, return_inverse=True)
        new = new.reshape(-1)
        new_count = new.max() + 1
        block = new
        if new_count == count:
            return block
        count = new_count


def minimize(a: Dfta) -> Dfta:
    """The minimal DFTA for ``L(a)``, states in canonical representative order."""
    if a.minimal:
        return a
    keep = reachable_states(a)
    if len(keep) < a.n_states:
        a = a.restrict(keep)
    block = _refine(a)
    nb = int(block.max()) + 1
    _, members = np.unique(block, return_index=True)
    tables = {}
    for name, k in a.signature:
        T = a.tables[name]
        tables[name] = block[T[np.ix_(*[members] * k)]] if k else block[T]
    acc = sorted({int(block[q]) for q in a.accepting})
    quotient = Dfta(a.signature, nb, acc, tables)
    reps = state_representatives(quotient)
    order = sorted(range(nb), key=lambda q: sort_key(reps[q]))
    relabelled = quotient.relabel(order)
    out = Dfta(a.signature, nb, relabelled.accepting, relabelled.tables)
    out._cache["reps"] = [reps[q] for q in order]
    out.minimal = True
    return out


def is_minimal(a: Dfta) -> bool:
    return minimize(a).n_states == a.n_states


# -- equivalence -----------------------------------------------------------------------


def _product(a: Dfta, b: Dfta):
    n2 = b.n_states
    codes: Dict[int, int] = {}
    left: List[int] = []
    right: List[int] = []

    def add(values: np.ndarray) -> bool:
        grew = False
        for c in np.unique(values).tolist():
            if c not in codes:
                codes[c] = len(left)
                left.append(c // n2)
                right.append(c % n2)
                grew = True
        return grew

    for name, k in a.signature:
        if k == 0:
            add(np.asarray([int(a.tables[name]) * n2 + int(b.tables[name])]))
    grew = True
    while grew:
        grew = False
        la = np.asarray(left, dtype=np.intp)
        ra = np.asarray(right, dtype=np.intp)
        for name, k in a.signature:
            if k == 0:
                continue
            va = a.tables[name][np.ix_(*[la] * k)]
            vb = b.tables[name][np.ix_(*[ra] * k)]
            grew |= add((va * n2 + vb).ravel())
    la = np.asarray(left, dtype=np.intp)
    ra = np.asarray(right, dtype=np.intp)
    lookup = np.full(a.n_states * n2, -1, dtype=np.intp)
    lookup[la * n2 + ra] = np.arange(len(la))
    tables = {}
    for name, k in a.signature:
        if k == 0:
            tables[name] = np.asarray(lookup[int(a.tables[name]) * n2 + int(b.tables[name])])
        else:
            tables[name] = lookup[a.tables[name][np.ix_(*[la] * k)] * n2 + b.tables[name][np.ix_(*[ra] * k)]]
    return tables, la, ra


def check_equivalence(a: Dfta, b: Dfta) -> Optional[Term]:
    """``None`` if ``L(a) = L(b)``, else a minimum-size tree in the symmetric difference."""
    if a.signature != b.signature:
        raise ValueError("automata are over different signatures")
    tables, la, ra = _product(a, b)
    differ = a.accept_mask[la] != b.accept_mask[ra]
    if not differ.any():
        return None
    n = len(la)
    sizes = _shortest_sizes(tables, a.signature.symbols, n)
    cand = np.flatnonzero(differ)
    smallest = sizes[cand].min()
    builder = _RepresentativeBuilder(tables, a.signature.symbols, n, sizes)
    witnesses = [builder.get(int(q)) for q in cand[sizes[cand] == smallest]]
    return min(witnesses, key=sort_key)


def equivalent(a: Dfta, b: Dfta) -> bool:
    return check_equivalence(a, b) is None


# -- height-one contexts and pair fixed points ---------------------------------------------


class Letters:
    """All height-one contexts ``f(q_1..q_{i-1}, [], q_{i+1}..q_k)`` of an automaton.

    ``maps[l]`` is the state map ``Q -> Q`` of letter ``l``; ``info[l]`` is
    ``(symbol, hole position, sibling states)``.
    """

    def __init__(self, a: Dfta, budget: int = 10**6):
        n = a.n_states
        total = sum(k * n ** (k - 1) for _, k in a.signature if k)
        if total > budget:
            raise BudgetExceeded(f"{total} height-one contexts exceed the budget of {budget}")
        info = []
        maps = []
        for name, k in a.signature:
            if k == 0:
                continue
            T = a.tables[name]
            for i in range(k):
                block = np.moveaxis(T, i, -1).reshape(-1, n)
                maps.append(block)
                for sib in itertools.product(range(n), repeat=k - 1):
                    info.append((name, i, sib))
        self.info = info
        self.maps = np.vstack(maps) if maps else np.zeros((0, n), dtype=np.intp)

    def __len__(self) -> int:
        return len(self.info)

    @classmethod
    def of(cls, a: Dfta) -> "Letters":
        letters = a._cache.get("letters")
        if letters is None:
            letters = a._cache["letters"] = cls(a)
        return letters


def pair_closure(maps: np.ndarray, init: np.ndarray):
    """Least set of pairs containing ``init`` and closed under letter preimages.

    A pair ``(p, q)`` joins once some letter maps it onto a member. Returns
    ``(marked, letter, succ)``: the set, the first letter that added each
    pair (``-1`` for ``init``) and the member pair it was mapped onto. Pairs
    are added in breadth-first rounds, so following ``succ`` gives a
    shortest letter chain back to ``init``.
    """
    n = init.shape[0]
    marked = init.copy()
    letter = np.full((n, n), -1, dtype=np.intp)
    succ = np.full((n, n, 2), -1, dtype=np.intp)
    frontier = init.copy()
    L = len(maps)
    step = max(1, _CHUNK * 8 // max(1, n * n))
    while frontier.any() and L:
        found = np.zeros((n, n), dtype=bool)
        first = np.full((n, n), -1, dtype=np.intp)
        for lo in range(0, L, step):
            M = maps[lo : lo + step]
            hit = frontier[M[:, :, None], M[:, None, :]]
            hit &= ~(marked | found)[None]
            any_hit = hit.any(axis=0)
            if any_hit.any():
                first[any_hit] = lo + hit.argmax(axis=0)[any_hit]
                found |= any_hit
        if not found.any():
            break
        ps, qs = np.nonzero(found)
        ls = first[ps, qs]
        letter[ps, qs] = ls
        succ[ps, qs, 0] = maps[ls, ps]
        succ[ps, qs, 1] = maps[ls, qs]
        marked |= found
        frontier = found
    return marked, letter, succ


def letter_layer(info, reps: Sequence[Term], inner: Term) -> Term:
    name, i, sib = info
    kids = [reps[q] for q in sib]
    kids.insert(i, inner)
    return Node(name, kids)


def chain_context(a: Dfta, closure, p: int, q: int, stop) -> Context:
    """Context built from the letter chain of ``closure`` starting at ``(p, q)``."""
    _, letter, succ = closure
    letters = Letters.of(a)
    reps = state_representatives(a)
    term: Term = Var(HOLE)
    while not stop(p, q):
        l = int(letter[p, q])
        if l < 0:
            raise ValueError(f"pair ({p}, {q}) has no witness chain")
        term = letter_layer(letters.info[l], reps, term)
        p, q = int(succ[p, q, 0]), int(succ[p, q, 1])
    return Context(term)


def _distinguishing_closure(a: Dfta):
    closure = a._cache.get("distinguish")
    if closure is None:
        acc = a.accept_mask
        closure = pair_closure(Letters.of(a).maps, acc[:, None] != acc[None, :])
        a._cache["distinguish"] = closure
    return closure


def distinguishing_context(a: Dfta, p: int, q: int) -> Context:
    """A context accepting exactly one of ``rep(p)``, ``rep(q)``."""
    if p == q:
        raise ValueError("a state cannot be distinguished from itself")
    closure = _distinguishing_closure(a)
    if not closure[0][p, q]:
        raise ValueError(f"states {p} and {q} are equivalent; minimise first")
    acc = a.accept_mask
    return chain_context(a, closure, p, q, lambda x, y: acc[x] != acc[y])


# -- file format -------------------------------------------------------------------------


def parse_dfta(text: str, table_budget: int = DEFAULT_TABLE_BUDGET) -> Dfta:
    """Read the line-oriented DFTA format; missing transitions go to a fresh sink."""
    signature = None
    names: List[str] = []
    accepting: List[str] = []
    rules: Dict[Tuple[str, Tuple[str, ...]], str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        if "->" not in line and head.strip() in ("signature", "states", "accepting"):
            key = head.strip()
            if key == "signature":
                signature = Signature.parse(rest)
            elif key == "states":
                names = rest.split()
            else:
                accepting = rest.split()
            continue
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise TermError(f"line {lineno}: expected a transition 'f(q1,...) -> q'")
        lhs = lhs.strip()
        sym, paren, args = lhs.partition("(")
        sym = sym.strip()
        if paren:
            if not args.endswith(")"):
                raise TermError(f"line {lineno}: unbalanced parentheses")
            vec = tuple(s.strip() for s in args[:-1].split(","))
        else:
            vec = ()
        rules[(sym, vec)] = rhs.strip()
    if signature is None:
        raise TermError("missing signature header")
    if not names:
        raise TermError("missing states header")
    index = {name: i for i, name in enumerate(names)}
    if len(index) != len(names):
        raise TermError("duplicate state names")
    n = len(names)
    for name, k in signature:
        if n**k > table_budget:
            raise BudgetExceeded(f"table of {name!r} needs {n**k} entries, budget {table_budget}")
    tables = {name: np.full((n,) * k, -1, dtype=np.intp) for name, k in signature}
    for (sym, vec), target in rules.items():
        if sym not in signature:
            raise UnknownSymbolError(f"unknown symbol {sym!r}")
        if len(vec) != signature.arity(sym):
            raise TermError(f"transition for {sym!r} has {len(vec)} arguments")
        try:
            tables[sym][tuple(index[s] for s in vec)] = index[target]
        except KeyError as exc:
            raise TermError(f"unknown state {exc.args[0]!r}") from None
    missing = sum(int((t < 0).sum()) for t in tables.values())
    if missing:
        sink = "sink"
        while sink in index:
            sink += "_"
        warnings.warn(
            f"{missing} missing transitions completed with sink state {sink!r}",
            IncompleteAutomatonWarning,
            stacklevel=2,
        )
        names = names + [sink]
        n += 1
        grown = {}
        for name, k in signature:
            big = np.full((n,) * k, n - 1, dtype=np.intp)
            old = tables[name]
            old = np.where(old < 0, n - 1, old)
            big[tuple(slice(0, n - 1) for _ in range(k))] = old
            grown[name] = big
        tables = grown
    try:
        acc = [index[s] for s in accepting]
    except KeyError as exc:
        raise TermError(f"unknown accepting state {exc.args[0]!r}") from None
    return Dfta(signature, n, acc, tables, names)


def dump_dfta(a: Dfta) -> str:
    names = a.state_names
    lines = [
        f"signature: {a.signature}",
        f"states: {' '.join(names)}",
        f"accepting: {' '.join(names[q] for q in sorted(a.accepting))}",
    ]
    for name, k in a.signature:
        T = a.tables[name]
        if k == 0:
            lines.append(f"{name} -> {names[int(T)]}")
            continue
        for idx in itertools.product(range(a.n_states), repeat=k):
            args = ",".join(names[q] for q in idx)
            lines.append(f"{name}({args}) -> {names[int(T[idx])]}")
    return "\n".join(lines) + "\n"


def load_dfta(path) -> Dfta:
    with open(path, encoding="utf-8") as fh:
        return parse_dfta(fh.read())


def save_dfta(a: Dfta, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_dfta(a))
