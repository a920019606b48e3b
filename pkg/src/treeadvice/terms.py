"""Ranked signatures, terms, contexts and term rewriting.

Terms are hash-consed: two structurally equal terms are the same Python
object, so equality and hashing are O(1) and subtrees are shared freely.
"""
from __future__ import annotations

import re
import weakref
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple


class TermError(ValueError):
    """Base class for malformed terms, rules and signatures."""


class UnknownSymbolError(TermError):
    pass


class ArityError(TermError):
    pass


class TermSyntaxError(TermError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class RewriteBudgetExceeded(RuntimeError):
    """Raised when normalisation takes more steps than allowed.

    Usually means the TRS declared convergent is not terminating.
    """


_IDENT = re.compile(r"[^\W\d]\w*|\d\w*", re.UNICODE)


def is_variable_name(name: str) -> bool:
    return name[:1].isupper()


class Signature:
    """A ranked alphabet: symbol names with their arities, in declaration order."""

    __slots__ = ("_arity", "symbols")

    def __init__(self, symbols: Iterable[Tuple[str, int]]):
        symbols = tuple((str(name), int(arity)) for name, arity in symbols)
        arity: Dict[str, int] = {}
        for name, k in symbols:
            if not _IDENT.fullmatch(name) or is_variable_name(name):
                raise TermError(f"invalid symbol name {name!r}")
            if k < 0:
                raise ArityError(f"negative arity for {name!r}")
            if name in arity:
                raise TermError(f"duplicate symbol {name!r}")
            arity[name] = k
        if not any(k == 0 for k in arity.values()):
            raise TermError("signature needs at least one constant")
        self.symbols = symbols
        self._arity = arity

    def arity(self, name: str) -> int:
        try:
            return self._arity[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {name!r}") from None

    def __contains__(self, name: object) -> bool:
        return name in self._arity

    def __iter__(self) -> Iterator[Tuple[str, int]]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def constants(self) -> List[str]:
        return [name for name, k in self.symbols if k == 0]

    @property
    def max_arity(self) -> int:
        return max(k for _, k in self.symbols)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Signature({list(self.symbols)!r})"

    def __str__(self) -> str:
        return " ".join(f"{name}/{k}" for name, k in self.symbols)

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse ``"f/2 g/1 a/0"``."""
        symbols = []
        for item in text.split():
            name, sep, k = item.rpartition("/")
            if not sep or not k.isdigit():
                raise TermError(f"bad signature entry {item!r}")
            symbols.append((name, int(k)))
        return cls(symbols)


class Term:
    """Base class of :class:`Var` and :class:`Node`."""

    __slots__ = ()

    size: int
    ground: bool


class Var(Term):
    __slots__ = ("name", "__weakref__")

    _interned: Dict[str, "Var"] = {}
    size = 1
    ground = False
    children: Tuple["Term", ...] = ()

    def __new__(cls, name: str):
        var = cls._interned.get(name)
        if var is None:
            var = object.__new__(cls)
            var.name = name
            cls._interned[name] = var
        return var

    def __reduce__(self):
        return (Var, (self.name,))

    def __repr__(self) -> str:
        return f"Var({self.name!r})"

    def __str__(self) -> str:
        return self.name


_NODES: "weakref.WeakValueDictionary[tuple, Node]" = weakref.WeakValueDictionary()


class Node(Term):
    """A function symbol applied to children; constants have no children."""

    __slots__ = ("symbol", "children", "size", "ground", "_str", "__weakref__")

    def __new__(cls, symbol: str, children: Sequence[Term] = ()):
        children = tuple(children)
        key = (symbol, children)
        node = _NODES.get(key)
        if node is None:
            node = object.__new__(cls)
            node.symbol = symbol
            node.children = children
            node.size = 1 + sum(c.size for c in children)
            node.ground = all(c.ground for c in children)
            node._str = None
            _NODES[key] = node
        return node

    def __reduce__(self):
        return (Node, (self.symbol, self.children))

    def __repr__(self) -> str:
        return f"Node({str(self)!r})"

    def __str__(self) -> str:
        s = self._str
        if s is None:
            if self.children:
                s = f"{self.symbol}({','.join(map(str, self.children))})"
            else:
                s = self.symbol
            self._str = s
        return s


def sort_key(t: Term) -> Tuple[int, str]:
    """Canonical order on terms: by size, then by printed form."""
    return (t.size, str(t))


def subterms(t: Term) -> List[Term]:
    """All distinct subterms, children before parents."""
    seen = set()
    out = []
    stack: List[Tuple[Term, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded or not node.children:
            seen.add(node)
            out.append(node)
            continue
        stack.append((node, True))
        for child in reversed(node.children):
            if child not in seen:
                stack.append((child, False))
    return out


def variables(t: Term) -> List[str]:
    """Variable names in order of first (leftmost) occurrence."""
    names: List[str] = []
    seen = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if node.ground:
            continue
        if isinstance(node, Var):
            if node.name not in seen:
                seen.add(node.name)
                names.append(node.name)
        else:
            stack.extend(reversed(node.children))
    return names


def variable_occurrences(t: Term) -> List[str]:
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        if node.ground:
            continue
        if isinstance(node, Var):
            out.append(node.name)
        else:
            stack.extend(reversed(node.children))
    return out


def is_linear(t: Term) -> bool:
    occ = variable_occurrences(t)
    return len(occ) == len(set(occ))


def yield_of(t: Term) -> List[str]:
    """Left-to-right sequence of leaf symbols."""
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        if node.children:
            stack.extend(reversed(node.children))
        else:
            out.append(str(node))
    return out


def check_term(t: Term, sig: Signature) -> Term:
    """Validate that every node of ``t`` respects ``sig``; returns ``t``."""
    for node in subterms(t):
        if isinstance(node, Node):
            k = sig.arity(node.symbol)
            if k != len(node.children):
                raise ArityError(
                    f"{node.symbol!r} has arity {k}, got {len(node.children)} arguments"
                )
    return t


def const(name: str) -> Node:
    return Node(name, ())


# -- parsing -----------------------------------------------------------------


def parse_term(text: str, sig: Signature) -> Term:
    """Parse ``term := IDENT | IDENT '(' term (',' term)* ')'``.

    Identifiers starting with an uppercase letter are variables.
    """
    parser = _Parser(text, sig)
    t = parser.term()
    parser.skip_ws()
    if parser.pos != len(text):
        raise TermSyntaxError("trailing input", parser.pos)
    return t


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos : self.pos + 1]

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise TermSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def term(self) -> Term:
        self.skip_ws()
        start = self.pos
        m = _IDENT.match(self.text, self.pos)
        if not m:
            found = self.text[self.pos : self.pos + 1] or "end of input"
            raise TermSyntaxError(f"expected identifier, found {found!r}", self.pos)
        name = m.group()
        self.pos = m.end()
        if is_variable_name(name):
            if self.peek() == "(":
                raise TermSyntaxError(f"variable {name!r} cannot take arguments", self.pos)
            return Var(name)
        if name not in self.sig:
            raise UnknownSymbolError(f"unknown symbol {name!r} at position {start}")
        children = []
        if self.peek() == "(":
            self.pos += 1
            children.append(self.term())
            while self.peek() == ",":
                self.pos += 1
                children.append(self.term())
            self.expect(")")
        k = self.sig.arity(name)
        if k != len(children):
            raise ArityError(
                f"{name!r} has arity {k}, got {len(children)} arguments at position {start}"
            )
        return Node(name, children)


# -- substitution and contexts -------------------------------------------------


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    """Replace bound variables homomorphically; unbound ones stay."""
    if t.ground or not sigma:
        return t
    memo: Dict[Term, Term] = {}

    def go(u: Term) -> Term:
        if u.ground:
            return u
        if isinstance(u, Var):
            return sigma.get(u.name, u)
        r = memo.get(u)
        if r is None:
            r = Node(u.symbol, [go(c) for c in u.children])
            memo[u] = r
        return r

    return go(t)


HOLE = "X"


class Context:
    """A term with exactly one variable occurrence, the hole."""

    __slots__ = ("term", "hole", "path")

    def __init__(self, term: Term):
        occ = variable_occurrences(term)
        if len(occ) != 1:
            raise TermError(f"context needs exactly one variable occurrence, got {len(occ)}")
        self.term = term
        self.hole = occ[0]
        path = []
        node = term
        while isinstance(node, Node):
            for i, child in enumerate(node.children):
                if not child.ground:
                    path.append(i)
                    node = child
                    break
        self.path = tuple(path)

    @classmethod
    def trivial(cls) -> "Context":
        return cls(Var(HOLE))

    @property
    def depth(self) -> int:
        return len(self.path)

    def plug(self, t: Term) -> Term:
        # rebuild only the spine from the root to the hole
        spine = []
        node = self.term
        for i in self.path:
            spine.append((node, i))
            node = node.children[i]
        out = t
        for parent, i in reversed(spine):
            kids = list(parent.children)
            kids[i] = out
            out = Node(parent.symbol, kids)
        return out

    def compose(self, inner: "Context") -> "Context":
        """The context ``self(inner(X))``."""
        return Context(self.plug(inner.term))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Context) and self.term is other.term

    def __hash__(self) -> int:
        return hash(self.term)

    def __repr__(self) -> str:
        return f"Context({str(self.term)!r})"

    def __str__(self) -> str:
        return str(self.term)


def plug(c: Context, t: Term) -> Term:
    return c.plug(t)


# -- rules and rewriting ---------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise TermError("left-hand side of a rule cannot be a variable")
        extra = set(variables(self.rhs)) - set(variables(self.lhs))
        if extra:
            raise TermError(f"right-hand side variables {sorted(extra)} not in left-hand side")

    @property
    def variables(self) -> List[str]:
        """Variables in order of first occurrence in the left-hand side."""
        return variables(self.lhs)

    @property
    def linear(self) -> bool:
        return is_linear(self.lhs) and is_linear(self.rhs)

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


@dataclass(frozen=True)
class Trs:
    rules: Tuple[Rule, ...]
    signature: Signature
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for rule in self.rules:
            check_term(rule.lhs, self.signature)
            check_term(rule.rhs, self.signature)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __bool__(self) -> bool:
        return bool(self.rules)

    def __str__(self) -> str:
        return dump_trs(self)

    @classmethod
    def empty(cls, signature: Signature) -> "Trs":
        return cls((), signature)


def match(pattern: Term, t: Term, binding: Optional[Dict[str, Term]] = None) -> Optional[Dict[str, Term]]:
    """Syntactic matching; supports non-linear patterns."""
    if binding is None:
        binding = {}
    stack = [(pattern, t)]
    while stack:
        p, u = stack.pop()
        if p.ground:
            if p is not u:
                return None
        elif isinstance(p, Var):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = u
            elif bound is not u:
                return None
        else:
            if not isinstance(u, Node) or u.symbol != p.symbol:
                return None
            stack.extend(zip(p.children, u.children))
    return binding


def rewrite_root(trs: Trs, t: Term) -> List[Term]:
    out = []
    for rule in trs.rules:
        sigma = match(rule.lhs, t)
        if sigma is not None:
            out.append(substitute(rule.rhs, sigma))
    return out


def rewrite_once(trs: Trs, t: Term) -> List[Term]:
    """Every term reachable from ``t`` in exactly one rewrite step.

    Positions are visited in pre-order, rules in TRS order; duplicates
    are dropped, first occurrence wins.
    """
    results: Dict[Term, None] = {}

    def go(u: Term) -> List[Term]:
        found = rewrite_root(trs, u)
        for i, child in enumerate(u.children):
            for new_child in go(child):
                kids = list(u.children)
                kids[i] = new_child
                found.append(Node(u.symbol, kids))
        return found

    for r in go(t):
        results.setdefault(r)
    return list(results)


def normal_form(
    trs: Trs,
    t: Term,
    step_budget: Optional[int] = None,
    memo: Optional[Dict[Term, Term]] = None,
) -> Term:
    """Leftmost-innermost normal form; the TRS must be convergent.

    ``memo`` may be shared between calls with the same TRS.
    """
    if not trs.rules:
        return t
    if step_budget is None:
        step_budget = 10 * t.size * t.size
    if memo is None:
        memo = {}
    steps = [0]

    def nf(u: Term) -> Term:
        r = memo.get(u)
        if r is not None:
            return r
        if u.children:
            v = Node(u.symbol, [nf(c) for c in u.children])
        else:
            v = u
        for rule in trs.rules:
            sigma = match(rule.lhs, v)
            if sigma is not None:
                steps[0] += 1
                if steps[0] > step_budget:
                    raise RewriteBudgetExceeded(
                        f"normal form of {t} not reached within {step_budget} steps"
                    )
                v = nf(substitute(rule.rhs, sigma))
                break
        memo[u] = v
        memo[v] = v
        return v

    return nf(t)


def is_normal(trs: Trs, t: Term) -> bool:
    return not rewrite_once(trs, t)


# -- built-in rule families ----------------------------------------------------

_FAMILIES = {
    # family: (required arities, lhs, rhs)
    "assoc": ((2,), "{0}(X,{0}(Y,Z))", "{0}({0}(X,Y),Z)"),
    "assoc-right": ((2,), "{0}({0}(X,Y),Z)", "{0}(X,{0}(Y,Z))"),
    "comm": ((2,), "{0}(X,Y)", "{0}(Y,X)"),
    "distrib-left": ((2, 2), "{0}(X,{1}(Y,Z))", "{1}({0}(X,Y),{0}(X,Z))"),
    "distrib-right": ((2, 2), "{0}({1}(X,Y),Z)", "{1}({0}(X,Z),{0}(Y,Z))"),
    "distrib-unary": ((1, 2), "{0}({1}(X,Y))", "{1}({0}(X),{0}(Y))"),
    "commute-unary": ((1, 1), "{0}({1}(X))", "{1}({0}(X))"),
    "idempotence": ((1,), "{0}({0}(X))", "{0}(X)"),
}

FAMILIES = tuple(_FAMILIES)


def builtin_rules(family: str, symbols: Sequence[str], signature: Signature) -> Trs:
    """The single-rule TRS of a named family instantiated with ``symbols``."""
    try:
        arities, lhs, rhs = _FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown rule family {family!r}; expected one of {FAMILIES}") from None
    if len(symbols) != len(arities):
        raise ArityError(f"{family} needs {len(arities)} symbols, got {len(symbols)}")
    for name, k in zip(symbols, arities):
        if signature.arity(name) != k:
            raise ArityError(f"{family} needs {name!r} of arity {k}")
    rule = Rule(parse_term(lhs.format(*symbols), signature), parse_term(rhs.format(*symbols), signature))
    return Trs((rule,), signature, name=f"{family}({','.join(symbols)})")


# -- TRS files -------------------------------------------------------------------


def parse_trs(text: str, signature: Optional[Signature] = None) -> Trs:
    """Read the line format ``signature: f/2 a/0`` followed by ``lhs -> rhs`` lines."""
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("signature:"):
            declared = Signature.parse(line[len("signature:") :])
            if signature is not None and declared != signature:
                raise TermError(f"line {lineno}: signature differs from the expected one")
            signature = declared
            continue
        if signature is None:
            raise TermError(f"line {lineno}: rule before signature header")
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise TermError(f"line {lineno}: expected 'lhs -> rhs'")
        try:
            rules.append(Rule(parse_term(lhs.strip(), signature), parse_term(rhs.strip(), signature)))
        except TermError as exc:
            raise TermError(f"line {lineno}: {exc}") from exc
    if signature is None:
        raise TermError("missing signature header")
    return Trs(tuple(rules), signature)


def dump_trs(trs: Trs) -> str:
    lines = [f"signature: {trs.signature}"]
    lines.extend(str(rule) for rule in trs.rules)
    return "\n".join(lines) + "\n"


def load_trs(path, signature: Optional[Signature] = None) -> Trs:
    with open(path, encoding="utf-8") as fh:
        return parse_trs(fh.read(), signature)


def union(*systems: Trs) -> Trs:
    sig = systems[0].signature
    rules: List[Rule] = []
    for trs in systems:
        if trs.signature != sig:
            raise TermError("cannot join TRSs over different signatures")
        rules.extend(r for r in trs.rules if r not in rules)
    return Trs(tuple(rules), sig)
