"""Dataset generation.

* ``assoc``: random word DFAs turned into yield automata. A tree's state is
  the transformation its yield induces on the DFA, so every target is
  consistent with associativity of ``f``.
* ``distrib``: random DFTAs over ``f/2, g/1`` and constants, patched so that
  ``g(f(X,Y)) -> f(g(X),g(Y))`` holds; failures are rejected. By default the
  raw tables already have ``g`` commuting with ``f``: uniform tables mostly
  fail the check, and the few survivors collapse to tiny automata.
* ``comm``: random DFTAs over the same signature with a symmetric ``f`` table.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .consistency import check_full
from .dfta import Dfta, dump_dfta, load_dfta, minimize
from .oracle import make_rng
from .terms import Signature, Trs, builtin_rules

FAMILIES = ("assoc", "distrib", "comm")
LETTERS = "abcdefghijklmnopqrstuvwxyz"


class TooLarge(Exception):
    pass


@dataclass(frozen=True)
class GenSpec:
    """Generator parameters. Ranges are inclusive ``(lo, hi)`` pairs.

    ``alphabet_size`` counts word letters (assoc) or constants (distrib,
    comm). ``state_count`` is the word-DFA size for assoc and the raw DFTA
    size otherwise. ``max_dfta_states`` drops assoc instances whose
    transformation semigroup grows past it.
    """

    alphabet_size: Tuple[int, int] = (2, 4)
    state_count: Tuple[int, int] = (2, 8)
    acceptance_density: float = 0.5
    seed: int = 0
    count: int = 100
    triviality_threshold: int = 2
    max_dfta_states: int = 40
    max_attempts: int = 50  # per requested instance
    tables: str = "equivariant"  # raw table distribution for distrib

    def __post_init__(self):
        for name in ("alphabet_size", "state_count"):
            lo, hi = getattr(self, name)
            if lo < 1 or lo > hi:
                raise ValueError(f"{name} range {lo}..{hi} is empty")
        if not 0.0 < self.acceptance_density <= 1.0:
            raise ValueError("acceptance_density must lie in (0, 1]")
        if self.alphabet_size[1] > len(LETTERS):
            raise ValueError("too many letters")

    @classmethod
    def from_dict(cls, d: Dict) -> "GenSpec":
        d = dict(d)
        for name in ("alphabet_size", "state_count"):
            if name in d:
                d[name] = tuple(d[name])
        return cls(**d)


DEFAULT_SPECS = {
    "assoc": GenSpec(),
    "distrib": GenSpec(alphabet_size=(1, 3), state_count=(4, 16)),
    "comm": GenSpec(alphabet_size=(1, 3), state_count=(4, 16)),
}


def default_spec(family: str, **overrides) -> GenSpec:
    if family not in DEFAULT_SPECS:
        raise ValueError(f"unknown family {family!r}")
    return replace(DEFAULT_SPECS[family], **overrides)


# -- word DFAs ---------------------------------------------------------------------


class Dfa:
    def __init__(self, alphabet: Sequence[str], n_states: int, initial: int, accepting, transitions):
        self.alphabet = tuple(alphabet)
        self.n_states = int(n_states)
        self.initial = int(initial)
        self.accepting = frozenset(int(q) for q in accepting)
        self.delta = np.array(transitions, dtype=np.intp).reshape(self.n_states, len(self.alphabet))
        if self.delta.size and (self.delta.min() < 0 or self.delta.max() >= self.n_states):
            raise ValueError("transition target out of range")

    def run(self, word: Sequence[str]) -> int:
        q = self.initial
        for letter in word:
            q = int(self.delta[q, self.alphabet.index(letter)])
        return q

    def accepts(self, word: Sequence[str]) -> bool:
        return self.run(word) in self.accepting

    def minimize(self) -> "Dfa":
        # reachable part, then Moore refinement
        seen = [self.initial]
        index = {self.initial: 0}
        for q in seen:
            for p in self.delta[q]:
                if int(p) not in index:
                    index[int(p)] = len(seen)
                    seen.append(int(p))
        delta = self.delta[seen]
        acc = np.array([q in self.accepting for q in seen])
        succ = np.array([[index[int(p)] for p in row] for row in delta], dtype=np.intp).reshape(len(seen), -1)
        _, block = np.unique(acc, return_inverse=True)
        block = block.ravel()
        while True:
            sig = np.column_stack([block, block[succ]])
            _, new = np.unique(sig, axis=0, return_inverse=True)
            new = new.ravel()
            if new.max() == block.max():
                break
            block = new
        # number blocks by first appearance in BFS order
        renum: Dict[int, int] = {}
        for b in block:
            renum.setdefault(int(b), len(renum))
        nb = len(renum)
        table = np.zeros((nb, len(self.alphabet)), dtype=np.intp)
        accepting = set()
        for i, q in enumerate(seen):
            b = renum[int(block[i])]
            table[b] = [renum[int(block[index[int(p)]])] for p in self.delta[q]]
            if q in self.accepting:
                accepting.add(b)
        return Dfa(self.alphabet, nb, renum[int(block[0])], accepting, table)


def random_dfa(spec: GenSpec, rng: np.random.Generator) -> Dfa:
    n = int(rng.integers(spec.state_count[0], spec.state_count[1] + 1))
    m = int(rng.integers(spec.alphabet_size[0], spec.alphabet_size[1] + 1))
    delta = rng.integers(n, size=(n, m))
    acc = np.nonzero(rng.random(n) < spec.acceptance_density)[0]
    return Dfa(LETTERS[:m], n, 0, acc, delta).minimize()


def yield_signature(alphabet: Sequence[str]) -> Signature:
    return Signature([("f", 2)] + [(a, 0) for a in alphabet])


def dfa_to_yield_dfta(d: Dfa, max_states: Optional[int] = None) -> Dfta:
    """Minimal DFTA accepting the trees whose yield ``d`` accepts."""
    gens = [tuple(int(p) for p in d.delta[:, j]) for j in range(len(d.alphabet))]
    index: Dict[Tuple[int, ...], int] = {}
    elems: List[Tuple[int, ...]] = []

    def add(g):
        if g not in index:
            if max_states is not None and len(elems) >= max_states:
                raise TooLarge(f"more than {max_states} transformations")
            index[g] = len(elems)
            elems.append(g)

    for g in gens:
        add(g)
    # close under composition; pairs (i, j) with max(i, j) == cursor are new
    comp: Dict[Tuple[int, int], int] = {}
    cursor = 0
    while cursor < len(elems):
        for other in range(cursor + 1):
            for i, j in ((cursor, other), (other, cursor)):
                g1, g2 = elems[i], elems[j]
                # left subtree first, then right: q -> g2(g1(q))
                h = tuple(g2[q] for q in g1)
                add(h)
                comp[i, j] = index[h]
        cursor += 1
    m = len(elems)
    table = np.zeros((m, m), dtype=np.intp)
    for (i, j), k in comp.items():
        table[i, j] = k
    transitions = {"f": table}
    for j, a in enumerate(d.alphabet):
        transitions[a] = index[gens[j]]
    accepting = [k for k, g in enumerate(elems) if g[d.initial] in d.accepting]
    return minimize(Dfta(yield_signature(d.alphabet), m, accepting, transitions))


# -- distributivity and commutativity ---------------------------------------------


def unary_binary_signature(n_constants: int) -> Signature:
    return Signature([("f", 2), ("g", 1)] + [(a, 0) for a in LETTERS[:n_constants]])


def distributivity_rule(sig: Signature) -> Trs:
    return builtin_rules("distrib-unary", ["g", "f"], sig)


def _random_tables(spec: GenSpec, rng: np.random.Generator):
    n = int(rng.integers(spec.state_count[0], spec.state_count[1] + 1))
    c = int(rng.integers(spec.alphabet_size[0], spec.alphabet_size[1] + 1))
    sig = unary_binary_signature(c)
    f = rng.integers(n, size=(n, n))
    g = rng.integers(n, size=n)
    consts = rng.integers(n, size=c)
    acc = np.nonzero(rng.random(n) < spec.acceptance_density)[0]
    return sig, n, f, g, consts, acc


def _assemble(sig, n, f, g, consts, acc) -> Dfta:
    transitions = {"f": f, "g": g}
    for name, q in zip(sig.constants, consts):
        transitions[name] = int(q)
    return Dfta(sig, n, acc, transitions)


def _equivariant_tables(spec: GenSpec, rng: np.random.Generator):
    """Random tables where ``g`` is a permutation and ``f(g x, g y) = g f(x, y)``.

    ``f`` is chosen once per orbit of ``g x g`` on state pairs and carried
    along the orbit; the chosen value's ``g``-period must divide the orbit
    length for the orbit to close up.
    """
    sig, n, _, _, consts, acc = _random_tables(spec, rng)
    g = rng.permutation(n)
    period = []
    for q in range(n):
        p, x = 1, int(g[q])
        while x != q:
            x, p = int(g[x]), p + 1
        period.append(p)
    f = np.full((n, n), -1, dtype=np.intp)
    for x in range(n):
        for y in range(n):
            if f[x, y] >= 0:
                continue
            orbit = [(x, y)]
            a, b = int(g[x]), int(g[y])
            while (a, b) != (x, y):
                orbit.append((a, b))
                a, b = int(g[a]), int(g[b])
            fits = [q for q in range(n) if len(orbit) % period[q] == 0]
            v = fits[int(rng.integers(len(fits)))]
            for a, b in orbit:
                f[a, b] = v
                v = int(g[v])
    return sig, n, f, g, consts, acc


def force_distributivity(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Set ``f(q1, q2) = g(f(p1, p2))`` for ``q_i`` in the image of ``g``, ``p_i`` their smallest preimages.

    All values are read from the original table.
    """
    pre: Dict[int, int] = {}
    for s in range(len(g)):
        pre.setdefault(int(g[s]), s)
    forced = f.copy()
    for q1, p1 in pre.items():
        for q2, p2 in pre.items():
            forced[q1, q2] = g[f[p1, p2]]
    return forced


def random_distributive_dfta(spec: GenSpec, rng: np.random.Generator, tables: str = "equivariant") -> Optional[Dfta]:
    """A minimal DFTA consistent with ``g(f(X,Y)) -> f(g(X),g(Y))``, or None if rejected.

    ``tables`` picks the raw draw: ``"uniform"`` for independent uniform
    tables, ``"equivariant"`` for tables where ``g`` permutes the states and
    commutes with ``f``. The forcing step and the final check run either way.
    """
    if tables == "uniform":
        sig, n, f, g, consts, acc = _random_tables(spec, rng)
    elif tables == "equivariant":
        sig, n, f, g, consts, acc = _equivariant_tables(spec, rng)
    else:
        raise ValueError(f"unknown table distribution {tables!r}")
    a = minimize(_assemble(sig, n, force_distributivity(f, g), g, consts, acc))
    if check_full(a, distributivity_rule(sig)) is not None:
        return None
    return a


def random_commutative_dfta(spec: GenSpec, rng: np.random.Generator) -> Dfta:
    sig, n, f, g, consts, acc = _random_tables(spec, rng)
    sym = np.triu(f) + np.triu(f, 1).T
    return minimize(_assemble(sig, n, sym, g, consts, acc))


# -- datasets -------------------------------------------------------------------------


@dataclass
class Instance:
    id: int
    family: str
    stream: int  # RNG stream index under the master seed
    dfta: Dfta = field(repr=False)
    meta: Dict = field(default_factory=dict)


def advice_for(family: str, sig: Signature) -> Trs:
    if family == "assoc":
        return builtin_rules("assoc", ["f"], sig)
    if family == "distrib":
        return distributivity_rule(sig)
    if family == "comm":
        return builtin_rules("comm", ["f"], sig)
    raise ValueError(f"unknown family {family!r}")


def generate_one(family: str, spec: GenSpec, stream: int) -> Optional[Tuple[Dfta, Dict]]:
    rng = make_rng(spec.seed, stream)
    if family == "assoc":
        d = random_dfa(spec, rng)
        try:
            a = dfa_to_yield_dfta(d, spec.max_dfta_states)
        except TooLarge:
            return None
        return a, {"dfa_states": d.n_states, "letters": len(d.alphabet)}
    if family == "distrib":
        a = random_distributive_dfta(spec, rng, spec.tables)
        return None if a is None else (a, {})
    if family == "comm":
        return random_commutative_dfta(spec, rng), {}
    raise ValueError(f"unknown family {family!r}")


def generate(family: str, spec: GenSpec, keep=None) -> Tuple[List[Instance], Dict]:
    """``spec.count`` instances accepted by the generator and by ``keep``.

    Stream ``i`` is tried for ``i = 0, 1, ...``; rejected streams are skipped,
    so the dataset is a pure function of the spec.
    """
    out: List[Instance] = []
    rejected = {"generator": 0, "filter": 0}
    for stream in range(spec.count * spec.max_attempts):
        if len(out) >= spec.count:
            break
        got = generate_one(family, spec, stream)
        if got is None:
            rejected["generator"] += 1
            continue
        a, meta = got
        if keep is not None and not keep(a):
            rejected["filter"] += 1
            continue
        meta["states"] = a.n_states
        out.append(Instance(len(out), family, stream, a, meta))
    return out, {"rejected": rejected, "attempts": rejected["generator"] + rejected["filter"] + len(out)}


def is_nontrivial(a: Dfta, threshold: int = 2) -> bool:
    """True if the no-advice learner needs more than ``threshold`` equivalence queries."""
    from .learner import learn
    from .oracle import ExactTeacher

    _, stats = learn(ExactTeacher(a))
    return stats.equivalence_queries > threshold


def filter_trivial(instances: Sequence[Instance], threshold: int = 2) -> List[Instance]:
    if threshold <= 0:
        return list(instances)
    return [inst for inst in instances if is_nontrivial(inst.dfta, threshold)]


def generate_dataset(family: str, spec: GenSpec, drop_trivial: bool = True) -> Tuple[List[Instance], Dict]:
    keep = (lambda a: is_nontrivial(a, spec.triviality_threshold)) if drop_trivial and spec.triviality_threshold > 0 else None
    return generate(family, spec, keep)


def write_dataset(path, family: str, spec: GenSpec, instances: Sequence[Instance], info: Optional[Dict] = None) -> Path:
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for inst in instances:
        name = f"instance_{inst.id:04d}.dfta"
        (root / name).write_text(dump_dfta(inst.dfta))
        entries.append({"id": inst.id, "file": name, "stream": inst.stream, **inst.meta})
    manifest = {
        "family": family,
        "spec": asdict(spec),
        "rng": "PCG64(SeedSequence(seed, spawn_key=(stream,)))",
        "info": info or {},
        "instances": entries,
    }
    out = root / "manifest.json"
    out.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return out


def read_dataset(path) -> Tuple[str, List[Instance]]:
    root = Path(path)
    manifest = json.loads((root / "manifest.json").read_text())
    family = manifest["family"]
    instances = []
    for e in manifest["instances"]:
        a = minimize(load_dfta(root / e["file"]))
        meta = {k: v for k, v in e.items() if k not in ("id", "file", "stream")}
        instances.append(Instance(e["id"], family, e["stream"], a, meta))
    return family, instances
