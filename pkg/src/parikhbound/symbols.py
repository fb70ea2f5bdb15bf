"""Alphabets, words, Parikh vectors, elementary bounded languages, regexes and automata.

Words are tuples of symbol strings; the empty word is ``()``.  An elementary
bounded language ``w1* w2* ... wk*`` is represented by its ordered word list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError

Word = tuple[str, ...]
ParikhVector = tuple[int, ...]

EPSILON: Word = ()


def word(text: str) -> Word:
    """Parse a whitespace-separated word; '' or 'eps' denote the empty word."""
    text = text.strip()
    if not text or text == "eps":
        return EPSILON
    return tuple(text.split())


def chars(text: str) -> Word:
    """Split a string into single-character symbols (test convenience)."""
    return tuple(text)


@dataclass(frozen=True)
class Alphabet:
    """An ordered, duplicate-free tuple of symbols; order fixes Parikh coordinates."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError(f"duplicate symbols in alphabet: {self.symbols}")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]  # type: ignore[attr-defined]
        except KeyError:
            raise InputError(f"symbol {symbol!r} not in alphabet") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index  # type: ignore[attr-defined]

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


def alphabet(symbols) -> Alphabet:
    return Alphabet(tuple(symbols))


def parikh_of_word(w: Word, sigma: Alphabet) -> ParikhVector:
    """Count symbol occurrences; coordinate order follows the alphabet."""
    counts = [0] * len(sigma)
    for a in w:
        counts[sigma.index(a)] += 1
    return tuple(counts)


@dataclass(frozen=True)
class ElementaryBounded:
    """The language w1* w2* ... wk*.  Empty-word factors are dropped eagerly.

    ``words == ()`` denotes the singleton language {epsilon}.
    """

    words: tuple[Word, ...]

    def __post_init__(self):
        kept = tuple(tuple(w) for w in self.words if len(w) > 0)
        object.__setattr__(self, "words", kept)

    @property
    def k(self) -> int:
        return len(self.words)

    def total_length(self) -> int:
        return sum(len(w) for w in self.words)

    def symbols_used(self) -> tuple[str, ...]:
        return tuple(sorted({a for w in self.words for a in w}))


def eb(words) -> ElementaryBounded:
    return ElementaryBounded(tuple(tuple(w) for w in words))


def eb_concat(*parts: ElementaryBounded) -> ElementaryBounded:
    """Concatenation of elementary bounded languages, collapsing adjacent repeats.

    Dropping an adjacent duplicate is exact: x* x* = x*, and more generally
    y* is absorbed by an adjacent x* whenever y is a power of x.
    """
    out: list[Word] = []
    for part in parts:
        for w in part.words:
            if out and _is_power_of(w, out[-1]):
                continue
            out.append(w)
    return ElementaryBounded(tuple(out))


def _is_power_of(y: Word, x: Word) -> bool:
    if len(y) % len(x) != 0:
        return False
    return y == x * (len(y) // len(x))


def eb_to_text(b: ElementaryBounded) -> str:
    if not b.words:
        return "# k=0\n"
    return "".join(" ".join(w) + "\n" for w in b.words)


def eb_from_text(text: str) -> ElementaryBounded:
    words = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.append(tuple(line.split()))
    return eb(words)


# ---------------------------------------------------------------------------
# Finite automata


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; a transition symbol of None is an epsilon move."""

    states: frozenset
    alphabet: Alphabet
    transitions: frozenset  # of (state, symbol | None, state)
    initial: frozenset
    accepting: frozenset

    def __post_init__(self):
        by_source: dict = {}
        for p, a, q in self.transitions:
            by_source.setdefault((p, a), set()).add(q)
        object.__setattr__(self, "_delta", by_source)

    def _closure(self, qs: set) -> frozenset:
        stack, seen = list(qs), set(qs)
        while stack:
            q = stack.pop()
            for r in self._delta.get((q, None), ()):  # type: ignore[attr-defined]
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def step(self, qs: frozenset, a: str) -> frozenset:
        nxt: set = set()
        for q in qs:
            nxt |= self._delta.get((q, a), set())  # type: ignore[attr-defined]
        return self._closure(nxt)

    def accepts(self, w: Word) -> bool:
        current = self._closure(set(self.initial))
        for a in w:
            current = self.step(current, a)
            if not current:
                return False
        return bool(current & self.accepting)


class Dfa:
    """Deterministic automaton with a total transition function over its alphabet."""

    def __init__(self, n_states: int, sigma: Alphabet, delta: dict, initial: int,
                 accepting: frozenset):
        self.n_states = n_states
        self.alphabet = sigma
        self.delta = delta  # (state, symbol) -> state
        self.initial = initial
        self.accepting = frozenset(accepting)

    def accepts(self, w: Word) -> bool:
        q = self.initial
        for a in w:
            q = self.delta[(q, a)]
        return q in self.accepting

    def complement(self) -> "Dfa":
        return Dfa(self.n_states, self.alphabet, self.delta, self.initial,
                   frozenset(range(self.n_states)) - self.accepting)


def determinize(n: Nfa, sigma: Alphabet | None = None) -> Dfa:
    """Subset construction with epsilon closure; states are relabeled in BFS order."""
    sigma = sigma or n.alphabet
    start = n._closure(set(n.initial))  # type: ignore[attr-defined]
    ids = {start: 0}
    queue = [start]
    delta: dict = {}
    while queue:
        current = queue.pop(0)
        i = ids[current]
        for a in sigma:
            nxt = n.step(current, a)
            if nxt not in ids:
                ids[nxt] = len(ids)
                queue.append(nxt)
            delta[(i, a)] = ids[nxt]
    accepting = frozenset(i for s, i in ids.items() if s & n.accepting)
    return Dfa(len(ids), sigma, delta, 0, accepting)


def eb_to_nfa(b: ElementaryBounded, sigma: Alphabet | None = None) -> Nfa:
    """Chain-shaped NFA for w1*...wk* with 1 + sum(len(wi)) states.

    State ("b", i) marks "block i just completed" (block 0 = start); from there
    any block j >= max(i, 1) may begin.  All boundary states accept.
    """
    if sigma is None:
        sigma = alphabet(b.symbols_used())
    words = b.words
    transitions = set()
    states = {("b", 0)}
    for i, w in enumerate(words, start=1):
        for pos in range(1, len(w)):
            states.add(("in", i, pos))
        states.add(("b", i))

    def block_state(i: int, pos: int):
        # position pos symbols of block i consumed; pos == len(w) is boundary i
        return ("b", i) if pos == len(words[i - 1]) else ("in", i, pos)

    for i in range(len(words) + 1):
        # from boundary i, start any block j >= max(i, 1)
        for j in range(max(i, 1), len(words) + 1):
            w = words[j - 1]
            transitions.add((("b", i), w[0], block_state(j, 1)))
    for j, w in enumerate(words, start=1):
        for pos in range(1, len(w)):
            transitions.add((block_state(j, pos), w[pos], block_state(j, pos + 1)))
    accepting = frozenset(("b", i) for i in range(len(words) + 1))
    return Nfa(frozenset(states), sigma, frozenset(transitions),
               frozenset({("b", 0)}), accepting)


def eb_complement_dfa(b: ElementaryBounded, sigma: Alphabet) -> Dfa:
    for a in b.symbols_used():
        if a not in sigma:
            raise InputError(f"bounded-language symbol {a!r} missing from alphabet")
    return determinize(eb_to_nfa(b, sigma), sigma).complement()


# ---------------------------------------------------------------------------
# Regular expressions


class Regex:
    __slots__ = ()


@dataclass(frozen=True)
class REmpty(Regex):
    pass


@dataclass(frozen=True)
class REpsilon(Regex):
    pass


@dataclass(frozen=True)
class RSym(Regex):
    symbol: str


@dataclass(frozen=True)
class RConcat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class RUnion(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class RStar(Regex):
    inner: Regex


EMPTY = REmpty()
EPS = REpsilon()


def runion(a: Regex, b: Regex) -> Regex:
    if isinstance(a, REmpty):
        return b
    if isinstance(b, REmpty):
        return a
    if a == b:
        return a
    return RUnion(a, b)


def rconcat(a: Regex, b: Regex) -> Regex:
    if isinstance(a, REmpty) or isinstance(b, REmpty):
        return EMPTY
    if isinstance(a, REpsilon):
        return b
    if isinstance(b, REpsilon):
        return a
    return RConcat(a, b)


def rstar(a: Regex) -> Regex:
    if isinstance(a, (REmpty, REpsilon)):
        return EPS
    if isinstance(a, RStar):
        return a
    return RStar(a)


def regex_to_text(r: Regex) -> str:
    if isinstance(r, REmpty):
        return "{}"
    if isinstance(r, REpsilon):
        return "eps"
    if isinstance(r, RSym):
        return r.symbol
    if isinstance(r, RConcat):
        return f"({regex_to_text(r.left)} . {regex_to_text(r.right)})"
    if isinstance(r, RUnion):
        return f"({regex_to_text(r.left)} | {regex_to_text(r.right)})"
    if isinstance(r, RStar):
        return f"({regex_to_text(r.inner)})*"
    raise InputError(f"not a regex: {r!r}")


def nfa_to_regex(n: Nfa) -> Regex:
    """State elimination; states of lowest in*out degree go first."""
    INIT, FINAL = ("#init",), ("#final",)
    edges: dict = {}

    def add(p, q, r):
        if isinstance(r, REmpty):
            return
        edges[(p, q)] = runion(edges.get((p, q), EMPTY), r)

    for p, a, q in n.transitions:
        add(p, q, EPS if a is None else RSym(a))
    for q in n.initial:
        add(INIT, q, EPS)
    for q in n.accepting:
        add(q, FINAL, EPS)

    remaining = set(n.states)
    while remaining:
        def degree(s):
            ins = sum(1 for (p, q) in edges if q == s and p != s)
            outs = sum(1 for (p, q) in edges if p == s and q != s)
            return ins * outs

        s = min(sorted(remaining, key=repr), key=degree)
        remaining.discard(s)
        loop = rstar(edges.pop((s, s), EMPTY))
        ins = [(p, r) for (p, q), r in edges.items() if q == s]
        outs = [(q, r) for (p, q), r in edges.items() if p == s]
        for k in [k for k in list(edges) if k[0] == s or k[1] == s]:
            edges.pop(k)
        for p, rin in ins:
            for q, rout in outs:
                add(p, q, rconcat(rin, rconcat(loop, rout)))
    return edges.get((INIT, FINAL), EMPTY)


def regex_to_nfa(r: Regex, sigma: Alphabet) -> Nfa:
    """Thompson construction (uses epsilon transitions)."""
    counter = [0]
    transitions = set()

    def new_state():
        counter[0] += 1
        return counter[0]

    def build(rx) -> tuple[int, int]:
        s, t = new_state(), new_state()
        if isinstance(rx, REmpty):
            pass
        elif isinstance(rx, REpsilon):
            transitions.add((s, None, t))
        elif isinstance(rx, RSym):
            transitions.add((s, rx.symbol, t))
        elif isinstance(rx, RConcat):
            s1, t1 = build(rx.left)
            s2, t2 = build(rx.right)
            transitions.update({(s, None, s1), (t1, None, s2), (t2, None, t)})
        elif isinstance(rx, RUnion):
            s1, t1 = build(rx.left)
            s2, t2 = build(rx.right)
            transitions.update({(s, None, s1), (s, None, s2),
                                (t1, None, t), (t2, None, t)})
        elif isinstance(rx, RStar):
            s1, t1 = build(rx.inner)
            transitions.update({(s, None, s1), (t1, None, s1),
                                (s, None, t), (t1, None, t)})
        else:
            raise InputError(f"not a regex: {rx!r}")
        return s, t

    start, final = build(r)
    states = frozenset(range(1, counter[0] + 1))
    return Nfa(states, sigma, frozenset(transitions),
               frozenset({start}), frozenset({final}))
