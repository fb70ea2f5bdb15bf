"""Context-free grammars and the constructions the pipeline needs.

A production is a pair (lhs, rhs) where rhs is a tuple of symbols; a symbol is
a variable iff it belongs to g.variables.  Grammars are immutable and hashable
so expensive analyses can be cached per grammar object value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetError, InputError
from .naming import fresh
from .symbols import (Alphabet, Dfa, Regex, REmpty, REpsilon, RSym, RConcat,
                      RUnion, RStar, Word, alphabet)

Production = tuple[str, tuple[str, ...]]


@dataclass(frozen=True)
class Cfg:
    variables: frozenset[str]
    terminals: Alphabet
    productions: frozenset[Production]
    start: str

    def __post_init__(self):
        if self.start not in self.variables:
            raise InputError(f"start symbol {self.start!r} is not a variable")
        overlap = set(self.variables) & set(self.terminals.symbols)
        if overlap:
            raise InputError(f"symbols are both variable and terminal: {overlap}")
        for lhs, rhs in self.productions:
            if lhs not in self.variables:
                raise InputError(f"production head {lhs!r} is not a variable")
            for s in rhs:
                if s not in self.variables and s not in self.terminals:
                    raise InputError(f"undeclared symbol {s!r} in {lhs} -> {rhs}")

    def alternatives(self, x: str) -> list[tuple[str, ...]]:
        return sorted(rhs for lhs, rhs in self.productions if lhs == x)

    def sorted_productions(self) -> list[Production]:
        return sorted(self.productions)


@dataclass(frozen=True)
class LinearGrammar(Cfg):
    """A Cfg whose right-hand sides contain at most one variable."""

    def __post_init__(self):
        super().__post_init__()
        for lhs, rhs in self.productions:
            if sum(1 for s in rhs if s in self.variables) > 1:
                raise InputError(f"{lhs} -> {rhs} is not linear")


def cfg(variables, terminals, productions, start) -> Cfg:
    sigma = terminals if isinstance(terminals, Alphabet) else alphabet(terminals)
    return Cfg(frozenset(variables), sigma,
               frozenset((l, tuple(r)) for l, r in productions), start)


# ---------------------------------------------------------------------------
# Text format


def parse_grammar(text: str) -> Cfg:
    """Parse the line format::

        start X0
        X0 -> a X1 | a
        X1 -> X0 b | eps

    Symbols are whitespace-separated; any symbol never used as a left-hand
    side is a terminal; 'eps' denotes the empty right-hand side.
    """
    start = None
    rules: list[tuple[str, list[str]]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start ") or line.startswith("start\t"):
            start = line.split(None, 1)[1].strip()
            continue
        if "->" not in line:
            raise InputError(f"cannot parse grammar line: {raw!r}")
        lhs, rest = line.split("->", 1)
        lhs = lhs.strip()
        if not lhs or len(lhs.split()) != 1:
            raise InputError(f"bad left-hand side in line: {raw!r}")
        for alt in rest.split("|"):
            rules.append((lhs, alt.split()))
    if not rules:
        raise InputError("grammar has no productions")
    variables = {lhs for lhs, _ in rules}
    if start is None:
        start = rules[0][0]
    if start not in variables:
        raise InputError(f"start symbol {start!r} has no productions")
    productions = set()
    terminals = set()
    for lhs, rhs in rules:
        syms = [s for s in rhs if s != "eps"]
        for s in syms:
            if s not in variables:
                terminals.add(s)
        productions.add((lhs, tuple(syms)))
    return Cfg(frozenset(variables), alphabet(sorted(terminals)),
               frozenset(productions), start)


def format_grammar(g: Cfg) -> str:
    lines = [f"start {g.start}"]
    for x in sorted(g.variables):
        alts = g.alternatives(x)
        if not alts:
            continue
        rendered = " | ".join(" ".join(rhs) if rhs else "eps" for rhs in alts)
        lines.append(f"{x} -> {rendered}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Trimming and emptiness


@lru_cache(maxsize=None)
def trim(g: Cfg) -> Cfg:
    """Keep only variables that are productive and reachable from the start.

    If the language is empty the result keeps just the start variable and no
    productions.
    """
    productive: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in g.productions:
            if lhs not in productive and all(
                    s in productive or s in g.terminals for s in rhs):
                productive.add(lhs)
                changed = True
    keep = {(l, r) for (l, r) in g.productions
            if l in productive and all(s in productive or s in g.terminals for s in r)}
    reachable = {g.start}
    frontier = [g.start]
    by_lhs: dict[str, list] = {}
    for l, r in keep:
        by_lhs.setdefault(l, []).append(r)
    while frontier:
        x = frontier.pop()
        for rhs in by_lhs.get(x, ()):
            for s in rhs:
                if s not in g.terminals and s not in reachable:
                    reachable.add(s)
                    frontier.append(s)
    keep = {(l, r) for (l, r) in keep if l in reachable}
    variables = {l for l, _ in keep} | {g.start}
    if type(g) is LinearGrammar:
        return LinearGrammar(frozenset(variables), g.terminals, frozenset(keep), g.start)
    return Cfg(frozenset(variables), g.terminals, frozenset(keep), g.start)


def is_empty_language(g: Cfg) -> bool:
    return not trim(g).productions


# ---------------------------------------------------------------------------
# Chomsky normal form and CYK


@dataclass(frozen=True)
class CnfGrammar:
    start: str
    binary: tuple[tuple[str, str, str], ...]   # (X, Y, Z) for X -> Y Z
    unary: tuple[tuple[str, str], ...]         # (X, a) for X -> a
    eps_in_language: bool


@lru_cache(maxsize=None)
def to_cnf(g: Cfg) -> CnfGrammar:
    g = trim(g)
    if not g.productions:
        return CnfGrammar(g.start, (), (), False)
    prods: set[Production] = set(g.productions)
    variables = set(g.variables)

    # BIN: cut right-hand sides down to length <= 2
    for lhs, rhs in sorted(prods):
        if len(rhs) > 2:
            prods.discard((lhs, rhs))
            head = lhs
            for i in range(len(rhs) - 2):
                nxt = fresh("cnf")
                variables.add(nxt)
                prods.add((head, (rhs[i], nxt)))
                head = nxt
            prods.add((head, rhs[-2:]))

    # DEL: eliminate nullable occurrences
    nullable: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, rhs in prods:
            if lhs not in nullable and all(s in nullable for s in rhs):
                nullable.add(lhs)
                changed = True
    eps_in_language = g.start in nullable
    expanded: set[Production] = set()
    for lhs, rhs in prods:
        subsets = [()]
        for s in rhs:
            if s in nullable:
                subsets = [t + (s,) for t in subsets] + list(subsets)
            else:
                subsets = [t + (s,) for t in subsets]
        for t in subsets:
            if t:
                expanded.add((lhs, t))
    prods = expanded

    # UNIT: eliminate X -> Y chains
    unit_pairs = {(x, x) for x in variables}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in prods:
            if len(rhs) == 1 and rhs[0] in variables:
                for (a, b) in list(unit_pairs):
                    if b == lhs and (a, rhs[0]) not in unit_pairs:
                        unit_pairs.add((a, rhs[0]))
                        changed = True
    final: set[Production] = set()
    for a, b in unit_pairs:
        for lhs, rhs in prods:
            if lhs == b and not (len(rhs) == 1 and rhs[0] in variables):
                final.add((a, rhs))

    # TERM: lift terminals occurring inside binary rules
    lift: dict[str, str] = {}
    binary: set[tuple[str, str, str]] = set()
    unary: set[tuple[str, str]] = set()
    for lhs, rhs in sorted(final):
        if len(rhs) == 1:
            unary.add((lhs, rhs[0]))
        else:
            parts = []
            for s in rhs:
                if s in variables:
                    parts.append(s)
                else:
                    if s not in lift:
                        lift[s] = fresh("term")
                        unary.add((lift[s], s))
                    parts.append(lift[s])
            binary.add((lhs, parts[0], parts[1]))
    return CnfGrammar(g.start, tuple(sorted(binary)), tuple(sorted(unary)),
                      eps_in_language)


def cyk_membership(g: Cfg, w: Word) -> bool:
    cnf = to_cnf(g)
    if len(w) == 0:
        return cnf.eps_in_language
    n = len(w)
    by_terminal: dict[str, set[str]] = {}
    for x, a in cnf.unary:
        by_terminal.setdefault(a, set()).add(x)
    table = [[set() for _ in range(n + 1)] for _ in range(n)]
    for i, a in enumerate(w):
        table[i][1] = set(by_terminal.get(a, set()))
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            cell = table[i][span]
            for split in range(1, span):
                left = table[i][split]
                right = table[i + split][span - split]
                if not left or not right:
                    continue
                for x, y, z in cnf.binary:
                    if y in left and z in right:
                        cell.add(x)
    return cnf.start in table[0][n]


def enumerate_words(g: Cfg, max_length: int, budget: int = 500_000) -> list[Word]:
    """All words of L(g) up to max_length, sorted; raises BudgetError when the
    total number of stored intermediate words exceeds the budget."""
    cnf = to_cnf(g)
    variables = ({x for x, _, _ in cnf.binary} | {y for _, y, _ in cnf.binary}
                 | {z for _, _, z in cnf.binary} | {x for x, _ in cnf.unary}
                 | {cnf.start})
    table: dict[str, list[set[Word]]] = {
        x: [set() for _ in range(max_length + 1)] for x in variables}
    stored = 0
    for x, a in cnf.unary:
        if max_length >= 1:
            table[x][1].add((a,))
            stored += 1
    changed = True
    while changed:
        changed = False
        for x, y, z in cnf.binary:
            for total in range(2, max_length + 1):
                cell = table[x][total]
                for i in range(1, total):
                    lefts, rights = table[y][i], table[z][total - i]
                    if not lefts or not rights:
                        continue
                    for u in lefts:
                        for v in rights:
                            wv = u + v
                            if wv not in cell:
                                cell.add(wv)
                                stored += 1
                                if stored > budget:
                                    raise BudgetError(
                                        f"enumeration exceeded {budget} words")
                                changed = True
    out: set[Word] = set()
    if cnf.eps_in_language:
        out.add(())
    for length in range(1, max_length + 1):
        out |= table[cnf.start][length]
    return sorted(out, key=lambda w: (len(w), w))


# ---------------------------------------------------------------------------
# Closure constructions


def binarize(g: Cfg) -> Cfg:
    """Cut right-hand sides to length <= 2 (mixed symbols allowed)."""
    prods: set[Production] = set()
    variables = set(g.variables)
    for lhs, rhs in g.sorted_productions():
        head, rest = lhs, rhs
        while len(rest) > 2:
            nxt = fresh("bin")
            variables.add(nxt)
            prods.add((head, (rest[0], nxt)))
            head, rest = nxt, rest[1:]
        prods.add((head, rest))
    return Cfg(frozenset(variables), g.terminals, frozenset(prods), g.start)


def product_with_dfa(g: Cfg, d: Dfa) -> Cfg:
    """Bar-Hillel product; recognizes L(g) intersected with the DFA language.

    Triples are built bottom-up from productive ones only, so the |Q|^3 blowup
    is paid only on pairs that can actually derive a word.
    """
    for a in g.terminals:
        if a not in d.alphabet:
            raise InputError(f"terminal {a!r} missing from automaton alphabet")
    g = binarize(trim(g))
    if not g.productions:
        return trim(g)

    # relation R[x] = set of (q, q') such that (q, x, q') is productive
    rel: dict[str, set[tuple[int, int]]] = {}
    for a in g.terminals:
        rel[a] = {(q, d.delta[(q, a)]) for q in range(d.n_states)}
    for x in g.variables:
        rel[x] = set()
    prods_by_lhs: dict[str, list] = {}
    for lhs, rhs in g.productions:
        prods_by_lhs.setdefault(lhs, []).append(rhs)
    changed = True
    while changed:
        changed = False
        for x, alts in prods_by_lhs.items():
            for rhs in alts:
                if len(rhs) == 0:
                    new = {(q, q) for q in range(d.n_states)}
                elif len(rhs) == 1:
                    new = set(rel[rhs[0]])
                else:
                    by_mid: dict[int, list[int]] = {}
                    for q1, q2 in rel[rhs[1]]:
                        by_mid.setdefault(q1, []).append(q2)
                    new = {(q0, q2) for q0, q1 in rel[rhs[0]]
                           for q2 in by_mid.get(q1, ())}
                if not new <= rel[x]:
                    rel[x] |= new
                    changed = True

    def tv(x, q, q2):
        return f"[{q},{x},{q2}]"

    prods: set[Production] = set()
    variables: set[str] = set()
    for x, alts in prods_by_lhs.items():
        for rhs in alts:
            if len(rhs) == 0:
                for q in range(d.n_states):
                    variables.add(tv(x, q, q))
                    prods.add((tv(x, q, q), ()))
            elif len(rhs) == 1:
                s = rhs[0]
                for q, q2 in rel[s]:
                    variables.add(tv(x, q, q2))
                    if s in g.terminals:
                        prods.add((tv(x, q, q2), (s,)))
                    else:
                        variables.add(tv(s, q, q2))
                        prods.add((tv(x, q, q2), (tv(s, q, q2),)))
            else:
                s1, s2 = rhs
                by_src: dict[int, list[int]] = {}
                for q1, q2 in rel[s2]:
                    by_src.setdefault(q1, []).append(q2)
                for q0, q1 in rel[s1]:
                    for q2 in by_src.get(q1, ()):
                        variables.add(tv(x, q0, q2))
                        part1 = (s1,) if s1 in g.terminals else (tv(s1, q0, q1),)
                        part2 = (s2,) if s2 in g.terminals else (tv(s2, q1, q2),)
                        if s1 not in g.terminals:
                            variables.add(tv(s1, q0, q1))
                        if s2 not in g.terminals:
                            variables.add(tv(s2, q1, q2))
                        prods.add((tv(x, q0, q2), part1 + part2))
    start = fresh("S")
    variables.add(start)
    for q in sorted(d.accepting):
        if (d.initial, q) in rel[g.start]:
            prods.add((start, (tv(g.start, d.initial, q),)))
    return trim(Cfg(frozenset(variables), g.terminals, frozenset(prods), start))


def substitute(g: Cfg, mapping: dict[str, Cfg]) -> Cfg:
    """Replace each mapped terminal by the language of its grammar."""
    for a in mapping:
        if a not in g.terminals:
            raise InputError(f"substituted symbol {a!r} is not a terminal of g")
    renamed: dict[str, Cfg] = {}
    prods: set[Production] = set()
    variables = set()
    used = set(g.variables)
    for a, ga in sorted(mapping.items()):
        tag = fresh("sub")
        ren = {x: f"{tag}:{x}" for x in ga.variables}
        renamed[a] = cfg_rename_variables(ga, ren)
        variables |= renamed[a].variables
        prods |= renamed[a].productions
        used |= renamed[a].variables
    for lhs, rhs in g.productions:
        new_rhs = tuple(renamed[s].start if s in renamed else s for s in rhs)
        prods.add((lhs, new_rhs))
    variables |= g.variables
    term_syms = sorted(
        (set(g.terminals.symbols) - set(mapping))
        | {a for ga in mapping.values() for a in ga.terminals.symbols})
    return Cfg(frozenset(variables), alphabet(term_syms), frozenset(prods), g.start)


def cfg_rename_variables(g: Cfg, ren: dict[str, str]) -> Cfg:
    prods = {(ren.get(l, l), tuple(ren.get(s, s) if s in g.variables else s for s in r))
             for l, r in g.productions}
    return Cfg(frozenset(ren.get(x, x) for x in g.variables), g.terminals,
               frozenset(prods), ren.get(g.start, g.start))


def cfg_rename_terminals(g: Cfg, ren: dict[str, str]) -> Cfg:
    """Apply a symbol-to-symbol homomorphism on terminals."""
    syms = [ren.get(a, a) for a in g.terminals.symbols]
    seen: list[str] = []
    for s in syms:
        if s not in seen:
            seen.append(s)
    prods = {(l, tuple(ren.get(s, s) if s in g.terminals else s for s in r))
             for l, r in g.productions}
    klass = LinearGrammar if type(g) is LinearGrammar else Cfg
    return klass(g.variables, alphabet(seen), frozenset(prods), g.start)


def union_alphabets(*sigmas: Alphabet) -> Alphabet:
    return alphabet(sorted({a for s in sigmas for a in s.symbols}))


def with_alphabet(g: Cfg, sigma: Alphabet) -> Cfg:
    """Re-declare g over a larger alphabet (language unchanged)."""
    for a in g.terminals:
        if a not in sigma:
            raise InputError(f"alphabet is missing terminal {a!r}")
    klass = LinearGrammar if type(g) is LinearGrammar else Cfg
    return klass(g.variables, sigma, g.productions, g.start)


def concat_grammars(gs: list[Cfg], sigma: Alphabet | None = None) -> Cfg:
    """Concatenation; with an empty list this is the language {epsilon}."""
    sigma = sigma or union_alphabets(*[g.terminals for g in gs]) if gs else (
        sigma or alphabet([]))
    start = fresh("cat")
    variables = {start}
    prods: set[Production] = set()
    starts = []
    for g in gs:
        tag = fresh("c")
        ren = {x: f"{tag}:{x}" for x in g.variables}
        rg = cfg_rename_variables(g, ren)
        variables |= rg.variables
        prods |= rg.productions
        starts.append(rg.start)
    prods.add((start, tuple(starts)))
    return Cfg(frozenset(variables), sigma, frozenset(prods), start)


def union_grammars(gs: list[Cfg], sigma: Alphabet | None = None) -> Cfg:
    """Union; with an empty list this is the empty language."""
    sigma = sigma or (union_alphabets(*[g.terminals for g in gs]) if gs
                      else alphabet([]))
    start = fresh("uni")
    variables = {start}
    prods: set[Production] = set()
    for g in gs:
        tag = fresh("u")
        ren = {x: f"{tag}:{x}" for x in g.variables}
        rg = cfg_rename_variables(g, ren)
        variables |= rg.variables
        prods |= rg.productions
        prods.add((start, (rg.start,)))
    return Cfg(frozenset(variables), sigma, frozenset(prods), start)


def finite_cfg(words: list[Word], sigma: Alphabet) -> Cfg:
    start = fresh("fin")
    prods = frozenset((start, tuple(w)) for w in words)
    return Cfg(frozenset({start}), sigma, prods, start)


def unit_cfg(symbol: str, sigma: Alphabet) -> Cfg:
    return finite_cfg([(symbol,)], sigma)


def regex_to_cfg(r: Regex, sigma: Alphabet) -> Cfg:
    counter = [0]
    prods: set[Production] = set()
    variables: set[str] = set()

    def build(rx) -> str:
        counter[0] += 1
        x = f"r{counter[0]}"
        variables.add(x)
        if isinstance(rx, REmpty):
            pass
        elif isinstance(rx, REpsilon):
            prods.add((x, ()))
        elif isinstance(rx, RSym):
            prods.add((x, (rx.symbol,)))
        elif isinstance(rx, RConcat):
            prods.add((x, (build(rx.left), build(rx.right))))
        elif isinstance(rx, RUnion):
            prods.add((x, (build(rx.left),)))
            prods.add((x, (build(rx.right),)))
        elif isinstance(rx, RStar):
            inner = build(rx.inner)
            prods.add((x, ()))
            prods.add((x, (inner, x)))
        else:
            raise InputError(f"not a regex: {rx!r}")
        return x

    start = build(r)
    tag = fresh("rx")
    ren = {x: f"{tag}:{x}" for x in variables}
    return cfg_rename_variables(
        Cfg(frozenset(variables), sigma, frozenset(prods), start), ren)


# ---------------------------------------------------------------------------
# Transducer product (used for block projection)


@dataclass(frozen=True)
class Transducer:
    """Finite transducer; a rule (q, a, out, q') reads a and emits the word out."""

    states: frozenset
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    rules: frozenset  # of (state, input symbol, output word, state)
    initial: object
    accepting: frozenset


def transducer_product(g: Cfg, t: Transducer) -> Cfg:
    """Grammar for { output of t on w : w in L(g), t accepts w }."""
    g = binarize(trim(g))
    if not g.productions:
        return Cfg(frozenset({g.start}), t.output_alphabet, frozenset(), g.start)
    by_input: dict[str, list] = {}
    for q, a, out, q2 in t.rules:
        by_input.setdefault(a, []).append((q, out, q2))

    rel: dict[str, set] = {a: {(q, q2) for q, _, q2 in by_input.get(a, ())}
                           for a in g.terminals}
    for x in g.variables:
        rel[x] = set()
    prods_by_lhs: dict[str, list] = {}
    for lhs, rhs in g.productions:
        prods_by_lhs.setdefault(lhs, []).append(rhs)
    changed = True
    while changed:
        changed = False
        for x, alts in prods_by_lhs.items():
            for rhs in alts:
                if len(rhs) == 0:
                    new = {(q, q) for q in t.states}
                elif len(rhs) == 1:
                    new = set(rel[rhs[0]])
                else:
                    by_mid: dict = {}
                    for q1, q2 in rel[rhs[1]]:
                        by_mid.setdefault(q1, []).append(q2)
                    new = {(q0, q2) for q0, q1 in rel[rhs[0]]
                           for q2 in by_mid.get(q1, ())}
                if not new <= rel[x]:
                    rel[x] |= new
                    changed = True

    def tv(x, q, q2):
        return f"[{q}|{x}|{q2}]"

    prods: set[Production] = set()
    variables: set[str] = set()

    def part(s, q, q2):
        variables.add(tv(s, q, q2))
        return (tv(s, q, q2),)

    for x, alts in prods_by_lhs.items():
        for rhs in alts:
            if len(rhs) == 0:
                for q in t.states:
                    variables.add(tv(x, q, q))
                    prods.add((tv(x, q, q), ()))
            elif len(rhs) == 1:
                for q, q2 in rel[rhs[0]]:
                    variables.add(tv(x, q, q2))
                    prods.add((tv(x, q, q2), part(rhs[0], q, q2)))
            else:
                s1, s2 = rhs
                by_src: dict = {}
                for q1, q2 in rel[s2]:
                    by_src.setdefault(q1, []).append(q2)
                for q0, q1 in rel[s1]:
                    for q2 in by_src.get(q1, ()):
                        variables.add(tv(x, q0, q2))
                        prods.add((tv(x, q0, q2),
                                   part(s1, q0, q1) + part(s2, q1, q2)))
    # terminal triples expand to transducer outputs
    for a in g.terminals:
        for q, out, q2 in by_input.get(a, ()):
            if tv(a, q, q2) in variables:
                prods.add((tv(a, q, q2), tuple(out)))
    start = fresh("S")
    variables.add(start)
    for qf in t.accepting:
        if (t.initial, qf) in rel[g.start]:
            prods.add((start, (tv(g.start, t.initial, qf),)))
    return trim(Cfg(frozenset(variables), t.output_alphabet, frozenset(prods), start))


def block_transducer(words: tuple[Word, ...], sigma: Alphabet) -> Transducer:
    """Reads w1^t1 ... wn^tn and emits a1^t1 ... an^tn (one output per block)."""
    n = len(words)
    out_sigma = alphabet([f"a{i}" for i in range(1, n + 1)])
    states = {("b", i) for i in range(n + 1)}
    rules = set()

    def pos_state(j, pos):
        return ("b", j) if pos == len(words[j - 1]) else ("in", j, pos)

    for j, w in enumerate(words, start=1):
        for pos in range(1, len(w)):
            states.add(("in", j, pos))
    for i in range(n + 1):
        for j in range(max(i, 1), n + 1):
            w = words[j - 1]
            out = (f"a{j}",) if len(w) == 1 else ()
            rules.add((("b", i), w[0], out, pos_state(j, 1)))
    for j, w in enumerate(words, start=1):
        for pos in range(1, len(w)):
            out = (f"a{j}",) if pos + 1 == len(w) else ()
            rules.add((pos_state(j, pos), w[pos], out, pos_state(j, pos + 1)))
    return Transducer(frozenset(states), sigma, out_sigma, frozenset(rules),
                      ("b", 0), frozenset(("b", i) for i in range(n + 1)))


def block_projection(g: Cfg, words: tuple[Word, ...]) -> Cfg:
    """Grammar over a1..an for { a1^t1...an^tn : w1^t1...wn^tn in L(g) }."""
    return transducer_product(g, block_transducer(words, g.terminals))


# ---------------------------------------------------------------------------
# Language-preserving simplification


def simplify(g: Cfg, max_rounds: int = 8) -> Cfg:
    """Shrink a grammar without changing its language.

    Combines trimming, merging of variables with identical production
    structure (a stable partition, so languages coincide), and inlining of
    non-recursive single-production variables.
    """
    g = trim(g)
    for _ in range(max_rounds):
        before = (len(g.variables), len(g.productions))
        g = _merge_equivalent(g)
        g = _inline_simple(g)
        g = trim(g)
        if (len(g.variables), len(g.productions)) == before:
            break
    return g


def _merge_equivalent(g: Cfg) -> Cfg:
    block: dict[str, int] = {x: 0 for x in g.variables}
    while True:
        signature: dict[str, tuple] = {}
        for x in g.variables:
            sig = frozenset(
                tuple(("v", block[s]) if s in g.variables else ("t", s) for s in rhs)
                for lhs, rhs in g.productions if lhs == x)
            signature[x] = sig
        groups: dict[tuple, list[str]] = {}
        for x in sorted(g.variables):
            groups.setdefault((block[x], signature[x]), []).append(x)
        new_block = {}
        for i, (_, members) in enumerate(sorted(groups.items(),
                                                key=lambda kv: kv[1][0])):
            for x in members:
                new_block[x] = i
        if new_block == block:
            break
        block = new_block
    rep: dict[int, str] = {}
    for x in sorted(g.variables):
        rep.setdefault(block[x], x)
    ren = {x: rep[block[x]] for x in g.variables}
    prods = {(ren[l], tuple(ren.get(s, s) for s in r)) for l, r in g.productions}
    return Cfg(frozenset(rep.values()), g.terminals, frozenset(prods), ren[g.start])


def _inline_simple(g: Cfg, size_cap: int = 12) -> Cfg:
    while True:
        prods_by_lhs: dict[str, list] = {x: [] for x in g.variables}
        for lhs, rhs in g.productions:
            prods_by_lhs[lhs].append(rhs)
        occurrences: dict[str, int] = {x: 0 for x in g.variables}
        for _, rhs in g.productions:
            for s in rhs:
                if s in occurrences:
                    occurrences[s] += 1
        target = None
        for x in sorted(g.variables):
            if x == g.start or len(prods_by_lhs[x]) != 1:
                continue
            rhs = prods_by_lhs[x][0]
            if x in rhs or occurrences[x] == 0:
                continue
            if len(rhs) <= 2 or occurrences[x] * len(rhs) <= size_cap:
                target = (x, rhs)
                break
        if target is None:
            return g
        x, body = target
        prods = set()
        for lhs, rhs in g.productions:
            if lhs == x:
                continue
            new_rhs: tuple[str, ...] = ()
            for s in rhs:
                new_rhs += body if s == x else (s,)
            prods.add((lhs, new_rhs))
        g = Cfg(g.variables - {x}, g.terminals, frozenset(prods), g.start)
