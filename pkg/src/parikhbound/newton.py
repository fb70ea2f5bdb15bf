"""Newton iteration on the semiring of languages, in grammar form.

For a grammar G the differential grammar G~ is linear: every production
X -> alpha spawns one copy per kept variable occurrence (the other
occurrences are replaced by the terminal v_Y) plus the copy with all
occurrences replaced.  The k-th iterate nu_k(X) is the k-fold substitution
sigma_0 ... sigma_k (v_X at level k), where each sigma maps v_Y at level i+1
to L_Y(G~) with the v-terminals pushed down to level i, and level 0 is the
finite set of terminal-only right-hand sides.  Its Parikh image reaches the
Parikh image of L(G) after at most |variables| levels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .grammar import Cfg, LinearGrammar, cfg_rename_terminals, trim
from .semilinear import newton_depth
from .symbols import Word, alphabet


def v_symbol(x: str) -> str:
    """The fresh terminal standing for variable x in the differential grammar."""
    return f"v_{x}"


def level_symbol(x: str, level: int) -> str:
    """v_x annotated with the composition level it belongs to."""
    return f"v_{x}@{level}"


@dataclass(frozen=True)
class PolynomialTransformation:
    """The production view of a grammar: per variable, its monomials
    (terminal part as a word, variable occurrences in order)."""

    grammar: Cfg

    def monomials(self, x: str) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
        out = []
        for rhs in self.grammar.alternatives(x):
            occs = tuple(s for s in rhs if s in self.grammar.variables)
            out.append((rhs, occs))
        return out


def differential_grammar(g: Cfg) -> LinearGrammar:
    """The linear grammar G~ over terminals(g) plus {v_X : X variable}."""
    for x in g.variables:
        if v_symbol(x) in g.terminals or v_symbol(x) in g.variables:
            raise InputError(f"symbol {v_symbol(x)!r} already in use")
    v_syms = [v_symbol(x) for x in sorted(g.variables)]
    sigma = alphabet(sorted(g.terminals.symbols) + v_syms)
    prods = set()
    for lhs, rhs in g.sorted_productions():
        occ_positions = [i for i, s in enumerate(rhs) if s in g.variables]
        all_replaced = tuple(v_symbol(s) if s in g.variables else s for s in rhs)
        prods.add((lhs, all_replaced))
        for keep in occ_positions:
            copy = tuple(s if (i == keep or s not in g.variables) else v_symbol(s)
                         for i, s in enumerate(rhs))
            prods.add((lhs, copy))
    return LinearGrammar(g.variables, sigma, frozenset(prods), g.start)


@dataclass(frozen=True)
class KFoldComposition:
    """A grammar, its differential, a composition depth, and the level-0
    finite languages (terminal-only right-hand sides per variable)."""

    base: Cfg
    differential: LinearGrammar
    depth: int
    base_level: tuple[tuple[str, tuple[Word, ...]], ...]

    def base_words(self, x: str) -> tuple[Word, ...]:
        return dict(self.base_level).get(x, ())


def build_kfold(g: Cfg, depth: int | None = None) -> KFoldComposition:
    """Depth defaults to |variables| (always sufficient for Parikh equality)."""
    g = trim(g)
    if depth is None:
        depth = len(g.variables)
    if depth < 0:
        raise InputError("depth must be nonnegative")
    base_level = tuple(
        (x, tuple(sorted(rhs for lhs, rhs in g.productions
                         if lhs == x and all(s in g.terminals for s in rhs))))
        for x in sorted(g.variables))
    return KFoldComposition(g, differential_grammar(g), depth, base_level)


def suggested_depth(g: Cfg) -> int:
    """Smallest verified depth d with Parikh(nu_d) = Parikh(L): the point at
    which the semilinear Newton iteration stabilizes."""
    g = trim(g)
    return min(newton_depth(g), len(g.variables))


def materialize_iterate(kf: KFoldComposition, x: str, k: int | None = None) -> Cfg:
    """A grammar over terminals(base) for nu_k(X).  Level-j copies rename
    variables to Y@j; a v_Y terminal at level j becomes the variable Y@(j-1),
    and level 0 expands to the terminal-only right-hand sides."""
    if x not in kf.base.variables:
        raise InputError(f"{x!r} is not a variable")
    k = kf.depth if k is None else k
    gt = kf.differential
    prods = set()
    variables = set()

    def var_at(y: str, j: int) -> str:
        return f"{y}@{j}"

    for j in range(1, k + 1):
        for lhs, rhs in gt.productions:
            new_rhs = []
            for s in rhs:
                if s in gt.variables:
                    new_rhs.append(var_at(s, j))
                elif s.startswith("v_") and s[2:] in kf.base.variables:
                    new_rhs.append(var_at(s[2:], j - 1))
                else:
                    new_rhs.append(s)
            variables.add(var_at(lhs, j))
            prods.add((var_at(lhs, j), tuple(new_rhs)))
    for y, words in kf.base_level:
        variables.add(var_at(y, 0))
        for w in words:
            prods.add((var_at(y, 0), tuple(w)))
    variables |= {var_at(y, j) for y in kf.base.variables for j in range(k + 1)}
    return trim(Cfg(frozenset(variables), kf.base.terminals, frozenset(prods),
                    var_at(x, k)))
