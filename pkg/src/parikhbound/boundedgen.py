"""Construction of Parikh-equivalent bounded subsets.

Everything here maintains one contract: the returned elementary bounded
language B satisfies Parikh(L intersect B) = Parikh(L) for the relevant L.
The route for a general grammar: build the differential (linear) grammar,
find bounded languages for its variable languages through the regular-
language and linear-language cases, then push them down the k-fold
composition levels via the power and substitution constructions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SoundnessError
from .grammar import (Cfg, LinearGrammar, cfg_rename_terminals, concat_grammars,
                      cyk_membership, enumerate_words, finite_cfg, is_empty_language,
                      product_with_dfa, regex_to_cfg, simplify, trim, unit_cfg)
from .newton import (KFoldComposition, build_kfold, level_symbol, suggested_depth,
                     v_symbol)
from .semilinear import (WitnessedSemilinear, parikh_image, wit_minkowski,
                         wit_singleton)
from .symbols import (Alphabet, ElementaryBounded, Nfa, Regex, REmpty, REpsilon,
                      RSym, RConcat, RUnion, RStar, Word, alphabet, determinize,
                      eb, eb_concat, eb_to_nfa, nfa_to_regex, parikh_of_word)

# When set to a positive length, constructions re-verify their preconditions
# by enumeration up to that length before relying on them.
VERIFY_LENGTH: int | None = None


def verify_parikh_property(g: Cfg, b: ElementaryBounded, max_length: int) -> bool:
    """Enumeration check: every word of L(g) up to max_length has a commutative
    mate inside L(g) intersect B.  Mates preserve length, so a per-length
    comparison of Parikh sets is exact."""
    sigma = g.terminals
    nfa = eb_to_nfa(b, sigma)
    words = enumerate_words(g, max_length)
    by_len_all: dict[int, set] = {}
    by_len_in: dict[int, set] = {}
    for w in words:
        vec = parikh_of_word(w, sigma)
        by_len_all.setdefault(len(w), set()).add(vec)
        if nfa.accepts(w):
            by_len_in.setdefault(len(w), set()).add(vec)
    return all(by_len_all[n] <= by_len_in.get(n, set()) for n in by_len_all)


def bounded_for_powers(g: Cfg, b: ElementaryBounded,
                       image: WitnessedSemilinear | None = None
                       ) -> ElementaryBounded:
    """Given Parikh(L intersect B) = Parikh(L), return B' covering every power:
    Parikh(L^t intersect B') = Parikh(L^t) for all t >= 0.

    B' = u1* ... ul* B^l, where the linear components of Parikh(L) number l
    and each ui is a witness word for the i-th component constant.  A caller
    holding the witnessed Parikh image of L already can pass it in.
    """
    g = trim(g)
    if VERIFY_LENGTH:
        if not verify_parikh_property(g, b, VERIFY_LENGTH):
            raise SoundnessError("powers precondition failed the enumeration check")
    if image is None:
        image = parikh_image(g)
    witnesses = [w for _, w in image.components]
    ell = len(image.components)
    return eb_concat(eb(witnesses), *([b] * ell))


# ---------------------------------------------------------------------------
# Regular languages


def bounded_for_regex(r: Regex, sigma: Alphabet) -> ElementaryBounded:
    """Structural recursion; union and concatenation both take B1 B2, and a
    star defers to the power construction for the language under the star."""
    if isinstance(r, (REmpty, REpsilon)):
        return eb([])
    if isinstance(r, RSym):
        return eb([(r.symbol,)])
    if isinstance(r, (RConcat, RUnion)):
        left = bounded_for_regex(r.left, sigma)
        right = bounded_for_regex(r.right, sigma)
        return eb_concat(left, right)
    if isinstance(r, RStar):
        inner = bounded_for_regex(r.inner, sigma)
        return bounded_for_powers(regex_to_cfg(r.inner, sigma), inner)
    raise SoundnessError(f"not a regex: {r!r}")


# ---------------------------------------------------------------------------
# Linear languages


@dataclass(frozen=True)
class LinearDecomposition:
    """L(lg) = h(R ~R-reversed) shape: an NFA over production letters together
    with the homomorphism h mapping p to the part left of the variable and ~p
    to the part right of it."""

    nfa: Nfa
    letters: Alphabet
    h: tuple[tuple[str, Word], ...]
    tilde: tuple[tuple[str, str], ...]

    def image(self, w: Word) -> Word:
        mapping = dict(self.h)
        out: Word = ()
        for a in w:
            out += tuple(mapping[a])
        return out

    def tilde_reverse(self, w: Word) -> Word:
        t = dict(self.tilde)
        return tuple(t[a] for a in reversed(w))


def decompose_linear(lg: LinearGrammar) -> LinearDecomposition:
    lg = trim(lg)
    final = "#qf"
    letters = []
    h: list[tuple[str, Word]] = []
    tilde = []
    transitions = set()
    for i, (lhs, rhs) in enumerate(lg.sorted_productions()):
        p, tp = f"p{i}", f"~p{i}"
        letters.append(p)
        tilde.append((p, tp))
        var_positions = [j for j, s in enumerate(rhs) if s in lg.variables]
        if var_positions:
            j = var_positions[0]
            h.append((p, tuple(rhs[:j])))
            h.append((tp, tuple(rhs[j + 1:])))
            transitions.add((lhs, p, rhs[j]))
        else:
            h.append((p, tuple(rhs)))
            h.append((tp, ()))
            transitions.add((lhs, p, final))
    nfa = Nfa(frozenset(lg.variables | {final}), alphabet(letters),
              frozenset(transitions), frozenset({lg.start}), frozenset({final}))
    return LinearDecomposition(nfa, alphabet(letters), tuple(h), tuple(tilde))


def bounded_for_linear(lg: LinearGrammar) -> ElementaryBounded:
    """w1*..wm* ~wm*..~w1* pattern: images of a bounded language for the
    production-letter NFA, followed by the tilde-reversed images backwards."""
    lg = trim(lg)
    if not lg.productions:
        return eb([])
    dec = decompose_linear(lg)
    regex = nfa_to_regex(dec.nfa)
    base = bounded_for_regex(regex, dec.letters)
    forward = [dec.image(w) for w in base.words]
    backward = [dec.image(dec.tilde_reverse(w)) for w in reversed(base.words)]
    return eb(forward + backward)


# ---------------------------------------------------------------------------
# Substitution


def bounded_for_substitution(b: ElementaryBounded,
                             sigma_map: dict[str, Cfg],
                             tau_map: dict[str, ElementaryBounded],
                             out_alphabet: Alphabet,
                             memo: dict | None = None) -> ElementaryBounded:
    """Push a bounded language through a substitution.

    For each word wi of b, the language Li substitutes every letter of wi
    (unmapped letters stand for themselves) and Bi handles all powers of Li;
    the concatenation B1 ... Bk covers the substituted language.  Two sound
    shortcuts: a word whose letters are all unmapped substitutes to itself,
    and a word containing an empty-language letter contributes nothing.
    """
    memo = {} if memo is None else memo
    parts: list[ElementaryBounded] = []
    for wi in b.words:
        if wi in memo:
            parts.append(memo[wi])
            continue
        if all(a not in sigma_map for a in wi):
            result = eb([wi])
        else:
            grammars = [sigma_map[a] if a in sigma_map else unit_cfg(a, out_alphabet)
                        for a in wi]
            if any(is_empty_language(ga) for ga in grammars):
                result = eb([])
            else:
                li = concat_grammars(grammars, out_alphabet)
                ti = eb_concat(*[tau_map.get(a, eb([(a,)])) for a in wi])
                # the Parikh image of the concatenation is the Minkowski sum
                # of the per-letter images, which are shared across words
                image = None
                for a, ga in zip(wi, grammars):
                    part = (parikh_image(ga) if a in sigma_map
                            else wit_singleton(
                                parikh_of_word((a,), out_alphabet), (a,)))
                    image = part if image is None else wit_minkowski(image, part)
                result = bounded_for_powers(li, ti, image=image)
        memo[wi] = result
        parts.append(result)
    return eb_concat(*parts)


# ---------------------------------------------------------------------------
# The bounded-sequence algorithm over composition levels


def algorithm1_bounded_sequence(kf: KFoldComposition,
                                btilde: dict[str, ElementaryBounded],
                                trace: list | None = None
                                ) -> dict[str, ElementaryBounded]:
    """Turn bounded languages for the differential grammar's variable
    languages into bounded languages for each nu_depth(X)."""
    gt = kf.differential
    base_sigma = kf.base.terminals
    variables = sorted(kf.base.variables)

    def level_rename(i: int) -> dict[str, str]:
        return {v_symbol(y): level_symbol(y, i) for y in variables}

    def rename_eb(b: ElementaryBounded, i: int) -> ElementaryBounded:
        ren = level_rename(i)
        return eb([tuple(ren.get(a, a) for a in w) for w in b.words])

    def sigma_alphabet(i: int) -> Alphabet:
        return alphabet(sorted(base_sigma.symbols)
                        + [level_symbol(y, i) for y in variables])

    if kf.depth == 0:
        return {x: eb(kf.base_words(x)) for x in variables}

    current = {x: rename_eb(btilde[x], kf.depth - 1) for x in variables}
    if trace is not None:
        trace.append((kf.depth - 1, dict(current)))
    for i in range(kf.depth - 2, -1, -1):
        out_sigma = sigma_alphabet(i)
        sig = {}
        tau = {}
        for y in variables:
            rooted = LinearGrammar(gt.variables, gt.terminals, gt.productions, y)
            rooted = cfg_rename_terminals(rooted, level_rename(i))
            sig[level_symbol(y, i + 1)] = Cfg(rooted.variables, out_sigma,
                                              rooted.productions, y)
            tau[level_symbol(y, i + 1)] = rename_eb(btilde[y], i)
        memo: dict = {}
        current = {x: bounded_for_substitution(current[x], sig, tau, out_sigma, memo)
                   for x in variables}
        if trace is not None:
            trace.append((i, dict(current)))
    sig0 = {level_symbol(y, 0): finite_cfg(list(kf.base_words(y)), base_sigma)
            for y in variables}
    tau0 = {level_symbol(y, 0): eb(kf.base_words(y)) for y in variables}
    memo = {}
    result = {x: bounded_for_substitution(current[x], sig0, tau0, base_sigma, memo)
              for x in variables}
    if trace is not None:
        trace.append(("final", dict(result)))
    return result


# ---------------------------------------------------------------------------
# End-to-end entry points


def parikh_equivalent_bounded(g: Cfg, depth: int | None = None,
                              trace: list | None = None) -> ElementaryBounded:
    """An elementary bounded B over terminals(g) with
    Parikh(L(g) intersect B) = Parikh(L(g))."""
    g = trim(g)
    if not g.productions:
        return eb([])
    g = simplify(g)
    d = suggested_depth(g) if depth is None else depth
    kf = build_kfold(g, d)
    gt = kf.differential
    btilde = {}
    for x in sorted(g.variables):
        rooted = LinearGrammar(gt.variables, gt.terminals, gt.productions, x)
        btilde[x] = bounded_for_linear(rooted)
    result = algorithm1_bounded_sequence(kf, btilde, trace)[g.start]
    if VERIFY_LENGTH:
        if not verify_parikh_property(g, result, VERIFY_LENGTH):
            raise SoundnessError("bounded construction failed the enumeration check")
    return result


def bounded_subset(g: Cfg, b: ElementaryBounded | None = None) -> Cfg:
    """A grammar for L' = L(g) intersect B; L' is bounded, contained in L(g),
    and Parikh-equivalent to it."""
    g = trim(g)
    if b is None:
        b = parikh_equivalent_bounded(g)
    dfa = determinize(eb_to_nfa(b, g.terminals), g.terminals)
    return product_with_dfa(g, dfa)
