from helpers import (ANBN, CORE_CORPUS, DYCK1, G_EX, PALIN, eb_words,
                     per_length_parikh)
from parikhbound import (LinearGrammar, alphabet, bounded_for_linear,
                         bounded_for_powers, bounded_for_regex,
                         bounded_subset, cyk_membership, decompose_linear,
                         enumerate_words, eb, eb_to_nfa,
                         parikh_equivalent_bounded, trim,
                         verify_parikh_property)
from parikhbound.boundedgen import bounded_for_substitution
from parikhbound.grammar import cfg, concat_grammars, finite_cfg
from parikhbound.symbols import RStar, RSym, parikh_of_word, rconcat, runion

AB = alphabet(["a", "b"])


def test_verify_parikh_property_detects_failure():
    # b*a* misses every word of {a^n b^n}; (ab)* covers only n = 1
    assert not verify_parikh_property(trim(ANBN), eb([("b",), ("a",)]), 4)
    assert not verify_parikh_property(trim(ANBN), eb([("a", "b")]), 6)
    # a*b* covers the whole language
    assert verify_parikh_property(trim(ANBN), eb([("a",), ("b",)]), 6)


def test_bounded_for_regex():
    # (a | b)* ab
    r = rconcat(RStar(runion(RSym("a"), RSym("b"))),
                rconcat(RSym("a"), RSym("b")))
    b = bounded_for_regex(r, AB)
    # every Parikh vector of the regex language has a mate in the bounded part
    lang_vecs = set()
    words = [()]
    for _ in range(5):
        words = [w + (s,) for w in words for s in ("a", "b")]
        lang_vecs |= {parikh_of_word(w, AB) for w in words
                      if len(w) >= 2 and w[-2:] == ("a", "b")}
    in_vecs = {parikh_of_word(w, AB) for w in eb_words(b, 5)}
    assert lang_vecs <= in_vecs


def test_decompose_linear_reconstructs_words():
    lg = LinearGrammar(PALIN.variables, PALIN.terminals, PALIN.productions,
                       PALIN.start)
    dec = decompose_linear(lg)
    lang = set(enumerate_words(trim(PALIN), 6))
    # h(p1..pm ~pm..~p1) for every accepted NFA word p1..pm is in the language
    from itertools import product as iproduct
    for length in range(0, 4):
        for w in iproduct(dec.letters.symbols, repeat=length):
            if dec.nfa.accepts(w):
                full = dec.image(w) + dec.image(dec.tilde_reverse(w))
                if len(full) <= 6:
                    assert full in lang, (w, full)


def test_bounded_for_linear_on_palindromes():
    lg = LinearGrammar(PALIN.variables, PALIN.terminals, PALIN.productions,
                       PALIN.start)
    b = bounded_for_linear(lg)
    assert verify_parikh_property(trim(PALIN), b, 8)


def test_parikh_equivalent_bounded_on_corpus():
    for g in CORE_CORPUS:
        b = parikh_equivalent_bounded(g)
        assert verify_parikh_property(trim(g), b, 8), g.start


def test_bounded_for_powers():
    g = trim(ANBN)
    b = parikh_equivalent_bounded(g)
    bp = bounded_for_powers(g, b)
    nfa = eb_to_nfa(bp, AB)
    for t in range(4):
        lt = (finite_cfg([()], AB) if t == 0
              else concat_grammars([g] * t, AB))
        per_all = per_length_parikh(lt, 8, AB)
        per_in: dict[int, set] = {}
        for w in enumerate_words(trim(lt), 8):
            if nfa.accepts(w):
                per_in.setdefault(len(w), set()).add(parikh_of_word(w, AB))
        for n, vecs in per_all.items():
            assert vecs == per_in.get(n, set()), (t, n)


def test_bounded_for_substitution():
    # substitute x -> {a^n b^n} into x* and check Parikh coverage
    b = eb([("x",)])
    out = bounded_for_substitution(b, {"x": trim(ANBN)},
                                   {"x": eb([("a", "b")])}, AB)
    # the substituted language is all concatenations of a^n b^n blocks
    blocks = set(enumerate_words(trim(ANBN), 6)) | {()}
    lang = {u + v for u in blocks for v in blocks if len(u + v) <= 6}
    lang_vecs_by_len: dict[int, set] = {}
    for w in lang:
        lang_vecs_by_len.setdefault(len(w), set()).add(parikh_of_word(w, AB))
    in_words = {w for w in eb_words(out, 6)
                if cyk_in_substituted(w, blocks)}
    in_vecs_by_len: dict[int, set] = {}
    for w in in_words:
        in_vecs_by_len.setdefault(len(w), set()).add(parikh_of_word(w, AB))
    for n, vecs in lang_vecs_by_len.items():
        assert vecs <= in_vecs_by_len.get(n, set()), n


def cyk_in_substituted(w, blocks):
    # dynamic programming: is w a concatenation of blocks (incl. empty)?
    ok = [False] * (len(w) + 1)
    ok[0] = True
    for i in range(1, len(w) + 1):
        ok[i] = any(ok[j] and w[j:i] in blocks for j in range(i))
    return ok[len(w)]


def test_bounded_subset_is_subset_and_parikh_equal():
    for g in (G_EX, ANBN, DYCK1):
        sub = bounded_subset(g)
        for w in enumerate_words(trim(sub), 8):
            assert cyk_membership(trim(g), w)
        assert per_length_parikh(sub, 8, trim(g).terminals) \
            == per_length_parikh(g, 8, trim(g).terminals)


def test_empty_grammar_gives_empty_bounded():
    g = cfg({"S"}, ["a"], [("S", ("S", "a"))], "S")
    assert parikh_equivalent_bounded(g) == eb([])
