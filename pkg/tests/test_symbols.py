import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import eb_words
from parikhbound import (InputError, alphabet, determinize, eb, eb_concat,
                         eb_complement_dfa, eb_from_text, eb_to_nfa,
                         eb_to_text, nfa_to_regex, parikh_of_word, word)
from parikhbound.symbols import chars, regex_to_nfa

AB = alphabet(["a", "b"])


def all_words(sigma, max_length):
    out = [()]
    frontier = [()]
    for _ in range(max_length):
        frontier = [w + (a,) for w in frontier for a in sigma]
        out.extend(frontier)
    return out


def test_word_parsing():
    assert word("a b a") == ("a", "b", "a")
    assert word("") == ()
    assert word("eps") == ()
    assert chars("aba") == ("a", "b", "a")


def test_alphabet_rejects_duplicates():
    with pytest.raises(InputError):
        alphabet(["a", "a"])


def test_parikh_of_word():
    assert parikh_of_word(chars("abba"), AB) == (2, 2)
    assert parikh_of_word((), AB) == (0, 0)
    with pytest.raises(InputError):
        parikh_of_word(("c",), AB)


def test_eb_drops_empty_factors():
    assert eb([(), ("a",), ()]).words == (("a",),)
    assert eb([]).k == 0


def test_eb_concat_absorbs_adjacent_powers():
    # x* x* = x* and x* (xx)* = x*
    assert eb_concat(eb([("a",)]), eb([("a",)])).words == (("a",),)
    assert eb_concat(eb([("a",)]), eb([("a", "a")])).words == (("a",),)
    # non-powers are kept
    assert eb_concat(eb([("a",)]), eb([("a", "b")])).k == 2


def test_eb_nfa_matches_definition_oracle():
    b = eb([chars("ab"), chars("a"), chars("ba")])
    nfa = eb_to_nfa(b, AB)
    expected = eb_words(b, 5)
    for w in all_words(AB, 5):
        assert nfa.accepts(w) == (w in expected), w


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.sampled_from(["a", "b"]), min_size=1, max_size=3),
                max_size=3))
def test_eb_nfa_matches_definition_oracle_random(words):
    b = eb([tuple(w) for w in words])
    nfa = eb_to_nfa(b, AB)
    expected = eb_words(b, 4)
    for w in all_words(AB, 4):
        assert nfa.accepts(w) == (w in expected)


def test_complement_dfa():
    b = eb([chars("ab")])
    comp = eb_complement_dfa(b, AB)
    expected = eb_words(b, 4)
    for w in all_words(AB, 4):
        assert comp.accepts(w) == (w not in expected), w


def test_determinize_preserves_language():
    b = eb([chars("ab"), chars("b")])
    nfa = eb_to_nfa(b, AB)
    dfa = determinize(nfa, AB)
    for w in all_words(AB, 5):
        assert dfa.accepts(w) == nfa.accepts(w)


def test_nfa_regex_nfa_round_trip():
    b = eb([chars("ab"), chars("a")])
    nfa = eb_to_nfa(b, AB)
    r = nfa_to_regex(nfa)
    back = regex_to_nfa(r, AB)
    for w in all_words(AB, 5):
        assert back.accepts(w) == nfa.accepts(w)


def test_eb_text_round_trip():
    b = eb([chars("ab"), chars("ba")])
    assert eb_from_text(eb_to_text(b)) == b
    assert eb_from_text(eb_to_text(eb([]))) == eb([])
