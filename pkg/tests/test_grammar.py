from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SOURCE_ROWS, TARGET_ROWS, SOURCE, TARGET, bag_rows, relabel
from ppmatch.grammar import (EmptyInputError, Grammar, Lexicon, UnknownWordError, get_bag,
                             parse, parse_all, tokenize)
from ppmatch.syntax import ParseError
from ppmatch.terms import Ground


def rows_without_ids(rows):
    return relabel([r[1:] for r in rows])


# -- tokenize -----------------------------------------------------------------------

def test_tokenize_source_sentence():
    assert tokenize(SOURCE) == ["the", "fat", "man", "kicked", "out", "the", "black", "dog"]


def test_tokenize_lowercases_and_strips_final_punctuation():
    assert tokenize("X.") == ["x"]
    assert tokenize("  Really?!  ") == ["really"]
    assert len(tokenize(TARGET)) == 7


def test_tokenize_rejects_empty_input():
    with pytest.raises(EmptyInputError):
        tokenize(" ... ")


# -- parsing the fixtures ---------------------------------------------------------------

def test_source_bag_is_isomorphic_to_published_table(en):
    derivs = list(en.parse(SOURCE))
    assert len(derivs) == 1
    assert relabel(bag_rows(get_bag(derivs[0]))) == rows_without_ids(SOURCE_ROWS)


def test_target_bag_is_isomorphic_to_published_table(es):
    derivs = list(es.parse(TARGET))
    assert len(derivs) == 1
    assert relabel(bag_rows(get_bag(derivs[0]))) == rows_without_ids(TARGET_ROWS)


def test_ground_indices_are_numbered_by_first_occurrence(en):
    bag = get_bag(next(en.parse(SOURCE)))
    assert [it.desc.args for it in bag][:4] == [
        (Ground(0),), (Ground(0),), (Ground(0),), (Ground(1), Ground(0), Ground(2))]


def test_coindexation_ties_verb_to_its_noun_phrases(en):
    bag = get_bag(next(en.parse(SOURCE)))
    by_word = {it.word: it for it in bag}
    event, subj, obj = by_word["kick"].desc.args
    assert {it.desc.args[0] for it in list(bag)[:3]} == {subj}
    assert {it.desc.args[0] for it in list(bag)[5:]} == {obj}
    assert by_word["out"].desc.args == (event,)
    assert subj != obj != event


def test_stems_replace_surface_forms(en, es):
    assert [it.word for it in get_bag(next(en.parse(SOURCE)))][3] == "kick"
    assert get_bag(next(en.parse(SOURCE))).by_id("4").surface == "kicked"
    assert [it.word for it in get_bag(next(es.parse(TARGET)))][3] == "echar"


def test_ungrammatical_input_yields_nothing(en):
    assert list(en.parse("man the")) == []


def test_unknown_words_are_reported_up_front(en):
    with pytest.raises(UnknownWordError) as exc:
        en.parse("the fat zorblax kicked the wug")
    assert exc.value.words == ["zorblax", "wug"]


def test_single_token_derivation_gives_singleton_bag():
    g = Grammar.from_text("rule s(I) -> n(I).")
    lex = Lexicon.from_text("lex dog :: n(I).")
    (d,) = parse(["dog"], g, lex)
    bag = get_bag(d)
    assert len(bag) == 1 and bag[0].desc.args == (Ground(0),)


def test_ambiguous_grammar_enumerates_every_tree_in_rule_order():
    g = Grammar.from_text("""
        rule s(I) -> x(I) x(I) x(I).
        rule s(I) -> s(I) x(I).
        rule s(I) -> x(I).
    """)
    lex = Lexicon.from_text("lex a :: x(I).")
    derivs = parse_all(["a", "a", "a"], g, lex)
    # flat rule, then left-branching via s(2) x with s(2) = s(1) x
    assert len(derivs) == 2
    assert all(len(get_bag(d)) == 3 for d in derivs)


def test_cyclic_unary_rules_terminate():
    g = Grammar.from_text("rule s(I) -> t(I). rule t(I) -> s(I). rule t(I) -> x(I).")
    lex = Lexicon.from_text("lex a :: x(I).")
    assert len(parse_all(["a"], g, lex)) == 1


def test_parsing_is_deterministic(en):
    first = [get_bag(d) for d in en.parse("the big black dog kicked out the man")]
    second = [get_bag(d) for d in en.parse("the big black dog kicked out the man")]
    assert first == second
    assert [list(b) for b in first] == [list(b) for b in second]


# -- random sentences: conservation and groundness ---------------------------------------

def random_sentence(rng):
    def np():
        return [rng.choice(["the", "a"])] + \
            [rng.choice(["fat", "black", "big", "old"]) for _ in range(rng.randint(0, 2))] + \
            [rng.choice(["man", "dog", "cat", "bucket", "water"])]
    verb = rng.choice([["kicked"], ["kicked", "out"], ["saw"], ["picked", "up"], ["chased"]])
    return np() + verb + np()


@given(st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_bags_conserve_tokens_and_are_ground(en, rng):
    tokens = random_sentence(rng)
    derivs = parse_all(tokens, en.grammar, en.lexicon)
    assert derivs
    for d in derivs:
        bag = get_bag(d)
        assert len(bag) == len(tokens)
        assert Counter(it.surface for it in bag) == Counter(tokens)
        assert bag.is_ground()


# -- file formats ---------------------------------------------------------------------

def test_grammar_file_rejects_unbound_lhs_variable():
    with pytest.raises(ParseError) as exc:
        Grammar.from_text("rule s(I) -> x(J).")
    assert exc.value.line == 1


def test_grammar_rejects_inconsistent_terminal_arity():
    with pytest.raises(ParseError):
        Grammar.from_text("rule s(I) -> x(I).\nrule s(I) -> x(I,J) x(I).")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as exc:
        Lexicon.from_text("lex a :: x(I).\n\nlex b x(I).")
    assert exc.value.line == 3
    assert "3" in str(exc.value)


def test_lexicon_check_catches_unknown_categories(en):
    lex = Lexicon.from_text("lex foo :: widget(I).")
    with pytest.raises(ValueError):
        lex.check(en.grammar)


def test_lexicon_lookup_is_case_insensitive(en):
    assert en.lexicon.lookup("The") == en.lexicon.lookup("the") != []
