from fractions import Fraction

import pytest

from conftest import SOURCE, TARGET
from test_acceptance import IDIOM, TWO_ADJ, WORKED_ENTRIES, WORKED_TRIPLES
from ppmatch.bilingual import (BilingualTemplate, EntryTriple, PatternItem, TemplateDatabase,
                               format_entry, parse_bilingual)
from ppmatch.builder import (AmbiguousResult, Bilexicon, Blocked, CandidateEntrySet,
                             Failure, Options, Resources, UniqueResult, be_info_to_entries,
                             induce_corpus, is_novel, make_be_info, make_entries,
                             rank_candidates, template_weight)
from ppmatch.grammar import get_bag
from ppmatch.items import Bag, LexicalItem, Placeholder
from ppmatch.matching import match_bags
from ppmatch.terms import Description, Ground, Var, alpha_equivalent
from ppmatch.transfer import transfer, transfer_rules


@pytest.fixture(scope="module")
def worked(en, es):
    return parse_bilingual(WORKED_ENTRIES, en.macros, es.macros)[0]


def entries(text, en, es):
    return parse_bilingual(text, en.macros, es.macros)[0]


# -- make_be_info / be_info_to_entries -------------------------------------------------

def test_be_info_of_worked_example(en, es, closed, templates):
    src = get_bag(next(en.parse(SOURCE)))
    tgt = get_bag(next(es.parse(TARGET)))
    (d,) = transfer(src, transfer_rules(closed[:1], templates))
    (m,) = match_bags(tgt, d.bag)
    triples = make_be_info(src, m, d)
    assert [str(t) for t in triples] == WORKED_TRIPLES
    assert len(triples) == sum(st.rule.is_template for st in d.steps)


def test_entry_only_derivation_gives_no_triples(en, es, closed, templates, worked):
    src = get_bag(next(en.parse(SOURCE)))
    tgt = get_bag(next(es.parse(TARGET)))
    rules = transfer_rules(closed[:1] + tuple(worked), ())
    (d,) = transfer(src, rules)
    (m,) = match_bags(tgt, d.bag)
    assert make_be_info(src, m, d) == []


def test_two_slot_template_reads_target_words_by_position():
    a = Var("A")
    t = BilingualTemplate("tv+cn/2", (PatternItem(None, Description("tv", (a,))),),
                          (PatternItem(Placeholder("tv+cn/2", 2), Description("n", (a,))),
                           PatternItem(Placeholder("tv+cn/2", 1), Description("v", (a,)))))
    src = Bag((LexicalItem("1", "kick", Description("tv", (Ground(0),))),))
    tgt = Bag((LexicalItem("1", "estirar", Description("v", (Ground(0),))),
               LexicalItem("2", "pata", Description("n", (Ground(0),)))))
    (d,) = transfer(src, transfer_rules((), [t]))
    (m,) = match_bags(tgt, d.bag)
    assert make_be_info(src, m, d) == [EntryTriple(("kick",), ("estirar", "pata"), "tv+cn/2")]


def test_be_info_to_entries_reproduces_published_entries(templates, worked):
    triples = [EntryTriple(("fat",), ("gordo",), "adj/adj"),
               EntryTriple(("kick", "out"), ("echar",), "tv+adv/tv"),
               EntryTriple(("dog",), ("perro",), "cn/n")]
    made = be_info_to_entries(triples, templates)
    assert [alpha_equivalent(a, b) for a, b in zip(made, [worked[0], worked[2], worked[4]])] \
        == [True, True, True]


def test_unknown_template_id_is_an_error(templates):
    with pytest.raises(KeyError):
        be_info_to_entries([EntryTriple(("x",), ("y",), "nope")], templates)


# -- novelty ----------------------------------------------------------------------------

def test_novelty(en, es, worked):
    assert not is_novel(worked[0], worked)
    other = entries("entry fat :: @adj(B) <-> grueso :: @adj(B).", en, es)[0]
    assert is_novel(other, worked)
    assert is_novel(worked[0], [])


def test_bilexicon_ignores_alpha_variants(en, es, worked):
    bilex = Bilexicon(worked)
    again = entries("entry fat :: @adj(Q) <-> gordo :: @adj(Q).", en, es)[0]
    assert not bilex.add(again)
    assert bilex.translations(("fat",)) == {("gordo",)}


# -- ranking -----------------------------------------------------------------------------

def candidate(triples, db, tag):
    made = tuple(be_info_to_entries(triples, db))
    pairings = tuple((t.source_words, t.target_words) for t in triples)
    return CandidateEntrySet(tuple(triples), made, pairings, tag)


def test_weights_are_positive_and_scale_free(idiom_templates):
    for tid in ("cn/n", "tv/tv", "tv+cn/tv+n"):
        w = template_weight(idiom_templates, tid)
        assert w > 0
        assert template_weight(idiom_templates.scaled(7), tid) == w
    empty = TemplateDatabase.from_pairs((t, 0) for t in idiom_templates)
    assert template_weight(empty, "cn/n") == Fraction(1, 3)


def test_frequency_alone_prefers_common_templates(idiom_templates):
    idiom = candidate([EntryTriple(("kick", "bucket"), ("estirar", "pata"), "tv+cn/tv+n")],
                      idiom_templates, "idiom")
    comp = candidate([EntryTriple(("kick",), ("estirar",), "tv/tv"),
                      EntryTriple(("bucket",), ("pata",), "cn/n")], idiom_templates, "comp")
    ranked = rank_candidates([idiom, comp], idiom_templates, [])
    # weights: tv/tv 1/3, cn/n 5/12, idiom 1/4 -> 5/36 vs 1/4
    assert [c.provenance for c in ranked] == ["idiom", "comp"]
    assert ranked[0].score == Fraction(1, 4) and ranked[1].score == Fraction(5, 36)


def test_symmetric_candidates_are_blocked(templates):
    a = candidate([EntryTriple(("big",), ("negro",), "adj/adj"),
                   EntryTriple(("black",), ("grande",), "adj/adj")], templates, "a")
    b = candidate([EntryTriple(("big",), ("grande",), "adj/adj"),
                   EntryTriple(("black",), ("negro",), "adj/adj")], templates, "b")
    assert isinstance(rank_candidates([a, b], templates, []), Blocked)


def test_related_entries_break_symmetry(en, es, templates):
    a = candidate([EntryTriple(("big",), ("negro",), "adj/adj"),
                   EntryTriple(("black",), ("grande",), "adj/adj")], templates, "a")
    b = candidate([EntryTriple(("big",), ("grande",), "adj/adj"),
                   EntryTriple(("black",), ("negro",), "adj/adj")], templates, "b")
    known = entries("entry black :: @adj(A) <-> negro :: @adj(A).", en, es)
    ranked = rank_candidates([a, b], templates, known)
    assert [c.provenance for c in ranked] == ["b", "a"]


@pytest.mark.parametrize("seed,winner", [("balde", "idiom"), ("pata", "compositional")])
def test_kick_the_bucket_preferences(en, es, idiom_templates, closed, seed, winner):
    seeded = entries(f"entry bucket :: @count_noun(A) <-> {seed} :: @noun(A) \\\\ trans_noun.",
                     en, es)
    res = Resources(en, es, idiom_templates, closed + tuple(seeded))
    result = make_entries(*IDIOM, res, Options(mode="rank"))
    assert result.resolution == "ranked"
    is_idiom = any(t.template == "tv+cn/tv+n" for t in result.chosen.triples)
    assert ("idiom" if is_idiom else "compositional") == winner


def test_add_one_smoothing_would_not_be_scale_free():
    # The frequency estimate is meant to depend on relative counts only.
    # Adding one to raw counts breaks that: counts (1, 8) against (3, 3)
    # flip order when all counts are multiplied by ten.
    add_one = lambda counts: (counts[0] + 1) * (counts[1] + 1)
    assert add_one((1, 8)) > add_one((3, 3))
    assert add_one((10, 80)) < add_one((30, 30))


# -- make_entries ------------------------------------------------------------------------

def test_worked_pair_is_unique(resources, worked):
    result = make_entries(SOURCE, TARGET, resources)
    assert isinstance(result, UniqueResult)
    assert all(alpha_equivalent(a, b) for a, b in zip(result.entries, worked))
    assert len(result.entries) == 5


def test_rerun_with_own_output_adds_nothing(resources):
    first = make_entries(SOURCE, TARGET, resources)
    again = make_entries(SOURCE, TARGET, resources.with_bilex(resources.bilex + first.entries))
    assert isinstance(again, UniqueResult) and again.entries == ()


def test_induced_entries_replay_deterministically(resources):
    """Adding the output lets transfer + match succeed on entries alone."""
    first = make_entries(SOURCE, TARGET, resources)
    res = Resources(resources.source, resources.target, TemplateDatabase(),
                    resources.bilex + first.entries)
    replay = make_entries(SOURCE, TARGET, res)
    assert isinstance(replay, UniqueResult) and replay.triples == ()


def test_failures_name_their_stage(resources):
    assert make_entries(SOURCE, "hombre el.", resources).stage == "no-parse"
    assert make_entries(SOURCE, "hombre el.", resources).side == "target"
    unknown = make_entries("the zorblax kicked the dog.", TARGET, resources)
    assert unknown.stage == "no-parse" and unknown.witnesses == ("zorblax",)
    nomatch = make_entries(SOURCE, "el hombre gordo echó el perro.", resources)
    assert isinstance(nomatch, Failure) and nomatch.stage == "no-match"


def test_no_cover_failure(en, es, closed, templates):
    res = Resources(en, es, TemplateDatabase(), closed)
    result = make_entries(SOURCE, TARGET, res)
    assert result.stage == "no-cover" and "2" in result.witnesses


def test_two_adjectives_are_blocked_by_default(resources):
    result = make_entries(*TWO_ADJ, resources)
    assert isinstance(result, AmbiguousResult)
    assert len(result.candidates) == 2 and result.committed == ()


def test_interactive_chooser_commits_its_choice(resources):
    opts = Options(mode="interactive", chooser=lambda cands: 1)
    result = make_entries(*TWO_ADJ, resources, opts)
    assert result.resolution == "chosen" and result.committed == result.candidates[1].entries


def test_candidate_overflow_blocks(resources):
    result = make_entries(*TWO_ADJ, resources, Options(mode="rank", max_candidates=1))
    assert isinstance(result, AmbiguousResult) and result.overflow and result.chosen is None


def test_options_are_validated():
    with pytest.raises(ValueError):
        Options(mode="guess")
    with pytest.raises(ValueError):
        Options(max_parses=0)


# -- corpora ----------------------------------------------------------------------------

def test_feedback_makes_later_pairs_reuse_entries(resources):
    pairs = [(SOURCE, TARGET), ("the black man kicked out the fat dog.",
                                "el hombre negro echó el perro gordo.")]
    run = induce_corpus(pairs, resources)
    assert len(run.new_entries) == 5
    assert run.results[1].entries == ()
    assert run.summary == {"pairs": 2, "unique": 2, "ambiguous": 0, "resolved": 0,
                           "failed": 0, "failed_by_stage": {}}


def test_without_feedback_pairs_are_independent(resources):
    pairs = [(SOURCE, TARGET)] * 2 + [("the dog.", "el perro.")]
    serial = induce_corpus(pairs, resources, feedback=False)
    parallel = induce_corpus(pairs, resources, feedback=False, jobs=2)
    assert [format_entry(e) for e in serial.new_entries] == \
        [format_entry(e) for e in parallel.new_entries]
    assert len(serial.results[1].entries) == 5
    s = serial.summary
    assert s["pairs"] == s["unique"] + s["ambiguous"] + s["failed"] == 3
    assert s["failed_by_stage"] == {"no-parse(source)": 1}
