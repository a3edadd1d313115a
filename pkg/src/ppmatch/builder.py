"""Building bilingual entries from matched sentence pairs.

``make_entries`` runs the whole parse / transfer / parse / match chain for
one aligned pair, backtracking over every source parse, transfer
derivation, target parse and matching, and collects the distinct sets of
new entries those analyses support.  One set is a unique result; several
are an ambiguity, which is blocked unless ranking or a human chooser is
enabled.
"""
from __future__ import annotations

import itertools
import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .bilingual import (BilingualEntry, EntryTriple, TemplateDatabase,
                        canonical_key, format_entry, instantiate)
from .grammar import EmptyInputError, Language, UnknownWordError, get_bag, parse, tokenize
from .items import Bag, Placeholder
from .matching import Matching, match_bags
from .transfer import NoCoverError, TransferDerivation, transfer, transfer_rules

log = logging.getLogger(__name__)

BOOST = 2
MODES = ("block", "rank", "interactive")


# -- be/3 information ----------------------------------------------------------

def make_be_info(src: Bag, matched: Matching,
                 tderiv: TransferDerivation) -> list[EntryTriple]:
    """One triple per template-based cell, in derivation order."""
    triples = []
    for step in tderiv.steps:
        if not step.rule.is_template:
            continue
        triples.append(EntryTriple(*_cell_words(src, matched, step), step.rule.rule.id))
    return triples


def _cell_words(src, matched, step):
    unified = {it.id: it for it in matched.unified_bag}
    pattern = step.rule.lhs
    sw = tuple(src.by_id(sid).word for p, sid in zip(pattern, step.consumed)
               if not step.rule.is_template or p.word is None)
    slots = sorted(((it.word.position, it.id) for it in step.produced
                    if isinstance(it.word, Placeholder)))
    if step.rule.is_template:
        tw = tuple(unified[pid].word for _, pid in slots)
    else:
        tw = tuple(unified[it.id].word for it in step.produced)
    return sw, tw


def cell_pairings(src: Bag, matched: Matching, tderiv: TransferDerivation):
    """(source words, target words) for every cell, entry-based ones too."""
    return [_cell_words(src, matched, st) for st in tderiv.steps]


def be_info_to_entries(triples: Iterable[EntryTriple],
                       db: TemplateDatabase) -> list[BilingualEntry]:
    out = []
    for t in triples:
        if t.template not in db:
            raise KeyError(f"unknown template id {t.template!r}")
        out.append(instantiate(db[t.template], t))
    return out


# -- the existing bilingual lexicon ---------------------------------------------

class Bilexicon:
    """Entries plus the lookups novelty and ranking need."""

    def __init__(self, entries: Iterable[BilingualEntry] = ()):
        self.entries: list[BilingualEntry] = []
        self._keys = set()
        self._translations = defaultdict(set)
        for e in entries:
            self.add(e)

    def add(self, e: BilingualEntry) -> bool:
        key = canonical_key(e)
        if key in self._keys:
            return False
        self._keys.add(key)
        self.entries.append(e)
        self._translations[e.source_words].add(e.target_words)
        return True

    def __contains__(self, e: BilingualEntry) -> bool:
        return canonical_key(e) in self._keys

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def translations(self, source_words) -> set:
        return self._translations.get(tuple(source_words), set())


def is_novel(e: BilingualEntry, bilex) -> bool:
    """True unless an existing entry equals ``e`` on both sides."""
    if not isinstance(bilex, Bilexicon):
        bilex = Bilexicon(bilex)
    return e not in bilex


# -- candidates and ranking -------------------------------------------------------

@dataclass(frozen=True)
class CandidateEntrySet:
    triples: tuple[EntryTriple, ...]
    entries: tuple[BilingualEntry, ...]     # the novel ones, to be committed
    pairings: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    provenance: str = ""
    score: Fraction | None = None

    def serialize(self, src_macros=None, tgt_macros=None) -> str:
        return "".join(format_entry(e, src_macros, tgt_macros) + "\n" for e in self.entries)


@dataclass(frozen=True)
class Blocked:
    """Ranking could not separate the top candidates."""
    candidates: tuple[CandidateEntrySet, ...]


def template_weight(db: TemplateDatabase, tid: str) -> Fraction:
    """Smoothed relative frequency of a template.

    The pseudo-count added to every template is the mean count, so
    templates with no attested entries keep a non-zero weight and scaling
    every count by a constant leaves all weights unchanged.
    """
    n_templates = max(len(db), 1)
    total = db.total
    if total == 0:
        return Fraction(1, n_templates)
    return Fraction(n_templates * db.count(tid) + total, 2 * total * n_templates)


def rank_candidates(cands: Sequence[CandidateEntrySet], db: TemplateDatabase,
                    bilex, beta: int = BOOST):
    """Score competing candidate sets; best first, or Blocked on a tie.

    Base score is the product of template weights over a candidate's
    template-based triples.  Existing entries then act as evidence: a
    pairing the lexicon already contains boosts the candidates that make
    it, and a lexicon entry translating the same source words differently
    boosts the candidates that do not make it.  Each piece of evidence
    multiplies by ``beta``.
    """
    if not isinstance(bilex, Bilexicon):
        bilex = Bilexicon(bilex)
    boosts = [0] * len(cands)
    pairings = dict.fromkeys(p for c in cands for p in c.pairings)
    for sw, tw in pairings:
        for known in sorted(bilex.translations(sw)):
            for i, c in enumerate(cands):
                makes_it = (sw, tw) in c.pairings
                if makes_it == (known == tw):
                    boosts[i] += 1
    scored = []
    for c, b in zip(cands, boosts):
        score = Fraction(1)
        for t in c.triples:
            score *= template_weight(db, t.template)
        scored.append(replace(c, score=score * beta ** b))
    scored.sort(key=lambda c: (-c.score, c.serialize()))
    if len(scored) > 1 and scored[0].score == scored[1].score:
        return Blocked(tuple(scored))
    return scored


# -- results ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UniqueResult:
    candidate: CandidateEntrySet

    @property
    def entries(self):
        return self.candidate.entries

    @property
    def triples(self):
        return self.candidate.triples

    committed = entries


@dataclass(frozen=True)
class AmbiguousResult:
    candidates: tuple[CandidateEntrySet, ...]
    chosen: CandidateEntrySet | None = None
    resolution: str = "blocked"      # blocked | ranked | chosen
    overflow: bool = False

    @property
    def committed(self):
        return self.chosen.entries if self.chosen else ()


@dataclass(frozen=True)
class Failure:
    stage: str                # no-parse | no-cover | no-match
    detail: str
    side: str | None = None
    witnesses: tuple = ()

    committed = ()

    def __str__(self):
        where = f"{self.stage}({self.side})" if self.side else self.stage
        return f"{where}: {self.detail}"


# -- the pipeline ------------------------------------------------------------------------

@dataclass(frozen=True)
class Resources:
    source: Language
    target: Language
    templates: TemplateDatabase
    bilex: tuple[BilingualEntry, ...] = ()
    # template frequencies for ranking; defaults to ``templates``
    frequencies: TemplateDatabase | None = None

    def with_bilex(self, entries) -> Resources:
        return replace(self, bilex=tuple(entries))


@dataclass(frozen=True)
class Options:
    mode: str = "block"
    max_parses: int = 16
    max_candidates: int = 64
    chooser: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_parses < 1 or self.max_candidates < 1:
            raise ValueError("limits must be at least 1")


def parse_sentence(lang: Language, sentence: str, limit: int):
    tokens = tokenize(sentence)
    derivs = list(itertools.islice(parse(tokens, lang.grammar, lang.lexicon), limit + 1))
    return derivs[:limit], len(derivs) > limit


def make_entries(source: str, target: str, res: Resources, opts: Options = Options()):
    """Induce entries from one aligned pair.

    Returns UniqueResult, AmbiguousResult or Failure.
    """
    parsed = {}
    overflow = False
    for side, lang, sentence in (("source", res.source, source),
                                 ("target", res.target, target)):
        try:
            derivs, over = parse_sentence(lang, sentence, opts.max_parses)
        except UnknownWordError as exc:
            return Failure("no-parse", str(exc), side, tuple(exc.words))
        except EmptyInputError as exc:
            return Failure("no-parse", str(exc), side)
        if not derivs:
            return Failure("no-parse", f"no parse for {sentence!r}", side)
        parsed[side] = derivs
        overflow |= over

    bilex = Bilexicon(res.bilex)
    rules = transfer_rules(res.bilex, res.templates)
    tgt_bags = [get_bag(d) for d in parsed["target"]]
    cands: dict[tuple, CandidateEntrySet] = {}
    uncovered = None
    transferred = False

    for i, d1 in enumerate(parsed["source"], 1):
        bag1 = get_bag(d1)
        try:
            tderivs = transfer(bag1, rules)
        except NoCoverError as exc:
            uncovered = uncovered or exc
            continue
        for t, d3 in enumerate(tderivs, 1):
            transferred = True
            for j, bag2 in enumerate(tgt_bags, 1):
                for k, m in enumerate(match_bags(bag2, d3.bag), 1):
                    triples = make_be_info(bag1, m, d3)
                    novel = {}
                    for e in be_info_to_entries(triples, res.templates):
                        if is_novel(e, bilex):
                            novel.setdefault(format_entry(e, with_template=False), e)
                    key = tuple(sorted(novel))
                    if key in cands:
                        continue
                    cands[key] = CandidateEntrySet(
                        tuple(triples), tuple(novel.values()),
                        tuple(cell_pairings(bag1, m, d3)),
                        f"source-parse={i} transfer={t} target-parse={j} matching={k}")
                    if len(cands) > opts.max_candidates:
                        overflow = True
                        break
                if len(cands) > opts.max_candidates:
                    break
            if len(cands) > opts.max_candidates:
                break

    if not cands:
        if not transferred and uncovered is not None:
            return Failure("no-cover", str(uncovered), "source",
                           tuple(it.id for it in uncovered.items))
        return Failure("no-match", "no transfer output matches the target parse")
    found = tuple(cands.values())[:opts.max_candidates]
    if overflow:
        return AmbiguousResult(found, overflow=True)
    if len(found) == 1:
        return UniqueResult(found[0])
    return resolve(found, res, opts)


def resolve(cands, res: Resources, opts: Options) -> AmbiguousResult:
    if opts.mode == "rank":
        ranked = rank_candidates(cands, res.frequencies or res.templates, res.bilex)
        if isinstance(ranked, Blocked):
            return AmbiguousResult(ranked.candidates)
        return AmbiguousResult(tuple(ranked), ranked[0], "ranked")
    if opts.mode == "interactive" and opts.chooser is not None:
        choice = opts.chooser(cands)
        if choice is not None:
            return AmbiguousResult(cands, cands[choice], "chosen")
    return AmbiguousResult(cands)


# -- corpora ------------------------------------------------------------------------------

@dataclass
class CorpusRun:
    results: list = field(default_factory=list)
    new_entries: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {"pairs": len(self.results), "unique": 0, "ambiguous": 0,
                  "resolved": 0, "failed": 0}
        by_stage = defaultdict(int)
        for r in self.results:
            if isinstance(r, UniqueResult):
                counts["unique"] += 1
            elif isinstance(r, AmbiguousResult):
                counts["ambiguous"] += 1
                counts["resolved"] += r.chosen is not None
            else:
                counts["failed"] += 1
                by_stage[f"{r.stage}" + (f"({r.side})" if r.side else "")] += 1
        counts["failed_by_stage"] = dict(sorted(by_stage.items()))
        return counts


def _one(args):
    source, target, res, opts = args
    return make_entries(source, target, res, opts)


def induce_corpus(pairs: Sequence[tuple[str, str]], res: Resources,
                  opts: Options = Options(), feedback: bool = True,
                  jobs: int = 1) -> CorpusRun:
    """Run make_entries over aligned pairs, committing entries in corpus order.

    With ``feedback`` each pair sees the entries committed by earlier pairs.
    Without it every pair runs against the initial lexicon (in parallel when
    ``jobs`` > 1) and the committed entries are merged afterwards.
    """
    run = CorpusRun()
    bilex = Bilexicon(res.bilex)
    if feedback:
        for source, target in pairs:
            result = make_entries(source, target, res.with_bilex(bilex.entries), opts)
            run.results.append(result)
            for e in result.committed:
                if bilex.add(e):
                    run.new_entries.append(e)
        return run
    work = [(s, t, res, opts) for s, t in pairs]
    if jobs > 1 and opts.chooser is None:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            run.results = list(pool.map(_one, work))
    else:
        run.results = [_one(w) for w in work]
    for result in run.results:
        for e in result.committed:
            if bilex.add(e):
                run.new_entries.append(e)
    return run
