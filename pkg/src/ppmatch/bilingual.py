"""Bilingual entries, templates, template extraction and coverage.

File format (one ``.``-terminated statement each, ``#`` comments)::

    entry fat :: adj(A) <-> gordo :: adj(A).
    entry tv+adv/tv : kick :: trans_verb(A,B,C) & out :: advparticle(A)
        <-> echar :: verb_acc(A,B,C) \\\\ trans_verb.
    template cn/n count=2 : _ :: count_noun(A) <-> _ :: noun(A) \\\\ trans_noun.

In a template, ``_`` on the left is an anonymous word slot and ``_`` on the
right is the next positional placeholder ``word(id,n)``; the explicit
quoted form ``'word(cn/n,1)'`` is accepted too.  An entry may name the
template it instantiates (``entry ID : ...``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .items import Placeholder
from .syntax import (Macros, ParseError, Stream, format_description,
                     format_word, statements)
from .terms import Description, Fresh, rename_canonical, rename_fresh


@dataclass(frozen=True)
class PatternItem:
    word: str | Placeholder | None
    desc: Description


BagPattern = tuple  # tuple[PatternItem, ...]


def _pattern(items) -> tuple[PatternItem, ...]:
    return tuple(it if isinstance(it, PatternItem) else PatternItem(*it) for it in items)


@dataclass(frozen=True)
class BilingualEntry:
    lhs: tuple[PatternItem, ...]
    rhs: tuple[PatternItem, ...]
    macro: str | None = None
    # provenance only: not part of the entry's identity
    template: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lhs", _pattern(self.lhs))
        object.__setattr__(self, "rhs", _pattern(self.rhs))
        if not self.lhs or not self.rhs:
            raise ValueError("an entry needs items on both sides")
        for it in self.lhs + self.rhs:
            if not isinstance(it.word, str):
                raise ValueError(f"entry words must be concrete, got {it.word!r}")

    @property
    def source_words(self) -> tuple[str, ...]:
        return tuple(it.word for it in self.lhs)

    @property
    def target_words(self) -> tuple[str, ...]:
        return tuple(it.word for it in self.rhs)


@dataclass(frozen=True)
class BilingualTemplate:
    id: str
    lhs: tuple[PatternItem, ...]
    rhs: tuple[PatternItem, ...]
    macro: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "lhs", _pattern(self.lhs))
        object.__setattr__(self, "rhs", _pattern(self.rhs))
        if not self.lhs or not self.rhs:
            raise ValueError(f"template {self.id}: both sides need items")
        if any(isinstance(it.word, Placeholder) for it in self.lhs):
            raise ValueError(f"template {self.id}: placeholders belong on the right")
        positions = sorted(it.word.position for it in self.rhs
                           if isinstance(it.word, Placeholder))
        if positions != list(range(1, len(positions) + 1)):
            raise ValueError(f"template {self.id}: placeholder positions {positions} "
                             "must be 1..n, each once")

    @property
    def source_slots(self) -> int:
        return sum(it.word is None for it in self.lhs)

    @property
    def target_slots(self) -> int:
        return sum(isinstance(it.word, Placeholder) for it in self.rhs)


@dataclass(frozen=True)
class EntryTriple:
    source_words: tuple[str, ...]
    target_words: tuple[str, ...]
    template: str

    def __post_init__(self):
        object.__setattr__(self, "source_words", tuple(self.source_words))
        object.__setattr__(self, "target_words", tuple(self.target_words))

    def __str__(self):
        return (f"be([{','.join(self.source_words)}],"
                f"[{','.join(self.target_words)}],{self.template})")


@dataclass
class TemplateDatabase:
    """Templates in insertion order with their lexicon frequencies."""
    templates: dict[str, BilingualTemplate] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[BilingualTemplate, int]]) -> TemplateDatabase:
        db = cls()
        for t, n in pairs:
            if t.id in db.templates:
                raise ValueError(f"duplicate template id {t.id!r}")
            db.templates[t.id] = t
            db.counts[t.id] = n
        return db

    def __iter__(self) -> Iterator[BilingualTemplate]:
        return iter(self.templates.values())

    def __len__(self):
        return len(self.templates)

    def __contains__(self, tid):
        return tid in self.templates

    def __getitem__(self, tid) -> BilingualTemplate:
        return self.templates[tid]

    def count(self, tid) -> int:
        return self.counts.get(tid, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def scaled(self, k: int) -> TemplateDatabase:
        return TemplateDatabase(dict(self.templates),
                                {t: n * k for t, n in self.counts.items()})


# -- templates and entries -----------------------------------------------------

def _shape(lhs, rhs, macro):
    """Word-free, variable-canonical key of an entry or template."""
    return rename_canonical((tuple(it.desc for it in lhs),
                             tuple(it.desc for it in rhs), macro))


def template_of(e: BilingualEntry, template_id: str = "t") -> tuple[BilingualTemplate, EntryTriple]:
    lhs = tuple(PatternItem(None, it.desc) for it in e.lhs)
    rhs = tuple(PatternItem(Placeholder(template_id, n), it.desc)
                for n, it in enumerate(e.rhs, 1))
    t = rename_canonical(BilingualTemplate(template_id, lhs, rhs, e.macro))
    return t, EntryTriple(e.source_words, e.target_words, template_id)


def instantiate(t: BilingualTemplate, triple: EntryTriple,
                fresh: Fresh | None = None) -> BilingualEntry:
    """Fill ``t``'s slots from ``triple``; canonical variables unless ``fresh``."""
    if triple.template != t.id:
        raise ValueError(f"triple is for template {triple.template!r}, not {t.id!r}")
    if len(triple.source_words) != t.source_slots or \
            len(triple.target_words) != t.target_slots:
        raise ValueError(f"template {t.id} has {t.source_slots}+{t.target_slots} "
                         f"slots, got {len(triple.source_words)}+"
                         f"{len(triple.target_words)} words")
    src = iter(triple.source_words)
    lhs = [PatternItem(next(src) if it.word is None else it.word, it.desc)
           for it in t.lhs]
    rhs = [PatternItem(triple.target_words[it.word.position - 1]
                       if isinstance(it.word, Placeholder) else it.word, it.desc)
           for it in t.rhs]
    e = BilingualEntry(tuple(lhs), tuple(rhs), t.macro, template=t.id)
    return rename_fresh(e, fresh) if fresh else rename_canonical(e)


def canonical_key(e: BilingualEntry):
    """Hashable identity of an entry up to variable renaming."""
    return rename_canonical((e.lhs, e.rhs, e.macro))


def extract_templates(lexicon: Iterable[BilingualEntry],
                      known: TemplateDatabase | None = None) -> TemplateDatabase:
    """One template per equivalence class of entries differing only by words.

    Class ids come from the first entry that names its template, else from
    a ``known`` template of the same shape, else ``t1``, ``t2``, ...
    """
    known_ids = {_shape(t.lhs, t.rhs, t.macro): t.id for t in (known or ())}
    classes: dict = {}
    for e in lexicon:
        key = _shape(e.lhs, e.rhs, e.macro)
        if key not in classes:
            classes[key] = [e, 0, e.template or known_ids.get(key)]
        classes[key][1] += 1
        if classes[key][2] is None and e.template:
            classes[key][2] = e.template
    taken = {c[2] for c in classes.values() if c[2]}
    db = TemplateDatabase()
    serial = 0
    for e, count, tid in classes.values():
        if tid is None or tid in db.templates:
            while True:
                serial += 1
                tid = f"t{serial}"
                if tid not in taken:
                    break
        db.templates[tid] = template_of(e, tid)[0]
        db.counts[tid] = count
    return db


@dataclass(frozen=True)
class CoverageRow:
    templates: int
    entries: int
    coverage: float

    def __str__(self):
        return f"{self.templates}\t{self.entries}\t{self.coverage:.1f}%"


def coverage_report(db: TemplateDatabase, lexicon_size: int) -> list[CoverageRow]:
    """Cumulative lexicon coverage of the k most frequent templates."""
    ranked = sorted((tid for tid in db.templates if db.count(tid) > 0),
                    key=lambda tid: (-db.count(tid), tid))
    rows, covered = [], 0
    for k, tid in enumerate(ranked, 1):
        covered += db.count(tid)
        rows.append(CoverageRow(k, covered, 100.0 * covered / lexicon_size))
    return rows


def format_coverage(rows: list[CoverageRow]) -> str:
    return "templates\tentries\tcoverage\n" + "".join(f"{r}\n" for r in rows)


# -- reading and writing ---------------------------------------------------------

def _macro_tag(s: Stream) -> str | None:
    if not s.accept("\\\\"):
        return None
    name = s.name("transfer macro")
    if s.at("("):
        s.index_list()  # description labels, see Stream.description
    return name


def _side(pairs) -> tuple[PatternItem, ...]:
    return tuple(PatternItem(w, d) for w, d in pairs)


def parse_bilingual(text: str, src_macros: Macros | None = None,
                    tgt_macros: Macros | None = None, source: str = "<string>"
                    ) -> tuple[list[BilingualEntry], TemplateDatabase]:
    entries: list[BilingualEntry] = []
    db = TemplateDatabase()
    for toks in statements(text, source):
        s = Stream(toks, source)
        line = toks[0].line
        keyword = s.name("keyword")
        try:
            if keyword == "entry":
                tid = None
                if s.peek(1) is not None and s.at(":", 1):
                    tid = s.name("template id")
                    s.expect(":")
                lhs = s.items(src_macros)
                s.expect("<->")
                rhs = s.items(tgt_macros)
                macro = _macro_tag(s)
                s.finish()
                entries.append(BilingualEntry(_side(lhs), _side(rhs), macro, template=tid))
            elif keyword == "template":
                tid = s.name("template id")
                count = 0
                if s.peek() is not None and s.peek().text == "count":
                    s.next()
                    s.expect("=")
                    value = s.name("count")
                    if not value.isdigit():
                        raise s.error(f"count must be a non-negative integer, got {value!r}")
                    count = int(value)
                s.expect(":")
                lhs = s.items(src_macros)
                s.expect("<->")
                rhs = s.items(tgt_macros)
                macro = _macro_tag(s)
                s.finish()
                pos = 0
                rhs_items = []
                for w, d in rhs:
                    if w is None or isinstance(w, Placeholder):
                        pos += 1
                        w = Placeholder(tid, w.position if w else pos)
                    rhs_items.append(PatternItem(w, d))
                if tid in db:
                    raise ValueError(f"duplicate template id {tid!r}")
                db.templates[tid] = BilingualTemplate(tid, _side(lhs), tuple(rhs_items), macro)
                db.counts[tid] = count
            else:
                raise s.error(f"unknown statement {keyword!r}")
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), line, source) from None
    return entries, db


def load_bilingual(path, src_macros=None, tgt_macros=None):
    path = Path(path)
    return parse_bilingual(path.read_text(encoding="utf-8"), src_macros, tgt_macros, str(path))


def _format_side(items, macros, template_id=None) -> str:
    parts = []
    slot = 0
    for it in items:
        w = it.word
        if isinstance(w, Placeholder):
            slot += 1
        if isinstance(w, Placeholder) and w.template == template_id and w.position == slot:
            word = "_"
        else:
            word = format_word(w)
        parts.append(f"{word} :: {format_description(it.desc, macros)}")
    return " & ".join(parts)


def format_entry(e: BilingualEntry, src_macros=None, tgt_macros=None,
                 with_template: bool = True) -> str:
    e = rename_canonical(e)
    head = f"entry {e.template} : " if with_template and e.template else "entry "
    out = (head + _format_side(e.lhs, src_macros) + " <-> "
           + _format_side(e.rhs, tgt_macros))
    if e.macro:
        out += f" \\\\ {e.macro}"
    return out + "."


def format_template(t: BilingualTemplate, count: int | None = None,
                    src_macros=None, tgt_macros=None) -> str:
    t = rename_canonical(t)
    head = f"template {t.id}" + (f" count={count}" if count is not None else "")
    out = (f"{head} : {_format_side(t.lhs, src_macros)} <-> "
           f"{_format_side(t.rhs, tgt_macros, t.id)}")
    if t.macro:
        out += f" \\\\ {t.macro}"
    return out + "."


def format_database(db: TemplateDatabase, src_macros=None, tgt_macros=None) -> str:
    return "".join(format_template(t, db.count(t.id), src_macros, tgt_macros) + "\n"
                   for t in db)
