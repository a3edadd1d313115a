"""Shared reader for the line-oriented resource files.

All resource files (grammars, monolingual lexicons, bilingual entries and
templates) are sequences of ``.``-terminated statements with ``#``
comments.  This module tokenizes them and parses the pieces they have in
common: descriptions, macro definitions and ``word :: description`` items.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .items import Placeholder
from .terms import Description, Ground, Index, Var, map_indices, merge_features


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = "<string>"):
        self.line = line
        self.source = source
        self.message = message
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op><->|↔|->|::|\\\\|\\|[(){},=&:@.])
  | (?P<quoted>'[^'\n]*')
  | (?P<name>(?:[^\s(){},=&:.'\\@<>\#-]|-(?!>))+)
""", re.VERBOSE)

_PLACEHOLDER = re.compile(r"word\(\s*([^,()\s]+)\s*,\s*(\d+)\s*\)$")
_NAME = re.compile(r"(?:[^\s(){},=&:.'\\@<>#-]|-(?!>))+$")


@dataclass(frozen=True)
class Token:
    kind: str   # 'op', 'name', 'quoted'
    text: str
    line: int


def tokenize(text: str, source: str = "<string>") -> list[Token]:
    tokens = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, source)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind in ("op", "quoted", "name"):
            tok = m.group()
            if tok in ("\\", "\\\\"):
                tok = "\\\\"
            elif tok == "↔":
                tok = "<->"
            tokens.append(Token(kind, tok, line))
        pos = m.end()
    return tokens


def statements(text: str, source: str = "<string>") -> list[list[Token]]:
    """Split a file into statements at top-level ``.`` tokens."""
    out, cur = [], []
    for tok in tokenize(text, source):
        if tok.kind == "op" and tok.text == ".":
            if not cur:
                raise ParseError("empty statement", tok.line, source)
            out.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        raise ParseError("statement not terminated by '.'", cur[0].line, source)
    return out


@dataclass(frozen=True)
class Macro:
    """Named description abbreviation, e.g. ``count_noun(I) = noun(I) {count=+}``."""
    name: str
    params: tuple[str, ...]
    body: Description

    def expand(self, args: tuple[Index, ...], features=()) -> Description:
        if len(args) != len(self.params):
            raise ValueError(f"macro {self.name} takes {len(self.params)} "
                             f"arguments, got {len(args)}")
        sub = {Var(p): a for p, a in zip(self.params, args)}
        body = map_indices(self.body, lambda i: sub.get(i, i))
        feats = merge_features(body.features, features)
        if feats is None:
            raise ValueError(f"features {features} clash with macro {self.name}")
        return Description(body.category, body.args, feats)

    def abbreviate(self, desc: Description):
        """(arguments, leftover features) that make this macro expand to ``desc``, or None."""
        body = self.body
        if body.category != desc.category or body.arity != desc.arity:
            return None
        if not set(body.features) <= set(desc.features):
            return None
        binding: dict[str, Index] = {}
        for b, d in zip(body.args, desc.args):
            if isinstance(b, Ground):
                if b != d:
                    return None
            elif binding.setdefault(b.id, d) != d:
                return None
        if set(binding) != set(self.params):
            return None
        extra = tuple(f for f in desc.features if f not in body.features)
        return tuple(binding[p] for p in self.params), extra


Macros = dict  # name -> Macro


@dataclass
class Stream:
    """Cursor over the tokens of one statement."""
    tokens: list[Token]
    source: str = "<string>"
    pos: int = 0
    anon: int = field(default=0)

    @property
    def line(self) -> int | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos].line
        return self.tokens[-1].line if self.tokens else None

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.source)

    def peek(self, offset: int = 0) -> Token | None:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, text: str, offset: int = 0) -> bool:
        tok = self.peek(offset)
        return tok is not None and tok.kind == "op" and tok.text == text

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of statement")
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.kind != "op" or tok.text != text:
            self.pos -= 1
            raise self.error(f"expected {text!r}, found {tok.text!r}")
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def name(self, what: str = "name") -> str:
        tok = self.next()
        if tok.kind != "name":
            self.pos -= 1
            raise self.error(f"expected {what}, found {tok.text!r}")
        return tok.text

    def finish(self):
        if not self.at_end():
            raise self.error(f"unexpected {self.peek().text!r}")

    # -- shared constructs -------------------------------------------------

    def index(self) -> Index:
        text = self.name("index")
        if text.isdigit():
            return Ground(int(text))
        if text == "_":
            self.anon += 1
            return Var(f"_anon{self.anon}")
        if text[0].isupper() or text[0] == "_":
            return Var(text)
        raise self.error(f"index {text!r} must be a variable or an integer")

    def index_list(self) -> tuple[Index, ...]:
        self.expect("(")
        args = []
        if not self.accept(")"):
            args.append(self.index())
            while self.accept(","):
                args.append(self.index())
            self.expect(")")
        return tuple(args)

    def features(self) -> tuple[tuple[str, str], ...]:
        feats = []
        if self.accept("{"):
            if not self.accept("}"):
                while True:
                    key = self.name("feature name")
                    self.expect("=")
                    feats.append((key, self.name("feature value")))
                    if not self.accept(","):
                        break
                self.expect("}")
        if len({k for k, _ in feats}) != len(feats):
            raise self.error("duplicate feature key")
        return tuple(feats)

    def description(self, macros: Macros | None = None) -> Description:
        """``[@]cat(args) {k=v}``, optionally wrapped as ``(Label, ...)``."""
        if self.at("("):
            # labelled form (L, desc): the label only links descriptions to
            # transfer macros, which are opaque here
            self.next()
            self.index()
            self.expect(",")
            desc = self.description(macros)
            self.expect(")")
            return desc
        # an undefined @macro is read as a plain category
        self.accept("@")
        cat = self.name("category")
        args = self.index_list() if self.at("(") else ()
        feats = self.features()
        macro = (macros or {}).get(cat)
        if macro is not None:
            try:
                return macro.expand(args, feats)
            except ValueError as exc:
                raise self.error(str(exc)) from None
        return Description(cat, args, feats)

    def word(self):
        """A word, ``_`` (anonymous slot) or quoted ``'word(T,i)'`` placeholder."""
        tok = self.next()
        if tok.kind == "quoted":
            inner = tok.text[1:-1]
            m = _PLACEHOLDER.match(inner)
            if m:
                return Placeholder(m.group(1), int(m.group(2)))
            return inner
        if tok.kind != "name":
            self.pos -= 1
            raise self.error(f"expected word, found {tok.text!r}")
        return None if tok.text == "_" else tok.text

    def item(self, macros: Macros | None = None):
        word = self.word()
        self.expect("::")
        return word, self.description(macros)

    def items(self, macros: Macros | None = None) -> list:
        out = [self.item(macros)]
        while self.accept("&"):
            out.append(self.item(macros))
        return out


def parse_macro(stream: Stream) -> Macro:
    """After the ``macro`` keyword: ``name(P1,...) = description``."""
    name = stream.name("macro name")
    params = stream.index_list()
    if not all(isinstance(p, Var) for p in params):
        raise stream.error("macro parameters must be variables")
    stream.expect("=")
    body = stream.description()
    stream.finish()
    return Macro(name, tuple(p.id for p in params), body)


def format_word(word) -> str:
    if word is None:
        return "_"
    if isinstance(word, Placeholder):
        return f"'{word}'"
    if _NAME.match(word) and word != "_" and not _PLACEHOLDER.match(word):
        return word
    return f"'{word}'"


def format_description(desc: Description, macros: Macros | None = None) -> str:
    """Inverse of Stream.description.

    Uses the macro that accounts for the most features of ``desc``; features
    the macro does not fix are printed after it.
    """
    best = None
    for macro in (macros or {}).values():
        found = macro.abbreviate(desc)
        if found is not None and (best is None or len(found[1]) < len(best[1][1])):
            best = macro, found
    if best is not None:
        macro, (args, feats) = best
        out = f"@{macro.name}({','.join(map(str, args))})"
    else:
        out, feats = f"{desc.category}({','.join(map(str, desc.args))})", desc.features
    if feats:
        out += " {" + ",".join(f"{k}={v}" for k, v in feats) + "}"
    return out
