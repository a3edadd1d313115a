"""Coindexing grammars, monolingual lexicons, and the chart parser.

Grammar file::

    macro count_noun(I) = noun(I) {count=+}.
    start s.
    rule s() -> np(S) vp(E,S).
    rule np(I) -> determiner(I) nbar(I).

Lexicon file::

    lex kicked -> kick :: trans_verb(E,S,O).
    lex man :: @count_noun(I).

Symbols that never appear on a rule's left-hand side are terminals and
are matched against the categories of lexicon descriptions.  Variables
shared between a rule's left and right sides coindex the items below.
"""
from __future__ import annotations

import itertools
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .items import Bag, LexicalItem
from .syntax import Macro, ParseError, Stream, parse_macro, statements
from .terms import (EMPTY, BindingStore, Description, Fresh, Ground, Var,
                    features_compatible, rename_fresh, unify_args, variables)


class UnknownWordError(LookupError):
    def __init__(self, words):
        self.words = list(words)
        super().__init__("unknown words: " + ", ".join(self.words))


class EmptyInputError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    name: str
    args: tuple[Var, ...] = ()
    features: tuple[tuple[str, str], ...] = ()

    def __str__(self):
        out = f"{self.name}({','.join(map(str, self.args))})"
        if self.features:
            out += " {" + ",".join(f"{k}={v}" for k, v in self.features) + "}"
        return out


@dataclass(frozen=True)
class GrammarRule:
    lhs: Symbol
    rhs: tuple[Symbol, ...]

    def __post_init__(self):
        if not self.rhs:
            raise ValueError(f"rule for {self.lhs.name} has an empty right-hand side")
        rhs_vars = {v for sym in self.rhs for v in sym.args}
        missing = [v for v in self.lhs.args if v not in rhs_vars]
        if missing:
            raise ValueError(f"rule {self}: variables {', '.join(map(str, missing))} "
                             "do not occur on the right-hand side")

    def __str__(self):
        return f"{self.lhs} -> {' '.join(map(str, self.rhs))}"


@dataclass
class Grammar:
    rules: list[GrammarRule]
    start: str | None = None
    macros: dict[str, Macro] = field(default_factory=dict)

    def __post_init__(self):
        self.nonterminals = {r.lhs.name for r in self.rules}
        self.terminals: dict[str, int] = {}
        for rule in self.rules:
            for sym in rule.rhs:
                if sym.name not in self.nonterminals:
                    arity = self.terminals.setdefault(sym.name, len(sym.args))
                    if arity != len(sym.args):
                        raise ValueError(f"terminal {sym.name} used with arities "
                                         f"{arity} and {len(sym.args)}")
        if self.start is None and self.rules:
            self.start = self.rules[0].lhs.name
        self.by_lhs: dict[str, list[tuple[int, GrammarRule]]] = defaultdict(list)
        for i, rule in enumerate(self.rules):
            self.by_lhs[rule.lhs.name].append((i, rule))

    @classmethod
    def from_text(cls, text: str, source: str = "<string>") -> Grammar:
        rules, macros, start = [], {}, None
        for toks in statements(text, source):
            s = Stream(toks, source)
            keyword = s.name("keyword")
            if keyword == "macro":
                m = parse_macro(s)
                macros[m.name] = m
            elif keyword == "start":
                start = s.name("start symbol")
                s.finish()
            elif keyword == "rule":
                lhs = _symbol(s)
                s.expect("->")
                rhs = []
                while not s.at_end():
                    rhs.append(_symbol(s))
                try:
                    rules.append(GrammarRule(lhs, tuple(rhs)))
                except ValueError as exc:
                    raise ParseError(str(exc), toks[0].line, source) from None
            else:
                raise ParseError(f"unknown statement {keyword!r}", toks[0].line, source)
        try:
            return cls(rules, start, macros)
        except ValueError as exc:
            raise ParseError(str(exc), None, source) from None

    @classmethod
    def from_file(cls, path) -> Grammar:
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), str(path))


def _symbol(s: Stream) -> Symbol:
    name = s.name("symbol")
    args = s.index_list() if s.at("(") else ()
    if not all(isinstance(a, Var) for a in args):
        raise s.error("grammar symbols take index variables only")
    return Symbol(name, tuple(args), s.features())


@dataclass(frozen=True)
class LexEntry:
    surface: str
    stem: str
    desc: Description


@dataclass
class Lexicon:
    entries: list[LexEntry]

    def __post_init__(self):
        self._index: dict[str, list[LexEntry]] = defaultdict(list)
        for e in self.entries:
            self._index[e.surface.lower()].append(e)

    def lookup(self, word: str) -> list[LexEntry]:
        return self._index.get(word.lower(), [])

    def __contains__(self, word):
        return bool(self.lookup(word))

    def check(self, grammar: Grammar):
        """Every category must be a terminal of ``grammar`` with matching arity."""
        for e in self.entries:
            arity = grammar.terminals.get(e.desc.category)
            if arity is None:
                raise ValueError(f"lexicon category {e.desc.category!r} "
                                 f"(word {e.surface!r}) is not a grammar terminal")
            if arity != e.desc.arity:
                raise ValueError(f"word {e.surface!r}: {e.desc.category} has arity "
                                 f"{e.desc.arity}, grammar expects {arity}")

    @classmethod
    def from_text(cls, text: str, macros=None, source: str = "<string>") -> Lexicon:
        entries = []
        for toks in statements(text, source):
            s = Stream(toks, source)
            keyword = s.name("keyword")
            if keyword != "lex":
                raise ParseError(f"unknown statement {keyword!r}", toks[0].line, source)
            surface = s.word()
            stem = s.word() if s.accept("->") else surface
            if not isinstance(surface, str) or not isinstance(stem, str):
                raise s.error("lexicon words must be concrete")
            s.expect("::")
            desc = s.description(macros)
            s.finish()
            entries.append(LexEntry(surface.lower(), stem, desc))
        return cls(entries)

    @classmethod
    def from_file(cls, path, macros=None) -> Lexicon:
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), macros, str(path))


@dataclass
class Language:
    """A grammar and the lexicon whose categories are its terminals."""
    grammar: Grammar
    lexicon: Lexicon

    def __post_init__(self):
        self.lexicon.check(self.grammar)

    @property
    def macros(self):
        return self.grammar.macros

    @classmethod
    def from_files(cls, grammar_path, lexicon_path) -> Language:
        grammar = Grammar.from_file(grammar_path)
        lexicon = Lexicon.from_file(lexicon_path, grammar.macros)
        try:
            return cls(grammar, lexicon)
        except ValueError as exc:
            raise ParseError(str(exc), None, str(lexicon_path)) from None

    def parse(self, sentence: str):
        return parse(tokenize(sentence), self.grammar, self.lexicon)


_TERMINAL_PUNCT = re.compile(r"[.?!]+$")


def tokenize(raw: str) -> list[str]:
    """Lowercase, split on whitespace, drop trailing ``.?!``."""
    tokens = []
    for tok in raw.lower().split():
        tok = _TERMINAL_PUNCT.sub("", tok)
        if tok:
            tokens.append(tok)
    if not tokens:
        raise EmptyInputError(f"no tokens in {raw!r}")
    return tokens


# -- parse trees -------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    category: str
    position: int
    entry: LexEntry

    def __str__(self):
        return f"[{self.category} {self.entry.surface}]"


@dataclass(frozen=True)
class Node:
    symbol: str
    rule: int
    children: tuple

    def __str__(self):
        return f"[{self.symbol} {' '.join(map(str, self.children))}]"


@dataclass(frozen=True)
class Derivation:
    tree: Node | Leaf
    store: BindingStore
    bag: Bag


class _Chart:
    def __init__(self, tokens, grammar: Grammar, lexicon: Lexicon):
        self.grammar = grammar
        self.n = len(tokens)
        self.options = [lexicon.lookup(t) for t in tokens]
        self.reach: set[tuple[str, int, int]] = set()
        for i, opts in enumerate(self.options):
            for e in opts:
                self.reach.add((e.desc.category, i, i + 1))
        for length in range(1, self.n + 1):
            for i in range(self.n - length + 1):
                j = i + length
                changed = True
                while changed:
                    changed = False
                    for rule in grammar.rules:
                        key = (rule.lhs.name, i, j)
                        if key not in self.reach and self._covers(rule.rhs, 0, i, j):
                            self.reach.add(key)
                            changed = True

    def _covers(self, rhs, k, i, j) -> bool:
        if k == len(rhs) - 1:
            return (rhs[k].name, i, j) in self.reach
        rest = len(rhs) - k - 1
        return any((rhs[k].name, i, m) in self.reach and self._covers(rhs, k + 1, m, j)
                   for m in range(i + 1, j - rest + 1))

    def trees(self, sym: str, i: int, j: int, path=frozenset()) -> Iterator:
        if sym not in self.grammar.nonterminals:
            if j == i + 1:
                for e in self.options[i]:
                    if e.desc.category == sym:
                        yield Leaf(sym, i, e)
            return
        if (sym, i, j) in path or (sym, i, j) not in self.reach:
            return
        path = path | {(sym, i, j)}
        for idx, rule in self.grammar.by_lhs[sym]:
            for kids in self._children(rule.rhs, 0, i, j, path):
                yield Node(sym, idx, tuple(kids))

    def _children(self, rhs, k, i, j, path):
        if k == len(rhs) - 1:
            if (rhs[k].name, i, j) in self.reach:
                for t in self.trees(rhs[k].name, i, j, path):
                    yield [t]
            return
        rest = len(rhs) - k - 1
        for m in range(i + 1, j - rest + 1):
            if (rhs[k].name, i, m) not in self.reach:
                continue
            for t in self.trees(rhs[k].name, i, m, path):
                for more in self._children(rhs, k + 1, m, j, path):
                    yield [t] + more


def _instantiate(tree, grammar: Grammar, tokens) -> Derivation | None:
    fresh = Fresh("_p")
    store = EMPTY
    leaves: list[tuple[Leaf, Description]] = []

    def visit(node, args, feats):
        nonlocal store
        if isinstance(node, Leaf):
            desc = rename_fresh(node.entry.desc, fresh)
            if not features_compatible(desc.features, feats):
                return False
            store = unify_args(desc.args, args, store)
            leaves.append((node, desc))
            return store is not None
        rule = grammar.rules[node.rule]
        ren = {v: fresh() for v in variables((rule.lhs.args, [s.args for s in rule.rhs]))}
        store = unify_args(tuple(ren[v] for v in rule.lhs.args), args, store)
        if store is None:
            return False
        for child, sym in zip(node.children, rule.rhs):
            if not visit(child, tuple(ren[v] for v in sym.args), sym.features):
                return False
        return True

    root_arity = len(grammar.by_lhs[tree.symbol][0][1].lhs.args) \
        if isinstance(tree, Node) else len(tree.entry.desc.args)
    if not visit(tree, tuple(fresh() for _ in range(root_arity)), ()):
        return None

    # ground every dependency cluster, numbering in item order
    leaves.sort(key=lambda pair: pair[0].position)
    numbers: dict = {}
    for _, desc in leaves:
        for a in desc.args:
            rep = store.resolve(a)
            if isinstance(rep, Var) and rep not in numbers:
                numbers[rep] = len(numbers)
    for rep, n in numbers.items():
        store = store.bind(rep, Ground(n))
    items = tuple(
        LexicalItem(str(leaf.position + 1), leaf.entry.stem, store.apply(desc),
                    surface=tokens[leaf.position])
        for leaf, desc in leaves)
    return Derivation(tree, store, Bag(items))


def parse(tokens: list[str], grammar: Grammar, lexicon: Lexicon,
          start: str | None = None) -> Iterator[Derivation]:
    """All complete derivations of ``tokens``, lazily.

    Order is deterministic: rule order first, then leftmost split.  Raises
    UnknownWordError up front if any token is missing from the lexicon; an
    ungrammatical input simply yields nothing.
    """
    if not tokens:
        raise EmptyInputError("nothing to parse")
    unknown = [t for t in tokens if t not in lexicon]
    if unknown:
        raise UnknownWordError(dict.fromkeys(unknown))
    chart = _Chart(tokens, grammar, lexicon)
    start = start or grammar.start

    def generate():
        for tree in chart.trees(start, 0, len(tokens)):
            d = _instantiate(tree, grammar, tokens)
            if d is not None:
                yield d
    return generate()


def get_bag(d: Derivation) -> Bag:
    return Bag(tuple(d.store.apply(it) for it in d.bag))


def parse_all(tokens, grammar, lexicon, limit: int | None = None) -> list[Derivation]:
    return list(itertools.islice(parse(tokens, grammar, lexicon), limit))
