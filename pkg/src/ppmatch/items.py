"""Lexical items, bags, and the tabular bag dump."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .terms import Description, Ground, Var, iter_indices, letter_name


@dataclass(frozen=True)
class Placeholder:
    """Target-side word slot ``word(template, position)``.

    Matches any word; only used to route words into entries afterwards.
    """
    template: str
    position: int

    def __str__(self):
        return f"word({self.template},{self.position})"


# An anonymous word slot (``_``) is represented by None.
Word = Union[str, Placeholder, None]


def is_wildcard(word: Word) -> bool:
    return word is None or isinstance(word, Placeholder)


def words_compatible(w1: Word, w2: Word) -> bool:
    return is_wildcard(w1) or is_wildcard(w2) or w1 == w2


@dataclass(frozen=True)
class LexicalItem:
    id: str
    word: Word
    desc: Description
    surface: str | None = None

    @property
    def category(self) -> str:
        return self.desc.category

    def word_str(self) -> str:
        return "_" if self.word is None else str(self.word)


@dataclass(frozen=True)
class Bag:
    """Unordered multiset of lexical items.

    Listing order is kept for deterministic enumeration only; equality is
    order independent.
    """
    items: tuple[LexicalItem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        ids = [it.id for it in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate item ids in bag: {ids}")

    def __iter__(self) -> Iterator[LexicalItem]:
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __eq__(self, other):
        if not isinstance(other, Bag):
            return NotImplemented
        key = lambda it: (it.id, repr(it))
        return sorted(self.items, key=key) == sorted(other.items, key=key)

    def __hash__(self):
        return hash(frozenset(self.items))

    @property
    def ids(self) -> list[str]:
        return [it.id for it in self.items]

    def by_id(self, item_id: str) -> LexicalItem:
        for it in self.items:
            if it.id == item_id:
                return it
        raise KeyError(item_id)

    def words(self) -> list:
        return [it.word for it in self.items]

    def is_ground(self) -> bool:
        return all(isinstance(i, Ground) for i in iter_indices(self.items))


def variable_names(items: Iterable[LexicalItem]) -> dict[Var, str]:
    """Letters for the variables of a bag, by first occurrence."""
    names: dict[Var, str] = {}
    for idx in iter_indices(tuple(items)):
        if isinstance(idx, Var) and idx not in names:
            names[idx] = letter_name(len(names))
    return names


def format_indices(args, names: dict[Var, str] | None = None) -> str:
    names = names or {}
    return "[" + ",".join(names.get(a, str(a)) for a in args) + "]"


def format_bag(bag: Bag, names: dict[Var, str] | None = None) -> str:
    """Aligned Id/Word/Cat/Indices table."""
    if names is None:
        names = variable_names(bag)
    rows = [("Id", "Word", "Cat", "Indices")]
    for it in bag:
        rows.append((it.id, it.word_str(), it.category,
                     format_indices(it.desc.args, names)))
    widths = [max(len(r[c]) for r in rows) for c in range(3)]
    lines = []
    for n, row in enumerate(rows):
        cells = [row[c].ljust(widths[c]) for c in range(3)] + [row[3]]
        lines.append("  ".join(cells).rstrip())
        if n == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines)
