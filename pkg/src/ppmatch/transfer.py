"""Lexicalist transfer: cover the source bag with rule left-hand sides."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .bilingual import BilingualEntry, BilingualTemplate
from .items import Bag, LexicalItem
from .terms import (EMPTY, BindingStore, Ground, Var, map_indices,
                    unify_description, variables)

# Transfer macros are opaque tags.  A callable registered here under a
# macro name receives (consumed source items, produced target items) and
# returns the target items to emit.
TRANSFER_MACROS: dict[str, Callable] = {}


class NoCoverError(LookupError):
    """Some source items match no rule at all."""

    def __init__(self, items):
        self.items = list(items)
        listed = ", ".join(f"{it.id}:{it.word}:{it.category}" for it in self.items)
        super().__init__(f"no transfer rule covers {listed}")


ENTRY, TEMPLATE = 0, 1


@dataclass(frozen=True)
class TransferRule:
    rule: BilingualEntry | BilingualTemplate
    rank: int
    order: int

    @property
    def is_template(self) -> bool:
        return self.rank == TEMPLATE

    @property
    def name(self) -> str:
        if self.is_template:
            return self.rule.id
        return f"entry#{self.order}"

    @property
    def lhs(self):
        return self.rule.lhs

    @property
    def rhs(self):
        return self.rule.rhs


def transfer_rules(entries: Iterable[BilingualEntry] = (),
                   templates: Iterable[BilingualTemplate] = ()) -> list[TransferRule]:
    """Candidate order: every entry before any template, file order within."""
    rules = [TransferRule(e, ENTRY, i) for i, e in enumerate(entries)]
    rules += [TransferRule(t, TEMPLATE, i) for i, t in enumerate(templates)]
    return rules


@dataclass(frozen=True)
class TransferStep:
    rule: TransferRule
    consumed: tuple[str, ...]          # source ids, in pattern order
    produced: tuple[LexicalItem, ...]


@dataclass(frozen=True)
class TransferDerivation:
    steps: tuple[TransferStep, ...]
    store: BindingStore
    bag: Bag


@dataclass(frozen=True)
class UsedRule:
    rule: TransferRule
    consumed: tuple[str, ...]
    produced: tuple[str, ...]


def used_rules(d: TransferDerivation) -> list[UsedRule]:
    return [UsedRule(st.rule, st.consumed, tuple(it.id for it in st.produced))
            for st in d.steps]


def source_var(g: Ground) -> Var:
    """Target-side variable standing for source index ``g``."""
    return Var(f"_s{g.value}")


def _lhs_matches(pattern_item, item: LexicalItem, store):
    if pattern_item.word is not None and pattern_item.word != item.word:
        return None
    return unify_description(pattern_item.desc, item.desc, store)


def _rename_rule(rule: TransferRule, cell: int):
    names = {v: Var(f"_c{cell}_{v.id}") for v in variables((rule.lhs, rule.rhs))}
    ren = lambda t: map_indices(t, lambda i: names.get(i, i))
    return ren(rule.lhs), ren(rule.rhs)


def transfer(src: Bag, rules: list[TransferRule]) -> Iterator[TransferDerivation]:
    """Every partition of ``src`` into cells covered by rule left-hand sides.

    Search anchors on the first uncovered item and tries rules in priority
    order, so each partition is produced once and entry-based alternatives
    come before template-based ones.  Raises NoCoverError if an item lies
    outside every complete left-hand-side match; yields nothing if items are
    individually covered but no consistent partition exists.
    """
    if not src.is_ground():
        raise ValueError("transfer needs a ground source bag")
    items = list(src)
    # an item is covered if some rule's whole lhs matches a group containing it
    everything = tuple(range(len(items)))
    covered = set()
    for rule in rules:
        for used, _ in _assignments(rule.lhs, items, everything, 0, EMPTY, []):
            covered.update(used)
        if len(covered) == len(items):
            break
    uncovered = [it for pos, it in enumerate(items) if pos not in covered]
    if uncovered:
        raise NoCoverError(uncovered)
    return _search(items, rules)


def _assignments(pattern, items, free, k, store, used):
    if k == len(pattern):
        yield tuple(used), store
        return
    for pos in free:
        if pos in used:
            continue
        s = _lhs_matches(pattern[k], items[pos], store)
        if s is not None:
            yield from _assignments(pattern, items, free, k + 1, s, used + [pos])


def _search(items, rules):
    def output_index(store, idx):
        rep = store.resolve(idx)
        return source_var(rep) if isinstance(rep, Ground) else rep

    def go(free: tuple[int, ...], steps, store, cell):
        if not free:
            produced = [it for st in steps for it in st.produced]
            yield TransferDerivation(tuple(steps), store, Bag(tuple(produced)))
            return
        anchor = free[0]
        for rule in rules:
            lhs, rhs = _rename_rule(rule, cell)
            if len(lhs) > len(free):
                continue
            for used, s in _assignments(lhs, items, free, 0, store, []):
                if anchor not in used:
                    continue
                anchor_id = items[anchor].id
                produced = []
                for n, pit in enumerate(rhs, 1):
                    rid = f"{cell}-{anchor_id}" if len(rhs) == 1 else f"{cell}-{anchor_id}.{n}"
                    desc = map_indices(pit.desc, lambda i: output_index(s, i))
                    produced.append(LexicalItem(rid, pit.word, desc))
                hook = TRANSFER_MACROS.get(rule.rule.macro)
                if hook is not None:
                    produced = list(hook([items[p] for p in used], produced))
                step = TransferStep(rule, tuple(items[p].id for p in used), tuple(produced))
                rest = tuple(p for p in free if p not in used)
                yield from go(rest, steps + [step], s, cell + 1)

    return go(tuple(range(len(items))), [], EMPTY, 1)
