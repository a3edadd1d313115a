"""Matching a transfer output bag against a target parse bag.

A match is a bijection between the two bags such that paired
descriptions unify and the induced mapping from transfer indices to
target indices is one-to-one.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .items import Bag, LexicalItem, is_wildcard, variable_names, words_compatible
from .terms import (EMPTY, Description, Ground, Index, Var, merge_features,
                    unify_description)

ORACLE_LIMIT = 8


@dataclass(frozen=True)
class Matching:
    item_map: tuple[tuple[str, str], ...]       # (transfer id, target id)
    index_map: tuple[tuple[Index, Ground], ...]
    unified_bag: Bag

    @property
    def key(self):
        return frozenset(self.item_map), frozenset(self.index_map)

    def target_of(self, transfer_id: str) -> str:
        return dict(self.item_map)[transfer_id]


def format_item_map(m: Matching) -> str:
    return "{" + ",".join(f"<{a},{b}>" for a, b in m.item_map) + "}"


def format_index_map(m: Matching, names: dict[Var, str] | None = None) -> str:
    names = names or {}
    return "{" + ",".join(f"<{names.get(a, str(a))},{b}>" for a, b in m.index_map) + "}"


def _check_inputs(target_parse: Bag, transfer_out: Bag):
    if not target_parse.is_ground():
        raise ValueError("target parse bag must be ground")


def _make_matching(pairs: list[tuple[LexicalItem, LexicalItem]], store,
                   transfer_out: Bag) -> Matching:
    """Build a Matching from (transfer item, target item) pairs."""
    by3 = {a.id: (a, b) for a, b in pairs}
    item_map = tuple((it.id, by3[it.id][1].id) for it in transfer_out)
    index_map = {}
    for it in transfer_out:
        for a in it.desc.args:
            index_map.setdefault(a, store.resolve(a))
    unified = []
    for it in transfer_out:
        a, b = by3[it.id]
        word = b.word if is_wildcard(a.word) else a.word
        feats = merge_features(a.desc.features, b.desc.features)
        desc = store.apply(a.desc)
        unified.append(LexicalItem(a.id, word, Description(desc.category, desc.args, feats)))
    return Matching(item_map, tuple(index_map.items()), Bag(tuple(unified)))


def match_bags(target_parse: Bag, transfer_out: Bag) -> Iterator[Matching]:
    """All bijections satisfying the match conditions, lazily.

    Transfer items are assigned most-constrained first; candidates are
    tried in target listing order.
    """
    _check_inputs(target_parse, transfer_out)
    if len(target_parse) != len(transfer_out):
        return iter(())
    t3, t2 = list(transfer_out), list(target_parse)
    cands = [[j for j, b in enumerate(t2)
              if words_compatible(a.word, b.word)
              and unify_description(a.desc, b.desc, EMPTY) is not None]
             for a in t3]
    order = sorted(range(len(t3)), key=lambda i: (len(cands[i]), i))

    def go(k, store, used, owner, pairs):
        if k == len(order):
            yield _make_matching(pairs, store, transfer_out)
            return
        i = order[k]
        a = t3[i]
        for j in cands[i]:
            if j in used:
                continue
            b = t2[j]
            s = unify_description(a.desc, b.desc, store)
            if s is None:
                continue
            # one-to-one on indices: a target index owned by one transfer
            # index cannot be claimed by another
            new_owner = owner
            ok = True
            for x, g in zip(a.desc.args, b.desc.args):
                prev = new_owner.get(g)
                if prev is None:
                    if new_owner is owner:
                        new_owner = dict(owner)
                    new_owner[g] = x
                elif prev != x:
                    ok = False
                    break
            if ok:
                yield from go(k + 1, s, used | {j}, new_owner, pairs + [(a, b)])

    return go(0, EMPTY, frozenset(), {}, [])


def match_bags_oracle(target_parse: Bag, transfer_out: Bag) -> set[Matching]:
    """Reference semantics: try all n! bijections."""
    _check_inputs(target_parse, transfer_out)
    if len(target_parse) != len(transfer_out):
        return set()
    if len(transfer_out) > ORACLE_LIMIT:
        raise ValueError(f"oracle limited to {ORACLE_LIMIT} items, "
                         f"got {len(transfer_out)}")
    t3 = list(transfer_out)
    found = set()
    for perm in itertools.permutations(target_parse):
        store = EMPTY
        for a, b in zip(t3, perm):
            if not words_compatible(a.word, b.word):
                store = None
            else:
                store = unify_description(a.desc, b.desc, store)
            if store is None:
                break
        if store is None:
            continue
        induced = {}
        for a, b in zip(t3, perm):
            for x, g in zip(a.desc.args, b.desc.args):
                induced.setdefault(x, set()).add(g)
        if any(len(gs) != 1 for gs in induced.values()):
            continue
        images = [next(iter(gs)) for gs in induced.values()]
        if len(set(images)) != len(images):
            continue
        found.add(_make_matching(list(zip(t3, perm)), store, transfer_out))
    return found


@dataclass(frozen=True)
class Unique:
    matching: Matching


@dataclass(frozen=True)
class Ambiguous:
    matchings: tuple[Matching, ...]


@dataclass(frozen=True)
class NoMatch:
    pass


def classify(matchings: Iterable[Matching]):
    distinct = list({m.item_map: m for m in matchings}.values())
    if not distinct:
        return NoMatch()
    if len(distinct) == 1:
        return Unique(distinct[0])
    return Ambiguous(tuple(distinct))


def describe(m: Matching, transfer_out: Bag) -> str:
    names = variable_names(transfer_out)
    return f"{format_item_map(m)}\n{format_index_map(m, names)}"
