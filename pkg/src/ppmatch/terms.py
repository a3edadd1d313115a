"""Indices, descriptions and unification.

Indices are atomic (integers or plain variables), so unification never
needs an occurs check: a binding chain always ends at a ground value or an
unbound variable, and binding a variable to its own representative is a
no-op.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, fields, is_dataclass, replace
from typing import Iterable, Iterator, Union


@dataclass(frozen=True, order=True)
class Ground:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"ground index must be non-negative, got {self.value}")

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, order=True)
class Var:
    id: str

    def __str__(self):
        return self.id


Index = Union[Ground, Var]


class Fresh:
    """Per-derivation allocator of variables that cannot clash with
    variables written in files (those start with an uppercase letter)."""

    def __init__(self, prefix: str = "_"):
        self.prefix = prefix
        self._counter = itertools.count()

    def __call__(self) -> Var:
        return Var(f"{self.prefix}{next(self._counter)}")


@dataclass(frozen=True)
class Description:
    category: str
    args: tuple[Index, ...] = ()
    features: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        # keep features sorted so equal feature sets compare equal
        feats = tuple(sorted(dict(self.features).items()))
        if len(feats) != len(self.features):
            raise ValueError(f"duplicate feature key in {self.features!r}")
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def feature_dict(self) -> dict[str, str]:
        return dict(self.features)

    def with_args(self, args: Iterable[Index]) -> Description:
        return replace(self, args=tuple(args))

    def __str__(self):
        out = f"{self.category}({','.join(map(str, self.args))})"
        if self.features:
            out += " {" + ",".join(f"{k}={v}" for k, v in self.features) + "}"
        return out


def merge_features(f1, f2):
    """Compatible union of two feature tuples, or None on a clash."""
    merged = dict(f1)
    for key, value in f2:
        if merged.setdefault(key, value) != value:
            return None
    return tuple(sorted(merged.items()))


class BindingStore:
    """Immutable variable -> index mapping; ``bind`` returns a new store.

    Immutability makes backtracking free: a search branch simply drops the
    store it extended.
    """

    __slots__ = ("_map",)

    def __init__(self, mapping: dict[Var, Index] | None = None):
        self._map = dict(mapping or {})

    def resolve(self, idx: Index) -> Index:
        while isinstance(idx, Var) and idx in self._map:
            idx = self._map[idx]
        return idx

    def bind(self, var: Var, value: Index) -> BindingStore:
        new = dict(self._map)
        new[var] = value
        return BindingStore(new)

    def apply(self, term):
        """Replace every index in ``term`` by its representative."""
        return map_indices(term, self.resolve)

    def __contains__(self, var):
        return var in self._map

    def __len__(self):
        return len(self._map)

    def items(self):
        return self._map.items()

    def as_dict(self) -> dict[Var, Index]:
        """Fully resolved view, one entry per bound variable."""
        return {v: self.resolve(v) for v in self._map}

    def __eq__(self, other):
        return isinstance(other, BindingStore) and self.as_dict() == other.as_dict()

    def __repr__(self):
        inner = ", ".join(f"{k}->{v}" for k, v in sorted(self.as_dict().items()))
        return f"BindingStore({inner})"


EMPTY = BindingStore()


def unify_index(a: Index, b: Index, s: BindingStore) -> BindingStore | None:
    """Unify two indices under ``s``; None when two distinct grounds meet."""
    a, b = s.resolve(a), s.resolve(b)
    if a == b:
        return s
    if isinstance(a, Var):
        return s.bind(a, b)
    if isinstance(b, Var):
        return s.bind(b, a)
    return None


def unify_args(xs, ys, s: BindingStore) -> BindingStore | None:
    if len(xs) != len(ys):
        return None
    for x, y in zip(xs, ys):
        s = unify_index(x, y, s)
        if s is None:
            return None
    return s


def features_compatible(f1, f2) -> bool:
    d1 = dict(f1)
    return all(d1.get(k, v) == v for k, v in f2)


def unify_description(d1: Description, d2: Description,
                      s: BindingStore) -> BindingStore | None:
    if d1.category != d2.category or d1.arity != d2.arity:
        return None
    if not features_compatible(d1.features, d2.features):
        return None
    return unify_args(d1.args, d2.args, s)


def map_indices(term, fn):
    """Rebuild ``term`` with ``fn`` applied to every index inside it.

    Walks tuples, lists, frozen dataclasses; everything else is returned
    unchanged.
    """
    if isinstance(term, (Ground, Var)):
        return fn(term)
    if isinstance(term, tuple):
        return tuple(map_indices(t, fn) for t in term)
    if isinstance(term, list):
        return [map_indices(t, fn) for t in term]
    if is_dataclass(term) and not isinstance(term, type):
        changes = {}
        for f in fields(term):
            if not f.init:
                continue
            old = getattr(term, f.name)
            new = map_indices(old, fn)
            if new is not old:
                changes[f.name] = new
        return replace(term, **changes) if changes else term
    return term


def iter_indices(term) -> Iterator[Index]:
    """Indices of ``term`` in the traversal order used by map_indices."""
    found = []
    map_indices(term, lambda i: found.append(i) or i)
    return iter(found)


def variables(term) -> list[Var]:
    seen = {}
    for idx in iter_indices(term):
        if isinstance(idx, Var):
            seen.setdefault(idx, None)
    return list(seen)


def letter_name(n: int) -> str:
    """0 -> A, 25 -> Z, 26 -> AA, ..."""
    name = ""
    n += 1
    while n:
        n, rem = divmod(n - 1, 26)
        name = chr(ord("A") + rem) + name
    return name


def rename_canonical(term):
    """Rename variables A, B, C, ... by first occurrence."""
    names = {v: Var(letter_name(i)) for i, v in enumerate(variables(term))}
    return map_indices(term, lambda i: names.get(i, i))


def rename_fresh(term, fresh: Fresh):
    names = {v: fresh() for v in variables(term)}
    return map_indices(term, lambda i: names.get(i, i))


def alpha_equivalent(t1, t2) -> bool:
    return rename_canonical(t1) == rename_canonical(t2)
