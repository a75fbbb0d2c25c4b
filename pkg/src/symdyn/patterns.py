"""Patterns over group elements and pattern presentations over words."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .groups import GroupCtx, element_key
from .verdict import FuelVerdict, InconsistentPatternError, Status


def _word_key(w: str):
    return (len(w), w)


@dataclass(frozen=True)
class Pattern:
    """A finite map from group elements to symbols.

    Cells are kept sorted by :func:`element_key`, so equal patterns compare
    and hash equal.
    """

    cells: tuple[tuple[object, str], ...]

    def __post_init__(self):
        cells = tuple(sorted(self.cells, key=lambda c: element_key(c[0])))
        object.__setattr__(self, "cells", cells)
        if len({g for g, _ in cells}) != len(cells):
            raise ValueError("pattern assigns two symbols to one cell")

    @classmethod
    def from_dict(cls, values: Mapping) -> "Pattern":
        return cls(tuple(values.items()))

    @functools.cached_property
    def _map(self) -> dict:
        return dict(self.cells)

    @property
    def support(self) -> tuple:
        return tuple(g for g, _ in self.cells)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for _, s in self.cells)

    def as_dict(self) -> dict:
        return dict(self._map)

    def __getitem__(self, g):
        return self._map[g]

    def __contains__(self, g) -> bool:
        return g in self._map

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __repr__(self):
        if self.cells and all(isinstance(g, tuple) and len(g) == 1 for g in self.support):
            pos = sorted(g[0] for g in self.support)
            if pos == list(range(pos[0], pos[0] + len(pos))):
                return f"Pattern({to_word(self)!r} @ {pos[0]})"
        return f"Pattern({dict(self.cells)!r})"


def from_word(word, start: int = 0) -> Pattern:
    """One-dimensional pattern reading ``word`` left to right from cell ``start``."""
    return Pattern(tuple(((start + i,), s) for i, s in enumerate(word)))


def to_word(q: Pattern) -> str:
    """Inverse of :func:`from_word` for patterns on a contiguous window of Z."""
    pos = sorted(g[0] for g in q.support)
    if pos and pos != list(range(pos[0], pos[-1] + 1)):
        raise ValueError("pattern support is not an interval")
    return "".join(q[(i,)] for i in pos)


@dataclass(frozen=True)
class PatternPresentation:
    """A finite map from words over the generators to symbols."""

    cells: tuple[tuple[str, str], ...]

    def __post_init__(self):
        cells = tuple(sorted(self.cells, key=lambda c: _word_key(c[0])))
        object.__setattr__(self, "cells", cells)
        if len({w for w, _ in cells}) != len(cells):
            raise ValueError("presentation assigns two symbols to one word")

    @classmethod
    def from_dict(cls, values: Mapping[str, str]) -> "PatternPresentation":
        return cls(tuple(values.items()))

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.cells)

    def as_dict(self) -> dict:
        return dict(self.cells)

    def __len__(self):
        return len(self.cells)


def present(ctx: GroupCtx, q: Pattern) -> PatternPresentation:
    """The presentation of ``q`` by canonical words."""
    return PatternPresentation(tuple((ctx.word_of(g), s) for g, s in q.cells))


def consistency_check(ctx: GroupCtx, p: PatternPresentation, fuel: int = 0) -> FuelVerdict:
    """Is ``p`` consistent, i.e. do words naming the same element carry the same symbol?

    NO comes with an inconsistency certificate wrapping the word-equality proof.
    Presented groups answer UNKNOWN unless a violation is found, or unless the
    question is vacuous (all symbols equal).
    """
    for w in p.support:
        ctx.check_word(w)
    cells = p.cells
    if ctx.decidable:
        seen: dict = {}
        for w, s in cells:
            g = ctx.canonicalize(w)
            if g in seen and seen[g][1] != s:
                return _inconsistent(ctx, p, seen[g][0], w, ctx.equals_semi(seen[g][0], w))
            seen.setdefault(g, (w, s))
        return FuelVerdict(Status.YES)
    clash = False
    for (u, a), (v, b) in itertools.combinations(cells, 2):
        if a == b:
            continue
        clash = True
        eq = ctx.equals_semi(u, v, fuel)
        if eq.yes:
            return _inconsistent(ctx, p, u, v, eq)
    if not clash:
        return FuelVerdict(Status.YES, detail="all symbols agree")
    return FuelVerdict(Status.UNKNOWN, detail=f"no violation certified within fuel {fuel}")


def _inconsistent(ctx, p, u, v, eq) -> FuelVerdict:
    from .certificates import Certificate

    replay = {
        "group": ctx.to_doc(),
        "pattern": presentation_doc(p),
        "u": u,
        "v": v,
        "equality": eq.certificate.replay,
    }
    return FuelVerdict(Status.NO, Certificate("inconsistency", "certified-no", replay),
                       witness=(u, v), detail=f"{u!r} and {v!r} are equal but carry different symbols")


def realize(ctx: GroupCtx, p: PatternPresentation) -> Pattern:
    """The pattern presented by ``p``; raises on inconsistent input."""
    ctx._require_decidable("realize")
    values: dict = {}
    for w, s in p.cells:
        g = ctx.canonicalize(w)
        if values.setdefault(g, s) != s:
            raise InconsistentPatternError(f"word {w!r} clashes with another word for the same element")
    return Pattern.from_dict(values)


def translate(ctx: GroupCtx, g, q: Pattern) -> Pattern:
    """gq: support gE with (gq)(gh) = q(h)."""
    return Pattern(tuple((ctx.mul(g, h), s) for h, s in q.cells))


def restrict(q: Pattern, cells: Iterable) -> Pattern:
    cells = set(cells)
    missing = [g for g in cells if g not in q]
    if missing:
        raise ValueError(f"cells {missing!r} are outside the pattern support")
    return Pattern(tuple(c for c in q.cells if c[0] in cells))


def extensions(q: Pattern, target: Iterable, alphabet) -> Iterator[Pattern]:
    """All patterns on ``target`` restricting to ``q``.

    Free cells are taken in :func:`element_key` order; the last one varies
    fastest and symbols follow alphabet order.
    """
    target = set(target)
    if not set(q.support) <= target:
        raise ValueError("target must contain the pattern support")
    free = sorted(target - set(q.support), key=element_key)
    for syms in itertools.product(alphabet, repeat=len(free)):
        yield Pattern(q.cells + tuple(zip(free, syms)))


def occurrences(ctx: GroupCtx, p: Pattern, q: Pattern) -> Iterator:
    """Elements g with gp equal to q on g·support(p), in order of discovery."""
    if not p.cells:
        yield ctx.identity
        return
    e0 = p.support[0]
    inv_e0 = ctx.inv(e0)
    for f in q.support:
        g = ctx.mul(f, inv_e0)
        if all(q._map.get(ctx.mul(g, e)) == s for e, s in p.cells):
            yield g


def occurs_in(ctx: GroupCtx, p: Pattern, q: Pattern) -> bool:
    """Does some translate of ``p`` sit inside ``q``?"""
    return next(occurrences(ctx, p, q), None) is not None


def presentation_doc(p: PatternPresentation) -> dict:
    return {"support": list(p.support), "values": [s for _, s in p.cells]}


def pattern_doc(ctx: GroupCtx, q: Pattern) -> dict:
    return presentation_doc(present(ctx, q))


def presentation_from_doc(doc) -> PatternPresentation:
    from .verdict import DocumentError

    if not isinstance(doc, dict):
        raise DocumentError("pattern document must be an object", "pattern")
    support, values = doc.get("support"), doc.get("values")
    if not isinstance(support, list) or not isinstance(values, list):
        raise DocumentError("needs parallel 'support' and 'values' arrays", "pattern")
    if len(support) != len(values):
        raise DocumentError(f"{len(support)} support words but {len(values)} values", "pattern.values")
    for i, w in enumerate(support):
        if not isinstance(w, str):
            raise DocumentError("support entries must be strings", f"pattern.support[{i}]")
    try:
        return PatternPresentation(tuple(zip(support, map(str, values))))
    except ValueError as e:
        raise DocumentError(str(e), "pattern.support") from None


def pattern_from_doc(ctx: GroupCtx, doc) -> Pattern:
    from .verdict import DocumentError

    p = presentation_from_doc(doc)
    try:
        return realize(ctx, p)
    except (InconsistentPatternError, ValueError) as e:
        raise DocumentError(str(e), "pattern") from None
