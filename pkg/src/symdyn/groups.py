"""Finitely generated groups given by a generating set closed under inverses.

Words are plain strings. Each generator is a single lowercase letter and its
inverse is the matching uppercase letter, so ``"abA"`` is a b a^-1 and the empty
string is the identity.

:class:`ZdGroup` stores elements of Z^d as integer tuples and
:class:`FreeGroup` stores freely reduced words.  A :class:`PresentedGroup`
<S | R> has only a semi-decidable word problem: equality is certified by a
bounded breadth-first search over relator insertions and deletions, and is
never refuted.
"""

from __future__ import annotations

import functools
import itertools
import string
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .verdict import FuelVerdict, Status, UndecidableContextError

Element = Hashable


def invert_word(w: str) -> str:
    return w[::-1].swapcase()


def free_reduce(w: str) -> str:
    out: list[str] = []
    for c in w:
        if out and out[-1] == c.swapcase():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def element_key(g):
    """Total order on elements: word length first, then the canonical form.

    Sorting a ball with this key lists B_0, then B_1 \\ B_0, and so on.
    """
    if isinstance(g, tuple):
        return (sum(abs(x) for x in g), g)
    return (len(g), g)


def _check_generators(gens: tuple[str, ...]) -> None:
    if len(set(gens)) != len(gens):
        raise ValueError(f"duplicate generator names in {gens!r}")
    for g in gens:
        if len(g) != 1 or g not in string.ascii_lowercase:
            raise ValueError(f"generator names must be single lowercase letters, got {g!r}")


class GroupCtx:
    """Behaviour shared by all group kinds; subclasses are frozen dataclasses."""

    kind: str = ""
    decidable: bool = True
    generators: tuple[str, ...]

    @property
    def letters(self) -> tuple[str, ...]:
        """The symmetric generating set S, ordered a, A, b, B, ..."""
        return tuple(c for g in self.generators for c in (g, g.upper()))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def check_word(self, w: str) -> str:
        allowed = set(self.letters)
        for c in w:
            if c not in allowed:
                raise ValueError(f"letter {c!r} of word {w!r} is not in {''.join(self.letters)}")
        return w

    def words_upto(self, n: int) -> list[str]:
        """W_n: every word of length at most ``n``, in shortlex order."""
        if n < 0:
            raise ValueError("radius must be non-negative")
        return ["".join(t) for k in range(n + 1) for t in itertools.product(self.letters, repeat=k)]

    def _require_decidable(self, what: str) -> None:
        if not self.decidable:
            raise UndecidableContextError(
                f"{what} needs a decidable word problem; {self.kind} groups only support equals_semi"
            )

    # The decidable API; PresentedGroup overrides these with errors.

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def canonicalize(self, w: str) -> Element:
        raise NotImplementedError

    def word_of(self, g: Element) -> str:
        raise NotImplementedError

    def mul(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def inv(self, g: Element) -> Element:
        raise NotImplementedError

    def length(self, g: Element) -> int:
        raise NotImplementedError

    def act(self, g: Element, cells: Iterable[Element]) -> list[Element]:
        """gF for a finite set F."""
        return [self.mul(g, h) for h in cells]

    def ball(self, n: int) -> list[Element]:
        """B_n, sorted by :func:`element_key`."""
        self._require_decidable("ball")
        if n < 0:
            raise ValueError("radius must be non-negative")
        return sorted(self._ball_set(n), key=element_key)

    @functools.lru_cache(maxsize=64)
    def _ball_set(self, n: int) -> frozenset:
        return frozenset(self.neighbourhood([self.identity], n))

    def neighbourhood(self, cells: Iterable[Element], r: int) -> list[Element]:
        """F·B_r listed layer by layer: F first, then cells at distance 1, 2, ...

        Each layer is sorted by :func:`element_key`.
        """
        self._require_decidable("neighbourhood")
        layer = sorted(set(cells), key=element_key)
        seen = set(layer)
        out = list(layer)
        gens = [self.canonicalize(c) for c in self.letters]
        for _ in range(r):
            nxt = {self.mul(x, s) for x in layer for s in gens} - seen
            layer = sorted(nxt, key=element_key)
            seen.update(layer)
            out.extend(layer)
        return out

    def equals_semi(self, u: str, v: str, fuel: int = 0) -> FuelVerdict:
        """Try to certify that ``u`` and ``v`` name the same element.

        Decidable groups always answer YES or NO.  Presented groups answer YES
        with a replayable rewriting sequence, or UNKNOWN.
        """
        from .certificates import Certificate

        self.check_word(u)
        self.check_word(v)
        cu, cv = self.canonicalize(u), self.canonicalize(v)
        replay = {"group": self.to_doc(), "u": u, "v": v}
        if cu == cv:
            return FuelVerdict(Status.YES, Certificate("word-equality", "certified-yes", replay))
        return FuelVerdict(Status.NO, Certificate("word-inequality", "certified-no", replay))

    def ball_approx(self, n: int, fuel: int = 0) -> list[list[str]]:
        """Partition of W_n into classes of words certified equal at ``fuel``.

        Classes are the connected components of the certified-equality relation,
        so raising the fuel can only merge them.
        """
        words = self.words_upto(n)
        if self.decidable:
            classes: dict = {}
            for w in words:
                classes.setdefault(self.canonicalize(w), []).append(w)
            return list(classes.values())
        parent = list(range(len(words)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(len(words)), 2):
            ri, rj = find(i), find(j)
            if ri != rj and self.equals_semi(words[i], words[j], fuel).yes:
                parent[max(ri, rj)] = min(ri, rj)
        classes = {}
        for i, w in enumerate(words):
            classes.setdefault(find(i), []).append(w)
        return list(classes.values())

    def to_doc(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ZdGroup(GroupCtx):
    d: int
    generators: tuple[str, ...] = ()

    kind = "zd"

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("Z^d needs d >= 1")
        if not self.generators:
            object.__setattr__(self, "generators", tuple(string.ascii_lowercase[: self.d]))
        _check_generators(self.generators)
        if len(self.generators) != self.d:
            raise ValueError(f"Z^{self.d} needs {self.d} generator names")

    @property
    def identity(self):
        return (0,) * self.d

    def canonicalize(self, w):
        v = [0] * self.d
        for c in self.check_word(w):
            i = self.generators.index(c.lower())
            v[i] += 1 if c.islower() else -1
        return tuple(v)

    def word_of(self, g):
        return "".join((a if x >= 0 else a.upper()) * abs(x) for a, x in zip(self.generators, g))

    def mul(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g):
        return tuple(-x for x in g)

    def length(self, g):
        return sum(abs(x) for x in g)

    def to_doc(self):
        doc = {"type": "zd", "d": self.d}
        if self.generators != tuple(string.ascii_lowercase[: self.d]):
            doc["generators"] = list(self.generators)
        return doc


@dataclass(frozen=True)
class FreeGroup(GroupCtx):
    rank_: int
    generators: tuple[str, ...] = ()

    kind = "free"

    def __post_init__(self):
        if self.rank_ < 1:
            raise ValueError("free group needs rank >= 1")
        if not self.generators:
            object.__setattr__(self, "generators", tuple(string.ascii_lowercase[: self.rank_]))
        _check_generators(self.generators)
        if len(self.generators) != self.rank_:
            raise ValueError(f"F_{self.rank_} needs {self.rank_} generator names")

    @classmethod
    def on(cls, generators: Iterable[str]) -> "FreeGroup":
        gens = tuple(generators)
        return cls(len(gens), gens)

    @property
    def identity(self):
        return ""

    def canonicalize(self, w):
        return free_reduce(self.check_word(w))

    def word_of(self, g):
        return g

    def mul(self, g, h):
        return free_reduce(g + h)

    def inv(self, g):
        return invert_word(g)

    def length(self, g):
        return len(g)

    def to_doc(self):
        doc = {"type": "free", "rank": self.rank_}
        if self.generators != tuple(string.ascii_lowercase[: self.rank_]):
            doc["generators"] = list(self.generators)
        return doc


@dataclass(frozen=True)
class PresentedGroup(GroupCtx):
    generators: tuple[str, ...]
    relators: tuple[str, ...] = field(default=())

    kind = "presented"
    decidable = False

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        _check_generators(self.generators)
        for r in self.relators:
            self.check_word(r)

    def canonicalize(self, w):
        self._require_decidable("canonicalize")

    def word_of(self, g):
        self._require_decidable("word_of")

    def mul(self, g, h):
        self._require_decidable("mul")

    def inv(self, g):
        self._require_decidable("inv")

    def length(self, g):
        self._require_decidable("length")

    @property
    def identity(self):
        self._require_decidable("identity")

    @functools.cached_property
    def rewrite_words(self) -> tuple[str, ...]:
        """Words that one step may insert or delete: cyclic conjugates of the
        relators and their inverses, plus the trivial words xX."""
        found = {c + c.swapcase() for c in self.letters}
        for r in self.relators:
            for s in (r, invert_word(r)):
                found.update(s[i:] + s[:i] for i in range(len(s)))
        found.discard("")
        return tuple(sorted(found, key=lambda s: (len(s), s)))

    def rewrites(self, w: str):
        """One-step rewrites of ``w`` as ``((op, position, word), result)`` pairs, in a fixed order."""
        for r in self.rewrite_words:
            i = w.find(r)
            while i != -1:
                yield ("delete", i, r), w[:i] + w[i + len(r):]
                i = w.find(r, i + 1)
        for i in range(len(w) + 1):
            for r in self.rewrite_words:
                yield ("insert", i, r), w[:i] + r + w[i:]

    def _explore(self, start: str, depth: int, stop=None) -> tuple[dict, str | None]:
        """Breadth-first search from ``start``; returns parent links and the first hit of ``stop``."""
        parents: dict[str, tuple] = {start: (None, None)}
        if stop is not None and stop(start):
            return parents, start
        frontier = deque([start])
        for _ in range(depth):
            nxt = deque()
            for w in frontier:
                for move, z in self.rewrites(w):
                    if z in parents:
                        continue
                    parents[z] = (w, move)
                    if stop is not None and stop(z):
                        return parents, z
                    nxt.append(z)
            frontier = nxt
        return parents, None

    @functools.lru_cache(maxsize=16)
    def _identity_region(self, depth: int) -> dict:
        return self._explore("", depth)[0]

    def equals_semi(self, u, v, fuel=0):
        from .certificates import Certificate

        self.check_word(u)
        self.check_word(v)
        w = u + invert_word(v)
        back = self._identity_region(fuel // 2)
        fwd, meet = self._explore(w, (fuel + 1) // 2, stop=back.__contains__)
        if meet is None:
            return FuelVerdict(Status.UNKNOWN, witness=w,
                               detail=f"no derivation of {w!r} to the identity within {fuel} steps")
        steps = []
        path = []
        z = meet
        while fwd[z][0] is not None:
            path.append(fwd[z][1])
            z = fwd[z][0]
        steps.extend(reversed(path))
        z = meet
        while back[z][0] is not None:
            op, i, r = back[z][1]
            steps.append(("delete" if op == "insert" else "insert", i, r))
            z = back[z][0]
        replay = {"group": self.to_doc(), "u": u, "v": v, "steps": [list(s) for s in steps]}
        return FuelVerdict(Status.YES, Certificate("word-equality", "certified-yes", replay),
                           detail=f"{len(steps)} rewriting steps")

    def apply_steps(self, w: str, steps) -> str:
        """Replay a rewriting sequence, raising ValueError on an illegal step."""
        allowed = set(self.rewrite_words)
        for op, i, r in steps:
            if r not in allowed:
                raise ValueError(f"{r!r} is not a relator conjugate or trivial word")
            if not isinstance(i, int) or not 0 <= i <= len(w):
                raise ValueError(f"position {i!r} out of range for {w!r}")
            if op == "delete":
                if w[i:i + len(r)] != r:
                    raise ValueError(f"{r!r} does not occur at {i} in {w!r}")
                w = w[:i] + w[i + len(r):]
            elif op == "insert":
                w = w[:i] + r + w[i:]
            else:
                raise ValueError(f"unknown rewriting operation {op!r}")
        return w

    def to_doc(self):
        return {"type": "presented", "generators": list(self.generators), "relators": list(self.relators)}


def group_from_doc(doc) -> GroupCtx:
    from .verdict import DocumentError

    if not isinstance(doc, dict) or "type" not in doc:
        raise DocumentError("group document must be an object with a 'type' field", "group")
    kind = doc["type"]
    gens = tuple(doc.get("generators", ()))
    try:
        if kind == "zd":
            return ZdGroup(int(doc["d"]), gens)
        if kind == "free":
            return FreeGroup(int(doc["rank"]), gens)
        if kind == "presented":
            return PresentedGroup(gens, tuple(doc.get("relators", ())))
    except KeyError as e:
        raise DocumentError(f"missing field {e.args[0]!r}", "group") from None
    except (TypeError, ValueError) as e:
        raise DocumentError(str(e), "group") from None
    raise DocumentError(f"unknown group type {kind!r}", "group.type")
