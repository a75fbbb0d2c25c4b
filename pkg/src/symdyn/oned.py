"""Exact languages of SFTs over Z through their de Bruijn graphs."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .patterns import Pattern, from_word
from .subshift import LangApprox, Sft


@dataclass(frozen=True)
class DeBruijnGraph:
    """Vertices are (window-1)-blocks, edges are window-blocks, both free of forbidden patterns.

    Symbols are alphabet indices.  ``trimmed_*`` keep only what lies on a
    bi-infinite path; the language of the SFT is the set of words read along
    trimmed paths.
    """

    window: int
    vertices: frozenset
    edges: frozenset
    trimmed_vertices: frozenset
    trimmed_edges: frozenset
    trim_rounds: int

    @property
    def empty(self) -> bool:
        return not self.trimmed_vertices


def _offsets(X: Sft) -> list[list[tuple[int, int]]]:
    index = {s: i for i, s in enumerate(X.alphabet)}
    out = []
    for f in X.forbidden:
        lo = min(g[0] for g in f.support)
        out.append([(g[0] - lo, index[s]) for g, s in f.cells])
    return out


def _clean(block: tuple, forb: list) -> bool:
    for f in forb:
        span = max(o for o, _ in f)
        for start in range(len(block) - span):
            if all(block[start + o] == s for o, s in f):
                return False
    return True


def _require_z(X: Sft) -> None:
    if not X.is_1d:
        raise ValueError(f"exact languages need the group Z, got {X.ctx!r}")


@functools.lru_cache(maxsize=512)
def debruijn(X: Sft) -> DeBruijnGraph:
    _require_z(X)
    forb = _offsets(X)
    window = max([2] + [max(o for o, _ in f) + 1 for f in forb])
    k = len(X.alphabet)
    vertices = frozenset(b for b in itertools.product(range(k), repeat=window - 1) if _clean(b, forb))
    edges = frozenset(b for b in itertools.product(range(k), repeat=window) if _clean(b, forb))
    tv, te = set(vertices), set(edges)
    rounds = 0
    while True:
        heads = {e[1:] for e in te}
        tails = {e[:-1] for e in te}
        keep = tv & heads & tails
        kept_edges = {e for e in te if e[:-1] in keep and e[1:] in keep}
        if keep == tv and kept_edges == te:
            break
        tv, te = keep, kept_edges
        rounds += 1
    return DeBruijnGraph(window, vertices, edges, frozenset(tv), frozenset(te), rounds)


@functools.lru_cache(maxsize=2048)
def words_1d(X: Sft, length: int) -> frozenset:
    """Words of the given length in the language of X, as tuples of symbols."""
    G = debruijn(X)
    if length < 0:
        raise ValueError("length must be non-negative")
    block = G.window - 1
    if length <= block:
        found = {v[:length] for v in G.trimmed_vertices}
    else:
        succ: dict = {}
        for e in sorted(G.trimmed_edges):
            succ.setdefault(e[:-1], []).append(e[1:])
        found = set()
        stack = [(v, v) for v in G.trimmed_vertices]
        while stack:
            word, v = stack.pop()
            if len(word) == length:
                found.add(word)
                continue
            for w in succ.get(v, ()):
                stack.append((word + w[-1:], w))
    return frozenset(tuple(X.alphabet[i] for i in w) for w in found)


@functools.lru_cache(maxsize=1024)
def language_exact_1d(X: Sft, n: int) -> LangApprox:
    """The exact language of X on B_n = {-n, ..., n}."""
    _require_z(X)
    pats = frozenset(from_word(w, -n) for w in words_1d(X, 2 * n + 1))
    return LangApprox(n, None, pats, exact=True)


def in_language_1d(X: Sft, q: Pattern) -> bool:
    """Is ``q`` (any finite support in Z) a pattern of some configuration of X?"""
    G = debruijn(X)
    if G.empty:
        return False
    if not q.cells:
        return True
    index = {s: i for i, s in enumerate(X.alphabet)}
    want = {g[0]: index[s] for g, s in q.cells}
    lo, hi = min(want), max(want)
    block = G.window - 1

    def fits(v, start):
        return all(want.get(start + j, c) == c for j, c in enumerate(v))

    states = {v for v in G.trimmed_vertices if fits(v, lo)}
    succ: dict = {}
    for e in G.trimmed_edges:
        succ.setdefault(e[:-1], []).append(e[1:])
    j = lo
    while states and j + block - 1 < hi:
        j += 1
        states = {w for v in states for w in succ.get(v, ()) if want.get(j + block - 1, w[-1]) == w[-1]}
    return bool(states)
