"""Sliding block codes and the SFT constructions built from them.

A :class:`LocalRule` is a memory set T and a table from B^T to A; it defines
phi(x)(g) = table(x(g t) for t in T).  On finite patterns the same rule gives
Phi(q), defined on every g with gT inside the support of q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable

from .groups import FreeGroup, GroupCtx, element_key, free_reduce
from .patterns import Pattern
from .subshift import Sft
from .verdict import AlphabetMismatchError, DocumentError


@dataclass(frozen=True)
class LocalRule:
    ctx: GroupCtx
    domain_alphabet: tuple[str, ...]
    codomain_alphabet: tuple[str, ...]
    memory: tuple
    outputs: tuple[str, ...]  # one entry per memory pattern, in itertools.product order

    def __post_init__(self):
        self.ctx._require_decidable("local rules")
        for name in ("domain_alphabet", "codomain_alphabet", "memory", "outputs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.memory:
            raise ValueError("memory set must be nonempty")
        if len(set(self.memory)) != len(self.memory):
            raise ValueError("memory set has repeated cells")
        size = len(self.domain_alphabet) ** len(self.memory)
        if len(self.outputs) != size:
            raise ValueError(f"table needs {size} entries, got {len(self.outputs)}")
        bad = set(self.outputs) - set(self.codomain_alphabet)
        if bad:
            raise AlphabetMismatchError(f"table outputs {sorted(bad)} are not in the codomain alphabet")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.domain_alphabet)})

    @classmethod
    def from_function(cls, ctx, memory, domain, codomain, fn: Callable[[tuple], str]) -> "LocalRule":
        outs = tuple(fn(t) for t in itertools.product(domain, repeat=len(memory)))
        return cls(ctx, tuple(domain), tuple(codomain), tuple(memory), outs)

    @classmethod
    def from_table(cls, ctx, memory, domain, codomain, table: dict) -> "LocalRule":
        return cls.from_function(ctx, memory, domain, codomain, lambda t: table[t])

    @classmethod
    def identity(cls, ctx, alphabet) -> "LocalRule":
        return cls.from_function(ctx, (ctx.identity,), alphabet, alphabet, lambda t: t[0])

    def __call__(self, symbols: Iterable[str]) -> str:
        k = len(self.domain_alphabet)
        idx = 0
        for s in symbols:
            idx = idx * k + self._index[s]
        return self.outputs[idx]

    @property
    def table(self) -> dict:
        keys = itertools.product(self.domain_alphabet, repeat=len(self.memory))
        return dict(zip(keys, self.outputs))

    @property
    def diameter(self) -> int:
        """Largest distance between two memory cells."""
        ctx = self.ctx
        return max(ctx.length(ctx.mul(ctx.inv(s), t)) for s in self.memory for t in self.memory)


def phi_pattern(rule: LocalRule, q: Pattern) -> Pattern:
    """Phi(q) on {g : gT inside supp(q)}, with value rule((g^-1 q)|_T)."""
    ctx = rule.ctx
    it0 = ctx.inv(rule.memory[0])
    values = q.as_dict()
    out = {}
    tried = set()
    for e in q.support:
        g = ctx.mul(e, it0)
        if g in tried:
            continue
        tried.add(g)
        cells = [ctx.mul(g, t) for t in rule.memory]
        if all(c in values for c in cells):
            out[g] = rule(values[c] for c in cells)
    return Pattern.from_dict(out)


def _preimages(rule: LocalRule, f: Pattern) -> list[Pattern]:
    """Every pattern on supp(f)·T whose Phi-image contains f."""
    ctx = rule.ctx
    region = sorted({ctx.mul(h, t) for h in f.support for t in rule.memory}, key=element_key)
    pos = {g: i for i, g in enumerate(region)}
    checks: list[list] = [[] for _ in region]
    for h, s in f.cells:
        cells = [pos[ctx.mul(h, t)] for t in rule.memory]
        checks[max(cells)].append((cells, s))
    dom = rule.domain_alphabet
    assign: list = [None] * len(region)
    found = []

    def rec(i):
        if i == len(region):
            found.append(Pattern(tuple(zip(region, assign))))
            return
        for s in dom:
            assign[i] = s
            if all(rule(assign[c] for c in cells) == want for cells, want in checks[i]):
                rec(i + 1)
        assign[i] = None

    rec(0)
    return found


def pullback_sft(rule: LocalRule, X: Sft) -> Sft:
    """phi^-1(X): forbid every pattern on F·T whose image contains a forbidden pattern on F."""
    if X.alphabet != rule.codomain_alphabet:
        raise AlphabetMismatchError("the rule's codomain alphabet differs from the target SFT's alphabet")
    if X.ctx != rule.ctx:
        raise AlphabetMismatchError("the rule and the SFT live on different groups")
    pats = [q for f in X.forbidden for q in _preimages(rule, f)]
    return Sft(rule.ctx, rule.domain_alphabet, tuple(pats))


def forbid_additionally(X: Sft, p: Pattern) -> Sft:
    """X_p: the configurations of X in which p does not appear."""
    return X.with_forbidden([p])


def build_Yp(Y: Sft, rule: LocalRule, X: Sft, p: Pattern) -> Sft:
    """Y_p = Y ∩ phi^-1(X_p)."""
    if Y.alphabet != rule.domain_alphabet:
        raise AlphabetMismatchError("the rule's domain alphabet differs from Y's alphabet")
    if Y.ctx != rule.ctx:
        raise AlphabetMismatchError("Y and the rule live on different groups")
    return Y.with_forbidden(pullback_sft(rule, forbid_additionally(X, p)).forbidden)


@dataclass(frozen=True)
class LiftStage:
    fuel: int
    kernel: tuple[str, ...]
    forbidden: tuple[Pattern, ...]
    new: tuple[Pattern, ...]


class FreeLift:
    """Forbidden patterns over the free group F(S) cutting out the lift of an SFT.

    The lift of Z consists of the configurations z∘pi.  Stage ``f`` forbids
    Z's patterns read on reduced words, plus the disagreement patterns
    {1: s, w: t} (s != t) for every nontrivial reduced word w of length at most
    ``f`` certified trivial in G within fuel ``f``.  Stages only grow.

    Iterating yields stages 0, 1, 2, ... ; each iterator is a separate stream.
    """

    def __init__(self, Z: Sft):
        self.Z = Z
        self.free = FreeGroup.on(Z.ctx.generators)

    def base_patterns(self) -> tuple[Pattern, ...]:
        ctx = self.Z.ctx
        out = []
        for f in self.Z.forbidden:
            words = [free_reduce(ctx.word_of(g) if ctx.decidable else g) for g in f.support]
            out.append(Pattern.from_dict(dict(zip(words, f.symbols))))
        return tuple(out)

    def kernel(self, fuel: int) -> tuple[str, ...]:
        G = self.Z.ctx
        found = [w for w in self.free.ball(fuel) if w and G.equals_semi(w, "", fuel).yes]
        return tuple(found)

    def stage(self, fuel: int, previous: "LiftStage | None" = None) -> LiftStage:
        kern = self.kernel(fuel)
        fibres = [Pattern((("", s), (w, t))) for w in kern
                  for s in self.Z.alphabet for t in self.Z.alphabet if s != t]
        forb = Sft(self.free, self.Z.alphabet, self.base_patterns() + tuple(fibres)).forbidden
        old = set(previous.forbidden) if previous else set()
        return LiftStage(fuel, kern, forb, tuple(f for f in forb if f not in old))

    def sft(self, fuel: int) -> Sft:
        return Sft(self.free, self.Z.alphabet, self.stage(fuel).forbidden)

    def __iter__(self):
        prev = None
        for f in itertools.count():
            prev = self.stage(f, prev)
            yield prev


def lift_to_free(Z: Sft) -> FreeLift:
    return FreeLift(Z)


def rule_doc(rule: LocalRule) -> dict:
    ctx = rule.ctx
    return {
        "memory": [ctx.word_of(t) for t in rule.memory],
        "domain_alphabet": list(rule.domain_alphabet),
        "codomain_alphabet": list(rule.codomain_alphabet),
        "table": {"".join(k): v for k, v in rule.table.items()},
    }


def rule_from_doc(doc, ctx: GroupCtx) -> LocalRule:
    if not isinstance(doc, dict):
        raise DocumentError("rule document must be an object", "rule")
    for key in ("memory", "domain_alphabet", "codomain_alphabet", "table"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}", "rule")
    try:
        memory = tuple(ctx.canonicalize(w) for w in doc["memory"])
    except ValueError as e:
        raise DocumentError(str(e), "rule.memory") from None
    dom = tuple(str(s) for s in doc["domain_alphabet"])
    cod = tuple(str(s) for s in doc["codomain_alphabet"])
    table = doc["table"]
    if not isinstance(table, dict):
        raise DocumentError("table must map concatenated memory symbols to outputs", "rule.table")
    keys = {}
    for t in itertools.product(dom, repeat=len(memory)):
        k = "".join(t)
        if k in keys:
            raise DocumentError(f"table key {k!r} is ambiguous for this alphabet", "rule.table")
        keys[k] = t
    missing = [k for k in keys if k not in table]
    if missing:
        raise DocumentError(f"table has no entry for {missing[0]!r}", "rule.table")
    extra = [k for k in table if k not in keys]
    if extra:
        raise DocumentError(f"unexpected table key {extra[0]!r}", "rule.table")
    try:
        return LocalRule.from_function(ctx, memory, dom, cod, lambda t: str(table["".join(t)]))
    except (ValueError, AlphabetMismatchError) as e:
        raise DocumentError(str(e), "rule") from None
