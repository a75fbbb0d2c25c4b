"""Semi-decision procedures on top of the SFT engine.

Non-membership is certified by sweeping the margin.  Membership of p in a
factor X = phi(Y) is certified when some pattern of a fixed, certified
language of Y dies in Y_p.  A decidable language also yields a computable
configuration, read off greedily.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import refute
from .certificates import Certificate
from .groups import GroupCtx
from .morphism import LocalRule, build_Yp, rule_doc
from .oned import debruijn, in_language_1d
from .patterns import Pattern, pattern_doc
from .subshift import LangApprox, Sft, admissibility_problem, locally_admissible, sft_doc
from .verdict import (EmptySubshiftError, FuelVerdict, OracleViolationError, Status,
                      UncertifiedLanguageError)


def nonmembership_semidecide(Z: Sft, q: Pattern, max_margin: int) -> FuelVerdict:
    """YES (q is outside the language) at the first margin where no extension survives."""
    last = None
    for r in range(max_margin + 1):
        v = locally_admissible(Z, q, r)
        if v.no:
            return FuelVerdict(Status.YES, v.certificate, detail=f"refuted at margin {r}")
        last = v
    return FuelVerdict(Status.UNKNOWN, witness=last.witness if last else None,
                       detail=f"extensions survive up to margin {max_margin}")


def proper_containment_detect(Y: Sft, rule: LocalRule, X: Sft, k: int, certified_Lk, p: Pattern,
                              budget: int, override: bool = False) -> FuelVerdict:
    """Certify p in L(X) by finding some q_i of L_{B_k}(Y) that is not in L(Y_p).

    ``certified_Lk`` must be an exact :class:`LangApprox` for Y on B_k; a plain
    list of patterns is only accepted with ``override`` and the result is then
    flagged unsound.  The q_i are tried round-robin, each one margin deeper per
    round, up to ``budget``.  UNKNOWN says nothing about p unless X is
    projectively isolated.
    """
    if isinstance(certified_Lk, LangApprox):
        if not certified_Lk.exact and not override:
            raise UncertifiedLanguageError("the language list is an upper approximation, not certified")
        if certified_Lk.n != k:
            raise ValueError(f"language is on B_{certified_Lk.n}, expected B_{k}")
        qs = certified_Lk.sorted(Y.alphabet)
        provenance = "exact" if certified_Lk.exact else "upper approximation (unsound override)"
    else:
        if not override:
            raise UncertifiedLanguageError("user-supplied language lists need an explicit override")
        qs = list(certified_Lk)
        provenance = "user-supplied (unsound override)"
    Yp = build_Yp(Y, rule, X, p)
    for r in range(budget + 1):
        for i, q in enumerate(qs):
            assignment, nodes = refute.search(admissibility_problem(Yp, q, r))
            if assignment is not None:
                continue
            ctx = Y.ctx
            replay = {
                "y": sft_doc(Y),
                "rule": rule_doc(rule),
                "x": sft_doc(X),
                "p": pattern_doc(ctx, p),
                "k": k,
                "certified_language": [pattern_doc(ctx, t) for t in qs],
                "provenance": provenance,
                "index": i,
                "q": pattern_doc(ctx, q),
                "margin": r,
                "y_p": sft_doc(Yp),
                "refutation": nodes,
            }
            detail = f"q_{i} dies in Y_p at margin {r}"
            if provenance != "exact":
                detail += "; UNSOUND: language list not certified"
            return FuelVerdict(Status.YES, Certificate("proper-containment", "certified-yes", replay),
                               witness=q, detail=detail)
    return FuelVerdict(Status.UNKNOWN, detail=f"all {len(qs)} patterns survive up to margin {budget}")


@dataclass
class LanguageOracle:
    """Membership in a language that is closed under restriction."""

    query: Callable[[Pattern], bool]
    source: str

    def __call__(self, q: Pattern) -> bool:
        return bool(self.query(q))

    @classmethod
    def exact_1d(cls, X: Sft) -> "LanguageOracle":
        return cls(lambda q: in_language_1d(X, q), "exact_1d")

    @classmethod
    def from_patterns(cls, patterns) -> "LanguageOracle":
        """In iff q is a restriction of one of the listed patterns."""
        listed = [p.as_dict() for p in patterns]

        def query(q):
            return any(all(d.get(g) == s for g, s in q.cells) for d in listed)

        return cls(query, "user_supplied_list")

    @classmethod
    def external(cls, fn: Callable[[Pattern], bool]) -> "LanguageOracle":
        return cls(fn, "external")


def greedy_point_extract(oracle: LanguageOracle, n: int, ctx: GroupCtx, alphabet) -> Pattern:
    """Fill B_n cell by cell with the least symbol the oracle still accepts.

    Cells come in ball order (B_0, then B_1 minus B_0, ...), so the result for
    n is the restriction of the result for n+1.
    """
    if not oracle(Pattern(())):
        raise EmptySubshiftError("the oracle rejects the empty pattern")
    cells: list = []
    for g in ctx.ball(n):
        for s in alphabet:
            trial = Pattern(tuple(cells) + ((g, s),))
            if oracle(trial):
                cells.append((g, s))
                break
        else:
            raise OracleViolationError(f"no symbol extends the accepted pattern at cell {g!r}")
    return Pattern(tuple(cells))


def medvedev_zero_witness(X: Sft, n: int):
    """Prefix on B_n of a computable configuration of X (over Z), with a certificate."""
    if not X.is_1d:
        raise ValueError("zero-degree witnesses are computed over Z only")
    if debruijn(X).empty:
        raise EmptySubshiftError("the SFT is empty: its de Bruijn graph trims to nothing")
    q = greedy_point_extract(LanguageOracle.exact_1d(X), n, X.ctx, X.alphabet)
    replay = {"sft": sft_doc(X), "n": n, "pattern": pattern_doc(X.ctx, q)}
    return q, Certificate("point-prefix", "certified-yes", replay)


def check_greedy_prefix(X: Sft, q: Pattern, n: int) -> None:
    """Replay the greedy choices for ``q`` against the exact oracle; raise ValueError on mismatch."""
    if not X.is_1d:
        raise ValueError("point-prefix certificates are for Z")
    ball = X.ctx.ball(n)
    if set(q.support) != set(ball):
        raise ValueError(f"pattern support is not B_{n}")
    cells: list = []
    for g in ball:
        chosen = q[g]
        if chosen not in X.alphabet:
            raise ValueError(f"symbol {chosen!r} is not in the alphabet")
        for s in X.alphabet:
            ok = in_language_1d(X, Pattern(tuple(cells) + ((g, s),)))
            if s == chosen:
                if not ok:
                    raise ValueError(f"symbol at {g!r} leaves the language")
                break
            if ok:
                raise ValueError(f"cell {g!r} is not the least admissible symbol")
        cells.append((g, chosen))
