"""Subshifts of finite type, local admissibility, languages and the metric D."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import refute
from .groups import GroupCtx, ZdGroup, element_key, group_from_doc
from .patterns import (Pattern, PatternPresentation, consistency_check, occurs_in, pattern_doc,
                       presentation_doc, presentation_from_doc, realize, translate)
from .verdict import AlphabetMismatchError, DocumentError, FuelVerdict, Status


def _normal_form(ctx: GroupCtx, f: Pattern) -> Pattern:
    """The translate of ``f`` with the smallest radius; ties broken by cell order."""
    best = None
    for e in f.support:
        t = translate(ctx, ctx.inv(e), f)
        key = (max(ctx.length(g) for g in t.support), [element_key(g) for g in t.support], t.symbols)
        if best is None or key < best[0]:
            best = (key, t)
    return best[1]


@dataclass(frozen=True)
class Sft:
    """X_F for a finite set F of forbidden patterns.

    Over decidable groups the forbidden patterns are realized and stored in a
    normal form (translated to minimal radius, deduplicated, sorted).  Over a
    presented group they stay word-supported and only :func:`symdyn.morphism.lift_to_free`
    can use them.
    """

    ctx: GroupCtx
    alphabet: tuple[str, ...]
    forbidden: tuple[Pattern, ...] = ()

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet or len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet must be a nonempty list of distinct symbols")
        object.__setattr__(self, "alphabet", alphabet)
        pats = []
        for f in self.forbidden:
            if not f.cells:
                raise ValueError("the empty pattern cannot be forbidden")
            bad = set(f.symbols) - set(alphabet)
            if bad:
                raise AlphabetMismatchError(f"forbidden pattern uses symbols {sorted(bad)} outside the alphabet")
            pats.append(_normal_form(self.ctx, f) if self.ctx.decidable else f)
        order = {s: i for i, s in enumerate(alphabet)}
        pats = sorted(set(pats), key=lambda f: (len(f), [(element_key(g), order[s]) for g, s in f.cells]))
        object.__setattr__(self, "forbidden", tuple(pats))

    @property
    def range(self) -> int:
        """Smallest m with every forbidden support inside B_m (0 for a full shift)."""
        if not self.forbidden:
            return 0
        if self.ctx.decidable:
            return max(self.ctx.length(g) for f in self.forbidden for g in f.support)
        return max(len(w) for f in self.forbidden for w in f.support)

    @property
    def is_1d(self) -> bool:
        return isinstance(self.ctx, ZdGroup) and self.ctx.d == 1

    def with_forbidden(self, extra) -> "Sft":
        return Sft(self.ctx, self.alphabet, self.forbidden + tuple(extra))

    def __repr__(self):
        return f"Sft({self.ctx!r}, alphabet={list(self.alphabet)}, {len(self.forbidden)} forbidden, range={self.range})"


@dataclass(frozen=True)
class LangApprox:
    """Patterns on B_n; exactly the language when ``exact``, otherwise a superset."""

    n: int
    r: int | None
    patterns: frozenset
    exact: bool

    def __len__(self):
        return len(self.patterns)

    def __contains__(self, q):
        return q in self.patterns

    def sorted(self, alphabet) -> list[Pattern]:
        order = {s: i for i, s in enumerate(alphabet)}
        return sorted(self.patterns, key=lambda q: [order[s] for s in q.symbols])


def sft_build(ctx: GroupCtx, alphabet, presentations, fuel: int = 0) -> Sft:
    """Build an SFT from forbidden pattern presentations.

    Every presentation must be certified consistent.  Over presented groups the
    presentations are kept as word-supported patterns.
    """
    pats = []
    for k, p in enumerate(presentations):
        v = consistency_check(ctx, p, fuel)
        if v.no:
            raise DocumentError(f"inconsistent forbidden pattern: {v.detail}", f"forbidden[{k}]")
        if v.unknown:
            raise DocumentError(f"consistency not certified within fuel {fuel}; raise the fuel or simplify",
                                f"forbidden[{k}]")
        if ctx.decidable:
            pats.append(realize(ctx, p))
        else:
            pats.append(Pattern(p.cells))
    return Sft(ctx, tuple(alphabet), tuple(pats))


def _check_symbols(X: Sft, q: Pattern) -> None:
    bad = set(q.symbols) - set(X.alphabet)
    if bad:
        raise AlphabetMismatchError(f"pattern uses symbols {sorted(bad)} outside the alphabet {list(X.alphabet)}")


def admissibility_problem(X: Sft, q: Pattern, r: int) -> refute.Problem:
    """The search problem behind :func:`locally_admissible`.

    The region is supp(q)·B_r listed layer by layer; the empty pattern is
    treated as a free cell at the identity.
    """
    ctx = X.ctx
    ctx._require_decidable("local admissibility")
    _check_symbols(X, q)
    core = q.support or (ctx.identity,)
    region = ctx.neighbourhood(core, r)
    return refute.build_problem(ctx, X.alphabet, X.forbidden, q.as_dict(), region)


def locally_admissible(X: Sft, q: Pattern, r: int = 0) -> FuelVerdict:
    """Does ``q`` extend to supp(q)·B_r without a forbidden pattern inside?

    NO certifies that q is not in the language of X and carries a
    non-membership certificate.  UNKNOWN carries the first surviving extension.
    """
    from .certificates import Certificate

    problem = admissibility_problem(X, q, r)
    assignment, nodes = refute.search(problem)
    if assignment is None:
        replay = {"sft": sft_doc(X), "pattern": pattern_doc(X.ctx, q), "margin": r, "refutation": nodes}
        return FuelVerdict(Status.NO, Certificate("non-membership", "certified-no", replay),
                           detail=f"no extension at margin {r}")
    witness = Pattern(tuple((g, X.alphabet[s]) for g, s in zip(problem.cells, assignment)))
    return FuelVerdict(Status.UNKNOWN, witness=witness, detail=f"an extension survives at margin {r}")


def _ball_candidates(X: Sft, n: int) -> list[Pattern]:
    ctx = X.ctx
    region = ctx.ball(n)
    problem = refute.build_problem(ctx, X.alphabet, X.forbidden, {}, region)
    return [Pattern(tuple((g, X.alphabet[s]) for g, s in zip(region, sol)))
            for sol in refute.solutions(problem)]


def language_upper(X: Sft, n: int, r: int = 0) -> LangApprox:
    """Patterns on B_n that are locally admissible at margin ``r`` (a superset of the language)."""
    X.ctx._require_decidable("language_upper")
    cands = _ball_candidates(X, n)
    if r > 0:
        cands = [q for q in cands if refute.search(admissibility_problem(X, q, r))[0] is not None]
    return LangApprox(n, r, frozenset(cands), exact=False)


def language(X: Sft, n: int, r: int = 0) -> LangApprox:
    """Exact language on B_n over Z, otherwise the margin-``r`` upper approximation."""
    if X.is_1d:
        from .oned import language_exact_1d

        return language_exact_1d(X, n)
    return language_upper(X, n, r)


@dataclass(frozen=True)
class MetricResult:
    value: Fraction
    agree_radius: int | None
    nmax: int
    certified: bool
    upto_nmax: bool

    def __str__(self):
        s = str(self.value)
        if self.upto_nmax:
            s += f" (languages agree up to radius {self.nmax})"
        if not self.certified:
            s += " (from upper approximations, not certified)"
        return s


def metric_D(X: Sft, Y: Sft, nmax: int, r: int = 2) -> MetricResult:
    """D(X, Y) = 2^-n* with n* the largest radius <= nmax where the languages agree.

    Disagreement already at B_0 gives 1; agreement through ``nmax`` gives 0,
    flagged as a finite-evidence statement.  Exact over Z; elsewhere computed
    from margin-``r`` upper approximations and marked uncertified.
    """
    if X.alphabet != Y.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {list(X.alphabet)} vs {list(Y.alphabet)}")
    if X.ctx != Y.ctx:
        raise AlphabetMismatchError("subshifts live on different groups")
    exact = X.is_1d
    agree = None
    for n in range(nmax + 1):
        if language(X, n, r).patterns != language(Y, n, r).patterns:
            break
        agree = n
    if agree is None:
        value = Fraction(1)
    elif agree == nmax:
        value = Fraction(0)
    else:
        value = Fraction(1, 2 ** agree)
    return MetricResult(value, agree, nmax, exact, agree == nmax)


def subset_semidecide(Y: Sft, X: Sft, r: int = 0) -> FuelVerdict:
    """Semi-decide Y ⊆ X.

    YES when no locally admissible (margin ``r``) pattern of Y on B_m contains a
    forbidden pattern of X, m being the range of X.  NO over Z when an exact
    pattern of Y contains one.
    """
    if X.alphabet != Y.alphabet:
        raise AlphabetMismatchError(f"alphabets differ: {list(Y.alphabet)} vs {list(X.alphabet)}")
    ctx = Y.ctx
    m = X.range
    offending = [q for q in language_upper(Y, m, r).patterns
                 if any(occurs_in(ctx, f, q) for f in X.forbidden)]
    if not offending:
        return FuelVerdict(Status.YES, detail=f"every admissible B_{m} pattern of Y avoids X's forbidden patterns")
    if Y.is_1d:
        from .oned import language_exact_1d

        exact = language_exact_1d(Y, m).patterns
        for q in sorted(offending, key=lambda q: q.symbols):
            if q in exact:
                return FuelVerdict(Status.NO, witness=q, detail="a pattern of Y contains a forbidden pattern of X")
    return FuelVerdict(Status.UNKNOWN, witness=offending[0],
                       detail=f"{len(offending)} admissible patterns contain forbidden patterns of X")


def sft_doc(X: Sft) -> dict:
    if X.ctx.decidable:
        forb = [pattern_doc(X.ctx, f) for f in X.forbidden]
    else:
        forb = [presentation_doc(PatternPresentation(f.cells)) for f in X.forbidden]
    return {"group": X.ctx.to_doc(), "alphabet": list(X.alphabet), "forbidden": forb}


def sft_from_doc(doc, fuel: int = 0, group: GroupCtx | None = None) -> Sft:
    if not isinstance(doc, dict):
        raise DocumentError("SFT document must be an object", "sft")
    if "tiles" in doc:
        return wang_sft(doc["tiles"])
    if "group" in doc:
        ctx = group_from_doc(doc["group"])
    elif group is not None:
        ctx = group
    else:
        raise DocumentError("missing 'group'", "sft")
    alphabet = doc.get("alphabet")
    if not isinstance(alphabet, list) or not alphabet:
        raise DocumentError("needs a nonempty 'alphabet' list", "sft.alphabet")
    alphabet = [str(a) for a in alphabet]
    forbidden = doc.get("forbidden", [])
    if not isinstance(forbidden, list):
        raise DocumentError("'forbidden' must be a list", "sft.forbidden")
    pres = []
    for k, fd in enumerate(forbidden):
        try:
            pres.append(presentation_from_doc(fd))
        except DocumentError as e:
            raise DocumentError(str(e), f"sft.forbidden[{k}]") from None
    try:
        return sft_build(ctx, alphabet, pres, fuel)
    except (ValueError, AlphabetMismatchError) as e:
        raise DocumentError(str(e), "sft.forbidden") from None


def wang_sft(tiles) -> Sft:
    """Z^2 SFT of a Wang tile set.

    The alphabet is the tile indices; horizontally adjacent tiles must match
    east/west colours and vertically adjacent ones north/south (b points north).
    """
    if not isinstance(tiles, list) or not tiles:
        raise DocumentError("needs a nonempty list of tiles", "tiles")
    for k, t in enumerate(tiles):
        if not isinstance(t, dict) or not {"n", "e", "s", "w"} <= set(t):
            raise DocumentError("each tile needs n, e, s, w colours", f"tiles[{k}]")
    ctx = ZdGroup(2)
    alphabet = tuple(str(i) for i in range(len(tiles)))
    forb = []
    for i, t in enumerate(tiles):
        for j, u in enumerate(tiles):
            if t["e"] != u["w"]:
                forb.append(Pattern((((0, 0), str(i)), ((1, 0), str(j)))))
            if t["n"] != u["s"]:
                forb.append(Pattern((((0, 0), str(i)), ((0, 1), str(j)))))
    return Sft(ctx, alphabet, tuple(forb))


def render_grid(q: Pattern, blank: str = ".") -> str:
    """Plain-text picture of a Z^2 pattern, north at the top."""
    if not q.cells:
        return ""
    xs = [g[0] for g in q.support]
    ys = [g[1] for g in q.support]
    width = max(len(s) for s in q.symbols)
    rows = []
    for y in range(max(ys), min(ys) - 1, -1):
        row = [(q[(x, y)] if (x, y) in q else blank).rjust(width) for x in range(min(xs), max(xs) + 1)]
        rows.append(" ".join(row))
    return "\n".join(rows)

