"""Replayable certificates.

A certificate is a kind, the verdict it supports and a ``replay`` block holding
everything needed to re-check that verdict without searching.  On disk the
replay block is stored in canonical JSON next to its SHA-256 digest, so any
change to the block is caught before the semantic check even starts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

FORMAT = "symdyn-certificate/1"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass
class Certificate:
    kind: str
    verdict: str
    replay: dict

    @property
    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.replay).encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        head = canonical_json({"format": FORMAT, "kind": self.kind, "verdict": self.verdict, "digest": self.digest})
        return head[:-1] + ',"replay":' + canonical_json(self.replay) + "}"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        doc = json.loads(text)
        if not isinstance(doc, dict) or doc.get("format") != FORMAT:
            raise ValueError("not a certificate document")
        cert = cls(doc["kind"], doc["verdict"], doc["replay"])
        if doc.get("digest") != cert.digest:
            raise ValueError("replay block does not match its digest")
        return cert

    def verify(self) -> None:
        """Raise ValueError (or a package error) unless the replay checks out."""
        try:
            check = _CHECKERS[self.kind]
        except KeyError:
            raise ValueError(f"unknown certificate kind {self.kind!r}") from None
        expected = _VERDICTS[self.kind]
        if self.verdict != expected:
            raise ValueError(f"{self.kind} certificates support {expected!r}, not {self.verdict!r}")
        if not isinstance(self.replay, dict):
            raise ValueError("replay block must be an object")
        check(self.replay)


@dataclass
class VerifyResult:
    ok: bool
    kind: str = ""
    reason: str = ""


def verify_certificate(source) -> VerifyResult:
    """Check a certificate given as an object, JSON text or bytes."""
    from .verdict import SymdynError

    try:
        if isinstance(source, bytes):
            source = source.decode("utf-8")
        cert = source if isinstance(source, Certificate) else Certificate.from_json(source)
        cert.verify()
    except (ValueError, KeyError, TypeError, IndexError, AttributeError, SymdynError) as e:
        return VerifyResult(False, reason=f"{type(e).__name__}: {e}")
    return VerifyResult(True, kind=cert.kind)


def _check_word_equality(replay):
    from .groups import group_from_doc, invert_word

    G = group_from_doc(replay["group"])
    u, v = G.check_word(replay["u"]), G.check_word(replay["v"])
    if G.decidable:
        if G.canonicalize(u) != G.canonicalize(v):
            raise ValueError(f"{u!r} and {v!r} are different elements")
        return
    steps = replay["steps"]
    if not isinstance(steps, list) or not all(isinstance(s, list) and len(s) == 3 for s in steps):
        raise ValueError("steps must be [operation, position, word] triples")
    end = G.apply_steps(u + invert_word(v), steps)
    if end != "":
        raise ValueError(f"rewriting ends at {end!r}, not the identity")


def _check_word_inequality(replay):
    from .groups import group_from_doc

    G = group_from_doc(replay["group"])
    if not G.decidable:
        raise ValueError("inequality cannot be certified in a presented group")
    if G.canonicalize(G.check_word(replay["u"])) == G.canonicalize(G.check_word(replay["v"])):
        raise ValueError("the words are equal")


def _check_inconsistency(replay):
    from .patterns import presentation_from_doc

    p = presentation_from_doc(replay["pattern"]).as_dict()
    u, v = replay["u"], replay["v"]
    if u not in p or v not in p:
        raise ValueError("the clashing words are not in the support")
    if p[u] == p[v]:
        raise ValueError("the clashing words carry the same symbol")
    eq = replay["equality"]
    if eq.get("group") != replay["group"] or eq.get("u") != u or eq.get("v") != v:
        raise ValueError("equality proof is about other words")
    _check_word_equality(eq)


def _refutation_problem(sft_doc, pattern_doc, margin):
    from .patterns import pattern_from_doc
    from .subshift import admissibility_problem, sft_doc as to_doc, sft_from_doc

    X = sft_from_doc(sft_doc)
    if to_doc(X) != sft_doc:
        raise ValueError("SFT document is not in normal form")
    q = pattern_from_doc(X.ctx, pattern_doc)
    if not isinstance(margin, int) or isinstance(margin, bool) or margin < 0:
        raise ValueError("margin must be a non-negative integer")
    return X, q, admissibility_problem(X, q, margin)


def _check_non_membership(replay):
    from . import refute

    _, _, problem = _refutation_problem(replay["sft"], replay["pattern"], replay["margin"])
    refute.check_refutation(problem, replay["refutation"])


def _check_proper_containment(replay):
    from . import refute
    from .morphism import build_Yp, rule_from_doc
    from .patterns import pattern_from_doc
    from .subshift import sft_doc, sft_from_doc

    Y = sft_from_doc(replay["y"])
    X = sft_from_doc(replay["x"])
    rule = rule_from_doc(replay["rule"], Y.ctx)
    p = pattern_from_doc(X.ctx, replay["p"])
    listed = replay["certified_language"]
    i = replay["index"]
    if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < len(listed):
        raise ValueError("index outside the certified language list")
    if listed[i] != replay["q"]:
        raise ValueError("q is not the indexed entry of the certified language")
    Yp = build_Yp(Y, rule, X, p)
    if sft_doc(Yp) != replay["y_p"]:
        raise ValueError("Y_p does not match its construction")
    _, _, problem = _refutation_problem(replay["y_p"], replay["q"], replay["margin"])
    refute.check_refutation(problem, replay["refutation"])


def _check_point_prefix(replay):
    from .decide import check_greedy_prefix
    from .patterns import pattern_from_doc
    from .subshift import sft_from_doc

    X = sft_from_doc(replay["sft"])
    q = pattern_from_doc(X.ctx, replay["pattern"])
    n = replay["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError("n must be a non-negative integer")
    check_greedy_prefix(X, q, n)


_CHECKERS = {
    "word-equality": _check_word_equality,
    "word-inequality": _check_word_inequality,
    "inconsistency": _check_inconsistency,
    "non-membership": _check_non_membership,
    "proper-containment": _check_proper_containment,
    "point-prefix": _check_point_prefix,
}

_VERDICTS = {
    "word-equality": "certified-yes",
    "word-inequality": "certified-no",
    "inconsistency": "certified-no",
    "non-membership": "certified-no",
    "proper-containment": "certified-yes",
    "point-prefix": "certified-yes",
}
