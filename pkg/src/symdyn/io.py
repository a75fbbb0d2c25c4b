"""Loading JSON documents from disk into a shared workspace."""

from __future__ import annotations

import json
from pathlib import Path

from .groups import GroupCtx, group_from_doc
from .morphism import LocalRule, rule_from_doc
from .patterns import Pattern, PatternPresentation, pattern_from_doc, presentation_from_doc
from .subshift import Sft, sft_from_doc
from .verdict import AlphabetMismatchError, DocumentError, SymdynError


def read_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(e.strerror or str(e), str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e.msg}", f"{path}:{e.lineno}:{e.colno}") from None


def _located(path, fn):
    try:
        return fn()
    except DocumentError as e:
        raise DocumentError(str(e), str(path)) from None


class WorkspaceError(SymdynError):
    pass


class Workspace:
    """Named objects loaded for one command; they must all share one group."""

    def __init__(self, group: GroupCtx | None = None):
        self.group = group
        self.objects: dict[str, object] = {}

    def _claim(self, name: str, obj, group: GroupCtx):
        if name in self.objects:
            raise WorkspaceError(f"object name {name!r} is already in use")
        if self.group is None:
            self.group = group
        elif group != self.group:
            raise AlphabetMismatchError(f"{name!r} lives on {group!r}, the workspace on {self.group!r}")
        self.objects[name] = obj
        return obj

    def _need_group(self, name: str) -> GroupCtx:
        if self.group is None:
            raise WorkspaceError(f"{name!r} needs a group; load an SFT or pass --group first")
        return self.group

    def load_group(self, path) -> GroupCtx:
        G = _located(path, lambda: group_from_doc(read_json(path)))
        if self.group is not None and G != self.group:
            raise AlphabetMismatchError(f"group {G!r} differs from the workspace group {self.group!r}")
        self.group = G
        return G

    def load_sft(self, name: str, path, fuel: int = 0) -> Sft:
        X = _located(path, lambda: sft_from_doc(read_json(path), fuel, self.group))
        return self._claim(name, X, X.ctx)

    def load_pattern(self, name: str, path) -> Pattern:
        G = self._need_group(name)
        q = _located(path, lambda: pattern_from_doc(G, read_json(path)))
        return self._claim(name, q, G)

    def load_presentation(self, name: str, path) -> PatternPresentation:
        G = self._need_group(name)
        p = _located(path, lambda: presentation_from_doc(read_json(path)))
        return self._claim(name, p, G)

    def load_rule(self, name: str, path) -> LocalRule:
        G = self._need_group(name)
        rule = _located(path, lambda: rule_from_doc(read_json(path), G))
        return self._claim(name, rule, G)

    def add(self, name: str, obj, group: GroupCtx | None = None):
        return self._claim(name, obj, group or self._need_group(name))
