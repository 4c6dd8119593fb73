"""Server-side state: immutable corpus snapshots and the moderation log.

Snapshots are read-only once built; reloading builds a fresh snapshot
and swaps a single reference, so in-flight readers always see a
consistent corpus. Moderation actions go to an append-only JSON-Lines
file; effective per-comment state is the fold of that log ordered by
(acted_at, action_id), i.e. the latest action wins.
"""

from __future__ import annotations

import json
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import CorruptCache, StorageFailure, UnknownComment
from ..model import Corpus, ThreadTree, loads, validate_corpus
from ..scoring import ScoreCache, apply_cache

ACTION_KINDS = ("approve", "remove", "report")


@dataclass(frozen=True)
class ModerationAction:
    """One append-only record of a moderator decision."""

    action_id: str
    comment_id: str
    kind: str
    actor: str
    acted_at: int

    def to_dict(self) -> dict:
        return {
            "action_id": self.action_id,
            "comment_id": self.comment_id,
            "kind": self.kind,
            "actor": self.actor,
            "acted_at": self.acted_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModerationAction":
        return cls(
            action_id=str(d["action_id"]),
            comment_id=str(d["comment_id"]),
            kind=str(d["kind"]),
            actor=str(d["actor"]),
            acted_at=int(d["acted_at"]),
        )


def fold_actions(actions: list[ModerationAction]) -> dict[str, ModerationAction]:
    """Effective state per comment: latest (acted_at, action_id) wins."""
    effective: dict[str, ModerationAction] = {}
    for action in actions:
        current = effective.get(action.comment_id)
        if current is None or (action.acted_at, action.action_id) >= (current.acted_at, current.action_id):
            effective[action.comment_id] = action
    return effective


class ActionLog:
    """Durable append-only moderation log with serialized writes."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.actions: list[ModerationAction] = []
        self._effective: dict[str, ModerationAction] = {}
        if self.path.exists():
            self._replay()

    def _replay(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    self.actions.append(ModerationAction.from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise CorruptCache(f"action log {self.path} line {line_no} unreadable: {exc}") from exc
        self._effective = fold_actions(self.actions)

    def append(self, comment_id: str, kind: str, actor: str, *, clock=time.time) -> ModerationAction:
        if kind not in ACTION_KINDS:
            raise ValueError(f"unknown action kind {kind!r}")
        with self._lock:
            # Sequence prefix keeps ids sortable in arrival order, so the
            # (acted_at, action_id) fold preserves last-writer-wins even for
            # actions landing within the same second.
            action = ModerationAction(
                action_id=f"{len(self.actions):08d}-{uuid.uuid4().hex[:12]}",
                comment_id=comment_id,
                kind=kind,
                actor=actor,
                acted_at=int(clock()),
            )
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(action.to_dict(), sort_keys=True) + "\n")
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StorageFailure(f"could not append to action log {self.path}: {exc}") from exc
            self.actions.append(action)
            current = self._effective.get(comment_id)
            if current is None or (action.acted_at, action.action_id) >= (current.acted_at, current.action_id):
                self._effective[comment_id] = action
        return action

    def effective_kind(self, comment_id: str) -> str | None:
        action = self._effective.get(comment_id)
        return action.kind if action else None

    def effective_states(self) -> dict[str, str]:
        return {cid: a.kind for cid, a in self._effective.items()}


@dataclass
class Snapshot:
    """An immutable, indexed view of one loaded corpus file."""

    corpus: Corpus
    path: str
    threads_by_post: dict[str, ThreadTree] = field(default_factory=dict)
    comment_to_post: dict[str, str] = field(default_factory=dict)

    @classmethod
    def build(cls, corpus: Corpus, path: str) -> "Snapshot":
        threads_by_post = corpus.thread_by_post_id()
        comment_to_post = {
            cid: tree.post.id for tree in corpus.threads for cid in tree.comments
        }
        return cls(corpus=corpus, path=path, threads_by_post=threads_by_post, comment_to_post=comment_to_post)


def load_corpus(path) -> Snapshot:
    """Load and validate a corpus cache file, applying sidecar scores if present.

    Raises SchemaMismatch on an unsupported schema_version and
    CorruptCache when the file cannot be parsed or violates invariants.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorruptCache(f"cannot read corpus file {path}: {exc}") from exc
    corpus = loads(text)
    validate_corpus(corpus)
    sidecar = ScoreCache.sidecar_path(path)
    if sidecar.exists():
        corpus = apply_cache(corpus, ScoreCache.load(sidecar))
    return Snapshot.build(corpus, str(path))


class AppState:
    """Everything request handlers read: the snapshot plus the action log."""

    def __init__(self, action_log: ActionLog, *, telemetry_enabled: bool = False):
        self.snapshot: Snapshot | None = None
        self.actions = action_log
        # Interaction counters, off unless a deployment opts in.
        self.telemetry_enabled = telemetry_enabled
        self.request_counts: dict[str, int] = {}

    def count_request(self, route: str) -> None:
        if self.telemetry_enabled:
            self.request_counts[route] = self.request_counts.get(route, 0) + 1

    def load(self, corpus_path) -> Snapshot:
        snapshot = load_corpus(corpus_path)
        self.snapshot = snapshot  # single-reference swap: atomic for readers
        return snapshot

    def require_comment(self, comment_id: str) -> None:
        if self.snapshot is None or comment_id not in self.snapshot.comment_to_post:
            raise UnknownComment(f"no comment {comment_id} in the loaded corpus")
