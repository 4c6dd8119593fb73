"""Attach toxicity scores to comments via pluggable providers.

Two providers share one contract (a probability in [0, 1], 1 = most
toxic): a remote HTTP scorer speaking the Perspective-compatible
TOXICITY wire format, and a deterministic offline lexicon scorer so
tests and local pipelines never touch the network. Scores are cached
per comment id; a warm cache makes rescoring a no-op.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import httpx

from .errors import EmptyBody, ProviderError, QuotaExceeded, ThreadLensError
from .model import Corpus, ThreadTree
from .retry import Transient, call_with_retries

TOXICITY_URL_ENV = "THREADLENS_TOXICITY_URL"
TOXICITY_KEY_ENV = "THREADLENS_TOXICITY_KEY"

#: Mild default lexicon for offline scoring; terms map to weights in (0, 1].
DEFAULT_LEXICON = {
    "idiot": 0.7,
    "stupid": 0.6,
    "jerk": 0.66,
    "trash": 0.45,
    "garbage": 0.4,
    "pathetic": 0.5,
    "clown": 0.35,
    "clowns": 0.35,
    "hate": 0.3,
    "shut": 0.25,
    "worst": 0.2,
}

_TOKEN_SPLIT = re.compile(r"[^0-9a-z]+")


def _now() -> int:
    return int(time.time())


@dataclass(frozen=True)
class ToxicityScore:
    """One scored comment: probability, which provider produced it, when."""

    value: float
    provider: str  # "remote" | "lexicon"
    scored_at: int

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"toxicity value {self.value} outside [0, 1]")


def tokenize(body: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; drops empty tokens."""
    return [t for t in _TOKEN_SPLIT.split(body.lower()) if t]


def load_lexicon(path) -> dict[str, float]:
    """Load a JSON term -> weight map, checking weights lie in (0, 1]."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    lexicon = {}
    for term, weight in raw.items():
        w = float(weight)
        if not (0.0 < w <= 1.0):
            raise ValueError(f"lexicon weight for {term!r} must be in (0, 1], got {w}")
        lexicon[str(term).lower()] = w
    return lexicon


def score_lexicon(body: str, lexicon: dict[str, float], *, scored_at: int = 0) -> ToxicityScore:
    """Deterministic offline score: 1 - product of (1 - weight) per matched token.

    Every matched token occurrence contributes a factor, so repeating a
    term raises the score; zero matches (or an empty body) scores 0.
    """
    survival = 1.0
    for token in tokenize(body):
        weight = lexicon.get(token)
        if weight is not None:
            survival *= 1.0 - weight
    return ToxicityScore(value=min(1.0, max(0.0, 1.0 - survival)), provider="lexicon", scored_at=scored_at)


class LexiconScorer:
    """Lexicon provider usable by score_corpus; pure per body."""

    provider_name = "lexicon"
    batch_size = 0  # no pacing needed offline
    concurrency = 1

    def __init__(self, lexicon: dict[str, float] | None = None):
        self.lexicon = dict(DEFAULT_LEXICON if lexicon is None else lexicon)

    def score_value(self, body: str) -> float:
        return score_lexicon(body, self.lexicon).value


class RemoteScorer:
    """HTTP toxicity provider speaking the Perspective-compatible format.

    Request: POST {endpoint}?key=... with the comment text and a
    requested TOXICITY attribute; response carries the summary
    probability. Transient failures retry with the same bounded backoff
    budget as ingestion.
    """

    provider_name = "remote"

    def __init__(
        self,
        endpoint: str | None = None,
        api_key: str | None = None,
        *,
        client: httpx.Client | None = None,
        batch_size: int = 16,
        concurrency: int = 4,
        pace_seconds: float = 1.0,
        sleeper=time.sleep,
    ):
        self.endpoint = endpoint or os.environ.get(TOXICITY_URL_ENV, "")
        self.api_key = api_key if api_key is not None else os.environ.get(TOXICITY_KEY_ENV, "")
        if not self.endpoint:
            raise ProviderError(f"remote scorer needs an endpoint ({TOXICITY_URL_ENV} or --endpoint)")
        self._client = client or httpx.Client(timeout=30.0)
        self.batch_size = batch_size
        self.concurrency = concurrency
        self.pace_seconds = pace_seconds
        self._sleeper = sleeper

    def score_value(self, body: str) -> float:
        if not body.strip():
            raise EmptyBody("cannot score an empty body")
        payload = {
            "comment": {"text": body},
            "requestedAttributes": {"TOXICITY": {}},
            "doNotStore": True,
        }

        def attempt() -> float:
            try:
                resp = self._client.post(self.endpoint, params={"key": self.api_key}, json=payload)
            except httpx.HTTPError as exc:
                raise Transient(ProviderError(f"scorer unreachable: {exc}")) from exc
            if resp.status_code == 429:
                wait = _retry_after(resp)
                raise Transient(QuotaExceeded("scoring quota exhausted after retries"), wait=wait)
            if resp.status_code >= 500:
                raise Transient(ProviderError(f"scorer returned {resp.status_code}"))
            if resp.status_code != 200:
                raise ProviderError(f"scorer returned {resp.status_code}: {resp.text[:200]}")
            try:
                value = resp.json()["attributeScores"]["TOXICITY"]["summaryScore"]["value"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ProviderError(f"scorer response missing TOXICITY summary: {exc}") from exc
            value = float(value)
            if not (0.0 <= value <= 1.0):
                raise ProviderError(f"scorer value {value} outside [0, 1]")
            return value

        return call_with_retries(attempt, sleeper=self._sleeper)


def score_remote(body: str, client: RemoteScorer) -> ToxicityScore:
    """Score one body through the remote provider."""
    return ToxicityScore(value=client.score_value(body), provider="remote", scored_at=_now())


def _retry_after(resp: httpx.Response) -> float | None:
    value = resp.headers.get("Retry-After")
    try:
        return float(value) if value is not None else None
    except ValueError:
        return None


class ScoreCache:
    """Per-comment-id score cache; concurrent reads, serialized writes."""

    def __init__(self, entries: dict[str, ToxicityScore] | None = None):
        self.entries: dict[str, ToxicityScore] = dict(entries or {})
        self._lock = threading.Lock()

    def get(self, comment_id: str) -> ToxicityScore | None:
        return self.entries.get(comment_id)

    def put(self, comment_id: str, score: ToxicityScore) -> None:
        with self._lock:
            self.entries[comment_id] = score

    def __len__(self) -> int:
        return len(self.entries)

    @staticmethod
    def sidecar_path(corpus_path) -> Path:
        """Where the cache lives next to a corpus file: <corpus>.scores.json."""
        return Path(corpus_path).with_suffix(".scores.json")

    @classmethod
    def load(cls, path) -> "ScoreCache":
        path = Path(path)
        if not path.exists():
            return cls()
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        entries = {
            cid: ToxicityScore(value=float(e["value"]), provider=str(e["provider"]), scored_at=int(e["scored_at"]))
            for cid, e in doc.get("entries", {}).items()
        }
        return cls(entries)

    def save(self, path) -> None:
        doc = {
            "schema_version": 1,
            "entries": {
                cid: {"value": s.value, "provider": s.provider, "scored_at": s.scored_at}
                for cid, s in self.entries.items()
            },
        }
        path = Path(path)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        os.replace(tmp, path)


def score_corpus(corpus: Corpus, provider, cache: ScoreCache, *, clock=_now) -> Corpus:
    """Return a copy of the corpus with toxicity on every scorable comment.

    Comment ids already in the cache are not re-scored. Tombstones and
    empty bodies are skipped entirely: they stay unscored and are
    excluded from toxicity aggregates downstream. Provider errors
    propagate with the offending comment id attached.
    """
    targets: list = [
        c for c in corpus.all_comments()
        if not c.tombstone and c.body.strip() and cache.get(c.id) is None
    ]

    fresh: dict[str, float] = {}
    if targets:
        batch_size = getattr(provider, "batch_size", 0) or len(targets)
        concurrency = max(1, getattr(provider, "concurrency", 1))
        pace = getattr(provider, "pace_seconds", 0.0)
        sleeper = getattr(provider, "_sleeper", time.sleep)

        def score_one(comment) -> tuple[str, float]:
            try:
                return comment.id, provider.score_value(comment.body)
            except ThreadLensError as exc:
                exc.comment_id = comment.id
                raise

        for offset in range(0, len(targets), batch_size):
            batch = targets[offset:offset + batch_size]
            if offset and pace:
                sleeper(pace)
            if concurrency > 1:
                with ThreadPoolExecutor(max_workers=concurrency) as pool:
                    for cid, value in pool.map(score_one, batch):
                        fresh[cid] = value
            else:
                for comment in batch:
                    cid, value = score_one(comment)
                    fresh[cid] = value

    stamp = clock()
    for cid, value in fresh.items():
        cache.put(cid, ToxicityScore(value=value, provider=provider.provider_name, scored_at=stamp))
    return apply_cache(corpus, cache)


def apply_cache(corpus: Corpus, cache: ScoreCache) -> Corpus:
    """Copy of the corpus with cached toxicity applied to scorable comments."""
    threads = []
    for thread in corpus.threads:
        new_comments = {}
        for cid, c in thread.comments.items():
            cached = cache.get(cid)
            if cached is not None and not c.tombstone and c.body.strip():
                new_comments[cid] = replace(c, toxicity=cached.value)
            else:
                new_comments[cid] = c
        threads.append(ThreadTree(post=thread.post, comments=new_comments, children=thread.children))
    return Corpus(subreddit=corpus.subreddit, fetched_at=corpus.fetched_at, threads=threads)
