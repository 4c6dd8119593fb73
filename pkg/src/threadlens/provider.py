"""Credentialed HTTP client for pulling threaded-forum listings.

The provider speaks two JSON endpoints:

    GET {posts_path}     -> {"posts": [{"id", "title", "author", "created_at", "score"}, ...]}
    GET {comments_path}  -> one listing document per post (see listing.parse_listing)

Endpoint paths and the auth header name are configurable via a JSON
config file and/or environment variables; transient failures retry with
bounded exponential backoff and Retry-After is honored on 429s.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass

import httpx

from .errors import AuthFailure, ProviderUnavailable, RateLimited
from .listing import parse_listing
from .model import Corpus, ThreadTree
from .retry import Transient, call_with_retries

PROVIDER_URL_ENV = "THREADLENS_PROVIDER_URL"
PROVIDER_KEY_ENV = "THREADLENS_PROVIDER_KEY"
PROVIDER_AUTH_HEADER_ENV = "THREADLENS_PROVIDER_AUTH_HEADER"


@dataclass
class ProviderConfig:
    base_url: str
    api_key: str = ""
    auth_header: str = "Authorization"
    auth_format: str = "Bearer {key}"
    posts_path: str = "/r/{subreddit}/posts"
    comments_path: str = "/r/{subreddit}/posts/{post_id}/comments"
    user_agent: str = "threadlens/0.1"
    pace_seconds: float = 0.0

    @classmethod
    def load(cls, path=None) -> "ProviderConfig":
        """Read the optional JSON config file, then apply env overrides."""
        fields: dict = {}
        if path is not None:
            with open(path, encoding="utf-8") as fh:
                fields.update(json.load(fh))
        if os.environ.get(PROVIDER_URL_ENV):
            fields["base_url"] = os.environ[PROVIDER_URL_ENV]
        if os.environ.get(PROVIDER_KEY_ENV):
            fields["api_key"] = os.environ[PROVIDER_KEY_ENV]
        if os.environ.get(PROVIDER_AUTH_HEADER_ENV):
            fields["auth_header"] = os.environ[PROVIDER_AUTH_HEADER_ENV]
        if "base_url" not in fields:
            raise ProviderUnavailable(
                f"no provider endpoint configured (set {PROVIDER_URL_ENV} or pass a config file)"
            )
        return cls(**fields)


class ProviderClient:
    """Sequential, rate-limited access to the listing endpoints."""

    def __init__(
        self,
        config: ProviderConfig,
        *,
        client: httpx.Client | None = None,
        sleeper=time.sleep,
        clock=time.time,
    ):
        self.config = config
        headers = {"User-Agent": config.user_agent}
        if config.api_key:
            headers[config.auth_header] = config.auth_format.format(key=config.api_key)
        self._client = client or httpx.Client(base_url=config.base_url, headers=headers, timeout=30.0)
        self._own_client = client is None
        self._headers = headers
        self._sleeper = sleeper
        self.clock = clock

    def close(self) -> None:
        if self._own_client:
            self._client.close()

    def _get(self, path: str, params: dict | None = None) -> dict:
        def attempt() -> dict:
            try:
                resp = self._client.get(path, params=params, headers=self._headers)
            except httpx.HTTPError as exc:
                raise Transient(ProviderUnavailable(f"provider unreachable: {exc}")) from exc
            if resp.status_code in (401, 403):
                raise AuthFailure(f"provider rejected credentials ({resp.status_code}) for {path}")
            if resp.status_code == 429:
                retry_after = resp.headers.get("Retry-After")
                try:
                    wait = float(retry_after) if retry_after else None
                except ValueError:
                    wait = None
                raise Transient(RateLimited(f"rate limited on {path} after retries"), wait=wait)
            if resp.status_code >= 500:
                raise Transient(ProviderUnavailable(f"provider returned {resp.status_code} for {path}"))
            if resp.status_code != 200:
                raise ProviderUnavailable(f"provider returned {resp.status_code} for {path}: {resp.text[:200]}")
            try:
                return resp.json()
            except (json.JSONDecodeError, ValueError) as exc:
                raise ProviderUnavailable(f"provider returned non-JSON for {path}") from exc

        if self.config.pace_seconds:
            self._sleeper(self.config.pace_seconds)
        return call_with_retries(attempt, sleeper=self._sleeper)

    def fetch_post_index(self, subreddit: str, since: int) -> list[dict]:
        path = self.config.posts_path.format(subreddit=subreddit)
        doc = self._get(path, params={"since": since})
        return list(doc.get("posts", []))

    def fetch_listing(self, subreddit: str, post_id: str) -> dict:
        path = self.config.comments_path.format(subreddit=subreddit, post_id=post_id)
        return self._get(path)


def fetch_subreddit(name: str, span_seconds: int, client: ProviderClient) -> Corpus:
    """Snapshot every post created or replied to within the last ``span_seconds``."""
    if span_seconds <= 0:
        raise ValueError(f"span must be > 0, got {span_seconds}")
    now = int(client.clock())
    since = now - span_seconds

    threads: list[ThreadTree] = []
    for record in client.fetch_post_index(name, since):
        tree = parse_listing(client.fetch_listing(name, str(record["id"])))
        latest_reply = max((c.created_at for c in tree.comments.values()), default=None)
        if tree.post.created_at >= since or (latest_reply is not None and latest_reply >= since):
            threads.append(tree)
    return Corpus(subreddit=name, fetched_at=now, threads=threads)
