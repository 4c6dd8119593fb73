"""Bounded exponential backoff shared by the HTTP clients."""

from __future__ import annotations

import time
from typing import Callable, TypeVar

DEFAULT_ATTEMPTS = 3
DEFAULT_BASE_DELAY = 1.0
DEFAULT_FACTOR = 2.0

T = TypeVar("T")


class Transient(Exception):
    """Raised inside a retried callable to signal 'try again'.

    ``final`` is the error to surface once the retry budget is spent.
    ``wait`` optionally overrides the backoff delay (e.g. Retry-After).
    """

    def __init__(self, final: Exception, wait: float | None = None):
        super().__init__(str(final))
        self.final = final
        self.wait = wait


def call_with_retries(
    fn: Callable[[], T],
    *,
    attempts: int = DEFAULT_ATTEMPTS,
    base_delay: float = DEFAULT_BASE_DELAY,
    factor: float = DEFAULT_FACTOR,
    sleeper: Callable[[float], None] = time.sleep,
) -> T:
    """Call ``fn`` until it returns or the budget is exhausted.

    ``fn`` raises Transient to request a retry; any other exception
    propagates immediately.
    """
    delay = base_delay
    last: Transient | None = None
    for attempt in range(attempts):
        try:
            return fn()
        except Transient as exc:
            last = exc
            if attempt < attempts - 1:
                sleeper(exc.wait if exc.wait is not None else delay)
                delay *= factor
    assert last is not None
    raise last.final
