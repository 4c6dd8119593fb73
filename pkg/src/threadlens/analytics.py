"""Recency-window metrics over scored comment trees.

Everything here is a pure function of immutable corpus snapshots. All
metrics share one definition of "recent": the moderator-controlled
window [anchor - span, anchor]. Threshold comparisons are inclusive
(>=). Tombstones count toward activity totals but never toward toxic or
high-score counts. Bins are right-open except at the anchor itself,
which falls in the last bin, so no in-window comment is ever dropped.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import EmptyCorpus, InvalidBinCount, UnknownTlc, UnscoredComment
from .model import Comment, Corpus, ThreadTree

MIN_SPAN_SECONDS = 8 * 60
MAX_SPAN_SECONDS = 24 * 60 * 60
DEFAULT_TOXICITY_THRESHOLD = 0.2
DEFAULT_SCORE_THRESHOLD = 10
DEFAULT_BINS = 48
DEFAULT_HISTOGRAM_BUCKETS = 20


@dataclass(frozen=True)
class MetricThresholds:
    """Cutoffs driving classification, highlighting, and filtering."""

    toxicity_threshold: float = DEFAULT_TOXICITY_THRESHOLD
    score_threshold: int = DEFAULT_SCORE_THRESHOLD

    def __post_init__(self):
        if not (0.0 <= self.toxicity_threshold <= 1.0):
            raise ValueError(f"toxicity_threshold {self.toxicity_threshold} outside [0, 1]")


@dataclass(frozen=True)
class TimeWindow:
    """The interval [anchor - span, anchor]; span is clamped to [8 min, 24 h]."""

    anchor: int
    span_seconds: int

    def __post_init__(self):
        clamped = min(MAX_SPAN_SECONDS, max(MIN_SPAN_SECONDS, int(self.span_seconds)))
        object.__setattr__(self, "span_seconds", clamped)

    @property
    def start(self) -> int:
        return self.anchor - self.span_seconds

    def contains(self, instant: int) -> bool:
        return self.start <= instant <= self.anchor


class CommentClass(str, Enum):
    NONE = "none"
    TOXIC_ONLY = "toxic_only"
    HIGH_SCORE_ONLY = "high_score_only"
    BOTH = "both"


ALL_CLASSES = frozenset(CommentClass)


@dataclass(frozen=True)
class BreakdownBar:
    """Per-post class counts; segments always sum to total."""

    toxic_only: int = 0
    high_score_only: int = 0
    both: int = 0
    neither: int = 0
    total: int = 0


@dataclass(frozen=True)
class TemporalSeries:
    """Per-bin counts of total, toxic, and high-score comments."""

    bin_edges: list[float]
    total: list[int]
    toxic: list[int]
    high_score: list[int]


@dataclass(frozen=True)
class Histogram:
    metric: str  # "toxicity" | "score"
    bucket_edges: list[float]
    counts: list[int]


def _unscorable(comment: Comment) -> bool:
    return comment.tombstone or not comment.body.strip()


def _is_toxic(comment: Comment, thresholds: MetricThresholds) -> bool:
    return (
        not _unscorable(comment)
        and comment.toxicity is not None
        and comment.toxicity >= thresholds.toxicity_threshold
    )


def _is_high_score(comment: Comment, thresholds: MetricThresholds) -> bool:
    return not _unscorable(comment) and comment.score >= thresholds.score_threshold


def classify(comment: Comment, thresholds: MetricThresholds) -> CommentClass:
    """Which highlight class a comment falls in; tombstones are always NONE."""
    if _unscorable(comment):
        return CommentClass.NONE
    if comment.toxicity is None:
        raise UnscoredComment(f"comment {comment.id} has no toxicity score")
    toxic = comment.toxicity >= thresholds.toxicity_threshold
    high = comment.score >= thresholds.score_threshold
    if toxic and high:
        return CommentClass.BOTH
    if toxic:
        return CommentClass.TOXIC_ONLY
    if high:
        return CommentClass.HIGH_SCORE_ONLY
    return CommentClass.NONE


def breakdown(thread: ThreadTree, thresholds: MetricThresholds, window: TimeWindow) -> BreakdownBar:
    """Class counts over the thread's in-window comments."""
    counts = {cls: 0 for cls in CommentClass}
    total = 0
    for comment in thread.comments.values():
        if not window.contains(comment.created_at):
            continue
        counts[classify(comment, thresholds)] += 1
        total += 1
    return BreakdownBar(
        toxic_only=counts[CommentClass.TOXIC_ONLY],
        high_score_only=counts[CommentClass.HIGH_SCORE_ONLY],
        both=counts[CommentClass.BOTH],
        neither=counts[CommentClass.NONE],
        total=total,
    )


def bin_index(instant: int, window: TimeWindow, bins: int) -> int | None:
    """Bin for an in-window instant, or None when outside the window.

    Bins are right-open; the anchor itself lands in the last bin.
    Integer arithmetic keeps edge assignment exact.
    """
    if not window.contains(instant):
        return None
    idx = (instant - window.start) * bins // window.span_seconds
    return min(idx, bins - 1)


def temporal_series(
    comments: Iterable[Comment],
    window: TimeWindow,
    bins: int,
    thresholds: MetricThresholds,
) -> TemporalSeries:
    """Uniform-bin activity/toxicity/score counts across the window."""
    if bins < 1:
        raise InvalidBinCount(f"bins must be >= 1, got {bins}")
    total = [0] * bins
    toxic = [0] * bins
    high = [0] * bins
    for comment in comments:
        idx = bin_index(comment.created_at, window, bins)
        if idx is None:
            continue
        total[idx] += 1
        if _is_toxic(comment, thresholds):
            toxic[idx] += 1
        if _is_high_score(comment, thresholds):
            high[idx] += 1
    span = window.span_seconds
    edges = [window.start + i * span / bins for i in range(bins + 1)]
    return TemporalSeries(bin_edges=edges, total=total, toxic=toxic, high_score=high)


def histogram(corpus: Corpus, metric: str, buckets: int = DEFAULT_HISTOGRAM_BUCKETS) -> Histogram:
    """Global distribution of toxicity or score over the whole corpus.

    Toxicity buckets are uniform over [0, 1] and cover scored comments
    only; score buckets span the corpus min..max with the max clamped
    into the last bucket.
    """
    if buckets < 1:
        raise InvalidBinCount(f"buckets must be >= 1, got {buckets}")
    if metric == "toxicity":
        values = [c.toxicity for c in corpus.all_comments() if not _unscorable(c) and c.toxicity is not None]
        lo, hi = 0.0, 1.0
    elif metric == "score":
        values = [float(c.score) for c in corpus.all_comments()]
        if not values:
            raise EmptyCorpus("score histogram undefined for a corpus with no comments")
        lo, hi = min(values), max(values)
    else:
        raise ValueError(f"unknown histogram metric {metric!r}")

    edges = [lo + k * (hi - lo) / buckets for k in range(buckets + 1)]
    counts = [0] * buckets
    if hi > lo:
        for v in values:
            counts[min(bisect_right(edges, v) - 1, buckets - 1)] += 1
    else:
        counts[0] = len(values)  # degenerate range: everything in one bucket
    return Histogram(metric=metric, bucket_edges=edges, counts=counts)


SORT_KEYS = ("recency", "toxicity", "score", "activity")


def sort_posts(
    corpus: Corpus,
    key: str,
    thresholds: MetricThresholds,
    window: TimeWindow,
) -> list[str]:
    """Deterministic post ordering, descending by the chosen key.

    recency: latest in-window comment time (posts with none rank last,
    by post creation time). toxicity: in-window count of comments at or
    above the toxicity threshold, tiebreak max in-window toxicity.
    score: max in-window comment score. activity: in-window comment
    count. Final tiebreak is always post id ascending.
    """
    if key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r}")

    def sort_tuple(thread: ThreadTree):
        post = thread.post
        in_window = [c for c in thread.comments.values() if window.contains(c.created_at)]
        if key == "recency":
            if in_window:
                return (0, -max(c.created_at for c in in_window), post.id)
            return (1, -post.created_at, post.id)
        if key == "toxicity":
            toxic_count = sum(1 for c in in_window if _is_toxic(c, thresholds))
            max_toxicity = max(
                (c.toxicity for c in in_window if not _unscorable(c) and c.toxicity is not None),
                default=-1.0,
            )
            return (-toxic_count, -max_toxicity, post.id)
        if key == "score":
            if in_window:
                return (0, -max(c.score for c in in_window), post.id)
            return (1, 0, post.id)
        return (-len(in_window), post.id)  # activity

    return [t.post.id for t in sorted(corpus.threads, key=sort_tuple)]


def filter_comments(
    thread: ThreadTree,
    predicate: frozenset[CommentClass] | set[CommentClass],
    thresholds: MetricThresholds,
) -> list[tuple[str, list[str]]]:
    """Comments whose class is in the predicate, in tree-traversal order.

    Each hit carries its ancestor id chain (TLC first) so a filtered view
    can still show surrounding context.
    """
    hits: list[tuple[str, list[str]]] = []
    for cid in thread.walk():
        if classify(thread.comments[cid], thresholds) in predicate:
            hits.append((cid, thread.ancestor_chain(cid)))
    return hits


def tlc_series(
    thread: ThreadTree,
    tlc_id: str,
    window: TimeWindow,
    bins: int,
    thresholds: MetricThresholds,
) -> TemporalSeries:
    """Temporal series over one top-level comment and its whole reply subtree."""
    if tlc_id not in thread.post.tlc_ids:
        raise UnknownTlc(f"{tlc_id} is not a top-level comment of post {thread.post.id}")
    subtree = [thread.comments[cid] for cid in thread.subtree_ids(tlc_id)]
    return temporal_series(subtree, window, bins, thresholds)


def active_posts(corpus: Corpus, window: TimeWindow) -> set[str]:
    """Posts with at least one in-window comment; the complement is inactive."""
    return {
        t.post.id
        for t in corpus.threads
        if any(window.contains(c.created_at) for c in t.comments.values())
    }


def active_tlcs(thread: ThreadTree, window: TimeWindow) -> set[str]:
    """TLCs whose subtree has at least one in-window comment."""
    return {
        tlc_id
        for tlc_id in thread.post.tlc_ids
        if any(window.contains(thread.comments[cid].created_at) for cid in thread.subtree_ids(tlc_id))
    }


def build_report(
    corpus: Corpus,
    window: TimeWindow,
    thresholds: MetricThresholds,
    *,
    bins: int = DEFAULT_BINS,
    buckets: int = DEFAULT_HISTOGRAM_BUCKETS,
) -> dict:
    """Every aggregate the service exposes, as one JSON-friendly document."""
    actives = active_posts(corpus, window)
    posts = []
    for thread in corpus.threads:
        bar = breakdown(thread, thresholds, window)
        series = temporal_series(thread.comments.values(), window, bins, thresholds)
        posts.append({
            "post_id": thread.post.id,
            "title": thread.post.title,
            "created_at": thread.post.created_at,
            "comment_count": len(thread.comments),
            "active": thread.post.id in actives,
            "breakdown": breakdown_to_dict(bar),
            "series": series_to_dict(series),
        })
    doc = {
        "subreddit": corpus.subreddit,
        "fetched_at": corpus.fetched_at,
        "window": {"anchor": window.anchor, "span_seconds": window.span_seconds},
        "thresholds": {
            "toxicity_threshold": thresholds.toxicity_threshold,
            "score_threshold": thresholds.score_threshold,
        },
        "posts": posts,
        "sort_orders": {key: sort_posts(corpus, key, thresholds, window) for key in SORT_KEYS},
        "active_posts": sorted(actives),
        "histograms": {"toxicity": histogram_to_dict(histogram(corpus, "toxicity", buckets))},
    }
    if corpus.comment_count() > 0:
        doc["histograms"]["score"] = histogram_to_dict(histogram(corpus, "score", buckets))
    return doc


def breakdown_to_dict(bar: BreakdownBar) -> dict:
    return {
        "toxic_only": bar.toxic_only,
        "high_score_only": bar.high_score_only,
        "both": bar.both,
        "neither": bar.neither,
        "total": bar.total,
    }


def series_to_dict(series: TemporalSeries) -> dict:
    return {
        "bin_edges": series.bin_edges,
        "total": series.total,
        "toxic": series.toxic,
        "high_score": series.high_score,
    }


def histogram_to_dict(hist: Histogram) -> dict:
    return {"metric": hist.metric, "bucket_edges": hist.bucket_edges, "counts": hist.counts}
