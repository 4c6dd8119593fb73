import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadlens.analytics import (
    ALL_CLASSES,
    MAX_SPAN_SECONDS,
    MIN_SPAN_SECONDS,
    SORT_KEYS,
    BreakdownBar,
    CommentClass,
    MetricThresholds,
    TimeWindow,
    active_posts,
    active_tlcs,
    breakdown,
    build_report,
    classify,
    filter_comments,
    histogram,
    sort_posts,
    temporal_series,
    tlc_series,
)
from threadlens.errors import EmptyCorpus, InvalidBinCount, UnknownTlc, UnscoredComment
from threadlens.model import Comment, Corpus, Post, ThreadTree

from . import oracles
from .conftest import BASE_TIME, DAY, make_corpus, spike_config

DEFAULTS = MetricThresholds()


def flat_comment(cid="c1", toxicity=0.0, score=0, created_at=BASE_TIME, tombstone=False, body="text"):
    return Comment(
        id=cid,
        parent_id=None,
        post_id="p1",
        author="a",
        body=body,
        created_at=created_at,
        score=score,
        toxicity=toxicity,
        tombstone=tombstone,
    )


def single_thread(comments):
    tree = ThreadTree(
        post=Post(id="p1", title="t", author="a", created_at=BASE_TIME, score=0),
        comments={c.id: c for c in comments},
        children={c.id: [] for c in comments},
    )
    tree.post.tlc_ids = sorted(tree.comments, key=lambda cid: (tree.comments[cid].created_at, cid))
    return tree


# --- thresholds and window ---------------------------------------------------

def test_default_thresholds():
    assert DEFAULTS.toxicity_threshold == 0.2
    assert DEFAULTS.score_threshold == 10


def test_threshold_range_validated():
    with pytest.raises(ValueError):
        MetricThresholds(toxicity_threshold=1.5)


def test_window_span_clamped_both_ways():
    assert TimeWindow(anchor=BASE_TIME, span_seconds=1).span_seconds == MIN_SPAN_SECONDS
    assert TimeWindow(anchor=BASE_TIME, span_seconds=10 * DAY).span_seconds == MAX_SPAN_SECONDS
    assert TimeWindow(anchor=BASE_TIME, span_seconds=3600).span_seconds == 3600


def test_window_contains_closed_interval():
    w = TimeWindow(anchor=BASE_TIME, span_seconds=3600)
    assert w.contains(BASE_TIME - 3600)
    assert w.contains(BASE_TIME)
    assert not w.contains(BASE_TIME + 1)
    assert not w.contains(BASE_TIME - 3601)


# --- classify ----------------------------------------------------------------

# reference classification fixtures: (toxicity, score) -> class at defaults
CALIBRATION_TRIO = [
    (0.01, 31, CommentClass.HIGH_SCORE_ONLY),
    (0.66, 1, CommentClass.TOXIC_ONLY),
    (0.39, -10, CommentClass.TOXIC_ONLY),
]


@pytest.mark.parametrize("toxicity,score,expected", CALIBRATION_TRIO)
def test_classify_calibration_trio(toxicity, score, expected):
    assert classify(flat_comment(toxicity=toxicity, score=score), DEFAULTS) == expected


def test_classify_none_and_both():
    assert classify(flat_comment(toxicity=0.0, score=0), DEFAULTS) == CommentClass.NONE
    assert classify(flat_comment(toxicity=0.9, score=99), DEFAULTS) == CommentClass.BOTH


def test_classify_inclusive_boundaries():
    assert classify(flat_comment(toxicity=0.2, score=9), DEFAULTS) == CommentClass.TOXIC_ONLY
    assert classify(flat_comment(toxicity=0.19, score=10), DEFAULTS) == CommentClass.HIGH_SCORE_ONLY


def test_classify_tombstone_is_none_even_with_high_score():
    stone = flat_comment(toxicity=None, score=500, tombstone=True, body="[removed]")
    assert classify(stone, DEFAULTS) == CommentClass.NONE


def test_classify_unscored_raises():
    with pytest.raises(UnscoredComment):
        classify(flat_comment(toxicity=None), DEFAULTS)


# --- breakdown -----------------------------------------------------------------

def test_breakdown_empty_window_all_zero(corpus):
    w = TimeWindow(anchor=BASE_TIME - 10 * DAY, span_seconds=3600)
    bar = breakdown(corpus.threads[0], DEFAULTS, w)
    assert bar == BreakdownBar(0, 0, 0, 0, 0)


def test_breakdown_everything_passes_lowest_cutoffs(corpus):
    thread = corpus.threads[0]
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    loose = MetricThresholds(toxicity_threshold=0.0, score_threshold=-(10**9))
    bar = breakdown(thread, loose, w)
    stones = sum(
        1 for c in thread.comments.values() if c.tombstone and w.contains(c.created_at)
    )
    assert bar.both == bar.total - stones  # tombstones stay "none"
    assert bar.neither == stones


def test_breakdown_matches_flat_scan():
    for seed in range(6):
        corpus = make_corpus(seed=seed, tombstone_rate=0.1)
        thread = corpus.threads[0]
        w = TimeWindow(anchor=BASE_TIME + DAY // 2, span_seconds=DAY // 3)
        bar = breakdown(thread, DEFAULTS, w)
        counts, total = oracles.breakdown_flat(
            thread.comments.values(), w.anchor, w.span_seconds, 0.2, 10
        )
        assert bar.total == total
        assert bar.toxic_only == counts["toxic_only"]
        assert bar.high_score_only == counts["high_score_only"]
        assert bar.both == counts["both"]
        assert bar.neither == counts["none"]
        assert bar.toxic_only + bar.high_score_only + bar.both + bar.neither == bar.total


# --- temporal series -----------------------------------------------------------

def test_series_no_comments_all_zero():
    w = TimeWindow(anchor=BASE_TIME, span_seconds=3600)
    series = temporal_series([], w, 10, DEFAULTS)
    assert series.total == [0] * 10
    assert len(series.bin_edges) == 11


def test_series_comment_at_anchor_lands_in_last_bin():
    w = TimeWindow(anchor=BASE_TIME, span_seconds=3600)
    series = temporal_series([flat_comment(created_at=BASE_TIME)], w, 12, DEFAULTS)
    assert series.total[-1] == 1
    assert sum(series.total) == 1


def test_series_invalid_bin_count():
    w = TimeWindow(anchor=BASE_TIME, span_seconds=3600)
    with pytest.raises(InvalidBinCount):
        temporal_series([], w, 0, DEFAULTS)


def test_series_matches_exact_rational_binning(rng):
    for seed in range(4):
        corpus = make_corpus(seed=seed)
        comments = [c for t in corpus.threads for c in t.comments.values()]
        for _ in range(6):
            span = rng.randint(MIN_SPAN_SECONDS, MAX_SPAN_SECONDS)
            anchor = rng.randint(BASE_TIME, BASE_TIME + DAY)
            bins = rng.randint(1, 96)
            w = TimeWindow(anchor=anchor, span_seconds=span)
            series = temporal_series(comments, w, bins, DEFAULTS)
            total, toxic, high = oracles.series_flat(comments, anchor, span, bins, 0.2, 10)
            assert series.total == total
            assert series.toxic == toxic
            assert series.high_score == high


def test_series_bin_conservation_property(rng):
    corpus = make_corpus(seed=77)
    comments = [c for t in corpus.threads for c in t.comments.values()]
    for bins in (1, 2, 3, 7, 48, 96):
        w = TimeWindow(anchor=BASE_TIME + rng.randint(0, DAY), span_seconds=rng.randint(480, DAY))
        series = temporal_series(comments, w, bins, DEFAULTS)
        assert sum(series.total) == oracles.window_count(comments, w.anchor, w.span_seconds)
        assert all(t >= x for t, x in zip(series.total, series.toxic))
        assert all(t >= x for t, x in zip(series.total, series.high_score))


def test_window_monotonicity_enlarging_span():
    corpus = make_corpus(seed=13)
    comments = [c for t in corpus.threads for c in t.comments.values()]
    anchor = BASE_TIME + DAY
    previous = -1
    for span in range(MIN_SPAN_SECONDS, MAX_SPAN_SECONDS + 1, 7200):
        w = TimeWindow(anchor=anchor, span_seconds=span)
        count = sum(temporal_series(comments, w, 48, DEFAULTS).total)
        assert count >= previous
        previous = count


def test_spike_dominates_toxic_series():
    center = BASE_TIME + DAY // 2
    corpus = make_corpus(
        seed=3,
        toxicity_range=(0.0, 0.15),
        spikes=[spike_config(center=center, width=1200, count=40)],
    )
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    series = temporal_series(corpus.threads[0].comments.values(), w, 48, DEFAULTS)
    peak = max(range(48), key=lambda i: series.toxic[i])
    expected = (center - w.start) * 48 // w.span_seconds
    assert abs(peak - expected) <= 1


# --- histogram -------------------------------------------------------------------

def test_histogram_all_zero_values_one_bucket():
    comments = [flat_comment(cid=f"c{i}", toxicity=0.0) for i in range(7)]
    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME, threads=[single_thread(comments)])
    hist = histogram(corpus, "toxicity", 20)
    assert hist.counts[0] == 7
    assert sum(hist.counts) == 7


def test_histogram_calibration_trio_buckets():
    comments = [
        flat_comment(cid="c1", toxicity=0.01, score=31),
        flat_comment(cid="c2", toxicity=0.66, score=1),
        flat_comment(cid="c3", toxicity=0.39, score=-10),
    ]
    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME, threads=[single_thread(comments)])
    hist = histogram(corpus, "toxicity", 10)
    expected = [0] * 10
    expected[0], expected[6], expected[3] = 1, 1, 1
    assert hist.counts == expected


def test_histogram_matches_flat_bucketing(rng):
    comments = [
        flat_comment(cid=f"c{i}", toxicity=rng.random(), score=rng.randint(-40, 400), created_at=BASE_TIME + i)
        for i in range(1000)
    ]
    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME, threads=[single_thread(comments)])
    for buckets in (1, 7, 20, 50):
        tox = histogram(corpus, "toxicity", buckets)
        assert tox.counts == oracles.histogram_flat([c.toxicity for c in comments], 0.0, 1.0, buckets)
        assert sum(tox.counts) == 1000
        scores = [float(c.score) for c in comments]
        sc = histogram(corpus, "score", buckets)
        assert sc.counts == oracles.histogram_flat(scores, min(scores), max(scores), buckets)


def test_histogram_toxicity_excludes_unscored_and_tombstones():
    comments = [
        flat_comment(cid="c1", toxicity=0.5),
        flat_comment(cid="c2", toxicity=None, tombstone=True, body="[removed]"),
    ]
    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME, threads=[single_thread(comments)])
    assert sum(histogram(corpus, "toxicity", 10).counts) == 1
    assert sum(histogram(corpus, "score", 10).counts) == 2  # score covers everything


def test_histogram_score_empty_corpus_raises():
    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME, threads=[])
    with pytest.raises(EmptyCorpus):
        histogram(corpus, "score", 10)
    assert sum(histogram(corpus, "toxicity", 10).counts) == 0


def test_histogram_degenerate_score_range():
    comments = [flat_comment(cid=f"c{i}", score=7) for i in range(4)]
    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME, threads=[single_thread(comments)])
    hist = histogram(corpus, "score", 10)
    assert hist.counts[0] == 4 and sum(hist.counts) == 4


# --- sort_posts -----------------------------------------------------------------

def test_sort_single_post():
    corpus = make_corpus(seed=1, posts=1)
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    for key in SORT_KEYS:
        assert sort_posts(corpus, key, DEFAULTS, w) == [corpus.threads[0].post.id]


def test_sort_toxicity_count_wins():
    def build(pid, n_toxic):
        comments = [
            Comment(id=f"{pid}c{i}", parent_id=None, post_id=pid, author="a", body="x",
                    created_at=BASE_TIME + i, score=0, toxicity=0.9)
            for i in range(n_toxic)
        ]
        tree = ThreadTree(
            post=Post(id=pid, title="t", author="a", created_at=BASE_TIME, score=0,
                      tlc_ids=[c.id for c in comments]),
            comments={c.id: c for c in comments},
            children={c.id: [] for c in comments},
        )
        return tree

    corpus = Corpus(subreddit="x", fetched_at=BASE_TIME + DAY,
                    threads=[build("pb", 2), build("pa", 5)])
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    assert sort_posts(corpus, "toxicity", DEFAULTS, w)[0] == "pa"


def test_sort_matches_flat_oracle_every_key(rng):
    for seed in range(5):
        corpus = make_corpus(seed=seed, posts=8, tombstone_rate=0.1)
        anchor = BASE_TIME + rng.randint(DAY // 2, DAY)
        span = rng.randint(MIN_SPAN_SECONDS, MAX_SPAN_SECONDS)
        w = TimeWindow(anchor=anchor, span_seconds=span)
        for key in SORT_KEYS:
            got = sort_posts(corpus, key, DEFAULTS, w)
            want = oracles.sort_posts_flat(corpus, key, anchor, span, 0.2, 10)
            assert got == want, f"seed={seed} key={key}"
            assert sorted(got) == sorted(t.post.id for t in corpus.threads)  # permutation
            assert sort_posts(corpus, key, DEFAULTS, w) == got  # repeatable


# --- filter_comments -------------------------------------------------------------

def test_filter_all_classes_returns_everything(corpus):
    thread = corpus.threads[0]
    hits = filter_comments(thread, ALL_CLASSES, DEFAULTS)
    assert [cid for cid, _ in hits] == thread.walk()


def test_filter_toxic_on_clean_thread_empty():
    comments = [flat_comment(cid=f"c{i}", toxicity=0.0, score=0) for i in range(5)]
    thread = single_thread(comments)
    assert filter_comments(thread, {CommentClass.TOXIC_ONLY, CommentClass.BOTH}, DEFAULTS) == []


def test_filter_matches_classify_and_collect(corpus):
    thread = max(corpus.threads, key=lambda t: len(t.comments))
    for predicate in ({CommentClass.BOTH}, {CommentClass.TOXIC_ONLY, CommentClass.BOTH}, {CommentClass.NONE}):
        hits = filter_comments(thread, predicate, DEFAULTS)
        want = {
            cid for cid, c in thread.comments.items()
            if oracles.classify_flat(c, 0.2, 10) in {p.value for p in predicate}
        }
        assert {cid for cid, _ in hits} == want  # sound and complete
        for cid, chain in hits:
            assert chain == oracles.ancestors_flat(thread.comments, cid)


# --- tlc_series & active ----------------------------------------------------------

def test_tlc_series_outside_window_all_zero():
    comments = [flat_comment(cid="c1", created_at=BASE_TIME)]
    thread = single_thread(comments)
    w = TimeWindow(anchor=BASE_TIME + 30 * DAY, span_seconds=3600)
    series = tlc_series(thread, "c1", w, 8, DEFAULTS)
    assert series.total == [0] * 8


def test_tlc_series_whole_thread_equals_thread_series():
    corpus = make_corpus(seed=8, posts=1, comments_per_post=(10, 20))
    thread = corpus.threads[0]
    # collapse to a single TLC subtree by picking a corpus where one exists
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    whole = temporal_series(thread.comments.values(), w, 24, DEFAULTS)
    summed = [0] * 24
    for tlc in thread.post.tlc_ids:
        series = tlc_series(thread, tlc, w, 24, DEFAULTS)
        summed = [a + b for a, b in zip(summed, series.total)]
    assert summed == whole.total  # subtree additivity


def test_tlc_series_matches_flat_subtree(corpus):
    thread = max(corpus.threads, key=lambda t: len(t.comments))
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY // 2)
    for tlc in thread.post.tlc_ids:
        members = oracles.subtree_flat(thread.comments, tlc)
        flat_total, flat_toxic, flat_high = oracles.series_flat(
            [thread.comments[cid] for cid in members], w.anchor, w.span_seconds, 16, 0.2, 10
        )
        series = tlc_series(thread, tlc, w, 16, DEFAULTS)
        assert series.total == flat_total
        assert series.toxic == flat_toxic
        assert series.high_score == flat_high


def test_tlc_series_unknown_tlc():
    thread = single_thread([flat_comment(cid="c1")])
    w = TimeWindow(anchor=BASE_TIME, span_seconds=3600)
    with pytest.raises(UnknownTlc):
        tlc_series(thread, "nope", w, 8, DEFAULTS)


def test_active_posts_window_before_everything(corpus):
    w = TimeWindow(anchor=BASE_TIME - 100 * DAY, span_seconds=DAY)
    assert active_posts(corpus, w) == set()


def test_active_posts_window_spanning_everything(corpus):
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    expected = {t.post.id for t in corpus.threads if t.comments}
    assert active_posts(corpus, w) == expected


def test_active_membership_matches_flat_scan(rng):
    corpus = make_corpus(seed=31)
    anchor = BASE_TIME + rng.randint(0, DAY)
    span = rng.randint(MIN_SPAN_SECONDS, MAX_SPAN_SECONDS)
    w = TimeWindow(anchor=anchor, span_seconds=span)
    expected = {
        t.post.id for t in corpus.threads
        if oracles.window_count(t.comments.values(), anchor, span) > 0
    }
    assert active_posts(corpus, w) == expected
    thread = max(corpus.threads, key=lambda t: len(t.comments))
    expected_tlcs = {
        tlc for tlc in thread.post.tlc_ids
        if oracles.window_count(
            [thread.comments[cid] for cid in oracles.subtree_flat(thread.comments, tlc)],
            anchor, span,
        ) > 0
    }
    assert active_tlcs(thread, w) == expected_tlcs


# --- threshold monotonicity & partition ----------------------------------------

def test_threshold_monotonicity_bars_bins_and_sort_keys():
    sweep = [round(0.1 * i, 1) for i in range(11)]
    for seed in range(4):
        corpus = make_corpus(seed=seed)
        w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
        prev_bars = None
        prev_bins = None
        prev_keys = None
        for tt in sweep:
            th = MetricThresholds(toxicity_threshold=tt, score_threshold=10)
            bars = [breakdown(t, th, w) for t in corpus.threads]
            toxic_totals = [b.toxic_only + b.both for b in bars]
            bins = [
                temporal_series(t.comments.values(), w, 48, th).toxic for t in corpus.threads
            ]
            keys = [
                sum(1 for c in t.comments.values()
                    if w.contains(c.created_at) and not c.tombstone
                    and c.toxicity is not None and c.toxicity >= tt)
                for t in corpus.threads
            ]
            if prev_bars is not None:
                assert all(cur <= prev for cur, prev in zip(toxic_totals, prev_bars))
                for cur_series, prev_series in zip(bins, prev_bins):
                    assert all(c <= p for c, p in zip(cur_series, prev_series))
                assert all(cur <= prev for cur, prev in zip(keys, prev_keys))
            prev_bars, prev_bins, prev_keys = toxic_totals, bins, keys


@settings(max_examples=60, deadline=None)
@given(
    toxicity=st.one_of(st.none(), st.floats(min_value=0.0, max_value=1.0)),
    score=st.integers(min_value=-100, max_value=500),
    tombstone=st.booleans(),
    tt=st.floats(min_value=0.0, max_value=1.0),
    ts=st.integers(min_value=-50, max_value=50),
)
def test_partition_exactly_one_class(toxicity, score, tombstone, tt, ts):
    c = flat_comment(
        toxicity=None if tombstone else toxicity,
        score=score,
        tombstone=tombstone,
        body="[removed]" if tombstone else "text",
    )
    th = MetricThresholds(toxicity_threshold=tt, score_threshold=ts)
    if c.toxicity is None and not tombstone:
        with pytest.raises(UnscoredComment):
            classify(c, th)
    else:
        assert classify(c, th) in ALL_CLASSES


# --- report ---------------------------------------------------------------------

def test_build_report_is_json_ready_and_consistent(corpus):
    w = TimeWindow(anchor=BASE_TIME + DAY, span_seconds=DAY)
    doc = build_report(corpus, w, DEFAULTS)
    import json

    json.dumps(doc)  # serializable
    assert len(doc["posts"]) == len(corpus.threads)
    assert set(doc["sort_orders"]) == set(SORT_KEYS)
    for entry in doc["posts"]:
        bar = entry["breakdown"]
        assert bar["toxic_only"] + bar["high_score_only"] + bar["both"] + bar["neither"] == bar["total"]
        assert sum(entry["series"]["total"]) == bar["total"]
