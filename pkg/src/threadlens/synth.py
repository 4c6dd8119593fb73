"""Deterministic synthetic corpora for offline testing.

Generation is a pure function of (config, seed): the same pair always
serializes to byte-identical corpora. Spike injections place an exact
number of comments with a fixed toxicity uniformly inside their interval,
so toxicity bursts land where a test expects them.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import InvalidConfig
from .model import Comment, Corpus, Post, ThreadTree, sort_sibling_ids, validate_corpus

_TITLES = [
    "Weekly discussion thread",
    "Game day megathread",
    "Patch notes and reactions",
    "Unpopular opinions welcome",
    "Questions that don't deserve their own post",
    "Breaking: major announcement",
    "Fan art showcase",
    "Rule changes feedback",
]

_CALM_BODIES = [
    "Thanks for sharing, this was a really interesting read.",
    "I think the second option makes more sense long term.",
    "Can anyone link the source for this claim?",
    "Great point, I had not considered that angle before.",
    "The sensor works like a touch screen, not a metal detector.",
    "This matches what I saw during the last update cycle.",
    "Honestly both sides have decent arguments here.",
    "Adding a small nail for scale in the second photo.",
]

_HOSTILE_BODIES = [
    "You are a complete idiot if you believe that.",
    "What a stupid take, absolute trash opinion.",
    "Shut up, nobody asked for your garbage hot take.",
    "This thread is full of pathetic clowns, I hate it here.",
    "Stop being a jerk and answer the simple question.",
    "Worst moderation I have ever seen, total trash fire.",
]


@dataclass
class SpikeConfig:
    """A burst of same-toxicity comments injected into one post."""

    post_index: int
    center: int
    width: int
    count: int
    toxicity: float

    def interval(self) -> tuple[int, int]:
        half = self.width // 2
        return (self.center - half, self.center + half)


@dataclass
class SyntheticConfig:
    posts: int
    comments_per_post: tuple[int, int]
    max_depth: int
    time_range: tuple[int, int]
    subreddit: str = "synthetic"
    toxicity_range: tuple[float, float] = (0.0, 0.15)
    score_range: tuple[int, int] = (-10, 50)
    tombstone_rate: float = 0.0
    spikes: list[SpikeConfig] = field(default_factory=list)

    def validate(self) -> None:
        if self.posts < 0:
            raise InvalidConfig(f"posts must be >= 0, got {self.posts}")
        lo, hi = self.comments_per_post
        if lo < 0 or lo > hi:
            raise InvalidConfig(f"comments_per_post range invalid: ({lo}, {hi})")
        if self.max_depth < 0:
            raise InvalidConfig(f"max_depth must be >= 0, got {self.max_depth}")
        start, end = self.time_range
        if start > end:
            raise InvalidConfig(f"time_range start {start} after end {end}")
        tlo, thi = self.toxicity_range
        if not (0.0 <= tlo <= thi <= 1.0):
            raise InvalidConfig(f"toxicity_range invalid: ({tlo}, {thi})")
        if self.score_range[0] > self.score_range[1]:
            raise InvalidConfig(f"score_range invalid: {self.score_range}")
        if not (0.0 <= self.tombstone_rate <= 1.0):
            raise InvalidConfig(f"tombstone_rate must be in [0, 1], got {self.tombstone_rate}")
        for i, spike in enumerate(self.spikes):
            if spike.count < 0:
                raise InvalidConfig(f"spike {i}: count must be >= 0, got {spike.count}")
            if spike.width <= 0:
                raise InvalidConfig(f"spike {i}: width must be > 0, got {spike.width}")
            if not (0.0 <= spike.toxicity <= 1.0):
                raise InvalidConfig(f"spike {i}: toxicity {spike.toxicity} outside [0, 1]")
            if not (0 <= spike.post_index < self.posts):
                raise InvalidConfig(f"spike {i}: post_index {spike.post_index} out of range for {self.posts} posts")
            s_lo, s_hi = spike.interval()
            if s_lo < start or s_hi > end:
                raise InvalidConfig(f"spike {i}: interval [{s_lo}, {s_hi}] outside time_range [{start}, {end}]")

    @classmethod
    def from_dict(cls, d: dict) -> "SyntheticConfig":
        try:
            spikes = [
                SpikeConfig(
                    post_index=int(s["post_index"]),
                    center=int(s["center"]),
                    width=int(s["width"]),
                    count=int(s["count"]),
                    toxicity=float(s["toxicity"]),
                )
                for s in d.get("spikes", [])
            ]
            cfg = cls(
                posts=int(d["posts"]),
                comments_per_post=(int(d["comments_per_post"][0]), int(d["comments_per_post"][1])),
                max_depth=int(d["max_depth"]),
                time_range=(int(d["time_range"][0]), int(d["time_range"][1])),
                subreddit=str(d.get("subreddit", "synthetic")),
                toxicity_range=tuple(float(x) for x in d.get("toxicity_range", (0.0, 0.15))),
                score_range=tuple(int(x) for x in d.get("score_range", (-10, 50))),
                tombstone_rate=float(d.get("tombstone_rate", 0.0)),
                spikes=spikes,
            )
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"synthetic config malformed: {exc}") from exc
        cfg.validate()
        return cfg

    @classmethod
    def from_json_file(cls, path) -> "SyntheticConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidConfig(f"synthetic config is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)


def generate_synthetic(config: SyntheticConfig, seed: int) -> Corpus:
    """Generate a corpus; deterministic for a fixed (config, seed)."""
    config.validate()
    rng = random.Random(seed)
    start, end = config.time_range
    counter = 0
    threads: list[ThreadTree] = []

    for post_index in range(config.posts):
        post = Post(
            id=f"p{post_index:04d}",
            title=rng.choice(_TITLES),
            author=f"user{rng.randrange(20):02d}",
            created_at=rng.randint(start, end),
            score=rng.randint(*config.score_range),
        )
        comments: dict[str, Comment] = {}
        n_comments = rng.randint(*config.comments_per_post)
        order: list[str] = []  # insertion order, parents always before children
        for _ in range(n_comments):
            counter += 1
            cid = f"c{counter:06d}"
            eligible = [None] + [k for k in order if comments[k].depth < config.max_depth]
            parent_id = rng.choice(eligible)
            floor_ts = comments[parent_id].created_at if parent_id else post.created_at
            created_at = rng.randint(min(floor_ts, end), end)
            if rng.random() < config.tombstone_rate:
                body, tombstone, toxicity = "[removed]", True, None
            else:
                toxicity = rng.uniform(*config.toxicity_range)
                body = rng.choice(_HOSTILE_BODIES if toxicity >= 0.5 else _CALM_BODIES)
                tombstone = False
            comments[cid] = Comment(
                id=cid,
                parent_id=parent_id,
                post_id=post.id,
                author=f"user{rng.randrange(20):02d}",
                body=body,
                created_at=created_at,
                score=rng.randint(*config.score_range),
                toxicity=toxicity,
                depth=0 if parent_id is None else comments[parent_id].depth + 1,
                tombstone=tombstone,
            )
            order.append(cid)

        for spike in config.spikes:
            if spike.post_index != post_index:
                continue
            s_lo, s_hi = spike.interval()
            for _ in range(spike.count):
                counter += 1
                cid = f"c{counter:06d}"
                comments[cid] = Comment(
                    id=cid,
                    parent_id=None,
                    post_id=post.id,
                    author=f"user{rng.randrange(20):02d}",
                    body=rng.choice(_HOSTILE_BODIES if spike.toxicity >= 0.5 else _CALM_BODIES),
                    created_at=rng.randint(s_lo, s_hi),
                    score=rng.randint(*config.score_range),
                    toxicity=spike.toxicity,
                )

        children: dict[str, list[str]] = {cid: [] for cid in comments}
        tlc_ids = []
        for c in comments.values():
            if c.parent_id is None:
                tlc_ids.append(c.id)
            else:
                children[c.parent_id].append(c.id)
        post.tlc_ids = sort_sibling_ids(comments, tlc_ids)
        threads.append(ThreadTree(
            post=post,
            comments=comments,
            children={cid: sort_sibling_ids(comments, kids) for cid, kids in children.items()},
        ))

    corpus = Corpus(subreddit=config.subreddit, fetched_at=end, threads=threads)
    validate_corpus(corpus)
    return corpus
