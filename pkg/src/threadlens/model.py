"""Domain types for threaded-discussion corpora and their JSON cache format.

Timestamps are integer epoch seconds, UTC. A corpus serializes to a single
JSON document with a top-level ``schema_version`` field; `loads`/`dumps`
round-trip to structurally equal objects, and `dumps` is deterministic
(sorted keys) so identical corpora produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import CorruptCache, SchemaMismatch

SCHEMA_VERSION = 1

#: Bodies that mark a deleted/removed comment in provider data.
TOMBSTONE_MARKERS = frozenset({"[deleted]", "[removed]"})


@dataclass
class Comment:
    """One node of a threaded discussion.

    ``depth`` is 0 iff ``parent_id`` is None (a top-level comment).
    ``toxicity``, when present, lies in [0, 1]; absent until scored.
    ``tombstone`` marks deleted/removed bodies: counted in activity,
    never scored. ``orphaned`` marks comments promoted to TLC because
    their original parent was missing from the listing.
    """

    id: str
    parent_id: str | None
    post_id: str
    author: str
    body: str
    created_at: int
    score: int
    toxicity: float | None = None
    depth: int = 0
    orphaned: bool = False
    tombstone: bool = False

    def with_toxicity(self, value: float) -> "Comment":
        return replace(self, toxicity=value)


@dataclass
class Post:
    """A submission plus the ordered ids of its top-level comments."""

    id: str
    title: str
    author: str
    created_at: int
    score: int
    tlc_ids: list[str] = field(default_factory=list)


@dataclass
class ThreadTree:
    """A post with its comments, hierarchy preserved.

    ``children`` maps a comment id to its ordered child ids; child lists
    and ``post.tlc_ids`` are ordered by (created_at, id) ascending.
    """

    post: Post
    comments: dict[str, Comment] = field(default_factory=dict)
    children: dict[str, list[str]] = field(default_factory=dict)

    def child_ids(self, comment_id: str) -> list[str]:
        return self.children.get(comment_id, [])

    def subtree_ids(self, root_id: str) -> list[str]:
        """All ids in the subtree rooted at ``root_id``, depth-first."""
        out: list[str] = []
        stack = [root_id]
        while stack:
            cid = stack.pop()
            out.append(cid)
            stack.extend(reversed(self.child_ids(cid)))
        return out

    def walk(self) -> list[str]:
        """Every comment id in tree-traversal (depth-first, TLCs in order)."""
        out: list[str] = []
        for tlc_id in self.post.tlc_ids:
            out.extend(self.subtree_ids(tlc_id))
        return out

    def ancestor_chain(self, comment_id: str) -> list[str]:
        """Ids from the comment's TLC down to its direct parent (excludes itself)."""
        chain: list[str] = []
        parent = self.comments[comment_id].parent_id
        while parent is not None:
            chain.append(parent)
            parent = self.comments[parent].parent_id
        chain.reverse()
        return chain


@dataclass
class Corpus:
    """A snapshot of one subreddit's threads, as cached on disk."""

    subreddit: str
    fetched_at: int
    threads: list[ThreadTree] = field(default_factory=list)

    def thread_by_post_id(self) -> dict[str, ThreadTree]:
        return {t.post.id: t for t in self.threads}

    def all_comments(self):
        for thread in self.threads:
            yield from thread.comments.values()

    def comment_count(self) -> int:
        return sum(len(t.comments) for t in self.threads)


def sort_sibling_ids(tree_comments: dict[str, Comment], ids: list[str]) -> list[str]:
    """Normalized sibling order: created_at ascending, id as tiebreak."""
    return sorted(ids, key=lambda cid: (tree_comments[cid].created_at, cid))


def order_key(comment: Comment) -> tuple[int, str]:
    return (comment.created_at, comment.id)


# --- serialization ----------------------------------------------------------

def comment_to_dict(c: Comment) -> dict:
    return {
        "id": c.id,
        "parent_id": c.parent_id,
        "post_id": c.post_id,
        "author": c.author,
        "body": c.body,
        "created_at": c.created_at,
        "score": c.score,
        "toxicity": c.toxicity,
        "depth": c.depth,
        "orphaned": c.orphaned,
        "tombstone": c.tombstone,
    }


def comment_from_dict(d: dict) -> Comment:
    return Comment(
        id=d["id"],
        parent_id=d.get("parent_id"),
        post_id=d["post_id"],
        author=d["author"],
        body=d["body"],
        created_at=int(d["created_at"]),
        score=int(d["score"]),
        toxicity=d.get("toxicity"),
        depth=int(d.get("depth", 0)),
        orphaned=bool(d.get("orphaned", False)),
        tombstone=bool(d.get("tombstone", False)),
    )


def thread_to_dict(t: ThreadTree) -> dict:
    return {
        "post": {
            "id": t.post.id,
            "title": t.post.title,
            "author": t.post.author,
            "created_at": t.post.created_at,
            "score": t.post.score,
            "tlc_ids": t.post.tlc_ids,
        },
        "comments": {cid: comment_to_dict(c) for cid, c in t.comments.items()},
        "children": {cid: kids for cid, kids in t.children.items() if kids},
    }


def thread_from_dict(d: dict) -> ThreadTree:
    p = d["post"]
    post = Post(
        id=p["id"],
        title=p["title"],
        author=p["author"],
        created_at=int(p["created_at"]),
        score=int(p["score"]),
        tlc_ids=list(p.get("tlc_ids", [])),
    )
    comments = {cid: comment_from_dict(c) for cid, c in d.get("comments", {}).items()}
    children = {cid: [] for cid in comments}  # normalized: every id has a (possibly empty) list
    for cid, kids in d.get("children", {}).items():
        children[cid] = list(kids)
    return ThreadTree(post=post, comments=comments, children=children)


def corpus_to_dict(corpus: Corpus) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "subreddit": corpus.subreddit,
        "fetched_at": corpus.fetched_at,
        "threads": [thread_to_dict(t) for t in corpus.threads],
    }


def corpus_from_dict(d: dict) -> Corpus:
    version = d.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}")
    try:
        return Corpus(
            subreddit=d["subreddit"],
            fetched_at=int(d["fetched_at"]),
            threads=[thread_from_dict(t) for t in d.get("threads", [])],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptCache(f"corpus document malformed: {exc}") from exc


def dumps(corpus: Corpus) -> str:
    """Serialize deterministically: equal corpora yield identical bytes."""
    return json.dumps(corpus_to_dict(corpus), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Corpus:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptCache(f"corpus file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CorruptCache("corpus document must be a JSON object")
    return corpus_from_dict(doc)


# --- invariant validation ---------------------------------------------------

def validate_tree(tree: ThreadTree) -> None:
    """Check every ThreadTree invariant; raise CorruptCache on violation."""
    post = tree.post
    comments = tree.comments

    for cid, c in comments.items():
        if c.id != cid:
            raise CorruptCache(f"comment keyed {cid} carries id {c.id}")
        if c.post_id != post.id:
            raise CorruptCache(f"comment {cid} belongs to post {c.post_id}, tree is {post.id}")
        if c.toxicity is not None and not (0.0 <= c.toxicity <= 1.0):
            raise CorruptCache(f"comment {cid} toxicity {c.toxicity} outside [0, 1]")
        if (c.parent_id is None) != (c.depth == 0):
            raise CorruptCache(f"comment {cid}: depth {c.depth} inconsistent with parent {c.parent_id}")
        if c.parent_id is not None:
            parent = comments.get(c.parent_id)
            if parent is None:
                raise CorruptCache(f"comment {cid} has unresolved parent {c.parent_id}")
            if c.depth != parent.depth + 1:
                raise CorruptCache(f"comment {cid}: depth {c.depth} != parent depth {parent.depth} + 1")

    tlc_set = set(post.tlc_ids)
    if len(post.tlc_ids) != len(tlc_set):
        raise CorruptCache(f"post {post.id} lists duplicate tlc_ids")
    for tid in post.tlc_ids:
        c = comments.get(tid)
        if c is None or c.parent_id is not None:
            raise CorruptCache(f"tlc_ids entry {tid} is not a parentless comment of post {post.id}")
    for cid, c in comments.items():
        if c.parent_id is None and cid not in tlc_set:
            raise CorruptCache(f"parentless comment {cid} missing from tlc_ids")

    for parent_id, kids in tree.children.items():
        if parent_id not in comments:
            raise CorruptCache(f"children map keyed by unknown id {parent_id}")
        for kid in kids:
            if comments.get(kid) is None or comments[kid].parent_id != parent_id:
                raise CorruptCache(f"children map lists {kid} under {parent_id} but parent_id disagrees")
        if kids != sort_sibling_ids(comments, kids):
            raise CorruptCache(f"children of {parent_id} not in (created_at, id) order")
    if post.tlc_ids != sort_sibling_ids(comments, post.tlc_ids):
        raise CorruptCache(f"tlc_ids of post {post.id} not in (created_at, id) order")
    for cid, c in comments.items():
        if c.parent_id is not None and cid not in tree.children.get(c.parent_id, []):
            raise CorruptCache(f"comment {cid} absent from its parent's children list")

    # Reachability from TLCs covers everything exactly once (also rules out cycles).
    reached = tree.walk()
    if len(reached) != len(comments) or set(reached) != set(comments):
        raise CorruptCache(f"tree of post {post.id}: {len(reached)} reachable of {len(comments)} comments")


def validate_corpus(corpus: Corpus) -> None:
    """Check corpus-level invariants plus every tree's."""
    post_ids = [t.post.id for t in corpus.threads]
    if len(post_ids) != len(set(post_ids)):
        raise CorruptCache("duplicate post ids in corpus")
    seen: set[str] = set()
    for tree in corpus.threads:
        validate_tree(tree)
        for cid in tree.comments:
            if cid in seen:
                raise CorruptCache(f"comment id {cid} appears in more than one thread")
            seen.add(cid)
