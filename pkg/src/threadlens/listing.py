"""Build validated comment trees from raw listing documents.

A listing document is one post record plus its comment records:

    {"post": {"id", "title", "author", "created_at", "score"},
     "comments": [{"id", "parent_id"?, "author", "body", "created_at", "score"}, ...]}

Parsing is insensitive to comment record order: sibling lists are
normalized to (created_at, id) ascending. Orphaned comments (parent id
resolving to nothing) are promoted to top-level and flagged, so deleted
ancestors never hide replies from moderators; pass ``strict=True`` to
raise instead.
"""

from __future__ import annotations

from .errors import DuplicateId, MalformedListing, OrphanComment
from .model import TOMBSTONE_MARKERS, Comment, Post, ThreadTree, sort_sibling_ids, validate_tree

_POST_FIELDS = ("id", "title", "author", "created_at", "score")
_COMMENT_FIELDS = ("id", "author", "body", "created_at", "score")


def _require(record: dict, fields: tuple[str, ...], kind: str) -> None:
    for name in fields:
        if record.get(name) is None:
            raise MalformedListing(f"{kind} record missing required field {name!r}: {record!r}")


def is_tombstone_body(body: str) -> bool:
    stripped = body.strip()
    return not stripped or stripped.lower() in TOMBSTONE_MARKERS


def parse_listing(raw: dict, *, strict: bool = False) -> ThreadTree:
    """Parse one listing document into a normalized, validated ThreadTree.

    Raises MalformedListing on missing fields or (in strict mode) parent
    cycles, DuplicateId on repeated ids, and OrphanComment only when
    ``strict`` is set; otherwise orphans are promoted to TLC and flagged.
    """
    if not isinstance(raw, dict) or "post" not in raw:
        raise MalformedListing("listing document must be an object with a 'post' record")
    post_rec = raw["post"]
    _require(post_rec, _POST_FIELDS, "post")
    post = Post(
        id=str(post_rec["id"]),
        title=str(post_rec["title"]),
        author=str(post_rec["author"]),
        created_at=int(post_rec["created_at"]),
        score=int(post_rec["score"]),
    )

    comments: dict[str, Comment] = {}
    for rec in raw.get("comments", []):
        _require(rec, _COMMENT_FIELDS, "comment")
        cid = str(rec["id"])
        if cid in comments or cid == post.id:
            raise DuplicateId(f"duplicate id {cid} in listing for post {post.id}")
        parent_id = rec.get("parent_id")
        if parent_id is not None:
            parent_id = str(parent_id)
            if parent_id == post.id:  # explicit reply-to-post means top level
                parent_id = None
        body = str(rec["body"])
        comments[cid] = Comment(
            id=cid,
            parent_id=parent_id,
            post_id=post.id,
            author=str(rec["author"]),
            body=body,
            created_at=int(rec["created_at"]),
            score=int(rec["score"]),
            tombstone=is_tombstone_body(body),
        )

    _resolve_orphans_and_cycles(post.id, comments, strict=strict)
    _assign_depths(comments)

    children: dict[str, list[str]] = {cid: [] for cid in comments}
    tlc_ids: list[str] = []
    for c in comments.values():
        if c.parent_id is None:
            tlc_ids.append(c.id)
        else:
            children[c.parent_id].append(c.id)
    post.tlc_ids = sort_sibling_ids(comments, tlc_ids)
    tree = ThreadTree(
        post=post,
        comments=comments,
        children={cid: sort_sibling_ids(comments, kids) for cid, kids in children.items()},
    )
    validate_tree(tree)
    return tree


def _resolve_orphans_and_cycles(post_id: str, comments: dict[str, Comment], *, strict: bool) -> None:
    """Clear parent pointers that resolve to nothing or close a cycle."""
    for cid in sorted(comments):
        c = comments[cid]
        if c.parent_id is not None and c.parent_id not in comments:
            if strict:
                raise OrphanComment(f"comment {cid} has parent {c.parent_id} not in listing for post {post_id}")
            c.parent_id = None
            c.orphaned = True

    # A parent chain that never reaches a root is a cycle; break it at the
    # earliest-created member, which could not have replied to a later one.
    resolved: set[str] = set()
    for cid in sorted(comments):
        if cid in resolved:
            continue
        path: list[str] = []
        on_path: set[str] = set()
        cur: str | None = cid
        while cur is not None and cur not in resolved:
            if cur in on_path:
                if strict:
                    raise MalformedListing(f"parent cycle involving comment {cur} in listing for post {post_id}")
                cycle = path[path.index(cur):]
                root = min(cycle, key=lambda k: (comments[k].created_at, k))
                comments[root].parent_id = None
                comments[root].orphaned = True
                break
            path.append(cur)
            on_path.add(cur)
            cur = comments[cur].parent_id
        resolved.update(path)


def _assign_depths(comments: dict[str, Comment]) -> None:
    depths: dict[str, int] = {}

    def depth_of(cid: str) -> int:
        chain: list[str] = []
        cur = cid
        while cur not in depths:
            chain.append(cur)
            parent = comments[cur].parent_id
            if parent is None:
                depths[cur] = 0
                break
            cur = parent
        for node in reversed(chain):
            parent = comments[node].parent_id
            if parent is not None:
                depths[node] = depths[parent] + 1
        return depths[cid]

    for cid, c in comments.items():
        c.depth = depth_of(cid)
