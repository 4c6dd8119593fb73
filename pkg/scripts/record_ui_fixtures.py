#!/usr/bin/env python3
"""Record API responses from the real server into frontend test fixtures.

Builds a small fixed corpus (covering every comment class, a tombstone,
and a nested reply chain), serves it in-process, and captures the JSON
responses the frontend contract tests replay. Rerun after changing the
server's response shapes: `python scripts/record_ui_fixtures.py`.
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from threadlens.model import Comment, Corpus, Post, ThreadTree, dumps, validate_corpus
from threadlens.server import ActionLog, AppState, create_app

BASE = 1_700_000_000
DAY = 86_400
OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def comment(cid, post_id, parent, body, created, score, toxicity, depth=0, tombstone=False):
    return Comment(
        id=cid, parent_id=parent, post_id=post_id, author=f"author_{cid}",
        body=body, created_at=created, score=score, toxicity=toxicity,
        depth=depth, tombstone=tombstone,
    )


def build_corpus() -> Corpus:
    a_comments = [
        comment("ca1", "pA", None, "That reply was uncalled for, what a jerk move.",
                BASE + 1000, 1, 0.66),
        comment("ca2", "pA", None, "Detailed walkthrough of how the sensor actually works.",
                BASE + 2000, 31, 0.01),
        comment("ca3", "pA", "ca1", "Sure, keep telling yourself that, champ.",
                BASE + 3000, -10, 0.39, depth=1),
        comment("ca4", "pA", "ca3", "Everyone in this chain is being awful and loving it.",
                BASE + 4000, 15, 0.9, depth=2),
        comment("ca5", "pA", None, "[removed]", BASE + 5000, 3, None, tombstone=True),
    ]
    thread_a = ThreadTree(
        post=Post(id="pA", title="Sensor debate turns sour", author="op_a",
                  created_at=BASE, score=120, tlc_ids=["ca1", "ca2", "ca5"]),
        comments={c.id: c for c in a_comments},
        children={"ca1": ["ca3"], "ca2": [], "ca3": ["ca4"], "ca4": [], "ca5": []},
    )
    b_comments = [
        comment("cb1", "pB", None, "Nice write-up, thanks for sharing.", BASE + 1500, 4, 0.02),
        comment("cb2", "pB", None, "Agreed, very helpful.", BASE + 2500, 2, 0.03),
    ]
    thread_b = ThreadTree(
        post=Post(id="pB", title="Calm appreciation thread", author="op_b",
                  created_at=BASE + 500, score=40, tlc_ids=["cb1", "cb2"]),
        comments={c.id: c for c in b_comments},
        children={"cb1": [], "cb2": []},
    )
    thread_c = ThreadTree(
        post=Post(id="pC", title="Nobody commented here", author="op_c",
                  created_at=BASE + 800, score=2, tlc_ids=[]),
    )
    corpus = Corpus(subreddit="fixture", fetched_at=BASE + DAY, threads=[thread_a, thread_b, thread_c])
    validate_corpus(corpus)
    return corpus


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    import tempfile

    tmp = Path(tempfile.mkdtemp())
    corpus_path = tmp / "fixture_corpus.json"
    corpus_path.write_text(dumps(build_corpus()))
    state = AppState(ActionLog(tmp / "actions.jsonl"))
    state.load(corpus_path)
    client = TestClient(create_app(state))

    def save(name: str, payload) -> None:
        (OUT / name).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"recorded {name}")

    save("posts_default.json", client.get("/posts").json())
    save("posts_toxicity_sort.json", client.get("/posts", params={"sort": "toxicity"}).json())
    save("thread_pA.json", client.get("/posts/pA").json())
    save("thread_pA_filtered.json", client.get(
        "/posts/pA", params={"filter": ["toxic_only", "both"]}
    ).json())
    save("histograms.json", client.get("/histograms").json())

    removed = client.post("/actions", json={"kind": "remove", "comment_id": "ca1", "actor": "ui-test"})
    save("action_remove.json", removed.json())
    approved = client.post("/actions", json={"kind": "approve", "comment_id": "ca1", "actor": "ui-test"})
    save("action_approve.json", approved.json())
    save("actions_log.json", client.get("/actions").json())
    save("thread_pA_after_actions.json", client.get("/posts/pA").json())


if __name__ == "__main__":
    main()
