import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from threadlens.cli import main, parse_duration
from threadlens.model import loads
from threadlens.provider import PROVIDER_URL_ENV
from threadlens.scoring import DEFAULT_LEXICON, score_lexicon

from . import oracles
from .conftest import BASE_TIME, DAY

SYNTH_CONFIG = {
    "posts": 4,
    "comments_per_post": [3, 12],
    "max_depth": 3,
    "time_range": [BASE_TIME, BASE_TIME + DAY],
    "toxicity_range": [0.0, 0.6],
    "tombstone_rate": 0.1,
    "subreddit": "clitest",
}


def write_config(tmp_path, config=SYNTH_CONFIG):
    path = tmp_path / "synth.json"
    path.write_text(json.dumps(config))
    return path


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("threadlens ")


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["synth", "--nonsense"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err.lower()


@pytest.mark.parametrize(
    "text,expected",
    [("90", 90), ("90s", 90), ("15m", 900), ("2h", 7200), ("2d", 172800)],
)
def test_duration_units(text, expected):
    assert parse_duration(text) == expected


def test_synth_twice_identical_bytes(tmp_path):
    config = write_config(tmp_path)
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["synth", "--config", str(config), "--seed", "7", "--out", str(out1)]) == 0
    assert main(["synth", "--config", str(config), "--seed", "7", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_synth_invalid_config_exits_1_no_partial_file(tmp_path, capsys):
    config = write_config(tmp_path, dict(SYNTH_CONFIG, posts=-3))
    out = tmp_path / "bad.json"
    assert main(["synth", "--config", str(config), "--seed", "1", "--out", str(out)]) == 1
    assert "error:" in capsys.readouterr().err
    assert not out.exists()
    assert not list(tmp_path.glob("*.tmp"))


def test_score_writes_sidecar_and_never_touches_input(tmp_path):
    config = write_config(tmp_path)
    corpus_path = tmp_path / "corpus.json"
    main(["synth", "--config", str(config), "--seed", "3", "--out", str(corpus_path)])
    before = corpus_path.read_bytes()
    assert main(["score", "--in", str(corpus_path), "--provider", "lexicon"]) == 0
    assert corpus_path.read_bytes() == before
    sidecar = tmp_path / "corpus.scores.json"
    assert sidecar.exists()
    entries = json.loads(sidecar.read_text())["entries"]
    raw = loads(before.decode())
    scorable = [c for c in raw.all_comments() if not c.tombstone]
    assert set(entries) == {c.id for c in scorable}


def test_score_with_custom_lexicon(tmp_path):
    config = write_config(tmp_path)
    corpus_path = tmp_path / "corpus.json"
    main(["synth", "--config", str(config), "--seed", "3", "--out", str(corpus_path)])
    lexicon_path = tmp_path / "lex.json"
    lexicon_path.write_text(json.dumps({"agree": 0.8}))
    assert main(["score", "--in", str(corpus_path), "--provider", "lexicon", "--lexicon", str(lexicon_path)]) == 0
    entries = json.loads((tmp_path / "corpus.scores.json").read_text())["entries"]
    raw = loads(corpus_path.read_text())
    for c in raw.all_comments():
        if not c.tombstone:
            assert entries[c.id]["value"] == score_lexicon(c.body, {"agree": 0.8}).value


def test_pipeline_chain_matches_flat_oracles(tmp_path):
    config = write_config(tmp_path)
    corpus_path = tmp_path / "corpus.json"
    report_path = tmp_path / "report.json"
    anchor = BASE_TIME + DAY
    assert main(["synth", "--config", str(config), "--seed", "11", "--out", str(corpus_path)]) == 0
    assert main(["score", "--in", str(corpus_path), "--provider", "lexicon"]) == 0
    assert main([
        "report", "--in", str(corpus_path),
        "--window", f"{anchor},24h", "--out", str(report_path),
    ]) == 0

    report = json.loads(report_path.read_text())
    # independent reconstruction: re-score each body straight from the raw file
    corpus = loads(corpus_path.read_text())
    for thread in corpus.threads:
        for c in thread.comments.values():
            c.toxicity = None if c.tombstone else score_lexicon(c.body, DEFAULT_LEXICON).value

    by_id = {entry["post_id"]: entry for entry in report["posts"]}
    for thread in corpus.threads:
        counts, total = oracles.breakdown_flat(thread.comments.values(), anchor, DAY, 0.2, 10)
        got = by_id[thread.post.id]["breakdown"]
        assert got["total"] == total
        assert got["toxic_only"] == counts["toxic_only"]
        assert got["both"] == counts["both"]
        flat_total, flat_toxic, _ = oracles.series_flat(
            thread.comments.values(), anchor, DAY, 48, 0.2, 10
        )
        assert by_id[thread.post.id]["series"]["total"] == flat_total
        assert by_id[thread.post.id]["series"]["toxic"] == flat_toxic
    for key in ("recency", "toxicity", "score", "activity"):
        assert report["sort_orders"][key] == oracles.sort_posts_flat(corpus, key, anchor, DAY, 0.2, 10)


def test_report_rejects_bad_window(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["report", "--in", "x.json", "--window", "notawindow", "--out", "y.json"])
    assert exc.value.code == 2


def test_report_missing_corpus_exits_1(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["report", "--in", str(tmp_path / "absent.json"), "--window", "123,2h", "--out", str(out)])
    assert code == 1
    assert not out.exists()


class _FixtureHandler(BaseHTTPRequestHandler):
    session: dict = {}

    def do_GET(self):
        path = self.path.split("?")[0]
        payload = self.session.get(path)
        if payload is None:
            self.send_response(404)
            self.end_headers()
            return
        body = json.dumps(payload).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


def test_ingest_against_local_fixture_server(tmp_path, monkeypatch):
    import time

    now = int(time.time())  # ingest spans are relative to the real clock
    _FixtureHandler.session = {
        "/r/demo/posts": {"posts": [
            {"id": "p1", "title": "T", "author": "a", "created_at": now - 100, "score": 2},
        ]},
        "/r/demo/posts/p1/comments": {
            "post": {"id": "p1", "title": "T", "author": "a", "created_at": now - 100, "score": 2},
            "comments": [
                {"id": "c1", "author": "b", "body": "hi", "created_at": now - 50, "score": 1},
                {"id": "c2", "parent_id": "c1", "author": "c", "body": "yo", "created_at": now - 10, "score": 0},
            ],
        },
    }
    server = ThreadingHTTPServer(("127.0.0.1", 0), _FixtureHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        monkeypatch.setenv(PROVIDER_URL_ENV, f"http://127.0.0.1:{server.server_port}")
        out = tmp_path / "fetched.json"
        assert main(["ingest", "--subreddit", "demo", "--span", "2d", "--out", str(out)]) == 0
        corpus = loads(out.read_text())
        assert corpus.subreddit == "demo"
        assert len(corpus.threads) == 1
        assert corpus.threads[0].comments["c2"].depth == 1
    finally:
        server.shutdown()


def test_ingest_without_provider_exits_1(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv(PROVIDER_URL_ENV, raising=False)
    out = tmp_path / "never.json"
    assert main(["ingest", "--subreddit", "demo", "--span", "1d", "--out", str(out)]) == 1
    assert "provider" in capsys.readouterr().err.lower()
    assert not out.exists()
