"""Command-line entry point tying the pipeline together.

Subcommands: ingest (pull a subreddit snapshot), synth (deterministic
offline corpus), score (attach toxicity via remote or lexicon provider),
report (dump every aggregate as JSON), serve (run the HTTP API).
Output files are written to a temp file and atomically renamed, so a
failing command never leaves a partial artifact behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__, analytics
from .errors import ThreadLensError
from .model import dumps, loads, validate_corpus
from .provider import ProviderClient, ProviderConfig, fetch_subreddit
from .scoring import LexiconScorer, RemoteScorer, ScoreCache, load_lexicon, score_corpus
from .synth import SyntheticConfig, generate_synthetic

_DURATION_UNITS = {"s": 1, "m": 60, "h": 3600, "d": 86400}


def parse_duration(text: str) -> int:
    """'90', '90s', '15m', '2h', or '2d' -> seconds."""
    text = text.strip().lower()
    unit = 1
    if text and text[-1] in _DURATION_UNITS:
        unit = _DURATION_UNITS[text[-1]]
        text = text[:-1]
    try:
        value = int(text) * unit
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid duration {text!r}") from None
    return value


def _positive_duration(text: str) -> int:
    value = parse_duration(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"duration must be > 0, got {value}")
    return value


def _window_arg(text: str) -> tuple[int, int]:
    """'<anchor>,<span>' -> (epoch seconds, span seconds)."""
    anchor_text, sep, span_text = text.partition(",")
    if not sep:
        raise argparse.ArgumentTypeError("window must look like <anchor>,<span> (e.g. 1700000000,2h)")
    try:
        anchor = int(anchor_text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid window anchor {anchor_text!r}") from None
    return anchor, _positive_duration(span_text)


def write_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _load_corpus_file(path):
    corpus = loads(Path(path).read_text(encoding="utf-8"))
    validate_corpus(corpus)
    return corpus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threadlens", description=__doc__)
    parser.add_argument("--version", action="version", version=f"threadlens {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="fetch a subreddit snapshot into a corpus file")
    p.add_argument("--subreddit", required=True)
    p.add_argument("--span", required=True, type=_positive_duration, help="lookback window, e.g. 2d or 48h")
    p.add_argument("--out", required=True)
    p.add_argument("--provider-config", default=None, help="JSON file with provider endpoint settings")

    p = sub.add_parser("synth", help="generate a deterministic synthetic corpus")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("score", help="attach toxicity scores; writes <corpus>.scores.json")
    p.add_argument("--in", dest="corpus", required=True)
    p.add_argument("--provider", required=True, choices=["remote", "lexicon"])
    p.add_argument("--lexicon", default=None, help="JSON term->weight map (lexicon provider)")
    p.add_argument("--endpoint", default=None, help="remote scorer URL (or env)")
    p.add_argument("--key", default=None, help="remote scorer API key (or env)")

    p = sub.add_parser("report", help="emit every aggregate for offline inspection")
    p.add_argument("--in", dest="corpus", required=True)
    p.add_argument("--window", required=True, type=_window_arg, help="<anchor>,<span>, e.g. 1700000000,24h")
    p.add_argument("--out", required=True)
    p.add_argument("--toxicity-threshold", type=float, default=analytics.DEFAULT_TOXICITY_THRESHOLD)
    p.add_argument("--score-threshold", type=int, default=analytics.DEFAULT_SCORE_THRESHOLD)
    p.add_argument("--bins", type=int, default=analytics.DEFAULT_BINS)
    p.add_argument("--buckets", type=int, default=analytics.DEFAULT_HISTOGRAM_BUCKETS)

    p = sub.add_parser("serve", help="run the HTTP API over a corpus snapshot")
    p.add_argument("--corpus", default=None)
    p.add_argument("--log", default=None, help="moderation action log (JSON Lines)")
    p.add_argument("--addr", default=None, help="host:port to listen on")
    p.add_argument("--config", default=None, help="JSON server config file")
    p.add_argument("--ui", default=None, help="directory with a built frontend bundle")

    return parser


def cmd_ingest(args) -> int:
    config = ProviderConfig.load(args.provider_config)
    client = ProviderClient(config)
    try:
        corpus = fetch_subreddit(args.subreddit, args.span, client)
    finally:
        client.close()
    write_atomic(args.out, dumps(corpus))
    print(f"wrote {corpus.comment_count()} comments in {len(corpus.threads)} threads to {args.out}")
    return 0


def cmd_synth(args) -> int:
    config = SyntheticConfig.from_json_file(args.config)
    corpus = generate_synthetic(config, args.seed)
    write_atomic(args.out, dumps(corpus))
    print(f"wrote {corpus.comment_count()} comments in {len(corpus.threads)} threads to {args.out}")
    return 0


def cmd_score(args) -> int:
    corpus = _load_corpus_file(args.corpus)
    if args.provider == "lexicon":
        provider = LexiconScorer(load_lexicon(args.lexicon) if args.lexicon else None)
    else:
        provider = RemoteScorer(endpoint=args.endpoint, api_key=args.key)
    sidecar = ScoreCache.sidecar_path(args.corpus)
    cache = ScoreCache.load(sidecar)
    before = len(cache)
    score_corpus(corpus, provider, cache)
    cache.save(sidecar)
    print(f"scored {len(cache) - before} new comments ({len(cache)} cached) -> {sidecar}")
    return 0


def cmd_report(args) -> int:
    from .server.state import load_corpus  # applies the score sidecar

    snapshot = load_corpus(args.corpus)
    anchor, span = args.window
    doc = analytics.build_report(
        snapshot.corpus,
        analytics.TimeWindow(anchor=anchor, span_seconds=span),
        analytics.MetricThresholds(
            toxicity_threshold=args.toxicity_threshold,
            score_threshold=args.score_threshold,
        ),
        bins=args.bins,
        buckets=args.buckets,
    )
    write_atomic(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    print(f"wrote report for {len(doc['posts'])} posts to {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import ActionLog, AppState, ServerConfig, create_app
    from .server.app import attach_ui

    config = ServerConfig.load(args.config)
    if args.corpus:
        config.corpus_path = args.corpus
    if args.log:
        config.action_log_path = args.log
    if args.addr:
        config.apply_addr(args.addr)
    if args.ui:
        config.ui_dir = args.ui

    state = AppState(ActionLog(config.action_log_path))
    if config.corpus_path:
        state.load(config.corpus_path)
    app = create_app(state)
    if config.ui_dir:
        attach_ui(app, config.ui_dir)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "synth": cmd_synth,
    "score": cmd_score,
    "report": cmd_report,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.subcommand](args)
    except ThreadLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
