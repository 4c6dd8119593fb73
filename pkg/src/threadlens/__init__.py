"""Moderation analytics for threaded discussions.

Pipeline: ingest (fetch or synthesize comment trees) -> score (attach
toxicity) -> analytics (recency-window metrics) -> serve (triage API).
"""

__version__ = "0.1.0"
