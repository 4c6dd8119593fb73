"""HTTP service: snapshot serving, analytics endpoints, moderation log."""

from .app import create_app
from .config import ServerConfig
from .state import ActionLog, AppState, ModerationAction, Snapshot, load_corpus

__all__ = [
    "ActionLog",
    "AppState",
    "ModerationAction",
    "ServerConfig",
    "Snapshot",
    "create_app",
    "load_corpus",
]
