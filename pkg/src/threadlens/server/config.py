"""Server configuration: JSON config file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

CORPUS_ENV = "THREADLENS_CORPUS"
ACTION_LOG_ENV = "THREADLENS_ACTION_LOG"
ADDR_ENV = "THREADLENS_ADDR"
UI_DIR_ENV = "THREADLENS_UI_DIR"


@dataclass
class ServerConfig:
    corpus_path: str | None = None
    action_log_path: str = "actions.jsonl"
    host: str = "127.0.0.1"
    port: int = 8008
    ui_dir: str | None = None

    @classmethod
    def load(cls, path=None) -> "ServerConfig":
        fields: dict = {}
        if path is not None:
            with open(path, encoding="utf-8") as fh:
                fields.update(json.load(fh))
        config = cls(**fields)
        if os.environ.get(CORPUS_ENV):
            config.corpus_path = os.environ[CORPUS_ENV]
        if os.environ.get(ACTION_LOG_ENV):
            config.action_log_path = os.environ[ACTION_LOG_ENV]
        if os.environ.get(ADDR_ENV):
            config.apply_addr(os.environ[ADDR_ENV])
        if os.environ.get(UI_DIR_ENV):
            config.ui_dir = os.environ[UI_DIR_ENV]
        return config

    def apply_addr(self, addr: str) -> None:
        host, _, port = addr.rpartition(":")
        if not host:
            raise ValueError(f"address must look like host:port, got {addr!r}")
        self.host = host
        self.port = int(port)
