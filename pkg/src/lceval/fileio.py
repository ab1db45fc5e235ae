"""Atomic file writing shared by the pipeline, splits, and CLI."""

from __future__ import annotations

import os


def atomic_write(path: str, content: str) -> None:
    """Write content to path via a temp file + rename; no partial outputs."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
