"""Internal helpers for path-or-stream arguments.

Every loader accepts a filesystem path, raw bytes, or an already-open
file object; writers accept a path or an open file object. Only paths are
opened (and closed) here. Binary streams handed to the text helpers are
wrapped in a UTF-8 view that is detached on exit so the caller's stream
stays open.
"""

from __future__ import annotations

import io
from contextlib import contextmanager
from pathlib import Path


@contextmanager
def text_reader(source):
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            yield f
    elif isinstance(source, bytes):
        yield io.StringIO(source.decode("utf-8"))
    elif not isinstance(source, io.TextIOBase) and hasattr(source, "readable"):
        wrapper = io.TextIOWrapper(source, encoding="utf-8")
        try:
            yield wrapper
        finally:
            wrapper.detach()
    else:
        yield source


@contextmanager
def text_writer(sink):
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="\n") as f:
            yield f
    elif not isinstance(sink, io.TextIOBase) and hasattr(sink, "writable"):
        wrapper = io.TextIOWrapper(sink, encoding="utf-8", newline="\n")
        try:
            yield wrapper
            wrapper.flush()
        finally:
            wrapper.detach()
    else:
        yield sink


@contextmanager
def binary_reader(source):
    if isinstance(source, (str, Path)):
        with open(source, "rb") as f:
            yield f
    elif isinstance(source, bytes):
        yield io.BytesIO(source)
    else:
        yield source


@contextmanager
def binary_writer(sink):
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as f:
            yield f
    else:
        yield sink
