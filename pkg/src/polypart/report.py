"""Line-oriented ``key = value`` reports.

Grammar: one entry per line, ``key = value``. Keys are made of
ASCII letters, digits, ``_`` and ``.``; the value runs to the end of
the line with surrounding blanks stripped. Blank lines and lines
starting with ``#`` are ignored. Keys are unique. Writers emit entries in
a fixed order and never include timestamps, so equal runs give equal
bytes.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError

_KEY = re.compile(r"^[A-Za-z0-9_.]+$")


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(format_value(x) for x in v)
    if v is None:
        return "none"
    return str(v)


def dumps(entries) -> str:
    """Serialize an iterable of (key, value) pairs or a dict."""
    if isinstance(entries, dict):
        entries = entries.items()
    seen = set()
    lines = []
    for k, v in entries:
        if not _KEY.match(k):
            raise ValueError(f"bad report key {k!r}")
        if k in seen:
            raise ValueError(f"duplicate report key {k!r}")
        seen.add(k)
        text = format_value(v)
        if "\n" in text:
            raise ValueError(f"value for {k!r} spans lines")
        lines.append(f"{k} = {text}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> dict:
    out: dict = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if " = " not in line and not line.endswith(" ="):
            raise ParseError(f"line {no}: expected 'key = value'")
        k, _, v = line.partition("=")
        k = k.strip()
        if not _KEY.match(k):
            raise ParseError(f"line {no}: bad key {k!r}")
        if k in out:
            raise ParseError(f"line {no}: duplicate key {k!r}")
        out[k] = v.strip()
    return out


def write(entries, path) -> None:
    Path(path).write_text(dumps(entries))


def read(path) -> dict:
    try:
        return loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read report {path}: {exc}") from exc


def config_entries(config: dict) -> list:
    """Resolved run configuration under ``config.*`` keys, sorted by name."""
    return [(f"config.{k}", config[k]) for k in sorted(config)]
