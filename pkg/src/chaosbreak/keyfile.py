"""Text key files: four whitespace-separated decimals ``x0 y0 K L``."""

from __future__ import annotations

import math
import os
import re

from .chaos_maps import TWO_PI, SecretKey

FIELDS = ("x0", "y0", "K", "L")


class KeyFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_key(text: str) -> SecretKey:
    tokens = list(re.finditer(r"\S+", text))
    if len(tokens) != 4:
        pos = _position(text, tokens[4].start()) if len(tokens) > 4 else (None, None)
        raise KeyFileError(f"expected 4 values (x0 y0 K L), found {len(tokens)}", *pos)
    values = []
    for name, tok in zip(FIELDS, tokens):
        line, col = _position(text, tok.start())
        raw = tok.group()
        try:
            v = int(raw) if name == "L" else float(raw)
        except ValueError:
            kind = "an integer" if name == "L" else "a decimal number"
            raise KeyFileError(f"{name} must be {kind}, got {raw!r}", line, col) from None
        if name != "L" and not math.isfinite(v):
            raise KeyFileError(f"{name} must be finite, got {raw!r}", line, col)
        bad = {
            "x0": not 0 < v < TWO_PI,
            "y0": not 0 < v < TWO_PI,
            "K": not v > 18,
            "L": not 100 < v < 1100,
        }[name]
        if bad:
            rule = {"x0": "0 < x0 < 2pi", "y0": "0 < y0 < 2pi", "K": "K > 18",
                    "L": "100 < L < 1100"}[name]
            raise KeyFileError(f"{name}={raw} violates {rule}", line, col)
        values.append(v)
    return SecretKey(*values)


def read_key(path: str | os.PathLike) -> SecretKey:
    with open(path, encoding="utf-8") as fh:
        return parse_key(fh.read())


def format_key(key: SecretKey) -> str:
    return f"{key.x0!r} {key.y0!r} {key.K!r} {key.L}\n"
