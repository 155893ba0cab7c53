"""Plain-text incidence files.

Format::

    points N
    blocks M
    <M lines of ascending point indices, blocks in lexicographic order>

LF endings, ASCII decimal, single spaces.  Files that are valid but not in
canonical order are canonicalized with a :class:`NonCanonicalInput` warning,
or rejected under ``strict``.  A JSON report carrying a ``structure`` field is
accepted too, so CLI commands can be chained through pipes.
"""

from __future__ import annotations

import json
import re
import warnings

from .errors import NonCanonicalInput, ParseError
from .incidence import IncidenceStructure, new_structure

_HEADER = re.compile(r"^(points|blocks) (0|[1-9][0-9]*)$")


def serialize(S: IncidenceStructure) -> str:
    lines = [f"points {S.num_points}", f"blocks {S.num_blocks}"]
    lines.extend(" ".join(map(str, b)) for b in S.blocks)
    return "\n".join(lines) + "\n"


def structure_to_json(S: IncidenceStructure) -> dict:
    return {"points": S.num_points, "blocks": [list(b) for b in S.blocks]}


def _from_json(text: str, strict: bool) -> IncidenceStructure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    st = doc.get("structure") if isinstance(doc, dict) else None
    if not isinstance(st, dict) or "points" not in st or "blocks" not in st:
        raise ParseError("JSON input has no 'structure' with 'points' and 'blocks'", 1)
    try:
        n = int(st["points"])
        blocks = [[int(x) for x in b] for b in st["blocks"]]
    except (TypeError, ValueError):
        raise ParseError("malformed 'structure' field", 1) from None
    return _build(n, blocks, list(range(3, 3 + len(blocks))), strict)


def _build(n: int, blocks: list[list[int]], linenos: list[int], strict: bool) -> IncidenceStructure:
    canonical = True
    for b, ln in zip(blocks, linenos):
        if len(set(b)) != len(b):
            raise ParseError("repeated point index in block", ln)
        for x in b:
            if not 0 <= x < n:
                raise ParseError(f"point index {x} outside [0, {n})", ln)
        if b != sorted(b):
            canonical = False
    seen: dict[tuple[int, ...], int] = {}
    for b, ln in zip(blocks, linenos):
        key = tuple(sorted(b))
        if key in seen:
            raise ParseError(f"block repeats line {seen[key]}", ln)
        seen[key] = ln
    keys = [tuple(sorted(b)) for b in blocks]
    if keys != sorted(keys):
        canonical = False
    if not canonical:
        if strict:
            raise ParseError("blocks are not in canonical order", linenos[0] if linenos else 1)
        warnings.warn("input was not canonical; reordered", NonCanonicalInput, stacklevel=3)
    return new_structure(n, blocks)


def parse(text: str, *, strict: bool = False) -> IncidenceStructure:
    if text.lstrip().startswith("{"):
        return _from_json(text, strict)
    if "\r" in text:
        if strict:
            raise ParseError("CR characters are not allowed", 1)
        warnings.warn("CRLF line endings converted", NonCanonicalInput, stacklevel=2)
        text = text.replace("\r\n", "\n").replace("\r", "\n")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    elif strict and lines:
        raise ParseError("missing final newline", len(lines))
    header = []
    for i, key in enumerate(("points", "blocks")):
        if i >= len(lines):
            raise ParseError(f"missing '{key}' header", i + 1)
        m = _HEADER.match(lines[i])
        if not m or m.group(1) != key:
            raise ParseError(f"expected '{key} <count>'", i + 1)
        header.append(int(m.group(2)))
    n, count = header
    body = lines[2:]
    if len(body) != count:
        raise ParseError(f"header says {count} blocks, found {len(body)}", min(len(lines), 2 + count) or 1)
    blocks = []
    for i, row in enumerate(body):
        if not re.fullmatch(r"(0|[1-9][0-9]*)( (0|[1-9][0-9]*))*", row):
            raise ParseError("block must be space-separated decimal indices", i + 3)
        blocks.append([int(x) for x in row.split(" ")])
    return _build(n, blocks, list(range(3, 3 + count)), strict)
