"""Versioned JSON reports emitted by the command line."""

from __future__ import annotations

import json
from importlib import resources

from .incidence import IncidenceStructure
from .io import structure_to_json

SCHEMA_VERSION = "1.0"


def load_schema() -> dict:
    return json.loads(resources.files("papc").joinpath("report_schema.json").read_text())


def stats(S: IncidenceStructure) -> dict:
    hist: dict[str, int] = {}
    for v in sorted(int(x) for x in S.valencies):
        hist[str(v)] = hist.get(str(v), 0) + 1
    return {
        "points": S.num_points,
        "blocks": S.num_blocks,
        "block_sizes": sorted(S.block_sizes),
        "valency_histogram": hist,
    }


def make_report(command: str, ok: bool, seconds: float, **sections) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "ok": ok, "timing": {"seconds": round(seconds, 6)}}
    for key, val in sections.items():
        if val is None:
            continue
        if isinstance(val, IncidenceStructure):
            doc[key] = structure_to_json(val)
        else:
            doc[key] = val
    return doc


def dumps(doc: dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
