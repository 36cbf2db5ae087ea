"""JSON formats: matrix literals, corpora and run configuration.

A matrix literal is ``{"rows": [[...], ...]}`` with integer entries or
``"p/q"`` strings. Floats are refused so nothing is silently rounded.
A corpus is a JSON list (or ``{"entries": [...]}``) of objects with an
``id``, a ``rows`` matrix literal and optional string ``metadata``.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ParseError
from .exact import RationalMatrix

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

PRECISION_ENV = "ABCQI_PRECISION"


def parse_entry(x) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"matrix entry {x!r} must be an integer or a 'p/q' string")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        m = _RATIONAL.match(x)
        if not m:
            raise ParseError(f"bad rational literal {x!r}")
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in {x!r}")
        return Fraction(int(m.group(1)), den)
    raise ParseError(f"matrix entry {x!r} must be an integer or a 'p/q' string")


def matrix_from_json(obj) -> RationalMatrix:
    if not isinstance(obj, dict) or "rows" not in obj:
        raise ParseError('matrix literal must be an object with a "rows" key')
    rows = obj["rows"]
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError('"rows" must be a nonempty list of lists')
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError(f"matrix must be square; got {n} rows of lengths {[len(r) for r in rows]}")
    return RationalMatrix([[parse_entry(x) for x in r] for r in rows])


def matrix_to_json(M: RationalMatrix) -> dict:
    def enc(q: Fraction):
        return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

    return {"rows": [[enc(x) for x in r] for r in M.rows]}


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {what}: {exc}") from None


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def load_matrix(path: str) -> RationalMatrix:
    return matrix_from_json(_load_json(read_text(path), path))


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    matrix: Optional[RationalMatrix]
    metadata: dict = field(default_factory=dict)
    rejection: Optional[str] = None  # reason code when the literal did not parse
    message: Optional[str] = None


def parse_corpus(obj) -> list:
    """Entries sorted by id. A bad matrix literal is recorded on its entry;
    a bad corpus structure (missing or duplicate ids) is a ParseError."""
    if isinstance(obj, dict) and "entries" in obj:
        obj = obj["entries"]
    if not isinstance(obj, list):
        raise ParseError('corpus must be a list of entries or {"entries": [...]}')
    seen = set()
    out = []
    for k, item in enumerate(obj):
        if not isinstance(item, dict) or "id" not in item:
            raise ParseError(f"corpus entry {k} needs an id")
        eid = str(item["id"])
        if eid in seen:
            raise ParseError(f"duplicate corpus id {eid!r}")
        seen.add(eid)
        meta = item.get("metadata", {})
        if not isinstance(meta, dict):
            raise ParseError(f"metadata of {eid!r} must be an object")
        meta = {str(a): str(b) for a, b in meta.items()}
        try:
            M = matrix_from_json(item)
        except ParseError as exc:
            out.append(CorpusEntry(eid, None, meta, exc.code, str(exc)))
        else:
            out.append(CorpusEntry(eid, M, meta))
    out.sort(key=lambda e: e.id)
    return out


def load_corpus(path: str) -> list:
    return parse_corpus(_load_json(read_text(path), path))


@dataclass(frozen=True)
class RunConfig:
    precision: int = 60
    t_max: float = 40.0
    degree_threshold: float = 0.2
    max_multiple: int = 8
    output: Optional[str] = None

    def __post_init__(self):
        if self.precision <= 0 or self.t_max <= 0 or self.degree_threshold <= 0 or self.max_multiple <= 0:
            raise ValueError("run configuration values must be positive")

    def to_json(self) -> dict:
        return asdict(self)


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return RunConfig.precision
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{PRECISION_ENV}={raw!r} is not an integer") from None
    if value <= 0:
        raise ParseError(f"{PRECISION_ENV} must be positive")
    return value


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
