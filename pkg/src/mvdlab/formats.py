"""Text formats: relation files, the statement grammar and Z-EMVD set files.

Relation file::

    A1,A2,#weight      <- header; the #weight column is optional
    # comment
    0,0,3/4
    0,1,2

Statement grammar: ``X ->> Y | Z`` where each side is a comma-separated
attribute list or ``_`` for the empty set.

Z-EMVD set file::

    Z: Z
    X0 ->> X1 | Z
    X1 ->> X0 | Z
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path

from .dependency import DependencyStatement, Kind
from .errors import InputError, MvdLabError
from .implication import ZEMVDSet
from .relation import ClassicRelation, WeightedRelation, fmt_attrs, row_key

WEIGHT_COLUMN = "#weight"
ARROW = "->>"
_NAME = re.compile(r"[^\s,|#]+")
_WEIGHT = re.compile(r"[+-]?\d+(?:/\d+)?")


def _content_lines(text: str):
    """Yield (line number, stripped text) skipping blanks and comments."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line


# -- statements ---------------------------------------------------------------

def _parse_attr_list(part: str, source: str, line: int | None) -> frozenset:
    part = part.strip()
    if part == "_":
        return frozenset()
    if not part:
        raise InputError("empty attribute list (write _ for the empty set)", source, line, part)
    names = [n.strip() for n in part.split(",")]
    for name in names:
        if not _NAME.fullmatch(name) or name == "_" or ARROW in name:
            raise InputError("invalid attribute name", source, line, name)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise InputError("attribute listed twice", source, line, dup)
    return frozenset(names)


def parse_statement(text: str, kind: Kind | str = Kind.EMVD, source: str = "<statement>",
                    line: int | None = None) -> DependencyStatement:
    """Parse ``X ->> Y | Z`` into a validated statement."""
    if text.count(ARROW) != 1:
        raise InputError(f"expected exactly one '{ARROW}'", source, line, text.strip())
    left, right = text.split(ARROW)
    if right.count("|") != 1:
        raise InputError("expected exactly one '|' after the arrow", source, line, right.strip())
    first, second = right.split("|")
    parts = [_parse_attr_list(p, source, line) for p in (left, first, second)]
    labels = ("left-hand side", "first component", "second component")
    for i, j in ((0, 1), (0, 2), (1, 2)):
        common = parts[i] & parts[j]
        if common:
            raise InputError(f"{labels[i]} and {labels[j]} are not disjoint",
                             source, line, fmt_attrs(common))
    return DependencyStatement(*parts, Kind(kind))


def format_statement(s: DependencyStatement) -> str:
    return str(s)


def _parse_statement_lines(text: str, source: str, kind: Kind | str):
    """Return (declared Z or None, [(line, statement)])."""
    z = None
    out = []
    for no, line in _content_lines(text):
        if line.startswith("Z:"):
            if z is not None or out:
                raise InputError("the Z: declaration must come first", source, no, line)
            z = _parse_attr_list(line[2:], source, no)
            continue
        out.append((no, parse_statement(line, kind, source, no)))
    return z, out


def parse_zemvd_set(text: str, source: str = "<sigma>") -> ZEMVDSet:
    z, rows = _parse_statement_lines(text, source, Kind.EMVD)
    if z is None:
        raise InputError("missing 'Z: ...' declaration", source, 1)
    for no, s in rows:
        if s.second != z:
            raise InputError(f"third component must equal the declared Z={fmt_attrs(z)}",
                             source, no, fmt_attrs(s.second))
    return ZEMVDSet(z, tuple(s for _, s in rows))


def parse_statement_set(text: str, source: str = "<sigma>") -> tuple[DependencyStatement, ...]:
    """Statements of a sigma file; a ``Z:`` line is optional here but enforced if present."""
    z, rows = _parse_statement_lines(text, source, Kind.EMVD)
    if z is not None:
        return parse_zemvd_set(text, source).statements
    return tuple(s for _, s in rows)


def format_zemvd_set(sigma: ZEMVDSet) -> str:
    lines = [f"Z: {fmt_attrs(sigma.z)}"] + [str(s) for s in sigma]
    return "\n".join(lines) + "\n"


# -- relations -------------------------------------------------------------------

def _parse_weight(token: str, source: str, line: int) -> Fraction:
    if not _WEIGHT.fullmatch(token):
        raise InputError("weight must be an integer or p/q", source, line, token)
    try:
        w = Fraction(token)
    except ZeroDivisionError:
        raise InputError("zero denominator", source, line, token) from None
    if w == 0:
        raise InputError("explicit zero weight (omit the row instead)", source, line, token)
    return w


def parse_relation(text: str, source: str = "<relation>") -> WeightedRelation:
    """Parse a relation file; without a ``#weight`` column every row weighs 1."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise InputError("missing header line", source, 1)
    header = [h.strip() for h in lines[0].lstrip("﻿").split(",")]
    weighted = header[-1] == WEIGHT_COLUMN
    names = header[:-1] if weighted else header
    for name in names:
        if not _NAME.fullmatch(name) or name == "_":
            raise InputError("invalid attribute name in header", source, 1, name)
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise InputError("duplicate attribute in header", source, 1, dup)
    width = len(names) + weighted
    rows: dict[tuple, Fraction] = {}
    for no, raw in enumerate(lines[1:], 2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")] if width else [line]
        if len(cells) != width:
            raise InputError(f"expected {width} fields, found {len(cells)}", source, no, line)
        values = tuple(cells[:len(names)])
        for v in values:
            if not v:
                raise InputError("empty value", source, no, line)
        w = _parse_weight(cells[-1], source, no) if weighted else Fraction(1)
        if values in rows:
            raise InputError("duplicate tuple", source, no, ",".join(values))
        rows[values] = w
    try:
        return WeightedRelation(names, rows)
    except MvdLabError as exc:
        raise InputError(str(exc), source) from None


def format_relation(rel: WeightedRelation | ClassicRelation) -> str:
    """Serialize with rows in canonical order; classic relations get no weight column."""
    if isinstance(rel, ClassicRelation):
        head = list(rel.schema)
        body = [",".join(t) for t in rel]
    else:
        head = list(rel.schema) + [WEIGHT_COLUMN]
        body = [",".join(list(t) + [str(w)]) for t, w in rel.items()]
    if not rel.schema and isinstance(rel, ClassicRelation):
        raise MvdLabError("an unweighted relation over no attributes has no file form")
    return "\n".join([",".join(head)] + body) + "\n"


def load_relation(path: str | Path) -> WeightedRelation:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_relation(text, str(path))


def load_zemvd_set(path: str | Path) -> ZEMVDSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_zemvd_set(text, str(path))


def load_statement_set(path: str | Path) -> tuple[DependencyStatement, ...]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_statement_set(text, str(path))
