"""Exact weighted relational algebra.

Two relation types live here:

* :class:`ClassicRelation` -- a finite set of tuples over an attribute set.
* :class:`WeightedRelation` -- a finite table whose rows carry one exact
  rational weight each.  Only nonzero rows are stored; an absent row reads
  as weight 0.

Rows are stored as plain Python tuples of string values aligned with the
relation's schema, which is always kept in canonical (lexicographic) order.
All operations are pure and return new relations.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Any, Union

from .errors import SchemaError

WeightLike = Union[int, str, Fraction]


def attrset(names: str | Iterable[str] | None) -> frozenset[str]:
    """Build an attribute set from ``"A,B"``, ``"_"``, an iterable or None."""
    if names is None:
        return frozenset()
    if isinstance(names, str):
        text = names.strip()
        if text in ("", "_"):
            return frozenset()
        names = [n.strip() for n in text.split(",")]
    out = []
    for name in names:
        if not isinstance(name, str) or not name:
            raise SchemaError(f"attribute names must be non-empty strings, got {name!r}")
        out.append(name)
    if len(set(out)) != len(out):
        raise SchemaError(f"duplicate attribute names in {out!r}")
    return frozenset(out)


def canon(attrs: Iterable[str]) -> tuple[str, ...]:
    """Canonical ordering of an attribute set."""
    return tuple(sorted(attrs))


def fmt_attrs(attrs: Iterable[str]) -> str:
    names = canon(attrs)
    return ",".join(names) if names else "_"


def to_weight(value: WeightLike) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"weights must be exact rationals, got {value!r}")
    if isinstance(value, (Rational, str)):
        return Fraction(value)
    raise TypeError(f"unsupported weight {value!r}")


def _picker(schema: tuple[str, ...], sub: Iterable[str]):
    """Return a function mapping a row over ``schema`` to its restriction to ``sub``."""
    idx = tuple(schema.index(a) for a in canon(sub))
    return lambda row: tuple(row[i] for i in idx)


def _require_subset(sub: frozenset, schema: tuple[str, ...], what: str = "attribute set") -> None:
    missing = sub - set(schema)
    if missing:
        raise SchemaError(f"{what} {fmt_attrs(sub)} not contained in schema "
                          f"{fmt_attrs(schema)}: missing {fmt_attrs(missing)}")


def _row_fixer(schema_in: Iterable[str]):
    """Return the canonical schema and a function canonicalizing input tuples."""
    given = tuple(schema_in)
    schema = canon(attrset(given))
    perm = tuple(given.index(a) for a in schema)

    def fix(row) -> tuple[str, ...]:
        if isinstance(row, Mapping):
            if set(row) != set(schema):
                raise SchemaError(f"tuple binds {fmt_attrs(row)}, expected {fmt_attrs(schema)}")
            return tuple(str(row[a]) for a in schema)
        row = tuple(row)
        if len(row) != len(given):
            raise SchemaError(f"tuple {row!r} has {len(row)} values for {len(given)} attributes")
        return tuple(str(row[i]) for i in perm)

    return schema, fix


def value_key(value: str):
    """Sort key placing integer-looking values in numeric order."""
    try:
        return (0, int(value), value)
    except ValueError:
        return (1, 0, value)


def row_key(row: tuple[str, ...]):
    return tuple(value_key(v) for v in row)


class ClassicRelation:
    """A set of tuples over a fixed attribute set.

    ``rows`` may contain mappings ``{attr: value}`` or sequences aligned with
    ``schema`` in the order given.  Values are stored as strings.
    """

    __slots__ = ("schema", "rows")

    def __init__(self, schema: Iterable[str], rows: Iterable[Any] = ()):
        canon_schema, fix = _row_fixer(schema)
        self.schema: tuple[str, ...] = canon_schema
        self.rows: frozenset[tuple[str, ...]] = frozenset(fix(r) for r in rows)

    @classmethod
    def _raw(cls, schema: tuple[str, ...], rows: Iterable[tuple[str, ...]]) -> ClassicRelation:
        obj = cls.__new__(cls)
        obj.schema = schema
        obj.rows = frozenset(rows)
        return obj

    @property
    def attrs(self) -> frozenset[str]:
        return frozenset(self.schema)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[tuple[str, ...]]:
        return iter(sorted(self.rows, key=row_key))

    def __contains__(self, row) -> bool:
        if isinstance(row, Mapping):
            row = tuple(str(row[a]) for a in self.schema)
        return tuple(row) in self.rows

    def tuples(self) -> list[dict[str, str]]:
        return [dict(zip(self.schema, r)) for r in self]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassicRelation):
            return NotImplemented
        return self.schema == other.schema and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.schema, self.rows))

    def __repr__(self) -> str:
        body = ", ".join("(" + ",".join(r) + ")" for r in self)
        return f"ClassicRelation({fmt_attrs(self.schema)}: {{{body}}})"


class WeightedRelation:
    """A relation whose tuples carry exact rational weights.

    ``rows`` is either a mapping from tuple to weight or an iterable of
    ``(tuple, weight)`` pairs; tuples follow the same conventions as
    :class:`ClassicRelation`.  Zero weights are dropped, so ``rows`` is
    always the support.  Repeated tuples are rejected.
    """

    __slots__ = ("schema", "_rows")

    def __init__(self, schema: Iterable[str], rows: Mapping | Iterable = ()):
        canon_schema, fix = _row_fixer(schema)
        pairs = rows.items() if isinstance(rows, Mapping) else rows
        table: dict[tuple[str, ...], Fraction] = {}
        for tup, w in pairs:
            key = fix(tup)
            if key in table:
                raise SchemaError(f"duplicate tuple {key!r}")
            w = to_weight(w)
            table[key] = w
        self.schema: tuple[str, ...] = canon_schema
        self._rows = {k: w for k, w in table.items() if w != 0}

    @classmethod
    def _raw(cls, schema: tuple[str, ...], rows: dict[tuple[str, ...], Fraction]) -> WeightedRelation:
        obj = cls.__new__(cls)
        obj.schema = schema
        obj._rows = {k: w for k, w in rows.items() if w != 0}
        return obj

    @classmethod
    def constant(cls, r: ClassicRelation, c: WeightLike = 1) -> WeightedRelation:
        """The constant relation giving weight ``c`` to every tuple of ``r``."""
        c = to_weight(c)
        return cls._raw(r.schema, {row: c for row in r.rows})

    @classmethod
    def unit(cls) -> WeightedRelation:
        """The empty-schema relation with weight 1 (product-join identity)."""
        return cls._raw((), {(): Fraction(1)})

    @property
    def rows(self) -> Mapping[tuple[str, ...], Fraction]:
        return MappingProxyType(self._rows)

    @property
    def attrs(self) -> frozenset[str]:
        return frozenset(self.schema)

    def weight(self, row) -> Fraction:
        if isinstance(row, Mapping):
            row = tuple(str(row[a]) for a in self.schema)
        return self._rows.get(tuple(row), Fraction(0))

    def total(self) -> Fraction:
        return sum(self._rows.values(), Fraction(0))

    def support(self) -> ClassicRelation:
        return ClassicRelation._raw(self.schema, self._rows)

    def is_positive(self) -> bool:
        return all(w > 0 for w in self._rows.values())

    def scale(self, c: WeightLike) -> WeightedRelation:
        c = to_weight(c)
        return WeightedRelation._raw(self.schema, {k: w * c for k, w in self._rows.items()})

    def items(self) -> list[tuple[tuple[str, ...], Fraction]]:
        """Rows in canonical order."""
        return [(k, self._rows[k]) for k in sorted(self._rows, key=row_key)]

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedRelation):
            return NotImplemented
        return self.schema == other.schema and self._rows == other._rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = ", ".join(f"({','.join(k)}): {w}" for k, w in self.items())
        return f"WeightedRelation({fmt_attrs(self.schema)}: {{{body}}})"


# -- classic operators -------------------------------------------------------

def project(r: ClassicRelation, onto: Iterable[str]) -> ClassicRelation:
    onto = attrset(onto)
    _require_subset(onto, r.schema, "projection target")
    pick = _picker(r.schema, onto)
    return ClassicRelation._raw(canon(onto), (pick(t) for t in r.rows))


def _join_rows(s1: tuple[str, ...], rows1: Iterable, s2: tuple[str, ...], rows2: Iterable):
    """Hash join; yields (joined schema, [(joined row, row1, row2), ...])."""
    shared = set(s1) & set(s2)
    out_schema = canon(set(s1) | set(s2))
    key1, key2 = _picker(s1, shared), _picker(s2, shared)
    src = [(0, s1.index(a)) if a in s1 else (1, s2.index(a)) for a in out_schema]
    index: dict[tuple, list] = defaultdict(list)
    for t2 in rows2:
        index[key2(t2)].append(t2)
    joined = []
    for t1 in rows1:
        for t2 in index.get(key1(t1), ()):
            pair = (t1, t2)
            joined.append((tuple(pair[side][i] for side, i in src), t1, t2))
    return out_schema, joined


def natural_join(r1: ClassicRelation, r2: ClassicRelation) -> ClassicRelation:
    schema, joined = _join_rows(r1.schema, r1.rows, r2.schema, r2.rows)
    return ClassicRelation._raw(schema, (t for t, _, _ in joined))


# -- weighted operators ------------------------------------------------------

def marginalize(phi: WeightedRelation, onto: Iterable[str]) -> WeightedRelation:
    """Sum the weights of all tuples sharing the same ``onto``-value."""
    onto = attrset(onto)
    _require_subset(onto, phi.schema, "marginalization target")
    pick = _picker(phi.schema, onto)
    sums: dict[tuple[str, ...], Fraction] = defaultdict(Fraction)
    for row, w in phi.rows.items():
        sums[pick(row)] += w
    return WeightedRelation._raw(canon(onto), sums)


def product_join(phi: WeightedRelation, psi: WeightedRelation) -> WeightedRelation:
    """Natural join of the supports with pointwise multiplied weights."""
    schema, joined = _join_rows(phi.schema, phi.rows, psi.schema, psi.rows)
    w1, w2 = phi.rows, psi.rows
    return WeightedRelation._raw(schema, {t: w1[a] * w2[b] for t, a, b in joined})


def inverse(phi: WeightedRelation) -> WeightedRelation:
    return WeightedRelation._raw(phi.schema, {t: 1 / w for t, w in phi.rows.items()})


def monotone_join(phi: WeightedRelation, left: Iterable[str], right: Iterable[str]) -> WeightedRelation:
    """Recombine two marginals of ``phi``, dividing out their shared marginal."""
    left, right = attrset(left), attrset(right)
    _require_subset(left, phi.schema, "left operand")
    _require_subset(right, phi.schema, "right operand")
    return product_join(
        product_join(marginalize(phi, left), marginalize(phi, right)),
        inverse(marginalize(phi, left & right)),
    )
