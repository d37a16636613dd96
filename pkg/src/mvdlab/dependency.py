"""Dependency statements and their satisfaction checkers.

A statement ``X ->> Y | Z`` is a triple of pairwise-disjoint attribute sets
plus a kind telling which checker applies:

========  ==========================================================
MVD       classic relation, ``X ∪ Y ∪ Z`` equals the schema
EMVD      classic relation, checked on the projection onto ``XYZ``
GMVD      weighted relation, lossless under the monotone join
GEMVD     weighted relation, GMVD on the marginal onto ``XYZ``
CI        weighted relation, ``Y`` and ``Z`` independent given ``X``
========  ==========================================================

Weighted checkers require strictly positive weights.  Statements with an
empty ``Y`` or ``Z`` hold in every relation.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DomainError, SchemaError, ValidationError
from .relation import (
    ClassicRelation,
    WeightedRelation,
    _picker,
    _require_subset,
    attrset,
    fmt_attrs,
    marginalize,
    monotone_join,
    project,
)

MVD_METHODS = ("definition", "lemma1", "lemma2")


class Kind(str, Enum):
    MVD = "mvd"
    EMVD = "emvd"
    GMVD = "gmvd"
    GEMVD = "gemvd"
    CI = "ci"


@dataclass(frozen=True)
class DependencyStatement:
    """``lhs ->> first | second``.

    The kind does not take part in equality or hashing: two statements over
    the same triple compare equal whichever checker they are meant for.
    """

    lhs: frozenset
    first: frozenset
    second: frozenset
    kind: Kind = field(default=Kind.EMVD, compare=False)

    def __post_init__(self):
        for name in ("lhs", "first", "second"):
            object.__setattr__(self, name, attrset(getattr(self, name)))
        object.__setattr__(self, "kind", Kind(self.kind))
        pairs = (("lhs", "first"), ("lhs", "second"), ("first", "second"))
        for a, b in pairs:
            common = getattr(self, a) & getattr(self, b)
            if common:
                raise ValidationError(
                    f"{a} and {b} of {self} overlap on {fmt_attrs(common)}")

    def __str__(self) -> str:
        return f"{fmt_attrs(self.lhs)} ->> {fmt_attrs(self.first)} | {fmt_attrs(self.second)}"

    @property
    def attrs(self) -> frozenset:
        return self.lhs | self.first | self.second

    @property
    def trivial(self) -> bool:
        return not self.first or not self.second

    def swapped(self) -> DependencyStatement:
        return DependencyStatement(self.lhs, self.second, self.first, self.kind)

    def as_kind(self, kind: Kind | str) -> DependencyStatement:
        return DependencyStatement(self.lhs, self.first, self.second, Kind(kind))


def statement(lhs, first, second, kind: Kind | str = Kind.EMVD) -> DependencyStatement:
    """Shorthand accepting ``"A,B"`` / ``"_"`` strings or iterables."""
    return DependencyStatement(attrset(lhs), attrset(first), attrset(second), Kind(kind))


def value_set(r: ClassicRelation, key: Mapping[str, str], target: Iterable[str]) -> frozenset:
    """All ``target``-values co-occurring in ``r`` with the configuration ``key``.

    Members are value tuples in the canonical order of ``target``.
    """
    target = attrset(target)
    key_attrs = attrset(key)
    _require_subset(key_attrs, r.schema, "key")
    _require_subset(target, r.schema, "target")
    if key_attrs & target:
        raise SchemaError(f"key and target overlap on {fmt_attrs(key_attrs & target)}")
    pick_key = _picker(r.schema, key_attrs)
    want = tuple(str(key[a]) for a in sorted(key_attrs))
    pick = _picker(r.schema, target)
    return frozenset(pick(t) for t in r.rows if pick_key(t) == want)


# -- classic checkers ----------------------------------------------------------

def _split(schema, s: DependencyStatement):
    px, py, pz = (_picker(schema, part) for part in (s.lhs, s.first, s.second))
    return px, py, pz


def _mvd_definition(rows, px, py, pz) -> bool:
    triples = {(px(t), py(t), pz(t)) for t in rows}
    groups = defaultdict(list)
    for x, y, z in triples:
        groups[x].append((y, z))
    for x, members in groups.items():
        for y1, _ in members:
            for _, z2 in members:
                if (x, y1, z2) not in triples:
                    return False
    return True


def _mvd_lemma1(rows, px, py, pz) -> bool:
    z_of_x = defaultdict(set)
    z_of_xy = defaultdict(set)
    for t in rows:
        x, y, z = px(t), py(t), pz(t)
        z_of_x[x].add(z)
        z_of_xy[x, y].add(z)
    return all(zs == z_of_x[x] for (x, _), zs in z_of_xy.items())


def _mvd_lemma2(rows, px, py, pz) -> bool:
    yz_of_x = defaultdict(set)
    z_of_xy = defaultdict(set)
    y_of_xz = defaultdict(set)
    triples = set()
    for t in rows:
        x, y, z = px(t), py(t), pz(t)
        triples.add((x, y, z))
        yz_of_x[x].add((y, z))
        z_of_xy[x, y].add(z)
        y_of_xz[x, z].add(y)
    return all(
        len(yz_of_x[x]) == len(z_of_xy[x, y]) * len(y_of_xz[x, z])
        for x, y, z in triples
    )


_MVD_TESTS = {
    "definition": _mvd_definition,
    "lemma1": _mvd_lemma1,
    "lemma2": _mvd_lemma2,
}


def check_mvd(r: ClassicRelation, s: DependencyStatement, method: str = "definition") -> bool:
    """Decide the MVD ``s`` on ``r`` whose schema must be exactly ``XYZ``.

    ``definition`` searches for the swapped tuple of every agreeing pair,
    ``lemma1`` compares ``Z(x)`` with ``Z(xy)``, and ``lemma2`` checks the
    counting identity ``|YZ(x)| = |Z(xy)| * |Y(xz)|`` at every tuple.
    """
    try:
        test = _MVD_TESTS[method]
    except KeyError:
        raise ValidationError(f"unknown MVD method {method!r}; expected one of {MVD_METHODS}") from None
    if s.attrs != r.attrs:
        raise SchemaError(f"MVD {s} must cover the schema {fmt_attrs(r.schema)} exactly")
    if s.trivial:
        return True
    return test(r.rows, *_split(r.schema, s))


def check_emvd(r: ClassicRelation, s: DependencyStatement, method: str = "definition") -> bool:
    _require_subset(s.attrs, r.schema, f"attributes of {s}")
    return check_mvd(project(r, s.attrs), s, method)


# -- weighted checkers -----------------------------------------------------------

def _require_positive(phi: WeightedRelation) -> None:
    bad = [row for row, w in phi.rows.items() if w <= 0]
    if bad:
        raise DomainError(f"weighted checkers need strictly positive weights; "
                          f"{len(bad)} row(s) are not, e.g. {bad[0]!r}")


def check_gmvd(phi: WeightedRelation, s: DependencyStatement) -> bool:
    """True iff ``phi`` equals the monotone join of its ``XY`` and ``XZ`` marginals."""
    _require_positive(phi)
    if s.attrs != phi.attrs:
        raise SchemaError(f"GMVD {s} must cover the schema {fmt_attrs(phi.schema)} exactly")
    if s.trivial:
        return True
    return monotone_join(phi, s.lhs | s.first, s.lhs | s.second) == phi


def check_gemvd(phi: WeightedRelation, s: DependencyStatement) -> bool:
    _require_positive(phi)
    _require_subset(s.attrs, phi.schema, f"attributes of {s}")
    return check_gmvd(marginalize(phi, s.attrs), s)


def check_ci(phi: WeightedRelation, s: DependencyStatement) -> bool:
    """Decide whether ``first`` and ``second`` are independent given ``lhs``.

    Tests ``p(xyz) * p(x) == p(xy) * p(xz)`` on the support of the ``XYZ``
    marginal, and that every combination of an ``xy`` and an ``xz`` sharing
    ``x`` actually occurs (otherwise the right-hand side would be positive
    where the left is zero).  Marginals are summed here directly rather
    than through the relational operators.
    """
    _require_positive(phi)
    _require_subset(s.attrs, phi.schema, f"attributes of {s}")
    if s.trivial:
        return True
    px, py, pz = _split(phi.schema, s)
    joint: dict[tuple, Fraction] = defaultdict(Fraction)
    for row, w in phi.rows.items():
        joint[px(row), py(row), pz(row)] += w
    p_x: dict = defaultdict(Fraction)
    p_xy: dict = defaultdict(Fraction)
    p_xz: dict = defaultdict(Fraction)
    for (x, y, z), w in joint.items():
        p_x[x] += w
        p_xy[x, y] += w
        p_xz[x, z] += w
    for (x, y, z), w in joint.items():
        if w * p_x[x] != p_xy[x, y] * p_xz[x, z]:
            return False
    n_y = defaultdict(int)
    n_z = defaultdict(int)
    for x, _ in p_xy:
        n_y[x] += 1
    for x, _ in p_xz:
        n_z[x] += 1
    return sum(n_y[x] * n_z[x] for x in p_x) == len(joint)


Relation = Union[ClassicRelation, WeightedRelation]


def holds(rel: Relation, s: DependencyStatement, method: str = "definition") -> bool:
    """Dispatch on ``s.kind``; classic kinds accept a weighted relation's support."""
    if s.kind in (Kind.MVD, Kind.EMVD):
        if isinstance(rel, WeightedRelation):
            rel = rel.support()
        check = check_mvd if s.kind is Kind.MVD else check_emvd
        return check(rel, s, method)
    if isinstance(rel, ClassicRelation):
        rel = WeightedRelation.constant(rel)
    if s.kind is Kind.GMVD:
        return check_gmvd(rel, s)
    if s.kind is Kind.GEMVD:
        return check_gemvd(rel, s)
    return check_ci(rel, s)
