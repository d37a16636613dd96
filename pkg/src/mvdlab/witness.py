"""Bounded brute-force search for counterexample relations.

Relations over a schema are enumerated in a fixed canonical order: the
tuple space is ordered by value vectors (values ``0 .. domain_size-1``) and
subsets by their binary counter, restricted to at most ``max_tuples``
tuples.  Running out of candidates without finding a counterexample is not
a proof of implication; reports say ``exhausted`` and nothing more.
"""

from __future__ import annotations

import heapq
import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Iterator

from .dependency import DependencyStatement, check_emvd
from .errors import ResourceError, ValidationError
from .relation import ClassicRelation, WeightedRelation, attrset, canon

COUNTEREXAMPLE = "counterexample"
EXHAUSTED = "exhausted"
SATISFIED_ALL = "satisfied_all"


@dataclass(frozen=True)
class SearchBounds:
    domain_size: int = 2
    max_tuples: int | None = None
    max_candidates: int = 1_000_000
    seed: int = 0
    space_cap: int = 4096

    def __post_init__(self):
        for name in ("domain_size", "max_candidates", "space_cap"):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")
        if self.max_tuples is not None and self.max_tuples < 1:
            raise ValidationError("max_tuples must be positive")


def tuple_space(schema: Iterable[str], bounds: SearchBounds) -> list[tuple[str, ...]]:
    schema = canon(attrset(schema))
    size = bounds.domain_size ** len(schema)
    if size > bounds.space_cap:
        raise ResourceError(f"tuple space of {size} tuples exceeds the cap of {bounds.space_cap}")
    values = [str(v) for v in range(bounds.domain_size)]
    return list(itertools.product(values, repeat=len(schema)))


def _masks_with_popcount(n: int, k: int) -> Iterator[int]:
    """All n-bit masks with exactly k set bits, increasing (Gosper's hack)."""
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        low = mask & -mask
        ripple = mask + low
        mask = (((ripple ^ mask) >> 2) // low) | ripple


def enumerate_relations(schema: Iterable[str], bounds: SearchBounds) -> Iterator[ClassicRelation]:
    """Nonempty relations over ``schema`` in binary-counter order, at most ``max_candidates``."""
    schema = canon(attrset(schema))
    space = tuple_space(schema, bounds)
    n = len(space)
    top = n if bounds.max_tuples is None else min(n, bounds.max_tuples)
    streams = [_masks_with_popcount(n, k) for k in range(1, top + 1)]
    for mask in itertools.islice(heapq.merge(*streams), bounds.max_candidates):
        yield ClassicRelation._raw(schema, (space[i] for i in range(n) if mask >> i & 1))


def _count_relations(space: int, top: int) -> int:
    return sum(comb(space, k) for k in range(1, top + 1))


def random_distribution(schema: Iterable[str], bounds: SearchBounds = SearchBounds(),
                        max_weight: int = 100) -> WeightedRelation:
    """A strictly positive distribution over the full tuple space, summing to 1."""
    schema = canon(attrset(schema))
    space = tuple_space(schema, bounds)
    rng = random.Random(bounds.seed)
    raw = [rng.randint(1, max_weight) for _ in space]
    total = sum(raw)
    return WeightedRelation._raw(schema, {t: Fraction(w, total) for t, w in zip(space, raw)})


@dataclass
class WitnessReport:
    outcome: str
    target: DependencyStatement
    sigma: tuple = ()
    counterexample: ClassicRelation | None = None
    candidates: int = 0
    space_size: int = 0
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.outcome == COUNTEREXAMPLE

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        from .formats import format_relation

        out = {
            "claim": f"{self.target} implied by {len(self.sigma)} statement(s)",
            "outcome": self.outcome,
            "sigma": [str(s) for s in self.sigma],
            "target": str(self.target),
            "counterexample": None if self.counterexample is None
            else format_relation(self.counterexample),
            "candidates": self.candidates,
            "space_size": self.space_size,
            "notes": list(self.notes),
        }
        if timing:
            out["seconds"] = round(self.elapsed, 6)
        return out


def _violated(r: ClassicRelation, sigma, taus):
    if not all(check_emvd(r, s) for s in sigma):
        return None
    for tau in taus:
        if not check_emvd(r, tau):
            return tau
    return None


def find_witness_any(sigma: Iterable[DependencyStatement], targets: Iterable[DependencyStatement],
                     bounds: SearchBounds = SearchBounds()) -> WitnessReport:
    """Search for a relation satisfying every member of ``sigma`` but violating some target.

    All statements are read as EMVDs over the union of their attributes.
    The report names the first violated target of the first such relation.
    """
    sigma = tuple(sigma)
    taus = tuple(t for t in targets if not t.trivial)
    universe = frozenset().union(*(s.attrs for s in sigma + taus)) if sigma + taus else frozenset()
    first_target = next(iter(taus), None)
    space = len(tuple_space(universe, bounds))
    top = space if bounds.max_tuples is None else min(space, bounds.max_tuples)
    total = _count_relations(space, top)
    t0 = time.perf_counter()
    seen = 0
    for r in enumerate_relations(universe, bounds):
        seen += 1
        tau = _violated(r, sigma, taus)
        if tau is not None:
            # re-verify with an independent MVD test before reporting
            if not all(check_emvd(r, s, "lemma1") for s in sigma) or check_emvd(r, tau, "lemma1"):
                raise RuntimeError(f"MVD tests disagree on candidate {r!r}")
            return WitnessReport(COUNTEREXAMPLE, tau, sigma, r, seen, total,
                                 time.perf_counter() - t0)
    target = first_target if first_target is not None else DependencyStatement((), (), ())
    notes = ["no counterexample within bounds; this is not a proof of implication"]
    outcome = EXHAUSTED
    if seen < total:
        outcome = SATISFIED_ALL
        notes.append(f"candidate cap reached after {seen} of {total} relations")
    return WitnessReport(outcome, target, sigma, None, seen, total, time.perf_counter() - t0, notes)


def find_witness(sigma: Iterable[DependencyStatement], tau: DependencyStatement,
                 bounds: SearchBounds = SearchBounds()) -> WitnessReport:
    """First relation (canonical order) satisfying ``sigma`` and violating ``tau``."""
    report = find_witness_any(sigma, [tau], bounds)
    report.target = tau
    return report
