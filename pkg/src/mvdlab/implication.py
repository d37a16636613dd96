"""Z-EMVD implication: graph cover, axiom engine and the cyclic family.

For a set of Z-EMVDs (every statement has the same third component ``z``)
implication is decided by reachability in a graph over attribute sets:

* a *subset arc* goes from ``[W]`` to ``[V]`` whenever ``V ⊆ W``;
* each statement ``X ->> Y | z`` contributes the arc ``[X] -> [XY]``.

``X ->> Y | z`` is in the *cover* when ``[XY]`` is reachable from ``[X]``.
The graph is never materialized.  Breadth-first search runs over the
maximal sets reached so far: from state ``W`` every statement whose lhs is
contained in ``W`` leads to ``lhs ∪ first``, and the goal is hit once it is
a subset of the current state.

A general EMVD follows from the set iff it can be obtained from a single
cover member by symmetry, augmentation and projection
(:func:`lemma3_implies`).
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

from .dependency import DependencyStatement, Kind
from .errors import ResourceError, ValidationError
from .relation import attrset, canon, fmt_attrs

SYMMETRY = "symmetry"
AUGMENTATION = "augmentation"
PROJECTION = "projection"


@dataclass(frozen=True)
class ZEMVDSet:
    """Statements ``X ->> Y | z`` sharing one fixed third component ``z``."""

    z: frozenset
    statements: tuple = ()

    def __post_init__(self):
        z = attrset(self.z)
        object.__setattr__(self, "z", z)
        seen: dict[DependencyStatement, None] = {}
        for s in self.statements:
            if not isinstance(s, DependencyStatement):
                raise ValidationError(f"expected a DependencyStatement, got {s!r}")
            if s.second != z:
                raise ValidationError(f"{s} does not have the fixed third component {fmt_attrs(z)}")
            seen.setdefault(s.as_kind(Kind.EMVD), None)
        object.__setattr__(self, "statements", tuple(seen))

    def __iter__(self) -> Iterator[DependencyStatement]:
        return iter(self.statements)

    def __len__(self) -> int:
        return len(self.statements)

    def __contains__(self, s) -> bool:
        return s in self.statements

    @property
    def attrs(self) -> frozenset:
        out = set(self.z)
        for s in self.statements:
            out |= s.attrs
        return frozenset(out)

    def without(self, index: int) -> ZEMVDSet:
        return ZEMVDSet(self.z, self.statements[:index] + self.statements[index + 1:])


# -- graph cover -----------------------------------------------------------------

@dataclass(frozen=True)
class CoverQuery:
    source: frozenset
    target: frozenset

    def __post_init__(self):
        object.__setattr__(self, "source", attrset(self.source))
        object.__setattr__(self, "target", attrset(self.target))

    @classmethod
    def from_statement(cls, s: DependencyStatement, z: frozenset) -> CoverQuery:
        if s.second != z:
            raise ValidationError(f"query {s} must have third component {fmt_attrs(z)}")
        return cls(s.lhs, s.first)

    def check(self, z: frozenset) -> None:
        for name, part in (("source", self.source), ("target", self.target)):
            if part & z:
                raise ValidationError(f"query {name} {fmt_attrs(part)} meets Z={fmt_attrs(z)}")
        if self.source & self.target:
            raise ValidationError(f"query source and target overlap on "
                                  f"{fmt_attrs(self.source & self.target)}")


@dataclass(frozen=True)
class Arc:
    """One arc of the implication graph; ``via`` is None for a subset arc."""

    tail: frozenset
    head: frozenset
    via: DependencyStatement | None = None

    def __str__(self) -> str:
        label = "subset" if self.via is None else str(self.via)
        return f"[{fmt_attrs(self.tail)}] -> [{fmt_attrs(self.head)}]  ({label})"


@dataclass
class CoverResult:
    query: CoverQuery
    z: frozenset
    holds: bool
    path: list = field(default_factory=list)
    states_visited: int = 0

    @property
    def statement(self) -> DependencyStatement:
        return DependencyStatement(self.query.source, self.query.target, self.z)

    @property
    def nodes(self) -> list:
        if not self.holds:
            return []
        if not self.path:
            return [self.query.source]
        return [self.path[0].tail] + [a.head for a in self.path]

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": f"{self.statement} in cover",
            "verdict": self.holds,
            "path": [fmt_attrs(n) for n in self.nodes],
            "arcs": [
                {"from": fmt_attrs(a.tail), "to": fmt_attrs(a.head),
                 "via": None if a.via is None else str(a.via)}
                for a in self.path
            ],
        }


def cover_contains(sigma: ZEMVDSet, query: CoverQuery | DependencyStatement) -> CoverResult:
    """Decide membership of ``source ->> target | z`` in the cover of ``sigma``.

    On success ``path`` is a shortest (in statement arcs) arc sequence from
    ``[source]`` to ``[source ∪ target]``.
    """
    if isinstance(query, DependencyStatement):
        query = CoverQuery.from_statement(query, sigma.z)
    query.check(sigma.z)
    start, goal = query.source, query.source | query.target
    if goal <= start:
        return CoverResult(query, sigma.z, True, [], 1)

    parent: dict[frozenset, tuple[frozenset, DependencyStatement] | None] = {start: None}
    queue = deque([start])
    hit = None
    while queue and hit is None:
        state = queue.popleft()
        for s in sigma.statements:
            if not s.lhs <= state:
                continue
            nxt = s.lhs | s.first
            if nxt in parent:
                continue
            parent[nxt] = (state, s)
            if goal <= nxt:
                hit = nxt
                break
            queue.append(nxt)
    if hit is None:
        return CoverResult(query, sigma.z, False, [], len(parent))

    hops = []
    node = hit
    while parent[node] is not None:
        prev, s = parent[node]
        hops.append((prev, s, node))
        node = prev
    path: list[Arc] = []
    for prev, s, nxt in reversed(hops):
        if s.lhs != prev:
            path.append(Arc(prev, s.lhs))
        path.append(Arc(s.lhs, nxt, s))
    if hit != goal:
        path.append(Arc(hit, goal))
    return CoverResult(query, sigma.z, True, path, len(parent))


def is_valid_path(sigma: ZEMVDSet, path: Iterable[Arc], source: frozenset, goal: frozenset) -> bool:
    """Check that ``path`` is a walk of graph arcs from ``[source]`` to ``[goal]``."""
    node = source
    for arc in path:
        if arc.tail != node:
            return False
        if arc.via is None:
            if not arc.head <= arc.tail:
                return False
        elif arc.via not in sigma or arc.tail != arc.via.lhs or arc.head != arc.via.lhs | arc.via.first:
            return False
        node = arc.head
    return node == goal


def _unions(blocks: list[frozenset]) -> Iterator[frozenset]:
    for mask in range(1 << len(blocks)):
        yield frozenset().union(*(b for i, b in enumerate(blocks) if mask >> i & 1))


def cover_members(sigma: ZEMVDSet, blocks: Iterable[Iterable[str]]) -> list[DependencyStatement]:
    """Nontrivial cover members ``X ->> Y | z`` with ``X``, ``Y`` disjoint unions of ``blocks``."""
    blocks = [attrset(b) for b in blocks]
    found = []
    n = len(blocks)
    # each block goes to X, Y or neither
    for assign in itertools.product((0, 1, 2), repeat=n):
        if 1 not in assign:
            continue
        x = frozenset().union(*(b for b, a in zip(blocks, assign) if a == 0))
        y = frozenset().union(*(b for b, a in zip(blocks, assign) if a == 1))
        if cover_contains(sigma, CoverQuery(x, y)).holds:
            found.append(DependencyStatement(x, y, sigma.z))
    return found


# -- inference axioms ---------------------------------------------------------------

def apply_symmetry(s: DependencyStatement) -> DependencyStatement:
    return s.swapped()


def apply_augmentation(s: DependencyStatement, moved: Iterable[str]) -> DependencyStatement:
    """``X ->> Y | ZW`` gives ``XW ->> Y | Z``; ``moved`` is ``W``."""
    moved = attrset(moved)
    if not moved <= s.second:
        raise ValidationError(f"augmentation set {fmt_attrs(moved)} is not part of "
                              f"the third component of {s}")
    return DependencyStatement(s.lhs | moved, s.first, s.second - moved, s.kind)


def apply_projection(s: DependencyStatement, first: Iterable[str], second: Iterable[str]) -> DependencyStatement:
    first, second = attrset(first), attrset(second)
    if not first <= s.first:
        raise ValidationError(f"{fmt_attrs(first)} is not a subset of {fmt_attrs(s.first)} in {s}")
    if not second <= s.second:
        raise ValidationError(f"{fmt_attrs(second)} is not a subset of {fmt_attrs(s.second)} in {s}")
    return DependencyStatement(s.lhs, first, second, s.kind)


@dataclass(frozen=True)
class Step:
    axiom: str
    args: tuple = ()
    result: DependencyStatement | None = None

    def apply(self, s: DependencyStatement) -> DependencyStatement:
        if self.axiom == SYMMETRY:
            return apply_symmetry(s)
        if self.axiom == AUGMENTATION:
            return apply_augmentation(s, *self.args)
        if self.axiom == PROJECTION:
            return apply_projection(s, *self.args)
        raise ValidationError(f"unknown axiom {self.axiom!r}")

    def describe(self) -> str:
        if self.axiom == AUGMENTATION:
            return f"augmentation W={fmt_attrs(self.args[0])}"
        if self.axiom == PROJECTION:
            return f"projection Y'={fmt_attrs(self.args[0])} Z'={fmt_attrs(self.args[1])}"
        return self.axiom


@dataclass
class Derivation:
    source: DependencyStatement
    steps: list = field(default_factory=list)

    @property
    def target(self) -> DependencyStatement:
        return self.steps[-1].result if self.steps else self.source

    def replay(self) -> DependencyStatement:
        """Re-apply every step; raises ValidationError on a mismatching result."""
        cur = self.source
        for i, step in enumerate(self.steps):
            cur = step.apply(cur)
            if step.result is not None and cur != step.result:
                raise ValidationError(f"step {i} ({step.describe()}) yields {cur}, recorded {step.result}")
        return cur

    def to_list(self) -> list[dict[str, Any]]:
        return [{"axiom": st.axiom, "params": [fmt_attrs(a) for a in st.args],
                 "result": str(st.result)} for st in self.steps]


def _derivation_steps(s: DependencyStatement) -> Iterator[Step]:
    yield Step(SYMMETRY, (), apply_symmetry(s))
    second = canon(s.second)
    for k in range(1, len(second) + 1):
        for w in itertools.combinations(second, k):
            yield Step(AUGMENTATION, (frozenset(w),), apply_augmentation(s, w))
    first = canon(s.first)
    for a in range(len(first) + 1):
        for ys in itertools.combinations(first, a):
            for b in range(len(second) + 1):
                for zs in itertools.combinations(second, b):
                    if a == len(first) and b == len(second):
                        continue
                    args = (frozenset(ys), frozenset(zs))
                    yield Step(PROJECTION, args, apply_projection(s, *args))


def _saturate(s: DependencyStatement, limit: int) -> dict:
    parents: dict[DependencyStatement, tuple | None] = {s: None}
    work = deque([s])
    while work:
        cur = work.popleft()
        for step in _derivation_steps(cur):
            if step.result not in parents:
                parents[step.result] = (cur, step)
                if len(parents) > limit:
                    raise ResourceError(f"axiom closure of {s} exceeds {limit} statements")
                work.append(step.result)
    return parents


def axiom_closure(s: DependencyStatement, limit: int = 1_000_000) -> frozenset:
    """Every statement reachable from ``s`` by symmetry, augmentation and projection."""
    return frozenset(_saturate(s, limit))


def closure_derivation(s: DependencyStatement, tau: DependencyStatement, limit: int = 1_000_000) -> Derivation | None:
    """A derivation of ``tau`` found by saturating the closure of ``s``."""
    parents = _saturate(s, limit)
    if tau not in parents:
        return None
    steps = []
    node = tau
    while parents[node] is not None:
        prev, step = parents[node]
        steps.append(step)
        node = prev
    return Derivation(s, steps[::-1])


def derive(sigma: DependencyStatement, tau: DependencyStatement) -> Derivation | None:
    """Build a derivation of ``tau`` from ``sigma`` directly, or return None.

    ``X ->> Y | Z`` yields exactly the statements ``W ->> V1 | V2`` with
    ``X ⊆ W ⊆ XYZ`` whose components fit inside ``Y`` and ``Z`` in one of
    the two orientations: project, move the ``Z`` part of ``W \\ X`` to the
    left, then swap, move the ``Y`` part, and swap back.
    """
    x, y, z = sigma.lhs, sigma.first, sigma.second
    w, v1, v2 = tau.lhs, tau.first, tau.second
    if not x <= w or not w <= x | y | z:
        return None
    steps: list[Step] = []
    cur = sigma
    if not (v1 <= y and v2 <= z):
        if not (v1 <= z and v2 <= y):
            return None
        cur = apply_symmetry(cur)
        steps.append(Step(SYMMETRY, (), cur))
    extra = w - x
    from_second = extra & cur.second
    from_first = extra & cur.first

    def push(step: Step):
        nonlocal cur
        cur = step.apply(cur)
        steps.append(Step(step.axiom, step.args, cur))

    keep_first, keep_second = v1 | from_first, v2 | from_second
    if (keep_first, keep_second) != (cur.first, cur.second):
        push(Step(PROJECTION, (keep_first, keep_second)))
    if from_second:
        push(Step(AUGMENTATION, (from_second,)))
    if from_first:
        push(Step(SYMMETRY))
        push(Step(AUGMENTATION, (from_first,)))
        push(Step(SYMMETRY))
    return Derivation(sigma, steps)


# -- implication --------------------------------------------------------------------

@dataclass
class Lemma3Result:
    target: DependencyStatement
    holds: bool
    member: DependencyStatement | None = None
    cover: CoverResult | None = None
    derivation: Derivation | None = None
    candidates: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "claim": f"{self.target} implied",
            "verdict": self.holds,
            "member": None if self.member is None else str(self.member),
            "path": None if self.cover is None else self.cover.to_dict()["path"],
            "derivation": None if self.derivation is None else self.derivation.to_list(),
            "candidates": self.candidates,
        }


def _atoms(universe: frozenset, parts: Iterable[frozenset]) -> list[frozenset]:
    """Coarsest partition of ``universe`` refining every set in ``parts``."""
    parts = [p for p in parts if p]
    sig: dict[tuple, set] = {}
    for a in canon(universe):
        sig.setdefault(tuple(a in p for p in parts), set()).add(a)
    return sorted((frozenset(v) for v in sig.values()), key=canon)


def lemma3_implies(sigma: ZEMVDSet, tau: DependencyStatement, max_candidates: int = 1_000_000) -> Lemma3Result:
    """Decide whether ``sigma`` implies the EMVD ``tau``.

    Candidate cover members ``X ->> Y | z`` are drawn from unions of the
    attribute blocks induced by ``sigma`` and ``tau``; the first candidate
    that derives ``tau`` and lies in the cover is returned with its path
    and derivation.
    """
    if tau.trivial:
        return Lemma3Result(tau, True)
    z = sigma.z
    universe = sigma.attrs | tau.attrs
    parts = [s.lhs for s in sigma] + [s.first for s in sigma] + [tau.lhs, tau.first, tau.second]
    atoms = _atoms(universe - z, [p - z for p in parts])
    left_atoms = [a for a in atoms if a <= tau.lhs]
    n_other = len(atoms) - len(left_atoms)
    # X ranges over unions of left_atoms, Y over nonempty unions of the rest
    total = sum(
        (1 << (n_other + len(left_atoms) - k)) - 1
        for k in range(len(left_atoms) + 1)
        for _ in itertools.combinations(left_atoms, k)
    )
    if total > max_candidates:
        raise ResourceError(f"{total} candidate cover members exceed the bound of {max_candidates}")

    examined = 0
    for k in range(len(left_atoms), -1, -1):
        for xs in itertools.combinations(left_atoms, k):
            x = frozenset().union(*xs)
            rest = [a for a in atoms if not a & x]
            ys = sorted(
                (frozenset().union(*c) for r in range(1, len(rest) + 1)
                 for c in itertools.combinations(rest, r)),
                key=lambda s: (len(s), canon(s)),
            )
            for y in ys:
                examined += 1
                member = DependencyStatement(x, y, z)
                d = derive(member, tau)
                if d is None:
                    continue
                cov = cover_contains(sigma, CoverQuery(x, y))
                if cov.holds:
                    return Lemma3Result(tau, True, member, cov, d, examined)
    return Lemma3Result(tau, False, candidates=examined)


# -- the cyclic family ----------------------------------------------------------------

MAX_FAMILY_ATTRS = 10_000


def _block_names(i: int, size: int) -> list[str]:
    if size == 1:
        return [f"X{i}"]
    if size <= 26:
        return [f"X{i}{chr(ord('a') + k)}" for k in range(size)]
    return [f"X{i}_{k}" for k in range(size)]


@dataclass(frozen=True)
class SigmaN:
    """The cycle ``X_i ->> X_{i+1} | Z`` for ``i = 0..n-1`` (indices mod n)."""

    n: int
    blocks: tuple
    z: frozenset

    def block(self, i: int) -> frozenset:
        return self.blocks[i % self.n]

    def member(self, i: int) -> DependencyStatement:
        return DependencyStatement(self.block(i), self.block(i + 1), self.z)

    @property
    def statements(self) -> tuple:
        return tuple(self.member(i) for i in range(self.n))

    def zemvd(self) -> ZEMVDSet:
        return ZEMVDSet(self.z, self.statements)

    def leave_one_out(self, j: int) -> ZEMVDSet:
        return self.zemvd().without(j % self.n)


def build_sigma_n(n: int, block_size: int = 1, z_size: int = 1) -> SigmaN:
    """Cyclic family over blocks named ``X0``.. (or ``X0a``, ``X0b``..) and ``Z`` (or ``Z0``..)."""
    if n < 2:
        raise ValidationError("the cyclic family needs n >= 2")
    if block_size < 1 or z_size < 1:
        raise ValidationError("block and Z sizes must be positive")
    if n * block_size + z_size > MAX_FAMILY_ATTRS:
        raise ResourceError(f"{n * block_size + z_size} attributes exceed the limit of {MAX_FAMILY_ATTRS}")
    blocks = tuple(frozenset(_block_names(i, block_size)) for i in range(n))
    z = frozenset(["Z"] if z_size == 1 else [f"Z{k}" for k in range(z_size)])
    return SigmaN(n, blocks, z)


# -- non-axiomatizability report --------------------------------------------------------

@dataclass
class Verdict:
    group: str
    claim: str
    expected: bool
    observed: bool
    witness: Any = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.expected == self.observed

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out = {"group": self.group, "claim": self.claim, "expected": self.expected,
               "verdict": self.observed, "passed": self.passed, "witness": self.witness}
        if timing:
            out["seconds"] = round(self.seconds, 6)
        return out


@dataclass
class Report:
    n: int
    verdicts: list
    summary: str

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        return {"n": self.n, "passed": self.passed, "summary": self.summary,
                "verdicts": [v.to_dict(timing) for v in self.verdicts]}

    def to_text(self, timing: bool = False) -> str:
        lines = [f"cyclic family n={self.n}"]
        for v in self.verdicts:
            mark = "PASS" if v.passed else "FAIL"
            extra = f"  [{v.seconds * 1e3:.2f} ms]" if timing else ""
            lines.append(f"{mark} [{v.group}] {v.claim}: {v.observed}{extra}")
            if v.group == "long-path" and v.observed:
                lines.append("     path: " + " -> ".join(f"[{p}]" for p in v.witness["path"]))
        lines.append(("PASS " if self.passed else "FAIL ") + self.summary)
        return "\n".join(lines)


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def nonaxiomatizability_report(n: int, block_size: int = 1, z_size: int = 1) -> Report:
    """Check the three facts behind the non-axiomatizability of EMVDs for one ``n``.

    1. the full cycle implies ``X0 ->> X{n-1} | Z`` (a cover path exists);
    2. dropping any one member leaves no ``X{i+1} ->> X{i} | Z`` in the cover;
    3. no single member derives ``X0 ->> X{n-1} | Z`` by the three axioms.
    """
    if n < 3:
        raise ValidationError("the report needs n >= 3")
    fam = build_sigma_n(n, block_size, z_size)
    full = fam.zemvd()
    verdicts: list[Verdict] = []

    goal = DependencyStatement(fam.block(0), fam.block(n - 1), fam.z)
    cov, dt = _timed(cover_contains, full, goal)
    verdicts.append(Verdict("long-path", f"{goal} in cover of the full family", True,
                            cov.holds, cov.to_dict(), dt))

    for j in range(n):
        reduced = fam.leave_one_out(j)
        for i in range(n):
            back = DependencyStatement(fam.block(i + 1), fam.block(i), fam.z)
            res, dt = _timed(cover_contains, reduced, back)
            verdicts.append(Verdict(
                "reversed-link", f"{back} in cover without {fam.member(j)}", False,
                res.holds, {"states_visited": res.states_visited}, dt))

    for s in fam.statements:
        closure, dt = _timed(axiom_closure, s)
        verdicts.append(Verdict("non-derivable", f"{goal} derivable from {s}", False,
                                goal in closure, {"closure_size": len(closure)}, dt))

    summary = (f"the family of {n} statements implies {goal}, no single member derives it, "
               f"and no {n - 1} of them imply any reversed link; so no complete rule set "
               f"whose rules take fewer than {n} premises exists for EMVDs")
    return Report(n, verdicts, summary)
