import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from mvdlab import ClassicRelation, WeightedRelation, statement

BINARY = ("0", "1")


def all_splits(attrs, require_cover=False):
    """Every statement (X, Y, Z) of disjoint subsets of ``attrs``."""
    attrs = sorted(attrs)
    for assign in itertools.product(range(4), repeat=len(attrs)):
        if require_cover and 3 in assign:
            continue
        parts = [[a for a, k in zip(attrs, assign) if k == i] for i in range(3)]
        yield statement(*parts)


def binary_space(schema):
    return list(itertools.product(BINARY, repeat=len(schema)))


def all_relations(schema):
    """All 2^|space| - 1 nonempty relations over binary ``schema`` (schema sorted)."""
    space = binary_space(schema)
    for mask in range(1, 1 << len(space)):
        yield ClassicRelation(schema, [t for i, t in enumerate(space) if mask >> i & 1])


def oracle_mvd(r: ClassicRelation, s) -> bool:
    """r(XYZ) equals the join of r(XY) and r(XZ), computed with plain sets."""
    idx = {a: i for i, a in enumerate(r.schema)}
    x, y, z = (sorted(p) for p in (s.lhs, s.first, s.second))

    def pick(t, names):
        return tuple(t[idx[a]] for a in names)

    proj = {(pick(t, x), pick(t, y), pick(t, z)) for t in r.rows}
    xy = {(a, b) for a, b, _ in proj}
    xz = {(a, c) for a, _, c in proj}
    joined = {(a, b, c) for a, b in xy for a2, c in xz if a == a2}
    return joined == proj


def brute_marginal(phi: WeightedRelation, onto):
    """Marginal as {assignment dict frozenset: weight} by explicit summation."""
    onto = sorted(onto)
    out = {}
    for row, w in phi.rows.items():
        key = tuple(row[phi.schema.index(a)] for a in onto)
        out[key] = out.get(key, Fraction(0)) + w
    return {k: v for k, v in out.items() if v != 0}


@pytest.fixture
def ternary():
    d = [1, 2, 3, 4, 5, 6]
    rows = {
        (0, 0, 0): d[0], (0, 0, 1): d[1], (0, 1, 0): d[2], (0, 1, 1): d[2],
        (1, 0, 0): d[3], (1, 0, 1): d[3], (1, 1, 0): d[4], (1, 1, 1): d[5],
    }
    return WeightedRelation(["A1", "A2", "A3"], rows)


@pytest.fixture
def xor_dist():
    return xor_distribution()


def xor_distribution():
    rows = {(a, b, a ^ b): Fraction(1, 4) for a in (0, 1) for b in (0, 1)}
    return WeightedRelation(["A", "B", "C"], rows)


def uniform(schema):
    space = binary_space(schema)
    return WeightedRelation(schema, {t: Fraction(1, len(space)) for t in space})


# hypothesis strategies -------------------------------------------------------

positive_fractions = st.fractions(min_value=Fraction(1, 12), max_value=50, max_denominator=12)


@st.composite
def weighted_relations(draw, attrs=("A", "B", "C", "D"), min_attrs=0, positive=True):
    names = draw(st.lists(st.sampled_from(attrs), unique=True, min_size=min_attrs, max_size=len(attrs)))
    names = sorted(names)
    space = binary_space(names)
    chosen = draw(st.lists(st.sampled_from(space), unique=True, min_size=1, max_size=len(space)))
    weights = st.fractions(min_value=-20, max_value=20, max_denominator=8).filter(lambda f: f != 0)
    ws = draw(st.lists(positive_fractions if positive else weights,
                       min_size=len(chosen), max_size=len(chosen)))
    return WeightedRelation(names, dict(zip(chosen, ws)))


@st.composite
def full_distributions(draw, schema=("A", "B", "C")):
    space = binary_space(schema)
    ws = draw(st.lists(st.integers(1, 30), min_size=len(space), max_size=len(space)))
    total = sum(ws)
    return WeightedRelation(schema, {t: Fraction(w, total) for t, w in zip(space, ws)})


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
