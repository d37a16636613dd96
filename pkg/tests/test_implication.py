import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvdlab import (
    DependencyStatement,
    ResourceError,
    SearchBounds,
    ValidationError,
    ZEMVDSet,
    apply_augmentation,
    apply_projection,
    apply_symmetry,
    axiom_closure,
    build_sigma_n,
    check_emvd,
    cover_contains,
    derive,
    find_witness,
    lemma3_implies,
    nonaxiomatizability_report,
    statement,
)
from mvdlab.implication import CoverQuery, closure_derivation, cover_members, is_valid_path
from mvdlab.witness import find_witness_any
from conftest import all_relations, all_splits


def subsets(attrs):
    attrs = sorted(attrs)
    for k in range(len(attrs) + 1):
        for c in itertools.combinations(attrs, k):
            yield frozenset(c)


def graph_reachable(sigma: ZEMVDSet, source, target) -> bool:
    """Materialize every node and arc of the implication graph, then search it."""
    nodes = list(subsets(sigma.attrs - sigma.z))
    arcs = {n: {m for m in nodes if m <= n} for n in nodes}
    for s in sigma:
        arcs[s.lhs].add(s.lhs | s.first)
    goal = source | target
    seen, stack = {source}, [source]
    while stack:
        n = stack.pop()
        for m in arcs[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return goal in seen


def fam(n, **kw):
    return build_sigma_n(n, **kw)


# -- Z-EMVD sets and the family --------------------------------------------------------

def test_zemvd_set_requires_fixed_z():
    with pytest.raises(ValidationError):
        ZEMVDSet({"Z"}, (statement("A", "B", "W"),))
    sigma = ZEMVDSet({"Z"}, (statement("A", "B", "Z"), statement("A", "B", "Z")))
    assert len(sigma) == 1


def test_build_sigma_n_shapes():
    f4 = fam(4)
    assert len(f4.statements) == 4
    assert f4.zemvd().attrs == {"X0", "X1", "X2", "X3", "Z"}
    f2 = fam(2)
    assert set(f2.statements) == {statement("X0", "X1", "Z"), statement("X1", "X0", "Z")}
    f8 = fam(8)
    assert len(f8.statements) == 8
    assert cover_contains(f8.zemvd(), statement("X0", "X7", "Z")).holds
    big = fam(3, block_size=2, z_size=2)
    assert big.block(0) == {"X0a", "X0b"} and big.z == {"Z0", "Z1"}
    assert big.block(3) == big.block(0) and big.block(-1) == big.block(2)


def test_build_sigma_n_guards():
    with pytest.raises(ValidationError):
        fam(1)
    with pytest.raises(ResourceError):
        fam(5000, block_size=3)


# -- cover ------------------------------------------------------------------------------------

def test_cyclic_four_path():
    res = cover_contains(fam(4).zemvd(), statement("X0", "X3", "Z"))
    assert res.holds
    assert [sorted(n) for n in res.nodes] == [
        ["X0"], ["X0", "X1"], ["X1"], ["X1", "X2"], ["X2"], ["X2", "X3"], ["X3"], ["X0", "X3"]]
    assert len(res.path) == 7
    assert is_valid_path(fam(4).zemvd(), res.path, frozenset({"X0"}), frozenset({"X0", "X3"}))


def test_trivial_query_is_immediately_in_cover():
    res = cover_contains(ZEMVDSet({"Z"}), CoverQuery({"A"}, ()))
    assert res.holds and res.path == []


def test_reversed_link_missing_after_removal():
    reduced = fam(4).leave_one_out(3)
    assert not cover_contains(reduced, statement("X1", "X0", "Z")).holds


def test_malformed_queries():
    sigma = fam(3).zemvd()
    with pytest.raises(ValidationError):
        cover_contains(sigma, CoverQuery({"X0"}, {"Z"}))
    with pytest.raises(ValidationError):
        cover_contains(sigma, statement("X0", "X1", "X2"))


@st.composite
def zemvd_sets(draw, names=("A", "B", "C", "D")):
    z = frozenset({"Z"})
    count = draw(st.integers(0, 5))
    stmts = []
    for _ in range(count):
        assign = draw(st.lists(st.integers(0, 2), min_size=len(names), max_size=len(names)))
        lhs = [a for a, k in zip(names, assign) if k == 0]
        first = [a for a, k in zip(names, assign) if k == 1]
        stmts.append(DependencyStatement(frozenset(lhs), frozenset(first), z))
    return ZEMVDSet(z, tuple(stmts))


@settings(max_examples=150)
@given(zemvd_sets(), st.data())
def test_cover_matches_materialized_graph(sigma, data):
    names = ("A", "B", "C", "D")
    sigma_full = ZEMVDSet(sigma.z, sigma.statements + (DependencyStatement(set(names), (), sigma.z),))
    assign = data.draw(st.lists(st.integers(0, 2), min_size=4, max_size=4))
    src = frozenset(a for a, k in zip(names, assign) if k == 0)
    dst = frozenset(a for a, k in zip(names, assign) if k == 1)
    res = cover_contains(sigma, CoverQuery(src, dst))
    assert res.holds == graph_reachable(sigma_full, src, dst)
    if res.holds:
        assert is_valid_path(sigma, res.path, src, src | dst)


@settings(max_examples=100)
@given(zemvd_sets(), st.data())
def test_cover_monotone_in_sigma(sigma, data):
    keep = data.draw(st.lists(st.booleans(), min_size=len(sigma), max_size=len(sigma)))
    sub = ZEMVDSet(sigma.z, tuple(s for s, k in zip(sigma, keep) if k))
    for src in subsets({"A", "B"}):
        for dst in subsets({"C", "D"}):
            if cover_contains(sub, CoverQuery(src, dst)).holds:
                assert cover_contains(sigma, CoverQuery(src, dst)).holds


@pytest.mark.parametrize("n", range(3, 9))
def test_long_path_and_reversed_links(n):
    f = fam(n)
    res = cover_contains(f.zemvd(), statement("X0", f"X{n - 1}", "Z"))
    assert res.holds and len(res.path) == 2 * n - 1
    for j in range(n):
        reduced = f.leave_one_out(j)
        for i in range(n):
            back = DependencyStatement(f.block(i + 1), f.block(i), f.z)
            assert not cover_contains(reduced, back).holds


@pytest.mark.parametrize("n", range(3, 9))
def test_reduced_cover_is_exactly_the_reduced_set(n):
    f = fam(n)
    for j in range(n):
        reduced = f.leave_one_out(j)
        assert set(cover_members(reduced, f.blocks)) == set(reduced.statements)


# -- axioms --------------------------------------------------------------------------------------

def test_axiom_examples():
    assert apply_symmetry(statement("A", "B", "C")) == statement("A", "C", "B")
    assert apply_augmentation(statement("A", "B", "C,D"), {"D"}) == statement("A,D", "B", "C")
    assert apply_projection(statement("A", "B,C", "D"), {"B"}, ()) == statement("A", "B", "_")
    with pytest.raises(ValidationError):
        apply_augmentation(statement("A", "B", "C"), {"B"})
    with pytest.raises(ValidationError):
        apply_projection(statement("A", "B", "C"), {"C"}, ())


def test_closure_examples():
    c = axiom_closure(statement("A", "B", "_"))
    assert {statement("A", "B", "_"), statement("A", "_", "B"), statement("A,B", "_", "_")} <= c
    c = axiom_closure(statement("X0", "X1", "Z"))
    assert statement("X0", "Z", "X1") in c
    assert all("X0" in s.lhs for s in c)


def _closed_form(sigma, tau):
    x, y, z = sigma.lhs, sigma.first, sigma.second
    if not (x <= tau.lhs <= x | y | z):
        return False
    return (tau.first <= y and tau.second <= z) or (tau.first <= z and tau.second <= y)


@pytest.mark.parametrize("sigma", [
    statement("A", "B", "C"),
    statement("A", "B,C", "D"),
    statement("_", "A,B", "C,D"),
    statement("A", "B,C", "_"),
    statement("A,E", "B", "C,D"),
])
def test_closure_agrees_with_direct_derivation(sigma):
    closure = axiom_closure(sigma)
    universe = sorted(sigma.attrs | {"Q"})
    for tau in all_splits(universe):
        d = derive(sigma, tau)
        assert (tau in closure) == (d is not None) == _closed_form(sigma, tau), tau
        if d is not None:
            assert d.replay() == tau
            assert d.target == tau
            via = closure_derivation(sigma, tau)
            assert via.replay() == tau


@pytest.mark.parametrize("n", range(3, 9))
def test_goal_not_derivable_from_single_member(n):
    f = fam(n)
    goal = statement("X0", f"X{n - 1}", "Z")
    for s in f.statements:
        assert goal not in axiom_closure(s)


def test_axiom_soundness_on_all_three_attribute_relations():
    sigma = statement("A", "B", "C")
    closure = [t for t in axiom_closure(sigma) if not t.trivial]
    for r in all_relations(["A", "B", "C"]):
        if check_emvd(r, sigma):
            assert all(check_emvd(r, t) for t in closure)


# -- implication ------------------------------------------------------------------------------------

def test_lemma3_goal_is_its_own_cover_member():
    res = lemma3_implies(fam(4).zemvd(), statement("X0", "X3", "Z"))
    assert res.holds
    assert res.member == statement("X0", "X3", "Z")
    assert res.derivation.steps == []
    assert len(res.cover.path) == 7


def test_lemma3_augmentation_and_projection():
    f = fam(4, z_size=3)
    tau = statement({"X0", "Z0"}, "X1", "Z1")
    res = lemma3_implies(f.zemvd(), tau)
    assert res.holds
    assert res.member == DependencyStatement({"X0"}, {"X1"}, f.z)
    assert res.derivation.replay() == tau
    assert [s.axiom for s in res.derivation.steps] == ["projection", "augmentation"]


@pytest.mark.parametrize("j", range(4))
def test_lemma3_reversed_links_fail_without_one_member(j):
    f = fam(4)
    reduced = f.leave_one_out(j)
    for i in range(4):
        tau = DependencyStatement(f.block(i + 1), f.block(i), f.z)
        assert not lemma3_implies(reduced, tau).holds


def test_lemma3_members_lie_in_reduced_set():
    f = fam(4)
    reduced = f.leave_one_out(0)
    taus = [statement("X1", "X2", "Z"), statement("X1,Z", "X2", "_"),
            statement("X2", "Z", "X3"), statement("X3", "X0", "_")]
    for tau in taus:
        res = lemma3_implies(reduced, tau)
        if res.member is not None:
            assert res.member in reduced


def test_lemma3_candidate_bound():
    with pytest.raises(ResourceError):
        lemma3_implies(fam(6).zemvd(), statement("X0", "X5", "Z"), max_candidates=10)


def test_lemma3_consistent_with_bounded_search():
    sigma = fam(3).zemvd()
    bounds = SearchBounds(max_tuples=4)
    implied, refuted = [], []
    for tau in all_splits(sorted(sigma.attrs)):
        if tau.trivial:
            continue
        (implied if lemma3_implies(sigma, tau).holds else refuted).append(tau)
    assert statement("X1", "X0", "Z") in implied
    assert find_witness_any(sigma.statements, implied, bounds).outcome == "exhausted"
    # something outside the implied set must be refutable at these bounds
    assert find_witness(sigma.statements, statement("X0", "X1", "X2"), bounds).found


# -- report ------------------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 8])
def test_report_passes(n):
    report = nonaxiomatizability_report(n)
    assert report.passed
    groups = [v.group for v in report.verdicts]
    assert groups.count("long-path") == 1
    assert groups.count("reversed-link") == n * n
    assert groups.count("non-derivable") == n
    assert len(report.verdicts[0].witness["arcs"]) == 2 * n - 1


def test_report_is_deterministic_without_timing():
    a = nonaxiomatizability_report(5).to_dict()
    b = nonaxiomatizability_report(5).to_dict()
    assert a == b
    assert "seconds" not in a["verdicts"][0]


def test_report_needs_n_at_least_three():
    with pytest.raises(ValidationError):
        nonaxiomatizability_report(2)
