import time

import pytest

from sciontree import EngineConfig, EngineError, Image, Permutation, run, solve_images
from sciontree.core import Combination, ExplicitSet
from sciontree.engine import ConfigurationError, scion_candidates, storage_rule, THREADS_ENV, default_thread_budget
from sciontree.io import generate_instance
from sciontree.oracle import enumerate_true_combinations, nondominated_of, true_combination_tree
from sciontree.scalarizer import Backend, BackendError, make_backend

from worked import EX21, EX43, FINDING_VC, ex21_tree, label


def instrumented(instance, threads=1, **kw):
    return run(instance, config=EngineConfig(thread_budget=threads, instrument=True, **kw))


def test_storage_rule_examples():
    y4 = Image((3, 3, 5))
    assert storage_rule(Combination.root(4), Image((4, 1, 2, 1)))
    assert storage_rule(label("y3 y1", FINDING_VC), y4)
    # exactly one node of the run stores (3,3,5)
    rep = instrumented(ExplicitSet.from_points(FINDING_VC))
    storing = [c for c, y in rep.solved if y == y4 and storage_rule(c, y)]
    assert storing == [label("y3 y1", FINDING_VC)]


def test_scion_candidates_examples():
    y1, y2 = Image(EX21[0]), Image(EX21[1])
    kids = scion_candidates(Combination.root(4), y1)
    assert [c for _, c in kids] == [label(t, EX21) for t in ("y1 d2 d3", "d1 y1 d3", "d1 d2 y1")]
    kids = scion_candidates(label("y1 d2 d3", EX21), y2)
    assert [c for _, c in kids] == [label(t, EX21) for t in ("y2 d2 d3", "y1 y2 d3", "y1 d2 y2")]
    assert [p for p, _ in scion_candidates(label("y1 d2 d3", EX21), y2, positions=[2])] == [2]


@pytest.mark.parametrize("threads", [1, 4])
def test_ex21_tree(ex21, threads):
    t0 = time.perf_counter()
    rep = instrumented(ex21, threads)
    assert time.perf_counter() - t0 < 1.0
    assert rep.scalarizations_solved == 11
    assert rep.infeasible_count == 7
    assert set(rep.nondominated) == {Image(p) for p in EX21}
    assert {c: p for c, p, _ in rep.provenance} == ex21_tree()
    assert rep.duplicate_stores == 0
    assert rep.max_depth == 3


def test_empty_instance():
    rep = run(ExplicitSet((), 3))
    assert rep.nondominated == () and rep.scalarizations_solved == 1 and rep.infeasible_count == 1


def test_singleton_explores_k_nodes():
    rep = solve_images([(1, 2, 3)])
    assert rep.scalarizations_solved == 3
    assert rep.scalarizations_solved == len(enumerate_true_combinations([Image((1, 2, 3))]))


def test_ex43_not_general_position(ex43):
    rep = instrumented(ex43)
    assert set(rep.nondominated) == {Image(p) for p in EX43}
    assert rep.store_events == 3
    truth = enumerate_true_combinations(nondominated_of(ex43))
    assert rep.scalarizations_solved == len(truth) == 7
    explored = {c for c, _, _ in rep.provenance}
    assert explored == truth
    y2, y3 = Image(EX43[1]), Image(EX43[2])
    assert Combination((y2, y3)) not in explored


def test_bad_configuration(ex21):
    with pytest.raises(ConfigurationError):
        run(ex21, thread_budget=0)
    with pytest.raises(ConfigurationError):
        run(ex21, config=EngineConfig(order=Permutation.identity(3)))


def test_thread_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_thread_budget() == 3
    monkeypatch.setenv(THREADS_ENV, "x")
    with pytest.raises(ConfigurationError):
        default_thread_budget()
    monkeypatch.delenv(THREADS_ENV)
    assert default_thread_budget() == 1


def test_ordering_changes_nothing_but_order():
    inst = generate_instance("explicit", 4, 80, 3)
    base = run(inst)
    for perm in [(4, 3, 2, 1), (2, 1, 4, 3)]:
        rep = run(inst, config=EngineConfig(order=Permutation.from_one_based(perm)))
        assert set(rep.nondominated) == set(base.nondominated)
        assert rep.order.one_based == perm


@pytest.mark.parametrize("kind, k, n, seed", [
    ("explicit", 5, 50, 0), ("explicit", 3, 200, 1), ("kp", 3, 12, 2), ("kp", 4, 11, 3), ("ilp", 3, 4, 4),
])
def test_threads_invariant_and_exact(kind, k, n, seed):
    inst = generate_instance(kind, k, n, seed)
    reps = [instrumented(inst, t) for t in (1, 2, 4, 8)]
    for r in reps[1:]:
        assert r.nondominated == reps[0].nondominated
        assert r.scalarizations_solved == reps[0].scalarizations_solved
        assert {c for c, _, _ in r.provenance} == {c for c, _, _ in reps[0].provenance}
    assert set(reps[0].nondominated) == nondominated_of(inst)
    for r in reps:
        nodes = [c for c, _, _ in r.provenance]
        assert len(nodes) == len(set(nodes))
        assert r.duplicate_stores == 0


def test_parent_links_match_oracle_tree():
    inst = generate_instance("explicit", 4, 40, 8)
    rep = instrumented(inst, 4)
    expected = {n.combination: (n.parent, n.position) for n in true_combination_tree(nondominated_of(inst))}
    assert {c: (p, pos) for c, p, pos in rep.provenance} == expected


class _Exploding(Backend):
    def __init__(self, inner, after):
        self.inner, self.k, self.left = inner, inner.k, after

    def _solve(self, limits, incumbent):
        self.left -= 1
        if self.left < 0:
            raise BackendError("solver gave up")
        return self.inner._solve(limits, incumbent)


@pytest.mark.parametrize("threads", [1, 4])
def test_backend_failure_carries_partial_report(threads):
    inst = generate_instance("explicit", 3, 100, 2)
    with pytest.raises(EngineError) as info:
        run(inst, backend=_Exploding(make_backend(inst), 5), thread_budget=threads)
    partial = info.value.partial
    assert partial.backend_calls >= 5
    assert set(partial.nondominated) <= nondominated_of(inst)
