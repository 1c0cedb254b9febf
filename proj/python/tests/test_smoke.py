import math

import pytest

import swaporder as so


def example1():
    return so.PathSpec.uniform([100, 200, 300, 400], 0.2, 0.5)


def test_binomial_and_tail():
    pmf = so.binomial_pmf(3, 0.2)
    assert pmf == pytest.approx([0.512, 0.384, 0.096, 0.008], abs=1e-14)
    assert so.approx_tail([0.9, 0.09, 0.009, 0.001], 0.01) == pytest.approx([0.9, 0.1])


def test_normal_helpers():
    n = so.b2n(400, 0.2)
    assert (n.mean, n.variance) == pytest.approx((80.0, 64.0))
    trials, success = so.n2b(80.0, 64.0)
    assert trials == 400 and success == pytest.approx(0.2)
    with pytest.raises(so.InvalidMoments):
        so.n2b(10.0, 12.0)


def test_swap_exact():
    score, out = so.swap_exact([0.25, 0.5, 0.25], [0.25, 0.5, 0.25], 0.5)
    assert score == pytest.approx(0.3125)
    assert sum(out) == pytest.approx(1.0)


def test_example1_scores():
    path = example1()
    assert so.ent(path, [3, 2, 1]) == pytest.approx(7.16, abs=0.005)
    assert so.ent(path, [1, 2, 3], so.EvalMode.tail(1e-5)) == pytest.approx(2.50, abs=0.005)
    assert so.brute_force(path)[0] == [3, 2, 1]
    assert so.greedy_swap(path)[0] == [3, 2, 1]


def test_example2_heuristics():
    path = so.PathSpec.uniform([100, 101, 101, 100], 0.2, 0.5)
    order, score = so.greedy_swap(path)
    assert order == [2, 1, 3] and score == pytest.approx(2.24, abs=0.005)
    order, score = so.vora_swap(path)
    assert order == [1, 3, 2] and score == pytest.approx(3.72, abs=0.005)


def test_trees_and_errors():
    assert [len(so.enumerate_trees(n)) for n in range(2, 8)] == [1, 2, 5, 14, 42, 132]
    assert so.catalan(10) == 16796
    with pytest.raises(so.InvalidOrder):
        so.ent(example1(), [1, 2])
    with pytest.raises(so.BudgetExceeded):
        so.brute_force(example1(), tree_cap=2)


def test_allocation():
    assert so.enumerate_allocations([6, 6, 6]) == [[m, 6 - m] for m in range(1, 6)]
    allocation, (order, _) = so.optimize_allocation([6, 6, 6], [10.0, 10.0], [0.3, 0.3], [0.5])
    assert allocation == [3, 3] and order == [1]
    with pytest.raises(so.Infeasible):
        so.enumerate_allocations([4, 1, 4])


def test_estimator():
    assert so.round_trip_time(150.0) == 1.5e-3
    assert so.expected_wait_both(4.0, 4.0) == pytest.approx(1.5 / 4.0, abs=1e-12)
    links = [so.PhysicalLink(10.0, 1, 1000.0, 0.004), so.PhysicalLink(10.0, 1, 3000.0, 0.03)]
    est = so.estimate_path_throughput(links, [0.5], timing=so.TimingParams(0.02))
    assert est.order == [1]
    assert est.ent_per_s == pytest.approx(est.score / est.slot_s)


def test_simulation_matches_ent():
    path = so.PathSpec.uniform([10, 20, 30, 40], 0.3, 0.6)
    out = so.simulate_order(path, [3, 2, 1], trials=50_000, seed=3)
    exact = so.ent(path, [3, 2, 1])
    assert abs(out.mean - exact) <= 4 * out.standard_error
    again = so.simulate_order(path, [3, 2, 1], trials=50_000, seed=3, jobs=4)
    assert again.mean == out.mean
    assert math.isfinite(so.simulate_asap(path, trials=1000, seed=1).mean)


def test_document():
    path = so.load_logical_path(
        '{"schema":1,"links":[{"capacity":5,"success":0.5},{"capacity":6,"success":0.4}],"swap_probs":[0.9]}'
    )
    assert path.link_count == 2
    with pytest.raises(so.SchemaError):
        so.load_logical_path('{"schema":1}')
