import numpy as np
import pytest

from profitmax import baselines, graph
from conftest import make_cb, random_graph


def test_degree_discount_formula():
    assert baselines.degree_discount_value(5, 1, 0.1) == pytest.approx(2.6)
    for d in (0, 1, 5, 12):
        assert baselines.degree_discount_value(d, 0, 0.3) == d


def test_high_degree_star_hub_first(star4):
    cb = graph.CostBenefit(cost=np.full(4, 10.0), benefit=np.full(4, 100.0))
    mask = baselines.high_degree(star4, cb, budget=10.0)
    assert mask[0] == 1 and mask.sum() == 1


def test_single_discount_prefers_spread():
    # two stars joined weakly: after taking hub 0, its leaves get discounted
    g = graph.from_edges([(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (1, 4)],
                         directed=False)
    cb = graph.CostBenefit(cost=np.full(7, 10.0), benefit=np.full(7, 100.0))
    mask = baselines.single_discount(g, cb, budget=20.0)
    assert mask[0] == 1 and mask[4] == 1


def test_degree_discount_reduces_to_single_discount_order():
    rng = np.random.default_rng(0)
    g = random_graph(rng, 12, 24, directed=False)
    cb = graph.CostBenefit(cost=np.full(12, 10.0), benefit=np.full(12, 100.0))
    # with p = 0 the first pick maximizes plain degree in both heuristics
    m_dd = baselines.degree_discount(g, cb, budget=10.0, p=0.0)
    m_sd = baselines.single_discount(g, cb, budget=10.0)
    assert np.array_equal(m_dd, m_sd)


def test_clustering_triangle_and_star(star4):
    tri = graph.from_edges([(0, 1), (1, 2), (0, 2)], directed=False)
    assert np.allclose(baselines.clustering_coefficients(tri), 1.0)
    assert np.allclose(baselines.clustering_coefficients(star4), 0.0)
    cb = graph.CostBenefit(cost=np.full(4, 10.0), benefit=np.full(4, 100.0))
    # all-zero coefficients: degree tie-break selects the hub first
    mask = baselines.high_clustering(star4, cb, budget=10.0)
    assert mask[0] == 1 and mask.sum() == 1


def test_random_selection_empty_when_unaffordable():
    g = graph.from_edges([(0, 1)], directed=False)
    cb = graph.CostBenefit(cost=np.full(2, 50.0), benefit=np.full(2, 100.0))
    assert baselines.random_selection(g, cb, budget=10.0).sum() == 0


def test_random_selection_deterministic_and_uniform():
    rng = np.random.default_rng(1)
    g = random_graph(rng, 5, 8)
    cb = graph.CostBenefit(cost=np.full(5, 10.0), benefit=np.full(5, 100.0))
    m1 = baselines.random_selection(g, cb, budget=20.0, rng_seed=3)
    m2 = baselines.random_selection(g, cb, budget=20.0, rng_seed=3)
    assert np.array_equal(m1, m2)
    counts = np.zeros(5)
    for s in range(1000):
        counts += baselines.random_selection(g, cb, budget=20.0, rng_seed=s)
    # each node appears with probability 2/5
    sigma = np.sqrt(1000 * 0.4 * 0.6)
    assert np.all(np.abs(counts - 400) <= 5 * sigma)


def test_simple_greedy_no_diffusion_closed_form():
    rng = np.random.default_rng(2)
    g = random_graph(rng, 8, 14)
    probs = np.zeros(g.arc_count)
    cb = make_cb(rng, 8)
    cfg = baselines.BaselineConfig(gain_rollouts=10)
    budget = 260.0
    mask = baselines.simple_greedy(g, probs, cb, budget, cfg, rng_seed=4)
    # exact greedy on net value b_i - c_i under the budget
    expect = np.zeros(8, dtype=np.uint8)
    spent = 0.0
    net = cb.benefit - cb.cost
    for i in np.argsort(-net):
        if net[i] > 0 and spent + cb.cost[i] <= budget:
            expect[i] = 1
            spent += cb.cost[i]
    assert np.array_equal(mask, expect)


def test_simple_greedy_path_first_pick_is_source():
    g = graph.from_edges([(0, 1), (1, 2)], directed=True, num_nodes=3)
    probs = np.ones(2)
    cb = graph.CostBenefit(cost=np.full(3, 50.0), benefit=np.full(3, 900.0))
    cfg = baselines.BaselineConfig(gain_rollouts=20)
    mask = baselines.simple_greedy(g, probs, cb, budget=50.0, cfg=cfg,
                                   rng_seed=5)
    assert mask[0] == 1 and mask.sum() == 1


def test_stochastic_greedy_full_fraction_matches_simple():
    rng = np.random.default_rng(6)
    g = random_graph(rng, 9, 18)
    probs = graph.assign_probabilities(g, "uniform", p=0.3)
    cb = make_cb(rng, 9)
    cfg = baselines.BaselineConfig(gain_rollouts=50, sample_fraction=1.0)
    m1 = baselines.simple_greedy(g, probs, cb, 300.0, cfg, rng_seed=7)
    m2 = baselines.stochastic_greedy(g, probs, cb, 300.0, cfg, rng_seed=7)
    assert np.array_equal(m1, m2)


def test_stochastic_greedy_deterministic():
    rng = np.random.default_rng(8)
    g = random_graph(rng, 9, 18)
    probs = graph.assign_probabilities(g, "uniform", p=0.3)
    cb = make_cb(rng, 9)
    cfg = baselines.BaselineConfig(gain_rollouts=30, sample_fraction=0.5)
    m1 = baselines.stochastic_greedy(g, probs, cb, 300.0, cfg, rng_seed=9)
    m2 = baselines.stochastic_greedy(g, probs, cb, 300.0, cfg, rng_seed=9)
    assert np.array_equal(m1, m2)


def test_double_greedy_no_diffusion_keep_rule():
    rng = np.random.default_rng(10)
    g = random_graph(rng, 8, 14)
    probs = np.zeros(g.arc_count)
    cb = make_cb(rng, 8)
    cfg = baselines.BaselineConfig(gain_rollouts=10)
    mask = baselines.double_greedy(g, probs, cb, budget=1e6, cfg=cfg,
                                   rng_seed=11)
    # without diffusion, adding i gains b_i - c_i and removing i from the
    # full set loses b_i - c_i; i is kept iff b_i - c_i >= 0
    expect = (cb.benefit - cb.cost >= 0).astype(np.uint8)
    assert np.array_equal(mask, expect)


def test_double_greedy_budget_repair():
    rng = np.random.default_rng(12)
    g = random_graph(rng, 8, 14)
    probs = graph.assign_probabilities(g, "uniform", p=0.2)
    cb = make_cb(rng, 8)
    cfg = baselines.BaselineConfig(gain_rollouts=30)
    budget = 150.0
    mask = baselines.double_greedy(g, probs, cb, budget, cfg, rng_seed=13)
    assert cb.cost @ mask <= budget + 1e-9
    m2 = baselines.double_greedy(g, probs, cb, budget, cfg, rng_seed=13)
    assert np.array_equal(mask, m2)


def test_all_baselines_budget_feasible():
    rng = np.random.default_rng(14)
    cfg = baselines.BaselineConfig(gain_rollouts=20, sample_fraction=0.4)
    for trial in range(10):
        n = int(rng.integers(6, 12))
        g = random_graph(rng, n, 2 * n)
        probs = graph.assign_probabilities(g, "uniform", p=0.2)
        cb = make_cb(rng, n)
        budget = float(rng.uniform(40, 500))
        masks = [
            baselines.high_degree(g, cb, budget),
            baselines.single_discount(g, cb, budget),
            baselines.degree_discount(g, cb, budget, 0.1),
            baselines.high_clustering(g, cb, budget),
            baselines.random_selection(g, cb, budget, rng_seed=trial),
            baselines.simple_greedy(g, probs, cb, budget, cfg, rng_seed=trial),
            baselines.stochastic_greedy(g, probs, cb, budget, cfg,
                                        rng_seed=trial),
            baselines.double_greedy(g, probs, cb, budget, cfg, rng_seed=trial),
        ]
        for mask in masks:
            assert cb.cost @ mask <= budget + 1e-9
