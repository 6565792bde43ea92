import itertools

import numpy as np
import pytest

from profitmax import autoencoder, graph, inference, surrogate, trainer
from profitmax.graph import normalized_operator
from conftest import make_cb, random_graph
from oracles import central_diff, rel_error


def tiny_model(n, seed, h=4, z=2):
    theta = surrogate.init_surrogate(h, rng_seed=seed)
    phi = autoencoder.init_autoencoder(n, hidden=6, latent=z, rng_seed=seed + 1)
    return theta, phi


def test_penalized_objective_zero_weights():
    g = random_graph(np.random.default_rng(0), 5, 8)
    a_hat = normalized_operator(g)
    theta = surrogate.SurrogateParams(w1=np.zeros((1, 2)), w2=np.zeros((2, 1)))
    phi = autoencoder.AutoencoderParams(
        enc_w1=np.zeros((5, 3)), enc_b1=np.zeros(3),
        enc_w2=np.zeros((3, 2)), enc_b2=np.zeros(2),
        dec_w1=np.zeros((2, 3)), dec_b1=np.zeros(3),
        dec_w2=np.zeros((3, 5)), dec_b2=np.zeros(5))
    b = np.full(5, 100.0)
    c = np.full(5, 10.0)
    val = inference.penalized_objective(np.zeros(2), theta, phi, a_hat,
                                        b, c, budget=1000.0, mu=0.0)
    assert val == pytest.approx(0.5 * b.sum() - 0.5 * c.sum())


def test_penalty_inactive_inside_budget():
    g = random_graph(np.random.default_rng(1), 5, 8)
    a_hat = normalized_operator(g)
    theta, phi = tiny_model(5, 2)
    b = np.full(5, 100.0)
    c = np.full(5, 10.0)
    z = np.zeros(2)
    v0 = inference.penalized_objective(z, theta, phi, a_hat, b, c, 1000.0, 0.0)
    v1 = inference.penalized_objective(z, theta, phi, a_hat, b, c, 1000.0, 50.0)
    assert v0 == pytest.approx(v1)


def test_objective_matches_independent_recomputation():
    g = graph.from_edges([(0, 1)], directed=False)
    a_hat = normalized_operator(g)
    theta, phi = tiny_model(2, 3)
    b = np.array([100.0, 50.0])
    c = np.array([30.0, 20.0])
    z = np.array([0.4, -0.2])
    mu, budget = 5.0, 0.3 * (c.sum())
    val = inference.penalized_objective(z, theta, phi, a_hat, b, c, budget, mu)
    xs = autoencoder.decode(phi, z)
    p, _ = surrogate.forward(theta, a_hat, xs)
    expect = b @ p - c @ xs - mu * max(0.0, c @ xs - budget)
    assert val == pytest.approx(expect)


@pytest.mark.parametrize("seed", range(5))
def test_latent_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 6, 10)
    a_hat = normalized_operator(g)
    theta, phi = tiny_model(6, 10 + seed, z=3)
    b = rng.uniform(10, 20, size=6)
    c = rng.uniform(1, 3, size=6)
    # exercise both sides of the hinge, away from the boundary
    for budget in (1e6, 1e-3):
        mu = 4.0
        z = rng.standard_normal(3)
        _, analytic = inference.objective_and_grad(z, theta, phi, a_hat,
                                                   b, c, budget, mu)
        fd = central_diff(
            lambda zv: inference.penalized_objective(zv, theta, phi, a_hat,
                                                     b, c, budget, mu), z)
        assert rel_error(analytic, fd) < 1e-4


def test_ascent_best_of_contract():
    rng = np.random.default_rng(4)
    g = random_graph(rng, 6, 10)
    a_hat = normalized_operator(g)
    theta, phi = tiny_model(6, 5, z=3)
    b = rng.uniform(10, 20, size=6)
    c = rng.uniform(1, 3, size=6)
    cfg = inference.InferenceConfig(mu=1.0, ascent_steps=30, restarts=4)
    _, best = inference.latent_ascent(theta, phi, a_hat, b, c, 100.0, cfg,
                                      rng_seed=6)
    for r in range(cfg.restarts):
        z0 = np.random.default_rng([6, r]).standard_normal(3)
        start = inference.penalized_objective(z0, theta, phi, a_hat, b, c,
                                              100.0, 1.0)
        assert best >= start - 1e-12


def test_ascent_zero_steps_returns_initialization():
    rng = np.random.default_rng(5)
    g = random_graph(rng, 5, 8)
    a_hat = normalized_operator(g)
    theta, phi = tiny_model(5, 6)
    b = rng.uniform(10, 20, size=5)
    c = rng.uniform(1, 3, size=5)
    cfg = inference.InferenceConfig(mu=1.0, ascent_steps=0, restarts=1)
    x_soft, _ = inference.latent_ascent(theta, phi, a_hat, b, c, 100.0, cfg,
                                        rng_seed=7)
    z0 = np.random.default_rng([7, 0]).standard_normal(phi.latent_dim)
    assert np.allclose(x_soft, autoencoder.decode(phi, z0))


def test_greedy_round_all_negative_marginals():
    rng = np.random.default_rng(8)
    g = random_graph(rng, 6, 10)
    a_hat = normalized_operator(g)
    theta, _ = tiny_model(6, 9)
    b = np.full(6, 0.01)         # benefits negligible next to costs
    c = np.full(6, 10.0)
    mask = inference.greedy_round(np.full(6, 0.9), theta, a_hat, b, c, 100.0)
    assert mask.sum() == 0


def test_greedy_round_feasible_over_random_trials():
    rng = np.random.default_rng(9)
    for trial in range(20):
        g = random_graph(rng, 7, 12)
        a_hat = normalized_operator(g)
        theta, _ = tiny_model(7, trial)
        cb = make_cb(rng, 7)
        budget = float(rng.uniform(60, 400))
        mask = inference.greedy_round(rng.random(7), theta, a_hat,
                                      cb.benefit, cb.cost, budget)
        assert cb.cost @ mask <= budget + 1e-9


def surrogate_profit(theta, a_hat, b, c, mask):
    p, _ = surrogate.forward(theta, a_hat, mask.astype(float))
    return float(b @ p) - float(c @ mask)


def best_feasible_subset(theta, a_hat, b, c, budget, n):
    best = -np.inf
    for bits in itertools.product([0, 1], repeat=n):
        mask = np.array(bits, dtype=np.uint8)
        if c @ mask <= budget:
            best = max(best, surrogate_profit(theta, a_hat, b, c, mask))
    return best


def test_rounding_near_optimal_small():
    rng = np.random.default_rng(10)
    for trial in range(5):
        g = random_graph(rng, 6, 10)
        a_hat = normalized_operator(g)
        theta, _ = tiny_model(6, 20 + trial)
        theta.w1 += rng.normal(scale=0.5, size=theta.w1.shape)
        theta.w2 += rng.normal(scale=0.5, size=theta.w2.shape)
        cb = make_cb(rng, 6, cost_range=(1.0, 5.0), benefit_range=(5.0, 30.0))
        budget = float(rng.uniform(5, 15))
        mask = inference.greedy_round(rng.random(6), theta, a_hat,
                                      cb.benefit, cb.cost, budget)
        achieved = surrogate_profit(theta, a_hat, cb.benefit, cb.cost, mask)
        best = best_feasible_subset(theta, a_hat, cb.benefit, cb.cost,
                                    budget, 6)
        assert achieved >= 0.9 * best


def train_and_checkpoint(g, probs, cb, budget, seed):
    cfg = trainer.TrainConfig(masks=40, labels_per_mask=2, epochs=60,
                              batch_size=16, hidden=8, ae_hidden=12,
                              latent_dim=3)
    samples = trainer.generate_training_set(g, probs, cb, budget, cfg,
                                            rng_seed=seed)
    theta, phi, _ = trainer.train(samples, normalized_operator(g), cfg,
                                  rng_seed=seed)
    return trainer.Checkpoint(theta=theta, phi=phi, node_count=g.node_count,
                              budget=budget, rng_seed=seed)


def test_select_seeds_feasible_and_deterministic():
    rng = np.random.default_rng(11)
    g = random_graph(rng, 8, 16)
    probs = graph.assign_probabilities(g, "uniform", p=0.2)
    cb = make_cb(rng, 8)
    budget = 250.0
    ckpt = train_and_checkpoint(g, probs, cb, budget, seed=12)
    cfg = inference.InferenceConfig(restarts=2, ascent_steps=30)
    m1, d1 = inference.select_seeds(g, probs, cb, budget, ckpt, cfg, rng_seed=13)
    m2, d2 = inference.select_seeds(g, probs, cb, budget, ckpt, cfg, rng_seed=13)
    assert np.array_equal(m1, m2)
    assert d1 == d2
    assert cb.cost @ m1 <= budget + 1e-9
    assert d1["seed_count"] == int(m1.sum())


def test_select_seeds_dimension_mismatch():
    rng = np.random.default_rng(14)
    g = random_graph(rng, 8, 16)
    g_other = random_graph(rng, 9, 16)
    probs = graph.assign_probabilities(g_other, "uniform", p=0.2)
    cb = make_cb(rng, 9)
    ckpt = train_and_checkpoint(
        g, graph.assign_probabilities(g, "uniform", p=0.2),
        make_cb(rng, 8), 250.0, seed=15)
    with pytest.raises(ValueError):
        inference.select_seeds(g_other, probs, cb, 250.0, ckpt,
                               inference.InferenceConfig(), rng_seed=0)


def test_cheap_hub_star_selected():
    # hub 0 with 5 leaves, strong transmission, cheap high-benefit hub
    g = graph.from_edges([(0, i) for i in range(1, 6)], directed=False)
    probs = graph.assign_probabilities(g, "uniform", p=0.9)
    cb = graph.CostBenefit(
        cost=np.array([10.0, 90.0, 90.0, 90.0, 90.0, 90.0]),
        benefit=np.array([1000.0, 900.0, 900.0, 900.0, 900.0, 900.0]))
    budget = 100.0
    ckpt = train_and_checkpoint(g, probs, cb, budget, seed=16)
    cfg = inference.InferenceConfig(restarts=4, ascent_steps=60)
    mask, _ = inference.select_seeds(g, probs, cb, budget, ckpt, cfg,
                                     rng_seed=17)
    assert mask[0] == 1
