import math
from fractions import Fraction as F

import numpy as np
import pytest

from gwbound.pgf import Params, nb_success_prob, offspring_mean, phi_nb
from gwbound.simulate import SimConfig, replicate_rng, run_simulation, sample_offspring

N_DRAWS = 10 ** 6


@pytest.fixture(scope="module", params=[(2, 0.5), (3, 0.7), (5, 0.9)], ids=str)
def draws(request):
    r, zeta = request.param
    p = Params(r, zeta)
    rng = np.random.Generator(np.random.PCG64(12345))
    return p, sample_offspring(p, rng, size=N_DRAWS)


def test_sampler_mean(draws):
    p, k = draws
    s = float(nb_success_prob(p))
    mean = float(offspring_mean(p))
    sd = math.sqrt(p.r * (1 - s) / s ** 2 / N_DRAWS)
    assert abs(k.mean() - mean) < 4 * sd


def test_sampler_zero_probability(draws):
    p, k = draws
    p0 = phi_nb(p, 0.0)
    assert p0 == pytest.approx(float(nb_success_prob(p)) ** p.r, rel=1e-12)
    sd = math.sqrt(p0 * (1 - p0) / N_DRAWS)
    assert abs(np.mean(k == 0) - p0) < 4 * sd


def test_sampler_empirical_pgf(draws):
    p, k = draws
    for x in [i / 10 for i in range(1, 10)]:
        vals = np.power(x, k.astype(float))
        target = phi_nb(p, x)
        sd = math.sqrt(max(phi_nb(p, x * x) - target ** 2, 0.0) / N_DRAWS)
        assert abs(vals.mean() - target) < 4 * sd + 1e-12, x


def test_replicate_streams_are_independent_of_count():
    a = replicate_rng(7, 3).integers(0, 2 ** 63, size=4)
    b = np.random.Generator(np.random.PCG64(np.random.SeedSequence(7).spawn(5)[3])).integers(0, 2 ** 63, size=4)
    assert (a == b).all()


def test_config_validation():
    p = Params(2, 0.5)
    for kw in ({"replicates": 0}, {"max_generations": 0}, {"cap": 0}, {"seed": -1}):
        with pytest.raises(ValueError):
            SimConfig(p, **kw)


def test_single_replicate_deterministic():
    cfg = SimConfig(Params(2, 0.5), replicates=1, seed=11)
    assert run_simulation(cfg).to_dict() == run_simulation(cfg).to_dict()


def test_small_run_invariants():
    cfg = SimConfig(Params(3, F(7, 10)), replicates=2000, max_generations=50, seed=5, cap=10 ** 4)
    rep = run_simulation(cfg)
    assert rep.extinct + rep.survived + rep.censored == cfg.replicates
    alive = rep.alive_fraction
    assert all(b <= a for a, b in zip(alive, alive[1:]))
    assert alive[0] == 1.0
    assert rep.cum_extinct_fraction[-1] == pytest.approx(rep.extinct_fraction)
    rows = list(rep.rows())
    assert len(rows) == cfg.max_generations + 1 and rows[0] == (0, 1.0, 0.0)
    assert set(rep.to_dict()["empirical_pgf"]) == {f"{i / 10:.1f}" for i in range(1, 10)}


def test_extinction_frequency_small():
    p = Params(2, 0.5)
    cfg = SimConfig(p, replicates=20_000, seed=1)
    rep = run_simulation(cfg)
    sigma = math.sqrt(0.25 * 0.75 / cfg.replicates)
    assert abs(rep.extinct_fraction - 0.25) < 4 * sigma
