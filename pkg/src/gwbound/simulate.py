"""Monte Carlo Galton-Watson simulation with negative binomial offspring.

Replicate ``i`` draws from its own PCG64 stream seeded by
``SeedSequence(seed, spawn_key=(i,))`` -- the same stream
``SeedSequence(seed).spawn(n)[i]`` would give -- so any replicate can be
reproduced on its own and the replicate loop can be split across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .pgf import Params, nb_success_prob

PGF_POINTS = tuple(round(0.1 * i, 1) for i in range(1, 10))
HARD_POPULATION_LIMIT = 2 ** 62


@dataclass(frozen=True)
class SimConfig:
    params: Params
    replicates: int = 100_000
    max_generations: int = 200
    seed: int = 0
    cap: int = 10 ** 6

    def __post_init__(self):
        for name in ("replicates", "max_generations", "cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        return {
            "r": self.params.r,
            "zeta": str(self.params.zeta),
            "replicates": self.replicates,
            "max_generations": self.max_generations,
            "seed": self.seed,
            "cap": self.cap,
        }


@dataclass
class SimReport:
    config: SimConfig
    extinct: int
    survived: int
    censored: int
    alive_fraction: List[float]
    cum_extinct_fraction: List[float]
    empirical_pgf: Dict[float, float]
    offspring_mean: float
    extinct_by_generation: List[int] = field(repr=False, default_factory=list)

    @property
    def extinct_fraction(self) -> float:
        return self.extinct / self.config.replicates

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seed": self.config.seed,
            "extinct": self.extinct,
            "survived": self.survived,
            "censored": self.censored,
            "extinct_fraction": self.extinct_fraction,
            "offspring_mean": self.offspring_mean,
            "empirical_pgf": {f"{x:.1f}": v for x, v in self.empirical_pgf.items()},
            "alive_fraction": self.alive_fraction,
            "cum_extinct_fraction": self.cum_extinct_fraction,
        }

    def rows(self):
        for g, (a, c) in enumerate(zip(self.alive_fraction, self.cum_extinct_fraction)):
            yield g, a, c


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def sample_offspring(p: Params, rng: np.random.Generator, size: Optional[int] = None):
    """Offspring count(s) with ``P(K=k) = binom(k+r-1, k) s**r (1-s)**k``, s from :func:`nb_success_prob`."""
    return rng.negative_binomial(p.r, float(nb_success_prob(p)), size=size)


def run_simulation(cfg: SimConfig) -> SimReport:
    """Simulate ``cfg.replicates`` independent lineages from one founder each.

    A lineage is extinct when its size hits 0, survived once it reaches
    ``cfg.cap``, and censored if neither happens within ``max_generations``.
    The total offspring of ``Z`` individuals is one NB(r*Z, s) draw, which
    has exactly the law of a sum of ``Z`` independent NB(r, s) counts.
    """
    p = cfg.params
    s = float(nb_success_prob(p))
    r = p.r
    gmax = cfg.max_generations
    extinct_at = np.zeros(gmax + 1, dtype=np.int64)
    survived = censored = 0
    first_gen = np.empty(cfg.replicates, dtype=np.int64)
    for i in range(cfg.replicates):
        rng = replicate_rng(cfg.seed, i)
        z = 1
        for g in range(1, gmax + 1):
            z = int(rng.negative_binomial(r * z, s))
            if g == 1:
                first_gen[i] = z
            if z == 0:
                extinct_at[g] += 1
                break
            if z >= cfg.cap:
                survived += 1
                break
            if z * r > HARD_POPULATION_LIMIT:
                raise MemoryError(f"population {z} exceeds the hard limit (replicate {i})")
        else:
            censored += 1
    extinct = int(extinct_at.sum())
    cum = np.cumsum(extinct_at) / cfg.replicates
    pgf = {x: float(np.mean(np.power(x, first_gen.astype(float)))) for x in PGF_POINTS}
    return SimReport(
        config=cfg,
        extinct=extinct,
        survived=survived,
        censored=censored,
        alive_fraction=(1.0 - cum).tolist(),
        cum_extinct_fraction=cum.tolist(),
        empirical_pgf=pgf,
        offspring_mean=float(first_gen.mean()),
        extinct_by_generation=extinct_at.tolist(),
    )
