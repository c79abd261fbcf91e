"""Fitness functions and the search algorithms: steady-state EA, random
search and NSGA-II.

All algorithms count every fitness evaluation, including the initial
population, against ``SearchConfig.budget``.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .encodings import Encoding, Genotype, encoding_of, get_encoding
from .properties import _beta_kernel, _delta_kernel
from .sbox import SBox

Fitness = Union[int, tuple[int, int]]

SERIES_STRIDE = 1000


@dataclass(frozen=True)
class SearchConfig:
    encoding: str = "permutation"
    n: int = 4
    pop_size: int = 500
    mutation_prob: float = 0.7
    budget: int = 500_000
    seed: int = 0
    objective: str = "single"

    def __post_init__(self):
        object.__setattr__(self, "encoding", get_encoding(self.encoding).name)
        if self.pop_size < 3:
            raise ValueError("pop_size must be at least 3")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.objective not in ("single", "multi"):
            raise ValueError(f"objective must be 'single' or 'multi', got {self.objective!r}")


@dataclass(slots=True)
class Individual:
    genotype: Genotype
    fitness: Fitness
    bal: int
    eval_index: int


@dataclass
class RunRecord:
    """Outcome of one seeded run.

    For multi-objective runs ``best_fitness`` is the lowest beta on the final
    front, and ``front`` lists the front's (beta, delta, genotype) points.
    """

    algorithm: str
    config: dict
    best_fitness: int
    best_genotype: str
    bal: int
    convergence: list[tuple[int, int]]
    evaluations: int
    wall_time: float = 0.0
    front: list[tuple[int, int, str]] = field(default_factory=list)
    front_history: list[list[tuple[int, int]]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        d = dict(d)
        d["convergence"] = [tuple(p) for p in d["convergence"]]
        d["front"] = [tuple(p) for p in d.get("front", [])]
        d["front_history"] = [[tuple(p) for p in gen] for gen in d.get("front_history", [])]
        return cls(**d)


@dataclass
class ParetoFront:
    points: list[tuple[int, int, Genotype]]

    def objectives(self) -> list[tuple[int, int]]:
        return [(b, d) for b, d, _ in self.points]


# -- fitness -----------------------------------------------------------------


def _evaluate(f: SBox, multi: bool) -> tuple[Fitness, int]:
    arr = f.array
    bal = f.size - len(set(f.table))
    if bal:
        penalty = f.size + bal
        return ((penalty, penalty) if multi else penalty), bal
    beta = int(_beta_kernel(arr))
    if not multi:
        return beta, 0
    return (beta, int(_delta_kernel(arr))), 0


def fitness_single(g: Genotype) -> int:
    """Boomerang uniformity, or 2^n + BAL for unbalanced S-boxes. Lower is better."""
    return _evaluate(encoding_of(g).decode(g), multi=False)[0]


def fitness_multi(g: Genotype) -> tuple[int, int]:
    """(beta, delta); both are 2^n + BAL when the S-box is unbalanced."""
    return _evaluate(encoding_of(g).decode(g), multi=True)[0]


class _Evaluator:
    """Counts evaluations and logs the best-so-far series."""

    def __init__(self, enc: Encoding, multi: bool):
        self.enc = enc
        self.multi = multi
        self.count = 0
        self.best: Optional[Individual] = None
        self.series: list[tuple[int, int]] = []

    def __call__(self, g: Genotype) -> Individual:
        fit, bal = _evaluate(self.enc.decode(g), self.multi)
        self.count += 1
        ind = Individual(g, fit, bal, self.count)
        key = fit[0] if self.multi else fit
        if self.best is None or key < self._key(self.best):
            self.best = ind
            self.series.append((self.count, key))
        elif self.count % SERIES_STRIDE == 0:
            self.series.append((self.count, self._key(self.best)))
        return ind

    def _key(self, ind: Individual) -> int:
        return ind.fitness[0] if self.multi else ind.fitness


def _record(algorithm: str, cfg: SearchConfig, ev: _Evaluator, started: float, **extra) -> RunRecord:
    best = ev.best
    return RunRecord(
        algorithm=algorithm,
        config=asdict(cfg),
        best_fitness=ev._key(best),
        best_genotype=ev.enc.serialize(best.genotype),
        bal=best.bal,
        convergence=ev.series,
        evaluations=ev.count,
        wall_time=time.perf_counter() - started,
        **extra,
    )


# -- single objective --------------------------------------------------------


def _three_distinct(rng: random.Random, size: int) -> list[int]:
    picked = []
    while len(picked) < 3:
        i = rng.randrange(size)
        if i not in picked:
            picked.append(i)
    return picked


def steady_state_ea(cfg: SearchConfig, ops: Optional[Encoding] = None) -> RunRecord:
    """Steady-state EA with 3-tournament elimination.

    Each step samples three distinct individuals, removes the worst (ties
    broken uniformly), crosses the remaining two and mutates the child with
    probability ``mutation_prob``; the child takes the removed slot.
    """
    if cfg.objective != "single":
        raise ValueError("steady_state_ea optimizes a single objective")
    if cfg.budget < cfg.pop_size:
        raise ValueError(f"budget {cfg.budget} cannot initialize a population of {cfg.pop_size}")
    started = time.perf_counter()
    enc = ops or get_encoding(cfg.encoding)
    rng = random.Random(cfg.seed)
    ev = _Evaluator(enc, multi=False)
    pop = [ev(enc.random(cfg.n, rng)) for _ in range(cfg.pop_size)]
    while ev.count < cfg.budget:
        picked = _three_distinct(rng, cfg.pop_size)
        worst = max(pop[i].fitness for i in picked)
        losers = [i for i in picked if pop[i].fitness == worst]
        loser = losers[0] if len(losers) == 1 else rng.choice(losers)
        a, b = (pop[i].genotype for i in picked if i != loser)
        child = enc.crossover(a, b, rng)
        if rng.random() < cfg.mutation_prob:
            child = enc.mutate(child, rng)
        pop[loser] = ev(child)
    return _record("ea", cfg, ev, started)


def random_search(cfg: SearchConfig, ops: Optional[Encoding] = None) -> RunRecord:
    if cfg.objective != "single":
        raise ValueError("random_search optimizes a single objective")
    started = time.perf_counter()
    enc = ops or get_encoding(cfg.encoding)
    rng = random.Random(cfg.seed)
    ev = _Evaluator(enc, multi=False)
    while ev.count < cfg.budget:
        ev(enc.random(cfg.n, rng))
    return _record("rs", cfg, ev, started)


# -- multi objective ---------------------------------------------------------


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """Pareto dominance under minimization."""
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def nondominated_sort(points: Sequence[Sequence[float]]) -> list[list[int]]:
    """Fast non-dominated sorting; returns fronts as lists of indices."""
    if len(points) == 0:
        return []
    f = np.asarray(points, dtype=float)
    le = (f[:, None, :] <= f[None, :, :]).all(axis=2)
    lt = (f[:, None, :] < f[None, :, :]).any(axis=2)
    dom = le & lt  # dom[p, q]: p dominates q
    counts = dom.sum(axis=0)
    fronts = []
    current = np.flatnonzero(counts == 0)
    while current.size:
        fronts.append(current.tolist())
        counts = counts - dom[current].sum(axis=0)
        counts[current] = -1
        current = np.flatnonzero(counts == 0)
    return fronts


def crowding_distance(front: Sequence[Sequence[float]]) -> list[float]:
    f = np.asarray(front, dtype=float)
    size, m = f.shape
    dist = np.zeros(size)
    for k in range(m):
        order = np.argsort(f[:, k], kind="stable")
        lo, hi = f[order[0], k], f[order[-1], k]
        dist[order[0]] = dist[order[-1]] = np.inf
        if hi == lo or size < 3:
            continue
        gaps = (f[order[2:], k] - f[order[:-2], k]) / (hi - lo)
        dist[order[1:-1]] += gaps
    return dist.tolist()


def _rank_and_crowd(pop: list[Individual]) -> tuple[list[list[int]], list[int], list[float]]:
    fronts = nondominated_sort([ind.fitness for ind in pop])
    rank = [0] * len(pop)
    crowd = [0.0] * len(pop)
    for r, front in enumerate(fronts):
        dist = crowding_distance([pop[i].fitness for i in front])
        for i, d in zip(front, dist):
            rank[i] = r
            crowd[i] = d
    return fronts, rank, crowd


def _front_points(pop: list[Individual], front: list[int]) -> list[int]:
    """Indices of the first occurrence of each distinct objective vector."""
    seen = {}
    for i in front:
        seen.setdefault(tuple(pop[i].fitness), i)
    return [seen[k] for k in sorted(seen)]


def nsga2(cfg: SearchConfig, ops: Optional[Encoding] = None) -> tuple[ParetoFront, RunRecord]:
    """Generational NSGA-II minimizing (beta, delta)."""
    if cfg.objective != "multi":
        raise ValueError("nsga2 needs objective='multi'")
    if cfg.budget < cfg.pop_size:
        raise ValueError(f"budget {cfg.budget} cannot initialize a population of {cfg.pop_size}")
    started = time.perf_counter()
    enc = ops or get_encoding(cfg.encoding)
    rng = random.Random(cfg.seed)
    ev = _Evaluator(enc, multi=True)
    pop = [ev(enc.random(cfg.n, rng)) for _ in range(cfg.pop_size)]
    fronts, rank, crowd = _rank_and_crowd(pop)
    history = [[tuple(pop[i].fitness) for i in _front_points(pop, fronts[0])]]

    def tournament() -> Individual:
        i, j = rng.sample(range(len(pop)), 2)
        if rank[i] != rank[j]:
            return pop[i] if rank[i] < rank[j] else pop[j]
        if crowd[i] != crowd[j]:
            return pop[i] if crowd[i] > crowd[j] else pop[j]
        return pop[i] if rng.random() < 0.5 else pop[j]

    while ev.count < cfg.budget:
        offspring = []
        for _ in range(min(cfg.pop_size, cfg.budget - ev.count)):
            child = enc.crossover(tournament().genotype, tournament().genotype, rng)
            if rng.random() < cfg.mutation_prob:
                child = enc.mutate(child, rng)
            offspring.append(ev(child))
        merged = pop + offspring
        merged_fronts, merged_rank, merged_crowd = _rank_and_crowd(merged)
        keep: list[int] = []
        for front in merged_fronts:
            if len(keep) + len(front) <= cfg.pop_size:
                keep.extend(front)
            else:
                front = sorted(front, key=lambda i: -merged_crowd[i])
                keep.extend(front[: cfg.pop_size - len(keep)])
                break
        pop = [merged[i] for i in keep]
        fronts, rank, crowd = _rank_and_crowd(pop)
        history.append([tuple(pop[i].fitness) for i in _front_points(pop, fronts[0])])

    final = [pop[i] for i in _front_points(pop, fronts[0])]
    front = ParetoFront([(ind.fitness[0], ind.fitness[1], ind.genotype) for ind in final])
    record = _record(
        "nsga2", cfg, ev, started,
        front=[(b, d, enc.serialize(g)) for b, d, g in front.points],
        front_history=history,
    )
    # the best of the final front, not the best ever seen
    record.best_fitness = final[0].fitness[0]
    record.best_genotype = enc.serialize(final[0].genotype)
    record.bal = final[0].bal
    return front, record
