"""Single GA runs over permutation chromosomes.

A run is a generational loop with fitness-proportional selection (RSIS or
SUS), permutation crossover (PMX or CX) applied per consecutive pool pair
with probability ``crossover_prob``, and inversion mutation applied per child
with probability ``mutation_rate``.  Replacement is wholesale, without
elitism; a run stops once a generation's best fitness equals the instance
optimum, or at the generation cap.

Randomness and determinism
--------------------------
All stochastic choices use numpy's PCG64 via ``numpy.random.Generator``.
The initial population comes from ``population_seed``; in-run operator
decisions come from ``run_seed``.  Per generation the run stream is consumed
in a fixed order: selection draws, then per pair one crossover coin plus two
PMX cut draws when PMX fires, then per child one mutation coin plus two
position draws when mutation fires.  Identical seeds therefore reproduce a
run bit-for-bit, on either kernel backend.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .instance import TspInstance, _check_tour

SELECTION_METHODS = ("RSIS", "SUS")
CROSSOVER_METHODS = ("PMX", "CX")

DEFAULT_POPULATION_SIZE = 30
EVALUATION_BUDGET_FACTOR = 10  # default cap: this many * n * lam evaluations


def default_max_generations(n: int) -> int:
    return EVALUATION_BUDGET_FACTOR * n


@dataclass
class GaConfig:
    selection: str
    crossover: str
    crossover_prob: float
    mutation_rate: float
    population_size: int = DEFAULT_POPULATION_SIZE
    max_generations: int = 1
    population_seed: int = 0
    run_seed: int = 0

    def __post_init__(self):
        if self.selection not in SELECTION_METHODS:
            raise ValueError(f"selection must be one of {SELECTION_METHODS}")
        if self.crossover not in CROSSOVER_METHODS:
            raise ValueError(f"crossover must be one of {CROSSOVER_METHODS}")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must lie in [0, 1]")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be an even integer >= 2")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")


@dataclass
class NoveltyCounters:
    actual_new: int
    expected: int

    @property
    def percent(self) -> float:
        if self.expected == 0:
            return float("nan")
        return 100.0 * self.actual_new / self.expected


@dataclass
class RunResult:
    offline: float
    online: float
    generations: int
    evaluations: int
    reached_optimum: bool
    best_history: np.ndarray = field(repr=False, compare=False)
    novelty: NoveltyCounters = field(default_factory=lambda: NoveltyCounters(0, 0))


def offline_performance(best_history) -> float:
    """Mean of the per-generation best fitness values."""
    hist = np.asarray(best_history, dtype=np.float64)
    if hist.size == 0:
        raise ValueError("offline performance needs a nonempty history")
    return float(hist.mean())


def online_performance(eval_history) -> float:
    """Mean over every fitness evaluation performed."""
    hist = np.asarray(eval_history, dtype=np.float64)
    if hist.size == 0:
        raise ValueError("online performance needs a nonempty history")
    return float(hist.mean())


def _check_fitnesses(fitnesses) -> np.ndarray:
    fits = np.asarray(fitnesses, dtype=np.float64)
    if fits.ndim != 1 or fits.size == 0:
        raise ValueError("fitnesses must be a nonempty 1-d sequence")
    if not (fits > 0).all():
        raise ValueError("fitnesses must all be positive")
    return fits


def rsis_select(fitnesses, lam: int, rng: np.random.Generator) -> np.ndarray:
    """Remainder stochastic independent sampling: floor(e_i) deterministic
    copies, fractional remainders filled stochastically; pool size exactly lam."""
    fits = _check_fitnesses(fitnesses)
    if lam < 1:
        raise ValueError("pool size must be >= 1")
    out = np.empty(lam, dtype=np.int64)
    kernels.fill_rsis(fits, rng, out)
    return out


def sus_select(fitnesses, lam: int, rng: np.random.Generator) -> np.ndarray:
    """Stochastic universal sampling: every count is floor(e_i) or ceil(e_i)."""
    fits = _check_fitnesses(fitnesses)
    if lam < 1:
        raise ValueError("pool size must be >= 1")
    out = np.empty(lam, dtype=np.int64)
    kernels.fill_sus(fits, rng, out)
    return out


def _check_parents(parent_a, parent_b) -> tuple[np.ndarray, np.ndarray, int]:
    a = np.asarray(parent_a, dtype=np.int64)
    b = np.asarray(parent_b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError("parents must have equal length")
    n = a.shape[0]
    if not kernels.is_permutation(a, n) or not kernels.is_permutation(b, n):
        raise ValueError("parents must be permutations of 0..n-1")
    return a, b, n


def pmx(parent_a, parent_b, cut1: int, cut2: int) -> tuple[np.ndarray, np.ndarray]:
    """Partially matched crossover with half-open mapping segment [cut1, cut2)."""
    a, b, n = _check_parents(parent_a, parent_b)
    if not 0 <= cut1 <= cut2 <= n:
        raise ValueError(f"cuts must satisfy 0 <= cut1 <= cut2 <= {n}")
    child_a = np.empty(n, dtype=np.int64)
    child_b = np.empty(n, dtype=np.int64)
    kernels.pmx_pair(a, b, cut1, cut2, child_a, child_b)
    return child_a, child_b


def cx(parent_a, parent_b) -> tuple[np.ndarray, np.ndarray]:
    """Cycle crossover; cycles alternate between parents, first cycle of
    child_a from parent_a."""
    a, b, n = _check_parents(parent_a, parent_b)
    child_a = np.empty(n, dtype=np.int64)
    child_b = np.empty(n, dtype=np.int64)
    kernels.cx_pair(a, b, child_a, child_b)
    return child_a, child_b


def inversion_mutate(tour, i: int, j: int) -> np.ndarray:
    """Return a copy of ``tour`` with positions i..j (inclusive) reversed."""
    t = np.asarray(tour, dtype=np.int64)
    n = t.shape[0]
    if not 0 <= i <= j < n:
        raise ValueError(f"positions must satisfy 0 <= i <= j < {n}")
    out = t.copy()
    kernels.invert_segment(out, i, j)
    return out


def initial_population(instance: TspInstance, lam: int, seed: int) -> np.ndarray:
    """lam random tours, sampled uniformly from the non-optimal permutations.

    Tours that already traverse the planted cycle are rejected and redrawn so
    that every run starts unsolved and actually exercises the search; without
    this, tiny instances are mostly solved by the initial draw alone.  The
    redraw budget is capped (on 3-city instances every tour is optimal).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    pop = np.empty((lam, instance.n), dtype=np.int64)
    for i in range(lam):
        for _ in range(50):
            tour = rng.permutation(instance.n).astype(np.int64)
            if kernels.tour_profit(instance.profit, tour) != instance.optimum:
                break
        pop[i] = tour
    return pop


def run_ga(
    config: GaConfig,
    instance: TspInstance,
    initial_pop: np.ndarray | None = None,
) -> RunResult:
    """Execute one GA run; deterministic given the config seeds."""
    lam = config.population_size
    if initial_pop is None:
        pop = initial_population(instance, lam, config.population_seed)
    else:
        pop = np.array(initial_pop, dtype=np.int64)
        if pop.shape != (lam, instance.n):
            raise ValueError(
                f"initial population must have shape ({lam}, {instance.n})"
            )
        for row in pop:
            _check_tour(row, instance.n)
    rng = np.random.Generator(np.random.PCG64(config.run_seed))
    best_hist = np.empty(config.max_generations, dtype=np.float64)
    gens, reached, online_sum, attempted, created_new = kernels.ga_loop(
        instance.profit,
        pop,
        config.crossover_prob,
        config.mutation_rate,
        config.selection == "SUS",
        config.crossover == "CX",
        config.max_generations,
        instance.optimum,
        rng,
        best_hist,
    )
    history = best_hist[:gens].copy()
    evaluations = gens * lam
    return RunResult(
        offline=offline_performance(history),
        online=float(online_sum) / evaluations,
        generations=int(gens),
        evaluations=int(evaluations),
        reached_optimum=bool(reached),
        best_history=history,
        novelty=NoveltyCounters(int(created_new), int(attempted)),
    )
