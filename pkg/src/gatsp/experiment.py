"""Factorial treatment designs, the sweep runner, and run persistence.

A design is the Cartesian product of the four factor level lists (selection,
crossover, pc, pm) with ``replications`` runs per cell.  The replicate acts
as a block: every cell inside replicate k starts from the same initial
population, while in-run operator decisions get a cell-specific stream.

Seeds are derived from the master seed with SHA-256 over a canonical key
string, so any cell/replicate stream is reproducible in isolation and
independent of every other cell.
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

import numpy as np

from .engine import (
    CROSSOVER_METHODS,
    DEFAULT_POPULATION_SIZE,
    SELECTION_METHODS,
    GaConfig,
    default_max_generations,
    initial_population,
    run_ga,
)
from .instance import TspInstance

RUNS_HEADER = (
    "n,selection,crossover,pc,pm,rep,pop_seed,run_seed,offline,online,"
    "generations,evaluations,reached_optimum,xover_attempted,xover_new"
)

# Shipped factor grids: the full small/intermediate-size grid, the reduced
# grid for big problem sizes, and the grid used for the PMX-vs-CX novelty
# comparison (same levels as the big grid).
PRESETS = {
    "table1-small": {
        "pc": (0.60, 0.65, 0.70, 0.75, 0.80),
        "pm": (0.02, 0.04, 0.06, 0.08, 0.10),
    },
    "table3-novelty": {
        "pc": (0.60, 0.70, 0.80),
        "pm": (0.001, 0.010, 0.100),
    },
    "big": {
        "pc": (0.60, 0.70, 0.80),
        "pm": (0.001, 0.010, 0.100),
    },
}


@dataclass(frozen=True)
class Cell:
    selection: str
    crossover: str
    pc: float
    pm: float


@dataclass(frozen=True)
class Design:
    problem_size: int
    selection_levels: tuple[str, ...] = SELECTION_METHODS
    crossover_levels: tuple[str, ...] = CROSSOVER_METHODS
    pc_levels: tuple[float, ...] = PRESETS["table1-small"]["pc"]
    pm_levels: tuple[float, ...] = PRESETS["table1-small"]["pm"]
    replications: int = 4

    def __post_init__(self):
        if self.problem_size < 3:
            raise ValueError("problem_size must be >= 3")
        if self.replications < 2:
            raise ValueError("replications must be >= 2 (error df must be positive)")
        for name, levels in (
            ("selection", self.selection_levels),
            ("crossover", self.crossover_levels),
            ("pc", self.pc_levels),
            ("pm", self.pm_levels),
        ):
            if len(levels) == 0:
                raise ValueError(f"{name} levels must be nonempty")
            if len(set(levels)) != len(levels):
                raise ValueError(f"{name} levels must be duplicate-free")
        for s in self.selection_levels:
            if s not in SELECTION_METHODS:
                raise ValueError(f"unknown selection level {s!r}")
        for c in self.crossover_levels:
            if c not in CROSSOVER_METHODS:
                raise ValueError(f"unknown crossover level {c!r}")
        for p in self.pc_levels + self.pm_levels:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability level {p} outside [0, 1]")

    def cells(self) -> list[Cell]:
        """All factor combinations, lexicographic by factor declaration order."""
        return [
            Cell(s, c, pc, pm)
            for s, c, pc, pm in product(
                self.selection_levels,
                self.crossover_levels,
                self.pc_levels,
                self.pm_levels,
            )
        ]

    @property
    def run_count(self) -> int:
        return len(self.cells()) * self.replications


def build_design(
    n: int,
    preset: str | None = None,
    reps: int = 4,
    selection=SELECTION_METHODS,
    crossover=CROSSOVER_METHODS,
    pc=None,
    pm=None,
) -> Design:
    """Build a Design from a named preset and/or explicit level lists."""
    if preset is not None:
        if preset not in PRESETS:
            raise ValueError(
                f"unknown preset {preset!r}; choose from {sorted(PRESETS)}"
            )
        grid = PRESETS[preset]
        pc = grid["pc"] if pc is None else pc
        pm = grid["pm"] if pm is None else pm
    if pc is None or pm is None:
        raise ValueError("pc and pm levels are required unless a preset names them")
    return Design(
        problem_size=n,
        selection_levels=tuple(selection),
        crossover_levels=tuple(crossover),
        pc_levels=tuple(float(v) for v in pc),
        pm_levels=tuple(float(v) for v in pm),
        replications=reps,
    )


def derive_seed(master_seed: int, *parts) -> int:
    """Stable 64-bit stream key: SHA-256 over a canonical key string."""
    key = "|".join(str(p) for p in ("gatsp", master_seed, *parts))
    digest = hashlib.sha256(key.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def population_seed(master_seed: int, rep: int) -> int:
    return derive_seed(master_seed, "pop", rep)


def run_seed(master_seed: int, cell: Cell, rep: int) -> int:
    return derive_seed(
        master_seed, "run", cell.selection, cell.crossover,
        repr(cell.pc), repr(cell.pm), rep,
    )


@dataclass
class RunRecord:
    n: int
    selection: str
    crossover: str
    pc: float
    pm: float
    rep: int
    pop_seed: int
    run_seed: int
    offline: float
    online: float
    generations: int
    evaluations: int
    reached_optimum: bool
    xover_attempted: int
    xover_new: int


@dataclass
class RunTable:
    records: list[RunRecord]

    def __len__(self) -> int:
        return len(self.records)

    def __eq__(self, other) -> bool:
        return isinstance(other, RunTable) and self.records == other.records

    def column(self, name: str) -> np.ndarray:
        values = [getattr(r, name) for r in self.records]
        if name in ("selection", "crossover"):
            return np.array(values, dtype=object)
        return np.array(values)


def run_sweep(
    design: Design,
    instance: TspInstance,
    master_seed: int,
    lam: int = DEFAULT_POPULATION_SIZE,
    max_generations: int | None = None,
    threads: int = 1,
) -> RunTable:
    """Run every cell x replicate of the design; rows come back in canonical
    order (cells lexicographic, replicates 1..r within each cell) regardless
    of scheduling."""
    if instance.n != design.problem_size:
        raise ValueError(
            f"instance has n={instance.n} but the design expects "
            f"n={design.problem_size}"
        )
    if max_generations is None:
        max_generations = default_max_generations(instance.n)
    cells = design.cells()
    reps = range(1, design.replications + 1)

    pop_seeds = {rep: population_seed(master_seed, rep) for rep in reps}
    base_pops = {
        rep: initial_population(instance, lam, pop_seeds[rep]) for rep in reps
    }

    def execute(job):
        cell, rep = job
        config = GaConfig(
            selection=cell.selection,
            crossover=cell.crossover,
            crossover_prob=cell.pc,
            mutation_rate=cell.pm,
            population_size=lam,
            max_generations=max_generations,
            population_seed=pop_seeds[rep],
            run_seed=run_seed(master_seed, cell, rep),
        )
        try:
            result = run_ga(config, instance, initial_pop=base_pops[rep])
        except Exception as exc:  # identify the failing cell, abort the sweep
            raise RuntimeError(
                f"GA run failed for cell {cell} replicate {rep}: {exc}"
            ) from exc
        return RunRecord(
            n=instance.n,
            selection=cell.selection,
            crossover=cell.crossover,
            pc=cell.pc,
            pm=cell.pm,
            rep=rep,
            pop_seed=config.population_seed,
            run_seed=config.run_seed,
            offline=result.offline,
            online=result.online,
            generations=result.generations,
            evaluations=result.evaluations,
            reached_optimum=result.reached_optimum,
            xover_attempted=result.novelty.expected,
            xover_new=result.novelty.actual_new,
        )

    jobs = [(cell, rep) for cell in cells for rep in reps]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(execute, jobs))
    else:
        records = [execute(job) for job in jobs]
    return RunTable(records)


def _format_float(value: float) -> str:
    return repr(float(value))


def write_runs(table: RunTable, path) -> None:
    lines = [RUNS_HEADER]
    for r in table.records:
        lines.append(
            ",".join(
                (
                    str(r.n),
                    r.selection,
                    r.crossover,
                    _format_float(r.pc),
                    _format_float(r.pm),
                    str(r.rep),
                    str(r.pop_seed),
                    str(r.run_seed),
                    _format_float(r.offline),
                    _format_float(r.online),
                    str(r.generations),
                    str(r.evaluations),
                    "1" if r.reached_optimum else "0",
                    str(r.xover_attempted),
                    str(r.xover_new),
                )
            )
        )
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_runs(path) -> RunTable:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != RUNS_HEADER:
        raise ValueError(f"{path}: line 1: malformed runs header")
    n_cols = len(RUNS_HEADER.split(","))
    records = []
    for idx, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != n_cols:
            raise ValueError(
                f"{path}: line {idx}: expected {n_cols} columns, got {len(parts)}"
            )
        try:
            records.append(
                RunRecord(
                    n=int(parts[0]),
                    selection=parts[1],
                    crossover=parts[2],
                    pc=float(parts[3]),
                    pm=float(parts[4]),
                    rep=int(parts[5]),
                    pop_seed=int(parts[6]),
                    run_seed=int(parts[7]),
                    offline=float(parts[8]),
                    online=float(parts[9]),
                    generations=int(parts[10]),
                    evaluations=int(parts[11]),
                    reached_optimum=bool(int(parts[12])),
                    xover_attempted=int(parts[13]),
                    xover_new=int(parts[14]),
                )
            )
        except ValueError as exc:
            raise ValueError(f"{path}: line {idx}: non-numeric field ({exc})") from None
        if records[-1].selection not in SELECTION_METHODS:
            raise ValueError(
                f"{path}: line {idx}: unknown selection {records[-1].selection!r}"
            )
        if records[-1].crossover not in CROSSOVER_METHODS:
            raise ValueError(
                f"{path}: line {idx}: unknown crossover {records[-1].crossover!r}"
            )
    return RunTable(records)
