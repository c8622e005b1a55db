"""Maximization TSP instances with a planted optimal route.

The generator draws a symmetric positive matrix of base profits, picks a
random closed route, and raises the profit of every edge on that route (in
both directions) to ``max(base) + margin``.  Every tour then earns at most
``n * (max(base) + margin)``, with equality exactly when it traverses the
planted cycle, so the optimum is known by construction.

Cities are 0-based internally; file formats and printed routes are 1-based.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import tour_profit

PROFIT_LOW = 10
PROFIT_HIGH = 30

MAX_BRUTE_FORCE_N = 10


@dataclass
class TspInstance:
    """An n-city profit-maximization TSP with a known planted optimum."""

    n: int
    profit: np.ndarray          # (n, n) int64, symmetric
    planted_route: np.ndarray   # (n + 1,) int64, 0-based, closed
    max_element: int            # max of the base matrix before planting
    margin: int                 # additive constant raising planted edges
    optimum: int                # n * (max_element + margin)

    def validate(self) -> None:
        if self.n < 3:
            raise ValueError(f"instance needs n >= 3, got {self.n}")
        if self.margin < 1:
            raise ValueError(f"margin must be >= 1, got {self.margin}")
        p = self.profit
        if p.shape != (self.n, self.n):
            raise ValueError(f"profit matrix shape {p.shape} != ({self.n}, {self.n})")
        off = ~np.eye(self.n, dtype=bool)
        # zeros encode "no edge" when a zero_fraction was requested
        if not (p[off] >= 0).all():
            raise ValueError("profit matrix must be nonnegative off the diagonal")
        if not (p == p.T).all():
            raise ValueError("profit matrix must be symmetric")
        rt = self.planted_route
        if rt.shape != (self.n + 1,):
            raise ValueError("planted route must hold n + 1 cities")
        if rt[0] != rt[-1]:
            raise ValueError("planted route must be closed (first == last)")
        if sorted(rt[:-1].tolist()) != list(range(self.n)):
            raise ValueError("planted route must visit every city exactly once")
        peak = self.max_element + self.margin
        if self.optimum != self.n * peak:
            raise ValueError("stored optimum != n * (max_element + margin)")
        edge_values = p[rt[:-1], rt[1:]]
        if not (edge_values == peak).all():
            raise ValueError("planted-route edges must all equal max_element + margin")
        planted = np.zeros_like(p, dtype=bool)
        planted[rt[:-1], rt[1:]] = True
        planted[rt[1:], rt[:-1]] = True
        rest = off & ~planted
        if rest.any() and not (p[rest] < peak).all():
            raise ValueError("off-route profits must stay below planted edge value")


def build_profit_matrix(base: np.ndarray, route: np.ndarray, margin: int) -> np.ndarray:
    """Plant ``route`` into a copy of ``base``: every edge on the closed route
    gets ``max(base) + margin``, in both orientations."""
    base = np.asarray(base, dtype=np.int64)
    route = np.asarray(route, dtype=np.int64)
    peak = int(base.max()) + int(margin)
    profit = base.copy()
    for y in range(len(route) - 1):
        i, j = route[y], route[y + 1]
        profit[i, j] = peak
        profit[j, i] = peak
    return profit


def generate_instance(
    n: int,
    seed: int,
    margin: int = 1,
    zero_fraction: float = 0.0,
) -> TspInstance:
    """Construct a random planted-optimum instance.

    Base profits are uniform integers in [10, 30], mirrored from the upper
    triangle (the diagonal is filled but never read by a tour).
    ``zero_fraction`` optionally zeroes that fraction of off-diagonal base
    entries; the default 0.0 keeps the matrix fully dense.
    """
    if n < 3:
        raise ValueError(f"instance needs n >= 3, got {n}")
    if margin < 1:
        raise ValueError(f"margin must be >= 1, got {margin}")
    if not 0.0 <= zero_fraction < 1.0:
        raise ValueError(f"zero_fraction must lie in [0, 1), got {zero_fraction}")
    rng = np.random.Generator(np.random.PCG64(seed))
    draw = rng.integers(PROFIT_LOW, PROFIT_HIGH + 1, size=(n, n), dtype=np.int64)
    base = np.triu(draw) + np.triu(draw, 1).T
    if zero_fraction > 0.0:
        mask = np.triu(rng.random(size=(n, n)) < zero_fraction, 1)
        base[mask | mask.T] = 0
    max_element = int(base.max())
    perm = rng.permutation(n).astype(np.int64)
    route = np.concatenate([perm, perm[:1]])
    profit = build_profit_matrix(base, route, margin)
    profit.setflags(write=False)
    route.setflags(write=False)
    inst = TspInstance(
        n=n,
        profit=profit,
        planted_route=route,
        max_element=max_element,
        margin=margin,
        optimum=n * (max_element + margin),
    )
    inst.validate()
    return inst


def _check_tour(tour: np.ndarray, n: int) -> np.ndarray:
    tour = np.asarray(tour, dtype=np.int64)
    if tour.ndim != 1 or tour.shape[0] != n:
        raise ValueError(f"tour must hold exactly {n} cities, got shape {tour.shape}")
    if sorted(tour.tolist()) != list(range(n)):
        raise ValueError("tour must be a permutation of the city indices")
    return tour


def fitness(tour: np.ndarray, instance: TspInstance) -> int:
    """Profit of the closed route ``tour``, including the closing edge."""
    tour = _check_tour(tour, instance.n)
    return int(tour_profit(instance.profit, tour))


def brute_force_optimum(instance: TspInstance) -> tuple[np.ndarray, int]:
    """Exhaustively find the best tour (first city fixed).  Test oracle only."""
    from itertools import permutations

    n = instance.n
    if n > MAX_BRUTE_FORCE_N:
        raise ValueError(f"brute force is limited to n <= {MAX_BRUTE_FORCE_N}, got {n}")
    profit = instance.profit.tolist()
    best = -1
    best_tour = None
    for rest in permutations(range(1, n)):
        prev = 0
        total = 0
        for city in rest:
            total += profit[prev][city]
            prev = city
        total += profit[prev][0]
        if total > best:
            best = total
            best_tour = (0,) + rest
    return np.array(best_tour, dtype=np.int64), best


def same_cycle(tour_a: np.ndarray, tour_b: np.ndarray) -> bool:
    """True when the two tours traverse the same undirected cycle
    (equal up to rotation and reversal)."""
    a = np.asarray(tour_a, dtype=np.int64)
    b = np.asarray(tour_b, dtype=np.int64)
    if a.shape != b.shape:
        return False
    hits = np.where(b == a[0])[0]
    if hits.size == 0:
        return False
    fwd = np.roll(b, -int(hits[0]))
    if np.array_equal(a, fwd):
        return True
    rev = np.roll(fwd[::-1], 1)
    return bool(np.array_equal(a, rev))


def write_instance(instance: TspInstance, path) -> None:
    """Plain-text format: ``n margin optimum``, the profit rows, then the
    planted route as n + 1 one-based indices."""
    lines = [f"{instance.n} {instance.margin} {instance.optimum}"]
    for row in instance.profit:
        lines.append(" ".join(str(int(v)) for v in row))
    lines.append(" ".join(str(int(c) + 1) for c in instance.planted_route))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_instance(path) -> TspInstance:
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.read().split("\n")
    lines = [(no, ln) for no, ln in enumerate(raw, start=1) if ln.strip()]

    def ints(idx: int, expect: int | None = None) -> list[int]:
        line_no, content = lines[idx]
        try:
            values = [int(p) for p in content.split()]
        except ValueError:
            raise ValueError(f"{path}: line {line_no}: non-integer field") from None
        if expect is not None and len(values) != expect:
            raise ValueError(
                f"{path}: line {line_no}: expected {expect} fields, got {len(values)}"
            )
        return values

    if not lines:
        raise ValueError(f"{path}: empty instance file")
    header = ints(0)
    if len(header) != 3:
        raise ValueError(
            f"{path}: line {lines[0][0]}: header must be 'n margin optimum'"
        )
    n, margin, optimum = header
    if len(lines) != n + 2:
        raise ValueError(f"{path}: expected {n + 2} lines, found {len(lines)}")
    profit = np.array([ints(1 + i, n) for i in range(n)], dtype=np.int64)
    route_1based = ints(n + 1, n + 1)
    route = np.array(route_1based, dtype=np.int64) - 1
    peak = int(profit[route[0], route[1]])
    profit.setflags(write=False)
    route.setflags(write=False)
    inst = TspInstance(
        n=n,
        profit=profit,
        planted_route=route,
        max_element=peak - margin,
        margin=margin,
        optimum=optimum,
    )
    inst.validate()
    return inst
