"""Hot numeric kernels for the GA inner loop.

Every function here is written in a numba-compilable subset of NumPy and is
compiled with ``@njit`` unless the numpy backend is selected (see
:mod:`gatsp.backend`).  All randomness comes from a ``numpy.random.Generator``
passed in by the caller; numba executes the same PCG64 stream as CPython, so
the two backends produce identical results.

Tours are int64 arrays holding 0-based city indices.  The profit matrix is a
square int64 array.
"""

import numpy as np

from .backend import jit


@jit
def tour_profit(profit, tour):
    """Total profit of the closed route ``tour`` (closing edge included)."""
    n = tour.shape[0]
    total = np.int64(0)
    for k in range(n - 1):
        total += profit[tour[k], tour[k + 1]]
    total += profit[tour[n - 1], tour[0]]
    return total


@jit
def evaluate_population(profit, pop, out):
    for i in range(pop.shape[0]):
        out[i] = tour_profit(profit, pop[i])


@jit
def tours_equal(x, y):
    for k in range(x.shape[0]):
        if x[k] != y[k]:
            return False
    return True


@jit
def is_permutation(tour, n):
    if tour.shape[0] != n:
        return False
    seen = np.zeros(n, dtype=np.bool_)
    for k in range(n):
        v = tour[k]
        if v < 0 or v >= n or seen[v]:
            return False
        seen[v] = True
    return True


@jit
def fill_rsis(fits, rng, out):
    """Remainder stochastic independent sampling into ``out``.

    Each individual first receives floor(e_i) deterministic slots, where
    e_i = lam * f_i / sum(f).  The remaining slots are drawn independently,
    one draw per slot, with probability proportional to the fractional parts
    frac(e_i), which keeps the expected slot count of every individual at
    exactly e_i.
    """
    lam = out.shape[0]
    m = fits.shape[0]
    total = 0.0
    for i in range(m):
        total += fits[i]
    k = 0
    for i in range(m):
        e = lam * fits[i] / total
        c = int(e)
        for _ in range(c):
            if k < lam:
                out[k] = i
                k += 1
    if k < lam:
        fracs = np.empty(m, dtype=np.float64)
        fracsum = 0.0
        for i in range(m):
            e = lam * fits[i] / total
            fracs[i] = e - int(e)
            fracsum += fracs[i]
        while k < lam:
            if fracsum <= 0.0:
                # float-degenerate remainders; fill round-robin
                out[k] = k % m
                k += 1
                continue
            u = rng.random() * fracsum
            acc = 0.0
            pick = m - 1
            for i in range(m):
                acc += fracs[i]
                if u < acc:
                    pick = i
                    break
            out[k] = pick
            k += 1


@jit
def fill_sus(fits, rng, out):
    """Stochastic universal sampling: one spin, lam equally spaced pointers."""
    lam = out.shape[0]
    m = fits.shape[0]
    total = 0.0
    for i in range(m):
        total += fits[i]
    step = total / lam
    u = rng.random() * step
    i = 0
    acc = np.float64(fits[0])
    for k in range(lam):
        p = u + k * step
        while p >= acc and i < m - 1:
            i += 1
            acc += fits[i]
        out[k] = i


@jit
def pmx_pair(a, b, c1, c2, out_a, out_b):
    """Partially matched crossover with mapping segment [c1, c2)."""
    n = a.shape[0]
    # position of each value inside the donor segments; -1 when outside
    seg_pos_b = np.full(n, -1, dtype=np.int64)
    seg_pos_a = np.full(n, -1, dtype=np.int64)
    for k in range(c1, c2):
        out_a[k] = b[k]
        out_b[k] = a[k]
        seg_pos_b[b[k]] = k
        seg_pos_a[a[k]] = k
    for p in range(n):
        if c1 <= p < c2:
            continue
        v = a[p]
        while seg_pos_b[v] >= 0:
            v = a[seg_pos_b[v]]
        out_a[p] = v
        w = b[p]
        while seg_pos_a[w] >= 0:
            w = b[seg_pos_a[w]]
        out_b[p] = w


@jit
def cx_pair(a, b, out_a, out_b):
    """Cycle crossover; the first cycle of ``out_a`` comes from parent ``a``."""
    n = a.shape[0]
    pos_a = np.empty(n, dtype=np.int64)
    for k in range(n):
        pos_a[a[k]] = k
    cycle = np.full(n, -1, dtype=np.int64)
    c = 0
    for start in range(n):
        if cycle[start] >= 0:
            continue
        i = start
        while cycle[i] < 0:
            cycle[i] = c
            i = pos_a[b[i]]
        c += 1
    for k in range(n):
        if cycle[k] % 2 == 0:
            out_a[k] = a[k]
            out_b[k] = b[k]
        else:
            out_a[k] = b[k]
            out_b[k] = a[k]


@jit
def invert_segment(tour, i, j):
    """Reverse tour[i..j] inclusive, in place."""
    while i < j:
        tour[i], tour[j] = tour[j], tour[i]
        i += 1
        j -= 1


@jit
def _produced_new(ca, cb, a, b):
    if not tours_equal(ca, a) and not tours_equal(ca, b):
        return True
    return not tours_equal(cb, a) and not tours_equal(cb, b)


@jit
def ga_loop(profit, pop, pc, pm, use_sus, use_cx, max_gens, optimum, rng, best_hist):
    """One generational GA run; mutates ``pop`` and fills ``best_hist``.

    Per generation: evaluate, record the generation best, select lam parents,
    pair consecutive pool slots, cross each pair with probability pc (PMX cuts
    are two distinct interior points), copy otherwise, then invert a random
    segment of each child with probability pm; finally replace the population
    and stop once the optimum was seen or the generation cap is reached.

    Returns (generations, reached, online_sum, attempted, created_new).
    """
    lam, n = pop.shape
    fits = np.empty(lam, dtype=np.int64)
    parent = np.empty(lam, dtype=np.int64)
    nxt = np.empty_like(pop)
    online_sum = np.int64(0)
    attempted = 0
    created_new = 0
    reached = False
    gens = 0
    for g in range(max_gens):
        fmax = np.int64(-1)
        for i in range(lam):
            f = tour_profit(profit, pop[i])
            fits[i] = f
            online_sum += f
            if f > fmax:
                fmax = f
        best_hist[g] = fmax
        gens = g + 1
        hit = fmax >= optimum

        if use_sus:
            fill_sus(fits, rng, parent)
        else:
            fill_rsis(fits, rng, parent)
        for k in range(0, lam, 2):
            a = pop[parent[k]]
            b = pop[parent[k + 1]]
            if rng.random() < pc:
                attempted += 1
                if use_cx:
                    cx_pair(a, b, nxt[k], nxt[k + 1])
                else:
                    # two distinct interior cut points from {1..n-1}
                    c1 = rng.integers(1, n)
                    c2 = rng.integers(1, n - 1)
                    if c2 >= c1:
                        c2 += 1
                    else:
                        c1, c2 = c2, c1
                    pmx_pair(a, b, c1, c2, nxt[k], nxt[k + 1])
                if _produced_new(nxt[k], nxt[k + 1], a, b):
                    created_new += 1
            else:
                nxt[k, :] = a
                nxt[k + 1, :] = b
        for k in range(lam):
            if rng.random() < pm:
                i = rng.integers(0, n)
                j = rng.integers(0, n)
                if i > j:
                    i, j = j, i
                invert_segment(nxt[k], i, j)
        tmp = pop
        pop = nxt
        nxt = tmp
        if hit:
            reached = True
            break
    return gens, reached, online_sum, attempted, created_new
