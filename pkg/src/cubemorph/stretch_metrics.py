"""Stretch statistics for cube bijections, exact and sampled.

The average stretch of a mapping is the expected image distance over a
uniformly random edge.  Edges are undirected and counted once; because
every direction contributes the same number of edges, this equals the
expectation over a random point and a random direction.  Exhaustive
reports use exact rationals; sampled reports keep the sample mean exact
and carry the sample size and a floating standard error.

Also here: brute-force oracles that enumerate every class-preserving
bijection between two functions at tiny n (the ground truth the heuristics
and the impossibility checks compare against), a seeded transposition-
descent heuristic, and the two counting facts about middle binomial levels
and typical weights.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from .cube_core import BooleanFunction, Point, popcount, popcount_array

EXHAUSTIVE_MAX_N = 24
ORACLE_MAX_N = 3
LOCAL_SEARCH_MAX_N = 20
TYPICAL_MAX_N = 10 ** 6


class Mapping:
    """A map of the n-cube given by a callable or a full table.

    Tables are int64 arrays indexed by packed point.  The inverse is
    optional; table-backed mappings can derive it by inverting the
    permutation.
    """

    def __init__(self, n: int, *, forward: Callable[[int], int] | None = None,
                 inverse: Callable[[int], int] | None = None,
                 table: np.ndarray | None = None,
                 inverse_table: np.ndarray | None = None,
                 name: str = ""):
        if forward is None and table is None:
            raise ValueError("mapping needs a callable or a table")
        self.n = n
        self.name = name
        self._forward = forward
        self._inverse = inverse
        self._table = table
        self._inverse_table = inverse_table

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], int],
                      inverse: Callable[[int], int] | None = None,
                      name: str = "") -> "Mapping":
        return cls(n, forward=fn, inverse=inverse, name=name)

    @classmethod
    def from_table(cls, n: int, table, name: str = "",
                   expect_bijection: bool = True) -> "Mapping":
        arr = np.asarray(table, dtype=np.int64)
        if arr.size != 1 << n:
            raise ValueError(f"table must have {1 << n} entries, got {arr.size}")
        if expect_bijection:
            counts = np.bincount(arr, minlength=1 << n)
            if counts.max(initial=0) != 1 or counts.min() != 1:
                raise ValueError("table is not a permutation of the cube")
        return cls(n, table=arr, name=name)

    @classmethod
    def identity(cls, n: int) -> "Mapping":
        return cls(n, forward=lambda x: x, inverse=lambda x: x, name="identity")

    def apply_bits(self, x: int) -> int:
        if self._table is not None:
            return int(self._table[x])
        return self._forward(x)

    def __call__(self, x: Point) -> Point:
        if x.n != self.n:
            raise ValueError(f"dimension mismatch: mapping n={self.n}, point n={x.n}")
        return Point(self.apply_bits(x.bits), self.n)

    def table(self) -> np.ndarray:
        if self._table is None:
            if self.n > EXHAUSTIVE_MAX_N:
                raise ValueError(f"cannot materialize a table beyond n={EXHAUSTIVE_MAX_N}")
            fn = self._forward
            self._table = np.fromiter(
                (fn(x) for x in range(1 << self.n)), dtype=np.int64, count=1 << self.n)
        return self._table

    @property
    def has_inverse(self) -> bool:
        return self._inverse is not None or self._inverse_table is not None \
            or self._table is not None

    def inverse_bits(self, y: int) -> int:
        if self._inverse is not None:
            return self._inverse(y)
        return int(self._inverse_table_arr()[y])

    def _inverse_table_arr(self) -> np.ndarray:
        if self._inverse_table is None:
            t = self.table()
            inv = np.empty_like(t)
            inv[t] = np.arange(t.size, dtype=np.int64)
            self._inverse_table = inv
        return self._inverse_table

    def inverse_mapping(self) -> "Mapping":
        if self._inverse is not None:
            return Mapping(self.n, forward=self._inverse, inverse=self._forward,
                           name=f"{self.name}^-1" if self.name else "")
        return Mapping(self.n, table=self._inverse_table_arr(),
                       inverse_table=self._table,
                       name=f"{self.name}^-1" if self.name else "")

    def is_permutation(self) -> bool:
        t = self.table()
        counts = np.bincount(t, minlength=1 << self.n)
        return bool(counts.max(initial=0) == 1 and counts.min() == 1)

    def __repr__(self) -> str:
        return f"Mapping(n={self.n}, name={self.name!r})"


def identity_mapping(n: int) -> Mapping:
    return Mapping.identity(n)


def is_mapping_between(phi: Mapping, f: BooleanFunction, g: BooleanFunction) -> bool:
    """True iff phi is a bijection and f(z) = g(phi(z)) at every point."""
    if not (phi.n == f.n == g.n):
        raise ValueError(
            f"dimension mismatch: mapping n={phi.n}, f n={f.n}, g n={g.n}")
    if phi.n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive check capped at n={EXHAUSTIVE_MAX_N}")
    t = phi.table()
    if not phi.is_permutation():
        return False
    return bool(np.array_equal(f.values(), g.values()[t]))


@dataclass(frozen=True)
class StretchReport:
    """Edge-stretch statistics of one mapping."""

    n: int
    mapping: str
    mode: str
    avg: Fraction
    per_direction: tuple[Fraction, ...]
    max_stretch: int
    histogram: dict[int, int] = field(compare=False)
    edges_total: int
    samples: int | None = None
    stderr: float | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        total = sum(self.histogram.values())
        if total != self.edges_total:
            raise ValueError("histogram does not cover edges_total")
        weighted = sum(d * c for d, c in self.histogram.items())
        if Fraction(weighted, self.edges_total) != self.avg:
            raise ValueError("avg inconsistent with histogram")

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "mapping": self.mapping,
            "mode": self.mode,
            "avg": {"num": self.avg.numerator, "den": self.avg.denominator},
            "max": self.max_stretch,
            "per_direction": [
                {"num": v.numerator, "den": v.denominator} for v in self.per_direction
            ],
            "histogram": {str(d): self.histogram[d] for d in sorted(self.histogram)},
            "edges_total": self.edges_total,
        }
        if self.mode == "sampled":
            out["samples"] = self.samples
            out["stderr"] = self.stderr
            out["seed"] = self.seed
        return out

    def histogram_csv(self) -> str:
        lines = ["distance,count"]
        lines += [f"{d},{self.histogram[d]}" for d in sorted(self.histogram)]
        return "\n".join(lines) + "\n"


def _direction_stats_exhaustive(table: np.ndarray, b: int) -> tuple[int, np.ndarray]:
    """(sum of distances, histogram) over the 2^(n-1) edges in direction b+1."""
    paired = table.reshape(-1, 2, 1 << b)
    diffs = popcount_array((paired[:, 0, :] ^ paired[:, 1, :]).ravel().astype(np.uint64))
    hist = np.bincount(diffs.astype(np.int64))
    return int(diffs.sum()), hist


def stretch_report(phi: Mapping, mode: str = "exhaustive",
                   samples: int | None = None, seed: int | None = None,
                   workers: int = 1) -> StretchReport:
    """Stretch statistics over all edges, or over sampled edges per direction.

    Sampled mode needs a per-direction sample count and a seed; the report
    then carries the observed maximum and the standard error of the mean.
    """
    n = phi.n
    if mode == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive mode capped at n={EXHAUSTIVE_MAX_N}")
        table = phi.table()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(
                    lambda b: _direction_stats_exhaustive(table, b), range(n)))
        else:
            results = [_direction_stats_exhaustive(table, b) for b in range(n)]
        half = 1 << (n - 1)
        per_direction = tuple(Fraction(s, half) for s, _ in results)
        hist_len = max(len(h) for _, h in results)
        hist = np.zeros(hist_len, dtype=np.int64)
        for _, h in results:
            hist[: len(h)] += h
        histogram = {int(d): int(c) for d, c in enumerate(hist) if c}
        total = sum(s for s, _ in results)
        edges_total = n * half
        return StretchReport(
            n=n, mapping=phi.name, mode="exhaustive",
            avg=Fraction(total, edges_total),
            per_direction=per_direction,
            max_stretch=max(histogram) if histogram else 0,
            histogram=histogram,
            edges_total=edges_total,
        )

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if samples is None or seed is None:
        raise ValueError("sampled mode needs samples and seed")
    rng = np.random.Generator(np.random.PCG64(seed))
    histogram: dict[int, int] = {}
    per_direction = []
    total = 0
    sq_total = 0
    for b in range(n):
        bit = 1 << b
        if n <= 62:
            xs = rng.integers(0, 1 << n, size=samples, dtype=np.int64).tolist()
        else:
            lo = rng.integers(0, 1 << 32, size=samples, dtype=np.int64)
            hi = rng.integers(0, 1 << (n - 32), size=samples, dtype=np.int64)
            xs = ((hi.astype(object) << 32) | lo).tolist()
        dir_sum = 0
        for x in xs:
            d = popcount(phi.apply_bits(x) ^ phi.apply_bits(x ^ bit))
            dir_sum += d
            sq_total += d * d
            histogram[d] = histogram.get(d, 0) + 1
        per_direction.append(Fraction(dir_sum, samples))
        total += dir_sum
    edges_total = n * samples
    mean = total / edges_total
    var = sq_total / edges_total - mean * mean
    stderr = float((max(var, 0.0) / edges_total) ** 0.5)
    return StretchReport(
        n=n, mapping=phi.name, mode="sampled",
        avg=Fraction(total, edges_total),
        per_direction=tuple(per_direction),
        max_stretch=max(histogram) if histogram else 0,
        histogram=histogram,
        edges_total=edges_total,
        samples=samples, stderr=stderr, seed=seed,
    )


def directional_avg_stretch(phi: Mapping, i: int) -> Fraction:
    """Average image distance over all edges in direction i (1-based)."""
    n = phi.n
    if not 1 <= i <= n:
        raise ValueError(f"direction {i} out of range 1..{n}")
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive mode capped at n={EXHAUSTIVE_MAX_N}")
    s, _ = _direction_stats_exhaustive(phi.table(), i - 1)
    return Fraction(s, 1 << (n - 1))


# ---------------------------------------------------------------------------
# brute-force oracles over all class-preserving bijections
# ---------------------------------------------------------------------------

def _class_lists(f: BooleanFunction, g: BooleanFunction) -> tuple[list[int], list[int], list[int]]:
    n = f.n
    if g.n != n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    if n > ORACLE_MAX_N:
        raise ValueError(f"bijection enumeration capped at n={ORACLE_MAX_N}")
    f_vals = [f.value(x) for x in range(1 << n)]
    targets0 = [x for x in range(1 << n) if g.value(x) == 0]
    targets1 = [x for x in range(1 << n) if g.value(x) == 1]
    if len(targets1) != sum(f_vals):
        raise ValueError("class sizes differ; no mapping from f to g exists")
    return f_vals, targets0, targets1


def _search_bijections(f: BooleanFunction, g: BooleanFunction, metric: str,
                       direction: int | None = None) -> tuple[int, list[int]]:
    """DFS over all bijections from f to g, minimizing the chosen metric.

    metric "avg" minimizes the sum of edge distances, "max" the largest
    edge distance, "direction" the sum over edges along one direction.
    Branches whose partial value plus one per undecided edge already
    reaches the incumbent are pruned, which cannot change the optimum or
    the first witness found in ascending assignment order.
    """
    n = f.n
    f_vals, targets0, targets1 = _class_lists(f, g)
    size = 1 << n
    if metric == "direction":
        lower_nbrs = [[x ^ (1 << (direction - 1))] if x & (1 << (direction - 1)) else []
                      for x in range(size)]
        total_edges = size // 2
    else:
        lower_nbrs = [[x ^ (1 << b) for b in range(n) if x & (1 << b)]
                      for x in range(size)]
        total_edges = n * size // 2
    used0 = [False] * len(targets0)
    used1 = [False] * len(targets1)
    assign = [0] * size
    best_value: list[int | None] = [None]
    best_table: list[list[int] | None] = [None]

    def rec(x: int, partial: int, edges_done: int) -> None:
        if x == size:
            if best_value[0] is None or partial < best_value[0]:
                best_value[0] = partial
                best_table[0] = assign[:]
            return
        targets, used = (targets1, used1) if f_vals[x] else (targets0, used0)
        nbrs = lower_nbrs[x]
        remaining = total_edges - edges_done - len(nbrs)
        for t_idx, t in enumerate(targets):
            if used[t_idx]:
                continue
            if metric == "max":
                worst = partial
                for y in nbrs:
                    d = popcount(assign[y] ^ t)
                    if d > worst:
                        worst = d
                new_partial = worst
                bound = max(new_partial, 1)
            else:
                add = 0
                for y in nbrs:
                    add += popcount(assign[y] ^ t)
                new_partial = partial + add
                bound = new_partial + remaining
            if best_value[0] is not None and bound >= best_value[0]:
                continue
            used[t_idx] = True
            assign[x] = t
            rec(x + 1, new_partial, edges_done + len(nbrs))
            used[t_idx] = False

    rec(0, 0, 0)
    return best_value[0], best_table[0]


def exhaustive_min_avg_stretch(f: BooleanFunction, g: BooleanFunction
                               ) -> tuple[Fraction, Mapping]:
    """Global minimum of avgStretch over all mappings from f to g, with witness."""
    total, table = _search_bijections(f, g, "avg")
    edges = f.n * (1 << (f.n - 1))
    return Fraction(total, edges), Mapping.from_table(f.n, table, name="oracle-min-avg")


def exhaustive_min_max_stretch(f: BooleanFunction, g: BooleanFunction
                               ) -> tuple[int, Mapping]:
    """Global minimum of the worst edge stretch over all mappings from f to g."""
    value, table = _search_bijections(f, g, "max")
    return value, Mapping.from_table(f.n, table, name="oracle-min-max")


def exhaustive_min_directional(f: BooleanFunction, g: BooleanFunction, i: int
                               ) -> tuple[Fraction, Mapping]:
    """Global minimum of the direction-i average stretch over all mappings."""
    total, table = _search_bijections(f, g, "direction", direction=i)
    return Fraction(total, 1 << (f.n - 1)), Mapping.from_table(
        f.n, table, name=f"oracle-min-dir{i}")


# ---------------------------------------------------------------------------
# seeded transposition descent
# ---------------------------------------------------------------------------

def _stretch_sum(table: np.ndarray, n: int) -> int:
    t = np.asarray(table, dtype=np.int64)
    total = 0
    for b in range(n):
        paired = t.reshape(-1, 2, 1 << b)
        total += int(popcount_array(
            (paired[:, 0, :] ^ paired[:, 1, :]).ravel().astype(np.uint64)).sum())
    return total


def _swap_delta(table: list[int], n: int, u: int, v: int) -> int:
    """Change in the total edge sum if the images of u and v swap."""
    delta = 0
    tu, tv = table[u], table[v]
    for b in range(n):
        bit = 1 << b
        w = u ^ bit
        if w == v:
            continue
        delta += popcount(tv ^ table[w]) - popcount(tu ^ table[w])
        w = v ^ bit
        delta += popcount(tu ^ table[w]) - popcount(tv ^ table[w])
    return delta


def local_search_min_stretch(f: BooleanFunction, g: BooleanFunction, seed: int,
                             restarts: int = 8) -> tuple[Fraction, Mapping]:
    """Best avgStretch found by seeded transposition descent.

    The first restart starts from the ascending class-preserving pairing
    (for f = g that is the identity, which is already optimal); later
    restarts shuffle the pairing.  Small instances descend by full
    first-improvement sweeps to a genuine local optimum; larger ones use
    random proposals with a stall cutoff.  Deterministic per seed.
    """
    n = f.n
    if n > LOCAL_SEARCH_MAX_N:
        raise ValueError(f"local search capped at n={LOCAL_SEARCH_MAX_N}")
    f_vals = f.values()
    g_vals = g.values()
    sources = [np.flatnonzero(f_vals == c) for c in (0, 1)]
    targets = [np.flatnonzero(g_vals == c) for c in (0, 1)]
    if len(sources[0]) != len(targets[0]):
        raise ValueError("class sizes differ; no mapping from f to g exists")
    rng = np.random.Generator(np.random.PCG64(seed))
    size = 1 << n
    edges = n * size // 2
    class_of = [int(f_vals[x]) for x in range(size)]
    small = max(len(sources[0]), len(sources[1])) <= 64

    best_sum: int | None = None
    best_table: list[int] | None = None
    for r in range(restarts):
        table = [0] * size
        for c in (0, 1):
            tgt = targets[c] if r == 0 else rng.permutation(targets[c])
            for s, t in zip(sources[c], tgt):
                table[int(s)] = int(t)
        current = _stretch_sum(np.array(table), n)
        if small:
            improved = True
            while improved:
                improved = False
                for c in (0, 1):
                    pts = sources[c]
                    for a in range(len(pts)):
                        for b in range(a + 1, len(pts)):
                            u, v = int(pts[a]), int(pts[b])
                            d = _swap_delta(table, n, u, v)
                            if d < 0:
                                table[u], table[v] = table[v], table[u]
                                current += d
                                improved = True
        else:
            stall = 0
            max_stall = 200 * n
            while stall < max_stall:
                c = int(rng.integers(0, 2))
                pts = sources[c]
                a, b = rng.integers(0, len(pts), size=2)
                if a == b:
                    stall += 1
                    continue
                u, v = int(pts[a]), int(pts[b])
                d = _swap_delta(table, n, u, v)
                if d < 0:
                    table[u], table[v] = table[v], table[u]
                    current += d
                    stall = 0
                else:
                    stall += 1
        if best_sum is None or current < best_sum:
            best_sum = current
            best_table = table[:]
    return Fraction(best_sum, edges), Mapping.from_table(n, best_table, name="local-search")


# ---------------------------------------------------------------------------
# counting facts
# ---------------------------------------------------------------------------

def typical_fraction(n: int, c) -> Fraction:
    """Exact fraction of points whose weight differs from n/2 by more than c*sqrt(n).

    Floats are interpreted decimally (0.01 means 1/100).  The comparison
    |w - n/2| > c*sqrt(n) is squared into integers, so no rounding occurs.
    """
    if not 1 <= n <= TYPICAL_MAX_N:
        raise ValueError(f"n must be in 1..{TYPICAL_MAX_N}")
    if isinstance(c, float):
        c = Fraction(str(c))
    else:
        c = Fraction(c)
    thr_num = 4 * c.numerator ** 2 * n
    thr_den = c.denominator ** 2

    def atypical(w: int) -> bool:
        return (2 * w - n) ** 2 * thr_den > thr_num

    mid = n // 2
    count = 0
    binom = comb(n, mid)
    w = mid
    b = binom
    while w >= 0 and not atypical(w):
        count += b
        b = b * w // (n - w + 1)
        w -= 1
    w = mid + 1
    b = binom * (n - mid) // (mid + 1)
    while w <= n and not atypical(w):
        count += b
        b = b * (n - w) // (w + 1)
        w += 1
    return 1 - Fraction(count, 1 << n)


def middle_binomial_check(n: int) -> bool:
    """True iff C(n, floor(n/2)) < 2^n / sqrt(n), compared exactly."""
    if n < 1:
        raise ValueError("n must be positive")
    c = comb(n, n // 2)
    return c * c * n < 1 << (2 * n)


def middle_binomial_check_range(limit: int) -> bool:
    """middle_binomial_check for every n in 1..limit, incrementally."""
    c = 1
    for n in range(1, limit + 1):
        if not c * c * n < 1 << (2 * n):
            return False
        # C(n+1, (n+1)//2) from C(n, n//2); same ratio for both parities
        c = c * (n + 1) // (n // 2 + 1)
    return True
