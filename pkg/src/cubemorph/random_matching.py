"""Round-based matching of poor vertices to rich ones, and the bijections
it yields onto random balanced functions.

Fix a target set A inside the n-cube and view the (n-1)-cube as the points
to be extended by one coordinate.  A vertex x is rich if both extensions
x|0 and x|1 lie in A, poor if neither does, mixed otherwise.  Round i
simultaneously matches every still-unmatched poor x to its direction-i
neighbor when that neighbor is rich and unmatched; direction-i edges form a
perfect matching of the cube, so rounds never conflict, and matching stops
after floor((n-1)/2) rounds.

The resulting injective extension map sends a mixed vertex to its extension
inside A, an unconsumed rich vertex to x|1, a consumed rich vertex to x|0
(both of its extensions are in A, so this dodges its poor partner's image
without leaving A), a matched poor vertex to its partner's upper extension,
and an unmatched poor vertex to x|0, the only case that exits A.

For a balanced f the dictator-to-f bijection runs this construction once
per class of f, with coordinates rotated so the extension coordinate is
coordinate 1; whatever the matching could not place (an O(1/n) fraction)
is repaired by pairing leftover sources with uncovered targets.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

import numpy as np

from .cube_core import BooleanFunction, Point, popcount_array
from .stretch_metrics import Mapping

MATCHING_MAX_N = 26


class Status(IntEnum):
    MIXED = 0
    RICH = 1
    POOR = 2


@dataclass(frozen=True)
class VertexStatus:
    kind: Status
    matched_with: int | None


@dataclass
class MatchState:
    """Outcome of the matching rounds over the (n-1)-cube."""

    n: int
    kinds: np.ndarray
    matched_dir: np.ndarray
    in_low: np.ndarray
    in_high: np.ndarray
    round_stats: list[tuple[int, int]]

    @property
    def size(self) -> int:
        return 1 << (self.n - 1)

    @property
    def rounds(self) -> int:
        return len(self.round_stats) - 1

    def status_of(self, x: int) -> VertexStatus:
        d = int(self.matched_dir[x])
        return VertexStatus(Status(int(self.kinds[x])), d if d else None)

    def poor_unmatched_count(self) -> int:
        return self.round_stats[-1][0]


def classify(a: BooleanFunction, x: Point) -> Status:
    """Rich, poor or mixed according to which extensions of x lie in a."""
    if a.n != x.n + 1:
        raise ValueError(f"set dimension {a.n} must be point dimension + 1 = {x.n + 1}")
    low = a.value(x.bits)
    high = a.value(x.bits | (1 << x.n))
    if low and high:
        return Status.RICH
    if not low and not high:
        return Status.POOR
    return Status.MIXED


def _xor_partner(arr: np.ndarray, b: int) -> np.ndarray:
    """arr reindexed by x -> x ^ (1 << b)."""
    return arr.reshape(-1, 2, 1 << b)[:, ::-1, :].reshape(arr.shape)


def run_matching(a: BooleanFunction) -> MatchState:
    """Run all floor((n-1)/2) matching rounds against the set a.

    Eligibility in each round is decided from the frozen end-of-previous-
    round state, so all matches in a round happen simultaneously.
    """
    n = a.n
    if n < 2:
        raise ValueError("matching needs n >= 2")
    if n > MATCHING_MAX_N:
        raise ValueError(f"matching capped at n={MATCHING_MAX_N}")
    vals = a.values()
    half = 1 << (n - 1)
    in_low = vals[:half].astype(bool)
    in_high = vals[half:].astype(bool)
    rich = in_low & in_high
    poor = ~in_low & ~in_high
    kinds = np.zeros(half, dtype=np.uint8)
    kinds[rich] = Status.RICH
    kinds[poor] = Status.POOR
    matched_dir = np.zeros(half, dtype=np.int8)
    poor_un = poor.copy()
    rich_un = rich.copy()
    stats = [(int(poor_un.sum()), int(rich_un.sum()))]
    for i in range(1, (n - 1) // 2 + 1):
        b = i - 1
        match_poor = poor_un & _xor_partner(rich_un, b)
        match_rich = _xor_partner(match_poor, b)
        matched_dir[match_poor] = i
        matched_dir[match_rich] = i
        poor_un &= ~match_poor
        rich_un &= ~match_rich
        stats.append((int(poor_un.sum()), int(rich_un.sum())))
    return MatchState(n=n, kinds=kinds, matched_dir=matched_dir,
                      in_low=vals[:half], in_high=vals[half:], round_stats=stats)


def build_injection(state: MatchState) -> np.ndarray:
    """Injective extension table: entry x is an n-bit point over x's cube.

    Cases: mixed -> the extension inside the set; unconsumed rich -> x|1;
    consumed rich -> x|0; matched poor -> partner|1; unmatched poor -> x|0.
    """
    half = state.size
    top = half
    x = np.arange(half, dtype=np.int64)
    kinds = state.kinds
    matched = state.matched_dir != 0
    img = x.copy()
    mixed_high = (kinds == Status.MIXED) & state.in_high.astype(bool)
    img[mixed_high] += top
    rich_free = (kinds == Status.RICH) & ~matched
    img[rich_free] += top
    poor_matched = (kinds == Status.POOR) & matched
    dirs = state.matched_dir[poor_matched].astype(np.int64)
    img[poor_matched] = (x[poor_matched] ^ (1 << (dirs - 1))) + top
    return img


def injection_is_valid(state: MatchState, img: np.ndarray) -> bool:
    """Injectivity plus the one-coordinate condition on the first n-1 bits."""
    half = state.size
    if np.unique(img).size != half:
        return False
    x = np.arange(half, dtype=np.int64)
    prefix_dist = popcount_array((x ^ (img & (half - 1))).astype(np.uint64))
    return bool((prefix_dist <= 1).all())


def unmatched_poor_fraction(state: MatchState) -> Fraction:
    return Fraction(state.poor_unmatched_count(), state.size)


@dataclass(frozen=True)
class CurveResult:
    """Per-round unmatched fractions across trials; round 0 is pre-matching."""

    n: int
    trials: int
    p_hat: np.ndarray
    q_hat: np.ndarray

    @property
    def rounds(self) -> int:
        return self.p_hat.shape[1] - 1

    def p_mean(self) -> np.ndarray:
        return self.p_hat.mean(axis=0)

    def q_mean(self) -> np.ndarray:
        return self.q_hat.mean(axis=0)

    def averaged(self) -> list[tuple[float, float]]:
        return list(zip(self.p_mean().tolist(), self.q_mean().tolist()))


def _bernoulli_function(n: int, rng: np.random.Generator) -> BooleanFunction:
    nbytes = ((1 << n) + 7) // 8
    packed = rng.integers(0, 256, size=nbytes, dtype=np.uint8)
    if (1 << n) % 8:
        packed[-1] &= (1 << ((1 << n) % 8)) - 1
    return BooleanFunction(n, table=packed)


def recursion_curve(n: int, trials: int, seed: int) -> CurveResult:
    """Empirical per-round poor/rich unmatched fractions over fresh random sets.

    Each trial draws its own density-1/2 set from a named substream of the
    seed, runs the matching, and records fractions after every round.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if n > MATCHING_MAX_N:
        raise ValueError(f"curve capped at n={MATCHING_MAX_N}")
    children = np.random.SeedSequence(seed).spawn(trials)
    rounds = (n - 1) // 2
    half = 1 << (n - 1)
    p = np.empty((trials, rounds + 1))
    q = np.empty((trials, rounds + 1))
    for t in range(trials):
        rng = np.random.Generator(np.random.PCG64(children[t]))
        state = run_matching(_bernoulli_function(n, rng))
        for r, (pu, ru) in enumerate(state.round_stats):
            p[t, r] = pu / half
            q[t, r] = ru / half
    return CurveResult(n=n, trials=trials, p_hat=p, q_hat=q)


def _rotated_class_table(vals: np.ndarray, n: int, cls: int) -> BooleanFunction:
    """Indicator of f^{-1}(cls) with coordinates rotated one step left.

    In rotated labels coordinate 1 of the original cube becomes the top
    coordinate, which is the one the matching construction extends.
    """
    idx = np.arange(1 << n, dtype=np.int64)
    mask = (1 << n) - 1
    unrot = ((idx << 1) & mask) | (idx >> (n - 1))
    rotated = (vals[unrot] == cls).astype(np.uint8)
    return BooleanFunction.from_values(n, rotated)


def _half_cube_images(f_vals: np.ndarray, n: int, cls: int,
                      rng: np.random.Generator | None) -> tuple[np.ndarray, int]:
    """Images for sources u = coordinates 2..n of the cls half, plus the
    count of repaired sources (= the unmatched poor of that half)."""
    a_rot = _rotated_class_table(f_vals, n, cls)
    state = run_matching(a_rot)
    img_rot = build_injection(state)
    mask = (1 << n) - 1
    img = ((img_rot << 1) & mask) | (img_rot >> (n - 1))
    good = f_vals[img] == cls
    bad_sources = np.flatnonzero(~good)
    used = np.zeros(1 << n, dtype=bool)
    used[img[good]] = True
    free = np.flatnonzero((f_vals == cls) & ~used)
    if rng is not None:
        free = rng.permutation(free)
    img[bad_sources] = free
    return img, bad_sources.size


@dataclass(frozen=True)
class DictToRandomResult:
    """The bijection plus per-class construction diagnostics."""

    mapping: Mapping
    repaired: tuple[int, int]

    @property
    def unmatched_poor_fraction(self) -> Fraction:
        half = 1 << (self.mapping.n - 1)
        return Fraction(self.repaired[0] + self.repaired[1], 2 * half)


def build_dict_to_random_details(f: BooleanFunction, seed=None) -> DictToRandomResult:
    """build_dict_to_random together with the repair counts per class."""
    if not f.is_balanced():
        raise ValueError("target function must be balanced")
    n = f.n
    if n > MATCHING_MAX_N:
        raise ValueError(f"construction capped at n={MATCHING_MAX_N}")
    vals = f.values()
    rng = np.random.Generator(np.random.PCG64(seed)) if seed is not None else None
    table = np.empty(1 << n, dtype=np.int64)
    half = 1 << (n - 1)
    u = np.arange(half, dtype=np.int64)
    repaired = []
    for cls in (1, 0):
        img, nbad = _half_cube_images(vals, n, cls, rng)
        table[(u << 1) | cls] = img
        repaired.append(nbad)
    mapping = Mapping.from_table(n, table, name="dict2random")
    return DictToRandomResult(mapping=mapping, repaired=(repaired[0], repaired[1]))


def build_dict_to_random(f: BooleanFunction, seed=None) -> Mapping:
    """Bijection phi with dictator(x) = f(phi(x)) everywhere.

    The construction is deterministic; a seed (int or SeedSequence) only
    randomizes the repair pairing of the leftover O(1/n) fraction
    (default: ascending order).
    """
    return build_dict_to_random_details(f, seed=seed).mapping


def build_random_to_random(f: BooleanFunction, g: BooleanFunction,
                           seed=None) -> Mapping:
    """Bijection from f to g: the g-construction composed with the inverse
    of the f-construction."""
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")
    if seed is not None:
        sf, sg = np.random.SeedSequence(seed).spawn(2)
    else:
        sf = sg = None
    phi_f = build_dict_to_random(f, seed=sf)
    phi_g = build_dict_to_random(g, seed=sg)
    tf = phi_f.table()
    inv_f = np.empty_like(tf)
    inv_f[tf] = np.arange(tf.size, dtype=np.int64)
    table = phi_g.table()[inv_f]
    return Mapping.from_table(f.n, table, name="rand2rand")
