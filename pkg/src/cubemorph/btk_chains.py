"""Symmetric chain decomposition of the cube by 1-0 pair marking.

This is the classical De Bruijn-Tengbergen-Kruyswijk partition.  Repeatedly
pick an adjacent pair "10" (adjacent in the string with already-marked
symbols deleted) and mark both symbols; stop when the unmarked residue has
the shape 0...01...1.  The marked positions keep their bits, the unmarked
ones become gaps, and the resulting signature names the chain: the chain is
exactly the set of points obtained by filling the gaps with every pattern
0^a 1^b.

The marking is order-independent: viewing 1 as an opening and 0 as a closing
parenthesis, the marked positions are the maximal matched subsequence, which
a single left-to-right stack pass computes.  The seeded variant of mark()
picks eligible pairs in random order and exists to let tests demonstrate
that the result does not depend on the order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .cube_core import Point, format_bits, popcount

GAP = "_"

PARTITION_MAX_N = 24


def _mark_mask(bits: int, n: int) -> int:
    """Mask of marked positions (0-based), single stack pass."""
    mask = 0
    stack: list[int] = []
    for i in range(n):
        if (bits >> i) & 1:
            stack.append(i)
        elif stack:
            mask |= (1 << stack.pop()) | (1 << i)
    return mask


def _mark_mask_seeded(bits: int, n: int, seed: int) -> int:
    """Mark by repeatedly choosing a random eligible adjacent 1,0 pair."""
    rng = random.Random(seed)
    alive = list(range(n))
    mask = 0
    while True:
        pairs = [
            t for t in range(len(alive) - 1)
            if (bits >> alive[t]) & 1 and not (bits >> alive[t + 1]) & 1
        ]
        if not pairs:
            return mask
        t = rng.choice(pairs)
        mask |= (1 << alive[t]) | (1 << alive[t + 1])
        del alive[t:t + 2]


@dataclass(frozen=True)
class MarkedString:
    """A point together with the mask of its marked coordinates."""

    point: Point
    marked_mask: int

    def marked_positions(self) -> tuple[int, ...]:
        """1-based coordinates that were marked."""
        return tuple(i + 1 for i in range(self.point.n) if (self.marked_mask >> i) & 1)

    def unmarked_form(self) -> str:
        """The unmarked subsequence, which is always 0^a 1^b."""
        return "".join(
            "1" if (self.point.bits >> i) & 1 else "0"
            for i in range(self.point.n) if not (self.marked_mask >> i) & 1
        )

    def signature(self) -> "Signature":
        return Signature(self.point.bits & self.marked_mask, self.marked_mask, self.point.n)

    def __str__(self) -> str:
        out = []
        for i in range(self.point.n):
            c = "1" if (self.point.bits >> i) & 1 else "0"
            out.append(c + "̂" if (self.marked_mask >> i) & 1 else c)
        return "".join(out)


@dataclass(frozen=True)
class Signature:
    """Chain identifier: marked bits plus a mask saying which positions are gaps.

    ``bits`` holds the values of the marked positions (zero elsewhere) and
    ``mask`` the marked positions themselves; positions outside ``mask`` are
    gaps.  The chain spans weights k .. n-k where k = popcount(mask)/2.
    """

    bits: int
    mask: int
    n: int

    def __post_init__(self) -> None:
        if self.bits & ~self.mask:
            raise ValueError("signature bits outside the marked mask")
        if self.mask >> self.n:
            raise ValueError("marked mask wider than the dimension")
        if popcount(self.mask) % 2:
            raise ValueError("marked positions must pair up")

    @property
    def k(self) -> int:
        """Minimum weight on the chain."""
        return popcount(self.mask) // 2

    @property
    def top(self) -> int:
        """Maximum weight on the chain."""
        return self.n - self.k

    @property
    def text(self) -> str:
        return "".join(
            ("1" if (self.bits >> i) & 1 else "0") if (self.mask >> i) & 1 else GAP
            for i in range(self.n)
        )

    def gap_positions(self) -> tuple[int, ...]:
        """0-based gap positions, ascending."""
        return tuple(i for i in range(self.n) if not (self.mask >> i) & 1)

    def element_bits(self, j: int) -> int:
        """The unique chain point of weight j, as packed bits."""
        k = self.k
        if not k <= j <= self.n - k:
            raise ValueError(f"level {j} outside chain range {k}..{self.n - k}")
        gaps = self.gap_positions()
        out = self.bits
        for pos in gaps[len(gaps) - (j - k):] if j > k else ():
            out |= 1 << pos
        return out

    def element(self, j: int) -> Point:
        return Point(self.element_bits(j), self.n)

    def element_bits_all(self) -> tuple[int, ...]:
        """All chain points ascending by weight."""
        gaps = self.gap_positions()
        out = [self.bits]
        acc = self.bits
        for pos in reversed(gaps):
            acc |= 1 << pos
            out.append(acc)
        return tuple(out)

    def is_canonical(self) -> bool:
        """True iff this is the signature of an actual point.

        Reading marked symbols as parentheses (1 opens, 0 closes), the
        marked part must fully match AND no open parenthesis may straddle a
        gap; otherwise filling the gaps with 0^a 1^b would create new
        matches and re-marking would disagree.
        """
        balance = 0
        for i in range(self.n):
            if not (self.mask >> i) & 1:
                if balance != 0:
                    return False
            elif (self.bits >> i) & 1:
                balance += 1
            else:
                balance -= 1
                if balance < 0:
                    return False
        return balance == 0

    @classmethod
    def from_text(cls, s: str, validate: bool = True) -> "Signature":
        bits = mask = 0
        for i, c in enumerate(s):
            if c == "1":
                bits |= 1 << i
                mask |= 1 << i
            elif c == "0":
                mask |= 1 << i
            elif c != GAP:
                raise ValueError(f"bad signature character {c!r}")
        sig = cls(bits, mask, len(s))
        if validate and not sig.is_canonical():
            raise ValueError(f"{s!r} is not the signature of any point")
        return sig

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Chain:
    """A symmetric chain, materialized from its signature on demand."""

    signature: Signature

    @property
    def n(self) -> int:
        return self.signature.n

    def elements(self) -> tuple[Point, ...]:
        return tuple(Point(b, self.n) for b in self.signature.element_bits_all())

    def element_at(self, j: int) -> Point:
        return self.signature.element(j)

    def __len__(self) -> int:
        return self.signature.top - self.signature.k + 1

    def __contains__(self, x: Point) -> bool:
        return x.n == self.n and _mark_mask(x.bits, x.n) == self.signature.mask \
            and (x.bits & self.signature.mask) == self.signature.bits


def mark(x: Point, order_seed: int | None = None) -> MarkedString:
    """Run the marking stage; a seed randomizes the pair-picking order."""
    if order_seed is None:
        mask = _mark_mask(x.bits, x.n)
    else:
        mask = _mark_mask_seeded(x.bits, x.n, order_seed)
    return MarkedString(x, mask)


def signature(x: Point) -> Signature:
    mask = _mark_mask(x.bits, x.n)
    return Signature(x.bits & mask, mask, x.n)


def chain_of(x: Point) -> Chain:
    return Chain(signature(x))


def chain_element(sig: Signature, j: int) -> Point:
    return sig.element(j)


def index_in_chain(x: Point) -> tuple[int, int]:
    """(k, j): the chain's minimum level and the point's own level."""
    mask = _mark_mask(x.bits, x.n)
    return popcount(mask) // 2, popcount(x.bits)


def signature_distance(x: Point, y: Point) -> int:
    """Hamming distance of the two signatures over the 3-letter alphabet."""
    if x.n != y.n:
        raise ValueError(f"dimension mismatch: {x.n} vs {y.n}")
    mx = _mark_mask(x.bits, x.n)
    my = _mark_mask(y.bits, y.n)
    return popcount((mx ^ my) | (mx & my & (x.bits ^ y.bits)))


def hausdorff_chain_distance(c1: Chain, c2: Chain) -> int:
    """Symmetrized max-min Hamming distance between the element sets."""
    if c1.n != c2.n:
        raise ValueError(f"dimension mismatch: {c1.n} vs {c2.n}")
    e1 = c1.signature.element_bits_all()
    e2 = c2.signature.element_bits_all()
    d21 = [min(popcount(a ^ b) for a in e1) for b in e2]
    d12 = [min(popcount(a ^ b) for b in e2) for a in e1]
    return max(max(d12), max(d21))


def enumerate_partition(n: int) -> Iterator[Chain]:
    """All chains of the n-cube, streamed in ASCII order of signature text.

    Signatures are generated directly: scanning left to right with 1 as an
    opening and 0 as a closing parenthesis, a gap is allowed only where the
    running balance is zero, closing needs positive balance, and opening
    needs room to close later.  Exactly the canonical signatures survive,
    so each point of the cube lands in exactly one emitted chain.
    """
    if not 1 <= n <= PARTITION_MAX_N:
        raise ValueError(f"partition enumeration capped at n={PARTITION_MAX_N}")

    def rec(pos: int, balance: int, bits: int, mask: int) -> Iterator[Signature]:
        if pos == n:
            if balance == 0:
                yield Signature(bits, mask, n)
            return
        if balance > 0:
            yield from rec(pos + 1, balance - 1, bits, mask | (1 << pos))
        if balance + 1 <= n - pos - 1:
            p = 1 << pos
            yield from rec(pos + 1, balance + 1, bits | p, mask | p)
        if balance == 0:
            yield from rec(pos + 1, 0, bits, mask)

    for sig in rec(0, 0, 0, 0):
        yield Chain(sig)


@lru_cache(maxsize=None)
def chain_count(n: int) -> int:
    """Number of chains in the partition = C(n, floor(n/2))."""
    from math import comb
    return comb(n, n // 2)


@dataclass(frozen=True)
class EdgeScanResult:
    """Worst cases over all cube edges of the chain-distance quantities."""

    n: int
    edges: int
    max_signature_distance: int
    max_level_gap: int
    max_cross_excess: int
    max_hausdorff: int


def adjacent_chain_scan(n: int) -> EdgeScanResult:
    """Exhaustively compare the chains of every adjacent pair of points.

    For each edge (x, y) this records the signature distance, the gap
    |k - k'| between chain minimum levels, the worst excess of
    dist(c_j, c'_j') over |j - j'| across all element pairs, and the
    Hausdorff distance between the two chains.
    """
    if n > 16:
        raise ValueError("edge scan capped at n=16")
    size = 1 << n
    masks = [_mark_mask(x, n) for x in range(size)]
    chain_cache: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}

    def chain_data(x: int) -> tuple[int, tuple[int, ...]]:
        m = masks[x]
        key = (x & m, m)
        got = chain_cache.get(key)
        if got is None:
            got = (popcount(m) // 2, Signature(x & m, m, n).element_bits_all())
            chain_cache[key] = got
        return got

    max_sig = max_gap = max_excess = max_haus = 0
    edges = 0
    for b in range(n):
        bit = 1 << b
        for x in range(size):
            if x & bit:
                continue
            y = x | bit
            edges += 1
            mx, my = masks[x], masks[y]
            sd = popcount((mx ^ my) | (mx & my & (x ^ y)))
            if sd > max_sig:
                max_sig = sd
            kx, ex = chain_data(x)
            ky, ey = chain_data(y)
            gap = abs(kx - ky)
            if gap > max_gap:
                max_gap = gap
            mins_y = [n + 1] * len(ey)
            for jx, cx in enumerate(ex):
                row_min = n + 1
                for jy, cy in enumerate(ey):
                    d = popcount(cx ^ cy)
                    excess = d - abs((kx + jx) - (ky + jy))
                    if excess > max_excess:
                        max_excess = excess
                    if d < row_min:
                        row_min = d
                    if d < mins_y[jy]:
                        mins_y[jy] = d
                if row_min > max_haus:
                    max_haus = row_min
            m2 = max(mins_y)
            if m2 > max_haus:
                max_haus = m2
    return EdgeScanResult(n, edges, max_sig, max_gap, max_excess, max_haus)


def partition_covers_cube(n: int) -> tuple[int, int]:
    """(chains, points) if the partition tiles the cube exactly; raises otherwise."""
    size = 1 << n
    seen = bytearray(size)
    chains = points = 0
    for chain in enumerate_partition(n):
        chains += 1
        sig = chain.signature
        prev = None
        for j, bits in enumerate(sig.element_bits_all(), start=sig.k):
            if seen[bits]:
                raise AssertionError(f"point {format_bits(bits, n)} covered twice")
            seen[bits] = 1
            points += 1
            if popcount(bits) != j:
                raise AssertionError("chain element weight differs from its level")
            if prev is not None and popcount(prev ^ bits) != 1:
                raise AssertionError("consecutive chain elements are not adjacent")
            prev = bits
    if points != size:
        raise AssertionError(f"partition covered {points} of {size} points")
    return chains, points
