"""GF(2) linear bijections on the cube, built from rooted trees.

The tree map is I + M where M is the parent-to-child adjacency matrix of a
complete arity-ary tree labeled in level order (root 1, children of i are
arity*(i-1)+2 ... arity*(i-1)+arity+1, truncated at n).  Every row then has
weight at most arity+1 and every column at most 2, the first column has odd
weight and the rest even, so the map is 2-Lipschitz and sends the dictator
function to parity.  Its inverse is the descendant-indicator matrix, whose
column j is the ancestor chain of j, so the inverse is (height+1)-Lipschitz.

Also here: the adjacent-sums map (x1+x2, x2+x3, ..., xn) and the
parity-head map (XOR(x), x2, ..., xn), the two textbook bijections from
dictator to parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cube_core import Point, popcount

ELIMINATION_MAX_N = 4096


# ---------------------------------------------------------------------------
# trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TreeLabeling:
    """Level-order labeling of the complete arity-ary tree on n vertices."""

    n: int
    arity: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("tree needs at least one vertex")
        if self.arity < 2:
            raise ValueError("arity must be at least 2")

    def parent(self, j: int) -> int:
        if not 2 <= j <= self.n:
            raise ValueError(f"vertex {j} has no parent")
        return (j - 2) // self.arity + 1

    def children(self, i: int) -> range:
        lo = self.arity * (i - 1) + 2
        hi = min(self.arity * i + 1, self.n)
        return range(lo, hi + 1)

    def depths(self) -> list[int]:
        """depth[j] for j = 1..n (index 0 unused); root depth 0."""
        d = [0] * (self.n + 1)
        for j in range(2, self.n + 1):
            d[j] = d[(j - 2) // self.arity + 1] + 1
        return d

    def height(self) -> int:
        return self.depths()[self.n] if self.n > 1 else 0

    def ancestors(self, j: int) -> list[int]:
        """j, parent(j), ..., root."""
        out = [j]
        while j != 1:
            j = (j - 2) // self.arity + 1
            out.append(j)
        return out


# ---------------------------------------------------------------------------
# sparse matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SparseGF2Matrix:
    """Square 0/1 matrix stored as per-row sorted 1-based column indices."""

    n: int
    rows: tuple[tuple[int, ...], ...]
    tree: TreeLabeling | None = None

    def __post_init__(self) -> None:
        if len(self.rows) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.rows)}")
        for r, cols in enumerate(self.rows, start=1):
            if list(cols) != sorted(set(cols)):
                raise ValueError(f"row {r} columns must be strictly sorted")
            if cols and not (1 <= cols[0] and cols[-1] <= self.n):
                raise ValueError(f"row {r} has a column index outside 1..{self.n}")

    def row_weights(self) -> list[int]:
        return [len(r) for r in self.rows]

    def col_weights(self) -> list[int]:
        w = [0] * (self.n + 1)
        for cols in self.rows:
            for c in cols:
                w[c] += 1
        return w[1:]

    def row_masks(self) -> list[int]:
        """Rows as int bitmaps; column j is bit j-1."""
        return [sum(1 << (c - 1) for c in cols) for cols in self.rows]

    def col_masks(self) -> list[int]:
        """Columns as int bitmaps indexed 0..n-1; row i is bit i-1."""
        masks = [0] * self.n
        for i, cols in enumerate(self.rows):
            for c in cols:
                masks[c - 1] |= 1 << i
        return masks

    def apply_bits(self, x: int) -> int:
        out = 0
        for i, cols in enumerate(self.rows):
            acc = 0
            for c in cols:
                acc ^= (x >> (c - 1)) & 1
            out |= acc << i
        return out

    def to_text(self) -> str:
        """One line per row: the row's column indices, space separated."""
        return "\n".join(" ".join(str(c) for c in cols) for cols in self.rows)


def build_tree_matrix(n: int, arity: int = 2) -> SparseGF2Matrix:
    """I + parent-to-child adjacency of the level-order arity-ary tree."""
    tree = TreeLabeling(n, arity)
    rows = tuple(tuple(sorted([i, *tree.children(i)])) for i in range(1, n + 1))
    return SparseGF2Matrix(n, rows, tree)


def identity_matrix(n: int) -> SparseGF2Matrix:
    return SparseGF2Matrix(n, tuple((i,) for i in range(1, n + 1)))


def apply(a: SparseGF2Matrix, x: Point) -> Point:
    if x.n != a.n:
        raise ValueError(f"dimension mismatch: matrix n={a.n}, point n={x.n}")
    return Point(a.apply_bits(x.bits), x.n)


def tree_inverse_bits(n: int, arity: int, y: int) -> int:
    """Subtree parities: output bit i-1 = parity of y over the subtree of i.

    Children carry larger labels than parents, so one descending pass that
    folds each vertex into its parent leaves every cell holding its whole
    subtree's parity.
    """
    acc = [0] * (n + 1)
    for j in range(1, n + 1):
        acc[j] = (y >> (j - 1)) & 1
    for j in range(n, 1, -1):
        acc[(j - 2) // arity + 1] ^= acc[j]
    out = 0
    for j in range(1, n + 1):
        out |= acc[j] << (j - 1)
    return out


def tree_inverse_apply(n: int, arity: int, y: Point) -> Point:
    if y.n != n:
        raise ValueError(f"dimension mismatch: n={n}, point n={y.n}")
    TreeLabeling(n, arity)
    return Point(tree_inverse_bits(n, arity, y.bits), n)


# -- sparse (support-set) evaluation for very large n -----------------------

def tree_apply_support(n: int, arity: int, support) -> frozenset[int]:
    """Image support of a point given by its set of 1-coordinates."""
    tree = TreeLabeling(n, arity)
    out: set[int] = set()
    for j in support:
        out ^= {j}
        if j >= 2:
            out ^= {tree.parent(j)}
    return frozenset(out)


def tree_inverse_support(n: int, arity: int, support) -> frozenset[int]:
    tree = TreeLabeling(n, arity)
    out: set[int] = set()
    for j in support:
        for v in tree.ancestors(j):
            out ^= {v}
    return frozenset(out)


# -- fast whole-word path for the binary tree -------------------------------

@lru_cache(maxsize=None)
def _repeat_mask(block: int, period: int, width: int) -> int:
    m = (1 << block) - 1
    shift = period
    while shift < width:
        m |= m << shift
        shift <<= 1
    return m & ((1 << width) - 1)


def extract_even_bits(x: int, nbits: int) -> int:
    """Compact bits 0, 2, 4, ... of the low nbits of x."""
    width = 1
    while width < nbits:
        width <<= 1
    x &= _repeat_mask(1, 2, width)
    s = 1
    while s < width:
        x = (x | (x >> s)) & _repeat_mask(2 * s, 4 * s, width)
        s <<= 1
    return x


def tree2_apply_bits(n: int, x: int) -> int:
    """apply(build_tree_matrix(n, 2), x) in O(log n) word operations.

    Output bit b is x_b ^ x_{2b+1} ^ x_{2b+2} (0-based), i.e. vertex b+1
    folded with its two children, which is one odd-bit and one shifted
    even-bit extraction.
    """
    x &= (1 << n) - 1
    odd = extract_even_bits(x >> 1, n - 1) if n > 1 else 0
    even = extract_even_bits(x, n)
    return (x ^ odd ^ (even >> 1)) & ((1 << n) - 1)


# ---------------------------------------------------------------------------
# the two simple dictator-to-parity bijections
# ---------------------------------------------------------------------------

def _prefix_xor_bits(x: int, n: int) -> int:
    return (x ^ (x >> 1)) & ((1 << n) - 1)


def _prefix_xor_inverse_bits(y: int, n: int) -> int:
    x = y
    s = 1
    while s < n:
        x ^= x >> s
        s <<= 1
    return x & ((1 << n) - 1)


def prefix_xor_map(x: Point) -> Point:
    """(x1+x2, x2+x3, ..., x_{n-1}+x_n, x_n): 2-Lipschitz, inverse is not."""
    return Point(_prefix_xor_bits(x.bits, x.n), x.n)


def prefix_xor_inverse(y: Point) -> Point:
    """Recovers x via suffix parities: x_i = y_i + y_{i+1} + ... + y_n."""
    return Point(_prefix_xor_inverse_bits(y.bits, y.n), y.n)


def _xor_head_bits(x: int, n: int) -> int:
    return (x & ~1) | (popcount(x) & 1)


def xor_head_map(x: Point) -> Point:
    """(XOR(x), x2, ..., xn): a self-inverse 2-bi-Lipschitz bijection."""
    return Point(_xor_head_bits(x.bits, x.n), x.n)


# ---------------------------------------------------------------------------
# condition verification
# ---------------------------------------------------------------------------

def gf2_rank(rows: list[int], ncols: int) -> int:
    """Rank over GF(2) of int-bitmap rows, by Gaussian elimination."""
    work = rows[:]
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and (work[r] >> col) & 1:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def gf2_inverse_rows(rows: list[int], n: int) -> list[int] | None:
    """Inverse of an n x n GF(2) matrix given as int rows, or None."""
    work = [rows[i] | (1 << (n + i)) for i in range(n)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        for r in range(n):
            if r != col and (work[r] >> col) & 1:
                work[r] ^= work[col]
    return [w >> n for w in work]


def _tree_inverse_consistent(tree: TreeLabeling) -> bool:
    """Check that the descendant-indicator matrix inverts the tree matrix.

    Applies the matrix to every ancestor-chain column of the explicit
    inverse and demands the corresponding unit vector back.
    """
    for j in range(1, tree.n + 1):
        out: set[int] = set()
        for v in tree.ancestors(j):
            out ^= {v}
            if v >= 2:
                out ^= {tree.parent(v)}
        if out != {j}:
            return False
    return True


@dataclass(frozen=True)
class ConditionReport:
    """Measured weights plus the five pass/fail verdicts for a linear map."""

    n: int
    arity: int
    invertible: bool
    parity_ok: bool
    max_row_weight: int
    max_col_weight: int
    max_inverse_col_weight: int | None
    row_weight_ok: bool
    col_weight_ok: bool
    inverse_weight_ok: bool
    method: str

    @property
    def all_pass(self) -> bool:
        return (self.invertible and self.parity_ok and self.row_weight_ok
                and self.col_weight_ok and self.inverse_weight_ok)


def verify_conditions(a: SparseGF2Matrix, cross_check: bool = False) -> ConditionReport:
    """Measure a matrix against the five tree-map conditions.

    Invertibility and inverse column weights come from Gaussian elimination
    for generic matrices; matrices built from a tree use the explicit
    ancestor-indicator inverse instead, which scales to large n.  With
    cross_check=True a tree matrix additionally runs the elimination path
    and the two must agree.
    """
    n = a.n
    arity = a.tree.arity if a.tree else 2
    row_w = a.row_weights()
    col_w = a.col_weights()
    parity_ok = col_w[0] % 2 == 1 and all(w % 2 == 0 for w in col_w[1:])

    inv_col_w: int | None = None
    if a.tree is not None:
        invertible = _tree_inverse_consistent(a.tree)
        inv_col_w = max(d + 1 for d in a.tree.depths()[1:])
        method = "structural"
        if cross_check:
            if n > ELIMINATION_MAX_N:
                raise ValueError(f"elimination cross-check capped at n={ELIMINATION_MAX_N}")
            inv_rows = gf2_inverse_rows(a.row_masks(), n)
            elim_invertible = inv_rows is not None
            if elim_invertible != invertible:
                raise AssertionError("elimination and structural paths disagree on invertibility")
            if inv_rows is not None:
                elim_w = max(
                    sum((r >> c) & 1 for r in inv_rows) for c in range(n))
                if elim_w != inv_col_w:
                    raise AssertionError(
                        f"inverse column weight: structural {inv_col_w} vs elimination {elim_w}")
            method = "both"
    else:
        if n > ELIMINATION_MAX_N:
            raise ValueError(f"elimination capped at n={ELIMINATION_MAX_N}")
        inv_rows = gf2_inverse_rows(a.row_masks(), n)
        invertible = inv_rows is not None
        if inv_rows is not None:
            inv_col_w = max(sum((r >> c) & 1 for r in inv_rows) for c in range(n))
        method = "elimination"

    log_bound = max(n, 1).bit_length()  # floor(log2 n) + 1 for n >= 1
    return ConditionReport(
        n=n,
        arity=arity,
        invertible=invertible,
        parity_ok=parity_ok,
        max_row_weight=max(row_w),
        max_col_weight=max(col_w),
        max_inverse_col_weight=inv_col_w,
        row_weight_ok=max(row_w) <= arity + 1,
        col_weight_ok=max(col_w) <= 2,
        inverse_weight_ok=inv_col_w is not None and inv_col_w <= log_bound,
        method=method,
    )


# ---------------------------------------------------------------------------
# Mapping factories
# ---------------------------------------------------------------------------

def tree_mapping(n: int, arity: int = 2):
    """Mapping object for the tree map, inverse bound."""
    from .stretch_metrics import Mapping
    a = build_tree_matrix(n, arity)
    cols = a.col_masks()

    def forward(x: int) -> int:
        out = 0
        while x:
            low = x & -x
            out ^= cols[low.bit_length() - 1]
            x ^= low
        return out

    return Mapping.from_callable(
        n, forward,
        inverse=lambda y: tree_inverse_bits(n, arity, y),
        name=f"tree{arity}" if arity != 2 else "tree",
    )


def prefix_xor_mapping(n: int):
    from .stretch_metrics import Mapping
    return Mapping.from_callable(
        n,
        lambda x: _prefix_xor_bits(x, n),
        inverse=lambda y: _prefix_xor_inverse_bits(y, n),
        name="prefix",
    )


def xor_head_mapping(n: int):
    from .stretch_metrics import Mapping
    return Mapping.from_callable(
        n,
        lambda x: _xor_head_bits(x, n),
        inverse=lambda y: _xor_head_bits(y, n),
        name="xorhead",
    )
