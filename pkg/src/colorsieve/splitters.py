"""Indexed splitters and perfect hash families.

An ``(n, k, t)``-splitter is a family of vectors in ``[t]^n`` such that every
k-subset of ``[n]`` is partitioned almost equally by some member (for
``t >= k`` this means: receives ``k`` distinct colors).  Families here are
*indexed*: ``query(i)`` computes member ``i`` on demand, so a family of
exponential size can be streamed with polynomial delay and workspace.

Building blocks:

* :func:`interval_splitter` -- all placements of ``t - 1`` cut points.
* :func:`joffe_space` -- the k-wise independent polynomial sampling space.
* :func:`greedy_splitter` -- greedy cover drawn from the sampling space
  (materialized; used on small universes only).
* :func:`reduction_family` -- maps ``[n]`` into ``[k^2]`` injectively on
  every k-subset for some member.
* :func:`compose` -- combines the above into a splitter over ``[n]`` whose
  query only touches small inner families.
* :func:`perfect_hash_family` / :func:`indexed_splitter` -- the full stack.

Colors and positions are 1-based; query indices are 0-based.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

Vector = tuple[int, ...]

K0_TWO_LEVEL = 16
# largest inner block handled by a single greedy family before splitting
SINGLE_BLOCK_MAX = 4
BLOCK_SIZE = 3


class SplitterError(ValueError):
    pass


class CompositionError(SplitterError):
    pass


# --------------------------------------------------------------------------
# primes


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    p = max(n, 2)
    while not is_prime(p):
        p += 1
    return p


# --------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class SplitterSpec:
    n: int
    k: int
    t: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise SplitterError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if self.t < 1:
            raise SplitterError(f"need t >= 1, got {self.t}")


@dataclass(frozen=True)
class SplitterProfile:
    """Family size plus declared resource classes and init measurements."""

    m: int
    t_in: str
    s_in: str
    t_qr: str
    s_qr: str
    init_seconds: float = 0.0
    stored_values: int = 0


class IndexedSplitter:
    """Random-access splitter.  Subclasses implement :meth:`_query`."""

    spec: SplitterSpec
    profile: SplitterProfile

    def __len__(self) -> int:
        return self.profile.m

    def query(self, i: int) -> Vector:
        if not 0 <= i < self.profile.m:
            raise IndexError(f"splitter index {i} outside 0..{self.profile.m - 1}")
        return self._query(i)

    def query_array(self, i: int) -> np.ndarray:
        """Member ``i`` as an int64 array (used by compositions)."""
        return np.asarray(self.query(i), dtype=np.int64)

    def _query(self, i: int) -> Vector:
        raise NotImplementedError

    def __iter__(self) -> Iterator[Vector]:
        return enumerate_vectors(self)

    def __repr__(self) -> str:
        s = self.spec
        return f"{type(self).__name__}(n={s.n}, k={s.k}, t={s.t}, m={self.profile.m})"


def enumerate_vectors(s: IndexedSplitter, start: int = 0, stop: Optional[int] = None) -> Iterator[Vector]:
    """Yield ``query(start), ..., query(stop - 1)``; no state besides the index.

    Disjoint index ranges may be consumed by independent workers.
    """
    stop = len(s) if stop is None else min(stop, len(s))
    for i in range(start, stop):
        yield s.query(i)


class TableSplitter(IndexedSplitter):
    """A materialized family."""

    def __init__(self, spec: SplitterSpec, vectors: Sequence[Vector], t_in: str, init_seconds: float = 0.0):
        self.spec = spec
        self.vectors = tuple(tuple(int(x) for x in v) for v in vectors)
        self._arrays = [np.asarray(v, dtype=np.int64) for v in self.vectors]
        self.profile = SplitterProfile(
            m=len(self.vectors),
            t_in=t_in,
            s_in="O(m n log t)",
            t_qr="O(n)",
            s_qr="O(1)",
            init_seconds=init_seconds,
            stored_values=len(self.vectors) * spec.n,
        )

    def _query(self, i):
        return self.vectors[i]

    def query_array(self, i):
        return self._arrays[i]


# --------------------------------------------------------------------------
# interval splitter


def unrank_combination(n: int, r: int, rank: int) -> tuple[int, ...]:
    """The ``rank``-th r-subset of ``1..n`` in lexicographic order."""
    out = []
    x = 1
    for slot in range(r, 0, -1):
        while True:
            block = math.comb(n - x, slot - 1)
            if rank < block:
                out.append(x)
                x += 1
                break
            rank -= block
            x += 1
    return tuple(out)


class IntervalSplitter(IndexedSplitter):
    """Member ``i`` places ``t - 1`` distinct cut points in ``1..n``
    (the ``i``-th choice in lexicographic order); position ``x`` gets color
    ``1 + #{cuts < x}``.  Size ``C(n, t - 1)``."""

    def __init__(self, n: int, k: int, t: int):
        if t > n:
            raise SplitterError(f"interval splitter needs t <= n, got t={t}, n={n}")
        self.spec = SplitterSpec(n, k, t)
        self.profile = SplitterProfile(
            m=math.comb(n, t - 1),
            t_in="O(t log n)",
            s_in="O(t log n)",
            t_qr="O(n t log n)",
            s_qr="O(t log n)",
        )

    def cuts(self, i: int) -> tuple[int, ...]:
        return unrank_combination(self.spec.n, self.spec.t - 1, i)

    def _query(self, i):
        cuts = self.cuts(i)
        out = []
        color = 1
        j = 0
        for x in range(1, self.spec.n + 1):
            while j < len(cuts) and cuts[j] < x:
                j += 1
                color += 1
            out.append(color)
        return tuple(out)


def interval_splitter(n: int, k: int, t: int) -> IntervalSplitter:
    return IntervalSplitter(n, k, t)


# --------------------------------------------------------------------------
# k-wise independent sampling space


def _check_joffe(p: int, k: int, t: int) -> None:
    if not is_prime(p):
        raise SplitterError(f"{p} is not prime")
    if not 1 <= k <= t:
        raise SplitterError(f"need 1 <= k <= t, got k={k}, t={t}")
    if t > p or k >= p:
        raise SplitterError(f"need k < p and t <= p, got k={k}, t={t}, p={p}")


def joffe_space(p: int, k: int, t: int, length: Optional[int] = None) -> Iterator[Vector]:
    """Enumerate the sampling space ``H*_{p,k,t}``.

    For every ``(X_1, ..., X_k)`` in ``{0..p-1}^k`` (lexicographic order) yield
    the vector with coordinates ``((X_1 + i X_2 + ... + i^(k-1) X_k) mod p) mod t + 1``
    for ``i = 1..length`` (default ``length = p``).  Only the current
    assignment is kept between vectors.
    """
    _check_joffe(p, k, t)
    length = p if length is None else length
    if not 0 <= length <= p:
        raise SplitterError("length must be at most p")
    for xs in product(range(p), repeat=k):
        out = []
        for i in range(1, length + 1):
            acc = 0
            for x in reversed(xs):  # Horner
                acc = (acc * i + x) % p
            out.append(acc % t + 1)
        yield tuple(out)


def _joffe_blocks(p: int, k: int, t: int, length: int, block: int = 4096) -> Iterator[np.ndarray]:
    """Same vectors as :func:`joffe_space`, in the same order, as numpy blocks."""
    powers = np.array([[pow(i, j, p) for j in range(k)] for i in range(1, length + 1)], dtype=np.int64)
    total = p ** k
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        digits = np.empty((len(idx), k), dtype=np.int64)
        rest = idx.copy()
        for j in range(k - 1, -1, -1):
            digits[:, j] = rest % p
            rest //= p
        yield (digits @ powers.T) % p % t + 1


# --------------------------------------------------------------------------
# greedy splitter


def tau(alpha: float) -> float:
    """``(1 - 1/alpha)^(alpha - 1) * e`` with ``tau(1) = e``."""
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if alpha == 1:
        return math.e
    return (1 - 1 / alpha) ** (alpha - 1) * math.e


def colors_for(k: int, alpha) -> int:
    """``ceil(alpha * k)`` computed exactly."""
    return math.ceil(Fraction(alpha) * k)


def hit_fraction(n: int, k: int, t: int) -> Fraction:
    """Guaranteed fraction of uncovered k-sets some sampling vector covers:
    ``e^(-2 t k / n) * C(t, k) * k! / t^k``."""
    return Fraction(math.exp(-2 * t * k / n)) * Fraction(math.comb(t, k) * math.factorial(k), t ** k)


def greedy_size_bound(n: int, k: int, alpha) -> int:
    """``ceil(e^(2 t k / n) * t^k / (C(t, k) k!) * k * ln(2n))`` with ``t = ceil(alpha k)``."""
    t = colors_for(k, alpha)
    x = math.exp(2 * t * k / n) * t ** k / (math.comb(t, k) * math.factorial(k))
    return math.ceil(x * k * math.log(2 * n))


def sampling_prime(n: int, t: int) -> int:
    return next_prime(max(n, t + 1))


@dataclass
class GreedyStats:
    examined: int = 0
    relaxed_additions: int = 0
    passes: int = 0


def greedy_splitter(n: int, k: int, alpha=1, stats: Optional[GreedyStats] = None) -> TableSplitter:
    """Greedy ``(n, k, ceil(alpha k))``-splitter drawn from the sampling space.

    Vectors of ``H*_{p,k,t}`` are scanned in order; a vector is kept when the
    number of still-uncovered k-sets it makes colorful reaches
    :func:`hit_fraction` times the number of uncovered sets.  Scanning
    restarts until everything is covered; if a whole pass keeps nothing, the
    rule relaxes to "covers at least one new set".
    """
    if k > n:
        raise SplitterError(f"need k <= n, got n={n}, k={k}")
    t = colors_for(k, alpha)
    spec = SplitterSpec(n, k, t)
    started = time.perf_counter()
    if stats is None:
        stats = GreedyStats()
    if k == 1:
        return TableSplitter(spec, [(1,) * n], t_in="O(n)", init_seconds=time.perf_counter() - started)

    p = sampling_prime(n, t)
    subsets = np.array(list(combinations(range(n), k)), dtype=np.int64)
    uncovered = np.ones(len(subsets), dtype=bool)
    remaining = len(subsets)
    frac = hit_fraction(n, k, t)
    chosen: list[np.ndarray] = []
    relaxed = False
    while remaining:
        stats.passes += 1
        added = False
        for block in _joffe_blocks(p, k, t, n, block=max(1, min(4096, 4_000_000 // (len(subsets) * k)))):
            vals = np.sort(block[:, subsets], axis=2)
            colorful = np.all(vals[:, :, 1:] != vals[:, :, :-1], axis=2)
            for row, cov in zip(block, colorful):
                stats.examined += 1
                new = int(np.count_nonzero(cov & uncovered))
                if new == 0:
                    continue
                if relaxed or Fraction(new) >= frac * remaining:
                    chosen.append(row.copy())
                    uncovered &= ~cov
                    remaining -= new
                    added = True
                    if relaxed:
                        stats.relaxed_additions += 1
                    if not remaining:
                        break
            if not remaining:
                break
        if not added:
            relaxed = True
    return TableSplitter(
        spec,
        [tuple(v) for v in chosen],
        t_in="O(m k^2 C(n,k) p^k)",
        init_seconds=time.perf_counter() - started,
    )


# --------------------------------------------------------------------------
# reduction to a universe of size k^2


class ModularReduction(IndexedSplitter):
    """``x -> ((a x mod p) mod r) + 1`` for ``a = 1..p-1``, ``p`` the smallest
    prime above ``n`` and ``r = k^2``.  For every k-subset some ``a`` is
    injective on it."""

    def __init__(self, n: int, k: int):
        self.p = next_prime(n + 1)
        self.r = k * k
        self.spec = SplitterSpec(n, k, self.r)
        self.profile = SplitterProfile(
            m=self.p - 1, t_in="O(n)", s_in="O(log n)", t_qr="O(n)", s_qr="O(log n)"
        )

    def _query(self, i):
        return tuple(self.query_array(i).tolist())

    def query_array(self, i):
        a = i + 1
        x = np.arange(1, self.spec.n + 1, dtype=np.int64)
        return (a * x) % self.p % self.r + 1


class IdentityReduction(IndexedSplitter):
    """Single member ``x -> x``; injective everywhere.  Used when ``n <= k^2``."""

    def __init__(self, n: int, k: int):
        self.r = n
        self.spec = SplitterSpec(n, k, n)
        self.profile = SplitterProfile(m=1, t_in="O(1)", s_in="O(1)", t_qr="O(n)", s_qr="O(1)")

    def _query(self, i):
        return tuple(range(1, self.spec.n + 1))

    def query_array(self, i):
        return np.arange(1, self.spec.n + 1, dtype=np.int64)


def reduction_family(n: int, k: int, modular: Optional[bool] = None) -> IndexedSplitter:
    """``(n, k, r)``-family with a member injective on each k-subset.

    ``r = k^2`` via the modular family, or ``r = n`` via the identity when
    ``n <= k^2`` (unless ``modular=True``).  The image size is ``.r``.
    """
    if modular is None:
        modular = n > k * k
    return ModularReduction(n, k) if modular else IdentityReduction(n, k)


# --------------------------------------------------------------------------
# composition


InnerFactory = Callable[[int, int, int], IndexedSplitter]


def block_sizes(total: int, ell: int) -> list[int]:
    """Split ``total`` into ``ell`` parts of size floor/ceil, floors first."""
    lo, hi = total // ell, -(-total // ell)
    if lo == hi:
        return [lo] * ell
    j = hi * ell - total  # number of floor-sized parts
    return [lo] * j + [hi] * (ell - j)


class ComposedSplitter(IndexedSplitter):
    """Splitter over ``[n]`` from a reduction, a block partition and inner families.

    Index ``i`` decomposes in mixed radix as ``(i_a, i_b, i_1, ..., i_ell)``
    with ``i_a`` most significant.  The reduction member ``a`` maps ``[n]``
    into ``[r]``; the interval member splits ``[r]`` into ``ell`` blocks;
    block ``p`` is colored by inner member ``i_p`` shifted by the color
    offset of the blocks before it.
    """

    def __init__(self, inner: InnerFactory, n: int, k: int, t: int, ell: int,
                 reduction: Optional[IndexedSplitter] = None):
        if not 1 <= ell <= k:
            raise CompositionError(f"need 1 <= ell <= k, got ell={ell}, k={k}")
        if t < k:
            raise CompositionError(f"composition needs t >= k, got t={t}, k={k}")
        started = time.perf_counter()
        self.spec = SplitterSpec(n, k, t)
        self.ell = ell
        self.reduction = reduction if reduction is not None else reduction_family(n, k)
        r = self.reduction.r
        if r < k:
            raise CompositionError("reduction image smaller than k")
        self.blocks = interval_splitter(r, k, ell)
        self.k_parts = block_sizes(k, ell)
        self.t_parts = block_sizes(t, ell)
        if any(kp > tp for kp, tp in zip(self.k_parts, self.t_parts)):
            raise CompositionError(f"block sizes {self.k_parts} do not fit colors {self.t_parts}")
        built: dict[tuple[int, int], IndexedSplitter] = {}
        self.inner = []
        for kp, tp in zip(self.k_parts, self.t_parts):
            if (kp, tp) not in built:
                s = inner(r, kp, tp)
                if (s.spec.n, s.spec.k, s.spec.t) != (r, kp, tp):
                    raise CompositionError(
                        f"inner factory returned {s.spec}, expected ({r}, {kp}, {tp})"
                    )
                built[(kp, tp)] = s
            self.inner.append(built[(kp, tp)])
        self.offsets = np.cumsum([0] + self.t_parts[:-1]).astype(np.int64)
        self.radices = [len(self.reduction), len(self.blocks)] + [len(s) for s in self.inner]
        m = math.prod(self.radices)
        inner_t = max(s.profile.t_qr for s in self.inner)
        self.profile = SplitterProfile(
            m=m,
            t_in="k^O(1) n log n + t_in(inner)",
            s_in="k^O(1) n log n + s_in(inner)",
            t_qr=f"O(ell * ({inner_t}) + n)",
            s_qr="O(ell * s_qr(inner) + log n)",
            init_seconds=time.perf_counter() - started,
            stored_values=sum(s.profile.stored_values for s in built.values()),
        )

    def decompose(self, i: int) -> list[int]:
        digits = []
        for radix in reversed(self.radices):
            digits.append(i % radix)
            i //= radix
        return digits[::-1]

    def query_array(self, i):
        if not 0 <= i < self.profile.m:
            raise IndexError(f"splitter index {i} outside 0..{self.profile.m - 1}")
        i_a, i_b, *i_inner = self.decompose(i)
        a = self.reduction.query_array(i_a) - 1
        block = np.asarray(self.blocks.query(i_b), dtype=np.int64) - 1
        table = np.stack([s.query_array(j) for s, j in zip(self.inner, i_inner)]) - 1
        blk = block[a]
        return table[blk, a] + self.offsets[blk] + 1

    def _query(self, i):
        return tuple(self.query_array(i).tolist())


def compose(inner: InnerFactory, n: int, k: int, t: int, ell: int,
            reduction: Optional[IndexedSplitter] = None) -> ComposedSplitter:
    return ComposedSplitter(inner, n, k, t, ell, reduction)


@lru_cache(maxsize=256)
def greedy_inner(n: int, k: int, t: int) -> TableSplitter:
    """Greedy family with exactly ``t`` colors, cached across compositions."""
    return greedy_splitter(n, k, Fraction(t, k))


def _single_level_ell(k: int) -> int:
    return 1 if k <= SINGLE_BLOCK_MAX else -(-k // BLOCK_SIZE)


def _log2_ceil(k: int) -> int:
    return max(1, math.ceil(math.log2(k)))


class ConstantSplitter(IndexedSplitter):
    def __init__(self, n: int, k: int, t: int):
        self.spec = SplitterSpec(n, k, t)
        self.profile = SplitterProfile(m=1, t_in="O(1)", s_in="O(1)", t_qr="O(n)", s_qr="O(1)")

    def _query(self, i):
        return (1,) * self.spec.n


def indexed_splitter(n: int, k: int, t: Optional[int] = None, k0: int = K0_TWO_LEVEL) -> IndexedSplitter:
    """Polynomial-space indexed ``(n, k, t)``-splitter (``t`` defaults to ``k``).

    * ``k == 1``: one constant vector.
    * ``t < k``: the interval family.
    * ``k < k0``: one composition level over greedy inner families.
    * otherwise: two levels, outer ``ell = ceil(k / ceil(log k)^2)``,
      inner ``ell = ceil(log k)``.
    """
    t = k if t is None else t
    SplitterSpec(n, k, t)
    if k == 1:
        return ConstantSplitter(n, k, t)
    if t < k:
        return interval_splitter(n, k, t)
    if k < k0:
        return compose(greedy_inner, n, k, t, _single_level_ell(k))
    lg = _log2_ceil(k)
    ell1 = -(-k // (lg * lg))
    ell2 = lg

    def second_level(r: int, kp: int, tp: int) -> IndexedSplitter:
        if kp == 1:
            return ConstantSplitter(r, kp, tp)
        return compose(greedy_inner, r, kp, tp, min(ell2, kp))

    return compose(second_level, n, k, t, ell1)


def perfect_hash_family(n: int, k: int, k0: int = K0_TWO_LEVEL) -> IndexedSplitter:
    """Indexed ``(n, k)``-perfect hash family: every k-subset gets all colors ``1..k``
    under some member."""
    if k > n:
        raise SplitterError(f"need k <= n, got n={n}, k={k}")
    return indexed_splitter(n, k, k, k0)
