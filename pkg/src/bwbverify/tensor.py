"""Tensor products of irreducible P-modules.

Levi factors of type A_n are decomposed with the Littlewood-Richardson rule
on partitions with at most n+1 rows (SL_{n+1} semantics: full columns are
dropped).  ``lr_oracle`` computes the same decomposition by a completely
different route (Freudenthal weight multiplicities, convolution, peeling)
and exists to check ``lr_decompose``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .levi import ParabolicData, lift, restrict_levi
from .root_system import (
    RootSystemData,
    Weight,
    positive_roots,
    positive_roots_simple_coords,
    root_system,
    weyl_dim,
)

DEFAULT_ORACLE_CAP = 10**6


class TensorError(ValueError):
    pass


class Decomposition:
    """Multiset of weights ``{weight: multiplicity}``; immutable and hashable."""

    __slots__ = ("_data",)

    def __init__(self, items: Mapping[Weight, int] | Iterable[tuple[Weight, int]] = ()):
        data: dict[Weight, int] = {}
        pairs = items.items() if isinstance(items, Mapping) else items
        for w, m in pairs:
            if m < 0:
                raise TensorError("negative multiplicity")
            if m:
                data[w] = data.get(w, 0) + int(m)
        self._data = data

    @classmethod
    def single(cls, w: Weight, mult: int = 1) -> Decomposition:
        return cls([(w, mult)])

    def items(self) -> tuple[tuple[Weight, int], ...]:
        return tuple(sorted(self._data.items(), key=lambda kv: kv[0].coeffs))

    def weights(self) -> tuple[Weight, ...]:
        return tuple(w for w, _ in self.items())

    def multiplicity(self, w: Weight) -> int:
        return self._data.get(w, 0)

    def __iter__(self) -> Iterator[tuple[Weight, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Decomposition):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self.items())

    def __add__(self, other: Decomposition) -> Decomposition:
        return type(self)(list(self.items()) + list(other.items()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(" + ", ".join(f"{w!r}: {m}" for w, m in self.items()) + ")"

    def scaled(self, k: int) -> Decomposition:
        return type(self)((w, m * k) for w, m in self.items())

    def map(self, fn) -> Decomposition:
        return type(self)((fn(w), m) for w, m in self.items())

    def total(self) -> int:
        return sum(self._data.values())


# ---------------------------------------------------------------------------
# partitions


def weight_to_partition(lam: Weight) -> tuple[int, ...]:
    """A_n dominant weight -> partition with n+1 rows, trailing zeros removed."""
    if not lam.is_integral() or not lam.is_dominant():
        raise TensorError(f"{lam!r} is not dominant integral")
    a = lam.as_ints()
    parts = [sum(a[i:]) for i in range(len(a))]
    return normalize_partition(parts)


def normalize_partition(parts: Sequence[int]) -> tuple[int, ...]:
    parts = list(parts)
    if any(x < 0 for x in parts) or any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise TensorError(f"{parts} is not a partition")
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def partition_to_weight(parts: Sequence[int], n: int) -> Weight:
    """Partition with at most n+1 rows -> A_n weight (full columns dropped)."""
    if len(parts) > n + 1:
        raise TensorError(f"partition {tuple(parts)} has more than {n + 1} rows")
    p = list(parts) + [0] * (n + 1 - len(parts))
    return Weight(p[i] - p[i + 1] for i in range(n))


def _horizontal_strips(shape, size, row_cap, label, counts):
    """Yield new shapes obtained by adding a horizontal strip of ``size`` boxes
    labelled ``label``, respecting the lattice-word condition against
    ``label - 1``.  ``counts[r]`` maps label -> boxes of that label in row r."""
    rows = len(shape)

    def rec(i, remaining, added, cum_new, cum_prev):
        if remaining == 0:
            yield added + [0] * (rows - i)
            return
        if i >= rows:
            return
        upper = shape[i - 1] if i > 0 else shape[0] + remaining
        room = upper - shape[i]
        for x in range(min(room, remaining), -1, -1):
            new_cum = cum_new + x
            # reading the row right to left meets the new label first
            if label > 1 and new_cum > cum_prev:
                continue
            prev_here = counts[i].get(label - 1, 0) if label > 1 else 0
            yield from rec(i + 1, remaining - x, added + [x], new_cum, cum_prev + prev_here)

    for added in rec(0, size, [], 0, 0):
        new_shape = [s + a for s, a in zip(shape, added)]
        if len([x for x in new_shape if x]) > row_cap:
            continue
        yield new_shape, added


@lru_cache(maxsize=None)
def lr_partitions(lam: tuple[int, ...], mu: tuple[int, ...], row_cap: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Littlewood-Richardson product of Schur functions, keeping only
    partitions with at most ``row_cap`` rows."""
    rows = min(len(lam) + len(mu), row_cap) + 1
    shape0 = list(lam) + [0] * (rows - len(lam))
    result: dict[tuple[int, ...], int] = {}

    def rec(label, shape, counts):
        if label > len(mu):
            key = normalize_partition(shape)
            result[key] = result.get(key, 0) + 1
            return
        for new_shape, added in _horizontal_strips(shape, mu[label - 1], row_cap, label, counts):
            new_counts = [dict(c) for c in counts]
            for r, x in enumerate(added):
                if x:
                    new_counts[r][label] = x
            rec(label + 1, new_shape, new_counts)

    rec(1, shape0, [dict() for _ in range(rows)])
    return tuple(sorted(result.items()))


def _require_type_a(lam: Weight, mu: Weight) -> int:
    if len(lam) != len(mu):
        raise TensorError("rank mismatch")
    for w in (lam, mu):
        if not w.is_integral() or not w.is_dominant():
            raise TensorError(f"{w!r} is not dominant integral")
    return len(lam)


def lr_decompose(lam: Weight, mu: Weight) -> Decomposition:
    """``V(lam) (x) V(mu)`` for SL_{n+1}, n = len(lam)."""
    n = _require_type_a(lam, mu)
    a, b = weight_to_partition(lam), weight_to_partition(mu)
    if sum(b) > sum(a):
        # fewer strips to place; the product is commutative
        a, b = b, a
    out: dict[Weight, int] = {}
    for parts, mult in lr_partitions(a, b, n + 1):
        w = partition_to_weight(parts, n)
        out[w] = out.get(w, 0) + mult
    return Decomposition(out)


# ---------------------------------------------------------------------------
# character oracle


@lru_cache(maxsize=None)
def _oracle_tables(sys: RootSystemData):
    roots_fund = [r.as_ints() for r in positive_roots(sys)]
    roots_simple = list(positive_roots_simple_coords(sys))
    return roots_fund, roots_simple


def _dominant_rep(sys: RootSystemData, w: tuple[int, ...]) -> tuple[int, ...]:
    cartan = sys.cartan
    w = list(w)
    while True:
        j = next((i for i, c in enumerate(w) if c < 0), None)
        if j is None:
            return tuple(w)
        c = w[j]
        row = cartan[j]
        w = [x - c * a for x, a in zip(w, row)]


@lru_cache(maxsize=512)
def dominant_multiplicities(sys: RootSystemData, lam: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Multiplicities of the dominant weights of ``V(lam)`` (Freudenthal).

    With roots of squared length 2 every pairing that enters the recursion is
    an integer: for ``mu = lam - sum n_i alpha_i`` the Casimir difference is
    ``sum n_i (lam_i + mu_i + 2)`` and ``<mu + k beta, beta> = <mu, beta> + 2k``.
    """
    roots_fund, roots_simple = _oracle_tables(sys)
    n = sys.rank
    lam = tuple(lam)
    # dominant weights below lam, reached by subtracting positive roots through
    # dominant weights only; depth = simple-root coordinates of lam - mu
    depth: dict[tuple[int, ...], tuple[int, ...]] = {lam: (0,) * n}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            d = depth[mu]
            for rf, rs in zip(roots_fund, roots_simple):
                nu = tuple(x - y for x, y in zip(mu, rf))
                if nu in depth or any(c < 0 for c in nu):
                    continue
                depth[nu] = tuple(x + y for x, y in zip(d, rs))
                nxt.append(nu)
        frontier = nxt

    mult: dict[tuple[int, ...], int] = {}
    for mu in sorted(depth, key=lambda w: sum(depth[w])):
        if mu == lam:
            mult[mu] = 1
            continue
        d = depth[mu]
        denom = sum(d[i] * (lam[i] + mu[i] + 2) for i in range(n))
        total = 0
        for rf, rs in zip(roots_fund, roots_simple):
            base = sum(m * b for m, b in zip(mu, rs))
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, rf))
                m = mult.get(_dominant_rep(sys, nu), 0)
                if not m:
                    break
                total += m * (base + 2 * k)
                k += 1
        value = Fraction(2 * total, denom)
        if value.denominator != 1:
            raise TensorError(f"Freudenthal produced a non-integer multiplicity {value}")
        if value:
            mult[mu] = int(value)
    return mult


def _orbit(sys: RootSystemData, w: tuple[int, ...]) -> set[tuple[int, ...]]:
    cartan = sys.cartan
    seen = {w}
    frontier = [w]
    while frontier:
        nxt = []
        for x in frontier:
            for j, c in enumerate(x):
                if c:
                    y = tuple(a - c * b for a, b in zip(x, cartan[j]))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    return seen


@lru_cache(maxsize=256)
def weight_multiplicities(sys: RootSystemData, lam: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """All weights of ``V(lam)`` with multiplicities."""
    out = {}
    for mu, m in dominant_multiplicities(sys, tuple(lam)).items():
        for w in _orbit(sys, mu):
            out[w] = m
    return out


@lru_cache(maxsize=None)
def _height_functional(sys: RootSystemData) -> tuple[int, ...]:
    """Integer coefficients h with sum(h_j w_j) proportional to the height of w
    (sum of its simple-root coordinates); the common denominator is cleared."""
    inv = sys.inverse_cartan
    cols = [sum((inv[i][j] for i in range(sys.rank)), Fraction(0)) for j in range(sys.rank)]
    den = 1
    for c in cols:
        den = den * c.denominator // gcd(den, c.denominator)
    return tuple(int(c * den) for c in cols)


def _height(sys: RootSystemData, w: tuple[int, ...]) -> int:
    return sum(h * x for h, x in zip(_height_functional(sys), w))


def _dominant_product(ma: Mapping, mb: Mapping) -> dict[tuple[int, ...], int]:
    """Dominant part of the convolution of two weight multisets."""
    wa, ca = np.array(list(ma.keys()), dtype=np.int64), np.array(list(ma.values()), dtype=np.int64)
    wb, cb = np.array(list(mb.keys()), dtype=np.int64), np.array(list(mb.values()), dtype=np.int64)
    out: dict[tuple[int, ...], int] = {}
    # chunk over the first factor to bound memory
    step = max(1, 2_000_000 // max(1, len(wb)))
    for start in range(0, len(wa), step):
        sums = wa[start:start + step, None, :] + wb[None, :, :]
        weights = ca[start:start + step, None] * cb[None, :]
        mask = (sums >= 0).all(axis=2)
        for z, m in zip(map(tuple, sums[mask].tolist()), weights[mask].tolist()):
            out[z] = out.get(z, 0) + m
    return out


def lr_oracle(lam: Weight, mu: Weight, cap: int = DEFAULT_ORACLE_CAP, sys: RootSystemData | None = None) -> Decomposition:
    """Tensor decomposition by weight multisets: convolve the two characters,
    then peel off irreducibles from the top."""
    if sys is None:
        sys = root_system(f"A{len(lam)}")
    if len(lam) != sys.rank or len(mu) != sys.rank:
        raise TensorError("rank mismatch")
    for w in (lam, mu):
        if not w.is_integral() or not w.is_dominant():
            raise TensorError(f"{w!r} is not dominant integral")
    if weyl_dim(sys, lam) * weyl_dim(sys, mu) > cap:
        raise TensorError(f"tensor product dimension exceeds oracle cap {cap}")
    product = _dominant_product(weight_multiplicities(sys, lam.as_ints()), weight_multiplicities(sys, mu.as_ints()))
    out: dict[Weight, int] = {}
    while product:
        top = max(product, key=lambda w: (_height(sys, w), w))
        c = product[top]
        if c < 0:
            raise TensorError("peeling produced a negative multiplicity")
        out[Weight(top)] = c
        for w, m in dominant_multiplicities(sys, top).items():
            left = product.get(w, 0) - c * m
            if left:
                product[w] = left
            else:
                product.pop(w, None)
    return Decomposition(out)


# ---------------------------------------------------------------------------
# bundles on G/P


def tensor_bundles(parab: ParabolicData, a: Weight, b: Weight) -> Decomposition:
    """``S^a (x) S^b`` as a sum of irreducible bundles ``S^sigma``."""
    parab.check_levi_dominant(a)
    parab.check_levi_dominant(b)
    if not parab.levi.type_label.startswith("A"):
        raise TensorError(f"tensor decomposition needs a type A Levi, got {parab.levi.type_label}")
    la, ra = restrict_levi(parab, a)
    lb, rb = restrict_levi(parab, b)
    out: dict[Weight, int] = {}
    for sigma_levi, mult in lr_decompose(la, lb):
        sigma = lift(parab, sigma_levi)
        _, rs = restrict_levi(parab, sigma)
        t = ra + rb - rs
        if t.denominator != 1:
            raise TensorError(f"non-integer twist {t} for {sigma!r}; charge bookkeeping is broken")
        w = sigma + parab.line_bundle(int(t))
        out[w] = out.get(w, 0) + mult
    return Decomposition(out)
