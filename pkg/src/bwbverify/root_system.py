"""Exact root-system arithmetic for simply-laced Cartan types.

Weights are stored in the fundamental-weight basis.  The inner product is
normalized so that every root has squared length 2, which makes
``<w_i, w_j>`` the ``(i, j)`` entry of the inverse Cartan matrix and
``<lam, alpha_j>`` simply the j-th coordinate of ``lam``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

# Safety net for the positive-root closure; E8 has 120 positive roots.
MAX_POSITIVE_ROOTS = 1000


class RootSystemError(ValueError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not allowed")
    return Fraction(x)


@dataclass(frozen=True)
class Weight:
    """An exact weight; ``coeffs[i]`` is the coefficient of ``w_{i+1}``."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in coeffs))

    @classmethod
    def zero(cls, rank: int) -> Weight:
        return cls((0,) * rank)

    @classmethod
    def fundamental(cls, rank: int, i: int, scale=1) -> Weight:
        """``scale * w_i`` (1-based index)."""
        if not 1 <= i <= rank:
            raise RootSystemError(f"fundamental weight index {i} out of range 1..{rank}")
        c = [0] * rank
        c[i - 1] = scale
        return cls(c)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __add__(self, other: Weight) -> Weight:
        if len(other) != len(self):
            raise RootSystemError("rank mismatch")
        return Weight(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: Weight) -> Weight:
        if len(other) != len(self):
            raise RootSystemError("rank mismatch")
        return Weight(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> Weight:
        return Weight(-a for a in self.coeffs)

    def __mul__(self, k) -> Weight:
        k = _frac(k)
        return Weight(k * a for a in self.coeffs)

    __rmul__ = __mul__

    def __lt__(self, other: Weight) -> bool:
        return self.coeffs < other.coeffs

    def __repr__(self) -> str:
        return "Weight(" + ",".join(str(c) for c in self.coeffs) + ")"

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_dominant(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def is_regular_dominant(self) -> bool:
        return all(c > 0 for c in self.coeffs)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise RootSystemError(f"{self!r} is not integral")
        return tuple(int(c) for c in self.coeffs)


@dataclass(frozen=True)
class RootSystemData:
    type_label: str
    cartan: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cartan = tuple(tuple(int(x) for x in row) for row in self.cartan)
        object.__setattr__(self, "cartan", cartan)
        n = len(cartan)
        for i, row in enumerate(cartan):
            if len(row) != n:
                raise RootSystemError("Cartan matrix must be square")
            for j, x in enumerate(row):
                if i == j and x != 2:
                    raise RootSystemError("Cartan diagonal entries must be 2")
                if i != j and x not in (0, -1):
                    raise RootSystemError("only simply-laced Cartan matrices are supported")
                if x != cartan[j][i]:
                    raise RootSystemError("simply-laced Cartan matrix must be symmetric")
        if n and _det(cartan) == 0:
            raise RootSystemError("Cartan matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def inverse_cartan(self) -> tuple[tuple[Fraction, ...], ...]:
        return _inverse(self.cartan)

    @cached_property
    def rho(self) -> Weight:
        return Weight((1,) * self.rank)

    def simple_root(self, j: int) -> Weight:
        _check_index(self, j)
        return Weight(self.cartan[j - 1])

    def fundamental(self, i: int, scale=1) -> Weight:
        return Weight.fundamental(self.rank, i, scale)

    def zero(self) -> Weight:
        return Weight.zero(self.rank)

    def to_simple_root_coords(self, lam: Weight) -> tuple[Fraction, ...]:
        """Coordinates of ``lam`` in the simple-root basis."""
        inv = self.inverse_cartan
        return tuple(sum(inv[i][j] * lam[j] for j in range(self.rank)) for i in range(self.rank))


def _check_index(sys: RootSystemData, j: int) -> None:
    if not 1 <= j <= sys.rank:
        raise RootSystemError(f"simple reflection index {j} out of range 1..{sys.rank}")


def _det(m: Sequence[Sequence[int]]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= f * a[col][c]
    return det


def _inverse(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


# ---------------------------------------------------------------------------
# Cartan data (Bourbaki numbering)


def _from_edges(n: int, edges: Iterable[tuple[int, int]]) -> tuple[tuple[int, ...], ...]:
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        c[i - 1][j - 1] = c[j - 1][i - 1] = -1
    return tuple(tuple(r) for r in c)


def cartan_matrix(type_label: str) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix for ``A<n>``, ``D<n>``, ``E6``, ``E7``, ``E8``."""
    family, n = type_label[0].upper(), int(type_label[1:])
    if family == "A" and n >= 0:
        return _from_edges(n, [(i, i + 1) for i in range(1, n)])
    if family == "D" and n >= 4:
        return _from_edges(n, [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)])
    if family == "E" and n in (6, 7, 8):
        # 1-3-4-5-6(-7-8) with 2 attached to 4
        return _from_edges(n, [(1, 3), (3, 4), (2, 4)] + [(i, i + 1) for i in range(4, n)])
    raise RootSystemError(f"unsupported Cartan type {type_label!r}")


@lru_cache(maxsize=None)
def root_system(type_label: str) -> RootSystemData:
    return RootSystemData(type_label.upper(), cartan_matrix(type_label))


# ---------------------------------------------------------------------------
# Operations


def simple_reflection(sys: RootSystemData, j: int, lam: Weight) -> Weight:
    """``s_j(lam) = lam - lam_j * alpha_j`` with ``alpha_j`` = row j of the Cartan matrix."""
    _check_index(sys, j)
    c = lam[j - 1]
    if c == 0:
        return lam
    row = sys.cartan[j - 1]
    return Weight(x - c * a for x, a in zip(lam.coeffs, row))


def inner_product(sys: RootSystemData, lam: Weight, mu: Weight) -> Fraction:
    inv = sys.inverse_cartan
    n = sys.rank
    return sum((lam[i] * inv[i][j] * mu[j] for i in range(n) for j in range(n)), Fraction(0))


@lru_cache(maxsize=None)
def _positive_roots_simple(sys: RootSystemData) -> tuple[tuple[int, ...], ...]:
    """Positive roots in simple-root coordinates, sorted by height then lexicographically."""
    n = sys.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for j in range(n):
                # <beta, alpha_j> in simple coordinates: sum_i beta_i * C[i][j]
                pairing = sum(beta[i] * sys.cartan[i][j] for i in range(n))
                if pairing >= 0:
                    continue
                gamma = tuple(b - pairing * int(i == j) for i, b in enumerate(beta))
                if gamma not in found:
                    found.add(gamma)
                    nxt.append(gamma)
                    if len(found) > MAX_POSITIVE_ROOTS:
                        raise RootSystemError("positive-root closure did not terminate; bad Cartan data")
        frontier = nxt
    return tuple(sorted(found, key=lambda b: (sum(b), b)))


def positive_roots(sys: RootSystemData) -> tuple[Weight, ...]:
    """All positive roots, in fundamental-weight coordinates."""
    out = []
    for beta in _positive_roots_simple(sys):
        out.append(Weight(sum(beta[i] * sys.cartan[i][j] for i in range(sys.rank)) for j in range(sys.rank)))
    return tuple(out)


def positive_roots_simple_coords(sys: RootSystemData) -> tuple[tuple[int, ...], ...]:
    return _positive_roots_simple(sys)


def pairing_with_root(sys: RootSystemData, lam: Weight, beta_simple: Sequence[int]) -> Fraction:
    """``<lam, beta>`` for a root given in simple-root coordinates (roots have length 2)."""
    return sum((lam[i] * b for i, b in enumerate(beta_simple)), Fraction(0))


@lru_cache(maxsize=None)
def weyl_group_order(sys: RootSystemData) -> int:
    """Order of W, as the size of the orbit of the regular weight rho."""
    n = sys.rank
    start = (1,) * n
    seen = {start}
    frontier = [start]
    cartan = sys.cartan
    while frontier:
        nxt = []
        for lam in frontier:
            for j in range(n):
                c = lam[j]
                row = cartan[j]
                mu = tuple(x - c * a for x, a in zip(lam, row))
                if mu not in seen:
                    seen.add(mu)
                    nxt.append(mu)
        frontier = nxt
    return len(seen)


def weyl_dim(sys: RootSystemData, lam: Weight) -> int:
    """Dimension of the irreducible module with highest weight ``lam``."""
    if not lam.is_integral():
        raise RootSystemError(f"weyl_dim needs an integral weight, got {lam!r}")
    if not lam.is_dominant():
        raise RootSystemError(f"weyl_dim needs a dominant weight, got {lam!r}")
    num = Fraction(1)
    for beta in _positive_roots_simple(sys):
        num *= Fraction(sum((lam[i] + 1) * b for i, b in enumerate(beta)), sum(beta))
    if num.denominator != 1:
        raise RootSystemError(f"Weyl dimension formula did not produce an integer: {num}")
    return int(num)


def reflect_to_dominant(
    sys: RootSystemData,
    lam: Weight,
    indices: Iterable[int] | None = None,
    max_steps: int | None = None,
) -> tuple[Weight, tuple[int, ...]]:
    """Apply simple reflections (restricted to ``indices``) until the weight is
    dominant on those indices.  Returns the result and the reflection word.

    Reflecting at a negative coordinate always lowers the distance to the
    dominant chamber by one, so the word is reduced and its length is bounded
    by the number of positive roots of the sub-system.
    """
    idx = sorted(range(1, sys.rank + 1) if indices is None else indices)
    if max_steps is None:
        max_steps = len(_positive_roots_simple(sys))
    word = []
    while True:
        neg = next((j for j in idx if lam[j - 1] < 0), None)
        if neg is None:
            return lam, tuple(word)
        if len(word) >= max_steps:
            raise RootSystemError(f"dominance descent exceeded {max_steps} reflections")
        lam = simple_reflection(sys, neg, lam)
        word.append(neg)


def apply_word(sys: RootSystemData, word: Sequence[int], lam: Weight) -> Weight:
    """Apply the reflections of ``word`` to ``lam``, first letter first."""
    for j in word:
        lam = simple_reflection(sys, j, lam)
    return lam


def longest_element_word(sys: RootSystemData, indices: Iterable[int] | None = None) -> tuple[int, ...]:
    """A reduced word for the longest element of the (parabolic) subgroup
    generated by ``indices``: the word that carries ``-rho`` to dominance."""
    return reflect_to_dominant(sys, -sys.rho, indices)[1]


def minus_w0(sys: RootSystemData, lam: Weight) -> Weight:
    """``-w_0(lam)``; on dominant weights this is the highest weight of the dual."""
    return -apply_word(sys, longest_element_word(sys), lam)
