"""Cohomology of irreducible equivariant bundles on G/P via Borel-Weil-Bott.

The engine shifts the weight by rho and reflects at negative coordinates
until it either hits a wall (some coordinate 0, so every cohomology group
vanishes) or lands in the open dominant chamber.  In the second case the
number of reflections is the length of the Weyl element and the shifted-back
weight is the highest weight of the only nonzero cohomology group.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .levi import ParabolicData, ParabolicError
from .root_system import Weight, positive_roots_simple_coords, simple_reflection, weyl_dim

CACHE_ENV = "BWBVERIFY_CACHE_DIR"
CACHE_FILE = "bwb_cache.txt"


class BWBError(ValueError):
    pass


@dataclass(frozen=True)
class CohomologyResult:
    degree: int | None
    weight: Weight | None
    word: tuple[int, ...] = ()
    singular_vertex: int | None = None

    @classmethod
    def acyclic_at(cls, vertex: int, word: Sequence[int]) -> CohomologyResult:
        return cls(None, None, tuple(word), vertex)

    @classmethod
    def concentrated(cls, degree: int, weight: Weight, word: Sequence[int] = ()) -> CohomologyResult:
        return cls(degree, weight, tuple(word), None)

    @property
    def acyclic(self) -> bool:
        return self.degree is None

    def same_cohomology(self, other: CohomologyResult) -> bool:
        """Equality of the cohomology itself, ignoring the path that found it."""
        return self.degree == other.degree and self.weight == other.weight


class GradedVector:
    """A finite direct sum of shifted irreducible G-modules ``V^lam[-d]``,
    stored as ``{(degree, weight): multiplicity}``."""

    __slots__ = ("_data",)

    def __init__(self, entries: Iterable[tuple[int, Weight, int]] = ()):
        data: dict[tuple[int, Weight], int] = {}
        for degree, weight, mult in entries:
            if mult < 0:
                raise BWBError("negative multiplicity in graded vector")
            if mult:
                key = (int(degree), weight)
                data[key] = data.get(key, 0) + int(mult)
        self._data = data

    @property
    def entries(self) -> tuple[tuple[int, Weight, int], ...]:
        return tuple((d, w, m) for (d, w), m in sorted(self._data.items(), key=lambda kv: (kv[0][0], kv[0][1].coeffs)))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self._data)

    def __bool__(self) -> bool:
        return bool(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedVector):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self.entries)

    def __add__(self, other: GradedVector) -> GradedVector:
        return GradedVector(list(self.entries) + list(other.entries))

    def __repr__(self) -> str:
        return "GradedVector(" + ", ".join(f"({d}, {w!r}, {m})" for d, w, m in self.entries) + ")"

    def scaled(self, k: int) -> GradedVector:
        return GradedVector((d, w, m * k) for d, w, m in self.entries)

    def degrees(self) -> set[int]:
        return {d for d, _ in self._data}

    def degree_part(self, degree: int) -> GradedVector:
        return GradedVector((d, w, m) for d, w, m in self.entries if d == degree)

    def dimension(self, sys) -> int:
        return sum(m * weyl_dim(sys, w) for _, w, m in self.entries)

    def map(self, degree_fn: Callable[[int], int], weight_fn: Callable[[Weight], Weight]) -> GradedVector:
        return GradedVector((degree_fn(d), weight_fn(w), m) for d, w, m in self.entries)


# ---------------------------------------------------------------------------
# memo table: (type, k, coeffs) -> CohomologyResult.  Every writer computes
# the same value for a key, so a plain dict behind a lock is enough.

_memo: dict[tuple, CohomologyResult] = {}
_memo_lock = threading.Lock()


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def _key(parab: ParabolicData, mu: Weight) -> tuple:
    return (parab.ambient.type_label, parab.k, mu.coeffs)


Strategy = Callable[[Sequence[int]], int]


def lowest_index(candidates: Sequence[int]) -> int:
    return candidates[0]


def bwb_cohomology(parab: ParabolicData, mu: Weight, strategy: Strategy | None = None) -> CohomologyResult:
    """Cohomology of the bundle ``S^mu`` on G/P.

    ``strategy`` picks which negative coordinate to reflect at; it defaults to
    the lowest index and only the default is memoized.
    """
    if len(mu) != parab.rank:
        raise BWBError(f"weight {mu!r} has wrong rank")
    if not mu.is_integral():
        raise BWBError(f"weight {mu!r} is not integral")
    try:
        parab.check_levi_dominant(mu)
    except ParabolicError as exc:
        raise BWBError(str(exc)) from exc

    if strategy is None:
        key = _key(parab, mu)
        hit = _memo.get(key)
        if hit is not None:
            return hit
        result = _descend(parab, mu, lowest_index)
        with _memo_lock:
            _memo.setdefault(key, result)
        return result
    return _descend(parab, mu, strategy)


def _descend(parab: ParabolicData, mu: Weight, strategy: Strategy) -> CohomologyResult:
    g = parab.ambient
    bound = len(positive_roots_simple_coords(g))
    lam = mu + g.rho
    word: list[int] = []
    while True:
        zero = next((i + 1 for i, c in enumerate(lam) if c == 0), None)
        if zero is not None:
            return CohomologyResult.acyclic_at(zero, word)
        negative = [i + 1 for i, c in enumerate(lam) if c < 0]
        if not negative:
            return CohomologyResult.concentrated(len(word), lam - g.rho, word)
        if len(word) >= bound:
            raise AssertionError(f"BWB descent for {mu!r} exceeded {bound} reflections")
        j = strategy(negative)
        if j not in negative:
            raise BWBError(f"strategy chose vertex {j}, which is not negative")
        lam = simple_reflection(g, j, lam)
        word.append(j)


def is_acyclic(parab: ParabolicData, mu: Weight) -> bool:
    return bwb_cohomology(parab, mu).acyclic


def cohomology_of_sum(parab: ParabolicData, summands: Iterable[tuple[Weight, int]]) -> GradedVector:
    entries = []
    for mu, mult in summands:
        res = bwb_cohomology(parab, mu)
        if not res.acyclic:
            entries.append((res.degree, res.weight, mult))
    return GradedVector(entries)


def descent_shift_acyclic(parab: ParabolicData, mu: Weight, m: int) -> bool:
    """Acyclicity of ``S^mu(-m)`` for ``mu`` strictly positive on every Levi
    vertex with coordinate ``m`` at the vertex adjacent to the marked one.

    The adjacent vertex is 4 for E6/P2.  Returns the computed answer; callers
    compare it with whatever they expect.
    """
    if m <= 0:
        raise BWBError("m must be positive")
    if mu[parab.k - 1] != 0 or not all(mu[i - 1] > 0 for i in parab.levi_indices):
        raise BWBError("mu must vanish at the marked vertex and be positive elsewhere")
    neighbours = [i for i in parab.levi_indices if parab.ambient.cartan[parab.k - 1][i - 1] == -1]
    if len(neighbours) != 1 or mu[neighbours[0] - 1] != m:
        raise BWBError(f"the coordinate at the vertex adjacent to {parab.k} must equal m={m}")
    return is_acyclic(parab, mu - parab.line_bundle(m))


# ---------------------------------------------------------------------------
# optional persistence, one line per entry:
#   <type> <k> <c1,...,cn> A <vertex> <word>
#   <type> <k> <c1,...,cn> C <degree> <l1,...,ln> <word>


def _fmt_coeffs(coeffs) -> str:
    return ",".join(str(c) for c in coeffs)


def _parse_coeffs(text: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in text.split(",")) if text else ()


def _fmt_word(word) -> str:
    return ",".join(str(j) for j in word) or "-"


def _parse_word(text: str) -> tuple[int, ...]:
    return () if text == "-" else tuple(int(x) for x in text.split(","))


def save_cache(directory: str | os.PathLike) -> Path:
    path = Path(directory) / CACHE_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    with _memo_lock:
        items = sorted(_memo.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))
    lines = []
    for (label, k, coeffs), res in items:
        head = f"{label} {k} {_fmt_coeffs(coeffs)}"
        if res.acyclic:
            lines.append(f"{head} A {res.singular_vertex} {_fmt_word(res.word)}")
        else:
            lines.append(f"{head} C {res.degree} {_fmt_coeffs(res.weight.coeffs)} {_fmt_word(res.word)}")
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return path


def load_cache(directory: str | os.PathLike) -> int:
    path = Path(directory) / CACHE_FILE
    if not path.exists():
        return 0
    loaded = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if not parts:
            continue
        label, k, coeffs, tag = parts[0], int(parts[1]), _parse_coeffs(parts[2]), parts[3]
        if tag == "A":
            res = CohomologyResult.acyclic_at(int(parts[4]), _parse_word(parts[5]))
        elif tag == "C":
            res = CohomologyResult.concentrated(int(parts[4]), Weight(_parse_coeffs(parts[5])), _parse_word(parts[6]))
        else:
            raise BWBError(f"malformed cache line: {line!r}")
        loaded[(label, k, coeffs)] = res
    with _memo_lock:
        for key, res in loaded.items():
            _memo.setdefault(key, res)
    return len(loaded)
