"""Parabolic data for a maximal parabolic P_k of a simply-laced group G.

An irreducible P-module is described by a weight ``mu`` of G that is dominant
at every vertex except ``k`` ("Levi-dominant").  Restricting it to the derived
Levi subgroup forgets coordinate ``k``; the centre sees it through the
rational charge ``<mu, w_k> / <w_k, w_k>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .root_system import (
    RootSystemData,
    RootSystemError,
    Weight,
    apply_word,
    longest_element_word,
    positive_roots_simple_coords,
    reflect_to_dominant,
    root_system,
    weyl_dim,
)


class ParabolicError(ValueError):
    pass


def _levi_label(ambient: RootSystemData, k: int, cartan) -> str:
    # Only the connected A_n case gets a clean label; anything else is tagged generically.
    n = len(cartan)
    if n == 0:
        return "A0"
    if all(cartan[i][i + 1] == -1 for i in range(n - 1)) and sum(
        1 for i in range(n) for j in range(n) if cartan[i][j] == -1
    ) == 2 * (n - 1):
        return f"A{n}"
    return f"{ambient.type_label}/{k}-levi"


@dataclass(frozen=True)
class ParabolicData:
    ambient: RootSystemData
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.ambient.rank:
            raise ParabolicError(f"marked vertex {self.k} out of range")

    @cached_property
    def levi_indices(self) -> tuple[int, ...]:
        """Ambient vertices kept by the Levi, in increasing order; position
        ``j`` (1-based) of this tuple is Levi vertex ``j``."""
        return tuple(i for i in range(1, self.ambient.rank + 1) if i != self.k)

    @cached_property
    def vertex_map(self) -> dict[int, int]:
        return {i: j + 1 for j, i in enumerate(self.levi_indices)}

    @cached_property
    def levi(self) -> RootSystemData:
        idx = [i - 1 for i in self.levi_indices]
        cartan = tuple(tuple(self.ambient.cartan[a][b] for b in idx) for a in idx)
        return RootSystemData(_levi_label(self.ambient, self.k, cartan), cartan)

    @property
    def rank(self) -> int:
        return self.ambient.rank

    @property
    def dimension(self) -> int:
        """Dimension of G/P: positive roots of G not in the Levi."""
        return len(positive_roots_simple_coords(self.ambient)) - len(positive_roots_simple_coords(self.levi))

    def weight(self, levi_part=None, twist=0) -> Weight:
        """Ambient weight with given Levi coordinates and coordinate ``k`` = twist."""
        levi_part = list(levi_part) if levi_part is not None else [0] * (self.rank - 1)
        c = [Fraction(0)] * self.rank
        for i, j in self.vertex_map.items():
            c[i - 1] = Fraction(levi_part[j - 1])
        c[self.k - 1] = Fraction(twist)
        return Weight(c)

    def line_bundle(self, i: int) -> Weight:
        return self.ambient.fundamental(self.k, i)

    def is_levi_dominant(self, mu: Weight) -> bool:
        return all(mu[i - 1] >= 0 for i in self.levi_indices)

    def check_levi_dominant(self, mu: Weight) -> None:
        if len(mu) != self.rank:
            raise ParabolicError(f"weight {mu!r} has wrong rank for {self.ambient.type_label}")
        if not self.is_levi_dominant(mu):
            raise ParabolicError(f"weight {mu!r} is not Levi-dominant (negative at a vertex other than {self.k})")


@lru_cache(maxsize=None)
def parabolic(type_label: str = "E6", k: int = 2) -> ParabolicData:
    return ParabolicData(root_system(type_label), k)


def restrict_levi(parab: ParabolicData, mu: Weight) -> tuple[Weight, Fraction]:
    """(Levi weight, central charge) of ``mu``."""
    levi_weight = Weight(mu[i - 1] for i in parab.levi_indices)
    inv = parab.ambient.inverse_cartan
    k = parab.k - 1
    # <mu, w_k> / <w_k, w_k>; normalization cancels in the ratio
    charge = sum((mu[j] * inv[j][k] for j in range(parab.rank)), Fraction(0)) / inv[k][k]
    return levi_weight, charge


def central_charge(parab: ParabolicData, mu: Weight) -> Fraction:
    return restrict_levi(parab, mu)[1]


def lift(parab: ParabolicData, sigma: Weight) -> Weight:
    """Levi weight -> ambient weight with coordinate ``k`` set to zero."""
    if len(sigma) != parab.rank - 1:
        raise ParabolicError("Levi weight has wrong rank")
    return parab.weight(sigma, 0)


def _levi_descent(parab: ParabolicData, lam: Weight) -> Weight:
    return reflect_to_dominant(
        parab.ambient,
        lam,
        parab.levi_indices,
        max_steps=len(positive_roots_simple_coords(parab.levi)),
    )[0]


def dual_weight(parab: ParabolicData, mu: Weight) -> Weight:
    """Highest weight of the dual P-module, ``-w_0^L mu``."""
    parab.check_levi_dominant(mu)
    try:
        return _levi_descent(parab, -mu)
    except RootSystemError as exc:
        raise ParabolicError(str(exc)) from exc


def canonical_index(parab: ParabolicData) -> int:
    """The index r with K_{G/P} = O(-r)."""
    g = parab.ambient
    w0_rho = apply_word(g, longest_element_word(g), g.rho)
    w0l_w0_rho = apply_word(g, longest_element_word(g, parab.levi_indices), w0_rho)
    diff = g.rho - w0l_w0_rho
    # <diff, alpha_k> / <w_k, alpha_k>; both pairings read coordinate k (the second is 1)
    r = diff[parab.k - 1] / g.fundamental(parab.k)[parab.k - 1]
    if r.denominator != 1:
        raise ParabolicError(f"canonical index is not an integer: {r}")
    return int(r)


def rank_of_bundle(parab: ParabolicData, mu: Weight) -> int:
    parab.check_levi_dominant(mu)
    levi_weight, _ = restrict_levi(parab, mu)
    return weyl_dim(parab.levi, levi_weight)
