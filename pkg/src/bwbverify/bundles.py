"""Equivariant bundles on G/P as formal sums of irreducibles, with Ext.

A ``BundleExpr`` is a ``Decomposition`` whose weights are Levi-dominant: the
direct sum of the bundles ``S^mu`` with multiplicity.  Filtered bundles are
kept as their ordered graded pieces; Ext between them is bounded above by
Ext between semi-simplifications, and that bound is exact whenever no
G-module occurs in two adjacent degrees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Union

from .borel_weil_bott import GradedVector, bwb_cohomology, cohomology_of_sum
from .levi import ParabolicData, dual_weight, rank_of_bundle
from .notation import format_bundle, parse_irreducible_base, split_bundle_ref
from .root_system import Weight, minus_w0, positive_roots_simple_coords
from .tensor import Decomposition, tensor_bundles

BundleExpr = Decomposition


class BundleError(ValueError):
    pass


def expr(parab: ParabolicData, items: Iterable[tuple[Weight, int]]) -> BundleExpr:
    e = Decomposition(items)
    for w, _ in e:
        parab.check_levi_dominant(w)
        if not w.is_integral():
            raise BundleError(f"{w!r} is not integral")
    return e


def irreducible(w: Weight) -> BundleExpr:
    return Decomposition.single(w)


def dualize(parab: ParabolicData, e: BundleExpr) -> BundleExpr:
    return e.map(lambda w: dual_weight(parab, w))


def twist(parab: ParabolicData, e: BundleExpr, i: int) -> BundleExpr:
    shift = parab.line_bundle(i)
    return e.map(lambda w: w + shift)


def rank(parab: ParabolicData, e: BundleExpr) -> int:
    return sum(m * rank_of_bundle(parab, w) for w, m in e)


# ---------------------------------------------------------------------------
# filtered bundles


@dataclass(frozen=True)
class FilteredBundle:
    """Graded pieces in sub-to-quotient order.

    ``name`` is the base name of a named bundle (None for an irreducible or a
    derived object) and ``shift`` the twist applied to it; both are only used
    for display and for matching reduction rules.
    """

    pieces: tuple[BundleExpr, ...]
    name: str | None = None
    shift: int = 0
    label: str = field(default="", compare=False)

    def semisimplify(self) -> BundleExpr:
        out = Decomposition()
        for p in self.pieces:
            out = out + p
        return out

    @property
    def is_irreducible(self) -> bool:
        ss = self.semisimplify()
        return len(self.pieces) == 1 and ss.total() == 1

    def twisted(self, parab: ParabolicData, i: int) -> FilteredBundle:
        pieces = tuple(twist(parab, p, i) for p in self.pieces)
        if self.name is not None:
            return FilteredBundle(pieces, self.name, self.shift + i, _named_label(self.name, self.shift + i))
        if self.is_irreducible:
            return FilteredBundle(pieces, None, 0, format_bundle(parab, pieces[0].weights()[0]))
        return FilteredBundle(pieces, None, 0, f"{self.label}({i})" if self.label else "")

    def dual(self, parab: ParabolicData) -> FilteredBundle:
        pieces = tuple(dualize(parab, p) for p in reversed(self.pieces))
        label = format_bundle(parab, pieces[0].weights()[0]) if self.is_irreducible else f"dual({self.label})"
        return FilteredBundle(pieces, None, 0, label)

    def __str__(self) -> str:
        return self.label or "<bundle>"


Bundle = Union[FilteredBundle, BundleExpr]


def _named_label(name: str, shift: int) -> str:
    return name if shift == 0 else f"{name}({shift})"


def as_filtered(parab: ParabolicData, b: Bundle) -> FilteredBundle:
    if isinstance(b, FilteredBundle):
        return b
    if b.total() == 1:
        return FilteredBundle((b,), None, 0, format_bundle(parab, b.weights()[0]))
    return FilteredBundle((b,), None, 0, " + ".join(format_bundle(parab, w) for w, _ in b))


def semisimplify(b: Bundle) -> BundleExpr:
    return b.semisimplify() if isinstance(b, FilteredBundle) else b


# ---------------------------------------------------------------------------
# named bundles (fixture data)

ALIASES = {"T~": "Ttilde", "E~": "Etilde", "F~": "Ftilde", "TX": "T_X"}


@dataclass(frozen=True)
class NamedBundle:
    name: str
    pieces: tuple[tuple[str, ...], ...]
    sub: str | None = None
    quot: str | None = None


@lru_cache(maxsize=None)
def named_bundles() -> dict[str, NamedBundle]:
    text = resources.files("bwbverify").joinpath("data/bundles.json").read_text(encoding="utf-8")
    data = json.loads(text)
    out = {}
    for entry in data["bundles"]:
        ext = entry.get("extension") or {}
        out[entry["name"]] = NamedBundle(
            entry["name"],
            tuple(tuple(piece) for piece in entry["pieces"]),
            ext.get("sub"),
            ext.get("quot"),
        )
    return out


def canonical_name(name: str) -> str:
    return ALIASES.get(name, name)


def resolve(parab: ParabolicData, ref: str) -> FilteredBundle:
    """Parse a bundle reference such as ``O(1)``, ``S^{w1+w6}(-1)``,
    ``[1,-4,0,0,0,1]`` or ``Ttilde(-1)``."""
    return _resolve(parab, ref.strip())


@lru_cache(maxsize=4096)
def _resolve(parab: ParabolicData, ref: str) -> FilteredBundle:
    base, shift = split_bundle_ref(ref)
    w = parse_irreducible_base(base, parab)
    if w is not None:
        w = w + parab.line_bundle(shift)
        try:
            parab.check_levi_dominant(w)
        except ValueError as exc:
            raise BundleError(str(exc)) from exc
        if not w.is_integral():
            raise BundleError(f"{ref!r} is not integral")
        return FilteredBundle((irreducible(w),), None, 0, format_bundle(parab, w))
    name = canonical_name(base)
    table = named_bundles()
    if name not in table:
        raise BundleError(f"unknown bundle {base!r}")
    pieces = []
    for piece in table[name].pieces:
        e = Decomposition()
        for item in piece:
            e = e + semisimplify(_resolve(parab, item))
        pieces.append(twist(parab, e, shift))
    return FilteredBundle(tuple(pieces), name, shift, _named_label(name, shift))


def extension_parts(parab: ParabolicData, b: FilteredBundle) -> tuple[FilteredBundle, FilteredBundle] | None:
    """(sub, quot) of a named bundle declared as an extension, twisted along."""
    if b.name is None:
        return None
    entry = named_bundles()[b.name]
    if entry.sub is None or entry.quot is None:
        return None
    return (
        resolve(parab, entry.sub).twisted(parab, b.shift),
        resolve(parab, entry.quot).twisted(parab, b.shift),
    )


# ---------------------------------------------------------------------------
# Ext


@lru_cache(maxsize=1 << 16)
def _ext_irreducible(parab: ParabolicData, a: Weight, b: Weight) -> GradedVector:
    return cohomology_of_sum(parab, tensor_bundles(parab, dual_weight(parab, a), b))


def ext_groups(parab: ParabolicData, a: Bundle, b: Bundle) -> GradedVector:
    """Ext between the semi-simplifications of ``a`` and ``b``."""
    out = GradedVector()
    for wa, ma in semisimplify(a):
        for wb, mb in semisimplify(b):
            out = out + _ext_irreducible(parab, wa, wb).scaled(ma * mb)
    return out


def ext_witness(parab: ParabolicData, a: Bundle, b: Bundle) -> list[dict]:
    """Every irreducible summand of ``a^v (x) b`` with its cohomology."""
    rows = []
    for wa, _ in semisimplify(a):
        da = dual_weight(parab, wa)
        for wb, _ in semisimplify(b):
            for s, m in tensor_bundles(parab, da, wb):
                res = bwb_cohomology(parab, s)
                rows.append({"bundle": format_bundle(parab, s), "weight": s, "mult": m, "result": res})
    return rows


def has_adjacent_collision(gv: GradedVector) -> bool:
    seen = {(d, w) for d, w, _ in gv.entries}
    return any((d + 1, w) in seen for d, w in seen)


def filtered_ext_exact(parab: ParabolicData, a: Bundle, b: Bundle) -> GradedVector | None:
    """Exact Ext for filtered inputs, or None when it is not determined.

    The filtrations give a spectral sequence from Ext of the graded pieces,
    with G-equivariant differentials of degree +1.  If no irreducible G-module
    sits in two adjacent degrees every differential vanishes and the bound is
    the answer.
    """
    gv = ext_groups(parab, a, b)
    if isinstance(a, FilteredBundle) and len(a.pieces) > 1 or isinstance(b, FilteredBundle) and len(b.pieces) > 1:
        if has_adjacent_collision(gv):
            return None
    return gv


def ext_vanishes_filtered(parab: ParabolicData, a: Bundle, b: Bundle) -> str:
    return "Proven" if not ext_groups(parab, a, b) else "Unknown"


def c0(parab: ParabolicData) -> GradedVector:
    """``C[0]``: the Ext pattern of an exceptional object."""
    return GradedVector([(0, parab.ambient.zero(), 1)])


def c_shift(parab: ParabolicData, d: int) -> GradedVector:
    return GradedVector([(d, parab.ambient.zero(), 1)])


# ---------------------------------------------------------------------------
# extension criterion


@dataclass(frozen=True)
class ExtensionOutcome:
    kind: str  # "Exceptional" | "NoNontrivialExtension" | "Inconclusive"
    report: dict = field(default_factory=dict, compare=False)

    @property
    def extension_unique(self) -> bool:
        """Ext(quot, sub) is exactly C[-1]: one nontrivial extension up to scale."""
        qs = self.report.get("Ext(quot,sub)")
        return qs is not None and len(qs) == 1 and qs.entries[0][0] == 1 and not any(qs.entries[0][1]) and qs.entries[0][2] == 1


def check_extension_exceptional(parab: ParabolicData, sub: Bundle, quot: Bundle) -> ExtensionOutcome:
    """Decide whether the unique nontrivial extension of ``quot`` by ``sub``
    exists and is exceptional, from the four Ext groups between them."""
    report = {
        "Ext(sub,sub)": filtered_ext_exact(parab, sub, sub),
        "Ext(quot,quot)": filtered_ext_exact(parab, quot, quot),
        "Ext(sub,quot)": filtered_ext_exact(parab, sub, quot),
        "Ext(quot,sub)": filtered_ext_exact(parab, quot, sub),
    }
    qs = report["Ext(quot,sub)"]
    if qs is not None and not qs.degree_part(1):
        return ExtensionOutcome("NoNontrivialExtension", report)
    if qs is None or qs != c_shift(parab, 1):
        return ExtensionOutcome("Inconclusive", report)
    one = c0(parab)
    if report["Ext(sub,sub)"] == one and report["Ext(quot,quot)"] == one and report["Ext(sub,quot)"] == GradedVector():
        return ExtensionOutcome("Exceptional", report)
    return ExtensionOutcome("Inconclusive", report)


# ---------------------------------------------------------------------------
# tangent bundle data


@dataclass(frozen=True)
class NilradicalGrading:
    """Degree c -> (positive roots with coefficient c at the marked simple
    root, Levi-dominant weights among them)."""

    degrees: dict[int, tuple[tuple[int, ...], ...]]
    dominant: dict[int, tuple[Weight, ...]]

    @property
    def total(self) -> int:
        return sum(len(v) for v in self.degrees.values())

    def counts(self) -> dict[int, int]:
        return {c: len(v) for c, v in sorted(self.degrees.items())}


def nilradical_grading(parab: ParabolicData) -> NilradicalGrading:
    g = parab.ambient
    k = parab.k - 1
    degrees: dict[int, list[tuple[int, ...]]] = {}
    for beta in positive_roots_simple_coords(g):
        if beta[k] >= 1:
            degrees.setdefault(beta[k], []).append(beta)
    dominant: dict[int, list[Weight]] = {}
    for c, roots in degrees.items():
        for beta in roots:
            w = Weight(sum(beta[j] * g.cartan[j][i] for j in range(g.rank)) for i in range(g.rank))
            if parab.is_levi_dominant(w):
                dominant.setdefault(c, []).append(w)
    return NilradicalGrading(
        {c: tuple(v) for c, v in sorted(degrees.items())},
        {c: tuple(v) for c, v in sorted(dominant.items())},
    )


def tangent_pieces(parab: ParabolicData) -> tuple[BundleExpr, ...]:
    """Graded pieces of T_X = n^v in sub-to-quotient order.

    The layer of roots with coefficient c at the marked root is irreducible
    for the Levi, with highest weight the Levi-dominant root of that layer;
    higher layers are quotients.
    """
    grading = nilradical_grading(parab)
    return tuple(expr(parab, [(w, 1) for w in grading.dominant[c]]) for c in sorted(grading.dominant))


def global_sections(parab: ParabolicData, b: Bundle) -> GradedVector:
    """Degree-0 part of the cohomology of the semi-simplification."""
    return cohomology_of_sum(parab, semisimplify(b)).degree_part(0)


def complex_rank_check(parab: ParabolicData, pieces: Iterable[Weight] | None = None, cohomology: str = "S^{w1+w6}(-1)") -> bool:
    """Rank arithmetic of the complex ``T~(-1) -> H^0(T~) (x) O -> T~``.

    Checks H^0(T~) = V^{w_k} + C and that its dimension minus twice the rank
    of T~ is the rank of ``cohomology``.  ``pieces`` overrides the
    semi-simplification of T~ (negative controls).
    """
    if pieces is None:
        ss = resolve(parab, "Ttilde").semisimplify()
    else:
        ss = Decomposition((w, 1) for w in pieces)
    r = rank(parab, ss)
    h0 = global_sections(parab, ss)
    g = parab.ambient
    if h0 != GradedVector([(0, g.fundamental(parab.k), 1), (0, g.zero(), 1)]):
        return False
    middle = h0.dimension(g)
    return middle - 2 * r == rank(parab, semisimplify(resolve(parab, cohomology)))


def serre_dual(parab: ParabolicData, gv: GradedVector, dim: int) -> GradedVector:
    """``d -> dim - d`` together with the dual G-module."""
    return gv.map(lambda d: dim - d, lambda w: minus_w0(parab.ambient, w))
