"""Text forms for weights, bundles and graded G-modules.

Weights are written either as a bracketed coordinate vector ``[1,-4,0,0,0,1]``
or symbolically ``w1+w6-4w2``; both parse to the same ``Weight`` and
``format_weight`` is the canonical printer for the symbolic form.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .borel_weil_bott import CohomologyResult, GradedVector
from .levi import ParabolicData
from .root_system import Weight


class NotationError(ValueError):
    pass


_TERM = re.compile(r"\s*([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*w(\d+)\s*")
_REF = re.compile(r"^\s*(?P<base>S\^\{[^}]*\}|S\^[^()\s]+|O|\[[^\]]*\]|[A-Za-z_][A-Za-z0-9_~]*)\s*(?:\(\s*(?P<twist>[+-]?\d+)\s*\))?\s*$")


def parse_weight(text: str, rank: int = 6) -> Weight:
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise NotationError(f"unterminated weight vector {text!r}")
        body = text[1:-1].strip()
        try:
            coeffs = [Fraction(x.strip()) for x in body.split(",")] if body else []
        except ValueError as exc:
            raise NotationError(f"bad weight vector {text!r}") from exc
        if len(coeffs) != rank:
            raise NotationError(f"weight vector {text!r} must have {rank} entries")
        return Weight(coeffs)
    if text in ("0", ""):
        if text == "":
            raise NotationError("empty weight literal")
        return Weight.zero(rank)
    coeffs = [Fraction(0)] * rank
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise NotationError(f"cannot parse weight literal {text!r} at position {pos}")
        sign, num, idx = m.groups()
        if not sign and not first:
            raise NotationError(f"missing operator in weight literal {text!r}")
        i = int(idx)
        if not 1 <= i <= rank:
            raise NotationError(f"fundamental weight w{i} out of range 1..{rank}")
        value = Fraction(num) if num else Fraction(1)
        coeffs[i - 1] += -value if sign == "-" else value
        pos = m.end()
        first = False
    return Weight(coeffs)


def _term(c: Fraction, name: str) -> str:
    if c == 1:
        return name
    if c == -1:
        return "-" + name
    return f"{c}{name}"


def format_weight(w: Weight) -> str:
    parts = []
    for i, c in enumerate(w.coeffs, start=1):
        if c:
            t = _term(c, f"w{i}")
            parts.append(t if not parts or t.startswith("-") else "+" + t)
    return "".join(parts) or "0"


def format_vector(w: Weight) -> str:
    return "[" + ",".join(str(c) for c in w.coeffs) + "]"


def weight_to_json(w: Weight) -> list:
    return [int(c) if c.denominator == 1 else str(c) for c in w.coeffs]


def weight_from_json(data, rank: int = 6) -> Weight:
    if isinstance(data, str):
        return parse_weight(data, rank)
    if len(data) != rank:
        raise NotationError(f"weight {data!r} must have {rank} entries")
    return Weight(Fraction(x) for x in data)


def format_bundle(parab: ParabolicData, w: Weight) -> str:
    """``S^{w1+w6}(-1)``, ``O(3)``, ``O``: Levi part plus twist at the marked vertex."""
    k = parab.k
    twist = w[k - 1]
    levi = Weight(c if i != k else 0 for i, c in enumerate(w.coeffs, start=1))
    base = "O" if not any(levi.coeffs) else "S^{" + format_weight(levi) + "}"
    return base if twist == 0 else f"{base}({twist})"


def format_module(w: Weight) -> str:
    return "C" if not any(w.coeffs) else "V^{" + format_weight(w) + "}"


def format_graded(gv: GradedVector) -> str:
    if not gv:
        return "0"
    out = []
    for d, w, m in gv.entries:
        s = f"{format_module(w)}[{-d}]"
        out.append(s if m == 1 else f"{m}*{s}")
    return " + ".join(out)


def graded_to_json(gv: GradedVector) -> list:
    return [[d, weight_to_json(w), m] for d, w, m in gv.entries]


def graded_from_json(data, rank: int = 6) -> GradedVector:
    return GradedVector((int(d), weight_from_json(w, rank), int(m)) for d, w, m in data)


def format_word(word) -> str:
    return " ".join(f"s{j}" for j in word)


def format_cohomology(res: CohomologyResult) -> str:
    if res.acyclic:
        path = f" after {format_word(res.word)}" if res.word else ""
        return f"Acyclic (singular at vertex {res.singular_vertex}{path})"
    s = f"{format_module(res.weight)}[{-res.degree}]"
    return s if not res.word else f"{s} (w = {format_word(res.word)})"


def split_bundle_ref(text: str) -> tuple[str, int]:
    """Split ``'S^{w1}(-2)'`` into ``('S^{w1}', -2)``."""
    m = _REF.match(text)
    if not m:
        raise NotationError(f"cannot parse bundle reference {text!r}")
    return m.group("base"), int(m.group("twist") or 0)


def parse_irreducible_base(base: str, parab: ParabolicData) -> Weight | None:
    """Weight of an irreducible base (``O``, ``S^{...}``, ``[...]``); None for a name."""
    if base == "O":
        return parab.ambient.zero()
    if base.startswith("S^"):
        inner = base[2:]
        if inner.startswith("{"):
            inner = inner[1:-1]
        return parse_weight(inner, parab.rank)
    if base.startswith("["):
        return parse_weight(base, parab.rank)
    return None
