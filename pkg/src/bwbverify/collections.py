"""Lefschetz collections as ledgers of kernel-decidable obligations.

A collection is given by a starting block and a support partition: block
``i`` is the first ``p_i`` objects of the starting block twisted by ``O(i)``.
Each vanishing the collection needs becomes an ``Obligation``; ``Discharger``
decides it with BWB and tensor products, optionally using the reduction
rules a proof script declares, and ``Report`` folds the results in input
order so the output does not depend on how discharge was scheduled.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .borel_weil_bott import GradedVector, bwb_cohomology
from .bundles import (
    FilteredBundle,
    check_extension_exceptional,
    ext_groups,
    ext_witness,
    extension_parts,
    filtered_ext_exact,
    rank,
    resolve,
)
from .levi import ParabolicData, canonical_index, parabolic
from .notation import (
    format_bundle,
    format_graded,
    format_word,
    graded_from_json,
    split_bundle_ref,
)
from .root_system import weyl_group_order
from .tensor import Decomposition, tensor_bundles

KINDS = (
    "Acyclic",
    "ExtVanishes",
    "ExtEquals",
    "TensorEquals",
    "ExceptionalIrreducible",
    "ExceptionalExtension",
    "RankEquals",
    "KRankEquals",
)
STATUSES = ("Proven", "Refuted", "Unknown")
RULES = ("complex", "serre", "universal-extension", "complex-exceptional")
MAX_REDUCTION_DEPTH = 3


class SpecError(ValueError):
    pass


def k_theory_rank(parab: ParabolicData) -> int:
    """Rank of K_0(G/P) = |W_G| / |W_L|."""
    num = weyl_group_order(parab.ambient)
    den = weyl_group_order(parab.levi)
    if num % den:
        raise AssertionError(f"|W_G| = {num} is not divisible by |W_L| = {den}")
    return num // den


def twist_ref(ref: str, i: int) -> str:
    """``twist_ref('S^{w1}(1)', -2) == 'S^{w1}(-1)'``."""
    base, shift = split_bundle_ref(ref)
    s = shift + i
    return base if s == 0 else f"{base}({s})"


# ---------------------------------------------------------------------------
# specs and obligations


@dataclass(frozen=True)
class LefschetzSpec:
    starting_block: tuple[str, ...]
    partition: tuple[int, ...]
    parab: ParabolicData = field(default_factory=parabolic)
    twist_step: int = 1

    def __post_init__(self):
        object.__setattr__(self, "starting_block", tuple(str(resolve(self.parab, r)) for r in self.starting_block))
        object.__setattr__(self, "partition", tuple(int(p) for p in self.partition))
        self.validate()

    def validate(self) -> None:
        p = self.partition
        if not p or any(x <= 0 for x in p):
            raise SpecError("partition entries must be positive")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise SpecError(f"partition {list(p)} is not weakly decreasing")
        if p[0] > len(self.starting_block):
            raise SpecError(f"partition entry {p[0]} exceeds starting block length {len(self.starting_block)}")
        if len(p) > canonical_index(self.parab):
            raise SpecError(f"{len(p)} blocks exceed the canonical index {canonical_index(self.parab)}")
        if self.twist_step != 1:
            raise SpecError("only twist step 1 is supported")
        for ref in self.starting_block:
            resolve(self.parab, ref)

    @property
    def total(self) -> int:
        return sum(self.partition)

    def objects(self) -> list[str]:
        return [twist_ref(self.starting_block[m], i) for i, p in enumerate(self.partition) for m in range(p)]


@dataclass(frozen=True)
class Obligation:
    kind: str
    args: tuple
    provenance: str = ""
    required: bool = True
    witnesses: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown obligation kind {self.kind!r}")
        object.__setattr__(self, "args", _freeze(self.args))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    @property
    def key(self) -> tuple:
        return (self.kind, self.args)

    def describe(self) -> str:
        return f"{self.kind}(" + ", ".join(_arg_text(a) for a in self.args) + ")"


def _freeze(x):
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(y) for y in x)
    return x


def _thaw(x):
    if isinstance(x, tuple):
        return [_thaw(y) for y in x]
    return x


def _arg_text(a) -> str:
    if isinstance(a, tuple):
        return json.dumps(_thaw(a), separators=(",", ":"))
    return str(a)


def _is_irreducible_ref(parab: ParabolicData, ref: str) -> bool:
    return resolve(parab, ref).name is None and resolve(parab, ref).is_irreducible


def enumerate_obligations(spec: LefschetzSpec) -> list[Obligation]:
    """Exceptionality of the starting block, then every vanishing
    ``Ext(E_m, E_n(-i)) = 0`` with ``E_m`` in block ``i`` and ``E_n`` in block 0."""
    block = spec.starting_block
    out: list[Obligation] = []
    for ref in block:
        if _is_irreducible_ref(spec.parab, ref):
            out.append(Obligation("ExceptionalIrreducible", (ref,), "starting block: exceptional object"))
        else:
            out.append(Obligation("ExtEquals", (ref, ref, ((0, "0", 1),)), "starting block: exceptional object"))
    for i in range(len(block)):
        for j in range(i):
            out.append(Obligation("ExtVanishes", (block[i], block[j]), "starting block: semiorthogonality"))
    p0 = spec.partition[0]
    for i in range(1, len(spec.partition)):
        for m in range(spec.partition[i]):
            for n in range(p0):
                out.append(Obligation("ExtVanishes", (block[m], twist_ref(block[n], -i)), f"block {i} against block 0"))
    return _dedup(out)


def _dedup(obs: Iterable[Obligation]) -> list[Obligation]:
    seen: dict[tuple, int] = {}
    out: list[Obligation] = []
    for ob in obs:
        if ob.key in seen:
            prev = out[seen[ob.key]]
            witnesses = prev.witnesses + tuple(w for w in ob.witnesses if w not in prev.witnesses)
            prov = prev.provenance if ob.provenance in prev.provenance else f"{prev.provenance}; {ob.provenance}"
            out[seen[ob.key]] = Obligation(prev.kind, prev.args, prov, prev.required or ob.required, witnesses)
        else:
            seen[ob.key] = len(out)
            out.append(ob)
    return out


def merge_obligations(*groups: Iterable[Obligation]) -> list[Obligation]:
    """Concatenate, merging duplicates (witness expectations and provenance)."""
    return _dedup(ob for g in groups for ob in g)


# ---------------------------------------------------------------------------
# discharge


@dataclass(frozen=True)
class Result:
    status: str
    witness: dict

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(self.status)


@dataclass(frozen=True)
class Rule:
    name: str
    bundle: str | None = None
    cohomology: str | None = None
    provenance: str = ""


class Discharger:
    """Decides obligations; ``rules`` are the reductions a script allows."""

    def __init__(self, parab: ParabolicData | None = None, rules: Sequence[Rule] = ()):
        self.parab = parab or parabolic()
        self.rules = tuple(rules)
        self._vanish: dict[tuple, Result] = {}
        for r in self.rules:
            if r.name not in RULES:
                raise SpecError(f"unknown reduction rule {r.name!r}")

    # -- helpers

    def _ref(self, ref: str) -> FilteredBundle:
        return resolve(self.parab, ref)

    def _label(self, ref: str) -> str:
        return str(self._ref(ref))

    def _acyclic_summands(self, a: FilteredBundle, b: FilteredBundle) -> list[list]:
        return [[row["bundle"], row["result"].singular_vertex] for row in ext_witness(self.parab, a, b)]

    def discharge(self, ob: Obligation) -> Result:
        try:
            handler = getattr(self, "_do_" + ob.kind)
            return handler(ob)
        except (ValueError, ArithmeticError, KeyError, AssertionError) as exc:
            return Result("Refuted", {"error": f"{type(exc).__name__}: {exc}"})

    # -- kinds

    def _do_Acyclic(self, ob: Obligation) -> Result:
        b = self._ref(ob.args[0])
        if not b.is_irreducible:
            raise SpecError("Acyclic takes an irreducible bundle")
        w = b.pieces[0].weights()[0]
        res = bwb_cohomology(self.parab, w)
        if res.acyclic:
            return Result("Proven", {"bundle": str(b), "singular_vertex": res.singular_vertex, "word": format_word(res.word)})
        return Result("Refuted", {"bundle": str(b), "cohomology": format_graded(GradedVector([(res.degree, res.weight, 1)])), "word": format_word(res.word)})

    def _do_ExtVanishes(self, ob: Obligation) -> Result:
        res = self.ext_vanishes(ob.args[0], ob.args[1], MAX_REDUCTION_DEPTH)
        if ob.witnesses and res.status == "Proven":
            found = _acyclic_labels(res.witness)
            expected = [self._label(w) for w in ob.witnesses]
            missing = [w for w in expected if w not in found]
            res = Result(res.status, {**res.witness, "expected": expected, "witnesses_match": not missing, "missing": missing})
        return res

    def ext_vanishes(self, a_ref: str, b_ref: str, depth: int) -> Result:
        key = (a_ref, b_ref, depth)
        hit = self._vanish.get(key)
        if hit is not None:
            return hit
        # cycle guard: a pending entry reads as Unknown
        self._vanish[key] = Result("Unknown", {"reason": "cyclic reduction"})
        res = self._ext_vanishes(a_ref, b_ref, depth)
        self._vanish[key] = res
        return res

    def _ext_vanishes(self, a_ref: str, b_ref: str, depth: int) -> Result:
        a, b = self._ref(a_ref), self._ref(b_ref)
        bound = ext_groups(self.parab, a, b)
        if not bound:
            return Result("Proven", {"method": "semisimplification", "acyclic": self._acyclic_summands(a, b)})
        exact = filtered_ext_exact(self.parab, a, b)
        if exact is not None:
            return Result("Refuted", {"method": "exact", "ext": format_graded(exact)})
        if depth > 0:
            for rule in self.rules:
                steps = self._reduce(rule, a_ref, b_ref, a, b)
                for sub in steps:
                    results = [self._sub(kind, args, depth - 1) for kind, args in sub]
                    if all(r.status == "Proven" for _, r in results):
                        return Result("Proven", {
                            "method": rule.name,
                            "provenance": rule.provenance,
                            "steps": [{"obligation": d, "status": r.status, "witness": r.witness} for d, r in results],
                        })
        return Result("Unknown", {"method": "semisimplification", "bound": format_graded(bound)})

    def _sub(self, kind: str, args: tuple, depth: int) -> tuple[str, Result]:
        desc = f"{kind}(" + ", ".join(str(x) if not isinstance(x, GradedVector) else format_graded(x) for x in args) + ")"
        if kind == "ExtVanishes":
            return desc, self.ext_vanishes(args[0], args[1], depth)
        if kind == "ExtEquals":
            got = filtered_ext_exact(self.parab, self._ref(args[0]), self._ref(args[1]))
            if got is None:
                return desc, Result("Unknown", {"bound": format_graded(ext_groups(self.parab, self._ref(args[0]), self._ref(args[1])))})
            return desc, Result("Proven" if got == args[2] else "Refuted", {"ext": format_graded(got)})
        raise SpecError(kind)

    def _reduce(self, rule: Rule, a_ref: str, b_ref: str, a: FilteredBundle, b: FilteredBundle) -> list[list[tuple]]:
        """Alternative lists of sub-obligations that together imply the vanishing."""
        out: list[list[tuple]] = []
        if rule.name == "complex":
            # X(j-1) -> W (x) O(j) -> X(j) is exact up to K(j) in the middle, so
            # X(j) lies in the span of X(j-1), O(j), K(j) and of X(j+1), O(j+1), K(j+1)
            for side, ref, other in ((1, b_ref, a_ref), (0, a_ref, b_ref)):
                fb = self._ref(ref)
                if fb.name != rule.bundle:
                    continue
                j = fb.shift
                for step in (-1, 1):
                    top = j + max(step, 0)
                    repl = [twist_ref(rule.bundle, j + step), twist_ref("O", top), twist_ref(rule.cohomology, top)]
                    out.append([("ExtVanishes", (other, r) if side else (r, other)) for r in repl])
        elif rule.name == "serre":
            d = canonical_index(self.parab)
            out.append([("ExtVanishes", (b_ref, twist_ref(a_ref, -d)))])
        elif rule.name == "universal-extension":
            parts = extension_parts(self.parab, a) if a.name == rule.bundle else None
            if parts is not None and parts[0].semisimplify() == b.semisimplify():
                sub, quot = parts
                zero = self.parab.ambient.zero()
                out.append([
                    ("ExtEquals", (str(sub), str(sub), GradedVector([(0, zero, 1)]))),
                    ("ExtEquals", (str(quot), str(sub), GradedVector([(1, zero, 1)]))),
                ])
        return out

    def _do_ExtEquals(self, ob: Obligation) -> Result:
        a_ref, b_ref, expected_json = ob.args
        expected = graded_from_json(_thaw(expected_json), self.parab.rank)
        a, b = self._ref(a_ref), self._ref(b_ref)
        got = filtered_ext_exact(self.parab, a, b)
        if got is not None:
            return Result("Proven" if got == expected else "Refuted", {"ext": format_graded(got), "expected": format_graded(expected)})
        for rule in self.rules:
            if rule.name != "complex-exceptional" or a != b or a.name != rule.bundle:
                continue
            if expected != GradedVector([(0, self.parab.ambient.zero(), 1)]):
                continue
            j = a.shift
            zero = self.parab.ambient.zero()
            sub = [
                ("ExtVanishes", (a_ref, twist_ref("O", j))),
                ("ExtVanishes", (a_ref, twist_ref(rule.bundle, j - 1))),
                ("ExtEquals", (a_ref, twist_ref(rule.cohomology, j), GradedVector([(1, zero, 1)]))),
            ]
            results = [self._sub(kind, args, MAX_REDUCTION_DEPTH) for kind, args in sub]
            steps = [{"obligation": d, "status": r.status, "witness": r.witness} for d, r in results]
            if all(r.status == "Proven" for _, r in results):
                return Result("Proven", {"method": rule.name, "provenance": rule.provenance, "steps": steps})
            if any(r.status == "Refuted" for _, r in results):
                return Result("Unknown", {"method": rule.name, "steps": steps})
        bound = ext_groups(self.parab, a, b)
        return Result("Unknown", {"bound": format_graded(bound), "expected": format_graded(expected)})

    def _do_TensorEquals(self, ob: Obligation) -> Result:
        a_ref, b_ref, expected_items = ob.args
        a, b = self._ref(a_ref), self._ref(b_ref)
        if not (a.is_irreducible and b.is_irreducible):
            raise SpecError("TensorEquals takes irreducible bundles")
        got = tensor_bundles(self.parab, a.pieces[0].weights()[0], b.pieces[0].weights()[0])
        expected = Decomposition()
        for ref, mult in expected_items:
            expected = expected + self._ref(ref).semisimplify().scaled(int(mult))
        ranks = rank(self.parab, a.pieces[0]) * rank(self.parab, b.pieces[0]) == rank(self.parab, got)
        witness = {
            "computed": _format_decomposition(self.parab, got),
            "expected": _format_decomposition(self.parab, expected),
            "rank_multiplicative": ranks,
        }
        return Result("Proven" if got == expected and ranks else "Refuted", witness)

    def _do_ExceptionalIrreducible(self, ob: Obligation) -> Result:
        b = self._ref(ob.args[0])
        if not b.is_irreducible:
            raise SpecError("ExceptionalIrreducible takes an irreducible bundle")
        got = ext_groups(self.parab, b, b)
        ok = got == GradedVector([(0, self.parab.ambient.zero(), 1)])
        return Result("Proven" if ok else "Refuted", {"ext": format_graded(got)})

    def _do_ExceptionalExtension(self, ob: Obligation) -> Result:
        sub, quot = self._ref(ob.args[0]), self._ref(ob.args[1])
        outcome = check_extension_exceptional(self.parab, sub, quot)
        report = {k: (format_graded(v) if v is not None else None) for k, v in outcome.report.items()}
        status = {"Exceptional": "Proven", "NoNontrivialExtension": "Refuted"}.get(outcome.kind, "Unknown")
        return Result(status, {"outcome": outcome.kind, **report})

    def _do_RankEquals(self, ob: Obligation) -> Result:
        b = self._ref(ob.args[0])
        got = rank(self.parab, b.semisimplify())
        return Result("Proven" if got == int(ob.args[1]) else "Refuted", {"rank": got})

    def _do_KRankEquals(self, ob: Obligation) -> Result:
        got = k_theory_rank(self.parab)
        return Result("Proven" if got == int(ob.args[0]) else "Refuted", {"rank": got})


def _acyclic_labels(witness: dict) -> set[str]:
    """Acyclic summands named anywhere in a witness, including reduction steps."""
    found = {row[0] for row in witness.get("acyclic", [])}
    for step in witness.get("steps", []):
        found |= _acyclic_labels(step["witness"])
    return found


def _format_decomposition(parab: ParabolicData, d: Decomposition) -> str:
    if not d:
        return "0"
    parts = []
    for w, m in sorted(d, key=lambda wm: bundle_sort_key(parab, wm[0])):
        s = format_bundle(parab, w)
        parts.append(s if m == 1 else f"{m}*{s}")
    return " + ".join(parts)


def bundle_sort_key(parab: ParabolicData, w) -> tuple:
    """Smaller Levi parts first, then by twist descending."""
    levi = tuple(w[i - 1] for i in parab.levi_indices)
    return (sum(levi), tuple(-x for x in levi), -w[parab.k - 1])


format_decomposition = _format_decomposition


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    lemma: str
    entries: list[tuple[Obligation, Result]]
    notes: list[str] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        c = {s: 0 for s in STATUSES}
        for _, r in self.entries:
            c[r.status] += 1
        c["total"] = len(self.entries)
        return c

    @property
    def verdict(self) -> str:
        bad = [r for ob, r in self.entries if ob.required and r.status != "Proven"]
        if not bad:
            return "verified"
        return "refuted" if any(r.status == "Refuted" for r in bad) else "unknown"

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "obligations": [
                {
                    "kind": ob.kind,
                    "args": _thaw(ob.args),
                    "status": r.status,
                    "witness": r.witness,
                    "provenance": ob.provenance,
                }
                for ob, r in self.entries
            ],
            "verdict": self.verdict,
            "counts": self.counts,
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False, default=str) + "\n"

    def to_text(self) -> str:
        lines = [f"{self.lemma}"]
        lines += [f"note: {n}" for n in self.notes]
        for ob, r in self.entries:
            extra = ""
            if r.status != "Proven":
                for k in ("ext", "bound", "cohomology", "error", "outcome"):
                    if k in r.witness:
                        extra = f"  [{k}: {r.witness[k]}]"
                        break
            lines.append(f"{r.status:8s} {ob.describe()}{extra}")
        c = self.counts
        lines.append(f"counts: Proven={c['Proven']} Refuted={c['Refuted']} Unknown={c['Unknown']} total={c['total']}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


_worker: Discharger | None = None


def _init_worker(rules: tuple[Rule, ...]) -> None:
    global _worker
    _worker = Discharger(parabolic(), rules)


def _discharge_in_worker(ob: Obligation) -> Result:
    return _worker.discharge(ob)


def discharge_all(obligations: Sequence[Obligation], rules: Sequence[Rule] = (), jobs: int = 1) -> list[Result]:
    """Results in input order; ``jobs > 1`` uses worker processes."""
    if jobs <= 1 or len(obligations) < 2:
        d = Discharger(parabolic(), rules)
        return [d.discharge(ob) for ob in obligations]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(tuple(rules),)) as pool:
        return list(pool.map(_discharge_in_worker, obligations, chunksize=max(1, len(obligations) // (4 * jobs))))


def verify_obligations(lemma: str, obligations: Sequence[Obligation], rules: Sequence[Rule] = (), jobs: int = 1, notes: Sequence[str] = ()) -> Report:
    results = discharge_all(obligations, rules, jobs)
    return Report(lemma, list(zip(obligations, results)), list(notes))


def verify_collection(spec: LefschetzSpec, rules: Sequence[Rule] = (), extra: Sequence[Obligation] = (), jobs: int = 1, lemma: str = "collection") -> Report:
    obligations = merge_obligations(enumerate_obligations(spec), extra)
    notes = [
        "partition entries are block cardinalities: block i holds the first p_i objects of the starting block",
        f"starting block {list(spec.starting_block)}, partition {list(spec.partition)}, {spec.total} objects",
    ]
    return verify_obligations(lemma, obligations, rules, jobs, notes)
