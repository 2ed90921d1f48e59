"""Proof-script fixtures: JSON ledgers of obligations, optionally a collection
spec and the reduction rules the script allows.

Schema::

    {"lemma": str,
     "obligations": [{"kind": str, "args": [...], "provenance": str,
                      "for": {"i": "1..10", "t": [1, 2]},   # optional loop
                      "witnesses": [ref, ...],               # optional
                      "skip_invalid": bool,                  # optional
                      "required": bool}],                    # optional
     "collection": {"starting_block": [ref, ...], "partition": [int, ...]},
     "reductions": [{"rule": str, "bundle": str, "cohomology": str, "provenance": str}],
     "notes": [str]}

Inside a looped entry every ``<expr>`` in a string is replaced by the value of
``expr``, an integer expression over the loop variables.
"""

from __future__ import annotations

import ast
import itertools
import json
import operator
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .bundles import BundleError, resolve
from .collections import (
    KINDS,
    RULES,
    LefschetzSpec,
    Obligation,
    Report,
    Rule,
    SpecError,
    merge_obligations,
    enumerate_obligations,
    verify_obligations,
)
from .levi import ParabolicData, parabolic
from .notation import NotationError

_PLACEHOLDER = re.compile(r"<([^<>]+)>")
_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul}


class ScriptError(ValueError):
    pass


def _eval(expr: str, env: dict[str, int]) -> int:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise ScriptError(f"unbound template variable {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ScriptError(f"unsupported template expression {expr!r}")

    try:
        return ev(ast.parse(expr.strip(), mode="eval"))
    except SyntaxError as exc:
        raise ScriptError(f"bad template expression {expr!r}") from exc


def substitute(value: Any, env: dict[str, int]) -> Any:
    if isinstance(value, str):
        if _PLACEHOLDER.fullmatch(value):
            return _eval(value[1:-1], env)
        return _PLACEHOLDER.sub(lambda m: str(_eval(m.group(1), env)), value)
    if isinstance(value, list):
        return [substitute(v, env) for v in value]
    return value


def _loop_values(spec) -> list[int]:
    if isinstance(spec, str):
        m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", spec)
        if not m:
            raise ScriptError(f"bad range {spec!r}")
        lo, hi = int(m.group(1)), int(m.group(2))
        return list(range(lo, hi + 1))
    if isinstance(spec, list) and all(isinstance(x, int) for x in spec):
        return list(spec)
    raise ScriptError(f"bad loop {spec!r}")


def _envs(loop: dict) -> list[dict[str, int]]:
    names = list(loop)
    values = [_loop_values(loop[n]) for n in names]
    return [dict(zip(names, combo)) for combo in itertools.product(*values)]


def _valid(parab: ParabolicData, kind: str, args: list) -> bool:
    refs = []
    if kind in ("Acyclic", "ExceptionalIrreducible"):
        refs = args[:1]
    elif kind in ("ExtVanishes", "ExtEquals", "ExceptionalExtension"):
        refs = args[:2]
    elif kind == "TensorEquals":
        refs = args[:2] + [r for r, _ in args[2]]
    elif kind == "RankEquals":
        refs = args[:1]
    try:
        for r in refs:
            resolve(parab, r)
    except (BundleError, NotationError, ValueError):
        return False
    return True


def _canonical_args(parab: ParabolicData, kind: str, args: list) -> list:
    label = lambda r: str(resolve(parab, r))
    if kind in ("Acyclic", "ExceptionalIrreducible", "RankEquals"):
        return [label(args[0])] + args[1:]
    if kind in ("ExtVanishes", "ExtEquals", "ExceptionalExtension"):
        return [label(args[0]), label(args[1])] + args[2:]
    if kind == "TensorEquals":
        return [label(args[0]), label(args[1]), [[label(r), m] for r, m in args[2]]]
    return args


def _drop_invalid_terms(parab: ParabolicData, args: list) -> list:
    """TensorEquals: drop expected summands that are not bundles (a negative
    Levi coordinate), as for a family evaluated outside its meaningful range."""
    a, b, items = args
    kept = []
    for ref, mult in items:
        try:
            resolve(parab, ref)
        except (BundleError, NotationError, ValueError):
            continue
        kept.append([ref, mult])
    return [a, b, kept]


def expand_entry(parab: ParabolicData, entry: dict) -> list[Obligation]:
    kind = entry.get("kind")
    if kind not in KINDS:
        raise ScriptError(f"unknown obligation kind {kind!r}")
    if "args" not in entry or not isinstance(entry["args"], list):
        raise ScriptError(f"obligation {kind} needs an 'args' list")
    envs = _envs(entry["for"]) if "for" in entry else [{}]
    out = []
    for env in envs:
        args = substitute(entry["args"], env)
        if entry.get("skip_invalid") and kind == "TensorEquals":
            args = _drop_invalid_terms(parab, args)
        if not _valid(parab, kind, args):
            raise ScriptError(f"invalid bundle in {kind}{args}")
        args = _canonical_args(parab, kind, args)
        prov = substitute(entry.get("provenance", ""), env)
        witnesses = []
        for w in substitute(entry.get("witnesses", []), env):
            if _valid(parab, "Acyclic", [w]):
                witnesses.append(str(resolve(parab, w)))
            elif not entry.get("skip_invalid"):
                raise ScriptError(f"invalid witness bundle {w!r}")
        out.append(Obligation(kind, tuple(args), prov, bool(entry.get("required", True)), witnesses))
    return out


@dataclass
class Script:
    lemma: str
    obligations: list[Obligation]
    rules: tuple[Rule, ...] = ()
    collection: LefschetzSpec | None = None
    notes: list[str] = field(default_factory=list)

    def run(self, jobs: int = 1) -> Report:
        notes = list(self.notes)
        if self.collection is not None:
            spec = self.collection
            notes.insert(0, "partition entries are block cardinalities: block i holds the first p_i objects of the starting block")
            notes.insert(1, f"starting block {list(spec.starting_block)}, partition {list(spec.partition)}, {spec.total} objects")
        return verify_obligations(self.lemma, self.obligations, self.rules, jobs, notes)


def parse_script(data: dict, parab: ParabolicData | None = None) -> Script:
    parab = parab or parabolic()
    if not isinstance(data, dict) or not isinstance(data.get("lemma"), str):
        raise ScriptError("script must be an object with a string 'lemma'")
    entries = data.get("obligations", [])
    if not isinstance(entries, list):
        raise ScriptError("'obligations' must be a list")
    unknown = set(data) - {"lemma", "obligations", "collection", "reductions", "notes", "title"}
    if unknown:
        raise ScriptError(f"unknown script keys {sorted(unknown)}")
    collection = None
    groups = []
    try:
        if "collection" in data:
            c = data["collection"]
            collection = LefschetzSpec(tuple(c["starting_block"]), tuple(c["partition"]), parab)
            groups.append(enumerate_obligations(collection))
        groups.append([ob for e in entries for ob in expand_entry(parab, e)])
    except (SpecError, KeyError, TypeError, BundleError, NotationError) as exc:
        raise ScriptError(str(exc)) from exc
    rules = []
    for r in data.get("reductions", []):
        if r.get("rule") not in RULES:
            raise ScriptError(f"unknown reduction rule {r.get('rule')!r}")
        rules.append(Rule(r["rule"], r.get("bundle"), r.get("cohomology"), r.get("provenance", "")))
    return Script(data["lemma"], merge_obligations(*groups), tuple(rules), collection, list(data.get("notes", [])))


def builtin_names() -> list[str]:
    root = resources.files("bwbverify").joinpath("data/scripts")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_script(name_or_path: str, parab: ParabolicData | None = None) -> Script:
    """A built-in name such as ``lemma-3.7`` or a path to a JSON file."""
    path = Path(name_or_path)
    if path.suffix == ".json" or path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ScriptError(f"cannot read {name_or_path}: {exc}") from exc
    else:
        res = resources.files("bwbverify").joinpath(f"data/scripts/{name_or_path}.json")
        if not res.is_file():
            raise ScriptError(f"no built-in script {name_or_path!r}; available: {', '.join(builtin_names())}")
        text = res.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScriptError(f"invalid JSON: {exc}") from exc
    return parse_script(data, parab)
