"""Command-line frontend.

Exit codes: 0 success (for ``verify``: verdict "verified"), 1 a script that
is refuted or has unknown obligations, 2 usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import borel_weil_bott as bwb
from .bundles import (
    BundleError,
    FilteredBundle,
    as_filtered,
    ext_groups,
    filtered_ext_exact,
    nilradical_grading,
    rank,
    resolve,
)
from .collections import format_decomposition, k_theory_rank
from .levi import ParabolicError, canonical_index, parabolic
from .notation import (
    NotationError,
    format_bundle,
    format_cohomology,
    format_graded,
    format_weight,
    graded_to_json,
    parse_weight,
    weight_to_json,
)
from .root_system import RootSystemError, positive_roots_simple_coords
from .scripts import ScriptError, builtin_names, load_script
from .tensor import TensorError, tensor_bundles

USAGE_ERRORS = (NotationError, BundleError, ParabolicError, RootSystemError, TensorError, ScriptError, bwb.BWBError)


class UsageError(Exception):
    pass


def _bundle(parab, text: str) -> FilteredBundle:
    """A weight literal or a bundle reference."""
    text = text.strip()
    if text.startswith("[") or text.startswith("w") or text.startswith("-") or text == "0" or text[:1].isdigit():
        w = parse_weight(text, parab.rank)
        parab.check_levi_dominant(w)
        if not w.is_integral():
            raise UsageError(f"{text!r} is not integral")
        return as_filtered(parab, _single(w))
    return resolve(parab, text)


def _single(w):
    from .tensor import Decomposition

    return Decomposition.single(w)


def _irreducible_weight(parab, text: str):
    b = _bundle(parab, text)
    if not b.is_irreducible:
        raise UsageError(f"{text!r} is not an irreducible bundle")
    return b.pieces[0].weights()[0]


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_bwb(args, parab) -> int:
    w = _irreducible_weight(parab, args.weight)
    res = bwb.bwb_cohomology(parab, w)
    data = {
        "bundle": format_bundle(parab, w),
        "weight": weight_to_json(w),
        "acyclic": res.acyclic,
        "degree": res.degree,
        "highest_weight": None if res.acyclic else weight_to_json(res.weight),
        "singular_vertex": res.singular_vertex,
        "word": list(res.word),
        "result": format_cohomology(res),
    }
    _emit(args, format_cohomology(res), data)
    return 0


def cmd_tensor(args, parab) -> int:
    a = _irreducible_weight(parab, args.a)
    b = _irreducible_weight(parab, args.b)
    d = tensor_bundles(parab, a, b)
    data = {"summands": [{"bundle": format_bundle(parab, w), "weight": weight_to_json(w), "mult": m} for w, m in d]}
    _emit(args, format_decomposition(parab, d), data)
    return 0


def cmd_ext(args, parab) -> int:
    a, b = _bundle(parab, args.a), _bundle(parab, args.b)
    bound = ext_groups(parab, a, b)
    exact = filtered_ext_exact(parab, a, b)
    text = format_graded(bound)
    if len(a.pieces) > 1 or len(b.pieces) > 1:
        text += "  (exact)" if exact is not None else "  (upper bound from graded pieces)"
    _emit(args, text, {"ext": graded_to_json(bound), "exact": exact is not None, "result": format_graded(bound)})
    return 0


def cmd_dual(args, parab) -> int:
    b = _bundle(parab, args.bundle).dual(parab)
    pieces = [format_decomposition(parab, p) for p in b.pieces]
    _emit(args, "; ".join(pieces) if len(pieces) > 1 else pieces[0], {"pieces": pieces})
    return 0


def cmd_rank(args, parab) -> int:
    b = _bundle(parab, args.bundle)
    r = rank(parab, b.semisimplify())
    _emit(args, str(r), {"bundle": str(b), "rank": r})
    return 0


def cmd_roots(args, parab) -> int:
    g = nilradical_grading(parab)
    total = len(positive_roots_simple_coords(parab.ambient))
    lines = [f"positive roots: {total}", f"non-parabolic roots: {g.total}"]
    data = {"positive_roots": total, "non_parabolic": g.total, "degrees": {}}
    for c, n in g.counts().items():
        dom = [format_weight(w) for w in g.dominant.get(c, ())]
        lines.append(f"degree {c}: {n} root{'s' if n != 1 else ''}, Levi-dominant: {', '.join(dom)}")
        data["degrees"][str(c)] = {"count": n, "dominant": dom}
    _emit(args, "\n".join(lines), data)
    return 0


def cmd_korder(args, parab) -> int:
    r = k_theory_rank(parab)
    ci = canonical_index(parab)
    _emit(args, f"K_0 rank: {r}\ncanonical bundle: O(-{ci})", {"k_theory_rank": r, "canonical_index": ci, "dimension": parab.dimension})
    return 0


def cmd_verify(args, parab) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    script = load_script(args.script, parab)
    report = script.run(jobs=args.jobs)
    if args.format == "json":
        sys.stdout.write(report.dumps())
    else:
        sys.stdout.write(report.to_text())
    return 0 if report.verdict == "verified" else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bwbverify", description="Borel-Weil-Bott, tensor and Ext computations on G/P.")
    p.add_argument("--group", default="E6", help="ambient root system (default E6)")
    p.add_argument("--parabolic", type=int, default=2, help="marked vertex k of P_k (default 2)")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bwb", parents=[fmt], help="cohomology of S^mu")
    s.add_argument("weight")
    s.set_defaults(func=cmd_bwb)

    s = sub.add_parser("tensor", parents=[fmt], help="decompose S^a (x) S^b")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("ext", parents=[fmt], help="Ext(A, B)")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_ext)

    s = sub.add_parser("dual", parents=[fmt], help="dual bundle")
    s.add_argument("bundle")
    s.set_defaults(func=cmd_dual)

    s = sub.add_parser("rank", parents=[fmt], help="rank of a bundle")
    s.add_argument("bundle")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("roots", parents=[fmt], help="grading of the nilradical")
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("korder", parents=[fmt], help="rank of K_0 and the canonical index")
    s.set_defaults(func=cmd_korder)

    s = sub.add_parser("verify", parents=[fmt], help=f"run a proof script ({', '.join(builtin_names())} or a path)")
    s.add_argument("script")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cache_dir = os.environ.get(bwb.CACHE_ENV)
    try:
        parab = parabolic(args.group, args.parabolic)
        if cache_dir:
            bwb.load_cache(cache_dir)
        code = args.func(args, parab)
    except (UsageError, *USAGE_ERRORS) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if cache_dir:
        bwb.save_cache(cache_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
