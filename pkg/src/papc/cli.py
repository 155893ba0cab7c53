"""``papc`` command line.

Every subcommand writes one JSON report (``--out`` or stdout).  Structures are
read from ``--in`` (default stdin) as incidence files or as a previous report,
so commands chain with pipes::

    papc construct affine --order 3 | papc delete --random 2 --seed 7 | papc complete

Exit codes: 0 success, 1 negative result, 2 usage or input error, 3 budget
exhausted.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings

from . import constructions as C
from .bounds import bound_report
from .completion import complete_pap
from .errors import (
    BudgetExhausted,
    ConditionsNotMet,
    DerivedNotCompletable,
    GlueInconsistent,
    HypothesesNotMet,
    NoClauseSatisfied,
    NonCanonicalInput,
    NotAPap,
    NotCompletable,
    NotEquivalence,
    PapcError,
    ParseError,
    PreconditionViolated,
    TooManyClasses,
)
from .incidence import DesignParams, IncidenceStructure, is_design, is_partial_design, pap_order
from .io import parse
from .oracle import oracle_complete
from .parallelism import classify_parallelism, lemma28_check
from .report import dumps, make_report, stats

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

NEGATIVE = (
    NotCompletable,
    NotEquivalence,
    TooManyClasses,
    HypothesesNotMet,
    DerivedNotCompletable,
    ConditionsNotMet,
    GlueInconsistent,
    NoClauseSatisfied,
    NotAPap,
)


class UsageError(Exception):
    pass


def _read(path: str, strict: bool) -> IncidenceStructure:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="ascii", newline="") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    with warnings.catch_warnings():
        warnings.simplefilter("always", NonCanonicalInput)
        return parse(text, strict=strict)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_construct(a) -> tuple[int, dict]:
    kind = a.kind
    if kind == "affine":
        S = C.affine_plane(a.order)
    elif kind == "projective":
        S = C.projective_plane(a.order)
    elif kind == "inversive":
        S = C.miquelian_inversive_plane(a.order)
    elif kind == "affine-space":
        S = C.affine_space_line_design(a.order, a.dim)
    elif kind == "baer":
        S = C.baer_example(a.order)
    else:
        S = C.transversal_design(3, a.order)
    return EXIT_OK, {"structure": S, "stats": stats(S)}


def cmd_delete(a) -> tuple[int, dict]:
    S = _read(a.input, a.strict)
    if a.blocks is not None:
        T = C.delete_blocks(S, _ints(a.blocks))
    elif a.random is not None:
        T = C.random_deletion(S, a.random, a.seed, require_parallel_equivalence=a.keep_equivalence)
    else:
        raise UsageError("delete needs --blocks or --random")
    return EXIT_OK, {"structure": T, "stats": stats(T), "input": stats(S)}


def _parallelism(S: IncidenceStructure) -> dict:
    pc = classify_parallelism(S)
    w = pc.witness
    return {
        "is_equivalence": pc.is_equivalence,
        "class_count": pc.class_count if pc.is_equivalence else None,
        "class_sizes": [len(c) for c in pc.classes] if pc.is_equivalence else None,
        "witness": None if w is None else {"line": w.line, "point": w.point, "parallels": list(w.parallels)},
    }


def cmd_analyze(a) -> tuple[int, dict]:
    S = _read(a.input, a.strict)
    out: dict = {"stats": stats(S)}
    try:
        n = pap_order(S)
    except NotAPap:
        n = None
    out["pap_order"] = n
    if S.max_meet() <= 1 and S.block_size() is not None:
        out["parallelism"] = _parallelism(S)
    if n is not None:
        out["bounds"] = bound_report(n).as_dict()
        try:
            rep = lemma28_check(S)
            out["class_bounds"] = {
                "n": rep.n,
                "a": rep.a,
                "holds": rep.holds,
                "min_parallel_set": min(rep.parallel_set_sizes),
                "min_parallel_set_bound": rep.min_class_size_bound,
                "low_valency_points": rep.low_valency_points,
                "low_valency_bound": rep.low_valency_bound,
                "violations": rep.violations,
            }
        except PreconditionViolated as exc:
            out["class_bounds"] = {"applicable": False, "reason": str(exc)}
    return EXIT_OK, out


def cmd_complete(a) -> tuple[int, dict]:
    S = _read(a.input, a.strict)
    res = complete_pap(S, method=a.method, budget=a.budget, workers=a.workers)
    return EXIT_OK, {
        "structure": res.completed,
        "stats": stats(res.completed),
        "method": res.method.value,
        "certificate": res.certificate_text,
        "added_blocks": [list(b) for b in res.added_blocks],
    }


def cmd_complete_inversive(a) -> tuple[int, dict]:
    from .inversive import _params, corollary310_router, glue_completion

    S = _read(a.input, a.strict)
    _, d = _params(S)
    if d == 2:
        res = corollary310_router(S, budget=a.budget, workers=a.workers)
    else:
        res = glue_completion(S, budget=a.budget, workers=a.workers)
    return EXIT_OK, {
        "structure": res.completed,
        "stats": stats(res.completed),
        "method": res.method.value,
        "certificate": res.certificate_text,
        "added_blocks": [list(b) for b in res.added_blocks],
    }


def cmd_oracle(a) -> tuple[int, dict]:
    S = _read(a.input, a.strict)
    params = DesignParams(a.t, a.v, a.k, a.lam)
    if not is_partial_design(S, params):
        raise UsageError(f"input is not a partial {params} design")
    mode = "count_all" if a.mode == "count" else "first"
    out = oracle_complete(S, params, mode, budget=a.budget, workers=a.workers)
    doc: dict = {"oracle": out.summary()}
    if out.first_completion is not None:
        doc["structure"] = out.first_completion.completed
        doc["added_blocks"] = [list(b) for b in out.first_completion.added_blocks]
    if out.budget_exhausted:
        doc["certificate"] = f"budget exhausted after {out.nodes} nodes"
        return EXIT_BUDGET, doc
    if out.completions_found == 0:
        doc["certificate"] = "oracle exhausted, 0 completions"
        return EXIT_NEGATIVE, doc
    return EXIT_OK, doc


def cmd_bounds(a) -> tuple[int, dict]:
    if a.n < 2:
        raise UsageError("--n must be at least 2")
    return EXIT_OK, {"bounds": bound_report(a.n).as_dict()}


def cmd_verify(a) -> tuple[int, dict]:
    S = _read(a.input, a.strict)
    vals = _ints(a.design)
    if len(vals) != 4:
        raise UsageError("--design takes T,V,K,L")
    try:
        params = DesignParams(*vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    full = is_design(S, params)
    doc = {
        "stats": stats(S),
        "design": {
            "t": params.t,
            "v": params.v,
            "k": params.k,
            "lambda": params.lam,
            "is_design": full,
            "is_partial_design": is_partial_design(S, params),
        },
    }
    return (EXIT_OK if full else EXIT_NEGATIVE), doc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="papc", description="Partial affine plane and inversive plane completion.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        sp.add_argument("--out", default="-", help="report destination (default stdout)")
        sp.add_argument("--pretty", action="store_true", help="indented output")
        if needs_input:
            sp.add_argument("--in", dest="input", default="-", help="incidence file or report (default stdin)")
            sp.add_argument("--strict", action="store_true", help="reject non-canonical input")

    def search(sp):
        sp.add_argument("--budget", type=int, default=None, help="node cap (default PAPC_BUDGET or 1e8)")
        sp.add_argument("--workers", type=int, default=1, help="processes for the oracle")

    sp = sub.add_parser("construct", help="build a classical structure")
    sp.add_argument("kind", choices=["affine", "projective", "inversive", "affine-space", "baer", "td"])
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--dim", type=int, default=2)
    common(sp, needs_input=False)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("delete", help="remove blocks")
    sp.add_argument("--blocks", help="comma-separated block indices")
    sp.add_argument("--random", type=int, help="number of blocks to delete at random")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--keep-equivalence", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_delete)

    sp = sub.add_parser("analyze", help="valencies, parallelism, bounds")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("complete", help="complete a partial affine plane")
    sp.add_argument("--method", choices=["auto", "low-valency", "projective", "oracle"], default="auto")
    common(sp)
    search(sp)
    sp.set_defaults(func=cmd_complete)

    sp = sub.add_parser("complete-inversive", help="complete a partial 3-(n^d+1, n+1, 1) design")
    common(sp)
    search(sp)
    sp.set_defaults(func=cmd_complete_inversive)

    sp = sub.add_parser("oracle", help="exhaustive completion search")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--v", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=int, default=1)
    sp.add_argument("--mode", choices=["first", "count"], default="first")
    common(sp)
    search(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bounds", help="line-count thresholds for order n")
    sp.add_argument("--n", type=int, required=True)
    common(sp, needs_input=False)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("verify", help="check a design predicate")
    sp.add_argument("--design", required=True, help="T,V,K,L")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def _emit(doc: dict, a) -> None:
    text = dumps(doc, pretty=a.pretty)
    if a.out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(a.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    t0 = time.perf_counter()
    try:
        code, sections = a.func(a)
        err = None
    except (UsageError, ParseError, ValueError) as exc:
        print(f"papc {a.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhausted as exc:
        code, err = EXIT_BUDGET, exc
        sections = {}
    except NEGATIVE as exc:
        code, err = EXIT_NEGATIVE, exc
        sections = {}
    except PapcError as exc:
        print(f"papc {a.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if err is not None:
        sections["error"] = {"type": type(err).__name__, "message": str(err)}
        sections["certificate"] = str(err)
        outcome = getattr(err, "outcome", None)
        if outcome is not None:
            sections["oracle"] = outcome.summary()
    doc = make_report(a.command, code == EXIT_OK, time.perf_counter() - t0, **sections)
    _emit(doc, a)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
