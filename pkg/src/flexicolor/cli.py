"""Command-line surface: generate, solve, oracle, verify.

Results are plain line-oriented documents with exact rational bounds;
the exit status of solve and verify is 0 exactly when the certified
bound is met.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional

from .degeneracy import DegeneracyOrdering, flexible_degeneracy_order
from .errors import (
    BudgetExceededError,
    FlexicolorError,
    FormatError,
    PreconditionError,
)
from .instances import (
    FAMILIES,
    FIXTURES,
    FORMAT_HEADER,
    InstanceFile,
    parse,
    parse_dimacs,
    serialize,
)
from .listcolor import Request, check_coloring, satisfied_amount
from .maxdeg import solve_unweighted, solve_weighted
from .oracle import DEFAULT_BUDGET, optimal_satisfaction
from .treedepth import TdInstance, derandomized_coloring
from .treewidth import best_of_family, lambda_family, two_tree_family

RESULT_HEADER = "flexicolor-result 1"
ORACLE_HEADER = "flexicolor-oracle 1"

METHODS = (
    "maxdeg",
    "maxdeg-weighted",
    "two-tree",
    "lambda",
    "treedepth",
    "degeneracy",
)


def _load_instance(path: str) -> InstanceFile:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.startswith(FORMAT_HEADER):
        return parse(text)
    g = parse_dimacs(text)
    # graph-only ingestion: minimum admissible lists, no request
    delta = g.max_degree()
    L = {}
    for v in range(g.n):
        d = g.degree(v)
        size = d if d == delta else d + 1
        L[v] = set(range(1, max(size, 1) + 1))
    return InstanceFile(g, L)


def _fmt(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _emit(lines: list, out: Optional[str]) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _infer_classes(L: dict, lam: tuple) -> tuple:
    """Partition of the palette putting exactly lam[i] colors of every
    list into class i, found by backtracking over colors."""
    palette = sorted(set().union(*L.values()))
    t = len(lam)
    assign: dict = {}

    def counts_ok(final: bool) -> bool:
        # per-class counts never exceed the part sizes; at the end they
        # must match exactly
        for v, lst in L.items():
            done = [0] * t
            for c in lst:
                if c in assign:
                    done[assign[c]] += 1
            for i in range(t):
                if done[i] > lam[i]:
                    return False
                if final and done[i] != lam[i]:
                    return False
        return True

    def rec(i: int) -> bool:
        if i == len(palette):
            return counts_ok(True)
        for cls in range(t):
            assign[palette[i]] = cls
            if counts_ok(False) and rec(i + 1):
                return True
            del assign[palette[i]]
        return False

    if not rec(0):
        raise PreconditionError(
            f"lists admit no color-class partition with parts {lam}"
        )
    return tuple(
        tuple(c for c in palette if assign[c] == i) for i in range(t)
    )


def _solve(args) -> int:
    inst = _load_instance(args.instance)
    g, L, request = inst.g, inst.L, inst.request
    if request is None:
        raise PreconditionError("instance carries no request to solve for")
    method = args.method
    lines = [RESULT_HEADER, f"method {method}"]

    if method == "degeneracy":
        mode = args.independent_set or "greedy"
        outcome = flexible_degeneracy_order(g, sorted(request.domain()), mode)
        total = len(request.domain())
        satisfied = outcome.satisfied
        certified = outcome.certified_fraction
        lines += [
            f"satisfied {satisfied}",
            f"certified {_fmt(certified)}",
            f"total {total}",
            f"degeneracy {outcome.ordering.k}",
            "order " + " ".join(str(v) for v in outcome.ordering.order),
            "first " + " ".join(str(v) for v in sorted(outcome.ordering.first)),
        ]
        met = satisfied >= certified * total
        lines.append(f"bound-met {'yes' if met else 'no'}")
        _emit(lines, args.out)
        return 0 if met else 1

    if method == "maxdeg":
        mode = args.independent_set or "brooks"
        outcome = solve_unweighted(g, L, request, mode)
        coloring = outcome.coloring
        satisfied = outcome.satisfied
        certified = outcome.certified_fraction
        total = outcome.request_total
    elif method == "maxdeg-weighted":
        mode = args.independent_set or "greedy"
        outcome = solve_weighted(g, L, request, mode)
        coloring = outcome.coloring
        satisfied = outcome.satisfied
        certified = outcome.certified_fraction
        total = outcome.request_total
    elif method == "two-tree":
        if inst.ktree is None or inst.ktree.k != 2:
            raise PreconditionError(
                "method two-tree needs an instance with a 2-tree order"
            )
        family = two_tree_family(g, inst.ktree, L)
        coloring = best_of_family(g, L, family, request)
        satisfied = satisfied_amount(g, L, coloring, request)
        certified = Fraction(1, family.period)
        total = request.total()
    elif method == "lambda":
        if inst.ktree is None:
            raise PreconditionError(
                "method lambda needs an instance with a k-tree order"
            )
        if not args.lam:
            raise PreconditionError("method lambda needs --lam, e.g. --lam 1,2")
        lam = tuple(int(p) for p in args.lam.split(","))
        classes = _infer_classes(L, lam)
        family = lambda_family(g, inst.ktree, lam, classes, L)
        coloring = best_of_family(g, L, family, request)
        satisfied = satisfied_amount(g, L, coloring, request)
        certified = Fraction(1, family.period)
        total = request.total()
    elif method == "treedepth":
        if inst.forest is None:
            raise PreconditionError(
                "method treedepth needs an instance with a treedepth forest"
            )
        td = TdInstance(g, inst.forest, L)
        k = td.k
        if request.kind == "unweighted":
            unique = Request(
                "unique",
                prefs=dict(request.prefs),
                weights={v: Fraction(1) for v in request.prefs},
            )
            certified = Fraction(1, k)
        elif request.kind == "unique":
            unique = request
            certified = Fraction(1, k)
        else:
            from .listcolor import reduce_to_unique

            unique = reduce_to_unique(request, L)
            certified = Fraction(1, k * max(len(L[v]) for v in range(g.n)))
        coloring = derandomized_coloring(td, unique)
        satisfied = satisfied_amount(g, L, coloring, request)
        total = request.total()
    else:
        raise PreconditionError(f"unknown method {method!r}")

    lines += [
        f"satisfied {_fmt(satisfied)}",
        f"certified {_fmt(certified)}",
        f"total {_fmt(total)}",
    ]
    for v in sorted(coloring):
        lines.append(f"color {v} {coloring[v]}")
    met = satisfied >= certified * total
    lines.append(f"bound-met {'yes' if met else 'no'}")
    _emit(lines, args.out)
    return 0 if met else 1


def _oracle(args) -> int:
    inst = _load_instance(args.instance)
    if inst.request is None:
        raise PreconditionError("instance carries no request")
    res = optimal_satisfaction(inst.g, inst.L, inst.request, args.budget)
    lines = [
        ORACLE_HEADER,
        f"optimum {_fmt(res.optimum)}",
        f"colorable {'yes' if res.colorable else 'no'}",
        f"enumerated {res.enumerated}",
    ]
    if res.coloring is not None:
        for v in sorted(res.coloring):
            lines.append(f"color {v} {res.coloring[v]}")
    _emit(lines, args.out)
    return 0


def _generate(args) -> int:
    name = args.name
    if name in FIXTURES:
        inst = FIXTURES[name]()
    elif name in FAMILIES:
        kwargs = {"seed": args.seed if args.seed is not None else 0, "n": args.n}
        if name == "bounded-degree":
            kwargs["delta"] = args.delta
        elif name == "ktree":
            kwargs["k"] = args.k
        elif name == "treedepth":
            kwargs["height"] = args.height
        inst = FAMILIES[name](**kwargs)
    else:
        known = sorted(list(FIXTURES) + list(FAMILIES))
        raise PreconditionError(f"unknown generator {name!r}; known: {known}")
    _emit(serialize(inst).splitlines(), args.out)
    return 0


def _parse_result(text: str) -> dict:
    lines = text.splitlines()
    if not lines or lines[0] != RESULT_HEADER:
        raise FormatError(f"missing header {RESULT_HEADER!r}", line=1)
    doc: dict = {"coloring": {}}
    for i, raw in enumerate(lines[1:], start=2):
        toks = raw.split(" ")
        key, args = toks[0], toks[1:]
        if key == "method":
            doc["method"] = args[0]
        elif key in ("satisfied", "certified", "total"):
            try:
                doc[key] = Fraction(args[0])
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"bad rational {args[0]!r}", line=i)
        elif key == "color":
            doc["coloring"][int(args[0])] = int(args[1])
        elif key == "degeneracy":
            doc["degeneracy"] = int(args[0])
        elif key == "order":
            doc["order"] = tuple(int(a) for a in args)
        elif key == "first":
            doc["first"] = frozenset(int(a) for a in args)
        elif key == "bound-met":
            doc["bound_met"] = args[0] == "yes"
        else:
            raise FormatError(f"unknown key {key!r}", line=i)
    for needed in ("method", "satisfied", "certified", "total"):
        if needed not in doc:
            raise FormatError(f"result misses {needed!r}")
    return doc


def _verify(args) -> int:
    inst = _load_instance(args.instance)
    with open(args.result, "r", encoding="utf-8") as fh:
        doc = _parse_result(fh.read())
    g, L, request = inst.g, inst.L, inst.request
    if request is None:
        raise PreconditionError("instance carries no request")

    if doc["method"] == "degeneracy":
        if "order" not in doc or "degeneracy" not in doc:
            raise FormatError("degeneracy result misses its ordering")
        ordering = DegeneracyOrdering(
            doc["order"], doc["degeneracy"], doc.get("first", frozenset())
        )
        ordering.validate(g)
        pos = {v: i for i, v in enumerate(doc["order"])}
        true_first = frozenset(
            v
            for v in range(g.n)
            if all(pos[u] > pos[v] for u in g.neighbors(v))
        )
        if doc.get("first", frozenset()) - true_first:
            raise PreconditionError(
                "result marks vertices as first among neighbors that are not"
            )
        satisfied = Fraction(len(true_first & request.domain()))
    else:
        coloring = doc["coloring"]
        check_coloring(g, L, coloring)
        satisfied = Fraction(satisfied_amount(g, L, coloring, request))

    if satisfied != doc["satisfied"]:
        raise PreconditionError(
            f"stated satisfied amount {doc['satisfied']} differs from the "
            f"recomputed {satisfied}"
        )
    met = satisfied >= doc["certified"] * doc["total"]
    print(f"verified satisfied={_fmt(satisfied)} bound-met={'yes' if met else 'no'}")
    return 0 if met else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="flexicolor",
        description="Constructive flexible list coloring toolkit",
    )
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="emit a fixture or random instance")
    gen.add_argument("name")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--n", type=int, default=12)
    gen.add_argument("--delta", type=int, default=3)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--height", type=int, default=3)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=_generate)

    slv = sub.add_parser("solve", help="run a solver on an instance")
    slv.add_argument("instance")
    slv.add_argument("--method", choices=METHODS, required=True)
    slv.add_argument("--seed", type=int, default=0)
    slv.add_argument("--independent-set", choices=("greedy", "brooks"), default=None)
    slv.add_argument("--lam", default=None)
    slv.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    slv.add_argument("--out", default=None)
    slv.set_defaults(func=_solve)

    orc = sub.add_parser("oracle", help="exact optimum by exhaustion")
    orc.add_argument("instance")
    orc.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    orc.add_argument("--out", default=None)
    orc.set_defaults(func=_oracle)

    ver = sub.add_parser("verify", help="re-check an emitted result")
    ver.add_argument("instance")
    ver.add_argument("result")
    ver.set_defaults(func=_verify)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        where = f" line={exc.line}" if getattr(exc, "line", None) else ""
        print(f"error format{where} {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"error budget {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"error precondition {exc}", file=sys.stderr)
        return 2
    except FlexicolorError as exc:
        print(f"error internal {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error io {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
