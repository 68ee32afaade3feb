"""Command-line front end: ``solve``, ``bench`` and ``verify``.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 oracle guard.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

from .engine import GuardExceeded, HeuristicSpec, Model, ModelError, solve_optimize
from .models import BUILDERS, build_free_matrix
from .oracle import verify_sound_complete
from .ordering import OrderingKind
from .symmetry import (
    SymmetryGroup,
    labs_symmetries,
    linearize,
    post_doublelex,
    post_leader_constraints,
    post_snakelex,
    queens_symmetries,
    rowcol_symmetries,
    square_symmetries,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_GUARD = 0, 1, 2, 3

MODEL_NAMES = ("still-life", "labs", "queens-armies", "matrix")
KINDS = ("anti-gray", "anti-lex", "gray", "lex")  # longest prefix first
MATRIX_MENU_SCHEMES = ("row", "col", "snake", "col-snake", "spiral")
SEQUENCE_MENU_SCHEMES = ("", "rev", "outside-in", "inside-out")


def _menu(schemes) -> list[str]:
    out = ["none"]
    for kind in ("lex", "anti-lex", "gray", "anti-gray"):
        for s in schemes:
            out.append(f"{kind} {s}".strip())
    return out


# symmetry-breaking rows of the still life, LABS and queens results tables
MENUS = {
    "still-life": _menu(MATRIX_MENU_SCHEMES),
    "labs": _menu(SEQUENCE_MENU_SCHEMES),
    "queens-armies": _menu(MATRIX_MENU_SCHEMES),
}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration parsing


@dataclass(frozen=True)
class Breaking:
    label: str
    kind: OrderingKind | None = None
    scheme: str | None = None
    decomposition: str | None = None  # "doublelex", "snakelex-col", "snakelex-row"
    strict: bool = False

    @property
    def is_leader(self) -> bool:
        return self.kind is not None


def _norm(text: str) -> str:
    return "-".join(text.strip().lower().replace("_", "-").split())


def parse_breaking(text: str, shape: tuple[int, ...] | None = None, strict: bool = False) -> Breaking:
    """Parse labels like ``"anti-gray col-snake"``, ``"lex-row"``, ``"gray"``,
    ``"none"``, ``"doublelex"`` or ``"snakelex-row"``."""
    s = _norm(text)
    if s in ("", "none"):
        return Breaking("none")
    if s == "doublelex":
        return Breaking("doublelex", decomposition="doublelex")
    if s in ("snakelex", "snakelex-col", "snakelex-columnwise"):
        return Breaking("snakelex", decomposition="snakelex-col")
    if s in ("snakelex-row", "snakelex-rowwise"):
        return Breaking("snakelex-row", decomposition="snakelex-row")
    for k in KINDS:
        if s == k or s.startswith(k + "-"):
            rest = s[len(k) + 1 :]
            break
    else:
        raise UsageError(f"unknown symmetry breaking {text!r}")
    sequence = shape is not None and len(shape) == 1
    scheme = rest or ("left2right" if sequence else "row")
    if shape is not None:
        try:
            linearize(shape, scheme)
        except ModelError as exc:
            raise UsageError(str(exc)) from None
    label = f"{k} {rest}" if rest else k
    return Breaking(label, OrderingKind(k), scheme, strict=strict)


def parse_heuristic(text: str, shape: tuple[int, ...]) -> HeuristicSpec:
    s = _norm(text)
    sequence = len(shape) == 1
    if s in ("degree", "constr"):
        return HeuristicSpec(s, name=s)
    if s in ("ff", "ff-spiral"):
        tie = "spiral-in" if s == "ff-spiral" else ("left2right" if sequence else "row")
        return HeuristicSpec("ff", linearize(shape, tie).order, name=s)
    try:
        lin = linearize(shape, s)
    except ModelError as exc:
        raise UsageError(f"unknown heuristic {text!r}: {exc}") from None
    return HeuristicSpec("static", lin.order, name=s)


def benchmark_group(model_name: str, shape: tuple[int, ...]) -> SymmetryGroup:
    if model_name == "still-life":
        return square_symmetries(shape[0])
    if model_name == "labs":
        return labs_symmetries(shape[0])
    if model_name == "queens-armies":
        return queens_symmetries(shape[0])
    if model_name == "matrix":
        return rowcol_symmetries(*shape)
    raise UsageError(f"unknown model {model_name!r}")


def breaker(model_name: str, brk: Breaking) -> Callable[[Model], Model]:
    """Function posting ``brk``'s constraints on a model."""

    def post(model: Model) -> Model:
        if brk.decomposition == "doublelex":
            return post_doublelex(model)
        if brk.decomposition == "snakelex-col":
            return post_snakelex(model, "columnwise")
        if brk.decomposition == "snakelex-row":
            return post_snakelex(model, "rowwise")
        if brk.kind is None:
            return model
        group = benchmark_group(model_name, model.shape)
        lin = linearize(model.shape, brk.scheme)
        return post_leader_constraints(model, group, brk.kind, lin, strict=brk.strict)

    return post


def build_model(model_name: str, size: str) -> Model:
    if model_name == "matrix":
        dims = size.lower().split("x")
        try:
            n, m = (int(dims[0]), int(dims[-1]))
        except ValueError:
            raise UsageError(f"bad matrix size {size!r}") from None
        return build_free_matrix(n, m)
    if model_name not in BUILDERS:
        raise UsageError(f"unknown model {model_name!r}; choose from {', '.join(BUILDERS)}")
    try:
        n = int(size)
    except ValueError:
        raise UsageError(f"bad size {size!r}") from None
    try:
        return BUILDERS[model_name](n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


@dataclass(frozen=True)
class RunConfig:
    model: str
    size: int
    breaking: str = "none"
    heuristic: str | None = None
    value_order: str = "ascending"
    node_budget: int | None = None
    time_budget: float | None = None


@dataclass
class RunResult:
    config: dict
    status: str
    optimum: int | None
    witness: list[int] | None
    backtracks: int
    nodes: int
    solutions: int
    time_ms: float


def run_config(cfg: RunConfig) -> RunResult:
    if cfg.model not in BUILDERS:
        raise UsageError(f"unknown model {cfg.model!r}")
    if cfg.value_order not in ("ascending", "descending"):
        raise UsageError(f"bad value order {cfg.value_order!r}")
    model = build_model(cfg.model, str(cfg.size))
    brk = parse_breaking(cfg.breaking, model.shape)
    heur_name = cfg.heuristic or ("left2right" if len(model.shape) == 1 else "row")
    heur = parse_heuristic(heur_name, model.shape)
    model = breaker(cfg.model, brk)(model)
    res = solve_optimize(model, heur, cfg.value_order, cfg.node_budget, cfg.time_budget)
    witness = None
    if res.witness is not None and res.status == "optimal":
        witness = [res.witness[x] for x in model.decision]
    echo = asdict(cfg)
    echo["breaking"] = brk.label
    echo["heuristic"] = heur_name
    return RunResult(
        config=echo,
        status=res.status,
        optimum=res.optimum,
        witness=witness,
        backtracks=res.stats.backtracks,
        nodes=res.stats.nodes,
        solutions=res.stats.solutions,
        time_ms=round(res.stats.time_ms, 3),
    )


# ---------------------------------------------------------------------------
# bench


CSV_COLUMNS = ["model", "n", "config", "heur", "status", "backtracks", "nodes", "optimum", "time-ms"]


def _bench_row(cfg: RunConfig, timing: bool) -> dict:
    row = {
        "model": cfg.model,
        "n": cfg.size,
        "config": cfg.breaking,
        "heur": cfg.heuristic or "",
        "status": "",
        "backtracks": "",
        "nodes": "",
        "optimum": "",
        "time-ms": "",
    }
    try:
        res = run_config(cfg)
    except (UsageError, ModelError, ValueError) as exc:
        row["status"] = f"error: {exc}"
        return row
    row.update(
        config=res.config["breaking"],
        heur=res.config["heuristic"],
        status=res.status,
        backtracks=res.backtracks,
        nodes=res.nodes,
        optimum="" if res.optimum is None else res.optimum,
    )
    if timing:
        row["time-ms"] = f"{res.time_ms:.1f}"
    return row


def _bench_row_args(args) -> dict:
    return _bench_row(*args)


def run_bench(configs: list[RunConfig], timing: bool = False, jobs: int = 1) -> str:
    """Run configs and return the CSV text; rows keep the input order."""
    work = [(c, timing) for c in configs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_bench_row_args, work))
    else:
        rows = [_bench_row(c, t) for c, t in work]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def read_sweep(path: str) -> list[RunConfig]:
    """Sweep file: CSV with header ``model,size,break`` and optional
    ``heur``, ``value_order``, ``node_budget`` and ``time_budget`` columns."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.DictReader(fh) if any((v or "").strip() for v in r.values())]
    out = []
    for r in rows:
        try:
            size = int(r["size"])
        except (KeyError, ValueError, TypeError):
            raise UsageError(f"sweep row without a valid size: {r}") from None
        nb = (r.get("node_budget") or "").strip()
        tb = (r.get("time_budget") or "").strip()
        out.append(
            RunConfig(
                model=(r.get("model") or "").strip(),
                size=size,
                breaking=(r.get("break") or "none").strip(),
                heuristic=(r.get("heur") or "").strip() or None,
                value_order=(r.get("value_order") or "ascending").strip(),
                node_budget=int(nb) if nb else None,
                time_budget=float(tb) if tb else None,
            )
        )
    return out


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODEL_NAMES)
    p.add_argument("--size")
    p.add_argument("--break", dest="breaking", default="none",
                   help='e.g. "anti-gray snake", "lex-row", "doublelex", "snakelex"')


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symbreak", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve one benchmark instance to optimality")
    p.add_argument("pos_model", nargs="?", metavar="MODEL")
    p.add_argument("pos_size", nargs="?", metavar="SIZE")
    _common(p)
    p.add_argument("--heur")
    p.add_argument("--value-order", choices=("ascending", "descending"), default="ascending")
    p.add_argument("--node-budget", type=int)
    p.add_argument("--time-budget", type=float, help="seconds")
    p.add_argument("--json", metavar="PATH")

    p = sub.add_parser("bench", help="run a sweep of configurations, emit CSV")
    p.add_argument("sweep", nargs="?", help="CSV sweep file")
    _common(p)
    p.add_argument("--menu", action="store_true",
                   help="sweep the whole symmetry-breaking menu for --model/--size")
    p.add_argument("--heur")
    p.add_argument("--value-order", choices=("ascending", "descending"), default="ascending")
    p.add_argument("--node-budget", type=int)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--csv", metavar="PATH")
    p.add_argument("--timing", action="store_true",
                   help="fill the time-ms column (makes output run-dependent)")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("verify", help="check soundness/completeness against orbits")
    p.add_argument("pos_model", nargs="?", metavar="MODEL")
    p.add_argument("pos_size", nargs="?", metavar="SIZE")
    _common(p)
    p.add_argument("--strict", action="store_true",
                   help="post strict leader constraints (expected to fail)")
    p.add_argument("--json", metavar="PATH")
    return parser


def _model_and_size(args) -> tuple[str, str]:
    model = args.model or getattr(args, "pos_model", None)
    size = args.size or getattr(args, "pos_size", None)
    if not model or not size:
        raise UsageError("need a model and a size")
    if model not in MODEL_NAMES:
        raise UsageError(f"unknown model {model!r}")
    return model, size


def cmd_solve(args) -> int:
    model, size = _model_and_size(args)
    if model == "matrix":
        raise UsageError("the matrix model has no objective; use verify")
    cfg = RunConfig(
        model=model,
        size=int(size),
        breaking=args.breaking,
        heuristic=args.heur,
        value_order=args.value_order,
        node_budget=args.node_budget,
        time_budget=args.time_budget,
    )
    res = run_config(cfg)
    print(
        f"{model} n={size} break={res.config['breaking']} heur={res.config['heuristic']}: "
        f"{res.status} optimum={res.optimum} backtracks={res.backtracks} "
        f"nodes={res.nodes} time={res.time_ms:.1f}ms"
    )
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(asdict(res), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.menu:
        model, size = _model_and_size(args)
        if model not in MENUS:
            raise UsageError(f"no menu for {model!r}")
        configs = [
            RunConfig(model, int(size), b, args.heur, args.value_order, args.node_budget,
                      args.time_budget)
            for b in MENUS[model]
        ]
    elif args.sweep:
        configs = read_sweep(args.sweep)
    else:
        raise UsageError("bench needs a sweep file or --menu")
    text = run_bench(configs, timing=args.timing, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def render_report(title: str, report) -> str:
    d = report.as_dict()
    lines = [
        title,
        f"  orbits: {d['orbit_count']}  solutions: {d['solutions']}  survivors: {d['survivors']}",
        f"  survivors per orbit: {d['survivor_histogram']}",
        f"  sound: {d['sound']}  complete: {d['complete']}"
        f"  canonical mismatches: {d['canonical_mismatches']}",
    ]
    if not report.complete:
        extra = sum(1 for s in report.survivors_per_orbit if s > 1)
        lines.append(f"  orbits with several survivors: {extra}")
    if d["first_counterexample"] is not None:
        lines.append(f"  counterexample: {d['first_counterexample']}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    model_name, size = _model_and_size(args)
    model = build_model(model_name, size)
    brk = parse_breaking(args.breaking, model.shape, strict=args.strict)
    group = benchmark_group(model_name, model.shape)
    leader = (brk.kind, linearize(model.shape, brk.scheme)) if brk.is_leader else None
    report = verify_sound_complete(model, group, breaker(model_name, brk), leader)
    title = f"verify {model_name} {size} break={brk.label}{' (strict)' if brk.strict else ''} group={group.name}"
    print(render_report(title, report))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    handlers = {"solve": cmd_solve, "bench": cmd_bench, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except GuardExceeded as exc:
        print(f"oracle guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
