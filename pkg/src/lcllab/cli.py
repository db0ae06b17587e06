"""Command line: ``lcllab gen | check | run | experiment``.

Global flags come before the subcommand.  Defaults for ``--seed``,
``--jobs``, ``--json`` and ``--trials`` may be set through ``LCLLAB_SEED``,
``LCLLAB_JOBS``, ``LCLLAB_JSON`` and ``LCLLAB_TRIALS``; explicit flags win.

Exit codes: 0 success (empty report, valid run, all experiment rows on
target), 1 a negative verdict, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import random
import sys

from . import algorithms
from . import experiments as ex
from .constraints import check, check_grid, check_tree, check_vgrid
from .generators import (CORRUPTIONS, Corruption, FamilyParams, corrupt, gen_family_instance, gen_grid, gen_tree,
                         label_vertical)
from .graph import GRID, TREE, LabeledGraph, dumps, loads, project
from .simulator import LocalityViolation, Model, derive_seed, run_local, run_online_local, run_slocal, wilson

log = logging.getLogger("lcllab")

STRUCTURE_CHECKERS = {"tree": check_tree, "grid": check_grid, "vgrid": check_vgrid}
PROBLEM_CHECKERS = ("badTree", "badGraph", "pi")
AGGREGATE_COLUMNS = ("n", "trials", "rate", "ci_low", "ci_high", "locality_used")


class InputError(Exception):
    pass


def _env(name, default, cast=str):
    raw = os.environ.get("LCLLAB_" + name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"lcllab: cannot read LCLLAB_{name}={raw!r}")


def _flag(raw: str) -> bool:
    return raw.strip().lower() in ("1", "true", "yes", "on")


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        lines = text.split("\n")
        line = lines[e.lineno - 1] if e.lineno <= len(lines) else ""
        snippet = line[max(0, e.colno - 40): e.colno + 40]
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}\n    {snippet}")


def read_graph_file(path: str) -> LabeledGraph:
    data = _read_json(path)
    try:
        return loads(json.dumps(data))
    except ValueError as e:
        raise InputError(f"{path}: {e}")


def read_outputs(path: str) -> dict[int, str]:
    data = _read_json(path)
    if isinstance(data, dict) and "outputs" in data:
        data = data["outputs"]
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected an object mapping node id to output")
    try:
        return {int(k): v for k, v in data.items()}
    except ValueError as e:
        raise InputError(f"{path}: {e}")


def _write(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _bits(spec: str | None) -> dict[int, int]:
    if not spec:
        return {}
    out = {}
    for part in spec.split(","):
        row, _, bit = part.partition(":")
        out[int(row)] = int(bit)
    return out


# gen

def cmd_gen(args) -> int:
    if args.kind == "family":
        bits = _bits(args.input_bits)
        if args.random_inputs:
            bits = ex.random_inputs(args.ell, derive_seed(args.seed, 11))
        p = FamilyParams(args.ell, args.w, bits, args.seed)
        try:
            g = gen_family_instance(p)
        except ValueError as e:
            raise InputError(str(e))
    elif args.kind == "tree":
        g = gen_tree(args.ell, seed=args.seed)
    else:
        g = gen_grid(args.h, args.w, seed=args.seed)
        if args.kind == "vgrid":
            try:
                g = label_vertical(g)
            except ValueError as e:
                raise InputError(str(e))
    if args.corrupt:
        try:
            g, record = corrupt(g, Corruption(args.corrupt, seed=args.corrupt_seed))
        except ValueError as e:
            raise InputError(str(e))
        log.info("corruption: %s", record)
    _write(dumps(g) + "\n", args.out)
    return 0


# check

def cmd_check(args) -> int:
    g = read_graph_file(args.file)
    if args.projection:
        g = project(g, TREE if args.projection == "tree" else GRID)
    try:
        if args.checker in STRUCTURE_CHECKERS:
            report = STRUCTURE_CHECKERS[args.checker](g)
        else:
            if args.outputs:
                out = read_outputs(args.outputs)
            elif args.checker == "pi":
                raise InputError("the pi checker needs --outputs")
            else:
                out = {u: "bot" for u in g.nodes}
            report = check(args.checker, g, out)
    except ValueError as e:
        raise InputError(str(e))
    if args.json:
        print(json.dumps({"ok": report.ok, "violations": [v.to_json() for v in report]}))
    else:
        text = report.to_jsonl()
        if text:
            print(text)
        print(f"{len(report)} violation(s)", file=sys.stderr)
    return 0 if report.ok else 1


# run

def _with_locality(alg, T: int):
    """Same algorithm with its locality budget replaced by ``T``."""
    alg.locality = lambda n: T
    return alg


def _order(args, g: LabeledGraph, trial: int) -> list[int]:
    if args.order == "leftmost-first":
        try:
            return algorithms.adversary_order("slocal", g)
        except ValueError as e:
            raise InputError(str(e))
    if args.order == "file":
        if not args.order_file:
            raise InputError("--order file needs --order-file")
        data = _read_json(args.order_file)
        return [int(u) for u in data]
    order = list(g.nodes)
    random.Random(derive_seed(args.seed, 12, trial)).shuffle(order)
    return order


def cmd_run(args) -> int:
    g = read_graph_file(args.file)
    kwargs = {}
    if args.T is not None and args.alg == "online-row-copy":
        kwargs["radius"] = args.T
    try:
        alg = algorithms.get(args.alg, **kwargs)
    except KeyError as e:
        raise InputError(str(e.args[0]))
    if args.T is not None and "radius" not in kwargs:
        alg = _with_locality(alg, args.T)
    first = None
    ok = used = 0
    for i in range(args.trials):
        seed = derive_seed(args.seed, i)
        model = Model(args.model, seed, args.id_seed, not args.withhold_n)
        try:
            if args.model.startswith("slocal"):
                res = run_slocal(alg, g, _order(args, g, i), model)
            elif args.model.startswith("online"):
                res = run_online_local(alg, g, _order(args, g, i), model)
            else:
                res = run_local(alg, g, model)
        except LocalityViolation as e:
            print(f"lcllab: locality violation: {e}", file=sys.stderr)
            return 1
        except ValueError as e:
            raise InputError(str(e))
        if first is None:
            first = res
        ok += bool(res.valid)
        used = max(used, res.localityUsed)
    lo, hi = wilson(ok, args.trials)
    agg = {"n": g.n, "trials": args.trials, "rate": ok / args.trials, "ci_low": lo, "ci_high": hi,
           "locality_used": used}
    result = first.to_dict()
    result.update({"alg": alg.name, "model": args.model, "aggregate": agg})
    _write(json.dumps(result) + "\n", args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.DictWriter(fh, fieldnames=AGGREGATE_COLUMNS)
            wr.writeheader()
            wr.writerow(agg)
    if args.out not in (None, "-") or args.json:
        print(json.dumps(agg))
    return 0 if ok == args.trials else 1


# experiment

def _sizes(spec: str | None):
    if not spec:
        return []
    out = []
    for part in spec.split(","):
        ell, _, w = part.lower().partition("x")
        out.append((int(ell), int(w)))
    return out


def cmd_experiment(args) -> int:
    try:
        spec = ex.ExperimentSpec(args.name, _sizes(args.sizes), args.trials, args.seed, args.jobs,
                                 args.estimate_trials, tuple(int(x) for x in args.paddings.split(",")))
    except ValueError as e:
        raise InputError(str(e))
    rows = ex.run_experiment(spec)
    _write(ex.to_csv(rows), args.out)
    text = ex.summary(spec, rows)
    if args.summary:
        _write(text, args.summary)
    else:
        sys.stderr.write(text)
    judged = [r for r in rows if r["passed"] != ""]
    return 0 if all(r["passed"] for r in judged) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcllab", description=__doc__.split("\n")[0])
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    p.add_argument("--jobs", type=int, default=_env("JOBS", 1, int))
    p.add_argument("--json", action="store_true", default=_env("JSON", False, _flag))
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a canonical (optionally corrupted) instance as JSON")
    g.add_argument("--kind", choices=("family", "tree", "grid", "vgrid"), default="family")
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--w", type=int, default=2)
    g.add_argument("--h", type=int, default=2)
    g.add_argument("--input-bits", help="right-end bits as row:bit,row:bit")
    g.add_argument("--random-inputs", action="store_true")
    g.add_argument("--corrupt", choices=CORRUPTIONS)
    g.add_argument("--corrupt-seed", type=int, default=0)
    g.add_argument("-o", "--out")
    g.set_defaults(fn=cmd_gen)

    c = sub.add_parser("check", help="run a checker; exit 0 iff the report is empty")
    c.add_argument("file")
    c.add_argument("--checker", choices=tuple(STRUCTURE_CHECKERS) + PROBLEM_CHECKERS, required=True)
    c.add_argument("--projection", choices=("tree", "grid"), help="check this projection of a family instance")
    c.add_argument("--outputs", help="JSON outputs (a run result or an id -> output object)")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("run", help="simulate an algorithm; exit 0 iff every trial is valid")
    r.add_argument("file")
    r.add_argument("--alg", required=True, help=", ".join(sorted(algorithms.REGISTRY)))
    r.add_argument("--model", default="local-shared",
                   choices=("local-det", "local-private", "local-shared", "slocal-private", "online-local-det"))
    r.add_argument("--T", type=int, help="locality budget (reveal radius for online-row-copy)")
    r.add_argument("--trials", type=int, default=_env("TRIALS", 1, int))
    r.add_argument("--order", choices=("random", "leftmost-first", "file"), default="random")
    r.add_argument("--order-file")
    r.add_argument("--id-seed", type=int)
    r.add_argument("--withhold-n", action="store_true")
    r.add_argument("-o", "--out")
    r.add_argument("--csv")
    r.set_defaults(fn=cmd_run)

    e = sub.add_parser("experiment", help="run a named experiment; writes CSV and a summary")
    e.add_argument("name", choices=ex.NAMES)
    e.add_argument("--sizes", help="ell x w list, e.g. 4x16,5x32")
    e.add_argument("--trials", type=int, default=_env("TRIALS", 2000, int))
    e.add_argument("--estimate-trials", type=int, default=200)
    e.add_argument("--paddings", default="1,10,100")
    e.add_argument("-o", "--out")
    e.add_argument("--summary")
    e.set_defaults(fn=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.fn(args)
    except InputError as e:
        print(f"lcllab: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
