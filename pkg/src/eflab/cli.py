"""``ef-lab`` command-line interface.

Every subcommand builds a report (a JSON-serialisable dict, and for
Monte Carlo commands a list of per-trial rows) and writes it in the
requested format.  Monte Carlo runs with ``--output`` also write a
manifest next to the data file; ``ef-lab replay MANIFEST`` re-runs it and
checks the data bytes.

Exit codes: 0 success, 1 domain error, 2 usage error (bad flags, missing
files, guard violations, invalid manifests).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import re
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import bounds as bd
from .constructions import (
    ReductionBudget,
    build_T0,
    build_diverging_tree,
    diverging_order_range,
    is_diverging,
    reduce_tree_report,
)
from .forests import ClassPool, find_union_threshold, forest_signature
from .formula import evaluate, parse, quantifier_depth
from .game import (
    DEFAULT_LIMITS,
    FO,
    GRAPH,
    MSO,
    ROOTED_TREE,
    GameEngine,
    SizeGuardError,
    classify,
    game_value,
    initial_position,
)
from .graphs import (
    Graph,
    RootedTree,
    format_graph,
    format_rooted_tree,
    metrics,
    parse_graph,
    parse_rooted_tree,
    path_graph,
    tree_canonical_code,
)
from .random_graphs import (
    RegimeWarning,
    SampleConfig,
    component_census,
    connectivity_trials,
    containment_probability,
    poisson_experiment,
    sample,
    verify_T_properties,
)
from .strategy import scaled_instances, spoiler_play

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2

# default size guards; raising one needs --force
MAX_N = 200_000
MAX_TRIALS = 100_000
MAX_TREE_ORDER = 16

# one descriptive statement per subcommand, embedded in every report
CITATIONS = {
    "eval-formula": "truth of a sentence in a finite structure; quantifier depth",
    "ef-game": "Duplicator wins the k-round game iff the structures agree on all depth-k sentences",
    "classify": "k-equivalence classes of finite structures",
    "signature": "k-type of a disjoint union is determined by component types with capped multiplicities",
    "threshold": "t and t+1 disjoint copies of a structure become k-equivalent for large t",
    "sample": "G(n, p) with independent edges",
    "census": "component structure of G(n, p)",
    "t-check": "for 1+1/(l+1) < alpha < 1+1/l, G(n, n^-alpha) is a.a.s. a forest with components of order <= l+1, each such tree occurring many times",
    "poisson-test": "copies of a strictly balanced graph at its threshold are asymptotically Poisson(c^e/aut)",
    "containment": "at p = n^(-1-1/l) a fixed tree on l+1 vertices is a component with limiting probability 1-exp(-1/aut)",
    "connectivity": "G(n, p) is connected a.a.s. iff n p - ln n tends to infinity",
    "construct-diverging": "diverging trees of radius i+1 exist for every order in a range above 2i+2",
    "build-t0": "the forest with a copies of every tree on at most l+1 vertices",
    "reduce-tree": "every rooted tree is k-equivalent to one with bounded sibling repetitions and path lengths",
    "spoiler-demo": "Spoiler wins the k-round game on forests when one side has a diverging component of radius k-2 the other lacks",
    "bounds": "tower-type bounds on the number of k-equivalence classes",
    "law-region": "zero-one laws and k-laws for G(n, n^-alpha)",
    "verify-constants": "small-structure counts behind the rooted-tree class bound",
    "replay": "manifest-driven re-execution",
}

MONTE_CARLO = {"sample", "census", "t-check", "poisson-test", "containment", "connectivity"}


class UsageError(Exception):
    pass


class ManifestError(UsageError):
    pass


# ---------------------------------------------------------------------------
# I/O helpers


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return p.read_text(encoding="utf-8")


def _load_graph(path: str) -> Graph:
    return parse_graph(_read(path))


def _load_tree(path: str):
    text = _read(path)
    if any(line.strip().startswith("root") for line in text.splitlines()):
        return parse_rooted_tree(text)
    return parse_graph(text)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bytes):
        return obj.decode("ascii")
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def dumps_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default) + "\n"


def dumps_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        fields = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def dumps_gnuplot(rows: list[dict]) -> str:
    if not rows:
        return ""
    fields = list(rows[0])
    lines = ["# " + " ".join(fields)]
    for r in rows:
        lines.append(" ".join(_gnuplot_cell(r[f]) for f in fields))
    return "\n".join(lines) + "\n"


def _gnuplot_cell(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, float)):
        return repr(v)
    s = str(v)
    return f'"{s}"' if (not s or any(c.isspace() for c in s)) else s


def render(report: dict, rows: list[dict] | None, fmt: str) -> str:
    if fmt == "json":
        return dumps_json(report)
    if rows is None:
        raise UsageError(f"this subcommand has no tabular output; use --format json, not {fmt}")
    return dumps_csv(rows) if fmt == "csv" else dumps_gnuplot(rows)


def _write(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# guards


def _guard(args, name: str, value, default) -> None:
    if value is not None and value > default and not args.force:
        raise UsageError(f"--{name} {value} exceeds the default guard {default}; pass --force to raise it")


def _game_limit(args, logic: str) -> int:
    default = DEFAULT_LIMITS[logic]
    _guard(args, "max-vertices", args.max_vertices, default)
    return args.max_vertices if args.max_vertices is not None else default


def _mc_guards(args) -> None:
    _guard(args, "n", getattr(args, "n", None), MAX_N)
    _guard(args, "trials", getattr(args, "trials", None), MAX_TRIALS)


def _sample_config(args) -> SampleConfig:
    _mc_guards(args)
    alpha = _fraction_or_float(args.alpha) if args.alpha is not None else None
    return SampleConfig(args.n, alpha=alpha, p=args.p, seed=args.seed, trials=args.trials)


def _fraction_or_float(text: str) -> float:
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad number {text!r}") from exc


_TOWER = re.compile(r"^\s*T\((\d+)\)\s*$")


def _parse_l(text: str | None):
    if text is None:
        return None
    m = _TOWER.match(text)
    if m:
        return bd.tower(int(m.group(1)))
    try:
        return int(text)
    except ValueError as exc:
        raise UsageError(f"--l must be an integer or T(s), got {text!r}") from exc


def _base(args, **extra) -> dict:
    # deterministic commands report seed null
    out = {"citation": CITATIONS[args.command], "version": __version__,
           "seed": getattr(args, "seed", None)}
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# subcommands: logic and games


def cmd_eval_formula(args):
    text = args.formula if args.formula is not None else _read(args.formula_file)
    f = parse(text, args.vocab)
    structure = parse_rooted_tree(_read(args.graph_file)) if args.vocab == ROOTED_TREE else _load_graph(args.graph_file)
    value = evaluate(f, structure)
    depth = quantifier_depth(f)
    if args.format == "json":
        return _base(args, value=value, depth=depth), None
    if args.format == "text":
        return f"{'true' if value else 'false'}\ndepth {depth}\n", None
    return _base(args), [{"value": str(value).lower(), "depth": depth}]


def cmd_ef_game(args):
    limit = _game_limit(args, args.logic)
    load = (lambda p: parse_rooted_tree(_read(p))) if args.vocab == ROOTED_TREE else _load_graph
    left, right = load(args.left), load(args.right)
    pos = initial_position(left, right, args.k, args.logic, args.vocab)
    out = game_value(pos, method=args.method, max_vertices=limit)
    return _base(
        args,
        winner=out.winner,
        rounds=out.rounds,
        witness=out.witness.to_json() if out.witness is not None else None,
        k=args.k,
        logic=args.logic,
        vocab=args.vocab,
    ), None


def cmd_classify(args):
    limit = _game_limit(args, args.logic)
    folder = Path(args.directory)
    if not folder.is_dir():
        raise UsageError(f"no such directory: {args.directory}")
    files = sorted(p for p in folder.iterdir() if p.is_file() and p.suffix == ".txt")
    if not files:
        raise UsageError(f"no .txt structure files in {args.directory}")
    if args.vocab == ROOTED_TREE:
        structures = [parse_rooted_tree(p.read_text(encoding="utf-8")) for p in files]
    else:
        structures = [parse_graph(p.read_text(encoding="utf-8")) for p in files]
    ids = classify(structures, args.k, args.logic, args.vocab, GameEngine(args.logic, args.vocab, limit))
    rows = [{"file": p.name, "class_id": c} for p, c in zip(files, ids)]
    return _base(args, k=args.k, logic=args.logic, classes=len(set(ids)), assignments=rows), rows


def cmd_signature(args):
    limit = _game_limit(args, args.logic)
    g = _load_graph(args.forest)
    pool = ClassPool(args.k, args.logic, max_vertices=limit, max_probe=args.max_probe)
    sig = forest_signature(g, args.k, args.logic, pool, cap=args.cap)
    classes = [
        {"class_id": cid, "vertices": rep.vertex_count, "threshold": pool.certificate(cid).threshold}
        for cid, rep in enumerate(pool.representatives)
    ]
    return _base(args, signature=sig.to_json(), classes=classes), None


def cmd_threshold(args):
    limit = _game_limit(args, args.logic)
    g = _load_graph(args.graph)
    cert = find_union_threshold(g, args.k, args.logic, args.max_probe, args.probes, max_vertices=limit)
    return _base(args, certificate=cert.to_json()), None


# ---------------------------------------------------------------------------
# subcommands: random graphs


def cmd_sample(args):
    config = _sample_config(args)
    rows = []
    for t in range(config.trials):
        g = sample(config, t)
        rows.append({"trial": t, "vertices": g.vertex_count, "edges": g.edge_count})
    report = _base(args, config=config.to_json(), trials=rows)
    if args.emit_graph is not None:
        if not 0 <= args.emit_graph < config.trials:
            raise UsageError("--emit-graph must name a trial index")
        report["graph"] = format_graph(sample(config, args.emit_graph))
    return report, rows


def cmd_census(args):
    if args.graph is not None:
        census = component_census(_load_graph(args.graph))
        rows = [
            {"trial": 0, "code": code.decode("ascii"), "order": len(code) // 2, "count": n}
            for code, n in sorted(census.counts.items())
        ]
        return _base(args, census=census.to_json()), rows
    config = _sample_config(args)
    rows, summaries = [], []
    for t in range(config.trials):
        census = component_census(sample(config, t))
        summaries.append({
            "trial": t,
            "forest": int(census.is_forest),
            "max_component_order": census.max_component_order,
            "components": census.component_count,
            "non_tree_components": len(census.non_tree_orders),
        })
        rows.extend(
            {"trial": t, "code": code.decode("ascii"), "order": len(code) // 2, "count": n}
            for code, n in sorted(census.counts.items())
        )
    return _base(args, config=config.to_json(), trials=summaries), rows


def cmd_t_check(args):
    config = _sample_config(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegimeWarning)
        report = verify_T_properties(config, args.l)
    out = _base(args, report=report.to_json())
    out["warnings"] = [str(w.message) for w in caught]
    return out, report.rows()


_PATTERNS = {
    "edge": lambda: path_graph(2),
    "path3": lambda: path_graph(3),
    "triangle": lambda: Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
}


def _pattern(args) -> Graph:
    if args.pattern_file is not None:
        return _load_graph(args.pattern_file)
    return _PATTERNS[args.pattern]()


def cmd_poisson_test(args):
    _mc_guards(args)
    report = poisson_experiment(_pattern(args), args.c, args.n, args.trials, args.seed)
    return _base(args, report=report.to_json()), report.rows()


def cmd_containment(args):
    _mc_guards(args)
    report = containment_probability(args.l, _pattern(args), args.n, args.trials, args.seed)
    return _base(args, report=report.to_json()), report.rows()


def cmd_connectivity(args):
    _mc_guards(args)
    if (args.p is None) == (args.log_factor is None):
        raise UsageError("give exactly one of --p and --log-factor")
    p = args.p if args.p is not None else min(1.0, args.log_factor * math.log(args.n) / args.n)
    config = SampleConfig(args.n, p=p, seed=args.seed, trials=args.trials)
    hits = connectivity_trials(config)
    rows = [{"trial": t, "connected": int(h)} for t, h in enumerate(hits)]
    return _base(args, config=config.to_json(), frequency=sum(hits) / len(hits)), rows


# ---------------------------------------------------------------------------
# subcommands: constructions and strategy


def cmd_construct_diverging(args):
    _guard(args, "order", args.order, MAX_TREE_ORDER)
    t = build_diverging_tree(args.order, args.i, limit=max(args.order, MAX_TREE_ORDER))
    m = metrics(t)
    lo, hi = diverging_order_range(args.i)
    return _base(
        args,
        i=args.i,
        order=args.order,
        order_range=[lo, hi],
        radius=m.radius,
        diverging=is_diverging(t),
        code=tree_canonical_code(t).decode("ascii"),
        graph=format_graph(t),
    ), None


def cmd_build_t0(args):
    f = build_T0(args.l, args.a, args.include_order)
    g = f.to_graph()
    return _base(args, l=args.l, a=args.a, components=len(f), vertices=g.vertex_count,
                 graph=format_graph(g)), None


def cmd_reduce_tree(args):
    t = _load_tree(args.tree)
    if isinstance(t, Graph):
        t = RootedTree.from_graph(t, 0)
    _guard(args, "max-vertices", args.max_vertices, DEFAULT_LIMITS[args.logic])
    if args.z is not None:
        budget = ReductionBudget.with_caps(args.k, args.z, args.depth_cap, logic=args.logic)
    else:
        budget = ReductionBudget.empirical(args.k, args.logic, args.budget_order)
    result = reduce_tree_report(t, args.k, budget, args.logic, verify=not args.no_verify,
                                max_vertices=args.max_vertices)
    return _base(args, budget=budget.to_json(), result=result.to_json(),
                 tree=format_rooted_tree(result.tree)), None


def cmd_spoiler_demo(args):
    library = {inst.name: inst for inst in scaled_instances()}
    if args.list:
        return _base(args, instances=[
            {"name": i.name, "k": i.k, "S": format_graph(i.S), "A": format_graph(i.A), "B": format_graph(i.B)}
            for i in library.values()
        ]), None
    if args.instance is not None:
        if args.instance not in library:
            raise UsageError(f"unknown instance {args.instance!r}; see --list")
        inst = library[args.instance]
        A, B, S, k = inst.A, inst.B, inst.S, inst.k
        if args.k is not None and args.k != k:
            raise UsageError(f"instance {inst.name} is for k={k}")
    else:
        if None in (args.a, args.b, args.s, args.k):
            raise UsageError("give --instance, or --k with --a, --b and --s files")
        A, B, S, k = _load_graph(args.a), _load_graph(args.b), _load_graph(args.s), args.k
    _guard(args, "k", k, 5)
    tr = spoiler_play(A, B, S, k, duplicator=args.duplicator)
    return _base(args, transcript=tr.to_json()), None


# ---------------------------------------------------------------------------
# subcommands: bounds


def cmd_bounds(args):
    structure = bd._structure(args.structure)
    report = _base(args, k=args.k, structure=structure)
    bound, audit = bd.class_count_bound(args.k, "mso", structure)
    report["class_count_bound"] = bound.to_json()
    report["chain_audit"] = audit.to_json() if audit is not None else None
    report["rank_bound"] = bd.ehr_bound(args.k, 0, 0, structure).to_json()
    if structure == bd.TREES:
        report["representative_bound"] = bd.min_representative_bound(args.k).to_json()
    return report, None


def cmd_law_region(args):
    l = _parse_l(args.l)
    queries = []
    if args.alpha is not None:
        queries.append({"alpha": args.alpha, "verdicts": bd.law_region(args.alpha, args.k, None)})
    if l is not None:
        alpha = None
        if isinstance(l, int):
            alpha = str(1 + Fraction(1, l))
        queries.append({"l": args.l, "alpha": alpha if alpha else f"1+1/{args.l}",
                        "verdicts": bd.law_region(None, args.k, l)})
    if not queries:
        raise UsageError("give --alpha and/or --l")
    return _base(args, k=args.k, queries=queries), None


def cmd_verify_constants(args):
    out = bd.verify_constants()
    return _base(args, **out), out["rows"]


# ---------------------------------------------------------------------------
# manifests and replay


def _config_of(args) -> dict:
    skip = {"func", "output", "manifest", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write_manifest(args, text: str, wall: float) -> str:
    path = args.manifest or f"{args.output}.manifest.json"
    manifest = {
        "config": _config_of(args),
        "seed": args.seed,
        "version": __version__,
        "run": {
            "data_file": os.path.basename(args.output),
            "data_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
            "wall_time_seconds": wall,
        },
    }
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_json(manifest))
    return path


def load_manifest(path: str) -> dict:
    try:
        manifest = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(manifest, dict):
        raise ManifestError("manifest must be a JSON object")
    seed = manifest.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ManifestError("manifest has no integer seed")
    config = manifest.get("config")
    if not isinstance(config, dict) or config.get("command") not in MONTE_CARLO:
        raise ManifestError("manifest config must name a Monte Carlo subcommand")
    return manifest


def cmd_replay(args):
    manifest = load_manifest(args.manifest_file)
    config = manifest["config"]
    ns = argparse.Namespace(**config)
    ns.seed = manifest["seed"]
    ns.func = HANDLERS[config["command"]]
    ns.output = None
    ns.manifest = None
    report, rows = ns.func(ns)
    text = render(report, rows, ns.format)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    if args.output is not None:
        _write(text, args.output)
    expected = manifest.get("run", {}).get("data_sha256")
    identical = expected == digest
    out = _base(args, seed=manifest["seed"], replayed=config["command"], data_sha256=digest,
                expected_sha256=expected, identical=identical)
    return out, None


HANDLERS = {
    "eval-formula": cmd_eval_formula,
    "ef-game": cmd_ef_game,
    "classify": cmd_classify,
    "signature": cmd_signature,
    "threshold": cmd_threshold,
    "sample": cmd_sample,
    "census": cmd_census,
    "t-check": cmd_t_check,
    "poisson-test": cmd_poisson_test,
    "containment": cmd_containment,
    "connectivity": cmd_connectivity,
    "construct-diverging": cmd_construct_diverging,
    "build-t0": cmd_build_t0,
    "reduce-tree": cmd_reduce_tree,
    "spoiler-demo": cmd_spoiler_demo,
    "bounds": cmd_bounds,
    "law-region": cmd_law_region,
    "verify-constants": cmd_verify_constants,
    "replay": cmd_replay,
}


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _common(p, formats=("json",), seed=False):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--force", action="store_true", help="allow raising size guards")
    if "gnuplot" in formats:
        p.add_argument("--gnuplot", dest="format", action="store_const", const="gnuplot",
                       help="shorthand for --format gnuplot")
    if seed:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--manifest", help="manifest path (default: OUTPUT.manifest.json)")


def _game_flags(p, logic_default=FO):
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--logic", choices=(FO, MSO), default=logic_default)
    p.add_argument("--max-vertices", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ef-lab", description="Ehrenfeucht games, random sparse graphs and bounds.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    table = ("csv", "gnuplot", "json")

    p = sub.add_parser("eval-formula", help="evaluate a sentence on a structure")
    p.add_argument("--vocab", choices=(GRAPH, ROOTED_TREE), default=GRAPH)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula-file")
    src.add_argument("--formula")
    p.add_argument("--graph-file", required=True)
    _common(p, ("text", "json", "csv"))

    p = sub.add_parser("ef-game", help="solve the k-round game on two structures")
    _game_flags(p)
    p.add_argument("--vocab", choices=(GRAPH, ROOTED_TREE), default=GRAPH)
    p.add_argument("--method", choices=("values", "search"), default="values")
    p.add_argument("left")
    p.add_argument("right")
    _common(p)

    p = sub.add_parser("classify", help="k-equivalence classes of the .txt files in a directory")
    _game_flags(p)
    p.add_argument("--vocab", choices=(GRAPH, ROOTED_TREE), default=GRAPH)
    p.add_argument("directory")
    _common(p, ("csv", "json", "gnuplot"))

    p = sub.add_parser("signature", help="capped component-class signature of a forest")
    _game_flags(p)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--max-probe", type=int, default=8)
    p.add_argument("forest")
    _common(p)

    p = sub.add_parser("threshold", help="certify the union threshold of a structure")
    _game_flags(p)
    p.add_argument("--max-probe", type=int, default=8)
    p.add_argument("--probes", type=int, default=3)
    p.add_argument("graph")
    _common(p)

    def mc(name, help_text, n_default=1000):
        q = sub.add_parser(name, help=help_text)
        q.add_argument("--n", type=int, default=n_default)
        q.add_argument("--trials", type=int, default=1)
        _common(q, table, seed=True)
        return q

    def edge_prob(q):
        g = q.add_mutually_exclusive_group(required=True)
        g.add_argument("--alpha", help="edge probability n^-alpha (rational like 3/2 allowed)")
        g.add_argument("--p", type=float)

    p = mc("sample", "draw G(n, p)")
    edge_prob(p)
    p.add_argument("--emit-graph", type=int, default=None, metavar="TRIAL",
                   help="include the graph of this trial in the JSON report")

    p = mc("census", "component census of G(n, p) or of a graph file")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--alpha")
    g.add_argument("--p", type=float)
    g.add_argument("--graph")

    p = mc("t-check", "forest / small-component / abundance checks")
    edge_prob(p)
    p.add_argument("--l", type=int, required=True)

    def pattern(q):
        g = q.add_mutually_exclusive_group()
        g.add_argument("--pattern", choices=sorted(_PATTERNS), default="path3")
        g.add_argument("--pattern-file")

    p = mc("poisson-test", "copy counts of a pattern against the Poisson limit")
    p.add_argument("--c", type=float, default=1.0)
    pattern(p)

    p = mc("containment", "frequency of a tree as a component at p = n^(-1-1/l)")
    p.add_argument("--l", type=int, required=True)
    pattern(p)

    p = mc("connectivity", "connectivity frequency of G(n, p)")
    p.add_argument("--p", type=float)
    p.add_argument("--log-factor", type=float, help="p = factor * ln(n) / n")

    p = sub.add_parser("construct-diverging", help="build a diverging tree")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    _common(p)

    p = sub.add_parser("build-t0", help="forest with a copies of every small tree")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--include-order", choices=("<=l+1", "<=l"), default="<=l+1")
    _common(p)

    p = sub.add_parser("reduce-tree", help="shrink a rooted tree within its k-class")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--logic", choices=(FO, MSO), default=MSO)
    p.add_argument("--z", type=int, default=None, help="sibling cap (default: empirical budget)")
    p.add_argument("--depth-cap", type=int, default=None)
    p.add_argument("--budget-order", type=int, default=6)
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--max-vertices", type=int, default=None)
    p.add_argument("tree")
    _common(p)

    p = sub.add_parser("spoiler-demo", help="scripted Spoiler against Duplicator")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--instance", help="name from the built-in matrix")
    p.add_argument("--list", action="store_true", help="list built-in instances")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--s")
    p.add_argument("--duplicator", choices=("optimal", "exhaustive"), default="exhaustive")
    _common(p)

    p = sub.add_parser("bounds", help="symbolic class-count bounds")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--structure", choices=("graphs", "trees"), default="graphs")
    _common(p)

    p = sub.add_parser("law-region", help="zero-one law verdicts for p = n^-alpha")
    p.add_argument("--alpha")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", help="integer or T(s)")
    _common(p)

    p = sub.add_parser("verify-constants", help="enumerated vs printed small-structure counts")
    _common(p, ("json", "csv", "gnuplot"))

    p = sub.add_parser("replay", help="re-run a Monte Carlo manifest and compare bytes")
    p.add_argument("manifest_file")
    _common(p)
    return parser


def _domain_errors():
    return (ValueError, ArithmeticError, RecursionError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    args.func = HANDLERS[args.command]
    try:
        start = time.perf_counter()
        report, rows = args.func(args)
        wall = time.perf_counter() - start
        text = report if isinstance(report, str) else render(report, rows, args.format)
        _write(text, args.output)
        if args.command in MONTE_CARLO and args.output is not None:
            _write_manifest(args, text, wall)
    except (UsageError, SizeGuardError) as exc:
        print(f"ef-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _domain_errors() as exc:
        print(f"ef-lab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.command == "replay" and not report["identical"]:
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
