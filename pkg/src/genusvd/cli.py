"""Command-line front end.

Every option can also be set through an environment variable named
``GENUSVD_`` plus the upper-cased option name (``--max-schemes`` becomes
``GENUSVD_MAX_SCHEMES``); explicit flags win over the environment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import boundaried, generators, oracle
from .dp import solve
from .nicify import ResourceLimitExceeded, enumerate_nice
from .treedecomp import (
    DecompositionError,
    FormatError,
    Graph,
    decompose,
    format_graph,
    format_td,
    parse_graph,
    parse_td,
)

ENV_PREFIX = "GENUSVD_"
SCHEMA = "genusvd/1"

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

# above this many schemes a witness is re-checked by a k=0 DP run instead of the oracle
VERIFY_CEILING = 200_000


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    graph: Path | None = None
    td: Path | None = None
    genus: int = 0
    budget: int = 0
    orientable: bool = False
    emit_witness: bool = False
    json: bool = False
    threads: int = 1
    max_flags: int = 24
    max_schemes: int = oracle.DEFAULT_MAX_SCHEMES
    verify: bool = True

    def validate(self) -> None:
        if self.genus < 0 or self.budget < 0:
            raise ConfigError("--genus and --budget must be nonnegative")
        if self.threads < 1:
            raise ConfigError("--threads must be at least 1")


def _env(name: str, default, kind=str):
    raw = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if raw is None:
        return default
    if kind is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"bad value {raw!r} for {ENV_PREFIX}{name.upper()}") from None


def _add_common(p: argparse.ArgumentParser, graph=True, td=False, gk=False) -> None:
    if graph:
        p.add_argument("--graph", type=Path, default=_env("graph", None, Path), help=".gr file")
    if td:
        p.add_argument("--td", type=Path, default=_env("td", None, Path), help=".td file")
    if gk:
        p.add_argument("--genus", type=int, default=_env("genus", 0, int))
        p.add_argument("--budget", type=int, default=_env("budget", 0, int))
    p.add_argument("--orientable", action="store_true", default=_env("orientable", False, bool))
    p.add_argument("--json", action="store_true", default=_env("json", False, bool))
    p.add_argument("--threads", type=int, default=_env("threads", 1, int))
    p.add_argument("--max-schemes", type=int, default=_env("max-schemes", oracle.DEFAULT_MAX_SCHEMES, int))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genusvd", description="Genus Vertex Deletion solver")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide whether <= budget deletions reach Euler genus <= genus")
    _add_common(p, td=True, gk=True)
    p.add_argument("--emit-witness", action="store_true", default=_env("emit-witness", False, bool))
    p.add_argument("--no-verify", dest="verify", action="store_false", default=not _env("no-verify", False, bool))

    p = sub.add_parser("genus", help="Euler genus via the DP with no deletions")
    _add_common(p, td=True)
    p.add_argument("--max-genus", type=int, default=_env("max-genus", 10, int))

    p = sub.add_parser("oracle", help="exhaustive genus, or deletion search with --budget")
    _add_common(p)
    p.add_argument("--genus", type=int, default=_env("genus", None, int))
    p.add_argument("--budget", type=int, default=_env("budget", None, int))

    p = sub.add_parser("enumerate-nice", help="count nice boundaried embeddings")
    p.add_argument("--labels", type=int, default=_env("labels", 0, int))
    p.add_argument("--genus", type=int, default=_env("genus", 0, int))
    p.add_argument("--orientable", action="store_true", default=_env("orientable", False, bool))
    p.add_argument("--max-flags", type=int, default=_env("max-flags", 24, int))
    p.add_argument("--emit", action="store_true", help="print every embedding")
    p.add_argument("--json", action="store_true", default=_env("json", False, bool))
    p.add_argument("--threads", type=int, default=_env("threads", 1, int))

    p = sub.add_parser("gen", help="write a fixture graph in .gr format")
    p.add_argument("family", choices=["complete", "complete-bipartite", "grid", "wall", "b-ell", "random"])
    p.add_argument("params", type=int, nargs="+")
    p.add_argument("--seed", type=int, default=_env("seed", 0, int))
    p.add_argument("-o", "--output", type=Path)
    p.add_argument("--td-output", type=Path, help="b-ell only: write its hand-built decomposition")
    return parser


def _read_graph(path: Path | None) -> Graph:
    if path is None:
        raise ConfigError("--graph is required")
    return parse_graph(path.read_text())


def _instance_hash(g: Graph) -> str:
    return hashlib.sha256(format_graph(g).encode()).hexdigest()[:16]


def _emit_json(obj: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **obj}, sort_keys=True))


def _decomposition(g: Graph, td_path: Path | None):
    td = parse_td(td_path.read_text(), g) if td_path is not None else None
    return decompose(g, td)


def cmd_solve(cfg: RunConfig) -> int:
    cfg.validate()
    g = _read_graph(cfg.graph)
    refined = _decomposition(g, cfg.td)
    res = solve(
        g, refined, cfg.genus, cfg.budget, orientable=cfg.orientable, verify=cfg.verify,
        threads=cfg.threads, oracle_ceiling=min(cfg.max_schemes, VERIFY_CEILING),
    )
    if cfg.json:
        _emit_json({
            "command": "solve",
            "instance": _instance_hash(g),
            "genus": cfg.genus,
            "budget": cfg.budget,
            "orientable": cfg.orientable,
            "answer": "YES" if res.answer else "NO",
            "minimum": res.minimum,
            "witness": res.witness if res.answer else [],
            "verified_by": res.verified_by,
            "width": refined.width,
            "table_sizes": res.table_sizes,
            "seconds": round(res.seconds, 6),
        })
    else:
        print(res.text(cfg.emit_witness))
        print(f"width {refined.width} nodes {len(refined.nodes)} max-table {max(res.table_sizes)} "
              f"cells {sum(res.table_sizes)} seconds {res.seconds:.3f}", file=sys.stderr)
    return EXIT_YES if res.answer else EXIT_NO


def cmd_genus(cfg: RunConfig, max_genus: int = 10) -> int:
    cfg.validate()
    g = _read_graph(cfg.graph)
    refined = _decomposition(g, cfg.td)
    for genus in range(max_genus + 1):
        res = solve(g, refined, genus, 0, orientable=cfg.orientable, verify=False, threads=cfg.threads)
        if res.answer:
            if cfg.json:
                _emit_json({"command": "genus", "instance": _instance_hash(g),
                            "orientable": cfg.orientable, "genus": genus})
            else:
                print(f"genus {genus}")
            return EXIT_YES
    raise ConfigError(f"Euler genus exceeds --max-genus {max_genus}")


def cmd_oracle(cfg: RunConfig, genus: int | None, budget: int | None) -> int:
    g = _read_graph(cfg.graph)
    if budget is None:
        value = oracle.exact_genus(g, cfg.orientable, cfg.max_schemes, cfg.threads)
        if cfg.json:
            _emit_json({"command": "oracle", "instance": _instance_hash(g),
                        "orientable": cfg.orientable, "genus": value})
        else:
            print(f"genus {value}")
        return EXIT_YES
    if genus is None:
        raise ConfigError("--budget needs --genus")
    cfg.genus, cfg.budget = genus, budget
    cfg.validate()
    size = oracle.brute_force_gvd(g, genus, budget, cfg.orientable, cfg.max_schemes)
    if cfg.json:
        _emit_json({"command": "oracle", "instance": _instance_hash(g), "genus": genus,
                    "budget": budget, "orientable": cfg.orientable,
                    "answer": "NO" if size is None else "YES", "minimum": size})
    else:
        print("NO" if size is None else f"YES {size}")
    return EXIT_NO if size is None else EXIT_YES


def cmd_enumerate_nice(labels: int, genus: int, orientable: bool, max_flags: int,
                       emit: bool, as_json: bool, threads: int) -> int:
    if labels < 0 or genus < 0:
        raise ConfigError("--labels and --genus must be nonnegative")
    found = enumerate_nice(labels, genus, orientable, threads=threads, max_flags=max_flags)
    items = [found[k] for k in sorted(found)]
    if as_json:
        obj = {"command": "enumerate-nice", "labels": labels, "genus": genus,
               "orientable": orientable, "count": len(items)}
        if emit:
            obj["embeddings"] = [boundaried.dumps(be) for be in items]
        _emit_json(obj)
    else:
        print(f"count {len(items)}")
        if emit:
            for be in items:
                print()
                print(boundaried.dumps(be), end="")
    return EXIT_YES


_ARITY = {"complete": 1, "complete-bipartite": 2, "grid": 2, "wall": 1, "b-ell": 1, "random": 2}


def cmd_gen(family: str, params: list[int], seed: int, output: Path | None,
            td_output: Path | None) -> int:
    if len(params) != _ARITY[family]:
        raise ConfigError(f"{family} takes {_ARITY[family]} parameter(s)")
    build = {
        "complete": lambda: generators.complete(*params),
        "complete-bipartite": lambda: generators.complete_bipartite(*params),
        "grid": lambda: generators.grid(*params),
        "wall": lambda: generators.wall(*params),
        "b-ell": lambda: generators.b_ell(*params),
        "random": lambda: generators.random_connected(*params, seed=seed),
    }
    g = build[family]()
    text = format_graph(g)
    if output is None:
        print(text, end="")
    else:
        output.write_text(text)
    if td_output is not None:
        if family != "b-ell":
            raise ConfigError("--td-output is only available for b-ell")
        td_output.write_text(format_td(generators.b_ell_decomposition(*params)))
    return EXIT_YES


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "gen":
            return cmd_gen(args.family, args.params, args.seed, args.output, args.td_output)
        if args.command == "enumerate-nice":
            return cmd_enumerate_nice(args.labels, args.genus, args.orientable, args.max_flags,
                                      args.emit, args.json, args.threads)
        cfg = RunConfig(
            command=args.command,
            graph=args.graph,
            td=getattr(args, "td", None),
            orientable=args.orientable,
            json=args.json,
            threads=args.threads,
            max_schemes=args.max_schemes,
        )
        if args.command == "solve":
            cfg.genus, cfg.budget = args.genus, args.budget
            cfg.emit_witness, cfg.verify = args.emit_witness, args.verify
            return cmd_solve(cfg)
        if args.command == "genus":
            return cmd_genus(cfg, args.max_genus)
        return cmd_oracle(cfg, args.genus, args.budget)
    except (ConfigError, FormatError, DecompositionError, oracle.CeilingExceeded,
            ResourceLimitExceeded, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
