"""Command-line surface: graph building, queries, traces and benchmarks.

Structured logs go to standard error; data goes to standard output or to
files, so commands stay composable in pipelines.  Every command is
deterministic: identical inputs and flags produce byte-identical output.

An optional JSON config file may supply any flag value (keys named like
the flags, e.g. ``"min-freq": 10``); explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .composition import Composer, ComposerConfig, trace_json
from .corpus import CorpusStats, CountTables, RelationConfig, extract_events, emit_pairs, read_conllu
from .embeddings import load_word2vec_text
from .evaluation import (
    COMBINATIONS,
    AdditiveModel,
    DatasetFormatError,
    SmoothedAdditiveModel,
    StructuredModel,
    eval_dtfit,
    eval_relpron,
    load_dtfit,
    load_relpron,
)
from .graph import DIRECTIONS, EventGraph, GraphConfig, GraphFormatError

logger = logging.getLogger("eventsem")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_NO_COVERAGE = 3


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _opt(args, config: dict, flag: str, fallback):
    """Flag value, else config-file value, else the built-in default."""
    value = getattr(args, flag.replace("-", "_"))
    if value is not None:
        return value
    if flag in config:
        return config[flag]
    return fallback


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CommandError(f"cannot read config file {path}: {exc}")
    if not isinstance(data, dict):
        raise CommandError(f"config file {path} must hold a JSON object")
    return data


def _load_store(path):
    try:
        return load_word2vec_text(path)
    except OSError as exc:
        raise CommandError(f"cannot read embeddings {path}: {exc}")
    except ValueError as exc:
        raise CommandError(f"bad embeddings file {path}: {exc}")


def _load_graph(path):
    try:
        return EventGraph.load(path)
    except OSError as exc:
        raise CommandError(f"cannot read graph {path}: {exc}")
    except GraphFormatError as exc:
        raise CommandError(str(exc))


def _collect_conllu(paths) -> list[Path]:
    files = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            files.extend(sorted(p for p in path.iterdir() if p.suffix == ".conllu" or p.name.endswith(".conllu.gz")))
        elif path.exists():
            files.append(path)
        else:
            raise CommandError(f"input path does not exist: {path}")
    return files


def cmd_build_graph(args, config) -> int:
    min_freq = int(_opt(args, config, "min-freq", 5))
    alpha = float(_opt(args, config, "alpha", 0.75))
    relations_path = _opt(args, config, "relations", None)
    relations = RelationConfig.from_json(relations_path) if relations_path else RelationConfig()

    files = _collect_conllu(args.inputs)
    if not files:
        logger.warning("no input files found; writing an empty graph")

    stats = CorpusStats()
    tables = CountTables()
    n_events = 0
    for path in files:
        try:
            for sentence in read_conllu(path, stats):
                for group in extract_events(sentence, relations):
                    n_events += 1
                    for triple in emit_pairs(group):
                        tables.add(triple)
        except OSError as exc:
            raise CommandError(f"cannot read corpus file {path}: {exc}")

    graph = EventGraph.from_counts(tables, GraphConfig(alpha=alpha, min_freq=min_freq))
    graph.save(args.output)

    build = graph.build_stats
    logger.info("sentences=%d skipped=%d", stats.sentences, stats.skipped)
    logger.info("events=%d pair_observations=%d distinct_pairs=%d", n_events, tables.total, build["pairs_seen"])
    logger.info(
        "below_min_freq=%d weighed=%d kept=%d dropped_nonpositive=%d",
        build["below_min_freq"],
        build["weighed"],
        build["edges_kept"],
        build["dropped_nonpositive"],
    )
    logger.info("graph written to %s", args.output)
    return EXIT_OK


def cmd_neighbors(args, config) -> int:
    graph = _load_graph(args.graph)
    n = int(_opt(args, config, "n", 10))
    entries = graph.syntagmatic_neighbors(args.cue, args.rel, args.direction, n)
    for lex, sigma in entries:
        sys.stdout.write(f"{lex}\t{sigma:.9g}\n")
    return EXIT_OK


def _parse_trace_token(raw: str) -> tuple[str, str]:
    lex, sep, role = raw.partition(":")
    if not sep or not lex or not role:
        raise CommandError(f"malformed token {raw!r}; expected lexeme:role")
    return lex, role


def cmd_trace(args, config) -> int:
    graph = _load_graph(args.graph)
    store = _load_store(args.embeddings)
    composer_config = ComposerConfig(
        retrieval_depth=int(_opt(args, config, "retrieval-depth", 50)),
        k_centroid=int(_opt(args, config, "k-centroid", 20)),
        backward_rerank=bool(_opt(args, config, "backward-rerank", False)),
    )
    composer = Composer(graph, store, composer_config)
    top_m = int(_opt(args, config, "top", 10))

    tokens = [_parse_trace_token(raw) for raw in args.tokens]
    for _, role in tokens:
        if role not in composer.role_order:
            raise CommandError(f"unknown role label: {role!r}")
    sr = composer.new_sr()
    for lex, role in tokens:
        composer.process_token(sr, lex, role)
        sys.stdout.write(trace_json(sr, top_m=top_m) + "\n")
    return EXIT_OK


def _build_model(args, config, store):
    model_name = args.model
    if model_name == "additive":
        return AdditiveModel(store)
    if model_name == "smoothed":
        return SmoothedAdditiveModel(store, k=int(_opt(args, config, "k-neighbors", 5)))
    if model_name == "sdm":
        graph_path = _opt(args, config, "graph", None)
        if graph_path is None:
            raise CommandError("--graph is required for the sdm model")
        graph = _load_graph(graph_path)
        composer_config = ComposerConfig(
            retrieval_depth=int(_opt(args, config, "retrieval-depth", 50)),
            k_centroid=int(_opt(args, config, "k-centroid", 20)),
            backward_rerank=bool(_opt(args, config, "backward-rerank", False)),
        )
        restrict = not bool(_opt(args, config, "no-restrict-target-role", False))
        return StructuredModel(graph, store, composer_config, restrict_to_target_role=restrict)
    raise CommandError(f"unknown model {model_name!r}")


def cmd_eval(args, config) -> int:
    store = _load_store(args.embeddings)
    model = _build_model(args, config, store)
    try:
        if args.kind == "relpron":
            items = load_relpron(args.data)
            combination = _opt(args, config, "combination", "head-verb-arg")
            report = eval_relpron(model, items, combination)
        else:
            items = load_dtfit(args.data)
            report = eval_dtfit(model, items)
    except OSError as exc:
        raise CommandError(f"cannot read dataset {args.data}: {exc}")
    except DatasetFormatError as exc:
        raise CommandError(str(exc))

    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(report.to_json() + "\n")
    metric = report.metric
    sys.stdout.write(("nan" if metric is None else f"{metric:.12g}") + "\n")
    if report.coverage == 0.0:
        logger.error("no item was fully in vocabulary (coverage 0)")
        return EXIT_NO_COVERAGE
    return EXIT_OK


def cmd_export_graph(args, config) -> int:
    graph = _load_graph(args.graph)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            graph.export_text(fh)
    else:
        graph.export_text(sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eventsem",
        description="Event-knowledge graphs and incremental sentence composition.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file with flag defaults (flags win)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="increase log verbosity")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="extract events from CoNLL-U files and build a graph")
    p.add_argument("inputs", nargs="*", help="CoNLL-U files or directories (.conllu, .conllu.gz)")
    p.add_argument("-o", "--output", required=True, help="graph file to write")
    p.add_argument("--min-freq", type=int, default=None, help="minimum pair frequency (default 5)")
    p.add_argument("--alpha", type=float, default=None, help="smoothing exponent (default 0.75)")
    p.add_argument("--relations", default=None, help="JSON file overriding the relation mapping")
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("neighbors", help="query ranked associates of a cue")
    p.add_argument("cue", help="cue lexeme, e.g. book_N")
    p.add_argument("--graph", required=True)
    p.add_argument("--rel", required=True, help="relation label, e.g. dobj")
    p.add_argument("--direction", choices=DIRECTIONS, default="as-head")
    p.add_argument("-n", type=int, default=None, help="number of neighbors (default 10)")
    p.set_defaults(func=cmd_neighbors)

    p = sub.add_parser("trace", help="print one representation snapshot per processed token")
    p.add_argument("tokens", nargs="*", help="tokens as lexeme:role, e.g. student_N:sbj")
    p.add_argument("--graph", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--retrieval-depth", type=int, default=None)
    p.add_argument("--k-centroid", type=int, default=None)
    p.add_argument("--backward-rerank", action="store_const", const=True, default=None)
    p.add_argument("--top", type=int, default=None, help="entries shown per list (default 10)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("eval", help="run a benchmark protocol")
    p.add_argument("kind", choices=("relpron", "dtfit"))
    p.add_argument("--data", required=True, help="dataset TSV file")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--model", choices=("additive", "smoothed", "sdm"), default="additive")
    p.add_argument("--graph", default=None, help="graph file (required for sdm)")
    p.add_argument("--combination", choices=COMBINATIONS, default=None, help="relpron word combination")
    p.add_argument("--k-neighbors", type=int, default=None, help="neighbors per word for smoothed (default 5)")
    p.add_argument("--retrieval-depth", type=int, default=None)
    p.add_argument("--k-centroid", type=int, default=None)
    p.add_argument("--backward-rerank", action="store_const", const=True, default=None)
    p.add_argument(
        "--no-restrict-target-role",
        action="store_const",
        const=True,
        default=None,
        help="use all role centroids instead of the target argument's role",
    )
    p.add_argument("--output", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export-graph", help="dump a graph as sorted TSV")
    p.add_argument("--graph", required=True)
    p.add_argument("--output", default=None, help="file to write (default stdout)")
    p.set_defaults(func=cmd_export_graph)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.setLevel(level)
    logger.addHandler(handler)
    try:
        config = _load_config(args.config)
        return args.func(args, config)
    except CommandError as exc:
        logger.error("%s", exc)
        return exc.code
    except BrokenPipeError:
        return EXIT_ERROR
    finally:
        logger.removeHandler(handler)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
