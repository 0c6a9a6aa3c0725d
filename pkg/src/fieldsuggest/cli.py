"""Command-line workflow: train, recommend, evaluate, serve.

Defaults come from MiningParams; a JSON config file (--config) can override
them and flags override the config file. Context pairs on the command line
use ``field=value``, with optional term annotations in square brackets:
``field[uri]=value[uri]``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .engine import load_engine, train, write_store
from .errors import FieldSuggestError
from .evaluation import (
    MiningParams,
    SplitSpec,
    evaluate,
    split,
    write_log_jsonl,
    write_report_csv,
    write_report_json,
)
from .ingest import ingest_instances
from .mappings import MappingRepository, load_mappings
from .model import FieldSlot, FieldValuePair, TermRef, ValueAtom, make_context
from .recommender import RecommendOptions, recommend


def percent(score: float | Fraction) -> str:
    """Render a score in [0,1] as a whole-number percentage, e.g. 0.28 -> 28%."""
    return f"{round(score * 100)}%"


def _parse_annotated(text: str, what: str) -> tuple[str, str | None]:
    """'label' or 'label[uri]' -> (label, uri or None)."""
    text = text.strip()
    if text.endswith("]") and "[" in text:
        label, _, rest = text.rpartition("[")
        uri = rest[:-1].strip()
        if not uri:
            raise FieldSuggestError(f"empty URI in {what}: {text!r}")
        return label.strip(), uri
    return text, None


def parse_context_arg(text: str) -> FieldValuePair:
    field_part, sep, value_part = text.partition("=")
    if not sep:
        raise FieldSuggestError(f"context pair must look like field=value: {text!r}")
    field_label, field_uri = _parse_annotated(field_part, "context field")
    value_label, value_uri = _parse_annotated(value_part, "context value")
    if not field_label or not value_label:
        raise FieldSuggestError(f"context pair must look like field=value: {text!r}")
    return FieldValuePair(
        field=FieldSlot(field_label, TermRef(field_uri) if field_uri else None),
        value=ValueAtom(value_label, TermRef(value_uri) if value_uri else None),
    )


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise FieldSuggestError("config file must contain a JSON object")
    return config


def _setting(args: argparse.Namespace, config: dict, name: str, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _mining_params(args: argparse.Namespace, config: dict) -> MiningParams:
    return MiningParams(
        min_support=int(_setting(args, config, "min_support", 5)),
        min_confidence=float(_setting(args, config, "min_confidence", 0.3)),
        max_antecedent_size=_setting(args, config, "max_antecedent", None),
    )


def _mappings(args: argparse.Namespace, config: dict) -> MappingRepository:
    path = _setting(args, config, "mappings", None)
    return load_mappings(path) if path else MappingRepository.empty()


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    params = _mining_params(args, config)
    mappings = _mappings(args, config)
    report = ingest_instances(args.instances)
    if report.dropped_pairs or report.dropped_records:
        print(
            f"ingest: dropped {report.dropped_pairs} empty-valued pairs, "
            f"{report.dropped_records} records with duplicate fields"
        )
    result = train(report.repository, params, mappings)
    write_store(result, args.out, mappings)
    print(f"{'template':40} {'instances':>9} {'generated':>9} {'kept':>6} {'seconds':>8}")
    for s in result.stats:
        print(
            f"{s.template_id:40} {s.instances:>9} {s.rules_generated:>9} "
            f"{s.rules_kept:>6} {s.seconds:>8.3f}"
        )
    print(f"wrote {len(result.rules)} rules to {args.out}")
    return 0


def cmd_recommend(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    state = load_engine(args.rules, _setting(args, config, "mappings", None))
    target_label, target_uri = _parse_annotated(args.target, "target")
    target = FieldSlot(target_label, TermRef(target_uri) if target_uri else None)
    context = make_context(parse_context_arg(c) for c in args.context or [])
    options = RecommendOptions(
        score_cutoff=_setting(args, config, "score_cutoff", None),
        max_results=_setting(args, config, "max_results", None),
    )
    results = recommend(
        context, target, state.index, state.mappings, options, state.train_counts
    )
    if not results:
        print(f"no suggestions for {target.field_label!r}")
        return 0
    for r in results:
        marker = " *" if r.value.value_type else ""
        print(f"{r.rank:>3}. {r.value.value_label}{marker}  {float(r.score):.4f}  {percent(r.score)}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    params = _mining_params(args, config)
    mappings = _mappings(args, config)
    repo = ingest_instances(args.instances).repository
    spec = SplitSpec(
        train_fraction=float(_setting(args, config, "train_fraction", 0.85)),
        seed=int(_setting(args, config, "seed", 0)),
    )
    train_repo, test_repo = split(repo, spec)
    eval_fields = None
    if args.fields:
        eval_fields = [FieldSlot(label.strip()) for label in args.fields.split(",")]
    report = evaluate(train_repo, test_repo, params, mappings, eval_fields)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report_json(report, out_dir / "report.json")
    write_report_csv(report, out_dir / "report.csv")
    write_log_jsonl(report, out_dir / "log.jsonl")

    print(f"{'method':10} {'context':>7} {'mrr':>7} {'n':>8}")
    for (method, size), stat in sorted(report.by_context_size.items()):
        print(f"{method:10} {size:>7} {stat.mrr:>7.3f} {stat.n:>8}")
    print(f"report written to {out_dir}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    config = _load_config(args.config)
    state = load_engine(
        args.rules, _setting(args, config, "mappings", None), args.manifest
    )
    app = create_app(state, demo_dir=args.demo_dir)
    host, _, port = args.bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldsuggest",
        description="Mine field-value association rules and recommend values",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train_p = sub.add_parser("train", help="mine rules from an instance file")
    train_p.add_argument("--instances", required=True)
    train_p.add_argument("--mappings")
    train_p.add_argument("--min-support", dest="min_support", type=int)
    train_p.add_argument("--min-confidence", dest="min_confidence", type=float)
    train_p.add_argument("--max-antecedent", dest="max_antecedent", type=int)
    train_p.add_argument("--out", required=True)
    train_p.add_argument("--config")
    train_p.set_defaults(func=cmd_train)

    rec_p = sub.add_parser("recommend", help="rank values for a target field")
    rec_p.add_argument("--rules", required=True)
    rec_p.add_argument("--mappings")
    rec_p.add_argument("--target", required=True, help="field label, optionally label[uri]")
    rec_p.add_argument(
        "--context",
        action="append",
        help="field=value pair, optionally field[uri]=value[uri]; repeatable",
    )
    rec_p.add_argument("--score-cutoff", dest="score_cutoff", type=float)
    rec_p.add_argument("--max-results", dest="max_results", type=int)
    rec_p.add_argument("--config")
    rec_p.set_defaults(func=cmd_recommend)

    eval_p = sub.add_parser("evaluate", help="split, train, and sweep a corpus")
    eval_p.add_argument("--instances", required=True)
    eval_p.add_argument("--mappings")
    eval_p.add_argument("--train-fraction", dest="train_fraction", type=float)
    eval_p.add_argument("--seed", type=int)
    eval_p.add_argument("--min-support", dest="min_support", type=int)
    eval_p.add_argument("--min-confidence", dest="min_confidence", type=float)
    eval_p.add_argument("--max-antecedent", dest="max_antecedent", type=int)
    eval_p.add_argument("--fields", help="comma-separated field labels to evaluate")
    eval_p.add_argument("--out-dir", dest="out_dir", default="eval-out")
    eval_p.add_argument("--config")
    eval_p.set_defaults(func=cmd_evaluate)

    serve_p = sub.add_parser("serve", help="expose the HTTP API")
    serve_p.add_argument("--rules", required=True)
    serve_p.add_argument("--mappings")
    serve_p.add_argument("--manifest")
    serve_p.add_argument("--bind", default="127.0.0.1:8080")
    serve_p.add_argument("--demo-dir", dest="demo_dir")
    serve_p.add_argument("--config")
    serve_p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FieldSuggestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
