"""Command-line surface: shift, encode, oracle, score, stats, compare.

Exit codes: 0 success, 2 usage error (argparse), 1 data error naming the
offending record, 3 I/O error. Declared outputs are written atomically and
no command mutates its inputs. Commands that write a ``--report`` TSV also
render a PNG figure next to it unless ``--no-figures`` is given.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .dialogue import CORPUS_FORMATS, SPLITS, AlignedShift, load_corpus
from .encoders import FORMULATIONS, SepConvention, encode, example_to_dict
from .errors import MalformedRecord, MissingShift, ShiftkitError
from .extractive import (
    OBJECTIVE_METRICS,
    ExtractionObjective,
    OracleConfig,
    calibration_sweep,
    longest_k_corpus,
    oracle_corpus,
)
from .figures import figure_path, render_score_figure, render_stats_figure
from .heuristic import HeuristicConfig, heuristic_shift_dialogue
from .metrics import corpus_stats, score_systems
from .report import (
    atomic_write_text,
    build_metadata,
    format_human_table,
    parse_report,
    score_rows_to_table,
    stats_to_table,
    write_report,
)
from .textcore import default_lexicons, load_lexicons

FORMULATION_ALIASES = {
    "none": "no-context",
    "left": "left-context",
    "both": "left-right-context",
    "conv": "conversation-level",
}

OBJECTIVE_ALIASES = {
    "r1": "rouge1",
    "r2": "rouge2",
    "rl": "rougeL",
    "mean": "mean-rouge",
}


def _parse_k(value: str) -> tuple[int, int]:
    try:
        if ".." in value:
            lo, hi = value.split("..", 1)
            return int(lo), int(hi)
        k = int(value)
        return k, k
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid k policy {value!r}; use '3' or '1..3'") from exc


def _parse_objective(value: str) -> str:
    name = OBJECTIVE_ALIASES.get(value, value)
    if name not in OBJECTIVE_METRICS:
        choices = sorted(set(OBJECTIVE_METRICS) | set(OBJECTIVE_ALIASES))
        raise argparse.ArgumentTypeError(f"invalid objective {value!r}; choose from {choices}")
    return name


def _lexicons(args):
    if getattr(args, "lexicon_dir", None):
        return load_lexicons(args.lexicon_dir)
    return default_lexicons()


def _load_shift_file(path: str | Path) -> dict[str, AlignedShift]:
    shifts: dict[str, AlignedShift] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(i, f"invalid JSON: {exc}") from exc
            if not isinstance(record, dict) or "id" not in record or "shift" not in record:
                raise MalformedRecord(i, "expected an object with 'id' and 'shift'")
            lines = record["shift"].replace("\r\n", "\n").split("\n")
            shifts[record["id"]] = AlignedShift(dialogue_id=record["id"], lines=tuple(lines))
    return shifts


TEXT_KEYS = ("text", "prediction", "target", "summary")


def _read_texts_jsonl(path: str | Path) -> dict[str, str]:
    """id -> text map from a JSONL file of predictions or references.

    Records carry "id" (or "dialogue_id" plus optional "target_index", in
    which case the id becomes "dialogue_id#index") and one of the text
    fields: text, prediction, target, summary. A leading metadata line
    (as written by `shiftkit encode`) is skipped.
    """
    texts: dict[str, str] = {}
    with Path(path).open(encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(i, f"invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise MalformedRecord(i, "record is not an object")
            text = next((record[k] for k in TEXT_KEYS if isinstance(record.get(k), str)), None)
            if "id" in record:
                example_id = str(record["id"])
            elif "dialogue_id" in record:
                example_id = str(record["dialogue_id"])
                if record.get("target_index") is not None:
                    example_id += f"#{record['target_index']}"
            else:
                if i == 0 and text is None:
                    continue  # metadata line
                raise MalformedRecord(i, "record has no 'id' or 'dialogue_id'")
            if text is None:
                raise MalformedRecord(i, f"record has none of the text fields {TEXT_KEYS}")
            texts[example_id] = text
    return texts


def _read_scores_csv(path: str | Path) -> dict[str, float]:
    scores: dict[str, float] = {}
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["id", "score"]:
            raise MalformedRecord(0, f"{path}: expected CSV header 'id,score'")
        for i, row in enumerate(reader, start=1):
            try:
                scores[row["id"]] = float(row["score"])
            except (TypeError, ValueError) as exc:
                raise MalformedRecord(i, f"{path}: bad score {row.get('score')!r}") from exc
    return scores


def _emit_report(args, command, config, rows_header, rows, render_figure):
    metadata = build_metadata(command, config, _lexicons(args).versions)
    print(format_human_table(rows_header, rows))
    if args.report:
        write_report(args.report, metadata, rows_header, rows)
        print(f"report written to {args.report}", file=sys.stderr)
        if not args.no_figures:
            png = figure_path(args.report)
            render_figure(png)
            print(f"figure written to {png}", file=sys.stderr)


def _heuristic_config(args) -> HeuristicConfig:
    return HeuristicConfig(
        expand_contractions=not args.no_expand_contractions,
        append_period=not args.no_append_period,
        lowercase_i=args.lowercase_i,
    )


def cmd_shift(args) -> int:
    cfg = _heuristic_config(args)
    corpus = load_corpus(args.input, args.format, args.split)
    lines_out = []
    for d in corpus.dialogues:
        shift = heuristic_shift_dialogue(d, cfg)
        record = {
            "id": d.id,
            "dialogue": "\n".join(u.line for u in d.utterances),
            "shift": "\n".join(shift.lines),
        }
        summary = corpus.summaries.get(d.id)
        if summary is not None:
            record["summary"] = summary.text
        lines_out.append(json.dumps(record, ensure_ascii=False, sort_keys=True))
    atomic_write_text(args.out, "".join(line + "\n" for line in lines_out))
    print(f"shifted {len(corpus.dialogues)} dialogues -> {args.out}", file=sys.stderr)
    return 0


def cmd_encode(args) -> int:
    formulation = FORMULATION_ALIASES.get(args.formulation, args.formulation)
    corpus = load_corpus(args.input, args.format, args.split)
    conv = SepConvention(sep_token=args.sep_token)
    heuristic_cfg = HeuristicConfig()
    examples = []
    for d in corpus.dialogues:
        if args.shift_source == "gold":
            shift = corpus.shifts.get(d.id)
            if shift is None:
                raise MissingShift(d.id)
        else:
            shift = heuristic_shift_dialogue(d, heuristic_cfg)
        examples.extend(encode(d, shift, formulation, conv))
    metadata = {
        "formulation": formulation,
        "sep_token": conv.sep_token,
        "turn_separator": conv.turn_separator,
        "toolkit_version": __version__,
    }
    lines = [json.dumps(metadata, ensure_ascii=False, sort_keys=True)]
    lines.extend(
        json.dumps(example_to_dict(example), ensure_ascii=False, sort_keys=True)
        for example in examples
    )
    atomic_write_text(args.out, "".join(line + "\n" for line in lines))
    print(f"encoded {len(examples)} examples -> {args.out}", file=sys.stderr)
    return 0


def _shift_arg(args) -> tuple[str, dict[str, AlignedShift] | None]:
    if args.shift.startswith("file:"):
        return "file", _load_shift_file(args.shift[len("file:") :])
    if args.shift not in ("none", "gold", "heuristic"):
        raise argparse.ArgumentTypeError(
            f"invalid --shift {args.shift!r}; use none|gold|heuristic|file:PATH"
        )
    return args.shift, None


def cmd_oracle(args) -> int:
    corpus = load_corpus(args.input, args.format, args.split)
    source, external = _shift_arg(args)
    k_min, k_max = args.k
    config = {
        "input": str(args.input),
        "format": args.format,
        "split": args.split,
        "shift": args.shift,
        "k_min": k_min,
        "k_max": k_max,
        "objective": args.objective,
        "use_f1": not args.recall,
        "exhaustive_limit": args.exhaustive_limit,
        "beam_width": args.beam_width,
        "seed": args.seed,
        "sweep": args.sweep,
        "include_longest": args.include_longest,
    }
    rows = []
    if args.sweep:
        rows.extend(
            calibration_sweep(
                corpus,
                source,
                use_f1=not args.recall,
                exhaustive_limit=args.exhaustive_limit,
                beam_width=args.beam_width,
                external_shifts=external,
            )
        )
    else:
        cfg = OracleConfig(
            k_min=k_min,
            k_max=k_max,
            objective=ExtractionObjective(metric=args.objective, use_f1=not args.recall),
            exhaustive_limit=args.exhaustive_limit,
            beam_width=args.beam_width,
            seed=args.seed,
        )
        rows.append(oracle_corpus(corpus, source, cfg, external_shifts=external))
    if args.include_longest:
        rows.append(longest_k_corpus(corpus, args.include_longest, source, external))
    header, body = score_rows_to_table(rows)
    _emit_report(
        args,
        "oracle",
        config,
        header,
        body,
        lambda png: render_score_figure(header, body, png, "oracle extraction"),
    )
    return 0


def cmd_score(args) -> int:
    references = _read_texts_jsonl(args.refs)
    outputs = {}
    for spec_item in args.systems.split(","):
        name, _, path = spec_item.partition("=")
        if not name or not path:
            raise argparse.ArgumentTypeError(
                f"invalid --systems entry {spec_item!r}; use name=path.jsonl"
            )
        outputs[name] = _read_texts_jsonl(path)
    external: dict[str, dict[str, dict[str, float]]] = {}
    for item in args.external or []:
        try:
            system, metric, path = item.split("=", 2)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(
                f"invalid --external entry {item!r}; use system=metric=path.csv"
            ) from exc
        external.setdefault(system, {})[metric] = _read_scores_csv(path)
    table = score_systems(outputs, references, external)
    config = {
        "refs": str(args.refs),
        "systems": args.systems,
        "external": list(args.external or []),
        "n_references": len(references),
    }
    header, body = score_rows_to_table(list(table.rows))
    _emit_report(
        args,
        "score",
        config,
        header,
        body,
        lambda png: render_score_figure(header, body, png, "system scores"),
    )
    return 0


def cmd_stats(args) -> int:
    corpus = load_corpus(args.input, args.format, args.split)
    stats = corpus_stats(corpus, _lexicons(args))
    config = {
        "input": str(args.input),
        "format": args.format,
        "split": args.split,
        "lexicon_dir": args.lexicon_dir,
    }
    header, body = stats_to_table(stats)
    _emit_report(
        args,
        "stats",
        config,
        header,
        body,
        lambda png: render_stats_figure(body, png, "corpus statistics"),
    )
    return 0


def cmd_compare(args) -> int:
    header_union: list[str] = ["system"]
    merged_rows: list[list[str]] = []
    sources = []
    for path in args.reports:
        metadata, header, rows = parse_report(path)
        if not header or header[0] != "system":
            raise MalformedRecord(path, "not a system score report (no 'system' column)")
        sources.append({"path": str(path), "command": metadata.get("command")})
        for column in header[1:]:
            if column not in header_union:
                header_union.append(column)
        for row in rows:
            cells = dict(zip(header, row))
            merged_rows.append([cells.get(c, "") for c in header_union])
    # re-pad rows in case later reports introduced new columns
    merged_rows = [row + [""] * (len(header_union) - len(row)) for row in merged_rows]
    config = {"reports": [str(p) for p in args.reports], "sources": sources}
    _emit_report(
        args,
        "compare",
        config,
        header_union,
        merged_rows,
        lambda png: render_score_figure(header_union, merged_rows, png, "system comparison"),
    )
    return 0


def _add_corpus_args(p):
    p.add_argument("--in", dest="input", required=True, help="input corpus path")
    p.add_argument("--format", choices=CORPUS_FORMATS, default="jsonl")
    p.add_argument("--split", choices=SPLITS, default="other")


def _add_report_args(p):
    p.add_argument("--report", default=None, help="write a TSV report (PNG rendered alongside)")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG figure")
    p.add_argument("--lexicon-dir", default=None, help="override lexicon directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftkit",
        description="Perspective-shift toolkit for dialogue summarization experiments.",
    )
    parser.add_argument("--version", action="version", version=f"shiftkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shift", help="rewrite dialogues with the rules-based heuristic")
    _add_corpus_args(p)
    p.add_argument("--method", choices=["heuristic"], default="heuristic")
    p.add_argument("--out", required=True, help="output JSONL with the shift field populated")
    p.add_argument("--no-expand-contractions", action="store_true")
    p.add_argument("--no-append-period", action="store_true")
    p.add_argument("--lowercase-i", action="store_true", help="also replace lowercase 'i' forms")
    p.set_defaults(func=cmd_shift)

    p = sub.add_parser("encode", help="emit seq2seq (input, target) pairs")
    _add_corpus_args(p)
    p.add_argument(
        "--formulation",
        choices=sorted(set(FORMULATIONS) | set(FORMULATION_ALIASES)),
        required=True,
    )
    p.add_argument("--out", required=True)
    p.add_argument("--sep-token", default="[SEP]")
    p.add_argument("--shift-source", choices=["gold", "heuristic"], default="gold")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("oracle", help="oracle extractive summarization over a corpus")
    _add_corpus_args(p)
    p.add_argument("--shift", default="none", help="none|gold|heuristic|file:PATH")
    p.add_argument("--k", type=_parse_k, default=(1, 3), help="subset size: '3' or '1..3'")
    p.add_argument("--objective", type=_parse_objective, default="mean-rouge")
    p.add_argument("--recall", action="store_true", help="optimize recall instead of F1")
    p.add_argument("--exhaustive-limit", type=int, default=200_000)
    p.add_argument("--beam-width", type=int, default=64)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--sweep", action="store_true", help="sweep k in 1..3 x all objectives")
    p.add_argument("--include-longest", type=int, default=None, metavar="K",
                   help="also report the longest-K baseline row")
    _add_report_args(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("score", help="score system outputs against references")
    p.add_argument("--systems", required=True, help="name=preds.jsonl[,name=...]")
    p.add_argument("--refs", required=True, help="references JSONL (id + text)")
    p.add_argument("--external", action="append", default=None,
                   metavar="SYSTEM=METRIC=CSV", help="attach external per-example scores")
    _add_report_args(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("stats", help="corpus statistics (paired when shifts present)")
    _add_corpus_args(p)
    _add_report_args(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compare", help="merge score reports into one comparison table")
    p.add_argument("reports", nargs="+", help="TSV reports produced by oracle/score")
    _add_report_args(p)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))  # exits 2
    except ShiftkitError as exc:
        print(f"shiftkit: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"shiftkit: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
