"""Report serialization: TSV body with a JSON metadata header line.

Every report embeds the resolved run config and lexicon versions so a
calibration mismatch is diagnosable from the file alone. Re-running the
embedded config reproduces the file byte-for-byte except for the single
``created`` timestamp field. All writes are atomic (temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime, timezone
from pathlib import Path

from .metrics import ROUGE_CONFIG, ScoreRow, StatsReport

TIMESTAMP_FIELD = "created"


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_metadata(command: str, config: dict, lexicon_versions: dict) -> dict:
    from . import __version__

    return {
        "command": command,
        "config": config,
        TIMESTAMP_FIELD: datetime.now(timezone.utc).isoformat(),
        "lexicons": dict(lexicon_versions),
        "rouge_config": ROUGE_CONFIG,
        "toolkit_version": __version__,
    }


def render_report(metadata: dict, header: list[str], rows: list[list[str]]) -> str:
    lines = [json.dumps(metadata, ensure_ascii=False, sort_keys=True)]
    lines.append("\t".join(header))
    lines.extend("\t".join(row) for row in rows)
    return "".join(line + "\n" for line in lines)


def write_report(
    path: str | Path, metadata: dict, header: list[str], rows: list[list[str]]
) -> None:
    atomic_write_text(path, render_report(metadata, header, rows))


def parse_report(path: str | Path) -> tuple[dict, list[str], list[list[str]]]:
    """Read back a TSV report: (metadata, header, rows of strings)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty report")
    metadata = json.loads(lines[0])
    if len(lines) < 2:
        raise ValueError(f"{path}: report has no header line")
    header = lines[1].split("\t")
    rows = [line.split("\t") for line in lines[2:] if line]
    return metadata, header, rows


ROUGE_COLUMNS = ("rouge1", "rouge2", "rougeL")


def score_rows_to_table(rows: list[ScoreRow]) -> tuple[list[str], list[list[str]]]:
    """Display form of score rows: ROUGE x100 at 2 decimals, extras raw."""
    extra_columns: dict[str, None] = {}
    for row in rows:
        for name in row.extras:
            extra_columns.setdefault(name, None)
    extras = sorted(extra_columns)
    header = ["system", *ROUGE_COLUMNS, *extras]
    body = []
    for row in rows:
        cells = [
            row.system,
            f"{row.rouge1 * 100:.2f}",
            f"{row.rouge2 * 100:.2f}",
            f"{row.rougeL * 100:.2f}",
        ]
        for name in extras:
            value = row.extras.get(name)
            cells.append("" if value is None else f"{value:.4f}")
        body.append(cells)
    return header, body


def stats_to_table(stats: StatsReport) -> tuple[list[str], list[list[str]]]:
    def fmt(value):
        if value is None:
            return ""
        if isinstance(value, int):
            return str(value)
        return f"{value:.4f}"

    fields = [
        ("dialogue_count", stats.dialogue_count),
        ("utterance_count", stats.utterance_count),
        ("mean_words_per_turn", stats.mean_words_per_turn),
        ("mean_emoji_per_utterance", stats.mean_emoji_per_utterance),
        ("mean_person_pronouns_per_utterance", stats.mean_person_pronouns_per_utterance),
        (
            "mean_first_person_singular_per_utterance",
            stats.mean_first_person_singular_per_utterance,
        ),
        (
            "mean_first_person_plural_per_utterance",
            stats.mean_first_person_plural_per_utterance,
        ),
        ("mean_second_person_per_utterance", stats.mean_second_person_per_utterance),
        ("aligned_pair_count", stats.aligned_pair_count),
        ("mean_token_edit_distance", stats.mean_token_edit_distance),
        ("shifted_mean_words_per_turn", stats.shifted_mean_words_per_turn),
        ("shifted_mean_emoji_per_utterance", stats.shifted_mean_emoji_per_utterance),
        (
            "shifted_mean_person_pronouns_per_utterance",
            stats.shifted_mean_person_pronouns_per_utterance,
        ),
    ]
    rows = [[name, fmt(value)] for name, value in fields]
    for name, version in sorted(stats.lexicon_versions.items()):
        rows.append([f"lexicon_{name}", version])
    return ["metric", "value"], rows


def format_human_table(header: list[str], rows: list[list[str]]) -> str:
    """Aligned plain-text rendering for stdout."""
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()

    out = [line(header), line(["-" * w for w in widths])]
    out.extend(line(row) for row in rows)
    return "\n".join(out)
