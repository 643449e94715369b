"""Core dialogue data model: utterances, dialogues, shifts, corpora.

All types are frozen dataclasses; operations are pure functions, so
everything in this module is safe to share across threads.

Whitespace normalization applied at parse time (``NORMALIZATION``): the
speaker name and the body are stripped of leading/trailing whitespace, and
physical continuation lines are joined with a single space. A parsed
utterance therefore reconstructs as ``speaker + ": " + text``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyInput, MalformedRecord, MisalignedShift, OrphanContinuation

NORMALIZATION = "strip-edges+single-space-continuations"

SPLITS = ("train", "validation", "test", "other")

CORPUS_FORMATS = ("samsum-json", "jsonl", "plain-dir")


@dataclass(frozen=True)
class Utterance:
    """One speaker-attributed turn of a dialogue."""

    index: int
    speaker: str
    text: str
    raw: str

    @property
    def line(self) -> str:
        """Canonical single-line form, ``Speaker: text``."""
        return f"{self.speaker}: {self.text}"


@dataclass(frozen=True)
class Dialogue:
    id: str
    utterances: tuple[Utterance, ...]

    @property
    def speakers(self) -> tuple[str, ...]:
        """Unique speaker names in first-appearance order."""
        seen: dict[str, None] = {}
        for u in self.utterances:
            seen.setdefault(u.speaker, None)
        return tuple(seen)

    def __len__(self) -> int:
        return len(self.utterances)


@dataclass(frozen=True)
class AlignedShift:
    """Third-person rewrite of a dialogue, one line per utterance."""

    dialogue_id: str
    lines: tuple[str, ...]


@dataclass(frozen=True)
class Summary:
    dialogue_id: str
    text: str


@dataclass(frozen=True)
class Corpus:
    split: str
    dialogues: tuple[Dialogue, ...]
    shifts: dict[str, AlignedShift] = field(default_factory=dict)
    summaries: dict[str, Summary] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.dialogues)

    def utterance_count(self) -> int:
        return sum(len(d) for d in self.dialogues)


def validate_alignment(dialogue: Dialogue, shift: AlignedShift) -> None:
    """Raise :class:`MisalignedShift` unless ``shift`` aligns 1:1 with ``dialogue``."""
    if len(shift.lines) != len(dialogue.utterances):
        raise MisalignedShift(dialogue.id, len(dialogue.utterances), len(shift.lines))
    for i, line in enumerate(shift.lines):
        if not line.strip():
            raise MisalignedShift(
                dialogue.id,
                len(dialogue.utterances),
                len(shift.lines),
                detail=f"line {i} is empty",
            )


def _is_turn_start(line: str) -> bool:
    # A new turn needs a colon with a non-empty speaker name before it.
    head, sep, _ = line.partition(":")
    return bool(sep) and bool(head.strip())


def parse_dialogue_text(raw: str, id: str) -> Dialogue:
    """Parse newline-separated ``Speaker: body`` turns into a :class:`Dialogue`.

    The split is on the first colon only, so colons in the body (emoticons,
    timestamps) stay in the body and speaker names may contain spaces or
    commas. A line without a speaker marker continues the previous turn and
    is appended with a single space (long-turn transcripts wrap lines).
    Blank lines are skipped.
    """
    pieces: list[tuple[str, str, list[str]]] = []  # (speaker, text, raw lines)
    for line in raw.splitlines():
        if not line.strip():
            continue
        if _is_turn_start(line):
            speaker, _, body = line.partition(":")
            pieces.append((speaker.strip(), body.strip(), [line]))
        else:
            if not pieces:
                raise OrphanContinuation(
                    f"dialogue {id!r}: first line has no 'Speaker:' marker: {line!r}"
                )
            speaker, text, raw_lines = pieces[-1]
            joined = f"{text} {line.strip()}".strip()
            pieces[-1] = (speaker, joined, raw_lines + [line])
    if not pieces:
        raise EmptyInput(f"dialogue {id!r}: no parseable lines")
    utterances = tuple(
        Utterance(index=i, speaker=speaker, text=text, raw=" ".join(raw_lines))
        for i, (speaker, text, raw_lines) in enumerate(pieces)
    )
    return Dialogue(id=id, utterances=utterances)


def compose_document(dialogue: Dialogue, shift: AlignedShift | None = None) -> list[str]:
    """Return the document lines extraction operates on.

    Without a shift this is the canonical ``Speaker: text`` line per
    utterance; with one it is the shifted lines. Length always equals the
    utterance count.
    """
    if shift is None:
        return [u.line for u in dialogue.utterances]
    validate_alignment(dialogue, shift)
    return list(shift.lines)


def _split_lines(value: str) -> list[str]:
    # "\r\n" accepted on read, never written.
    return value.replace("\r\n", "\n").split("\n")


def _record_field(record: dict, key: str, index: int) -> str:
    value = record.get(key)
    if not isinstance(value, str) or not value:
        raise MalformedRecord(index, f"missing or non-string field {key!r}")
    return value


def _build_corpus(
    split: str,
    entries: list[tuple[Dialogue, str | None, str | None]],
) -> Corpus:
    dialogues: list[Dialogue] = []
    shifts: dict[str, AlignedShift] = {}
    summaries: dict[str, Summary] = {}
    seen: set[str] = set()
    for i, (dialogue, summary, shift_text) in enumerate(entries):
        if dialogue.id in seen:
            raise MalformedRecord(i, f"duplicate dialogue id {dialogue.id!r}")
        seen.add(dialogue.id)
        dialogues.append(dialogue)
        if summary is not None:
            summaries[dialogue.id] = Summary(dialogue_id=dialogue.id, text=summary)
        if shift_text is not None:
            shift = AlignedShift(
                dialogue_id=dialogue.id, lines=tuple(_split_lines(shift_text))
            )
            validate_alignment(dialogue, shift)
            shifts[dialogue.id] = shift
    return Corpus(
        split=split, dialogues=tuple(dialogues), shifts=shifts, summaries=summaries
    )


def load_corpus(path: str | Path, format: str, split: str = "other") -> Corpus:
    """Load a corpus file or directory in one of ``CORPUS_FORMATS``.

    samsum-json: UTF-8 JSON array of ``{"id", "dialogue", "summary"}``.
    jsonl: one object per line, ``{"id", "dialogue", "summary"?, "shift"?}``;
    a present shift must align line-for-line with the dialogue.
    plain-dir: one ``.txt`` dialogue per file, id = filename stem.
    """
    if format not in CORPUS_FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {CORPUS_FORMATS}")
    if split not in SPLITS:
        raise ValueError(f"unknown split {split!r}; expected one of {SPLITS}")
    path = Path(path)
    entries: list[tuple[Dialogue, str | None, str | None]] = []

    if format == "samsum-json":
        try:
            records = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedRecord(0, f"invalid JSON: {exc}") from exc
        if not isinstance(records, list):
            raise MalformedRecord(0, "top-level JSON value is not an array")
        for i, record in enumerate(records):
            if not isinstance(record, dict):
                raise MalformedRecord(i, "record is not an object")
            did = _record_field(record, "id", i)
            dialogue = _parse_record_dialogue(record, did, i)
            entries.append((dialogue, _record_field(record, "summary", i), None))
    elif format == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise MalformedRecord(i, f"invalid JSON: {exc}") from exc
                if not isinstance(record, dict):
                    raise MalformedRecord(i, "record is not an object")
                did = _record_field(record, "id", i)
                dialogue = _parse_record_dialogue(record, did, i)
                summary = record.get("summary")
                shift = record.get("shift")
                if summary is not None and not isinstance(summary, str):
                    raise MalformedRecord(i, "field 'summary' is not a string")
                if shift is not None and not isinstance(shift, str):
                    raise MalformedRecord(i, "field 'shift' is not a string")
                entries.append((dialogue, summary, shift))
    else:  # plain-dir
        for i, txt in enumerate(sorted(path.glob("*.txt"))):
            content = txt.read_text(encoding="utf-8")
            try:
                dialogue = parse_dialogue_text(content, id=txt.stem)
            except (EmptyInput, OrphanContinuation) as exc:
                raise MalformedRecord(i, f"{txt.name}: {exc}") from exc
            entries.append((dialogue, None, None))

    return _build_corpus(split, entries)


def _parse_record_dialogue(record: dict, dialogue_id: str, index: int) -> Dialogue:
    text = _record_field(record, "dialogue", index)
    try:
        return parse_dialogue_text(text.replace("\r\n", "\n"), id=dialogue_id)
    except (EmptyInput, OrphanContinuation) as exc:
        raise MalformedRecord(index, str(exc)) from exc
