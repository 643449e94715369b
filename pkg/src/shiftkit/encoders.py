"""Seq2seq problem formulations for perspective shifting.

Four encoders turn an aligned (dialogue, shift) pair into (input, target)
examples: per-utterance with no context, with left context, with left and
right context, or one conversation-level example. Separator placement is
fixed here once so trained models and this toolkit agree bit-exactly: no
whitespace is added around the separator token, and turns join on "\\n".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .dialogue import AlignedShift, Dialogue, validate_alignment
from .errors import MalformedRecord, SepCollision

FORMULATIONS = (
    "no-context",
    "left-context",
    "left-right-context",
    "conversation-level",
)


@dataclass(frozen=True)
class SepConvention:
    sep_token: str = "[SEP]"
    turn_separator: str = "\n"

    def __post_init__(self):
        if not self.sep_token:
            raise ValueError("sep_token must be non-empty")


@dataclass(frozen=True)
class EncodedExample:
    dialogue_id: str
    formulation: str
    input: str
    target: str
    target_index: int | None = None


def _check_sep(lines: list[str], conv: SepConvention, dialogue_id: str) -> None:
    for i, line in enumerate(lines):
        if conv.sep_token in line:
            raise SepCollision(
                f"dialogue {dialogue_id!r}: separator {conv.sep_token!r} occurs "
                f"in line {i}: {line!r}"
            )


def encode_no_context(d: Dialogue, shift: AlignedShift) -> list[EncodedExample]:
    """One example per utterance; the input is the bare utterance line."""
    validate_alignment(d, shift)
    return [
        EncodedExample(
            dialogue_id=d.id,
            formulation="no-context",
            input=u.line,
            target=shift.lines[u.index],
            target_index=u.index,
        )
        for u in d.utterances
    ]


def encode_left_context(
    d: Dialogue, shift: AlignedShift, conv: SepConvention | None = None
) -> list[EncodedExample]:
    """One example per utterance; the separator delimits the preceding turns.

    The first turn has an empty left block but still carries the separator,
    keeping the input grammar uniform.
    """
    conv = conv or SepConvention()
    validate_alignment(d, shift)
    lines = [u.line for u in d.utterances]
    _check_sep(lines, conv, d.id)
    examples = []
    for t, line in enumerate(lines):
        left = conv.turn_separator.join(lines[:t])
        prefix = left + conv.turn_separator if left else ""
        examples.append(
            EncodedExample(
                dialogue_id=d.id,
                formulation="left-context",
                input=f"{prefix}{conv.sep_token}{line}",
                target=shift.lines[t],
                target_index=t,
            )
        )
    return examples


def encode_left_right_context(
    d: Dialogue, shift: AlignedShift, conv: SepConvention | None = None
) -> list[EncodedExample]:
    """One example per utterance; separators bracket the marked utterance
    inside the full conversation. Both separators are always present."""
    conv = conv or SepConvention()
    validate_alignment(d, shift)
    lines = [u.line for u in d.utterances]
    _check_sep(lines, conv, d.id)
    examples = []
    for t, line in enumerate(lines):
        left = conv.turn_separator.join(lines[:t])
        right = conv.turn_separator.join(lines[t + 1 :])
        prefix = left + conv.turn_separator if left else ""
        suffix = conv.turn_separator + right if right else ""
        examples.append(
            EncodedExample(
                dialogue_id=d.id,
                formulation="left-right-context",
                input=f"{prefix}{conv.sep_token}{line}{conv.sep_token}{suffix}",
                target=shift.lines[t],
                target_index=t,
            )
        )
    return examples


def encode_conversation_level(
    d: Dialogue, shift: AlignedShift, conv: SepConvention | None = None
) -> EncodedExample:
    """A single example mapping the whole conversation to the whole shift."""
    conv = conv or SepConvention()
    validate_alignment(d, shift)
    return EncodedExample(
        dialogue_id=d.id,
        formulation="conversation-level",
        input=conv.turn_separator.join(u.line for u in d.utterances),
        target=conv.turn_separator.join(shift.lines),
        target_index=None,
    )


def encode(
    d: Dialogue,
    shift: AlignedShift,
    formulation: str,
    conv: SepConvention | None = None,
) -> list[EncodedExample]:
    """Dispatch to one of the four encoders by formulation name."""
    if formulation == "no-context":
        return encode_no_context(d, shift)
    if formulation == "left-context":
        return encode_left_context(d, shift, conv)
    if formulation == "left-right-context":
        return encode_left_right_context(d, shift, conv)
    if formulation == "conversation-level":
        return [encode_conversation_level(d, shift, conv)]
    raise ValueError(f"unknown formulation {formulation!r}; expected one of {FORMULATIONS}")


def example_to_dict(example: EncodedExample) -> dict:
    record = {
        "dialogue_id": example.dialogue_id,
        "formulation": example.formulation,
        "input": example.input,
        "target": example.target,
    }
    if example.target_index is not None:
        record["target_index"] = example.target_index
    return record


def example_from_dict(record: dict, index: int) -> EncodedExample:
    try:
        return EncodedExample(
            dialogue_id=record["dialogue_id"],
            formulation=record["formulation"],
            input=record["input"],
            target=record["target"],
            target_index=record.get("target_index"),
        )
    except KeyError as exc:
        raise MalformedRecord(index, f"missing field {exc}") from exc


def write_examples_jsonl(
    examples: list[EncodedExample],
    path: str | Path,
    metadata: dict | None = None,
) -> None:
    """Write examples as UTF-8 JSONL, optionally preceded by a metadata line."""
    lines = []
    if metadata is not None:
        lines.append(json.dumps(metadata, ensure_ascii=False, sort_keys=True))
    for example in examples:
        lines.append(json.dumps(example_to_dict(example), ensure_ascii=False, sort_keys=True))
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_examples_jsonl(path: str | Path) -> tuple[dict | None, list[EncodedExample]]:
    """Read examples back; returns (metadata or None, examples)."""
    metadata = None
    examples = []
    with Path(path).open(encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(i, f"invalid JSON: {exc}") from exc
            if i == 0 and isinstance(record, dict) and "input" not in record:
                metadata = record
                continue
            examples.append(example_from_dict(record, i))
    return metadata, examples
