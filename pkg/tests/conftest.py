import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from shiftkit import AlignedShift, parse_dialogue_text

TABLE1_TEXT = """Laura: I need a new printer :/
Laura: thinking about this one
Laura: <file_other>
Jamie: you're sure you need a new one?
Jamie: I mean you can buy a second hand one
Laura: could be"""

TABLE1_SHIFT_LINES = (
    "Laura is frustrated that she needs a new printer.",
    "Laura is thinking about a specific printer.",
    "Laura sends a file.",
    "Jamie asks if Laura is sure she needs a new one.",
    "Jamie clarifies that Laura could buy a secondhand printer.",
    "Laura says that's possible.",
)


@pytest.fixture
def printer_dialogue():
    return parse_dialogue_text(TABLE1_TEXT, "printer")


@pytest.fixture
def printer_shift():
    return AlignedShift(dialogue_id="printer", lines=TABLE1_SHIFT_LINES)


def write_jsonl(path, records):
    path.write_text(
        "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records),
        encoding="utf-8",
    )
    return path


@pytest.fixture
def small_corpus_jsonl(tmp_path):
    """Two-dialogue jsonl corpus with shifts and summaries."""
    records = [
        {
            "id": "printer",
            "dialogue": TABLE1_TEXT,
            "shift": "\n".join(TABLE1_SHIFT_LINES),
            "summary": "Laura needs a new printer.",
        },
        {
            "id": "lunch",
            "dialogue": "Ann: lunch today?\nBen: sure, at noon",
            "shift": "Ann asks about lunch today.\nBen agrees to lunch at noon.",
            "summary": "Ann and Ben will have lunch at noon.",
        },
    ]
    return write_jsonl(tmp_path / "corpus.jsonl", records)
