import json

import pytest
from hypothesis import given, strategies as st

from shiftkit import compose_document, load_corpus, parse_dialogue_text
from shiftkit.errors import (
    EmptyInput,
    MalformedRecord,
    MisalignedShift,
    OrphanContinuation,
)

from conftest import TABLE1_SHIFT_LINES, TABLE1_TEXT, write_jsonl


def test_parse_two_turns():
    d = parse_dialogue_text(
        "Laura: I need a new printer :/\nJamie: you're sure you need a new one?", "t"
    )
    assert len(d) == 2
    assert d.speakers == ("Laura", "Jamie")
    assert d.utterances[0].text == "I need a new printer :/"
    assert d.utterances[1].speaker == "Jamie"


def test_parse_minimal():
    d = parse_dialogue_text("A: hi", "t")
    assert len(d) == 1
    assert d.utterances[0].speaker == "A"
    assert d.utterances[0].text == "hi"


def test_parse_uppercase_speaker_preserved():
    d = parse_dialogue_text("MATT: Okay. You take your first step…", "t")
    assert d.utterances[0].speaker == "MATT"


def test_parse_speaker_with_spaces_and_comma():
    d = parse_dialogue_text(
        "MADELELEINE BRAND, host: OK, here's some good news.", "t"
    )
    assert d.utterances[0].speaker == "MADELELEINE BRAND, host"
    assert d.utterances[0].text == "OK, here's some good news."


def test_body_keeps_colons():
    d = parse_dialogue_text("Ann: meet at 9:30", "t")
    assert d.utterances[0].text == "meet at 9:30"


def test_continuation_merges_into_previous():
    d = parse_dialogue_text("A: first part\nsecond part\nB: next", "t")
    assert len(d) == 2
    assert d.utterances[0].text == "first part second part"
    assert d.utterances[1].speaker == "B"


def test_orphan_continuation():
    with pytest.raises(OrphanContinuation):
        parse_dialogue_text("no speaker marker here", "t")


def test_empty_input():
    with pytest.raises(EmptyInput):
        parse_dialogue_text("   \n  \n", "t")


def test_utterance_indexes_match_position():
    d = parse_dialogue_text(TABLE1_TEXT, "t")
    assert [u.index for u in d.utterances] == list(range(6))


def test_attachment_tokens_kept_verbatim():
    d = parse_dialogue_text("Crystal: <file_photo>", "t")
    assert d.utterances[0].text == "<file_photo>"


speaker_st = st.text(
    alphabet=st.characters(whitelist_categories=("Lu", "Ll"), max_codepoint=0x24F),
    min_size=1,
    max_size=8,
)
body_st = st.text(
    alphabet=st.characters(blacklist_characters="\n\r\x0b\x0c\x1c\x1d\x1e\x85  "),
    max_size=30,
)


@given(st.lists(st.tuples(speaker_st, body_st), min_size=1, max_size=6))
def test_roundtrip_up_to_normalization(turns):
    raw = "\n".join(f"{s}: {b}" for s, b in turns)
    d = parse_dialogue_text(raw, "t")
    rebuilt = "\n".join(u.line for u in d.utterances)
    reparsed = parse_dialogue_text(rebuilt, "t")
    assert [u.line for u in reparsed.utterances] == [u.line for u in d.utterances]


def test_compose_without_shift(printer_dialogue):
    lines = compose_document(printer_dialogue)
    assert len(lines) == 6
    assert all(
        line.startswith(u.speaker) for line, u in zip(lines, printer_dialogue.utterances)
    )


def test_compose_with_shift(printer_dialogue, printer_shift):
    lines = compose_document(printer_dialogue, printer_shift)
    assert len(lines) == 6
    assert lines[0] == "Laura is frustrated that she needs a new printer."


def test_compose_misaligned(printer_dialogue, printer_shift):
    from shiftkit import AlignedShift

    bad = AlignedShift("printer", printer_shift.lines[:-1])
    with pytest.raises(MisalignedShift):
        compose_document(printer_dialogue, bad)


def test_load_samsum_json(tmp_path):
    path = tmp_path / "samsum.json"
    path.write_text(
        json.dumps(
            [
                {"id": "1", "dialogue": "A: hi\nB: hello", "summary": "Greetings."},
                {"id": "2", "dialogue": "C: bye", "summary": "Farewell."},
            ]
        ),
        encoding="utf-8",
    )
    corpus = load_corpus(path, "samsum-json", split="train")
    assert corpus.split == "train"
    assert len(corpus) == 2
    assert len(corpus.summaries) == 2
    assert not corpus.shifts


def test_load_samsum_json_empty_array(tmp_path):
    path = tmp_path / "samsum.json"
    path.write_text("[]", encoding="utf-8")
    corpus = load_corpus(path, "samsum-json")
    assert len(corpus) == 0


def test_load_jsonl_with_shift(small_corpus_jsonl):
    corpus = load_corpus(small_corpus_jsonl, "jsonl")
    assert len(corpus) == 2
    assert corpus.shifts["printer"].lines == TABLE1_SHIFT_LINES
    assert corpus.summaries["lunch"].text == "Ann and Ben will have lunch at noon."


def test_load_jsonl_misaligned_shift(tmp_path):
    path = write_jsonl(
        tmp_path / "bad.jsonl",
        [{"id": "x", "dialogue": "A: one\nB: two", "shift": "only one line"}],
    )
    with pytest.raises(MisalignedShift) as exc:
        load_corpus(path, "jsonl")
    assert exc.value.expected == 2
    assert exc.value.actual == 1


def test_load_jsonl_malformed_record(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id": "x"}\n', encoding="utf-8")
    with pytest.raises(MalformedRecord) as exc:
        load_corpus(path, "jsonl")
    assert exc.value.index == 0


def test_load_jsonl_duplicate_id(tmp_path):
    path = write_jsonl(
        tmp_path / "dup.jsonl",
        [
            {"id": "x", "dialogue": "A: hi"},
            {"id": "x", "dialogue": "B: again"},
        ],
    )
    with pytest.raises(MalformedRecord):
        load_corpus(path, "jsonl")


def test_load_plain_dir(tmp_path):
    (tmp_path / "one.txt").write_text("A: hi\nB: yo", encoding="utf-8")
    (tmp_path / "two.txt").write_text("C: hey", encoding="utf-8")
    corpus = load_corpus(tmp_path, "plain-dir")
    assert [d.id for d in corpus.dialogues] == ["one", "two"]
    assert corpus.utterance_count() == 3


def test_load_crlf_accepted(tmp_path):
    path = tmp_path / "crlf.jsonl"
    record = {"id": "x", "dialogue": "A: hi\r\nB: yo", "shift": "A greets.\r\nB replies."}
    path.write_text(json.dumps(record) + "\n", encoding="utf-8")
    corpus = load_corpus(path, "jsonl")
    assert len(corpus.dialogues[0]) == 2
    assert corpus.shifts["x"].lines == ("A greets.", "B replies.")


def test_load_deterministic(small_corpus_jsonl):
    a = load_corpus(small_corpus_jsonl, "jsonl")
    b = load_corpus(small_corpus_jsonl, "jsonl")
    assert a == b
