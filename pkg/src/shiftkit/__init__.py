"""shiftkit: perspective-shift toolkit for dialogue summarization work.

Library surface re-exported here; the CLI lives in ``shiftkit.cli``.
"""

__version__ = "0.1.0"

from .dialogue import (
    AlignedShift,
    Corpus,
    Dialogue,
    Summary,
    Utterance,
    compose_document,
    load_corpus,
    parse_dialogue_text,
    validate_alignment,
)
from .encoders import (
    EncodedExample,
    SepConvention,
    encode,
    encode_conversation_level,
    encode_left_context,
    encode_left_right_context,
    encode_no_context,
    read_examples_jsonl,
    write_examples_jsonl,
)
from .extractive import (
    ExtractionObjective,
    ExtractionResult,
    OracleConfig,
    calibration_sweep,
    evaluate_subset,
    longest_k,
    longest_k_corpus,
    oracle_corpus,
    oracle_extract,
    shift_then_extract,
)
from .heuristic import HeuristicConfig, heuristic_shift, heuristic_shift_dialogue
from .metrics import (
    RougeScore,
    ScoreRow,
    ScoreTable,
    StatsReport,
    corpus_stats,
    rouge_l,
    rouge_n,
    score_systems,
    token_edit_distance,
)
from .textcore import (
    Lexicons,
    TokenSeq,
    count_emoji,
    count_person_pronouns,
    default_lexicons,
    load_lexicons,
    ngrams,
    tokenize,
)

__all__ = [
    "__version__",
    "AlignedShift",
    "Corpus",
    "Dialogue",
    "EncodedExample",
    "ExtractionObjective",
    "ExtractionResult",
    "HeuristicConfig",
    "Lexicons",
    "OracleConfig",
    "RougeScore",
    "ScoreRow",
    "ScoreTable",
    "SepConvention",
    "StatsReport",
    "Summary",
    "TokenSeq",
    "Utterance",
    "calibration_sweep",
    "compose_document",
    "corpus_stats",
    "count_emoji",
    "count_person_pronouns",
    "default_lexicons",
    "encode",
    "encode_conversation_level",
    "encode_left_context",
    "encode_left_right_context",
    "encode_no_context",
    "evaluate_subset",
    "heuristic_shift",
    "heuristic_shift_dialogue",
    "load_corpus",
    "load_lexicons",
    "longest_k",
    "longest_k_corpus",
    "ngrams",
    "oracle_corpus",
    "oracle_extract",
    "parse_dialogue_text",
    "read_examples_jsonl",
    "rouge_l",
    "rouge_n",
    "score_systems",
    "shift_then_extract",
    "token_edit_distance",
    "tokenize",
    "validate_alignment",
    "write_examples_jsonl",
]
