"""Tokenization, n-gram multisets, and lexicon-based detectors.

Shared by the metrics, statistics, and heuristic modules. Two tokenization
modes exist on purpose: ``metric`` normalizes for ROUGE and edit distance,
``surface`` preserves case and punctuation for the heuristic and for
statistics that must count symbols.
"""

from __future__ import annotations

import hashlib
import os
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import InvalidOrder

MODES = ("metric", "surface")

LEXICON_DIR_ENV = "SHIFTKIT_LEXICON_DIR"

# Unicode blocks counted as emoji, by codepoint range (inclusive).
EMOJI_RANGES = (
    (0x1F300, 0x1F5FF),  # misc symbols and pictographs
    (0x1F600, 0x1F64F),  # emoticons
    (0x1F680, 0x1F6FF),  # transport and map symbols
    (0x1F900, 0x1F9FF),  # supplemental symbols and pictographs
    (0x1FA70, 0x1FAFF),  # symbols and pictographs extended-A
    (0x2600, 0x26FF),    # miscellaneous symbols
    (0x2700, 0x27BF),    # dingbats
    (0x1F1E6, 0x1F1FF),  # regional indicators
)

# First-person forms treated as plural in the stats breakdown.
FIRST_PLURAL = frozenset(
    {"we", "us", "our", "ours", "ourselves", "we're", "we've", "we'll", "we'd"}
)


def _is_edge_punct(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def strip_edge_punct(token: str) -> str:
    """Strip leading and trailing punctuation/symbol characters."""
    start, end = 0, len(token)
    while start < end and _is_edge_punct(token[start]):
        start += 1
    while end > start and _is_edge_punct(token[end - 1]):
        end -= 1
    return token[start:end]


def strip_trailing_punct(token: str) -> str:
    """Strip only trailing punctuation/symbol characters."""
    end = len(token)
    while end > 0 and _is_edge_punct(token[end - 1]):
        end -= 1
    return token[:end]


@dataclass(frozen=True)
class TokenSeq:
    tokens: tuple[str, ...]
    source: str

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize(text: str, mode: str = "metric") -> TokenSeq:
    """Split ``text`` into tokens.

    metric: lowercase, whitespace split, edge punctuation stripped per
    token, empty tokens dropped. surface: whitespace split only.
    """
    if mode not in MODES:
        raise ValueError(f"unknown tokenize mode {mode!r}; expected one of {MODES}")
    if mode == "surface":
        tokens = tuple(text.split())
    else:
        tokens = tuple(
            stripped
            for t in text.lower().split()
            if (stripped := strip_edge_punct(t))
        )
    return TokenSeq(tokens=tokens, source=text)


@dataclass(frozen=True)
class NGramMultiset:
    n: int
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())


def ngram_counts(tokens: tuple[str, ...] | list[str], n: int) -> Counter:
    """Multiset of contiguous n-grams as a Counter of tuples."""
    if n < 1:
        raise InvalidOrder(f"n-gram order must be >= 1, got {n}")
    if len(tokens) < n:
        return Counter()
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def ngrams(seq: TokenSeq, n: int) -> NGramMultiset:
    return NGramMultiset(n=n, counts=dict(ngram_counts(seq.tokens, n)))


@dataclass(frozen=True)
class Lexicons:
    """Emoticon and pronoun lexicons plus their declared versions."""

    emoticons: tuple[str, ...]
    first_person: frozenset
    second_person: frozenset
    versions: dict

    def version_string(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.versions.items()))


def _read_lexicon(name: str, text: str) -> tuple[tuple[str, ...], str]:
    entries = []
    version = ""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            if body.lower().startswith("version:"):
                version = body.split(":", 1)[1].strip()
            continue
        entries.append(stripped)
    if not version:
        digest = hashlib.sha1(text.encode("utf-8")).hexdigest()[:8]
        version = f"sha1:{digest}"
    return tuple(entries), version


def _load_from(read) -> Lexicons:
    emoticons, emo_ver = _read_lexicon("emoticons", read("emoticons.txt"))
    first, first_ver = _read_lexicon("pronouns_first", read("pronouns_first.txt"))
    second, second_ver = _read_lexicon("pronouns_second", read("pronouns_second.txt"))
    return Lexicons(
        emoticons=tuple(sorted(emoticons, key=len, reverse=True)),
        first_person=frozenset(e.lower() for e in first),
        second_person=frozenset(e.lower() for e in second),
        versions={
            "emoticons": emo_ver,
            "pronouns_first": first_ver,
            "pronouns_second": second_ver,
        },
    )


def load_lexicons(directory: str | Path) -> Lexicons:
    """Load lexicon files from a directory (one entry per line, # comments)."""
    directory = Path(directory)
    return _load_from(lambda name: (directory / name).read_text(encoding="utf-8"))


@lru_cache(maxsize=1)
def _packaged_lexicons() -> Lexicons:
    data = resources.files(__package__) / "data"
    return _load_from(lambda name: (data / name).read_text(encoding="utf-8"))


def default_lexicons() -> Lexicons:
    """Packaged lexicons, unless ``SHIFTKIT_LEXICON_DIR`` points elsewhere."""
    override = os.environ.get(LEXICON_DIR_ENV)
    if override:
        return load_lexicons(override)
    return _packaged_lexicons()


def _is_emoji_codepoint(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in EMOJI_RANGES)


def count_emoji(text: str, lexicons: Lexicons | None = None) -> int:
    """Count Unicode emoji codepoints plus ASCII emoticons.

    Emoticons match longest-first and never overlap, so ":/)" counts once.
    """
    lex = lexicons or default_lexicons()
    count = sum(1 for ch in text if _is_emoji_codepoint(ch))
    i = 0
    n = len(text)
    while i < n:
        for emo in lex.emoticons:
            if text.startswith(emo, i):
                count += 1
                i += len(emo)
                break
        else:
            i += 1
    return count


def count_person_pronouns(text: str, lexicons: Lexicons | None = None) -> tuple[int, int]:
    """Count (first, second) person pronoun tokens, case-insensitively.

    Tokens are surface tokens with trailing punctuation stripped before
    matching, so "one?" matches "one" and "you're" stays intact.
    """
    lex = lexicons or default_lexicons()
    first = second = 0
    for token in text.split():
        core = strip_trailing_punct(token).lower()
        if core in lex.first_person:
            first += 1
        elif core in lex.second_person:
            second += 1
    return first, second


def pronoun_breakdown(text: str, lexicons: Lexicons | None = None) -> tuple[int, int, int]:
    """Count (first singular, first plural, second) pronoun tokens."""
    lex = lexicons or default_lexicons()
    singular = plural = second = 0
    for token in text.split():
        core = strip_trailing_punct(token).lower()
        if core in lex.first_person:
            if core in FIRST_PLURAL:
                plural += 1
            else:
                singular += 1
        elif core in lex.second_person:
            second += 1
    return singular, plural, second
