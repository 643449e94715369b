"""ROUGE, token edit distance, corpus statistics, system scoring.

ROUGE configuration choices are ones the downstream tables depend on, so
they are fixed here and echoed into report headers: metric-mode
tokenization (lowercase, edge punctuation stripped), no stemming, no
stopword removal, F1 with beta=1, corpus aggregation by per-example mean.
Displayed scores are x100 with two decimals; stored values stay in [0, 1].
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .dialogue import Corpus
from .errors import MissingPrediction
from .textcore import (
    Lexicons,
    count_emoji,
    default_lexicons,
    ngram_counts,
    pronoun_breakdown,
    tokenize,
)

ROUGE_CONFIG = "tok=metric;stem=no;stop=no;score=f1;agg=per-example-mean"


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _prf(overlap: int, cand_total: int, ref_total: int) -> RougeScore:
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return RougeScore(precision=precision, recall=recall, f1=f1_score(precision, recall))


def overlap_count(cand: Counter, ref: Counter) -> int:
    """Clipped n-gram overlap: sum over grams of min(count_cand, count_ref)."""
    if len(ref) < len(cand):
        cand, ref = ref, cand
    return sum(min(c, ref[g]) for g, c in cand.items() if g in ref)


def rouge_n(candidate: str, reference: str, n: int) -> RougeScore:
    """N-gram overlap ROUGE over metric-mode tokens."""
    cand = ngram_counts(tokenize(candidate, "metric").tokens, n)
    ref = ngram_counts(tokenize(reference, "metric").tokens, n)
    return _prf(overlap_count(cand, ref), sum(cand.values()), sum(ref.values()))


def lcs_len(a, b) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j, y in enumerate(b, start=1):
            cur = row[j]
            if x == y:
                row[j] = prev + 1
            elif row[j - 1] > cur:
                row[j] = row[j - 1]
            prev = cur
    return row[-1]


def rouge_l(candidate: str, reference: str) -> RougeScore:
    """LCS-based ROUGE over metric-mode tokens."""
    cand = tokenize(candidate, "metric").tokens
    ref = tokenize(reference, "metric").tokens
    return _prf(lcs_len(cand, ref), len(cand), len(ref))


def levenshtein(a, b) -> int:
    """Unit-cost edit distance between two token sequences."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    row = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        prev = row[0]
        row[0] = i
        for j, y in enumerate(b, start=1):
            cur = row[j]
            if x == y:
                row[j] = prev
            else:
                row[j] = 1 + min(prev, cur, row[j - 1])
            prev = cur
    return row[-1]


def token_edit_distance(a: str, b: str) -> int:
    """Word-wise Levenshtein distance over surface-mode tokens."""
    return levenshtein(tokenize(a, "surface").tokens, tokenize(b, "surface").tokens)


@dataclass(frozen=True)
class StatsReport:
    """Corpus-level means; original-side means divide by utterance_count,
    shift-side means divide by aligned_pair_count."""

    dialogue_count: int
    utterance_count: int
    mean_words_per_turn: float
    mean_emoji_per_utterance: float
    mean_person_pronouns_per_utterance: float
    mean_first_person_singular_per_utterance: float
    mean_first_person_plural_per_utterance: float
    mean_second_person_per_utterance: float
    aligned_pair_count: int
    mean_token_edit_distance: float | None
    shifted_mean_words_per_turn: float | None
    shifted_mean_emoji_per_utterance: float | None
    shifted_mean_person_pronouns_per_utterance: float | None
    lexicon_versions: dict = field(default_factory=dict)


def corpus_stats(corpus: Corpus, lexicons: Lexicons | None = None) -> StatsReport:
    """Word/emoji/pronoun statistics, paired with shift-side statistics and
    word-wise edit distance where aligned shifts are present.

    Words per turn counts surface tokens of the composed line, speaker
    token included ("A: x y" counts 3).
    """
    lex = lexicons or default_lexicons()
    utt_total = 0
    words = 0
    emoji = 0
    first_sing = first_plur = second = 0
    pair_total = 0
    edit_total = 0
    s_words = 0
    s_emoji = 0
    s_pronouns = 0
    for d in corpus.dialogues:
        shift = corpus.shifts.get(d.id)
        for u in d.utterances:
            utt_total += 1
            line = u.line
            words += len(tokenize(line, "surface"))
            emoji += count_emoji(u.text, lex)
            sing, plur, sec = pronoun_breakdown(u.text, lex)
            first_sing += sing
            first_plur += plur
            second += sec
            if shift is not None:
                shifted = shift.lines[u.index]
                pair_total += 1
                edit_total += token_edit_distance(line, shifted)
                s_words += len(tokenize(shifted, "surface"))
                s_emoji += count_emoji(shifted, lex)
                s_sing, s_plur, s_sec = pronoun_breakdown(shifted, lex)
                s_pronouns += s_sing + s_plur + s_sec

    def per_utt(total):
        return total / utt_total if utt_total else 0.0

    def per_pair(total):
        return total / pair_total if pair_total else None

    return StatsReport(
        dialogue_count=len(corpus.dialogues),
        utterance_count=utt_total,
        mean_words_per_turn=per_utt(words),
        mean_emoji_per_utterance=per_utt(emoji),
        mean_person_pronouns_per_utterance=per_utt(first_sing + first_plur + second),
        mean_first_person_singular_per_utterance=per_utt(first_sing),
        mean_first_person_plural_per_utterance=per_utt(first_plur),
        mean_second_person_per_utterance=per_utt(second),
        aligned_pair_count=pair_total,
        mean_token_edit_distance=per_pair(edit_total),
        shifted_mean_words_per_turn=per_pair(s_words),
        shifted_mean_emoji_per_utterance=per_pair(s_emoji),
        shifted_mean_person_pronouns_per_utterance=per_pair(s_pronouns),
        lexicon_versions=dict(lex.versions),
    )


@dataclass(frozen=True)
class ScoreRow:
    system: str
    rouge1: float
    rouge2: float
    rougeL: float
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScoreTable:
    rows: tuple[ScoreRow, ...]

    def extra_columns(self) -> list[str]:
        columns: dict[str, None] = {}
        for row in self.rows:
            for name in row.extras:
                columns.setdefault(name, None)
        return sorted(columns)


def score_texts(outputs: Mapping[str, str], references: Mapping[str, str], system: str) -> ScoreRow:
    """Mean per-example ROUGE-1/2/L F1 of one system over all reference ids."""
    r1 = r2 = rl = 0.0
    for example_id, reference in references.items():
        if example_id not in outputs:
            raise MissingPrediction(system, example_id)
        candidate = outputs[example_id]
        r1 += rouge_n(candidate, reference, 1).f1
        r2 += rouge_n(candidate, reference, 2).f1
        rl += rouge_l(candidate, reference).f1
    n = len(references) or 1
    return ScoreRow(system=system, rouge1=r1 / n, rouge2=r2 / n, rougeL=rl / n)


def score_systems(
    outputs: Mapping[str, Mapping[str, str]],
    references: Mapping[str, str],
    external: Mapping[str, Mapping[str, Mapping[str, float]]] | None = None,
) -> ScoreTable:
    """Score each system against the shared references.

    ``external`` carries per-example scores computed elsewhere (BARTScore,
    perplexity, ...) keyed system -> metric -> id -> value; they are averaged
    over ids that are also reference ids and attached without interpretation.
    """
    rows = []
    for system, texts in outputs.items():
        row = score_texts(texts, references, system)
        extras = {}
        for metric, values in (external or {}).get(system, {}).items():
            in_refs = [v for example_id, v in values.items() if example_id in references]
            if in_refs:
                extras[metric] = sum(in_refs) / len(in_refs)
        rows.append(ScoreRow(row.system, row.rouge1, row.rouge2, row.rougeL, extras))
    return ScoreTable(rows=tuple(rows))
