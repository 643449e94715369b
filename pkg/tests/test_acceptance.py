"""Acceptance gate: one test per criterion, one printed line per verdict.

Run with ``pytest tests/test_acceptance.py -v -s``. Criterion 6 needs a
user-supplied licensed SAMSum copy with aligned shift annotations (see
README) and skips otherwise.
"""

import math
import os
import random
from contextlib import contextmanager
from itertools import product

import pytest

from shiftkit import (
    AlignedShift,
    OracleConfig,
    load_corpus,
    longest_k,
    oracle_extract,
    parse_dialogue_text,
    rouge_l,
    rouge_n,
    score_systems,
)
from shiftkit.encoders import encode
from shiftkit.extractive import calibration_sweep
from shiftkit.heuristic import heuristic_shift
from shiftkit.metrics import corpus_stats, lcs_len, levenshtein
from shiftkit.report import score_rows_to_table

from oracles import (
    brute_edit_distance,
    brute_oracle,
    brute_subset_objective,
    simple_tokens,
    subsequence_sets,
)

SAMSUM_ENV = "SHIFTKIT_SAMSUM_TEST_JSONL"


@contextmanager
def criterion(num, desc):
    try:
        yield
    except pytest.skip.Exception:
        print(f"[ACCEPTANCE] criterion {num} ({desc}): SKIPPED (data-gated)")
        raise
    except BaseException:
        print(f"[ACCEPTANCE] criterion {num} ({desc}): FAIL")
        raise
    print(f"[ACCEPTANCE] criterion {num} ({desc}): PASS")


def test_criterion_1_heuristic_bit_exact():
    with criterion(1, "heuristic bit-exactness"):
        d = parse_dialogue_text(
            "Igor: Shit, I've got so much to do at work and I'm so demotivated.", "igor"
        )
        out = heuristic_shift(d.utterances[0])
        assert out == (
            "Igor says Shit, Igor has got so much to do at work and Igor is so demotivated."
        )


def test_criterion_2_rouge_correctness():
    with criterion(2, "ROUGE correctness"):
        # hand-computed cases
        assert abs(rouge_n("the cat sat", "the cat ran", 1).f1 - 2 / 3) < 1e-9
        assert abs(rouge_n("the cat sat", "the cat ran", 2).f1 - 1 / 2) < 1e-9
        assert abs(rouge_l("the cat sat", "the cat ran").f1 - 2 / 3) < 1e-9

        # property suite: identity, empty, precision/recall swap
        rng = random.Random(2024)
        vocab = ["a", "b", "c"]
        for _ in range(300):
            xs = [rng.choice(vocab) for _ in range(rng.randint(1, 8))]
            ys = [rng.choice(vocab) for _ in range(rng.randint(0, 8))]
            x, y = " ".join(xs), " ".join(ys)
            assert rouge_n(x, x, 1).f1 == 1.0
            assert rouge_l(x, x).f1 == 1.0
            for n in (1, 2):
                assert rouge_n(x, y, n).precision == rouge_n(y, x, n).recall
        assert rouge_n("", "anything here", 1).f1 == 0.0
        assert rouge_l("", "anything here").f1 == 0.0

        # brute-force LCS equality, all token sequences of length <= 6
        # over a 3-symbol alphabet (all unordered pairs; LCS is symmetric
        # in both implementations, spot-checked below)
        seqs = [()]
        for length in range(1, 7):
            seqs.extend(product(("a", "b", "c"), repeat=length))
        tables = [subsequence_sets(s) for s in seqs]
        for i, sa in enumerate(seqs):
            ta = tables[i]
            la = len(sa)
            for j in range(i, len(seqs)):
                sb = seqs[j]
                tb = tables[j]
                brute = 0
                for length in range(min(la, len(sb)), 0, -1):
                    if ta[length] & tb[length]:
                        brute = length
                        break
                assert lcs_len(sa, sb) == brute
        for _ in range(500):
            sa = seqs[rng.randrange(len(seqs))]
            sb = seqs[rng.randrange(len(seqs))]
            assert lcs_len(sa, sb) == lcs_len(sb, sa)


def test_criterion_3_edit_distance():
    with criterion(3, "edit-distance axioms + exhaustive equality"):
        rng = random.Random(31)
        vocab = ["a", "b", "c"]

        def rand_seq(max_len=6):
            return tuple(rng.choice(vocab) for _ in range(rng.randint(0, max_len)))

        # metric axioms on 10,000 random triples
        for _ in range(10_000):
            a, b, c = rand_seq(), rand_seq(), rand_seq()
            assert levenshtein(a, a) == 0
            ab = levenshtein(a, b)
            assert ab == levenshtein(b, a)
            assert levenshtein(a, c) <= ab + levenshtein(b, c)
            assert (ab == 0) == (a == b)

        # DP equals exhaustive alignment search: every pair up to length 4,
        # plus a seeded sample of pairs reaching lengths 5 and 6
        short = [()]
        for length in range(1, 5):
            short.extend(product(vocab, repeat=length))
        for a in short:
            for b in short:
                assert levenshtein(a, b) == brute_edit_distance(a, b)
        for _ in range(3000):
            a = tuple(rng.choice(vocab) for _ in range(rng.randint(5, 6)))
            b = tuple(rng.choice(vocab) for _ in range(rng.randint(0, 6)))
            assert levenshtein(a, b) == brute_edit_distance(a, b)


def test_criterion_4_oracle_optimality():
    with criterion(4, "oracle optimality + dominance over longest-3"):
        rng = random.Random(404)
        vocab = ["red", "blue", "fish", "cat", "dog", "sun", "moon", "tree"]
        cfg = OracleConfig(k_min=1, k_max=3)
        for _ in range(200):
            t = rng.randint(1, 10)
            lines = [
                " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 6)))
                for _ in range(t)
            ]
            reference = " ".join(rng.choice(vocab) for _ in range(rng.randint(2, 8)))
            result = oracle_extract(lines, reference, cfg)
            assert not result.approximate
            expected_idx, expected_value = brute_oracle(lines, reference, 1, 3)
            assert result.selected == expected_idx
            assert math.isclose(result.objective_value, expected_value, abs_tol=1e-12)

            baseline = longest_k(lines, 3)
            tokens = [simple_tokens(line) for line in lines]
            baseline_value = brute_subset_objective(
                tokens, baseline.selected, simple_tokens(reference), "mean-rouge"
            )
            assert result.objective_value >= baseline_value - 1e-12


def test_criterion_5_encoder_laws():
    with criterion(5, "encoder counting and separator laws"):
        rng = random.Random(55)
        vocab = ["hey", "ok", "sure", "why", "later", "tomorrow"]
        for _ in range(60):
            t = rng.randint(1, 20)
            text = "\n".join(
                f"S{i}: " + " ".join(rng.choice(vocab) for _ in range(rng.randint(1, 5)))
                for i in range(t)
            )
            d = parse_dialogue_text(text, "rand")
            shift = AlignedShift("rand", tuple(f"S{i} says something." for i in range(t)))
            assert len(encode(d, shift, "no-context")) == t
            assert len(encode(d, shift, "left-context")) == t
            both = encode(d, shift, "left-right-context")
            assert len(both) == t
            assert len(encode(d, shift, "conversation-level")) == 1
            lines = [u.line for u in d.utterances]
            for example in both:
                assert example.input.count("[SEP]") == 2
                assert example.input.replace("[SEP]", "").split("\n") == lines


def _load_samsum_corpus():
    path = os.environ.get(SAMSUM_ENV)
    if not path:
        pytest.skip(
            f"set {SAMSUM_ENV} to a JSONL file with id/dialogue/summary/shift "
            "records built from a licensed SAMSum copy plus the shift annotations"
        )
    return load_corpus(path, "jsonl", split="test")


TABLE4_ORIGINAL = (45.89, 16.35, 34.80)


def test_criterion_6_samsum_calibration():
    with criterion(6, "SAMSum statistics and Table-4 calibration (data-gated)"):
        corpus = _load_samsum_corpus()

        stats = corpus_stats(corpus)
        assert abs(stats.mean_words_per_turn - 8.4) <= 0.3
        assert abs(stats.shifted_mean_words_per_turn - 11.0) <= 0.3
        assert abs(stats.mean_token_edit_distance - 8.5) <= 0.5

        original_rows = calibration_sweep(corpus, "none")
        shifted_rows = calibration_sweep(corpus, "gold")

        some_config_matches = any(
            abs(row.rouge1 * 100 - TABLE4_ORIGINAL[0]) <= 2.0
            and abs(row.rouge2 * 100 - TABLE4_ORIGINAL[1]) <= 2.0
            and abs(row.rougeL * 100 - TABLE4_ORIGINAL[2]) <= 2.0
            for row in original_rows
        )
        assert some_config_matches, "no oracle configuration reproduces Table 4 original row"

        for orig, shifted in zip(original_rows, shifted_rows):
            assert shifted.rouge1 > orig.rouge1
            assert shifted.rouge2 > orig.rouge2
            assert shifted.rougeL > orig.rougeL


# aggregation-path targets: left-right-context row and CNN/DM zero-shot row
AGGREGATION_TARGETS = {
    "left-right-context": (63.57, 40.74, 62.04),
    "cnndm-zeroshot": (35.00, 12.09, 30.76),
}

# building blocks with exactly representable per-example scores
PAIR_PERFECT = ("p q", "p q")  # (R1, R2, RL) = (1, 1, 1)
PAIR_SWAPPED = ("b a", "a b")  # (1, 0, 1/2)
PAIR_HALF = ("a c", "a b")  # (1/2, 0, 1/2)
PAIR_DISJOINT = ("z z", "q q")  # (0, 0, 0)


def _synthetic_examples(targets):
    """Prediction/reference pairs whose per-example mean hits the targets.

    With fractions f = pct/100 the mix solves: perfect examples supply f2,
    swapped supply the R1-over-RL surplus, half-overlap supplies the rest of
    RL; all counts come out integral for two-decimal targets.
    """
    t1, t2, tl = (pct / 100 for pct in targets)
    n = 10_000
    n_perfect = round(t2 * n)
    n_swapped = round(2 * (t1 - tl) * n)
    n_half = round(2 * (2 * tl - t1 - t2) * n)
    n_zero = n - n_perfect - n_swapped - n_half
    assert min(n_perfect, n_swapped, n_half, n_zero) >= 0
    g = math.gcd(math.gcd(n_perfect, n_swapped), math.gcd(n_half, n_zero))
    counts = [c // g for c in (n_perfect, n_swapped, n_half, n_zero)]
    preds, refs = {}, {}
    i = 0
    for count, (pred, ref) in zip(
        counts, (PAIR_PERFECT, PAIR_SWAPPED, PAIR_HALF, PAIR_DISJOINT)
    ):
        for _ in range(count):
            preds[str(i)] = pred
            refs[str(i)] = ref
            i += 1
    return preds, refs


def test_criterion_7_aggregation_reproduces_table_values():
    with criterion(7, "aggregation path reproduces table values exactly"):
        for name, targets in AGGREGATION_TARGETS.items():
            preds, refs = _synthetic_examples(targets)
            table = score_systems({name: preds}, refs)
            row = table.rows[0]
            assert abs(row.rouge1 * 100 - targets[0]) < 1e-9
            assert abs(row.rouge2 * 100 - targets[1]) < 1e-9
            assert abs(row.rougeL * 100 - targets[2]) < 1e-9
            _, body = score_rows_to_table([row])
            assert body[0][1:4] == [f"{t:.2f}" for t in targets]
