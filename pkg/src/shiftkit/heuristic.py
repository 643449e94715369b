"""Rules-based perspective-shift baseline.

Prepends ``<speaker> says`` to each utterance, swaps first-person-singular
subject forms for the speaker name, and appends a period when the line ends
unpunctuated. Deliberately naive: no verb re-conjugation, no second-person
resolution, no case normalization. Rewriting happens token by token, so
inter-token whitespace is normalized to single spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dialogue import AlignedShift, Dialogue, Utterance
from .textcore import strip_trailing_punct

SPEAKER_SLOT = "<S>"

DEFAULT_CONTRACTIONS = {
    "I'm": "<S> is",
    "I've": "<S> has",
    "I'll": "<S> will",
    "I'd": "<S> would",
    "I": "<S>",
}

TERMINAL_PUNCT = (".", "!", "?")


@dataclass(frozen=True)
class HeuristicConfig:
    """Knobs for the rules-based shifter.

    ``expand_contractions`` keeps the apostrophe entries of the table active;
    with it off only the bare "I" substitution remains. ``lowercase_i``
    additionally matches lowercase variants ("i'm just gonna...") and is off
    by default because slang "i" is ambiguous.
    """

    expand_contractions: bool = True
    append_period: bool = True
    lowercase_i: bool = False
    contraction_table: dict = field(default_factory=lambda: dict(DEFAULT_CONTRACTIONS))

    def effective_table(self) -> dict:
        table = dict(self.contraction_table)
        if not self.expand_contractions:
            table = {k: v for k, v in table.items() if "'" not in k}
        if self.lowercase_i:
            for key, value in list(table.items()):
                table.setdefault(key.lower(), value)
        return table


def heuristic_shift(utt: Utterance, cfg: HeuristicConfig | None = None) -> str:
    """Shift a single utterance; table keys match whole surface tokens
    case-sensitively, with trailing punctuation carried over."""
    cfg = cfg or HeuristicConfig()
    if not utt.speaker:
        raise ValueError(f"utterance {utt.index} has an empty speaker")
    table = cfg.effective_table()
    out_tokens = []
    for token in utt.text.split():
        core = strip_trailing_punct(token)
        trail = token[len(core):]
        replacement = table.get(core)
        if replacement is not None:
            token = replacement.replace(SPEAKER_SLOT, utt.speaker) + trail
        out_tokens.append(token)
    shifted = f"{utt.speaker} says {' '.join(out_tokens)}"
    if cfg.append_period and not shifted.endswith(TERMINAL_PUNCT):
        shifted += "."
    return shifted


def heuristic_shift_dialogue(d: Dialogue, cfg: HeuristicConfig | None = None) -> AlignedShift:
    """Shift every utterance; alignment holds by construction."""
    cfg = cfg or HeuristicConfig()
    return AlignedShift(
        dialogue_id=d.id,
        lines=tuple(heuristic_shift(u, cfg) for u in d.utterances),
    )
