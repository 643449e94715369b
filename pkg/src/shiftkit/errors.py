"""Exception hierarchy shared across the toolkit.

Every data-level failure raises a subclass of :class:`ShiftkitError` so the
CLI can map them to a single exit code while keeping messages specific.
"""


class ShiftkitError(Exception):
    """Base class for all toolkit data errors."""


class EmptyInput(ShiftkitError):
    """Raw dialogue text contained no parseable lines."""


class OrphanContinuation(ShiftkitError):
    """The first line of a dialogue has no speaker marker to attach to."""


class MalformedRecord(ShiftkitError):
    """A corpus record could not be decoded or is missing required fields."""

    def __init__(self, index, message):
        super().__init__(f"record {index}: {message}")
        self.index = index


class MisalignedShift(ShiftkitError):
    """A perspective shift does not align 1:1 with its dialogue."""

    def __init__(self, dialogue_id, expected, actual, detail=""):
        msg = (
            f"dialogue {dialogue_id!r}: shift has {actual} lines, "
            f"expected {expected}"
        )
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.dialogue_id = dialogue_id
        self.expected = expected
        self.actual = actual


class InvalidOrder(ShiftkitError):
    """An n-gram order below 1 was requested."""


class SepCollision(ShiftkitError):
    """The separator token already occurs inside an utterance."""


class EmptyDocument(ShiftkitError):
    """Extraction was asked to run over a document with no lines."""


class EmptyReference(ShiftkitError):
    """Extraction was asked to optimize against an empty reference."""


class MissingPrediction(ShiftkitError):
    """A system under scoring does not cover a reference example."""

    def __init__(self, system, example_id):
        super().__init__(f"system {system!r} has no prediction for id {example_id!r}")
        self.system = system
        self.example_id = example_id


class MissingSummary(ShiftkitError):
    """A corpus dialogue lacks the reference summary an operation requires."""

    def __init__(self, dialogue_id):
        super().__init__(f"dialogue {dialogue_id!r} has no reference summary")
        self.dialogue_id = dialogue_id


class MissingShift(ShiftkitError):
    """A corpus dialogue lacks the aligned shift an operation requires."""

    def __init__(self, dialogue_id):
        super().__init__(f"dialogue {dialogue_id!r} has no aligned shift")
        self.dialogue_id = dialogue_id
