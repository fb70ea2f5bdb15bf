"""Shared exception types."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad grammar text, unknown symbol, ...)."""


class BudgetError(RuntimeError):
    """A resource budget (word count, search nodes, rounds) was exhausted."""


class SoundnessError(AssertionError):
    """An internal invariant that should hold by construction was violated.

    Raised instead of returning a wrong answer, e.g. when a reconstructed
    intersection witness fails membership in one of the input languages.
    """


class ProgressNotReached(RuntimeError):
    """A word survived every refinement round within the allowed budget."""
