"""Deterministic fresh-name generation for grammar constructions."""

import itertools

_counter = itertools.count()


def fresh(prefix: str) -> str:
    """Return a name that cannot clash with user symbols (contains '#')."""
    return f"{prefix}#{next(_counter)}"


def reset_fresh_names() -> None:
    """Restart the counter; outputs become reproducible across runs."""
    global _counter
    _counter = itertools.count()
