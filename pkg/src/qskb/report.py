"""Validation reports, error types, and search bounds shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


class StructureError(ValueError):
    """A table is malformed or an operation's precondition is violated."""


class BoundExceeded(RuntimeError):
    """A search or enumeration was refused because it exceeds the configured bound."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


DEFAULT_MAX_ARROWS = 12
DEFAULT_MAX_VERTICES = 4

ENV_MAX_ARROWS = "QSKB_MAX_ARROWS"


def max_arrows_bound(explicit=None):
    """Resolve the arrow bound: explicit argument, else QSKB_MAX_ARROWS, else 12."""
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(ENV_MAX_ARROWS)
    if env is not None:
        return int(env)
    return DEFAULT_MAX_ARROWS


def check_bound(size, bound=None, what="structure", estimate=None):
    limit = max_arrows_bound(bound)
    if size > limit:
        raise BoundExceeded(
            f"{what} needs {size} > {limit} arrows; raise --max-arrows or {ENV_MAX_ARROWS}",
            estimate=estimate,
        )
    return limit


@dataclass(frozen=True)
class Failure:
    """One failed law together with the first witness in canonical order."""

    law: str
    witness: tuple = ()
    detail: str = ""

    def __str__(self):
        parts = [self.law]
        if self.witness:
            parts.append("at " + ", ".join(str(w) for w in self.witness))
        if self.detail:
            parts.append("(" + self.detail + ")")
        return " ".join(parts)


@dataclass(frozen=True)
class Report:
    """Outcome of a validator: empty failure list means the structure is valid."""

    failures: tuple = ()

    @property
    def ok(self):
        return not self.failures

    def law(self, name):
        """Return the failure for a given law, or None."""
        for f in self.failures:
            if f.law == name:
                return f
        return None

    @property
    def laws(self):
        return tuple(f.law for f in self.failures)

    def __str__(self):
        if self.ok:
            return "valid"
        return "invalid: " + "; ".join(str(f) for f in self.failures)


VALID = Report()


class ReportCollector:
    """Accumulates at most one witness per law, in first-seen order."""

    def __init__(self):
        self._laws = []
        self._by_law = {}

    def add(self, law, witness=(), detail=""):
        if law not in self._by_law:
            self._laws.append(law)
            self._by_law[law] = Failure(law, tuple(witness), detail)

    def seen(self, law):
        return law in self._by_law

    def report(self):
        return Report(tuple(self._by_law[l] for l in self._laws))
