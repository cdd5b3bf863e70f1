from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from cpoisson.expr import Expr

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check; a failure always carries at least one witness.

    Witnesses are ``(location, value)`` pairs where the value is the nonzero
    expression (or a numeric residual) that refutes the checked identity.
    """

    status: str
    witnesses: tuple[tuple[str, Expr | float | str], ...] = ()
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.status not in (PASS, FAIL, INDETERMINATE):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and not self.witnesses:
            raise ValueError("a failing verdict needs a witness")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @classmethod
    def from_residuals(cls, residuals: Iterable[tuple[str, Expr]], notes: Iterable[str] = ()) -> "Verdict":
        """Pass iff every residual is identically zero."""
        bad = tuple((loc, r) for loc, r in residuals if not r.is_zero())
        return cls(FAIL if bad else PASS, bad, tuple(notes))

    def with_notes(self, *notes: str) -> "Verdict":
        return Verdict(self.status, self.witnesses, self.notes + notes)


def combine(verdicts: Iterable[Verdict]) -> Verdict:
    """Fail if any fails, else indeterminate if any is, else pass."""
    verdicts = list(verdicts)
    witnesses = tuple(w for v in verdicts for w in v.witnesses)
    notes = tuple(n for v in verdicts for n in v.notes)
    if any(v.status == FAIL for v in verdicts):
        return Verdict(FAIL, witnesses, notes)
    if any(v.status == INDETERMINATE for v in verdicts):
        return Verdict(INDETERMINATE, witnesses, notes)
    return Verdict(PASS, witnesses, notes)
