"""The three-way verdict type, shared by loss and decision modules."""

from __future__ import annotations

import enum
from fractions import Fraction


class Verdict(enum.Enum):
    """Accept, remain undecided, or reject a hypothesis.

    The numeric weights 0, 1/2, 1 follow the usual test-function encoding
    (0 = accept, 1 = reject, 1/2 = undecided).
    """

    ACCEPT = "accept"
    BOUNDARY = "boundary"
    REJECT = "reject"

    @property
    def weight(self) -> Fraction:
        return _WEIGHTS[self]

    def __repr__(self) -> str:
        return f"Verdict.{self.name}"


_WEIGHTS = {
    Verdict.ACCEPT: Fraction(0),
    Verdict.BOUNDARY: Fraction(1, 2),
    Verdict.REJECT: Fraction(1),
}

#: Fixed preference used to break exact ties between expected losses.  The
#: undecided verdict wins ties, which reproduces the threshold rules' closed
#: boundary regions exactly.
TIE_ORDER = (Verdict.BOUNDARY, Verdict.ACCEPT, Verdict.REJECT)
