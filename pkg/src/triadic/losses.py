"""Loss families for three-way tests.

Three shapes of loss live here:

* error-wise constant (EC) losses: four positive constants per hypothesis
  (cost of a wrong accept, of abstaining on either side, of a wrong reject),
  with the classical validity constraints that make the three-way structure
  meaningful;
* the tangent-set loss: a data-dependent table whose cells are decided by
  whether the parameter point is a strictly-more-probable contender against
  the hypothesis or against its complement;
* plain tables: arbitrary (hypothesis, decision, point) -> value maps, the
  escape hatch for custom losses and the properness checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import InvalidLossError
from .hypotheses import Hypothesis
from .rationals import frac
from .verdict import Verdict

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# Error-wise constant losses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ECConstants:
    """The four per-hypothesis constants of an error-wise constant loss.

    wrong_accept   cost of accepting a hypothesis the parameter is outside of
    abstain_true   cost of abstaining when the parameter is inside
    abstain_false  cost of abstaining when the parameter is outside
    wrong_reject   cost of rejecting a hypothesis the parameter is inside of

    Correct accepts and rejects cost 0.  All four constants must be positive.
    """

    wrong_accept: Fraction
    abstain_true: Fraction
    abstain_false: Fraction
    wrong_reject: Fraction

    def __post_init__(self):
        for name in ("wrong_accept", "abstain_true", "abstain_false", "wrong_reject"):
            value = frac(getattr(self, name))
            object.__setattr__(self, name, value)
            if value <= 0:
                raise InvalidLossError(f"{name} must be positive, got {value}")

    def value(self, decision: Verdict, inside: bool) -> Fraction:
        if decision is Verdict.ACCEPT:
            return Fraction(0) if inside else self.wrong_accept
        if decision is Verdict.BOUNDARY:
            return self.abstain_true if inside else self.abstain_false
        return self.wrong_reject if inside else Fraction(0)

    def scaled(self, factor) -> "ECConstants":
        f = frac(factor)
        return ECConstants(
            self.wrong_accept * f,
            self.abstain_true * f,
            self.abstain_false * f,
            self.wrong_reject * f,
        )


@dataclass(frozen=True, eq=True)
class ECLoss:
    """An EC loss family: default constants plus optional per-hypothesis overrides.

    With no overrides the constants do not depend on the hypothesis and the
    loss is "trivial" (TEC); then the acceptance/rejection thresholds are the
    same for every hypothesis.
    """

    default: ECConstants
    per_hypothesis: Mapping[int, ECConstants] = field(default_factory=dict)

    @classmethod
    def tec(cls, wrong_accept, abstain_true, abstain_false, wrong_reject) -> "ECLoss":
        return cls(ECConstants(wrong_accept, abstain_true, abstain_false, wrong_reject))

    @classmethod
    def agnostic_unit(cls, k: int) -> "ECLoss":
        """The k/1 loss: wrong calls cost k, abstaining costs 1 either way.

        Its thresholds are 1/k and (k-1)/k; the witness construction is built
        around it.  Only valid per the strict constraints for k >= 3.
        """
        return cls.tec(k, 1, 1, k)

    @property
    def trivial(self) -> bool:
        return not self.per_hypothesis

    def constants_for(self, hyp: Hypothesis) -> ECConstants:
        return self.per_hypothesis.get(hyp.mask, self.default)

    def as_table(self, k: int) -> "LossTable":
        def fn(hyp: Hypothesis, decision: Verdict, theta: int) -> Fraction:
            return self.constants_for(hyp).value(decision, theta in hyp)

        return LossTable(k, fn)


@dataclass(frozen=True)
class ECViolation:
    """One violated validity constraint, with the offending hypothesis if any."""

    constraint: str
    detail: str
    hypothesis_mask: int | None = None


_CONSTRAINTS = (
    (
        "abstain_true_bound",
        lambda c: c.abstain_true < c.wrong_reject / 2,
        lambda c: f"abstain_true={c.abstain_true} must be < wrong_reject/2={c.wrong_reject / 2}",
    ),
    (
        "abstain_false_bound",
        lambda c: c.abstain_false < c.wrong_accept / 2,
        lambda c: f"abstain_false={c.abstain_false} must be < wrong_accept/2={c.wrong_accept / 2}",
    ),
    (
        "threshold_separation",
        lambda c: (c.wrong_accept - c.abstain_false) * c.wrong_reject
        > c.abstain_true * c.wrong_accept,
        lambda c: (
            f"(wrong_accept-abstain_false)*wrong_reject="
            f"{(c.wrong_accept - c.abstain_false) * c.wrong_reject} must exceed "
            f"abstain_true*wrong_accept={c.abstain_true * c.wrong_accept}"
        ),
    ),
)


def validate_ec(loss: ECLoss) -> list[ECViolation]:
    """Check the three validity inequalities; an empty list means valid.

    Violations are data, not errors, so invalid losses can be explored (the
    impossibility constructions need exactly that).
    """
    violations = []
    groups: list[tuple[int | None, ECConstants]] = [(None, loss.default)]
    groups.extend(sorted(loss.per_hypothesis.items()))
    for mask, constants in groups:
        for name, ok, describe in _CONSTRAINTS:
            if not ok(constants):
                violations.append(ECViolation(name, describe(constants), mask))
    return violations


def require_valid_ec(loss: ECLoss) -> None:
    violations = validate_ec(loss)
    if violations:
        lines = "; ".join(v.detail for v in violations)
        raise InvalidLossError(f"EC loss violates validity constraints: {lines}")


def ec_thresholds(loss: ECLoss, hyp: Hypothesis) -> tuple[Fraction, Fraction]:
    """The (rejection, acceptance) posterior thresholds for one hypothesis.

    A Bayes test under a valid EC loss accepts when the hypothesis' posterior
    mass strictly exceeds the upper threshold, rejects strictly below the
    lower one, and stays undecided in the closed band between.  Validity
    guarantees 0 < lower < upper < 1.
    """
    require_valid_ec(loss)
    return _thresholds_unchecked(loss.constants_for(hyp))


def _thresholds_unchecked(c: ECConstants) -> tuple[Fraction, Fraction]:
    lower = c.abstain_false / ((c.abstain_false - c.abstain_true) + c.wrong_reject)
    upper = (c.wrong_accept - c.abstain_false) / (
        (c.wrong_accept - c.abstain_false) + c.abstain_true
    )
    return lower, upper


# ---------------------------------------------------------------------------
# Plain loss tables and properness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LossTable:
    """An x-independent loss family: (hypothesis, decision, point) -> value."""

    k: int
    fn: Callable[[Hypothesis, Verdict, int], Fraction]

    def entry(self, hyp: Hypothesis, decision: Verdict, theta: int) -> Fraction:
        return self.fn(hyp, decision, theta)

    # Uniform family interface used by the Bayes oracle; x is ignored here.
    def value(self, hyp: Hypothesis, decision: Verdict, theta: int, x: int) -> Fraction:
        return self.fn(hyp, decision, theta)

    @classmethod
    def from_entries(
        cls, k: int, entries: Mapping[tuple[int, Verdict, int], Fraction]
    ) -> "LossTable":
        table = dict(entries)

        def fn(hyp: Hypothesis, decision: Verdict, theta: int) -> Fraction:
            return table[(hyp.mask, decision, theta)]

        return cls(k, fn)


def is_proper(loss: LossTable, hyp: Hypothesis) -> bool:
    """Does the loss strictly reward correctness and discourage coin flips?

    Inside the hypothesis the ordering accept < abstain < reject must hold,
    outside it the reverse, and everywhere abstaining must be strictly
    cheaper than a fair coin between accepting and rejecting.
    """
    for theta in range(loss.k):
        a = loss.entry(hyp, Verdict.ACCEPT, theta)
        b = loss.entry(hyp, Verdict.BOUNDARY, theta)
        r = loss.entry(hyp, Verdict.REJECT, theta)
        if theta in hyp:
            if not (a < b < r):
                return False
        else:
            if not (a > b > r):
                return False
        if not b < (a + r) / 2:
            return False
    return True


def induced_region_loss(loss: LossTable, region: Hypothesis, theta: int) -> Fraction:
    """Loss a region estimate incurs at a true point, induced by singleton tests.

    Each point included in the region contributes the gap between abstaining
    on and rejecting its singleton hypothesis; the sum prices the region.
    """
    total = Fraction(0)
    for member in region:
        single = Hypothesis.from_members(loss.k, (member,))
        total += loss.entry(single, Verdict.BOUNDARY, theta) - loss.entry(
            single, Verdict.REJECT, theta
        )
    return total


# ---------------------------------------------------------------------------
# Tangent sets and the region-inducing loss table
# ---------------------------------------------------------------------------


def tangent_set(dist: Sequence[Fraction], hyp: Hypothesis) -> Hypothesis:
    """Points strictly more probable than everything in the hypothesis.

    The supremum over the empty hypothesis is -infinity, so every point is
    tangent to it.  A hypothesis containing a mode has no tangent points.
    """
    k = len(dist)
    if hyp.k != k:
        raise ValueError(f"hypothesis ambient size {hyp.k} != len(dist) {k}")
    if hyp.is_empty:
        return Hypothesis.full(k)
    sup = max(dist[i] for i in hyp)
    mask = 0
    for i, p in enumerate(dist):
        if p > sup:
            mask |= 1 << i
    return Hypothesis(mask, k)


@dataclass(frozen=True)
class GFBSTLoss:
    """The three-column tangent-set loss: cells b+c, b, v+c, v, and 0.

    `b` prices a call contradicted by a strong contender, `v` an abstention,
    and `c` the surcharge whenever the true point is a strong contender for
    either side.  Requires 0 < v < b and c > 0.
    """

    b: Fraction
    v: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", frac(self.b))
        object.__setattr__(self, "v", frac(self.v))
        object.__setattr__(self, "c", frac(self.c))
        if not (0 < self.v < self.b):
            raise InvalidLossError(f"need 0 < v < b, got v={self.v}, b={self.b}")
        if self.c <= 0:
            raise InvalidLossError(f"need c > 0, got c={self.c}")

    @property
    def threshold(self) -> Fraction:
        """The posterior-mass cutoff (v+c)/(b+c) the Bayes rule compares against."""
        return (self.v + self.c) / (self.b + self.c)

    def family(self, model) -> "GFBSTLossFamily":
        return GFBSTLossFamily(self, model)


def gfbst_loss_value(
    loss: GFBSTLoss,
    decision: Verdict,
    theta: int,
    hyp: Hypothesis,
    dist: Sequence[Fraction],
) -> Fraction:
    """One cell of the tangent-set loss table under the given posterior."""
    toward_hyp = tangent_set(dist, hyp.complement())  # contenders for the hypothesis
    against_hyp = tangent_set(dist, hyp)  # contenders for its complement
    if theta in against_hyp:
        column = "against"
    elif theta in toward_hyp:
        column = "toward"
    else:
        column = "neutral"
    if decision is Verdict.ACCEPT:
        return {"against": loss.b + loss.c, "neutral": loss.b, "toward": Fraction(0)}[column]
    if decision is Verdict.BOUNDARY:
        return {"against": loss.v + loss.c, "neutral": loss.v, "toward": loss.v + loss.c}[column]
    return {"against": Fraction(0), "neutral": loss.b, "toward": loss.b + loss.c}[column]


class GFBSTLossFamily:
    """The tangent-set loss bound to a model, with tangent sets cached per (x, H)."""

    def __init__(self, loss: GFBSTLoss, model):
        self.loss = loss
        self.model = model
        self._tangent_cache: dict[tuple[int, int], Hypothesis] = {}

    def tangent(self, x: int, hyp: Hypothesis) -> Hypothesis:
        key = (x, hyp.mask)
        cached = self._tangent_cache.get(key)
        if cached is None:
            cached = tangent_set(self.model.posterior(x), hyp)
            self._tangent_cache[key] = cached
        return cached

    def value(self, hyp: Hypothesis, decision: Verdict, theta: int, x: int) -> Fraction:
        against = self.tangent(x, hyp)
        toward = self.tangent(x, hyp.complement())
        loss = self.loss
        if theta in against:
            cells = {
                Verdict.ACCEPT: loss.b + loss.c,
                Verdict.BOUNDARY: loss.v + loss.c,
                Verdict.REJECT: Fraction(0),
            }
        elif theta in toward:
            cells = {
                Verdict.ACCEPT: Fraction(0),
                Verdict.BOUNDARY: loss.v + loss.c,
                Verdict.REJECT: loss.b + loss.c,
            }
        else:
            cells = {
                Verdict.ACCEPT: loss.b,
                Verdict.BOUNDARY: loss.v,
                Verdict.REJECT: loss.b,
            }
        return cells[decision]
