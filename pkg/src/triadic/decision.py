"""Simultaneous three-way tests and the rules that build them.

A simultaneous test assigns one verdict to every (observation, hypothesis)
pair, with hypotheses ranging over the whole power set.  Five constructions
are provided:

* ``bayes_test_direct`` — the defining rule: minimize exact posterior
  expected loss per pair (the oracle everything else is checked against);
* ``bayes_test_ec`` — the closed-form threshold rule for error-wise constant
  losses;
* ``region_test`` — accept when the region is inside the hypothesis, reject
  when disjoint from it;
* ``gfbst`` — the region test whose regions are highest-density sets at
  given levels;
* ``gfbst_bayes`` — the closed-form rule for the tangent-set loss, which is
  provably a highest-density region test in disguise.

Tests are immutable; for small parameter spaces the verdict table is
materialized, beyond that verdicts are computed on demand from the rule.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .errors import EmptyRegionError, ImproperLossError, TooLargeError
from .hypotheses import Hypothesis, RegionEstimator, hpd
from .losses import (
    ECLoss,
    GFBSTLoss,
    LossTable,
    _thresholds_unchecked,
    ec_thresholds,
    is_proper,
    require_valid_ec,
)
from .model import Model
from .rationals import frac
from .verdict import TIE_ORDER, Verdict

#: Verdict tables are materialized eagerly up to this many parameter points;
#: past it the power set is too large and verdicts are computed on demand.
MATERIALIZE_MAX_K = 12

_CODE = {Verdict.ACCEPT: 0, Verdict.BOUNDARY: 1, Verdict.REJECT: 2}
_VERDICT = {code: v for v, code in _CODE.items()}


class SimultaneousTest:
    """A total verdict map over observations x the power set of the parameter space."""

    def __init__(
        self,
        k: int,
        x_size: int,
        rule: Callable[[int, Hypothesis], Verdict],
        provenance: str,
        materialize: bool | None = None,
    ):
        self.k = k
        self.x_size = x_size
        self.provenance = provenance
        self._rule = rule
        if materialize is None:
            materialize = k <= MATERIALIZE_MAX_K
        self._table: list[bytes] | None = None
        if materialize:
            self._table = [
                bytes(_CODE[rule(x, Hypothesis(mask, k))] for mask in range(1 << k))
                for x in range(x_size)
            ]

    @classmethod
    def from_verdict_table(
        cls, k: int, x_size: int, table: Sequence[Sequence[Verdict]]
    ) -> "SimultaneousTest":
        """Wrap an explicit table (one row per x, one verdict per subset mask)."""
        if len(table) != x_size or any(len(row) != (1 << k) for row in table):
            raise ValueError(f"verdict table must be {x_size} rows of {1 << k} verdicts")
        rows = [bytes(_CODE[v] for v in row) for row in table]
        test = cls.__new__(cls)
        test.k = k
        test.x_size = x_size
        test.provenance = "external"
        test._table = rows
        test._rule = lambda x, hyp: _VERDICT[rows[x][hyp.mask]]
        return test

    def verdict(self, x: int, hyp: Hypothesis) -> Verdict:
        if not 0 <= x < self.x_size:
            raise IndexError(f"observation index {x} out of range [0, {self.x_size})")
        if hyp.k != self.k:
            raise ValueError(f"hypothesis ambient size {hyp.k} != test size {self.k}")
        if self._table is not None:
            return _VERDICT[self._table[x][hyp.mask]]
        return self._rule(x, hyp)

    def verdict_row(self, x: int) -> tuple[Verdict, ...]:
        """All verdicts at one observation, indexed by subset mask."""
        self._guard_enumeration()
        if self._table is not None:
            return tuple(_VERDICT[code] for code in self._table[x])
        return tuple(self._rule(x, Hypothesis(mask, self.k)) for mask in range(1 << self.k))

    def items(self) -> Iterator[tuple[int, Hypothesis, Verdict]]:
        self._guard_enumeration()
        for x in range(self.x_size):
            row = self.verdict_row(x)
            for mask, v in enumerate(row):
                yield x, Hypothesis(mask, self.k), v

    def equivalent(self, other: "SimultaneousTest") -> bool:
        """Same verdict on every (x, hypothesis) pair."""
        if (self.k, self.x_size) != (other.k, other.x_size):
            return False
        self._guard_enumeration()
        return all(
            self.verdict_row(x) == other.verdict_row(x) for x in range(self.x_size)
        )

    def first_difference(
        self, other: "SimultaneousTest"
    ) -> tuple[int, Hypothesis, Verdict, Verdict] | None:
        self._guard_enumeration()
        for x in range(self.x_size):
            mine, theirs = self.verdict_row(x), other.verdict_row(x)
            for mask in range(1 << self.k):
                if mine[mask] != theirs[mask]:
                    return x, Hypothesis(mask, self.k), mine[mask], theirs[mask]
        return None

    def _guard_enumeration(self) -> None:
        if self._table is None and self.k > MATERIALIZE_MAX_K:
            raise TooLargeError(
                f"k={self.k} is too large to enumerate the power set; query verdicts individually"
            )


# ---------------------------------------------------------------------------
# Expected-loss machinery
# ---------------------------------------------------------------------------


def expected_loss(
    model: Model, loss_family, x: int, hyp: Hypothesis, decision: Verdict
) -> Fraction:
    """Exact posterior expected loss of one decision about one hypothesis."""
    col = model.posterior(x)
    total = Fraction(0)
    for theta in range(model.k):
        p = col[theta]
        if p:
            total += p * loss_family.value(hyp, decision, theta, x)
    return total


def minimizing_verdict(model: Model, loss_family, x: int, hyp: Hypothesis) -> Verdict:
    losses = {d: expected_loss(model, loss_family, x, hyp, d) for d in Verdict}
    best = min(losses.values())
    for d in TIE_ORDER:
        if losses[d] == best:
            return d
    raise AssertionError("unreachable")


def bayes_test_direct(model: Model, loss_family) -> SimultaneousTest:
    """The expected-loss-minimizing test, hypothesis by hypothesis.

    `loss_family` needs a ``value(hypothesis, decision, theta, x)`` method
    (a :class:`~triadic.losses.LossTable` or a data-dependent family).  Exact
    ties between expected losses are broken undecided-first, then accept: the
    order under which the threshold rules are reproduced verbatim.
    """
    return SimultaneousTest(
        model.k,
        model.x_size,
        lambda x, hyp: minimizing_verdict(model, loss_family, x, hyp),
        provenance="direct",
    )


# ---------------------------------------------------------------------------
# Threshold rule for EC losses
# ---------------------------------------------------------------------------


def bayes_test_ec(model: Model, loss: ECLoss) -> SimultaneousTest:
    """Closed-form Bayes rule for a valid EC loss: compare posterior mass
    to per-hypothesis thresholds.

    Accept strictly above the upper threshold, reject strictly below the
    lower one; both equalities land on undecided, matching the closed
    boundary band.
    """
    require_valid_ec(loss)

    def rule(x: int, hyp: Hypothesis) -> Verdict:
        lower, upper = _thresholds_unchecked(loss.constants_for(hyp))
        mass = model.posterior_mass(x, hyp.mask)
        if mass > upper:
            return Verdict.ACCEPT
        if mass < lower:
            return Verdict.REJECT
        return Verdict.BOUNDARY

    return SimultaneousTest(model.k, model.x_size, rule, provenance="threshold")


# ---------------------------------------------------------------------------
# Region-based tests
# ---------------------------------------------------------------------------


def region_test(estimator: RegionEstimator) -> SimultaneousTest:
    """Accept hypotheses containing the region, reject those disjoint from it.

    Empty regions are refused: with one, both clauses would fire for every
    hypothesis and the verdict would be ill-defined.
    """
    empties = estimator.empty_indices()
    if empties:
        raise EmptyRegionError(f"region estimator is empty at x={list(empties)}")
    k = estimator.k

    def rule(x: int, hyp: Hypothesis) -> Verdict:
        region = estimator.region(x)
        if region.issubset(hyp):
            return Verdict.ACCEPT
        if region.isdisjoint(hyp):
            return Verdict.REJECT
        return Verdict.BOUNDARY

    return SimultaneousTest(k, estimator.x_size, rule, provenance="region")


def gfbst(model: Model, levels) -> SimultaneousTest:
    """The region test whose region at x is the highest-density set at level(x).

    `levels` is one positive rational per observation (or a single rational,
    broadcast).  A level above the maximum posterior mass would produce an
    empty region and is refused.
    """
    if isinstance(levels, (str, int, Fraction)):
        per_x = [frac(levels)] * model.x_size
    else:
        per_x = [frac(lv) for lv in levels]
        if len(per_x) != model.x_size:
            raise ValueError(f"{len(per_x)} levels for {model.x_size} observations")
    regions = RegionEstimator(
        tuple(hpd(model.posterior(x), per_x[x]) for x in range(model.x_size))
    )
    return region_test(regions)


# ---------------------------------------------------------------------------
# The tangent-set loss rule
# ---------------------------------------------------------------------------


def gfbst_bayes(model: Model, loss: GFBSTLoss) -> SimultaneousTest:
    """Closed-form Bayes rule for the tangent-set loss.

    Accept when the mass lying outside the contenders-for-the-hypothesis set
    is below (v+c)/(b+c); reject when the mass outside the
    contenders-against set is.  At most one side can fire because one of the
    two tangent sets is always empty.  Coincides with the direct oracle under
    the tie-breaking convention, verdict for verdict.
    """
    family = loss.family(model)
    threshold = loss.threshold

    def rule(x: int, hyp: Hypothesis) -> Verdict:
        against = family.tangent(x, hyp)  # contenders beating the hypothesis
        toward = family.tangent(x, hyp.complement())  # contenders beating its complement
        col = model.posterior(x)
        mass_toward = sum((col[i] for i in toward), Fraction(0))
        mass_against = sum((col[i] for i in against), Fraction(0))
        if 1 - mass_toward < threshold:
            return Verdict.ACCEPT
        if 1 - mass_against < threshold:
            return Verdict.REJECT
        return Verdict.BOUNDARY

    return SimultaneousTest(model.k, model.x_size, rule, provenance="threshold")


# ---------------------------------------------------------------------------
# Bayes region estimator induced by a proper loss
# ---------------------------------------------------------------------------


def bayes_region(model: Model, loss: LossTable) -> RegionEstimator:
    """The region estimator a proper loss induces through its singleton tests.

    A point enters the region at x when abstaining on its singleton is no
    worse (in expected loss) than rejecting it.  For valid EC losses this is
    exactly the highest-density set at the rejection threshold.
    """
    singles = [Hypothesis.from_members(model.k, (t,)) for t in range(model.k)]
    for single in singles:
        if not is_proper(loss, single):
            raise ImproperLossError(f"loss is not proper on singleton {single}")
    regions = []
    for x in range(model.x_size):
        mask = 0
        for t, single in enumerate(singles):
            undecided = expected_loss(model, loss, x, single, Verdict.BOUNDARY)
            rejected = expected_loss(model, loss, x, single, Verdict.REJECT)
            if undecided <= rejected:
                mask |= 1 << t
        regions.append(Hypothesis(mask, model.k))
    return RegionEstimator(tuple(regions))
