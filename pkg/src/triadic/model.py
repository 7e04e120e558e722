"""Finite discrete Bayesian models with exact posterior tables.

A model couples a finite parameter space (k points) with a finite sample
space (m observable values).  Everything is a `Fraction`: the posterior
table is derived once by Bayes' rule and is exact, so downstream decision
rules can compare posterior masses against thresholds with genuine equality.

Models are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import (
    DimensionMismatchError,
    ImpossibleObservationError,
    InvalidCountsError,
    NonNormalizedError,
)
from .rationals import frac_matrix, frac_vector

ONE = Fraction(1)


@dataclass(frozen=True)
class ParamSpace:
    """The finite parameter space: k points, optionally labelled for display."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("parameter space must have at least one point")
        if self.labels is not None and len(self.labels) != self.size:
            raise DimensionMismatchError(
                f"{len(self.labels)} labels for {self.size} parameter points"
            )

    def label(self, i: int) -> str:
        if self.labels is not None:
            return self.labels[i]
        return str(i)


def _check_distribution(vec: Sequence[Fraction], what: str) -> None:
    if any(p < 0 for p in vec):
        raise NonNormalizedError(f"{what} has a negative entry")
    total = sum(vec)
    if total != ONE:
        raise NonNormalizedError(f"{what} sums to {total}, expected 1")


@dataclass(frozen=True)
class Model:
    """Joint distribution over (parameter point, observable value), tabulated.

    `prior` has length k, `likelihood` is k rows of length m (row t is the
    sampling distribution given parameter t), and `posterior_columns` holds
    one exact posterior vector per observable x.  Use :func:`make_model` or
    :func:`model_from_posterior` instead of constructing this directly.
    """

    theta: ParamSpace
    x_size: int
    prior: tuple[Fraction, ...]
    likelihood: tuple[tuple[Fraction, ...], ...]
    posterior_columns: tuple[tuple[Fraction, ...], ...]
    x_marginal: tuple[Fraction, ...]
    source_form: str = field(default="prior_likelihood", compare=False)

    @property
    def k(self) -> int:
        return self.theta.size

    def posterior(self, x: int) -> tuple[Fraction, ...]:
        """The exact posterior over parameter points given observation x."""
        if not 0 <= x < self.x_size:
            raise IndexError(f"observation index {x} out of range [0, {self.x_size})")
        return self.posterior_columns[x]

    def posterior_mass(self, x: int, mask: int) -> Fraction:
        """Posterior probability of the hypothesis with the given bitmask."""
        col = self.posterior(x)
        return sum((col[i] for i in range(self.k) if mask >> i & 1), Fraction(0))


def make_model(
    prior,
    likelihood,
    labels: Sequence[str] | None = None,
) -> Model:
    """Build a model from a prior vector and a likelihood matrix, exactly.

    The prior must be a probability vector of length k; the likelihood must
    be k rows, each a probability vector of length m.  Every observable value
    must have positive marginal probability, otherwise conditioning on it is
    meaningless.
    """
    prior = frac_vector(prior)
    likelihood = frac_matrix(likelihood)
    k = len(prior)
    if k == 0:
        raise DimensionMismatchError("prior is empty")
    if len(likelihood) != k:
        raise DimensionMismatchError(
            f"likelihood has {len(likelihood)} rows for {k} parameter points"
        )
    m = len(likelihood[0])
    if m == 0:
        raise DimensionMismatchError("likelihood rows are empty")
    for t, row in enumerate(likelihood):
        if len(row) != m:
            raise DimensionMismatchError(f"likelihood row {t} has length {len(row)}, expected {m}")
    _check_distribution(prior, "prior")
    for t, row in enumerate(likelihood):
        _check_distribution(row, f"likelihood row {t}")

    marginal = []
    columns = []
    for x in range(m):
        joint = [prior[t] * likelihood[t][x] for t in range(k)]
        px = sum(joint)
        if px == 0:
            raise ImpossibleObservationError(f"observation {x} has zero marginal probability")
        marginal.append(px)
        columns.append(tuple(j / px for j in joint))
    space = ParamSpace(k, tuple(labels) if labels is not None else None)
    return Model(
        theta=space,
        x_size=m,
        prior=prior,
        likelihood=likelihood,
        posterior_columns=tuple(columns),
        x_marginal=tuple(marginal),
    )


def model_from_posterior(
    posterior,
    x_marginal,
    labels: Sequence[str] | None = None,
) -> Model:
    """Build a model directly from a posterior table and a marginal on x.

    `posterior` is k rows of length m whose columns are probability vectors
    (entry [t][x] is the posterior mass of parameter t given x).  This is the
    natural input when a construction produces posteriors rather than
    likelihoods.  The prior and likelihood are derived from the implied joint
    so the result satisfies the same invariants as :func:`make_model`.
    """
    posterior = frac_matrix(posterior)
    x_marginal = frac_vector(x_marginal)
    k = len(posterior)
    if k == 0:
        raise DimensionMismatchError("posterior table is empty")
    m = len(posterior[0])
    for t, row in enumerate(posterior):
        if len(row) != m:
            raise DimensionMismatchError(f"posterior row {t} has length {len(row)}, expected {m}")
    if len(x_marginal) != m:
        raise DimensionMismatchError(
            f"x marginal has length {len(x_marginal)}, expected {m}"
        )
    _check_distribution(x_marginal, "x marginal")
    if any(p == 0 for p in x_marginal):
        raise ImpossibleObservationError("x marginal has a zero entry")
    for x in range(m):
        _check_distribution([posterior[t][x] for t in range(k)], f"posterior column {x}")

    prior = tuple(
        sum((x_marginal[x] * posterior[t][x] for x in range(m)), Fraction(0)) for t in range(k)
    )
    likelihood = []
    for t in range(k):
        if prior[t] > 0:
            likelihood.append(tuple(x_marginal[x] * posterior[t][x] / prior[t] for x in range(m)))
        else:
            # Zero-prior points never occur; any sampling row keeps the joint
            # consistent, so reuse the marginal to stay normalized.
            likelihood.append(tuple(x_marginal))
    columns = tuple(tuple(posterior[t][x] for t in range(k)) for x in range(m))
    space = ParamSpace(k, tuple(labels) if labels is not None else None)
    return Model(
        theta=space,
        x_size=m,
        prior=prior,
        likelihood=tuple(likelihood),
        posterior_columns=columns,
        x_marginal=x_marginal,
        source_form="posterior_marginal",
    )


def hypergeometric_model(N: int, n: int) -> Model:
    """Sampling n balls without replacement from an urn of N, half-half prior.

    The unknown is the number of marked balls in the urn (0..N) with a
    Binomial(N, 1/2) prior; the observation is the number of marked balls in
    the sample (0..n), hypergeometric given the urn composition.  The
    posterior then has the closed form computed by
    :func:`hypergeometric_posterior_closed_form`, which tests verify against
    this direct construction.
    """
    if n < 1 or N < 1 or n >= N:
        raise InvalidCountsError(f"need 1 <= n < N, got n={n}, N={N}")
    denom = comb(N, n)
    prior = [Fraction(comb(N, t), 2**N) for t in range(N + 1)]
    likelihood = []
    for t in range(N + 1):
        row = []
        for x in range(n + 1):
            if x > t or n - x > N - t:
                row.append(Fraction(0))
            else:
                row.append(Fraction(comb(t, x) * comb(N - t, n - x), denom))
        likelihood.append(row)
    labels = tuple(str(t) for t in range(N + 1))
    return make_model(prior, likelihood, labels=labels)


def hypergeometric_posterior_closed_form(N: int, n: int, x: int) -> tuple[Fraction, ...]:
    """Closed-form posterior for the urn model: itself a shifted Binomial.

    Given x marked balls in the sample, the remaining N-n unsampled balls
    each carry an independent half-half chance of being marked, so the
    posterior over the urn total is Binomial(N-n, 1/2) shifted by x:
    mass C(N-n, i-x) / 2^(N-n) on i in {x, ..., x + N - n}.
    """
    if n < 1 or N < 1 or n >= N:
        raise InvalidCountsError(f"need 1 <= n < N, got n={n}, N={N}")
    if not 0 <= x <= n:
        raise IndexError(f"observation {x} out of range [0, {n}]")
    spare = N - n
    return tuple(
        Fraction(comb(spare, i - x), 2**spare) if x <= i <= x + spare else Fraction(0)
        for i in range(N + 1)
    )
