"""Complete and budgeted randomized incomplete U-statistic estimators.

Two random designs are supported: Bernoulli inclusion of index tuples with
success probability budget/|I| (with either the realized-count or the
fixed-budget normalization) and i.i.d. uniform tuples drawn with
replacement.  Estimates are plain coordinate averages; the summation order
is fixed by the realization, so results do not depend on thread counts.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import combinat
from .combinat import IndexSpace
from .errors import BudgetError, DomainError, EmptyDesignError
from .kernels import Kernel

__all__ = [
    "BERNOULLI",
    "BERNOULLI_DET",
    "REPLACEMENT",
    "SamplingScheme",
    "SamplingRealization",
    "IncompleteUStat",
    "complete_ustat",
    "sample_design",
    "incomplete_ustat",
]

BERNOULLI = "bernoulli"
BERNOULLI_DET = "bernoulli-det"
REPLACEMENT = "replacement"
_VARIANTS = (BERNOULLI, BERNOULLI_DET, REPLACEMENT)

COMPLETE_ENUMERATION_GUARD = 10**7
_COMPLETE_CHUNK = 4096


@dataclass(frozen=True)
class SamplingScheme:
    """A sampling variant plus its computational budget N."""

    variant: str
    budget: int

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise DomainError(
                f"unknown sampling variant {self.variant!r}; "
                f"choose from {_VARIANTS}")
        if int(self.budget) < 1:
            raise DomainError("budget must be a positive integer")
        object.__setattr__(self, "budget", int(self.budget))

    @property
    def bernoulli(self) -> bool:
        return self.variant in (BERNOULLI, BERNOULLI_DET)

    def inclusion_probability(self, space: IndexSpace) -> float:
        return self.budget / space.cardinality

    def validate_for(self, space: IndexSpace):
        if self.bernoulli:
            if self.budget > space.cardinality:
                raise DomainError(
                    f"budget {self.budget} exceeds the tuple count "
                    f"{space.cardinality}")
            if self.inclusion_probability(space) > 0.5:
                warnings.warn(
                    "inclusion probability exceeds 1/2; the estimator is "
                    "well-defined but outside the regime the error bounds "
                    "were calibrated for", stacklevel=3)


@dataclass
class SamplingRealization:
    """The realized random design: chosen tuples plus normalization count."""

    tuples: np.ndarray
    n_hat: int
    scheme: SamplingScheme
    space: IndexSpace
    seed_record: dict | None = None

    @property
    def divisor(self) -> int:
        """Normalization constant implied by the scheme variant."""
        if self.scheme.variant == BERNOULLI:
            return self.n_hat
        return self.scheme.budget


@dataclass
class IncompleteUStat:
    """An incomplete U-statistic estimate with its realized design."""

    theta_hat: np.ndarray
    realization: SamplingRealization
    kernel: Kernel
    n: int
    kernel_evals: np.ndarray | None = None

    @property
    def divisor(self) -> int:
        return self.realization.divisor


def complete_ustat(data, kernel: Kernel,
                   guard: int = COMPLETE_ENUMERATION_GUARD) -> np.ndarray:
    """Exact average of the kernel over every increasing r-tuple.

    Lexicographic enumeration; intended as the small-sample oracle, so it
    refuses to run past `guard` tuples.
    """
    data = np.asarray(data, dtype=np.float64)
    n = data.shape[0]
    r = kernel.order
    if n < r:
        raise DomainError(f"need n >= r, got n={n}, r={r}")
    card = combinat.count(n, r)
    if card > guard:
        raise BudgetError(
            f"complete enumeration of {card} tuples exceeds guard {guard}")
    d = kernel.output_dim(data.shape[1])
    total = np.zeros(d, dtype=np.float64)
    buf = []
    for tup in itertools.combinations(range(n), r):
        buf.append(tup)
        if len(buf) == _COMPLETE_CHUNK:
            total += kernel.batch(data, np.asarray(buf, dtype=np.int64)).sum(axis=0)
            buf.clear()
    if buf:
        total += kernel.batch(data, np.asarray(buf, dtype=np.int64)).sum(axis=0)
    return total / card


def sample_design(space: IndexSpace, scheme: SamplingScheme,
                  rng: np.random.Generator,
                  seed_record: dict | None = None) -> SamplingRealization:
    """Realize the random design for the given scheme.

    Bernoulli variants draw the realized count from Bin(|I|, budget/|I|)
    and then that many distinct tuples uniformly (stored in ascending rank
    order; the set is the random object).  Sampling with replacement draws
    `budget` i.i.d. uniform tuples.
    """
    scheme.validate_for(space)
    if scheme.bernoulli:
        n_hat = combinat.draw_binomial(
            space.cardinality, scheme.inclusion_probability(space), rng)
        if n_hat == 0:
            raise EmptyDesignError(
                "Bernoulli design realized zero tuples; retry with a new "
                "substream or a larger budget")
        tuples = combinat.sample_without_replacement(space, n_hat, rng)
    else:
        n_hat = scheme.budget
        if space.cardinality <= 2**63 - 1:
            ranks = rng.integers(0, int(space.cardinality), size=n_hat)
        else:
            ranks = [combinat.randint_below(rng, space.cardinality)
                     for _ in range(n_hat)]
        tuples = np.empty((n_hat, space.r), dtype=np.int64)
        for i, rk in enumerate(ranks):
            tuples[i] = combinat.unrank(space, int(rk))
    return SamplingRealization(tuples=tuples, n_hat=int(n_hat),
                               scheme=scheme, space=space,
                               seed_record=seed_record)


def incomplete_ustat(data, kernel: Kernel, realization: SamplingRealization,
                     keep_evals: bool = False) -> IncompleteUStat:
    """Average the kernel over the realized tuples.

    The divisor is the realized count for Bernoulli sampling and the fixed
    budget otherwise.  Set `keep_evals` to retain the (m, d) evaluation
    matrix for bootstrap reuse.
    """
    data = np.asarray(data, dtype=np.float64)
    n = data.shape[0]
    if realization.space.n != n:
        raise DomainError(
            f"realization built for n={realization.space.n}, data has n={n}")
    if realization.space.r != kernel.order:
        raise DomainError(
            f"realization order {realization.space.r} does not match "
            f"kernel order {kernel.order}")
    m = realization.tuples.shape[0]
    if m == 0 and realization.scheme.variant == BERNOULLI:
        raise EmptyDesignError(
            "empty design has no random-normalization estimate")
    evals = kernel.batch(data, realization.tuples)
    theta = evals.sum(axis=0) / realization.divisor
    return IncompleteUStat(theta_hat=theta, realization=realization,
                           kernel=kernel, n=n,
                           kernel_evals=evals if keep_evals else None)
