"""Exponential cancellation inequality on frequency tuples.

For frequencies ``eta_1 .. eta_n`` (n >= 2), ``sigma >= 0`` and
``theta in [0, 1]``, the product of exponential weights exceeds the
weight of the summed frequency by at most

    exp(sigma*sum|eta_j|) - exp(sigma*|sum eta_j|)
        <= sum_k (2*sigma*min(|sum_{j!=k} eta_j|, |eta_k|))^theta
           * exp(sigma*sum|eta_j|).

This is the bound that lets one exponential weight be traded for a
fractional power of the smallest participating frequency, which is where
every ``sigma^theta`` factor in the diagnostics layer comes from.

``cancellation_margin`` evaluates right minus left directly;
``cancellation_induction_split`` exposes the two-term decomposition used
to reduce an ``n``-tuple to the ``(n-1)``-tuple plus a pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FrequencyTuple",
    "CancellationSplit",
    "cancellation_margin",
    "cancellation_induction_split",
]

# beyond this the unscaled exponentials overflow; comparisons continue in log space
_EXP_CAP = 700.0


@dataclass(frozen=True)
class FrequencyTuple:
    """Real frequencies with the weight and exponent they are tested at."""

    etas: tuple[float, ...]
    sigma: float
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "etas", tuple(float(e) for e in self.etas))
        if len(self.etas) < 2:
            raise ValueError(f"need at least 2 frequencies, got {len(self.etas)}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")


def _rhs_factor(t: FrequencyTuple) -> float:
    """sum_k (2*sigma*min(|total - eta_k|, |eta_k|))^theta, compensated sums."""
    total = math.fsum(t.etas)
    acc = 0.0
    for eta in t.etas:
        small = min(abs(total - eta), abs(eta))
        acc += (2.0 * t.sigma * small) ** t.theta
    return acc


def cancellation_margin(t: FrequencyTuple) -> float:
    """Right-hand side minus left-hand side of the inequality; >= 0 always.

    Both sides share the factor ``exp(sigma*sum|eta_j|)``; the margin is
    evaluated in the factored form to keep cancellation mild.  When the
    shared exponent exceeds the overflow cap the sign is decided in log
    space and the margin reported as ``+-inf`` (or 0).
    """
    abs_sum = math.fsum(abs(e) for e in t.etas)
    tot = abs(math.fsum(t.etas))
    big = t.sigma * abs_sum            # exponent of the shared weight
    low = t.sigma * tot                # exponent of the cancelled weight, <= big
    rel = _rhs_factor(t) - 1.0 + math.exp(min(low - big, 0.0))
    if big <= _EXP_CAP:
        return math.exp(big) * rel
    if rel > 0.0:
        return math.inf
    return -math.inf if rel < 0.0 else 0.0


@dataclass(frozen=True)
class CancellationSplit:
    """Two-term telescoping of the left-hand side for an n-tuple.

    ``recursive_term`` is the (n-1)-tuple's left-hand side carried by the
    last frequency's weight; ``pairwise_term`` merges the partial sum with
    the last frequency.  ``lhs = recursive_term + pairwise_term`` exactly,
    and each term obeys its own bound.
    """

    lhs: float
    recursive_term: float
    pairwise_term: float
    recursive_bound: float
    pairwise_bound: float


def cancellation_induction_split(t: FrequencyTuple) -> CancellationSplit:
    """Decompose the n-tuple inequality into its induction step (n >= 3)."""
    if len(t.etas) < 3:
        raise ValueError(f"induction split needs n >= 3, got n={len(t.etas)}")
    head, last = t.etas[:-1], t.etas[-1]
    sigma, theta = t.sigma, t.theta

    head_abs = math.fsum(abs(e) for e in head)
    head_tot = math.fsum(head)
    all_abs = head_abs + abs(last)
    all_tot = head_tot + last

    w_last = math.exp(sigma * abs(last))
    lhs = math.exp(sigma * all_abs) - math.exp(sigma * abs(all_tot))
    recursive_term = w_last * (math.exp(sigma * head_abs) - math.exp(sigma * abs(head_tot)))
    pairwise_term = w_last * math.exp(sigma * abs(head_tot)) - math.exp(sigma * abs(all_tot))

    shared = math.exp(sigma * all_abs)
    head_factor = 0.0
    for eta in head:
        small = min(abs(head_tot - eta), abs(eta))
        head_factor += (2.0 * sigma * small) ** theta
    recursive_bound = head_factor * shared
    pairwise_bound = (2.0 * sigma * min(abs(head_tot), abs(last))) ** theta * shared

    return CancellationSplit(
        lhs=lhs,
        recursive_term=recursive_term,
        pairwise_term=pairwise_term,
        recursive_bound=recursive_bound,
        pairwise_bound=pairwise_bound,
    )
