"""Wilcoxon signed-rank test with an exact small-sample distribution.

Zero differences are dropped. Absolute differences are midranked (ties get
the average of the ranks they span). For n <= EXACT_CUTOFF pairs the null
distribution of the positive-rank sum is computed exactly by dynamic
programming over doubled midranks (doubling makes them integers, so ties
are handled exactly too); beyond that a normal approximation with the usual
tie correction is used.

Verdicts compare a reference sample x against a competitor y at the
significance threshold:

  H1a  x significantly larger (one-sided p_greater < threshold)
  H1b  x significantly smaller (one-sided p_less < threshold)
  H0   neither
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

EXACT_CUTOFF = 25


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # min(W+, W-)
    w_plus: float
    n: int  # pairs remaining after dropping zero differences
    p_two_sided: float
    p_greater: float  # H1a direction: x > y
    p_less: float
    method: str  # "exact" | "approx" | "degenerate"
    verdict: str  # "H0" | "H1a" | "H1b"


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=np.float64)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _exact_tail_probabilities(
    doubled_ranks: np.ndarray, doubled_w_plus: int
) -> tuple[float, float]:
    """(P[W+ >= obs], P[W+ <= obs]) under random sign assignment.

    counts[s] = number of sign patterns whose positive doubled-rank sum is s.
    """
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.float64)
    counts[0] = 1.0
    for rank in doubled_ranks:
        rank = int(rank)
        shifted = np.zeros_like(counts)
        shifted[rank:] = counts[: total + 1 - rank]
        counts += shifted
    denom = counts.sum()  # == 2**n
    p_greater = counts[doubled_w_plus:].sum() / denom
    p_less = counts[: doubled_w_plus + 1].sum() / denom
    return float(p_greater), float(p_less)


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def wilcoxon_signed_rank(
    x: Sequence[float], y: Sequence[float], threshold: float = 0.05
) -> WilcoxonResult:
    """Paired two-sample signed-rank test of x against y."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"paired samples differ in length: {x.shape} vs {y.shape}")
    diffs = x - y
    diffs = diffs[diffs != 0.0]
    n = len(diffs)
    if n == 0:
        return WilcoxonResult(
            statistic=0.0,
            w_plus=0.0,
            n=0,
            p_two_sided=1.0,
            p_greater=1.0,
            p_less=1.0,
            method="degenerate",
            verdict="H0",
        )

    ranks = _midranks(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())
    w_minus = float(ranks[diffs < 0].sum())
    statistic = min(w_plus, w_minus)

    if n <= EXACT_CUTOFF:
        doubled = np.rint(2.0 * ranks).astype(np.int64)
        p_greater, p_less = _exact_tail_probabilities(
            doubled, int(round(2.0 * w_plus))
        )
        method = "exact"
    else:
        mean = n * (n + 1) / 4.0
        _, tie_counts = np.unique(np.abs(diffs), return_counts=True)
        correction = float(((tie_counts**3 - tie_counts) / 48.0).sum())
        sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 24.0 - correction)
        z = (w_plus - mean) / sigma
        p_greater = _normal_sf(z)
        p_less = _normal_sf(-z)
        method = "approx"

    p_two_sided = min(1.0, 2.0 * min(p_greater, p_less))
    if p_greater < threshold:
        verdict = "H1a"
    elif p_less < threshold:
        verdict = "H1b"
    else:
        verdict = "H0"
    return WilcoxonResult(
        statistic=statistic,
        w_plus=w_plus,
        n=n,
        p_two_sided=p_two_sided,
        p_greater=p_greater,
        p_less=p_less,
        method=method,
        verdict=verdict,
    )
