"""Run-time bounds and statistical verification helpers.

The recursion started by one sampling call is stochastically dominated by a
branching process in which a call either stops or spawns g(ell) children
with probability q * f(ell): whenever alpha = q * f(ell) * g(ell) < 1, the
expected total number of calls is at most 1 / (1 - alpha).  The helpers here
evaluate that bound, compare it against observed run statistics, check the
zone-of-indecision inequality p_v^0 <= q * f(ell), and score empirical
distributions against exact ones.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import (
    DegenerateSupportError,
    DimensionMismatchError,
    InsufficientSamplesError,
    MissingRateError,
    ModelParameterError,
)
from .marginals import NEG_TOL, min_marginals, mixing_rate_estimate


@dataclass(frozen=True)
class BranchingBound:
    """Dominating-process summary at one radius."""

    ell: int
    q: int
    f: float
    g: int
    alpha: float
    contractive: bool
    expected_calls: float  # inf when not contractive

    def offspring_distribution(self):
        """(P[no children], children count, P[that many children])."""
        spawn = min(self.q * self.f, 1.0)
        return (1.0 - spawn, self.g, spawn)


def branching_bound(system, graph, ell, rate):
    """Evaluate alpha = q * f(ell) * g(ell) and the call-count bound."""
    if ell not in rate:
        raise MissingRateError(f"mixing-rate table has no entry for radius {ell}")
    f = rate[ell]
    g = graph.growth_bound(ell)
    alpha = system.q * f * g
    contractive = alpha < 1.0
    expected = 1.0 / (1.0 - alpha) if contractive else math.inf
    return BranchingBound(
        ell=ell,
        q=system.q,
        f=f,
        g=g,
        alpha=alpha,
        contractive=contractive,
        expected_calls=expected,
    )


def hardcore_radius1_bound(lam, delta):
    """Radius-1 hard-core call-count bound (1+lam)/(1-(delta-1)*lam).

    Each call recurses with probability lam/(1+lam) and then spawns at most
    delta children; the bound is finite only for lam < 1/(delta-1).
    """
    if not lam > 0:
        raise ModelParameterError(f"activity must be positive, got {lam}")
    if delta < 2:
        raise ModelParameterError(f"degree must be >= 2, got {delta}")
    if lam >= 1.0 / (delta - 1):
        return math.inf
    return (1.0 + lam) / (1.0 - (delta - 1) * lam)


@dataclass(frozen=True)
class TreeBoundCheck:
    passed: bool
    runs: int
    mean_calls: float
    std_error: float
    limit: float
    margin: float  # limit + 3*SE minus the observed mean


def verify_tree_bound(runs, bound, min_runs=1000):
    """Compare observed mean call counts against a branching bound.

    ``runs`` is a sequence of objects with a ``total_calls`` attribute (run
    reports or raw stats).  Passes when mean <= limit + 3 standard errors.
    """
    counts = np.array([r.total_calls for r in runs], dtype=float)
    if counts.size < min_runs:
        raise InsufficientSamplesError(
            f"need at least {min_runs} runs, got {counts.size}"
        )
    limit = bound.expected_calls if hasattr(bound, "expected_calls") else float(bound)
    mean = float(counts.mean())
    se = float(counts.std(ddof=1) / math.sqrt(counts.size))
    margin = limit + 3.0 * se - mean
    return TreeBoundCheck(
        passed=bool(margin >= 0.0),
        runs=int(counts.size),
        mean_calls=mean,
        std_error=se,
        limit=limit,
        margin=margin,
    )


@dataclass(frozen=True)
class Lemma1Check:
    passed: bool
    p_zero: float
    rate: float
    bound: float  # q * rate


def lemma1_check(system, graph, fixed, v, ell, tol=NEG_TOL):
    """Zone-of-indecision inequality p_v^0 <= q * f(ell) at one probe context.

    The rate is the exact pairwise-worst TV distance over feasible sphere
    boundaries of the same context, so the check is self-contained.
    """
    p = min_marginals(system, graph, fixed, v, ell)
    f_hat = mixing_rate_estimate(system, graph, v, ell, fixed)
    bound = system.q * f_hat
    return Lemma1Check(
        passed=bool(p[0] <= bound + tol),
        p_zero=float(p[0]),
        rate=f_hat,
        bound=bound,
    )


@dataclass(frozen=True)
class GofStats:
    n: int
    observed: tuple     # per-bucket counts after pooling; sums to n
    expected: tuple     # matching expected counts; sums to n
    chi_square: float
    dof: int
    p_value: float
    tv_distance: float
    buckets: int
    pooled_outcomes: int


def goodness_of_fit(counts, exact, min_expected=5.0):
    """Pearson chi-square of observed counts against exact probabilities.

    Outcomes with expected count below ``min_expected`` are pooled into one
    bucket (the usual validity requirement); degrees of freedom are the
    number of buckets minus one.  The TV distance is computed on the
    unpooled distributions.
    """
    counts = np.asarray(counts, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if counts.shape != exact.shape or counts.ndim != 1:
        raise DimensionMismatchError(
            f"counts and probabilities must align, got {counts.shape} vs {exact.shape}"
        )
    if np.any(exact < 0) or abs(float(exact.sum()) - 1.0) > 1e-9:
        raise ModelParameterError("exact probabilities must be nonnegative and sum to 1")
    if np.count_nonzero(exact) < 2:
        raise DegenerateSupportError("need at least two outcomes with positive probability")
    n = int(round(float(counts.sum())))
    if n < 1:
        raise InsufficientSamplesError("no observations")
    tv = 0.5 * float(np.abs(counts / n - exact).sum())

    expected = exact * n
    big = expected >= min_expected
    obs_parts = list(counts[big])
    exp_parts = list(expected[big])
    pooled = int(np.count_nonzero(~big))
    if pooled:
        obs_parts.append(float(counts[~big].sum()))
        exp_parts.append(float(expected[~big].sum()))
    obs_parts = np.array(obs_parts)
    exp_parts = np.array(exp_parts)
    observed_out = tuple(float(x) for x in obs_parts)
    expected_out = tuple(float(x) for x in exp_parts)
    live = exp_parts > 0
    if float(obs_parts[~live].sum()) > 0:
        # An outcome of exact probability zero was observed: no finite
        # statistic describes that, and the fit certainly fails.
        stat, dof, p_value = math.inf, max(int(live.sum()) - 1, 1), 0.0
        return GofStats(
            n=n,
            observed=observed_out,
            expected=expected_out,
            chi_square=stat,
            dof=dof,
            p_value=p_value,
            tv_distance=tv,
            buckets=int(live.sum()),
            pooled_outcomes=pooled,
        )
    obs_parts, exp_parts = obs_parts[live], exp_parts[live]
    if obs_parts.size < 2:
        raise DegenerateSupportError(
            "pooling left fewer than two buckets; not enough samples for a test"
        )
    stat = float(((obs_parts - exp_parts) ** 2 / exp_parts).sum())
    dof = obs_parts.size - 1
    p_value = float(chi2.sf(stat, dof))
    return GofStats(
        n=n,
        observed=observed_out,
        expected=expected_out,
        chi_square=stat,
        dof=dof,
        p_value=p_value,
        tv_distance=tv,
        buckets=int(obs_parts.size),
        pooled_outcomes=pooled,
    )
