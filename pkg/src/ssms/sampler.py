"""Recursive perfect sampler driven by worst-case ball marginals.

One spin is drawn per call from a single uniform variate y.  The unit
interval is split into spin intervals I_1..I_q of lengths p_v^1..p_v^q (the
worst-case marginals at radius ell) and a trailing zone of indecision
I_0 = [1 - p_v^0, 1].  If y lands in a spin interval the spin is assigned
outright; otherwise the sphere vertices are sampled recursively in canonical
order, the now-fully-conditioned marginal mu is computed, and I_0 is
subdivided into J_1..J_q with lengths mu_i - p_v^i to resolve v.  Sphere
spins sampled along the way are discarded: a call's only lasting effect is
the spin of its own vertex.

The recursion is run on an explicit work stack, so deep excursions do not
hit the interpreter's call-depth limit.  A guard aborts any top-level call
whose recursion exceeds the call budget, since the recursion is not
guaranteed to terminate when the zone of indecision is too wide.
"""

import json
import os
import time
from bisect import bisect_right
from dataclasses import dataclass

from .errors import (
    BudgetExhaustedError,
    ConfigError,
    FiniteOnlyError,
    InternalError,
    InvalidProbabilitiesError,
    ModelParameterError,
)
from .marginals import NEG_TOL, conditional_marginal, min_marginals
from .spinsys import PartialConfiguration, as_spin_dict, _check_spins

DEFAULT_BUDGET = 10**7
BUDGET_ENV_VAR = "SSMS_BUDGET"


def budget_from_env(default=DEFAULT_BUDGET):
    """Call budget per top-level vertex, overridable via SSMS_BUDGET."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{BUDGET_ENV_VAR} must be positive, got {value}")
    return value


class RandomSource:
    """splitmix64 stream mapped to [0, 1) doubles.

    The state advances by the golden-gamma increment and is finalized by the
    standard two-round xor-multiply mix; the top 53 bits of each output word
    are divided by 2^53, giving the usual uniform double grid.  The counter
    records how many doubles have been consumed.
    """

    _MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.seed = int(seed) & self._MASK
        self._state = self.seed
        self.counter = 0

    def next_uint64(self):
        self._state = (self._state + 0x9E3779B97F4A7C15) & self._MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self._MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self._MASK
        return z ^ (z >> 31)

    def next_double(self):
        self.counter += 1
        return (self.next_uint64() >> 11) * (2.0**-53)


class IntervalPartition:
    """Left-packed half-open spin intervals plus the closed indecision zone.

    I_i = [c_{i-1}, c_i) with c_i the running sum of p^1..p^i, and
    I_0 = [c_q, 1].  ``locate`` maps a variate to its spin, or to 0 for the
    zone of indecision.
    """

    __slots__ = ("p", "cum")

    def __init__(self, p):
        p = [float(x) for x in p]
        if any(x < -1e-12 for x in p) or any(x > 1.0 + 1e-12 for x in p):
            raise InvalidProbabilitiesError(f"interval masses outside [0,1]: {p}")
        total = sum(p)
        if abs(total - 1.0) > NEG_TOL:
            raise InvalidProbabilitiesError(f"interval masses sum to {total}, not 1")
        p = [max(x, 0.0) for x in p]
        cum = []
        acc = 0.0
        for x in p[1:]:
            acc += x
            cum.append(acc)
        self.p = tuple(p)
        self.cum = cum

    @property
    def q(self):
        return len(self.p) - 1

    @property
    def zone_start(self):
        return self.cum[-1]

    def lengths(self):
        """Interval lengths in index order 0..q (0 = indecision zone)."""
        return self.p

    def locate(self, y):
        """Spin index owning y, or 0 when y falls in the indecision zone."""
        if not 0.0 <= y < 1.0:
            raise InvalidProbabilitiesError(f"variate must lie in [0,1), got {y}")
        idx = bisect_right(self.cum, y)
        if idx >= self.q:
            return 0
        return idx + 1

    def split_zone(self, mu):
        """Subinterval edges J_1..J_q of the indecision zone given the resolved
        marginal ``mu``; lengths are mu_i - p^i, clamped at roundoff scale."""
        rho = [float(m) - pi for m, pi in zip(mu, self.p[1:])]
        bad = min(rho)
        if bad < -NEG_TOL:
            raise InternalError(
                f"resolved marginal fell below the worst-case floor by {-bad}"
            )
        edges = []
        acc = self.zone_start
        for r in rho:
            acc += max(r, 0.0)
            edges.append(acc)
        return edges

    def locate_zone(self, y, mu):
        """Spin owning y within the indecision zone (closed right endpoint)."""
        edges = self.split_zone(mu)
        idx = bisect_right(edges, y)
        if idx >= self.q:
            # Roundoff can leave y marginally past the last edge; the zone's
            # right endpoint is closed, so absorb into the last live spin.
            for j in range(self.q - 1, -1, -1):
                if float(mu[j]) - self.p[j + 1] > 0.0:
                    return j + 1
            raise InternalError("indecision zone has no positive subinterval")
        return idx + 1


def build_intervals(p):
    """IntervalPartition from a minimum-marginals vector (index 0 = zone mass)."""
    return IntervalPartition(p)


@dataclass
class RecursionStats:
    """Counters for one top-level call or an aggregated window run."""

    total_calls: int = 0
    max_depth: int = 0
    indecision_events: int = 0
    trace: list = None

    def merge(self, other):
        self.total_calls += other.total_calls
        self.max_depth = max(self.max_depth, other.max_depth)
        self.indecision_events += other.indecision_events


@dataclass
class RunReport:
    """Window-run summary: sampled spins plus recursion statistics."""

    seed: int
    model: str
    radius: int
    window: list
    spins: PartialConfiguration
    total_calls: int
    max_depth: int
    indecision_events: int
    wall_time_ms: float

    def to_json(self, deterministic=False):
        """Serialize; ``deterministic`` nulls the wall time so identical
        configurations yield byte-identical documents."""
        doc = {
            "seed": self.seed,
            "model": self.model,
            "radius": self.radius,
            "window": self.window,
            "total_calls": self.total_calls,
            "max_depth": self.max_depth,
            "indecision_events": self.indecision_events,
            "wall_time_ms": None if deterministic else self.wall_time_ms,
        }
        return json.dumps(doc, indent=2) + "\n"


class MarginalCache:
    """Pure memoization of ball marginals for one (system, graph, radius).

    Keys are the target vertex together with the context restricted to its
    radius-ell ball, routed through the graph's ``context_key`` hook so that
    exact symmetries (lattice translations) share entries.  Cached values are
    deterministic functions of their keys, so lookups never change sampling
    behavior, only speed.
    """

    def __init__(self, system, graph, ell):
        self.system = system
        self.graph = graph
        self.ell = ell
        self._balls = {}
        self._min = {}
        self._cond = {}

    def ball_parts(self, v):
        parts = self._balls.get(v)
        if parts is None:
            sphere = self.graph.sphere(v, self.ell)
            interior = self.graph.ball_interior(v, self.ell)
            ball = tuple(sorted(interior + sphere))
            parts = (sphere, interior, ball)
            self._balls[v] = parts
        return parts

    def _key(self, v, lam, ball):
        items = tuple((w, lam[w]) for w in ball if w in lam)
        return self.graph.context_key(v, items)

    def min_intervals(self, v, lam):
        """(p vector, IntervalPartition) for v under the context ``lam``."""
        sphere, interior, ball = self.ball_parts(v)
        key = self._key(v, lam, ball)
        hit = self._min.get(key)
        if hit is None:
            restricted = {w: lam[w] for w in ball if w in lam}
            p = min_marginals(self.system, self.graph, restricted, v, self.ell)
            hit = (p, IntervalPartition(p))
            p.flags.writeable = False
            self._min[key] = hit
        return hit

    def sphere_conditional(self, v, lam):
        """Marginal of v once its whole sphere (and maybe more) is assigned."""
        sphere, interior, ball = self.ball_parts(v)
        key = self._key(v, lam, ball)
        hit = self._cond.get(key)
        if hit is None:
            restricted = {w: lam[w] for w in ball if w in lam}
            support = [w for w in ball if w not in restricted] + list(restricted)
            mu = conditional_marginal(self.system, self.graph, v, restricted, support)
            mu.flags.writeable = False
            hit = mu
            self._cond[key] = hit
        return hit

    def whole_graph_marginal(self, v, lam):
        """Exact marginal of v on a finite graph (oracle for bounded runs)."""
        support = list(self.graph.vertices())
        key = ("oracle", v, tuple(sorted(lam.items())))
        hit = self._cond.get(key)
        if hit is None:
            mu = conditional_marginal(self.system, self.graph, v, dict(lam), support)
            mu.flags.writeable = False
            hit = mu
            self._cond[key] = hit
        return hit


class _Frame:
    __slots__ = ("v", "depth", "h", "y", "part", "sphere_free", "child_idx", "added")

    def __init__(self, v, depth, h):
        self.v = v
        self.depth = depth
        self.h = h
        self.y = None
        self.part = None
        self.sphere_free = None
        self.child_idx = 0
        self.added = None


def _locate_cumulative(mu, y):
    """Sample a spin from an exact marginal with a single variate."""
    edges = []
    acc = 0.0
    for m in mu:
        acc += float(m)
        edges.append(acc)
    idx = bisect_right(edges, y)
    if idx >= len(edges):
        for j in range(len(edges) - 1, -1, -1):
            if float(mu[j]) > 0.0:
                return j + 1
        raise InternalError("cannot sample from an all-zero marginal")
    return idx + 1


def _run(cache, lam, v, rng, stats, budget, h=None):
    """Iterative engine for one top-level call; ``lam`` is restored on exit.

    ``h`` is the remaining depth allowance of the bounded variant (None for
    the unbounded sampler): a call entered with h == 0 consults the exact
    whole-graph oracle instead of recursing.
    """
    stack = [_Frame(v, 1, h)]
    result = None
    while stack:
        f = stack[-1]
        if f.y is None:
            stats.total_calls += 1
            if stats.total_calls > budget:
                raise BudgetExhaustedError(
                    f"call budget {budget} exhausted at vertex "
                    f"{cache.graph.format_vertex(f.v)}"
                )
            if f.depth > stats.max_depth:
                stats.max_depth = f.depth
            if f.h == 0:
                mu = cache.whole_graph_marginal(f.v, lam)
                y = rng.next_double()
                spin = _locate_cumulative(mu, y)
                if stats.trace is not None:
                    stats.trace.append((f.v, f.depth, False))
                stack.pop()
                result = spin
                if stack:
                    parent = stack[-1]
                    lam[f.v] = spin
                    parent.added.append(f.v)
                    parent.child_idx += 1
                continue
            p, part = cache.min_intervals(f.v, lam)
            f.y = rng.next_double()
            f.part = part
            spin = part.locate(f.y)
            if stats.trace is not None:
                stats.trace.append((f.v, f.depth, spin == 0))
            if spin != 0:
                stack.pop()
                result = spin
                if stack:
                    parent = stack[-1]
                    lam[f.v] = spin
                    parent.added.append(f.v)
                    parent.child_idx += 1
                continue
            stats.indecision_events += 1
            sphere = cache.ball_parts(f.v)[0]
            f.sphere_free = [w for w in sphere if w not in lam]
            f.added = []
        if f.child_idx < len(f.sphere_free):
            w = f.sphere_free[f.child_idx]
            child_h = None if f.h is None else f.h - 1
            stack.append(_Frame(w, f.depth + 1, child_h))
            continue
        # Sphere fully assigned: subdivide the indecision zone and resolve v,
        # then discard the intermediate sphere spins.
        mu = cache.sphere_conditional(f.v, lam)
        spin = f.part.locate_zone(f.y, mu)
        for w in f.added:
            del lam[w]
        stack.pop()
        result = spin
        if stack:
            parent = stack[-1]
            lam[f.v] = spin
            parent.added.append(f.v)
            parent.child_idx += 1
    return result


def _prepare_context(system, graph, fixed):
    spins = as_spin_dict(fixed)
    _check_spins(system, spins)
    for w in spins:
        graph.check_vertex(w)
    return spins


class WindowSampler:
    """Reusable sampling context: one marginal cache, many seeded runs."""

    def __init__(self, system, graph, ell, budget=None, use_cache=True):
        if ell < 1:
            raise ModelParameterError(f"radius must be >= 1, got {ell}")
        self.system = system
        self.graph = graph
        self.ell = ell
        self.budget = budget_from_env() if budget is None else int(budget)
        if self.budget < 1:
            raise ModelParameterError(f"budget must be positive, got {budget}")
        self.use_cache = use_cache
        self._cache = MarginalCache(system, graph, ell)

    def _fresh_cache(self):
        if self.use_cache:
            return self._cache
        return MarginalCache(self.system, self.graph, self.ell)

    def sample_spin(self, v, seed_or_rng, fixed=None, trace=False):
        """One spin for ``v`` under ``fixed``; returns (spin, stats)."""
        lam = _prepare_context(self.system, self.graph, fixed)
        self.graph.check_vertex(v)
        if v in lam:
            raise ModelParameterError(
                f"vertex {self.graph.format_vertex(v)} is already assigned"
            )
        rng = seed_or_rng if hasattr(seed_or_rng, "next_double") else RandomSource(seed_or_rng)
        stats = RecursionStats(trace=[] if trace else None)
        spin = _run(self._fresh_cache(), lam, v, rng, stats, self.budget)
        return spin, stats

    def sample_spin_bounded(self, v, h, seed_or_rng, fixed=None, trace=False):
        """Depth-bounded variant; exact-oracle fallback needs a finite graph."""
        if not self.graph.is_finite():
            raise FiniteOnlyError("bounded sampling requires a finite graph")
        if h < 0:
            raise ModelParameterError(f"depth bound must be >= 0, got {h}")
        lam = _prepare_context(self.system, self.graph, fixed)
        self.graph.check_vertex(v)
        if v in lam:
            raise ModelParameterError(
                f"vertex {self.graph.format_vertex(v)} is already assigned"
            )
        rng = seed_or_rng if hasattr(seed_or_rng, "next_double") else RandomSource(seed_or_rng)
        stats = RecursionStats(trace=[] if trace else None)
        spin = _run(self._fresh_cache(), lam, v, rng, stats, self.budget, h=h)
        return spin, stats

    def sample_window(self, window, seed_or_rng, fixed=None):
        """Sample every window vertex in order; returns (spins, RunReport).

        Window spins persist as conditioning for later vertices; each
        top-level vertex gets a fresh call budget.
        """
        window = list(window)
        if len(set(window)) != len(window):
            raise ConfigError("window vertices must be distinct")
        lam = _prepare_context(self.system, self.graph, fixed)
        for v in window:
            self.graph.check_vertex(v)
            if v in lam:
                raise ConfigError(
                    f"window vertex {self.graph.format_vertex(v)} is already fixed"
                )
        rng = seed_or_rng if hasattr(seed_or_rng, "next_double") else RandomSource(seed_or_rng)
        cache = self._fresh_cache()
        total = RecursionStats()
        t0 = time.perf_counter()
        out = {}
        for v in window:
            stats = RecursionStats()
            spin = _run(cache, lam, v, rng, stats, self.budget)
            lam[v] = spin
            out[v] = spin
            total.merge(stats)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        spins = PartialConfiguration(out)
        report = RunReport(
            seed=getattr(rng, "seed", -1),
            model=self.system.label,
            radius=self.ell,
            window=[self.graph.format_vertex(v) for v in window],
            spins=spins,
            total_calls=total.total_calls,
            max_depth=total.max_depth,
            indecision_events=total.indecision_events,
            wall_time_ms=wall_ms,
        )
        return spins, report


def ssms(system, graph, fixed, v, ell, seed_or_rng, budget=None, trace=False):
    """Draw the spin of ``v`` exactly from its conditional distribution.

    Returns ``(config, stats)`` where config extends ``fixed`` by the single
    assignment at ``v``; any sphere spins sampled along the way are discarded.
    """
    sampler = WindowSampler(system, graph, ell, budget=budget)
    spin, stats = sampler.sample_spin(v, seed_or_rng, fixed, trace=trace)
    base = fixed if isinstance(fixed, PartialConfiguration) else PartialConfiguration(
        as_spin_dict(fixed)
    )
    return base.with_spin(v, spin), stats


def bounded_ssms(system, graph, fixed, v, ell, h, seed_or_rng, budget=None, trace=False):
    """Depth-bounded variant of ``ssms`` (finite graphs only).

    Identical to the unbounded sampler while the recursion stays above the
    depth allowance; a call entered with no allowance left samples from the
    exact whole-graph conditional instead of recursing.
    """
    sampler = WindowSampler(system, graph, ell, budget=budget)
    spin, stats = sampler.sample_spin_bounded(v, h, seed_or_rng, fixed, trace=trace)
    base = fixed if isinstance(fixed, PartialConfiguration) else PartialConfiguration(
        as_spin_dict(fixed)
    )
    return base.with_spin(v, spin), stats


def sample_window(system, graph, window, ell, seed_or_rng, budget=None, fixed=None):
    """One-shot window sample; see WindowSampler.sample_window."""
    sampler = WindowSampler(system, graph, ell, budget=budget)
    return sampler.sample_window(window, seed_or_rng, fixed)
