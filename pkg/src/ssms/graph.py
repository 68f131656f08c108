"""Lazy, locally finite graphs.

Four realizations share one query interface: finite edge lists, the integer
lattice Z^d, the (Delta)-regular infinite tree, and line graphs of any of
these.  Vertices are plain ints for finite graphs and tuples of ints
otherwise; line-graph vertices are ordered endpoint pairs.  All queries are
pure and return canonically ordered (sorted) results, so repeated calls with
equal arguments give identical output.
"""

import math
import re
from abc import ABC, abstractmethod

from .errors import (
    ConfigError,
    InvalidVertexError,
    ModelParameterError,
    UnsupportedRealizationError,
)


class LocalGraph(ABC):
    """Immutable graph exposing neighborhoods on demand.

    Subclasses implement ``neighbors``, membership, ``growth_bound`` and the
    textual vertex encoding; breadth-first sphere and ball queries are shared.
    """

    kind = "abstract"

    @abstractmethod
    def neighbors(self, v):
        """Sorted tuple of the neighbors of ``v``."""

    @abstractmethod
    def __contains__(self, v):
        ...

    @abstractmethod
    def growth_bound(self, ell):
        """Upper bound on ``|sphere(v, ell)|`` valid for every vertex ``v``."""

    @abstractmethod
    def degree_bound(self):
        """Maximum vertex degree."""

    def is_finite(self):
        return False

    def vertices(self):
        """All vertices in canonical order (finite realizations only)."""
        raise UnsupportedRealizationError(
            f"{self.kind} graph has no finite vertex enumeration"
        )

    def check_vertex(self, v):
        if v not in self:
            raise InvalidVertexError(f"not a vertex of this {self.kind} graph: {v!r}")

    def _layers(self, v, ell):
        """Breadth-first layers [L_0, ..., L_ell], each sorted; L_0 = [v]."""
        self.check_vertex(v)
        if ell < 0:
            raise ModelParameterError(f"radius must be nonnegative, got {ell}")
        seen = {v}
        layers = [[v]]
        frontier = [v]
        for _ in range(ell):
            nxt = []
            for u in frontier:
                for w in self.neighbors(u):
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            nxt.sort()
            layers.append(nxt)
            frontier = nxt
        return layers

    def sphere(self, v, ell):
        """Vertices at graph distance exactly ``ell`` from ``v``, sorted."""
        return tuple(self._layers(v, ell)[ell])

    def ball_interior(self, v, ell):
        """Vertices at distance < ``ell`` from ``v``, sorted canonically."""
        if ell < 1:
            raise ModelParameterError(f"radius must be positive, got {ell}")
        layers = self._layers(v, ell - 1)
        return tuple(sorted(u for layer in layers for u in layer))

    def ball(self, v, ell):
        """Closed ball of radius ``ell``: interior plus sphere, sorted."""
        layers = self._layers(v, ell)
        return tuple(sorted(u for layer in layers for u in layer))

    # Hook for marginal caches: a hashable key identifying (v, context) up to
    # any exact symmetry of the realization.  Default: no symmetry.
    def context_key(self, v, items):
        return (v, items)

    def format_vertex(self, v):
        return _format_vertex(v)

    def parse_vertex(self, text):
        v = self._parse_vertex(text)
        self.check_vertex(v)
        return v

    @abstractmethod
    def _parse_vertex(self, text):
        ...

    def _exhaustive_growth(self, ell):
        # Finite realizations only: scan every vertex's sphere at this radius.
        if not hasattr(self, "_growth_cache"):
            self._growth_cache = {}
        if ell not in self._growth_cache:
            self._growth_cache[ell] = max(
                len(self.sphere(v, ell)) for v in self.vertices()
            )
        return self._growth_cache[ell]


def _format_vertex(v):
    if isinstance(v, tuple):
        return "(" + ",".join(_format_vertex(c) for c in v) + ")"
    return str(v)


def _split_top_level(text):
    """Split on commas not nested inside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ConfigError(f"unbalanced parentheses in vertex text: {text!r}")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise ConfigError(f"unbalanced parentheses in vertex text: {text!r}")
    parts.append(text[start:])
    return parts


def _parse_tuple_vertex(text):
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ConfigError(f"expected a parenthesized vertex, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return ()
    out = []
    for part in _split_top_level(inner):
        part = part.strip()
        if part.startswith("("):
            out.append(_parse_tuple_vertex(part))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise ConfigError(f"bad vertex component {part!r} in {text!r}") from None
    return tuple(out)


class FiniteGraph(LocalGraph):
    """Simple undirected graph on vertices 1..n given by an edge list."""

    kind = "finite"

    def __init__(self, n, edges):
        if n < 1:
            raise ModelParameterError(f"vertex count must be positive, got {n}")
        adj = {v: set() for v in range(1, n + 1)}
        seen = set()
        for u, w in edges:
            if not (1 <= u <= n and 1 <= w <= n):
                raise InvalidVertexError(f"edge endpoint out of range: ({u},{w})")
            if u == w:
                raise ConfigError(f"self-loop at vertex {u} rejected")
            key = (min(u, w), max(u, w))
            if key in seen:
                raise ConfigError(f"parallel edge ({u},{w}) rejected")
            seen.add(key)
            adj[u].add(w)
            adj[w].add(u)
        self._n = n
        self._adj = {v: tuple(sorted(nb)) for v, nb in adj.items()}
        self._edges = tuple(sorted(seen))

    @property
    def n(self):
        return self._n

    @property
    def edges(self):
        return self._edges

    def neighbors(self, v):
        self.check_vertex(v)
        return self._adj[v]

    def __contains__(self, v):
        return isinstance(v, int) and not isinstance(v, bool) and 1 <= v <= self._n

    def is_finite(self):
        return True

    def vertices(self):
        return tuple(range(1, self._n + 1))

    def growth_bound(self, ell):
        if ell < 0:
            raise ModelParameterError(f"radius must be nonnegative, got {ell}")
        if ell == 0:
            return 1
        return self._exhaustive_growth(ell)

    def degree_bound(self):
        return max((len(nb) for nb in self._adj.values()), default=0)

    def _parse_vertex(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise ConfigError(f"bad finite-graph vertex {text!r}") from None


class Lattice(LocalGraph):
    """The integer lattice Z^d with nearest-neighbor adjacency."""

    kind = "lattice"

    def __init__(self, dim):
        if dim < 1:
            raise ModelParameterError(f"lattice dimension must be >= 1, got {dim}")
        self._dim = dim

    @property
    def dim(self):
        return self._dim

    def neighbors(self, v):
        self.check_vertex(v)
        out = []
        for i in range(self._dim):
            for step in (-1, 1):
                out.append(v[:i] + (v[i] + step,) + v[i + 1 :])
        return tuple(sorted(out))

    def __contains__(self, v):
        return (
            isinstance(v, tuple)
            and len(v) == self._dim
            and all(isinstance(c, int) and not isinstance(c, bool) for c in v)
        )

    def growth_bound(self, ell):
        # Exact count of lattice points at L1 distance ell from the origin.
        if ell < 0:
            raise ModelParameterError(f"radius must be nonnegative, got {ell}")
        if ell == 0:
            return 1
        d = self._dim
        return sum(
            2**k * math.comb(d, k) * math.comb(ell - 1, k - 1)
            for k in range(1, min(d, ell) + 1)
        )

    def degree_bound(self):
        return 2 * self._dim

    def context_key(self, v, items):
        # The lattice is vertex transitive; translating the whole context so
        # that v sits at the origin preserves every marginal exactly.
        shifted = tuple(
            (tuple(a - b for a, b in zip(w, v)), s) for w, s in items
        )
        return (None, shifted)

    def box(self, origin, shape):
        """Vertices of an axis-aligned box, canonically ordered."""
        if len(origin) != self._dim or len(shape) != self._dim:
            raise ConfigError(
                f"box spec has wrong dimension for Z^{self._dim}"
            )
        if any(s < 1 for s in shape):
            raise ConfigError(f"box side lengths must be positive, got {shape}")
        ranges = [range(o, o + s) for o, s in zip(origin, shape)]
        out = [()]
        for r in ranges:
            out = [prefix + (c,) for prefix in out for c in r]
        return tuple(sorted(out))

    def _parse_vertex(self, text):
        return _parse_tuple_vertex(text)


class RegularTree(LocalGraph):
    """The infinite Delta-regular tree.

    Vertices are root-to-vertex child-index paths: the root is the empty
    tuple, its children are (0,), ..., (Delta-1,), and every other vertex has
    Delta-1 children indexed 0..Delta-2.
    """

    kind = "tree"

    def __init__(self, degree):
        if degree < 2:
            raise ModelParameterError(f"tree degree must be >= 2, got {degree}")
        self._degree = degree

    @property
    def degree(self):
        return self._degree

    def neighbors(self, v):
        self.check_vertex(v)
        d = self._degree
        if v == ():
            return tuple((j,) for j in range(d))
        children = [v + (j,) for j in range(d - 1)]
        return tuple(sorted([v[:-1]] + children))

    def __contains__(self, v):
        if not isinstance(v, tuple):
            return False
        d = self._degree
        for i, c in enumerate(v):
            if not isinstance(c, int) or isinstance(c, bool):
                return False
            limit = d if i == 0 else d - 1
            if not 0 <= c < limit:
                return False
        return True

    def growth_bound(self, ell):
        if ell < 0:
            raise ModelParameterError(f"radius must be nonnegative, got {ell}")
        if ell == 0:
            return 1
        return self._degree * (self._degree - 1) ** (ell - 1)

    def degree_bound(self):
        return self._degree

    def _parse_vertex(self, text):
        return _parse_tuple_vertex(text)


class LineGraph(LocalGraph):
    """Line graph of a base realization.

    Vertices are edges of the base graph encoded as ordered pairs (u, w) with
    u < w canonically; two edge-vertices are adjacent when they share an
    endpoint.
    """

    kind = "line"

    def __init__(self, base):
        if not isinstance(base, LocalGraph):
            raise UnsupportedRealizationError("line graph needs a LocalGraph base")
        if base.degree_bound() is None:
            raise UnsupportedRealizationError(
                "line graph base must have a finite degree bound"
            )
        self._base = base

    @property
    def base(self):
        return self._base

    def neighbors(self, v):
        self.check_vertex(v)
        u, w = v
        out = set()
        for x in self._base.neighbors(u):
            e = (u, x) if u < x else (x, u)
            out.add(e)
        for x in self._base.neighbors(w):
            e = (w, x) if w < x else (x, w)
            out.add(e)
        out.discard(v)
        return tuple(sorted(out))

    def __contains__(self, v):
        if not (isinstance(v, tuple) and len(v) == 2):
            return False
        u, w = v
        if u not in self._base or w not in self._base:
            return False
        if not u < w:
            return False
        return w in self._base.neighbors(u)

    def is_finite(self):
        return self._base.is_finite()

    def vertices(self):
        base = self._base
        out = set()
        for u in base.vertices():
            for w in base.neighbors(u):
                out.add((u, w) if u < w else (w, u))
        return tuple(sorted(out))

    def growth_bound(self, ell):
        if ell < 0:
            raise ModelParameterError(f"radius must be nonnegative, got {ell}")
        if ell == 0:
            return 1
        if self.is_finite():
            return self._exhaustive_growth(ell)
        # Every edge at line-graph distance ell from e has an endpoint at base
        # distance exactly ell-1 from one of e's endpoints, and each such
        # vertex meets at most Delta edges.
        return 2 * self._base.degree_bound() * self._base.growth_bound(ell - 1)

    def degree_bound(self):
        return 2 * (self._base.degree_bound() - 1)

    def context_key(self, v, items):
        if isinstance(self._base, Lattice):
            origin = v[0]
            def shift(edge):
                return tuple(
                    tuple(a - b for a, b in zip(endpoint, origin))
                    for endpoint in edge
                )
            return (None, tuple((shift(w), s) for w, s in items))
        return (v, items)

    def _parse_vertex(self, text):
        pair = _parse_tuple_vertex(text)
        if len(pair) != 2:
            raise ConfigError(f"line-graph vertex must be an endpoint pair: {text!r}")
        if isinstance(self._base, FiniteGraph):
            return pair
        return pair


def line_graph(base):
    """Line graph of ``base``; vertices are canonical endpoint pairs."""
    return LineGraph(base)


def load_edge_list(path):
    """Read a finite graph from an edge-list file.

    Format: first line ``n m``, then m lines ``u v`` with 1-based vertex ids.
    Self-loops and parallel edges are rejected.
    """
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ConfigError(f"edge-list file {path} is missing the 'n m' header")
    try:
        n, m = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ConfigError(f"bad 'n m' header in {path}") from None
    body = tokens[2:]
    if len(body) != 2 * m:
        raise ConfigError(
            f"edge-list file {path} declares {m} edges but lists {len(body) // 2}"
        )
    try:
        edges = [(int(body[2 * i]), int(body[2 * i + 1])) for i in range(m)]
    except ValueError:
        raise ConfigError(f"non-integer edge endpoint in {path}") from None
    return FiniteGraph(n, edges)


def path_graph(n):
    """Path on vertices 1..n."""
    return FiniteGraph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n):
    """Cycle on vertices 1..n (n >= 3)."""
    if n < 3:
        raise ModelParameterError(f"cycle needs at least 3 vertices, got {n}")
    return FiniteGraph(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def grid_graph(rows, cols):
    """rows x cols grid; vertex (r, c) is numbered r * cols + c + 1, row-major."""
    def vid(r, c):
        return r * cols + c + 1

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return FiniteGraph(rows * cols, edges)


def complete_graph(n):
    """Complete graph on vertices 1..n."""
    return FiniteGraph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star_graph(leaves):
    """Star with center 1 and the given number of leaves."""
    return FiniteGraph(leaves + 1, [(1, j) for j in range(2, leaves + 2)])


def petersen_graph():
    """The Petersen graph (3-regular, 10 vertices)."""
    outer = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6, 8), (8, 10), (10, 7), (7, 9), (9, 6)]
    return FiniteGraph(10, outer + spokes + inner)


_GRAPH_SPEC_RE = re.compile(r"^z(\d+)$")


def graph_from_spec(spec):
    """Build a graph from a CLI-style spec string.

    Accepted forms: ``z2`` (any ``z<d>``), ``tree:<degree>``, ``file:<path>``,
    and ``line:<spec>`` wrapping any of the former.
    """
    spec = spec.strip()
    if spec.startswith("line:"):
        return LineGraph(graph_from_spec(spec[len("line:"):]))
    m = _GRAPH_SPEC_RE.match(spec)
    if m:
        return Lattice(int(m.group(1)))
    if spec.startswith("tree:"):
        try:
            degree = int(spec[len("tree:"):])
        except ValueError:
            raise ConfigError(f"bad tree degree in graph spec {spec!r}") from None
        return RegularTree(degree)
    if spec.startswith("file:"):
        return load_edge_list(spec[len("file:"):])
    raise ConfigError(f"unrecognized graph spec {spec!r}")
