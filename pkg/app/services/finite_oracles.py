import itertools
import logging
import threading
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Literal

import networkx as nx

from app.models.errors import OrdinalError, UnknownOracleError
from app.models.schemas import ColoredGraph, Digraph, OracleResult, RamseyWitness

logger = logging.getLogger(__name__)

# Largest vertex count a search may exhaust unless told otherwise
DEFAULT_MAX_VERTICES = 6

# Isomorphism classes one search level may hold
DEFAULT_MAX_CLASSES = 20000

# Candidate one-vertex extensions one search level may examine
DEFAULT_MAX_EXTENSIONS = 20_000

# Known classical Ramsey numbers R(m, k) with 3 <= m <= k
CLASSICAL_REGISTRY: dict[tuple[int, int], int] = {
    (3, 3): 6,
    (3, 4): 9,
    (3, 5): 14,
    (3, 6): 18,
    (3, 7): 23,
    (3, 8): 28,
    (3, 9): 36,
    (4, 4): 18,
    (4, 5): 25,
}

# Least order forcing a transitive subtournament L_k in every tournament,
# which is R(K*_2, L_k)
TOURNAMENT_REGISTRY: dict[int, int] = {3: 4, 4: 8, 5: 14, 6: 28}

Kind = Literal["ramsey", "digraph-ramsey"]
Masks = tuple[int, ...]


def _find_clique(adjacency: Masks, candidates: int, size: int) -> list[int] | None:
    """Vertices of a clique of `size` inside `candidates`, highest vertex first."""
    if size <= 0:
        return []
    if candidates.bit_count() < size:
        return None
    while candidates:
        vertex = candidates.bit_length() - 1
        candidates &= ~(1 << vertex)
        rest = _find_clique(adjacency, candidates & adjacency[vertex], size - 1)
        if rest is not None:
            return [vertex, *rest]
    return None


def _find_transitive(out: Masks, candidates: int, size: int) -> list[int] | None:
    """Vertices of a transitive tournament of `size`, listed source first."""
    if size <= 0:
        return []
    if candidates.bit_count() < size:
        return None
    remaining = candidates
    while remaining:
        source = remaining.bit_length() - 1
        remaining &= ~(1 << source)
        rest = _find_transitive(out, candidates & out[source], size - 1)
        if rest is not None:
            return [source, *rest]
    return None


def _complement(adjacency: Masks) -> Masks:
    full = (1 << len(adjacency)) - 1
    return tuple(full & ~mask & ~(1 << v) for v, mask in enumerate(adjacency))


def _in_masks(out: Masks) -> Masks:
    return tuple(
        sum(1 << u for u, mask in enumerate(out) if mask >> v & 1) for v in range(len(out))
    )


def _extend_graph(red: Masks, m: int, k: int) -> list[Masks]:
    """One-vertex extensions of a red graph avoiding red K_m and blue K_k."""
    n = len(red)
    full = (1 << n) - 1
    blue = _complement(red)
    extensions = []
    for neighbours in range(1 << n):
        if _find_clique(red, neighbours, m - 1) is not None:
            continue
        if _find_clique(blue, full & ~neighbours, k - 1) is not None:
            continue
        grown = tuple(mask | (1 << n) if neighbours >> u & 1 else mask for u, mask in enumerate(red))
        extensions.append(grown + (neighbours,))
    return extensions


def _extend_digraph(out: Masks, m: int, k: int) -> list[Masks]:
    """One-vertex extensions avoiding an independent m-set and a transitive L_k."""
    n = len(out)
    full = (1 << n) - 1
    underlying = tuple(o | i for o, i in zip(out, _in_masks(out)))
    independent = _complement(underlying)
    extensions = []
    for states in itertools.product(range(4), repeat=n):
        # bit 0: new -> u, bit 1: u -> new
        out_new = sum(1 << u for u, s in enumerate(states) if s & 1)
        in_new = sum(1 << u for u, s in enumerate(states) if s & 2)
        if _find_clique(independent, full & ~(out_new | in_new), m - 1) is not None:
            continue
        grown = tuple(mask | (1 << n) if in_new >> u & 1 else mask for u, mask in enumerate(out))
        grown = grown + (out_new,)
        if _find_transitive(grown, (1 << (n + 1)) - 1, k) is not None:
            continue
        extensions.append(grown)
    return extensions


def _extend_chunk(kind: Kind, m: int, k: int, chunk: list[Masks]) -> list[Masks]:
    extend = _extend_graph if kind == "ramsey" else _extend_digraph
    return [grown for masks in chunk for grown in extend(masks, m, k)]


def _to_networkx(kind: Kind, masks: Masks) -> nx.Graph:
    graph = nx.Graph() if kind == "ramsey" else nx.DiGraph()
    graph.add_nodes_from(range(len(masks)))
    graph.add_edges_from((u, v) for u, mask in enumerate(masks) for v in range(len(masks)) if mask >> v & 1)
    return graph


def _representatives(kind: Kind, candidates: list[Masks]) -> list[Masks]:
    """First member of every isomorphism class, in input order."""
    buckets: dict[str, list[nx.Graph]] = {}
    kept = []
    for masks in candidates:
        graph = _to_networkx(kind, masks)
        bucket = buckets.setdefault(nx.weisfeiler_lehman_graph_hash(graph), [])
        if any(nx.is_isomorphic(graph, other) for other in bucket):
            continue
        bucket.append(graph)
        kept.append(masks)
    return kept


class FiniteOracleService:
    """Registry and exhaustive search for finite Ramsey numbers."""

    def __init__(
        self,
        max_vertices: int = DEFAULT_MAX_VERTICES,
        max_classes: int = DEFAULT_MAX_CLASSES,
        jobs: int = 1,
        max_extensions: int = DEFAULT_MAX_EXTENSIONS,
    ) -> None:
        self.max_vertices = max_vertices
        self.max_classes = max_classes
        self.max_extensions = max_extensions
        self.jobs = jobs
        self._cache: dict[tuple, OracleResult] = {}
        self._failures: dict[tuple, UnknownOracleError] = {}
        self._lock = threading.Lock()

    def finite_ramsey(
        self,
        m: int,
        k: int,
        verify: bool = True,
        max_vertices: int | None = None,
        prune: bool = True,
    ) -> OracleResult:
        """
        Least p such that every red/blue coloring of pairs of p points has a
        red K_m or a blue K_k.

        Raises:
            UnknownOracleError: not registered and not settled within the budget
        """
        if m < 1 or k < 1:
            raise OrdinalError("clique sizes must be positive")
        return self._resolve("ramsey", m, k, self._classical_registry(m, k), verify, max_vertices, prune)

    def digraph_ramsey(
        self,
        m: int,
        k: int,
        verify: bool = True,
        max_vertices: int | None = None,
        prune: bool = True,
    ) -> OracleResult:
        """
        Least p such that every digraph on p vertices has an independent
        m-set or a transitive tournament L_k.

        Pairs joined in both directions count as joined in either direction
        when looking for L_k.

        Raises:
            UnknownOracleError: not registered and not settled within the budget
        """
        if m < 1 or k < 1:
            raise OrdinalError("digraph Ramsey parameters must be positive")
        return self._resolve("digraph-ramsey", m, k, self._digraph_registry(m, k), verify, max_vertices, prune)

    def larson_mitchell_bound(self, n: int) -> int:
        """Upper bound n^2 for R(K*_n, L_3)."""
        if n < 2:
            raise OrdinalError("the Larson-Mitchell bound needs n >= 2")
        return n * n

    @staticmethod
    def _classical_registry(m: int, k: int) -> int | None:
        low, high = sorted((m, k))
        if low == 1:
            return 1
        if low == 2:
            return high
        return CLASSICAL_REGISTRY.get((low, high))

    @staticmethod
    def _digraph_registry(m: int, k: int) -> int | None:
        if m == 1 or k == 1:
            return 1
        if k == 2:
            return m
        if m == 2:
            return TOURNAMENT_REGISTRY.get(k)
        return None

    def _resolve(
        self,
        kind: Kind,
        m: int,
        k: int,
        registered: int | None,
        verify: bool,
        max_vertices: int | None,
        prune: bool,
    ) -> OracleResult:
        cap = max_vertices if max_vertices is not None else self.max_vertices
        key = (kind, m, k, verify, cap, prune)
        with self._lock:
            cached = self._cache.get(key)
            failure = self._failures.get(key)
        if cached is not None:
            return cached
        if failure is not None:
            raise failure

        if registered is not None and (not verify or registered > cap):
            result = OracleResult(quantity=kind, m=m, k=k, value=registered, provenance="registry")
        else:
            try:
                value, witness = self._search(kind, m, k, cap, prune)
            except UnknownOracleError as exc:
                with self._lock:
                    self._failures[key] = exc
                raise
            if registered is not None and registered != value:
                raise OrdinalError(f"search found {value} but the registry holds {registered} for {kind}({m}, {k})")
            result = OracleResult(
                quantity=kind,
                m=m,
                k=k,
                value=value,
                provenance="verified-by-search",
                lower_witness=self._witness_model(kind, witness),
                exhausted_vertices=value,
            )

        with self._lock:
            self._cache[key] = result
        return result

    def _search(self, kind: Kind, m: int, k: int, cap: int, prune: bool) -> tuple[int, Masks]:
        """
        Grow good (di)graphs one vertex at a time until none survive.

        Every good graph on n+1 vertices restricts to a good graph on n
        vertices, so extending one representative per isomorphism class
        reaches every class of the next level.
        """
        level: list[Masks] = [()]
        for n in range(1, cap + 1):
            states = 2 ** (n - 1) if kind == "ramsey" else 4 ** (n - 1)
            if len(level) * states > self.max_extensions:
                raise UnknownOracleError(f"{kind}({m}, {k}) exceeds the search budget at {n} vertices")
            grown = self._extend_level(kind, m, k, level)
            if prune:
                grown = _representatives(kind, grown)
            logger.info("%s(%d, %d): %d graphs on %d vertices", kind, m, k, len(grown), n)
            if not grown:
                return n, level[0]
            if len(grown) > self.max_classes:
                raise UnknownOracleError(f"{kind}({m}, {k}) exceeds the search budget of {self.max_classes} classes")
            level = grown
        raise UnknownOracleError(f"{kind}({m}, {k}) is above the search cap of {cap} vertices")

    def _extend_level(self, kind: Kind, m: int, k: int, level: list[Masks]) -> list[Masks]:
        if self.jobs <= 1 or len(level) < 2 * self.jobs:
            return _extend_chunk(kind, m, k, level)
        size = -(-len(level) // self.jobs)
        chunks = [level[i : i + size] for i in range(0, len(level), size)]
        with ProcessPoolExecutor(max_workers=self.jobs) as executor:
            parts = executor.map(partial(_extend_chunk, kind, m, k), chunks)
            return [masks for part in parts for masks in part]

    @staticmethod
    def _witness_model(kind: Kind, masks: Masks) -> Digraph | ColoredGraph:
        n = len(masks)
        if kind == "ramsey":
            red = frozenset((u, v) for u in range(n) for v in range(u + 1, n) if masks[u] >> v & 1)
            return ColoredGraph(vertex_count=n, red_edges=red)
        edges = frozenset((u, v) for u in range(n) for v in range(n) if masks[u] >> v & 1)
        return Digraph(vertex_count=n, edges=edges)

    @staticmethod
    def _out_masks(digraph: Digraph) -> Masks:
        out = [0] * digraph.vertex_count
        for u, v in digraph.edges:
            out[u] |= 1 << v
        return tuple(out)

    def find_independent_set(self, digraph: Digraph, m: int) -> RamseyWitness | None:
        out = self._out_masks(digraph)
        underlying = tuple(o | i for o, i in zip(out, _in_masks(out)))
        full = (1 << digraph.vertex_count) - 1
        found = _find_clique(_complement(underlying), full, m)
        return None if found is None else RamseyWitness(kind="independentSet", vertices=tuple(found))

    def find_transitive_tournament(self, digraph: Digraph, k: int) -> RamseyWitness | None:
        out = self._out_masks(digraph)
        full = (1 << digraph.vertex_count) - 1
        found = _find_transitive(out, full, k)
        return None if found is None else RamseyWitness(kind="transitiveTournament", vertices=tuple(found))

    def find_monochromatic_clique(self, graph: ColoredGraph, m: int, k: int) -> RamseyWitness | None:
        red = [0] * graph.vertex_count
        for u, v in graph.red_edges:
            red[u] |= 1 << v
            red[v] |= 1 << u
        full = (1 << graph.vertex_count) - 1
        found = _find_clique(tuple(red), full, m)
        if found is not None:
            return RamseyWitness(kind="redClique", vertices=tuple(found))
        found = _find_clique(_complement(tuple(red)), full, k)
        return None if found is None else RamseyWitness(kind="blueClique", vertices=tuple(found))


finite_oracles = FiniteOracleService()
