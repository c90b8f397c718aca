"""Random graph samplers, extremal constructions and density matching."""

from __future__ import annotations

import logging
import math
from collections import Counter
from collections.abc import Sequence
from typing import Any, Optional

import numpy as np
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from app.config import settings
from app.errors import (
    DensityTooLowError,
    DensityUnreachableError,
    GenerationFailedError,
    InvalidParameterError,
    require_at_least,
    require_open_probability,
    require_probability,
    require_seed,
)
from app.graph import Graph
from app.types import ModelKind, ModelSpec, validate_model_parameters

logger = logging.getLogger(__name__)

EdgeArray = np.ndarray[Any, np.dtype[np.int64]]


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(require_seed(seed))


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Each of the C(n, 2) possible edges is present independently with probability p."""
    n = require_at_least(n, 0, "n")
    p = require_probability(p, "p")
    rows, cols = np.triu_indices(n, k=1)
    present = _rng(seed).random(rows.size) < p
    return Graph.from_edge_list(n, np.column_stack((rows[present], cols[present])))


def watts_strogatz(n: int, k: int, beta: float, seed: int) -> Graph:
    """
    Ring lattice with k // 2 neighbors per side, then random rewiring.

    Lattice edges (u, u + j) are visited for j = 1..k//2 and u = 0..n-1. With
    probability beta an edge is replaced by (u, w), w drawn uniformly until it
    is neither u nor a current neighbor of u. When u is already adjacent to
    every node the rewiring of that edge is skipped, so the edge count stays
    n * (k // 2).
    """
    validate_model_parameters(ModelSpec(ModelKind.WATTS_STROGATZ, n, k=k, beta=beta))
    rng = _rng(seed)
    half = k // 2
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for j in range(1, half + 1):
        for u in range(n):
            v = (u + j) % n
            adjacency[u].add(v)
            adjacency[v].add(u)

    if beta > 0:
        for j in range(1, half + 1):
            for u in range(n):
                v = (u + j) % n
                if rng.random() >= beta:
                    continue
                if len(adjacency[u]) >= n - 1:
                    continue
                w = int(rng.integers(n))
                while w == u or w in adjacency[u]:
                    w = int(rng.integers(n))
                adjacency[u].discard(v)
                adjacency[v].discard(u)
                adjacency[u].add(w)
                adjacency[w].add(u)

    edges = [(u, v) for u in range(n) for v in adjacency[u] if u < v]
    return Graph.from_edge_list(n, edges)


def barabasi_albert(n: int, m: int, seed: int) -> Graph:
    """
    Preferential attachment grown from a star on m + 1 nodes centred at node 0.

    Each new node attaches to m distinct existing nodes; targets are drawn
    one at a time with probability proportional to current degree, redrawing
    any node already chosen for this step. The result has (n - m - 1) m + m edges.
    """
    validate_model_parameters(ModelSpec(ModelKind.BARABASI_ALBERT, n, m=m))
    rng = _rng(seed)

    edges: list[tuple[int, int]] = [(0, leaf) for leaf in range(1, m + 1)]
    # every node appears once per unit of degree
    repeated: list[int] = [0] * m + list(range(1, m + 1))

    for source in range(m + 1, n):
        targets: list[int] = []
        chosen: set[int] = set()
        while len(targets) < m:
            target = repeated[int(rng.integers(len(repeated)))]
            if target not in chosen:
                chosen.add(target)
                targets.append(target)
        edges.extend((target, source) for target in targets)
        repeated.extend(targets)
        repeated.extend([source] * m)

    return Graph.from_edge_list(n, edges)


class PairingRejected(Exception):
    """A stub pairing contained a loop or a repeated edge."""


def random_regular(n: int, d: int, seed: int) -> Graph:
    """
    d-regular simple graph from the pairing model.

    Stubs (d per node) are matched by a uniform shuffle. A matching with a loop
    or a multi-edge is discarded and redrawn, up to ``rr_max_restarts`` draws
    in total. If none is simple, the last matching is repaired by
    degree-preserving edge swaps.

    Raises:
        ParityError: n * d is odd
        GenerationFailedError: the swap repair ran out of attempts
    """
    validate_model_parameters(ModelSpec(ModelKind.RANDOM_REGULAR, n, d=d))
    if d == 0:
        return Graph.empty(n)

    rng = _rng(seed)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    restarts = settings.rr_max_restarts

    pairs: EdgeArray = _draw_pairing(stubs, rng)
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(restarts),
            retry=retry_if_exception_type(PairingRejected),
            reraise=True,
        ):
            with attempt:
                if attempt.retry_state.attempt_number > 1:
                    pairs = _draw_pairing(stubs, rng)
                _require_simple(pairs, n)
        return Graph.from_edge_list(n, pairs)
    except (PairingRejected, RetryError):
        logger.debug("rr n=%d d=%d: no simple pairing in %d draws, repairing", n, d, restarts)

    return Graph.from_edge_list(n, _repair_pairing(pairs, n, rng))


def _draw_pairing(stubs: EdgeArray, rng: np.random.Generator) -> EdgeArray:
    shuffled = rng.permutation(stubs).reshape(-1, 2)
    return np.sort(shuffled, axis=1)


def _require_simple(pairs: EdgeArray, n: int) -> None:
    if np.any(pairs[:, 0] == pairs[:, 1]):
        raise PairingRejected("loop")
    keys = pairs[:, 0] * n + pairs[:, 1]
    if np.unique(keys).size != keys.size:
        raise PairingRejected("multi-edge")


def _repair_pairing(pairs: EdgeArray, n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """
    Remove loops and multi-edges with swaps (a, b), (c, e) -> (a, c), (b, e).

    A swap is accepted only when both new pairs are non-loops absent from the
    current multiset, so every accepted swap lowers the defect count.
    """
    edges: list[tuple[int, int]] = [(int(u), int(v)) for u, v in pairs.tolist()]
    multiplicity: Counter[tuple[int, int]] = Counter(edges)
    seen: set[tuple[int, int]] = set()
    defective: list[int] = []
    for position, edge in enumerate(edges):
        if edge[0] == edge[1] or edge in seen:
            defective.append(position)
        seen.add(edge)

    def is_defect(edge: tuple[int, int]) -> bool:
        return edge[0] == edge[1] or multiplicity[edge] > 1

    attempts = settings.rr_max_swap_factor * len(edges)
    while defective:
        i = defective.pop()
        if not is_defect(edges[i]):
            continue
        while True:
            if attempts <= 0:
                raise GenerationFailedError(
                    f"random regular repair failed for n={n}, d={2 * len(edges) // n}"
                )
            attempts -= 1
            j = int(rng.integers(len(edges)))
            if j == i:
                continue
            a, b = edges[i]
            c, e = edges[j]
            if rng.random() < 0.5:
                c, e = e, c
            first = (min(a, c), max(a, c))
            second = (min(b, e), max(b, e))
            if a == c or b == e or first == second:
                continue
            if multiplicity[first] or multiplicity[second]:
                continue
            for old in (edges[i], edges[j]):
                multiplicity[old] -= 1
            multiplicity[first] += 1
            multiplicity[second] += 1
            edges[i], edges[j] = first, second
            break

    return edges


def two_phase_clique_null(n: int, p: float, seed: int) -> Graph:
    """
    Nodes join an isolated set with probability p, otherwise a growing clique.

    The result is an independent set plus a clique on the remaining nodes.
    """
    n = require_at_least(n, 0, "n")
    p = require_probability(p, "p")
    isolated = _rng(seed).random(n) < p
    members = np.flatnonzero(~isolated)
    rows, cols = np.triu_indices(members.size, k=1)
    return Graph.from_edge_list(n, np.column_stack((members[rows], members[cols])))


def disjoint_polygons(sizes: Sequence[int]) -> Graph:
    """Disjoint union of cycles with the given lengths, numbered consecutively."""
    edges: list[tuple[int, int]] = []
    offset = 0
    for size in sizes:
        if require_at_least(size, 0, "sizes") < 3:
            raise InvalidParameterError(f"polygon size must be >= 3, got {size}", "sizes")
        edges.extend((offset + i, offset + (i + 1) % size) for i in range(size))
        offset += size
    return Graph.from_edge_list(offset, edges)


def _clique_edges(nodes: Sequence[int]) -> list[tuple[int, int]]:
    return [(u, v) for index, u in enumerate(nodes) for v in nodes[index + 1 :]]


def clique_plus_triangles(n: int) -> Graph:
    """K_{n/2} on nodes 0..n/2-1 plus n/6 disjoint triangles."""
    n = require_at_least(n, 12, "n")
    if n % 6:
        raise InvalidParameterError(f"n must be divisible by 6, got {n}", "n")
    half = n // 2
    edges = _clique_edges(list(range(half)))
    for start in range(half, n, 3):
        edges.extend(_clique_edges([start, start + 1, start + 2]))
    return Graph.from_edge_list(n, edges)


def clique_union_null(m: int) -> Graph:
    """m isolated nodes 0..m-1 next to a clique on m..2m-1."""
    m = require_at_least(m, 2, "m")
    return Graph.from_edge_list(2 * m, _clique_edges(list(range(m, 2 * m))))


def sample(spec: ModelSpec, seed: int) -> Graph:
    """Draw one graph from a resolved model."""
    seed = require_seed(seed)
    if spec.kind is ModelKind.ERDOS_RENYI:
        return erdos_renyi(spec.n, spec.p, seed)  # type: ignore[arg-type]
    if spec.kind is ModelKind.WATTS_STROGATZ:
        return watts_strogatz(spec.n, spec.k, spec.beta, seed)  # type: ignore[arg-type]
    if spec.kind is ModelKind.BARABASI_ALBERT:
        return barabasi_albert(spec.n, spec.m, seed)  # type: ignore[arg-type]
    if spec.kind is ModelKind.RANDOM_REGULAR:
        return random_regular(spec.n, spec.d, seed)  # type: ignore[arg-type]
    return two_phase_clique_null(spec.n, spec.p, seed)  # type: ignore[arg-type]


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def ws_k_for_density(n: int, p_star: float) -> int:
    """
    Neighbor count k with k / (n - 1) close to p_star.

    round(p_star (n - 1)) is clamped to [2, n - 1] and lowered to an even
    number, since the ring joins k / 2 neighbors per side.
    """
    n = require_at_least(n, 3, "n")
    p_star = require_open_probability(p_star, "p_star")
    k = _round_half_up(p_star * (n - 1))
    if k == 0:
        raise DensityTooLowError(f"density {p_star} gives k = 0 for n = {n}", "p_star")
    k = min(max(k, 2), n - 1)
    return k - k % 2


def ba_m_for_density(n: int, p_star: float) -> int:
    """
    Attachment count m whose edge density (nm - m^2) / C(n, 2) is near p_star.

    Uses the smaller root m = (2n - sqrt(4n^2 - 8 p_star n (n - 1))) / 4,
    rounded half up.

    Raises:
        DensityUnreachableError: the discriminant is negative
    """
    n = require_at_least(n, 3, "n")
    p_star = require_open_probability(p_star, "p_star")
    discriminant = 4 * n * n - 8 * p_star * n * (n - 1)
    if discriminant < 0:
        raise DensityUnreachableError(
            f"density {p_star} is unreachable for barabasi-albert with n = {n} "
            f"(discriminant {discriminant:.6g} < 0)",
            "p_star",
        )
    m = _round_half_up((2 * n - math.sqrt(discriminant)) / 4)
    if not 1 <= m < n:
        raise DensityTooLowError(f"density {p_star} gives m = {m} for n = {n}", "p_star")
    return m


def rr_d_for_density(n: int, p_star: float) -> int:
    """
    Common degree d with d / (n - 1) close to p_star and n * d even.

    When n * d is odd, d moves by one towards p_star (the smaller d on ties).
    """
    n = require_at_least(n, 2, "n")
    p_star = require_open_probability(p_star, "p_star")
    target = p_star * (n - 1)
    d = _round_half_up(target)
    if (n * d) % 2:
        d = min((d - 1, d + 1), key=lambda c: (abs(c / (n - 1) - p_star), c))
    if not 1 <= d <= n - 1:
        raise DensityTooLowError(f"density {p_star} gives d = {d} for n = {n}", "p_star")
    return d


def resolve_model(kind: ModelKind, n: int, p_star: float, beta: Optional[float] = None) -> ModelSpec:
    """Density-matched model parameters for a node count."""
    if kind is ModelKind.ERDOS_RENYI:
        return ModelSpec(kind, n, p=p_star)
    if kind is ModelKind.WATTS_STROGATZ:
        if beta is None:
            raise InvalidParameterError("watts-strogatz needs a rewiring probability", "beta")
        return ModelSpec(kind, n, k=ws_k_for_density(n, p_star), beta=beta)
    if kind is ModelKind.BARABASI_ALBERT:
        return ModelSpec(kind, n, m=ba_m_for_density(n, p_star))
    if kind is ModelKind.RANDOM_REGULAR:
        return ModelSpec(kind, n, d=rr_d_for_density(n, p_star))
    return ModelSpec(kind, n, p=p_star)


def nominal_density(spec: ModelSpec) -> float:
    """Density target a resolved model stands for (p for ER and two-phase)."""
    n = spec.n
    if spec.kind is ModelKind.WATTS_STROGATZ:
        return spec.k / (n - 1)  # type: ignore[operator]
    if spec.kind is ModelKind.BARABASI_ALBERT:
        m = spec.m
        return (n * m - m * m) / math.comb(n, 2)  # type: ignore[operator]
    if spec.kind is ModelKind.RANDOM_REGULAR:
        return spec.d / (n - 1)  # type: ignore[operator]
    return spec.p  # type: ignore[return-value]
