"""Erdős–Rényi sampling and the matrices built from a sampled graph.

Sampling uses numpy's PCG64 bit generator seeded through ``SeedSequence``.
Pairs ``(i, j)``, ``i < j``, are visited row by row; pair ``(i, j)`` is an
edge iff its uniform draw on ``[0, 1)`` is below ``p``. Edges are kept as a
packed upper-triangular bitset and expanded to dense float64 matrices on
demand.

Every matrix builder returns a fresh, exactly symmetric ``ndarray``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GraphSample",
    "sample_graph",
    "from_edges",
    "trial_seed",
    "adjacency",
    "degrees",
    "laplacian",
    "gutman_matrix",
    "centered_adjacency",
    "l1_matrix",
    "l2_matrix",
    "shift_matrix",
    "centering_drift",
]

SEED_MASK = (1 << 64) - 1


def trial_seed(master_seed: int, trial: int) -> int:
    """Seed of substream ``trial``: ``(master_seed + trial) mod 2**64``.

    The same trial index therefore reuses one stream across every (n, p)
    cell of a campaign, which couples cells through common random numbers.
    """
    return (int(master_seed) + int(trial)) & SEED_MASK


@dataclass(frozen=True, eq=False)
class GraphSample:
    """An undirected simple graph on ``n`` vertices with its provenance.

    ``bits`` packs the upper-triangular adjacency flags in row-major order of
    the pairs ``(i, j)``, ``i < j`` (the order of ``np.triu_indices(n, 1)``).
    ``seed`` is ``None`` for graphs built by hand through :func:`from_edges`.
    """

    n: int
    p: float
    seed: int | None
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        self.bits.setflags(write=False)

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def edge_flags(self) -> np.ndarray:
        return np.unpackbits(self.bits, count=self.n_pairs).astype(bool)

    @property
    def edge_count(self) -> int:
        return int(np.unpackbits(self.bits, count=self.n_pairs).sum())

    @property
    def sigma(self) -> float:
        return math.sqrt(self.p * (1.0 - self.p))

    def edges(self) -> list[tuple[int, int]]:
        iu, ju = np.triu_indices(self.n, 1)
        flags = self.edge_flags
        return list(zip(iu[flags].tolist(), ju[flags].tolist()))

    def to_record(self) -> dict:
        return {"n": self.n, "p": self.p, "seed": self.seed, "edge_count": self.edge_count}

    def to_json(self) -> str:
        return json.dumps(self.to_record())

    @classmethod
    def from_json(cls, text: str) -> "GraphSample":
        """Rebuild a sample by resampling from its seed.

        The stored edge count guards against a record produced by a
        different sampler.
        """
        rec = json.loads(text)
        if rec.get("seed") is None:
            raise ValueError("record without a seed cannot be resampled")
        g = sample_graph(int(rec["n"]), float(rec["p"]), int(rec["seed"]))
        if "edge_count" in rec and int(rec["edge_count"]) != g.edge_count:
            raise ValueError(
                f"edge count mismatch on resample: stored {rec['edge_count']}, "
                f"got {g.edge_count}"
            )
        return g

    def __eq__(self, other):
        if not isinstance(other, GraphSample):
            return NotImplemented
        return (
            self.n == other.n
            and self.p == other.p
            and self.seed == other.seed
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash((self.n, self.p, self.seed, self.bits.tobytes()))


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    return p


def sample_graph(n: int, p: float, seed: int) -> GraphSample:
    """Draw G(n, p) deterministically from ``seed``."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"vertex count must be a positive integer, got {n!r}")
    n = int(n)
    p = _check_probability(p)
    seed = int(seed) & SEED_MASK
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    flags = np.empty(n * (n - 1) // 2, dtype=bool)
    start = 0
    for i in range(n - 1):
        width = n - 1 - i
        np.less(rng.random(width), p, out=flags[start : start + width])
        start += width
    return GraphSample(n, p, seed, np.packbits(flags))


def from_edges(n: int, edges, p: float = 0.0) -> GraphSample:
    """Graph with an explicit edge list; ``p`` is only carried along."""
    p = _check_probability(p)
    flags = np.zeros(n * (n - 1) // 2, dtype=bool)
    for u, v in edges:
        i, j = (u, v) if u < v else (v, u)
        if i == j or i < 0 or j >= n:
            raise ValueError(f"invalid edge ({u}, {v}) for n={n}")
        flags[i * (2 * n - i - 1) // 2 + (j - i - 1)] = True
    return GraphSample(n, p, None, np.packbits(flags))


def adjacency(g: GraphSample) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    iu, ju = np.triu_indices(g.n, 1)
    flags = g.edge_flags
    a[iu[flags], ju[flags]] = 1.0
    a += a.T
    return a


def degrees(g: GraphSample) -> np.ndarray:
    return adjacency(g).sum(axis=1)


def shift_matrix(n: int, p: float) -> np.ndarray:
    """``p * (J - I)``."""
    m = np.full((n, n), float(p))
    np.fill_diagonal(m, 0.0)
    return m


def laplacian(g: GraphSample) -> np.ndarray:
    a = adjacency(g)
    lap = -a
    lap[np.diag_indices(g.n)] = a.sum(axis=1)
    return lap


def _average_degree(g: GraphSample) -> float:
    return 2.0 * g.edge_count / g.n


def gutman_matrix(g: GraphSample) -> np.ndarray:
    """``L - (average degree) I``, the matrix whose energy is LE(G)."""
    m = laplacian(g)
    m[np.diag_indices(g.n)] -= _average_degree(g)
    return m


def centered_adjacency(g: GraphSample, p: float) -> np.ndarray:
    """``A - p (J - I)``; ``p`` should be the sampling probability of ``g``."""
    return adjacency(g) - shift_matrix(g.n, p)


def l1_matrix(g: GraphSample, p: float) -> np.ndarray:
    return gutman_matrix(g) + shift_matrix(g.n, p)


def l2_matrix(g: GraphSample, p: float) -> np.ndarray:
    """``(D - (n-1) p I) - (A - p (J - I))``."""
    m = laplacian(g) + shift_matrix(g.n, p)
    m[np.diag_indices(g.n)] -= (g.n - 1) * p
    return m


def centering_drift(g: GraphSample, p: float) -> float:
    """Scaled gap between the average degree and its mean ``(n-1) p``.

    ``(l2_matrix - l1_matrix) / (sigma sqrt(n))`` equals this value times I.
    """
    p = _check_probability(p)
    if p in (0.0, 1.0):
        raise ValueError("centering drift needs 0 < p < 1")
    sigma = math.sqrt(p * (1.0 - p))
    return (_average_degree(g) - (g.n - 1) * p) / (sigma * math.sqrt(g.n))
