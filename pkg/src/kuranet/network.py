"""Coupling graph and oscillator parameters.

The coupling topology is a simple undirected graph held as a dense 0/1
adjacency matrix with zero diagonal (a_kk = 0).  Construction validates
symmetry, the empty diagonal, and degree consistency; the resulting
``Network`` is immutable and safe to share across runs.

Adjacency file format (one graph per file):

    # comment lines start with '#'
    n <node count>
    k j            <- one edge per line, 0-based, k < j
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from numpy.typing import NDArray

from .errors import (
    AdjacencyParseError,
    NetworkValidationError,
    PreconditionError,
)
from .rng import SplitMix64

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class Network:
    """Simple undirected graph: node count, adjacency, degrees."""

    n: int
    adjacency: FloatArray          # (n, n) symmetric 0/1, zero diagonal
    degrees: NDArray[np.int64]     # row sums of adjacency

    def __post_init__(self):
        self.adjacency.flags.writeable = False
        self.degrees.flags.writeable = False

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Network":
        adj = np.asarray(adj, dtype=np.float64)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise NetworkValidationError("adjacency must be a square matrix")
        n = adj.shape[0]
        if n < 1:
            raise NetworkValidationError("need at least one node")
        if not np.all((adj == 0.0) | (adj == 1.0)):
            raise NetworkValidationError("adjacency entries must be 0 or 1")
        if np.any(np.diag(adj) != 0.0):
            raise NetworkValidationError("self-loops are not allowed (a_kk must be 0)")
        if not np.array_equal(adj, adj.T):
            raise NetworkValidationError("adjacency must be symmetric")
        degrees = adj.sum(axis=1).astype(np.int64)
        return cls(n=n, adjacency=adj.copy(), degrees=degrees)

    @property
    def n_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def laplacian(self) -> FloatArray:
        """Graph Laplacian L = diag(degrees) - A."""
        return np.diag(self.degrees.astype(np.float64)) - self.adjacency


@dataclass(frozen=True, eq=False)
class OscParams:
    """Natural frequencies omega (rad/s) and coupling strength sigma > 0."""

    omega: FloatArray
    sigma: float

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=np.float64)
        if not np.all(np.isfinite(omega)):
            raise PreconditionError("omega must be finite componentwise")
        if not (self.sigma > 0.0):
            raise PreconditionError("sigma must be positive")
        object.__setattr__(self, "omega", omega)
        self.omega.flags.writeable = False


def erdos_renyi(n: int, p: float, seed: int) -> Network:
    """Erdos-Renyi G(n, p), deterministic in (n, p, seed).

    One Bernoulli(p) draw per unordered pair {k, j}, k < j, taken in
    row-major order from a fresh SplitMix64 stream, so the graph is a
    pure function of its arguments regardless of call history.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise PreconditionError("p must lie in [0, 1]")
    stream = SplitMix64(seed)
    adj = np.zeros((n, n), dtype=np.float64)
    for k in range(n):
        for j in range(k + 1, n):
            if stream.uniform() < p:
                adj[k, j] = 1.0
                adj[j, k] = 1.0
    return Network.from_adjacency(adj)


def is_connected(net: Network) -> bool:
    """BFS reachability from node 0.  Connectivity is a diagnostic, not an
    enforced invariant: spectral-feedback validity and gain-bound sharpness
    depend on it, so scenarios decide whether to require it."""
    if net.n == 1:
        return True
    seen = np.zeros(net.n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for k in frontier:
            for j in np.nonzero(net.adjacency[k])[0]:
                if not seen[j]:
                    seen[j] = True
                    nxt.append(int(j))
        frontier = nxt
    return bool(seen.all())


def load_adjacency(path: Union[str, Path]) -> Network:
    """Read a graph in the edge-list format described in the module docstring."""
    path = Path(path)
    n = None
    edges = []
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise AdjacencyParseError(f"cannot read {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if n is not None:
                raise AdjacencyParseError(f"{path}:{lineno}: duplicate 'n' header")
            if len(parts) != 2:
                raise AdjacencyParseError(f"{path}:{lineno}: expected 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError as exc:
                raise AdjacencyParseError(f"{path}:{lineno}: bad node count") from exc
            if n < 1:
                raise AdjacencyParseError(f"{path}:{lineno}: node count must be >= 1")
            continue
        if n is None:
            raise AdjacencyParseError(f"{path}:{lineno}: edge before 'n' header")
        if len(parts) != 2:
            raise AdjacencyParseError(f"{path}:{lineno}: expected 'k j'")
        try:
            k, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise AdjacencyParseError(f"{path}:{lineno}: non-integer endpoint") from exc
        if k == j:
            raise NetworkValidationError(f"{path}:{lineno}: self-loop {k} {j}")
        if not (0 <= k < n and 0 <= j < n):
            raise AdjacencyParseError(f"{path}:{lineno}: endpoint out of range")
        if k > j:
            raise AdjacencyParseError(f"{path}:{lineno}: edges must satisfy k < j")
        edges.append((k, j))
    if n is None:
        raise AdjacencyParseError(f"{path}: missing 'n <count>' header")
    adj = np.zeros((n, n), dtype=np.float64)
    for k, j in edges:
        adj[k, j] = 1.0
        adj[j, k] = 1.0
    return Network.from_adjacency(adj)


def save_adjacency(net: Network, path: Union[str, Path]) -> None:
    """Write the edge-list format read by :func:`load_adjacency`."""
    path = Path(path)
    rows = [f"n {net.n}"]
    for k in range(net.n):
        for j in range(k + 1, net.n):
            if net.adjacency[k, j] != 0.0:
                rows.append(f"{k} {j}")
    path.write_text("\n".join(rows) + "\n")


@dataclass(frozen=True)
class FrequencySpec:
    """Frequency distribution: constant(value) or normal(mean, std)."""

    kind: str                      # "constant" | "normal"
    value: float = 0.0             # constant only
    mean: float = 0.0              # normal only
    std: float = 0.0               # normal only

    def __post_init__(self):
        if self.kind not in ("constant", "normal"):
            raise PreconditionError(f"unknown frequency distribution {self.kind!r}")
        if self.kind == "normal" and self.std < 0.0:
            raise PreconditionError("std must be nonnegative")


def sample_frequencies(n: int, dist: FrequencySpec, seed: int = 0) -> FloatArray:
    """Draw natural frequencies; deterministic for a fixed seed."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if dist.kind == "constant":
        return np.full(n, float(dist.value))
    return SplitMix64(seed).normals(n, mean=dist.mean, std=dist.std)
