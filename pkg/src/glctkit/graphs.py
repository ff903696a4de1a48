"""Graph construction, file ingestion, and adjacency-matrix materialization.

Graphs are immutable values: a vertex count, a weighted edge list, and a
directedness flag. Vertices are 0-indexed everywhere, including files and
CLI output. All matrices produced here are dense complex arrays, sized for
the N <= ~2000 regime the rest of the toolkit targets.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class Graph:
    """Weighted graph with 0-indexed vertices and no self-loops.

    Undirected edges are stored once per unordered pair, canonicalized as
    (min, max). ``disconnected`` is a generator-reported warning flag and
    does not take part in equality.
    """

    n: int
    edges: tuple[Edge, ...]
    directed: bool = False
    disconnected: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"vertex count must be positive, got {self.n}")
        canon = []
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if not math.isfinite(w):
                raise ValidationError(f"non-finite weight on edge ({u},{v})")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise ValidationError(f"duplicate edge ({u},{v})")
            seen.add(key)
            canon.append((key[0], key[1], float(w)) if not self.directed else (u, v, float(w)))
        object.__setattr__(self, "edges", tuple(canon))


def adjacency(g: Graph) -> np.ndarray:
    """Dense complex adjacency matrix; symmetric for undirected graphs."""
    a = np.zeros((g.n, g.n), dtype=complex)
    for u, v, w in g.edges:
        a[u, v] = w
        if not g.directed:
            a[v, u] = w
    return a


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian diag(degree) - A of an undirected graph."""
    if g.directed:
        raise ValidationError("Laplacian baseline requires an undirected graph")
    a = adjacency(g)
    return np.diag(a.sum(axis=1)) - a


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability over the (undirected view of the) edges."""
    if g.n == 1:
        return True
    neigh: list[list[int]] = [[] for _ in range(g.n)]
    for u, v, _ in g.edges:
        neigh[u].append(v)
        neigh[v].append(u)
    seen = bytearray(g.n)
    stack = [0]
    seen[0] = 1
    count = 1
    while stack:
        u = stack.pop()
        for v in neigh[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                stack.append(v)
    return count == g.n


def cycle_graph(n: int) -> Graph:
    """Undirected unweighted cycle: edges {i, (i+1) mod n}."""
    if n < 3:
        raise ValidationError(f"cycle needs n >= 3, got {n}")
    return Graph(n=n, edges=tuple((i, (i + 1) % n, 1.0) for i in range(n)))


def random_geometric_graph(n: int, radius: float, seed: int) -> Graph:
    """Uniform points in the unit square, edges between points closer than radius.

    Deterministic for a fixed seed. A disconnected result is flagged via
    ``Graph.disconnected`` rather than raised, so downstream experiments can
    still run.
    """
    if n < 2:
        raise ValidationError(f"need n >= 2, got {n}")
    if not (0 < radius <= math.sqrt(2)):
        raise ValidationError(f"radius must be in (0, sqrt(2)], got {radius}")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    edges = []
    r2 = radius * radius
    for i in range(n):
        d2 = ((pts[i + 1 :] - pts[i]) ** 2).sum(axis=1)
        for j in np.flatnonzero(d2 < r2):
            edges.append((i, i + 1 + int(j), 1.0))
    g = Graph(n=n, edges=tuple(edges))
    if not is_connected(g):
        g = Graph(n=n, edges=g.edges, disconnected=True)
    return g


def knn_graph(points: np.ndarray, k: int) -> Graph:
    """Symmetrized k-nearest-neighbor graph with Gaussian edge weights.

    An edge {i, j} exists when j is among i's k nearest Euclidean neighbors
    or vice versa; its weight is exp(-dist^2 / sigma^2) with sigma the mean
    k-th-neighbor distance. Duplicate points are allowed.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValidationError("points must be a 2-D array of coordinates")
    n = pts.shape[0]
    if not (0 < k < n):
        raise ValidationError(f"need 0 < k < n, got k={k}, n={n}")
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")
    kth = np.sqrt(d2[np.arange(n), order[:, k - 1]])
    sigma = float(kth.mean())
    if sigma == 0.0:
        sigma = 1.0  # all points coincide; weights below degenerate to 1
    pairs = set()
    for i in range(n):
        for j in order[i, :k]:
            pairs.add((min(i, int(j)), max(i, int(j))))
    edges = tuple(
        (u, v, float(np.exp(-d2[u, v] / (sigma * sigma)))) for u, v in sorted(pairs)
    )
    g = Graph(n=n, edges=edges)
    if not is_connected(g):
        g = Graph(n=n, edges=g.edges, disconnected=True)
    return g


def swiss_roll_points(n: int, seed: int) -> np.ndarray:
    """Seeded sample of n points on a 3-D swiss-roll surface."""
    rng = np.random.default_rng(seed)
    t = 1.5 * np.pi * (1 + 2 * rng.random(n))
    height = 21.0 * rng.random(n)
    return np.column_stack((t * np.cos(t), height, t * np.sin(t)))


def two_block_sbm(
    n: int, p_in: float, p_out: float, seed: int
) -> tuple[Graph, np.ndarray]:
    """Two-community stochastic block model plus its 0/1 block labels.

    Vertices [0, n/2) form block 0 and the rest block 1; within-block pairs
    connect with probability p_in, across-block pairs with p_out.
    """
    if n < 4 or n % 2:
        raise ValidationError(f"need even n >= 4, got {n}")
    for name, p in (("p_in", p_in), ("p_out", p_out)):
        if not (0 <= p <= 1):
            raise ValidationError(f"{name} must be a probability, got {p}")
    rng = np.random.default_rng(seed)
    labels = np.zeros(n, dtype=int)
    labels[n // 2 :] = 1
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            p = p_in if labels[i] == labels[j] else p_out
            if rng.random() < p:
                edges.append((i, j, 1.0))
    g = Graph(n=n, edges=tuple(edges))
    if not is_connected(g):
        g = Graph(n=n, edges=g.edges, disconnected=True)
    return g, labels


# ---------------------------------------------------------------------------
# File formats: edge lists and signal CSVs.


def load_graph(path: str) -> Graph:
    """Read a graph from the plain-text edge-list format.

    The first non-comment line is ``<n> <directed|undirected>``; every
    following non-comment line is ``<u> <v> <w>``. ``#`` starts a comment.
    """
    n = None
    directed = False
    edges: list[Edge] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if n is None:
                if len(parts) != 2:
                    raise ParseError("expected header '<n> <directed|undirected>'", lineno)
                try:
                    n = int(parts[0])
                except ValueError:
                    raise ParseError(f"vertex count is not an integer: {parts[0]!r}", lineno)
                if parts[1] not in ("directed", "undirected"):
                    raise ParseError(f"expected 'directed' or 'undirected', got {parts[1]!r}", lineno)
                directed = parts[1] == "directed"
                continue
            if len(parts) != 3:
                raise ParseError("expected edge line '<u> <v> <w>'", lineno)
            try:
                u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge line: {line!r}", lineno)
            if u == v:
                raise ValidationError(f"self-loop at vertex {u} (line {lineno})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(
                    f"vertex index out of range on line {lineno}: ({u},{v}) with n={n}"
                )
            edges.append((u, v, w))
    if n is None:
        raise ParseError("missing header line")
    return Graph(n=n, edges=tuple(edges), directed=directed)


def write_graph(g: Graph, path: str) -> None:
    """Write the lossless edge-list form read back by :func:`load_graph`."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {'directed' if g.directed else 'undirected'}\n")
        for u, v, w in g.edges:
            fh.write(f"{u} {v} {w!r}\n")


def read_signal(path: str, n: int | None = None) -> np.ndarray:
    """Read a complex signal from CSV with header ``vertex,real,imag``."""
    values: list[complex] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["vertex", "real", "imag"]:
            raise ParseError(f"expected header 'vertex,real,imag' in {path}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                idx, re, im = int(row[0]), float(row[1]), float(row[2])
            except (ValueError, IndexError):
                raise ParseError(f"malformed signal row: {row!r}", lineno)
            if idx != len(values):
                raise ParseError(f"vertices must ascend from 0, got {idx}", lineno)
            values.append(complex(re, im))
    x = np.asarray(values, dtype=complex)
    if n is not None and len(x) != n:
        raise ValidationError(f"signal length {len(x)} does not match n={n}")
    if not np.all(np.isfinite(x.view(float))):
        raise ValidationError("signal contains non-finite entries")
    return x


def write_signal(x: np.ndarray, path: str) -> None:
    """Write a signal in the CSV form read back by :func:`read_signal`."""
    x = np.asarray(x, dtype=complex)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["vertex", "real", "imag"])
        for i, z in enumerate(x):
            writer.writerow([i, repr(float(z.real)), repr(float(z.imag))])
