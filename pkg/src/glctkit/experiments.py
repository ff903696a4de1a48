"""Reproducible experiment harness: sweeps, tables, classification, clustering.

Every experiment is driven by a JSON-shaped config and a single seed, and
emits tabular rows (experiment, basis, strategy, m, trial, metric, value)
plus a summary with built-in pass/fail assertions. Runs are bit-reproducible
from (config, seed): all randomness flows through seeded generators and
per-trial derived seeds.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .graphs import (
    Graph,
    adjacency,
    cycle_graph,
    knn_graph,
    laplacian,
    load_graph,
    random_geometric_graph,
    swiss_roll_points,
    two_block_sbm,
)
from .operator import GlctOperator, GlctParams, build_operator
from .sampling import (
    DETERMINISTIC_STRATEGIES,
    BandlimitSpec,
    SamplingOperator,
    Strategy,
    band_columns,
    bandlimit,
    greedy_select,
    nmse,
    recover,
    recovery_operator,
    sample,
)

ROW_HEADER = ("experiment", "basis", "strategy", "m", "trial", "metric", "value")


@dataclass
class ExperimentResult:
    """Accumulated result rows in the uniform tabular schema."""

    rows: list[tuple] = field(default_factory=list)

    def add(self, experiment, basis, strategy, m, trial, metric, value):
        v = float(value)
        if metric == "nmse" and not (np.isfinite(v) and v >= 0):
            raise ValidationError(f"bad nmse value {value!r}")
        self.rows.append((experiment, basis, strategy, int(m), int(trial), metric, v))

    def values(self, **filters) -> list[float]:
        """Metric values matching the given column=value filters."""
        cols = {name: i for i, name in enumerate(ROW_HEADER)}
        out = []
        for row in self.rows:
            if all(row[cols[k]] == v for k, v in filters.items()):
                out.append(row[cols["value"]])
        return out

    def to_csv(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(ROW_HEADER)
            for row in self.rows:
                writer.writerow([*row[:6], repr(row[6])])

    def to_sweep_csv(self, path: str) -> None:
        """Compact recovery-sweep schema: ``strategy,m,trial,nmse``."""
        cols = {name: i for i, name in enumerate(ROW_HEADER)}
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["strategy", "m", "trial", "nmse"])
            for row in self.rows:
                if row[cols["metric"]] == "nmse":
                    writer.writerow(
                        [row[cols["strategy"]], row[cols["m"]], row[cols["trial"]],
                         repr(row[cols["value"]])]
                    )


def resolve_graph(spec: dict) -> tuple[Graph, np.ndarray | None]:
    """Build the graph named by a config's graph block; SBM also returns labels."""
    if "path" in spec:
        return load_graph(spec["path"]), None
    gen = spec.get("generator")
    if gen == "cycle":
        return cycle_graph(int(spec["n"])), None
    if gen == "geometric":
        return random_geometric_graph(int(spec["n"]), float(spec["radius"]), int(spec["seed"])), None
    if gen == "swiss_roll_knn":
        pts = swiss_roll_points(int(spec["n"]), int(spec["seed"]))
        return knn_graph(pts, int(spec["k"])), None
    if gen == "sbm":
        return two_block_sbm(
            int(spec["n"]), float(spec["p_in"]), float(spec["p_out"]), int(spec["seed"])
        )
    raise ValidationError(f"unknown graph spec: {spec!r}")


def params_from_dict(d: dict) -> GlctParams:
    return GlctParams(
        alpha=float(d["alpha"]),
        beta=float(d["beta"]),
        chirp_l=float(d.get("chirp_l", 0.0)),
        chirp_f=float(d.get("chirp_f", 0.0)),
    )


def _operator_for(g: Graph, params: GlctParams, source: str = "adjacency") -> GlctOperator:
    if source == "adjacency":
        return build_operator(adjacency(g), params)
    if source == "laplacian":
        return build_operator(laplacian(g), params)
    raise ValidationError(f"unknown shift source {source!r}")


def _complex_noise(rng: np.random.Generator, n: int, sigma: float) -> np.ndarray:
    """I.i.d. complex Gaussian noise with E|e_i|^2 = sigma^2."""
    if sigma == 0.0:
        return np.zeros(n, dtype=complex)
    return sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


# ---------------------------------------------------------------------------
# Recovery sweeps (error vs number of samples).


def recovery_sweep(
    g: Graph,
    params: GlctParams,
    bandwidth: int,
    strategies: list[Strategy],
    sample_sizes: list[int],
    trials: int,
    noise_sigma: float,
    seed: int,
    experiment: str = "sweep",
    basis: str = "glct",
) -> ExperimentResult:
    """NMSE of sampled-then-recovered bandlimited signals across strategies.

    Per trial, one random signal is bandlimited and one full-length noise
    vector is drawn; each strategy's selection for the largest m is grown
    once and its prefixes reused, so the same noise realization couples all
    sample counts. Selection or recovery failures become 'failed' rows.
    """
    op = _operator_for(g, params)
    spec = BandlimitSpec(bandwidth)
    n = op.n
    m_max = max(sample_sizes)
    if m_max > n:
        raise ValidationError(f"sample size {m_max} exceeds n={n}")

    signals = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        signals.append((bandlimit(y, op, spec), _complex_noise(rng, n, noise_sigma)))

    result = ExperimentResult()
    for strategy in strategies:
        try:
            full = greedy_select(strategy, op, spec, m_max, seed=seed)
        except Exception:
            for m in sample_sizes:
                for t in range(trials):
                    result.add(experiment, basis, strategy.value, m, t, "failed", 1.0)
            continue
        for m in sample_sizes:
            d = SamplingOperator(full.set[:m], n)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                r = recovery_operator(d, op, spec)
            for t, (x, e_full) in enumerate(signals):
                try:
                    xs = sample(x, d) + e_full[list(d.set)]
                    result.add(
                        experiment, basis, strategy.value, m, t, "nmse", nmse(x, recover(xs, r))
                    )
                except Exception:
                    result.add(experiment, basis, strategy.value, m, t, "failed", 1.0)
            if noise_sigma > 0 and m == bandwidth and strategy in DETERMINISTIC_STRATEGIES:
                x0 = signals[0][0]
                result.add(
                    experiment, basis, strategy.value, m, 0, "nmse_noiseless",
                    nmse(x0, recover(sample(x0, d), r)),
                )
    return result


# ---------------------------------------------------------------------------
# Cross-basis recovery tables.


def cross_basis_table(
    g: Graph,
    glct_params: GlctParams,
    bandwidth: int,
    bases: list[dict],
    strategies: list[Strategy],
    trials: int,
    seed: int,
    experiment: str = "table",
) -> ExperimentResult:
    """Recovery error of one bandlimited signal family under rival spectra.

    The test signals are bandlimited under the top-level transform; every
    basis then selects its own sampling set (m = bandwidth) and recovers
    with its own band. ``bases`` entries are dicts with ``name``, parameter
    fields, and an optional ``source`` of 'adjacency' or 'laplacian'.
    """
    ref_op = _operator_for(g, glct_params)
    spec = BandlimitSpec(bandwidth)
    n = ref_op.n

    signals = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        signals.append(bandlimit(y, ref_op, spec))

    result = ExperimentResult()
    for basis in bases:
        name = basis["name"]
        op_b = ref_op if basis.get("reference") else _operator_for(
            g, params_from_dict(basis), basis.get("source", "adjacency")
        )
        for strategy in strategies:
            try:
                d = greedy_select(strategy, op_b, spec, bandwidth, seed=seed)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    r = recovery_operator(d, op_b, spec)
                for t, x in enumerate(signals):
                    result.add(
                        experiment, name, strategy.value, bandwidth, t, "nmse",
                        nmse(x, recover(sample(x, d), r)),
                    )
            except Exception:
                for t in range(trials):
                    result.add(experiment, name, strategy.value, bandwidth, t, "failed", 1.0)
    return result


# ---------------------------------------------------------------------------
# Semi-supervised label recovery.


def classify_semi_supervised(
    g: Graph,
    labels: np.ndarray,
    params: GlctParams,
    f_size: int,
    m: int,
    strategy: Strategy,
    seed: int = 0,
    op: GlctOperator | None = None,
) -> float:
    """Fraction of vertices labeled correctly after sampled recovery.

    The label signal is sampled on the strategy's m vertices, its band
    coefficients fitted by least squares, reconstructed through the band
    atoms, and thresholded at 0.5. Labels must be binary 0/1 and m must be
    at least the band size.
    """
    labels = np.asarray(labels)
    if not np.all(np.isin(labels, (0, 1))):
        raise ValidationError("labels must be binary 0/1")
    if m < f_size:
        raise ValidationError(f"need m >= band size, got m={m} < {f_size}")
    if op is None:
        op = _operator_for(g, params)
    spec = BandlimitSpec(f_size)
    d = greedy_select(strategy, op, spec, m, seed=seed)
    cols = band_columns(op, spec)
    coeffs, *_ = np.linalg.lstsq(cols[list(d.set), :], labels[list(d.set)].astype(complex), rcond=None)
    predicted = (np.real(cols @ coeffs) > 0.5).astype(int)
    return float(np.mean(predicted == labels))


# ---------------------------------------------------------------------------
# Clustering: Lloyd iterations with k-means++ seeding, silhouette scoring.


def _kmeans_once(x: np.ndarray, k: int, rng: np.random.Generator,
                 max_iter: int = 300, tol: float = 1e-8) -> tuple[np.ndarray, float]:
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[int(rng.integers(n))]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total == 0:
            centers[j] = x[int(rng.integers(n))]
        else:
            centers[j] = x[int(rng.choice(n, p=d2 / total))]
        d2 = np.minimum(d2, ((x - centers[j]) ** 2).sum(axis=1))

    assign = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        dists = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = dists.argmin(axis=1)
        new_centers = centers.copy()
        for j in range(k):
            members = x[assign == j]
            if len(members):
                new_centers[j] = members.mean(axis=0)
            else:
                # Re-seed an empty cluster at the point farthest from its center.
                far = int(dists[np.arange(n), assign].argmax())
                new_centers[j] = x[far]
        shift = float(np.linalg.norm(new_centers - centers))
        centers = new_centers
        if shift <= tol:
            break
    dists = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    assign = dists.argmin(axis=1)
    inertia = float(dists[np.arange(n), assign].sum())
    return assign, inertia


def silhouette_score(x: np.ndarray, assign: np.ndarray) -> float:
    """Mean of (b - a) / max(a, b) with Euclidean distances.

    a(i) is the mean distance to the other members of i's cluster (0 for a
    singleton); b(i) is the smallest mean distance to another cluster. The
    degenerate a = b = 0 case scores 0 by convention.
    """
    x = np.asarray(x, dtype=float)
    assign = np.asarray(assign)
    n = x.shape[0]
    dist = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=2))
    score = 0.0
    clusters = np.unique(assign)
    for i in range(n):
        own = assign[i]
        mates = np.flatnonzero(assign == own)
        a = float(dist[i, mates[mates != i]].mean()) if len(mates) > 1 else 0.0
        b = min(
            (float(dist[i, assign == c].mean()) for c in clusters if c != own),
            default=0.0,
        )
        denom = max(a, b)
        score += (b - a) / denom if denom > 0 else 0.0
    return score / n


def cluster_and_score(
    features: np.ndarray, k: int, seed: int, restarts: int = 20
) -> tuple[np.ndarray, float]:
    """Best-of-restarts k-means assignments plus their silhouette score."""
    x = np.asarray(features, dtype=float)
    if x.ndim != 2:
        raise ValidationError("features must be a 2-D array")
    if not 2 <= k <= x.shape[0]:
        raise ValidationError(f"need 2 <= k <= n, got k={k}, n={x.shape[0]}")
    rng = np.random.default_rng(seed)
    best_assign, best_inertia = None, np.inf
    for _ in range(restarts):
        assign, inertia = _kmeans_once(x, k, rng)
        if inertia < best_inertia:
            best_assign, best_inertia = assign, inertia
    return best_assign, silhouette_score(x, best_assign)
