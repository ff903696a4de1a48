"""Bandlimited sampling and recovery, plus optimal-design sampling strategies.

A band is a set of spectral indices (by default the first ``size`` under
the global eigenvalue ordering). Sampling selects rows of the inverse
transform's band columns; a sampling set is qualified when those rows have
full column rank, in which case least-squares recovery through the
pseudo-inverse is exact for every bandlimited signal.

Sampling sets are chosen greedily under classical optimal-design scores of
the selected-row submatrix (trace, log-volume, extreme singular values),
with a random baseline and an exhaustive-search oracle for small instances.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ValidationError
from .localization import Limiter
from .operator import GlctOperator

#: Relative singular-value cutoff defining numerical rank and pseudo-inverses.
RANK_RCOND = 1e-10

#: Guard on the number of subsets exhaustive search will enumerate.
EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True)
class BandlimitSpec:
    """Band of spectral indices; defaults to the first ``size`` indices."""

    size: int
    indices: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError(f"band size must be positive, got {self.size}")
        if self.indices is not None:
            idx = tuple(int(i) for i in self.indices)
            if len(idx) != self.size or len(set(idx)) != self.size:
                raise ValidationError("indices must be distinct and match size")
            object.__setattr__(self, "indices", idx)

    def resolve(self, n: int) -> tuple[int, ...]:
        idx = self.indices if self.indices is not None else tuple(range(self.size))
        if self.size > n or any(not 0 <= i < n for i in idx):
            raise ValidationError(f"band {idx} out of range for n={n}")
        return idx


@dataclass(frozen=True)
class SamplingOperator:
    """Ordered sampling vertices and the induced row-selection map."""

    set: tuple[int, ...]
    n: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.set)
        if len(set(idx)) != len(idx):
            raise ValidationError("sampling vertices must be distinct")
        if any(not 0 <= i < self.n for i in idx):
            raise ValidationError(f"sampling vertices out of range for n={self.n}")
        object.__setattr__(self, "set", idx)

    @property
    def matrix(self) -> np.ndarray:
        d = np.zeros((len(self.set), self.n))
        d[np.arange(len(self.set)), list(self.set)] = 1.0
        return d

    def complement_projector(self) -> np.ndarray:
        """Diagonal projector onto the unsampled vertices."""
        d = np.ones(self.n)
        d[list(self.set)] = 0.0
        return np.diag(d.astype(complex))


@dataclass(frozen=True)
class RecoveryOperator:
    """Least-squares interpolation matrix built from a sampling set."""

    matrix: np.ndarray
    set: tuple[int, ...]
    qualified: bool


class Strategy(enum.Enum):
    """Sampling-set selection strategies.

    The deterministic four score the selected-row submatrix of the band
    columns by classical design criteria: MIN_FRO minimizes the trace of
    the pseudo-inverse Gram (A-optimal), MAX_VOL maximizes log-volume
    (D-optimal), MAX_SIG_MIN and MIN_PINV both maximize the smallest
    singular value (E-optimal) and share one implementation, MAX_SIG
    maximizes the energy of the rows (T-optimal).
    """

    MIN_FRO = "minfro"
    MAX_VOL = "maxvol"
    MIN_PINV = "minpinv"
    MAX_SIG_MIN = "maxsigmin"
    MAX_SIG = "maxsig"
    RANDOM = "random"
    EXHAUSTIVE = "exhaustive"


DETERMINISTIC_STRATEGIES = (
    Strategy.MIN_FRO,
    Strategy.MAX_VOL,
    Strategy.MIN_PINV,
    Strategy.MAX_SIG_MIN,
    Strategy.MAX_SIG,
)


def band_columns(op: GlctOperator, spec: BandlimitSpec) -> np.ndarray:
    """Band columns of the inverse transform, the atoms of the band subspace."""
    return op.inverse[:, list(spec.resolve(op.n))]


def bandlimit(y: np.ndarray, op: GlctOperator, spec: BandlimitSpec) -> np.ndarray:
    """Project a signal onto the band: keep only the selected coefficients."""
    y = np.asarray(y, dtype=complex)
    if y.shape != (op.n,):
        raise ValidationError(f"signal length {y.shape} does not match n={op.n}")
    idx = list(spec.resolve(op.n))
    return op.inverse[:, idx] @ (op.forward[idx, :] @ y)


def sample(x: np.ndarray, d: SamplingOperator) -> np.ndarray:
    """Read the signal at the sampling vertices, in sampling order."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (d.n,):
        raise ValidationError(f"signal length {x.shape} does not match n={d.n}")
    return x[list(d.set)]


def _numerical_rank(s: np.ndarray) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > RANK_RCOND * s[0]))


def is_qualified(d: SamplingOperator, op: GlctOperator, spec: BandlimitSpec) -> bool:
    """Whether the selected rows of the band columns have full column rank."""
    sub = band_columns(op, spec)[list(d.set), :]
    s = np.linalg.svd(sub, compute_uv=False)
    return _numerical_rank(s) == spec.size


def recovery_operator(
    d: SamplingOperator, op: GlctOperator, spec: BandlimitSpec
) -> RecoveryOperator:
    """Pseudo-inverse recovery map; exact on the band when d is qualified.

    An unqualified set still yields a best-effort least-squares operator,
    flagged via ``qualified`` and a warning.
    """
    cols = band_columns(op, spec)
    sub = cols[list(d.set), :]
    qualified = _numerical_rank(np.linalg.svd(sub, compute_uv=False)) == spec.size
    if not qualified:
        warnings.warn(
            f"sampling set {d.set} is not qualified for band size {spec.size}; "
            "recovery is best-effort least squares",
            stacklevel=2,
        )
    return RecoveryOperator(
        matrix=cols @ np.linalg.pinv(sub, rcond=RANK_RCOND),
        set=d.set,
        qualified=qualified,
    )


def recover(xs: np.ndarray, r: RecoveryOperator) -> np.ndarray:
    """Interpolate a full signal from its samples."""
    xs = np.asarray(xs, dtype=complex)
    if xs.shape != (r.matrix.shape[1],):
        raise ValidationError(f"sample count {xs.shape} does not match {r.matrix.shape[1]}")
    return r.matrix @ xs


def nmse(x: np.ndarray, xr: np.ndarray) -> float:
    """Squared recovery error normalized by the reference signal energy."""
    x = np.asarray(x, dtype=complex)
    xr = np.asarray(xr, dtype=complex)
    ref = float(np.linalg.norm(x)) ** 2
    if ref == 0:
        raise ValidationError("undefined for zero reference signal")
    return float(np.linalg.norm(xr - x)) ** 2 / ref


def recoverability_margin(d: SamplingOperator, b: Limiter) -> float:
    """Largest singular value of (complement of S) @ B; below 1 certifies recovery."""
    if b.n != d.n:
        raise ValidationError("dimension mismatch")
    return float(np.linalg.svd(d.complement_projector() @ b.matrix, compute_uv=False)[0])


def sampled_adjacency(
    d: SamplingOperator, op: GlctOperator, spec: BandlimitSpec, lam_a: np.ndarray
) -> np.ndarray:
    """Shift matrix of the sampled signal space, similar to diag(first band eigenvalues).

    Requires a qualified square sampling set (|S| = band size); the result
    conjugates the band's shift eigenvalues by the sampled band rows.
    """
    if len(d.set) != spec.size:
        raise ValidationError("sampled shift requires |S| equal to the band size")
    sub = band_columns(op, spec)[list(d.set), :]
    if _numerical_rank(np.linalg.svd(sub, compute_uv=False)) != spec.size:
        raise ValidationError("sampling set is not qualified")
    lam_band = np.asarray(lam_a, dtype=complex)[list(spec.resolve(op.n))]
    # sub = P^{-1}, so P^{-1} diag(lam) P = sub @ diag(lam) @ sub^{-1}.
    return sub @ (lam_band[:, None] * np.linalg.inv(sub))


# ---------------------------------------------------------------------------
# Selection strategies.


def _objective(sub: np.ndarray, strategy: Strategy) -> tuple[int, float]:
    """Score a selected-row submatrix as (numerical rank, strategy value).

    Scores are compared lexicographically so rank growth always dominates
    while the selection is still rank-deficient; only nonzero singular
    values enter the strategy value. Minimizing strategies return negated
    values so that larger is always better.
    """
    s = np.linalg.svd(sub, compute_uv=False)
    rank = _numerical_rank(s)
    nz = s[:rank]
    if strategy is Strategy.MAX_SIG:
        value = float((s * s).sum())
    elif strategy in (Strategy.MAX_SIG_MIN, Strategy.MIN_PINV):
        value = float(nz[-1]) if rank else 0.0
    elif strategy is Strategy.MAX_VOL:
        value = float(2.0 * np.log(nz).sum()) if rank else -math.inf
    elif strategy is Strategy.MIN_FRO:
        value = -float((nz**-2.0).sum()) if rank else -math.inf
    else:
        raise ValidationError(f"{strategy.value} is not an optimizing strategy")
    return rank, value


def selection_objective(
    s: tuple[int, ...], op: GlctOperator, spec: BandlimitSpec, strategy: Strategy
) -> tuple[int, float]:
    """Objective of a full sampling set under a deterministic strategy."""
    return _objective(band_columns(op, spec)[list(s), :], strategy)


def greedy_select(
    strategy: Strategy,
    op: GlctOperator,
    spec: BandlimitSpec,
    m: int,
    seed: int | None = None,
    threads: int = 1,
) -> SamplingOperator:
    """Grow a sampling set one vertex at a time under the strategy score.

    Each step adds the vertex whose inclusion maximizes the score of the
    grown submatrix, with exact ties broken by the smallest vertex index.
    Candidate scoring may be spread over ``threads`` workers; the reduction
    is order-preserving so the result matches the serial run. RANDOM draws
    m vertices without replacement from the seeded generator instead.
    """
    n = op.n
    if not 1 <= m <= n:
        raise ValidationError(f"sample count must be in [1, {n}], got {m}")
    if strategy is Strategy.EXHAUSTIVE:
        raise ValidationError("exhaustive selection has its own entry point")
    if strategy is Strategy.RANDOM:
        rng = np.random.default_rng(seed)
        return SamplingOperator(tuple(int(i) for i in rng.choice(n, size=m, replace=False)), n)

    cols = band_columns(op, spec)
    chosen: list[int] = []
    remaining = list(range(n))

    def score_candidate(j: int) -> tuple[int, float]:
        return _objective(cols[chosen + [j], :], strategy)

    for _ in range(m):
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                scores = list(pool.map(score_candidate, remaining))
        else:
            scores = [score_candidate(j) for j in remaining]
        best = max(range(len(remaining)), key=lambda i: (scores[i], -remaining[i]))
        chosen.append(remaining.pop(best))
    return SamplingOperator(tuple(chosen), n)


def exhaustive_select(
    strategy: Strategy, op: GlctOperator, spec: BandlimitSpec, m: int
) -> SamplingOperator:
    """Exact optimizer over all vertex subsets of size m (small instances only)."""
    n = op.n
    if not 1 <= m <= n:
        raise ValidationError(f"sample count must be in [1, {n}], got {m}")
    if strategy not in DETERMINISTIC_STRATEGIES:
        raise ValidationError(f"{strategy.value} is not an optimizing strategy")
    if math.comb(n, m) > EXHAUSTIVE_LIMIT:
        raise ValidationError(
            f"C({n},{m}) exceeds the exhaustive guard of {EXHAUSTIVE_LIMIT}; use greedy_select"
        )
    cols = band_columns(op, spec)
    best_score: tuple[int, float] | None = None
    best_set: tuple[int, ...] | None = None
    for subset in combinations(range(n), m):
        score = _objective(cols[list(subset), :], strategy)
        if best_score is None or score > best_score:
            best_score, best_set = score, subset
    return SamplingOperator(best_set, n)
