"""Concentration trade-off region between vertex and spectral localization.

For a unit signal x, its concentration pair is (zeta, eta) with
zeta = ||D x|| and eta = ||B x||, where D and B are vertex and spectral
limiters. Achievable pairs are constrained by four arccos inequalities
whose right-hand sides are the largest eigenvalues of the corner operators
B D B, B Dbar B, Bbar D Bbar and Bbar Dbar Bbar (bars are complements).
Setting an inequality to equality gives the boundary curve at one corner
of the unit square.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .localization import Limiter, joint_lambda_max

CORNERS = ("UR", "UL", "LR", "LL")


@dataclass(frozen=True)
class ConcentrationPair:
    """Energy fractions (zeta, eta) captured by the vertex and spectral sets."""

    zeta: float
    eta: float

    def __post_init__(self):
        for name, v in (("zeta", self.zeta), ("eta", self.eta)):
            if not -1e-9 <= v <= 1.0 + 1e-9:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class CornerLambdas:
    """Largest eigenvalues of the four corner operators, each in [0, 1]."""

    lam_bdb: float
    lam_bdbarb: float
    lam_bbardbbar: float
    lam_all_bar: float

    def __post_init__(self):
        for name in ("lam_bdb", "lam_bdbarb", "lam_bbardbbar", "lam_all_bar"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")


def concentration_pair(x: np.ndarray, d: Limiter, b: Limiter) -> ConcentrationPair:
    """Measured energy fractions of x on the vertex set and the band."""
    x = np.asarray(x, dtype=complex)
    norm = float(np.linalg.norm(x))
    if norm == 0:
        raise ValidationError("undefined for zero signal")
    zeta = float(np.linalg.norm(d.matrix @ x)) / norm
    eta = float(np.linalg.norm(b.matrix @ x)) / norm
    return ConcentrationPair(zeta=min(zeta, 1.0), eta=min(eta, 1.0))


def _complement(lim: Limiter) -> Limiter:
    eye = np.eye(lim.n, dtype=complex)
    return Limiter(matrix=eye - lim.matrix, kind=lim.kind)


def corner_lambdas(d: Limiter, b: Limiter) -> CornerLambdas:
    """The four corner eigenvalues for a vertex limiter d and band limiter b."""
    if d.n != b.n:
        raise ValidationError("limiter dimensions differ")
    dbar = _complement(d)
    bbar = _complement(b)
    return CornerLambdas(
        lam_bdb=joint_lambda_max(b, d),
        lam_bdbarb=joint_lambda_max(b, dbar),
        lam_bbardbbar=joint_lambda_max(bbar, d),
        lam_all_bar=joint_lambda_max(bbar, dbar),
    )


def _acos(v: float) -> float:
    return math.acos(min(1.0, max(-1.0, v)))


def admissible(pair: ConcentrationPair, c: CornerLambdas, tol: float = 1e-9) -> bool:
    """Whether the pair satisfies all four corner inequalities with slack >= -tol."""
    zeta, eta = pair.zeta, pair.eta
    zbar = math.sqrt(max(0.0, 1.0 - zeta * zeta))
    ebar = math.sqrt(max(0.0, 1.0 - eta * eta))
    checks = (
        _acos(zeta) + _acos(eta) - _acos(math.sqrt(c.lam_bdb)),
        _acos(zbar) + _acos(eta) - _acos(math.sqrt(c.lam_bdbarb)),
        _acos(zeta) + _acos(ebar) - _acos(math.sqrt(c.lam_bbardbbar)),
        _acos(zbar) + _acos(ebar) - _acos(math.sqrt(c.lam_all_bar)),
    )
    return all(slack >= -tol for slack in checks)


def lemma2_upper_bound(zeta: float, lam_max: float) -> float:
    """Upper-right bound eta <= zeta*sqrt(lam) + sqrt((1 - zeta^2)(1 - lam))."""
    if not 0.0 <= zeta <= 1.0:
        raise ValidationError(f"zeta must lie in [0, 1], got {zeta}")
    if not 0.0 <= lam_max <= 1.0:
        raise ValidationError(f"lam_max must lie in [0, 1], got {lam_max}")
    return zeta * math.sqrt(lam_max) + math.sqrt((1.0 - zeta * zeta) * (1.0 - lam_max))


def boundary_curve(corner: str, c: CornerLambdas, grid: int) -> np.ndarray:
    """Equality curve of one corner inequality, sampled at ``grid`` points.

    Returns an array of (zeta, eta) samples spanning the corner's zeta
    range. When the corner eigenvalue is 1 the curve degenerates to the
    corner point itself.
    """
    if corner not in CORNERS:
        raise ValidationError(f"corner must be one of {CORNERS}, got {corner!r}")
    if grid < 2:
        raise ValidationError(f"grid must be at least 2, got {grid}")

    def bound(z: np.ndarray, lam: float) -> np.ndarray:
        return z * math.sqrt(lam) + np.sqrt(np.clip(1.0 - z * z, 0.0, None) * (1.0 - lam))

    if corner == "UR":
        lam = c.lam_bdb
        zeta = np.linspace(math.sqrt(lam), 1.0, grid)
        eta = bound(zeta, lam)
    elif corner == "UL":
        lam = c.lam_bdbarb
        zeta = np.linspace(0.0, math.sqrt(1.0 - lam), grid)
        eta = bound(np.sqrt(np.clip(1.0 - zeta * zeta, 0.0, None)), lam)
    elif corner == "LR":
        lam = c.lam_bbardbbar
        zeta = np.linspace(math.sqrt(lam), 1.0, grid)
        ebar = bound(zeta, lam)
        eta = np.sqrt(np.clip(1.0 - ebar * ebar, 0.0, None))
    else:  # LL
        lam = c.lam_all_bar
        zeta = np.linspace(0.0, math.sqrt(1.0 - lam), grid)
        ebar = bound(np.sqrt(np.clip(1.0 - zeta * zeta, 0.0, None)), lam)
        eta = np.sqrt(np.clip(1.0 - ebar * ebar, 0.0, None))
    return np.column_stack((zeta, np.clip(eta, 0.0, 1.0)))


def write_region_csv(c: CornerLambdas, grid: int, path: str) -> None:
    """Write all four boundary curves as CSV rows ``zeta,eta,corner``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["zeta", "eta", "corner"])
        for corner in CORNERS:
            for zeta, eta in boundary_curve(corner, c, grid):
                writer.writerow([repr(float(zeta)), repr(float(eta)), corner])
