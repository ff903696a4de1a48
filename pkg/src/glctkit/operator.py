"""The graph linear canonical transform operator and its building blocks.

The operator is assembled from a chain of eigendecompositions of the graph
shift matrix: decompose the adjacency A = V diag(lam_a) V^{-1}, decompose
the resulting spectral matrix V^{-1} = Q diag(lam) Q^H, repeat for the
scaled shift A / beta to obtain Q_beta, then compose a fractional power of
the spectral eigenvalues with a quadratic-phase (chirp) diagonal:

    forward = chirp(l, f) * (Q_beta @ diag(lam**alpha) @ Q^H)
    inverse = Q @ diag(lam**-alpha) @ Q_beta^H * conj(chirp(l, f))

With alpha = 1, beta = 1 and a zero chirp this degenerates to the plain
adjacency-spectrum Fourier matrix V^{-1}; fractional alpha alone gives the
fractional variant. For undirected graphs every factor is unitary, so the
forward map preserves the 2-norm and the inverse is exact.

Determinism: eigenvalues are sorted by descending real part with ties
broken by ascending imaginary part, and every eigenvector is rotated so
its largest-magnitude entry is real and positive. Identical inputs yield
bit-identical operators.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError, ValidationError

#: Condition-number ceiling above which an eigenvector matrix is rejected.
DIAGONALIZABILITY_LIMIT = 1e12


@dataclass(frozen=True)
class GlctParams:
    """Transform parameters: fractional order, scaling, and chirp slope/offset.

    The chirp diagonal entry at (1-based) index k is
    exp(j * (pi/2) * k * (chirp_l * k + chirp_f)).
    """

    alpha: float
    beta: float
    chirp_l: float = 0.0
    chirp_f: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "chirp_l", "chirp_f"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.beta <= 0:
            raise ValidationError(f"beta must be positive, got {self.beta}")


GFT_PARAMS = GlctParams(alpha=1.0, beta=1.0)


@dataclass(frozen=True)
class GlctMatrixParams:
    """Unimodular 2x2 parameter matrix [[a, b], [c, d]] with ad - bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise ValidationError(f"determinant must be 1 within 1e-12, got {det!r}")
        if self.a == 0.0 and self.b == 0.0:
            raise ValidationError("(a, b) must not both be zero")


def params_from_matrix(m: GlctMatrixParams) -> GlctParams:
    """Map the 2x2 matrix form to (alpha, beta, chirp) parameters.

    beta = sqrt(a^2 + b^2), alpha = atan2(b, a) in radians, and the scalar
    chirp coefficient (a c + b d) / (a^2 + b^2) is returned as chirp_f with
    chirp_l = 0.
    """
    beta = math.hypot(m.a, m.b)
    alpha = math.atan2(m.b, m.a)
    xi = (m.a * m.c + m.b * m.d) / (beta * beta)
    return GlctParams(alpha=alpha, beta=beta, chirp_l=0.0, chirp_f=xi)


@dataclass(frozen=True)
class SpectralBasis:
    """The eigendecomposition chain feeding the transform.

    V, lam_a   : eigenvectors/eigenvalues of the source shift matrix.
    Q, lam     : eigenvectors/eigenvalues of the spectral matrix V^{-1}.
    Q_beta     : eigenvectors of the scaled spectral matrix V_beta^{-1}.
    """

    V: np.ndarray
    lam_a: np.ndarray
    Q: np.ndarray
    lam: np.ndarray
    Q_beta: np.ndarray

    @property
    def n(self) -> int:
        return self.V.shape[0]

    def content_hash(self) -> str:
        """SHA-256 over the basis arrays, for provenance sidecars."""
        h = hashlib.sha256()
        for arr in (self.V, self.lam_a, self.Q, self.lam, self.Q_beta):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class GlctOperator:
    """Forward/inverse transform matrices plus the parameters that built them."""

    forward: np.ndarray
    inverse: np.ndarray
    params: GlctParams
    basis: SpectralBasis | None

    @property
    def n(self) -> int:
        return self.forward.shape[0]


def _sort_order(lam: np.ndarray) -> np.ndarray:
    # lexsort's last key is primary: descending real, then ascending imaginary.
    return np.lexsort((lam.imag, -lam.real))


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        i = int(np.argmax(np.abs(col)))
        pivot = col[i]
        out[:, j] = col * (abs(pivot) / pivot)
    return out


def _is_hermitian(a: np.ndarray) -> bool:
    return np.array_equal(a, a.conj().T)


def decompose_adjacency(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted, phase-fixed eigendecomposition of a shift matrix.

    Hermitian input goes through the symmetric solver and yields an exactly
    unitary eigenvector matrix. Otherwise the general solver is used and the
    eigenvector matrix is rejected when its condition number exceeds
    ``DIAGONALIZABILITY_LIMIT``.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("matrix must be square")
    if _is_hermitian(a):
        lam, vec = np.linalg.eigh(a)
        lam = lam.astype(complex)
        vec = vec.astype(complex)
    else:
        lam, vec = np.linalg.eig(a)
        vec = vec / np.linalg.norm(vec, axis=0)
        if np.linalg.cond(vec) > DIAGONALIZABILITY_LIMIT:
            raise NumericalError("adjacency not reliably diagonalizable")
    order = _sort_order(lam)
    return _fix_phases(vec[:, order]), lam[order]


def unitary_eig(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a spectral matrix, unitary whenever possible.

    Normal matrices (the undirected case, where V^{-1} is orthogonal) are
    routed through the complex Schur form, whose vectors are orthonormal to
    machine precision even across repeated eigenvalues. Non-normal input
    falls back to the general solver with the same conditioning guard as
    :func:`decompose_adjacency`.
    """
    w = np.asarray(w, dtype=complex)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValidationError("matrix must be square")
    scale = np.linalg.norm(w)
    gram_gap = np.linalg.norm(w @ w.conj().T - w.conj().T @ w)
    if scale == 0.0 or gram_gap <= 1e-12 * scale * scale:
        t, z = scipy.linalg.schur(w, output="complex")
        lam = np.diag(t).copy()
        # Off-diagonal mass beyond round-off means the normality test lied.
        if np.linalg.norm(t - np.diag(lam)) > 1e-10 * max(scale, 1.0):
            raise NumericalError("spectral matrix is not numerically normal")
        vec = z
    else:
        lam, vec = np.linalg.eig(w)
        vec = vec / np.linalg.norm(vec, axis=0)
        if np.linalg.cond(vec) > DIAGONALIZABILITY_LIMIT:
            raise NumericalError("spectral matrix not reliably diagonalizable")
    order = _sort_order(lam)
    return _fix_phases(vec[:, order]), lam[order]


def fractional_diag(lam: np.ndarray, alpha: float) -> np.ndarray:
    """Entries of diag(lam)**alpha under the principal logarithm.

    Each entry is exp(alpha * Log lam_i) with the argument taken in
    (-pi, pi]. A zero eigenvalue maps to 0 for alpha > 0 and is rejected
    otherwise.
    """
    lam = np.asarray(lam, dtype=complex)
    out = np.empty_like(lam)
    zero = lam == 0
    if np.any(zero):
        if alpha <= 0:
            raise NumericalError("zero eigenvalue not invertible")
        out[zero] = 0.0
    nz = ~zero
    out[nz] = np.exp(alpha * np.log(lam[nz]))
    return out


def chirp_diag(n: int, l: float, f: float) -> np.ndarray:
    """Entries of the quadratic-phase diagonal exp(j*(pi/2)*k*(l*k + f)).

    The index k runs 1..n, so a single entry at n = 1 with l = 0, f = 1
    equals exp(j*pi/2) = j. All entries have unit modulus.
    """
    if n < 1:
        raise ValidationError(f"size must be positive, got {n}")
    for name, val in (("l", l), ("f", f)):
        if not math.isfinite(val):
            raise ValidationError(f"chirp parameter {name} must be finite")
    k = np.arange(1, n + 1, dtype=float)
    return np.exp(1j * (np.pi / 2.0) * k * (l * k + f))


def _inverse_of(q: np.ndarray) -> np.ndarray:
    """Conjugate transpose when the factor is unitary, general inverse otherwise."""
    n = q.shape[0]
    qh = q.conj().T
    if np.linalg.norm(qh @ q - np.eye(n)) <= 1e-10 * n:
        return qh
    return np.linalg.inv(q)


def build_operator(a: np.ndarray, params: GlctParams) -> GlctOperator:
    """Assemble the forward and inverse transform for a shift matrix.

    ``a`` is normally the graph adjacency; passing the Laplacian instead
    yields the Laplacian-spectrum baseline used by the comparison
    experiments. The full decomposition chain is retained on the returned
    operator for downstream use (band definitions, sampled-shift spectra).
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    v, lam_a = decompose_adjacency(a)
    q, lam = unitary_eig(np.linalg.inv(v) if not _is_hermitian(a) else v.conj().T)
    v_b, _ = decompose_adjacency(a / params.beta)
    q_b, _ = unitary_eig(np.linalg.inv(v_b) if not _is_hermitian(a) else v_b.conj().T)

    chirp = chirp_diag(n, params.chirp_l, params.chirp_f)
    lam_alpha = fractional_diag(lam, params.alpha)
    lam_alpha_inv = fractional_diag(lam, -params.alpha)
    q_inv = _inverse_of(q)
    q_b_inv = _inverse_of(q_b)

    forward = chirp[:, None] * (q_b @ (lam_alpha[:, None] * q_inv))
    inverse = q @ (lam_alpha_inv[:, None] * (q_b_inv * np.conj(chirp)[None, :]))
    basis = SpectralBasis(V=v, lam_a=lam_a, Q=q, lam=lam, Q_beta=q_b)
    return GlctOperator(forward=forward, inverse=inverse, params=params, basis=basis)


def glct(op: GlctOperator, x: np.ndarray) -> np.ndarray:
    """Forward transform: spectral coefficients of a vertex-domain signal."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (op.n,):
        raise ValidationError(f"signal length {x.shape} does not match n={op.n}")
    return op.forward @ x


def iglct(op: GlctOperator, xhat: np.ndarray) -> np.ndarray:
    """Inverse transform: vertex-domain signal from spectral coefficients."""
    xhat = np.asarray(xhat, dtype=complex)
    if xhat.shape != (op.n,):
        raise ValidationError(f"spectrum length {xhat.shape} does not match n={op.n}")
    return op.inverse @ xhat


# ---------------------------------------------------------------------------
# Portable serialization: one CSV of complex entries per matrix plus a JSON
# sidecar recording parameters, the ordering convention, and a basis hash.

ORDERING_CONVENTION = "eigenvalues descending by real part, ties ascending by imaginary part"


def _write_matrix_csv(m: np.ndarray, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("row,col,real,imag\n")
        for i in range(m.shape[0]):
            for j in range(m.shape[1]):
                z = complex(m[i, j])
                fh.write(f"{i},{j},{z.real!r},{z.imag!r}\n")


def _read_matrix_csv(path: str) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "row,col,real,imag":
            raise ValidationError(f"expected header 'row,col,real,imag' in {path}")
        for line in fh:
            i, j, re, im = line.strip().split(",")
            rows.append((int(i), int(j), float(re), float(im)))
    n = 1 + max(r[0] for r in rows)
    m = 1 + max(r[1] for r in rows)
    out = np.zeros((n, m), dtype=complex)
    for i, j, re, im in rows:
        out[i, j] = complex(re, im)
    return out


def save_operator(op: GlctOperator, stem: str) -> None:
    """Write ``<stem>.forward.csv``, ``<stem>.inverse.csv`` and ``<stem>.json``."""
    _write_matrix_csv(op.forward, f"{stem}.forward.csv")
    _write_matrix_csv(op.inverse, f"{stem}.inverse.csv")
    sidecar = {
        "n": op.n,
        "params": {
            "alpha": op.params.alpha,
            "beta": op.params.beta,
            "chirp_l": op.params.chirp_l,
            "chirp_f": op.params.chirp_f,
        },
        "ordering": ORDERING_CONVENTION,
        "basis_hash": op.basis.content_hash() if op.basis is not None else None,
    }
    with open(f"{stem}.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_operator(stem: str) -> GlctOperator:
    """Reload a serialized operator; the basis chain is not reconstructed."""
    with open(f"{stem}.json", "r", encoding="utf-8") as fh:
        sidecar = json.load(fh)
    params = GlctParams(**sidecar["params"])
    forward = _read_matrix_csv(f"{stem}.forward.csv")
    inverse = _read_matrix_csv(f"{stem}.inverse.csv")
    if forward.shape != inverse.shape or forward.shape[0] != sidecar["n"]:
        raise ValidationError("serialized matrices disagree with sidecar dimensions")
    return GlctOperator(forward=forward, inverse=inverse, params=params, basis=None)
