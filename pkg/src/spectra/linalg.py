"""Symmetric eigenvalue kernels for the diagonalization engine.

Thin, contract-checked wrappers around LAPACK (via numpy/scipy): symmetric
tridiagonal eigensolver, Cholesky factorization, and the generalized
symmetric-definite solver via Cholesky reduction.  The contract is the set of
residual/orthogonality invariants exercised in the tests, not the identity of
the underlying algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, eigh_tridiagonal


class NotPositiveDefiniteError(ValueError):
    """Cholesky/generalized solve on a matrix that is not positive definite."""


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix stored as diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)
        if d.ndim != 1 or e.ndim != 1 or len(e) != max(len(d) - 1, 0):
            raise ValueError(f"bad tridiagonal shape: diag {d.shape}, offdiag {e.shape}")
        if not (np.isfinite(d).all() and np.isfinite(e).all()):
            raise ValueError("tridiagonal entries must be finite")

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if len(self.offdiag):
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return m


@dataclass(frozen=True)
class SymDense:
    """Dense symmetric matrix; the upper triangle is mirrored on build."""

    mat: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.mat, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        upper = np.triu(a)
        object.__setattr__(self, "mat", upper + np.triu(a, 1).T)

    @property
    def n(self) -> int:
        return self.mat.shape[0]


@dataclass(frozen=True)
class EigenPairs:
    """Ascending eigenvalues with (S-)orthonormal column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


def _as_dense(m: SymDense | SymTridiag) -> np.ndarray:
    return m.to_dense() if isinstance(m, SymTridiag) else m.mat


def tridiag_eigen(t: SymTridiag) -> EigenPairs:
    """All eigenpairs of a symmetric tridiagonal matrix, values ascending."""
    if t.n < 1:
        raise ValueError("matrix must have at least one row")
    w, v = eigh_tridiagonal(t.diag, t.offdiag)
    return EigenPairs(w, v)


def cholesky(s: SymDense | SymTridiag) -> np.ndarray:
    """Lower-triangular L with L @ L.T = S; raises if S is not positive definite."""
    try:
        return np.linalg.cholesky(_as_dense(s))
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc


def generalized_eigen(h: SymDense, s: SymDense | SymTridiag) -> EigenPairs:
    """Solve H c = E S c for symmetric H and positive-definite S.

    Returns ascending eigenvalues and S-orthonormal vectors (c.T @ S @ c = I).
    """
    hd = _as_dense(h) if isinstance(h, (SymDense, SymTridiag)) else np.asarray(h)
    sd = _as_dense(s)
    if hd.shape != sd.shape:
        raise ValueError(f"dimension mismatch: H {hd.shape} vs S {sd.shape}")
    # scipy validates positive definiteness internally via Cholesky
    cholesky(s)
    w, v = eigh(hd, sd)
    return EigenPairs(w, v)
