"""Laplacian eigenbasis, graph Fourier transform, bandlimited synthesis."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

_DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class SpectralBasis:
    """Eigendecomposition of a graph Laplacian.

    eigenvalues are sorted ascending; column k of eigenvectors pairs with
    eigenvalue k. Signs are fixed so each column's largest-magnitude entry
    (lowest index on ties) is nonnegative, making output reproducible.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvectors.shape[0]


def eigendecompose(L: np.ndarray) -> SpectralBasis:
    """Full symmetric eigendecomposition with the deterministic sign convention."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {L.shape}")
    if not np.allclose(L, L.T, atol=1e-10):
        raise ValueError("Laplacian must be symmetric")
    w, V = np.linalg.eigh(L)
    # fix signs: largest-|entry| of each column nonnegative
    pivot = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivot, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    V = V * signs
    w = w.copy()
    w.flags.writeable = False
    V.flags.writeable = False
    return SpectralBasis(eigenvalues=w, eigenvectors=V)


def gft(basis: SpectralBasis, f: np.ndarray) -> np.ndarray:
    """Forward graph Fourier transform: coefficients V^T f."""
    f = np.asarray(f, dtype=float)
    if f.shape != (basis.n,):
        raise ValueError(f"signal length {f.shape} does not match n={basis.n}")
    return basis.eigenvectors.T @ f


def igft(basis: SpectralBasis, coeffs: np.ndarray) -> np.ndarray:
    """Inverse graph Fourier transform: signal V coeffs."""
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.n,):
        raise ValueError(
            f"coefficient length {coeffs.shape} does not match n={basis.n}"
        )
    return basis.eigenvectors @ coeffs


def synthesize_bandlimited(basis: SpectralBasis, coeffs: np.ndarray) -> np.ndarray:
    """Signal with the given low-frequency coefficients: f = V_K coeffs.

    Bandwidth is len(coeffs); the resulting GFT vanishes at indices >= K.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    k = coeffs.shape[0]
    if not 1 <= k <= basis.n:
        raise ValueError(f"bandwidth {k} out of range [1, {basis.n}]")
    return basis.eigenvectors[:, :k] @ coeffs


def design_rows(basis: SpectralBasis, k: int) -> np.ndarray:
    """The N x K matrix whose row i is node i's row of the first K eigenvectors.

    Warns when eigenvalues K-1 and K coincide: the low-frequency subspace is
    then not unique and designs may differ across eigensolvers.
    """
    if not 1 <= k <= basis.n:
        raise ValueError(f"bandwidth {k} out of range [1, {basis.n}]")
    w = basis.eigenvalues
    if k < basis.n and abs(w[k] - w[k - 1]) <= _DEGENERACY_TOL:
        warnings.warn(
            f"eigenvalue {k - 1} and {k} coincide within {_DEGENERACY_TOL}; "
            "the bandlimited subspace is not unique",
            stacklevel=2,
        )
    return basis.eigenvectors[:, :k].copy()
