"""Smallest eigenpairs of the normalized graph Laplacian."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from tsgraphssl.errors import NumericalError, ParameterError


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def m_e(self):
        return self.eigenvalues.size

    @property
    def n(self):
        return self.eigenvectors.shape[0]


def _fix_signs(vecs):
    pivot = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[pivot, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def smallest_eigenpairs(laplacian, m_e=20, method="dense"):
    """Return the ``m_e`` algebraically smallest eigenpairs.

    ``method="dense"`` runs LAPACK on the full matrix and is the default for
    the problem sizes here. ``method="lanczos"`` uses ARPACK in shift-invert
    mode around a point just below zero. Each eigenvector is signed so that its
    largest-magnitude entry is positive.
    """
    a = np.asarray(getattr(laplacian, "matrix", laplacian), dtype=np.float64)
    n = a.shape[0]
    m_e = int(m_e)
    if not 1 <= m_e <= n:
        raise ParameterError(f"m_e must lie in [1, n] = [1, {n}], got {m_e}")
    if method == "dense":
        try:
            vals, vecs = scipy.linalg.eigh(a, subset_by_index=[0, m_e - 1])
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"dense eigensolver failed: {exc}") from exc
    elif method == "lanczos":
        if m_e >= n - 1:
            return smallest_eigenpairs(a, m_e, method="dense")
        maxiter = 100 * n
        try:
            vals, vecs = scipy.sparse.linalg.eigsh(
                a, k=m_e, sigma=-1e-3, which="LM", maxiter=maxiter, tol=1e-12
            )
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise NumericalError("Lanczos iteration did not converge", iterations=maxiter) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        # re-orthonormalize within clusters of nearly equal eigenvalues
        vecs, _ = np.linalg.qr(vecs)
        vals = np.einsum("ij,ij->j", vecs, a @ vecs)
    else:
        raise ParameterError(f"unknown eigensolver method {method!r}")
    return SpectralBasis(np.asarray(vals), _fix_signs(np.asarray(vecs)))
