"""Regularized linear-system classifier: solve (I + beta L_sym) u = f."""

import numpy as np

from tsgraphssl.errors import NumericalError, ParameterError
from tsgraphssl.solvers.common import check_label_vector, predict_labels


def conjugate_gradient(matvec, b, tol=1e-5, max_iters=None, x0=None):
    """Conjugate gradients for a symmetric positive definite operator.

    Stops when ``||b - A x|| <= tol * ||b||``. Raises NumericalError if
    ``max_iters`` (default ``10 * len(b)``) is exceeded.
    """
    b = np.asarray(b, dtype=np.float64)
    n = b.size
    max_iters = 10 * n if max_iters is None else max_iters
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    bnorm = np.linalg.norm(b)
    if bnorm == 0:
        return np.zeros(n), 0
    r = b - matvec(x)
    p = r.copy()
    rr = r @ r
    for it in range(max_iters + 1):
        if np.sqrt(rr) <= tol * bnorm:
            return x, it
        if it == max_iters:
            break
        ap = matvec(p)
        pap = p @ ap
        if pap <= 0:
            raise NumericalError("operator is not positive definite", iterations=it)
        alpha = rr / pap
        x += alpha * p
        r -= alpha * ap
        rr_new = r @ r
        p = r + (rr_new / rr) * p
        rr = rr_new
    raise NumericalError(
        f"CG did not reach relative residual {tol} in {max_iters} iterations",
        iterations=max_iters,
    )


def linear_system_solve(laplacian, f, beta=1.0, tol=1e-5):
    lap = np.asarray(getattr(laplacian, "matrix", laplacian), dtype=np.float64)
    f = check_label_vector(f, lap.shape[0])
    if beta < 0:
        raise ParameterError(f"beta must be nonnegative, got {beta}")
    u, _ = conjugate_gradient(lambda v: v + beta * (lap @ v), f, tol=tol)
    return u


def linear_system_classify(laplacian, f, beta=1.0, tol=1e-5):
    return predict_labels(linear_system_solve(laplacian, f, beta, tol))
