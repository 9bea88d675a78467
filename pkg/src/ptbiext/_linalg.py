"""Small dense linear-algebra helpers with one global rank tolerance."""

import numpy as np

# relative to the largest singular value
RANK_TOL = 1e-9


def numerical_rank(a, tol=RANK_TOL):
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def orth(a, tol=RANK_TOL):
    """Orthonormal basis (as columns) of the column space of ``a``."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] == 0:
        return np.zeros((n, 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((n, 0), dtype=complex)
    k = int(np.count_nonzero(s > tol * s[0]))
    return u[:, :k]


def null_space(a, n=None, tol=RANK_TOL):
    """Orthonormal basis (as columns) of ``{z : a @ z = 0}``.

    ``n`` gives the ambient dimension when ``a`` has no rows.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] == 0:
        if n is None:
            n = a.shape[-1]
        return np.eye(n, dtype=complex)
    n = a.shape[1]
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n, dtype=complex)
    k = int(np.count_nonzero(s > tol * s[0]))
    return vh[k:].conj().T


def singular_values(a):
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return np.linalg.svd(a, compute_uv=False)
