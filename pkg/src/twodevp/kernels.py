"""Dense complex linear-algebra kernels used by every other module.

All matrices are numpy arrays of dtype complex128.  The functions here add
input validation and the conventions the rest of the package relies on
(descending eigenvalue order, spectral truncation of the pseudoinverse)
on top of LAPACK via numpy.linalg.
"""

import numpy as np

from .errors import NoConvergence, NotHermitian, RankDeficient


def as_matrix(m):
    """Coerce input to a finite complex 2-d array."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array, got ndim=%d" % m.ndim)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def herm_tol(m):
    """Symmetry tolerance scaled to the largest entry."""
    return 1e-12 * (1.0 + np.max(np.abs(m), initial=0.0))


def check_hermitian(m):
    """Validate Hermitian symmetry and return the symmetrized matrix.

    Symmetrizing as (M + M^H)/2 removes representation noise once the
    tolerance check has passed.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian("matrix is %dx%d, not square" % m.shape)
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > herm_tol(m):
        raise NotHermitian("asymmetry %.3e exceeds tolerance %.3e" % (dev, herm_tol(m)))
    return 0.5 * (m + m.conj().T)


def hermitian_eig(m, order="descending"):
    """Eigendecomposition of a Hermitian matrix.

    Returns (values, vectors) with values sorted per `order` and vectors
    as the matching columns.
    """
    m = check_hermitian(m)
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc))
    if order == "descending":
        w = w[::-1]
        v = v[:, ::-1]
    elif order != "ascending":
        raise ValueError("order must be 'ascending' or 'descending'")
    return w, v


def thin_svd(m):
    """Thin SVD with singular values in descending order.

    Returns (u, s, v) such that m ~= u @ diag(s) @ v.conj().T.
    """
    m = as_matrix(m)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc))
    return u, s, vh.conj().T


def orthonormalize(m):
    """Orthonormal basis for the column span of a full-column-rank matrix."""
    m = as_matrix(m)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    scale = s[0] if s.size else 0.0
    if s.size == 0 or s[-1] <= 1e-10 * scale:
        raise RankDeficient("smallest singular value %.3e below rank tolerance" % (s[-1] if s.size else 0.0))
    return u


def pinv_apply(m, b, rank_tol=None):
    """Apply the Moore-Penrose pseudoinverse of a Hermitian matrix to b.

    Works spectrally: eigencomponents whose eigenvalue magnitude is below
    rank_tol * max|eigenvalue| are treated as null and zeroed.  Default
    rank_tol is n * machine epsilon.
    """
    m = check_hermitian(m)
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.shape[0] != m.shape[0]:
        raise ValueError("vector length %d does not match matrix size %d" % (b.shape[0], m.shape[0]))
    if rank_tol is None:
        rank_tol = m.shape[0] * np.finfo(float).eps
    if rank_tol < 0:
        raise ValueError("rank_tol must be nonnegative")
    w, v = hermitian_eig(m)
    cutoff = rank_tol * np.max(np.abs(w), initial=0.0)
    coeff = v.conj().T @ b
    inv = np.zeros_like(w)
    keep = np.abs(w) > cutoff
    inv[keep] = 1.0 / w[keep]
    return v @ (inv * coeff)


def spectral_norm(m):
    return float(np.linalg.norm(as_matrix(m), 2))
