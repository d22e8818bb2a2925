"""Canonical angles between subspaces and distances to eigenvector sets."""

import numpy as np

from .classify import Kind
from .errors import NotOrthonormal


def _check_orthonormal(m, name):
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    dev = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[1]), 2)
    if dev > 1e-10:
        raise NotOrthonormal("%s deviates from orthonormality by %.3e" % (name, dev))
    return m


def canonical_angles(x, y):
    """Principal angles (ascending, in [0, pi/2]) between two spans.

    Computed as arccos of the singular values of Y^H X.
    """
    x = _check_orthonormal(x, "X")
    y = _check_orthonormal(y, "Y")
    sigma = np.linalg.svd(y.conj().T @ x, compute_uv=False)
    cos = np.clip(sigma, 0.0, 1.0)
    return np.sort(np.arccos(cos))


def sin_theta_norm(x, y):
    """Spectral-norm subspace distance: sin of the largest canonical angle."""
    return float(np.sin(canonical_angles(x, y)[-1]))


def dist_to_set(x, s):
    """Distance from a unit vector to a structured 2D-eigenvector set.

    Simple set {g*x_* : |g|=1}: the minimum sqrt(2 - 2|x_*^H x|) is
    attained at the aligning phase g = sign(x_*^H x).  Multiple set
    {g1*t*v1 + g2*s*v2}: the two phases optimize independently,
    g_i = sign(v_i^H x).  The difference vector is formed explicitly
    instead of using the 2 - 2|overlap| form, which loses half the digits
    to cancellation near the set.
    """
    x = np.asarray(x, dtype=complex).reshape(-1)
    if s.kind is Kind.NONSINGULAR_SIMPLE:
        return float(np.linalg.norm(x - _phase(np.vdot(s.x, x)) * s.x))
    y = s.t * _phase(np.vdot(s.v[:, 0], x)) * s.v[:, 0] \
        + s.s * _phase(np.vdot(s.v[:, 1], x)) * s.v[:, 1]
    return float(np.linalg.norm(x - y))


def _phase(z):
    return z / abs(z) if abs(z) > 0 else 1.0
