"""Eigencurve evaluation along the pencil H(mu) = A - mu*C.

`eig_at` gives the sorted eigenvalues at one mu.  `trace_curves` samples a
grid and matches curve indices across grid points by eigenvector overlap,
refining the grid adaptively near crossings, so that each matched curve is
a discrete sample of one analytic branch.  The derivative helpers implement
the closed-form first and second derivatives of a branch:

    lam'(mu)  = -x^H C x
    x'(mu)    = pinv(A - mu*C - lam*I) C x
    lam''(mu) = -2 Re(x^H C x'(mu))
"""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ContinuationAmbiguous, NotNormalized, NotSimple
from .kernels import hermitian_eig, pinv_apply

OVERLAP_FLOOR = 0.9
AMBIGUITY_TOL = 1e-8
STEP_FLOOR_FACTOR = 2.0 ** -20


@dataclass(frozen=True)
class CurvePoint:
    """Eigenvalues and eigenvectors of A - mu*C at one mu.

    values[i] and vectors[:, i] belong to curve i; after continuation
    matching the values are in curve order, not necessarily sorted.
    """

    mu: float
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class EigencurveGrid:
    points: list
    matched: bool
    min_overlap: float

    @property
    def mus(self):
        return np.array([p.mu for p in self.points])

    def curve(self, i):
        """Samples (mu_j, lambda_i(mu_j)) of curve i."""
        return self.mus, np.array([p.values[i] for p in self.points])


def eig_at(pair, mu):
    """Eigen-decompose A - mu*C; values descending."""
    mu = float(mu)
    if not np.isfinite(mu):
        raise ValueError("mu must be finite")
    w, v = hermitian_eig(pair.a - mu * pair.c, order="descending")
    return CurvePoint(mu=mu, values=w, vectors=v)


def _match(prev, point):
    """Permute and phase-fix `point` so column i continues curve i of `prev`.

    Greedy assignment on the overlap-magnitude matrix; returns the matched
    point and the smallest matched overlap.  Raises if two assignment
    choices are indistinguishable (caller decides after the step floor).
    """
    n = prev.values.shape[0]
    overlap = prev.vectors.conj().T @ point.vectors
    mag = np.abs(overlap)
    perm = np.full(n, -1)
    work = mag.copy()
    min_overlap = np.inf
    for _ in range(n):
        i, j = np.unravel_index(np.argmax(work), work.shape)
        best = work[i, j]
        row = work[i, :].copy()
        row[j] = -np.inf
        second = np.max(row)
        if second > -np.inf and best - second < AMBIGUITY_TOL and best < OVERLAP_FLOOR:
            raise ContinuationAmbiguous(
                "overlap choices %.3e and %.3e indistinguishable at mu=%r" % (best, second, point.mu)
            )
        perm[i] = j
        min_overlap = min(min_overlap, best)
        work[i, :] = -np.inf
        work[:, j] = -np.inf
    values = point.values[perm]
    vectors = point.vectors[:, perm].copy()
    for i in range(n):
        ov = overlap[i, perm[i]]
        if abs(ov) > 0:
            vectors[:, i] *= ov.conj() / abs(ov)
    return CurvePoint(point.mu, values, vectors), float(min_overlap)


def _refine(pair, left, right, step_floor, out, overlaps):
    """Append matched points on (left.mu, right.mu] to `out`."""
    matched, ov = _try_match(left, right, step_floor)
    if ov >= OVERLAP_FLOOR or right.mu - left.mu <= step_floor:
        out.append(matched)
        overlaps.append(ov)
        return
    mid = eig_at(pair, 0.5 * (left.mu + right.mu))
    _refine(pair, left, mid, step_floor, out, overlaps)
    _refine(pair, out[-1], right, step_floor, out, overlaps)


def _try_match(left, right, step_floor):
    try:
        return _match(left, right)
    except ContinuationAmbiguous:
        if right.mu - left.mu <= step_floor:
            raise
        # force refinement by reporting a failing overlap
        return right, -np.inf


def trace_curves(pair, mu_lo, mu_hi, n_grid):
    """Sample and continuation-match the eigencurves on [mu_lo, mu_hi].

    Grid points where consecutive eigenvector overlaps fall below the
    overlap floor are bisected down to a relative step floor of 2^-20.
    """
    if not mu_lo < mu_hi:
        raise ValueError("need mu_lo < mu_hi")
    if n_grid < 2:
        raise ValueError("need n_grid >= 2")
    mus = np.linspace(mu_lo, mu_hi, n_grid)
    step_floor = (mu_hi - mu_lo) * STEP_FLOOR_FACTOR
    points = [eig_at(pair, mus[0])]
    overlaps = []
    for mu in mus[1:]:
        _refine(pair, points[-1], eig_at(pair, mu), step_floor, points, overlaps)
    return EigencurveGrid(
        points=points,
        matched=True,
        min_overlap=float(min(overlaps)) if overlaps else 1.0,
    )


def lambda_prime(pair, x):
    """Slope of the eigencurve through the eigenvector x: -x^H C x."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(x) - 1.0) > 1e-8:
        raise NotNormalized("eigenvector norm %.6f is not 1" % np.linalg.norm(x))
    q = np.vdot(x, pair.c @ x)
    assert abs(q.imag) <= 1e-12 * (1.0 + pair.norm_c)
    return -float(q.real)


def _check_simple(pair, mu, lam, tol_mult=None):
    if tol_mult is None:
        tol_mult = max(1e-8, 1e-12 * (pair.norm_a + abs(mu) * pair.norm_c))
    w, _ = hermitian_eig(pair.a - mu * pair.c)
    k = int(np.count_nonzero(np.abs(w - lam) <= tol_mult))
    if k != 1:
        raise NotSimple("eigenvalue %r has multiplicity %d at mu=%r" % (lam, k, mu))


def eigvec_derivative(pair, mu, lam, x, rank_tol=1e-8):
    """Derivative of the analytic eigenvector branch at a simple eigenpair."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    _check_simple(pair, mu, lam)
    xp = pinv_apply(pair.shifted(mu, lam), pair.c @ x, rank_tol=rank_tol)
    return xp


def lambda_double_prime(pair, mu, lam, x):
    """Curvature of the eigencurve at a simple eigenpair: -2 Re(x^H C x')."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    xp = eigvec_derivative(pair, mu, lam, x)
    q = np.vdot(x, pair.c @ xp)
    assert abs(q.imag) <= 1e-10 * (1.0 + pair.norm_c) * (1.0 + np.linalg.norm(xp))
    return -2.0 * float(q.real)


def export_grid_csv(grid, path, with_vectors=False):
    """Write the grid as rows of (mu, curve_index, lambda[, vector parts])."""
    n = grid.points[0].values.shape[0] if grid.points else 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["mu", "curve_index", "lambda"]
        if with_vectors:
            header += ["x%d_re" % i for i in range(n)] + ["x%d_im" % i for i in range(n)]
        writer.writerow(header)
        for p in grid.points:
            for i in range(n):
                row = [repr(p.mu), i, repr(float(p.values[i]))]
                if with_vectors:
                    row += [repr(float(z.real)) for z in p.vectors[:, i]]
                    row += [repr(float(z.imag)) for z in p.vectors[:, i]]
                writer.writerow(row)
