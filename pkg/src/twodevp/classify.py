"""Multiplicity detection and the singular/nonsingular taxonomy.

A candidate (mu, lam) is classified by the multiplicity k of lam as an
eigenvalue of A - mu*C:

  k = 1: nonsingular iff the eigencurve curvature lam'' is nonzero,
  k = 2: nonsingular iff V^H C V on the cluster eigenbasis is indefinite,
  k >= 3: always singular.

The borderline cases (curvature or cluster eigenvalues within tolerance of
zero) are conservatively classified singular.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import curves
from .errors import NoIsotropicVector, NotAnEigenvalue
from .kernels import hermitian_eig
from .model import Triplet, jacobian


class Kind(Enum):
    NONSINGULAR_SIMPLE = "NonsingularSimple"
    NONSINGULAR_MULTIPLE = "NonsingularMultiple"
    SINGULAR = "Singular"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    multiplicity: int
    lambda_double_prime: float  # simple branch evidence, else nan
    cluster_c_eigs: np.ndarray  # multiple branch evidence, else empty
    sigma_min_j: float


@dataclass(frozen=True)
class EigvecSet:
    """The set of unit 2D-eigenvectors at a nonsingular (mu, lam).

    Simple: all unit-phase multiples of x.  Multiple: all vectors
    g1*t*v1 + g2*s*v2 with |g1| = |g2| = 1, where (v1, v2) are the columns
    of v and (t, s) are fixed mixing weights from the cluster form of C.
    """

    kind: Kind
    x: np.ndarray = None       # simple representative
    v: np.ndarray = None       # n x 2 orthonormal, multiple case
    t: float = None
    s: float = None
    c1: float = None
    c2: float = None

    def representative(self):
        """One concrete unit 2D-eigenvector from the set."""
        if self.kind is Kind.NONSINGULAR_SIMPLE:
            return self.x
        return self.t * self.v[:, 0] + self.s * self.v[:, 1]


def default_tol_mult(pair, mu):
    return max(1e-8, 1e-12 * (pair.norm_a + abs(mu) * pair.norm_c))


def default_tol_sing(pair):
    return 1e-8 * (1.0 + pair.norm_c)


def fix_phase(x):
    """Rotate so the largest-magnitude entry is real positive."""
    i = int(np.argmax(np.abs(x)))
    z = x[i]
    if abs(z) == 0:
        return x
    return x * (z.conj() / abs(z))


def multiplicity(pair, mu, lam, tol_mult=None):
    """Count eigenvalues of A - mu*C within tol_mult of lam.

    Returns (k, eigbasis) where eigbasis is an n x k orthonormal basis of
    the cluster eigenspace (k may be 0).
    """
    if tol_mult is None:
        tol_mult = default_tol_mult(pair, mu)
    w, v = hermitian_eig(pair.a - mu * pair.c)
    sel = np.abs(w - lam) <= tol_mult
    return int(np.count_nonzero(sel)), v[:, sel]


def _diagonalize_cluster_c(pair, basis):
    """Rotate a cluster basis so basis^H C basis is diagonal, c1 >= c2 >= ..."""
    m = basis.conj().T @ pair.c @ basis
    e, s = hermitian_eig(m, order="descending")
    return basis @ s, e


def classify(pair, mu, lam, tol_mult=None, tol_sing=None):
    """Classify the candidate 2D-eigenvalue (mu, lam)."""
    if tol_sing is None:
        tol_sing = default_tol_sing(pair)
    k, basis = multiplicity(pair, mu, lam, tol_mult)
    if k == 0:
        raise NotAnEigenvalue("no eigenvalue of A - mu*C near lambda=%r at mu=%r" % (lam, mu))

    ldp = float("nan")
    c_eigs = np.array([])
    if k == 1:
        x = fix_phase(basis[:, 0])
        iso = np.real(np.vdot(x, pair.c @ x))
        if abs(iso) > tol_sing:
            raise NoIsotropicVector(
                "x^H C x = %.3e: the simple eigenvector is not isotropic" % iso
            )
        ldp = curves.lambda_double_prime(pair, mu, lam, x)
        kind = Kind.NONSINGULAR_SIMPLE if abs(ldp) > tol_sing else Kind.SINGULAR
        rep = x
    elif k == 2:
        v, c_eigs = _diagonalize_cluster_c(pair, basis)
        if c_eigs[0] > tol_sing and c_eigs[1] < -tol_sing:
            kind = Kind.NONSINGULAR_MULTIPLE
        else:
            kind = Kind.SINGULAR
        rep = _cluster_representative(v, c_eigs)
    else:
        v, c_eigs = _diagonalize_cluster_c(pair, basis)
        kind = Kind.SINGULAR
        rep = _cluster_representative(v, c_eigs)

    if rep is not None:
        j = jacobian(pair, Triplet(mu, lam, rep))
        sigma_min_j = float(np.linalg.svd(j, compute_uv=False)[-1])
    else:
        sigma_min_j = float("nan")
    return Classification(
        kind=kind,
        multiplicity=k,
        lambda_double_prime=ldp,
        cluster_c_eigs=c_eigs,
        sigma_min_j=sigma_min_j,
    )


def _cluster_representative(v, c_eigs):
    """An isotropic unit vector in the cluster span, if one exists."""
    c1, c2 = c_eigs[0], c_eigs[-1]
    if not (c1 > 0 > c2):
        return None
    t = np.sqrt(-c2 / (c1 - c2))
    s = np.sqrt(c1 / (c1 - c2))
    return t * v[:, 0] + s * v[:, -1]


def eigvec_set(pair, mu, lam, tol_mult=None, tol_sing=None):
    """The structured set of 2D-eigenvectors at a nonsingular (mu, lam)."""
    cls = classify(pair, mu, lam, tol_mult, tol_sing)
    k, basis = multiplicity(pair, mu, lam, tol_mult)
    if cls.kind is Kind.NONSINGULAR_SIMPLE:
        return EigvecSet(kind=cls.kind, x=fix_phase(basis[:, 0]))
    if cls.kind is Kind.NONSINGULAR_MULTIPLE:
        v, c_eigs = _diagonalize_cluster_c(pair, basis)
        c1, c2 = float(c_eigs[0]), float(c_eigs[1])
        return EigvecSet(
            kind=cls.kind,
            v=v,
            t=float(np.sqrt(-c2 / (c1 - c2))),
            s=float(np.sqrt(c1 / (c1 - c2))),
            c1=c1,
            c2=c2,
        )
    raise NoIsotropicVector("eigvec_set is defined only for nonsingular classifications")
