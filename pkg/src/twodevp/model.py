"""Problem and candidate-solution data model.

A problem instance is a Hermitian pair (A, C) with C indefinite.  A
candidate solution is a triplet (mu, lam, x) of two real scalars and a
complex vector.  This module owns the nonlinear residual map

    F(mu, lam, x) = [ (A - mu*C - lam*I) x ;  -x^H C x / 2 ;  (1 - x^H x)/2 ]

whose roots are the solutions of the two-parameter problem, its bordered
(n+2) x (n+2) Jacobian, and JSON file I/O for pairs and triplets.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotIndefinite, ParseError
from .kernels import check_hermitian, hermitian_eig, spectral_norm


@dataclass(frozen=True)
class HermitianPair:
    """A Hermitian pair (A, C) with C indefinite."""

    a: np.ndarray
    c: np.ndarray
    n: int = field(init=False)
    norm_a: float = field(init=False)
    norm_c: float = field(init=False)

    def __post_init__(self):
        a = check_hermitian(self.a)
        c = check_hermitian(self.c)
        if a.shape != c.shape:
            raise DimensionMismatch("A is %dx%d but C is %dx%d" % (a.shape + c.shape))
        w, _ = hermitian_eig(c)
        thr = 1e-12 * max(np.max(np.abs(w), initial=0.0), 1e-300)
        if not (w[0] > thr and w[-1] < -thr):
            raise NotIndefinite("C must have both positive and negative eigenvalues")
        a.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "n", a.shape[0])
        object.__setattr__(self, "norm_a", spectral_norm(a))
        object.__setattr__(self, "norm_c", spectral_norm(c))

    def shifted(self, mu, lam):
        """The Hermitian matrix A - mu*C - lam*I."""
        return self.a - mu * self.c - lam * np.eye(self.n)

    def scale(self, mu, lam):
        """Natural residual scale at (mu, lam)."""
        return self.norm_a + abs(mu) * self.norm_c + abs(lam) + 1.0


@dataclass(frozen=True)
class Triplet:
    """Candidate solution (mu, lam, x) with x a complex n-vector."""

    mu: float
    lam: float
    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex).reshape(-1).copy()
        x.setflags(write=False)
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "x", x)

    @classmethod
    def normalized(cls, mu, lam, x):
        x = np.asarray(x, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(x)
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(mu, lam, x / nrm)


@dataclass(frozen=True)
class ResidualReport:
    """Stacked residual vector and its norm, with per-block norms."""

    f: np.ndarray
    norm: float
    norm_eig: float     # |(A - mu*C - lam*I) x|
    norm_isotropy: float  # |x^H C x| / 2
    norm_unit: float      # |1 - x^H x| / 2


def residual(pair, t):
    """Evaluate the nonlinear residual F at a triplet."""
    if t.x.shape[0] != pair.n:
        raise DimensionMismatch("triplet has length %d, pair has n=%d" % (t.x.shape[0], pair.n))
    top = pair.shifted(t.mu, t.lam) @ t.x
    iso = -0.5 * np.real(np.vdot(t.x, pair.c @ t.x))
    unit = 0.5 * (1.0 - np.real(np.vdot(t.x, t.x)))
    f = np.concatenate([top, [iso + 0j, unit + 0j]])
    return ResidualReport(
        f=f,
        norm=float(np.linalg.norm(f)),
        norm_eig=float(np.linalg.norm(top)),
        norm_isotropy=abs(iso),
        norm_unit=abs(unit),
    )


def jacobian(pair, t):
    """The bordered (n+2) x (n+2) Jacobian of F; Hermitian by construction."""
    if t.x.shape[0] != pair.n:
        raise DimensionMismatch("triplet has length %d, pair has n=%d" % (t.x.shape[0], pair.n))
    cx = pair.c @ t.x
    j = np.zeros((pair.n + 2, pair.n + 2), dtype=complex)
    j[: pair.n, : pair.n] = pair.shifted(t.mu, t.lam)
    j[: pair.n, pair.n] = -cx
    j[: pair.n, pair.n + 1] = -t.x
    j[pair.n, : pair.n] = -cx.conj()
    j[pair.n + 1, : pair.n] = -t.x.conj()
    return j


def jacobian_hat(pair, t):
    """First n rows of the Jacobian: [A - mu*C - lam*I, -Cx, -x]."""
    return jacobian(pair, t)[: pair.n, :]


def _complex_to_pairs(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def _pairs_to_complex(rows, what):
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("field %r is not an array of [re, im] pairs" % what)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError("field %r must be a matrix of [re, im] pairs" % what)
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def save_pair(pair, path):
    doc = {"n": pair.n, "a": _complex_to_pairs(pair.a), "c": _complex_to_pairs(pair.c)}
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_pair(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON in %s: %s" % (path, exc))
    for key in ("n", "a", "c"):
        if key not in doc:
            raise ParseError("missing field %r in %s" % (key, path))
    a = _pairs_to_complex(doc["a"], "a")
    c = _pairs_to_complex(doc["c"], "c")
    n = doc["n"]
    if a.shape != (n, n) or c.shape != (n, n):
        raise ParseError("matrix shapes %s, %s do not match n=%s" % (a.shape, c.shape, n))
    return HermitianPair(a, c)


def save_triplet(t, path):
    doc = {
        "mu": t.mu,
        "lambda": t.lam,
        "x": [[float(z.real), float(z.imag)] for z in t.x],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_triplet(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON in %s: %s" % (path, exc))
    for key in ("mu", "lambda", "x"):
        if key not in doc:
            raise ParseError("missing field %r in %s" % (key, path))
    try:
        arr = np.asarray(doc["x"], dtype=float)
    except (TypeError, ValueError):
        raise ParseError("field 'x' is not an array of [re, im] pairs")
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ParseError("field 'x' must be a list of [re, im] pairs")
    return Triplet(doc["mu"], doc["lambda"], arr[:, 0] + 1j * arr[:, 1])
