"""Experiment driver: perturbation studies around known solutions.

Every study is a pure function of (problem, flags, seed): per-trial RNGs
are derived from (seed, trial index), so reports are reproducible
byte-for-byte and trials could run in any order.
"""

from dataclasses import dataclass, field

import numpy as np

from . import rqi
from .angles import dist_to_set
from .classify import Kind, eigvec_set
from .curves import eigvec_derivative
from .errors import NotIndefinite, RankCollapse, TooShort
from .kernels import hermitian_eig, orthonormalize
from .model import HermitianPair, Triplet

NOISE_FLOOR = 1e-13


@dataclass(frozen=True)
class Target:
    """A known 2D-eigentriplet to perturb around."""

    pair: HermitianPair
    triplet: Triplet
    regime: str  # "simple" | "multiple"
    vec_set: object = None

    @classmethod
    def at(cls, pair, triplet, regime):
        s = eigvec_set(pair, triplet.mu, triplet.lam)
        return cls(pair=pair, triplet=triplet, regime=regime, vec_set=s)

    def dist_x(self, x):
        return dist_to_set(x, self.vec_set)


@dataclass
class OrderEstimate:
    orders: list
    usable_range: list


@dataclass
class ScalingStudy:
    epsilons: list
    errors_mu: list
    errors_lambda: list
    errors_x: list
    fitted_slopes: dict
    failed: int
    total: int

    def to_dict(self):
        return {
            "epsilons": list(self.epsilons),
            "errors_mu": list(self.errors_mu),
            "errors_lambda": list(self.errors_lambda),
            "errors_x": list(self.errors_x),
            "fitted_slopes": dict(self.fitted_slopes),
            "failed": self.failed,
            "total": self.total,
        }


@dataclass
class ConditioningReport:
    epsilons: list
    trials: int
    sigma_violations: list
    c_violations: list
    sigma_star: float
    c_star: tuple

    def to_dict(self):
        return {
            "epsilons": list(self.epsilons),
            "trials": self.trials,
            "sigma_violations": list(self.sigma_violations),
            "c_violations": list(self.c_violations),
            "sigma_star": self.sigma_star,
            "c_star": list(self.c_star),
        }


def convergence_order(errors, noise_floor=NOISE_FLOOR):
    """Per-step empirical orders p_k = log(e_{k+1}/e_k) / log(e_k/e_{k-1}).

    Steps touching values at or below the noise floor, or where the
    sequence is not strictly decreasing, are excluded.
    """
    errors = np.asarray(errors, dtype=float)
    if errors.size < 3:
        raise TooShort("need at least 3 error values, got %d" % errors.size)
    orders, usable = [], []
    for k in range(1, errors.size - 1):
        e0, e1, e2 = errors[k - 1], errors[k], errors[k + 1]
        if min(e0, e1, e2) <= noise_floor or not (e0 > e1 > e2):
            continue
        orders.append(float(np.log(e2 / e1) / np.log(e1 / e0)))
        usable.append(k)
    return OrderEstimate(orders=orders, usable_range=usable)


def _trial_rng(seed, trial):
    return np.random.default_rng([seed, trial])


def _unit_perp(rng, x):
    n = x.shape[0]
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w -= np.vdot(x, w) / np.vdot(x, x) * x
    return w / np.linalg.norm(w)


def perturbed_start(target, eps, seed, trial=0):
    """Seeded start at controlled distance eps from the target.

    Simple regime: all three components perturbed at O(eps).  Multiple
    regime: scalars perturbed at O(eps^2), the vector at O(eps), matching
    the hypothesis under which the multiple-case one-step bounds hold.
    """
    if not 0.0 <= eps <= 0.3:
        raise ValueError("eps must be in [0, 0.3]")
    rng = _trial_rng(seed, trial)
    u1, u2 = rng.uniform(-1.0, 1.0, size=2)
    base = target.vec_set.representative() if target.regime == "multiple" else target.triplet.x
    w = _unit_perp(rng, base)
    scal = eps * eps if target.regime == "multiple" else eps
    return Triplet.normalized(
        target.triplet.mu + scal * u1,
        target.triplet.lam + scal * u2,
        base + eps * w,
    )


def _fit_slope(eps, med):
    eps = np.asarray(eps, dtype=float)
    med = np.maximum(np.asarray(med, dtype=float), 1e-300)
    return float(np.polyfit(np.log(eps), np.log(med), 1)[0])


def scaling_study(target, eps_list, trials, seed):
    """One-step error scaling: median per-eps errors and log-log slopes."""
    eps_list = list(eps_list)
    if len(eps_list) < 2 or np.log10(eps_list[0] / eps_list[-1]) < 1.0 - 1e-12:
        raise ValueError("eps_list must span at least a decade")
    med_mu, med_lam, med_x = [], [], []
    failed = total = 0
    for i, eps in enumerate(eps_list):
        em, el, ex = [], [], []
        for trial in range(trials):
            total += 1
            t0 = perturbed_start(target, eps, seed, trial=i * trials + trial)
            try:
                t1, _ = rqi.step(target.pair, t0)
            except (NotIndefinite, RankCollapse):
                failed += 1
                continue
            em.append(abs(t1.mu - target.triplet.mu))
            el.append(abs(t1.lam - target.triplet.lam))
            ex.append(target.dist_x(t1.x))
        med_mu.append(float(np.median(em)))
        med_lam.append(float(np.median(el)))
        med_x.append(float(np.median(ex)))
    if failed > 0.2 * total:
        raise RuntimeError("more than 20%% of steps failed (%d of %d)" % (failed, total))
    slopes = {
        "mu": _fit_slope(eps_list, med_mu),
        "lambda": _fit_slope(eps_list, med_lam),
        "x": _fit_slope(eps_list, med_x),
    }
    return ScalingStudy(eps_list, med_mu, med_lam, med_x, slopes, failed, total)


def ritz_approx_study(target, eps_list, trials, seed):
    """One-shot Ritz extraction from an eps-perturbed ideal 2-dim subspace.

    The ideal subspace is span{x_*, x'_*}; each trial perturbs it, rotates
    the basis so V^H C V is diagonal, solves the projected 2 x 2 problem
    and records the best of the two Ritz triplets.
    """
    if target.regime != "simple":
        raise ValueError("ritz study requires a simple nonsingular target")
    eps_list = list(eps_list)
    pair, tgt = target.pair, target.triplet
    xp = eigvec_derivative(pair, tgt.mu, tgt.lam, tgt.x)
    ideal = np.stack([tgt.x, xp / np.linalg.norm(xp)], axis=1)
    med_mu, med_lam, med_x = [], [], []
    failed = total = 0
    for i, eps in enumerate(eps_list):
        em, el, ex = [], [], []
        for trial in range(trials):
            total += 1
            rng = _trial_rng(seed, i * trials + trial)
            g = rng.standard_normal((pair.n, 2)) + 1j * rng.standard_normal((pair.n, 2))
            g /= np.linalg.norm(g, 2)
            v = orthonormalize(ideal + eps * g)
            ce, s = hermitian_eig(v.conj().T @ pair.c @ v, order="descending")
            if not (ce[0] > 0 > ce[1]):
                failed += 1
                continue
            v = v @ s
            ak = v.conj().T @ pair.a @ v
            cands = rqi.solve_2x2(
                float(np.real(ak[0, 0])), complex(ak[0, 1]), float(np.real(ak[1, 1])),
                float(ce[0]), float(ce[1]),
            )
            best = None
            for c in cands:
                x = v @ c.z
                errs = (abs(c.nu - tgt.mu), abs(c.theta - tgt.lam), target.dist_x(x))
                if best is None or sum(errs) < sum(best):
                    best = errs
            em.append(best[0])
            el.append(best[1])
            ex.append(best[2])
        med_mu.append(float(np.median(em)))
        med_lam.append(float(np.median(el)))
        med_x.append(float(np.median(ex)))
    if failed > 0.2 * total:
        raise RuntimeError("more than 20%% of trials excluded (%d of %d)" % (failed, total))
    slopes = {
        "nu": _fit_slope(eps_list, med_mu),
        "theta": _fit_slope(eps_list, med_lam),
        "x": _fit_slope(eps_list, med_x),
    }
    return ScalingStudy(eps_list, med_mu, med_lam, med_x, slopes, failed, total)


def conditioning_study(target, eps_list, trials, seed):
    """Check the half-factor conditioning bounds near the target.

    At the target itself, record sigma_n of the leading Jacobian block and
    the diagonal entries (c1, c2) of the projected C.  For each perturbed
    start, count violations of sigma_n >= sigma_*/2 and of the c-bracket
    inequalities (two-sided in the simple regime, one-sided in the
    multiple regime).
    """
    eps_list = list(eps_list)
    basis_star = rqi.projection_basis(target.pair, target.triplet)
    sigma_star = basis_star.sigma_diag[1]
    c1s, c2s = basis_star.c1, basis_star.c2
    sigma_viol, c_viol = [], []
    for i, eps in enumerate(eps_list):
        sv = cv = 0
        for trial in range(trials):
            t0 = perturbed_start(target, eps, seed, trial=i * trials + trial)
            try:
                b = rqi.projection_basis(target.pair, t0)
            except RankCollapse:
                sv += 1
                cv += 1
                continue
            if b.sigma_diag[1] < 0.5 * sigma_star:
                sv += 1
            if target.regime == "simple":
                ok = (0.5 * c1s <= b.c1 <= 1.5 * c1s) and (1.5 * c2s <= b.c2 <= 0.5 * c2s)
            else:
                ok = (b.c1 >= 0.5 * c1s > 0.0) and (b.c2 <= 0.5 * c2s < 0.0)
            if not ok:
                cv += 1
        sigma_viol.append(sv)
        c_viol.append(cv)
    return ConditioningReport(eps_list, trials, sigma_viol, c_viol, sigma_star, (c1s, c2s))


def random_pair(n, signature, seed):
    """Seeded dense Hermitian pair with C = Q^H diag(+1...,-1...) Q."""
    pos, neg = signature
    if pos < 1 or neg < 1 or pos + neg != n:
        raise ValueError("signature must have >=1 of each sign and sum to n")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = 0.5 * (g + g.conj().T)
    q = _haar_unitary(rng, n)
    d = np.diag([1.0] * pos + [-1.0] * neg)
    c = q.conj().T @ d @ q
    return HermitianPair(a, c)


def _haar_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pair_with_crossing(n, signature, mu_star, lam_star, seed):
    """Random pair modified to carry a nonsingular multiple 2D-eigenvalue.

    Two eigenvalues of A - mu_star*C are collapsed onto lam_star; the
    eigenvector pair is chosen so the cluster form of C is indefinite
    (opposite curve slopes at the crossing).
    """
    base = random_pair(n, signature, seed)
    h0 = base.a - mu_star * base.c
    w, v = hermitian_eig(h0)
    for i in range(n):
        for j in range(i + 1, n):
            vv = v[:, [i, j]]
            ce = np.linalg.eigvalsh(vv.conj().T @ base.c @ vv)
            if ce[0] < -1e-3 and ce[-1] > 1e-3:
                w2 = w.copy()
                w2[[i, j]] = lam_star
                a = v @ np.diag(w2) @ v.conj().T + mu_star * base.c
                return HermitianPair(a, base.c)
    raise RuntimeError("no eigenvector pair with indefinite cluster form found")
