import numpy as np
import pytest

from twodevp import refpairs
from twodevp.curves import (
    eig_at,
    eigvec_derivative,
    export_grid_csv,
    lambda_double_prime,
    lambda_prime,
    trace_curves,
)
from twodevp.errors import NotNormalized, NotSimple
from twodevp.model import HermitianPair

SQ2 = np.sqrt(2.0)


def test_eig_at_simple_pair_origin():
    point = eig_at(refpairs.simple_pair_2x2(), 0.0)
    assert np.allclose(point.values, [1.0, -1.0])


def test_eig_at_simple_pair_mu_one():
    point = eig_at(refpairs.simple_pair_2x2(), 1.0)
    assert np.allclose(point.values, [SQ2, -SQ2])


def test_eig_at_multiple_pair_crossing():
    point = eig_at(refpairs.multiple_pair_2x2(), 1.0)
    assert np.allclose(point.values, [0.0, 0.0])


def test_trace_curves_straight_lines_through_crossing():
    grid = trace_curves(refpairs.multiple_pair_2x2(), 0.0, 2.0, 21)
    mus, top = grid.curve(0)
    _, bot = grid.curve(1)
    # matched curves follow the analytic lines, no swap at mu=1
    assert np.allclose(top, 1.0 - mus, atol=1e-12)
    assert np.allclose(bot, -1.0 + mus, atol=1e-12)


def test_trace_curves_hyperbolas():
    grid = trace_curves(refpairs.simple_pair_2x2(), -1.0, 1.0, 41)
    mus, top = grid.curve(0)
    _, bot = grid.curve(1)
    assert np.allclose(top, np.sqrt(1.0 + mus**2), atol=1e-12)
    assert np.allclose(bot, -np.sqrt(1.0 + mus**2), atol=1e-12)
    assert grid.min_overlap >= 0.9


def test_trace_curves_two_point_grid():
    grid = trace_curves(refpairs.simple_pair_2x2(), 0.2, 0.4, 2)
    assert grid.matched
    assert grid.min_overlap >= 0.9 or len(grid.points) > 2


def test_trace_curves_bad_arguments():
    pair = refpairs.simple_pair_2x2()
    with pytest.raises(ValueError):
        trace_curves(pair, 1.0, 0.0, 8)
    with pytest.raises(ValueError):
        trace_curves(pair, 0.0, 1.0, 1)


def test_trace_sum_matches_trace():
    pair, _ = refpairs.simple_pair_desk()
    grid = trace_curves(pair, -0.5, 0.5, 11)
    for p in grid.points:
        expect = np.trace(pair.a).real - p.mu * np.trace(pair.c).real
        scale = pair.norm_a + abs(p.mu) * pair.norm_c
        assert abs(np.sum(p.values) - expect) < 1e-10 * pair.n * scale


def test_phase_fixing_nonnegative_overlaps():
    pair, _ = refpairs.simple_pair_desk()
    grid = trace_curves(pair, -0.3, 0.3, 13)
    for a, b in zip(grid.points, grid.points[1:]):
        for i in range(pair.n):
            assert np.real(np.vdot(a.vectors[:, i], b.vectors[:, i])) >= 0.0


def test_lambda_prime_isotropic_vector():
    pair = refpairs.simple_pair_2x2()
    assert abs(lambda_prime(pair, np.array([1.0, 1.0]) / SQ2)) < 1e-15


def test_lambda_prime_basis_vector():
    pair = refpairs.simple_pair_2x2()
    assert lambda_prime(pair, np.array([1.0, 0.0])) == -1.0


def test_lambda_prime_requires_unit_vector():
    with pytest.raises(NotNormalized):
        lambda_prime(refpairs.simple_pair_2x2(), np.array([1.0, 1.0]))


def test_lambda_prime_matches_finite_difference():
    pair, _ = refpairs.simple_pair_desk()
    h = 1e-4
    for mu in (-0.35, 0.1, 0.42):
        point = eig_at(pair, mu)
        x = point.vectors[:, 0]
        lp = lambda_prime(pair, x)

        def lam_at(m):
            q = eig_at(pair, m)
            j = int(np.argmax(np.abs(x.conj() @ q.vectors)))
            return float(q.values[j])

        fd = (lam_at(mu + h) - lam_at(mu - h)) / (2 * h)
        assert abs(lp - fd) < 1e-6


def test_lambda_prime_vanishes_at_critical_point():
    _, t = refpairs.simple_pair_desk()
    pair, _ = refpairs.simple_pair_desk()
    assert abs(lambda_prime(pair, t.x)) < 1e-10


def test_eigvec_derivative_worked_example():
    pair = refpairs.simple_pair_2x2()
    xp = eigvec_derivative(pair, 0.0, 1.0, np.array([1.0, 1.0]) / SQ2)
    assert np.allclose(xp, np.array([-1.0, 1.0]) / (2 * SQ2))


def test_eigvec_derivative_orthogonal_to_x():
    pair, t = refpairs.simple_pair_desk()
    xp = eigvec_derivative(pair, t.mu, t.lam, t.x)
    assert abs(np.vdot(t.x, xp)) < 1e-8
    assert np.linalg.norm(xp) > 1e-10


def test_eigvec_derivative_matches_traced_curve():
    pair, _ = refpairs.simple_pair_desk()
    mu, h = 0.15, 1e-4
    point = eig_at(pair, mu)
    x = point.vectors[:, 2]
    xp = eigvec_derivative(pair, mu, float(point.values[2]), x)

    def vec_at(m):
        q = eig_at(pair, m)
        j = int(np.argmax(np.abs(x.conj() @ q.vectors)))
        v = q.vectors[:, j]
        ov = np.vdot(x, v)
        return v * (ov.conj() / abs(ov))

    fd = (vec_at(mu + h) - vec_at(mu - h)) / (2 * h)
    assert np.linalg.norm(xp - fd) < 1e-5


def test_eigvec_derivative_rejects_multiple():
    pair = refpairs.multiple_pair_2x2()
    with pytest.raises(NotSimple):
        eigvec_derivative(pair, 1.0, 0.0, np.array([1.0, 0.0]))


def test_lambda_double_prime_top_curve():
    pair = refpairs.simple_pair_2x2()
    val = lambda_double_prime(pair, 0.0, 1.0, np.array([1.0, 1.0]) / SQ2)
    assert abs(val - 1.0) < 1e-12


def test_lambda_double_prime_bottom_curve():
    pair = refpairs.simple_pair_2x2()
    val = lambda_double_prime(pair, 0.0, -1.0, np.array([1.0, -1.0]) / SQ2)
    assert abs(val + 1.0) < 1e-12


def test_lambda_double_prime_second_difference():
    pair = refpairs.simple_pair_2x2()
    h = 1e-3
    # lambda(mu) = sqrt(1+mu^2) on the top curve
    fd = (np.sqrt(1 + h**2) - 2.0 + np.sqrt(1 + h**2)) / h**2
    val = lambda_double_prime(pair, 0.0, 1.0, np.array([1.0, 1.0]) / SQ2)
    assert abs(val - fd) < 1e-4


def test_grid_csv_export(tmp_path):
    grid = trace_curves(refpairs.simple_pair_2x2(), -0.5, 0.5, 5)
    path = tmp_path / "grid.csv"
    export_grid_csv(grid, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "mu,curve_index,lambda"
    assert len(lines) == 1 + 2 * len(grid.points)


def test_adaptive_refinement_near_close_curves():
    # two nearly parallel lines with a tight avoided crossing force extra
    # grid points between the coarse samples
    a = np.array([[1.0, 1e-4], [1e-4, -1.0]])
    pair = HermitianPair(a, np.diag([1.0, -1.0]))
    grid = trace_curves(pair, 0.0, 2.0, 9)
    assert len(grid.points) > 9
    mus, top = grid.curve(0)
    analytic = np.sqrt((1.0 - mus) ** 2 + 1e-8)
    assert np.allclose(top, analytic, atol=1e-10)
