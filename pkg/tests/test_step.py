import numpy as np
import pytest
from hypothesis import given, strategies as st

from dislocated_dirac.birman_schwinger import det_I_plus_Q, potential_grid
from dislocated_dirac.errors import DomainError, NotAnEigenvalueError, SpecialPointError, WindowError
from dislocated_dirac.spectrum import apply_operator
from dislocated_dirac.step import (StepConfig, cotangent_rhs, eigen_equation_residual, eigen_special_points,
                                   eigenfunction_reconstruct, fundamental_matrix, real_eigenvalue_scan,
                                   s_function, step_matrix_scaled_det)

CFG = StepConfig(1.0, 1.0, 1.0)


@pytest.fixture(scope="module")
def roots():
    return real_eigenvalue_scan(CFG, (5.0, 15.0))


# fundamental matrices

@given(st.floats(-5, 5), st.floats(-0.9, 0.9), st.floats(-2, 2), st.floats(-2, 2),
       st.sampled_from(["-", "0", "+"]))
def test_semigroup_and_inverse(tau, delta, x, y, piece):
    fm = fundamental_matrix(CFG, complex(tau, delta), piece)
    big = max(1.0, np.abs(fm(x + y)).max())
    np.testing.assert_allclose(fm(x + y), fm(x) @ fm(y), atol=1e-11 * big)
    np.testing.assert_allclose(fm(x) @ fm(-x), np.eye(2), atol=1e-11 * max(1.0, np.abs(fm(x)).max()) ** 2)


@pytest.mark.parametrize("piece", ["-", "0", "+"])
def test_fundamental_matrix_solves_system(piece):
    fm = fundamental_matrix(CFG, 3.0 + 0.2j, piece)
    x, h = 0.37, 1e-5
    deriv = (fm(x + h) - fm(x - h)) / (2 * h)
    np.testing.assert_allclose(deriv, fm.generator @ fm(x), atol=1e-8)


def test_unknown_piece():
    with pytest.raises(DomainError):
        fundamental_matrix(CFG, 3.0, "x")


# real eigenvalues

def test_s_function_limit():
    assert abs(s_function(CFG, 1e4) - CFG.b) < 1e-3
    assert abs(s_function(CFG, -1e4) - CFG.b) < 1e-3


def test_s_function_matches_slope_formula():
    z = np.linspace(2.0, 20.0, 37)
    vals = cotangent_rhs(CFG, z)
    np.testing.assert_allclose(np.abs(vals), np.abs(s_function(CFG, z)), rtol=1e-10)


def test_root_count_per_period():
    found = real_eigenvalue_scan(CFG, (10.0, 10.0 + np.pi))
    assert len(found) == 2


def test_roots_in_window(roots):
    assert len(roots) >= 6
    spacing = np.diff(roots) / (np.pi / 2)
    assert abs(spacing[-1] - 1) < 0.1


def test_roots_solve_complex_equation(roots):
    for r in roots:
        assert abs(eigen_equation_residual(CFG, r)) < 1e-8


def test_negative_window():
    neg = real_eigenvalue_scan(CFG, (-15.0, -5.0))
    assert len(neg) >= 6
    for r in neg:
        assert abs(eigen_equation_residual(CFG, r)) < 1e-8


def test_roots_are_determinant_zeros(roots):
    V = CFG.potential()
    grid = potential_grid(V, 16, 4.0)
    assert abs(det_I_plus_Q(roots[0], 1.0, V, grid)) < 1e-4
    assert abs(det_I_plus_Q(roots[0] + 0.3, 1.0, V, grid)) > 1e-2


def test_generic_point_not_a_root():
    assert abs(eigen_equation_residual(CFG, 4.1 + 0.3j)) > 1e-3


def test_scan_errors():
    with pytest.raises(WindowError):
        real_eigenvalue_scan(CFG, (-3.0, 5.0))
    with pytest.raises(DomainError):
        real_eigenvalue_scan(StepConfig(1.0, 1.0, 0.0), (5.0, 6.0))
    with pytest.raises(SpecialPointError):
        eigen_equation_residual(CFG, 0.0)
    with pytest.raises(DomainError):
        eigen_equation_residual(CFG, 3 + 1j)
    with pytest.raises(DomainError):
        StepConfig(0.0, 1.0, 1.0)


# special points

def test_massless_special_point_is_eigenvalue():
    cfg = StepConfig(1.0, 0.5, 0.0)
    (z, is_eig, val), = eigen_special_points(cfg)
    assert z == -0.5 and is_eig and abs(val) < 1e-14
    ef = eigenfunction_reconstruct(cfg, z)
    assert ef.continuity_mismatch < 1e-8


def test_massive_special_points_generic():
    pts = eigen_special_points(StepConfig(1.0, 0.3, 1.0))
    assert len(pts) == 2
    assert not any(is_eig for _, is_eig, _ in pts)
    assert all(abs(val) > 1e-3 for _, _, val in pts)


def test_massless_band_determinant_vanishes(rng):
    cfg = StepConfig(1.0, 0.5, 0.0)
    for z in rng.uniform(-5, 5, 10) + 1j * rng.uniform(-0.95, 0.95, 10):
        assert abs(step_matrix_scaled_det(cfg, z)) < 1e-8


# eigenfunctions

def test_reconstruction(roots):
    ef = eigenfunction_reconstruct(CFG, roots[0])
    assert ef.continuity_mismatch < 1e-8
    assert min(ef.decay_rates) > 0
    x = np.array([-3.0, -0.6, 0.3, 2.0])
    assert np.abs(ef.residual(x)).max() < 1e-10 * np.abs(ef(x)).max()


def test_reconstruction_fd_residual_second_order(roots):
    ef = eigenfunction_reconstruct(CFG, roots[1])
    kinks = np.array([-1.0, 0.0, 1.0])

    def rel_residual(h):
        x = np.arange(-4.0, 4.0, h)
        x = x[np.min(np.abs(x[:, None] - kinks), axis=1) > 2 * h]
        u = ef(x)
        du = (ef(x + h) - ef(x - h)) / (2 * h)
        res = apply_operator(1.0, x, u, du) + np.einsum("nij,nj->ni", CFG.potential()(x), u) - ef.z * u
        return np.sqrt(np.sum(np.abs(res) ** 2) / np.sum(np.abs(u) ** 2))

    r1, r2 = rel_residual(2e-3), rel_residual(1e-3)
    assert r1 < 1e-3
    assert r1 / r2 == pytest.approx(4.0, rel=0.05)


def test_reconstruction_rejects_non_eigenvalue():
    with pytest.raises(NotAnEigenvalueError):
        eigenfunction_reconstruct(CFG, 7.0)
