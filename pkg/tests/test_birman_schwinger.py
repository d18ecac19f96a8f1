import numpy as np
import pytest
import scipy.integrate as si

from dislocated_dirac.birman_schwinger import (assemble_L, assemble_Q, det_I_plus_Q, eigenvalue_exclusion,
                                               find_det_zero, first_order_coefficient, kernel_sup_bound,
                                               m_operator_bound, potential_grid, q_norm_certificate)
from dislocated_dirac.errors import DomainError, HypothesisError
from dislocated_dirac.kernel import cexp, eta, kernel_eval, weak_coupling_matrices
from dislocated_dirac.oracle import assemble_kernel, operator_norm
from dislocated_dirac.params import SpectralPoint, in_spectrum
from dislocated_dirac.potential import MatrixPotential
from dislocated_dirac.step import StepConfig, real_eigenvalue_scan


def random_step(rng, pieces=3, size=0.5):
    edges = np.sort(rng.uniform(-2, 2, pieces + 1))
    mats = size * (rng.standard_normal((pieces, 2, 2)) + 1j * rng.standard_normal((pieces, 2, 2)))
    return MatrixPotential.step(list(zip(edges[:-1], edges[1:], mats)))


def test_zero_potential():
    V = MatrixPotential.zero()
    p = SpectralPoint(2.0, 0.3, 1.0)
    assert not np.any(assemble_Q(p, V).matrix)
    assert det_I_plus_Q(p.z, 1.0, V) == pytest.approx(1.0, abs=1e-15)
    assert first_order_coefficient(p, V) == 0
    assert m_operator_bound(p, V) == 0.0


def test_potential_grid_breaks():
    V = MatrixPotential.step([(-1, -0.3, np.eye(2)), (0.4, 1.0, np.eye(2))])
    g = potential_grid(V, 8, 2.0)
    for b in (-1, -0.3, 0.0, 0.4, 1.0):
        assert np.any(np.isclose(g.panels, b))


def test_certificate_dominates_discrete_norm(rng):
    done = 0
    while done < 25:
        m = rng.choice([0.0, 1.0])
        z = complex(rng.uniform(-5, 5), rng.uniform(-3, 3))
        if in_spectrum(m, z) or abs(abs(z.imag) - 1) < 0.05:
            continue
        p = SpectralPoint.from_complex(z, m)
        V = random_step(rng)
        q = operator_norm(assemble_Q(p, V, potential_grid(V, 12, 4.0)))
        cert = q_norm_certificate(p, V, lp=2.0, c_m=1.0)
        assert q <= cert.bound * (1 + 1e-8)
        assert cert.bound <= cert.universal
        done += 1


def test_hilbert_schmidt_below_majorant(rng):
    p = SpectralPoint(2.0, 0.3, 1.0)
    V = random_step(rng)
    op = assemble_Q(p, V, correct_diagonal=False)
    # Frobenius norm of the plain Nystrom matrix is the quadrature HS norm
    hs = np.linalg.norm(op.matrix)
    assert hs <= V.norms["L1"] * kernel_sup_bound(p)
    assert operator_norm(op) <= hs


def test_massless_certificate_is_l1_norm(rng):
    V = random_step(rng, size=0.2)
    p = SpectralPoint(0.7, 1.6, 0.0)
    assert q_norm_certificate(p, V).universal == pytest.approx(V.norms["L1"], rel=1e-12)


def test_massless_lp_certificate():
    V = MatrixPotential.gaussian(0.0, 0.6, np.diag([1.0, -0.5]))
    lp, d = 3.0, 1.8
    q = lp / (lp - 1)
    cert = q_norm_certificate(SpectralPoint(0.4, d, 0.0), V, lp=lp)
    assert cert.lp == pytest.approx(V.lp_norm(lp) * (2 / (q * (d - 1))) ** (1 / q), rel=1e-12)
    with pytest.raises(DomainError):
        q_norm_certificate(SpectralPoint(0.4, d, 0.0), V, lp=1.0)


def test_exclusion_scaling():
    V = MatrixPotential.step([(-0.5, 0.5, 0.1 * np.eye(2))])
    base = eigenvalue_exclusion(1.0, V, c_m=0.8)
    small = eigenvalue_exclusion(1.0, V.scaled(0.25), c_m=0.8)
    assert small.threshold == pytest.approx(2 * base.threshold)
    assert small.allows(2.1 * base.threshold + 0.5j) and not small.allows(1.9 * base.threshold)
    assert eigenvalue_exclusion(1.0, MatrixPotential.zero(), c_m=0.8).threshold == np.inf
    with pytest.raises(HypothesisError):
        eigenvalue_exclusion(1.0, V.scaled(20), c_m=0.8)
    with pytest.raises(DomainError):
        eigenvalue_exclusion(0.0, V)


def test_no_determinant_zeros_where_excluded():
    V = MatrixPotential.step([(-0.5, 0.5, 0.05 * np.eye(2))])
    g = potential_grid(V, 12, 4.0)
    for t in np.linspace(-4, 4, 9):
        for d in (-1.5, -0.5, 0.0, 0.5, 1.5):
            p = SpectralPoint(t, d, 1.0)
            if q_norm_certificate(p, V, c_m=1.0).bound < 1:
                assert abs(det_I_plus_Q(p.z, 1.0, V, g)) > 1e-3


def test_neumann_regime():
    V = MatrixPotential.gaussian(0.0, 0.5, np.eye(2), scale=1e-4)
    assert abs(det_I_plus_Q(0.3 + 2.5j, 1.0, V) - 1) < 1e-3


def test_step_eigenvalue_is_determinant_zero():
    cfg = StepConfig(1.0, 1.0, 1.0)
    root = real_eigenvalue_scan(cfg, (5.0, 7.0))[0]
    V = cfg.potential()
    coarse = abs(det_I_plus_Q(root, 1.0, V, potential_grid(V, 8, 2.0)))
    fine = abs(det_I_plus_Q(root, 1.0, V, potential_grid(V, 16, 4.0)))
    assert fine < 1e-4 and fine < coarse
    assert abs(find_det_zero(root + 1e-3, 1.0, V) - root) < 1e-8


# weak coupling

def test_rank_one_separable_part():
    p = SpectralPoint(6.0, 0.4, 1.0)
    V = MatrixPotential.gaussian(0.2, 0.2, [[1, 0.3], [0.3j, -0.5]])
    g = potential_grid(V, 16, 4.0)
    op = assemble_L(p, V, g)
    sv = np.linalg.svd(op.matrix, compute_uv=False)
    assert sv[1] < 1e-12 * sv[0]
    # ||L|| = |U|_F ||psi|| ||phi|| with U = |U|_F a b^*
    u = weak_coupling_matrices(p)[0]
    ua, s, ubh = np.linalg.svd(u)
    x, w = g.nodes, g.weights
    a, b = V.factors(x)
    e = cexp(-eta(p, x))
    psi = e[:, None] * (a @ ua[:, 0])
    phi = e[:, None] * (ubh[0] @ b)
    expected = s[0] * np.sqrt(np.sum(w[:, None] * np.abs(psi) ** 2)) * np.sqrt(np.sum(w[:, None] * np.abs(phi) ** 2))
    assert sv[0] == pytest.approx(expected, rel=1e-10)
    assert s[0] == pytest.approx(np.linalg.norm(u), rel=1e-12)


def test_remainder_bound_uniform_and_dominating():
    V = MatrixPotential.bump(0.0, 0.5, np.diag([-1.0, 1.0]))
    g = potential_grid(V, 16, 16.0)
    vals = [m_operator_bound(SpectralPoint(t, 0.3, 1.0), V, g) for t in (20.0, 40.0, 80.0)]
    assert max(vals) / min(vals) < 1.2
    p = SpectralPoint(20.0, 0.3, 1.0)
    rem = assemble_Q(p, V, g).matrix - assemble_L(p, V, g).matrix
    assert operator_norm(rem) <= vals[0] * (1 + 1e-6)


def test_first_order_coefficient_quadrature():
    p = SpectralPoint(5.0, 0.2, 1.0)
    V = MatrixPotential.gaussian(0.0, 0.4, np.diag([1.0, 2.0]))
    ups = weak_coupling_matrices(p)[3]

    def f(x):
        return complex(np.exp(-2 * eta(p, x)) * np.einsum("ij,ij->", V(x), ups))

    # adaptive quadrature split at the kink of |x|
    ref = sum(si.quad(f, a, b, complex_func=True, epsabs=1e-14, epsrel=1e-12)[0] for a, b in ((-5, 0), (0, 5)))
    assert first_order_coefficient(p, V) == pytest.approx(ref, rel=1e-10)


def test_weak_coupling_domain():
    V = MatrixPotential.zero()
    with pytest.raises(DomainError):
        first_order_coefficient(SpectralPoint(5.0, 1.2, 1.0), V)
    with pytest.raises(DomainError):
        first_order_coefficient(SpectralPoint(5.0, 0.2, 0.0), V)


def test_kernel_sup_bound_dominates_kernel(rng):
    p = SpectralPoint(3.0, 0.5, 1.0)
    x, y = rng.uniform(-3, 3, (2, 2000))
    assert np.linalg.norm(kernel_eval(p, x, y), 2, axis=(-2, -1)).max() <= kernel_sup_bound(p)
