import numpy as np
import pytest

from dislocated_dirac.bounds import sharp_two_sided
from dislocated_dirac.errors import ConfigError, ConvergenceError, DomainError
from dislocated_dirac.oracle import (apply_resolvent, assemble_kernel, assemble_resolvent, auto_grid, build_grid,
                                     det_I_plus, grid_on_breaks, operator_norm, resolvent_norm)
from dislocated_dirac.params import SpectralPoint
from dislocated_dirac.spectrum import apply_operator


# quadrature grids

def test_constant_integral_exact():
    g = build_grid(7.5, 16, 2.0)
    assert np.sum(g.weights) == pytest.approx(15.0, abs=1e-14)


def test_exponential_integral():
    g = build_grid(20, 16, 2.0)
    assert np.sum(g.weights * np.exp(-np.abs(g.nodes))) == pytest.approx(2 * (1 - np.exp(-20)), abs=1e-12)


def test_node_count():
    g = build_grid(5, 8, 3.0)
    assert g.size == 2 * 5 * 3 * 8
    assert np.all(np.diff(g.nodes) > 0)


def test_zero_is_a_panel_boundary():
    g = build_grid(3.3, 6, 1.7, left=2.1)
    assert 0.0 in g.panels[:, 0]
    assert g.panels[0, 0] == -2.1 and g.panels[-1, 1] == 3.3


def test_grid_errors():
    with pytest.raises(ConfigError):
        build_grid(-1, 16, 1)
    with pytest.raises(ConfigError):
        build_grid(1, 40, 1)
    with pytest.raises(ConfigError):
        grid_on_breaks([0, 0, 1], 16, 1)


# dense and iterative norms

def test_norm_trivial():
    assert operator_norm(np.zeros((5, 5))) == 0
    assert operator_norm(np.diag([3.0, 1, 1, 1])) == pytest.approx(3.0)


@pytest.mark.parametrize("dense_below", [2000, 10])
def test_norm_against_svd(rng, dense_below):
    a = rng.standard_normal((200, 200)) + 1j * rng.standard_normal((200, 200))
    want = np.linalg.svd(a, compute_uv=False)[0]
    assert operator_norm(a, dense_below=dense_below) == pytest.approx(want, rel=1e-9)


def test_log_det():
    phase, logabs = det_I_plus(np.diag([1.0, -3.0, 0.5j]))
    assert phase * np.exp(logabs) == pytest.approx(2 * -2 * (1 + 0.5j))


# resolvent oracle

def test_massless_above_band_norm():
    # the exact norm 1 is approached by pseudomodes escaping to the right;
    # the truncated operator reaches 1 - 5e-3 at R = 30 independently of the density
    p = SpectralPoint(0.0, 2.0, 0.0)
    sym = resolvent_norm(p, build_grid(30, 16, 0.5)).value
    assert sym == pytest.approx(resolvent_norm(p, build_grid(30, 16, 1.0)).value, abs=1e-12)
    assert sym == pytest.approx(1.0, abs=6e-3)
    far = resolvent_norm(p, build_grid(90, 16, 0.5, left=20)).value
    assert far <= 1.0
    assert far == pytest.approx(1.0, abs=1e-3)


def test_triangle_inequality():
    p = SpectralPoint(6.0, 0.2, 1.0)
    g = auto_grid(p, max_radius=40)
    full = resolvent_norm(p, g).value
    assert full <= resolvent_norm(p, g, "T1").value + resolvent_norm(p, g, "T2").value


def test_band_norm_value():
    p = SpectralPoint(10.0, 0.0, 1.0)
    val = resolvent_norm(p, build_grid(40, 16, 0.75)).value
    lo, hi = sharp_two_sided(p)
    assert 98.0 <= val <= 102.6
    assert lo < val < hi


def test_refinement_guard():
    p = SpectralPoint(10.0, 0.0, 1.0)
    with pytest.raises(ConvergenceError):
        resolvent_norm(p, build_grid(4, 16, 0.25), tol=1e-6)
    out = resolvent_norm(p, build_grid(16, 16, 0.75), tol=1e-3)
    assert out.delta < 1e-3 and out.refined is not None


def test_oracle_rejects_spectrum_and_kinds():
    with pytest.raises(DomainError):
        assemble_resolvent(SpectralPoint(3.0, 1.0, 1.0), build_grid(2, 4, 1))
    with pytest.raises(ConfigError):
        assemble_resolvent(SpectralPoint(3.0, 0.5, 1.0), build_grid(2, 4, 1), kind="T3")


def test_diagonal_correction_matters_for_jumping_kernel():
    # integral of the kernel sign(x - y) against 1 over [-1, 1] is 2x
    g = build_grid(1, 8, 1.0)
    kern = lambda x, y: np.sign(x - y + 0.0)[..., None, None] * np.eye(2)  # noqa: E731
    # the matrix acts on sqrt(w) f and returns sqrt(w) K f
    sw = np.sqrt(g.weights)
    ones = np.zeros(2 * g.size)
    ones[0::2] = sw
    for correct, tol in ((True, 1e-10), (False, None)):
        out = (assemble_kernel(kern, g, correct) @ ones)[0::2] / sw
        err = np.max(np.abs(out - 2 * g.nodes))
        if tol is None:
            assert err > 1e-3
        else:
            assert err < tol


def test_apply_resolvent_solves_equation():
    p = SpectralPoint(2.0, 0.3, 1.0)

    def f(y):
        g = np.exp(-(y - 0.7) ** 2)
        return np.stack([g, (1 - 0.5j) * y * g], axis=-1)

    h = 1e-3
    x = np.array([-3.1, -1.2, 0.8, 2.5])
    u = apply_resolvent(p, f, x, (-9, 9))
    du = (apply_resolvent(p, f, x + h, (-9, 9)) - apply_resolvent(p, f, x - h, (-9, 9))) / (2 * h)
    res = apply_operator(p.m, x, u, du) - p.z * u - f(x)
    assert np.max(np.abs(res)) < 1e-5 * np.max(np.abs(f(x)))
