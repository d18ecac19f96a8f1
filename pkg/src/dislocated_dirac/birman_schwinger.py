"""Birman-Schwinger operator ``Q(z) = A (L_m - z)^{-1} B`` of a matrix potential.

``z`` is an eigenvalue of ``L_m + V`` exactly when ``-1`` is an eigenvalue
of ``Q(z)``.  This module discretizes ``Q(z)`` on the support of ``V``,
tracks zeros of ``det(I + Q(z))``, provides closed-form norm certificates
that rule eigenvalues out, and implements the weak-coupling reduction
``Q = L + M`` with a rank-one ``L``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize as so

from .bounds import empirical_c_m
from .errors import ConvergenceError, DomainError, HypothesisError
from .kernel import _checked, cexp, eta, kernel_eval, l_kernel_eval, weak_coupling_matrices
from .oracle import DiscretizedOperator, QuadratureGrid, assemble_kernel, det_I_plus, grid_on_breaks
from .params import Region, RegionTag, SpectralPoint, classify_region
from .potential import MatrixPotential


def potential_grid(V: MatrixPotential, order: int = 16, panels_per_unit: float = 4.0) -> QuadratureGrid:
    """Gauss panels on the support of ``V`` with ``0`` and every jump as panel boundaries."""
    br = V.breaks
    if br[0] < 0 < br[-1]:
        br = np.union1d(br, [0.0])
    return grid_on_breaks(br, order, panels_per_unit)


def _sandwich(V: MatrixPotential, kern):
    def q_kern(x, y):
        a, _ = V.factors(x)
        _, b = V.factors(y)
        return a @ kern(x, y) @ b
    return q_kern


def assemble_Q(p: SpectralPoint, V: MatrixPotential, grid: QuadratureGrid | None = None,
               correct_diagonal: bool = True) -> DiscretizedOperator:
    grid = potential_grid(V) if grid is None else grid
    _checked(p)
    kern = _sandwich(V, lambda x, y: kernel_eval(p, x, y))
    return DiscretizedOperator(assemble_kernel(kern, grid, correct_diagonal), grid, "Q")


def assemble_L(p: SpectralPoint, V: MatrixPotential, grid: QuadratureGrid | None = None) -> DiscretizedOperator:
    """Rank-one part ``A(x) L_z(x, y) B(y)`` of the weak-coupling split (smooth kernel, plain Nystrom)."""
    grid = potential_grid(V) if grid is None else grid
    kern = _sandwich(V, lambda x, y: l_kernel_eval(p, x, y))
    return DiscretizedOperator(assemble_kernel(kern, grid, correct_diagonal=False), grid, "L")


def det_I_plus_Q(z: complex, m: float, V: MatrixPotential, grid: QuadratureGrid | None = None,
                 coupling: complex = 1.0) -> complex:
    """``det(I + coupling * Q(z))`` of the discretized operator."""
    op = assemble_Q(SpectralPoint.from_complex(z, m), V, grid)
    phase, logabs = det_I_plus(coupling * op.matrix)
    return phase * np.exp(logabs)


def find_det_zero(z0: complex, m: float, V: MatrixPotential, grid: QuadratureGrid | None = None,
                  coupling: complex = 1.0, tol: float = 1e-12, maxiter: int = 60) -> complex:
    """Zero of ``det(I + coupling Q(z))`` near ``z0`` by the complex secant method."""
    grid = potential_grid(V) if grid is None else grid
    scale = abs(det_I_plus_Q(z0, m, V, grid, coupling)) or 1.0

    def f(z):
        return det_I_plus_Q(z, m, V, grid, coupling) / scale

    try:
        root = so.newton(f, complex(z0), tol=tol, maxiter=maxiter)
    except (RuntimeError, OverflowError) as exc:
        raise ConvergenceError(f"secant iteration from z0={z0} failed: {exc}") from exc
    return complex(root)


# Norm certificates


@dataclass(frozen=True)
class QCertificate:
    bound: float
    region: RegionTag
    formula_used: str
    universal: float
    lp: float | None
    region_bound: float | None
    c_m: float | None


def kernel_sup_bound(p: SpectralPoint) -> float:
    """``sup |R_z| <= (|k| + 1) max(|w| + 1/|w|) / 2``."""
    q = _checked(p)
    wp, wm = abs(q.w_plus), abs(q.w_minus)
    return float(0.5 * (abs(q.k) + 1) * max(wp + 1 / wp, wm + 1 / wm))


def q_norm_certificate(p: SpectralPoint, V: MatrixPotential, lp: float | None = None,
                       c_m: float | None = None) -> QCertificate:
    """Closed-form upper bounds for ``||Q(z)||``.

    ``bound`` is the smaller of the rigorous estimates: ``|V|_L1 sup|R_z|``
    and, when ``lp`` is given, ``|V|_Lp K_q(z)^(1/q)``.  ``region_bound`` is
    the region-wise form ``|V|_L1(nu1)/C`` (off W) or ``(Re z)^2 |V|_L1/C^2``
    (on W) evaluated with the empirical constant ``C(m)``; it is reported,
    not used for ``bound``.
    """
    q = _checked(p)
    tag = classify_region(p)
    l1 = V.norms["L1"]
    sup = kernel_sup_bound(p)
    universal = l1 * sup
    lp_bound = None
    if lp is not None:
        if not lp > 1:
            raise DomainError("the Lp certificate needs p > 1")
        qexp = 1.0 if lp == np.inf else lp / (lp - 1)
        k_q = 2 / (qexp * min(q.mu_minus.real, q.mu_plus.real)) * sup**qexp
        lp_bound = V.lp_norm(lp) * k_q ** (1 / qexp)
    region_bound = None
    if p.m > 0:
        c_m = empirical_c_m(p.m) if c_m is None else c_m
        if tag.region is Region.W:
            region_bound = p.tau**2 * l1 / c_m**2
        else:
            region_bound = V.norms["L1_nu1"] / c_m
    if lp_bound is not None and lp_bound < universal:
        bound, used = lp_bound, "LP_SCHUR"
    else:
        bound, used = universal, "L1_SUP_KERNEL"
    return QCertificate(float(bound), tag, used, float(universal), lp_bound, region_bound, c_m)


@dataclass(frozen=True)
class ExclusionRegion:
    """Eigenvalues can only lie in ``|Im z| <= 1``, ``|Re z| > threshold``."""

    m: float
    threshold: float
    c_m: float
    provenance: str = "EMPIRICAL"

    def allows(self, z) -> bool:
        z = complex(z)
        return abs(z.imag) <= 1 and abs(z.real) > self.threshold


def eigenvalue_exclusion(m: float, V: MatrixPotential, c_m: float | None = None) -> ExclusionRegion:
    if not m > 0:
        raise DomainError("the exclusion region is stated for m > 0")
    c_m = empirical_c_m(m) if c_m is None else c_m
    if V.norms["L1_nu1"] >= c_m:
        raise HypothesisError(f"|V|_L1(nu1) = {V.norms['L1_nu1']:.4g} is not below C(m) = {c_m:.4g}")
    l1 = V.norms["L1"]
    threshold = np.inf if l1 == 0 else c_m / np.sqrt(l1)
    return ExclusionRegion(m, float(threshold), float(c_m))


# Weak coupling


@dataclass(frozen=True)
class WeakCouplingReport:
    z: complex
    a_z: complex
    lhs: float
    psi_norm_bound: float
    phi_norm_bound: float
    l_norm_bound: float
    m_bound_estimate: float | None = None

    def residual(self, eps: complex) -> float:
        """``|lhs - eps a_z|``, the second-order remainder at a root."""
        return abs(self.lhs - eps * self.a_z)


def _weak_check(p: SpectralPoint):
    if not (p.m > 0 and abs(p.delta) < 1 and p.tau != 0):
        raise DomainError("weak coupling needs m > 0, |Im z| < 1 and Re z != 0")


def first_order_coefficient(p: SpectralPoint, V: MatrixPotential, grid: QuadratureGrid | None = None) -> complex:
    """``a_z = int e^{-2 eta_z(x)} <V(x), conj(Upsilon_z)>_F dx`` with ``<X, Y>_F = Tr(X Y^*)``."""
    _weak_check(p)
    grid = potential_grid(V, 16, 8.0) if grid is None else grid
    ups = weak_coupling_matrices(p)[3]
    x, w = grid.nodes, grid.weights
    frob = np.einsum("nij,ij->n", V(x), ups)  # Tr(V conj(conj(Upsilon))^T), Upsilon symmetric
    return complex(np.sum(w * cexp(-2 * eta(p, x)) * frob))


def weak_coupling_first_order(p: SpectralPoint, V: MatrixPotential, grid: QuadratureGrid | None = None,
                              with_m_bound: bool = False) -> WeakCouplingReport:
    _weak_check(p)
    _, _, _, ups = weak_coupling_matrices(p)
    a_z = first_order_coefficient(p, V, grid)
    lhs = 4 * p.m / (4 * abs(p.z) ** 2 + p.m**2)
    l1 = V.norms["L1"]
    u11, u12, u21 = ups[0, 0], ups[0, 1], ups[1, 0]
    psi_b = np.sqrt(l1) * np.sqrt(abs(u11) ** 2 + abs(u12) ** 2)
    phi_b = np.sqrt(l1) * np.sqrt(1 + abs(u21) ** 2 / abs(u11) ** 2) if u11 != 0 else np.inf
    m_b = m_operator_bound(p, V, grid) if with_m_bound else None
    return WeakCouplingReport(p.z, a_z, float(lhs), float(psi_b), float(phi_b),
                              float((1 / lhs) * l1), m_b)


def m_operator_bound(p: SpectralPoint, V: MatrixPotential, grid: QuadratureGrid | None = None) -> float:
    """Hilbert-Schmidt norm of ``M(z) = Q(z) - L(z)`` by tensor Gauss quadrature."""
    _weak_check(p)
    if V.is_zero:
        return 0.0
    grid = potential_grid(V) if grid is None else grid
    kern = _sandwich(V, lambda x, y: kernel_eval(p, x, y) - l_kernel_eval(p, x, y))
    mat = assemble_kernel(kern, grid, correct_diagonal=False)
    return float(np.linalg.norm(mat))


def first_order_root(m: float, V: MatrixPotential, eps: float, z0: complex,
                     grid: QuadratureGrid | None = None) -> complex:
    """Root of the first-order condition ``4m/(4|z|^2 + m^2) = eps a_z`` near ``z0``.

    The condition is not holomorphic in ``z``; it is solved as a real 2x2
    system in ``(Re z, Im z)``.
    """
    grid = potential_grid(V, 16, 8.0) if grid is None else grid

    def g(v):
        p = SpectralPoint(v[0], v[1], m)
        if abs(p.delta) >= 1:
            return [1e3, 1e3]
        lhs = 4 * m / (4 * abs(p.z) ** 2 + m**2)
        r = 1 - eps * first_order_coefficient(p, V, grid) / lhs  # relative form, O(1) scale
        return [r.real, r.imag]

    sol = so.root(g, [complex(z0).real, complex(z0).imag], method="hybr", tol=1e-13)
    # hybr reports a stall when started at the root; accept a negligible residual
    if not (sol.success or np.hypot(*g(sol.x)) < 1e-10):
        raise ConvergenceError(f"first-order root search failed: {sol.message}")
    return complex(sol.x[0], sol.x[1])
