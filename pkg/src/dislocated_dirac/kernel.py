"""Closed-form Green function of the dislocated Dirac operator.

The integral kernel of ``(L_m - z)^{-1}`` is a 2x2 matrix built from ten
rank-one matrices ``N_1..N_10`` and exponentials in ``x`` and ``y``:
``R_z(x, y) = -sum_j N_j exp(...)``, the minus sign making ``(L_m - z) R_z f = f``.  The
formula changes with the signs of ``x``, ``y`` and with their order.  On
the lines ``x = y``, ``x = 0`` and ``y = 0`` we return the value of the
region with ``y < x`` and non-positive coordinates, which is a limit of
the neighbouring formulas.

All evaluators broadcast over array arguments ``x`` and ``y`` and return
arrays of shape ``broadcast(x, y).shape + (2, 2)``.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .params import SpectralParams, SpectralPoint, compute_params, in_spectrum

EXP_FLOOR = -700.0  # below this exp(.) would be denormal or zero


def cexp(a):
    """``exp(a)``, flushed to an exact zero where ``Re a < EXP_FLOOR`` (no denormals)."""
    a = np.asarray(a, dtype=complex)
    mag = np.where(a.real < EXP_FLOOR, 0.0, np.exp(np.maximum(a.real, EXP_FLOOR)))
    return mag * (np.cos(a.imag) + 1j * np.sin(a.imag))


def n_matrix(j: int, q: SpectralParams) -> np.ndarray:
    """The matrix ``N_j`` (``j = 1..10``) multiplying one exponential of the kernel."""
    wm, wp, k = q.w_minus, q.w_plus, q.k
    s = wp + wm
    if j in (1, 10):
        return 0.5 * k * np.array([[1 / wm, 1], [1, wm]])
    if j == 2:
        return 0.5 * np.array([[-1 / wm, -1], [1, wm]])
    if j == 3:
        return np.array([[-1, -wm], [wp, wp * wm]]) / s
    if j in (4, 7):
        return 0.5 * k * np.array([[-1 / wp, 1], [1, -wp]])
    if j == 5:
        return 0.5 * np.array([[-1 / wp, -1], [1, wp]])
    if j == 6:
        return 0.5 * np.array([[-1 / wp, 1], [-1, wp]])
    if j == 8:
        return np.array([[-1, wp], [-wm, wp * wm]]) / s
    if j == 9:
        return 0.5 * np.array([[-1 / wm, 1], [-1, wm]])
    raise ValueError(f"N_j is defined for j = 1..10, got {j}")


def _checked(p: SpectralPoint) -> SpectralParams:
    if in_spectrum(p.m, p.z):
        raise DomainError(f"z={p.z} lies in the spectrum for m={p.m}")
    return compute_params(p)


def region_masks(x, y):
    """Boolean masks of the six kernel regions, with the boundary convention.

    Order: ``y<x<0``, ``y<0<x``, ``0<y<x``, ``0<x<y``, ``x<0<y``, ``x<y<0``.
    """
    xneg, yneg, low = x <= 0, y <= 0, y <= x
    return (xneg & yneg & low, yneg & ~xneg, ~xneg & ~yneg & low,
            ~xneg & ~yneg & ~low, xneg & ~yneg, xneg & yneg & ~low)


def _terms(q: SpectralParams):
    """Per region: list of (j, exponent function, part) with part 1 or 2."""
    mm, mp = q.mu_minus, q.mu_plus
    return (
        [(1, lambda x, y: mm * (x + y), 1), (2, lambda x, y: -mm * (x - y), 2)],
        [(3, lambda x, y: -mp * x + mm * y, 1)],
        [(4, lambda x, y: -mp * (x + y), 1), (5, lambda x, y: -mp * (x - y), 2)],
        [(6, lambda x, y: mp * (x - y), 2), (7, lambda x, y: -mp * (x + y), 1)],
        [(8, lambda x, y: mm * x - mp * y, 1)],
        [(9, lambda x, y: mm * (x - y), 2), (10, lambda x, y: mm * (x + y), 1)],
    )


def _assemble(q: SpectralParams, x, y, parts=(1, 2)):
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    out = np.zeros(x.shape + (2, 2), dtype=complex)
    for mask, terms in zip(region_masks(x, y), _terms(q)):
        if not mask.any():
            continue
        xs, ys = x[mask], y[mask]
        acc = np.zeros(xs.shape + (2, 2), dtype=complex)
        for j, expo, part in terms:
            if part in parts:
                acc -= cexp(expo(xs, ys))[:, None, None] * n_matrix(j, q)
        out[mask] = acc
    return out


def kernel_eval(p: SpectralPoint, x, y) -> np.ndarray:
    """The Green function ``R_z(x, y)`` as 2x2 matrices."""
    return _assemble(_checked(p), x, y)


def kernel_split_eval(p: SpectralPoint, x, y) -> tuple[np.ndarray, np.ndarray]:
    """The split ``R_z = R_1 + R_2``.

    ``R_1`` collects the terms in ``x + y`` and the mixed-sign terms, which
    carry the quadratic growth inside the band; ``R_2`` is the translation
    invariant remainder and vanishes when ``x`` and ``y`` have opposite signs.
    """
    q = _checked(p)
    return _assemble(q, x, y, parts=(1,)), _assemble(q, x, y, parts=(2,))


def kernel_parts_eval(p: SpectralPoint, x, y, parts=(1, 2)) -> np.ndarray:
    """Kernel restricted to the requested parts (``(1,)``, ``(2,)`` or both)."""
    return _assemble(_checked(p), x, y, parts=tuple(parts))


def norm_profile(q: SpectralParams, t):
    """The profile ``phi_z(t)`` with ``|R_z(x,y)| = phi_z(.) e^{-Re mu |x-y|}``.

    Evaluated from its own two-branch formula, independently of the N_j.
    """
    t = np.asarray(t, dtype=float)
    k, wm, wp = q.k, q.w_minus, q.w_plus
    out = np.empty(t.shape)
    neg = t <= 0
    tn, tp = t[neg], t[~neg]
    e = k * cexp(2 * q.mu_minus * tn)
    out[neg] = (np.sqrt(1 + abs(wm) ** 2) / 2
                * np.sqrt(np.abs(e - 1) ** 2 / abs(wm) ** 2 + np.abs(e + 1) ** 2))
    e = k * cexp(-2 * q.mu_plus * tp)
    out[~neg] = (np.sqrt(1 + abs(wp) ** 2) / 2
                 * np.sqrt(np.abs(e + 1) ** 2 / abs(wp) ** 2 + np.abs(e - 1) ** 2))
    return out if out.ndim else float(out)


def profile_at_zero(q: SpectralParams) -> float:
    return float(np.sqrt((1 + abs(q.w_plus) ** 2) * (1 + abs(q.w_minus) ** 2))
                 / abs(q.w_plus + q.w_minus))


def profile_sup_bounds(q: SpectralParams) -> tuple[float, float]:
    """Bounds for ``sup phi_z`` on the negative and on the positive half-line."""
    a = abs(q.k) + 1
    return (0.5 * a * (abs(q.w_minus) + 1 / abs(q.w_minus)),
            0.5 * a * (abs(q.w_plus) + 1 / abs(q.w_plus)))


def kernel_norm(p: SpectralPoint, x, y):
    """Operator norm of ``R_z(x, y)`` from the closed-form profile."""
    q = _checked(p)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    rm, rp = q.mu_minus.real, q.mu_plus.real
    phi0 = profile_at_zero(q)
    out = np.empty(x.shape)
    xn, yn = x <= 0, y <= 0
    both_n, both_p = xn & yn, ~xn & ~yn
    out[both_n] = (norm_profile(q, np.maximum(x, y)[both_n])
                   * np.exp(-rm * np.abs(x - y)[both_n]))
    out[both_p] = (norm_profile(q, np.minimum(x, y)[both_p])
                   * np.exp(-rp * np.abs(x - y)[both_p]))
    mixed = ~(both_n | both_p)
    out[mixed] = phi0 * np.exp(-rp * np.abs(np.where(xn, y, x)[mixed])
                               - rm * np.abs(np.where(xn, x, y)[mixed]))
    return out if out.ndim else float(out)


def weak_coupling_matrices(p: SpectralPoint):
    """The rank-one matrices of the weak-coupling reduction.

    Returns ``(U, U0, U1, Upsilon)`` where ``U = U0 + U1`` and
    ``Upsilon = U / |U|_F``.
    """
    m, z, t, d = p.m, p.z, p.tau, p.delta
    if not m > 0:
        raise DomainError("weak-coupling matrices need m > 0")
    off = 1j * (4 * z**2 - m**2)
    core = np.array([[-(2 * z + m) ** 2, off], [off, (2 * z - m) ** 2]])
    u = core / (8 * m)
    u0_off = 1j * t**2 / (2 * m) - d * t / m
    u0 = np.array([[-t**2 / (2 * m) - (0.5 + 1j * d / m) * t, u0_off],
                   [u0_off, t**2 / (2 * m) - (0.5 - 1j * d / m) * t]])
    u1_off = -1j * (d**2 / (2 * m) + m / 8)
    u1 = np.array([[d**2 / (2 * m) - m / 8 - 0.5j * d, u1_off],
                   [u1_off, -d**2 / (2 * m) + m / 8 - 0.5j * d]])
    ups = core / (2 * (4 * abs(z) ** 2 + m**2))
    return u, u0, u1, ups


def eta(p: SpectralPoint, w):
    """``eta_z(w) = i (z - m^2/(2 Re z)) w + |w|``."""
    if p.tau == 0:
        raise DomainError("eta_z needs Re z != 0")
    w = np.asarray(w, dtype=float)
    return 1j * (p.z - p.m**2 / (2 * p.tau)) * w + np.abs(w)


def l_kernel_eval(p: SpectralPoint, x, y) -> np.ndarray:
    """Separable approximation ``-e^{-eta(x) - eta(y)} U_z`` of ``R_1`` in the band.

    ``R_1`` minus this kernel stays bounded by ``C (|x| + |y| + 1)``
    uniformly in large ``Re z``.
    """
    if not (p.m > 0 and abs(p.delta) < 1):
        raise DomainError("the separable kernel needs m > 0 and |Im z| < 1")
    u = weak_coupling_matrices(p)[0]
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return -cexp(-eta(p, x) - eta(p, y))[..., None, None] * u
