"""Closed-form resolvent-norm bounds and large-``Re z`` asymptotics.

Inside the band ``|Im z| < 1`` the resolvent norm grows like
``(Re z)^2 / (m (1 - delta^2))``.  The sharp constants come from the split
``R_z = R_1 + R_2`` of the Green function: the separable part ``T_1`` has
explicit two-sided bounds and the translation-invariant part ``T_2`` a
Schur bound.  The asymptotic series of the spectral parameters give the
large-``tau`` expansions of all these quantities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kernel import _checked, profile_sup_bounds
from .params import (Region, SpectralParams, SpectralPoint, classify_region,
                     compute_params, exact_resolvent_norm_outside, in_spectrum, raw_params,
                     resolvent_norm_bounds_outside)

SERIES_TAGS = ("mu+", "mu-", "w+", "w-", "|w+|", "|w-|", "k", "Remu+/(1-delta)", "Remu-/(1+delta)")


def _side(tag: str) -> int:
    return -1 if "-" in tag.split("/")[0] else 1


def series_coefficients(tag: str, delta: float, m: float) -> dict[int, complex]:
    """Coefficients ``C_p`` (``p = 2..-4``) of the large-``tau`` expansion of a parameter.

    Odd powers are omitted where the coefficient vanishes identically.
    """
    if tag not in SERIES_TAGS:
        raise DomainError(f"unknown series tag {tag!r}")
    if tag == "k":
        d = delta
        return {2: 1j / m, 1: -2 * d / m, 0: 1j * ((1 - d**2) / m - m), -2: 1j * m,
                -3: 2 * d * m, -4: -1j * m * (1 + 3 * d**2 - m**2)}
    s = _side(tag)
    e = 1 - s * delta
    if tag.startswith("mu"):
        return {1: s * 1j, 0: e, -1: -s * 0.5j * m**2, -2: e * m**2 / 2,
                -3: -s * (1j * m**2 / 8) * (m**2 - 4 * e**2),
                -4: (m**2 / 8) * e * (3 * m**2 - 4 * e**2)}
    if tag.startswith("w"):
        return {0: s * 1j, -1: -s * 1j * m, -2: (m / 2) * (2 * e + s * 1j * m),
                -3: (m / 2) * (1j * m + s * (1 + 1j) * e) * ((1 + 1j) * e - s * m),
                -4: (m / 8) * (4 * e * (3 * m**2 - s * 3j * e * m - 2 * e**2) + s * 3j * m**3)}
    if tag.startswith("|w"):
        return {0: 1, -1: -m, -2: m**2 / 2, -3: (m / 2) * (2 * e**2 - m**2),
                -4: m**2 * (3 * m**2 / 8 - e**2)}
    return {0: 1, -2: m**2 / 2, -4: (m**2 / 8) * (3 * m**2 - 4 * e**2)}


@dataclass(frozen=True)
class AsymptoticSeries:
    tag: str
    coefficients: dict

    @classmethod
    def build(cls, tag: str, delta: float, m: float) -> "AsymptoticSeries":
        return cls(tag, series_coefficients(tag, delta, m))

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        return sum(c * tau**p for p, c in self.coefficients.items())


def _check_series_domain(tau, delta, m):
    if not (m > 0 and abs(delta) < 1 and np.all(np.abs(tau) >= 1)):
        raise DomainError("the expansions need m > 0, |delta| < 1 and |tau| >= 1")


def asymptotic_eval(tag: str, tau, delta: float, m: float):
    """Truncated expansion ``sum_{p=-4}^{2} C_p tau^p`` of one parameter."""
    _check_series_domain(tau, delta, m)
    out = AsymptoticSeries.build(tag, delta, m)(tau)
    return complex(out) if np.ndim(out) == 0 else out


def parameter_value(tag: str, tau, delta: float, m: float):
    """Exact value of the parameter named by ``tag`` (vectorised in ``tau``)."""
    if tag not in SERIES_TAGS:
        raise DomainError(f"unknown series tag {tag!r}")
    z = np.asarray(tau, dtype=float) + 1j * delta
    mu_m, mu_p, w_m, w_p, k = raw_params(m, z)
    s = _side(tag)
    mu, w = (mu_p, w_p) if s > 0 else (mu_m, w_m)
    if tag == "k":
        return k
    if tag.startswith("mu"):
        return mu
    if tag.startswith("w"):
        return w
    if tag.startswith("|w"):
        return np.abs(w)
    return mu.real / (1 - s * delta)


def series_residual(tag: str, tau, delta: float, m: float):
    """``|P - sum C_p tau^p|``, expected to decay like ``tau^-5``."""
    return np.abs(parameter_value(tag, tau, delta, m) - asymptotic_eval(tag, tau, delta, m))


# Schur and split bounds


def schur_upper_bound(p: SpectralPoint) -> float:
    """``2 sup phi_z / min(Re mu_minus, Re mu_plus)``, with ``phi_z`` majorised in closed form."""
    q = _checked(p)
    sup_neg, sup_pos = profile_sup_bounds(q)
    return 2 * max(sup_neg, sup_pos) / min(q.mu_minus.real, q.mu_plus.real)


def n_norms(q: SpectralParams) -> np.ndarray:
    """Norms ``|N_j|`` for ``j = 1..10`` from their closed forms."""
    wm, wp = abs(q.w_minus), abs(q.w_plus)
    ratio = abs((q.w_plus - q.w_minus) / (q.w_plus + q.w_minus))
    n1 = 0.5 * ratio * (wm + 1 / wm)
    n2 = 0.5 * (wm + 1 / wm)
    n3 = np.sqrt((1 + wp**2) * (1 + wm**2)) / abs(q.w_plus + q.w_minus)
    n4 = 0.5 * ratio * (wp + 1 / wp)
    n5 = 0.5 * (wp + 1 / wp)
    return np.array([n1, n2, n3, n4, n5, n5, n4, n3, n2, n1])


@dataclass(frozen=True)
class T1BoundTerms:
    A: float
    B: float
    B_tilde: float
    C: float
    D: float
    n: np.ndarray


def _csgn(c: complex) -> complex:
    return c / abs(c)


def t1_terms(p: SpectralPoint) -> T1BoundTerms:
    q = _checked(p)
    n = n_norms(q)
    rm, rp = q.mu_minus.real, q.mu_plus.real
    n1, n3, n4 = n[0], n[2], n[3]
    A = n1**2 / (4 * rm**2)
    C = n4**2 / (4 * rp**2)
    D = n3**2 / (4 * rm * rp)
    pre = n3 / (2 * np.sqrt(rp * rm))
    B = pre * (n1 / rm + n4 / rp)
    diff = q.w_plus - q.w_minus
    if diff == 0:
        Bt = 0.0
    else:
        Bt = pre * (n1 * _csgn(diff / q.w_minus).real / rm - n4 * _csgn(diff / q.w_plus).real / rp)
    return T1BoundTerms(float(A), float(B), float(Bt), float(C), float(D), n)


def _quad_form_max(A, B, C, D):
    return np.sqrt(0.5 * (np.sqrt((A - C) ** 2 + B**2) + A + C + 2 * D))


def t1_bounds(p: SpectralPoint) -> tuple[float, float]:
    """Lower and upper bounds for the norm of the separable part ``T_1``."""
    if not p.m > 0:
        raise DomainError("the split bounds need m > 0")
    t = t1_terms(p)
    return float(_quad_form_max(t.A, t.B_tilde, t.C, t.D)), float(_quad_form_max(t.A, t.B, t.C, t.D))


def t2_upper_bound(p: SpectralPoint) -> float:
    """Schur bound ``max(n_2 / Re mu_minus, n_5 / Re mu_plus)`` for ``T_2``."""
    q = _checked(p)
    n = n_norms(q)
    return float(max(n[1] / q.mu_minus.real, n[4] / q.mu_plus.real))


# Asymptotic two-sided estimates


def sharp_coefficients(delta: float, m: float) -> dict[str, float]:
    base = 0.25 * (3 + 2 * delta**2 - 2 * m**2)
    return {"P0+": base + 2 * m, "P0-": base - 2 * m,
            "P-2+": 0.25 * (3 * m**2 + delta**2 * (9 * m**2 - 8)),
            "P-2-": 0.125 * (5 * m**2 + delta**2 * (19 * m**2 - 16))}


def _band_check(p: SpectralPoint):
    if not (p.m > 0 and abs(p.delta) < 1):
        raise DomainError("band asymptotics need m > 0 and |Im z| < 1")


def sharp_two_sided(p: SpectralPoint, tau_min: float | None = None) -> tuple[float, float]:
    """Leading-order two-sided estimate of the resolvent norm in the band.

    Both expressions drop an ``O(tau^-4)`` remainder whose constant is not
    explicit, so they are offered only for ``|tau| >= tau_min`` (``10 m`` by
    default).
    """
    _band_check(p)
    tau_min = 10 * p.m if tau_min is None else tau_min
    if abs(p.tau) < tau_min:
        raise DomainError(f"|Re z| = {abs(p.tau)} is below tau_min = {tau_min}")
    c = sharp_coefficients(p.delta, p.m)
    t2 = p.tau**2
    scale = p.m * (1 - p.delta**2)
    return ((t2 + c["P0-"] + c["P-2-"] / t2) / scale, (t2 + c["P0+"] + c["P-2+"] / t2) / scale)


def coarse_two_sided(p: SpectralPoint) -> tuple[float, float]:
    """Cruder large-``tau`` estimates built from a simple pseudomode and the Schur test."""
    _band_check(p)
    m, d, t = p.m, p.delta, abs(p.tau)
    lower = (t**2 + m * t / 2 + (8 * (1 + d**2) + 4 * m * (1 + d) - m**2) / 8) / (
        2 * np.sqrt(2) * m * np.sqrt(1 - d**2))
    upper = 4 * (t**2 + (1 + d**2) / 4 + m) / (m * (1 - d**2))
    return float(lower), float(upper)


# Pseudospectral regions


def lambda_region_membership(p: SpectralPoint, alpha: float, eps: float) -> tuple[bool, bool]:
    """Membership of ``z`` in the regions ``Lambda_+`` and ``Lambda_-`` of level ``eps``."""
    if not p.m > 0:
        raise DomainError("the regions are defined for m > 0")
    if not (0 < alpha < 1 and eps > 0):
        raise DomainError("need 0 < alpha < 1 and eps > 0")
    strip = abs(p.delta) <= 1 + eps
    rhs = p.m * (1 - p.delta**2)
    return (bool(strip and p.tau**2 >= rhs / ((1 + alpha) * eps)),
            bool(strip and p.tau**2 >= rhs / ((1 - alpha) * eps)))


def perturbed_pseudospec_enclosure(m: float, v_l1: float, c_m: float, eps: float, z: complex) -> bool:
    """Whether ``z`` lies in the enclosure of the ``eps``-pseudospectrum under a small potential."""
    if not 0 < c_m <= 1:
        raise DomainError("the constant C(m) must lie in (0, 1]")
    if v_l1 >= c_m:
        raise DomainError("the enclosure needs |V|_L1 < C(m)")
    if eps < 0 or v_l1 < 0:
        raise DomainError("eps and |V|_L1 must be non-negative")
    z = complex(z)
    if abs(z.imag) <= 1.5 and abs(z.real) <= 2.5 * m:
        return True
    width = 1 + eps * (1 + v_l1 / (4 * c_m * (c_m - v_l1)))
    return abs(z.imag) <= width


def empirical_c_m(m: float, n_tau: int = 121, n_delta: int = 81, tau_max: float | None = None) -> float:
    """Grid estimate of the constant ``C(m) = min(1, 2 / c14)``.

    ``c14`` is the maximum of ``(|k| + 1) max(|w| + 1/|w|) / 2`` over the
    region U, sampled on a rectangular grid; the sample maximum only
    approximates the supremum from below.
    """
    if not m > 0:
        raise DomainError("C(m) is estimated for m > 0")
    tau_max = 6 * m + 4 if tau_max is None else tau_max
    tt, dd = np.meshgrid(np.linspace(-tau_max, tau_max, n_tau), np.linspace(-3, 3, n_delta))
    best = 0.0
    for t, d in zip(tt.ravel(), dd.ravel()):
        p = SpectralPoint(t, d, m)
        if in_spectrum(m, p.z) or classify_region(p).region is not Region.U:
            continue
        q = compute_params(p)
        wp, wm = abs(q.w_plus), abs(q.w_minus)
        best = max(best, (abs(q.k) + 1) * max(wp + 1 / wp, wm + 1 / wm) / 2)
    if best == 0.0:
        return 1.0
    return float(min(1.0, 2 / best))


def distance_to_spectrum(m: float, z: complex) -> float:
    z = complex(z)
    if m == 0:
        return max(abs(z.imag) - 1, 0.0)
    dx = max(m - abs(z.real), 0.0)
    return float(np.hypot(dx, abs(z.imag) - 1))


def resolvent_norm_enclosure(p: SpectralPoint) -> tuple[float, float, str]:
    """Rigorous ``(lower, upper, provenance)`` for the resolvent norm at ``p``.

    Off the band the closed forms are used.  In the band (``m > 0``) the
    split ``T_1 + T_2`` gives ``||T_1|| -+ ||T_2||``, combined with
    ``1/dist(z, Spec)`` from below and the Schur test from above.
    """
    m, d = p.m, abs(p.delta)
    dist = distance_to_spectrum(m, p.z)
    if dist == 0:
        return np.inf, np.inf, "CLOSED_FORM"
    if d > 1:
        exact = exact_resolvent_norm_outside(p)
        if exact is not None:
            return exact, exact, "CLOSED_FORM"
        lo, hi = resolvent_norm_bounds_outside(p)
        return lo, hi, "BOUND"
    lo1, hi1 = t1_bounds(p)
    t2 = t2_upper_bound(p)
    return (float(max(lo1 - t2, 1 / dist)), float(min(hi1 + t2, schur_upper_bound(p))), "BOUND")
