"""Spectrum of the unperturbed operator, zero-mass eigenfunctions and Weyl sequences.

For ``m > 0`` the spectrum is the pair of rays ``S_m = {|Re z| >= m, |Im z| = 1}``,
all of it continuous and essential.  For ``m = 0`` every point of the open
band ``|Im z| < 1`` is an eigenvalue of geometric multiplicity one (and
infinite algebraic multiplicity), while the two boundary lines carry the
continuous spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError

SIGMA2 = np.array([[0, -1j], [1j, 0]])
SIGMA3 = np.diag([1.0 + 0j, -1.0])


@dataclass(frozen=True)
class SpectralSet:
    """A subset of the plane given by a membership predicate."""

    description: str
    contains: Callable[[complex], bool] = field(repr=False)

    def __contains__(self, z) -> bool:
        return bool(self.contains(complex(z)))


EMPTY = SpectralSet("empty", lambda z: False)


@dataclass(frozen=True)
class SpectrumReport:
    m: float
    point: SpectralSet
    continuous: SpectralSet
    essential: tuple[SpectralSet, ...]  # e1 .. e5
    algebraic_multiplicity: str

    @property
    def spectrum(self) -> SpectralSet:
        pts, cont = self.point, self.continuous
        return SpectralSet(f"{pts.description} u {cont.description}",
                           lambda z: z in pts or z in cont)

    def classify(self, z) -> str:
        """``"point"``, ``"continuous"`` or ``"resolvent"``."""
        if z in self.point:
            return "point"
        if z in self.continuous:
            return "continuous"
        return "resolvent"


def spectrum_of(m: float) -> SpectrumReport:
    if not m >= 0:
        raise DomainError("mass must be non-negative")
    if m > 0:
        rays = SpectralSet(f"{{|Re z| >= {m}, |Im z| = 1}}",
                           lambda z: abs(z.real) >= m and abs(z.imag) == 1)
        return SpectrumReport(m, EMPTY, rays, (rays,) * 5, "none")
    lines = SpectralSet("{|Im z| = 1}", lambda z: abs(z.imag) == 1)
    band = SpectralSet("{|Im z| <= 1}", lambda z: abs(z.imag) <= 1)
    open_band = SpectralSet("{|Im z| < 1}", lambda z: abs(z.imag) < 1)
    return SpectrumReport(0.0, open_band, lines, (lines,) * 4 + (band,), "infinite")


def _band_point(z) -> complex:
    z = complex(z)
    if not abs(z.imag) < 1:
        raise DomainError("zero-mass eigenfunctions exist only for |Im z| < 1")
    return z


def eigenfunction_m0(z: complex) -> Callable[[np.ndarray], np.ndarray]:
    """Kernel vector of ``L_0 - z``; the returned callable maps ``x`` to shape ``x.shape + (2,)``."""
    z = _band_point(z)
    spinor = np.array([1, -1j])

    def v(x):
        x = np.asarray(x, dtype=float)
        rate = np.where(x <= 0, 1 - 1j * z, -(1 + 1j * z))
        return np.exp(rate * x)[..., None] * spinor

    return v


def adjoint_eigenfunction_m0(z: complex) -> Callable[[np.ndarray], np.ndarray]:
    """Kernel vector of ``L_0^* - z``."""
    z = _band_point(z)
    spinor = np.array([1, 1j])

    def v(x):
        x = np.asarray(x, dtype=float)
        rate = np.where(x <= 0, 1 + 1j * z, -(1 - 1j * z))
        return np.exp(rate * x)[..., None] * spinor

    return v


def eigenfunction_norm_sq_m0(z: complex) -> float:
    """``||v_z||^2 = 2 / (2 (1 + Im z)) + 2 / (2 (1 - Im z))``."""
    d = _band_point(z).imag
    return 1 / (1 + d) + 1 / (1 - d)


def apply_operator(m: float, x, psi, dpsi, adjoint: bool = False):
    """Pointwise ``L_m psi`` from values and derivatives, ``x`` away from 0.

    ``psi`` and ``dpsi`` have shape ``x.shape + (2,)``.
    """
    x = np.asarray(x, dtype=float)
    s = np.sign(x)[..., None]
    out = -1j * dpsi @ SIGMA2.T + m * psi @ SIGMA3.T
    return out + (-1j if adjoint else 1j) * s * psi


# Weyl sequences


def cutoff(n: int, x):
    """Trapezoidal cut-off: ramps up on [n, n+1], flat to 2n+1, down on [2n+1, 2n+2]."""
    x = np.asarray(x, dtype=float)
    return np.clip(np.minimum(x - n, 2 * n + 2 - x), 0, 1)


def cutoff_slope(n: int, x):
    x = np.asarray(x, dtype=float)
    return np.where((x > n) & (x < n + 1), 1.0, 0.0) - np.where((x > 2 * n + 1) & (x < 2 * n + 2), 1.0, 0.0)


def weyl_plane_wave(m: float, tau: float):
    """Amplitude and wave number of the free plane wave at energy ``tau``.

    For ``m = tau = 0`` the constant spinor ``(1, 0)`` is used.
    """
    if m == 0 and tau == 0:
        return np.array([1.0 + 0j, 0.0]), 0.0
    amp = np.array([np.sqrt(abs(m + tau)), 1j * np.sign(tau) * np.sqrt(abs(m - tau))])
    return amp, float(np.sqrt(tau**2 - m**2))


def weyl_vector(m: float, tau: float, sign: int, n: int):
    """``(psi, dpsi)`` callables of the normalised Weyl vector supported on ``sign * x > 0``."""
    if not m >= 0 or abs(tau) < m:
        raise DomainError("Weyl vectors are built for |tau| >= m >= 0")
    if sign not in (1, -1) or n < 1:
        raise DomainError("need sign = +1 or -1 and n >= 1")
    amp, kappa = weyl_plane_wave(m, tau)
    c_n = 1 / np.sqrt(float(np.vdot(amp, amp).real) * (n + 2 / 3))

    def psi(x):
        x = np.asarray(x, dtype=float)
        return (c_n * cutoff(n, sign * x) * np.exp(1j * kappa * x))[..., None] * amp

    def dpsi(x):
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * kappa * x)
        d = sign * cutoff_slope(n, sign * x) + 1j * kappa * cutoff(n, sign * x)
        return (c_n * d * phase)[..., None] * amp

    return psi, dpsi


def _support_rule(n: int, sign: int, per_unit: int = 32):
    """Gauss-Legendre nodes on the support, one 32-node rule per unit interval."""
    t, w = np.polynomial.legendre.leggauss(per_unit)
    left = np.arange(n, 2 * n + 2, dtype=float)
    x = (left[:, None] + 0.5 * (t + 1)).ravel()
    wts = np.tile(0.5 * w, left.size)
    return sign * x, wts


def weyl_residual(m: float, tau: float, sign: int, n: int, return_norm: bool = False):
    """Quadrature value of ``||(L_m - (tau + sign i)) Psi_n||``.

    The operator is applied in full (derivative, mass and dislocation terms)
    rather than through the commutator identity.  With ``return_norm`` the
    quadrature value of ``||Psi_n||`` is returned as well.
    """
    psi, dpsi = weyl_vector(m, tau, sign, n)
    x, w = _support_rule(n, sign)
    vals = psi(x)
    res = apply_operator(m, x, vals, dpsi(x)) - complex(tau, sign) * vals
    out = float(np.sqrt(np.sum(w * np.sum(np.abs(res) ** 2, axis=-1))))
    if return_norm:
        return out, float(np.sqrt(np.sum(w * np.sum(np.abs(vals) ** 2, axis=-1))))
    return out


def weyl_residual_exact(n: int) -> float:
    return float(np.sqrt(2 / (n + 2 / 3)))
