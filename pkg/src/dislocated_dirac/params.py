"""Spectral parameters of the dislocated Dirac operator.

The operator is ``L_m = -i d/dx sigma_2 + m sigma_3 + i sgn(x)`` on L^2(R)^2.
For a spectral point ``z = tau + i delta`` everything in the package is
built from a handful of scalars: the decay rates ``mu_minus``/``mu_plus``
on the two half-lines, the eigenvector slopes ``w_minus``/``w_plus`` and the
mixing coefficient ``k``.  All square roots use the principal branch.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BranchPointError, DomainError

TOL_BRANCH = 1e-8


def sqrt_principal(c):
    """Principal square root, holomorphic off the negative real axis.

    On the negative reals the result is ``+i sqrt(|c|)``; numpy already
    follows this convention for complex input, so only the dtype is forced.
    """
    return np.sqrt(np.asarray(c, dtype=complex)) if np.ndim(c) else complex(np.sqrt(complex(c)))


@dataclass(frozen=True)
class SpectralPoint:
    """A point ``z = tau + i delta`` together with the mass ``m``."""

    tau: float
    delta: float
    m: float

    def __post_init__(self):
        if not self.m >= 0:
            raise DomainError(f"mass must be non-negative, got {self.m}")

    @classmethod
    def from_complex(cls, z: complex, m: float) -> "SpectralPoint":
        z = complex(z)
        return cls(z.real, z.imag, float(m))

    @property
    def z(self) -> complex:
        return complex(self.tau, self.delta)


@dataclass(frozen=True)
class SpectralParams:
    mu_minus: complex
    mu_plus: complex
    w_minus: complex
    w_plus: complex
    k: complex
    eta_minus: complex
    eta_plus: complex
    mu0: complex | None = None
    w0: complex | None = None


def corners(m: float) -> tuple[complex, ...]:
    """The four branch points ``m+i, m-i, -m+i, -m-i``."""
    return (complex(m, 1), complex(m, -1), complex(-m, 1), complex(-m, -1))


def near_branch_point(z, m, tol=TOL_BRANCH):
    z = np.asarray(z, dtype=complex)
    d = np.min([np.abs(z - c) for c in corners(m)], axis=0)
    return d < tol


def raw_params(m, z):
    """Vectorised ``(mu_minus, mu_plus, w_minus, w_plus, k)`` without checks.

    ``w`` is formed as a quotient of square roots, never as the root of a
    quotient.
    """
    z = np.asarray(z, dtype=complex)
    mu_m = np.sqrt((m + 1j + z) * (m - 1j - z))
    mu_p = np.sqrt((m - 1j + z) * (m + 1j - z))
    w_m = np.sqrt(m - 1j - z) / np.sqrt(m + 1j + z)
    w_p = np.sqrt(m + 1j - z) / np.sqrt(m - 1j + z)
    with np.errstate(divide="ignore", invalid="ignore"):  # w+ + w- = 0 in the m = 0 band
        k = (w_p - w_m) / (w_p + w_m)
    return mu_m, mu_p, w_m, w_p, k


def step_params(m, z, b):
    """``(mu0, w0)`` for the constant shift ``-b`` inside a step potential."""
    z = np.asarray(z, dtype=complex)
    mu0 = np.sqrt((m + b + z) * (m - b - z))
    w0 = np.sqrt(m - b - z) / np.sqrt(m + b + z)
    return mu0, w0


def eta_rates(p: SpectralPoint) -> tuple[complex, complex]:
    """Exponents of the rank-one weak-coupling kernel on each half-line."""
    if p.tau == 0:
        return complex(np.nan, np.nan), complex(np.nan, np.nan)
    shift = p.tau - p.m**2 / (2 * p.tau)
    return complex(1 + p.delta, -shift), complex(1 - p.delta, shift)


def compute_params(p: SpectralPoint, step_offset: float | None = None) -> SpectralParams:
    """Evaluate every scalar parameter attached to ``p``.

    Raises
    ------
    BranchPointError
        If ``z`` is within ``TOL_BRANCH`` of one of ``+-m +- i``.
    """
    z = p.z
    if near_branch_point(z, p.m):
        raise BranchPointError(f"z={z} is a branch point for m={p.m}")
    mu_m, mu_p, w_m, w_p, k = (complex(v) for v in raw_params(p.m, z))
    eta_m, eta_p = eta_rates(p)
    mu0 = w0 = None
    if step_offset is not None:
        mu0, w0 = (complex(v) for v in step_params(p.m, z, step_offset))
    return SpectralParams(mu_m, mu_p, w_m, w_p, k, eta_m, eta_p, mu0, w0)


@dataclass(frozen=True)
class BranchLimits:
    """Finite limits of the parameters when z tends to a corner.

    ``None`` marks a slope that diverges at this corner; the bounded
    product or quotient that replaces it is given by ``finite_combination``.
    """

    corner: complex
    w_plus: complex | None
    w_minus: complex | None
    mu_plus: complex
    mu_minus: complex
    k: complex
    finite_combination: tuple[str, complex]


def limit_params_at_branch(corner: str, m: float) -> BranchLimits:
    """Limits at ``corner`` in ``{"m+i", "m-i", "-m+i", "-m-i"}`` for m > 0."""
    if not m > 0:
        raise DomainError("branch limits need m > 0")
    s = np.sqrt
    r = s(m**2 + 1)
    if corner == "m+i":
        return BranchLimits(complex(m, 1), 0j, s(-1 - 1j * m) / r, 0j,
                            2 * s(1 - 1j * m), -1 + 0j, ("mu_plus/w_plus", 2 * m + 0j))
    if corner == "m-i":
        return BranchLimits(complex(m, -1), s(-1 + 1j * m) / r, 0j,
                            2 * s(1 + 1j * m), 0j, 1 + 0j, ("mu_minus/w_minus", 2 * m + 0j))
    if corner == "-m+i":
        return BranchLimits(complex(-m, 1), None, s(-1 - 1j * m), 0j,
                            2 * s(1 + 1j * m), 1 + 0j, ("mu_plus*w_plus", 2 * m + 0j))
    if corner == "-m-i":
        return BranchLimits(complex(-m, -1), s(-1 + 1j * m), None,
                            2 * s(1 - 1j * m), 0j, -1 + 0j, ("mu_minus*w_minus", 2 * m + 0j))
    raise DomainError(f"unknown corner {corner!r}")


class Region(enum.Enum):
    SPECTRUM = "SPECTRUM_S_m"
    BAND = "INSTABILITY_BAND"
    D = "REGION_D"
    W = "REGION_W"
    U = "REGION_U"
    OUTSIDE = "OUTSIDE_NUMRANGE"


class RegionTag(NamedTuple):
    region: Region
    corner: complex | None = None


def in_spectrum(m, z):
    """Membership in the spectrum: closed band for m=0, rays otherwise."""
    z = np.asarray(z, dtype=complex)
    if m == 0:
        return np.abs(z.imag) <= 1
    return (np.abs(z.real) >= m) & (np.abs(z.imag) == 1)


def classify_region(p: SpectralPoint) -> RegionTag:
    """Tag ``p`` with the spectrum or the proof region containing it.

    For m > 0 the resolvent set is split into the four closed corner boxes
    D (tested first), the strip W and the remainder U.  The band tag is
    kept for completeness but never returned: the boxes and W already
    partition the band.  For m = 0 the answer is the closed band or its
    complement.
    """
    m, z = p.m, p.z
    if m == 0:
        return RegionTag(Region.SPECTRUM if abs(p.delta) <= 1 else Region.OUTSIDE)
    if in_spectrum(m, z):
        return RegionTag(Region.SPECTRUM)
    for c in corners(m):
        if abs((z - c).real) <= 1.5 * m and abs((z - c).imag) <= 1.5:
            return RegionTag(Region.D, c)
    if abs(p.tau) >= 2.5 * m and abs(p.delta) < 1:
        return RegionTag(Region.W)
    return RegionTag(Region.U)


def exact_resolvent_norm_outside(p: SpectralPoint) -> float | None:
    """``1/(|Im z| - 1)`` above and below the band when ``|Re z| >= m``.

    Returns ``None`` for ``|Re z| < m`` where only two-sided bounds exist.
    """
    if abs(p.delta) <= 1:
        raise DomainError("the exact norm formula needs |Im z| > 1")
    if abs(p.tau) >= p.m:
        return 1.0 / (abs(p.delta) - 1.0)
    return None


def resolvent_norm_bounds_outside(p: SpectralPoint) -> tuple[float, float]:
    """Two-sided bounds above/below the band when ``|Re z| < m``."""
    if abs(p.delta) <= 1:
        raise DomainError("needs |Im z| > 1")
    lo = 1.0 / np.hypot(abs(p.tau) - p.m, abs(p.delta) - 1)
    return float(lo), 1.0 / (abs(p.delta) - 1.0)
