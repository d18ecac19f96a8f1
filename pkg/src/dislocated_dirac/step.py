"""Eigenvalues of the operator with the step potential ``(-i sgn(x) - b) 1_{[-a, a]}``.

Inside ``[-a, a]`` the potential cancels the dislocation and shifts the
energy by ``-b``, so an eigenfunction is a free Dirac solution there,
glued continuously at ``+-a`` to solutions decaying at ``+-infinity``.  The
gluing gives a 6x6 homogeneous system whose determinant is, up to
non-vanishing factors, the scalar eigenvalue equation.  For real ``z`` the
equation becomes ``cot(2 a s) = +-S(z)`` with ``s = sqrt((z + b)^2 - m^2)``,
whose branches produce one root per half-period ``pi / (2a)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize as so

from .errors import DomainError, NotAnEigenvalueError, SpecialPointError, WindowError
from .params import step_params
from .potential import MatrixPotential
from .spectrum import apply_operator

SPECIAL_TOL = 1e-10


def _slopes(m, z):
    """``(mu-, mu+, w-, w+)`` of the outer pieces."""
    z = np.asarray(z, dtype=complex)
    mu_m = np.sqrt((m + 1j + z) * (m - 1j - z))
    mu_p = np.sqrt((m - 1j + z) * (m + 1j - z))
    w_m = np.sqrt(m - 1j - z) / np.sqrt(m + 1j + z)
    w_p = np.sqrt(m + 1j - z) / np.sqrt(m - 1j + z)
    return mu_m, mu_p, w_m, w_p


def on_rays(m, z) -> bool:
    """``|Im z| = 1`` and ``|Re z| >= m``: never an eigenvalue of the perturbed operator."""
    z = complex(z)
    return abs(z.imag) == 1 and abs(z.real) >= m


@dataclass(frozen=True)
class StepConfig:
    a: float
    b: float
    m: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("half-width a must be positive")
        if not self.m >= 0:
            raise DomainError("mass must be non-negative")

    @property
    def special_points(self) -> tuple[float, float]:
        return (self.m - self.b, -self.m - self.b)

    def potential(self) -> MatrixPotential:
        eye = np.eye(2)
        return MatrixPotential.step([(-self.a, 0.0, (1j - self.b) * eye),
                                     (0.0, self.a, (-1j - self.b) * eye)])


# Fundamental matrices


@dataclass(frozen=True)
class FundamentalMatrix:
    """``Phi(x) = exp(A x)`` for the constant first-order system on one piece.

    The generator is off-diagonal with ``A^2 = mu^2 I``, so
    ``exp(A x) = cosh(mu x) I + sinh(mu x)/mu A``; this form is even in
    ``mu`` and stays valid at ``mu = 0``, where it reduces to ``I + A x``.
    """

    mu: complex
    w: complex
    generator: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        mx = self.mu * x
        c = np.cosh(mx)
        with np.errstate(invalid="ignore", divide="ignore"):
            s = np.where(np.abs(mx) < 1e-8, x * (1 + mx**2 / 6), np.sinh(mx) / self.mu)
        return c[..., None, None] * np.eye(2) + s[..., None, None] * self.generator


def fundamental_matrix(cfg: StepConfig, z: complex, piece: str) -> FundamentalMatrix:
    """Fundamental matrix on ``piece`` in ``{"-", "0", "+"}`` (left, inside, right)."""
    m, z = cfg.m, complex(z)
    if piece == "-":
        mu, _, w, _ = _slopes(m, z)
        gen = np.array([[0, m + 1j + z], [m - 1j - z, 0]])
    elif piece == "+":
        _, mu, _, w = _slopes(m, z)
        gen = np.array([[0, m - 1j + z], [m + 1j - z, 0]])
    elif piece == "0":
        mu, w = step_params(m, z, cfg.b)
        gen = np.array([[0, m + cfg.b + z], [m - cfg.b - z, 0]])
    else:
        raise DomainError(f"unknown piece {piece!r}")
    return FundamentalMatrix(complex(mu), complex(w), gen)


def _s_t(w):
    s = 0.5 * np.array([[1, 1 / w], [w, 1]])
    t = 0.5 * np.array([[1, -1 / w], [-w, 1]])
    return s, t


# Eigenvalue equation


def _check_z(cfg: StepConfig, z: complex) -> complex:
    z = complex(z)
    if min(abs(z - s) for s in cfg.special_points) < SPECIAL_TOL:
        raise SpecialPointError(f"z={z} is a special point; use eigen_special_points")
    if on_rays(cfg.m, z):
        raise DomainError(f"z={z} lies on the continuous spectrum")
    return z


def eigen_equation_residual(cfg: StepConfig, z: complex) -> complex:
    """``e^{4 a mu0}(w0 + w+)(w0 + w-) - (w0 - w+)(w0 - w-)``."""
    z = _check_z(cfg, z)
    _, _, wm, wp = _slopes(cfg.m, z)
    mu0, w0 = step_params(cfg.m, z, cfg.b)
    return complex(np.exp(4 * cfg.a * mu0) * (w0 + wp) * (w0 + wm) - (w0 - wp) * (w0 - wm))


def eigen_special_points(cfg: StepConfig, tol: float = 1e-8) -> list[tuple[complex, bool, complex]]:
    """Conditions at ``z = m - b`` and ``z = -m - b``.

    Returns ``(z, is_eigenvalue, condition_value)`` for both points.  Points
    on the unperturbed spectrum are reported as non-eigenvalues.
    """
    m, a = cfg.m, cfg.a
    out = []
    for z, plus in ((m - cfg.b, True), (-m - cfg.b, False)):
        z = complex(z)
        if on_rays(m, z):
            out.append((z, False, complex(np.nan)))
            continue
        _, _, wm, wp = _slopes(m, z)
        val = wp + wm + 4 * a * m * wp * wm if plus else wp + wm + 4 * a * m
        out.append((z, bool(abs(val) < tol), complex(val)))
        if m == 0:
            break  # the two points coincide
    return out


def step_matrix(cfg: StepConfig, z: complex) -> np.ndarray:
    """The 6x6 gluing matrix acting on ``(alpha_-, beta_-, alpha_0, beta_0, alpha_+, beta_+)``."""
    z = complex(z)
    a = cfg.a
    mu_m, mu_p, wm, wp = _slopes(cfg.m, z)
    mu0, w0 = step_params(cfg.m, z, cfg.b)
    em, ep = np.exp(-mu_m * a), np.exp(-mu_p * a)
    cp, cm = np.exp(mu0 * a) + np.exp(-mu0 * a), np.exp(mu0 * a) - np.exp(-mu0 * a)
    return np.array([
        [-wm, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, wp, 1],
        [em, em / wm, -cp, cm / w0, 0, 0],
        [wm * em, em, w0 * cm, -cp, 0, 0],
        [0, 0, cp, cm / w0, -ep, ep / wp],
        [0, 0, w0 * cm, cp, wp * ep, -ep],
    ], dtype=complex)


def step_matrix_scaled_det(cfg: StepConfig, z: complex) -> complex:
    """Determinant of the gluing matrix with every row normalised to unit length."""
    mat = step_matrix(cfg, z)
    mat = mat / np.linalg.norm(mat, axis=1, keepdims=True)
    return complex(np.linalg.det(mat))


# Real eigenvalues


def s_function(cfg: StepConfig, z):
    """The real function ``S(z)`` of the cotangent form, from its closed expression."""
    m, b = cfg.m, cfg.b
    z = np.asarray(z, dtype=float)
    root = np.sqrt((z + m + b) / (z - m + b))
    num = (z - m + b) * np.sqrt((z + m) ** 2 + 1) - (z + m + b) * np.sqrt((z - m) ** 2 + 1)
    den = 2 * (z + m + b) * np.real(np.sqrt(z + m + 1j + 0j) * np.sqrt(m + 1j - z + 0j))
    return root * num / den


def cotangent_rhs(cfg: StepConfig, z):
    """``-i (w0^2 + w+ w-) / (w0 (w+ + w-))`` from the slopes directly."""
    z = np.asarray(z, dtype=complex)
    _, _, wm, wp = _slopes(cfg.m, z)
    _, w0 = step_params(cfg.m, z, cfg.b)
    return -1j * (w0**2 + wp * wm) / (w0 * (wp + wm))


def _phase(cfg: StepConfig, z):
    return np.sqrt((np.asarray(z, dtype=float) + cfg.b) ** 2 - cfg.m**2)


def real_eigenvalue_scan(cfg: StepConfig, window: tuple[float, float], xtol: float = 1e-12,
                         check_tol: float = 1e-8) -> list[float]:
    """Real eigenvalues in ``window`` from the cotangent form.

    Between consecutive poles of ``cot(2 a s)`` the function
    ``cot(2 a s) -+ S`` runs from ``+inf`` to ``-inf`` (for ``z > m - b``), so
    each branch is bracketed and solved with Brent's method.
    """
    if not cfg.m > 0:
        raise DomainError("the real scan needs m > 0")
    lo, hi = sorted(float(v) for v in window)
    upper, lower = cfg.m - cfg.b, -cfg.m - cfg.b
    if lo >= upper:
        sign = 1.0
    elif hi <= lower:
        sign = -1.0
    else:
        raise WindowError(f"window {window} meets the gap [{lower}, {upper}] around the special points")

    def f(z):
        return 1 / np.tan(2 * cfg.a * _phase(cfg, z)) - sign * s_function(cfg, z)

    def z_of_phase(s):
        return sign * np.sqrt(s**2 + cfg.m**2) - cfg.b

    s_lo, s_hi = sorted((_phase(cfg, lo), _phase(cfg, hi)))
    half = np.pi / (2 * cfg.a)
    roots = []
    for k in range(int(np.floor(s_lo / half)), int(np.ceil(s_hi / half)) + 1):
        a_s, b_s = max(k * half, s_lo), min((k + 1) * half, s_hi)
        if a_s >= b_s:
            continue
        shrink = 1e-13 * half
        za, zb = sorted((z_of_phase(a_s + (shrink if a_s == k * half else 0)),
                         z_of_phase(b_s - (shrink if b_s == (k + 1) * half else 0))))
        fa, fb = f(za), f(zb)
        if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0:
            continue
        r = so.brentq(f, za, zb, xtol=xtol, rtol=4 * np.finfo(float).eps)
        if abs(f(r)) > 1e-6 * max(1.0, abs(f(za)), abs(f(zb))):
            continue  # sign change across a pole of S, not a root
        if abs(eigen_equation_residual(cfg, r)) > check_tol:
            continue  # the cotangent form picked up a spurious crossing
        roots.append(float(r))
    return sorted(roots)


# Eigenfunctions


@dataclass(frozen=True)
class StepEigenfunction:
    cfg: StepConfig
    z: complex
    coefficients: np.ndarray  # (alpha_-, beta_-, alpha_0, beta_0, alpha_+, beta_+)
    continuity_mismatch: float
    decay_rates: tuple[float, float]
    sigma_ratio: float

    def _pieces(self):
        cfg, z = self.cfg, self.z
        c = self.coefficients
        special = min(abs(z - s) for s in cfg.special_points) < SPECIAL_TOL
        out = {}
        for key, sl in (("-", slice(0, 2)), ("+", slice(4, 6))):
            fm = fundamental_matrix(cfg, z, key)
            out[key] = (fm, c[sl])
        out["0"] = (None if special else fundamental_matrix(cfg, z, "0"), c[2:4])
        return out, special

    def __call__(self, x):
        """Eigenfunction values, shape ``x.shape + (2,)``."""
        return self._evaluate(x)[0]

    def derivative(self, x):
        return self._evaluate(x)[1]

    def _evaluate(self, x):
        x = np.asarray(x, dtype=float)
        pieces, special = self._pieces()
        val = np.zeros(x.shape + (2,), dtype=complex)
        der = np.zeros_like(val)
        a = self.cfg.a
        masks = {"-": x < -a, "0": (x >= -a) & (x <= a), "+": x > a}
        for key, mask in masks.items():
            fm, coef = pieces[key]
            xs = x[mask]
            if key == "0" and special:
                m = self.cfg.m
                if abs(self.z - self.cfg.special_points[0]) < SPECIAL_TOL:
                    val[mask] = np.stack([coef[0] + 2 * m * xs * coef[1], np.full(xs.shape, coef[1])], -1)
                    der[mask] = np.stack([np.full(xs.shape, 2 * m * coef[1]), np.zeros(xs.shape)], -1)
                else:
                    val[mask] = np.stack([np.full(xs.shape, coef[0]), 2 * m * xs * coef[0] + coef[1]], -1)
                    der[mask] = np.stack([np.zeros(xs.shape), np.full(xs.shape, 2 * m * coef[0])], -1)
                continue
            phi = fm(xs)
            v = phi @ coef
            val[mask] = v
            der[mask] = v @ fm.generator.T
        return val, der

    def residual(self, x):
        """Pointwise ``(L_m + V - z) u`` from the analytic derivative; ``x`` off the kinks."""
        x = np.asarray(x, dtype=float)
        u, du = self._evaluate(x)
        pot = self.cfg.potential()(x)
        return apply_operator(self.cfg.m, x, u, du) + np.einsum("...ij,...j->...i", pot, u) - self.z * u


def _special_matrix(cfg: StepConfig, z: complex) -> np.ndarray:
    """Gluing matrix at ``z = +-m - b`` with the polynomial inside solution."""
    a, m = cfg.a, cfg.m
    mu_m, mu_p, wm, wp = _slopes(m, z)
    if abs(z - cfg.special_points[0]) < SPECIAL_TOL:
        inner = lambda x: np.array([[1, 2 * m * x], [0, 1]])  # noqa: E731
    else:
        inner = lambda x: np.array([[1, 0], [2 * m * x, 1]])  # noqa: E731
    sm, _ = _s_t(wm)
    _, tp = _s_t(wp)
    mat = np.zeros((6, 6), dtype=complex)
    mat[0, :2] = [-wm, 1]
    mat[1, 4:] = [wp, 1]
    mat[2:4, :2] = 2 * np.exp(-mu_m * a) * sm
    mat[2:4, 2:4] = -2 * inner(-a)
    mat[4:6, 2:4] = 2 * inner(a)
    mat[4:6, 4:] = -2 * np.exp(-mu_p * a) * tp
    return mat


def eigenfunction_reconstruct(cfg: StepConfig, z_eig: complex, tol: float = 1e-7) -> StepEigenfunction:
    """Null vector of the gluing system and the glued eigenfunction.

    Raises ``NotAnEigenvalueError`` when the smallest singular value of the
    row-normalised matrix exceeds ``tol`` relative to the largest.
    """
    z = complex(z_eig)
    if on_rays(cfg.m, z):
        raise DomainError("no eigenfunctions on the continuous spectrum")
    special = min(abs(z - s) for s in cfg.special_points) < SPECIAL_TOL
    mat = _special_matrix(cfg, z) if special else step_matrix(cfg, z)
    rows = np.linalg.norm(mat, axis=1, keepdims=True)
    _, sv, vh = np.linalg.svd(mat / rows)
    ratio = float(sv[-1] / sv[0])
    if ratio > tol:
        raise NotAnEigenvalueError(f"z={z} is not an eigenvalue (sigma_min/sigma_max = {ratio:.2e})")
    coef = np.conj(vh[-1])
    ef = StepEigenfunction(cfg, z, coef, 0.0, (0.0, 0.0), ratio)
    a = cfg.a
    eps = 1e-13
    jump = max(np.max(np.abs(ef(np.array([-a - eps])) - ef(np.array([-a + eps])))),
               np.max(np.abs(ef(np.array([a + eps])) - ef(np.array([a - eps])))))
    mu_m, mu_p, *_ = _slopes(cfg.m, z)
    scale = np.max(np.abs(ef(np.linspace(-a, a, 9))))
    return StepEigenfunction(cfg, z, coef, float(jump / scale),
                             (float(np.real(mu_m)), float(np.real(mu_p))), ratio)
