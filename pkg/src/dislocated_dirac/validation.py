"""Quick self-checks of each module, used by the ``validate`` command.

Every check reports the measured quantity next to its tolerance.  The
suites are small versions of the test-suite invariants and run in seconds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .birman_schwinger import (assemble_Q, det_I_plus_Q, find_det_zero, first_order_root,
                               potential_grid, q_norm_certificate, weak_coupling_first_order)
from .bounds import (SERIES_TAGS, coarse_two_sided, series_residual, sharp_two_sided, t1_bounds,
                     t2_upper_bound)
from .errors import DomainError
from .kernel import kernel_eval, kernel_norm
from .oracle import build_grid, operator_norm, assemble_resolvent, resolvent_norm
from .params import SpectralPoint, compute_params, in_spectrum, raw_params
from .potential import MatrixPotential
from .step import (StepConfig, eigenfunction_reconstruct, fundamental_matrix, real_eigenvalue_scan,
                   step_matrix_scaled_det)

SUITES = ("params", "kernel", "bounds", "asymptotics", "bs", "step", "weak")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    tolerance: float
    passed: bool


def _le(suite, name, measured, tol) -> Check:
    return Check(suite, name, float(measured), float(tol), bool(measured <= tol))


def _random_z(rng, n, m):
    z = rng.uniform(-6, 6, n) + 1j * rng.uniform(-3, 3, n)
    return z[~in_spectrum(m, z) & (np.min([abs(z - c) for c in (m + 1j, m - 1j, -m + 1j, -m - 1j)], 0) > 1e-3)]


def suite_params(rng) -> list[Check]:
    out = []
    m = 1.0
    z = _random_z(rng, 4000, m)
    mu_m, mu_p, w_m, w_p, k = raw_params(m, z)
    rel = np.max(np.abs(w_p**2 * (m - 1j + z) - (m + 1j - z)) / np.abs(m + 1j - z))
    rel = max(rel, np.max(np.abs(w_m**2 * (m + 1j + z) - (m - 1j - z)) / np.abs(m - 1j - z)))
    out.append(_le("params", "w quadratic relations (rel)", rel, 1e-12))
    cm, cp, cwm, cwp, _ = raw_params(m, np.conj(z))
    sym = max(np.max(np.abs(np.conj(mu_p) - cm)), np.max(np.abs(np.conj(w_p) - cwm)))
    out.append(_le("params", "conjugation symmetry", sym, 1e-13))
    out.append(_le("params", "k (w+ + w-) = w+ - w-", np.max(np.abs(k * (w_p + w_m) - (w_p - w_m))), 1e-13))
    zz = rng.uniform(-4, 4, 2000) + 1j * rng.choice([-1.0, 1.0, 0.5, 2.0], 2000)
    zz = zz[np.min([abs(zz - c) for c in (m + 1j, m - 1j, -m + 1j, -m - 1j)], 0) > 1e-6]
    mu_m, mu_p, *_ = raw_params(m, zz)
    pred = (mu_m.real > 0) & (mu_p.real > 0)
    bad = np.count_nonzero(pred == in_spectrum(m, zz))
    out.append(_le("params", "Re mu > 0 iff off the rays (mismatches)", bad, 0))
    return out


def suite_kernel(rng) -> list[Check]:
    worst = 0.0
    for m in (0.0, 1.0):
        for z in _random_z(rng, 60, m):
            p = SpectralPoint.from_complex(z, m)
            x, y = rng.uniform(-5, 5, (2, 50))
            sv = np.linalg.svd(kernel_eval(p, x, y), compute_uv=False)[:, 0]
            kn = kernel_norm(p, x, y)
            worst = max(worst, np.max(np.abs(kn - sv) / np.maximum(sv, 1e-300)))
    out = [_le("kernel", "kernel_norm vs 2x2 SVD (rel)", worst, 1e-10)]
    p = SpectralPoint(0.0, 2.0, 0.0)
    g = build_grid(60, 16, 0.25, left=20)
    out.append(_le("kernel", "oracle norm at z=2i, m=0 vs 1/(Im z - 1) (rel)",
                   abs(operator_norm(assemble_resolvent(p, g)) - 1.0), 2e-3))
    return out


def suite_bounds(rng) -> list[Check]:
    out = []
    for tau, delta in ((10.0, 0.0), (4.0, -0.3)):
        p = SpectralPoint(tau, delta, 1.0)
        q = compute_params(p)
        g = build_grid(14 / q.mu_plus.real, 16, max(1.2 * tau, 8) / 16, left=14 / q.mu_minus.real)
        val = resolvent_norm(p, g).value
        lo, hi = t1_bounds(p)
        t2 = t2_upper_bound(p)
        gap = max(lo - t2 - val, val - hi - t2)
        out.append(_le("bounds", f"sandwich violation at tau={tau}, delta={delta}", gap, 1e-6))
    viol = 0.0
    for tau in (20.0, 50.0, 100.0):
        p = SpectralPoint(tau, 0.3, 1.0)
        slo, shi = sharp_two_sided(p)
        clo, chi = coarse_two_sided(p)
        viol = max(viol, clo - slo, shi - chi)
    out.append(_le("bounds", "coarse bounds implied by sharp ones (violation)", viol, 0.0))
    return out


def suite_asymptotics(rng) -> list[Check]:
    out = []
    for tag in SERIES_TAGS:
        worst = 0.0
        for delta in (0.0, 0.5, -0.5):
            for m in (0.5, 1.0, 2.0):
                r = series_residual(tag, 40.0, delta, m) / series_residual(tag, 20.0, delta, m)
                worst = max(worst, abs(np.log(r * 32)))
        out.append(_le("asymptotics", f"{tag}: |log(32 * ratio)|", worst, np.log(1.5)))
    return out


def suite_bs(rng) -> list[Check]:
    out = []
    V = MatrixPotential.gaussian(0.3, 0.7, [[1, 0.5j], [0.2, -1]])
    x = rng.uniform(-2, 2, 200)
    a, b = V.factors(x)
    out.append(_le("bs", "B A = V (rel)", np.max(np.abs(b @ a - V(x))) / np.max(np.abs(V(x))), 1e-12))
    zero = MatrixPotential.zero()
    d0 = abs(det_I_plus_Q(2 + 0.3j, 1.0, zero) - 1)
    out.append(_le("bs", "det(I + Q) = 1 for V = 0", d0, 1e-14))
    p = SpectralPoint(2.0, 0.3, 1.0)
    op = assemble_Q(p, V)
    blocks = op.matrix.reshape(op.grid.size, 2, op.grid.size, 2).transpose(0, 2, 1, 3)
    hs = np.sqrt(np.sum(np.linalg.norm(blocks, 2, axis=(-2, -1)) ** 2))
    out.append(_le("bs", "HS norm / closed-form majorant", hs / q_norm_certificate(p, V).universal, 1.0))
    cfg = StepConfig(1.0, 1.0, 1.0)
    root = real_eigenvalue_scan(cfg, (5.0, 7.0))[0]
    det_root = find_det_zero(root + 1e-3, 1.0, cfg.potential())
    out.append(_le("bs", "step root vs det(I + Q) zero", abs(det_root - root), 1e-6))
    return out


def suite_step(rng) -> list[Check]:
    out = []
    cfg = StepConfig(1.0, 1.0, 1.0)
    roots = real_eigenvalue_scan(cfg, (5.0, 15.0))
    out.append(Check("step", "roots in [5, 15] (at least 6)", len(roots), 6, len(roots) >= 6))
    spacing = np.diff(roots)[-1] / (np.pi / 2) - 1
    out.append(_le("step", "last spacing / (pi / 2a) - 1", abs(spacing), 0.1))
    ef = eigenfunction_reconstruct(cfg, roots[0])
    xs = np.array([-3.0, -0.5, 0.4, 2.5])
    out.append(_le("step", "eigenfunction residual", np.max(np.abs(ef.residual(xs))), 1e-10))
    worst = 0.0
    for _ in range(100):
        z = complex(rng.uniform(-5, 5), rng.uniform(-0.9, 0.9))
        x, y = rng.uniform(-2, 2, 2)
        for piece in ("-", "0", "+"):
            fm = fundamental_matrix(cfg, z, piece)
            worst = max(worst, np.max(np.abs(fm(x + y) - fm(x) @ fm(y))) / max(1.0, np.max(np.abs(fm(x + y)))))
    out.append(_le("step", "semigroup property (rel)", worst, 1e-10))
    cfg0 = StepConfig(1.0, 0.5, 0.0)
    band = rng.uniform(-5, 5, 20) + 1j * rng.uniform(-0.95, 0.95, 20)
    out.append(_le("step", "m=0 scaled 6x6 det in the band",
                   max(abs(step_matrix_scaled_det(cfg0, z)) for z in band), 1e-8))
    return out


def suite_weak(rng) -> list[Check]:
    m = 1.0
    base = MatrixPotential.bump(0.0, 0.005, np.diag([-1.0, 1.0]))
    V = base.scaled(1 / base.norms["L1"])
    grid = potential_grid(V, 16, 400.0)
    ratios, zs = [], []
    z = np.sqrt(m / 1e-2)
    for eps in (1e-2, 5e-3, 2.5e-3):
        z = find_det_zero(z, m, V, grid, coupling=eps)
        rep = weak_coupling_first_order(SpectralPoint.from_complex(z, m), V, grid)
        ratios.append(rep.residual(eps) / eps**2)
        zs.append(z)
        z = z * np.sqrt(2)
    spread = (max(ratios) - min(ratios)) / min(ratios)
    slope = -np.polyfit(np.log([1e-2, 5e-3, 2.5e-3]), np.log(np.abs(np.real(zs))), 1)[0]
    z1 = first_order_root(m, V, 1e-2, zs[0], grid)
    return [_le("weak", "spread of residual / eps^2", spread, 0.5),
            _le("weak", "|escape exponent - 1/2|", abs(slope - 0.5), 0.05),
            _le("weak", "first-order root vs det zero (rel)", abs(z1 - zs[0]) / abs(zs[0]), 5e-3)]


_SUITE_FUNCS: dict[str, Callable] = {
    "params": suite_params, "kernel": suite_kernel, "bounds": suite_bounds,
    "asymptotics": suite_asymptotics, "bs": suite_bs, "step": suite_step, "weak": suite_weak}


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name == "all":
        return [c for s in SUITES for c in run_suite(s, seed)]
    try:
        func = _SUITE_FUNCS[name]
    except KeyError:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all") from None
    return func(np.random.default_rng(seed))
