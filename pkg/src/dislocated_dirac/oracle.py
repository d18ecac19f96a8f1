"""Quadrature discretization of the resolvent and Birman-Schwinger operators.

Integral operators with 2x2 matrix kernels are replaced by dense matrices
on composite Gauss-Legendre panels.  Off-diagonal panel blocks are the
usual symmetrised Nystrom entries ``sqrt(w_i) K(x_i, x_j) sqrt(w_j)``.  The
kernels jump across ``x = y``, which spoils Gauss quadrature inside a
panel, so the blocks coupling a panel with itself are replaced by the
exact Galerkin entries in the basis ``l_i / sqrt(w_i)`` (Lagrange
polynomials at the Gauss nodes are orthogonal with norms ``w_i``), computed
with the inner integral split at ``y = x``.  Off-diagonal Nystrom blocks
are the Gauss rule applied to the same Galerkin entries, so the whole
matrix is one consistent discretization whose 2-norm converges to the L^2
operator norm.

Row and column ``2 i + a`` of every matrix refer to node ``i`` and spinor
component ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .errors import ConfigError, ConvergenceError
from .kernel import kernel_eval, kernel_parts_eval
from .params import SpectralPoint, compute_params

KIND_PARTS = {"RESOLVENT": (1, 2), "T1": (1,), "T2": (2,)}


@dataclass(frozen=True)
class QuadratureGrid:
    panels: np.ndarray  # (P, 2) panel end points
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def panel_index(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.panels)), self.order)

    @property
    def length(self) -> float:
        return float(self.panels[-1, 1] - self.panels[0, 0])


@lru_cache(maxsize=None)
def _gauss(order: int):
    return np.polynomial.legendre.leggauss(order)


def grid_on_breaks(breaks, order: int, panels_per_unit: float) -> QuadratureGrid:
    """Gauss-Legendre panels on ``[breaks[0], breaks[-1]]``.

    Every break point is a panel boundary; each segment is split into
    ``ceil(length * panels_per_unit)`` equal panels.
    """
    breaks = np.asarray(breaks, dtype=float)
    if not 2 <= order <= 32:
        raise ConfigError(f"order must be in [2, 32], got {order}")
    if panels_per_unit <= 0 or np.any(np.diff(breaks) <= 0):
        raise ConfigError("need panels_per_unit > 0 and increasing break points")
    edges = [breaks[:1]]
    for a, b in zip(breaks[:-1], breaks[1:]):
        n = max(1, int(np.ceil((b - a) * panels_per_unit - 1e-9)))
        edges.append(np.linspace(a, b, n + 1)[1:])
    edges = np.concatenate(edges)
    panels = np.stack([edges[:-1], edges[1:]], axis=1)
    t, w = _gauss(order)
    half = 0.5 * (panels[:, 1] - panels[:, 0])
    mid = 0.5 * (panels[:, 1] + panels[:, 0])
    nodes = (mid[:, None] + half[:, None] * t).ravel()
    weights = (half[:, None] * w).ravel()
    return QuadratureGrid(panels, nodes, weights, order)


def build_grid(R: float, order: int, panels_per_unit: float,
               left: float | None = None) -> QuadratureGrid:
    """Composite Gauss-Legendre grid on ``[-left, 0] u [0, R]`` (``left = R`` by default)."""
    left = R if left is None else left
    if R <= 0 or left <= 0:
        raise ConfigError("truncation radii must be positive")
    return grid_on_breaks([-left, 0.0, R], order, panels_per_unit)


def default_radius(delta: float) -> float:
    """Truncation radius ``30 / min(1 - |delta|, 1)`` inside the band."""
    gap = 1 - abs(delta)
    if gap <= 0:
        gap = 1.0
    return 30.0 / min(gap, 1.0)


@lru_cache(maxsize=None)
def _lagrange_at(order: int, fine: int):
    """Values of the Gauss-node Lagrange basis at the fine points of a split rule.

    Returns the reference data for a panel ``[-1, 1]``: outer points and
    weights ``(X, WX)``, inner points ``Y`` of shape ``(fine, 2 fine)``
    with weights ``WY``, and Lagrange values ``LX (fine, order)``,
    ``LY (fine, 2 fine, order)``.
    """
    t, _ = _gauss(order)
    s, ws = _gauss(fine)
    vinv = np.linalg.inv(np.polynomial.legendre.legvander(t, order - 1))

    def lag(u):
        return np.polynomial.legendre.legvander(u, order - 1) @ vinv

    X, WX = s, ws
    lo = 0.5 * (X[:, None] + 1) * (s + 1) - 1          # [-1, X]
    hi = X[:, None] + 0.5 * (1 - X[:, None]) * (s + 1)  # [X, 1]
    Y = np.concatenate([lo, hi], axis=1)
    WY = np.concatenate([0.5 * (X[:, None] + 1) * ws, 0.5 * (1 - X[:, None]) * ws], axis=1)
    return X, WX, Y, WY, lag(X), lag(Y.ravel()).reshape(Y.shape + (order,))


def _to_matrix(blocks: np.ndarray) -> np.ndarray:
    """``(n, n, 2, 2)`` node blocks to a ``(2n, 2n)`` matrix."""
    n = blocks.shape[0]
    return blocks.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)


def assemble_kernel(kernel: Callable, grid: QuadratureGrid, correct_diagonal: bool = True,
                    fine: int | None = None, chunk: int = 256) -> np.ndarray:
    """Dense matrix of the integral operator with 2x2 kernel ``kernel(x, y)``."""
    x, w = grid.nodes, grid.weights
    sw = np.sqrt(w)
    n = x.size
    mat = np.empty((2 * n, 2 * n), dtype=complex)
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        blk = kernel(x[start:stop, None], x[None, :])
        blk = blk * (sw[start:stop, None] * sw[None, :])[..., None, None]
        mat[2 * start:2 * stop] = blk.transpose(0, 2, 1, 3).reshape(2 * (stop - start), 2 * n)
    if correct_diagonal:
        p = grid.order
        for i, blk in enumerate(_diagonal_blocks(kernel, grid, fine or 2 * p)):
            sl = slice(2 * i * p, 2 * (i + 1) * p)
            mat[sl, sl] = blk
    return mat


def _diagonal_blocks(kernel: Callable, grid: QuadratureGrid, fine: int):
    """Galerkin blocks ``<e_i, K e_j>`` for each panel with itself."""
    p = grid.order
    X, WX, Y, WY, LX, LY = _lagrange_at(p, fine)
    _, wref = _gauss(p)
    a, b = grid.panels[:, 0], grid.panels[:, 1]
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    xs = mid[:, None] + half[:, None] * X                      # (P, f)
    ys = mid[:, None, None] + half[:, None, None] * Y          # (P, f, 2f)
    K = kernel(np.broadcast_to(xs[:, :, None], ys.shape), ys)  # (P, f, 2f, 2, 2)
    # inner[P, alpha, j] = sum_beta WY K(X_alpha, Y_alpha beta) l_j(Y_alpha beta)
    inner = np.einsum("ab,nabcd,abj->najcd", WY, K, LY)
    G = np.einsum("a,ai,najcd->nicjd", WX, LX, inner)
    # both integrals carry a factor half; basis normalisation 1/sqrt(w_i w_j)
    G = G * (half[:, None, None, None, None] ** 2)
    norm = 1 / np.sqrt(wref[:, None] * wref[None, :])
    G = G * norm[None, :, None, :, None] / half[:, None, None, None, None]
    return G.reshape(len(a), 2 * p, 2 * p)


@dataclass
class DiscretizedOperator:
    matrix: np.ndarray
    grid: QuadratureGrid
    kind: str


def assemble_resolvent(p: SpectralPoint, grid: QuadratureGrid, kind: str = "RESOLVENT",
                       correct_diagonal: bool = True) -> DiscretizedOperator:
    """Discretize ``(L_m - z)^{-1}`` or one of its parts ``T1``, ``T2``."""
    try:
        parts = KIND_PARTS[kind]
    except KeyError:
        raise ConfigError(f"unknown operator kind {kind!r}") from None
    kernel_parts_eval(p, 0.0, 0.0, parts)  # raises on the spectrum before any work

    def kern(x, y):
        return kernel_parts_eval(p, x, y, parts)

    return DiscretizedOperator(assemble_kernel(kern, grid, correct_diagonal), grid, kind)


def start_vector(size: int) -> np.ndarray:
    v = np.zeros(size, dtype=complex)
    v[0::2] = 1.0
    return v / np.linalg.norm(v)


def operator_norm(op, tol: float = 1e-10, dense_below: int = 2000, maxiter: int = 5000) -> float:
    """Largest singular value of a discretized operator (or a plain matrix).

    Small matrices use a dense Hermitian eigensolver on ``M^* M``; larger
    ones Lanczos iteration on ``M^* M`` started from the constant block
    ``(1, 0)`` at every node.
    """
    mat = op.matrix if isinstance(op, DiscretizedOperator) else np.asarray(op)
    if mat.size == 0 or not np.any(mat):
        return 0.0
    if min(mat.shape) < dense_below:
        # entries this small cannot move the norm but make products denormal
        mat = np.where(np.abs(mat) < 1e-30 * np.abs(mat).max(), 0, mat)
        # top eigenvalue of the Gram matrix; cheaper than a full SVD
        gram = mat.conj().T @ mat
        top = gram.shape[0] - 1
        val = sla.eigh(gram, eigvals_only=True, subset_by_index=[top, top], driver="evr",
                       check_finite=False)
        return float(np.sqrt(max(val[0], 0.0)))
    n = mat.shape[1]
    lin = spla.LinearOperator((n, n), matvec=lambda v: mat.conj().T @ (mat @ v), dtype=complex)
    try:
        val = spla.eigsh(lin, k=1, which="LA", v0=start_vector(n), tol=tol,
                         maxiter=maxiter, return_eigenvectors=False)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError("Lanczos iteration for the top singular value did not converge") from exc
    return float(np.sqrt(val[0]))


def det_I_plus(mat: np.ndarray) -> tuple[complex, float]:
    """``det(I + mat)`` as ``(phase, log|det|)`` from an LU factorisation."""
    lu, piv = sla.lu_factor(np.eye(mat.shape[0]) + mat, check_finite=False)
    d = np.diag(lu)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    phase = (-1) ** swaps * np.prod(d / np.abs(d))
    return complex(phase), float(np.sum(np.log(np.abs(d))))


# Refinement-checked norms


@dataclass(frozen=True)
class OracleNorm:
    value: float
    refined: float | None
    size: int

    @property
    def delta(self) -> float | None:
        """Relative change under refinement."""
        return None if self.refined is None else abs(self.refined - self.value) / abs(self.refined)


def auto_grid(p: SpectralPoint, order: int = 16, radius: float | None = None,
              nodes_per_unit: float | None = None, max_radius: float = 200.0) -> QuadratureGrid:
    """Grid adapted to the decay rates and the oscillation of the kernel at ``z``.

    Each side is truncated at ``30 / Re mu`` (capped at ``max_radius``) and
    resolved with about ``max(4, |z|)`` nodes per unit length.
    """
    q = compute_params(p)
    if radius is None:
        left = min(30.0 / q.mu_minus.real, max_radius)
        right = min(30.0 / q.mu_plus.real, max_radius)
    else:
        left = right = radius
    npu = max(4.0, abs(p.z)) if nodes_per_unit is None else nodes_per_unit
    return build_grid(right, order, npu / order, left=left)


def resolvent_norm(p: SpectralPoint, grid: QuadratureGrid | None = None, kind: str = "RESOLVENT",
                   tol: float | None = None, **grid_kw) -> OracleNorm:
    """Oracle norm of ``(L_m - z)^{-1}`` (or ``T1``/``T2``).

    With ``tol`` the norm is recomputed on a grid with 1.5 times the radii
    and twice the node density, and ``ConvergenceError`` is raised when the
    two values differ by more than ``tol`` relative.
    """
    grid = auto_grid(p, **grid_kw) if grid is None else grid
    value = operator_norm(assemble_resolvent(p, grid, kind))
    if tol is None:
        return OracleNorm(value, None, grid.size)
    lo, hi = grid.panels[0, 0], grid.panels[-1, 1]
    ppu = 2 * len(grid.panels) / grid.length
    fine = build_grid(1.5 * hi, grid.order, ppu, left=-1.5 * lo)
    refined = operator_norm(assemble_resolvent(p, fine, kind))
    out = OracleNorm(value, refined, grid.size)
    if out.delta > tol:
        raise ConvergenceError(f"oracle norm changed by {out.delta:.2e} under refinement (tol {tol:.1e})")
    return out


def apply_resolvent(p: SpectralPoint, f: Callable, x, support: tuple[float, float],
                    nodes: int = 96) -> np.ndarray:
    """``u(x) = int R_z(x, y) f(y) dy`` for ``f`` supported in ``support``.

    For each ``x`` the integral is split at ``y = 0`` and ``y = x``, where
    the kernel jumps, and each smooth piece gets its own Gauss rule.
    ``f`` maps ``y`` to shape ``y.shape + (2,)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = support
    cuts = np.sort(np.stack([np.full_like(x, lo), np.clip(np.minimum(x, 0), lo, hi),
                             np.clip(np.maximum(x, 0), lo, hi), np.full_like(x, hi)], -1), -1)
    t, w = _gauss(nodes)
    a, b = cuts[:, :-1, None], cuts[:, 1:, None]
    ys = 0.5 * (b - a) * (t + 1) + a                 # (nx, 3, nodes)
    wy = 0.5 * (b - a) * w
    K = kernel_eval(p, x[:, None, None], ys)         # (nx, 3, nodes, 2, 2)
    return np.einsum("xsn,xsnij,xsnj->xi", wy, K, f(ys))
