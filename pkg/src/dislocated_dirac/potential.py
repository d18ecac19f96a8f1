"""Matrix-valued potentials ``V: R -> C^{2x2}`` and their polar factors.

A potential is stored in one of four shapes: piecewise constant (``STEP``),
piecewise constant through samples (``SAMPLED``), a Gaussian envelope
times a constant matrix, or a smooth compactly supported bump times a
constant matrix.  The factorisation ``V = B A`` with ``A = |V|^{1/2}`` and
``B = U |V|^{1/2}`` (``U`` the partial isometry of the polar form) feeds the
Birman-Schwinger operator ``A (L_m - z)^{-1} B``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConfigError

FORMS = ("STEP", "SAMPLED", "GAUSSIAN_ENVELOPE", "BUMP")
GAUSS_CUT = 12.0  # Gaussian envelopes are treated as supported on center +- 12 widths


def polar_factor(v):
    """Factors ``(A, B)`` with ``B @ A = v``, ``A = (v^* v)^{1/4}`` and ``B = U A``.

    Works on a single 2x2 matrix or on stacks of shape ``(..., 2, 2)``.
    Singular directions get zero weight, so ``U`` vanishes on the kernel of ``|v|``.
    """
    v = np.asarray(v, dtype=complex)
    w, s, xh = np.linalg.svd(v)
    root = np.sqrt(s)[..., None, :]
    x = np.conj(np.swapaxes(xh, -1, -2))
    a = (x * root) @ xh
    b = (w * root) @ xh
    return a, b


def _as_matrix(entries) -> np.ndarray:
    """Parse ``[[[re, im], [re, im]], [[re, im], [re, im]]]`` (or plain numbers)."""
    arr = np.asarray(entries, dtype=float)
    if arr.shape == (2, 2, 2):
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.shape == (2, 2):
        return arr.astype(complex)
    raise ConfigError(f"matrix entries must have shape (2, 2, 2) or (2, 2), got {arr.shape}")


def _matrix_json(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(c.real), float(c.imag)] for c in row] for row in mat]


def _bump(t):
    """``exp(1 - 1/(1 - t^2))`` on ``|t| < 1``, zero outside; equals 1 at 0."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    out[inside] = np.exp(1 - 1 / (1 - t[inside] ** 2))
    return out


@dataclass(frozen=True, eq=False)
class MatrixPotential:
    """Immutable matrix potential.

    Parameters
    ----------
    form : str
        One of ``FORMS``.
    data : dict
        ``STEP``: ``pieces = [(a, b, M), ...]`` on disjoint intervals.
        ``SAMPLED``: ``x`` (increasing) and ``samples`` of shape ``(n, 2, 2)``;
        each sample holds on the cell between neighbouring midpoints.
        ``GAUSSIAN_ENVELOPE``/``BUMP``: ``center``, ``width``, ``matrix``.
    scale : float or complex
        Overall coupling factor.
    """

    form: str
    data: dict = field(repr=False)
    scale: complex = 1.0

    def __post_init__(self):
        if self.form not in FORMS:
            raise ConfigError(f"unknown potential form {self.form!r}")
        if self.form in ("GAUSSIAN_ENVELOPE", "BUMP") and not self.data["width"] > 0:
            raise ConfigError("width must be positive")
        if self.form == "STEP":
            ends = sorted((a, b) for a, b, _ in self.data["pieces"])
            if any(a >= b for a, b in ends) or any(b1 > a2 for (_, b1), (a2, _) in zip(ends, ends[1:])):
                raise ConfigError("step intervals must be non-empty and disjoint")
        if self.form == "SAMPLED" and np.any(np.diff(self.data["x"]) <= 0):
            raise ConfigError("sample abscissae must be increasing")
        # touch the cached norms so that invalid data fails at construction
        _ = self.norms

    # constructors

    @classmethod
    def step(cls, pieces, scale=1.0) -> "MatrixPotential":
        pieces = tuple((float(a), float(b), np.asarray(m, dtype=complex)) for a, b, m in pieces)
        return cls("STEP", {"pieces": pieces}, scale)

    @classmethod
    def sampled(cls, x, samples, scale=1.0) -> "MatrixPotential":
        x = np.asarray(x, dtype=float)
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != x.shape + (2, 2) or x.size < 2:
            raise ConfigError("samples must have shape (n, 2, 2) with n >= 2")
        return cls("SAMPLED", {"x": x, "samples": samples}, scale)

    @classmethod
    def gaussian(cls, center, width, matrix, scale=1.0) -> "MatrixPotential":
        return cls("GAUSSIAN_ENVELOPE", {"center": float(center), "width": float(width),
                                         "matrix": np.asarray(matrix, dtype=complex)}, scale)

    @classmethod
    def bump(cls, center, width, matrix, scale=1.0) -> "MatrixPotential":
        """``matrix * exp(1 - 1/(1 - ((x - center)/width)^2))`` on ``|x - center| < width``."""
        return cls("BUMP", {"center": float(center), "width": float(width),
                            "matrix": np.asarray(matrix, dtype=complex)}, scale)

    @classmethod
    def zero(cls) -> "MatrixPotential":
        return cls.step([(-1.0, 1.0, np.zeros((2, 2)))])

    def scaled(self, factor) -> "MatrixPotential":
        return MatrixPotential(self.form, self.data, self.scale * factor)

    # evaluation

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape + (2, 2), dtype=complex)
        d = self.data
        if self.form == "STEP":
            # half-open pieces [a, b)
            for a, b, mat in d["pieces"]:
                out[(x >= a) & (x < b)] = mat
        elif self.form == "SAMPLED":
            xs = d["x"]
            mids = 0.5 * (xs[1:] + xs[:-1])
            lo, hi = xs[0] - (mids[0] - xs[0]), xs[-1] + (xs[-1] - mids[-1])
            idx = np.searchsorted(mids, x)
            inside = (x >= lo) & (x < hi)
            out[inside] = d["samples"][idx[inside]]
        else:
            t = (x - d["center"]) / d["width"]
            prof = np.exp(-t**2) if self.form == "GAUSSIAN_ENVELOPE" else _bump(t)
            if self.form == "GAUSSIAN_ENVELOPE":
                prof = np.where(np.abs(t) <= GAUSS_CUT, prof, 0.0)
            out = prof[..., None, None] * d["matrix"]
        return self.scale * out

    def factors(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Polar factors ``(A(x), B(x))``."""
        return polar_factor(self(x))

    @property
    def breaks(self) -> np.ndarray:
        """Support end points and discontinuities, sorted; panels must not straddle them."""
        d = self.data
        if self.form == "STEP":
            pts = [p for a, b, _ in d["pieces"] for p in (a, b)]
        elif self.form == "SAMPLED":
            xs = d["x"]
            mids = 0.5 * (xs[1:] + xs[:-1])
            pts = [xs[0] - (mids[0] - xs[0]), *mids, xs[-1] + (xs[-1] - mids[-1])]
        else:
            c, w = d["center"], d["width"]
            r = GAUSS_CUT * w if self.form == "GAUSSIAN_ENVELOPE" else w
            pts = [c - r, c, c + r]
        return np.unique(np.asarray(pts, dtype=float))

    # norms

    def _pointwise_integral(self, weight, power=1.0) -> float:
        """``int |V(x)|^power weight(x) dx`` with ``|.|`` the spectral norm."""
        d = self.data
        if self.form in ("STEP", "SAMPLED"):
            if self.form == "STEP":
                cells = [(a, b, mat) for a, b, mat in d["pieces"]]
            else:
                br = self.breaks
                cells = list(zip(br[:-1], br[1:], d["samples"]))
            t, w = np.polynomial.legendre.leggauss(8)
            total = 0.0
            for a, b, mat in cells:
                val = (abs(self.scale) * np.linalg.norm(mat, 2)) ** power
                xs = 0.5 * (b - a) * (t + 1) + a
                total += val * 0.5 * (b - a) * np.sum(w * weight(xs))
            return float(total)
        br = self.breaks
        t, w = np.polynomial.legendre.leggauss(64)
        total = 0.0
        for a, b in zip(br[:-1], br[1:]):
            xs = 0.5 * (b - a) * (t + 1) + a
            vals = np.linalg.norm(self(xs), 2, axis=(-2, -1)) ** power
            total += 0.5 * (b - a) * np.sum(w * vals * weight(xs))
        return float(total)

    @cached_property
    def norms(self) -> dict[str, float]:
        one = lambda x: np.ones_like(x)  # noqa: E731
        return {"L1": self._pointwise_integral(one),
                "L1_nu1": self._pointwise_integral(lambda x: np.sqrt(1 + x**2)),
                "L1_nu2": self._pointwise_integral(lambda x: 1 + x**2)}

    def lp_norm(self, p: float) -> float:
        if p == np.inf:
            br = self.breaks
            xs = np.linspace(br[0], br[-1], 4001)
            return float(np.max(np.linalg.norm(self(xs), 2, axis=(-2, -1))))
        if not p >= 1:
            raise ConfigError("p must be >= 1")
        return self._pointwise_integral(lambda x: np.ones_like(x), power=p) ** (1 / p)

    @property
    def is_zero(self) -> bool:
        return self.norms["L1"] == 0.0

    # serialisation

    def to_json(self) -> dict:
        d = self.data
        out = {"form": self.form, "scale": [float(np.real(self.scale)), float(np.imag(self.scale))]}
        if self.form == "STEP":
            out["pieces"] = [{"interval": [a, b], "matrix": _matrix_json(m)} for a, b, m in d["pieces"]]
        elif self.form == "SAMPLED":
            out["x"] = d["x"].tolist()
            out["samples"] = [_matrix_json(m) for m in d["samples"]]
        else:
            out.update(center=d["center"], width=d["width"], matrix=_matrix_json(d["matrix"]))
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "MatrixPotential":
        try:
            form = doc["form"]
            sc = doc.get("scale", 1.0)
            scale = complex(sc[0], sc[1]) if isinstance(sc, (list, tuple)) else complex(sc)
            if form == "STEP":
                return cls.step([(p["interval"][0], p["interval"][1], _as_matrix(p["matrix"]))
                                 for p in doc["pieces"]], scale)
            if form == "SAMPLED":
                return cls.sampled(doc["x"], [_as_matrix(m) for m in doc["samples"]], scale)
            if form in ("GAUSSIAN_ENVELOPE", "BUMP"):
                ctor = cls.gaussian if form == "GAUSSIAN_ENVELOPE" else cls.bump
                return ctor(doc["center"], doc["width"], _as_matrix(doc["matrix"]), scale)
        except (KeyError, TypeError, IndexError) as exc:
            raise ConfigError(f"malformed potential document: {exc}") from exc
        raise ConfigError(f"unknown potential form {form!r}")

    @classmethod
    def load(cls, path) -> "MatrixPotential":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read potential file {path}: {exc}") from exc
        return cls.from_json(doc)
