"""Sliding-window embeddings and the factorisation ``SW f(t) = A v_t`` for exponential sums."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

RANK_TOL = 1e-12


class RankDeficiencyError(ValueError):
    """The window matrix has (numerically) dependent columns, so ``k`` is unbounded."""


@dataclass(frozen=True)
class ExponentialSum:
    """``f(t) = sum_j c_j exp(2 pi i w_j t)`` with frequencies in cycles per unit time.

    With ``symmetric`` set each term also carries its mirror
    ``c_j exp(-2 pi i w_j t)``; ``conjugate_mirror`` uses ``conj(c_j)`` for the
    mirror instead, which is how real signals decompose.
    """

    coeffs: tuple[complex, ...]
    freqs: tuple[float, ...]
    symmetric: bool = False
    conjugate_mirror: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        object.__setattr__(self, "freqs", tuple(float(w) for w in self.freqs))
        if len(self.coeffs) != len(self.freqs) or not self.coeffs:
            raise ValueError("need matching, non-empty coefficient and frequency lists")
        if any(c == 0 for c in self.coeffs):
            raise ValueError("coefficients must be non-zero")
        if len(set(self.freqs)) != len(self.freqs):
            raise ValueError("frequencies must be distinct")
        if not all(math.isfinite(w) for w in self.freqs):
            raise ValueError("frequencies must be finite")

    @classmethod
    def from_terms(cls, terms, symmetric: bool = False, conjugate_mirror: bool = False) -> "ExponentialSum":
        terms = list(terms)
        return cls(tuple(c for c, _ in terms), tuple(w for _, w in terms), symmetric, conjugate_mirror)

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)

    @property
    def columns(self) -> tuple[np.ndarray, np.ndarray]:
        """Frequencies and coefficients of every exponential, mirrors included."""
        w = np.asarray(self.freqs)
        c = np.asarray(self.coeffs)
        if not self.symmetric:
            return w, c
        mirror = np.conj(c) if self.conjugate_mirror else c
        return np.concatenate((w, -w)), np.concatenate((c, mirror))

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        w, c = self.columns
        return np.exp(2j * np.pi * t[..., None] * w) @ c


@dataclass(frozen=True)
class SWParams:
    d: int
    tau: float
    step: float = 1.0
    T: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("embedding dimension d must be >= 1")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.T < 0:
            raise ValueError("T must be >= 0")


@dataclass(frozen=True)
class SWMatrix:
    A: np.ndarray = field(repr=False)
    sigma_min: float
    sigma_max: float
    cond_k: float


def default_tau(freqs) -> float:
    """Delay making two frequencies half a turn apart per step: ``1 / (2 (w_max - w_min))``.

    With a single frequency the spread is taken from zero.
    """
    w = np.abs(np.asarray(freqs, dtype=np.float64))
    spread = float(w.max() - w.min()) if len(w) > 1 else float(w.max())
    if spread <= 0:
        raise ValueError("cannot pick a delay for zero frequency spread")
    return 0.5 / spread


def embed(signal, params: SWParams, interpolate: bool = False) -> np.ndarray:
    """Rows ``t = 0..T`` hold ``(f(t step), f(t step + tau), ..., f(t step + d tau))``.

    ``signal`` is either an :class:`ExponentialSum` (evaluated exactly) or an
    array of samples spaced ``params.step`` apart.
    """
    t = np.arange(params.T + 1) * params.step
    offsets = np.arange(params.d + 1) * params.tau
    if isinstance(signal, ExponentialSum):
        return signal(t[:, None] + offsets[None, :])

    x = np.asarray(signal)
    if x.ndim != 1:
        raise ValueError("sampled signal must be one-dimensional")
    ratio = params.tau / params.step
    lag = round(ratio)
    if not interpolate and abs(ratio - lag) > 1e-9 * max(1.0, ratio):
        raise ValueError(f"tau/step = {ratio!r} is not an integer; enable interpolation to resample")
    span = params.d * (lag if not interpolate else ratio)
    last = len(x) - 1 - math.ceil(span - 1e-9)
    if params.T > last:
        raise ValueError(f"window exceeds the record: last valid t is {last}, asked for T={params.T}")
    if not interpolate:
        idx = np.arange(params.T + 1)[:, None] + lag * np.arange(params.d + 1)[None, :]
        return x[idx]
    pos = np.arange(params.T + 1)[:, None] + ratio * np.arange(params.d + 1)[None, :]
    grid = np.arange(len(x))
    if np.iscomplexobj(x):
        return np.interp(pos, grid, x.real) + 1j * np.interp(pos, grid, x.imag)
    return np.interp(pos, grid, x)


def sw_matrix(fsum: ExponentialSum, params: SWParams) -> SWMatrix:
    """Window matrix with unit columns, its extreme singular values and the constant ``k``."""
    w, _ = fsum.columns
    m = np.arange(params.d + 1)
    A = np.exp(2j * np.pi * np.outer(m * params.tau, w)) / math.sqrt(params.d + 1)
    M = A.shape[1]
    if params.d + 1 < M:
        warnings.warn(f"d + 1 = {params.d + 1} is smaller than the {M} columns; A cannot be injective")
    # singular values from the small Gram matrix
    ev = np.linalg.eigvalsh(A.conj().T @ A)
    ev = np.clip(ev, 0.0, None)
    s_min, s_max = math.sqrt(ev[0]), math.sqrt(ev[-1])
    if s_min < RANK_TOL:
        raise RankDeficiencyError(f"smallest singular value {s_min:.3g} below {RANK_TOL}; k is unbounded")
    k = max(1.0 / s_min, s_max * math.sqrt(M))
    return SWMatrix(A=A, sigma_min=s_min, sigma_max=s_max, cond_k=k)


def scaled_coeffs(fsum: ExponentialSum, d: int) -> np.ndarray:
    """``c~_j = sqrt(d + 1) c_j`` for the primary terms."""
    return math.sqrt(d + 1) * np.asarray(fsum.coeffs)


def trajectory(fsum: ExponentialSum, T: int, d: int, step: float = 1.0) -> np.ndarray:
    """Points ``v_t = (c~_j exp(2 pi i w_j t step))_j`` for ``t = 0..T``, shape ``(T + 1, N)``.

    For symmetric sums only the primary terms enter; mirrors add no new
    geometry to the torus.
    """
    if T < 0:
        raise ValueError("T must be >= 0")
    t = np.arange(T + 1) * step
    return scaled_coeffs(fsum, d)[None, :] * np.exp(2j * np.pi * np.outer(t, fsum.freqs))


def full_trajectory(fsum: ExponentialSum, T: int, d: int, step: float = 1.0) -> np.ndarray:
    """Coefficient vectors over every column of the window matrix, so ``embed = v @ A.T``."""
    w, c = fsum.columns
    t = np.arange(T + 1) * step
    return math.sqrt(d + 1) * c[None, :] * np.exp(2j * np.pi * np.outer(t, w))


def flat_coordinates(fsum: ExponentialSum, T: int, step: float = 1.0) -> np.ndarray:
    """Torus angles in turns, shape ``(N, T + 1)``: ``t step w_j mod 1``."""
    t = np.arange(T + 1) * step
    return np.mod(np.outer(fsum.freqs, t), 1.0)
