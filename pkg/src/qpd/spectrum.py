"""Frequency and coefficient recovery from sampled signals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .sliding_window import ExponentialSum

DEFAULT_REL_THRESHOLD = 0.05
MAGNITUDE_FLOOR = 1e-6


class PeakError(ValueError):
    def __init__(self, wanted: int, found: list[float]):
        self.wanted = wanted
        self.found = found
        listed = ", ".join(f"{w:.6g}" for w in found) or "none"
        super().__init__(f"asked for {wanted} peaks, found {len(found)}: {listed}")


@dataclass(frozen=True)
class Spectrum:
    """Forward DFT scaled by ``1/N`` so a pure tone's bin reads its coefficient."""

    freqs: np.ndarray
    values: np.ndarray
    sample_step: float
    samples: np.ndarray = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.values)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def phases(self) -> np.ndarray:
        return np.angle(self.values)

    @property
    def resolution(self) -> float:
        return 1.0 / (self.length * self.sample_step)

    def energy(self) -> float:
        """Parseval counterpart of ``sum |x|^2 * step``."""
        return float(self.length * self.sample_step * np.sum(np.abs(self.values) ** 2))


def dft(samples, sample_step: float) -> Spectrum:
    x = np.asarray(samples)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("need a one-dimensional record of at least two samples")
    if not sample_step > 0:
        raise ValueError("sample_step must be positive")
    n = len(x)
    return Spectrum(
        freqs=np.fft.fftfreq(n, d=sample_step),
        values=np.fft.fft(x) / n,
        sample_step=float(sample_step),
        samples=x,
    )


def fourier_coefficient(samples, sample_step: float, omega: float) -> complex:
    """Time average ``(1/L) int_0^L f(t) exp(-2 pi i omega t) dt`` by the trapezoid rule."""
    x = np.asarray(samples)
    n = len(x)
    if n < 2:
        raise ValueError("need at least two samples")
    t = np.arange(n) * sample_step
    span = (n - 1) * sample_step
    return complex(np.trapezoid(x * np.exp(-2j * np.pi * omega * t), dx=sample_step) / span)


def _refine(values: np.ndarray, k: int) -> float:
    """Fractional bin offset from the peak bin and its two neighbours.

    Uses the complex three-point form ``Re[(X[k-1] - X[k+1]) / (2 X[k] - X[k-1] - X[k+1])]``,
    which is unbiased for a rectangular window where a parabola through the
    magnitudes is not.
    """
    n = len(values)
    a, b, c = values[(k - 1) % n], values[k], values[(k + 1) % n]
    den = 2.0 * b - a - c
    if den == 0:
        return 0.0
    return float(np.clip(np.real((a - c) / den), -0.5, 0.5))


def estimate_frequencies(spec: Spectrum, n_peaks: int, rel_threshold: float = DEFAULT_REL_THRESHOLD) -> list[tuple[float, complex]]:
    """The ``n_peaks`` strongest local maxima as ``(frequency, coefficient)``, strongest first."""
    if n_peaks < 1:
        raise ValueError("n_peaks must be >= 1")
    mag = spec.magnitudes
    top = float(mag.max())
    if top == 0.0:
        raise PeakError(n_peaks, [])
    left, right = np.roll(mag, 1), np.roll(mag, -1)
    is_peak = (mag > left) & (mag >= right) & (mag >= rel_threshold * top)
    ks = np.flatnonzero(is_peak)
    ks = ks[np.argsort(-mag[ks], kind="stable")]
    if len(ks) < n_peaks:
        raise PeakError(n_peaks, [float(spec.freqs[k]) for k in ks])
    out = []
    for k in ks[:n_peaks]:
        w = float(spec.freqs[k] + _refine(spec.values, int(k)) * spec.resolution)
        out.append((w, fourier_coefficient(spec.samples, spec.sample_step, w)))
    return out


def _lattice(freq: float, base: np.ndarray, K: int, tol: float):
    for k in itertools.product(range(-K, K + 1), repeat=len(base)):
        if abs(freq - float(np.dot(k, base))) <= tol:
            return k
    return None


def truncate_series(terms, K: int = 1, n_base: int | None = None, tol: float | None = None,
                    magnitude_floor: float = MAGNITUDE_FLOOR) -> ExponentialSum:
    """Keep the terms whose frequency is an integer combination ``k . base`` with ``|k|_inf <= K``.

    ``base`` is the ``n_base`` strongest distinct positive frequencies (all of
    them when ``n_base`` is None). Terms below ``magnitude_floor`` times the
    largest magnitude are dropped first. When every kept frequency comes with
    its negative and the two coefficients are conjugate, a symmetric sum over
    the positive frequencies is returned.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    terms = [(float(w), complex(c)) for w, c in terms]
    if not terms:
        raise ValueError("no terms to truncate")
    cmax = max(abs(c) for _, c in terms)
    terms = [(w, c) for w, c in terms if abs(c) >= magnitude_floor * cmax]
    positives = []
    for w, c in sorted(terms, key=lambda t: -abs(t[1])):
        if w > 0 and all(abs(w - p) > 1e-12 for p in positives):
            positives.append(w)
    base = np.array(positives if n_base is None else positives[:n_base])
    if tol is None:
        ws = sorted(abs(w) for w, _ in terms)
        gaps = [b - a for a, b in zip(ws, ws[1:]) if b - a > 0]
        tol = 0.25 * min(gaps) if gaps else 1e-9
    kept = [(w, c) for w, c in terms if len(base) == 0 or _lattice(w, base, K, tol) is not None]
    return _as_sum(kept, tol)


def _as_sum(terms, tol: float) -> ExponentialSum:
    pos = sorted((t for t in terms if t[0] > 0), key=lambda t: t[0])
    neg = [t for t in terms if t[0] < 0]
    paired = []
    for w, c in pos:
        mate = [(v, e) for v, e in neg if abs(v + w) <= tol]
        if len(mate) != 1:
            break
        paired.append((w, c, mate[0][1]))
    if pos and len(paired) == len(pos) == len(neg):
        if all(abs(e - np.conj(c)) <= 0.05 * abs(c) for _, c, e in paired):
            return ExponentialSum(tuple(c for _, c, _ in paired), tuple(w for w, _, _ in paired),
                                  symmetric=True, conjugate_mirror=True)
    terms = sorted(terms, key=lambda t: t[0])
    return ExponentialSum(tuple(c for _, c in terms), tuple(w for w, _ in terms))
