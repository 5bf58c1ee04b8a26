"""Continued fractions, convergents and the three-gap structure of irrational rotations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Convergent numerators/denominators must stay representable in a signed 128-bit word.
INT128_MAX = 2**127 - 1
COEFF_CAP = 10**12
DEFAULT_MAX_TERMS = 64


class InsufficientIrrationalityError(ValueError):
    """The rotation number is rational at working precision for the requested T."""

    def __init__(self, omega: float, p: int, q: int, T: int):
        self.omega = omega
        self.p = p
        self.q = q
        self.T = T
        super().__init__(
            f"omega={omega!r} is indistinguishable from {p}/{q} at double precision; "
            f"T={T} >= q={q} makes rotation points collide"
        )


@dataclass(frozen=True)
class ContinuedFraction:
    """Expansion ``x = [a_1; a_2, a_3, ...]`` with its convergents.

    ``convergents[i + 1]`` holds ``(p_i, q_i)`` for ``i >= -1`` so the seed pairs
    ``(0, 1)`` and ``(1, 0)`` sit at positions 0 and 1. ``errors[i - 1]`` holds
    ``D_i = q_i x - p_i`` for ``i >= 1``.
    """

    value: float
    coeffs: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    errors: tuple[float, ...]
    terminated: bool  # True when the expansion closed on a rational (to precision)

    def __len__(self) -> int:
        return len(self.coeffs)

    def a(self, i: int) -> int:
        """Coefficient ``a_i`` (1-based)."""
        return self.coeffs[i - 1]

    def p(self, i: int) -> int:
        return self.convergents[i + 1][0]

    def q(self, i: int) -> int:
        return self.convergents[i + 1][1]

    def D(self, i: int) -> float:
        return self.errors[i - 1]


def _checked(v: int) -> int:
    if abs(v) > INT128_MAX:
        raise OverflowError(f"convergent term {v} exceeds the 128-bit range")
    return v


def _recurrence(coeffs, upto: int) -> list[tuple[int, int]]:
    pairs = [(0, 1), (1, 0)]
    for a in coeffs[:upto]:
        (p2, q2), (p1, q1) = pairs[-2], pairs[-1]
        pairs.append((_checked(a * p1 + p2), _checked(a * q1 + q2)))
    return pairs


def cfe(x: float, max_terms: int = DEFAULT_MAX_TERMS, tol: float | None = None) -> ContinuedFraction:
    """Expand ``x`` by repeated division.

    The division runs on the exact binary value of ``x`` so no rounding drift
    accumulates. Expansion stops after ``max_terms`` coefficients, once the
    current convergent reproduces ``x`` within ``tol`` (default
    ``1e-12 * max(1, |x|)``), or when a coefficient exceeds ``COEFF_CAP``; the
    latter two mark the number as rational at working precision.
    """
    if not math.isfinite(x):
        raise ValueError(f"continued fraction of non-finite value {x!r}")
    if max_terms < 1:
        raise ValueError("max_terms must be >= 1")
    if tol is None:
        tol = 1e-12 * max(1.0, abs(x))
    if tol <= 0:
        raise ValueError("tol must be positive")

    exact = Fraction(x)
    rem = exact
    coeffs: list[int] = []
    pairs = [(0, 1), (1, 0)]
    terminated = False
    while len(coeffs) < max_terms:
        a = math.floor(rem)
        if coeffs and a > COEFF_CAP:
            terminated = True
            break
        coeffs.append(a)
        (p2, q2), (p1, q1) = pairs[-2], pairs[-1]
        p, q = _checked(a * p1 + p2), _checked(a * q1 + q2)
        pairs.append((p, q))
        frac = rem - a
        if frac == 0 or abs(exact - Fraction(p, q)) < tol:
            terminated = True
            break
        rem = 1 / frac

    errors = tuple(float(q * exact - p) for p, q in pairs[2:])
    return ContinuedFraction(
        value=float(x),
        coeffs=tuple(coeffs),
        convergents=tuple(pairs),
        errors=errors,
        terminated=terminated,
    )


def convergents(cf: ContinuedFraction, upto: int) -> list[tuple[int, int]]:
    """``(p_i, q_i)`` for ``i = -1 .. upto`` recomputed from the coefficients."""
    if upto > len(cf.coeffs):
        raise ValueError(f"only {len(cf.coeffs)} coefficients available, asked for {upto}")
    return _recurrence(cf.coeffs, upto)


@dataclass(frozen=True)
class GapStructure:
    """Gap lengths and multiplicities of ``{t * omega mod 1 : t = 0..T}``.

    ``delta_a`` is always ``|D_k|``; when ``r == a_{k+1}`` it is the larger of
    the two primary gaps, so consumers should treat the gaps as a multiset.
    """

    omega: float
    T: int
    k: int
    r: int
    s: int
    delta_a: float
    delta_b: float
    delta_c: float
    n_a: int
    n_b: int
    n_c: int
    q_k: int
    a_next: int  # a_{k+1}

    def gaps(self) -> list[tuple[float, int]]:
        """Distinct gap lengths with multiplicity, zero-count lengths omitted."""
        out = [(self.delta_a, self.n_a), (self.delta_b, self.n_b)]
        if self.n_c > 0:
            out.append((self.delta_c, self.n_c))
        return [(g, n) for g, n in out if n > 0]

    @property
    def max_gap(self) -> float:
        return max(g for g, _ in self.gaps())


def three_gap(omega: float, T: int, cf: ContinuedFraction | None = None) -> GapStructure:
    """Gap structure of the rotation by ``omega`` sampled at ``t = 0..T``."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if not math.isfinite(omega):
        raise ValueError(f"non-finite omega {omega!r}")
    w = omega % 1.0
    if cf is None or cf.value != w:
        cf = cfe(w)
    if w == 0.0:
        raise InsufficientIrrationalityError(omega, 0, 1, T)

    n = len(cf.coeffs)
    if cf.terminated and T >= cf.q(n):
        raise InsufficientIrrationalityError(omega, cf.p(n), cf.q(n), T)

    k = None
    for i in range(1, n):
        if cf.q(i) + cf.q(i - 1) <= T < cf.q(i) + cf.q(i + 1):
            k = i
            break
    if k is None:
        # expansion ran out of terms before reaching T
        raise InsufficientIrrationalityError(omega, cf.p(n), cf.q(n), T)

    qk, qk1 = cf.q(k), cf.q(k - 1)
    r, s = divmod(T - qk1, qk)
    a_next = cf.a(k + 1)
    if not (1 <= r <= a_next and 0 <= s <= qk - 1):
        raise AssertionError(f"decomposition T={T} -> r={r}, s={s} out of range")
    dk = abs(cf.D(k))
    dk1 = abs(cf.D(k + 1))
    delta_a = dk
    delta_b = dk1 + (a_next - r) * dk
    return GapStructure(
        omega=w,
        T=T,
        k=k,
        r=r,
        s=s,
        delta_a=delta_a,
        delta_b=delta_b,
        delta_c=delta_a + delta_b,
        n_a=T + 1 - qk,
        n_b=s + 1,
        n_c=qk - s - 1,
        q_k=qk,
        a_next=a_next,
    )
