"""Fourier-side numerics for interval-supported signals.

All quantities live on a cyclic group Z/N'Z with N' > 4N, large enough that
additive quadruples of interval positions never wrap; interval-normalised
quantities are therefore independent of the particular N' (tested, not just
asserted).  The fourth-moment identity

    ||f||_{U2}^4 = E_{x,h1,h2} f(x) conj(f(x+h1) f(x+h2)) f(x+h1+h2)
                 = sum_r |fhat(r)|^4,      fhat(r) = E_x f(x) e(-rx/N'),

turns the quadruple average into one FFT; the direct triple sum is kept as
a slow reference.  Interval quantities use N = ref_n and the convention that
array index i holds the value at n = i + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import CyclicSignal, IntegerSet, indicator_vector, interval_signal

_DIRECT_SIZE_CAP = 512


def spectrum(signal: CyclicSignal) -> np.ndarray:
    """Normalised Fourier coefficients fhat(r) = E_x f(x) e(-rx/N').

    Parseval holds exactly up to float error: sum_r |fhat(r)|^2 equals the
    mean square E_x |f(x)|^2.
    """
    return np.fft.fft(signal.values) / signal.n_prime


def u2_group_norm(signal: CyclicSignal) -> float:
    """U2 norm over the ambient cyclic group, via the fourth-moment identity."""
    coeffs = spectrum(signal)
    return float(np.sum(np.abs(coeffs) ** 4) ** 0.25)


_INTERVAL_NORM_CACHE: dict[tuple[int, int], float] = {}


def _interval_group_norm(ref_n: int, n_prime: int) -> float:
    key = (ref_n, n_prime)
    value = _INTERVAL_NORM_CACHE.get(key)
    if value is None:
        ones = interval_signal(np.ones(ref_n), n_prime=n_prime)
        value = u2_group_norm(ones)
        _INTERVAL_NORM_CACHE[key] = value
    return value


def u2_norm(signal: CyclicSignal) -> float:
    """Interval-normalised U2 norm: group norm of f over that of 1_{1..N}.

    Because N' > 4N prevents wraparound, both fourth powers are 1/N'^3
    times wrap-free quadruple counts, so the ratio does not depend on which
    valid N' the signal was embedded with.  The indicator of {1,..,N} itself
    gets norm exactly 1.
    """
    return u2_group_norm(signal) / _interval_group_norm(signal.ref_n, signal.n_prime)


def u2_group_norm_direct(signal: CyclicSignal) -> float:
    """Direct evaluation of the quadruple average; O(N'^3) reference."""
    v = signal.values
    n = len(v)
    if n > _DIRECT_SIZE_CAP:
        raise ValueError(f"direct U2 reference capped at N' = {_DIRECT_SIZE_CAP}")
    idx = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    sh = v[idx]  # sh[h, x] = v[(x + h) mod N']
    csh = np.conj(sh)
    rows = np.arange(n)
    total = 0.0 + 0.0j
    for h1 in range(n):
        row = v * csh[h1]
        rolled = sh[(rows + h1) % n]  # rolled[h2, x] = v[(x + h1 + h2) mod N']
        total += np.einsum("x,hx,hx->", row, csh, rolled)
    mean4 = total / n**3
    return float(abs(mean4)) ** 0.25


_DIRECT_INTERVAL_CACHE: dict[tuple[int, int], float] = {}


def u2_norm_direct(signal: CyclicSignal) -> float:
    """Interval-normalised U2 norm with both parts computed directly."""
    key = (signal.ref_n, signal.n_prime)
    denom = _DIRECT_INTERVAL_CACHE.get(key)
    if denom is None:
        ones = interval_signal(np.ones(signal.ref_n), n_prime=signal.n_prime)
        denom = u2_group_norm_direct(ones)
        _DIRECT_INTERVAL_CACHE[key] = denom
    return u2_group_norm_direct(signal) / denom


def t_count(f: np.ndarray | list[float]) -> float:
    """(1/N^2) sum_{n,n' <= N} f(n) f(n') f(n+n'), f zero outside {1,..,N}.

    The self-convolution is computed by FFT at a padded power-of-two length
    at least 2N+1 so linear sums never wrap.  For a set indicator this is
    N^-2 times the number of ordered pairs (n, n') of elements whose sum is
    again an element, so it vanishes iff the set is ALLOW_EQUAL sum-free.
    """
    arr = np.asarray(f, dtype=np.float64)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("f must be a nonempty 1-d array")
    n = len(arr)
    length = 1 << (2 * n).bit_length()  # power of two, >= 2N+1
    F = np.fft.rfft(arr, length)
    conv = np.fft.irfft(F * F, length)
    # conv[m] = sum of f(i+1) f(j+1) over i+j = m, i.e. the mass at n+n' = m+2;
    # it meets f again at f(m+2) = arr[m+1].
    upto = n - 1  # m ranges over 0..N-2 so that m+2 <= N
    total = float(np.dot(conv[:upto], arr[1 : upto + 1]))
    return total / n**2


def difference_counts(A: IntegerSet, N: int) -> np.ndarray:
    """Exact counts |A ∩ (A+d)| for d = 0..N-1 (symmetric in d)."""
    a = indicator_vector(A, N)
    length = 1 << (2 * N).bit_length()
    F = np.fft.rfft(a, length)
    corr = np.fft.irfft(F * np.conj(F), length)
    counts = np.rint(corr[:N]).astype(np.int64)
    return counts


def autocorrelation(A: IntegerSet, N: int) -> np.ndarray:
    """g(d) = |A ∩ (A+d)| / N on d = -(N-1)..N-1; index d+N-1 holds g(d).

    Computed as an FFT cross-correlation; the underlying counts are integers
    and are rounded back to exact values before normalising, so downstream
    thresholding is exact.  g(0) = |A|/N and g is even.
    """
    counts = difference_counts(A, N)
    g = np.empty(2 * N - 1, dtype=np.float64)
    g[N - 1 :] = counts / N
    g[: N - 1] = (counts[1:] / N)[::-1]
    return g


def popular_differences(A: IntegerSet, N: int, t) -> list[int]:
    """{d : |A ∩ (A+d)| / N >= t} with exact integer thresholding.

    For t > 0 every returned d is an actual difference of two elements, so
    the result is contained in A - A; it is symmetric about 0 and shrinks as
    t grows.
    """
    tf = Fraction(t)
    if not 0 < tf <= 1:
        raise ValueError("threshold t must satisfy 0 < t <= 1")
    counts = difference_counts(A, N)
    num, den = tf.numerator, tf.denominator
    out = []
    for d in range(-(N - 1), N):
        if int(counts[abs(d)]) * den >= num * N:
            out.append(d)
    return out


@dataclass(frozen=True)
class DecompositionPair:
    """Split of a signal into large-spectrum and small-spectrum parts.

    f_structured keeps exactly the frequencies with |fhat| >= threshold, so
    frequency_count * threshold^2 cannot exceed the mean square of f
    (Parseval), and the leftover part has group-U2 norm at most
    sqrt(threshold) * (mean square)^(1/4).
    """

    f_structured: CyclicSignal
    f_residual: CyclicSignal
    threshold: float
    frequency_count: int

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")
        if self.f_structured.n_prime != self.f_residual.n_prime:
            raise ValueError("parts must share a group order")
        if self.f_structured.ref_n != self.f_residual.ref_n:
            raise ValueError("parts must share ref_n")
        if self.frequency_count < 0:
            raise ValueError("frequency_count must be >= 0")


def fourier_decompose(signal: CyclicSignal, tau: float) -> DecompositionPair:
    """Threshold the spectrum at tau and split the signal accordingly."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    coeffs = spectrum(signal)
    keep = np.abs(coeffs) >= tau
    structured = np.fft.ifft(np.where(keep, coeffs, 0.0) * signal.n_prime)
    residual = signal.values - structured
    return DecompositionPair(
        f_structured=CyclicSignal(structured, signal.ref_n),
        f_residual=CyclicSignal(residual, signal.ref_n),
        threshold=tau,
        frequency_count=int(keep.sum()),
    )


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PollardCheck:
    p: int
    t: Fraction
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "t": f"{self.t.numerator}/{self.t.denominator}",
            "lhs": f"{self.lhs.numerator}/{self.lhs.denominator}",
            "rhs": f"{self.rhs.numerator}/{self.rhs.denominator}",
            "holds": self.holds,
        }


def pollard_check(s1, s2, p: int, t) -> PollardCheck:
    """Exact convolution-threshold inequality on a prime cyclic group.

    With c(x) = #{(a, b) in S1 x S2 : a + b = x mod p}, both sides of

        (1/p) sum_x min(c(x)/p, t)  >=  t * min(|S1|/p + |S2|/p - t, 1)

    are evaluated in exact rational arithmetic and compared.  The inequality
    is guaranteed whenever t*p is an integer (the representation-count form
    of the bound on Z/pZ); fractional t in range is evaluated faithfully and
    may legitimately fail, which is why the verdict is returned rather than
    asserted.
    """
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    S1 = _validate_subset(s1, p, "S1")
    S2 = _validate_subset(s2, p, "S2")
    tf = Fraction(t)
    bound = Fraction(min(len(S1), len(S2)), p)
    if not 0 <= tf <= bound:
        raise ValueError(f"t must lie in [0, {bound}]")
    counts = np.zeros(p, dtype=np.int64)
    if S1 and S2:
        sums = (np.add.outer(np.array(S1), np.array(S2)) % p).ravel()
        counts = np.bincount(sums, minlength=p).astype(np.int64)
    tau = tf * p
    lhs = Fraction(0)
    for c in counts:
        lhs += min(Fraction(int(c)), tau)
    lhs /= p * p
    rhs = tf * min(Fraction(len(S1) + len(S2), p) - tf, Fraction(1))
    return PollardCheck(p=p, t=tf, lhs=lhs, rhs=rhs, holds=lhs >= rhs)


def _validate_subset(s, p: int, label: str) -> list[int]:
    elems = [int(x) for x in s]
    if len(set(elems)) != len(elems):
        raise ValueError(f"{label} has duplicate elements")
    for x in elems:
        if not 0 <= x < p:
            raise ValueError(f"{label} element {x} outside Z/{p}Z")
    return sorted(elems)


@dataclass(frozen=True)
class TStabilityGap:
    t_gap: float
    l1_gap: float
    u2_gap: float


def t_stability_gap(f, g) -> TStabilityGap:
    """Compare T(f) and T(g) for [-1, 1]-valued f, g on {1,..,N}.

    Returns |T(f) - T(g)|, the normalised l1 gap (1/N) sum |f - g|, and the
    interval U2 norm of f - g.  Replacing one argument of the triple sum at
    a time bounds the first by 7 times the second; the U2 gap is reported
    for observation alongside.
    """
    fa = np.asarray(f, dtype=np.float64)
    ga = np.asarray(g, dtype=np.float64)
    if fa.shape != ga.shape or fa.ndim != 1 or len(fa) == 0:
        raise ValueError("f and g must be nonempty 1-d arrays of equal length")
    slack = 1 + 1e-12
    if np.abs(fa).max() > slack or np.abs(ga).max() > slack:
        raise ValueError("t_stability_gap requires values in [-1, 1]")
    diff = fa - ga
    return TStabilityGap(
        t_gap=abs(t_count(fa) - t_count(ga)),
        l1_gap=float(np.abs(diff).mean()),
        u2_gap=u2_norm(interval_signal(diff)),
    )
