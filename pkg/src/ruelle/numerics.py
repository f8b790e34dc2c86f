"""Shared numeric kernels: discrete Fourier analysis on circles and
exponentially convergent circle quadrature.

Everything here works with samples at the K-th roots of unity scaled to a
circle |z| = radius.  For functions analytic in a neighbourhood of the
circle both the coefficient recovery and the quadrature converge
geometrically in K, which is what makes the operator assembly and the
contour traces in the rest of the package spectrally accurate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FourierData",
    "circle_nodes",
    "circle_integral",
    "default_samples",
    "fourier_coeffs",
    "fourier_coeffs_from_samples",
]


def circle_nodes(radius: float, K: int) -> np.ndarray:
    """The K equispaced sample points radius * e^{2 pi i j / K}, j = 0..K-1."""
    return radius * np.exp(2j * np.pi * np.arange(K) / K)


def default_samples(n: int) -> int:
    """Default sample count for a truncation order n: max(256, 8n), rounded
    up to a power of two."""
    k = max(256, 8 * n)
    return 1 << (k - 1).bit_length()


def _require_power_of_two(K: int):
    if K < 8 or (K & (K - 1)) != 0:
        raise ValueError(f"sample count K={K} must be a power of two >= 8")


def _check_finite(values: np.ndarray, radius: float):
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        theta = 2 * np.pi * bad[0] / len(values)
        raise ValueError(
            f"non-finite sample on circle |z|={radius:g} at angle {theta:.8f}"
        )


@dataclass(frozen=True)
class FourierData:
    """Fourier coefficients of theta -> f(radius * e^{i theta}).

    coeff(m) is (1/K) sum_j f(z_j) e^{-2 pi i j m / K} for m in
    [-K/2, K/2), i.e. the coefficient of z^m / radius^m in the Laurent
    expansion sampled on the circle.  ``raw`` holds the full FFT layout.
    """

    radius: float
    raw: np.ndarray

    @property
    def samples(self) -> int:
        return len(self.raw)

    def coeff(self, m: int) -> complex:
        K = self.samples
        if not -K // 2 <= m < K // 2:
            raise IndexError(f"index {m} outside folded range [{-K//2}, {K//2})")
        return complex(self.raw[m % K])

    def coeffs(self) -> dict:
        """Folded index -> coefficient, for inspection."""
        K = self.samples
        return {m: complex(self.raw[m % K]) for m in range(-K // 2, K // 2)}

    def tail_max(self) -> float:
        """Largest |coeff| over the quarter of indices with largest |m|.

        For an analytic integrand this decays geometrically; a large value
        relative to max|coeff| signals aliasing (K too small).
        """
        K = self.samples
        return float(np.max(np.abs(self.raw[3 * K // 8 : 5 * K // 8 + 1])))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.raw)))


def fourier_coeffs_from_samples(values, radius: float) -> FourierData:
    """FourierData from samples already taken at circle_nodes(radius, K)."""
    values = np.asarray(values, dtype=complex)
    _require_power_of_two(len(values))
    _check_finite(values, radius)
    return FourierData(radius, np.fft.fft(values) / len(values))


def fourier_coeffs(f, radius: float, K: int) -> FourierData:
    """Fourier coefficients of f sampled at K equispaced points on |z|=radius.

    Satisfies the Parseval identity sum |coeff(m)|^2 = mean |f(z_j)|^2 to
    roundoff, and recovers trigonometric polynomials of degree < K/2
    exactly.
    """
    _require_power_of_two(K)
    with np.errstate(all="ignore"):  # non-finite samples rejected below
        values = np.asarray(f(circle_nodes(radius, K)), dtype=complex)
    if values.ndim == 0:
        values = np.full(K, complex(values))
    return fourier_coeffs_from_samples(values, radius)


def circle_integral(f, radius: float, K: int = 256) -> complex:
    """(1/2 pi i) times the integral of f over the circle |z| = radius
    (positively oriented), by the trapezoidal rule: (1/K) sum f(z_j) z_j.

    Exponentially accurate in K for f analytic near the circle; exact (up
    to roundoff) on Laurent polynomials of degree < K, where it returns the
    z^{-1} coefficient.
    """
    if K < 8:
        raise ValueError(f"K={K} too small for circle quadrature (need >= 8)")
    z = circle_nodes(radius, K)
    with np.errstate(all="ignore"):  # non-finite samples rejected below
        values = np.asarray(f(z), dtype=complex)
    if values.ndim == 0:
        values = np.full(K, complex(values))
    _check_finite(values, radius)
    return complex(np.mean(values * z))
