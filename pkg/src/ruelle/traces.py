"""Traces and Fredholm determinants of the adjoint transfer operator.

Three independent routes to the same analytic objects:

* contour traces  Tr(L^n) = omega/(2 pi i) int_{boundary A} dz/(tau^n(z)-z),
  evaluated by circle quadrature on the two boundary circles;
* eigenvalue products  det(I - z L) = prod (1 - z lambda_k) from a converged
  spectrum, and the trace series det(I - zL) = exp(-sum z^n Tr(L^n)/n);
* closed forms for (anti-)Blaschke products, where the whole spectrum is a
  geometric sequence in the interior fixed-point multiplier mu.

The zero set of the Blaschke determinant zeta -> det(I - e^zeta L) is an
explicit union of vertical lattices; enumerating it gives an exact zero
counting function, which Jensen's formula ties back to circle averages of
log|det| -- the quadratic-growth cross-check used by the order estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .maps import (
    Annulus,
    BlaschkeProduct,
    MobiusFamilyMap,
    check_holo_expansive,
    fixed_point_disk,
    iterate,
    orientation,
    second_iterate_multiplier,
)
from .numerics import circle_integral, circle_nodes
from .operators import assemble_dual
from .spectra import Spectrum

__all__ = [
    "DetResult",
    "JensenCheck",
    "TraceReport",
    "blaschke_trace_closed",
    "det_from_spectrum",
    "det_from_traces",
    "det_product_formula",
    "det_zero_count_lattice",
    "jensen_count_check",
    "log_abs_det_product",
    "trace_contour",
    "trace_power",
    "trace_report",
]


def trace_contour(m, annulus: Annulus, K: int = 4096) -> complex:
    """Trace of the adjoint operator by contour quadrature:
    omega * [ I_R - I_r ] of 1/(tau(z) - z), where I_rho integrates over the
    positively oriented circle |z| = rho (the annulus boundary is the outer
    circle plus the inner circle negatively oriented)."""
    r, R = annulus.r, annulus.R
    with np.errstate(all="ignore"):
        for rho in (r, R):
            z = circle_nodes(rho, min(K, 4096))
            gap = np.abs(m.eval(z) - z)
            if np.min(np.nan_to_num(gap, nan=0.0)) < 1e-8:
                raise ValueError(
                    f"tau(z) - z vanishes near the contour circle |z|={rho:g}: "
                    "ill-posed contour"
                )

    def integrand(z):
        with np.errstate(all="ignore"):
            # 1/(tau - z) -> 0 where the iterate has overflowed to infinity
            return np.nan_to_num(1.0 / (m.eval(z) - z), nan=0.0)

    omega = orientation(m)
    return omega * (circle_integral(integrand, R, K) - circle_integral(integrand, r, K))


def trace_power(m, n: int, annulus: Annulus, K: int = 4096) -> complex:
    """Tr(L^n) as the contour trace of the n-th iterate.

    Iterates need thinner annuli; on failure the annulus is shrunk toward
    the unit circle (halving log r and log R) up to three times.
    """
    if n < 1:
        raise ValueError(f"power must be >= 1, got n={n}")
    it = iterate(m, n)
    ann = annulus
    last_err = None
    for _ in range(4):
        try:
            if check_holo_expansive(it, ann).verdict == "none":
                raise ValueError("iterate not holomorphically expansive here")
            return trace_contour(it, ann, K)
        except (ValueError, RuntimeError) as exc:
            last_err = exc
            ann = ann.shrink()
    raise RuntimeError(
        f"trace of power n={n} failed on every retry annulus "
        f"(last: {last_err}); try a smaller n or a different annulus"
    )


def blaschke_trace_closed(mu: complex, anti: bool, n: int = 1) -> complex:
    """Closed-form Tr(L^n) for a Blaschke product with interior multiplier mu:
    1 + mu^n/(1-mu^n) + conj(mu)^n/(1-conj(mu)^n); in the anti case 1 for
    odd n and 1 + 2 mu^n/(1-mu^n) for even n."""
    mu = complex(mu)
    if abs(mu) >= 1:
        raise ValueError(f"|mu| must be < 1, got {abs(mu)}")
    if n < 1:
        raise ValueError(f"power must be >= 1, got n={n}")
    if anti:
        if n % 2 == 1:
            return 1.0 + 0j
        return 1 + 2 * mu**n / (1 - mu**n)
    mc = mu.conjugate()
    return 1 + mu**n / (1 - mu**n) + mc**n / (1 - mc**n)


@dataclass(frozen=True)
class DetResult:
    """Determinant value with an attached truncation-tail estimate."""

    value: complex
    tail: float

    def __complex__(self):
        return self.value


def det_from_spectrum(s: Spectrum, zeta: complex) -> DetResult:
    """det(I - e^zeta L) as the product over converged eigenvalues of
    (1 - e^zeta lambda_k), with a geometric bound on the omitted tail."""
    lams = s.converged()
    if len(lams) == 0:
        raise ValueError("empty spectrum")
    w = np.exp(complex(zeta))
    value = complex(np.prod(1 - w * lams))

    # geometric bound on the factors beyond the converged range, anchored at
    # the smallest converged modulus
    mods = np.abs(lams)
    last = float(mods[-1])
    if last <= 1e-12:
        log_tail = abs(w) * 1e-12
    else:
        q = 0.5
        if len(mods) >= 3 and mods[1] > 0 and last < mods[1]:
            q = min((last / mods[1]) ** (1.0 / (len(mods) - 2)), 0.99)
        log_tail = abs(w) * last * q / (1 - q)
    tail = abs(value) * (math.expm1(log_tail) if log_tail < 700 else math.inf)
    if tail > 1e-6 * abs(value):
        warnings.warn(
            f"determinant tail estimate {tail:.3g} exceeds 1e-6 of |value|",
            RuntimeWarning,
            stacklevel=2,
        )
    return DetResult(value, tail)


def power_trace_table(m, annulus: Annulus, nmax: int, K: int = 4096) -> list:
    """Tr(L^n) for n = 1..nmax (reusable across determinant evaluations)."""
    return [trace_power(m, n, annulus, K) for n in range(1, nmax + 1)]


def det_from_traces(
    m,
    annulus: Annulus,
    z: complex,
    nmax: int = 24,
    K: int = 4096,
    traces: list | None = None,
) -> DetResult:
    """det(I - z L) = exp(-sum_{n<=nmax} z^n Tr(L^n) / n).

    The trace series converges only near 0 (the leading eigenvalue is 1);
    |z| <= 0.5 is enforced to keep the geometric truncation tail tiny.
    """
    z = complex(z)
    if abs(z) > 0.5:
        raise ValueError(f"|z|={abs(z):.3g} outside the validity window |z| <= 0.5")
    if traces is None:
        traces = power_trace_table(m, annulus, nmax, K)
    if len(traces) < nmax:
        raise ValueError(f"trace table has {len(traces)} entries, need {nmax}")
    total = sum(z**n / n * traces[n - 1] for n in range(1, nmax + 1))
    value = complex(np.exp(-total))
    scale = max(abs(t) for t in traces[-3:]) if nmax >= 3 else 1.0
    log_tail = scale * abs(z) ** (nmax + 1) / ((nmax + 1) * (1 - abs(z)))
    return DetResult(value, abs(value) * math.expm1(log_tail))


def det_product_formula(
    mu: complex, anti: bool, z: complex, kmax: int | None = None
) -> DetResult:
    """Closed-form determinant for (anti-)Blaschke products:
    (1-z) prod_k (1 - mu^k z)(1 - conj(mu)^k z), the second factor replaced
    by (1 + mu^k z) in the anti case."""
    mu, z = complex(mu), complex(z)
    if abs(mu) >= 1:
        raise ValueError(f"|mu| must be < 1, got {abs(mu)}")
    if kmax is None:
        if mu == 0:
            kmax = 1
        else:
            kmax = max(4, int(math.ceil((16 * math.log(10) + math.log(1 + abs(z))) / -math.log(abs(mu)))))
        kmax = min(kmax, 5000)
    value = 1 - z
    for k in range(1, kmax + 1):
        if anti:
            value *= (1 - mu**k * z) * (1 + mu**k * z)
        else:
            value *= (1 - mu**k * z) * (1 - mu.conjugate() ** k * z)
    head = abs(mu) ** (kmax + 1) * abs(z)
    tail = abs(value) * math.expm1(2 * head / max(1 - abs(mu), 1e-12)) if head < 1 else math.inf
    return DetResult(complex(value), tail)


def _log_abs_1m_exp(s: np.ndarray) -> np.ndarray:
    """log|1 - e^s| elementwise, stable for large positive Re s."""
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.shape, dtype=float)
    big = s.real > 1.0
    out[big] = s.real[big] + np.log(np.abs(1 - np.exp(-s[big])))
    out[~big] = np.log(np.abs(1 - np.exp(s[~big])))
    return out


def log_abs_det_product(mu: complex, anti: bool, zeta) -> np.ndarray:
    """log|det(I - e^zeta L)| for the closed-form determinant, computed in
    log space so that quadratic growth in Re zeta never overflows."""
    mu = complex(mu)
    if abs(mu) >= 1:
        raise ValueError(f"|mu| must be < 1, got {abs(mu)}")
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    total = _log_abs_1m_exp(zeta)
    if mu != 0:
        log_mu = np.log(mu)
        log_muc = np.log(mu.conjugate())
        kcut = int((zeta.real.max() + 45) / -math.log(abs(mu))) + 2
        for k in range(1, kcut + 1):
            if anti:
                total += _log_abs_1m_exp(zeta + k * log_mu)
                total += _log_abs_1m_exp(zeta + k * log_mu + 1j * math.pi)
            else:
                total += _log_abs_1m_exp(zeta + k * log_mu)
                total += _log_abs_1m_exp(zeta + k * log_muc)
    return total if total.size > 1 else total[0]


def _lattice_zeros(mu: complex, center: complex, radius: float, anti: bool) -> list:
    """All zeros of zeta -> det(I - e^zeta L) with |zeta - center| < radius,
    as a multiset (coinciding lattice families count with multiplicity).

    Families: e^zeta = 1 gives 2 pi i m; e^zeta = mu^-k (k >= 1) gives
    -k log(mu) + 2 pi i m, and likewise for conj(mu) (Blaschke) or -mu^-k
    (anti, shifting by i pi)."""
    mu, center = complex(mu), complex(center)
    if abs(mu) >= 1:
        raise ValueError(f"|mu| must be < 1, got {abs(mu)}")
    zeros = []
    mmax = int((radius + abs(center.imag)) / (2 * math.pi)) + 2
    for m in range(-mmax, mmax + 1):
        zc = 2j * math.pi * m
        if abs(zc - center) < radius:
            zeros.append(zc)
    if mu == 0:
        return zeros
    if anti:
        base = -np.log(complex(mu))
        offsets = (0.0, math.pi)
        bases = (base, base)
    else:
        bases = (-np.log(complex(mu)), -np.log(complex(mu.conjugate())))
        offsets = (0.0, 0.0)
    kmax = int((radius + abs(center.real)) / abs(np.real(bases[0]))) + 2
    mspan = mmax + int(kmax * (abs(np.imag(bases[0])) / (2 * math.pi) + 1)) + 2
    for base, off in zip(bases, offsets):
        for k in range(1, kmax + 1):
            anchor = k * base + 1j * off
            for m in range(-mspan, mspan + 1):
                zc = anchor + 2j * math.pi * m
                if abs(zc - center) < radius:
                    zeros.append(zc)
    return zeros


def det_zero_count_lattice(
    mu: complex, center: complex, radius: float, anti: bool = False
) -> int:
    """Exact count (with multiplicity) of determinant zeros in the open disk
    |zeta - center| < radius, by direct lattice enumeration."""
    zeros = _lattice_zeros(mu, center, radius, anti)
    if any(abs(zc - center) < 1e-9 for zc in zeros):
        raise ValueError("center coincides with a determinant zero; shift it")
    return len(zeros)


@dataclass(frozen=True)
class JensenCheck:
    """Both sides of Jensen's identity for the determinant zeros:
    integral of N(t)/t from the enumerated zeros vs. the circle average of
    log|det| minus its value at the center."""

    counting_side: float
    boundary_side: float


def jensen_count_check(
    mu: complex, R: float, K: int = 2048, anti: bool = False, center: complex = -1.0
) -> JensenCheck:
    """Check int_0^{2R} N(t)/t dt = avg_theta log|Z(center + 2R e^{i theta})|
    - log|Z(center)| for the closed-form determinant Z.

    The left side is exact from the lattice enumeration (each zero at
    distance rho contributes log(2R/rho)); the right side is trapezoidal
    quadrature of the stable log|Z| evaluation, with the angular offset
    jittered away from any zero sitting on a quadrature node.
    """
    if K < 1024:
        raise ValueError(f"K={K} too small for the boundary average (need >= 1024)")
    center = complex(center)
    zeros = _lattice_zeros(mu, center, 2 * R, anti)
    if any(abs(zc - center) < 1e-9 for zc in zeros):
        raise ValueError("center coincides with a determinant zero; shift it")
    counting = float(sum(math.log(2 * R / abs(zc - center)) for zc in zeros))

    zero_arr = np.array(zeros) if zeros else np.empty(0, dtype=complex)
    offset = 0.5
    for _ in range(5):
        theta = 2 * math.pi * (np.arange(K) + offset) / K
        nodes = center + 2 * R * np.exp(1j * theta)
        if zero_arr.size and np.min(
            np.abs(nodes[:, None] - zero_arr[None, :])
        ) < 1e-6:
            offset += 1 / math.sqrt(2)
            offset -= math.floor(offset)
            continue
        boundary = float(np.mean(log_abs_det_product(mu, anti, nodes))) - float(
            log_abs_det_product(mu, anti, center)
        )
        return JensenCheck(counting, boundary)
    raise RuntimeError("could not place quadrature nodes away from determinant zeros")


@dataclass(frozen=True)
class TraceReport:
    """Trace of one operator by every available route."""

    contour: complex
    eigensum: complex
    closed_form: complex | None
    max_pairwise_diff: float


def _closed_form_multiplier(m):
    if isinstance(m, BlaschkeProduct):
        if m.anti:
            return second_iterate_multiplier(m), True
        return fixed_point_disk(m)[1], False
    if isinstance(m, MobiusFamilyMap) and abs(m.w.imag) < 1e-14 and 0 <= m.w.real <= 1:
        return fixed_point_disk(m)[1], False
    return None


def trace_report(m, annulus: Annulus, nplus: int = 48, K: int | None = None) -> TraceReport:
    """Contour trace vs. matrix trace vs. closed form (where one exists)."""
    contour = trace_contour(m, annulus)
    T = assemble_dual(m, annulus, nplus, nplus, K)
    eigensum = complex(np.trace(T.matrix))
    closed = None
    info = _closed_form_multiplier(m)
    if info is not None:
        mu, anti = info
        closed = blaschke_trace_closed(mu, anti, 1)
    values = [contour, eigensum] + ([closed] if closed is not None else [])
    diff = max(abs(a - b) for a in values for b in values)
    return TraceReport(contour, eigensum, closed, diff)
