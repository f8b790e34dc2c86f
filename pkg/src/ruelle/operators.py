"""Finite-rank discretisation of the adjoint transfer operator.

The adjoint acts on H^2(D_r) + H^2_0(D_R^inf) with orthonormal basis
e_m^(rho)(z) = z^m / rho^m: nonnegative powers scaled by r (the "plus"
block), negative powers scaled by R (the "minus" block).  Its matrix is a
compression of the composition operator f -> f o tau: each input basis
vector is composed with tau, expanded in Fourier coefficients on the
boundary circle dictated by the orientation (preserving: plus inputs on
T_r, minus inputs on T_R; reversing: swapped), and the resulting Laurent
data is transported back into the two blocks.

Transport rule (the single source of truth for radius powers): data g on a
circle of radius rho with coefficients g_m (of z^m / rho^m) lands in the
plus block at row m with weight g_m (r/rho)^m, and in the minus block at
row m >= 1 with weight g_{-m} (rho/R)^m.  Both weights are <= 1 for the
circles used here, so the assembly never amplifies roundoff.

The entries decay geometrically away from a diagonal band, so the operator
is of exponential class and the matrix trace, eigenvalues and singular
values converge geometrically in the truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maps import Annulus, BlaschkeProduct, check_holo_expansive
from .numerics import (
    circle_integral,
    circle_nodes,
    default_samples,
    fourier_coeffs_from_samples,
)

__all__ = [
    "HardyPair",
    "TruncatedOperator",
    "assemble_dual",
    "duality_residual",
    "pairing",
    "singular_values",
    "transfer_apply_rational",
]

# Aliasing monitor on the top-|m| quartile of Fourier coefficients, column
# by column, relative to the largest coefficient.  Automatic sample counts
# are doubled until the tail clears TAIL_TOL; an explicitly requested K is
# honoured as long as the tail stays below TAIL_REJECT (comfortably under
# every spectral tolerance used downstream).
TAIL_TOL = 1e-14
TAIL_REJECT = 1e-9

# Entries below this fraction of the largest matrix entry are roundoff from
# the FFT of analytically sparse columns (e.g. tau = z^d produces exactly
# one coefficient per column); snapping them restores the exact nilpotent
# structure and keeps spurious eigenvalues at 0 instead of ~1e-4.
SNAP_TOL = 1e-14


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense truncation of the adjoint transfer operator.

    Rows/columns 0..nplus-1 are the plus block (e_m^(r), m = 0..nplus-1),
    followed by the minus block (e_{-m}^(R), m = 1..nminus).  omega records
    the orientation sign of the underlying map.
    """

    annulus: Annulus
    omega: int
    nplus: int
    nminus: int
    matrix: np.ndarray
    samples: int

    @property
    def size(self) -> int:
        return self.nplus + self.nminus


def _transport(coeff_fft: np.ndarray, rho: float, r: float, R: float, nplus: int, nminus: int):
    """One output column from Fourier data taken on the circle |z| = rho."""
    K = len(coeff_fft)
    plus = coeff_fft[np.arange(nplus) % K] * (r / rho) ** np.arange(nplus)
    mrange = np.arange(1, nminus + 1)
    minus = coeff_fft[(-mrange) % K] * (rho / R) ** mrange
    return np.concatenate([plus, minus])


def assemble_dual(
    m,
    annulus: Annulus,
    nplus: int,
    nminus: int | None = None,
    K: int | None = None,
) -> TruncatedOperator:
    """Assemble the adjoint transfer operator at truncation (nplus, nminus).

    Refuses to assemble if the map is not holomorphically expansive on the
    annulus (the compositions would not be defined on the boundary
    circles).  With K=None the sample count starts at max(256, 8N) and is
    doubled until the aliasing tail of every column passes TAIL_TOL; an
    explicit K that fails the monitor raises instead.
    """
    if nminus is None:
        nminus = nplus
    check = check_holo_expansive(m, annulus)
    if check.verdict == "none":
        raise ValueError(
            "map is not holomorphically expansive on the annulus "
            f"(margin {check.margin:.3g}); refusing assembly"
        )
    omega = 1 if check.verdict == "A1" else -1
    r, R = annulus.r, annulus.R
    rho_plus, rho_minus = (r, R) if omega == 1 else (R, r)

    auto = K is None
    k = default_samples(max(nplus, nminus)) if auto else K
    if k < 8 * max(nplus, nminus):
        raise ValueError(f"K={k} below 8*max(nplus, nminus)={8*max(nplus, nminus)}")

    while True:
        tp = m.eval(circle_nodes(rho_plus, k))
        tm = m.eval(circle_nodes(rho_minus, k))
        cols = np.empty((nplus + nminus, nplus + nminus), dtype=complex)
        worst_tail = 0.0
        g = np.ones(k, dtype=complex)
        step = tp / r
        for n in range(nplus):
            fd = fourier_coeffs_from_samples(g, rho_plus)
            scale = fd.max_abs()
            if scale > 0:
                worst_tail = max(worst_tail, fd.tail_max() / scale)
            cols[:, n] = _transport(fd.raw, rho_plus, r, R, nplus, nminus)
            g = g * step
        g = np.ones(k, dtype=complex)
        step = R / tm
        for n in range(1, nminus + 1):
            g = g * step
            fd = fourier_coeffs_from_samples(g, rho_minus)
            scale = fd.max_abs()
            if scale > 0:
                worst_tail = max(worst_tail, fd.tail_max() / scale)
            cols[:, nplus + n - 1] = _transport(fd.raw, rho_minus, r, R, nplus, nminus)

        if worst_tail <= TAIL_TOL:
            break
        if not auto:
            if worst_tail > TAIL_REJECT:
                raise RuntimeError(
                    f"aliasing tail {worst_tail:.3g} exceeds {TAIL_REJECT:g} at "
                    f"K={k}; request a larger K"
                )
            break
        if k >= 1 << 16:
            raise RuntimeError(f"aliasing tail {worst_tail:.3g} unresolved at K={k}")
        k *= 2

    top = np.abs(cols).max()
    if top > 0:
        cols[np.abs(cols) < SNAP_TOL * top] = 0.0
    return TruncatedOperator(annulus, omega, nplus, nminus, cols, k)


def singular_values(T) -> np.ndarray:
    """Singular values of the truncated operator, decreasing."""
    matrix = np.asarray(getattr(T, "matrix", T))
    return np.linalg.svd(matrix, compute_uv=False)


@dataclass(frozen=True)
class HardyPair:
    """Coefficients (h1, h2) on the bases e_m^(r) (m >= 0) and e_{-m}^(R)
    (m >= 1): a dual vector for the annulus Hardy space."""

    plus: np.ndarray
    minus: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "plus", np.asarray(self.plus, dtype=complex))
        object.__setattr__(self, "minus", np.asarray(self.minus, dtype=complex))

    @classmethod
    def basis(cls, kind: str, m: int, nplus: int, nminus: int) -> "HardyPair":
        plus = np.zeros(nplus, dtype=complex)
        minus = np.zeros(nminus, dtype=complex)
        if kind == "plus":
            plus[m] = 1.0
        elif kind == "minus":
            minus[m - 1] = 1.0
        else:
            raise ValueError(f"kind must be 'plus' or 'minus', got {kind!r}")
        return cls(plus, minus)

    @classmethod
    def from_vector(cls, vec: np.ndarray, nplus: int) -> "HardyPair":
        return cls(vec[:nplus], vec[nplus:])

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.plus, self.minus])

    def h1(self, z, r: float):
        out = np.zeros_like(np.asarray(z, dtype=complex))
        for mm, c in enumerate(self.plus):
            if c != 0:
                out = out + c * (np.asarray(z) / r) ** mm
        return out

    def h2(self, z, R: float):
        out = np.zeros_like(np.asarray(z, dtype=complex))
        for mm, c in enumerate(self.minus, start=1):
            if c != 0:
                out = out + c * (R / np.asarray(z)) ** mm
        return out


def _laurent_eval(coeffs: dict, z):
    out = np.zeros_like(np.asarray(z, dtype=complex))
    for mm, c in coeffs.items():
        out = out + c * np.asarray(z, dtype=complex) ** mm
    return out


def pairing(h: HardyPair, f: dict, annulus: Annulus, K: int = 512) -> complex:
    """The duality pairing l(f) = (1/2 pi i) [ int_{|z|=r} f h1 dz
    + int_{|z|=R} f h2 dz ] for a finite Laurent series f (index -> coeff)."""
    r, R = annulus.r, annulus.R
    inner = circle_integral(lambda z: _laurent_eval(f, z) * h.h1(z, r), r, K)
    outer = circle_integral(lambda z: _laurent_eval(f, z) * h.h2(z, R), R, K)
    return inner + outer


def transfer_apply_rational(m: BlaschkeProduct, f: dict, z: complex) -> complex:
    """Apply the transfer operator of a (possibly anti-) Blaschke product to
    a finite Laurent series f at the point z:

        (L f)(z) = omega * sum_k f(phi_k(z)) / tau'(phi_k(z)),

    with the preimages phi_k(z) found as roots of the degree-d polynomial
    alpha N(phi) - y D(phi) (y = z, or 1/z in the anti case), via the
    companion matrix.
    """
    if not isinstance(m, BlaschkeProduct):
        raise ValueError("transfer_apply_rational expects a Blaschke-type map")
    z = complex(z)
    y = 1 / z if m.anti else z

    num = np.array([1.0 + 0j])
    den = np.array([1.0 + 0j])
    for a in m.zeros:
        num = np.polynomial.polynomial.polymul(num, [-a, 1.0])
        den = np.polynomial.polynomial.polymul(den, [1.0, -a.conjugate()])
    d = len(m.zeros)
    poly = m.alpha * num - y * np.pad(den, (0, d + 1 - len(den)))[: d + 1]
    if abs(poly[-1]) < 1e-13 * np.abs(poly).max():
        raise RuntimeError(f"preimage escapes to infinity near z={z:.6g}")
    phis = np.roots(poly[::-1])
    if len(phis) != d:
        raise RuntimeError(f"expected {d} preimages, root finder returned {len(phis)}")

    residual = np.abs(m.eval(phis) - z)
    if residual.max() >= 1e-10:
        raise RuntimeError(
            f"preimage residual {residual.max():.3g} too large at z={z:.6g}"
        )
    dtau = m.deriv(phis)
    if np.min(np.abs(dtau)) < 1e-8:
        raise ValueError(f"degenerate preimage: z={z:.6g} is near a critical value")
    omega = 1 if m.degree > 0 else -1
    return omega * complex(np.sum(_laurent_eval(f, phis) / dtau))


def _project_to_laurent(m: BlaschkeProduct, f: dict, K: int = 256, cutoff: float = 1e-15) -> dict:
    """Laurent coefficients of L f on the unit circle (for duality checks)."""
    samples = np.array([transfer_apply_rational(m, f, zz) for zz in circle_nodes(1.0, K)])
    fd = fourier_coeffs_from_samples(samples, 1.0)
    top = max(fd.max_abs(), 1.0)
    return {
        mm: fd.coeff(mm)
        for mm in range(-K // 2, K // 2)
        if abs(fd.coeff(mm)) > cutoff * top
    }


def duality_residual(m: BlaschkeProduct, annulus: Annulus, N: int, K: int = 512) -> float:
    """Consistency of the assembled adjoint with the transfer operator under
    the duality pairing: max over low-order basis pairs (h, f) of
    |pairing(L^dagger h, f) - pairing(h, L f)|.
    """
    T = assemble_dual(m, annulus, N, N)
    hs = [
        HardyPair.basis("plus", 0, N, N),
        HardyPair.basis("plus", 1, N, N),
        HardyPair.basis("minus", 1, N, N),
        HardyPair.basis("minus", 2, N, N),
    ]
    fs = [{mm: 1.0} for mm in range(-2, 3)]
    worst = 0.0
    for f in fs:
        lf = _project_to_laurent(m, f)
        for h in hs:
            th = HardyPair.from_vector(T.matrix @ h.to_vector(), N)
            lhs = pairing(th, f, annulus, K)
            rhs = pairing(h, lf, annulus, K)
            worst = max(worst, abs(lhs - rhs))
    return worst
