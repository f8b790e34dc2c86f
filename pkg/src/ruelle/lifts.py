"""Lifts of circle maps and complexified homotopies between them.

A circle map tau of degree d factors through the exponential:
tau(e^{i theta}) = e^{i lift(theta)} with lift(theta) = alpha + d theta +
(periodic part).  The lift is represented spectrally -- Fourier
coefficients of the logarithmic derivative z tau'(z)/tau(z) on the unit
circle -- which gives analytic continuation to a strip |Im theta| <= eps
for free and is spectrally accurate.

Two equal-degree maps are joined by the convex combination of their lifts,
T(w, .) = exp(i [(1-w) lift0 + w lift1]), which stays well defined on the
annulus image of the strip and remains holomorphically expansive for w in a
complex neighbourhood of [0, 1].  The neighbourhood half-width eta and the
strip half-width eps are certified by dense sampling with explicit margins
(the existence argument is a compactness one and yields no constants).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .maps import Annulus, _MapBase
from .numerics import circle_nodes, fourier_coeffs_from_samples

__all__ = [
    "HomotopyFamily",
    "HomotopyMember",
    "LiftSeries",
    "build_homotopy",
    "find_expansive_annulus",
    "lift",
    "lift_eval",
]


@dataclass(frozen=True)
class LiftSeries:
    """lift(theta) = alpha + d theta + sum_{n != 0} g_n/(i n) (e^{i n theta} - 1),
    valid on the strip |Im theta| <= strip."""

    d: int
    alpha: float
    ns: np.ndarray
    gs: np.ndarray
    strip: float

    def eval(self, theta):
        th = np.asarray(theta, dtype=complex)
        if th.size and np.max(np.abs(th.imag)) > self.strip + 1e-12:
            raise ValueError(
                f"Im theta exceeds certified strip half-width {self.strip:g}"
            )
        out = self.alpha + self.d * th
        if len(self.ns):
            phases = np.exp(1j * np.multiply.outer(th, self.ns))
            out = out + (phases - 1) @ (self.gs / (1j * self.ns))
        return complex(out) if np.ndim(theta) == 0 else out

    def deriv(self, theta):
        th = np.asarray(theta, dtype=complex)
        out = np.full(th.shape, complex(self.d))
        if len(self.ns):
            out = out + np.exp(1j * np.multiply.outer(th, self.ns)) @ self.gs
        return complex(out) if np.ndim(theta) == 0 else out


def lift_eval(L: LiftSeries, theta):
    return L.eval(theta)


def _roundtrip_error(m, L: LiftSeries, im_offset: float, samples: int = 256) -> float:
    theta = 2 * np.pi * np.arange(samples) / samples + 1j * im_offset
    return float(np.max(np.abs(np.exp(1j * L.eval(theta)) - m.eval(np.exp(1j * theta)))))


def lift(m, K: int = 1024) -> LiftSeries:
    """Lift of a circle-preserving map from the Fourier data of its
    logarithmic derivative h(z) = z tau'(z)/tau(z) on the unit circle.

    The mean of h is the degree (checked to 1e-8 before rounding); the
    remaining coefficients integrate term by term into the periodic part.
    alpha is the principal argument of tau(1).  The strip half-width is
    certified by halving a decay-based candidate until the roundtrip
    e^{i lift(theta)} = tau(e^{i theta}) holds on the strip boundary.
    """
    z = circle_nodes(1.0, K)
    tv = m.eval(z)
    if np.min(np.abs(tv)) < 1e-12:
        raise ValueError("tau vanishes on the unit circle; no lift")
    fd = fourier_coeffs_from_samples(z * m.deriv(z) / tv, 1.0)
    c0 = fd.coeff(0)
    d = round(c0.real)
    if abs(c0 - d) >= 1e-8:
        raise RuntimeError(
            f"inconsistent lift: mean of log-derivative {c0:.3g} is not an integer"
        )
    if abs(d) < 2:
        raise ValueError(f"|degree| must be >= 2, got {d}")

    idx = np.concatenate([np.arange(-K // 2, 0), np.arange(1, K // 2)])
    raw = fd.raw[idx % K]
    keep = np.abs(raw) > 1e-16 * max(1.0, fd.max_abs())
    ns, gs = idx[keep], raw[keep]
    alpha = cmath.phase(m.eval(1.0 + 0j))

    if len(ns) == 0:
        candidate = 4.0
    else:
        sig = np.abs(gs) > 1e-13 * max(1.0, float(np.max(np.abs(gs))))
        if sig.sum() >= 4:
            slope = np.polyfit(np.abs(ns[sig]), np.log(np.abs(gs[sig])), 1)[0]
            candidate = 0.45 * -slope if slope < 0 else 0.05
        else:
            candidate = 0.3
        candidate = min(max(candidate, 1e-3), 0.6)

    probe = LiftSeries(d, alpha, ns, gs, math.inf)
    eps = candidate
    for _ in range(8):
        try:
            err = max(_roundtrip_error(m, probe, eps), _roundtrip_error(m, probe, -eps))
        except (ValueError, FloatingPointError, OverflowError):
            err = math.inf
        if err < 1e-8:
            return LiftSeries(d, alpha, ns, gs, eps)
        eps /= 2
    raise RuntimeError(
        f"could not certify an analyticity strip for the lift (last eps={eps:g})"
    )


@dataclass(frozen=True)
class HomotopyFamily:
    """Certified complex homotopy between two equal-degree expanding maps.

    For every w within distance eta of [0, 1], T(w, .) maps the circle
    |z| = r0 strictly inside |z| = r1 and |z| = R0 strictly outside
    |z| = R1 (swapped for negative degree), with the recorded margins.
    """

    lift0: LiftSeries
    lift1: LiftSeries
    d: int
    epsilon: float
    eta: float
    r0: float
    R0: float
    r1: float
    R1: float
    margin_inner: float
    margin_outer: float

    def annulus(self) -> Annulus:
        return Annulus(self.r0, self.R0)

    def member(self, w: complex) -> "HomotopyMember":
        return HomotopyMember(self, complex(w))


@dataclass(frozen=True)
class HomotopyMember(_MapBase):
    """The map T(w, .) = exp(i [(1-w) lift0 + w lift1]) on the certified
    annulus, for one parameter value w."""

    family: HomotopyFamily
    w: complex

    def __post_init__(self):
        u = min(max(self.w.real, 0.0), 1.0)
        if abs(self.w - u) > self.family.eta + 1e-12:
            raise ValueError(
                f"w={self.w:.6g} outside the certified neighbourhood "
                f"[0,1] + disk({self.family.eta:g})"
            )

    @property
    def degree(self) -> int:
        return self.family.d

    def _theta(self, z):
        mods = np.abs(z)
        if np.any(mods < self.family.r0 * (1 - 1e-10)) or np.any(
            mods > self.family.R0 * (1 + 1e-10)
        ):
            raise ValueError(
                f"z outside certified annulus ({self.family.r0:g}, {self.family.R0:g})"
            )
        return -1j * np.log(z)

    def _combined(self, theta):
        return (1 - self.w) * self.family.lift0.eval(theta) + self.w * self.family.lift1.eval(theta)

    def _eval(self, z):
        return np.exp(1j * self._combined(self._theta(z)))

    def _deriv(self, z):
        theta = self._theta(z)
        slope = (1 - self.w) * self.family.lift0.deriv(theta) + self.w * self.family.lift1.deriv(theta)
        return np.exp(1j * self._combined(theta)) * slope / z


def _difference_sup(l0: LiftSeries, l1: LiftSeries, im: float, samples: int, deriv: bool) -> float:
    theta = 2 * np.pi * np.arange(samples) / samples + 1j * im
    if deriv:
        vals = l1.deriv(theta) - l0.deriv(theta)
    else:
        vals = l1.eval(theta) - l0.eval(theta)
    return float(np.max(np.abs(vals)))


def build_homotopy(
    map0,
    map1,
    boundary_samples: int = 4096,
    lift_samples: int = 1024,
    epsilon: float | None = None,
    eta_cap: float | None = None,
) -> HomotopyFamily:
    """Certify a homotopy family between map0 and map1 (equal degrees).

    The strip half-width eps is bisected until (a) the real part of the
    combined lift derivative stays above 1 in modulus throughout the strip
    and the w-neighbourhood (giving the expansion factor rho), and (b) the
    boundary-circle inclusions hold with positive sampled margin for the
    annuli r0 = e^-eps, R0 = e^eps, r1/R1 the geometric midpoints toward
    e^{-/+ eps (rho+1)/2}.  eta is sized from sup|lift1 - lift0| so the
    whole neighbourhood keeps |T| within the certified corridor; epsilon
    and eta_cap override the starting strip width and the eta ceiling.
    """
    l0 = lift(map0, lift_samples)
    l1 = lift(map1, lift_samples)
    if l0.d != l1.d:
        raise ValueError(f"degree mismatch: {l0.d} vs {l1.d}")
    d = l0.d
    sgn = 1.0 if d > 0 else -1.0

    eps = min(l0.strip, l1.strip, 0.35)
    if epsilon is not None:
        if epsilon <= 0:
            raise ValueError(f"epsilon override must be positive, got {epsilon}")
        eps = min(eps, epsilon)
    while eps >= 1e-4:
        grid = 2 * np.pi * np.arange(512) / 512
        rows = [grid, grid + 1j * eps, grid - 1j * eps]
        rho_real = math.inf
        for theta in rows:
            for L in (l0, l1):
                rho_real = min(rho_real, float(np.min(sgn * L.deriv(theta).real)))
        if rho_real <= 1 + 1e-3:
            eps /= 2
            continue

        m_deriv = max(
            _difference_sup(l0, l1, im, 512, deriv=True) for im in (0.0, eps, -eps)
        )
        m_lift = _difference_sup(l0, l1, 0.0, 512, deriv=False)
        slack = (rho_real - 1) / 2
        eta = min(
            slack / m_deriv if m_deriv > 1e-14 else math.inf,
            eps * slack / m_lift if m_lift > 1e-14 else math.inf,
            eta_cap if eta_cap is not None else 1.0,
            1.0,
        )
        rho_u = rho_real - eta * m_deriv
        grow = math.exp(eps * (rho_u + 1) / 2)
        r0, R0 = math.exp(-eps), math.exp(eps)
        r1, R1 = math.sqrt(r0 / grow), math.sqrt(R0 * grow)

        ws = [complex(u) for u in np.linspace(0, 1, 11)]
        ws += [
            u + eta * cmath.exp(1j * phi)
            for u in (0.0, 0.5, 1.0)
            for phi in np.linspace(0, 2 * math.pi, 8, endpoint=False)
        ]
        b = 2 * np.pi * np.arange(boundary_samples) / boundary_samples
        inner_vals0, inner_vals1 = l0.eval(b + 1j * eps), l1.eval(b + 1j * eps)
        outer_vals0, outer_vals1 = l0.eval(b - 1j * eps), l1.eval(b - 1j * eps)
        margin_inner = math.inf
        margin_outer = math.inf
        for w in ws:
            mod_in = np.exp(-((1 - w) * inner_vals0 + w * inner_vals1).imag)
            mod_out = np.exp(-((1 - w) * outer_vals0 + w * outer_vals1).imag)
            if d > 0:
                margin_inner = min(margin_inner, r1 - float(mod_in.max()))
                margin_outer = min(margin_outer, float(mod_out.min()) - R1)
            else:
                margin_inner = min(margin_inner, float(mod_in.min()) - R1)
                margin_outer = min(margin_outer, r1 - float(mod_out.max()))
        if margin_inner > 0 and margin_outer > 0:
            return HomotopyFamily(
                l0, l1, d, eps, eta, r0, R0, r1, R1, margin_inner, margin_outer
            )
        eps /= 2
    raise RuntimeError("maps too wild for certified homotopy at this resolution")


def find_expansive_annulus(m, samples: int = 2048, widths=None) -> Annulus:
    """Search symmetric annuli (e^-t, e^t) and return the one with the best
    contraction ratio.

    The quality of an annulus for the spectral assembly is the relative
    inclusion depth q = max(sup|tau|_r / r, R / inf|tau|_R) (mirrored for
    orientation-reversing maps): truncation errors decay like q^N, so the
    search minimises q rather than the absolute margin, which would always
    favour the widest admissible annulus.
    """
    if widths is None:
        widths = np.geomspace(0.01, 0.5, 24)
    best = None
    for t in widths:
        r, R = math.exp(-t), math.exp(t)
        try:
            with np.errstate(all="ignore"):
                vr = np.abs(m.eval(circle_nodes(r, samples)))
                vR = np.abs(m.eval(circle_nodes(R, samples)))
        except (ValueError, OverflowError, FloatingPointError):
            continue
        if np.any(np.isnan(vr)) or np.any(np.isnan(vR)):
            continue
        q_preserving = max(vr.max() / r, R / vR.min())
        q_reversing = max(R / vr.min(), vR.max() / r)
        q = min(q_preserving, q_reversing)
        if q < 1 and (best is None or q < best[0]):
            best = (q, Annulus(r, R))
    if best is None:
        raise RuntimeError("no annulus in the search range certifies expansivity")
    return best[1]
