"""Concrete analytic circle/annulus maps.

Every map type evaluates and differentiates in closed form, accepts scalar
or ndarray arguments, is immutable after construction, and carries an
analytically known degree.  The module-level helpers implement the checks
that the spectral machinery relies on: winding-number degree, orientation,
expansivity on the unit circle, boundary-circle inclusions certifying
holomorphic expansivity, and interior fixed points with their multipliers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .numerics import circle_integral, circle_nodes

__all__ = [
    "Annulus",
    "BlaschkeProduct",
    "ComposedMap",
    "InclusionCheck",
    "MobiusFamilyMap",
    "TrigLift",
    "check_holo_expansive",
    "degree",
    "fixed_point_disk",
    "from_descriptor",
    "iterate",
    "min_expansion",
    "orientation",
    "second_iterate_multiplier",
    "to_descriptor",
]


@dataclass(frozen=True)
class Annulus:
    """The annulus r < |z| < R.  Circle-map work wants r < 1 < R."""

    r: float
    R: float

    def __post_init__(self):
        if not 0 < self.r < self.R:
            raise ValueError(f"need 0 < r < R, got r={self.r}, R={self.R}")

    def shrink(self) -> "Annulus":
        """Pull both radii toward the unit circle (halve log r, log R)."""
        return Annulus(math.sqrt(self.r), math.sqrt(self.R))


class _MapBase:
    """Scalar/array evaluation plumbing shared by all map types."""

    def eval(self, z):
        out = self._eval(np.asarray(z, dtype=complex))
        return complex(out) if np.ndim(z) == 0 else out

    def deriv(self, z):
        out = self._deriv(np.asarray(z, dtype=complex))
        return complex(out) if np.ndim(z) == 0 else out

    def __call__(self, z):
        return self.eval(z)

    @property
    def orientation(self) -> int:
        d = self.degree
        if abs(d) < 2:
            raise ValueError(f"orientation undefined for |degree| < 2 (degree {d})")
        return 1 if d > 0 else -1


@dataclass(frozen=True)
class BlaschkeProduct(_MapBase):
    """B(z) = alpha * prod (z - a_j)/(1 - conj(a_j) z), |alpha| = 1, |a_j| < 1.

    With anti=True the map is the reciprocal 1/B, an orientation-reversing
    circle map of degree -d.
    """

    alpha: complex = 1.0
    zeros: tuple = ()
    anti: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))
        if len(self.zeros) < 2:
            raise ValueError("need degree >= 2 (at least two zeros)")
        if abs(abs(self.alpha) - 1.0) > 1e-12:
            raise ValueError(f"|alpha| must be 1, got {abs(self.alpha)}")
        for a in self.zeros:
            if abs(a) >= 1:
                raise ValueError(f"zero {a} not inside the unit disk")

    @property
    def degree(self) -> int:
        d = len(self.zeros)
        return -d if self.anti else d

    def conjugate_params(self) -> "BlaschkeProduct":
        """The product with conjugated data (alpha and all zeros)."""
        return BlaschkeProduct(
            self.alpha.conjugate(), tuple(a.conjugate() for a in self.zeros), self.anti
        )

    def _factors(self, z):
        return [(z - a) / (1 - a.conjugate() * z) for a in self.zeros]

    def _product(self, z):
        out = np.full_like(z, self.alpha)
        for u in self._factors(z):
            out = out * u
        return out

    def _product_deriv(self, z):
        # product rule; each factor has derivative (1-|a|^2)/(1-conj(a) z)^2
        us = self._factors(z)
        total = np.zeros_like(z)
        for k, a in enumerate(self.zeros):
            term = (1 - abs(a) ** 2) / (1 - a.conjugate() * z) ** 2
            for j, u in enumerate(us):
                if j != k:
                    term = term * u
            total = total + term
        return self.alpha * total

    def _eval(self, z):
        b = self._product(z)
        if not self.anti:
            return b
        if np.any(b == 0):
            raise ValueError("anti-Blaschke pole: underlying product vanishes at z")
        return 1.0 / b

    def _deriv(self, z):
        if not self.anti:
            return self._product_deriv(z)
        b = self._product(z)
        if np.any(b == 0):
            raise ValueError("anti-Blaschke pole: underlying product vanishes at z")
        return -self._product_deriv(z) / b**2

    def base_product(self) -> "BlaschkeProduct":
        """The underlying (non-reciprocal) product."""
        return replace(self, anti=False)


@dataclass(frozen=True)
class TrigLift(_MapBase):
    """Map defined through its lift: tau(e^{i theta}) = e^{i (d theta + p(theta))}
    with p(theta) = sum_k a_k cos(k theta) + b_k sin(k theta).

    Evaluation is single-valued on any annulus because cos/sin of k theta
    are Laurent polynomials in z = e^{i theta}.
    """

    d: int
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))
        if abs(self.d) < 2:
            raise ValueError(f"need |d| >= 2, got d={self.d}")

    @property
    def degree(self) -> int:
        return self.d

    def _pairs(self):
        # i*p(theta) as a Laurent polynomial: coefficients of z^k and z^-k
        ks = range(1, max(len(self.cos_coeffs), len(self.sin_coeffs)) + 1)
        for k in ks:
            a = self.cos_coeffs[k - 1] if k <= len(self.cos_coeffs) else 0.0
            b = self.sin_coeffs[k - 1] if k <= len(self.sin_coeffs) else 0.0
            yield k, (1j * a + b) / 2, (1j * a - b) / 2

    def _Q(self, z):
        out = np.zeros_like(z)
        for k, cp, cm in self._pairs():
            out = out + cp * z**k + cm * z ** (-k)
        return out

    def _Qprime(self, z):
        out = np.zeros_like(z)
        for k, cp, cm in self._pairs():
            out = out + k * (cp * z ** (k - 1) - cm * z ** (-k - 1))
        return out

    def _eval(self, z):
        return z**self.d * np.exp(self._Q(z))

    def _deriv(self, z):
        return np.exp(self._Q(z)) * (
            self.d * z ** (self.d - 1) + z**self.d * self._Qprime(z)
        )


@dataclass(frozen=True)
class MobiusFamilyMap(_MapBase):
    """Degree-2 family T(w, z) = z (2z - w) / (2 - w z).

    w = 0 gives z^2 and w = 1 the Blaschke product z (z - 1/2)/(1 - z/2);
    for real w in [0, 1] the unit circle is invariant (|2z - w| = |2 - wz|
    on |z| = 1).  When an annulus is supplied the pole 2/w is checked to
    stay clear of it.
    """

    w: complex
    annulus: "Annulus | None" = None

    def __post_init__(self):
        object.__setattr__(self, "w", complex(self.w))
        if self.annulus is not None and self.w != 0:
            pole = abs(2 / self.w)
            if self.annulus.r - 1e-9 <= pole <= self.annulus.R + 1e-9:
                raise ValueError(
                    f"pole 2/w at modulus {pole:.6g} meets the annulus "
                    f"({self.annulus.r:g}, {self.annulus.R:g})"
                )

    @property
    def degree(self) -> int:
        return 2

    def _eval(self, z):
        return z * (2 * z - self.w) / (2 - self.w * z)

    def _deriv(self, z):
        den = 2 - self.w * z
        return ((4 * z - self.w) * den + self.w * (2 * z**2 - self.w * z)) / den**2


@dataclass(frozen=True)
class ComposedMap(_MapBase):
    """Composition of maps, applied left to right (maps[0] first)."""

    maps: tuple

    def __post_init__(self):
        if not self.maps:
            raise ValueError("empty composition")
        object.__setattr__(self, "maps", tuple(self.maps))

    @property
    def degree(self) -> int:
        d = 1
        for m in self.maps:
            d *= m.degree
        return d

    @staticmethod
    def _clean_escape(z):
        # complex overflow leaves inf+nan*j debris; an escaped orbit is just
        # the point at infinity
        bad = ~np.isfinite(z)
        return np.where(bad, complex(np.inf), z) if np.any(bad) else z

    def _eval(self, z):
        with np.errstate(all="ignore"):
            for m in self.maps:
                z = self._clean_escape(m._eval(z))
        return z

    def _deriv(self, z):
        with np.errstate(all="ignore"):
            p = np.ones_like(z)
            for m in self.maps:
                p = self._clean_escape(p * m._deriv(z))
                z = self._clean_escape(m._eval(z))
        return p


def iterate(m, n: int):
    """The n-th iterate as a map (chain rule derivative, degree d^n)."""
    if n < 1:
        raise ValueError(f"iterate count must be >= 1, got {n}")
    return ComposedMap((m,) * n)


def degree(m, K: int = 2048) -> int:
    """Degree as a winding number: the circle integral of tau'/tau over the
    unit circle, rounded to the nearest integer.

    The quadrature residual must be below 1e-6; a larger residual means the
    map does not preserve the circle (or K is hopelessly small, e.g. for a
    high iterate -- use the map's analytic ``degree`` attribute there).
    """
    w = circle_integral(lambda z: m.deriv(z) / m.eval(z), 1.0, K)
    d = round(w.real)
    if abs(w - d) >= 1e-6:
        raise ValueError(
            f"winding residual {abs(w - d):.3g}: map does not preserve the "
            "circle or quadrature unresolved"
        )
    return d


def orientation(m) -> int:
    """+1 for orientation preserving, -1 for reversing (sign of degree)."""
    if hasattr(m, "degree"):
        d = m.degree
    else:
        d = degree(m)
    if abs(d) < 2:
        raise ValueError(f"unsupported map: |degree| must be >= 2, got {d}")
    return 1 if d > 0 else -1


def min_expansion(m, samples: int = 4096) -> float:
    """min |tau'| over equispaced points of the unit circle (expanding iff > 1)."""
    if samples < 256:
        raise ValueError("need at least 256 samples")
    return float(np.min(np.abs(m.deriv(circle_nodes(1.0, samples)))))


@dataclass(frozen=True)
class InclusionCheck:
    """Outcome of the boundary-circle inclusion test.

    verdict 'A1': tau(T_r) inside D_r and tau(T_R) outside D_R (orientation
    preserving); 'A2': the swapped inclusions (reversing); 'none'
    otherwise.  margin is the distance to violation (negative for 'none').
    """

    verdict: str
    margin: float


def check_holo_expansive(m, annulus: Annulus, samples: int = 4096) -> InclusionCheck:
    """Sample |tau| on both boundary circles and classify the inclusions.

    Overflow to infinity counts as "outside" (high iterates of maps with a
    superattracting pole do this); NaN samples fail the check outright.
    """
    if samples < 256:
        raise ValueError("need at least 256 samples")
    r, R = annulus.r, annulus.R
    with np.errstate(all="ignore"):
        vr = np.abs(m.eval(circle_nodes(r, samples)))
        vR = np.abs(m.eval(circle_nodes(R, samples)))
    if np.any(np.isnan(vr)) or np.any(np.isnan(vR)):
        return InclusionCheck("none", -math.inf)
    a1 = min(r - vr.max(), vR.min() - R)
    a2 = min(vr.min() - R, r - vR.max())
    if a1 > 0:
        return InclusionCheck("A1", float(a1))
    if a2 > 0:
        return InclusionCheck("A2", float(a2))
    return InclusionCheck("none", float(max(a1, a2)))


def fixed_point_disk(m, tol: float = 1e-13, max_iter: int = 10000):
    """The unique attracting fixed point z0 in the unit disk and its
    multiplier mu = tau'(z0).

    Plain forward iteration from 0 (globally convergent in practice since
    |mu| < 1 for holomorphically expansive maps), then Newton refinement
    down to |tau(z0) - z0| <= tol.
    """
    z = 0j
    for _ in range(max_iter):
        zn = m.eval(z)
        if not (np.isfinite(zn.real) and np.isfinite(zn.imag)):
            raise RuntimeError("no attracting interior fixed point located")
        if abs(zn - z) < 1e-6:
            z = zn
            break
        z = zn
    else:
        raise RuntimeError("no attracting interior fixed point located")
    for _ in range(60):
        res = m.eval(z) - z
        if abs(res) <= tol:
            break
        denom = m.deriv(z) - 1
        if denom == 0:
            raise RuntimeError("no attracting interior fixed point located")
        z = z - res / denom
    else:
        raise RuntimeError("no attracting interior fixed point located")
    if abs(z) >= 1:
        raise RuntimeError("no attracting interior fixed point located")
    return z, m.deriv(z)


def second_iterate_multiplier(params: BlaschkeProduct) -> float:
    """For an anti-Blaschke map, the square root mu in [0, 1) of the
    multiplier of the second iterate's interior fixed point.

    The second iterate of 1/B_a is the ordinary product B_conj(a) o B_a,
    whose multiplier at its fixed point z0 equals |B_a'(z0)|^2; this
    returns |B_a'(z0)|.
    """
    if not isinstance(params, BlaschkeProduct) or not params.anti:
        raise ValueError("second_iterate_multiplier expects an anti-Blaschke map")
    base = params.base_product()
    second = ComposedMap((base, base.conjugate_params().base_product()))
    z0, _ = fixed_point_disk(second)
    return abs(base.deriv(z0))


def from_descriptor(obj: dict):
    """Build a map from its JSON descriptor (see README for the schema)."""
    kind = obj.get("type")
    if kind == "blaschke":
        alpha = complex(*obj.get("alpha", [1.0, 0.0]))
        zeros = tuple(complex(re, im) for re, im in obj["zeros"])
        return BlaschkeProduct(alpha, zeros, bool(obj.get("anti", False)))
    if kind == "triglift":
        return TrigLift(int(obj["d"]), tuple(obj.get("cos", ())), tuple(obj.get("sin", ())))
    if kind == "mobius":
        return MobiusFamilyMap(complex(*obj["w"]))
    raise ValueError(f"unknown map descriptor type: {kind!r}")


def to_descriptor(m) -> dict:
    if isinstance(m, BlaschkeProduct):
        return {
            "type": "blaschke",
            "alpha": [m.alpha.real, m.alpha.imag],
            "zeros": [[a.real, a.imag] for a in m.zeros],
            "anti": m.anti,
        }
    if isinstance(m, TrigLift):
        return {"type": "triglift", "d": m.d, "cos": list(m.cos_coeffs), "sin": list(m.sin_coeffs)}
    if isinstance(m, MobiusFamilyMap):
        return {"type": "mobius", "w": [m.w.real, m.w.imag]}
    raise ValueError(f"no descriptor for map of type {type(m).__name__}")
