"""Oracles and comparison utilities shared across the test modules."""

import numpy as np


def blaschke_spectrum(mu, count, anti=False):
    """Expected leading eigenvalues for a product with interior multiplier mu
    (anti: mu is the square root of the second-iterate multiplier):
    n odd -> conj(mu)^((n-1)/2), n even -> mu^(n/2); anti flips the sign of
    the even entries and drops the conjugate.

    One extra term is generated and the list re-sorted with the package
    ordering (modulus descending, then argument ascending) before cutting,
    so that a cut through a conjugate pair keeps the same member that the
    computed spectrum keeps.
    """
    out = []
    for n in range(1, count + 2):
        if anti:
            lam = -(mu ** (n // 2)) if n % 2 == 0 else mu ** ((n - 1) // 2)
        else:
            lam = mu ** (n // 2) if n % 2 == 0 else np.conj(mu) ** ((n - 1) // 2)
        out.append(complex(lam))
    vals = np.array(out)
    vals = vals[np.lexsort((np.angle(vals), -np.abs(vals)))]
    return vals[:count]


def match_multiset(expected, computed, tol, slack=0):
    """Greedy nearest-value matching; returns the worst matched distance.

    ``slack`` widens the candidate pool beyond len(expected): a cut through
    an equal-modulus conjugate pair is resolved by floating-point noise, so
    an even cut needs one extra slot to find the pair member it expects.
    """
    expected = np.asarray(expected, dtype=complex)
    pool = np.array(computed[: len(expected) + slack], dtype=complex)
    used = np.zeros(len(pool), dtype=bool)
    worst = 0.0
    for lam in expected:
        dist = np.abs(pool - lam)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        used[j] = True
        worst = max(worst, float(dist[j]))
    assert worst <= tol, f"eigenvalue mismatch {worst:.3g} > {tol:g}"
    return worst


def residue_sum(poles_and_residues, radius):
    """Reference oracle: sum of residues strictly inside |z| = radius."""
    return sum(res for pole, res in poles_and_residues if abs(pole) < radius)


def brute_force_coeff(f, radius, m, K=4096):
    """O(K) rectangle-rule Fourier coefficient, independent of the FFT path."""
    theta = 2 * np.pi * np.arange(K) / K
    vals = f(radius * np.exp(1j * theta))
    return complex(np.mean(vals * np.exp(-1j * m * theta)))


def finite_difference(m, z, h=1e-6):
    return (m.eval(z + h) - m.eval(z - h)) / (2 * h)
