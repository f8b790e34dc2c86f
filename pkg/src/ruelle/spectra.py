"""Eigenvalue extraction, truncation-convergence control, counting function,
and decay-rate / order-of-growth estimation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .maps import Annulus
from .operators import TruncatedOperator, assemble_dual

__all__ = [
    "DecayFit",
    "Spectrum",
    "converged_spectrum",
    "counting_function",
    "decay_fit",
    "eigenvalues",
    "order_estimate",
]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted by decreasing modulus (ties by increasing argument
    in (-pi, pi]).  converged_count is the length of the leading run that
    was stable under truncation doubling (None if never assessed)."""

    eigenvalues: np.ndarray
    truncation: tuple
    converged_count: int | None = None
    tol: float | None = None

    def converged(self) -> np.ndarray:
        n = len(self.eigenvalues) if self.converged_count is None else self.converged_count
        return self.eigenvalues[:n]


def _sorted_desc(vals: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.angle(vals), -np.abs(vals)))
    return vals[order]


def eigenvalues(T: TruncatedOperator) -> Spectrum:
    """All eigenvalues of the truncated matrix, sorted."""
    try:
        vals = np.linalg.eigvals(T.matrix)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(T.matrix)) if T.matrix.size else float("nan")
        raise RuntimeError(f"eigensolver failed (condition estimate {cond:.3g})") from exc
    return Spectrum(_sorted_desc(vals), (T.nplus, T.nminus, T.samples))


def _leading_match(primary: np.ndarray, other: np.ndarray, tol: float) -> int:
    """Length of the leading run of ``primary`` matched greedily (by nearest
    unused value) within tol in ``other``."""
    used = np.zeros(len(other), dtype=bool)
    count = 0
    for lam in primary[: len(other)]:
        dist = np.abs(other - lam)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol:
            break
        used[j] = True
        count += 1
    return count


def converged_spectrum(
    m,
    annulus: Annulus,
    tol: float = 1e-9,
    start: int = 32,
    max_order: int = 256,
    want: int = 10,
) -> Spectrum:
    """Assemble at doubling truncation orders until the leading ``want``
    eigenvalues are stable within tol; returns the finest spectrum with its
    converged count."""
    if max_order < 2 * start:
        raise ValueError(f"max_order {max_order} must be at least 2*start = {2 * start}")
    best = None
    n = start
    while 2 * n <= max_order:
        coarse = eigenvalues(assemble_dual(m, annulus, n, n))
        fine = eigenvalues(assemble_dual(m, annulus, 2 * n, 2 * n))
        count = _leading_match(fine.eigenvalues, coarse.eigenvalues, tol)
        result = Spectrum(fine.eigenvalues, fine.truncation, count, tol)
        if best is None or count > (best.converged_count or 0):
            best = result
        if count >= want:
            return result
        n *= 2
    warnings.warn(
        f"spectrum not converged to tol={tol:g} for {want} eigenvalues "
        f"up to truncation {max_order}",
        RuntimeWarning,
        stacklevel=2,
    )
    return best


def counting_function(s: Spectrum, threshold: float) -> int:
    """N(threshold): number of converged eigenvalues with modulus >= threshold."""
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    if s.tol is not None and threshold < 10 * s.tol:
        raise ValueError(
            f"threshold {threshold:g} below the convergence floor {10 * s.tol:g}"
        )
    return int(np.sum(np.abs(s.converged()) >= threshold))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of |lambda_n| ~ exp(-c n^beta) over the converged
    sub-unit eigenvalues: log(-log|lambda_n|) regressed on log n."""

    beta: float
    c: float
    r2: float
    used_range: tuple


def _usable_indices(s: Spectrum) -> np.ndarray:
    mods = np.abs(s.converged())
    floor = max(1e-12, 10 * s.tol) if s.tol is not None else 1e-12
    n = np.arange(1, len(mods) + 1)
    keep = (mods > floor) & (mods < 1 - 1e-9) & (n >= 2)
    return n[keep]


def decay_fit(s: Spectrum) -> DecayFit:
    mods = np.abs(s.converged())
    idx = _usable_indices(s)
    if len(idx) < 6:
        raise ValueError(
            f"only {len(idx)} usable eigenvalues (< 6): finite-spectrum signal"
        )
    x = np.log(idx)
    y = np.log(-np.log(mods[idx - 1]))
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return DecayFit(float(slope), float(np.exp(intercept)), r2, (int(idx[0]), int(idx[-1])))


def order_estimate(s: Spectrum) -> float:
    """Order of growth of the spectral determinant zeta -> det(I - e^zeta L).

    Eigenvalue decay |lambda_n| ~ exp(-c n^beta) gives order 1 + 1/beta;
    with fewer than 6 usable eigenvalues the determinant is a finite
    product times (1 - e^zeta), of order exactly 1.
    """
    if len(_usable_indices(s)) < 6:
        return 1.0
    return 1.0 + 1.0 / decay_fit(s).beta
