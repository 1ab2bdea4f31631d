"""Critical points of finite Blaschke products inside the disk.

The derivative of B = phase * N / D (with N, D the zero/denominator
polynomials) vanishes exactly at the disk roots of P = N'D - N D'.  Roots
are found by companion-matrix eigenvalues with Newton polishing and cluster
merging; zeros of B with multiplicity m contribute an exact factor
(beta - z)^(m - 1) which is deflated before solving.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly

from .blaschke import BlaschkeProduct, death_time, evaluate
from .errors import DomainError, NonConvergenceError

# Roots this close (Euclidean) to a zero of B are classified as at-zero.
AT_ZERO_TOL = 1e-9
# Critical points this close to the boundary are numerically unreliable
# (their death times blow up) and are dropped with a warning.
BOUNDARY_REJECT = 1e-9
DEFAULT_ROOT_TOL = 1e-10


@dataclass(frozen=True)
class CriticalPoint:
    """A zero of B' inside the disk.

    ``order`` is the number of vanishing derivatives; ``death_time`` is the
    filtration time ln((1+|B(w)|)/(1-|B(w)|)) and is None for points sitting
    at a zero of B (those never contribute a finite bar).
    """

    location: complex
    order: int
    critical_value: float
    death_time: float | None
    at_zero: bool


def _trim(coef: np.ndarray, rel_tol: float = 1e-14) -> np.ndarray:
    coef = np.asarray(coef, dtype=complex)
    scale = np.max(np.abs(coef)) if coef.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(coef) > rel_tol * scale)[0]
    return coef[: keep[-1] + 1] if keep.size else np.zeros(1, dtype=complex)


def critical_numerator(B: BlaschkeProduct) -> Polynomial:
    """Numerator polynomial P = N'D - N D' whose disk roots are the zeros of B'.

    The common-factor cancellation at multiple zeros of B is not performed:
    a zero of multiplicity m appears as a root of P with multiplicity m - 1.
    """
    n_coef = np.array([1.0 + 0.0j])
    d_coef = np.array([1.0 + 0.0j])
    for beta, m in B.zeros:
        for _ in range(m):
            n_coef = npoly.polymul(n_coef, [beta, -1.0])
            d_coef = npoly.polymul(d_coef, [1.0, -np.conj(beta)])
    p = npoly.polysub(
        npoly.polymul(npoly.polyder(n_coef), d_coef),
        npoly.polymul(n_coef, npoly.polyder(d_coef)),
    )
    return Polynomial(_trim(p))


def _poly_scale(coef_abs: np.ndarray, r: float) -> float:
    """sum_k |c_k| r^k, the natural residual scale at radius r."""
    return float(npoly.polyval(r, coef_abs))


def find_roots(P, tol: float = DEFAULT_ROOT_TOL) -> list[tuple[complex, int]]:
    """All complex roots of ``P`` with multiplicities.

    Companion-matrix eigenvalues seeded, Newton-polished to residual
    |P(r)| <= tol * sum |c_k| |r|^k, then clusters of nearby roots (pairwise
    distance at most tol^(1/size)) are merged into their centroid with summed
    multiplicity.
    """
    if not 1e-14 < tol < 1e-3:
        raise DomainError(f"tol must lie in (1e-14, 1e-3), got {tol!r}")
    coef = _trim(P.coef if isinstance(P, Polynomial) else np.asarray(P, dtype=complex))
    if coef.size <= 1:
        return []
    coef_abs = np.abs(coef)
    dcoef = npoly.polyder(coef)
    roots = npoly.polyroots(coef)

    polished = []
    for r in roots:
        r = complex(r)
        for _ in range(500):
            p = complex(npoly.polyval(r, coef))
            if abs(p) <= tol * _poly_scale(coef_abs, abs(r)):
                break
            dp = complex(npoly.polyval(r, dcoef))
            if dp == 0.0:
                break
            r = r - p / dp
        else:
            raise NonConvergenceError(
                f"root polishing did not reach residual {tol} * scale in 500 iterations near {r!r}"
            )
        if abs(complex(npoly.polyval(r, coef))) > tol * _poly_scale(coef_abs, abs(r)):
            raise NonConvergenceError(f"root near {r!r} stalled above the residual bound")
        polished.append(r)

    # Cluster merging: grow clusters while any pair of centroids sits within
    # tol^(1/merged_size).
    clusters: list[list[complex]] = [[r] for r in sorted(polished, key=lambda c: (c.real, c.imag))]
    merged = True
    while merged and len(clusters) > 1:
        merged = False
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                size = len(clusters[i]) + len(clusters[j])
                ci = np.mean(clusters[i])
                cj = np.mean(clusters[j])
                if abs(ci - cj) <= tol ** (1.0 / size):
                    clusters[i].extend(clusters[j])
                    del clusters[j]
                    merged = True
                    break
            if merged:
                break
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def _deflate(coef: np.ndarray, root: complex, times: int) -> np.ndarray:
    """Synthetic division of the ascending-coefficient polynomial by
    (z - root), ``times`` times; remainders are discarded (they are exact
    factors up to rounding)."""
    for _ in range(times):
        desc = coef[::-1]
        out = np.empty(desc.size - 1, dtype=complex)
        acc = desc[0]
        for k in range(1, desc.size):
            out[k - 1] = acc
            acc = desc[k] + acc * root
        coef = out[::-1]
    return coef


def critical_points(B: BlaschkeProduct, tol: float = DEFAULT_ROOT_TOL) -> list[CriticalPoint]:
    """Critical points of ``B`` inside the disk, with orders and death times.

    Multiple zeros of B are registered directly as at-zero critical points of
    order m - 1 and deflated from the numerator; the remaining disk roots
    carry death times via the threshold-to-time map.  The total order over
    all returned points equals degree - 1.
    """
    n = B.degree
    out: list[CriticalPoint] = []
    coef = critical_numerator(B).coef
    for beta, m in B.zeros:
        if m >= 2:
            out.append(CriticalPoint(location=beta, order=m - 1, critical_value=0.0,
                                     death_time=None, at_zero=True))
            coef = _trim(_deflate(coef, beta, m - 1))

    rejected = 0
    for root, mult in find_roots(coef, tol):
        if abs(root) >= 1.0:
            continue
        if abs(root) >= 1.0 - BOUNDARY_REJECT:
            warnings.warn(
                f"critical point at |w| = {abs(root)!r} is too close to the boundary; "
                "its death time is ill-conditioned and the point was dropped",
                stacklevel=2,
            )
            rejected += 1
            continue
        nearest = min((abs(root - beta), k) for k, (beta, _) in enumerate(B.zeros))
        if nearest[0] <= AT_ZERO_TOL:
            # Defensive: off-zero roots cannot sit at a simple zero of B, but
            # numerical residue of the deflation is folded back here.
            beta, _ = B.zeros[nearest[1]]
            out.append(CriticalPoint(location=beta, order=mult, critical_value=0.0,
                                     death_time=None, at_zero=True))
            continue
        cv = abs(evaluate(B, root))
        out.append(CriticalPoint(location=root, order=mult, critical_value=cv,
                                 death_time=death_time(cv), at_zero=False))

    total = sum(cp.order for cp in out)
    if rejected == 0 and total != n - 1:
        raise NonConvergenceError(
            f"critical point orders sum to {total}, expected degree - 1 = {n - 1}"
        )
    out.sort(key=lambda cp: (cp.location.real, cp.location.imag))
    return out


def degree2_normal_form(w_modulus: float) -> tuple[float, float]:
    """Critical point and value of the normalized two-zero product.

    A product with two zeros at pseudo-hyperbolic distance w is equivalent to
    z -> -z (w - z)/(1 - w z); its critical point is c1 = (1 - sqrt(1-w^2))/w
    and the critical value is c1^2.
    """
    w = float(w_modulus)
    if not 0.0 < w < 1.0:
        raise DomainError(f"zero separation must lie in (0, 1), got {w!r}")
    c1 = (1.0 - math.sqrt(1.0 - w * w)) / w
    return c1, c1 * c1
