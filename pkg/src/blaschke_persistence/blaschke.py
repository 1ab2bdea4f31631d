"""Finite Blaschke products and the threshold/time change of variable.

A product is stored in the normalized form

    B(z) = phase * prod_k ((beta_k - z) / (1 - conj(beta_k) z)) ** m_k

with |phase| = 1 and all zeros beta_k strictly interior.  A zero at the
origin is an ordinary factor with beta = 0.  Instances are immutable and all
operations are pure; batch evaluation over point arrays is embarrassingly
parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, PoleError
from .hyperbolic import (
    INTERIOR_MARGIN,
    PHASE_TOL,
    MobiusTransform,
    mobius_apply,
    mobius_invert,
    require_interior,
)

DEFAULT_BOUNDARY_SAMPLES = 2 ** 14


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite Blaschke product given by a unimodular constant and its zeros.

    ``zeros`` is a tuple of (location, multiplicity) pairs; the total degree
    is the sum of multiplicities and must be at least 1.
    """

    zeros: tuple[tuple[complex, int], ...]
    phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        zs = []
        for k, entry in enumerate(self.zeros):
            beta, mult = entry
            beta = require_interior(beta, f"zeros[{k}]")
            if not isinstance(mult, (int, np.integer)) or mult < 1:
                raise DomainError(f"zeros[{k}]: multiplicity must be a positive integer, got {mult!r}")
            zs.append((beta, int(mult)))
        if not zs:
            raise DomainError("a Blaschke product needs at least one zero (degree >= 1)")
        phase = complex(self.phase)
        if abs(abs(phase) - 1.0) > PHASE_TOL:
            raise DomainError(f"phase must be unimodular, got |phase| = {abs(phase)!r}")
        object.__setattr__(self, "zeros", tuple(zs))
        object.__setattr__(self, "phase", phase)

    @classmethod
    def from_points(cls, points: Iterable[complex], phase: complex = 1.0) -> "BlaschkeProduct":
        """Build a product from a plain point list, merging coincident points
        into multiplicities."""
        merged: list[tuple[complex, int]] = []
        for p in points:
            p = complex(p)
            for i, (q, m) in enumerate(merged):
                if q == p:
                    merged[i] = (q, m + 1)
                    break
            else:
                merged.append((p, 1))
        return cls(zeros=tuple(merged), phase=phase)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.zeros)

    def zero_points(self) -> list[complex]:
        """Zeros expanded with multiplicity, in storage order."""
        out: list[complex] = []
        for beta, m in self.zeros:
            out.extend([beta] * m)
        return out

    def __call__(self, z: complex) -> complex:
        return evaluate(self, z)

    def to_dict(self) -> dict:
        return {
            "phase": [self.phase.real, self.phase.imag],
            "zeros": [[b.real, b.imag, m] for b, m in self.zeros],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BlaschkeProduct":
        if not isinstance(data, dict):
            raise DomainError("product spec must be a JSON object")
        phase_raw = data.get("phase", [1.0, 0.0])
        if not (isinstance(phase_raw, (list, tuple)) and len(phase_raw) == 2):
            raise DomainError("phase: expected [re, im]")
        try:
            phase = complex(float(phase_raw[0]), float(phase_raw[1]))
        except (TypeError, ValueError):
            raise DomainError("phase: entries must be numbers") from None
        zeros_raw = data.get("zeros")
        if not isinstance(zeros_raw, list) or not zeros_raw:
            raise DomainError("zeros: expected a non-empty list of [re, im, mult]")
        zeros = []
        for k, entry in enumerate(zeros_raw):
            if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
                raise DomainError(f"zeros[{k}]: expected [re, im, mult]")
            re, im, mult = entry
            try:
                beta = complex(float(re), float(im))
            except (TypeError, ValueError):
                raise DomainError(f"zeros[{k}]: coordinates must be numbers") from None
            if not isinstance(mult, int) or isinstance(mult, bool):
                raise DomainError(f"zeros[{k}]: multiplicity must be an integer")
            zeros.append((beta, mult))
        return cls(zeros=tuple(zeros), phase=phase)


def evaluate(B: BlaschkeProduct, z: complex) -> complex:
    """Evaluate ``B`` at a point of the closed disk."""
    z = complex(z)
    if abs(z) > 1.0 + PHASE_TOL:
        raise DomainError(f"evaluation point must satisfy |z| <= 1, got |z| = {abs(z)!r}")
    out = B.phase
    for beta, m in B.zeros:
        out *= ((beta - z) / (1.0 - np.conj(beta) * z)) ** m
    return complex(out)


def evaluate_array(B: BlaschkeProduct, z) -> np.ndarray:
    """Vectorized evaluation over an array of points (no domain checks)."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, B.phase, dtype=complex)
    for beta, m in B.zeros:
        factor = (beta - z) / (1.0 - np.conj(beta) * z)
        out *= factor if m == 1 else factor ** m
    return out


def log_derivative(B: BlaschkeProduct, z: complex) -> complex:
    """B'(z) / B(z) = sum_k m_k [ -1/(beta_k - z) + conj(beta_k)/(1 - conj(beta_k) z) ]."""
    z = require_interior(z, "z")
    out = 0.0 + 0.0j
    for beta, m in B.zeros:
        if abs(z - beta) <= 1e-12:
            raise PoleError(f"log derivative has a pole at the zero {beta!r}")
        out += m * (-1.0 / (beta - z) + np.conj(beta) / (1.0 - np.conj(beta) * z))
    return complex(out)


def compose_mobius(B: BlaschkeProduct, phi: MobiusTransform) -> BlaschkeProduct:
    """Return the Blaschke product with |result(z)| = |B(phi(z))|.

    Zeros are transported through the inverse automorphism; degree and
    multiplicities are preserved exactly.  The phase is normalized so that
    result(0) = B(phi(0)) when the latter is nonzero (it carries no
    persistence information either way).
    """
    inv = mobius_invert(phi)
    zeros = tuple((mobius_apply(inv, beta), m) for beta, m in B.zeros)
    base = BlaschkeProduct(zeros=zeros, phase=1.0)
    target = evaluate(B, mobius_apply(phi, 0.0))
    current = evaluate(base, 0.0)
    if abs(target) < 1e-14 or abs(current) < 1e-14:
        return base
    ratio = target / current
    return BlaschkeProduct(zeros=zeros, phase=ratio / abs(ratio))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Golden-section search for the maximum of ``f`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return max(fc, fd)


def sup_norm_diff(B1: BlaschkeProduct, B2: BlaschkeProduct,
                  samples: int = DEFAULT_BOUNDARY_SAMPLES) -> float:
    """Supremum of |B1 - B2| over the unit circle.

    Samples the boundary at ``samples`` equispaced points and refines around
    the discrete maximizer by golden-section search.  By the maximum modulus
    principle this equals the sup over the closed disk; the estimate
    converges from below as ``samples`` grows.
    """
    if samples < 256:
        raise DomainError(f"samples must be >= 256, got {samples}")
    angles = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    z = np.exp(1j * angles)
    diff = np.abs(evaluate_array(B1, z) - evaluate_array(B2, z))
    k = int(np.argmax(diff))
    step = 2.0 * math.pi / samples

    def g(t: float) -> float:
        w = complex(math.cos(t), math.sin(t))
        return abs(evaluate(B1, w) - evaluate(B2, w))

    return _golden_max(g, angles[k] - step, angles[k] + step)


@dataclass(frozen=True)
class FilterTime:
    """A filtration time t > 0 paired with its level threshold theta in (0,1),
    related by t = ln((1 + theta) / (1 - theta))."""

    t: float
    theta: float

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise DomainError(f"theta must lie in (0, 1), got {self.theta!r}")
        if not self.t > 0.0:
            raise DomainError(f"t must be positive, got {self.t!r}")
        # Compared in theta-space, which stays well conditioned as theta -> 1
        # (t-space saturates in float64 beyond t ~ 15).
        if abs(math.tanh(0.5 * self.t) - self.theta) > 1e-12:
            raise DomainError("t and theta are inconsistent")


def t_of_theta(theta: float) -> FilterTime:
    """Map a level threshold to its filtration time t = ln((1+theta)/(1-theta))."""
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta!r}")
    return FilterTime(t=2.0 * math.atanh(theta), theta=theta)


def theta_of_t(t: float) -> FilterTime:
    """Inverse change of variable theta = (e^t - 1) / (e^t + 1)."""
    t = float(t)
    if not 0.0 < t < math.inf:
        raise DomainError(f"t must lie in (0, inf), got {t!r}")
    return FilterTime(t=t, theta=math.tanh(0.5 * t))


def death_time(critical_value: float) -> float:
    """Filtration time at which the sublevel set reaches level
    ``critical_value``; equals t_of_theta but accepts 0 (returns 0)."""
    if not 0.0 <= critical_value < 1.0:
        raise DomainError(f"critical value must lie in [0, 1), got {critical_value!r}")
    return 2.0 * math.atanh(critical_value)


def zero_separations(zeros: Sequence[tuple[complex, int]]) -> list[float]:
    """For each stored zero, the product of pseudo-hyperbolic distances to
    all other zeros (counted with multiplicity).  Zeros with multiplicity
    >= 2 get separation 0."""
    from .hyperbolic import rho

    out = []
    for i, (b, m) in enumerate(zeros):
        if m >= 2:
            out.append(0.0)
            continue
        prod = 1.0
        for j, (c, mj) in enumerate(zeros):
            if i == j:
                continue
            prod *= rho(b, c) ** mj
        out.append(prod)
    return out
