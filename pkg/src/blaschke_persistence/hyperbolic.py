"""Pseudo-hyperbolic geometry of the open unit disk.

Points are plain ``complex`` numbers.  All operations are pure functions on
immutable values and are safe for concurrent use.  Interior operations reject
points with modulus >= 1 - 1e-12, where the pseudo-hyperbolic distance
degenerates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

# Points at least this far from the boundary count as interior.
INTERIOR_MARGIN = 1e-12
# Unimodular constants may deviate from |phase| = 1 by at most this much.
PHASE_TOL = 1e-12


def require_interior(z: complex, name: str = "point") -> complex:
    """Validate that ``z`` is a finite point of the open disk."""
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    if abs(z) >= 1.0 - INTERIOR_MARGIN:
        raise DomainError(f"{name} must have modulus < 1 - 1e-12, got |z| = {abs(z)!r}")
    return z


def rho(z1: complex, z2: complex) -> float:
    """Pseudo-hyperbolic distance |(z1 - z2) / (1 - conj(z1) z2)|."""
    z1 = require_interior(z1, "z1")
    z2 = require_interior(z2, "z2")
    return abs((z1 - z2) / (1.0 - np.conj(z1) * z2))


def rho_array(z1, z2) -> np.ndarray:
    """Vectorized ``rho`` without domain checks (callers guarantee interior)."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    return np.abs((z1 - z2) / (1.0 - np.conj(z1) * z2))


@dataclass(frozen=True)
class MobiusTransform:
    """Disk automorphism z -> phase * (pivot - z) / (1 - conj(pivot) z).

    ``pivot`` is the interior point mapped to the origin; ``phase`` is a
    unimodular constant.
    """

    pivot: complex
    phase: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "pivot", require_interior(self.pivot, "pivot"))
        phase = complex(self.phase)
        if abs(abs(phase) - 1.0) > PHASE_TOL:
            raise DomainError(f"phase must be unimodular, got |phase| = {abs(phase)!r}")
        object.__setattr__(self, "phase", phase)

    def __call__(self, z: complex) -> complex:
        return mobius_apply(self, z)


def mobius_apply(phi: MobiusTransform, z: complex) -> complex:
    """Apply ``phi`` to a point of the closed disk."""
    z = complex(z)
    if abs(z) > 1.0 + PHASE_TOL:
        raise DomainError(f"point must satisfy |z| <= 1, got |z| = {abs(z)!r}")
    denom = 1.0 - np.conj(phi.pivot) * z
    if abs(denom) < 1e-15:
        raise SingularityError("Mobius denominator vanished (|1 - conj(a) z| < 1e-15)")
    return phi.phase * (phi.pivot - z) / denom


def mobius_apply_array(phi: MobiusTransform, z) -> np.ndarray:
    """Vectorized ``mobius_apply`` without domain checks."""
    z = np.asarray(z, dtype=complex)
    return phi.phase * (phi.pivot - z) / (1.0 - np.conj(phi.pivot) * z)


def mobius_invert(phi: MobiusTransform) -> MobiusTransform:
    """Return the inverse automorphism.

    With phi(z) = lam (a - z) / (1 - conj(a) z), the inverse is the transform
    with pivot lam * a and phase conj(lam); for phase 1 the map is its own
    inverse.
    """
    return MobiusTransform(pivot=phi.phase * phi.pivot, phase=np.conj(phi.phase))


def hyperbolic_disk_contains(center: complex, radius: float, z: complex) -> bool:
    """True iff ``z`` lies strictly inside the pseudo-hyperbolic disk
    D_rho(center, radius)."""
    if not 0.0 < radius < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {radius!r}")
    return rho(center, z) < radius
