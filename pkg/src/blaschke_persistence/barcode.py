"""Interval-module barcodes over the filtration-time axis.

Bars are half-open intervals (birth, death] with positive integer
multiplicity; infinite bars are (birth, +inf).  A Barcode keeps its bars in
canonical form: sorted by (birth, death) with no two stored bars sharing
both endpoints (endpoint equality up to MERGE_TOL).  The module of a finite
Blaschke product decomposes as one infinite bar (0, +inf) plus one bar
(0, s] of multiplicity m per off-zero critical point of order m, where s is
the critical value's filtration time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .blaschke import BlaschkeProduct
from .critical import DEFAULT_ROOT_TOL, critical_points
from .errors import DomainError

# Deaths (and births) closer than this are identified in canonical form.
MERGE_TOL = 1e-12

INF = math.inf


@dataclass(frozen=True)
class Bar:
    """One interval (birth, death] with multiplicity; death may be +inf."""

    birth: float
    death: float
    multiplicity: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.birth) and self.birth < self.death):
            raise DomainError(f"invalid bar: need finite birth < death, got ({self.birth!r}, {self.death!r}]")
        if self.multiplicity < 1:
            raise DomainError(f"bar multiplicity must be >= 1, got {self.multiplicity!r}")

    @property
    def finite(self) -> bool:
        return math.isfinite(self.death)

    @property
    def length(self) -> float:
        return self.death - self.birth


@dataclass(frozen=True)
class Barcode:
    """Canonical multiset of bars. Construct via :func:`canonicalize`."""

    bars: tuple[Bar, ...] = field(default_factory=tuple)

    def finite_bars(self) -> tuple[Bar, ...]:
        return tuple(b for b in self.bars if b.finite)

    def infinite_bars(self) -> tuple[Bar, ...]:
        return tuple(b for b in self.bars if not b.finite)

    def infinite_multiplicity(self) -> int:
        return sum(b.multiplicity for b in self.infinite_bars())

    def total_multiplicity(self) -> int:
        return sum(b.multiplicity for b in self.bars)

    def close_to(self, other: "Barcode", tol: float = MERGE_TOL) -> bool:
        """Isomorphism check: canonical forms agree bar-by-bar within tol."""
        if len(self.bars) != len(other.bars):
            return False
        for a, b in zip(self.bars, other.bars):
            if a.multiplicity != b.multiplicity:
                return False
            if abs(a.birth - b.birth) > tol:
                return False
            if a.finite != b.finite:
                return False
            if a.finite and abs(a.death - b.death) > tol:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "bars": [
                {"birth": b.birth, "death": (b.death if b.finite else "inf"), "mult": b.multiplicity}
                for b in self.bars
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Barcode":
        if not isinstance(data, dict) or "bars" not in data:
            raise DomainError('barcode JSON must be an object with a "bars" list')
        bars = []
        for k, entry in enumerate(data["bars"]):
            try:
                death = INF if entry["death"] == "inf" else float(entry["death"])
                bars.append(Bar(float(entry["birth"]), death, int(entry.get("mult", 1))))
            except (KeyError, TypeError, ValueError):
                raise DomainError(f"bars[{k}]: expected birth/death/mult fields") from None
        return canonicalize(bars)


def canonicalize(bars: Iterable[Bar], tol: float = MERGE_TOL) -> Barcode:
    """Sort bars by (birth, death) and merge multiplicities of bars whose
    endpoints agree within ``tol``.  The result is the unique representative
    of the barcode's isomorphism class."""
    ordered = sorted(bars, key=lambda b: (b.birth, b.death))
    merged: list[Bar] = []
    for b in ordered:
        if merged:
            last = merged[-1]
            same_birth = abs(b.birth - last.birth) <= tol
            same_death = (b.death == last.death) or (
                b.finite and last.finite and abs(b.death - last.death) <= tol
            )
            if same_birth and same_death:
                merged[-1] = Bar(last.birth, last.death, last.multiplicity + b.multiplicity)
                continue
        merged.append(b)
    return Barcode(bars=tuple(merged))


def from_product(B: BlaschkeProduct, tol: float = DEFAULT_ROOT_TOL) -> Barcode:
    """Barcode of the persistence module of the sublevel-set filtration of |B|.

    Exactly one infinite bar (0, +inf); every off-zero critical point of
    order m contributes a bar (0, s] with multiplicity m, s its death time.
    Births are exactly 0: each component of a level set reaches level-set
    values arbitrarily close to 0.
    """
    bars = [Bar(0.0, INF, 1)]
    for cp in critical_points(B, tol):
        if cp.at_zero:
            continue
        bars.append(Bar(0.0, cp.death_time, cp.order))
    return canonicalize(bars)


def betti_at(bc: Barcode, t: float) -> int:
    """Number of bars (with multiplicity) containing time ``t``; half-open
    semantics, so a bar's death time still counts."""
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t!r}")
    return sum(b.multiplicity for b in bc.bars if b.birth < t <= b.death)


def direct_sum(bc1: Barcode, bc2: Barcode) -> Barcode:
    """Multiset union; pointwise bar counts are additive."""
    return canonicalize(bc1.bars + bc2.bars)


def shift(bc: Barcode, delta: float) -> Barcode:
    """Time shift: bar (a, b] becomes (a - delta, b - delta]; infinite bars
    keep their infinite end."""
    return canonicalize(
        Bar(b.birth - delta, b.death - delta if b.finite else INF, b.multiplicity) for b in bc.bars
    )
