"""Bottleneck/interleaving distances between barcodes.

The bottleneck distance is computed exactly: feasibility of a candidate
displacement is decided by maximum bipartite matching in the standard
diagonal-augmented graph, and the optimum is the smallest feasible value of
the finite candidate set (endpoint displacements, half-lengths, infinite-bar
birth gaps).  For modules of finite type this equals the interleaving
distance, and for two-zero products it collapses to a closed formula in the
pseudo-hyperbolic separations of the zero pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .barcode import Bar, Barcode, from_product
from .blaschke import BlaschkeProduct
from .critical import DEFAULT_ROOT_TOL
from .errors import DomainError, PreconditionError

INF = math.inf


def two_bar_distance(bar1: Bar, bar2: Bar) -> float:
    """Interleaving distance of two single-bar modules (a,b], (c,d]:
    min(max((b-a)/2, (d-c)/2), max(|a-c|, |b-d|))."""
    if not (bar1.finite and bar2.finite):
        raise DomainError("two_bar_distance requires finite bars; use bottleneck for infinite bars")
    move = max(abs(bar1.birth - bar2.birth), abs(bar1.death - bar2.death))
    delete = max(bar1.length / 2.0, bar2.length / 2.0)
    return min(delete, move)


def expand_bars(bc: Barcode) -> list[Bar]:
    """Bars expanded to unit multiplicity, in canonical order.  Witness
    indices refer to positions in this list."""
    out: list[Bar] = []
    for b in bc.bars:
        out.extend(Bar(b.birth, b.death, 1) for _ in range(b.multiplicity))
    return out


@dataclass(frozen=True)
class MatchingWitness:
    """A matching certifying that two barcodes are delta-matched.

    ``pairs`` holds (index in bc1, index in bc2) into the unit-multiplicity
    expansions; deleted indices cover the rest.  Matched bars displace both
    endpoints by at most delta, deleted bars have length at most 2*delta, and
    infinite bars are never deleted.
    """

    delta: float
    pairs: tuple[tuple[int, int], ...]
    deleted1: tuple[int, ...]
    deleted2: tuple[int, ...]


def delta_matching(bc1: Barcode, bc2: Barcode, delta: float) -> MatchingWitness | None:
    """A delta-matching between the barcodes, or None if none exists.

    Feasibility is the classical diagonal-augmented perfect matching: each
    bar gets a diagonal partner usable only when the bar is deletable
    (finite with length <= 2*delta), and unused diagonals absorb each other.
    The all-pairs diagonal/diagonal block is collapsed through a single hub
    node and the matching is decided as a unit-capacity maximum flow, which
    is equivalent by flow conservation and keeps the graph linear-sized
    outside the compatible pairs.
    """
    if delta < 0.0:
        raise DomainError(f"delta must be >= 0, got {delta!r}")
    bars1 = expand_bars(bc1)
    bars2 = expand_bars(bc2)
    n1, n2 = len(bars1), len(bars2)
    if n1 == 0 and n2 == 0:
        return MatchingWitness(delta, (), (), ())

    births1 = np.array([b.birth for b in bars1]).reshape(-1, 1)
    births2 = np.array([b.birth for b in bars2]).reshape(1, -1)
    deaths1 = np.array([b.death for b in bars1]).reshape(-1, 1)
    deaths2 = np.array([b.death for b in bars2]).reshape(1, -1)
    fin1 = np.isfinite(deaths1)
    fin2 = np.isfinite(deaths2)
    both_finite = fin1 & fin2
    with np.errstate(invalid="ignore"):
        death_gap = np.abs(deaths1 - deaths2)  # nan only where both infinite
    compatible = (fin1 == fin2) & (np.abs(births1 - births2) <= delta)
    compatible &= ~both_finite | (death_gap <= delta)
    pair_rows, pair_cols = np.nonzero(compatible)

    deletable1 = np.nonzero(fin1[:, 0] & (deaths1[:, 0] - births1[:, 0] <= 2.0 * delta))[0]
    deletable2 = np.nonzero(fin2[0, :] & (deaths2[0, :] - births2[0, :] <= 2.0 * delta))[0]

    # Node layout: source; bars1; diagonals of bars2; bars2; diagonals of
    # bars1; hub; sink.
    source = 0
    left = 1
    left_dum = left + n1
    right = left_dum + n2
    right_dum = right + n2
    hub = right_dum + n1
    sink = hub + 1

    rows = np.concatenate([
        np.full(n1 + n2, source),                  # source -> left layer
        left + pair_rows,                          # compatible pairs
        left + deletable1,                         # bar1 -> own diagonal
        left_dum + deletable2,                     # diagonal -> bar2
        left_dum + np.arange(n2),                  # diagonal -> hub
        np.full(n1, hub),                          # hub -> diagonal
        right + np.arange(n2),                     # right layer -> sink
        right_dum + np.arange(n1),
    ])
    cols = np.concatenate([
        np.arange(left, left_dum + n2),
        right + pair_cols,
        right_dum + deletable1,
        right + deletable2,
        np.full(n2, hub),
        right_dum + np.arange(n1),
        np.full(n2 + n1, sink),
    ])
    graph = csr_matrix(
        (np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(sink + 1, sink + 1)
    )
    result = maximum_flow(graph, source, sink)
    if result.flow_value != n1 + n2:
        return None

    flow = result.flow.tocoo()
    pos = flow.data > 0
    r, c = flow.row[pos], flow.col[pos]
    from_bar1 = (r >= left) & (r < left_dum)
    pair_mask = from_bar1 & (c >= right) & (c < right_dum)
    pairs = tuple(zip((r[pair_mask] - left).tolist(), (c[pair_mask] - right).tolist()))
    deleted1 = tuple((r[from_bar1 & (c >= right_dum) & (c < hub)] - left).tolist())
    deleted2 = tuple(
        (r[(r >= left_dum) & (r < right) & (c >= right) & (c < right_dum)] - left_dum).tolist()
    )
    return MatchingWitness(delta, pairs, deleted1, deleted2)


def validate_witness(bc1: Barcode, bc2: Barcode, w: MatchingWitness) -> list[str]:
    """Independent soundness check of a witness; returns the list of violated
    conditions (empty means sound)."""
    bars1 = expand_bars(bc1)
    bars2 = expand_bars(bc2)
    problems: list[str] = []
    if w.delta < 0.0:
        problems.append("delta is negative")
    used1 = sorted([i for i, _ in w.pairs] + list(w.deleted1))
    used2 = sorted([j for _, j in w.pairs] + list(w.deleted2))
    if used1 != list(range(len(bars1))):
        problems.append("bc1 indices do not partition the expanded bars")
    if used2 != list(range(len(bars2))):
        problems.append("bc2 indices do not partition the expanded bars")
    for i, j in w.pairs:
        b1, b2 = bars1[i], bars2[j]
        if b1.finite != b2.finite:
            problems.append(f"pair ({i},{j}) matches finite with infinite")
            continue
        if abs(b1.birth - b2.birth) > w.delta:
            problems.append(f"pair ({i},{j}) displaces births by more than delta")
        if b1.finite and abs(b1.death - b2.death) > w.delta:
            problems.append(f"pair ({i},{j}) displaces deaths by more than delta")
    for i in w.deleted1:
        if not bars1[i].finite:
            problems.append(f"deleted1[{i}] is an infinite bar")
        elif bars1[i].length > 2.0 * w.delta:
            problems.append(f"deleted1[{i}] is longer than 2*delta")
    for j in w.deleted2:
        if not bars2[j].finite:
            problems.append(f"deleted2[{j}] is an infinite bar")
        elif bars2[j].length > 2.0 * w.delta:
            problems.append(f"deleted2[{j}] is longer than 2*delta")
    return problems


def _candidates(bars1: list[Bar], bars2: list[Bar]) -> np.ndarray:
    """Sorted distinct values at which matching feasibility can change."""
    fin1 = [b for b in bars1 if b.finite]
    fin2 = [b for b in bars2 if b.finite]
    pieces = [np.array([0.0])]
    if fin1 and fin2:
        b1 = np.array([b.birth for b in fin1]).reshape(-1, 1)
        d1 = np.array([b.death for b in fin1]).reshape(-1, 1)
        b2 = np.array([b.birth for b in fin2]).reshape(1, -1)
        d2 = np.array([b.death for b in fin2]).reshape(1, -1)
        pieces.append(np.maximum(np.abs(b1 - b2), np.abs(d1 - d2)).ravel())
    pieces.append(np.array([b.length / 2.0 for b in fin1 + fin2]))
    inf1 = np.array([b.birth for b in bars1 if not b.finite])
    inf2 = np.array([b.birth for b in bars2 if not b.finite])
    if inf1.size and inf2.size:
        pieces.append(np.abs(inf1.reshape(-1, 1) - inf2.reshape(1, -1)).ravel())
    return np.unique(np.concatenate(pieces))


def bottleneck_matching(bc1: Barcode, bc2: Barcode) -> tuple[float, MatchingWitness | None]:
    """Bottleneck distance together with an optimal witness.

    Returns (+inf, None) when the infinite-bar multiplicities differ; the
    optimum is otherwise attained on the finite candidate set and located by
    binary search on matching feasibility.
    """
    if bc1.infinite_multiplicity() != bc2.infinite_multiplicity():
        return INF, None
    cands = _candidates(expand_bars(bc1), expand_bars(bc2))
    lo, hi = 0, len(cands) - 1
    best = delta_matching(bc1, bc2, cands[hi])
    if best is None:
        raise AssertionError("largest candidate must be feasible")
    while lo < hi:
        mid = (lo + hi) // 2
        w = delta_matching(bc1, bc2, cands[mid])
        if w is None:
            lo = mid + 1
        else:
            hi = mid
            best = w
    return cands[hi], best


def bottleneck(bc1: Barcode, bc2: Barcode) -> float:
    """Bottleneck distance between two canonical barcodes."""
    return bottleneck_matching(bc1, bc2)[0]


def degree2_distance(w1: float, w2: float) -> float:
    """Interleaving distance between the modules of two two-zero products.

    ``w1``/``w2`` are the pseudo-hyperbolic separations of the zero pairs
    (0 encodes a double zero).  The finite bar of such a product dies at
    s = ln(1/sqrt(1 - w^2)), and the distance is
    min(max(s1, s2)/2, |s1 - s2|).
    """
    for name, w in (("w1", w1), ("w2", w2)):
        if not 0.0 <= w < 1.0:
            raise DomainError(f"{name} must lie in [0, 1), got {w!r}")
    s1 = -0.5 * math.log1p(-w1 * w1)
    s2 = -0.5 * math.log1p(-w2 * w2)
    return min(max(s1, s2) / 2.0, abs(s1 - s2))


def interleaving_distance(B1: BlaschkeProduct, B2: BlaschkeProduct,
                          tol: float = DEFAULT_ROOT_TOL) -> float:
    """Interleaving distance between the modules of two finite products;
    always finite (each barcode has exactly one infinite bar)."""
    return bottleneck(from_product(B1, tol), from_product(B2, tol))


def moduli_distance(zeros1, zeros2) -> float:
    """Distance between zero configurations modulo disk automorphisms:
    the interleaving distance of the induced modules (phase-independent)."""
    zeros1 = list(zeros1)
    zeros2 = list(zeros2)
    if len(zeros1) != len(zeros2) or not zeros1:
        raise DomainError(
            f"zero lists must have equal length >= 1, got {len(zeros1)} and {len(zeros2)}"
        )
    return interleaving_distance(
        BlaschkeProduct.from_points(zeros1), BlaschkeProduct.from_points(zeros2)
    )


@dataclass(frozen=True)
class StabilityBound:
    """Constants of the perturbation bound for sup-norm-close products.

    Two products within sup distance eta whose level-set components at level
    eta have pseudo-hyperbolic diameter at most delta0 induce modules within
    interleaving distance Delta = max(T0, 2 ln gamma).
    """

    delta0: float
    eta: float
    gamma: float
    delta: float
    T0: float
    Delta: float


def stability_bound(delta0: float, eta: float) -> StabilityBound:
    """Compute the perturbation bound constants, validating the hypotheses.

    gamma = 1 + 2/sqrt(-ln delta0), delta = delta0^(1 - 1/sqrt(-ln delta0)),
    T0 = ln((1 + (delta + 2 eta)) / (1 - (delta + 2 eta))).
    """
    delta0 = float(delta0)
    eta = float(eta)
    if not 0.0 < delta0 < 1.0 / math.e:
        raise PreconditionError(f"need 0 < delta0 < 1/e, got delta0 = {delta0!r}")
    if not 0.0 < eta < 1.0:
        raise PreconditionError(f"need 0 < eta < 1, got eta = {eta!r}")
    root = math.sqrt(-math.log(delta0))
    gamma = 1.0 + 2.0 / root
    delta = delta0 ** (1.0 - 1.0 / root)
    if not delta + 2.0 * eta < 1.0:
        raise PreconditionError(
            f"need delta + 2*eta < 1, got delta = {delta!r}, eta = {eta!r}"
        )
    t0 = 2.0 * math.atanh(delta + 2.0 * eta)
    return StabilityBound(
        delta0=delta0,
        eta=eta,
        gamma=gamma,
        delta=delta,
        T0=t0,
        Delta=max(t0, 2.0 * math.log(gamma)),
    )
