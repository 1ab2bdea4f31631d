"""Grid-based level-set oracle for |B| over the unit disk.

The disk is rasterized on an N x N lattice of cell centers (spacing 2/N,
margin 1.5/N off the boundary).  Sublevel sets at a threshold are labelled
with 4-connectivity; a single elder-rule union-find sweep over all cells in
value order yields the grid barcode and the merge events.  Everything here
is independent of the analytic critical-point pipeline and serves as its
numerical cross-check, plus diagnostics: component diameters, Euler
characteristics, separated-zero inclusion checks and perturbation zero
counts.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .barcode import Bar, Barcode, canonicalize
from .blaschke import BlaschkeProduct, evaluate_array, sup_norm_diff, zero_separations
from .errors import DomainError, PreconditionError
from .hyperbolic import rho_array

GRID_MAGIC = b"BPGRID01"
# Grid births below this threshold (in theta, as a multiple of 1/N) are
# indistinguishable from rasterization noise and get clamped to 0 when
# comparing against analytic barcodes.
BIRTH_CLAMP_CELLS = 4.0

_DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True)
class GridFiltration:
    """Rasterized |B| values over the disk cells.

    ``cells`` are (row, col) lattice indices in row-major order; ``values``
    holds one number in [0, 1) per cell; ``neighbors`` is the 4-adjacency as
    cell indices (-1 where the neighbor is outside the disk).  ``zeros`` are
    the product's zeros expanded with multiplicity (empty for synthetic
    grids).
    """

    resolution: int
    index_map: np.ndarray
    cells: np.ndarray
    centers: np.ndarray
    values: np.ndarray
    neighbors: np.ndarray
    zeros: tuple[complex, ...] = ()

    @property
    def margin(self) -> float:
        return 1.5 / self.resolution


def _disk_geometry(N: int):
    coords = (2.0 * np.arange(N) + 1.0) / N - 1.0
    xx, yy = np.meshgrid(coords, coords, indexing="xy")
    zz = xx + 1j * yy
    inside = np.abs(zz) < 1.0 - 1.5 / N
    index_map = np.full((N, N), -1, dtype=np.int32)
    cells = np.argwhere(inside).astype(np.int32)
    index_map[cells[:, 0], cells[:, 1]] = np.arange(len(cells), dtype=np.int32)
    centers = zz[cells[:, 0], cells[:, 1]]
    nbrs = np.full((len(cells), 4), -1, dtype=np.int32)
    for s, (di, dj) in enumerate(_DIRECTIONS):
        ii = cells[:, 0] + di
        jj = cells[:, 1] + dj
        ok = (ii >= 0) & (ii < N) & (jj >= 0) & (jj < N)
        nbrs[ok, s] = index_map[ii[ok], jj[ok]]
    return index_map, cells, centers, nbrs


def build_grid_from_values(value_fn, N: int, zeros: tuple[complex, ...] = ()) -> GridFiltration:
    """Rasterize an arbitrary [0,1)-valued function of disk points (used for
    synthetic fixtures as well as products)."""
    if N < 64:
        raise DomainError(f"grid resolution must be >= 64, got {N}")
    index_map, cells, centers, nbrs = _disk_geometry(N)
    values = np.asarray(value_fn(centers), dtype=float)
    if values.shape != centers.shape:
        raise DomainError("value function must return one value per cell")
    if np.any(values < 0.0) or np.any(values >= 1.0):
        raise DomainError("grid values must lie in [0, 1)")
    return GridFiltration(
        resolution=N, index_map=index_map, cells=cells, centers=centers,
        values=values, neighbors=nbrs, zeros=tuple(zeros),
    )


def build_grid(B: BlaschkeProduct, N: int) -> GridFiltration:
    """Rasterize |B| at resolution N (deterministic cell set and values)."""
    return build_grid_from_values(
        lambda z: np.abs(evaluate_array(B, z)), N, zeros=tuple(B.zero_points())
    )


def nearest_cell(grid: GridFiltration, z: complex) -> int:
    """Index of the included cell whose center is nearest to ``z``."""
    N = grid.resolution
    j = int(np.clip(round((z.real + 1.0) * N / 2.0 - 0.5), 0, N - 1))
    i = int(np.clip(round((z.imag + 1.0) * N / 2.0 - 0.5), 0, N - 1))
    if grid.index_map[i, j] >= 0:
        return int(grid.index_map[i, j])
    for radius in range(1, N):
        lo_i, hi_i = max(0, i - radius), min(N, i + radius + 1)
        lo_j, hi_j = max(0, j - radius), min(N, j + radius + 1)
        window = grid.index_map[lo_i:hi_i, lo_j:hi_j]
        cand = window[window >= 0]
        if cand.size:
            d = np.abs(grid.centers[cand] - z)
            return int(cand[int(np.argmin(d))])
    raise DomainError("grid has no included cells")


@dataclass(frozen=True)
class ComponentSnapshot:
    """Connected components of one sublevel set {value < theta}.

    ``labels`` maps each grid cell to a component id (-1 where inactive);
    ``zero_assignment`` maps each expanded zero index to the component of its
    nearest cell, or None when that cell is below the grid floor.
    """

    theta: float
    labels: np.ndarray
    component_count: int
    zero_assignment: dict[int, int | None]


def sublevel_components(grid: GridFiltration, theta: float) -> ComponentSnapshot:
    """Label the cells with value < theta by 4-connected components."""
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta!r}")
    N = grid.resolution
    active2d = np.zeros((N, N), dtype=bool)
    active2d[grid.cells[:, 0], grid.cells[:, 1]] = grid.values < theta
    lab2d, count = ndimage.label(active2d)
    labels = lab2d[grid.cells[:, 0], grid.cells[:, 1]].astype(np.int32) - 1
    assignment: dict[int, int | None] = {}
    for k, z in enumerate(grid.zeros):
        comp = int(labels[nearest_cell(grid, z)])
        assignment[k] = comp if comp >= 0 else None
    return ComponentSnapshot(
        theta=theta, labels=labels, component_count=int(count), zero_assignment=assignment
    )


@dataclass(frozen=True)
class MergeEvent:
    """Components absorbed at one merge threshold (thresholds strictly
    increase along an event list)."""

    theta_merge: float
    components_absorbed: int


def _elder_kernel_py(order, values, neighbors):
    """Pure-python fallback of the sweep (tiny grids / debugging)."""
    n = len(values)
    parent = np.full(n, -1, dtype=np.int64)
    birth_val = np.zeros(n)
    birth_cell = np.zeros(n, dtype=np.int64)
    bars, events = [], []

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for c in order:
        v = values[c]
        parent[c] = c
        birth_val[c] = v
        birth_cell[c] = c
        roots = []
        for nb in neighbors[c]:
            if nb >= 0 and parent[nb] >= 0:
                r = find(nb)
                if r not in roots:
                    roots.append(r)
        if not roots:
            continue
        eld = min(roots, key=lambda r: (birth_val[r], birth_cell[r]))
        parent[c] = eld
        absorbed = 0
        for r in roots:
            if r == eld:
                continue
            if v > birth_val[r]:
                bars.append((birth_val[r], v))
            parent[r] = eld
            absorbed += 1
        if absorbed:
            events.append((v, absorbed))
    survivors = [birth_val[x] for x in range(n) if parent[x] == x]
    return bars, events, survivors


_NUMBA_KERNEL = None


def _elder_kernel(order, values, neighbors):
    """JIT-compiled elder-rule union-find sweep (lazy compile on first use)."""
    global _NUMBA_KERNEL
    if _NUMBA_KERNEL is None:
        from numba import njit

        @njit(cache=True)
        def kernel(order, values, neighbors):
            n = values.shape[0]
            parent = np.full(n, -1, dtype=np.int64)
            birth_val = np.zeros(n, dtype=np.float64)
            birth_cell = np.zeros(n, dtype=np.int64)
            bar_birth = np.empty(n, dtype=np.float64)
            bar_death = np.empty(n, dtype=np.float64)
            nbars = 0
            ev_val = np.empty(n, dtype=np.float64)
            ev_abs = np.empty(n, dtype=np.int64)
            nev = 0
            roots4 = np.empty(4, dtype=np.int64)
            for k in range(n):
                c = order[k]
                v = values[c]
                parent[c] = c
                birth_val[c] = v
                birth_cell[c] = c
                nroots = 0
                for s in range(4):
                    nb = neighbors[c, s]
                    if nb >= 0 and parent[nb] >= 0:
                        r = nb
                        while parent[r] != r:
                            r = parent[r]
                        x = nb
                        while parent[x] != r:
                            nxt = parent[x]
                            parent[x] = r
                            x = nxt
                        dup = False
                        for q in range(nroots):
                            if roots4[q] == r:
                                dup = True
                                break
                        if not dup:
                            roots4[nroots] = r
                            nroots += 1
                if nroots == 0:
                    continue
                eld = roots4[0]
                for q in range(1, nroots):
                    r = roots4[q]
                    if birth_val[r] < birth_val[eld] or (
                        birth_val[r] == birth_val[eld] and birth_cell[r] < birth_cell[eld]
                    ):
                        eld = r
                parent[c] = eld
                absorbed = 0
                for q in range(nroots):
                    r = roots4[q]
                    if r == eld:
                        continue
                    if v > birth_val[r]:
                        bar_birth[nbars] = birth_val[r]
                        bar_death[nbars] = v
                        nbars += 1
                    parent[r] = eld
                    absorbed += 1
                if absorbed > 0:
                    ev_val[nev] = v
                    ev_abs[nev] = absorbed
                    nev += 1
            nsurv = 0
            surv = np.empty(n, dtype=np.float64)
            for x in range(n):
                if parent[x] == x:
                    surv[nsurv] = birth_val[x]
                    nsurv += 1
            return (
                bar_birth[:nbars].copy(), bar_death[:nbars].copy(),
                ev_val[:nev].copy(), ev_abs[:nev].copy(), surv[:nsurv].copy(),
            )

        _NUMBA_KERNEL = kernel
    bb, bd, ev, ea, sv = _NUMBA_KERNEL(order, values, neighbors)
    return list(zip(bb, bd)), list(zip(ev, ea)), list(sv)


def sweep(grid: GridFiltration) -> tuple[Barcode, list[MergeEvent]]:
    """Process cells in increasing value order with the elder rule.

    Returns the grid barcode (births/deaths mapped to the time axis, births
    unclamped) and the merge-event list aggregated over equal thresholds.
    """
    order = np.argsort(grid.values, kind="stable")
    raw_bars, raw_events, survivors = _elder_kernel(order, grid.values, grid.neighbors)
    bars = [Bar(2.0 * math.atanh(b), 2.0 * math.atanh(d)) for b, d in raw_bars]
    bars.extend(Bar(2.0 * math.atanh(b), math.inf) for b in survivors)
    events: list[MergeEvent] = []
    for v, absorbed in raw_events:
        if events and events[-1].theta_merge == v:
            events[-1] = MergeEvent(v, events[-1].components_absorbed + int(absorbed))
        else:
            events.append(MergeEvent(float(v), int(absorbed)))
    return canonicalize(bars), events


def grid_barcode(grid: GridFiltration) -> Barcode:
    """Grid barcode with raw births; clamp with :func:`clamp_births` before
    comparing against the analytic pipeline."""
    return sweep(grid)[0]


def clamp_births(bc: Barcode, resolution: int) -> Barcode:
    """Clamp births below the rasterization-noise level (theta < 4/N) to 0."""
    cutoff = 2.0 * math.atanh(BIRTH_CLAMP_CELLS / resolution)
    return canonicalize(
        Bar(0.0 if b.birth < cutoff else b.birth, b.death, b.multiplicity) for b in bc.bars
    )


def significant_finite_deaths(bc: Barcode, resolution: int) -> list[float]:
    """Finite-bar deaths (expanded with multiplicity) whose persistence
    exceeds the grid noise floor, sorted ascending."""
    floor = 2.0 * math.atanh(BIRTH_CLAMP_CELLS / resolution)
    out: list[float] = []
    for b in bc.bars:
        if b.finite and b.length > floor:
            out.extend([b.death] * b.multiplicity)
    return sorted(out)


def component_diameters(snapshot: ComponentSnapshot, grid: GridFiltration,
                        max_boundary_cells: int = 2000) -> np.ndarray:
    """Pseudo-hyperbolic diameter estimate per component.

    Diameters are measured over boundary cells only (cells with an inactive
    or missing neighbor), subsampled to ``max_boundary_cells``; the estimate
    is a lower bound converging from below with resolution.
    """
    labels = snapshot.labels
    active = labels >= 0
    nb = grid.neighbors
    exposed = nb < 0
    valid = ~exposed
    inactive_nb = np.zeros_like(exposed)
    inactive_nb[valid] = labels[nb[valid]] < 0
    boundary = active & (exposed | inactive_nb).any(axis=1)
    out = np.zeros(snapshot.component_count)
    for comp in range(snapshot.component_count):
        pts = grid.centers[boundary & (labels == comp)]
        m = len(pts)
        if m < 2:
            continue
        if m > max_boundary_cells:
            pts = pts[np.unique(np.linspace(0, m - 1, max_boundary_cells).astype(int))]
        best = 0.0
        for start in range(0, len(pts), 256):
            blk = pts[start : start + 256, None]
            best = max(best, float(np.max(rho_array(blk, pts[None, :]))))
        out[comp] = best
    return out


def component_diameter(snapshot: ComponentSnapshot, grid: GridFiltration) -> float:
    """Largest component diameter (the level-set diameter estimate)."""
    if snapshot.component_count < 1:
        raise DomainError("snapshot has no components")
    return float(np.max(component_diameters(snapshot, grid)))


def euler_characteristic(grid: GridFiltration, theta: float) -> int:
    """V - E + F of the cubical complex spanned by the active cells.

    Equals the component count exactly when every component is hole-free.
    """
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta!r}")
    N = grid.resolution
    P = np.zeros((N + 2, N + 2), dtype=bool)
    act = grid.values < theta
    P[grid.cells[act, 0] + 1, grid.cells[act, 1] + 1] = True
    faces = int(np.count_nonzero(P))
    corners = P[0 : N + 1, 0 : N + 1] | P[0 : N + 1, 1 : N + 2] | P[1 : N + 2, 0 : N + 1] | P[1 : N + 2, 1 : N + 2]
    h_edges = P[0 : N + 1, 1 : N + 1] | P[1 : N + 2, 1 : N + 1]
    v_edges = P[1 : N + 1, 0 : N + 1] | P[1 : N + 1, 1 : N + 2]
    return int(np.count_nonzero(corners)) - int(np.count_nonzero(h_edges) + np.count_nonzero(v_edges)) + faces


@dataclass(frozen=True)
class HoffmanReport:
    """Grid verification of the separated-zero inclusions
    {|B| < eps} <= {rho(z, zeros) < eta} <= {|B| < eta} and of the pairwise
    disjointness of the pseudo-hyperbolic disks of radius eta around zeros."""

    delta: float
    eta: float
    eps: float
    separation: float
    inner_violations: tuple[int, ...]
    outer_violations: tuple[int, ...]
    overlapping_disks: tuple[tuple[int, int], ...]

    @property
    def passed(self) -> bool:
        return not (self.inner_violations or self.outer_violations or self.overlapping_disks)


def hoffman_inclusions(B: BlaschkeProduct, delta: float, eta: float, eps: float,
                       grid: GridFiltration) -> HoffmanReport:
    """Check the separated-zero inclusion constants on the grid."""
    if not 0.0 < delta < 1.0:
        raise PreconditionError(f"need 0 < delta < 1, got delta = {delta!r}")
    eta_bound = (1.0 - math.sqrt(1.0 - delta * delta)) / delta
    if not 0.0 < eta < eta_bound:
        raise PreconditionError(
            f"need 0 < eta < (1 - sqrt(1 - delta^2))/delta = {eta_bound!r}, got eta = {eta!r}"
        )
    eps_bound = eta * (delta - eta) / (1.0 - delta * eta)
    if not 0.0 < eps < eps_bound:
        raise PreconditionError(
            f"need 0 < eps < eta (delta - eta)/(1 - delta eta) = {eps_bound!r}, got eps = {eps!r}"
        )
    separation = min(zero_separations(B.zeros))
    if separation < delta:
        raise PreconditionError(
            f"need pairwise zero separation product >= delta, got {separation!r} < {delta!r}"
        )
    points = [beta for beta, _ in B.zeros]
    dists = np.stack([rho_array(np.full(len(grid.centers), b), grid.centers) for b in points])
    min_dist = dists.min(axis=0)
    inner = np.nonzero((grid.values < eps) & (min_dist >= eta))[0]
    outer = np.nonzero((min_dist < eta) & (grid.values >= eta))[0]
    overlaps = []
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if np.any((dists[i] < eta) & (dists[j] < eta)):
                overlaps.append((i, j))
    return HoffmanReport(
        delta=delta, eta=eta, eps=eps, separation=float(separation),
        inner_violations=tuple(int(k) for k in inner),
        outer_violations=tuple(int(k) for k in outer),
        overlapping_disks=tuple(overlaps),
    )


@dataclass(frozen=True)
class RoucheReport:
    """Per-component zero counts of a product and a sup-norm perturbation of
    it over the components of {|B1| < eta}."""

    eta: float
    component_counts: tuple[tuple[int, int, int], ...]
    unassigned1: tuple[int, ...]
    unassigned2: tuple[int, ...]

    @property
    def passed(self) -> bool:
        if self.unassigned1 or self.unassigned2:
            return False
        return all(c1 == c2 for _, c1, c2 in self.component_counts)


def rouche_zero_count(B1: BlaschkeProduct, B2: BlaschkeProduct, eta: float,
                      grid: GridFiltration) -> RoucheReport:
    """Count zeros of both products in each component of {|B1| < eta}.

    Requires sup|B1 - B2| < eta; within each component the counts must agree
    (zeros located analytically, components from the grid).
    """
    supd = sup_norm_diff(B1, B2)
    if not supd < eta:
        raise PreconditionError(
            f"need sup-norm difference < eta, got {supd!r} >= {eta!r}"
        )
    snap = sublevel_components(grid, eta)
    counts1 = np.zeros(snap.component_count, dtype=int)
    counts2 = np.zeros(snap.component_count, dtype=int)
    unassigned1, unassigned2 = [], []
    for k, z in enumerate(B1.zero_points()):
        comp = int(snap.labels[nearest_cell(grid, z)])
        if comp < 0:
            unassigned1.append(k)
        else:
            counts1[comp] += 1
    for k, z in enumerate(B2.zero_points()):
        comp = int(snap.labels[nearest_cell(grid, z)])
        if comp < 0:
            unassigned2.append(k)
        else:
            counts2[comp] += 1
    rows = tuple((c, int(counts1[c]), int(counts2[c])) for c in range(snap.component_count))
    return RoucheReport(
        eta=eta, component_counts=rows,
        unassigned1=tuple(unassigned1), unassigned2=tuple(unassigned2),
    )


def diameter_decay_scan(B: BlaschkeProduct, thetas, N: int) -> list[tuple[float, float]]:
    """Level-set diameter estimates along a strictly decreasing threshold
    list (one shared grid at resolution N)."""
    thetas = [float(t) for t in thetas]
    if any(not 0.0 < t < 1.0 for t in thetas):
        raise DomainError("thresholds must lie in (0, 1)")
    if any(b >= a for a, b in zip(thetas, thetas[1:])):
        raise DomainError("thresholds must be strictly decreasing")
    grid = build_grid(B, N)
    return [(t, component_diameter(sublevel_components(grid, t), grid)) for t in thetas]


def write_grid(grid: GridFiltration, path) -> None:
    """Binary dump: magic "BPGRID01", little-endian uint32 N and cell count,
    then the cell values as row-major float64."""
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(struct.pack("<II", grid.resolution, len(grid.values)))
        fh.write(np.ascontiguousarray(grid.values, dtype="<f8").tobytes())


def read_grid(path) -> GridFiltration:
    """Read a grid dump; the cell set is rebuilt from the resolution."""
    with open(path, "rb") as fh:
        magic = fh.read(len(GRID_MAGIC))
        if magic != GRID_MAGIC:
            raise DomainError(f"not a grid dump (bad magic {magic!r})")
        N, count = struct.unpack("<II", fh.read(8))
        values = np.frombuffer(fh.read(count * 8), dtype="<f8").astype(float)
    index_map, cells, centers, nbrs = _disk_geometry(int(N))
    if len(cells) != count:
        raise DomainError(
            f"cell count {count} does not match resolution {N} (expected {len(cells)})"
        )
    if np.any(values < 0.0) or np.any(values >= 1.0):
        raise DomainError("grid values must lie in [0, 1)")
    return GridFiltration(
        resolution=int(N), index_map=index_map, cells=cells, centers=centers,
        values=values, neighbors=nbrs, zeros=(),
    )
