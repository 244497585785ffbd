"""Base-station and scheduled-user point patterns.

Covers PPP and hexagonal base-station layouts, nearest-base-station
association and per-cell scheduling of one user per pilot. Voronoi cells
are never constructed explicitly: with a common path-loss law, minimum
path loss association reduces to minimum distance, so membership tests are
nearest-neighbour comparisons.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.spatial import cKDTree

__all__ = [
    "SchedulingMode",
    "GeometryConfig",
    "NetworkRealization",
    "GeometryError",
    "isd_to_density",
    "sample_ppp",
    "build_hex_grid",
    "associate_and_schedule",
    "sample_serving_distance",
    "dump_realization_csv",
]


class GeometryError(ValueError):
    pass


class SchedulingMode(str, Enum):
    PPP_THINNING = "ppp_thinning"
    UNIFORM_IN_CELL = "uniform_in_cell"


def isd_to_density(isd_m: float) -> float:
    """Base-station density equivalent to a hexagonal layout with this ISD.

    Uses the hexagonal cell area sqrt(3)/2 * ISD^2, so ISD=500 m maps to
    about 4.619e-6 stations per m^2.
    """
    if isd_m <= 0:
        raise GeometryError("isd_m must be positive")
    return 2.0 / (math.sqrt(3.0) * isd_m * isd_m)


@dataclass(frozen=True)
class GeometryConfig:
    """Layout parameters for one network draw."""

    lambda_b: float
    sim_radius_factor: float = 10.0
    user_density_multiplier: float = 60.0
    scheduling_mode: SchedulingMode = SchedulingMode.PPP_THINNING

    def __post_init__(self):
        if self.lambda_b <= 0:
            raise GeometryError("lambda_b must be positive")
        if self.sim_radius_factor < 5:
            raise GeometryError("sim_radius_factor must be >= 5")
        if self.user_density_multiplier <= 0:
            raise GeometryError("user_density_multiplier must be positive")

    @property
    def exclusion_radius(self) -> float:
        """Radius R_e with lambda_b * pi * R_e^2 = 1."""
        return math.sqrt(1.0 / (math.pi * self.lambda_b))

    @property
    def sim_radius(self) -> float:
        return self.sim_radius_factor / math.sqrt(self.lambda_b)


@dataclass
class NetworkRealization:
    """One associated-and-scheduled snapshot of the network.

    user_xy has shape (n_cells, K, 2): scheduled user of pilot k in cell c.
    serving_dist holds the matching user-to-own-base-station distances.
    """

    bs_xy: np.ndarray
    user_xy: np.ndarray
    serving_dist: np.ndarray
    tagged_bs: int

    @property
    def n_cells(self) -> int:
        return self.bs_xy.shape[0]

    @property
    def K(self) -> int:
        return self.user_xy.shape[1]

    @property
    def typical_user(self) -> np.ndarray:
        """The tagged cell's pilot-1 user."""
        return self.user_xy[self.tagged_bs, 0]


def sample_ppp(density: float, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on a disc centred at the origin; returns (n, 2)."""
    if density < 0:
        raise GeometryError("density must be >= 0")
    if radius <= 0:
        raise GeometryError("radius must be positive")
    n = rng.poisson(density * math.pi * radius * radius)
    r = radius * np.sqrt(rng.random(n))
    th = 2.0 * math.pi * rng.random(n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def build_hex_grid(isd: float, rings: int) -> np.ndarray:
    """Hexagonal lattice around the origin; rings=2 gives the 19-site layout."""
    if isd <= 0:
        raise GeometryError("isd must be positive")
    if rings < 0:
        raise GeometryError("rings must be >= 0")
    # axial coordinates (q, r) with |q|, |r|, |q+r| <= rings
    a1 = np.array([isd, 0.0])
    a2 = np.array([isd / 2.0, isd * math.sqrt(3.0) / 2.0])
    pts = []
    for q in range(-rings, rings + 1):
        for r in range(-rings, rings + 1):
            if abs(q + r) <= rings:
                pts.append(q * a1 + r * a2)
    return np.array(pts)


def sample_serving_distance(lambda_b: float, rng: np.random.Generator, size=None):
    """Rayleigh serving-link distance with mean 0.5 / sqrt(lambda_b)."""
    if lambda_b <= 0:
        raise GeometryError("lambda_b must be positive")
    scale = math.sqrt(1.0 / (2.0 * math.pi * lambda_b))
    return rng.rayleigh(scale, size)


def _top_up_cell(cell: int, need: int, bs: np.ndarray, tree: cKDTree,
                 rng: np.random.Generator):
    """Rejection-sample `need` points uniform in the Voronoi cell of `bs[cell]`.

    Candidates are drawn on a disc around the cell's base station; the disc
    starts at the nearest-neighbour spacing and doubles until enough points
    fall inside the cell.
    """
    if bs.shape[0] == 1:
        # degenerate single-cell network: the whole plane is the cell; use a
        # unit-mean-area disc so distances stay on a sensible scale
        r_loc = 1.0
    else:
        d_nn, _ = tree.query(bs[cell], k=2)
        r_loc = 1.5 * d_nn[1]
    xs, ds = [], []
    while need > 0:
        m = max(16 * need, 64)
        r = r_loc * np.sqrt(rng.random(m))
        th = 2.0 * math.pi * rng.random(m)
        cand = bs[cell] + np.column_stack([r * np.cos(th), r * np.sin(th)])
        dist, owner = tree.query(cand)
        ok = np.flatnonzero(owner == cell)[:need]
        xs.append(cand[ok])
        ds.append(dist[ok])
        need -= len(ok)
        if len(ok) == 0:
            r_loc *= 2.0
    return np.concatenate(xs), np.concatenate(ds)


def associate_and_schedule(bs: np.ndarray, users: np.ndarray, K: int,
                           mode: SchedulingMode, rng: np.random.Generator) -> NetworkRealization:
    """Nearest-BS association plus per-cell scheduling of K users (one per pilot).

    In ppp_thinning mode each cell schedules a uniformly random K-subset of
    its associated users; cells holding fewer than K users are topped up by
    uniform sampling inside their Voronoi cell. uniform_in_cell skips the
    thinning and draws all K users in-cell directly.
    """
    if K < 1:
        raise GeometryError("K must be >= 1")
    bs = np.asarray(bs, float)
    if bs.ndim != 2 or bs.shape[0] == 0:
        raise GeometryError("need at least one base station")
    n_cells = bs.shape[0]
    tree = cKDTree(bs)
    tagged = int(np.argmin(np.einsum("ij,ij->i", bs, bs)))

    user_xy = np.empty((n_cells, K, 2))
    serving = np.empty((n_cells, K))

    if mode == SchedulingMode.UNIFORM_IN_CELL:
        for c in range(n_cells):
            xy, d = _top_up_cell(c, K, bs, tree, rng)
            perm = rng.permutation(K)
            user_xy[c] = xy[perm]
            serving[c] = d[perm]
        return NetworkRealization(bs, user_xy, serving, tagged)

    users = np.asarray(users, float).reshape(-1, 2)
    if users.shape[0] > 0:
        dist, owner = tree.query(users)
        # random per-user keys: sorting by (owner, key) makes the first K of
        # each block a uniform random K-subset in uniform random pilot order
        keys = rng.random(users.shape[0])
        order = np.lexsort((keys, owner))
        owner_sorted = owner[order]
        starts = np.searchsorted(owner_sorted, np.arange(n_cells))
        ends = np.searchsorted(owner_sorted, np.arange(n_cells) + 1)
    else:
        dist = np.empty(0)
        order = np.empty(0, int)
        starts = np.zeros(n_cells, int)
        ends = np.zeros(n_cells, int)

    counts = ends - starts
    full = counts >= K
    if full.any():
        idx = starts[full][:, None] + np.arange(K)[None, :]
        take = order[idx]
        user_xy[full] = users[take]
        serving[full] = dist[take]
    for c in np.flatnonzero(~full):
        have = counts[c]
        got = order[starts[c]:ends[c]]
        xy_new, d_new = _top_up_cell(c, K - have, bs, tree, rng)
        xy = np.concatenate([users[got], xy_new]) if have else xy_new
        d = np.concatenate([dist[got], d_new]) if have else d_new
        perm = rng.permutation(K)
        user_xy[c] = xy[perm]
        serving[c] = d[perm]
    return NetworkRealization(bs, user_xy, serving, tagged)


def dump_realization_csv(real: NetworkRealization, path):
    """Write the realization as rows kind{bs,user}, pilot, x_m, y_m, cell_index."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "pilot", "x_m", "y_m", "cell_index"])
        for c, (x, y) in enumerate(real.bs_xy):
            w.writerow(["bs", "", f"{x:.6f}", f"{y:.6f}", c])
        for c in range(real.n_cells):
            for k in range(real.K):
                x, y = real.user_xy[c, k]
                w.writerow(["user", k + 1, f"{x:.6f}", f"{y:.6f}", c])
