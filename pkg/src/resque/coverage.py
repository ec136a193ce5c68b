"""Disk-coverage objective, seeded instance generation and file loaders.

A candidate site covers an information point when the point lies within the
site's radius; f(S) counts the points covered by at least one selected site.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import (
    InvalidConfigError,
    MissingHeaderError,
    NonFiniteCoordinateError,
    ParseError,
    UnknownSiteError,
)
from .oracle import SetFunction, ValueOracle

# Isotropic spread of each mixture component, as a fraction of the box extent.
DEFAULT_SPREAD = 0.08


def _readonly(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Instance:
    """A geometric coverage problem.

    Attributes
    ----------
    points : (m, 2) array
        Information points.
    sites : (n, 2) array
        Candidate site centres; element ``i`` of the ground set is row ``i``.
    radii : (n,) array
        Coverage radius of each site.
    kappa : int
        Cardinality budget.
    site_ids : tuple of int
        External labels of the sites, kept through serialization.
    """

    points: np.ndarray
    sites: np.ndarray
    radii: np.ndarray
    kappa: int
    site_ids: tuple = ()

    def __post_init__(self):
        pts = _readonly(self.points).reshape(-1, 2)
        sites = _readonly(self.sites).reshape(-1, 2)
        radii = _readonly(self.radii).reshape(-1)
        ids = tuple(int(i) for i in self.site_ids) or tuple(range(len(sites)))
        if len(pts) < 1:
            raise InvalidConfigError("instance needs at least one point")
        if len(sites) < 1:
            raise InvalidConfigError("instance needs at least one site")
        if len(radii) != len(sites) or len(ids) != len(sites):
            raise InvalidConfigError("sites, radii and site ids must have equal length")
        if len(set(ids)) != len(ids):
            raise InvalidConfigError("site ids must be unique")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(sites)) and np.all(np.isfinite(radii))):
            raise InvalidConfigError("coordinates and radii must be finite")
        if np.any(radii < 0):
            raise InvalidConfigError("radii must be non-negative")
        if not 1 <= int(self.kappa) <= len(sites):
            raise InvalidConfigError(f"kappa must lie in [1, {len(sites)}], got {self.kappa}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "kappa", int(self.kappa))
        object.__setattr__(self, "site_ids", ids)

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def n_points(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "sites": [
                {"id": i, "x": x, "y": y, "radius": r}
                for i, (x, y), r in zip(self.site_ids, self.sites.tolist(), self.radii.tolist())
            ],
            "points": self.points.tolist(),
        }

    @cached_property
    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_kappa(self, kappa: int) -> "Instance":
        return Instance(self.points, self.sites, self.radii, kappa, self.site_ids)

    @cached_property
    def coverage(self) -> "CoverageFunction":
        return CoverageFunction(self)

    def oracle(self, memoize: bool = True) -> ValueOracle:
        """A fresh per-run oracle over this instance."""
        return ValueOracle(self.coverage, memoize=memoize)


class GridIndex:
    """Uniform-grid bucketing of 2-D points for radius queries."""

    def __init__(self, points: np.ndarray, cell: float):
        self.points = points
        self.cell = cell if cell > 0 else 1.0
        self.origin = points.min(axis=0)
        cells = np.floor((points - self.origin) / self.cell).astype(np.int64)
        order = np.lexsort((cells[:, 1], cells[:, 0]))
        keys = cells[order]
        self._buckets = {}
        if len(order):
            change = np.flatnonzero(np.any(np.diff(keys, axis=0) != 0, axis=1)) + 1
            starts = np.concatenate(([0], change))
            ends = np.concatenate((change, [len(order)]))
            for s, e in zip(starts, ends):
                self._buckets[(int(keys[s, 0]), int(keys[s, 1]))] = order[s:e]

    def within(self, center, radius: float) -> np.ndarray:
        """Sorted indices of points p with ||p - center|| <= radius."""
        cx, cy = float(center[0]), float(center[1])
        # one extra cell each way absorbs rounding in the cell arithmetic;
        # the exact distance test below decides membership
        lo = np.floor((np.array([cx - radius, cy - radius]) - self.origin) / self.cell).astype(np.int64) - 1
        hi = np.floor((np.array([cx + radius, cy + radius]) - self.origin) / self.cell).astype(np.int64) + 1
        chunks = []
        for i in range(lo[0], hi[0] + 1):
            for j in range(lo[1], hi[1] + 1):
                b = self._buckets.get((int(i), int(j)))
                if b is not None:
                    chunks.append(b)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        idx = np.concatenate(chunks)
        d = self.points[idx] - (cx, cy)
        hit = idx[d[:, 0] * d[:, 0] + d[:, 1] * d[:, 1] <= radius * radius]
        return np.sort(hit)


def _mask_from_indices(idx: np.ndarray, m: int) -> int:
    flags = np.zeros(m, dtype=bool)
    flags[idx] = True
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


class CoverageFunction(SetFunction):
    """f(S) = number of points covered by the union of the selected disks.

    Per-site coverage is precomputed once as index arrays and as integer
    bitmasks; evaluation is a bitwise OR followed by a popcount, so values are
    exact integers.  Immutable after construction.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = instance.n_sites
        self.fingerprint = instance.fingerprint
        rmax = float(instance.radii.max())
        grid = GridIndex(instance.points, rmax)
        m = instance.n_points
        self.covered = tuple(grid.within(c, float(r)) for c, r in zip(instance.sites, instance.radii))
        self.masks = tuple(_mask_from_indices(idx, m) for idx in self.covered)

    def value(self, members):
        acc = 0
        for e in members:
            acc |= self.masks[e]
        return float(acc.bit_count())


def evaluate_coverage(instance: Instance, selection: Iterable[int]) -> int:
    """Number of points covered by at least one site in ``selection``."""
    members = list(selection)
    for e in members:
        if not (isinstance(e, (int, np.integer)) and 0 <= e < instance.n_sites):
            raise UnknownSiteError(f"unknown site index {e!r}")
    if not members:
        return 0
    return int(instance.coverage.value(tuple(sorted(set(members)))))


# --------------------------------------------------------------------------
# generation


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of a seeded random coverage instance.

    Exactly one radius model applies: a homogeneous ``radius``; a per-site
    uniform ``radius_range``; or, when both are omitted, a homogeneous radius
    scaled by ``overlap`` in [0, 1] between nearly disjoint disks and heavy
    overlap.  ``overlap=None`` draws it from the seed.
    """

    seed: int
    n_sites: int = 20
    n_points: int = 2000
    n_components: int = 4
    radius: float | None = None
    radius_range: tuple | None = None
    overlap: float | None = None
    extent: tuple = (0.0, 0.0, 100.0, 100.0)
    diversify_sites: bool = True
    kappa: int | None = None
    spread: float = DEFAULT_SPREAD
    pool_factor: int = 4

    def validate(self):
        if self.n_sites < 1 or self.n_points < 1 or self.n_components < 1:
            raise InvalidConfigError("n_sites, n_points and n_components must be positive")
        if self.pool_factor < 1:
            raise InvalidConfigError("pool_factor must be positive")
        x0, y0, x1, y1 = self.extent
        if not (x1 > x0 and y1 > y0):
            raise InvalidConfigError("extent must be (xmin, ymin, xmax, ymax) with positive area")
        if self.radius is not None and self.radius_range is not None:
            raise InvalidConfigError("give either radius or radius_range, not both")
        if self.radius is not None and not self.radius >= 0:
            raise InvalidConfigError("radius must be non-negative")
        if self.radius_range is not None:
            lo, hi = self.radius_range
            if not 0 <= lo <= hi:
                raise InvalidConfigError("radius_range must satisfy 0 <= r_lo <= r_hi")
        if self.overlap is not None and not 0.0 <= self.overlap <= 1.0:
            raise InvalidConfigError("overlap must lie in [0, 1]")
        if self.kappa is not None and not 1 <= self.kappa <= self.n_sites:
            raise InvalidConfigError("kappa must lie in [1, n_sites]")
        if not self.spread > 0:
            raise InvalidConfigError("spread must be positive")


_ROLE_POINTS, _ROLE_SITES, _ROLE_RADIUS = 0, 1, 2


def _stream(seed: int, role: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(role,)))


def _gaussian_mixture(rng, m, k, extent, spread):
    x0, y0, x1, y1 = extent
    lo, hi = np.array([x0, y0]), np.array([x1, y1])
    means = rng.uniform(lo, hi, size=(k, 2))
    weights = rng.dirichlet(np.ones(k))
    counts = rng.multinomial(m, weights)
    sigma = spread * min(x1 - x0, y1 - y0)
    out = []
    for mean, c in zip(means, counts):
        pts = rng.normal(mean, sigma, size=(c, 2))
        bad = ~np.all((pts >= lo) & (pts <= hi), axis=1)
        while bad.any():
            pts[bad] = rng.normal(mean, sigma, size=(int(bad.sum()), 2))
            bad = ~np.all((pts >= lo) & (pts <= hi), axis=1)
        out.append(pts)
    return np.concatenate(out)


def logdet_greedy(coords: np.ndarray, k: int, bandwidth: float, jitter: float = 1e-9) -> list[int]:
    """Greedy MAP selection of ``k`` rows maximizing log det of an RBF kernel.

    Incremental-Cholesky form: each step picks the row with the largest
    residual variance given the rows already chosen.
    """
    n = len(coords)
    if not 1 <= k <= n:
        raise ValueError("k must lie in [1, len(coords)]")
    d2 = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1)
    K = np.exp(-d2 / (2.0 * bandwidth * bandwidth)) + jitter * np.eye(n)
    cis = np.zeros((k, n))
    di2 = K.diagonal().copy()
    chosen = [int(np.argmax(di2))]
    while len(chosen) < k:
        j = chosen[-1]
        t = len(chosen) - 1
        e = (K[j] - cis[:t, j] @ cis[:t]) / math.sqrt(max(di2[j], jitter))
        cis[t] = e
        di2 -= e * e
        di2[chosen] = -np.inf
        chosen.append(int(np.argmax(di2)))
    return chosen


def overlap_radius(extent, n_sites: int, overlap: float) -> float:
    """Homogeneous radius for a given overlap level in [0, 1]."""
    x0, y0, x1, y1 = extent
    spacing = math.sqrt((x1 - x0) * (y1 - y0) / n_sites)
    return spacing * (0.25 + 1.25 * overlap)


def generate_instance(config: GeneratorConfig) -> Instance:
    config.validate()
    x0, y0, x1, y1 = config.extent
    points = _gaussian_mixture(
        _stream(config.seed, _ROLE_POINTS), config.n_points, config.n_components, config.extent, config.spread
    )

    site_rng = _stream(config.seed, _ROLE_SITES)
    if config.diversify_sites:
        pool = site_rng.uniform((x0, y0), (x1, y1), size=(config.pool_factor * config.n_sites, 2))
        bandwidth = max(x1 - x0, y1 - y0) / math.sqrt(config.n_sites)
        sites = pool[logdet_greedy(pool, config.n_sites, bandwidth)]
    else:
        sites = site_rng.uniform((x0, y0), (x1, y1), size=(config.n_sites, 2))

    radius_rng = _stream(config.seed, _ROLE_RADIUS)
    if config.radius is not None:
        radii = np.full(config.n_sites, float(config.radius))
    elif config.radius_range is not None:
        radii = radius_rng.uniform(config.radius_range[0], config.radius_range[1], size=config.n_sites)
    else:
        overlap = radius_rng.uniform() if config.overlap is None else config.overlap
        radii = np.full(config.n_sites, overlap_radius(config.extent, config.n_sites, overlap))

    kappa = config.kappa if config.kappa is not None else min(5, config.n_sites)
    return Instance(points, sites, radii, kappa)


def modular_instance(seed: int, n_sites: int, kappa: int | None = None, max_points: int = 12) -> Instance:
    """Pairwise-disjoint disks on a lattice; the objective is modular.

    Every site covers between 1 and ``max_points`` points of its own and no
    point is shared, so all curvatures vanish.
    """
    rng = _stream(seed, _ROLE_POINTS)
    side = math.ceil(math.sqrt(n_sites))
    sites = np.array([(10.0 * (i % side), 10.0 * (i // side)) for i in range(n_sites)])
    radius = 2.0
    pts = []
    for c in sites:
        k = int(rng.integers(1, max_points + 1))
        r = radius * np.sqrt(rng.uniform(0, 0.95, size=k))
        t = rng.uniform(0, 2 * np.pi, size=k)
        pts.append(c + np.column_stack((r * np.cos(t), r * np.sin(t))))
    return Instance(np.concatenate(pts), sites, np.full(n_sites, radius), kappa or min(5, n_sites))


# --------------------------------------------------------------------------
# file formats


def save_instance_json(instance: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance.to_dict()) + "\n", encoding="utf-8")


def instance_from_dict(data: dict) -> Instance:
    try:
        kappa = data["kappa"]
        sites = data["sites"]
        points = data["points"]
        ids = [int(s["id"]) for s in sites]
        xy = [(float(s["x"]), float(s["y"])) for s in sites]
        radii = [float(s["radius"]) for s in sites]
        pts = [(float(p[0]), float(p[1])) for p in points]
        if any(len(p) != 2 for p in points):
            raise ParseError("each point must be [x, y]")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid instance document: {exc}") from exc
    if not isinstance(kappa, int) or isinstance(kappa, bool):
        raise ParseError("kappa must be an integer")
    arr = np.array(pts + xy + [(r, 0.0) for r in radii])
    if not np.all(np.isfinite(arr)):
        raise NonFiniteCoordinateError("non-finite coordinate or radius")
    try:
        return Instance(np.array(pts), np.array(xy), np.array(radii), kappa, tuple(ids))
    except InvalidConfigError as exc:
        raise ParseError(str(exc)) from exc


def load_instance_json(path) -> Instance:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    return instance_from_dict(data)


def load_points_csv(path) -> np.ndarray:
    """Read an ``x,y`` CSV of points into an (m, 2) array."""
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["x", "y"]:
            raise MissingHeaderError("expected header 'x,y'", line=1)
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 columns, got {len(row)}", line=line)
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError:
                raise ParseError(f"cannot parse coordinates {row!r}", line=line) from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise NonFiniteCoordinateError("non-finite coordinate", line=line)
            rows.append((x, y))
    return np.array(rows, dtype=np.float64).reshape(-1, 2)


def instance_from_points(points, sites, radius, kappa: int) -> Instance:
    """Instance with a homogeneous radius (scalar) or per-site radii (sequence)."""
    sites = np.asarray(sites, dtype=np.float64).reshape(-1, 2)
    radii = np.broadcast_to(np.asarray(radius, dtype=np.float64), (len(sites),))
    return Instance(points, sites, radii, kappa)
