"""Cubes, point sets, subcube covers and fill distance.

Cells of a partition are half-open, [a, a + s), except along the upper
face of the enclosing cube, which belongs to the last cell. A boundary
point therefore lies in exactly one cell.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .errors import DomainError, InvalidArgumentError, ResourceGuardError

logger = logging.getLogger(__name__)

MAX_CELLS = 10 ** 8
BRUTE_FORCE_LIMIT = 10 ** 4
# Upper limit on query-by-point distance entries held at once.
SCAN_BUDGET = 1 << 22
# Grid points generated per block in fill-distance scans.
GRID_BLOCK = 1 << 18

SeedLike = Union[int, np.random.SeedSequence, None]


@dataclass(frozen=True, eq=False)
class Cube:
    """Axis-aligned cube [min_corner, min_corner + side]^n."""
    min_corner: np.ndarray
    side: float

    def __post_init__(self):
        corner = np.atleast_1d(np.asarray(self.min_corner, dtype=float))
        if corner.ndim != 1 or corner.size == 0:
            raise InvalidArgumentError("min_corner must be a non-empty vector")
        if not np.all(np.isfinite(corner)):
            raise InvalidArgumentError("min_corner must be finite")
        side = float(self.side)
        if not math.isfinite(side) or side <= 0.0:
            raise DomainError(f"cube side must be positive, got {side}")
        corner.setflags(write=False)
        object.__setattr__(self, "min_corner", corner)
        object.__setattr__(self, "side", side)

    @classmethod
    def unit(cls, n: int, side: float = 1.0) -> "Cube":
        return cls(np.zeros(n), side)

    @property
    def n(self) -> int:
        return int(self.min_corner.size)

    @property
    def max_corner(self) -> np.ndarray:
        return self.min_corner + self.side

    @property
    def volume(self) -> float:
        return self.side ** self.n

    def corners(self) -> np.ndarray:
        """The 2^n vertices, shape (2^n, n)."""
        offsets = np.array(np.meshgrid(*([[0.0, 1.0]] * self.n), indexing="ij")).reshape(self.n, -1).T
        return self.min_corner + self.side * offsets

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.all((pts >= self.min_corner) & (pts <= self.max_corner), axis=1)

    def __eq__(self, other):
        if not isinstance(other, Cube):
            return NotImplemented
        return self.side == other.side and np.array_equal(self.min_corner, other.min_corner)

    def __hash__(self):
        return hash((self.side, self.min_corner.tobytes()))


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite set of points in R^n stored as an (N, n) array."""
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise InvalidArgumentError(f"points must be an (N, n) array, got shape {pts.shape}")
        if pts.shape[1] == 0:
            raise InvalidArgumentError("points must have at least one coordinate")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgumentError("points must be finite")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def __iter__(self):
        return iter(self.points)


def _check_dimension(cube: Cube, points: PointSet) -> None:
    if points.n != cube.n:
        raise InvalidArgumentError(f"point dimension {points.n} does not match cube dimension {cube.n}")


def _guard(per_axis: int, n: int, what: str) -> None:
    if per_axis < 1:
        raise InvalidArgumentError(f"{what} needs at least one cell per axis, got {per_axis}")
    # exact integer arithmetic; per_axis ** n can be astronomically large
    if per_axis ** n > MAX_CELLS:
        raise ResourceGuardError(f"{what} would need {per_axis}^{n} cells, above the {MAX_CELLS:.0e} guard")


def _grid_indices(per_axis: int, n: int) -> np.ndarray:
    """All integer grid indices in row-major order, shape (per_axis^n, n)."""
    return np.indices((per_axis,) * n).reshape(n, -1).T


def subcube_corners(cube: Cube, q: int) -> np.ndarray:
    """Lower corners of the q^n subcubes, row-major by grid index."""
    _guard(q, cube.n, "subdivision")
    return cube.min_corner + _grid_indices(q, cube.n) * (cube.side / q)


def subdivide(cube: Cube, q: int) -> List[Cube]:
    """The q^n congruent subcubes of side cube.side / q."""
    side = cube.side / q
    return [Cube(corner, side) for corner in subcube_corners(cube, q)]


def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


def select_one_per_subcube(cube: Cube, q: int, rng_seed: SeedLike,
                           cells: Optional[np.ndarray] = None) -> PointSet:
    """One uniform point strictly inside each subcube.

    ``cells`` restricts the draw to the given flat (row-major) subcube
    indices; the default is every subcube.
    """
    n = cube.n
    rng = _rng(rng_seed)
    width = cube.side / q
    if cells is None:
        corners = subcube_corners(cube, q)
    else:
        index = np.array(np.unravel_index(np.asarray(cells, dtype=np.int64), (q,) * n)).T
        corners = cube.min_corner + index * width
    eps = np.finfo(float).eps
    u = rng.uniform(eps, 1.0 - eps, size=corners.shape)
    return PointSet(corners + u * width)


@dataclass(frozen=True)
class CoverResult:
    passed: bool
    cells_per_axis: int
    cell_side: float
    witness: Optional[Tuple[int, ...]] = None
    witness_cube: Optional[Cube] = None


def cells_per_axis(side: float, spacing: float) -> int:
    """ceil(side / spacing), tolerant of round-off when spacing divides side."""
    ratio = side / spacing
    nearest = round(ratio)
    if abs(ratio - nearest) <= 1e-9 * max(1.0, ratio):
        return max(1, int(nearest))
    return max(1, math.ceil(ratio))


def cell_index(cube: Cube, points: np.ndarray, per_axis: int) -> np.ndarray:
    """Integer cell coordinates of each point (half-open cells, closed top face)."""
    width = cube.side / per_axis
    idx = np.floor((points - cube.min_corner) / width).astype(np.int64)
    return np.clip(idx, 0, per_axis - 1)


def cover_check(cube: Cube, points: PointSet, delta: float) -> CoverResult:
    """Does every cell of a ceil(side/delta)^n partition of the cube hold a point?

    Cells are no larger than delta, so a pass implies that every subcube of
    side delta contains a point.
    """
    _check_dimension(cube, points)
    delta = float(delta)
    if not (0.0 < delta <= cube.side * (1.0 + 1e-12)):
        raise DomainError(f"delta must lie in (0, {cube.side}], got {delta}")
    m = cells_per_axis(cube.side, delta)
    _guard(m, cube.n, "cover check")
    width = cube.side / m

    inside = points.points[cube.contains(points.points)]
    occupied = np.zeros(m ** cube.n, dtype=bool)
    if len(inside):
        flat = np.ravel_multi_index(cell_index(cube, inside, m).T, (m,) * cube.n)
        occupied[flat] = True
    empty = np.flatnonzero(~occupied)
    if empty.size == 0:
        return CoverResult(True, m, width)

    witness = tuple(int(i) for i in np.unravel_index(empty[0], (m,) * cube.n))
    witness_cube = Cube(cube.min_corner + np.array(witness) * width, width)
    logger.debug(f"Cover check failed: {empty.size} of {m ** cube.n} cells empty, first {witness}")
    return CoverResult(False, m, width, witness, witness_cube)


def nearest_distances(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distance from each query to its nearest data point.

    Brute force up to BRUTE_FORCE_LIMIT data points, a k-d tree above.
    Both paths are exact.
    """
    if len(points) > BRUTE_FORCE_LIMIT:
        dist, _ = cKDTree(points).query(queries, k=1)
        return np.asarray(dist, dtype=float)
    out = np.empty(len(queries))
    rows = max(1, SCAN_BUDGET // max(1, len(points) * points.shape[1]))
    for start in range(0, len(queries), rows):
        chunk = queries[start:start + rows]
        out[start:start + rows] = np.min(cdist(chunk, points), axis=1)
    return out


def cell_centers(cube: Cube, per_axis: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    """Centers of the per_axis^n cells, row-major; optionally a flat-index slice."""
    _guard(per_axis, cube.n, "grid")
    width = cube.side / per_axis
    if start == 0 and stop is None:
        index = _grid_indices(per_axis, cube.n)
    else:
        stop = per_axis ** cube.n if stop is None else stop
        index = np.array(np.unravel_index(np.arange(start, stop), (per_axis,) * cube.n)).T
    return cube.min_corner + (index + 0.5) * width


def fill_distance(cube: Cube, points: PointSet, resolution: int) -> Tuple[float, float]:
    """Bracket [lower, upper] around sup_{y in E} min_{x in X} |y - x|.

    ``lower`` is the maximum over the resolution^n cell centers; every point
    of E is within half a cell diagonal of some center, which gives
    ``upper``.
    """
    _check_dimension(cube, points)
    if len(points) == 0:
        raise InvalidArgumentError("fill distance needs a non-empty point set")
    if not isinstance(resolution, (int, np.integer)) or resolution < 1:
        raise InvalidArgumentError(f"resolution must be a positive integer, got {resolution!r}")
    resolution = int(resolution)
    _guard(resolution, cube.n, "fill-distance grid")
    total = resolution ** cube.n
    lower = 0.0
    for start in range(0, total, GRID_BLOCK):
        block = cell_centers(cube, resolution, start, min(total, start + GRID_BLOCK))
        lower = max(lower, float(np.max(nearest_distances(block, points.points))))
    slack = 0.5 * math.sqrt(cube.n) * cube.side / resolution
    return lower, lower + slack


def regular_grid(cube: Cube, spacing: float) -> PointSet:
    """Cell centers of the ceil(side/spacing)^n partition."""
    m = _spacing_cells(cube, spacing)
    return PointSet(cell_centers(cube, m))


def jittered_grid(cube: Cube, spacing: float, seed: SeedLike) -> PointSet:
    """One uniform point inside each cell of the ceil(side/spacing)^n partition."""
    m = _spacing_cells(cube, spacing)
    return select_one_per_subcube(cube, m, seed)


def uniform_random(cube: Cube, count: int, seed: SeedLike) -> PointSet:
    """``count`` i.i.d. uniform points in the cube; no cover guarantee."""
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise InvalidArgumentError(f"count must be a positive integer, got {count!r}")
    if count > MAX_CELLS:
        raise ResourceGuardError(f"{count} points exceed the {MAX_CELLS:.0e} guard")
    rng = _rng(seed)
    return PointSet(cube.min_corner + cube.side * rng.random((int(count), cube.n)))


def _spacing_cells(cube: Cube, spacing: float) -> int:
    spacing = float(spacing)
    if not (0.0 < spacing <= cube.side * (1.0 + 1e-12)):
        raise DomainError(f"spacing must lie in (0, {cube.side}], got {spacing}")
    m = cells_per_axis(cube.side, spacing)
    _guard(m, cube.n, "point grid")
    return m


def min_separation(points: PointSet) -> float:
    """Smallest pairwise distance (inf for fewer than two points)."""
    if len(points) < 2:
        return math.inf
    dist, _ = cKDTree(points.points).query(points.points, k=2)
    return float(np.min(dist[:, 1]))


def as_point_set(points: Union[PointSet, Sequence, np.ndarray]) -> PointSet:
    return points if isinstance(points, PointSet) else PointSet(np.asarray(points, dtype=float))
