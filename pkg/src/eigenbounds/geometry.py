"""
Parametric domains, volumes, equal-volume balls and uniform grids

Every planar shape is defined in a local frame centred on the origin and placed in
the plane by a rotation and a translation (see :class:`eigenbounds.base.Domain`).
Balls of dimension above two are only used analytically and carry no placement.
"""
import logging
import math
from fractions import Fraction

import numpy as np

from .base import Domain
from .constants import BOUNDARY_TOLERANCE
from .errors import ConfigError, GridError, UnsupportedDomainError, ValidationError
from .specfun import ball_volume, sphere_area

logger = logging.getLogger(__name__)

# pylint: disable=invalid-name


class Ball(Domain):
    """
    Ball of radius ``radius`` in dimension ``dim``
    """

    _shape = "ball"
    _parameters = ("dim", "radius")

    def __init__(self, dim=2, radius=1.0, translation=(0.0, 0.0), rotation=0.0):
        if int(dim) != dim or dim < 2:
            raise ValidationError("dim must be an integer >= 2, got {}".format(dim))

        self._dim = int(dim)
        self._radius = self._assert_is_positive(radius, "radius")
        super().__init__(translation=translation, rotation=rotation)
        if self._dim > 2 and (self.translation != (0.0, 0.0) or self.rotation != 0):
            raise ValidationError("balls of dimension > 2 cannot be placed")

    @property
    def dim(self):
        return self._dim

    @property
    def radius(self):
        """
        float
            Radius
        """
        return self._radius

    def _scaled_parameters(self, factor):
        return {"radius": self.radius * factor}

    @property
    def volume(self):
        return float(ball_volume(self.dim, self.radius))

    @property
    def perimeter(self):
        return float(sphere_area(self.dim) * self.radius ** (self.dim - 1))

    @property
    def inradius(self):
        return self.radius

    def level(self, points):
        if self.dim == 2:
            return super().level(points)

        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dim:
            raise ValidationError("points must have {} coordinates".format(self.dim))

        return np.sqrt(np.sum(pts * pts, axis=-1)) - self.radius

    def _level(self, x, y):
        return np.hypot(x, y) - self.radius

    def _local_bounds(self):
        r = self.radius
        return (-r, -r, r, r)

    @property
    def bounding_box(self):
        r = self.radius
        tx, ty = self.translation
        return (tx - r, ty - r, tx + r, ty + r)


class Rectangle(Domain):
    """
    Rectangle of side lengths ``a`` (along x) and ``b`` (along y), centred on the
    local origin
    """

    _shape = "rectangle"
    _parameters = ("a", "b")

    def __init__(self, a=1.0, b=1.0, translation=(0.0, 0.0), rotation=0.0):
        self._a = self._assert_is_positive(a, "a")
        self._b = self._assert_is_positive(b, "b")
        super().__init__(translation=translation, rotation=rotation)

    @property
    def a(self):
        """
        float
            Side length along the local x-axis
        """
        return self._a

    @property
    def b(self):
        """
        float
            Side length along the local y-axis
        """
        return self._b

    @property
    def volume(self):
        return self.a * self.b

    @property
    def perimeter(self):
        return 2.0 * (self.a + self.b)

    @property
    def inradius(self):
        return 0.5 * min(self.a, self.b)

    def _level(self, x, y):
        return np.maximum(np.abs(x) - 0.5 * self.a, np.abs(y) - 0.5 * self.b)

    def _local_bounds(self):
        return (-0.5 * self.a, -0.5 * self.b, 0.5 * self.a, 0.5 * self.b)


class Ellipse(Domain):
    """
    Ellipse with semi-axes ``a`` (along x) and ``b`` (along y)
    """

    _shape = "ellipse"
    _parameters = ("a", "b")

    def __init__(self, a=1.0, b=1.0, translation=(0.0, 0.0), rotation=0.0):
        self._a = self._assert_is_positive(a, "a")
        self._b = self._assert_is_positive(b, "b")
        super().__init__(translation=translation, rotation=rotation)

    @property
    def a(self):
        """
        float
            Semi-axis along the local x-axis
        """
        return self._a

    @property
    def b(self):
        """
        float
            Semi-axis along the local y-axis
        """
        return self._b

    @property
    def volume(self):
        return math.pi * self.a * self.b

    @property
    def perimeter(self):
        # Ramanujan's approximation
        a, b = self.a, self.b
        return math.pi * (3.0 * (a + b) - math.sqrt((3.0 * a + b) * (a + 3.0 * b)))

    @property
    def inradius(self):
        return min(self.a, self.b)

    def _level(self, x, y):
        s = np.sqrt((x / self.a) ** 2 + (y / self.b) ** 2)
        return (s - 1.0) * min(self.a, self.b)

    def _local_bounds(self):
        return (-self.a, -self.b, self.a, self.b)

    @property
    def bounding_box(self):
        cos, sin = math.cos(self.rotation), math.sin(self.rotation)
        half_x = math.hypot(self.a * cos, self.b * sin)
        half_y = math.hypot(self.a * sin, self.b * cos)
        tx, ty = self.translation

        return (tx - half_x, ty - half_y, tx + half_x, ty + half_y)


class Annulus(Domain):
    """
    Annulus ``r_in < |x| < r_out``
    """

    _shape = "annulus"
    _parameters = ("r_in", "r_out")

    def __init__(self, r_in=1.0, r_out=2.0, translation=(0.0, 0.0), rotation=0.0):
        self._r_in = self._assert_is_positive(r_in, "r_in")
        self._r_out = self._assert_is_positive(r_out, "r_out")
        if not self._r_in < self._r_out:
            raise ValidationError(
                "r_in must be smaller than r_out, got {} and {}".format(r_in, r_out)
            )
        super().__init__(translation=translation, rotation=rotation)

    @property
    def r_in(self):
        """
        float
            Inner radius
        """
        return self._r_in

    @property
    def r_out(self):
        """
        float
            Outer radius
        """
        return self._r_out

    @property
    def volume(self):
        return math.pi * (self.r_out ** 2 - self.r_in ** 2)

    @property
    def perimeter(self):
        return 2.0 * math.pi * (self.r_out + self.r_in)

    @property
    def inradius(self):
        return 0.5 * (self.r_out - self.r_in)

    @property
    def convex(self):
        return False

    def _level(self, x, y):
        rho = np.hypot(x, y)
        return np.maximum(rho - self.r_out, self.r_in - rho)

    def _local_bounds(self):
        r = self.r_out
        return (-r, -r, r, r)

    @property
    def bounding_box(self):
        r = self.r_out
        tx, ty = self.translation
        return (tx - r, ty - r, tx + r, ty + r)


class LShape(Domain):
    """
    L-shaped domain :math:`[-a, a] \\times [-b, b]` minus the quadrant
    :math:`x \\geq 0, y \\geq 0`

    The reentrant corner sits at the local origin and the area is ``3ab``.
    """

    _shape = "lshape"
    _parameters = ("a", "b")

    def __init__(self, a=1.0, b=1.0, translation=(0.0, 0.0), rotation=0.0):
        self._a = self._assert_is_positive(a, "a")
        self._b = self._assert_is_positive(b, "b")
        super().__init__(translation=translation, rotation=rotation)

    @property
    def a(self):
        """
        float
            Arm length along the local x-axis
        """
        return self._a

    @property
    def b(self):
        """
        float
            Arm length along the local y-axis
        """
        return self._b

    @property
    def volume(self):
        return 3.0 * self.a * self.b

    @property
    def perimeter(self):
        return 4.0 * (self.a + self.b)

    @property
    def inradius(self):
        a, b = self.a, self.b
        return max(min(a, 0.5 * b), min(0.5 * a, b))

    @property
    def convex(self):
        return False

    @property
    def reentrant(self):
        return True

    def _level(self, x, y):
        outer = np.maximum(np.abs(x) - self.a, np.abs(y) - self.b)
        return np.maximum(outer, np.minimum(x, y))

    def _local_bounds(self):
        return (-self.a, -self.b, self.a, self.b)


class Stadium(Domain):
    """
    Stadium: a ``length`` by ``2 radius`` rectangle capped by two half-discs
    """

    _shape = "stadium"
    _parameters = ("length", "radius")

    def __init__(self, length=1.0, radius=0.5, translation=(0.0, 0.0), rotation=0.0):
        self._length = self._assert_is_positive(length, "length")
        self._radius = self._assert_is_positive(radius, "radius")
        super().__init__(translation=translation, rotation=rotation)

    @property
    def length(self):
        """
        float
            Length of the straight part
        """
        return self._length

    @property
    def radius(self):
        """
        float
            Cap radius
        """
        return self._radius

    @property
    def volume(self):
        return 2.0 * self.radius * self.length + math.pi * self.radius ** 2

    @property
    def perimeter(self):
        return 2.0 * self.length + 2.0 * math.pi * self.radius

    @property
    def inradius(self):
        return self.radius

    def _level(self, x, y):
        dx = np.maximum(np.abs(x) - 0.5 * self.length, 0.0)
        return np.hypot(dx, y) - self.radius

    def _local_bounds(self):
        half = 0.5 * self.length + self.radius
        return (-half, -self.radius, half, self.radius)


def _orientation_exact(a, b, c):
    ax, ay = (Fraction(v) for v in a)
    bx, by = (Fraction(v) for v in b)
    cx, cy = (Fraction(v) for v in c)
    det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay)

    return (det > 0) - (det < 0)


def orientation(a, b, c):
    """
    Orientation of the triangle ``a, b, c``

    Floating point first, with an exact rational re-evaluation when the
    determinant is too close to zero to trust its sign.

    Returns
    -------
    int
        ``1`` counter-clockwise, ``-1`` clockwise, ``0`` collinear
    """
    left = (b[0] - a[0]) * (c[1] - a[1])
    right = (c[0] - a[0]) * (b[1] - a[1])
    det = left - right
    if abs(det) > 1e-12 * (abs(left) + abs(right)):
        return 1 if det > 0 else -1

    return _orientation_exact(a, b, c)


def _on_segment(a, b, c):
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[
        1
    ] <= max(a[1], b[1])


def _segments_intersect(p1, p2, p3, p4):
    d1 = orientation(p3, p4, p1)
    d2 = orientation(p3, p4, p2)
    d3 = orientation(p1, p2, p3)
    d4 = orientation(p1, p2, p4)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    return (
        (d1 == 0 and _on_segment(p3, p4, p1))
        or (d2 == 0 and _on_segment(p3, p4, p2))
        or (d3 == 0 and _on_segment(p1, p2, p3))
        or (d4 == 0 and _on_segment(p1, p2, p4))
    )


class Polygon(Domain):
    """
    Simple polygon given by its vertices in the local frame
    """

    _shape = "polygon"
    _parameters = ("vertices",)

    def __init__(self, vertices, translation=(0.0, 0.0), rotation=0.0):
        verts = [self._assert_is_point(v, "vertex") for v in vertices]
        if len(verts) > 1 and verts[0] == verts[-1]:
            verts = verts[:-1]
        if len(verts) < 3:
            raise ValidationError("a polygon needs at least three vertices")

        self._vertices = tuple(verts)
        self._check_simple()
        super().__init__(translation=translation, rotation=rotation)

        arr = np.array(self._vertices)
        self._x0 = arr[:, 0]
        self._y0 = arr[:, 1]
        self._x1 = np.roll(self._x0, -1)
        self._y1 = np.roll(self._y0, -1)

    def _check_simple(self):
        verts = self._vertices
        if len(set(verts)) != len(verts):
            raise ValidationError("polygon vertices must be distinct")

        if self._signed_area() == 0:
            raise ValidationError("polygon has zero area")

        count = len(verts)
        edges = [(verts[i], verts[(i + 1) % count]) for i in range(count)]
        for i in range(count):
            for j in range(i + 1, count):
                if j == i + 1 or (i == 0 and j == count - 1):
                    # adjacent edges share a vertex, they may only overlap if they
                    # fold back onto each other
                    shared = edges[i][1] if j == i + 1 else edges[i][0]
                    other_i = edges[i][0] if j == i + 1 else edges[i][1]
                    other_j = edges[j][1] if j == i + 1 else edges[j][0]
                    if orientation(other_i, shared, other_j) == 0 and (
                        _on_segment(shared, other_i, other_j)
                        or _on_segment(shared, other_j, other_i)
                    ):
                        raise ValidationError("polygon edges {} and {} overlap".format(i, j))
                    continue

                if _segments_intersect(*edges[i], *edges[j]):
                    raise ValidationError(
                        "polygon is not simple: edges {} and {} intersect".format(i, j)
                    )

    def _signed_area(self):
        arr = np.array(self._vertices)
        x, y = arr[:, 0], arr[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @property
    def vertices(self):
        """
        tuple
            Vertices in the local frame
        """
        return self._vertices

    def _scaled_parameters(self, factor):
        return {"vertices": tuple((factor * x, factor * y) for x, y in self.vertices)}

    @property
    def volume(self):
        return abs(self._signed_area())

    @property
    def perimeter(self):
        return float(np.sum(np.hypot(self._x1 - self._x0, self._y1 - self._y0)))

    @property
    def convex(self):
        count = len(self.vertices)
        signs = {
            orientation(
                self.vertices[i],
                self.vertices[(i + 1) % count],
                self.vertices[(i + 2) % count],
            )
            for i in range(count)
        }
        signs.discard(0)

        return len(signs) == 1

    @property
    def reentrant(self):
        return not self.convex

    @property
    def inradius(self):
        xmin, ymin, xmax, ymax = self._local_bounds()
        xs = np.linspace(xmin, xmax, 65)
        ys = np.linspace(ymin, ymax, 65)
        X, Y = np.meshgrid(xs, ys)
        level = self._level(X.ravel(), Y.ravel())

        return float(max(-level.min(), 0.0))

    def winding_number(self, x, y):
        """
        Winding number of the boundary around local points

        Parameters
        ----------
        x, y : array_like
            Local coordinates

        Returns
        -------
        :obj:`np.ndarray`
        """
        px = np.asarray(x, dtype=float)[..., np.newaxis]
        py = np.asarray(y, dtype=float)[..., np.newaxis]
        left = (self._x1 - self._x0) * (py - self._y0)
        right = (px - self._x0) * (self._y1 - self._y0)
        det = left - right

        unsure = np.abs(det) <= 1e-12 * (np.abs(left) + np.abs(right))
        if np.any(unsure):
            det = det.copy()
            for idx in zip(*np.nonzero(unsure)):
                edge = idx[-1]
                point = (float(px[idx[:-1]][0]), float(py[idx[:-1]][0]))
                det[idx] = _orientation_exact(
                    (self._x0[edge], self._y0[edge]),
                    (self._x1[edge], self._y1[edge]),
                    point,
                )

        upward = (self._y0 <= py) & (self._y1 > py) & (det > 0)
        downward = (self._y0 > py) & (self._y1 <= py) & (det < 0)

        return np.sum(upward, axis=-1) - np.sum(downward, axis=-1)

    def _edge_distance(self, x, y):
        px = np.asarray(x, dtype=float)[..., np.newaxis]
        py = np.asarray(y, dtype=float)[..., np.newaxis]
        ex = self._x1 - self._x0
        ey = self._y1 - self._y0
        t = ((px - self._x0) * ex + (py - self._y0) * ey) / (ex * ex + ey * ey)
        t = np.clip(t, 0.0, 1.0)

        return np.min(np.hypot(px - self._x0 - t * ex, py - self._y0 - t * ey), axis=-1)

    def _level(self, x, y):
        dist = self._edge_distance(x, y)
        inside = self.winding_number(x, y) != 0

        return np.where(inside, -dist, dist)

    def _local_bounds(self):
        return (
            float(self._x0.min()),
            float(self._y0.min()),
            float(self._x0.max()),
            float(self._y0.max()),
        )


SHAPES = {
    cls._shape: cls  # pylint: disable=protected-access
    for cls in (Ball, Rectangle, Ellipse, Annulus, LShape, Stadium, Polygon)
}
"""dict : domain classes by shape name"""


def volume(domain):
    """
    Volume of a domain

    Parameters
    ----------
    domain : :obj:`Domain`

    Returns
    -------
    float
    """
    return domain.volume


def equal_volume_ball(domain):
    """
    Ball with the same volume as ``domain``

    Balls are returned unchanged. Otherwise the ball is centred on the domain's
    translation.

    Parameters
    ----------
    domain : :obj:`Domain`

    Returns
    -------
    :obj:`Ball`
    """
    if isinstance(domain, Ball):
        return domain

    radius = (domain.volume / ball_volume(domain.dim, 1.0)) ** (1.0 / domain.dim)

    return Ball(domain.dim, radius, translation=domain.translation)


def contains(domain, x):
    """
    Whether ``x`` lies in the open domain (boundary points are outside)
    """
    return domain.contains(x)


class Grid:
    """
    Uniform lattice over a domain's bounding box with its nodes numbered

    The lattice is anchored at the lower-left corner of the bounding box. For an
    open grid (Dirichlet problems) the numbered nodes are those strictly inside the
    domain, at least ``1e-12 h`` away from the boundary. For a closed grid (Neumann
    problems on lattice-aligned domains) the domain is the union of the lattice
    cells whose centre is inside, and every corner of such a cell is numbered.

    Arrays exposed by the grid are read-only.
    """

    def __init__(self, domain, h, closed=False):
        if domain.dim != 2:
            raise UnsupportedDomainError(
                "grids are only available for planar domains, got dim={}".format(
                    domain.dim
                )
            )

        h = Domain._assert_is_positive(h, "h")  # pylint: disable=protected-access
        if h > 0.5 * domain.inradius:
            raise GridError(
                "h={} is too coarse for {!r} (inradius {})".format(
                    h, domain, domain.inradius
                )
            )

        self._domain = domain
        self._h = h
        self._closed = bool(closed)

        xmin, ymin, xmax, ymax = domain.bounding_box
        nx = int(math.ceil((xmax - xmin) / h - 1e-9))
        ny = int(math.ceil((ymax - ymin) / h - 1e-9))
        self._x = xmin + h * np.arange(nx + 1)
        self._y = ymin + h * np.arange(ny + 1)

        if self._closed:
            mask, weights, cell_mask = self._closed_mask()
        else:
            X, Y = np.meshgrid(self._x, self._y)
            level = domain.level(np.stack([X, Y], axis=-1))
            mask = level < -BOUNDARY_TOLERANCE * h
            weights = np.ones(int(mask.sum()))
            cell_mask = None

        n_nodes = int(mask.sum())
        if n_nodes == 0:
            raise GridError("grid has no interior nodes")

        index = np.full(mask.shape, -1, dtype=int)
        index[mask] = np.arange(n_nodes)
        rows, cols = np.nonzero(mask)
        if not (
            np.array_equal(index[rows, cols], np.arange(n_nodes))
            and int(np.sum(index >= 0)) == n_nodes
        ):
            raise GridError("index map is not a bijection")

        self._mask = mask
        self._index = index
        self._rows = rows
        self._cols = cols
        self._weights = weights
        self._cell_mask = cell_mask
        self._points = np.column_stack([self._x[cols], self._y[rows]])

        for arr in (
            self._x,
            self._y,
            self._mask,
            self._index,
            self._rows,
            self._cols,
            self._weights,
            self._points,
        ):
            arr.setflags(write=False)
        if cell_mask is not None:
            cell_mask.setflags(write=False)

        logger.debug("grid for %r, h=%s: %d nodes", domain, h, n_nodes)

    def _closed_mask(self):
        h = self._h
        centres_x = self._x[:-1] + 0.5 * h
        centres_y = self._y[:-1] + 0.5 * h
        CX, CY = np.meshgrid(centres_x, centres_y)
        cell_mask = self._domain.level(np.stack([CX, CY], axis=-1)) < 0

        cells = cell_mask.astype(float)
        counts = np.zeros((len(self._y), len(self._x)))
        counts[:-1, :-1] += cells
        counts[:-1, 1:] += cells
        counts[1:, :-1] += cells
        counts[1:, 1:] += cells

        cell_volume = float(cells.sum()) * h * h
        if abs(cell_volume - self._domain.volume) > 1e-9 * self._domain.volume:
            raise GridError(
                "{!r} is not aligned with the lattice of spacing {}".format(
                    self._domain, h
                )
            )

        mask = counts > 0

        return mask, counts[mask] / 4.0, cell_mask

    @property
    def domain(self):
        """
        :obj:`Domain`
            Discretised domain
        """
        return self._domain

    @property
    def h(self):
        """
        float
            Lattice spacing
        """
        return self._h

    @property
    def closed(self):
        """
        bool
            Whether boundary nodes are numbered (Neumann grids)
        """
        return self._closed

    @property
    def x(self):
        """
        :obj:`np.ndarray`
            Lattice x-coordinates
        """
        return self._x

    @property
    def y(self):
        """
        :obj:`np.ndarray`
            Lattice y-coordinates
        """
        return self._y

    @property
    def bounding_box(self):
        """
        tuple
            ``(xmin, ymin, xmax, ymax)`` covered by the lattice
        """
        return (self._x[0], self._y[0], self._x[-1], self._y[-1])

    @property
    def mask(self):
        """
        :obj:`np.ndarray`
            Boolean array of shape ``(len(y), len(x))``, true at numbered nodes
        """
        return self._mask

    @property
    def index(self):
        """
        :obj:`np.ndarray`
            Node numbers with the shape of :attr:`mask`, ``-1`` where not numbered
        """
        return self._index

    @property
    def rows(self):
        """
        :obj:`np.ndarray`
            Row (y) lattice index of each numbered node
        """
        return self._rows

    @property
    def cols(self):
        """
        :obj:`np.ndarray`
            Column (x) lattice index of each numbered node
        """
        return self._cols

    @property
    def points(self):
        """
        :obj:`np.ndarray`
            Coordinates of the numbered nodes, shape ``(N, 2)``
        """
        return self._points

    @property
    def weights(self):
        """
        :obj:`np.ndarray`
            Quadrature weight of each node in units of ``h**2`` (one for open grids,
            the covered fraction of the four adjacent cells for closed grids)
        """
        return self._weights

    @property
    def cell_mask(self):
        """
        :obj:`np.ndarray` or None
            Cells inside the domain (closed grids only)
        """
        return self._cell_mask

    @property
    def n_nodes(self):
        """
        int
            Number of numbered nodes
        """
        return len(self._rows)

    @property
    def volume(self):
        """
        float
            Discrete volume :math:`h^2 \\sum_i w_i`
        """
        return float(self._weights.sum()) * self._h ** 2

    def integrate(self, values):
        """
        Midpoint quadrature of node values over the grid

        Parameters
        ----------
        values : array_like
            Values at the numbered nodes (trailing axes are integrated separately)

        Returns
        -------
        float or :obj:`np.ndarray`
        """
        values = np.asarray(values, dtype=float)
        return self._h ** 2 * np.tensordot(self._weights, values, axes=(0, 0))

    def __repr__(self):
        return "Grid({!r}, h={}, nodes={}{})".format(
            self._domain, self._h, self.n_nodes, ", closed" if self._closed else ""
        )


def build_grid(domain, h, closed=False):
    """
    Discretise a planar domain

    Parameters
    ----------
    domain : :obj:`Domain`
        Domain to discretise

    h : float
        Lattice spacing, at most half the domain's inradius

    closed : bool
        Number the boundary nodes too (Neumann problems on lattice-aligned domains)

    Returns
    -------
    :obj:`Grid`

    Raises
    ------
    GridError
        ``h`` is too coarse, the interior is empty or (closed grids) the domain is
        not a union of lattice cells

    UnsupportedDomainError
        ``domain`` is not planar
    """
    return Grid(domain, h, closed=closed)


def _parse_pair(value, name):
    if isinstance(value, str):
        parts = [p for p in value.replace(",", " ").split() if p]
    else:
        parts = list(value)

    if len(parts) != 2:
        raise ConfigError("{} must have two components, got {!r}".format(name, value))

    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ConfigError("{} must be numeric, got {!r}".format(name, value)) from exc


def _parse_vertices(value):
    if isinstance(value, str):
        return [_parse_pair(v, "vertex") for v in value.split(";") if v.strip()]

    return [_parse_pair(v, "vertex") for v in value]


def format_vertices(vertices):
    """
    Format polygon vertices as ``"x y; x y; ..."``
    """
    return "; ".join("{!r} {!r}".format(x, y) for x, y in vertices)


def domain_from_dict(spec):
    """
    Build a domain from a flat mapping

    Values may be strings (as read from a configuration file) or numbers.

    Parameters
    ----------
    spec : dict
        ``shape``, shape parameters and optionally ``translation`` (``"x, y"``) and
        ``rotation`` (radians). Polygon vertices are given as ``"x y; x y; ..."``.

    Returns
    -------
    :obj:`Domain`

    Raises
    ------
    ConfigError
        Unknown shape, missing or unknown parameters or unparseable values
    """
    spec = dict(spec)
    try:
        shape = str(spec.pop("shape")).strip().lower()
    except KeyError as exc:
        raise ConfigError("domain specification has no shape") from exc

    if shape not in SHAPES:
        raise ConfigError(
            "unknown shape {!r}, expected one of {}".format(shape, sorted(SHAPES))
        )

    cls = SHAPES[shape]
    kwargs = {}
    if "translation" in spec:
        kwargs["translation"] = _parse_pair(spec.pop("translation"), "translation")
    if "rotation" in spec:
        kwargs["rotation"] = _parse_number(spec.pop("rotation"), "rotation")

    for name in cls._parameters:  # pylint: disable=protected-access
        if name not in spec:
            if shape == "ball" and name == "dim":
                continue
            raise ConfigError("{} needs parameter {!r}".format(shape, name))

        value = spec.pop(name)
        if name == "vertices":
            kwargs[name] = _parse_vertices(value)
        elif name == "dim":
            kwargs[name] = int(_parse_number(value, name))
        else:
            kwargs[name] = _parse_number(value, name)

    if spec:
        raise ConfigError(
            "unknown parameters for {}: {}".format(shape, ", ".join(sorted(spec)))
        )

    return cls(**kwargs)


def _parse_number(value, name):
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError("{} must be numeric, got {!r}".format(name, value)) from exc


def random_star_polygon(rng, n_vertices=8, area=1.0):
    """
    Random simple polygon, star-shaped with respect to the origin

    Angles are stratified around the circle and radii drawn from ``[0.6, 1]``, then
    the polygon is scaled to the requested area.

    Parameters
    ----------
    rng : :obj:`np.random.Generator`
        Random number generator

    n_vertices : int
        Number of vertices

    area : float
        Area of the result

    Returns
    -------
    :obj:`Polygon`
    """
    slots = np.arange(n_vertices) + 0.1 + 0.8 * rng.uniform(size=n_vertices)
    angles = 2.0 * np.pi * slots / n_vertices
    radii = rng.uniform(0.6, 1.0, size=n_vertices)
    vertices = [(r * math.cos(t), r * math.sin(t)) for r, t in zip(radii, angles)]
    polygon = Polygon(vertices)

    return polygon.scaled(math.sqrt(area / polygon.volume))


DOMAIN_FAMILIES = ("rectangle", "ellipse", "polygon")
"""tuple : families available to :func:`domain_family`"""


def domain_family(family, samples, seed=0):
    """
    Unit-area domains from a one-parameter family

    ``rectangle`` runs through aspect ratios in ``[1, 8]``, ``ellipse`` through
    eccentricities in ``[0, 0.9]`` and ``polygon`` draws random star-shaped
    polygons from ``seed``.

    Parameters
    ----------
    family : str
        One of :data:`DOMAIN_FAMILIES`

    samples : int
        Number of domains

    seed : int
        Seed for random families

    Returns
    -------
    list
        ``(parameter, domain)`` pairs in family order
    """
    if samples < 1:
        raise ValidationError("samples must be positive")

    if family == "rectangle":
        out = []
        for aspect in np.linspace(1.0, 8.0, samples):
            side = math.sqrt(aspect)
            out.append((float(aspect), Rectangle(side, 1.0 / side)))
        return out

    if family == "ellipse":
        out = []
        for ecc in np.linspace(0.0, 0.9, samples):
            ratio = math.sqrt(1.0 - ecc ** 2)
            a = math.sqrt(1.0 / (math.pi * ratio))
            out.append((float(ecc), Ellipse(a, ratio * a)))
        return out

    if family == "polygon":
        rng = np.random.default_rng(seed)
        return [
            (float(i), random_star_polygon(rng, int(rng.integers(5, 10))))
            for i in range(samples)
        ]

    raise ValidationError(
        "unknown family {!r}, expected one of {}".format(family, DOMAIN_FAMILIES)
    )
