import math
import re
from abc import ABC, abstractmethod

import numpy as np
import numpy.testing as npt
import pytest

from eigenbounds.constants import BOUNDARY_TOLERANCE
from eigenbounds.errors import ConfigError, GridError, UnsupportedDomainError, ValidationError
from eigenbounds.geometry import (
    DOMAIN_FAMILIES,
    SHAPES,
    Annulus,
    Ball,
    Ellipse,
    LShape,
    Polygon,
    Rectangle,
    Stadium,
    build_grid,
    contains,
    domain_family,
    domain_from_dict,
    equal_volume_ball,
    format_vertices,
    orientation,
    random_star_polygon,
    volume,
)


class DomainTester(ABC):
    tdomain = None

    parameters = None

    volume = None

    inside = None

    outside = None

    @abstractmethod
    def test_init(self):
        """
        Test the domain initialises as intended
        """
        pass

    def test_volume(self):
        npt.assert_allclose(self.tdomain(**self.parameters).volume, self.volume)

    def test_contains(self):
        domain = self.tdomain(**self.parameters)

        assert domain.contains(self.inside)
        assert not domain.contains(self.outside)

    def test_level_sign(self):
        domain = self.tdomain(**self.parameters)

        assert domain.level(self.inside) < 0
        assert domain.level(self.outside) > 0

    def test_non_positive_parameters(self):
        for name, value in self.parameters.items():
            if not isinstance(value, float):
                continue
            error_msg = re.escape("{} must be positive".format(name))
            with pytest.raises(ValidationError, match=error_msg):
                self.tdomain(**{**self.parameters, name: 0.0})

    def test_serialisation(self):
        domain = self.tdomain(**self.parameters, translation=(0.25, -0.5), rotation=0.3)
        spec = domain.to_dict()

        assert spec["shape"] == domain.shape
        assert domain_from_dict(spec) == domain

    def test_translation(self):
        domain = self.tdomain(**self.parameters)
        moved = domain.translated(1.5, -2.0)
        inside = np.asarray(self.inside) + np.array([1.5, -2.0])

        assert moved.contains(inside)
        npt.assert_allclose(moved.level(inside), domain.level(self.inside), atol=1e-12)
        npt.assert_allclose(moved.volume, domain.volume)

    def test_rotation_preserves_level(self):
        domain = self.tdomain(**self.parameters)
        angle = 0.7
        turned = domain.rotated(angle)
        rot = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        pts = np.array([self.inside, self.outside])

        npt.assert_allclose(turned.level(pts @ rot.T), domain.level(pts), atol=1e-12)

    def test_scaling(self):
        domain = self.tdomain(**self.parameters)
        bigger = domain.scaled(2.0)

        npt.assert_allclose(bigger.volume, 4.0 * domain.volume)
        npt.assert_allclose(bigger.perimeter, 2.0 * domain.perimeter)
        assert bigger.contains(2.0 * np.asarray(self.inside))

    def test_bounding_box_covers_domain(self):
        domain = self.tdomain(**self.parameters, translation=(0.1, 0.2), rotation=0.4)
        xmin, ymin, xmax, ymax = domain.bounding_box
        xs = np.linspace(xmin - 1, xmax + 1, 201)
        ys = np.linspace(ymin - 1, ymax + 1, 201)
        X, Y = np.meshgrid(xs, ys)
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)
        inside = pts[domain.contains(pts)]

        assert inside.size
        assert np.all(inside[:, 0] >= xmin - 1e-12)
        assert np.all(inside[:, 0] <= xmax + 1e-12)
        assert np.all(inside[:, 1] >= ymin - 1e-12)
        assert np.all(inside[:, 1] <= ymax + 1e-12)

    def test_equality_and_hash(self):
        first = self.tdomain(**self.parameters)
        second = self.tdomain(**self.parameters)

        assert first == second
        assert hash(first) == hash(second)
        assert first != first.translated(0.1, 0.0)


class TestBall(DomainTester):
    tdomain = Ball

    parameters = {"radius": 1.0}

    volume = math.pi

    inside = (0.0, 0.0)

    outside = (1.0, 0.5)

    def test_init(self):
        res = Ball(3, 2.0)

        assert res.dim == 3
        assert res.radius == 2.0
        assert res.shape == "ball"
        npt.assert_allclose(res.volume, 4.0 / 3.0 * math.pi * 8.0)

    def test_boundary_excluded(self):
        assert not Ball(2, 1.0).contains((1.0, 0.0))

    def test_bad_dimension(self):
        with pytest.raises(ValidationError, match="dim must be an integer >= 2"):
            Ball(1, 1.0)

    def test_high_dimension_cannot_be_placed(self):
        with pytest.raises(ValidationError, match="cannot be placed"):
            Ball(3, 1.0, translation=(1.0, 0.0))

    def test_high_dimension_level(self):
        res = Ball(4, 2.0).level(np.array([[1.0, 1.0, 1.0, 1.0], [0.0, 0.0, 0.0, 3.0]]))

        npt.assert_allclose(res, [0.0, 1.0])


class TestRectangle(DomainTester):
    tdomain = Rectangle

    parameters = {"a": 1.0, "b": 2.0}

    volume = 2.0

    inside = (0.4, 0.9)

    outside = (0.6, 0.0)

    def test_init(self):
        res = Rectangle(1.0, 2.0)

        assert res.a == 1.0
        assert res.b == 2.0
        assert res.inradius == 0.5
        assert res.perimeter == 6.0
        assert res.convex
        assert not res.reentrant
        assert res.bounding_box == (-0.5, -1.0, 0.5, 1.0)


class TestEllipse(DomainTester):
    tdomain = Ellipse

    parameters = {"a": 2.0, "b": 1.0}

    volume = 2.0 * math.pi

    inside = (1.9, 0.0)

    outside = (1.5, 0.8)

    def test_init(self):
        res = Ellipse(2.0, 1.0)

        assert res.inradius == 1.0
        # close to the exact circumference 9.688448216
        npt.assert_allclose(res.perimeter, 9.688448216, rtol=1e-5)

    def test_circle_perimeter(self):
        npt.assert_allclose(Ellipse(1.0, 1.0).perimeter, 2.0 * math.pi)

    def test_rotated_bounding_box(self):
        res = Ellipse(2.0, 1.0, rotation=math.pi / 2).bounding_box

        npt.assert_allclose(res, (-1.0, -2.0, 1.0, 2.0), atol=1e-12)


class TestAnnulus(DomainTester):
    tdomain = Annulus

    parameters = {"r_in": 1.0, "r_out": 2.0}

    volume = 3.0 * math.pi

    inside = (1.5, 0.0)

    outside = (0.2, 0.2)

    def test_init(self):
        res = Annulus(1.0, 2.0)

        assert not res.convex
        assert res.inradius == 0.5

    def test_radii_ordered(self):
        error_msg = re.escape("r_in must be smaller than r_out, got 2.0 and 1.0")
        with pytest.raises(ValidationError, match=error_msg):
            Annulus(2.0, 1.0)

    def test_non_positive_parameters(self):
        with pytest.raises(ValidationError, match="r_in must be positive"):
            Annulus(0.0, 2.0)


class TestLShape(DomainTester):
    tdomain = LShape

    parameters = {"a": 1.0, "b": 1.0}

    volume = 3.0

    inside = (-0.5, 0.5)

    outside = (0.5, 0.5)

    def test_init(self):
        res = LShape(1.0, 1.0)

        assert res.reentrant
        assert not res.convex
        assert res.perimeter == 8.0
        assert res.inradius == 0.5

    def test_reflex_corner_neighbourhood(self):
        res = LShape(1.0, 1.0)

        assert not res.contains((1e-6, 1e-6))
        assert res.contains((-1e-6, 1e-6))
        assert res.contains((1e-6, -1e-6))
        assert not res.contains((0.0, 0.0))


class TestStadium(DomainTester):
    tdomain = Stadium

    parameters = {"length": 2.0, "radius": 0.5}

    volume = 2.0 + 0.25 * math.pi

    inside = (1.3, 0.0)

    outside = (1.4, 0.4)

    def test_init(self):
        res = Stadium(2.0, 0.5)

        assert res.inradius == 0.5
        npt.assert_allclose(res.perimeter, 4.0 + math.pi)


class TestPolygon(DomainTester):
    tdomain = Polygon

    parameters = {"vertices": [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (0.0, 1.0)]}

    volume = 2.0

    inside = (1.5, 0.5)

    outside = (2.5, 0.5)

    def test_init(self):
        res = Polygon([(0, 0), (2, 0), (2, 1), (0, 1), (0, 0)])

        assert len(res.vertices) == 4
        assert res.convex
        npt.assert_allclose(res.perimeter, 6.0)
        npt.assert_allclose(res.inradius, 0.5, atol=1e-2)

    def test_non_positive_parameters(self):
        with pytest.raises(ValidationError, match="at least three vertices"):
            Polygon([(0, 0), (1, 1)])

    def test_self_intersecting(self):
        with pytest.raises(ValidationError, match="not simple"):
            Polygon([(0, 0), (2, 2), (2, 0), (0, 1)])

    def test_zero_area(self):
        with pytest.raises(ValidationError, match="zero area"):
            Polygon([(0, 0), (1, 0), (2, 0)])

    def test_duplicate_vertices(self):
        with pytest.raises(ValidationError, match="distinct"):
            Polygon([(0, 0), (1, 0), (1, 1), (1, 0)])

    def test_clockwise_orientation(self):
        res = Polygon([(0, 0), (0, 1), (2, 1), (2, 0)])

        npt.assert_allclose(res.volume, 2.0)
        assert res.contains((1.0, 0.5))

    def test_non_convex(self):
        res = Polygon([(0, 0), (2, 0), (2, 2), (1, 1), (0, 2)])

        assert not res.convex
        assert res.reentrant
        assert not res.contains((1.0, 1.5))
        assert res.contains((1.0, 0.5))

    def test_points_near_edges(self):
        res = Polygon([(0.1, 0.1), (0.7, 0.1), (0.7, 0.3), (0.1, 0.3)])

        assert not res.contains((0.4, 0.1))
        assert res.contains((0.4, 0.1 + 1e-12))
        assert not res.contains((0.4, 0.1 - 1e-12))


def test_orientation_exact_fallback():
    # collinear points with inexact decimal coordinates
    a = (0.1, 0.1)
    b = (0.3, 0.3)
    c = (0.7, 0.7)

    assert orientation(a, b, c) == 0
    assert orientation((0, 0), (1, 0), (0, 1)) == 1
    assert orientation((0, 0), (0, 1), (1, 0)) == -1


def test_shapes_registry():
    assert set(SHAPES) == {"ball", "rectangle", "ellipse", "annulus", "lshape", "stadium", "polygon"}


@pytest.mark.parametrize(
    "domain,expected",
    [(Ball(2, 1.0), math.pi), (Rectangle(1.0, 1.0), 1.0), (Annulus(1.0, 2.0), 3.0 * math.pi)],
)
def test_volume(domain, expected):
    npt.assert_allclose(volume(domain), expected)


@pytest.mark.parametrize(
    "domain,radius",
    [
        (Rectangle(1.0, 1.0), 1.0 / math.sqrt(math.pi)),
        (Ellipse(2.0, 1.0), math.sqrt(2.0)),
        (Ball(2, 0.3), 0.3),
    ],
)
def test_equal_volume_ball(domain, radius):
    res = equal_volume_ball(domain)

    assert isinstance(res, Ball)
    npt.assert_allclose(res.radius, radius)
    npt.assert_allclose(res.volume, domain.volume)


def test_equal_volume_ball_identity():
    disk = Ball(2, 0.7, translation=(1.0, 2.0))

    assert equal_volume_ball(disk) is disk


def test_contains_function():
    assert contains(Ball(2, 1.0), (0.0, 0.0))
    assert not contains(Ball(2, 1.0), (1.0, 0.0))


def test_domain_from_dict_strings():
    res = domain_from_dict(
        {"shape": "polygon", "vertices": "0 0; 1 0; 0 1", "translation": "1, 2", "rotation": "0.5"}
    )

    assert res == Polygon([(0, 0), (1, 0), (0, 1)], translation=(1, 2), rotation=0.5)


def test_domain_from_dict_ball_default_dimension():
    assert domain_from_dict({"shape": "ball", "radius": "2"}) == Ball(2, 2.0)


@pytest.mark.parametrize(
    "spec,error_msg",
    [
        ({"a": 1}, "domain specification has no shape"),
        ({"shape": "triangle"}, "unknown shape 'triangle'"),
        ({"shape": "rectangle", "a": 1}, "rectangle needs parameter 'b'"),
        ({"shape": "rectangle", "a": 1, "b": 1, "c": 2}, "unknown parameters for rectangle: c"),
        ({"shape": "rectangle", "a": "x", "b": 1}, "a must be numeric"),
        ({"shape": "ball", "radius": 1, "translation": "1"}, "translation must have two components"),
    ],
)
def test_domain_from_dict_errors(spec, error_msg):
    with pytest.raises(ConfigError, match=re.escape(error_msg)):
        domain_from_dict(spec)


def test_format_vertices_round_trip():
    vertices = [(0.0, 0.0), (1.5, 0.25), (0.1, 0.9)]
    res = domain_from_dict({"shape": "polygon", "vertices": format_vertices(vertices)})

    assert res.vertices == tuple(vertices)


def test_random_star_polygon(rng):
    res = random_star_polygon(rng, 7, area=2.0)

    assert len(res.vertices) == 7
    npt.assert_allclose(res.volume, 2.0)
    assert res.contains((0.0, 0.0))


@pytest.mark.parametrize("family", DOMAIN_FAMILIES)
def test_domain_family_unit_area(family):
    res = domain_family(family, 5, seed=3)

    assert len(res) == 5
    for _, domain in res:
        npt.assert_allclose(domain.volume, 1.0)


def test_domain_family_parameters():
    aspects = [p for p, _ in domain_family("rectangle", 8)]
    eccentricities = [p for p, _ in domain_family("ellipse", 4)]

    npt.assert_allclose(aspects, np.linspace(1, 8, 8))
    npt.assert_allclose(eccentricities, np.linspace(0, 0.9, 4))


def test_domain_family_deterministic():
    first = [d for _, d in domain_family("polygon", 3, seed=11)]
    second = [d for _, d in domain_family("polygon", 3, seed=11)]

    assert first == second


def test_domain_family_unknown():
    with pytest.raises(ValidationError, match="unknown family"):
        domain_family("hexagon", 3)


class TestGrid:
    def test_unit_square_interior(self):
        res = build_grid(Rectangle(1.0, 1.0), 1.0 / 64)

        assert res.n_nodes == 63 ** 2
        npt.assert_allclose(res.bounding_box, (-0.5, -0.5, 0.5, 0.5))

    def test_coarsest_square(self):
        res = build_grid(Rectangle(1.0, 1.0), 0.25)

        assert res.n_nodes == 9

    def test_too_coarse(self):
        with pytest.raises(GridError, match="too coarse"):
            build_grid(Rectangle(1.0, 1.0), 0.3)

    def test_disk_volume(self):
        res = build_grid(Ball(2, 1.0), 1.0 / 64)

        npt.assert_allclose(res.volume, math.pi, rtol=0.05)

    def test_annulus_hole_excluded(self):
        res = build_grid(Annulus(1.0, 2.0), 1.0 / 128)

        assert np.all(np.hypot(res.points[:, 0], res.points[:, 1]) > 1.0)

    def test_nodes_inside(self):
        domain = LShape(1.0, 1.0, translation=(0.3, 0.1), rotation=0.2)
        res = build_grid(domain, 1.0 / 16)

        assert np.all(domain.contains(res.points))

    def test_index_bijection(self):
        res = build_grid(Ellipse(1.0, 0.6), 1.0 / 32)

        npt.assert_array_equal(res.index[res.rows, res.cols], np.arange(res.n_nodes))
        assert np.sum(res.index >= 0) == res.n_nodes
        npt.assert_allclose(res.points[:, 0], res.x[res.cols])
        npt.assert_allclose(res.points[:, 1], res.y[res.rows])

    @pytest.mark.parametrize(
        "domain",
        [
            Ellipse(1.0, 0.6, rotation=0.4),
            LShape(1.0, 1.0, translation=(0.3, 0.1), rotation=0.2),
            Annulus(0.5, 1.5),
            Polygon([(0, 0), (2, 1), (0, 3), (-1, 1)]),
        ],
    )
    def test_mask_consistency(self, domain):
        h = 1.0 / 32
        res = build_grid(domain, h)
        padded = np.pad(res.index, 1, constant_values=-1)
        X, Y = np.meshgrid(
            np.concatenate([[res.x[0] - h], res.x, [res.x[-1] + h]]),
            np.concatenate([[res.y[0] - h], res.y, [res.y[-1] + h]]),
        )

        assert np.all(domain.contains(res.points))
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            rows, cols = res.rows + 1 + dr, res.cols + 1 + dc
            outside = padded[rows, cols] < 0
            assert np.any(outside)
            neighbours = np.column_stack(
                [X[rows[outside], cols[outside]], Y[rows[outside], cols[outside]]]
            )
            assert not np.any(domain.contains(neighbours, tol=BOUNDARY_TOLERANCE * h))

    def test_read_only(self):
        res = build_grid(Rectangle(1.0, 1.0), 0.125)

        with pytest.raises(ValueError):
            res.points[0, 0] = 3.0

    def test_integrate(self):
        res = build_grid(Rectangle(2.0, 1.0), 1.0 / 16)

        npt.assert_allclose(res.integrate(np.ones(res.n_nodes)), res.volume)

    def test_closed_grid_weights(self):
        res = build_grid(Rectangle(1.0, 1.0), 0.25, closed=True)

        assert res.n_nodes == 25
        npt.assert_allclose(res.volume, 1.0)
        assert res.weights.min() == 0.25
        assert res.weights.max() == 1.0

    def test_closed_lshape(self):
        res = build_grid(LShape(1.0, 1.0), 0.25, closed=True)

        npt.assert_allclose(res.volume, 3.0)
        # reentrant corner node touches three of its four cells
        corner = res.index[np.isclose(res.y, 0.0), np.isclose(res.x, 0.0)]
        npt.assert_allclose(res.weights[corner], 0.75)

    def test_closed_grid_not_aligned(self):
        with pytest.raises(GridError, match="not aligned"):
            build_grid(Ball(2, 1.0), 0.125, closed=True)

    def test_high_dimension(self):
        with pytest.raises(UnsupportedDomainError, match="planar"):
            build_grid(Ball(3, 1.0), 0.1)

