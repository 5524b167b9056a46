"""
Module containing the base for domain specifications
"""
import math
from abc import ABC, abstractmethod

import numpy as np

from .errors import ValidationError

# pylint: disable=invalid-name


class Domain(ABC):
    """
    Base class for bounded domains

    A domain is described by shape parameters in a local frame plus a placement in
    the plane: a rotation about the local origin followed by a translation.
    Instances are immutable, :meth:`scaled`, :meth:`translated` and :meth:`rotated`
    return new domains.
    """

    _shape = None  # shape name used in serialised specs

    _parameters = tuple()  # names of the shape parameters, in constructor order

    def __init__(self, translation=(0.0, 0.0), rotation=0.0):
        self._translation = self._assert_is_point(translation, "translation")
        self._rotation = self._assert_is_finite(rotation, "rotation")

    @staticmethod
    def _assert_is_finite(value, name):
        try:
            value = float(value)
        except (TypeError, ValueError) as exc:
            raise ValidationError("{} must be a number".format(name)) from exc

        if not math.isfinite(value):
            raise ValidationError("{} must be finite".format(name))

        return value

    @classmethod
    def _assert_is_positive(cls, value, name):
        value = cls._assert_is_finite(value, name)
        if value <= 0:
            raise ValidationError("{} must be positive, got {}".format(name, value))

        return value

    @classmethod
    def _assert_is_point(cls, value, name):
        try:
            x, y = value
        except (TypeError, ValueError) as exc:
            raise ValidationError("{} must be a pair of numbers".format(name)) from exc

        return (cls._assert_is_finite(x, name), cls._assert_is_finite(y, name))

    @property
    def shape(self):
        """
        str
            Shape name
        """
        return self._shape

    @property
    def dim(self):
        """
        int
            Dimension of the ambient space
        """
        return 2

    @property
    def translation(self):
        """
        tuple
            Translation applied after the rotation
        """
        return self._translation

    @property
    def rotation(self):
        """
        float
            Counter-clockwise rotation (radians) about the local origin
        """
        return self._rotation

    @property
    def parameters(self):
        """
        dict
            Shape parameters by name
        """
        return {name: getattr(self, name) for name in self._parameters}

    def to_dict(self):
        """
        Serialise to a flat mapping

        Returns
        -------
        dict
            ``shape``, the shape parameters, ``translation`` and ``rotation``
        """
        out = {"shape": self._shape}
        out.update(self.parameters)
        out["translation"] = self.translation
        out["rotation"] = self.rotation

        return out

    def _replace(self, **changes):
        kwargs = self.parameters
        kwargs["translation"] = self.translation
        kwargs["rotation"] = self.rotation
        kwargs.update(changes)

        return type(self)(**kwargs)

    def _scaled_parameters(self, factor):
        return {name: value * factor for name, value in self.parameters.items()}

    def scaled(self, factor):
        """
        Scale the domain about the global origin

        Parameters
        ----------
        factor : float
            Scale factor

        Returns
        -------
        :obj:`Domain`
        """
        factor = self._assert_is_positive(factor, "factor")
        tx, ty = self.translation

        return self._replace(
            translation=(factor * tx, factor * ty), **self._scaled_parameters(factor)
        )

    def translated(self, dx, dy):
        """
        Translate the domain

        Parameters
        ----------
        dx, dy : float
            Shift

        Returns
        -------
        :obj:`Domain`
        """
        tx, ty = self.translation

        return self._replace(translation=(tx + dx, ty + dy))

    def rotated(self, angle):
        """
        Rotate the domain about the global origin

        Parameters
        ----------
        angle : float
            Counter-clockwise angle in radians

        Returns
        -------
        :obj:`Domain`
        """
        angle = self._assert_is_finite(angle, "angle")
        tx, ty = self.translation
        cos, sin = math.cos(angle), math.sin(angle)

        return self._replace(
            translation=(cos * tx - sin * ty, sin * tx + cos * ty),
            rotation=self.rotation + angle,
        )

    def to_local(self, points):
        """
        Map points from the plane into the domain's local frame

        Parameters
        ----------
        points : array_like
            Points of shape ``(..., 2)``

        Returns
        -------
        :obj:`np.ndarray`, :obj:`np.ndarray`
            Local ``x`` and ``y`` coordinates
        """
        pts = np.asarray(points, dtype=float)
        dx = pts[..., 0] - self.translation[0]
        dy = pts[..., 1] - self.translation[1]
        if self.rotation == 0:
            return dx, dy

        cos, sin = math.cos(self.rotation), math.sin(self.rotation)

        return cos * dx + sin * dy, -sin * dx + cos * dy

    def to_global(self, x, y):
        """
        Map local coordinates into the plane

        Returns
        -------
        :obj:`np.ndarray`
            Points of shape ``(..., 2)``
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        cos, sin = math.cos(self.rotation), math.sin(self.rotation)

        return np.stack(
            [
                cos * x - sin * y + self.translation[0],
                sin * x + cos * y + self.translation[1],
            ],
            axis=-1,
        )

    def level(self, points):
        """
        Signed boundary distance (negative inside, zero on the boundary)

        The value is the exact distance for most shapes and a lower bound on it
        otherwise, which is all that tolerance tests need.

        Parameters
        ----------
        points : array_like
            Points of shape ``(..., 2)``

        Returns
        -------
        :obj:`np.ndarray`
        """
        return self._level(*self.to_local(points))

    def contains(self, points, tol=0.0):
        """
        Test whether points lie in the open domain

        Parameters
        ----------
        points : array_like
            Point of shape ``(2,)`` or points of shape ``(m, 2)``

        tol : float
            Points closer than ``tol`` to the boundary are treated as outside

        Returns
        -------
        bool or :obj:`np.ndarray`
        """
        inside = self.level(points) < -tol
        if np.ndim(inside) == 0:
            return bool(inside)

        return inside

    @property
    def bounding_box(self):
        """
        tuple
            ``(xmin, ymin, xmax, ymax)`` of the placed domain
        """
        xmin, ymin, xmax, ymax = self._local_bounds()
        corners = self.to_global(
            np.array([xmin, xmax, xmax, xmin]), np.array([ymin, ymin, ymax, ymax])
        )

        return (
            float(corners[:, 0].min()),
            float(corners[:, 1].min()),
            float(corners[:, 0].max()),
            float(corners[:, 1].max()),
        )

    @property
    def convex(self):
        """
        bool
            Whether the domain is convex
        """
        return True

    @property
    def reentrant(self):
        """
        bool
            Whether the boundary has a reentrant corner
        """
        return False

    @property
    @abstractmethod
    def volume(self):
        """
        float
            Volume (area for planar domains)
        """

    @property
    @abstractmethod
    def perimeter(self):
        """
        float
            Boundary measure
        """

    @property
    @abstractmethod
    def inradius(self):
        """
        float
            Radius of the largest inscribed ball (a lower bound where no closed
            form is used)
        """

    @abstractmethod
    def _level(self, x, y):
        """Signed boundary distance in the local frame"""

    @abstractmethod
    def _local_bounds(self):
        """Bounding box ``(xmin, ymin, xmax, ymax)`` in the local frame"""

    def _key(self):
        out = []
        for key, value in self.to_dict().items():
            if isinstance(value, (list, tuple)):
                value = tuple(tuple(v) if isinstance(v, (list, tuple)) else v for v in value)
            out.append((key, value))

        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented

        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        params = ", ".join(
            "{}={!r}".format(name, value) for name, value in self.parameters.items()
        )
        placement = ""
        if self.translation != (0.0, 0.0):
            placement += ", translation={!r}".format(self.translation)
        if self.rotation != 0:
            placement += ", rotation={!r}".format(self.rotation)

        return "{}({}{})".format(type(self).__name__, params, placement)
