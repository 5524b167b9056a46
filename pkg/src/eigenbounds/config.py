"""
Run configuration and configuration files

Configuration files are INI documents with a ``[run]`` section and one or more
domain sections, ``[domain]`` or ``[domain:<label>]``:

.. code-block:: ini

    [run]
    h = 0.03125, 0.015625
    k = 4
    format = csv

    [domain:square]
    shape = rectangle
    a = 1
    b = 1

    [domain:disk]
    shape = ball
    radius = 0.5641895835477563
    translation = 0.3, -0.2
"""
import configparser
import logging

from .constants import (
    DEFAULT_SEED,
    DEFAULT_SOLVER_TOLERANCE,
    MAX_EIGENPAIRS,
    MIN_SOLVER_TOLERANCE,
)
from .errors import ConfigError
from .geometry import domain_from_dict, format_vertices

logger = logging.getLogger(__name__)

FORMATS = ("table", "csv", "jsonl")
"""tuple : output formats"""

BOUNDARIES = ("linear", "staircase")
"""tuple : boundary treatments of the grid solver"""

DEFAULT_H = (1.0 / 32, 1.0 / 64)
"""tuple : default grid spacings"""

_DOMAIN_PREFIX = "domain"


class RunConfig:  # pylint: disable=too-many-instance-attributes
    """
    Validated settings of one command-line run

    Every attribute is checked when it is set, invalid values raise
    :class:`ConfigError`.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self,
        domains=None,
        h=DEFAULT_H,
        k=3,
        tol=DEFAULT_SOLVER_TOLERANCE,
        fmt="table",
        out=None,
        seed=DEFAULT_SEED,
        jobs=1,
        numeric_balls=False,
        boundary="linear",
    ):
        self.domains = [] if domains is None else domains
        self.h = h
        self.k = k
        self.tol = tol
        self.fmt = fmt
        self.out = out
        self.seed = seed
        self.jobs = jobs
        self.numeric_balls = numeric_balls
        self.boundary = boundary

    @staticmethod
    def _assert_is_int(value, name):
        try:
            out = int(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError("{} must be an integer, got {!r}".format(name, value)) from exc

        if out != float(value):
            raise ConfigError("{} must be an integer, got {!r}".format(name, value))

        return out

    @staticmethod
    def _assert_is_choice(value, name, choices):
        value = str(value).strip().lower()
        if value not in choices:
            raise ConfigError(
                "{} must be one of {}, got {!r}".format(name, ", ".join(choices), value)
            )

        return value

    @property
    def domains(self):
        """
        list
            ``(label, domain)`` pairs
        """
        return self._domains

    @domains.setter
    def domains(self, val):
        labels = [label for label, _ in val]
        if len(set(labels)) != len(labels):
            raise ConfigError("domain labels must be unique, got {}".format(labels))

        self._domains = list(val)

    @property
    def h(self):
        """
        tuple
            Grid spacings, strictly decreasing
        """
        return self._h

    @h.setter
    def h(self, val):
        if isinstance(val, str):
            val = [v for v in val.replace(",", " ").split() if v]

        try:
            spacings = tuple(float(v) for v in val)
        except (TypeError, ValueError) as exc:
            raise ConfigError("h must be a list of numbers, got {!r}".format(val)) from exc

        if not spacings:
            raise ConfigError("at least one grid spacing is needed")

        if any(not v > 0 for v in spacings):
            raise ConfigError("grid spacings must be positive, got {}".format(spacings))

        if any(b >= a for a, b in zip(spacings, spacings[1:])):
            raise ConfigError(
                "grid spacings must be strictly decreasing, got {}".format(spacings)
            )

        self._h = spacings

    @property
    def k(self):
        """
        int
            Number of eigenpairs
        """
        return self._k

    @k.setter
    def k(self, val):
        val = self._assert_is_int(val, "k")
        if not 1 <= val <= MAX_EIGENPAIRS:
            raise ConfigError("k must lie in [1, {}], got {}".format(MAX_EIGENPAIRS, val))

        self._k = val

    @property
    def tol(self):
        """
        float
            Solver tolerance
        """
        return self._tol

    @tol.setter
    def tol(self, val):
        try:
            val = float(val)
        except (TypeError, ValueError) as exc:
            raise ConfigError("tol must be numeric, got {!r}".format(val)) from exc

        if not MIN_SOLVER_TOLERANCE <= val < 1.0:
            raise ConfigError(
                "tol must lie in [{}, 1), got {}".format(MIN_SOLVER_TOLERANCE, val)
            )

        self._tol = val

    @property
    def fmt(self):
        """
        str
            Output format, one of :data:`FORMATS`
        """
        return self._fmt

    @fmt.setter
    def fmt(self, val):
        self._fmt = self._assert_is_choice(val, "format", FORMATS)

    @property
    def out(self):
        """
        str or None
            Output path, standard output when ``None``
        """
        return self._out

    @out.setter
    def out(self, val):
        self._out = str(val) if val not in (None, "", "-") else None

    @property
    def seed(self):
        """
        int
        """
        return self._seed

    @seed.setter
    def seed(self, val):
        val = self._assert_is_int(val, "seed")
        if val < 0:
            raise ConfigError("seed must be non-negative, got {}".format(val))

        self._seed = val

    @property
    def jobs(self):
        """
        int
            Number of worker processes, ``-1`` for all cores
        """
        return self._jobs

    @jobs.setter
    def jobs(self, val):
        val = self._assert_is_int(val, "jobs")
        if val == 0 or val < -1:
            raise ConfigError("jobs must be positive or -1, got {}".format(val))

        self._jobs = val

    @property
    def numeric_balls(self):
        """
        bool
            Solve balls on a grid instead of using their analytic spectrum
        """
        return self._numeric_balls

    @numeric_balls.setter
    def numeric_balls(self, val):
        if isinstance(val, str):
            lowered = val.strip().lower()
            if lowered in ("1", "yes", "true", "on"):
                val = True
            elif lowered in ("0", "no", "false", "off"):
                val = False
            else:
                raise ConfigError("numeric_balls must be a boolean, got {!r}".format(val))

        self._numeric_balls = bool(val)

    @property
    def boundary(self):
        """
        str
            Boundary treatment, one of :data:`BOUNDARIES`
        """
        return self._boundary

    @boundary.setter
    def boundary(self, val):
        self._boundary = self._assert_is_choice(val, "boundary", BOUNDARIES)

    def require_eigenpairs(self, needed):
        """
        Check that ``k`` is at least ``needed``

        Raises
        ------
        ConfigError
            ``k`` is too small
        """
        if self.k < needed:
            raise ConfigError("k must be at least {} for this run, got {}".format(needed, self.k))

    def to_dict(self):
        """
        Settings of the ``[run]`` section as strings
        """
        return {
            "h": ", ".join(repr(v) for v in self.h),
            "k": str(self.k),
            "tol": repr(self.tol),
            "format": self.fmt,
            "out": self.out or "",
            "seed": str(self.seed),
            "jobs": str(self.jobs),
            "numeric_balls": "yes" if self.numeric_balls else "no",
            "boundary": self.boundary,
        }

    def __repr__(self):
        return "RunConfig(domains={}, {})".format(
            [label for label, _ in self.domains],
            ", ".join("{}={}".format(k, v) for k, v in self.to_dict().items()),
        )


_RUN_KEYS = {
    "h": "h",
    "k": "k",
    "tol": "tol",
    "format": "fmt",
    "out": "out",
    "seed": "seed",
    "jobs": "jobs",
    "numeric_balls": "numeric_balls",
    "boundary": "boundary",
}


def domain_to_section(domain):
    """
    Serialise a domain to the string mapping of a configuration section
    """
    out = {}
    for key, value in domain.to_dict().items():
        if key == "vertices":
            out[key] = format_vertices(value)
        elif key == "translation":
            out[key] = "{!r}, {!r}".format(*value)
        else:
            out[key] = value if isinstance(value, str) else repr(value)

    return out


def _domain_label(section):
    if section == _DOMAIN_PREFIX:
        return _DOMAIN_PREFIX

    prefix, _, label = section.partition(":")
    if prefix.strip() != _DOMAIN_PREFIX or not label.strip():
        return None

    return label.strip()


def parse_config(text, **overrides):
    """
    Parse the text of a configuration file

    Parameters
    ----------
    text : str
        INI document

    **overrides
        :class:`RunConfig` attributes taking precedence over the file (``None``
        values are ignored)

    Returns
    -------
    :obj:`RunConfig`

    Raises
    ------
    ConfigError
        The document cannot be parsed or holds invalid settings
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("invalid configuration file: {}".format(exc)) from exc

    kwargs = {}
    domains = []
    for section in parser.sections():
        if section == "run":
            for key, value in parser.items(section):
                if key not in _RUN_KEYS:
                    raise ConfigError("unknown key {!r} in [run]".format(key))
                kwargs[_RUN_KEYS[key]] = value
            continue

        label = _domain_label(section)
        if label is None:
            raise ConfigError("unknown section [{}]".format(section))

        domains.append((label, domain_from_dict(dict(parser.items(section)))))

    kwargs["domains"] = domains
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    logger.debug("configuration %s", kwargs)

    return RunConfig(**kwargs)


def read_config(path, **overrides):
    """
    Read a configuration file

    See :func:`parse_config` for the parameters.
    """
    try:
        with open(path, "r") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("cannot read {}: {}".format(path, exc)) from exc

    return parse_config(text, **overrides)


def format_config(config):
    """
    Render a :class:`RunConfig` as an INI document readable by :func:`parse_config`
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser["run"] = config.to_dict()
    for label, domain in config.domains:
        section = _DOMAIN_PREFIX if label == _DOMAIN_PREFIX else "{}:{}".format(
            _DOMAIN_PREFIX, label
        )
        parser[section] = domain_to_section(domain)

    lines = []
    for section in parser.sections():
        lines.append("[{}]".format(section))
        lines.extend("{} = {}".format(k, v) for k, v in parser.items(section))
        lines.append("")

    return "\n".join(lines)


def write_config(config, path):
    """
    Write a :class:`RunConfig` to ``path``
    """
    with open(path, "w") as fh:
        fh.write(format_config(config))
