"""
eigenbounds, numerical verification of isoperimetric inequalities for the eigenvalues
of the Dirichlet Laplacian, including a gap-sum lower bound with equality on balls.

See README and docs for more info.
"""

from ._version import __version__  # noqa
from .eigensolver import analytic_spectrum, extrapolate, solve  # noqa
from .geometry import (  # noqa
    Annulus,
    Ball,
    Ellipse,
    LShape,
    Polygon,
    Rectangle,
    Stadium,
    build_grid,
)
from .inequalities import gap_sum_bound, gap_sum_conjecture, run_battery  # noqa
from .proofcheck import replay_ball, replay_gap_bound  # noqa
