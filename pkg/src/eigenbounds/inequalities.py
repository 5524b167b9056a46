"""
Isoperimetric eigenvalue inequalities evaluated on computed or analytic spectra

Every checker returns an :class:`InequalityReport`. The margin is signed so that a
positive value means the inequality holds:
``(lhs - rhs) / |rhs|`` for lower bounds on ``lhs`` and ``(rhs - lhs) / |rhs|`` for
upper bounds. A report is satisfied when the margin is at least minus its
tolerance, which is three times the first-order propagation of the eigenvalue
error estimates into the margin (with a floor of ``1e-10``).

Conjectured inequalities are evaluated like the proven ones but a violation marks
the report as a counterexample candidate instead of a failure.
"""
import logging
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

from .constants import (
    DEGENERACY_TOLERANCE,
    INFINITE_SENTINEL,
    MARGIN_TOLERANCE_FACTOR,
    MIN_MARGIN_TOLERANCE,
    PPW_2D_CONSTANTS,
)
from .errors import (
    CoefficientError,
    DegenerateSpectrumError,
    InsufficientEigenvaluesError,
    ValidationError,
)
from .geometry import equal_volume_ball
from .specfun import ball_modes, ball_neumann_mu1, ball_volume, bessel_zero

logger = logging.getLogger(__name__)

REPORT_COLUMNS = (
    "id",
    "shape",
    "n",
    "h_min",
    "lhs",
    "rhs",
    "margin",
    "satisfied",
    "citation",
)
"""tuple : leading columns of report tables, in order"""

REPORT_EXTRA_COLUMNS = (
    "tolerance",
    "proven",
    "equality",
    "degenerate",
    "counterexample_candidate",
)
"""tuple : report table columns following :data:`REPORT_COLUMNS`"""

_LOWER = "lower"  # lhs >= rhs
_UPPER = "upper"  # lhs <= rhs


@dataclass(frozen=True)
class InequalityReport:  # pylint: disable=too-many-instance-attributes
    """
    One inequality evaluated on one spectrum
    """

    id: str  # pylint: disable=invalid-name
    shape: str
    n: int  # pylint: disable=invalid-name
    h_min: float
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    citation: str
    tolerance: float
    proven: bool
    equality: bool
    degenerate: bool = False
    counterexample_candidate: bool = False
    domain: dict = field(default=None, compare=False)

    @property
    def violated(self):
        """
        bool
            A proven inequality fails beyond tolerance
        """
        return self.proven and not self.satisfied

    def to_dict(self):
        """
        Record for serialisation
        """
        return asdict(self)


def ball_ratio(n):
    """
    :math:`(j_{n/2,1} / j_{n/2-1,1})^2`, the ratio :math:`\\lambda_2 / \\lambda_1` of the
    ``n``-ball
    """
    modes = ball_modes(n, 1.0)
    return (modes.beta / modes.alpha) ** 2


def _values(spectrum, needed, name):
    values = np.asarray(spectrum.eigenvalues, dtype=float)
    if len(values) < needed:
        raise InsufficientEigenvaluesError(
            "{} needs {} eigenvalues, got {}".format(name, needed, len(values))
        )

    return values


def _dimension(spectrum, n):
    if n is not None:
        if int(n) != n or n < 2:
            raise ValidationError("n must be an integer >= 2, got {}".format(n))
        return int(n)

    domain = getattr(spectrum, "domain", None)
    return domain.dim if domain is not None else 2


def _gap(values, k):
    gap = values[k] - values[0]
    if gap <= DEGENERACY_TOLERANCE * abs(values[0]):
        return None

    return gap


def reciprocal_gap_sum(eigenvalues, last):
    """
    :math:`\\sum_{k=2}^{last} 1 / (\\lambda_k - \\lambda_1)`

    Parameters
    ----------
    eigenvalues : array_like
        :math:`\\lambda_1, \\lambda_2, \\ldots`

    last : int
        Index (one-based) of the last eigenvalue in the sum

    Returns
    -------
    float, bool
        The sum and whether a gap vanished, in which case the sum is the finite
        stand-in :data:`INFINITE_SENTINEL`
    """
    total = 0.0
    for k in range(1, last):
        gap = _gap(eigenvalues, k)
        if gap is None:
            return INFINITE_SENTINEL, True
        total += 1.0 / gap

    return total, False


def gap_sum(eigenvalues, last):
    """
    :math:`\\sum_{k=2}^{last} \\lambda_1 / (\\lambda_k - \\lambda_1)`

    Returns
    -------
    float, bool
        The sum and whether a gap vanished (see :func:`reciprocal_gap_sum`)
    """
    total = 0.0
    for k in range(1, last):
        gap = _gap(eigenvalues, k)
        if gap is None:
            return INFINITE_SENTINEL, True
        total += eigenvalues[0] / gap

    return total, False


def _margin(lhs, rhs, direction):
    if direction == _LOWER:
        return (lhs - rhs) / abs(rhs)

    return (rhs - lhs) / abs(rhs)


def _propagated_error(evaluate, values, errors, direction):
    spread = 0.0
    for i in np.nonzero(errors > 0)[0]:
        step = 1e-6 * max(abs(values[i]), 1e-12)
        up = values.copy()
        down = values.copy()
        up[i] += step
        down[i] -= step
        lhs_up, rhs_up, degenerate_up = evaluate(up)
        lhs_down, rhs_down, degenerate_down = evaluate(down)
        if degenerate_up or degenerate_down:
            continue

        slope = (
            _margin(lhs_up, rhs_up, direction) - _margin(lhs_down, rhs_down, direction)
        ) / (2.0 * step)
        spread += abs(slope) * errors[i]

    return spread


def _report(  # pylint: disable=too-many-arguments
    ident,
    direction,
    evaluate,
    spectrum,
    n,
    citation,
    proven=True,
    domain=None,
):
    values = np.asarray(spectrum.eigenvalues, dtype=float)
    errors = np.asarray(
        getattr(spectrum, "error_estimates", np.zeros_like(values)), dtype=float
    )
    lhs, rhs, degenerate = evaluate(values)
    margin = _margin(lhs, rhs, direction)
    tolerance = max(
        MARGIN_TOLERANCE_FACTOR * _propagated_error(evaluate, values, errors, direction),
        MIN_MARGIN_TOLERANCE,
    )
    satisfied = bool(margin >= -tolerance)

    if domain is None:
        domain = getattr(spectrum, "domain", None)

    report = InequalityReport(
        id=ident,
        shape=domain.shape if domain is not None else "",
        n=n,
        h_min=getattr(spectrum, "h_min", None),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float(margin),
        satisfied=satisfied,
        citation=citation,
        tolerance=float(tolerance),
        proven=proven,
        equality=bool(abs(margin) <= tolerance),
        degenerate=bool(degenerate),
        counterexample_candidate=bool(not proven and not satisfied),
        domain=domain.to_dict() if domain is not None else None,
    )
    if report.violated:
        logger.warning("%s violated: margin %s, tolerance %s", ident, margin, tolerance)
    elif report.counterexample_candidate:
        logger.warning("%s is a counterexample candidate: margin %s", ident, margin)

    return report


def faber_krahn(domain, spectrum):
    """
    :math:`\\lambda_1(\\Omega) \\geq (|B^n| / |\\Omega|)^{2/n} j_{n/2-1,1}^2`

    Parameters
    ----------
    domain : :obj:`Domain`

    spectrum : :obj:`EigenvalueSet`
        Dirichlet spectrum of ``domain``

    Returns
    -------
    :obj:`InequalityReport`
    """
    n = domain.dim
    _values(spectrum, 1, "faber_krahn")
    alpha = bessel_zero(0.5 * n - 1.0, 1)
    scale = (ball_volume(n, 1.0) / domain.volume) ** (2.0 / n)

    def evaluate(values):
        return values[0], scale * alpha ** 2, False

    return _report(
        "faber_krahn",
        _LOWER,
        evaluate,
        spectrum,
        n,
        "lambda1 >= (|B^n|/|Omega|)^(2/n) j_{n/2-1,1}^2 (Faber-Krahn)",
        domain=domain,
    )


def ppw_ratio(spectrum, n=None):
    """
    :math:`\\lambda_2 / \\lambda_1 \\leq (j_{n/2,1} / j_{n/2-1,1})^2`
    """
    n = _dimension(spectrum, n)
    _values(spectrum, 2, "ppw_ratio")
    bound = ball_ratio(n)

    def evaluate(values):
        return values[1] / values[0], bound, False

    return _report(
        "ppw_ratio",
        _UPPER,
        evaluate,
        spectrum,
        n,
        "lambda2/lambda1 <= (j_{n/2,1}/j_{n/2-1,1})^2 (Payne-Polya-Weinberger, "
        "proved by Ashbaugh-Benguria)",
    )


def _upper_sum(values, n):
    return float(np.sum(values[1 : n + 1])) / values[0]


def ppw_sum(spectrum, n=None):
    """
    :math:`(\\lambda_2 + \\cdots + \\lambda_{n+1}) / \\lambda_1 \\leq n \\lambda_2(B^n) / \\lambda_1(B^n)`
    """
    n = _dimension(spectrum, n)
    _values(spectrum, n + 1, "ppw_sum")
    bound = n * ball_ratio(n)

    def evaluate(values):
        return _upper_sum(values, n), bound, False

    return _report(
        "ppw_sum",
        _UPPER,
        evaluate,
        spectrum,
        n,
        "(lambda2+...+lambda_{n+1})/lambda1 <= n lambda2(B^n)/lambda1(B^n) "
        "(Ashbaugh-Benguria)",
    )


def bounds_2d(spectrum):
    """
    Historical planar bounds on :math:`(\\lambda_2 + \\lambda_3) / \\lambda_1`

    Returns
    -------
    list of :obj:`InequalityReport`
        One report per constant in :data:`eigenbounds.constants.PPW_2D_CONSTANTS`
    """
    _values(spectrum, 3, "bounds_2d")
    out = []
    for ident, constant, citation in PPW_2D_CONSTANTS:

        def evaluate(values, constant=constant):
            return _upper_sum(values, 2), constant, False

        out.append(_report(ident, _UPPER, evaluate, spectrum, 2, citation))

    return out


def thompson(spectrum, n=None):
    """
    :math:`(\\lambda_2 + \\cdots + \\lambda_{n+1}) / \\lambda_1 \\leq n + 4`

    The sum excludes :math:`\\lambda_1`: with it the bound fails on the disk.
    """
    n = _dimension(spectrum, n)
    _values(spectrum, n + 1, "thompson")

    def evaluate(values):
        return _upper_sum(values, n), float(n + 4), False

    return _report(
        "thompson",
        _UPPER,
        evaluate,
        spectrum,
        n,
        "(lambda2+...+lambda_{n+1})/lambda1 <= n+4 (Thompson; read without lambda1 "
        "in the sum, the only reading the ball satisfies)",
    )


def ab_harmonic(spectrum, n=None):
    """
    :math:`\\sum_{k=2}^{n+1} 1/(\\lambda_k - \\lambda_1) \\geq (2 j_{n/2-1,1}^2 + n(n-4)) / (6 \\lambda_1)`
    """
    n = _dimension(spectrum, n)
    _values(spectrum, n + 1, "ab_harmonic")
    alpha = bessel_zero(0.5 * n - 1.0, 1)
    numerator = 2.0 * alpha ** 2 + n * (n - 4)

    def evaluate(values):
        lhs, degenerate = reciprocal_gap_sum(values, n + 1)
        return lhs, numerator / (6.0 * values[0]), degenerate

    return _report(
        "ab_harmonic",
        _LOWER,
        evaluate,
        spectrum,
        n,
        "sum_{k=2}^{n+1} 1/(lambda_k-lambda1) >= (2 j_{n/2-1,1}^2 + n(n-4))/(6 lambda1) "
        "(Ashbaugh-Benguria)",
    )


def gap_sum_constant(n):
    """
    :math:`(n - 1) / ((j_{n/2,1} / j_{n/2-1,1})^2 - 1)`
    """
    return (n - 1) / (ball_ratio(n) - 1.0)


def gap_sum_bound(spectrum, n=None):
    """
    :math:`\\sum_{k=2}^{n} \\lambda_1 / (\\lambda_k - \\lambda_1) \\geq (n - 1) / ((j_{n/2,1}/j_{n/2-1,1})^2 - 1)`

    Equality holds exactly for balls.

    Parameters
    ----------
    spectrum : :obj:`EigenvalueSet`
        Dirichlet spectrum with at least ``n`` eigenvalues

    n : int
        Dimension, defaults to the dimension of the spectrum's domain

    Returns
    -------
    :obj:`InequalityReport`
    """
    n = _dimension(spectrum, n)
    _values(spectrum, n, "gap_sum_bound")
    bound = gap_sum_constant(n)

    def evaluate(values):
        lhs, degenerate = gap_sum(values, n)
        return lhs, bound, degenerate

    return _report(
        "gap_sum_bound",
        _LOWER,
        evaluate,
        spectrum,
        n,
        "sum_{k=2}^{n} lambda1/(lambda_k-lambda1) >= (n-1)/((j_{n/2,1}/j_{n/2-1,1})^2-1)",
    )


def gap_sum_conjecture(spectrum, n=None):
    """
    :math:`\\sum_{k=2}^{n+1} \\lambda_1 / (\\lambda_k - \\lambda_1) \\geq n / ((j_{n/2,1}/j_{n/2-1,1})^2 - 1)`

    Conjectured, so a violation is reported as a counterexample candidate.
    """
    n = _dimension(spectrum, n)
    _values(spectrum, n + 1, "gap_sum_conjecture")
    bound = n / (ball_ratio(n) - 1.0)

    def evaluate(values):
        lhs, degenerate = gap_sum(values, n + 1)
        return lhs, bound, degenerate

    return _report(
        "gap_sum_conjecture",
        _LOWER,
        evaluate,
        spectrum,
        n,
        "sum_{k=2}^{n+1} lambda1/(lambda_k-lambda1) >= n/((j_{n/2,1}/j_{n/2-1,1})^2-1) "
        "(Ashbaugh-Benguria conjecture)",
        proven=False,
    )


def _neumann_mu1(values):
    if len(values) < 2 or values[1] <= DEGENERACY_TOLERANCE * max(abs(values[-1]), 1.0):
        raise DegenerateSpectrumError(
            "first positive Neumann eigenvalue is not positive",
            eigenvalues=np.asarray(values).tolist(),
        )

    return values[1]


def szego_weinberger(domain, neumann_spectrum):
    """
    :math:`\\mu_1(\\Omega) |\\Omega|^{2/n} \\leq \\mu_1(B^n) |B^n|^{2/n}`

    Parameters
    ----------
    domain : :obj:`Domain`

    neumann_spectrum : :obj:`EigenvalueSet`
        Neumann spectrum of ``domain`` starting with :math:`\\mu_0 = 0`

    Returns
    -------
    :obj:`InequalityReport`

    Raises
    ------
    DegenerateSpectrumError
        :math:`\\mu_1` is not positive
    """
    n = domain.dim
    values = _values(neumann_spectrum, 2, "szego_weinberger")
    _neumann_mu1(values)
    bound = ball_neumann_mu1(n, 1.0) * ball_volume(n, 1.0) ** (2.0 / n)
    scale = domain.volume ** (2.0 / n)

    def evaluate(values):
        return values[1] * scale, bound, False

    return _report(
        "szego_weinberger",
        _UPPER,
        evaluate,
        neumann_spectrum,
        n,
        "mu1 |Omega|^(2/n) <= mu1(B^n) |B^n|^(2/n) (Szego-Weinberger)",
        domain=domain,
    )


def neumann_recip(domain, neumann_spectrum, which="partial"):
    """
    Reciprocal sums of Neumann eigenvalues against the equal-volume ball

    ``which="full"`` checks the conjectured
    :math:`\\sum_{i=1}^{n} 1/\\mu_i \\geq n / \\mu_1(B_\\Omega)`, ``which="partial"``
    the proven :math:`\\sum_{i=1}^{n-1} 1/\\mu_i \\geq (n-1) / \\mu_1(B_\\Omega)`.

    Parameters
    ----------
    domain : :obj:`Domain`

    neumann_spectrum : :obj:`EigenvalueSet`
        Neumann spectrum starting with :math:`\\mu_0 = 0`

    which : str
        ``"full"`` or ``"partial"``

    Returns
    -------
    :obj:`InequalityReport`
    """
    if which not in ("full", "partial"):
        raise ValidationError("which must be 'full' or 'partial', got {!r}".format(which))

    n = domain.dim
    count = n if which == "full" else n - 1
    values = _values(neumann_spectrum, count + 1, "neumann_recip")
    _neumann_mu1(values)
    ball = equal_volume_ball(domain)
    bound = count / ball_neumann_mu1(n, ball.radius)

    def evaluate(values):
        return float(np.sum(1.0 / values[1 : count + 1])), bound, False

    if which == "full":
        ident = "neumann_recip_full"
        citation = (
            "sum_{i=1}^{n} 1/mu_i >= n/mu1(B_Omega) (Ashbaugh-Benguria conjecture)"
        )
    else:
        ident = "neumann_recip_partial"
        citation = "sum_{i=1}^{n-1} 1/mu_i >= (n-1)/mu1(B_Omega)"

    return _report(
        ident,
        _LOWER,
        evaluate,
        neumann_spectrum,
        n,
        citation,
        proven=which == "partial",
        domain=domain,
    )


def elliptic_bound(n, a, A, c, C):  # pylint: disable=invalid-name
    """
    Lower bound :math:`(n-1) a c / (A C ((j_{n/2,1}/j_{n/2-1,1})^2 - 1))` on the gap
    sum of a weighted problem with :math:`a \\leq a(x) \\leq A`,
    :math:`c \\leq r(x) \\leq C` and :math:`q \\geq 0`

    Raises
    ------
    CoefficientError
        The bounds are not ordered ``0 < a <= A`` and ``0 < c <= C``
    """
    if not (0 < a <= A and 0 < c <= C):
        raise CoefficientError(
            "bounds must satisfy 0 < a <= A and 0 < c <= C, got a={}, A={}, c={}, "
            "C={}".format(a, A, c, C)
        )

    return (n - 1) * a * c / (A * C * (ball_ratio(n) - 1.0))


def elliptic_gap_sum(spectrum, n, a, A, c, C):  # pylint: disable=invalid-name,too-many-arguments
    """
    :math:`\\sum_{k=2}^{n} \\lambda_1 / (\\lambda_k - \\lambda_1)` against
    :func:`elliptic_bound` for a weighted spectrum

    With ``a = A = c = C = 1`` this is :func:`gap_sum_bound` exactly.
    """
    n = _dimension(spectrum, n)
    _values(spectrum, n, "elliptic_gap_sum")
    bound = elliptic_bound(n, a, A, c, C)

    def evaluate(values):
        lhs, degenerate = gap_sum(values, n)
        return lhs, bound, degenerate

    return _report(
        "elliptic_gap_sum",
        _LOWER,
        evaluate,
        spectrum,
        n,
        "sum_{k=2}^{n} lambda1/(lambda_k-lambda1) >= (n-1)ac/(AC((j_{n/2,1}/j_{n/2-1,1})^2-1)) "
        "for a <= a(x) <= A, c <= r(x) <= C, q >= 0",
    )


def constant_table(n_values=range(2, 13)):
    """
    Constants of the ball inequalities per dimension

    Returns
    -------
    :obj:`pd.DataFrame`
        Columns ``n``, ``alpha``, ``beta``, ``ppw_ratio``, ``ppw_sum``,
        ``gap_sum_bound``, ``gap_sum_conjecture`` and ``ab_harmonic`` (the harmonic
        bound multiplied by :math:`\\lambda_1`, comparable with the gap sums)
    """
    rows = []
    for n in n_values:
        modes = ball_modes(n, 1.0)
        ratio = (modes.beta / modes.alpha) ** 2
        rows.append(
            {
                "n": int(n),
                "alpha": modes.alpha,
                "beta": modes.beta,
                "ppw_ratio": ratio,
                "ppw_sum": n * ratio,
                "gap_sum_bound": (n - 1) / (ratio - 1.0),
                "gap_sum_conjecture": n / (ratio - 1.0),
                "ab_harmonic": (2.0 * modes.alpha ** 2 + n * (n - 4)) / 6.0,
            }
        )

    return pd.DataFrame(rows)


def run_battery(domain, dirichlet, neumann=None, n=None):
    """
    Every applicable inequality for one domain

    Parameters
    ----------
    domain : :obj:`Domain`

    dirichlet : :obj:`EigenvalueSet`
        Dirichlet spectrum with at least ``n + 1`` eigenvalues

    neumann : :obj:`EigenvalueSet`
        Neumann spectrum with at least ``n + 1`` eigenvalues (optional)

    n : int
        Dimension, defaults to ``domain.dim``

    Returns
    -------
    list of :obj:`InequalityReport`
    """
    n = domain.dim if n is None else n
    _values(dirichlet, n + 1, "run_battery")

    reports = [
        faber_krahn(domain, dirichlet),
        ppw_ratio(dirichlet, n),
        ppw_sum(dirichlet, n),
    ]
    if n == 2:
        reports.extend(bounds_2d(dirichlet))
    reports.extend(
        [
            thompson(dirichlet, n),
            ab_harmonic(dirichlet, n),
            gap_sum_bound(dirichlet, n),
            gap_sum_conjecture(dirichlet, n),
        ]
    )

    if neumann is not None:
        reports.extend(
            [
                szego_weinberger(domain, neumann),
                neumann_recip(domain, neumann, "full"),
                neumann_recip(domain, neumann, "partial"),
            ]
        )

    return reports


def reports_to_frame(reports):
    """
    Tabulate reports

    Returns
    -------
    :obj:`pd.DataFrame`
        One row per report, columns :data:`REPORT_COLUMNS` first, then tolerance,
        proven, equality, degenerate and counterexample_candidate
    """
    records = []
    for report in reports:
        record = report.to_dict()
        record.pop("domain")
        records.append(record)

    frame = pd.DataFrame.from_records(
        records, columns=list(REPORT_COLUMNS) + list(REPORT_EXTRA_COLUMNS)
    )

    return frame


def min_margin(reports, ident):
    """
    Report with the smallest margin among those with identifier ``ident``
    """
    selected = [r for r in reports if r.id == ident]
    if not selected:
        return None

    return min(selected, key=lambda r: r.margin)
