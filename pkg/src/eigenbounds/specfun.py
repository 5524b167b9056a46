"""
Bessel functions of the first kind, their zeros and the eigenmodes of the ball

All evaluations are done from first principles:

- the ascending power series for small arguments
- Miller's backward recurrence, normalised with the Neumann series
  :math:`(x/2)^\\nu = \\sum_k (\\nu + 2k) \\Gamma(\\nu + k) / k! \\, J_{\\nu+2k}(x)`,
  for intermediate arguments
- Hankel's asymptotic expansion for large arguments
- the closed trigonometric forms for half-integer orders

Zeros are bracketed by a sign-change scan and refined with a safeguarded Newton
iteration (bisection whenever a Newton step leaves the bracket).
"""
import functools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .constants import (
    BESSEL_SERIES_LIMIT,
    MAX_BALL_DIMENSION,
    MAX_BESSEL_ARGUMENT,
    MAX_BESSEL_ORDER,
    MAX_ZERO_INDEX,
    ZERO_TOLERANCE,
)
from .errors import BesselRangeError, ConvergenceError, DomainError

logger = logging.getLogger(__name__)

_SCAN_STEP = 0.5
_START_VALUE = 1.0e-30
_RESCALE_LIMIT = 1.0e200


@dataclass(frozen=True)
class BesselEval:
    """
    Value and derivative of :math:`J_p` at one argument
    """

    order: float
    argument: float
    value: float
    derivative: float


@dataclass(frozen=True)
class BallModes:
    """
    First two Dirichlet eigenvalues of the ball of radius ``r`` in dimension ``n``

    ``lambda1 = (alpha / r) ** 2`` and ``lambda2 = (beta / r) ** 2`` where ``alpha``
    and ``beta`` are the first zeros of :math:`J_{n/2-1}` and :math:`J_{n/2}`. The
    second eigenvalue has multiplicity ``n``.
    """

    n: int
    r: float
    lambda1: float
    lambda2: float
    alpha: float
    beta: float


def _check_order(order, limit=MAX_BESSEL_ORDER):
    order = float(order)
    if not np.isfinite(order) or order < 0 or order > limit:
        raise BesselRangeError(
            "order must lie in [0, {}], got {}".format(limit, order)
        )

    return order


def _check_argument(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise BesselRangeError("arguments must be finite")

    if np.any(arr < 0) or np.any(arr > MAX_BESSEL_ARGUMENT):
        raise BesselRangeError(
            "arguments must lie in [0, {}]".format(MAX_BESSEL_ARGUMENT)
        )

    return arr


def _check_dimension(n):
    if int(n) != n or n < 2 or n > MAX_BALL_DIMENSION:
        raise BesselRangeError(
            "dimension must be an integer in [2, {}], got {}".format(
                MAX_BALL_DIMENSION, n
            )
        )

    return int(n)


def _check_radius(r):
    r = float(r)
    if not np.isfinite(r) or r <= 0:
        raise BesselRangeError("radius must be positive and finite, got {}".format(r))

    return r


def _is_half_integer(order):
    doubled = 2.0 * order
    return abs(doubled - round(doubled)) < 1e-12 and int(round(doubled)) % 2 == 1


def _hankel_threshold(order):
    return max(25.0, 0.5 * order * order + 25.0)


def _series(order, x):
    half = 0.5 * x
    half_sq = half * half
    term = np.power(half, order) / math.gamma(order + 1.0)
    total = term.copy()
    for m in range(1, 300):
        term = term * (-half_sq / (m * (m + order)))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break

    return total


def _neumann_coefficients(nu, count):
    coef = np.empty(count)
    coef[0] = math.gamma(nu + 1.0)
    for k in range(1, count):
        coef[k] = (nu + 2.0 * k) * math.exp(math.lgamma(nu + k) - math.lgamma(k + 1.0))

    return coef


def _miller(order, x):
    n = int(math.floor(order))
    nu = order - n
    top = max(float(n), float(np.max(x)))
    start = int(top + 40.0 + 12.0 * top ** (1.0 / 3.0))
    coef = _neumann_coefficients(nu, start // 2 + 1)

    f_next = np.zeros_like(x)
    f_now = np.full_like(x, _START_VALUE)
    total = np.zeros_like(x)
    saved = np.zeros_like(x)
    for m in range(start, 0, -1):
        if m % 2 == 0:
            total = total + coef[m // 2] * f_now
        if m == n:
            saved = f_now.copy()

        f_prev = (2.0 * (nu + m) / x) * f_now - f_next
        f_next, f_now = f_now, f_prev

        big = np.abs(f_now) > _RESCALE_LIMIT
        if np.any(big):
            scale = np.where(big, 1.0 / _RESCALE_LIMIT, 1.0)
            f_now = f_now * scale
            f_next = f_next * scale
            total = total * scale
            saved = saved * scale

    total = total + coef[0] * f_now
    if n == 0:
        saved = f_now

    return saved * np.power(0.5 * x, nu) / total


def _hankel(order, x):
    mu = 4.0 * order * order
    eight_x = 8.0 * x
    p_sum = np.ones_like(x)
    q_sum = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 200):
        new_term = term * (mu - (2 * k - 1) ** 2) / (k * eight_x)
        # the expansion is asymptotic: stop before the terms start growing
        active &= np.abs(new_term) < np.abs(term)
        contribution = np.where(active, new_term, 0.0)
        if k % 2:
            q_sum = q_sum + (-1) ** ((k - 1) // 2) * contribution
        else:
            p_sum = p_sum + (-1) ** (k // 2) * contribution

        term = np.where(active, new_term, term)
        active &= np.abs(new_term) > 1e-17
        if not np.any(active):
            break

    phase = (0.5 * order + 0.25) * np.pi
    cos_chi = np.cos(x) * math.cos(phase) + np.sin(x) * math.sin(phase)
    sin_chi = np.sin(x) * math.cos(phase) - np.cos(x) * math.sin(phase)

    return np.sqrt(2.0 / (np.pi * x)) * (p_sum * cos_chi - q_sum * sin_chi)


def _half_integer(order, x):
    steps = int(round(order - 0.5))
    scale = np.sqrt(2.0 / (np.pi * x))
    j_lower = scale * np.cos(x)
    j_now = scale * np.sin(x)
    nu = 0.5
    for _ in range(steps):
        j_lower, j_now = j_now, (2.0 * nu / x) * j_now - j_lower
        nu += 1.0

    return j_now


def _bessel_j(order, x):
    out = np.empty_like(x)
    remaining = np.ones(x.shape, dtype=bool)

    if _is_half_integer(order):
        fast = x >= max(1.0, 2.0 * order)
        if np.any(fast):
            out[fast] = _half_integer(round(2.0 * order) / 2.0, x[fast])
        remaining &= ~fast

    series = remaining & (x <= BESSEL_SERIES_LIMIT)
    hankel = remaining & (x >= _hankel_threshold(order))
    miller = remaining & ~series & ~hankel

    if np.any(series):
        out[series] = _series(order, x[series])
    if np.any(hankel):
        out[hankel] = _hankel(order, x[hankel])
    if np.any(miller):
        out[miller] = _miller(order, x[miller])

    return out


def _bessel_j_prime(order, x):
    out = np.empty_like(x)
    positive = x > 0
    if np.any(positive):
        xp = x[positive]
        out[positive] = order / xp * _bessel_j(order, xp) - _bessel_j(order + 1.0, xp)

    if not np.all(positive):
        if 0 < order < 1:
            raise BesselRangeError(
                "the derivative of J_p is unbounded at 0 for 0 < p < 1 (p={})".format(
                    order
                )
            )
        out[~positive] = 0.5 if order == 1 else 0.0

    return out


def _scaled_j(order, z):
    """
    :math:`z^{-p} J_p(z)`, continuous at ``z = 0``
    """
    out = np.empty_like(z)
    small = z < 1e-150
    out[small] = 1.0 / (2.0 ** order * math.gamma(order + 1.0))
    if np.any(~small):
        zz = z[~small]
        out[~small] = _bessel_j(order, zz) / np.power(zz, order)

    return out


def _wrap(values, arr):
    if arr.ndim == 0:
        return float(values[0])

    return values.reshape(arr.shape)


def bessel_j(order, x):
    """
    Bessel function of the first kind

    Parameters
    ----------
    order : float
        Order :math:`p`, ``0 <= p <= 50``

    x : float or array_like
        Argument(s), ``0 <= x <= 1e4``

    Returns
    -------
    float or :obj:`np.ndarray`
        :math:`J_p(x)`, absolute error below ``1e-12`` on the supported range

    Raises
    ------
    BesselRangeError
        ``order`` or ``x`` is outside the supported range
    """
    order = _check_order(order)
    arr = _check_argument(x)

    return _wrap(_bessel_j(order, np.atleast_1d(arr).ravel()), arr)


def bessel_j_prime(order, x):
    """
    Derivative of the Bessel function of the first kind

    Uses :math:`J_p'(x) = (p/x) J_p(x) - J_{p+1}(x)`. At ``x = 0`` the limit is
    returned (``1/2`` for ``p = 1``, ``0`` for ``p = 0`` and ``p > 1``).

    Parameters
    ----------
    order : float
        Order :math:`p`, ``0 <= p <= 50``

    x : float or array_like
        Argument(s), ``0 <= x <= 1e4``

    Returns
    -------
    float or :obj:`np.ndarray`
        :math:`J_p'(x)`

    Raises
    ------
    BesselRangeError
        ``order`` or ``x`` is outside the supported range, or ``x = 0`` with
        ``0 < p < 1`` where the derivative is unbounded
    """
    order = _check_order(order)
    arr = _check_argument(x)

    return _wrap(_bessel_j_prime(order, np.atleast_1d(arr).ravel()), arr)


def bessel_eval(order, x):
    """
    Evaluate :math:`J_p` and :math:`J_p'` together

    Parameters
    ----------
    order : float
        Order :math:`p`

    x : float
        Argument

    Returns
    -------
    :obj:`BesselEval`
    """
    return BesselEval(
        order=float(order),
        argument=float(x),
        value=bessel_j(order, x),
        derivative=bessel_j_prime(order, x),
    )


def _bessel_j_second(order, x, value, derivative):
    # from the Bessel equation x^2 J'' + x J' + (x^2 - p^2) J = 0
    return -derivative / x - (1.0 - order * order / (x * x)) * value


def _scalar(func, order, x):
    return float(func(order, np.array([x], dtype=float))[0])


def _j_root_function(order):
    def func(x):
        value = _scalar(_bessel_j, order, x)
        return value, _scalar(_bessel_j_prime, order, x)

    return func


def _jp_root_function(order):
    def func(x):
        value = _scalar(_bessel_j, order, x)
        derivative = _scalar(_bessel_j_prime, order, x)
        return derivative, _bessel_j_second(order, x, value, derivative)

    return func


def _neumann_root_function(order, n):
    # radial Neumann condition for |x|^{1-n/2} J_order(z |x|)
    shift = 1.0 - 0.5 * n

    def func(x):
        value = _scalar(_bessel_j, order, x)
        derivative = _scalar(_bessel_j_prime, order, x)
        second = _bessel_j_second(order, x, value, derivative)
        return (
            x * derivative + shift * value,
            (1.0 + shift) * derivative + x * second,
        )

    return func


def _mcmahon(order, k, prime=False):
    mu = 4.0 * order * order
    if prime:
        b = (k + 0.5 * order - 0.75) * np.pi
        return b - (mu + 3.0) / (8.0 * b) - 4.0 * (7.0 * mu ** 2 + 82.0 * mu - 9.0) / (
            3.0 * (8.0 * b) ** 3
        )

    b = (k + 0.5 * order - 0.25) * np.pi
    return b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (
        3.0 * (8.0 * b) ** 3
    )


def newton_bisection(func, lower, upper, guess=None, tol=ZERO_TOLERANCE, maxiter=100):
    """
    Find a root of ``func`` bracketed by ``lower`` and ``upper``

    Newton steps are taken while they stay inside the current bracket and shrink
    the bracket fast enough, otherwise the bracket is bisected.

    Parameters
    ----------
    func : callable
        ``func(x) -> (f, df)``

    lower, upper : float
        Bracket endpoints, ``func`` must change sign between them

    guess : float
        Starting point, ignored unless it lies strictly inside the bracket

    tol : float
        Relative step size at which to stop

    maxiter : int
        Iteration limit

    Returns
    -------
    float
        The root

    Raises
    ------
    ConvergenceError
        The endpoints do not bracket a root or the iteration limit was reached
    """
    f_lower = func(lower)[0]
    f_upper = func(upper)[0]
    if f_lower == 0:
        return lower
    if f_upper == 0:
        return upper
    if np.sign(f_lower) == np.sign(f_upper):
        raise ConvergenceError(
            "root is not bracketed", bracket=(lower, upper), values=(f_lower, f_upper)
        )

    if f_lower < 0:
        x_low, x_high = lower, upper
    else:
        x_low, x_high = upper, lower

    if guess is not None and min(lower, upper) < guess < max(lower, upper):
        x = guess
    else:
        x = 0.5 * (lower + upper)

    dx_old = abs(upper - lower)
    dx = dx_old
    f, df = func(x)
    for iteration in range(maxiter):
        if ((x - x_high) * df - f) * ((x - x_low) * df - f) >= 0 or abs(
            2.0 * f
        ) > abs(dx_old * df):
            dx_old = dx
            dx = 0.5 * (x_high - x_low)
            x = x_low + dx
        else:
            dx_old = dx
            dx = f / df
            x = x - dx

        if abs(dx) < tol * max(1.0, abs(x)):
            logger.debug("root %.16g after %d iterations", x, iteration + 1)
            return x

        f, df = func(x)
        if f == 0:
            return x
        if f < 0:
            x_low = x
        else:
            x_high = x

    raise ConvergenceError(
        "no convergence after {} iterations".format(maxiter),
        bracket=(min(x_low, x_high), max(x_low, x_high)),
        iterations=maxiter,
    )


def _scan_zeros(func, start, count, guesses):
    zeros = []
    x_low = start
    f_low = func(x_low)[0]
    limit = start + 4.0 * np.pi * (count + 10)
    while len(zeros) < count:
        x_high = x_low + _SCAN_STEP
        if x_high > limit:
            raise ConvergenceError(
                "only found {} of {} zeros below {}".format(len(zeros), count, limit),
                bracket=(start, limit),
            )

        f_high = func(x_high)[0]
        if f_high == 0:
            zeros.append(x_high)
        elif f_low * f_high < 0:
            guess = guesses(len(zeros) + 1) if guesses is not None else None
            zeros.append(newton_bisection(func, x_low, x_high, guess=guess))

        x_low, f_low = x_high, f_high

    return tuple(zeros)


@functools.lru_cache(maxsize=None)
def _zero_table(kind, order, dimension=2):
    count = MAX_ZERO_INDEX
    logger.debug("computing %d zeros of kind %s, order %s", count, kind, order)
    if kind == "j":
        return _scan_zeros(
            _j_root_function(order),
            max(order, 1e-3),
            count,
            lambda k: _mcmahon(order, k),
        )

    if kind == "jp":
        return _scan_zeros(
            _jp_root_function(order),
            order if order > 0 else 1e-3,
            count,
            lambda k: _mcmahon(order, k, prime=True),
        )

    if kind == "neumann":
        start = 1e-3 if order < 5 else 0.5 * order
        return _scan_zeros(_neumann_root_function(order, dimension), start, count, None)

    raise ValueError("unknown zero kind: {}".format(kind))


def _check_index(k):
    if int(k) != k or k < 1 or k > MAX_ZERO_INDEX:
        raise BesselRangeError(
            "zero index must be an integer in [1, {}], got {}".format(MAX_ZERO_INDEX, k)
        )

    return int(k)


def bessel_zero(order, k):
    """
    k-th positive zero :math:`j_{p,k}` of :math:`J_p`

    Parameters
    ----------
    order : float
        Order :math:`p`, ``0 <= p <= 50``

    k : int
        Index, ``1 <= k <= 20``

    Returns
    -------
    float
        :math:`j_{p,k}` with absolute error below ``1e-10``

    Raises
    ------
    BesselRangeError
        ``order`` or ``k`` is outside the supported range

    ConvergenceError
        Refinement failed, the bracket is included in the diagnostics
    """
    order = _check_order(order)
    k = _check_index(k)

    return _zero_table("j", order)[k - 1]


def bessel_prime_zero(order, k):
    """
    k-th positive zero :math:`j'_{p,k}` of :math:`J_p'`

    For ``p = 0`` the zero at the origin is not counted, so
    ``bessel_prime_zero(0, k) == bessel_zero(1, k)``.

    Parameters
    ----------
    order : float
        Order :math:`p`, ``0 <= p <= 50``

    k : int
        Index, ``1 <= k <= 20``

    Returns
    -------
    float
        :math:`j'_{p,k}` with absolute error below ``1e-10``

    Raises
    ------
    BesselRangeError
        ``order`` or ``k`` is outside the supported range

    ConvergenceError
        Refinement failed, the bracket is included in the diagnostics
    """
    order = _check_order(order)
    k = _check_index(k)

    return _zero_table("jp", order)[k - 1]


def ball_modes(n, r=1.0):
    """
    First two Dirichlet eigenvalues of the ``n``-ball of radius ``r``

    Parameters
    ----------
    n : int
        Dimension, ``2 <= n <= 50``

    r : float
        Radius

    Returns
    -------
    :obj:`BallModes`
    """
    n = _check_dimension(n)
    r = _check_radius(r)
    alpha = bessel_zero(0.5 * n - 1.0, 1)
    beta = bessel_zero(0.5 * n, 1)

    return BallModes(
        n=n,
        r=r,
        lambda1=(alpha / r) ** 2,
        lambda2=(beta / r) ** 2,
        alpha=alpha,
        beta=beta,
    )


def sphere_area(n):
    """
    Surface area of the unit sphere :math:`S^{n-1}` in :math:`\\mathbb{R}^n`
    """
    return 2.0 * np.pi ** (0.5 * n) / math.gamma(0.5 * n)


def ball_volume(n, r=1.0):
    """
    Volume of the ``n``-ball of radius ``r``
    """
    return np.pi ** (0.5 * n) / math.gamma(0.5 * n + 1.0) * r ** n


def _points(n, x):
    pts = np.asarray(x, dtype=float)
    if pts.shape[-1] != n:
        raise DomainError("points must have {} coordinates".format(n))

    return pts


def _radii_inside(n, r, pts):
    rho = np.sqrt(np.sum(pts * pts, axis=-1))
    if np.any(rho > r * (1.0 + 1e-12)):
        raise DomainError("points must lie in the closed ball of radius {}".format(r))

    return np.minimum(rho, r)


def ball_eigenfunction_u1(n, r, x):
    """
    First Dirichlet eigenfunction of the ball, :math:`c |x|^{1-n/2} J_{n/2-1}(\\alpha |x|/r)`

    The constant ``c`` makes the eigenfunction :math:`L^2`-normalised on the ball.

    Parameters
    ----------
    n : int
        Dimension

    r : float
        Radius

    x : array_like
        Point of shape ``(n,)`` or points of shape ``(m, n)``

    Returns
    -------
    float or :obj:`np.ndarray`

    Raises
    ------
    DomainError
        A point lies outside the closed ball
    """
    n = _check_dimension(n)
    r = _check_radius(r)
    pts = _points(n, x)
    rho = _radii_inside(n, r, pts)

    order = 0.5 * n - 1.0
    alpha = bessel_zero(order, 1)
    norm = sphere_area(n) * r * r * bessel_j(order + 1.0, alpha) ** 2 / 2.0
    c = 1.0 / math.sqrt(norm)

    z = np.atleast_1d(alpha * rho / r)
    values = c * (alpha / r) ** order * _scaled_j(order, z.ravel()).reshape(z.shape)

    return float(values[0]) if pts.ndim == 1 else values


def ball_eigenfunction_xi(n, r, i, x):
    """
    Basis function :math:`\\xi_i = |x|^{1-n/2} J_{n/2}(\\beta |x| / r) x_i / |x|` of the
    second eigenspace of the ball

    Parameters
    ----------
    n : int
        Dimension

    r : float
        Radius

    i : int
        Coordinate index, ``1 <= i <= n``

    x : array_like
        Point of shape ``(n,)`` or points of shape ``(m, n)``

    Returns
    -------
    float or :obj:`np.ndarray`

    Raises
    ------
    DomainError
        A point lies outside the closed ball or ``i`` is not a coordinate index
    """
    n = _check_dimension(n)
    r = _check_radius(r)
    if int(i) != i or not 1 <= i <= n:
        raise DomainError("i must be an integer in [1, {}]".format(n))

    pts = _points(n, x)
    rho = _radii_inside(n, r, pts)

    order = 0.5 * n
    beta = bessel_zero(order, 1)
    z = np.atleast_1d(beta * rho / r)
    radial = (beta / r) ** order * _scaled_j(order, z.ravel()).reshape(z.shape)
    values = np.atleast_2d(pts)[:, int(i) - 1] * radial

    return float(values[0]) if pts.ndim == 1 else values


def harmonic_multiplicity(n, degree):
    """
    Dimension of the space of spherical harmonics of ``degree`` in ``n`` variables
    """
    first = math.comb(n + degree - 1, degree)
    second = math.comb(n + degree - 3, degree - 2) if degree >= 2 else 0

    return first - second


def _ball_levels(n, r, k, zeros):
    levels = []
    degree = 0
    while True:
        order = degree + 0.5 * n - 1.0
        if order > MAX_BESSEL_ORDER:
            break

        added = False
        for m in range(1, MAX_ZERO_INDEX + 1):
            z = zeros(order, m, degree)
            if z is None:
                break
            if len(levels) >= k and z > levels[k - 1][0]:
                break

            levels.append((z, harmonic_multiplicity(n, degree)))
            levels.sort()
            added = True

        if not added:
            break
        degree += 1

    values = []
    for z, multiplicity in levels:
        values.extend([(z / r) ** 2] * multiplicity)

    return np.array(sorted(values)[:k])


def ball_dirichlet_eigenvalues(n, r, k):
    """
    First ``k`` Dirichlet eigenvalues of the ``n``-ball, repeated with multiplicity

    Parameters
    ----------
    n : int
        Dimension

    r : float
        Radius

    k : int
        Number of eigenvalues

    Returns
    -------
    :obj:`np.ndarray`
    """
    n = _check_dimension(n)
    r = _check_radius(r)

    def zeros(order, m, degree):
        return bessel_zero(order, m)

    return _ball_levels(n, r, int(k), zeros)


def ball_neumann_eigenvalues(n, r, k):
    """
    First ``k`` Neumann eigenvalues of the ``n``-ball, starting with :math:`\\mu_0 = 0`

    The positive eigenvalues are :math:`(z / r)^2` for the positive roots ``z`` of
    :math:`z J_\\nu'(z) + (1 - n/2) J_\\nu(z)`, :math:`\\nu = l + n/2 - 1`, each with
    the multiplicity of the spherical harmonics of degree ``l``.

    Parameters
    ----------
    n : int
        Dimension

    r : float
        Radius

    k : int
        Number of eigenvalues (including :math:`\\mu_0`)

    Returns
    -------
    :obj:`np.ndarray`
    """
    n = _check_dimension(n)
    r = _check_radius(r)
    k = int(k)
    if k < 1:
        return np.zeros(0)

    def zeros(order, m, degree):
        return _zero_table("neumann", order, n)[m - 1]

    positive = _ball_levels(n, r, k - 1, zeros) if k > 1 else np.zeros(0)

    return np.concatenate([[0.0], positive])


def ball_neumann_mu1(n, r=1.0):
    """
    First positive Neumann eigenvalue of the ``n``-ball

    For ``n = 2`` this is :math:`(j'_{1,1} / r)^2`.
    """
    return float(ball_neumann_eigenvalues(n, r, 2)[1])
