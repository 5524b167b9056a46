"""
Numerical replay of the trial-function proof of the gap-sum bound

The replay follows the proof step by step on a computed spectrum:

#. build the radial profile ``w`` (a quotient of Bessel functions continued by a
   constant beyond ``t = 1``), ``B = w'^2 + (n - 1) (w / t)^2`` and ``g(t) = w(gamma t)``
#. move the origin so that the ``g``-weighted first moments of :math:`u_1^2` vanish
#. rotate the axes with a QR factorisation so that the trial functions
   :math:`\\phi_k = g(|x|) x_k / |x|` are orthogonal to the right eigenfunctions
#. compare each gap :math:`\\lambda_{k+1} - \\lambda_1` with the Rayleigh quotient of
   :math:`\\phi_k`
#. sum, regroup and bound as in the proof, checking every intermediate inequality
   and the radial quotient bound :math:`\\int B u_1^2 / \\int w^2 u_1^2 \\leq \\beta^2 - \\alpha^2`

All integrals are midpoint sums over the grid nodes, consistent with the discrete
normalisation of the eigenvectors.
"""
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.integrate

from .constants import (
    CENTER_MAX_ITERATIONS,
    CENTER_TOLERANCE,
    DEFAULT_SEED,
    DEFAULT_SOLVER_TOLERANCE,
    ROTATION_TOLERANCE,
)
from .errors import ConvergenceError, ValidationError
from .eigensolver import OperatorKind, analytic_spectrum, solve
from .geometry import Ball
from .inequalities import (
    elliptic_bound,
    elliptic_gap_sum,
    gap_sum,
    gap_sum_bound,
    gap_sum_constant,
)
from .specfun import (
    _scaled_j,
    ball_eigenfunction_u1,
    ball_modes,
    bessel_j_prime,
    sphere_area,
)

logger = logging.getLogger(__name__)

# pylint: disable=invalid-name

_NEAR_ONE = 2.0e-4
_STEP_SLACK = 5.0


class ProofFunctions:
    """
    Radial profile functions of the proof

    Parameters
    ----------
    n : int
        Dimension, at least two

    lambda1 : float
        First eigenvalue of the domain, fixes :math:`\\gamma = \\sqrt{\\lambda_1} / \\alpha`

    gamma : float
        Override for :math:`\\gamma` (the weighted problem uses
        :math:`\\sqrt{C \\lambda_1 / a} / \\alpha`)
    """

    def __init__(self, n, lambda1, gamma=None):
        if int(n) != n or n < 2:
            raise ValidationError("n must be an integer >= 2, got {}".format(n))
        if not lambda1 > 0:
            raise ValidationError("lambda1 must be positive, got {}".format(lambda1))

        modes = ball_modes(int(n), 1.0)
        self._n = int(n)
        self._lambda1 = float(lambda1)
        self._alpha = modes.alpha
        self._beta = modes.beta
        self._gamma = math.sqrt(lambda1) / self._alpha if gamma is None else float(gamma)

        p = 0.5 * self._n - 1.0
        q = 0.5 * self._n
        self._p, self._q = p, q
        self._scale = self._beta ** q / self._alpha ** p
        self._w1 = (
            self._beta
            * bessel_j_prime(q, self._beta)
            / (self._alpha * bessel_j_prime(p, self._alpha))
        )
        self._cn = (2.0 + q * q - self._beta ** 2) / 6.0
        self._cd = (2.0 + p * p - self._alpha ** 2) / 6.0

    @property
    def n(self):
        """
        int
            Dimension
        """
        return self._n

    @property
    def lambda1(self):
        """
        float
        """
        return self._lambda1

    @property
    def alpha(self):
        """
        float
            :math:`j_{n/2-1,1}`
        """
        return self._alpha

    @property
    def beta(self):
        """
        float
            :math:`j_{n/2,1}`
        """
        return self._beta

    @property
    def gamma(self):
        """
        float
            Scale of ``g(t) = w(gamma t)``
        """
        return self._gamma

    @property
    def w1(self):
        """
        float
            :math:`w(1)`, the constant continuation value
        """
        return self._w1

    @property
    def dw0(self):
        """
        float
            :math:`w'(0) = \\lim_{t \\to 0} w(t) / t`
        """
        return self._scale / (2.0 * self._q)

    def _split(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValidationError("t must be non-negative")

        flat = np.atleast_1d(t).ravel()
        near = np.abs(flat - 1.0) < _NEAR_ONE
        inner = (flat < 1.0) & ~near
        outer = (flat >= 1.0) & ~near

        return t, flat, inner, near, outer

    @staticmethod
    def _wrap(t, out):
        if t.ndim == 0:
            return float(out[0])

        return out.reshape(t.shape)

    def _ratio(self, t):
        # w(t) / t = scale * S_q(beta t) / S_p(alpha t) with S_v(z) = z^-v J_v(z)
        return (
            self._scale * _scaled_j(self._q, self._beta * t) / _scaled_j(self._p, self._alpha * t)
        )

    def _ratio_prime(self, t):
        # S_v'(z) = -z S_{v+1}(z)
        zb = self._beta * t
        za = self._alpha * t
        num = _scaled_j(self._q, zb)
        den = _scaled_j(self._p, za)
        dnum = -self._beta * zb * _scaled_j(self._q + 1.0, zb)
        dden = -self._alpha * za * _scaled_j(self._p + 1.0, za)

        return self._scale * (dnum * den - num * dden) / (den * den)

    def _near_one(self, s):
        num = 1.0 - 0.5 * s + self._cn * s * s
        den = 1.0 - 0.5 * s + self._cd * s * s
        dnum = -0.5 + 2.0 * self._cn * s
        dden = -0.5 + 2.0 * self._cd * s

        return self._w1 * num / den, self._w1 * (dnum * den - num * dden) / (den * den)

    def w(self, t):
        """
        :math:`w(t) = J_{n/2}(\\beta t) / J_{n/2-1}(\\alpha t)` on ``[0, 1)``, ``w(1)`` beyond
        """
        t, flat, inner, near, outer = self._split(t)
        out = np.empty_like(flat)
        out[inner] = flat[inner] * self._ratio(flat[inner])
        out[near] = self._near_one(flat[near] - 1.0)[0]
        out[outer] = self._w1
        # the expansion is only used on the left of one
        out[near & (flat >= 1.0)] = self._w1

        return self._wrap(t, out)

    def dw(self, t):
        """
        :math:`w'(t)`, the left derivative on ``[0, 1)`` and zero for ``t >= 1``
        """
        t, flat, inner, near, outer = self._split(t)
        out = np.empty_like(flat)
        ti = flat[inner]
        out[inner] = self._ratio(ti) + ti * self._ratio_prime(ti)
        out[near] = self._near_one(flat[near] - 1.0)[1]
        out[outer] = 0.0
        out[near & (flat >= 1.0)] = 0.0

        return self._wrap(t, out)

    def w_over_t(self, t):
        """
        :math:`w(t) / t`, continuous at zero with value :math:`w'(0)`
        """
        t, flat, inner, near, outer = self._split(t)
        out = np.empty_like(flat)
        out[inner] = self._ratio(flat[inner])
        left = near & (flat < 1.0)
        out[left] = self._near_one(flat[left] - 1.0)[0] / flat[left]
        rest = outer | (near & (flat >= 1.0))
        out[rest] = self._w1 / flat[rest]

        return self._wrap(t, out)

    def B(self, t):
        """
        :math:`B(t) = w'(t)^2 + (n - 1) (w(t) / t)^2`
        """
        return self.dw(t) ** 2 + (self._n - 1) * self.w_over_t(t) ** 2

    def g(self, t):
        """
        :math:`g(t) = w(\\gamma t)`
        """
        return self.w(self._gamma * np.asarray(t, dtype=float))

    def dg(self, t):
        """
        :math:`g'(t) = \\gamma w'(\\gamma t)`
        """
        return self._gamma * self.dw(self._gamma * np.asarray(t, dtype=float))

    def g_over_t(self, t):
        """
        :math:`g(t) / t = \\gamma (w / t)(\\gamma t)`
        """
        return self._gamma * self.w_over_t(self._gamma * np.asarray(t, dtype=float))


def make_proof_functions(n, lambda1, gamma=None):
    """
    Build the radial profile functions for dimension ``n`` and first eigenvalue
    ``lambda1``

    Returns
    -------
    :obj:`ProofFunctions`
    """
    return ProofFunctions(n, lambda1, gamma=gamma)


def check_w_bound(pf, samples=1000, t_max=3.0):
    """
    Largest sampled value of :math:`w'(t)^2 - (w(t)/t)^2` on ``(0, t_max]``

    The bound :math:`w'^2 \\leq (w/t)^2` holds when the result is at most ``1e-10``.

    Parameters
    ----------
    pf : :obj:`ProofFunctions`

    samples : int
        Number of equally spaced samples, at least 100

    t_max : float
        Upper end of the sampled interval

    Returns
    -------
    float
    """
    if samples < 100:
        raise ValidationError("samples must be at least 100, got {}".format(samples))

    t = np.linspace(0.0, t_max, int(samples) + 1)[1:]

    return float(np.max(pf.dw(t) ** 2 - pf.w_over_t(t) ** 2))


def _quadrature_weights(grid, mass=None):
    weights = grid.h ** 2 * np.asarray(grid.weights, dtype=float)
    if mass is not None:
        weights = weights * np.asarray(mass, dtype=float)

    return weights


def _offsets(grid, center, rotation=None):
    d = grid.points - np.asarray(center, dtype=float)
    if rotation is not None:
        d = d @ np.asarray(rotation, dtype=float).T
    rho = np.sqrt(np.sum(d * d, axis=1))

    return d, rho


def center_moments(grid, u1, pf, center, mass=None):
    """
    Moment vector :math:`F_i(y) = \\int \\langle x - y, e_i \\rangle g(|x - y|) / |x - y| \\, u_1^2`
    and its normalisation :math:`\\int g(|x - y|) u_1^2`

    ``mass`` multiplies the integrand (the weight ``r`` of the weighted problem).

    Returns
    -------
    :obj:`np.ndarray`, float
    """
    dens = _quadrature_weights(grid, mass) * np.asarray(u1) ** 2
    d, rho = _offsets(grid, center)
    moments = np.sum(d * (pf.g_over_t(rho) * dens)[:, np.newaxis], axis=0)
    normalisation = float(np.sum(pf.g(rho) * dens))

    return moments, normalisation


def find_center(  # pylint: disable=too-many-arguments
    grid,
    u1,
    pf,
    mass=None,
    max_iterations=CENTER_MAX_ITERATIONS,
    tol=CENTER_TOLERANCE,
):
    """
    Origin for which the ``g``-weighted first moments of :math:`u_1^2` vanish

    Damped Newton iteration with a central-difference Jacobian, started at the
    :math:`u_1^2`-weighted centroid. Steps are halved until the moment norm
    decreases.

    Parameters
    ----------
    grid : :obj:`Grid`

    u1 : :obj:`np.ndarray`
        First eigenvector on ``grid``

    pf : :obj:`ProofFunctions`

    mass : :obj:`np.ndarray`
        Extra weight of the integrand (weighted problems)

    max_iterations : int
        Newton iteration limit

    tol : float
        Accepted ratio of the moment norm to its normalisation

    Returns
    -------
    :obj:`np.ndarray`
        The centre

    Raises
    ------
    ConvergenceError
        No acceptable centre within ``max_iterations`` or the damping was exhausted,
        the diagnostics carry the final centre and residual
    """
    dens = _quadrature_weights(grid, mass) * np.asarray(u1) ** 2
    y = np.sum(grid.points * dens[:, np.newaxis], axis=0) / np.sum(dens)
    eps = 1e-7 * math.sqrt(grid.volume)

    def residual(point):
        moments, normalisation = center_moments(grid, u1, pf, point, mass)
        return moments, float(np.linalg.norm(moments)) / normalisation

    moments, res = residual(y)
    for iteration in range(max_iterations):
        if res <= tol:
            logger.debug("centre %s after %d iterations (residual %s)", y, iteration, res)
            return y

        jac = np.empty((len(y), len(y)))
        for j in range(len(y)):
            step = np.zeros(len(y))
            step[j] = eps
            jac[:, j] = (residual(y + step)[0] - residual(y - step)[0]) / (2.0 * eps)

        try:
            direction = -np.linalg.solve(jac, moments)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(
                "singular Jacobian in the centre iteration",
                center=y.tolist(),
                residual=res,
                iterations=iteration,
            ) from exc

        damping = 1.0
        while True:
            trial = y + damping * direction
            trial_moments, trial_res = residual(trial)
            if trial_res < res:
                break
            damping *= 0.5
            if damping < 1e-6:
                logger.warning("centre damping exhausted at residual %s", res)
                raise ConvergenceError(
                    "centre iteration stalled",
                    center=y.tolist(),
                    residual=res,
                    iterations=iteration,
                )

        y, moments, res = trial, trial_moments, trial_res

    raise ConvergenceError(
        "centre iteration did not converge in {} iterations".format(max_iterations),
        center=y.tolist(),
        residual=res,
        iterations=max_iterations,
    )


@dataclass(frozen=True)
class Rotation:
    """
    Result of the QR rotation

    ``matrix`` is the orthogonal ``U`` with ``U P`` upper triangular, rows are the
    new axes. ``conditions`` lists ``(i, j, residual)`` for the orthogonality
    conditions :math:`\\int x_i g(|x|)/|x| \\, u_1 u_{j+1} = 0`, ``j < i``, as relative
    residuals (``j = 0`` is the centre condition).
    """

    matrix: np.ndarray
    moments: np.ndarray
    triangular: np.ndarray
    conditions: tuple
    orthogonality: float
    rank_deficient: bool

    @property
    def max_condition(self):
        """
        float
            Largest relative residual of the orthogonality conditions
        """
        return max(c[2] for c in self.conditions)


def qr_rotate(grid, eigenvectors, pf, center, mass=None):
    """
    Rotate the axes so that the moment matrix becomes upper triangular

    Parameters
    ----------
    grid : :obj:`Grid`

    eigenvectors : :obj:`np.ndarray`
        At least ``n + 1`` eigenvectors as columns, :math:`u_1` first

    pf : :obj:`ProofFunctions`

    center : array_like
        Origin from :func:`find_center`

    mass : :obj:`np.ndarray`
        Extra weight of the integrand (weighted problems)

    Returns
    -------
    :obj:`Rotation`
    """
    n = pf.n
    u = np.asarray(eigenvectors, dtype=float)
    if u.shape[1] < n + 1:
        raise ValidationError("qr_rotate needs {} eigenvectors".format(n + 1))

    qw = _quadrature_weights(grid, mass)
    u1 = u[:, 0]
    d, rho = _offsets(grid, center)
    radial = pf.g_over_t(rho)
    moments = (d * (qw * radial * u1)[:, np.newaxis]).T @ u[:, 1 : n + 1]

    q, _ = np.linalg.qr(moments)
    U = q.T
    triangular = U @ moments
    diag = np.abs(np.diag(triangular))
    rank_deficient = bool(diag.min() <= 1e-12 * max(diag.max(), 1e-300))
    if rank_deficient:
        logger.warning("moment matrix is rank deficient, any completion is valid")

    rotated = d @ U.T
    conditions = []
    for i in range(1, n + 1):
        for j in range(i):
            integrand = qw * rotated[:, i - 1] * radial * u1 * u[:, j]
            scale = float(np.sum(np.abs(integrand)))
            value = abs(float(np.sum(integrand)))
            conditions.append((i, j, value / scale if scale > 0 else 0.0))

    orthogonality = float(np.max(np.abs(U.T @ U - np.eye(n))))

    return Rotation(
        matrix=U,
        moments=moments,
        triangular=triangular,
        conditions=tuple(conditions),
        orthogonality=orthogonality,
        rank_deficient=rank_deficient,
    )


def trial_function(points, center, rotation, pf, k):
    """
    :math:`\\phi_k = g(|x|) x_k / |x|` in the rotated frame (``k`` one-based)
    """
    d = (np.asarray(points, dtype=float) - center) @ np.asarray(rotation).T
    rho = np.sqrt(np.sum(d * d, axis=-1))

    return pf.g_over_t(rho) * d[..., k - 1]


def _angular_square(d, rho, k):
    out = np.full(len(rho), 1.0 / d.shape[1])
    nonzero = rho > 0
    out[nonzero] = d[nonzero, k - 1] ** 2 / rho[nonzero] ** 2

    return out


def trial_gradient_sq(points, center, rotation, pf, k):
    """
    :math:`|\\nabla \\phi_k|^2 = (g'^2 - (g/|x|)^2) x_k^2 / |x|^2 + (g/|x|)^2`
    """
    d = (np.asarray(points, dtype=float) - center) @ np.asarray(rotation).T
    rho = np.sqrt(np.sum(d * d, axis=-1))
    gt2 = pf.g_over_t(rho) ** 2

    return (pf.dg(rho) ** 2 - gt2) * _angular_square(d, rho, k) + gt2


@dataclass(frozen=True)
class GapCheck:
    """
    Gap :math:`\\lambda_{k+1} - \\lambda_1` against the Rayleigh quotient of
    :math:`\\phi_k`
    """

    k: int
    gap: float
    quotient: float
    denominator: float
    holds: bool

    @property
    def slack(self):
        """
        float
            ``quotient - gap`` relative to the gap
        """
        return (self.quotient - self.gap) / self.gap


def _radial_integrals(grid, u1, pf, center, rotation):
    qw = _quadrature_weights(grid)
    dens = qw * np.asarray(u1) ** 2
    d, rho = _offsets(grid, center, rotation)
    g = pf.g(rho)
    gt2 = pf.g_over_t(rho) ** 2
    dg2 = pf.dg(rho) ** 2

    per_k = []
    for k in range(1, pf.n + 1):
        ang = _angular_square(d, rho, k)
        per_k.append(
            (
                float(np.sum(g ** 2 * ang * dens)),
                float(np.sum((dg2 - gt2) * ang * dens)),
            )
        )

    return {
        "g2": float(np.sum(g ** 2 * dens)),
        "gt2": float(np.sum(gt2 * dens)),
        "dg2": float(np.sum(dg2 * dens)),
        "per_k": per_k,
    }


def rayleigh_gaps(  # pylint: disable=too-many-arguments
    grid, spectrum, pf, center, rotation, factor=1.0, tol=DEFAULT_SOLVER_TOLERANCE
):
    """
    Compare each gap with the Rayleigh quotient of its trial function

    Checks :math:`(\\lambda_{k+1} - \\lambda_1) \\int \\phi_k^2 u_1^2 \\leq f \\int |\\nabla \\phi_k|^2 u_1^2`
    for ``k = 1..n``, with the gradient from its closed form.

    Parameters
    ----------
    grid : :obj:`Grid`

    spectrum : :obj:`Spectrum`
        At least ``n + 1`` eigenpairs

    pf : :obj:`ProofFunctions`

    center : array_like

    rotation : :obj:`Rotation` or :obj:`np.ndarray`

    factor : float
        ``f``, one for the Laplacian and ``A / c`` for weighted problems

    tol : float
        Relative slack allowed is ``5 tol``

    Returns
    -------
    list of :obj:`GapCheck`

    Raises
    ------
    ConvergenceError
        A trial function has a vanishing weighted norm
    """
    U = rotation.matrix if isinstance(rotation, Rotation) else rotation
    values = np.asarray(spectrum.eigenvalues)
    ints = _radial_integrals(grid, spectrum.eigenvectors[:, 0], pf, center, U)

    out = []
    for k, (denominator, cross) in enumerate(ints["per_k"], start=1):
        if denominator <= 1e-14 * ints["g2"]:
            raise ConvergenceError(
                "trial function {} has a vanishing norm".format(k), denominator=denominator
            )

        gap = values[k] - values[0]
        quotient = factor * (cross + ints["gt2"]) / denominator
        out.append(
            GapCheck(
                k=k,
                gap=float(gap),
                quotient=float(quotient),
                denominator=denominator,
                holds=bool(gap <= quotient * (1.0 + _STEP_SLACK * tol)),
            )
        )

    return out


def radial_quotient(grid, u1, pf, center):
    """
    :math:`\\int B(\\gamma |x|) u_1^2 / \\int w(\\gamma |x|)^2 u_1^2`

    Bounded by :math:`\\beta^2 - \\alpha^2`, with equality on the ball.
    """
    dens = _quadrature_weights(grid) * np.asarray(u1) ** 2
    _, rho = _offsets(grid, center)
    t = pf.gamma * rho

    return float(np.sum(pf.B(t) * dens) / np.sum(pf.w(t) ** 2 * dens))


@dataclass(frozen=True)
class ChainStep:
    """
    One inequality ``lhs <= rhs`` of the summation argument
    """

    name: str
    lhs: float
    rhs: float
    holds: bool


def _step(name, lhs, rhs, tol, equality=False):
    slack = _STEP_SLACK * tol * max(abs(lhs), abs(rhs))
    if equality:
        holds = abs(lhs - rhs) <= max(slack, 1e-10 * max(abs(lhs), abs(rhs), 1e-300))
    else:
        holds = lhs <= rhs + slack

    return ChainStep(name=name, lhs=float(lhs), rhs=float(rhs), holds=bool(holds))


def _chain(gaps, ints, factor, pf, quotient, tol):
    """The summation argument, as a list of checked inequalities"""
    n = pf.n
    G = [c.gap for c in gaps]
    X = [cross for _, cross in ints["per_k"]]
    g2, gt2, dg2 = ints["g2"], ints["gt2"], ints["dg2"]

    steps = []
    summed = factor * sum((X[k] + gt2) / G[k] for k in range(n))
    steps.append(_step("summed", g2, summed, tol))

    regrouped = sum((1.0 / G[k] - 1.0 / G[n - 1]) * X[k] for k in range(n - 1)) + sum(
        X
    ) / G[n - 1]
    steps.append(
        _step("regrouped", sum(X[k] / G[k] for k in range(n)), regrouped, tol, True)
    )

    signed = sum((1.0 / G[k] - 1.0 / G[n - 1]) * X[k] for k in range(n - 1))
    steps.append(_step("sign", signed, 0.0, tol))

    dropped = factor * (dg2 / G[n - 1] + sum(gt2 / G[k] for k in range(n - 1)))
    steps.append(_step("drop_sign", g2, dropped, tol))

    harmonic = sum(1.0 / G[k] for k in range(n - 1)) / (n - 1)
    averaged = factor * harmonic * (dg2 + (n - 1) * gt2)
    steps.append(_step("average", dropped, averaged, tol))

    bound = pf.beta ** 2 - pf.alpha ** 2
    steps.append(_step("radial_quotient", quotient, bound, tol))

    # harmonic mean of the gaps against the radial quotient
    implied = g2 / (factor * (dg2 + (n - 1) * gt2))
    floor = 1.0 / (factor * pf.gamma ** 2 * bound)
    steps.append(_step("quotient_bound", floor, implied, tol))
    steps.append(_step("harmonic_mean", implied, harmonic, tol))

    return steps


@dataclass(frozen=True)
class ProofReplay:  # pylint: disable=too-many-instance-attributes
    """
    Everything recorded while replaying the proof on one spectrum
    """

    domain: dict
    n: int
    h_list: tuple
    eigenvalues: tuple
    tolerance: float
    center: tuple
    center_residual: float
    rotation: tuple
    rotation_orthogonality: float
    conditions: tuple
    max_condition: float
    rank_deficient: bool
    gaps: tuple
    quotient: float
    quotient_bound: float
    steps: tuple
    lhs: float
    rhs: float
    margin: float
    consistent: bool
    bounds: tuple = field(default=None)

    @property
    def holds(self):
        """
        bool
            Every intermediate step and the final inequality hold, and the
            orthogonality conditions are met
        """
        return (
            all(s.holds for s in self.steps)
            and all(g.holds for g in self.gaps)
            and self.margin >= -_STEP_SLACK * self.tolerance
            and self.max_condition <= ROTATION_TOLERANCE
        )

    def to_dict(self):
        """
        Record for serialisation
        """
        out = asdict(self)
        out["holds"] = self.holds
        out["gaps"] = [dict(asdict(g), slack=g.slack) for g in self.gaps]

        return out


def _tolerance(spectra, tol):
    if len(spectra) < 2:
        return tol

    fine = spectra[-1].eigenvalues
    prev = spectra[-2].eigenvalues
    change = float(np.max(np.abs(fine - prev) / np.abs(fine)))

    return max(tol, change)


def replay_gap_bound(  # pylint: disable=too-many-arguments,too-many-locals
    domain,
    h_list=(1.0 / 32, 1.0 / 64),
    tol=DEFAULT_SOLVER_TOLERANCE,
    seed=DEFAULT_SEED,
    boundary="linear",
    coefficients=None,
):
    """
    Replay the proof of the gap-sum bound on a grid spectrum

    Parameters
    ----------
    domain : :obj:`Domain`
        Planar domain

    h_list : sequence of float
        Grid spacings, the pipeline runs on the finest and the relative change of
        the eigenvalues between the two finest sets the tolerance

    tol : float
        Solver tolerance

    seed : int
        Start vector seed

    boundary : str
        Boundary treatment of the solver

    coefficients : :obj:`Coefficients`
        Replay the weighted variant instead: the centre condition is weighted by
        ``r``, :math:`\\gamma = \\sqrt{C \\lambda_1 / a} / \\alpha` and the Rayleigh
        quotients are scaled by ``A / c``

    Returns
    -------
    :obj:`ProofReplay`
    """
    n = domain.dim
    if n != 2:
        raise ValidationError("grid replays are planar, use replay_ball for n > 2")

    kind = OperatorKind.DIRICHLET if coefficients is None else OperatorKind.WEIGHTED
    hs = sorted((float(h) for h in h_list), reverse=True)
    spectra = [
        solve(
            domain,
            kind,
            k=n + 1,
            h=h,
            tol=tol,
            seed=seed,
            boundary=boundary,
            coefficients=coefficients,
        )
        for h in hs
    ]
    spectrum = spectra[-1]
    grid = spectrum.grid
    tol_eff = _tolerance(spectra, tol)
    values = spectrum.eigenvalues
    lambda1 = float(values[0])

    if coefficients is None:
        bounds = None
        mass = None
        factor = 1.0
        pf = make_proof_functions(n, lambda1)
        report = gap_sum_bound(spectrum, n)
        rhs = gap_sum_constant(n)
    else:
        bounds = coefficients.bounds_on(grid.points)
        a, A, c, C = bounds
        mass = spectrum.operator.mass
        factor = A / c
        gamma = math.sqrt(C * lambda1 / a) / ball_modes(n, 1.0).alpha
        pf = make_proof_functions(n, lambda1, gamma=gamma)
        report = elliptic_gap_sum(spectrum, n, a, A, c, C)
        rhs = elliptic_bound(n, a, A, c, C)

    u = spectrum.eigenvectors
    logger.info("replaying on %r", grid)
    center = find_center(grid, u[:, 0], pf, mass=mass)
    moments, normalisation = center_moments(grid, u[:, 0], pf, center, mass)
    rotation = qr_rotate(grid, u, pf, center, mass=mass)
    gaps = rayleigh_gaps(grid, spectrum, pf, center, rotation, factor=factor, tol=tol_eff)
    quotient = radial_quotient(grid, u[:, 0], pf, center)
    ints = _radial_integrals(grid, u[:, 0], pf, center, rotation.matrix)
    steps = _chain(gaps, ints, factor, pf, quotient, tol_eff)

    lhs, _ = gap_sum(values, n)

    return ProofReplay(
        domain=domain.to_dict(),
        n=n,
        h_list=tuple(hs),
        eigenvalues=tuple(float(v) for v in values),
        tolerance=tol_eff,
        center=tuple(float(v) for v in center),
        center_residual=float(np.linalg.norm(moments)) / normalisation,
        rotation=tuple(tuple(float(v) for v in row) for row in rotation.matrix),
        rotation_orthogonality=rotation.orthogonality,
        conditions=rotation.conditions,
        max_condition=rotation.max_condition,
        rank_deficient=rotation.rank_deficient,
        gaps=tuple(gaps),
        quotient=quotient,
        quotient_bound=pf.beta ** 2 - pf.alpha ** 2,
        steps=tuple(steps),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float((lhs - rhs) / abs(rhs)),
        consistent=bool(lhs == report.lhs and rhs == report.rhs),
        bounds=bounds,
    )


def _ball_integral(func, n, r):
    value, _ = scipy.integrate.quad(
        lambda rho: func(rho) * rho ** (n - 1), 0.0, r, epsabs=0.0, epsrel=1e-12, limit=200
    )

    return sphere_area(n) * value


def replay_ball(n, r=1.0):
    """
    Replay the proof on the ``n``-ball with its exact eigenfunctions

    Radial integrals are computed with adaptive quadrature and the angular factors
    from :math:`\\int x_k^2 / |x|^2 = |S^{n-1}| / n`. By symmetry the centre is the
    origin and the moment matrix is diagonal, so no rotation is needed and the
    orthogonality conditions hold exactly.

    Parameters
    ----------
    n : int
        Dimension

    r : float
        Radius

    Returns
    -------
    :obj:`ProofReplay`
    """
    modes = ball_modes(n, r)
    domain = Ball(dim=n, radius=r)
    spectrum = analytic_spectrum(domain, "dirichlet", n + 1)
    values = np.asarray(spectrum.eigenvalues)
    pf = make_proof_functions(n, modes.lambda1)

    def u1_sq(rho):
        point = np.zeros(n)
        point[0] = min(rho, r)
        return ball_eigenfunction_u1(n, r, point) ** 2

    g2 = _ball_integral(lambda rho: pf.g(rho) ** 2 * u1_sq(rho), n, r)
    gt2 = _ball_integral(lambda rho: pf.g_over_t(rho) ** 2 * u1_sq(rho), n, r)
    dg2 = _ball_integral(lambda rho: pf.dg(rho) ** 2 * u1_sq(rho), n, r)
    B_int = _ball_integral(lambda rho: pf.B(pf.gamma * rho) * u1_sq(rho), n, r)
    w2_int = _ball_integral(lambda rho: pf.w(pf.gamma * rho) ** 2 * u1_sq(rho), n, r)

    ints = {
        "g2": g2,
        "gt2": gt2,
        "dg2": dg2,
        "per_k": [(g2 / n, (dg2 - gt2) / n)] * n,
    }
    tol = 1e-9
    gap = modes.lambda2 - modes.lambda1
    gaps = []
    for k in range(1, n + 1):
        quotient = (ints["per_k"][k - 1][1] + gt2) / ints["per_k"][k - 1][0]
        gaps.append(
            GapCheck(
                k=k,
                gap=gap,
                quotient=quotient,
                denominator=ints["per_k"][k - 1][0],
                holds=bool(gap <= quotient * (1.0 + _STEP_SLACK * tol)),
            )
        )

    quotient = B_int / w2_int
    steps = _chain(gaps, ints, 1.0, pf, quotient, tol)
    lhs, _ = gap_sum(values, n)
    rhs = gap_sum_constant(n)
    report = gap_sum_bound(spectrum, n)

    return ProofReplay(
        domain=domain.to_dict(),
        n=n,
        h_list=(),
        eigenvalues=tuple(float(v) for v in values),
        tolerance=tol,
        center=tuple([0.0] * n),
        center_residual=0.0,
        rotation=tuple(tuple(float(v) for v in row) for row in np.eye(n)),
        rotation_orthogonality=0.0,
        conditions=tuple((i, j, 0.0) for i in range(1, n + 1) for j in range(i)),
        max_condition=0.0,
        rank_deficient=False,
        gaps=tuple(gaps),
        quotient=quotient,
        quotient_bound=pf.beta ** 2 - pf.alpha ** 2,
        steps=tuple(steps),
        lhs=float(lhs),
        rhs=float(rhs),
        margin=float((lhs - rhs) / abs(rhs)),
        consistent=bool(lhs == report.lhs and rhs == report.rhs),
    )

