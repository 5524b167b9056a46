"""
Sparse discrete Laplacians and their smallest eigenpairs

Operators are five-point finite difference stencils on a :class:`eigenbounds.geometry.Grid`:

- Dirichlet: the unknowns are the interior nodes, boundary values are zero. With
  ``boundary="linear"`` each grid link cut by the boundary adds
  :math:`(1/\\theta - 1)/h^2` to the diagonal, where :math:`\\theta h` is the distance
  from the node to the boundary along the link. With ``boundary="staircase"`` cut
  links are simply dropped.
- Neumann: finite volumes on a closed grid over a domain made of lattice cells, which
  is the symmetric form of the mirrored ghost-node stencil.
- Weighted: :math:`-\\nabla \\cdot (a \\nabla u) + q u = \\lambda r u` with isotropic
  ``a``, face-averaged so that the matrix stays symmetric, and the lumped mass
  ``diag(r)``.

The smallest eigenpairs are found with ARPACK in shift-invert mode, followed by one
block inverse-iteration step and a Rayleigh-Ritz projection.
"""
import enum
import logging
import math

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .constants import (
    BOUNDARY_TOLERANCE,
    DEFAULT_SEED,
    DEFAULT_SOLVER_TOLERANCE,
    DEGENERACY_TOLERANCE,
    MAX_EIGENPAIRS,
    MIN_BOUNDARY_FRACTION,
    MIN_SOLVER_TOLERANCE,
    ORTHOGONALITY_LIMIT,
    RESIDUAL_LIMIT,
)
from .errors import (
    CoefficientError,
    ConvergenceError,
    DegenerateSpectrumError,
    FactorizationError,
    UnsupportedDomainError,
    ValidationError,
)
from .geometry import Ball, LShape, Rectangle, build_grid
from .specfun import ball_dirichlet_eigenvalues, ball_neumann_eigenvalues

logger = logging.getLogger(__name__)

# pylint: disable=invalid-name

_DENSE_LIMIT = 400
_BOUNDARY_MODES = ("linear", "staircase")
_NEIGHBOURS = ((0, 1), (0, -1), (1, 0), (-1, 0))


class OperatorKind(enum.Enum):
    """
    Kind of discrete operator
    """

    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    WEIGHTED = "weighted"

    @classmethod
    def parse(cls, value):
        """
        Convert a string (or kind) to an :class:`OperatorKind`
        """
        if isinstance(value, cls):
            return value

        try:
            return cls(str(value).lower())
        except ValueError as exc:
            raise ValidationError(
                "unknown operator kind {!r}, expected one of {}".format(
                    value, [k.value for k in cls]
                )
            ) from exc


def _sample(value, points):
    if callable(value):
        out = np.asarray(value(points), dtype=float)
    else:
        out = np.asarray(value, dtype=float)

    return np.broadcast_to(out, (len(points),)).astype(float)


class Coefficients:
    """
    Isotropic coefficients of the weighted problem
    :math:`-\\nabla \\cdot (a \\nabla u) + q u = \\lambda r u`

    Each coefficient is a constant or a callable taking points of shape ``(m, 2)``
    and returning ``m`` values. The bounds :math:`0 < a \\leq a(x) \\leq A`,
    :math:`q \\geq 0` and :math:`0 < c \\leq r(x) \\leq C` are checked on every grid the
    coefficients are sampled on. Bounds left as ``None`` are taken from the samples.
    """

    def __init__(self, a=1.0, q=0.0, r=1.0, a_bounds=None, r_bounds=None):
        self.a = a
        self.q = q
        self.r = r
        self.a_bounds = a_bounds
        self.r_bounds = r_bounds

    @staticmethod
    def _assert_bounds(bounds, name):
        if bounds is None:
            return None

        low, high = (float(b) for b in bounds)
        if not (math.isfinite(low) and math.isfinite(high)) or not 0 < low <= high:
            raise CoefficientError(
                "{} bounds must satisfy 0 < lower <= upper, got {}".format(name, bounds)
            )

        return (low, high)

    @property
    def a_bounds(self):
        """
        tuple or None
            ``(a, A)``
        """
        return self._a_bounds

    @a_bounds.setter
    def a_bounds(self, val):
        self._a_bounds = self._assert_bounds(val, "a")

    @property
    def r_bounds(self):
        """
        tuple or None
            ``(c, C)``
        """
        return self._r_bounds

    @r_bounds.setter
    def r_bounds(self, val):
        self._r_bounds = self._assert_bounds(val, "r")

    @property
    def trivial(self):
        """
        bool
            ``a = 1``, ``q = 0`` and ``r = 1`` (constants)
        """
        return (
            not any(callable(v) for v in (self.a, self.q, self.r))
            and float(self.a) == 1.0
            and float(self.q) == 0.0
            and float(self.r) == 1.0
        )

    def sample(self, points):
        """
        Sample the coefficients and check their bounds

        Parameters
        ----------
        points : :obj:`np.ndarray`
            Points of shape ``(m, 2)``

        Returns
        -------
        :obj:`np.ndarray`, :obj:`np.ndarray`, :obj:`np.ndarray`
            ``a``, ``q`` and ``r`` at ``points``

        Raises
        ------
        CoefficientError
            A sampled value violates its bounds
        """
        a = _sample(self.a, points)
        q = _sample(self.q, points)
        r = _sample(self.r, points)

        if not np.all(np.isfinite(a) & np.isfinite(q) & np.isfinite(r)):
            raise CoefficientError("coefficients must be finite")
        if np.any(q < 0):
            raise CoefficientError("q must be non-negative, min is {}".format(q.min()))

        for values, bounds, name in ((a, self.a_bounds, "a"), (r, self.r_bounds, "r")):
            if np.any(values <= 0):
                raise CoefficientError("{} must be positive".format(name))
            if bounds is not None:
                low, high = bounds
                slack = 1e-12 * high
                if values.min() < low - slack or values.max() > high + slack:
                    raise CoefficientError(
                        "{} takes values in [{}, {}], outside its bounds {}".format(
                            name, values.min(), values.max(), bounds
                        )
                    )

        return a, q, r

    def bounds_on(self, points):
        """
        ``(a, A, c, C)``, using the declared bounds where given and the sampled range
        otherwise
        """
        a, _, r = self.sample(points)
        a_low, a_high = self.a_bounds or (float(a.min()), float(a.max()))
        r_low, r_high = self.r_bounds or (float(r.min()), float(r.max()))

        return a_low, a_high, r_low, r_high


class DiscreteOperator:
    """
    Symmetric pencil ``(A, diag(m))`` on the nodes of a grid

    ``A`` is stored in CSC format in units of ``1/length**2``.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self, grid, kind, matrix, mass, coefficients=None, boundary="linear"
    ):
        self._grid = grid
        self._kind = kind
        self._matrix = matrix.tocsc()
        self._mass = np.asarray(mass, dtype=float)
        self._coefficients = coefficients
        self._boundary = boundary

    @property
    def grid(self):
        """
        :obj:`Grid`
        """
        return self._grid

    @property
    def kind(self):
        """
        :obj:`OperatorKind`
        """
        return self._kind

    @property
    def matrix(self):
        """
        :obj:`scipy.sparse.csc_matrix`
            Stiffness matrix
        """
        return self._matrix

    @property
    def mass(self):
        """
        :obj:`np.ndarray`
            Diagonal of the mass matrix
        """
        return self._mass

    @property
    def mass_matrix(self):
        """
        :obj:`scipy.sparse.csc_matrix`
        """
        return sp.diags(self._mass).tocsc()

    @property
    def coefficients(self):
        """
        :obj:`Coefficients` or None
        """
        return self._coefficients

    @property
    def boundary(self):
        """
        str
            Boundary treatment used for the Dirichlet and weighted kinds
        """
        return self._boundary

    @property
    def n(self):
        """
        int
            Number of unknowns
        """
        return self._matrix.shape[0]

    @property
    def shift(self):
        """
        float
            Shift used for the shift-invert iteration
        """
        return -1.0 if self._kind is OperatorKind.NEUMANN else 0.0

    def is_symmetric(self):
        """
        Whether every stored entry has an identical transposed partner
        """
        diff = self._matrix - self._matrix.T
        return diff.nnz == 0 or float(abs(diff).max()) == 0.0

    def __repr__(self):
        return "DiscreteOperator({}, n={}, boundary={})".format(
            self._kind.value, self.n, self._boundary
        )


def boundary_fractions(grid, direction, nodes):
    """
    Fractional distance from nodes to the boundary along a lattice direction

    Parameters
    ----------
    grid : :obj:`Grid`

    direction : tuple
        ``(drow, dcol)`` lattice step

    nodes : :obj:`np.ndarray`
        Node numbers whose neighbour in ``direction`` is not an interior node

    Returns
    -------
    :obj:`np.ndarray`
        :math:`\\theta \\in [10^{-3}, 1]`, exactly one when the neighbour lies on the
        boundary
    """
    domain = grid.domain
    start = grid.points[nodes]
    step = grid.h * np.array([direction[1], direction[0]], dtype=float)

    theta = np.ones(len(nodes))
    neighbour_level = domain.level(start + step)
    on_boundary = np.abs(neighbour_level) <= BOUNDARY_TOLERANCE * grid.h
    todo = ~on_boundary
    if np.any(todo):
        low = np.zeros(int(todo.sum()))
        high = np.ones_like(low)
        base = start[todo]
        for _ in range(50):
            mid = 0.5 * (low + high)
            inside = domain.level(base + mid[:, np.newaxis] * step) < 0
            low = np.where(inside, mid, low)
            high = np.where(inside, high, mid)
        theta[todo] = high

    return np.maximum(theta, MIN_BOUNDARY_FRACTION)


def _assemble_interior(grid, face_a, boundary):
    """Five-point stencil (times h**2) on an open grid"""
    N = grid.n_nodes
    ny, nx = grid.index.shape
    rows, cols = grid.rows, grid.cols
    diag = np.zeros(N)
    I, J, V = [], [], []
    for direction in _NEIGHBOURS:
        nr = rows + direction[0]
        nc = cols + direction[1]
        valid = (nr >= 0) & (nr < ny) & (nc >= 0) & (nc < nx)
        nbr = np.full(N, -1)
        nbr[valid] = grid.index[nr[valid], nc[valid]]

        linked = nbr >= 0
        faces = face_a(np.arange(N), nbr, linked)
        I.append(np.nonzero(linked)[0])
        J.append(nbr[linked])
        V.append(-faces[linked])
        diag[linked] += faces[linked]

        cut = np.nonzero(~linked)[0]
        if len(cut):
            if boundary == "linear":
                theta = boundary_fractions(grid, direction, cut)
            else:
                theta = np.ones(len(cut))
            diag[cut] += faces[cut] / theta

    I.append(np.arange(N))
    J.append(np.arange(N))
    V.append(diag)

    return sp.coo_matrix(
        (np.concatenate(V), (np.concatenate(I), np.concatenate(J))), shape=(N, N)
    ).tocsc()


def _assemble_neumann(grid):
    """Finite volume stencil (times h**2) on a closed grid"""
    N = grid.n_nodes
    ny, nx = grid.index.shape
    padded = np.zeros((ny + 1, nx + 1))
    padded[1:-1, 1:-1] = grid.cell_mask
    rows, cols = grid.rows, grid.cols

    diag = np.zeros(N)
    I, J, V = [], [], []
    links = (
        ((0, 1), padded[rows, cols + 1] + padded[rows + 1, cols + 1]),
        ((1, 0), padded[rows + 1, cols] + padded[rows + 1, cols + 1]),
    )
    for (dr, dc), covered in links:
        weight = 0.5 * covered
        linked = np.nonzero(weight > 0)[0]
        other = grid.index[rows[linked] + dr, cols[linked] + dc]
        w = weight[linked]
        I.extend([linked, other])
        J.extend([other, linked])
        V.extend([-w, -w])
        np.add.at(diag, linked, w)
        np.add.at(diag, other, w)

    I.append(np.arange(N))
    J.append(np.arange(N))
    V.append(diag)

    return sp.coo_matrix(
        (np.concatenate(V), (np.concatenate(I), np.concatenate(J))), shape=(N, N)
    ).tocsc()


def _check_rectilinear(domain):
    quarter = domain.rotation / (0.5 * math.pi)
    if not isinstance(domain, (Rectangle, LShape)) or abs(quarter - round(quarter)) > 1e-12:
        raise UnsupportedDomainError(
            "Neumann operators are only available for axis-aligned rectangles and "
            "L-shapes, got {!r}".format(domain)
        )


def assemble(grid, kind="dirichlet", coefficients=None, boundary="linear"):
    """
    Assemble a discrete operator

    Parameters
    ----------
    grid : :obj:`Grid`
        Open grid for the Dirichlet and weighted kinds, closed grid for Neumann

    kind : str or :obj:`OperatorKind`
        ``"dirichlet"``, ``"neumann"`` or ``"weighted"``

    coefficients : :obj:`Coefficients`
        Coefficients of the weighted kind

    boundary : str
        ``"linear"`` or ``"staircase"``

    Returns
    -------
    :obj:`DiscreteOperator`

    Raises
    ------
    UnsupportedDomainError
        Neumann operator requested on a domain that is not rectilinear

    CoefficientError
        The coefficients violate their bounds

    ValidationError
        Unknown kind or boundary treatment, or a grid of the wrong type
    """
    kind = OperatorKind.parse(kind)
    if boundary not in _BOUNDARY_MODES:
        raise ValidationError(
            "boundary must be one of {}, got {!r}".format(_BOUNDARY_MODES, boundary)
        )

    h2 = grid.h ** 2
    if kind is OperatorKind.NEUMANN:
        _check_rectilinear(grid.domain)
        if not grid.closed:
            raise ValidationError("Neumann operators need a closed grid")

        matrix = _assemble_neumann(grid) / h2
        op = DiscreteOperator(grid, kind, matrix, grid.weights, boundary=boundary)
        logger.debug("assembled %r", op)
        return op

    if grid.closed:
        raise ValidationError("{} operators need an open grid".format(kind.value))

    if kind is OperatorKind.DIRICHLET:
        ones = np.ones(grid.n_nodes)

        def face_a(nodes, nbr, linked):  # pylint: disable=unused-argument
            return ones

        matrix = _assemble_interior(grid, face_a, boundary) / h2
        op = DiscreteOperator(grid, kind, matrix, ones, boundary=boundary)
        logger.debug("assembled %r", op)
        return op

    if coefficients is None:
        coefficients = Coefficients()

    a, q, r = coefficients.sample(grid.points)
    # the linked neighbours are interior nodes, their values are in `a`
    def face_a(nodes, nbr, linked):
        out = a[nodes].copy()
        out[linked] = 0.5 * (a[nodes[linked]] + a[nbr[linked]])
        return out

    matrix = _assemble_interior(grid, face_a, boundary) / h2 + sp.diags(q)
    op = DiscreteOperator(
        grid, kind, matrix.tocsc(), r, coefficients=coefficients, boundary=boundary
    )
    logger.debug("assembled %r", op)

    return op


class EigenvalueSet:
    """
    Ordered eigenvalues with error estimates

    Used for analytic spectra (zero error), extrapolated spectra and as the base of
    :class:`Spectrum`.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self, eigenvalues, kind, domain, error_estimates=None, h_list=None, source="grid"
    ):
        values = np.array(eigenvalues, dtype=float)
        if np.any(np.diff(values) < 0):
            raise ValidationError("eigenvalues must be in ascending order")

        errors = (
            np.zeros_like(values)
            if error_estimates is None
            else np.abs(np.array(error_estimates, dtype=float))
        )
        values.setflags(write=False)
        errors.setflags(write=False)

        self._eigenvalues = values
        self._error_estimates = errors
        self._kind = OperatorKind.parse(kind)
        self._domain = domain
        self._h_list = None if h_list is None else tuple(float(h) for h in h_list)
        self._source = source

    @property
    def eigenvalues(self):
        """
        :obj:`np.ndarray`
            Eigenvalues in ascending order
        """
        return self._eigenvalues

    @property
    def error_estimates(self):
        """
        :obj:`np.ndarray`
            Absolute error estimate of each eigenvalue
        """
        return self._error_estimates

    @property
    def kind(self):
        """
        :obj:`OperatorKind`
        """
        return self._kind

    @property
    def domain(self):
        """
        :obj:`Domain`
        """
        return self._domain

    @property
    def h_list(self):
        """
        tuple or None
            Grid spacings the eigenvalues were computed from, None when analytic
        """
        return self._h_list

    @property
    def h_min(self):
        """
        float or None
            Finest spacing
        """
        return None if self._h_list is None else min(self._h_list)

    @property
    def source(self):
        """
        str
            ``"analytic"``, ``"grid"`` or ``"extrapolated"``
        """
        return self._source

    def __len__(self):
        return len(self._eigenvalues)

    def __getitem__(self, item):
        return self._eigenvalues[item]

    def clusters(self, rel_tol=DEGENERACY_TOLERANCE):
        """
        Group numerically degenerate eigenvalues

        Parameters
        ----------
        rel_tol : float
            Neighbouring eigenvalues closer than ``rel_tol`` relative to their size
            are put in the same cluster

        Returns
        -------
        list of tuple
            Indices of each cluster, in order
        """
        out = []
        current = [0]
        for i in range(1, len(self._eigenvalues)):
            prev, now = self._eigenvalues[i - 1], self._eigenvalues[i]
            scale = max(abs(prev), abs(now), 1e-300)
            if abs(now - prev) <= rel_tol * scale:
                current.append(i)
            else:
                out.append(tuple(current))
                current = [i]

        if len(self._eigenvalues):
            out.append(tuple(current))

        return out

    def to_dict(self):
        """
        Record with the domain spec, kind, spacings, eigenvalues and error estimates
        """
        return {
            "domain": self._domain.to_dict() if self._domain is not None else None,
            "kind": self._kind.value,
            "source": self._source,
            "h_list": list(self._h_list) if self._h_list is not None else None,
            "eigenvalues": self._eigenvalues.tolist(),
            "error_estimates": self._error_estimates.tolist(),
        }

    def __repr__(self):
        return "{}({}, {})".format(
            type(self).__name__, self._kind.value, np.array2string(self._eigenvalues)
        )


class Spectrum(EigenvalueSet):
    """
    Eigenpairs of a discrete operator

    Eigenvectors are normalised so that :math:`h^2 \\sum_x m(x) u_i(x) u_j(x) = \\delta_{ij}`
    and their sign is fixed so that the entry of largest magnitude is positive.
    """

    def __init__(self, operator, eigenvalues, eigenvectors, residuals, tolerance):
        self._operator = operator
        self._eigenvectors = np.array(eigenvectors, dtype=float)
        self._eigenvectors.setflags(write=False)
        self._residuals = np.array(residuals, dtype=float)
        self._residuals.setflags(write=False)
        self._tolerance = tolerance
        errors = self._residuals * np.abs(np.asarray(eigenvalues) - operator.shift)
        super().__init__(
            eigenvalues,
            operator.kind,
            operator.grid.domain,
            error_estimates=errors,
            h_list=(operator.grid.h,),
            source="grid",
        )

    @property
    def operator(self):
        """
        :obj:`DiscreteOperator`
        """
        return self._operator

    @property
    def grid(self):
        """
        :obj:`Grid`
        """
        return self._operator.grid

    @property
    def eigenvectors(self):
        """
        :obj:`np.ndarray`
            Grid functions as columns, shape ``(N, k)``
        """
        return self._eigenvectors

    @property
    def residuals(self):
        """
        :obj:`np.ndarray`
            :math:`\\|A u - \\lambda M u\\| / (|\\lambda - \\sigma| \\|M u\\|)`
        """
        return self._residuals

    @property
    def tolerance(self):
        """
        float
            Solver tolerance
        """
        return self._tolerance

    def gram(self):
        """
        Discrete Gram matrix :math:`h^2 U^T M U`
        """
        u = self._eigenvectors
        return self.grid.h ** 2 * (u.T @ (self._operator.mass[:, np.newaxis] * u))

    def orthogonality_error(self):
        """
        Largest deviation of :meth:`gram` from the identity
        """
        gram = self.gram()
        return float(np.max(np.abs(gram - np.eye(len(gram)))))

    def to_dict(self):
        out = super().to_dict()
        out["residuals"] = self._residuals.tolist()
        out["n_nodes"] = self.grid.n_nodes
        out["boundary"] = self._operator.boundary

        return out


def _factorise(operator, shift):
    shifted = (operator.matrix - shift * operator.mass_matrix).tocsc()
    try:
        return spla.splu(shifted), shift
    except RuntimeError as exc:
        perturbed = shift - 1e-3 * (1.0 + abs(shift))
        logger.warning(
            "factorisation at shift %s failed (%s), retrying at %s", shift, exc, perturbed
        )

    shifted = (operator.matrix - perturbed * operator.mass_matrix).tocsc()
    try:
        return spla.splu(shifted), perturbed
    except RuntimeError as exc:
        raise FactorizationError(
            "could not factorise the shifted operator", shifts=(shift, perturbed)
        ) from exc


def _residuals(operator, values, vectors, shift):
    A = operator.matrix
    mu = operator.mass[:, np.newaxis] * vectors
    res = A @ vectors - mu * values
    scale = np.abs(values - shift) * np.linalg.norm(mu, axis=0)

    return np.linalg.norm(res, axis=0) / scale


def smallest_eigenpairs(
    operator, k, tol=DEFAULT_SOLVER_TOLERANCE, seed=DEFAULT_SEED
):
    """
    Smallest ``k`` eigenpairs of a discrete operator

    Parameters
    ----------
    operator : :obj:`DiscreteOperator`

    k : int
        Number of eigenpairs, ``k <= min(N, 12)``

    tol : float
        Relative tolerance passed to ARPACK, at least ``1e-12``

    seed : int
        Seed of the start vector

    Returns
    -------
    :obj:`Spectrum`

    Raises
    ------
    ValidationError
        ``k`` or ``tol`` out of range

    FactorizationError
        The shifted operator could not be factorised, even at a perturbed shift

    ConvergenceError
        ARPACK did not converge, or the residuals or the orthogonality of the
        result are too large (the diagnostics carry the best residuals)

    DegenerateSpectrumError
        A Dirichlet operator was found not to be positive definite
    """
    N = operator.n
    if int(k) != k or not 1 <= k <= min(N, MAX_EIGENPAIRS):
        raise ValidationError(
            "k must be an integer in [1, {}], got {}".format(min(N, MAX_EIGENPAIRS), k)
        )
    if not tol >= MIN_SOLVER_TOLERANCE:
        raise ValidationError(
            "tol must be at least {}, got {}".format(MIN_SOLVER_TOLERANCE, tol)
        )
    k = int(k)

    shift = operator.shift
    if N <= _DENSE_LIMIT:
        logger.debug("dense solve, N=%d", N)
        values, vectors = scipy.linalg.eigh(
            operator.matrix.toarray(), np.diag(operator.mass)
        )
        values, vectors = values[:k], vectors[:, :k]
    else:
        lu, shift = _factorise(operator, shift)
        M = operator.mass_matrix
        opinv = spla.LinearOperator((N, N), matvec=lu.solve, dtype=float)
        v0 = np.random.default_rng(seed).standard_normal(N)
        logger.debug("ARPACK shift-invert solve, N=%d, k=%d, shift=%s", N, k, shift)
        try:
            _, vectors = spla.eigsh(
                operator.matrix,
                k=k,
                M=M,
                sigma=shift,
                which="LM",
                OPinv=opinv,
                v0=v0,
                tol=tol,
            )
        except spla.ArpackNoConvergence as exc:
            raise ConvergenceError(
                "ARPACK did not converge",
                eigenvalues=np.asarray(exc.eigenvalues).tolist(),
            ) from exc

        # one block inverse-iteration step, then Rayleigh-Ritz on the new block
        block = lu.solve(np.asarray(M @ vectors))
        stiff = block.T @ (operator.matrix @ block)
        gram = block.T @ (M @ block)
        values, coef = scipy.linalg.eigh(
            0.5 * (stiff + stiff.T), 0.5 * (gram + gram.T)
        )
        vectors = block @ coef

    order = np.argsort(values)
    values = values[order]
    vectors = vectors[:, order] / operator.grid.h

    signs = np.sign(vectors[np.argmax(np.abs(vectors), axis=0), np.arange(k)])
    vectors = vectors * np.where(signs == 0, 1.0, signs)

    residuals = _residuals(operator, values, vectors, operator.shift)
    limit = max(tol, RESIDUAL_LIMIT)
    if np.any(~np.isfinite(residuals)) or residuals.max() > limit:
        raise ConvergenceError(
            "residuals {} exceed {}".format(residuals.tolist(), limit),
            residuals=residuals.tolist(),
            eigenvalues=values.tolist(),
        )

    spectrum = Spectrum(operator, values, vectors, residuals, tol)
    orth = spectrum.orthogonality_error()
    if orth > ORTHOGONALITY_LIMIT:
        raise ConvergenceError(
            "eigenvectors are not orthonormal (error {})".format(orth),
            orthogonality=orth,
            residuals=residuals.tolist(),
        )

    if operator.kind is not OperatorKind.NEUMANN and values[0] <= 0:
        raise DegenerateSpectrumError(
            "smallest eigenvalue {} is not positive".format(values[0]),
            eigenvalues=values.tolist(),
        )

    logger.info(
        "%s eigenvalues on %r: %s", operator.kind.value, operator.grid, values.tolist()
    )

    return spectrum


def solve(  # pylint: disable=too-many-arguments
    domain,
    kind="dirichlet",
    k=3,
    h=1.0 / 64,
    tol=DEFAULT_SOLVER_TOLERANCE,
    seed=DEFAULT_SEED,
    boundary="linear",
    coefficients=None,
):
    """
    Build a grid, assemble and solve in one go

    Parameters
    ----------
    domain : :obj:`Domain`

    kind : str or :obj:`OperatorKind`

    k : int
        Number of eigenpairs

    h : float
        Grid spacing

    tol : float
        Solver tolerance

    seed : int
        Start vector seed

    boundary : str
        ``"linear"`` or ``"staircase"``

    coefficients : :obj:`Coefficients`
        Weighted problems only

    Returns
    -------
    :obj:`Spectrum`
    """
    kind = OperatorKind.parse(kind)
    if kind is OperatorKind.NEUMANN:
        _check_rectilinear(domain)
    grid = build_grid(domain, h, closed=kind is OperatorKind.NEUMANN)
    operator = assemble(grid, kind, coefficients=coefficients, boundary=boundary)

    return smallest_eigenpairs(operator, k, tol=tol, seed=seed)


def richardson_order(domain, boundary="linear"):
    """
    Leading power of ``h`` in the eigenvalue error

    Two for linear boundaries and for lattice-aligned rectangles, one for staircase
    boundaries of other shapes and for every domain with a reentrant corner.
    """
    if domain.reentrant:
        return 1

    if boundary == "staircase":
        quarter = domain.rotation / (0.5 * math.pi)
        aligned = isinstance(domain, Rectangle) and abs(quarter - round(quarter)) < 1e-12
        return 2 if aligned else 1

    return 2


def richardson_limit(values, order, ratio=2.0):
    """
    Richardson tableau over values on successively refined grids

    Parameters
    ----------
    values : array_like
        Shape ``(levels, ...)``, coarsest level first

    order : int
        Leading error power, the tableau assumes ``order, order + 1, ...``

    ratio : float
        Refinement ratio between levels

    Returns
    -------
    :obj:`np.ndarray`
        Extrapolated values
    """
    level = [np.asarray(v, dtype=float) for v in values]
    for m in range(1, len(level)):
        mult = ratio ** (order + m - 1)
        level = [
            (mult * level[i + 1] - level[i]) / (mult - 1.0) for i in range(len(level) - 1)
        ]

    return level[0]


class ExtrapolatedSpectrum(EigenvalueSet):
    """
    Richardson-extrapolated eigenvalues

    The error estimate of each eigenvalue is its distance to the finest grid value.
    """

    def __init__(self, spectra, order):
        self._spectra = tuple(spectra)
        self._order = order
        levels = np.array([s.eigenvalues for s in self._spectra])
        values = richardson_limit(levels, order)
        finest = self._spectra[-1]
        errors = np.abs(values - finest.eigenvalues) + finest.error_estimates
        # extrapolation may swap members of a degenerate cluster
        idx = np.argsort(values, kind="stable")
        super().__init__(
            values[idx],
            finest.kind,
            finest.domain,
            error_estimates=errors[idx],
            h_list=[s.grid.h for s in self._spectra],
            source="extrapolated",
        )
        self._levels = levels

    @property
    def spectra(self):
        """
        tuple
            :class:`Spectrum` per grid, coarsest first
        """
        return self._spectra

    @property
    def finest(self):
        """
        :obj:`Spectrum`
            Spectrum on the finest grid
        """
        return self._spectra[-1]

    @property
    def order(self):
        """
        int
            Assumed leading error power
        """
        return self._order

    @property
    def levels(self):
        """
        :obj:`np.ndarray`
            Raw eigenvalues per grid, shape ``(levels, k)``
        """
        return self._levels

    def to_dict(self):
        out = super().to_dict()
        out["order"] = self._order
        out["levels"] = self._levels.tolist()
        out["residuals"] = [s.residuals.tolist() for s in self._spectra]

        return out


def extrapolate(  # pylint: disable=too-many-arguments
    domain,
    kind="dirichlet",
    k=3,
    h_list=(1.0 / 32, 1.0 / 64),
    tol=DEFAULT_SOLVER_TOLERANCE,
    seed=DEFAULT_SEED,
    boundary="linear",
    coefficients=None,
    order=None,
):
    """
    Solve on successively halved grids and extrapolate

    Parameters
    ----------
    domain : :obj:`Domain`

    kind : str or :obj:`OperatorKind`

    k : int
        Number of eigenvalues

    h_list : sequence of float
        At least two spacings, each half the previous one once sorted

    tol, seed, boundary, coefficients
        Passed to :func:`solve`

    order : int
        Leading error power, defaults to :func:`richardson_order`

    Returns
    -------
    :obj:`ExtrapolatedSpectrum`

    Raises
    ------
    ValidationError
        Fewer than two spacings or spacings not in ratio two
    """
    hs = sorted((float(h) for h in h_list), reverse=True)
    if len(hs) < 2:
        raise ValidationError("extrapolation needs at least two grid spacings")
    for coarse, fine in zip(hs[:-1], hs[1:]):
        if abs(coarse / fine - 2.0) > 1e-9:
            raise ValidationError(
                "grid spacings must be in ratio 2, got {} and {}".format(coarse, fine)
            )

    if order is None:
        order = richardson_order(domain, boundary)

    spectra = [
        solve(
            domain,
            kind,
            k=k,
            h=h,
            tol=tol,
            seed=seed,
            boundary=boundary,
            coefficients=coefficients,
        )
        for h in hs
    ]

    return ExtrapolatedSpectrum(spectra, order)


def _rectangle_values(a, b, k, start):
    values = [
        math.pi ** 2 * ((m / a) ** 2 + (n / b) ** 2)
        for m in range(start, k + 1)
        for n in range(start, k + 1)
    ]
    return sorted(values)[:k]


def analytic_spectrum(domain, kind="dirichlet", k=3):
    """
    Closed-form spectrum of a ball or a rectangle

    Parameters
    ----------
    domain : :obj:`Ball` or :obj:`Rectangle`

    kind : str or :obj:`OperatorKind`
        ``"dirichlet"`` or ``"neumann"`` (the Neumann spectrum starts with zero)

    k : int
        Number of eigenvalues

    Returns
    -------
    :obj:`EigenvalueSet`

    Raises
    ------
    UnsupportedDomainError
        No closed form is available for ``domain`` or ``kind``
    """
    kind = OperatorKind.parse(kind)
    if kind is OperatorKind.WEIGHTED:
        raise UnsupportedDomainError("weighted problems have no closed-form spectrum")

    neumann = kind is OperatorKind.NEUMANN
    if isinstance(domain, Ball):
        if neumann:
            values = ball_neumann_eigenvalues(domain.dim, domain.radius, k)
        else:
            values = ball_dirichlet_eigenvalues(domain.dim, domain.radius, k)
    elif isinstance(domain, Rectangle):
        values = _rectangle_values(domain.a, domain.b, k, 0 if neumann else 1)
    else:
        raise UnsupportedDomainError(
            "no closed-form spectrum for {!r}".format(domain)
        )

    return EigenvalueSet(values, kind, domain, source="analytic")
