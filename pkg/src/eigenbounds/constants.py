"""
Numerical constants used in calculations
"""
import math

MAX_BESSEL_ORDER = 50.0
"""float : largest supported Bessel order"""

MAX_BESSEL_ARGUMENT = 1.0e4
"""float : largest supported Bessel argument"""

MAX_ZERO_INDEX = 20
"""int : largest supported zero index ``k``"""

BESSEL_SERIES_LIMIT = 8.0
"""float : arguments up to this value are evaluated with the ascending series"""

ZERO_TOLERANCE = 1.0e-14
"""float : relative step size at which zero refinement stops"""

MAX_BALL_DIMENSION = 50
"""int : largest supported ball dimension"""

BOUNDARY_TOLERANCE = 1.0e-12
"""float : nodes closer than this multiple of ``h`` to the boundary are excluded"""

MIN_BOUNDARY_FRACTION = 1.0e-3
"""float : smallest node-to-boundary distance (in units of ``h``) used by the linear
boundary treatment"""

MAX_EIGENPAIRS = 12
"""int : largest number of eigenpairs computed by the sparse solver"""

MIN_SOLVER_TOLERANCE = 1.0e-12
"""float : smallest tolerance accepted by the sparse solver"""

DEFAULT_SOLVER_TOLERANCE = 1.0e-10
"""float : default tolerance of the sparse solver"""

RESIDUAL_LIMIT = 1.0e-8
"""float : largest relative residual accepted for a computed eigenpair"""

ORTHOGONALITY_LIMIT = 1.0e-8
"""float : largest discrete inner product accepted between distinct eigenvectors"""

DEGENERACY_TOLERANCE = 1.0e-6
"""float : eigenvalues closer than this (relative) form a degenerate cluster"""

DEFAULT_SEED = 0
"""int : default seed for start vectors and sweep sampling"""

MARGIN_TOLERANCE_FACTOR = 3.0
"""float : margins are accepted down to minus this multiple of the propagated error"""

MIN_MARGIN_TOLERANCE = 1.0e-10
"""float : floor for the margin tolerance (analytic spectra carry no error)"""

INFINITE_SENTINEL = 1.0e300
"""float : finite stand-in for an infinite left-hand side (vanishing gap)"""

PPW_2D_CONSTANTS = (
    ("ppw_sum_2d_ppw", 6.0, "(lambda2+lambda3)/lambda1 <= 6 (Payne-Polya-Weinberger)"),
    (
        "ppw_sum_2d_brands",
        3.0 + math.sqrt(7.0),
        "(lambda2+lambda3)/lambda1 <= 3+sqrt(7) (Brands)",
    ),
    ("ppw_sum_2d_hile_protter", 5.622, "(lambda2+lambda3)/lambda1 <= 5.622 (Hile-Protter)"),
    (
        "ppw_sum_2d_marcellini",
        (15.0 + math.sqrt(345.0)) / 6.0,
        "(lambda2+lambda3)/lambda1 <= (15+sqrt(345))/6 (Marcellini)",
    ),
    (
        "ppw_sum_2d_chen_zheng",
        5.3507,
        "(lambda2+lambda3)/lambda1 <= 5.3507 (Chen-Zheng, stated as 5.3507^-; "
        "checked as a closed bound)",
    ),
)
""":obj:`tuple` : identifier, constant and citation of the planar bounds on
:math:`(\\lambda_2 + \\lambda_3) / \\lambda_1`, loosest first"""

CENTER_MAX_ITERATIONS = 200
"""int : iteration limit of the centre solver"""

CENTER_TOLERANCE = 1.0e-9
"""float : relative size of the moment vector accepted by the centre solver"""

ROTATION_TOLERANCE = 1.0e-8
"""float : relative size of the moments accepted after the QR rotation"""

EXIT_OK = 0
"""int : exit code when every proven inequality holds"""

EXIT_USAGE = 1
"""int : exit code for invalid command lines or configuration files"""

EXIT_VIOLATION = 2
"""int : exit code when a proven inequality is violated beyond tolerance"""

EXIT_NUMERIC = 3
"""int : exit code for numerical failures"""
