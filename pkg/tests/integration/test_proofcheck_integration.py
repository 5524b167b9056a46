import numpy as np
import numpy.testing as npt
import pytest
import scipy.special

from eigenbounds import Ball, LShape, Rectangle, replay_gap_bound
from eigenbounds.eigensolver import Coefficients, extrapolate
from eigenbounds.errors import ValidationError
from eigenbounds.inequalities import elliptic_bound, elliptic_gap_sum, gap_sum_constant

J01, J11 = scipy.special.jn_zeros(0, 1)[0], scipy.special.jn_zeros(1, 1)[0]

STEP_NAMES = [
    "summed",
    "regrouped",
    "sign",
    "drop_sign",
    "average",
    "radial_quotient",
    "quotient_bound",
    "harmonic_mean",
]


def assert_replay_holds(res):
    assert res.holds, [s for s in res.steps if not s.holds]
    assert res.consistent
    assert res.margin > 0
    assert not res.rank_deficient
    assert res.center_residual <= 1e-9
    assert res.rotation_orthogonality <= 1e-12
    assert all(g.holds for g in res.gaps)
    assert [s.name for s in res.steps] == STEP_NAMES


@pytest.fixture(scope="module")
def square_replay():
    return replay_gap_bound(Rectangle(1.0, 1.0))


def test_square(square_replay):
    assert_replay_holds(square_replay)
    npt.assert_allclose(square_replay.center, [0.0, 0.0], atol=1e-6)
    assert square_replay.rhs == gap_sum_constant(2)
    assert square_replay.h_list == (1.0 / 32, 1.0 / 64)


def test_square_quotient_below_ball(square_replay):
    assert square_replay.quotient < square_replay.quotient_bound


def test_rectangle():
    res = replay_gap_bound(Rectangle(1.0, 2.0, translation=(0.25, 0.5)))

    assert_replay_holds(res)
    npt.assert_allclose(res.center, [0.25, 0.5], atol=1e-6)


@pytest.mark.slow
def test_lshape():
    res = replay_gap_bound(LShape(0.5, 0.5))

    assert_replay_holds(res)


@pytest.mark.parametrize("translation", [(0.0, 0.0), (0.3, -0.2)])
def test_disk_is_nearly_sharp(translation):
    res = replay_gap_bound(Ball(2, 1.0, translation=translation))

    npt.assert_allclose(res.center, translation, atol=5e-3)
    npt.assert_allclose(res.quotient, J11 ** 2 - J01 ** 2, rtol=1e-2)
    assert abs(res.margin) <= 1e-2
    assert all(abs(g.slack) <= 5e-2 for g in res.gaps)
    assert res.consistent


def test_weighted_square():
    coefficients = Coefficients(
        a=lambda p: 1.0 + 0.2 * p[:, 0] ** 2,
        r=lambda p: 1.0 + 0.1 * p[:, 1],
    )
    res = replay_gap_bound(Rectangle(1.0, 1.0), coefficients=coefficients)

    assert_replay_holds(res)
    a, A, c, C = res.bounds
    assert 1.0 <= a <= A <= 1.05
    assert 0.95 <= c <= C <= 1.05
    assert res.rhs == elliptic_bound(2, a, A, c, C)
    assert res.rhs < gap_sum_constant(2)


@pytest.fixture(scope="module")
def radial_stiffness():
    # a(x) = 1 + |x|^2 / 2 takes values in [1, 1.5] on the unit disk
    return Coefficients(
        a=lambda p: 1.0 + 0.5 * (p[:, 0] ** 2 + p[:, 1] ** 2),
        a_bounds=(1.0, 1.5),
    )


def test_weighted_disk_gap_sum(radial_stiffness):
    spectrum = extrapolate(
        Ball(2, 1.0), "weighted", 3, h_list=(1.0 / 32, 1.0 / 64), coefficients=radial_stiffness
    )
    res = elliptic_gap_sum(spectrum, 2, 1.0, 1.5, 1.0, 1.0)

    npt.assert_allclose(res.rhs, gap_sum_constant(2) / 1.5)
    assert res.lhs > res.rhs
    assert res.satisfied
    assert not res.violated
    assert res.margin > 0.5


def test_weighted_disk_replay(radial_stiffness):
    res = replay_gap_bound(Ball(2, 1.0), coefficients=radial_stiffness)

    assert res.holds, [s for s in res.steps if not s.holds]
    assert res.margin > 0
    npt.assert_allclose(res.center, [0.0, 0.0], atol=5e-3)
    assert res.bounds[:2] == (1.0, 1.5)
    npt.assert_allclose(res.bounds[2:], [1.0, 1.0])
    npt.assert_allclose(res.rhs, elliptic_bound(2, *res.bounds))


def test_three_dimensional_grid_replay():
    with pytest.raises(ValidationError, match="use replay_ball for n > 2"):
        replay_gap_bound(Ball(3, 1.0))


def test_to_dict(square_replay):
    res = square_replay.to_dict()

    assert res["holds"]
    assert res["domain"]["shape"] == "rectangle"
    assert len(res["gaps"]) == 2
    assert np.isfinite(res["margin"])
