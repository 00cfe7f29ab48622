# Copyright © 2025 Cognizant Technology Solutions Corp, www.cognizant.com.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# END COPYRIGHT
import numpy as np
import pytest
from numpy.testing import assert_allclose

from oco_lab.errors import PreconditionError
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.harness.accumulator import CumulativeLoss
from oco_lab.harness.accumulator import hindsight_minimizer
from oco_lab.losses.loss_functions import Linear
from oco_lab.losses.loss_functions import Quadratic
from oco_lab.losses.loss_functions import SquaredLinear


def test_linear_sum_on_the_ellipse():
    losses = [Linear([1.0, -0.1]), Linear([-1.0, -0.1])]
    assert_allclose(hindsight_minimizer(losses, AxisEllipsoid.w_lambda(0.5)), [0.0, 0.5], atol=1e-12)


def test_single_quadratic_projects():
    assert_allclose(hindsight_minimizer([Quadratic([0.0, 2.0], 1.0)], EuclideanBall()), [0.0, 1.0], atol=1e-12)


def test_quadratics_use_the_weighted_mean():
    losses = [Quadratic([0.0, 0.0], 1.0), Quadratic([0.4, 0.0], 3.0)]
    assert_allclose(hindsight_minimizer(losses, EuclideanBall()), [0.3, 0.0], atol=1e-12)


def test_zero_sum_returns_the_center():
    losses = [Linear([1.0, 0.0]), Linear([-1.0, 0.0])]
    assert_allclose(hindsight_minimizer(losses, AxisEllipsoid([2.0, 1.0])), [0.0, 0.0])
    assert_allclose(hindsight_minimizer([], EuclideanBall(1.0, center=[1.0, 1.0])), [1.0, 1.0])


def test_general_forms_go_through_frank_wolfe():
    losses = [SquaredLinear([1.0, 0.0], 2.0), SquaredLinear([0.0, 1.0], 0.0)]
    point = hindsight_minimizer(losses, EuclideanBall())
    assert_allclose(point, [1.0, 0.0], atol=1e-3)
    assert EuclideanBall().contains(point)


def test_value_is_the_sum_of_values():
    losses = [Quadratic([0.0, 2.0], 1.0), Quadratic([1.0, -1.0], 0.5), Quadratic([0.3, 0.3], 2.0)]
    cumulative = CumulativeLoss(2)
    for loss in losses:
        cumulative.add(loss)
    x = np.array([0.2, -0.7])
    assert cumulative.value(x) == pytest.approx(sum(loss.value(x) for loss in losses))
    assert cumulative.rounds == 3


def test_families_cannot_be_mixed():
    cumulative = CumulativeLoss(2)
    cumulative.add(Linear([1.0, 0.0]))
    with pytest.raises(PreconditionError):
        cumulative.add(Quadratic([0.0, 0.0], 1.0))


def test_dimension_checked():
    with pytest.raises(PreconditionError):
        CumulativeLoss(2).add(Linear([1.0, 0.0, 0.0]))
