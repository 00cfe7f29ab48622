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
import logging
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oco_lab.errors import PreconditionError
from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.geometry.sets import LpBall
from oco_lab.geometry.sphere_facing import NotSphereEnclosed
from oco_lab.geometry.sphere_facing import SphereFacing
from oco_lab.geometry.sphere_facing import gamma_star
from oco_lab.geometry.sphere_facing import min_enclosing_sphere_facing
from oco_lab.geometry.sphere_facing import sampled_curvature


class TestEllipseClosedForm:
    """The minor-axis poles of W_λ have enclosing radius 1/λ."""

    @pytest.mark.parametrize("lam", [0.25, 0.5, 0.8])
    def test_lower_pole(self, lam):
        facing = min_enclosing_sphere_facing(AxisEllipsoid.w_lambda(lam), [0.0, -lam], [0.0, 1.0])
        assert isinstance(facing, SphereFacing)
        assert facing.radius == pytest.approx(1.0 / lam, abs=1e-6)
        assert_allclose(facing.center, [0.0, (1.0 - lam**2) / lam], atol=1e-6)

    @pytest.mark.parametrize("lam", [0.25, 0.5, 0.8])
    def test_mirrored_pole(self, lam):
        facing = min_enclosing_sphere_facing(AxisEllipsoid.w_lambda(lam), [0.0, lam], [0.0, -1.0])
        assert facing.radius == pytest.approx(1.0 / lam, abs=1e-6)
        assert_allclose(facing.center, [0.0, -(1.0 - lam**2) / lam], atol=1e-6)

    @pytest.mark.parametrize("lam", [0.25, 0.5, 0.8])
    def test_gamma_star_matches_half_lambda(self, lam):
        gamma = gamma_star(AxisEllipsoid.w_lambda(lam), [0.0, -lam], [0.0, 0.1])
        assert gamma == pytest.approx(0.1 * lam / 2.0, rel=1e-3)

    def test_gradient_scale_does_not_move_the_sphere(self):
        ellipse = AxisEllipsoid.w_lambda(0.5)
        small = min_enclosing_sphere_facing(ellipse, [0.0, -0.5], [0.0, 0.1])
        large = min_enclosing_sphere_facing(ellipse, [0.0, -0.5], [0.0, 10.0])
        assert small.radius == pytest.approx(large.radius, rel=1e-9)


class TestOtherSets:
    def test_unit_ball_is_its_own_sphere(self):
        facing = min_enclosing_sphere_facing(EuclideanBall(), [0.0, -1.0], [0.0, 1.0])
        assert facing.radius == pytest.approx(1.0, abs=1e-6)
        assert_allclose(facing.center, [0.0, 0.0], atol=1e-6)

    def test_box_corner(self):
        facing = min_enclosing_sphere_facing(Box([-1.0, -1.0], [1.0, 1.0]), [-1.0, -1.0], [1.0, 1.0])
        assert isinstance(facing, SphereFacing)
        assert facing.radius == pytest.approx(math.sqrt(2.0), abs=1e-6)

    def test_box_facet_is_not_sphere_enclosed(self):
        box = Box([-1.0, -1.0], [1.0, 1.0])
        facing = min_enclosing_sphere_facing(box, [0.0, -1.0], [0.0, 1.0])
        assert isinstance(facing, NotSphereEnclosed)
        assert gamma_star(box, [0.0, -1.0], [0.0, 1.0]) == 0.0

    def test_three_dimensional_ball(self):
        facing = min_enclosing_sphere_facing(EuclideanBall(2.0, dim=3), [0.0, 0.0, -2.0], [0.0, 0.0, 1.0])
        assert facing.radius == pytest.approx(2.0, rel=1e-3)


class TestPreconditions:
    def test_anchor_must_be_on_the_boundary(self):
        with pytest.raises(PreconditionError):
            min_enclosing_sphere_facing(EuclideanBall(), [0.0, 0.0], [0.0, 1.0])

    def test_gradient_must_face_the_set(self):
        with pytest.raises(PreconditionError):
            min_enclosing_sphere_facing(AxisEllipsoid.w_lambda(0.5), [0.0, -0.5], [0.0, -1.0])

    def test_gradient_must_be_nonzero(self):
        with pytest.raises(PreconditionError):
            min_enclosing_sphere_facing(EuclideanBall(), [0.0, -1.0], [0.0, 0.0])


def test_sphere_encloses_sampled_points():
    ellipse = AxisEllipsoid.w_lambda(0.5)
    facing = min_enclosing_sphere_facing(ellipse, [0.0, -0.5], [0.0, 1.0])
    points = ellipse.sample_boundary(np.random.default_rng(0), 1000)
    distances = np.linalg.norm(points - facing.center, axis=1)
    assert np.all(distances <= facing.radius + 1e-9)


def _ellipse_grid_infimum(lam, anchor_angle, grad, exclusion=1e-5, samples=200_000):
    angles = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    gap = np.angle(np.exp(1j * (angles - anchor_angle)))
    angles = angles[np.abs(gap) > exclusion]
    anchor = np.array([math.cos(anchor_angle), lam * math.sin(anchor_angle)])
    offsets = np.column_stack((np.cos(angles), lam * np.sin(angles))) - anchor
    return float(np.min(offsets @ np.asarray(grad) / np.sum(offsets**2, axis=1)))


class TestSampledCurvature:
    def test_pole_matches_a_dense_boundary_grid(self, caplog):
        caplog.set_level(logging.WARNING, logger="oco_lab.geometry.sphere_facing")
        gamma = gamma_star(AxisEllipsoid.w_lambda(0.5), [0.0, -0.5], [0.0, 0.1])
        assert gamma == pytest.approx(0.025, rel=1e-6)
        assert gamma == pytest.approx(_ellipse_grid_infimum(0.5, -0.5 * math.pi, [0.0, 0.1]), rel=1e-5)
        assert not [record for record in caplog.records if "disagrees" in record.getMessage()]

    def test_off_pole_anchor_matches_a_dense_boundary_grid(self):
        lam, angle = 0.5, -1.0
        anchor = [math.cos(angle), lam * math.sin(angle)]
        grad = [-math.cos(angle), -math.sin(angle) / lam]
        expected = _ellipse_grid_infimum(lam, angle, grad)
        assert sampled_curvature(AxisEllipsoid.w_lambda(lam), anchor, grad) == pytest.approx(expected, rel=1e-3)
        assert gamma_star(AxisEllipsoid.w_lambda(lam), anchor, grad) == pytest.approx(expected, rel=1e-3)

    def test_box_corner_is_attained_at_the_far_corner(self):
        box = Box([-1.0, -1.0], [1.0, 1.0])
        assert sampled_curvature(box, [-1.0, -1.0], [1.0, 1.0]) == pytest.approx(0.5, rel=1e-6)

    def test_flat_facet_has_no_curvature(self):
        assert sampled_curvature(Box([-1.0, -1.0], [1.0, 1.0]), [0.0, -1.0], [0.0, 1.0]) == 0.0

    def test_rejects_points_off_the_boundary(self):
        with pytest.raises(PreconditionError):
            sampled_curvature(EuclideanBall(), [0.0, 0.5], [0.0, 1.0])


class TestFlatPoles:
    def test_cubic_ball_pole_is_not_sphere_enclosed(self):
        ball = LpBall(3.0)
        facing = min_enclosing_sphere_facing(ball, [0.0, -1.0], [0.0, 1.0])
        assert isinstance(facing, NotSphereEnclosed)
        assert math.isinf(facing.ratio)
        assert gamma_star(ball, [0.0, -1.0], [0.0, 1.0]) == 0.0

    def test_round_pole_is_not_mistaken_for_a_flat_one(self):
        facing = min_enclosing_sphere_facing(LpBall(2.0), [0.0, -1.0], [0.0, 1.0])
        assert isinstance(facing, SphereFacing)
        assert facing.radius == pytest.approx(1.0, abs=1e-6)
