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
import pytest
from numpy.testing import assert_allclose

from oco_lab.geometry.sets import AxisEllipsoid
from oco_lab.geometry.sets import Box
from oco_lab.geometry.sets import EuclideanBall
from oco_lab.harness.geometry_check import ellipse_sphere
from oco_lab.harness.geometry_check import geometry_report


def test_closed_form_sphere():
    sphere = ellipse_sphere(0.5)
    assert_allclose(sphere.center, [0.0, 1.5])
    assert sphere.radius == 2.0
    assert_allclose(ellipse_sphere(0.5, mirror=True).center, [0.0, -1.5])


@pytest.mark.parametrize("lam", [0.25, 0.5, 0.8])
def test_ellipse_report_matches_the_closed_form(lam):
    report = geometry_report(AxisEllipsoid.w_lambda(lam), [0.0, -lam], [0.0, 1.0])
    assert report.enclosed
    assert report.analytic is not None
    assert report.center_error <= 1e-6
    assert report.radius_error <= 1e-6
    assert report.gamma == pytest.approx(lam / 2.0, rel=1e-5)


def test_mirrored_pole():
    report = geometry_report(AxisEllipsoid.w_lambda(0.5), [0.0, 0.5], [0.0, -1.0])
    assert_allclose(report.analytic.center, [0.0, -1.5])
    assert report.center_error <= 1e-6


def test_no_closed_form_off_the_poles():
    report = geometry_report(EuclideanBall(), [0.0, -1.0], [0.0, 1.0])
    assert report.enclosed
    assert report.analytic is None
    assert report.center_error is None
    assert report.gamma == pytest.approx(0.5, rel=1e-5)


def test_flat_facet_report():
    report = geometry_report(Box([-1.0, -1.0], [1.0, 1.0]), [0.0, -1.0], [0.0, 1.0])
    assert not report.enclosed
    assert report.gamma == 0.0
    assert report.radius_error is None
