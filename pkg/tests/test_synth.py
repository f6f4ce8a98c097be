import math

import numpy as np
import pytest

from chwedge.synth import (
    BACKGROUND,
    FOREGROUND,
    WedgeScene,
    render_wedge,
    sample_scene,
    trial_rng,
    truth_label,
)


class TestWedgeScene:
    def test_apex_offset_components(self):
        scene = WedgeScene(0.5, 1.0, 2.0, math.pi / 6)
        assert scene.apex_x == pytest.approx(2.0 * math.cos(math.pi / 6))
        assert scene.apex_y == pytest.approx(2.0 * math.sin(math.pi / 6))

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(half_width=0.01, orientation=0.0, apex_radius=0.0, apex_angle=0.0),
            dict(half_width=2.0, orientation=0.0, apex_radius=0.0, apex_angle=0.0),
            dict(half_width=0.5, orientation=-0.1, apex_radius=0.0, apex_angle=0.0),
            dict(half_width=0.5, orientation=0.0, apex_radius=7.0, apex_angle=0.0),
            dict(half_width=0.5, orientation=0.0, apex_radius=0.0, apex_angle=6.9),
        ],
    )
    def test_rejects_out_of_range_scenes(self, kwargs):
        with pytest.raises(ValueError):
            WedgeScene(**kwargs)


class TestRenderWedge:
    def test_deep_interior_and_exterior_values(self):
        scene = WedgeScene(math.pi / 3, 0.0, 0.0, 0.0)
        img = render_wedge(scene, 4)
        assert img[12, 20] == FOREGROUND  # well inside, along +x
        assert img[12, 4] == BACKGROUND  # opposite direction
        assert img.shape == (25, 25)

    def test_half_plane_fraction_matches_analytic_area(self):
        # half-plane wedge (half width pi/2) with its edge at x = 0.25 cuts
        # the center pixel into an exact 1/4 inside fraction
        scene = WedgeScene(math.pi / 2, 0.0, 0.25, 0.0)
        img4 = render_wedge(scene, 4)
        assert img4[12, 12] == pytest.approx(BACKGROUND + 155.0 * 0.25)
        img64 = render_wedge(scene, 64)
        frac64 = (img64[12, 12] - BACKGROUND) / 155.0
        assert frac64 == pytest.approx(0.25, abs=1.0 / 64.0)

    def test_supersample_counts_subpixels(self):
        scene = WedgeScene(math.pi / 2, 0.0, 0.25, 0.0)
        img = render_wedge(scene, 4)
        hits = (img[12, 12] - BACKGROUND) / 155.0 * 16.0
        assert hits == pytest.approx(4.0)

    def test_rejects_bad_supersample(self):
        scene = WedgeScene(0.5, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            render_wedge(scene, 0)

    def test_orientation_points_up_the_image(self):
        # wedge opening toward +y must brighten rows above the center
        scene = WedgeScene(math.pi / 4, math.pi / 2, 0.0, 0.0)
        img = render_wedge(scene, 4)
        assert img[4, 12] == FOREGROUND
        assert img[20, 12] == BACKGROUND


class TestSampleScene:
    def test_deterministic_for_fixed_seed(self):
        a = [sample_scene(trial_rng(42, i)) for i in range(5)]
        b = [sample_scene(trial_rng(42, i)) for i in range(5)]
        assert a == b
        c = [sample_scene(trial_rng(43, i)) for i in range(5)]
        assert a != c

    def test_draws_within_bounds(self):
        for i in range(500):
            s = sample_scene(trial_rng(7, i))
            assert math.pi / 12 <= 2 * s.half_width <= math.pi
            assert 0.0 <= s.orientation < 2 * math.pi
            assert 0.0 <= s.apex_radius <= 6.0
            assert 0.0 <= s.apex_angle < 2 * math.pi

    def test_width_moment_matches_uniform(self):
        n = 10000
        widths = np.array([2 * sample_scene(trial_rng(3, i)).half_width for i in range(n)])
        lo, hi = math.pi / 12, math.pi
        se = (hi - lo) / math.sqrt(12.0) / math.sqrt(n)
        assert abs(widths.mean() - (lo + hi) / 2) < 3 * se


class TestTruthLabel:
    def test_centered_matching_wedge_is_true(self):
        scene = WedgeScene(math.pi / 4, 0.0, 0.0, 0.0)
        assert truth_label(scene, math.pi / 2) is True

    def test_far_apex_is_false(self):
        scene = WedgeScene(math.pi / 4, 0.0, 3.0, 0.0)
        assert truth_label(scene, math.pi / 2) is False

    def test_width_bound_is_strict(self):
        # scene width 2*(pi/12) and template width pi/12 make the width gap
        # exactly pi/12 in floating point, landing on the open boundary
        scene = WedgeScene(math.pi / 12, 0.0, 1.0, 0.0)
        assert abs(2.0 * scene.half_width - math.pi / 12) == math.pi / 12
        assert truth_label(scene, math.pi / 12) is False
