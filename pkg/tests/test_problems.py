from __future__ import annotations

import math

import numpy as np
import pytest

from mintime import (
    BUILTIN_IDS,
    build_grid,
    builtin,
    eval_dynamics,
    layer_params,
    load_problem_file,
    m_coeff,
    make_problem,
    position,
    sinusoid_C,
    unit_controls,
)


class TestUnitControls:
    def test_four_controls_are_exact_axes(self):
        dirs = [c.a for c in unit_controls(4)]
        assert dirs == [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]

    def test_32_controls_norms_and_diagonal(self):
        ctrls = unit_controls(32)
        assert len(ctrls) == 32
        for c in ctrls:
            assert abs(math.hypot(*c.a) - 1.0) < 1e-12
        assert len({c.a for c in ctrls}) == 32
        ax, ay = ctrls[4].a
        assert ax == pytest.approx(math.cos(math.pi / 4), abs=1e-15)
        assert ay == pytest.approx(math.sin(math.pi / 4), abs=1e-15)

    def test_axis_controls_have_exact_zero_components(self):
        for nc in (4, 8, 32, 64):
            ctrls = unit_controls(nc)
            q = nc // 4
            assert ctrls[0].a == (1.0, 0.0)
            assert ctrls[q].a == (0.0, 1.0)
            assert ctrls[2 * q].a == (-1.0, 0.0)
            assert ctrls[3 * q].a == (0.0, -1.0)

    def test_rejects_bad_counts(self):
        for bad in (0, 2, 3, 6, 30, -4):
            with pytest.raises(ValueError):
                unit_controls(bad)


class TestMCoeff:
    def test_zero_weights_collapse_to_one(self):
        assert m_coeff(0.0, 0.0, (0.3, -0.95)) == 1.0

    def test_perpendicular_direction_gives_one(self):
        a = (-1 / math.sqrt(5), 2 / math.sqrt(5))
        assert m_coeff(10.0, 5.0, a) == pytest.approx(1.0, abs=1e-15)

    def test_hand_value_along_x(self):
        assert m_coeff(10.0, 5.0, (1.0, 0.0)) == pytest.approx(1.0 / math.sqrt(101.0), abs=1e-16)

    def test_range_property(self):
        rng = np.random.default_rng(0)
        for _ in range(2000):
            lam, mu = rng.uniform(-20, 20, size=2)
            th = rng.uniform(0, 2 * math.pi)
            a = (math.cos(th), math.sin(th))
            m = m_coeff(lam, mu, a)
            assert 0.0 < m <= 1.0
            if m == 1.0:
                assert abs(lam * a[0] + mu * a[1]) < 1e-7


class TestSinusoid:
    C1, C2, C3, C4 = 0.1225, 2.0, 0.5, 0.0

    def test_value_and_slope_at_zero(self):
        c, cp = sinusoid_C(self.C1, self.C2, self.C3, self.C4, 0.0)
        assert c == 0.0
        assert cp == pytest.approx(0.1225 * 4 * math.pi, rel=1e-15)

    def test_crest(self):
        c, cp = sinusoid_C(self.C1, self.C2, self.C3, self.C4, 0.125)
        assert c == pytest.approx(0.1225, rel=1e-15)
        assert cp == pytest.approx(0.0, abs=1e-12)

    def test_phase_shift(self):
        c, cp = sinusoid_C(0.7, 1.0, 1.0, math.pi / 2, 0.0)
        assert c == pytest.approx(0.7, rel=1e-15)
        assert cp == pytest.approx(0.0, abs=1e-12)

    def test_zero_c3_rejected(self):
        with pytest.raises(ValueError):
            sinusoid_C(1.0, 1.0, 0.0, 0.0, 0.5)


class TestLayerParams:
    ARGS = (0.1225, 2.0, 0.5, 0.0)

    def test_below_interface(self):
        f1, f2, p, q = layer_params(0.2, -0.4, *self.ARGS)
        assert (f1, f2) == (0.5, 1.0)
        _, cp = sinusoid_C(*self.ARGS, 0.2)
        assert -q == pytest.approx(math.sqrt(3.0 / (1.0 + cp * cp)), rel=1e-14)

    def test_above_interface_at_crest(self):
        f1, f2, p, q = layer_params(0.125, 0.3, *self.ARGS)
        assert (f1, f2) == (2.0, 3.0)
        assert p == pytest.approx(0.0, abs=1e-12)
        assert q == pytest.approx(-math.sqrt(1.25), rel=1e-12)

    def test_interface_belongs_to_lower_layer(self):
        c, _ = sinusoid_C(*self.ARGS, 0.2)
        f1, f2, _, _ = layer_params(0.2, c, *self.ARGS)
        assert (f1, f2) == (0.5, 1.0)

    def test_discontinuous_only_across_interface(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            x = float(rng.uniform(-0.5, 0.5))
            c, _ = sinusoid_C(*self.ARGS, x)
            y = float(rng.uniform(-0.5, 0.5))
            f1a, f2a, *_ = layer_params(x, y, *self.ARGS)
            f1b, f2b, *_ = layer_params(x, y, *self.ARGS)
            assert (f1a, f2a) == (f1b, f2b)
            expected = (0.5, 1.0) if y <= c else (2.0, 3.0)
            assert (f1a, f2a) == expected


class TestDynamics:
    def test_hjb2_speed_jump(self):
        spec = builtin("hjb2")
        a = spec.controls[0]
        assert eval_dynamics(spec, 1.5, 0.0, a.a) == (5.0, 0.0)
        assert eval_dynamics(spec, 0.5, 0.0, a.a) == (1.0, 0.0)
        assert eval_dynamics(spec, 1.0, 0.0, a.a) == (1.0, 0.0)  # strict x > 1

    def test_hjb1_identity(self):
        spec = builtin("hjb1")
        up = spec.controls[8]
        assert up.a == (0.0, 1.0)
        assert eval_dynamics(spec, -1.3, 0.7, up.a) == (0.0, 1.0)

    def test_hjb5_perpendicular_magnitude(self):
        spec = builtin("hjb5")
        a = (-1 / math.sqrt(5), 2 / math.sqrt(5))
        fx, fy = eval_dynamics(spec, 1.0, 1.0, a)
        assert math.hypot(fx, fy) == pytest.approx(3.0, rel=1e-14)

    def test_hjb2_takes_exactly_two_speeds(self):
        spec = builtin("hjb2")
        grid = build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, 41, spec.target_points)
        speeds = set()
        for i in range(41):
            for j in range(41):
                x, y = position(grid, i, j)
                fx, fy = eval_dynamics(spec, x, y, (1.0, 0.0))
                speeds.add(fx)
        assert speeds == {1.0, 5.0}

    def test_min_speed_positive_on_all_builtins(self):
        for pid in BUILTIN_IDS:
            spec = builtin(pid)
            grid = build_grid(spec.xmin, spec.xmax, spec.ymin, spec.ymax, 21, spec.target_points)
            smin = math.inf
            for i in range(21):
                for j in range(21):
                    x, y = position(grid, i, j)
                    for c in spec.controls:
                        smin = min(smin, spec.speed(x, y, c.a))
            assert smin > 0.0


class TestBuiltins:
    def test_hjb4_setup(self):
        spec = builtin("hjb4")
        assert (spec.xmin, spec.xmax, spec.ymin, spec.ymax) == (-0.5, 0.5, -0.5, 0.5)
        assert spec.param("c1") == 0.1225
        assert spec.param("c2") == 2.0
        assert spec.param("c3") == 0.5
        assert spec.param("c4") == 0.0

    def test_hjb3_setup(self):
        spec = builtin("hjb3")
        assert spec.param("lam") == 10.0
        assert spec.param("mu") == 5.0

    def test_hjb1_setup(self):
        spec = builtin("hjb1")
        assert (spec.xmin, spec.xmax) == (-2.0, 2.0)
        assert len(spec.controls) == 32
        assert spec.target_points == ((0.0, 0.0),)

    def test_id_normalization(self):
        assert builtin("HJB-1").pid == "hjb1"
        assert builtin("HJB5").pid == "hjb5"

    def test_unknown_id_rejected(self):
        with pytest.raises(ValueError):
            builtin("hjb6")

    def test_make_problem_rejects_unknown_params(self):
        with pytest.raises(ValueError):
            make_problem("hjb3", gamma=2.0)


class TestProblemFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "prob.txt"
        path.write_text(
            "# anisotropic toy\n"
            "template = hjb3\n"
            "lam = 4\n"
            "mu = -1.5\n"
            "xmin = -1\n"
            "xmax = 1\n"
            "ymin = -1\n"
            "ymax = 1\n"
            "n_controls = 16\n"
            "target_x = 0.5\n"
            "target_y = 0.0\n",
            encoding="utf-8",
        )
        spec = load_problem_file(path)
        assert spec.pid == "hjb3"
        assert spec.param("lam") == 4.0
        assert spec.param("mu") == -1.5
        assert len(spec.controls) == 16
        assert spec.target_points == ((0.5, 0.0),)

    def test_missing_template_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("lam = 3\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_problem_file(path)

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("template = hjb1\nnonsense line\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_problem_file(path)
