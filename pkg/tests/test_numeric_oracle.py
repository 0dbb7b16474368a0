import csv
import math
from fractions import Fraction

import numpy as np
import pytest

from app.services.algebraic_numbers import ExtendedValue
from app.services.classifier_service import analyze
from app.services.expression_parser import parse_polynomial
from app.services.numeric_oracle import (
    PsiSample,
    branch_minimum,
    brute_force_min,
    check_report,
    expected_approach,
    fit_profile,
    growth_exponent,
    perturbed_objective,
    psi,
    psi_profile,
    trace_branch,
    witness_objective,
    write_profile_csv,
)
from app.services.tangency_service import FeasibleSet
from tests.helpers import RADIAL, SADDLE_CUBIC

PLANE = FeasibleSet.plane()


class TestPsi:
    def test_motzkin_is_one_on_large_circles(self, motzkin):
        for t in (10.0, 50.0, 200.0):
            assert psi(motzkin, PLANE, t) == pytest.approx(1.0, abs=1e-9)

    def test_saddle_cubic(self):
        # x^3 - 3y^2 on the circle is x^3 + 3x^2 - 300, least at x = -10
        assert psi(parse_polynomial(SADDLE_CUBIC), PLANE, 10.0) == pytest.approx(-1000.0, rel=1e-9)

    def test_narrow_valley_is_resolved(self, valley):
        value = psi(valley, PLANE, 50.0)
        assert 0 < value < 1e-3

    def test_curve_mode(self, parabola):
        # on y = x^2 the circle of radius 10 meets x^2 = (sqrt(401) - 1)/2
        expected = -math.sqrt((math.sqrt(401.0) - 1.0) / 2.0)
        assert psi(parse_polynomial("x"), parabola, 10.0) == pytest.approx(expected, rel=1e-9)

    def test_curve_missing_the_circle(self):
        line = FeasibleSet.curve(parse_polynomial("x - 20"))
        assert psi(parse_polynomial("y"), line, 10.0) == math.inf

    def test_radius_must_be_positive(self, motzkin):
        with pytest.raises(ValueError):
            psi(motzkin, PLANE, 0.0)


class TestProfile:
    def test_log_spaced_radii(self):
        f = parse_polynomial("x^2 + y^2")
        profile = psi_profile(f, PLANE, 10.0, 1000.0, 3)
        assert profile.radii() == pytest.approx([10.0, 100.0, 1000.0])
        assert profile.values() == pytest.approx([100.0, 1e4, 1e6])
        assert profile.fit.exponent == pytest.approx(2.0, abs=1e-6)

    def test_fit_around_a_limit(self):
        samples = [PsiSample(t=t, psi=1.0 + 3.0 * t**-2) for t in (10.0, 100.0, 1000.0)]
        fit = fit_profile(samples, limit=1.0)
        assert fit.exponent == pytest.approx(-2.0, abs=1e-6)

    def test_valley_approaches_its_limit_like_an_inverse_square(self, valley, valley_report):
        limit = valley_report.lambda_star.to_float()
        profile = psi_profile(valley, PLANE, 10.0, 1000.0, 5, limit=limit)
        assert profile.fit.exponent == pytest.approx(-2.0, abs=0.1)

    def test_growth_exponent_ignores_the_constant(self):
        values = [5.0 + 3.0 * t**2 for t in (10.0, 100.0, 1000.0)]
        assert growth_exponent(*values, ratio=10.0) == pytest.approx(2.0)
        assert growth_exponent(1.0, 1.0, 1.0, ratio=10.0) is None

    def test_constant_profile_has_no_exponent(self, motzkin):
        profile = psi_profile(motzkin, PLANE, 10.0, 100.0, 4, limit=1.0)
        assert profile.fit.exponent is None

    def test_bad_range(self, motzkin):
        with pytest.raises(ValueError):
            psi_profile(motzkin, PLANE, 10.0, 1.0, 3)

    def test_csv_export(self, motzkin, tmp_path):
        profile = psi_profile(motzkin, PLANE, 10.0, 100.0, 3)
        path = tmp_path / "psi.csv"
        write_profile_csv(profile, path)
        with open(path, newline="", encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["t", "psi", "argmin_theta"]
        assert len(rows) == 4
        assert float(rows[1][1]) == pytest.approx(1.0)


class TestBruteForce:
    def test_motzkin_minimum(self, motzkin):
        assert brute_force_min(motzkin, PLANE, 2.0, 401) == pytest.approx(0.0, abs=1e-9)

    def test_curve_mode(self, parabola):
        assert brute_force_min(parse_polynomial("y"), parabola, 3.0, 301) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("half_width", [5.0, 20.0, 80.0])
    def test_growing_boxes_stay_above_the_infimum(self, motzkin, motzkin_report, valley, valley_report, half_width):
        for f, report in ((motzkin, motzkin_report), (valley, valley_report)):
            assert brute_force_min(f, PLANE, half_width, 801) >= report.infimum.to_float() - 1e-9
        # the grid contains (1, 1), where the minimum is attained
        assert brute_force_min(motzkin, PLANE, half_width, 801) == pytest.approx(0.0, abs=1e-3)

    def test_grid_too_small(self, motzkin):
        with pytest.raises(ValueError):
            brute_force_min(motzkin, PLANE, 1.0, 1)


class TestBranchTracing:
    def test_points_have_the_requested_norm(self, valley_report):
        for branch in valley_report.branch_data:
            point = trace_branch(branch, 30.0)
            assert math.hypot(point.x, point.y) == pytest.approx(30.0, rel=1e-10)

    @pytest.mark.parametrize("radius", [10.0, 50.0, 200.0])
    def test_psi_matches_the_branches(self, valley, valley_report, motzkin, motzkin_report, radius):
        for f, report in ((valley, valley_report), (motzkin, motzkin_report)):
            numeric = psi(f, PLANE, radius)
            assert abs(numeric - branch_minimum(report, radius)) <= 1e-4 * (1.0 + abs(numeric))

    def test_radial_branch_minimum(self, radial_report):
        assert branch_minimum(radial_report, 10.0) == pytest.approx(100.0)


class TestCheckReport:
    def test_reports_agree_with_sampling(self, motzkin, motzkin_report, valley, valley_report):
        assert check_report(motzkin_report, motzkin, PLANE) == []
        assert check_report(valley_report, valley, PLANE) == []

    def test_unbounded_report_agrees(self, saddle_report):
        assert check_report(saddle_report, parse_polynomial(SADDLE_CUBIC), PLANE) == []

    def test_coercive_report_agrees(self, radial_report):
        assert check_report(radial_report, parse_polynomial("x^2 + y^2"), PLANE) == []

    def test_coercive_objective_with_a_large_constant(self):
        f = parse_polynomial("x^2 + y^2 - 1000000")
        assert check_report(analyze(f), f, PLANE) == []

    def test_expected_approach(self, motzkin_report, valley_report, radial_report):
        assert expected_approach(valley_report) == -2
        assert expected_approach(motzkin_report) is None
        assert expected_approach(radial_report) is None

    def test_corrupted_approach_is_caught(self, valley, valley_report):
        branches = [
            b.model_copy(update={"approach_exponent": Fraction(-4)}) if b.alpha == -2 else b
            for b in valley_report.branches
        ]
        corrupted = valley_report.model_copy(update={"branches": branches})
        found = check_report(corrupted, valley, PLANE)
        assert [d.field for d in found] == ["approach_exponent"]
        assert found[0].claim == "-4"

    def test_corrupted_limit_is_caught(self, motzkin, motzkin_report):
        corrupted = motzkin_report.model_copy(update={"lambda_star": ExtendedValue.finite(2)})
        found = check_report(corrupted, motzkin, PLANE)
        assert [d.field for d in found] == ["lambda_star"]


class TestPerturbation:
    def test_witness_drives_motzkin_down(self, motzkin_report, motzkin):
        verdict = motzkin_report.stability(Fraction(1, 10), Fraction(1))
        g = witness_objective(verdict, motzkin)
        # along the x axis f = 1
        values = [float(g(np.array(t), np.array(0.0))) for t in (1e2, 1e4, 1e6)]
        assert values[0] > values[1] > values[2]
        assert values[2] < 0

    def test_stable_radial_profile_stays_nonnegative(self, radial_report):
        verdict = radial_report.stability(Fraction(1, 4), Fraction(2))
        assert verdict.verdict == "Stable"
        assert witness_objective(verdict, parse_polynomial(RADIAL)) is None
        g = perturbed_objective(parse_polynomial(RADIAL), 0.25, 2.0)
        theta = np.linspace(0.0, 2.0 * np.pi, 360, endpoint=False)
        for t in np.geomspace(1.0, 1e4, 9):
            assert float(g(t * np.cos(theta), t * np.sin(theta)).min()) >= 0.0

    def test_perturbed_objective(self, motzkin):
        g = perturbed_objective(motzkin, 0.5, 2.0)
        assert float(g(np.array(3.0), np.array(0.0))) == pytest.approx(1.0 - 4.5)
