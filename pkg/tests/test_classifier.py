from fractions import Fraction

import pytest

from app.core.exceptions import PreconditionError
from app.services.algebraic_numbers import ExtendedValue, Sign
from app.services.classifier_service import (
    AnalysisConfig,
    StabilityKind,
    SublevelVerdict,
    analyze,
    analyze_radial,
    stability_report,
    sublevel_compactness,
)
from app.services.expression_parser import parse_polynomial


def floats(values):
    return [v.to_float() for v in values]


class TestSaddleCubic:
    def test_branches(self, saddle_report):
        assert [b.label for b in saddle_report.branches] == [
            "x=+t, y=0",
            "x=-t, y=0",
            "y=+t, x=0",
            "y=+t, x=-2",
            "y=-t, x=0",
            "y=-t, x=-2",
        ]
        assert sorted(b.alpha for b in saddle_report.branches) == [2, 2, 2, 2, 3, 3]

    def test_verdicts(self, saddle_report):
        assert not saddle_report.bounded_below
        assert not saddle_report.bounded_above
        assert saddle_report.infimum.is_neg_inf
        assert saddle_report.lambda_star.is_neg_inf
        assert not saddle_report.attained
        assert not saddle_report.coercive
        assert floats(saddle_report.critical.values) == [0.0]

    def test_sublevel_needs_bounded_below(self, saddle_report):
        with pytest.raises(PreconditionError):
            sublevel_compactness(saddle_report, Fraction(0))


class TestMotzkin:
    def test_branches(self, motzkin_report):
        report = motzkin_report
        assert len(report.branches) == 8
        constant = [b for b in report.branches if b.is_constant]
        growing = [b for b in report.branches if not b.is_constant]
        assert len(constant) == 4
        assert all(b.limit == ExtendedValue.finite(1) for b in constant)
        assert len(growing) == 4
        for b in growing:
            assert b.series == "2*t^6 - 3*t^4 + 1"
            assert b.alpha == 6
            assert b.a_sign is Sign.POSITIVE
            assert b.a_norm_numeric == pytest.approx(0.25)
        assert report.nonconstant_indices == [b.index for b in growing]

    def test_verdicts(self, motzkin_report):
        report = motzkin_report
        assert floats(report.t_infinity) == [1.0]
        assert floats(report.critical.values) == [0.0, 1.0]
        assert report.bounded_below
        assert report.infimum == ExtendedValue.finite(0)
        assert report.attained
        assert report.argmin_nonempty_compact
        assert report.lambda_star == ExtendedValue.finite(1)
        assert not report.coercive
        assert report.alpha_star == 0

    @pytest.mark.parametrize(
        "level,verdict",
        [
            (Fraction(1, 2), SublevelVerdict.COMPACT),
            (Fraction(-3), SublevelVerdict.COMPACT),
            (Fraction(1), SublevelVerdict.UNBOUNDED),
            (Fraction(2), SublevelVerdict.UNBOUNDED),
        ],
    )
    def test_sublevel(self, motzkin_report, level, verdict):
        assert motzkin_report.sublevel(level) is verdict

    def test_stability_witness_on_a_constant_branch(self, motzkin_report):
        verdict = stability_report(motzkin_report, Fraction(1, 10), Fraction(1))
        assert verdict.verdict == "UnstableWitness"
        assert verdict.beta == Fraction(1, 2)
        assert 0 < verdict.beta <= 1
        assert verdict.branch in {b.label for b in motzkin_report.branches if b.is_constant}
        assert verdict.witness() == "g(x) = -1/10*|x|^(1/2)"

    def test_bounded_perturbations_are_harmless(self, motzkin_report):
        verdict = motzkin_report.stability(Fraction(5), Fraction(0))
        assert verdict.verdict == "Stable"
        assert "Attainment" in verdict.note

    def test_coercivity_stability_needs_coercivity(self, motzkin_report):
        with pytest.raises(PreconditionError):
            motzkin_report.stability(Fraction(1), Fraction(1), kind=StabilityKind.COERCIVITY)

    def test_epsilon_must_be_positive(self, motzkin_report):
        with pytest.raises(PreconditionError):
            motzkin_report.stability(Fraction(0), Fraction(1))


class TestValley:
    def test_verdicts(self, valley_report):
        report = valley_report
        assert len(report.branches) == 8
        assert floats(report.t_infinity) == [0.0]
        assert floats(report.critical.values) == [1.0]
        assert report.bounded_below
        assert report.infimum == ExtendedValue.finite(0)
        assert not report.attained
        assert not report.argmin_nonempty_compact
        assert report.lambda_star == ExtendedValue.finite(0)
        assert not report.coercive
        assert report.alpha_star == -2

    def test_branch_exponents(self, valley_report):
        assert sorted(b.alpha for b in valley_report.branches) == [-2, -2, 2, 2, 4, 4, 4, 4]

    def test_infimum_level_is_compact(self, valley_report):
        # the minimal branches approach 0 from above
        assert valley_report.sublevel(Fraction(0)) is SublevelVerdict.COMPACT
        assert valley_report.sublevel(Fraction(1, 100)) is SublevelVerdict.UNBOUNDED

    def test_stability(self, valley_report):
        verdict = valley_report.stability(Fraction(1, 10), Fraction(1))
        assert verdict.verdict == "UnstableWitness"
        assert verdict.beta == Fraction(1, 2)


class TestRadial:
    def test_verdicts(self, radial_report):
        report = radial_report
        assert report.radial_profile is not None
        assert report.tangency is None
        assert report.coercive
        assert report.lambda_star.is_pos_inf
        assert report.infimum == ExtendedValue.finite(0)
        assert report.attained and report.argmin_nonempty_compact
        assert report.alpha_star == 2
        assert report.t_infinity == []

    def test_stability_threshold(self, radial_report):
        verdict = radial_report.stability(Fraction(1, 4), Fraction(2))
        assert verdict.verdict == "Stable"
        assert verdict.threshold == Fraction(1, 2)
        assert radial_report.stability(Fraction(1), Fraction(2)).verdict == "Indeterminate"
        assert radial_report.stability(Fraction(100), Fraction(1)).verdict == "Stable"

    def test_coercivity_stability(self, radial_report):
        verdict = radial_report.stability(Fraction(1), Fraction(3), kind=StabilityKind.COERCIVITY)
        assert verdict.verdict == "UnstableWitness"
        assert verdict.beta == Fraction(5, 2)

    def test_ring_valley(self):
        f = parse_polynomial("(x^2 + y^2 - 1)^2")
        report = analyze_radial(f)
        assert report.infimum == ExtendedValue.finite(0)
        assert report.attained and report.argmin_nonempty_compact
        assert report.coercive
        assert report.alpha_star == 4
        assert analyze(f).alpha_star == report.alpha_star

    def test_every_level_is_compact(self, radial_report):
        assert radial_report.sublevel(Fraction(10**6)) is SublevelVerdict.COMPACT

    def test_constant_objective(self):
        report = analyze(parse_polynomial("7"))
        assert report.bounded_below and report.bounded_above
        assert report.infimum == ExtendedValue.finite(7)
        assert report.attained
        assert not report.argmin_nonempty_compact
        assert report.critical.has_positive_dimensional_part


class TestCoercive:
    def test_quartic(self, quartic_report):
        report = quartic_report
        assert len(report.branches) == 8
        assert all(b.alpha == 4 for b in report.branches)
        assert report.coercive
        assert report.lambda_star.is_pos_inf
        assert report.infimum == ExtendedValue.finite(0)
        assert report.attained and report.argmin_nonempty_compact
        assert report.sublevel(Fraction(5)) is SublevelVerdict.COMPACT

    def test_quartic_coercivity_is_stable_below_its_growth(self, quartic_report):
        verdict = quartic_report.stability(Fraction(3), Fraction(2), kind=StabilityKind.COERCIVITY)
        assert verdict.verdict == "Stable"


class TestAttainment:
    def test_x_squared_attains_on_a_line(self):
        report = analyze(parse_polynomial("x^2"))
        assert report.bounded_below
        assert report.infimum == ExtendedValue.finite(0)
        assert report.attained
        assert not report.argmin_nonempty_compact
        assert report.lambda_star == ExtendedValue.finite(0)
        assert report.alpha_star == 0
        assert report.stability(Fraction(1), Fraction(0)).verdict == "Stable"


class TestCurveMode:
    def test_linear_objective_on_a_parabola(self, parabola):
        report = analyze(parse_polynomial("x"), parabola)
        assert len(report.branches) == 2
        assert all(b.alpha == Fraction(1, 2) for b in report.branches)
        assert not report.bounded_below and not report.bounded_above
        assert report.critical.values == []

    def test_height_on_a_parabola(self, parabola):
        report = analyze(parse_polynomial("y"), parabola)
        assert report.coercive
        assert report.infimum == ExtendedValue.finite(0)
        assert report.attained and report.argmin_nonempty_compact
        assert report.alpha_star == 1


class TestConfig:
    def test_max_order_sign_is_ignored(self):
        assert AnalysisConfig(max_order=20).resolved_order() == -20
        assert AnalysisConfig(max_order=-20).resolved_order() == -20
        assert AnalysisConfig().resolved_order() is None

    def test_explicit_order_is_reported(self):
        report = analyze(parse_polynomial("x^4 + y^4"), config=AnalysisConfig(max_order=30))
        assert report.max_order == -30
        assert report.escalations == []
