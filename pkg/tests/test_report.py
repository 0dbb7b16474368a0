from fractions import Fraction

import orjson
import pytest
from rich.console import Console

from app.core.exceptions import InternalConsistencyError
from app.services.algebraic_numbers import RealAlgebraic
from app.services.classifier_service import SublevelVerdict
from app.services.poly_core import UniPoly
from app.services.report_service import (
    ReportRenderer,
    algebraic_document,
    build_document,
    from_json,
    to_json,
    validate_payload,
)


class TestAlgebraicDocument:
    def test_rational(self):
        doc = algebraic_document(RealAlgebraic.from_rational(Fraction(-3, 2)), 6)
        assert doc.exact == "-3/2"
        assert doc.interval == ["-3/2", "-3/2"]
        assert doc.approx == "-1.5"

    def test_irrational_keeps_polynomial_and_interval(self):
        root = RealAlgebraic.roots_of(UniPoly.from_coefficients([1, 0, -2]))[1]
        doc = algebraic_document(root, 12)
        assert doc.exact is None
        assert doc.defining_polynomial == "x^2 - 2"
        lo, hi = (Fraction(v) for v in doc.interval)
        assert lo * lo <= 2 <= hi * hi
        assert doc.approx.startswith("1.41421356237")


class TestReportDocument:
    def test_motzkin_document(self, motzkin_report):
        doc = build_document(motzkin_report, sublevel=("1/2", SublevelVerdict.COMPACT))
        assert doc.mode == "plane"
        assert doc.bounded_below and doc.attained and doc.argmin_nonempty_compact
        assert not doc.coercive
        assert doc.infimum.exact == "0"
        assert doc.lambda_star.exact == "1"
        assert [v.exact for v in doc.t_infinity] == ["1"]
        assert [v.exact for v in doc.critical_values] == ["0", "1"]
        assert doc.alpha_star == "0"
        assert doc.sublevel.verdict == "Compact"
        assert len(doc.branches) == 8

    def test_infinite_values(self, saddle_report):
        doc = build_document(saddle_report)
        assert doc.infimum == "-inf"
        assert doc.lambda_star == "-inf"
        assert {b.limit for b in doc.branches if isinstance(b.limit, str)} == {"+inf", "-inf"}

    def test_radial_document(self, radial_report):
        doc = build_document(radial_report, stability=radial_report.stability(Fraction(1, 4), Fraction(2)))
        assert doc.radial_profile == "s"
        assert doc.tangency_polynomial is None
        assert doc.lambda_star == "+inf"
        assert doc.stability.verdict == "Stable"
        assert doc.stability.threshold == "1/2"

    def test_stability_witness(self, motzkin_report):
        verdict = motzkin_report.stability(Fraction(1, 10), Fraction(1))
        doc = build_document(motzkin_report, stability=verdict)
        assert doc.stability.verdict == "UnstableWitness"
        assert doc.stability.beta == "1/2"
        assert doc.stability.witness == "g(x) = -1/10*|x|^(1/2)"


class TestJson:
    def test_json_validates_and_reads_back(self, valley_report):
        doc = build_document(valley_report, sublevel=("0", SublevelVerdict.COMPACT))
        data = to_json(doc)
        payload = orjson.loads(data)
        assert payload["attained"] is False
        assert payload["infimum"]["exact"] == "0"
        assert payload["alpha_star"] == "-2"
        assert from_json(data) == doc

    def test_keys_are_sorted(self, radial_report):
        payload = orjson.loads(to_json(build_document(radial_report)))
        assert list(payload) == sorted(payload)

    def test_schema_rejects_unknown_fields(self, radial_report):
        payload = orjson.loads(to_json(build_document(radial_report)))
        payload["extra"] = 1
        with pytest.raises(InternalConsistencyError):
            validate_payload(payload)

    def test_schema_rejects_decimal_rationals(self, radial_report):
        payload = orjson.loads(to_json(build_document(radial_report)))
        payload["alpha_star"] = "2.0"
        with pytest.raises(InternalConsistencyError):
            validate_payload(payload)


class TestRenderer:
    def test_human_output(self, motzkin_report):
        console = Console(record=True, width=160)
        ReportRenderer(console).render(build_document(motzkin_report))
        text = console.export_text()
        assert "Branches at infinity" in text
        assert "bounded below" in text
        assert "lambda*" in text
        assert "2*t^6 - 3*t^4 + 1" in text
