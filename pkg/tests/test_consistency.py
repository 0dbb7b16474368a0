"""Coercivity, compactness and attainment verdicts must agree with each other."""

import numpy as np
import pytest

from app.core.exceptions import TruncationExhaustedError
from app.services.classifier_service import analyze
from app.services.expression_parser import parse_polynomial
from tests.helpers import MOTZKIN, SADDLE_CUBIC, VALLEY, random_polynomial

pytestmark = pytest.mark.slow

SEED = 20240611


def random_report(index: int):
    f = random_polynomial(np.random.default_rng([SEED, index]), max_degree=6, max_coefficient=5, max_terms=5)
    try:
        return analyze(f)
    except TruncationExhaustedError as e:
        pytest.skip(f"{f}: {e.message}")


def assert_consistent(report):
    if report.coercive:
        assert report.argmin_nonempty_compact
    if report.argmin_nonempty_compact:
        assert report.attained
    if report.attained:
        assert report.bounded_below and report.infimum.is_finite
    assert report.coercive == report.lambda_star.is_pos_inf
    assert report.bounded_below == (not report.infimum.is_neg_inf)
    assert not report.lambda_star < report.infimum
    if report.branches:
        assert report.coercive == all(b.limit.is_pos_inf for b in report.branches)


class TestVerdictConsistency:
    @pytest.mark.parametrize("text", [MOTZKIN, SADDLE_CUBIC, VALLEY])
    def test_fixtures(self, text):
        assert_consistent(analyze(parse_polynomial(text)))

    @pytest.mark.parametrize("index", range(200))
    def test_random_polynomials(self, index):
        assert_consistent(random_report(index))
