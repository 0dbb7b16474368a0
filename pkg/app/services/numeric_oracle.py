"""
Floating-point cross-checks of the exact engine.

Nothing computed here flows back into a verdict; the oracle only reports
discrepancies between the symbolic report and sampled evidence.
"""

import csv
import logging
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import brentq, minimize_scalar

from app.core.config import get_settings
from app.services.poly_core import MultiPoly, format_fraction

if TYPE_CHECKING:
    from app.services.classifier_service import AnalysisReport, StabilityVerdict
    from app.services.curve_branches import BranchAtInfinity
    from app.services.tangency_service import FeasibleSet

logger = logging.getLogger(__name__)

REFINE_SEEDS = 4
BRACKET_STEPS = 80


class _Evaluator:
    """Vectorised evaluation of a ``MultiPoly`` on numpy arrays."""

    def __init__(self, p: MultiPoly):
        terms = p.terms()
        self.exponents = np.array(list(terms.keys()), dtype=float).reshape(-1, 2)
        self.coefficients = np.array([float(c) for c in terms.values()])

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        total = np.zeros(np.broadcast(x, y).shape)
        for (i, j), c in zip(self.exponents, self.coefficients):
            total = total + c * x**i * y**j
        return total


class PsiSample(BaseModel):
    t: float
    psi: float
    argmin_theta: Optional[float] = None


class PsiFit(BaseModel):
    """Least-squares fit ``log|psi - limit| ~ exponent * log t + offset``."""

    limit: Optional[float] = Field(None, description="Limit subtracted before the fit; None fits psi itself")
    exponent: Optional[float] = Field(None, description="None when psi - limit vanishes numerically")
    offset: Optional[float] = None


class PsiProfile(BaseModel):
    samples: List[PsiSample]
    angular_samples: int
    refine_steps: int
    fit: Optional[PsiFit] = None

    def radii(self) -> List[float]:
        return [s.t for s in self.samples]

    def values(self) -> List[float]:
        return [s.psi for s in self.samples]


class TracePoint(BaseModel):
    t: float = Field(..., description="Branch parameter")
    x: float
    y: float
    objective: float = Field(..., description="Truncated objective series at t")


class Discrepancy(BaseModel):
    field: str
    claim: str
    evidence: str


class OracleTolerances(BaseModel):
    radii: Tuple[float, float] = (100.0, 1000.0)
    relative: float = 1e-4
    limit: float = 1e-2
    exponent: float = 0.25
    box_half_width: float = 5.0
    grid: int = 401


def _circle_points(t: float, theta):
    return t * np.cos(theta), t * np.sin(theta)


def _plane_psi(f: _Evaluator, t: float, samples: int, steps: int) -> Tuple[float, float]:
    theta = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    values = f(*_circle_points(t, theta))
    h = 2.0 * np.pi / samples
    best_value, best_theta = float(values.min()), float(theta[values.argmin()])
    for index in np.argsort(values)[:REFINE_SEEDS]:
        center = theta[index]
        result = minimize_scalar(
            lambda s: float(f(*_circle_points(t, s))),
            bounds=(center - h, center + h),
            method="bounded",
            options={"maxiter": steps, "xatol": 1e-12},
        )
        if result.fun < best_value:
            best_value, best_theta = float(result.fun), float(result.x % (2.0 * np.pi))
    return best_value, best_theta


def _curve_psi(f: _Evaluator, g: _Evaluator, t: float, samples: int) -> Tuple[float, Optional[float]]:
    theta = np.linspace(0.0, 2.0 * np.pi, samples + 1)
    values = g(*_circle_points(t, theta))
    best_value, best_theta = float("inf"), None
    for k in range(samples):
        left, right = values[k], values[k + 1]
        if left == 0.0:
            root = theta[k]
        elif left * right < 0.0:
            root = brentq(lambda s: float(g(*_circle_points(t, s))), theta[k], theta[k + 1], xtol=1e-14)
        else:
            continue
        value = float(f(*_circle_points(t, root)))
        if value < best_value:
            best_value, best_theta = value, float(root)
    return best_value, best_theta


def _psi_with_angle(
    f: MultiPoly, S: "FeasibleSet", t: float, angular_samples: Optional[int], refine_steps: Optional[int]
) -> Tuple[float, Optional[float]]:
    if t <= 0:
        raise ValueError("Radius must be positive")
    settings = get_settings()
    samples = angular_samples or settings.psi_angular_samples
    steps = refine_steps or settings.psi_refine_steps
    if S.mode == "plane":
        return _plane_psi(_Evaluator(f), t, samples, steps)
    return _curve_psi(_Evaluator(f), _Evaluator(S.constraint), t, samples)


def psi(
    f: MultiPoly,
    S: "FeasibleSet",
    t: float,
    angular_samples: Optional[int] = None,
    refine_steps: Optional[int] = None,
) -> float:
    """
    Minimum of ``f`` over ``S`` intersected with the circle of radius ``t``.

    An upper bound of the true minimum; ``+inf`` when the curve misses the circle.
    """
    return _psi_with_angle(f, S, t, angular_samples, refine_steps)[0]


def fit_profile(samples: List[PsiSample], limit: Optional[float] = None) -> PsiFit:
    t = np.array([s.t for s in samples])
    values = np.array([s.psi for s in samples])
    residual = np.abs(values - limit) if limit is not None else np.abs(values)
    scale = 1e-10 * (1.0 + np.abs(values))
    usable = np.isfinite(residual) & (residual > scale)
    if usable.sum() < 2:
        return PsiFit(limit=limit)
    slope, offset = np.polyfit(np.log(t[usable]), np.log(residual[usable]), 1)
    return PsiFit(limit=limit, exponent=float(slope), offset=float(offset))


def psi_profile(
    f: MultiPoly,
    S: "FeasibleSet",
    t_min: float,
    t_max: float,
    n_points: int,
    limit: Optional[float] = None,
    angular_samples: Optional[int] = None,
    refine_steps: Optional[int] = None,
) -> PsiProfile:
    """
    Sample psi at log-spaced radii and fit its power-law behavior.

    Args:
        f: Objective.
        S: Feasible set.
        t_min: Smallest radius, positive.
        t_max: Largest radius, above ``t_min``.
        n_points: Number of radii.
        limit: Value subtracted before fitting; None fits ``|psi|``.
    """
    if not 0 < t_min < t_max:
        raise ValueError("Need 0 < t_min < t_max")
    settings = get_settings()
    samples = angular_samples or settings.psi_angular_samples
    steps = refine_steps or settings.psi_refine_steps
    rows = []
    for t in np.geomspace(t_min, t_max, max(n_points, 2)):
        value, theta = _psi_with_angle(f, S, float(t), samples, steps)
        rows.append(PsiSample(t=float(t), psi=value, argmin_theta=theta))
    profile = PsiProfile(samples=rows, angular_samples=samples, refine_steps=steps)
    profile.fit = fit_profile(rows, limit)
    logger.info(f"psi profile of {f} on [{t_min}, {t_max}]: fitted exponent {profile.fit.exponent}")
    return profile


def write_profile_csv(profile: PsiProfile, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "psi", "argmin_theta"])
        for row in profile.samples:
            theta = "" if row.argmin_theta is None else repr(row.argmin_theta)
            writer.writerow([repr(row.t), repr(row.psi), theta])


def brute_force_min(
    f: MultiPoly, S: "FeasibleSet", box_half_width: float, grid: int, tol: Optional[float] = None
) -> float:
    """
    Minimum of ``f`` over grid points of ``[-w, w]^2``; in curve mode over the points of
    the curve on the grid's vertical lines that pass the ``|g| <= tol`` band.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    fe = _Evaluator(f)
    axis = np.linspace(-box_half_width, box_half_width, grid)
    if S.mode == "plane":
        xs, ys = np.meshgrid(axis, axis)
        return float(fe(xs, ys).min())
    g = S.constraint
    ge = _Evaluator(g)
    band = tol if tol is not None else 1e-9 * (1.0 + box_half_width) ** g.total_degree
    best = float("inf")
    for x0 in axis:
        row = g.at_x(Fraction(float(x0)))
        if row.is_zero:
            ys = axis
        elif row.degree < 1:
            continue
        else:
            roots = np.roots([float(c) for c in row.coefficients])
            ys = roots[np.abs(roots.imag) < 1e-9].real
            ys = ys[np.abs(ys) <= box_half_width]
        if len(ys) == 0:
            continue
        ys = np.asarray(ys)
        xs = np.full_like(ys, x0)
        feasible = np.abs(ge(xs, ys)) <= band * (1.0 + np.abs(ys)) ** g.total_degree
        if feasible.any():
            best = min(best, float(fe(xs[feasible], ys[feasible]).min()))
    return best


def perturbed_objective(f: MultiPoly, epsilon: float, beta: float) -> Callable:
    """Numeric ``f(x, y) - epsilon*|(x, y)|^beta``."""
    fe = _Evaluator(f)

    def objective(x, y):
        return fe(x, y) - epsilon * np.hypot(x, y) ** beta

    return objective


def witness_objective(verdict: "StabilityVerdict", f: MultiPoly) -> Optional[Callable]:
    """Numeric ``f + g`` for the witness perturbation of a stability verdict, if any."""
    if verdict.beta is None:
        return None
    return perturbed_objective(f, float(verdict.epsilon), float(verdict.beta))


def trace_branch(branch: "BranchAtInfinity", radius: float) -> TracePoint:
    """Point of the truncated branch at the given norm and the truncated objective there."""
    kappa = branch.kappa.to_float()
    d = float(branch.d)

    def gap(t: float) -> float:
        x, y = branch.point_at(t)
        return float(np.hypot(x, y)) - radius

    guess = (radius / kappa) ** (1.0 / d)
    lo, hi = guess / 2.0, guess * 2.0
    for _ in range(BRACKET_STEPS):
        if gap(lo) < 0.0 < gap(hi):
            break
        if gap(lo) >= 0.0:
            lo /= 2.0
        if gap(hi) <= 0.0:
            hi *= 2.0
    t = brentq(gap, lo, hi, xtol=1e-13, rtol=1e-15)
    x, y = branch.point_at(t)
    series = branch.objective_series
    value = series.evaluate(t) if series is not None else float("nan")
    return TracePoint(t=t, x=x, y=y, objective=value)


def branch_minimum(report: "AnalysisReport", radius: float) -> float:
    """Minimum over branches of the truncated objective series at the given norm."""
    if report.radial_profile is not None:
        return float(report.radial_profile.evaluate_mpf(radius**2))
    values = [trace_branch(b, radius).objective for b in report.branch_data]
    return min(values) if values else float("inf")


def growth_exponent(p1: float, p2: float, p3: float, ratio: float) -> Optional[float]:
    """
    Exponent of ``psi(t) ~ a*t^alpha + c`` from three radii in geometric progression.

    The additive constant cancels in the ratio of successive differences.
    """
    low, high = p2 - p1, p3 - p2
    if low == 0.0 or high / low <= 0.0:
        return None
    return float(np.log(high / low) / np.log(ratio))


def expected_approach(report: "AnalysisReport") -> Optional[Fraction]:
    """
    Norm-scale exponent of ``psi(t) - lambda_star`` predicted by the branches with limit lambda_star.

    A branch approaching from below dominates; with none, a constant branch pins psi to the
    limit and there is nothing to fit; otherwise the fastest approach from above wins.
    """
    star = report.lambda_star
    if not star.is_finite:
        return None
    at_limit = [a for a in report.branches if a.limit == star]
    moving = [a for a in at_limit if not a.is_constant and a.approach_exponent is not None]
    below = [a.approach_exponent for a in moving if (a.approach_sign or 0) < 0]
    if below:
        return max(below)
    if any(a.is_constant for a in at_limit):
        return None
    above = [a.approach_exponent for a in moving]
    return min(above) if above else None


def check_report(
    report: "AnalysisReport",
    f: MultiPoly,
    S: "FeasibleSet",
    tolerances: Optional[OracleTolerances] = None,
) -> List[Discrepancy]:
    """
    Compare the report with sampled evidence; an empty list means no disagreement.
    """
    tol = tolerances or OracleTolerances()
    found: List[Discrepancy] = []
    r1, r2 = tol.radii
    ratio = r2 / r1
    r3 = r2 * ratio
    p1, p2 = psi(f, S, r1), psi(f, S, r2)
    star = report.lambda_star
    if star.is_finite:
        target = star.to_float()
        if abs(p2 - target) > tol.limit * (1.0 + abs(target)):
            found.append(
                Discrepancy(field="lambda_star", claim=str(star), evidence=f"psi({r2:g}) = {p2:.10g}")
            )
        expected = expected_approach(report)
        if expected is not None:
            fit = fit_profile([PsiSample(t=r1, psi=p1), PsiSample(t=r2, psi=p2)], limit=target)
            if fit.exponent is None or abs(fit.exponent - float(expected)) > tol.exponent:
                fitted = "none" if fit.exponent is None else f"{fit.exponent:.4f}"
                found.append(
                    Discrepancy(
                        field="approach_exponent",
                        claim=format_fraction(expected),
                        evidence=f"fitted exponent of psi - {target:.6g} is {fitted}",
                    )
                )
    else:
        p3 = psi(f, S, r3)
        evidence = f"psi({r1:g}) = {p1:.6g}, psi({r2:g}) = {p2:.6g}, psi({r3:g}) = {p3:.6g}"
        growth = growth_exponent(p1, p2, p3, ratio)
        if star.is_pos_inf:
            rising = p1 < p2 < p3 and growth is not None and growth > 0
            if not rising:
                found.append(Discrepancy(field="lambda_star", claim="+inf", evidence=evidence))
            elif report.alpha_star is not None and abs(growth - float(report.alpha_star)) > tol.exponent:
                found.append(
                    Discrepancy(
                        field="alpha_star",
                        claim=format_fraction(report.alpha_star),
                        evidence=f"fitted growth exponent {growth:.4f}",
                    )
                )
        elif not (p1 > p2 > p3 and growth is not None and growth > 0):
            found.append(Discrepancy(field="lambda_star", claim="-inf", evidence=evidence))

    if report.infimum.is_finite:
        brute = brute_force_min(f, S, tol.box_half_width, tol.grid)
        if brute < report.infimum.to_float() - 1e-9 * (1.0 + abs(brute)):
            found.append(
                Discrepancy(
                    field="infimum",
                    claim=str(report.infimum),
                    evidence=f"f = {brute:.12g} on the box of half-width {tol.box_half_width:g}",
                )
            )
    for d in found:
        logger.warning(f"Oracle disagrees on {d.field}: claim {d.claim}, evidence {d.evidence}")
    return found
