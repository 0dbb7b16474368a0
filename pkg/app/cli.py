"""
Command line: ``python -m app analyze "<poly>" [options]``.

Exit codes: 0 success, 2 parse error, 3 unsupported input, 4 LICQ failure,
5 truncation exhausted, 1 other precondition errors, 70 internal inconsistency.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import typer
from rich.console import Console

from app.core.config import get_settings
from app.core.exceptions import LICQFailureError, TangencyError, TruncationExhaustedError
from app.core.logging_config import setup_logging
from app.services.analysis_service import AnalysisService, PsiCheckOptions
from app.services.classifier_service import StabilityKind
from app.services.report_service import ReportRenderer, to_json

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="tangency",
    help="Classify polynomial optimization problems in two variables via the tangency variety.",
    no_args_is_help=True,
    add_completion=False,
)
err_console = Console(stderr=True)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    setup_logging(log_level or get_settings().log_level)


def _fail(error: TangencyError) -> None:
    err_console.print(f"[bold red]error:[/bold red] {error.message}")
    if isinstance(error, LICQFailureError) and error.witness_box is not None:
        (xlo, xhi), (ylo, yhi) = error.witness_box
        err_console.print(f"  witness point in [{xlo}, {xhi}] x [{ylo}, {yhi}]")
    if isinstance(error, TruncationExhaustedError) and error.prefix:
        err_console.print(f"  colliding branch prefix: {' + '.join(error.prefix)}")
    raise typer.Exit(code=error.exit_code)


@app.command()
def analyze(
    poly: str = typer.Argument(..., help="Objective, e.g. 'x^2*y^4 + x^4*y^2 - 3*x^2*y^2 + 1'"),
    constraint: Optional[str] = typer.Option(None, "--constraint", help="Equality constraint g, read as g = 0"),
    sublevel: Optional[str] = typer.Option(None, "--sublevel", help="Rational level of the sublevel-set query"),
    stability: Optional[str] = typer.Option(None, "--stability", help="'epsilon,alpha' of the stability query"),
    stability_kind: StabilityKind = typer.Option(
        StabilityKind.BOUNDEDNESS, "--stability-kind", help="Property whose stability is tested"
    ),
    as_json: bool = typer.Option(False, "--json", help="Emit the JSON report document"),
    psi_check: Tuple[float, float, int] = typer.Option(
        (None, None, None), "--psi-check", help="t_min t_max n: numeric cross-check on log-spaced radii"
    ),
    psi_csv: Optional[Path] = typer.Option(None, "--psi-csv", help="Write the psi profile as CSV (with --psi-check)"),
    max_order: Optional[int] = typer.Option(None, "--max-order", help="Truncation order, read as -|N|"),
    precision: Optional[int] = typer.Option(None, "--precision", min=1, max=100, help="Digits of decimal annotations"),
):
    """Analyze POLY on the plane or on the curve given by --constraint."""
    check = None
    if psi_check[0] is not None:
        t_min, t_max, points = psi_check
        if not 0 < t_min < t_max or points < 2:
            err_console.print("[bold red]error:[/bold red] --psi-check needs 0 < t_min < t_max and n >= 2")
            raise typer.Exit(code=2)
        check = PsiCheckOptions(t_min=t_min, t_max=t_max, points=points, csv_path=psi_csv)
    elif psi_csv is not None:
        err_console.print("[yellow]--psi-csv is ignored without --psi-check[/yellow]")

    service = AnalysisService(max_order=max_order, precision=precision)
    try:
        outcome = service.run(poly, constraint, sublevel, stability, stability_kind, check)
    except TangencyError as e:
        logger.error(f"Analysis of '{poly}' failed: {e.message}")
        _fail(e)

    if as_json:
        typer.echo(to_json(outcome.document).decode("utf-8"))
    else:
        ReportRenderer(Console()).render(outcome.document)


def run(argv: Optional[list] = None) -> int:
    """Entry point returning the exit code instead of exiting."""
    try:
        result = app(args=argv, standalone_mode=False)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except Exception as e:
        # click usage errors surface here in non-standalone mode
        exit_code = getattr(e, "exit_code", 1)
        err_console.print(f"[bold red]error:[/bold red] {e}")
        return exit_code
    return result if isinstance(result, int) else 0
