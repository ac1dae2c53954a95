"""Running verification matrices over primes and l values."""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

from .config import DEFAULT_SETTINGS, Settings
from .errors import PreconditionError
from .models import VerificationMatrix, VerificationRow
from .padic import verify_theorem_b
from .stickelberger import plus_quotient_analysis, stickelberger_cover, verify_theorem_a
from .voltage import induction_check, inflation_check, product_decomposition_check

logger = logging.getLogger(__name__)

Cell = Tuple[str, int, Optional[int]]


def artin_formalism_report(p: int, settings: Optional[Settings] = None) -> Dict:
    """Product decomposition, inflation over every subgroup and induction over 1, <j> and Δ.

    Induction needs a group-ring determinant of size [Δ : H]; subgroups whose index
    exceeds the cofactor limit are reported as None.
    """
    settings = settings or DEFAULT_SETTINGS
    cover = stickelberger_cover(p, settings=settings)
    group = cover.group
    product = product_decomposition_check(cover.voltage, settings)
    inflation = {}
    for h in group.subgroups():
        inflation[f"order {h.order}"] = inflation_check(cover.voltage, h, settings)
    induction = {}
    for name, h in (('trivial', group.subgroup([])),
                    ('plus', cover.units.plus_subgroup()),
                    ('full', group.subgroup([(1,)]))):
        if h.index > settings.cofactor_warn_size:
            induction[name] = None
            continue
        induction[name] = induction_check(cover.voltage, h, settings)
    holds = bool(product) and all(inflation.values()) and all(v for v in induction.values() if v is not None)
    return {
        'product_decomposition': product.to_dict(),
        'inflation': inflation,
        'induction': induction,
        'holds': holds,
    }


def run_cell(cell: Cell, settings: Optional[Settings] = None) -> VerificationRow:
    """Execute one (check, p, l) cell; failures are recorded, never raised."""
    settings = settings or DEFAULT_SETTINGS
    check, p, ell = cell
    if check == 'b' and ell is not None and (p - 1) % ell == 0:
        notice = f"skipped: l = {ell} divides p - 1 = {p - 1}"
        logger.warning("p = %d, l = %d %s", p, ell, notice)
        return VerificationRow(check, p, ell, 'skipped', notice)
    if check == 'a':
        record = verify_theorem_a(p, settings)
        data, holds = record.to_dict(), record.holds
    elif check == 'b':
        record_b = verify_theorem_b(p, ell, settings)
        data, holds = record_b.to_dict(), record_b.holds
    elif check == 'plus':
        report = plus_quotient_analysis(p, settings)
        data, holds = report.to_dict(), report.holds
    else:
        data = artin_formalism_report(p, settings)
        holds = data['holds']
    return VerificationRow(check, p, ell, 'pass' if holds else 'fail', '', data)


def _run_cell_safely(cell: Cell, settings: Settings) -> VerificationRow:
    try:
        return run_cell(cell, settings)
    except PreconditionError as exc:
        check, p, ell = cell
        return VerificationRow(check, p, ell, 'skipped', f"skipped: {exc}")
    except ArithmeticError as exc:
        check, p, ell = cell
        logger.error("Check %s at p = %d failed with %s", check, p, exc)
        return VerificationRow(check, p, ell, 'fail', f"error: {exc}")


def default_workers() -> int:
    return os.cpu_count() or 1


def run_matrix(matrix: VerificationMatrix, settings: Optional[Settings] = None,
               workers: Optional[int] = None) -> List[VerificationRow]:
    """Run every cell of the matrix, in worker processes when workers > 1.

    Rows come back ordered by p, then l, then check.
    """
    settings = settings or DEFAULT_SETTINGS
    cells = matrix.cells()
    workers = workers or default_workers()
    logger.info("Running %d cells on %d workers", len(cells), workers)
    if workers <= 1 or len(cells) <= 1:
        rows = [_run_cell_safely(cell, settings) for cell in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_cell_safely, cells, [settings] * len(cells)))
    order = {cell: i for i, cell in enumerate(cells)}
    return sorted(rows, key=lambda r: order[(r.check, r.p, r.ell)])


def all_passed(rows: List[VerificationRow]) -> bool:
    """True iff no executed check failed."""
    return not any(r.failed for r in rows)

