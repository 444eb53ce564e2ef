"""
Published bound-state table and its diagnostic recomputation.

The table is shipped as a data file and echoed verbatim.
Its energies are not asserted to agree with the solvers.
"""
import csv
import math
import os

from dataclasses import dataclass
from pathlib import Path
from typing import List

from .model import (
    Channel,
    DegenerateChannel,
    IndexConvention,
    PhysicalParams,
    PotentialParams,
)
from .solver import (
    NoConvergence,
    SearchConfig,
    SolverMethod,
    energy_residual,
    solve_by_termination,
    solve_energy,
)
from .warn import logger, tagged

TABLE_FILE = Path(os.path.realpath(__file__)).parent / 'data' / 'table1.csv'
COULOMB = 1.0
MASS = 5.0
C_PS = -5.5


@dataclass(frozen=True)
class TableRow:
    """One published row, numbers kept as their printed strings."""

    n: int
    kappa: int
    a: str
    b: str
    E: str

    @property
    def channel(self) -> Channel:
        return Channel(self.kappa, self.n)

    @property
    def potential(self) -> PotentialParams:
        return PotentialParams(a=float(self.a), b=float(self.b), c=COULOMB)


@dataclass(frozen=True)
class DiagnosticRow:
    """Published values next to the recomputed ones."""

    row: TableRow
    E_computed: float
    b_computed: float
    abs_diff: float
    residual_at_published: float


def load_table(path: Path = TABLE_FILE) -> List[TableRow]:
    """Read the table data file, skipping comment lines."""
    with open(path, newline='', encoding='utf-8') as f:
        lines = [line for line in f if not line.startswith('#')]
    return [
        TableRow(int(r['n']), int(r['kappa']), r['a'], r['b'], r['E'])
        for r in csv.DictReader(lines)
    ]


def physical() -> PhysicalParams:
    """Mass and pseudospin constant of the table."""
    return PhysicalParams(MASS, C_PS)


def _solve(row: TableRow, method: SolverMethod, search: SearchConfig):
    pot = row.potential
    if method is SolverMethod.eq19:
        return solve_energy(pot, physical(), row.channel, search)
    return solve_by_termination(pot, physical(), row.channel, search=search)


def diagnostic_rows(
    method: SolverMethod = SolverMethod.eq19,
    convention: IndexConvention = IndexConvention.regular_delta,
) -> List[DiagnosticRow]:
    """Recompute every table row with the nearest root of ``method``."""
    method = SolverMethod(method)
    search = SearchConfig(convention=convention)
    phys = physical()
    rows = []
    for row in load_table():
        published = float(row.E)
        x_published = published - phys.mass - phys.c_ps
        try:
            residual = energy_residual(
                x_published, row.potential, phys, row.channel, convention
            )
        except DegenerateChannel:
            residual = math.nan

        try:
            solutions = _solve(row, method, search)
        except (DegenerateChannel, NoConvergence) as e:
            logger.info(tagged('table', f'{row.channel}: {e}'))
            solutions = []
        if solutions:
            nearest = min(solutions, key=lambda s: abs(s.energy - published))
            energy, b = nearest.energy, nearest.b
        else:
            energy = b = math.nan
        diff = abs(energy - published)
        rows.append(DiagnosticRow(row, energy, b, diff, residual))
    return rows
