"""
Command-line front end.

Exit codes: 0 with results, 1 when a clean run finds no solution or
does not converge, 2 for invalid input.
"""
import argparse
import json
import logging
import sys

from functools import partial, wraps
from typing import List, Sequence

from .. import __version__
from ..model import (
    Channel,
    DomainError,
    InvalidInput,
    KillingbeckError,
    PhysicalParams,
    PotentialParams,
)
from ..oracle import ShootingConfig, verify
from ..series import polynomial_nodes
from ..solver import (
    SearchConfig,
    SolverMethod,
    compare_solutions,
    solve_by_termination,
    solve_energy,
)
from ..special import (
    OscillatorSpec,
    coulomb_check,
    coulomb_energy,
    oscillator_check,
    oscillator_energy,
)
from ..table import diagnostic_rows
from ..warn import logger
from ..wavefunction import (
    GridConfig,
    build_wavefunction,
    dirac_residuals,
    series_for,
)
from .config import OPTIONS, RunConfig, SolverMode, build_run_config
from .output import open_output, write_rows

SOLVER_FLAGS = ('a', 'c', 'M', 'Cps', 'n', 'kappa', 'mode', 'convention')
COMMON_FLAGS = ('format', 'out')
COMMAND_FLAGS = {
    'solve': SOLVER_FLAGS,
    'table1': ('mode', 'convention'),
    'verify': SOLVER_FLAGS + ('steps',),
    'wavefunction': SOLVER_FLAGS + ('points', 'root'),
}
SPECIAL_FLAGS = {
    'coulomb': ('c', 'n', 'ltilde', 'M', 'verify', 'steps'),
    'oscillator': ('omega', 'nr', 'ltilde', 'M', 'verify', 'steps'),
}
HELP = {
    'solve': 'quasi-exact energies and linear strengths',
    'table1': 'diagnostic recomputation of the published table',
    'verify': 'shooting check of quasi-exact solutions',
    'wavefunction': 'normalized spinor samples of a solution',
    'special': 'closed-form Coulomb and oscillator limits',
    'coulomb': 'Coulomb limit',
    'oscillator': 'harmonic-oscillator limit',
}


def _add_flags(parser: argparse.ArgumentParser, names: Sequence[str]):
    for name in names:
        option = OPTIONS[name]
        if name == 'verify':
            parser.add_argument(
                '--verify', action='store_true', default=argparse.SUPPRESS,
                help=option.help,
            )
            continue
        parser.add_argument(
            '--' + name, type=option.convert, choices=option.choices,
            default=argparse.SUPPRESS, help=option.help,
        )


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--config', default=argparse.SUPPRESS,
        help='key=value file of flag defaults',
    )
    common.add_argument(
        '-v', '--verbose', action='count', default=argparse.SUPPRESS,
        help='more log output, repeat for debug',
    )
    _add_flags(common, COMMON_FLAGS)
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of all subcommands."""
    parser = argparse.ArgumentParser(
        prog='killingbeck',
        description='Dirac bound states of the Killingbeck potential '
        'under pseudospin symmetry.',
    )
    parser.add_argument(
        '--version', action='version', version=f'%(prog)s {__version__}'
    )
    common = _common_parser()
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True
    for name, flags in COMMAND_FLAGS.items():
        sub = commands.add_parser(name, parents=[common], help=HELP[name])
        _add_flags(sub, flags)
    special = commands.add_parser('special', help=HELP['special'])
    kinds = special.add_subparsers(dest='kind', metavar='kind')
    kinds.required = True
    for name, flags in SPECIAL_FLAGS.items():
        sub = kinds.add_parser(name, parents=[common], help=HELP[name])
        _add_flags(sub, flags)
    return parser


def _physical_inputs(cfg: RunConfig):
    a, c, mass, c_ps, n, kappa = cfg.require('a', 'c', 'M', 'Cps', 'n', 'kappa')
    if a == 0:
        raise DomainError(
            'a = 0 is the Coulomb limit; use `killingbeck special coulomb`'
        )
    return (
        PotentialParams(a=a, c=c),
        PhysicalParams(mass, c_ps),
        Channel(kappa, n),
    )


def _solutions(cfg: RunConfig, mode: SolverMode):
    pot, phys, ch = _physical_inputs(cfg)
    search = SearchConfig(convention=cfg.convention)
    found = {}
    if mode in (SolverMode.eq19, SolverMode.both):
        found[SolverMethod.eq19] = solve_energy(pot, phys, ch, search)
    if mode in (SolverMode.recurrence, SolverMode.both):
        found[SolverMethod.recurrence] = solve_by_termination(
            pot, phys, ch, search=search
        )
    return found


def _single_mode(cfg: RunConfig, default: SolverMode) -> SolverMode:
    mode = cfg.mode(default)
    if mode is SolverMode.both:
        raise InvalidInput(f'{cfg.command} takes --mode eq19 or recurrence')
    return mode


def _write(cfg: RunConfig, columns, rows, metadata=None):
    with open_output(cfg.output) as stream:
        write_rows(stream, columns, rows, cfg.format, metadata)


def cmd_solve(cfg: RunConfig) -> int:
    """One row per root: E, b, gamma_tilde, residual and method."""
    mode = cfg.mode(SolverMode.eq19)
    found = _solutions(cfg, mode)
    columns = ['E', 'b', 'gamma_tilde', 'residual', 'method']
    if mode is SolverMode.both:
        columns.append('agreement')
    rows = []
    for method, solutions in found.items():
        others = [s for m, sols in found.items() if m is not method for s in sols]
        for sol, diff in compare_solutions(solutions, others):
            rows.append({
                'E': sol.energy,
                'b': sol.b,
                'gamma_tilde': sol.gamma_tilde,
                'residual': sol.residual,
                'method': sol.method,
                'agreement': diff,
            })
    _write(cfg, columns, rows)
    return 0 if rows else 1


def cmd_table1(cfg: RunConfig) -> int:
    """All table rows with the published values echoed verbatim."""
    mode = _single_mode(cfg, SolverMode.eq19)
    columns = [
        'n', 'kappa', 'a', 'E_paper', 'b_paper', 'E_computed', 'b_computed',
        'abs_diff', 'eq19_residual_at_E_paper',
    ]
    rows = [
        {
            'n': d.row.n,
            'kappa': d.row.kappa,
            'a': d.row.a,
            'E_paper': d.row.E,
            'b_paper': d.row.b,
            'E_computed': d.E_computed,
            'b_computed': d.b_computed,
            'abs_diff': d.abs_diff,
            'eq19_residual_at_E_paper': d.residual_at_published,
        }
        for d in diagnostic_rows(SolverMethod(mode.value), cfg.convention)
    ]
    _write(cfg, columns, rows, {'mode': mode, 'convention': cfg.convention})
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    """Shooting check of every solution at its solved linear strength."""
    mode = cfg.mode(SolverMode.recurrence)
    shooting = ShootingConfig(steps=cfg.get('steps'))
    columns = [
        'method', 'E_analytic', 'E_numeric', 'abs_diff', 'node_count',
        'match_defect', 'converged', 'b',
    ]
    rows = []
    for method, solutions in _solutions(cfg, mode).items():
        for sol in solutions:
            nodes = None
            if method is SolverMethod.recurrence:
                nodes = polynomial_nodes(series_for(sol), sol.degree)
            report = verify(sol, cfg=shooting, node_count=nodes)
            rows.append({
                'method': method,
                'E_analytic': report.E_analytic,
                'E_numeric': report.E_numeric,
                'abs_diff': report.abs_diff,
                'node_count': report.node_count,
                'match_defect': report.match_defect,
                'converged': report.converged,
                'b': sol.b,
            })
    _write(cfg, columns, rows)
    return 0 if rows and all(r['converged'] for r in rows) else 1


def cmd_wavefunction(cfg: RunConfig) -> int:
    """Samples (r, G, F) of one solution with metadata lines."""
    mode = _single_mode(cfg, SolverMode.recurrence)
    solutions = _solutions(cfg, mode)[SolverMethod(mode.value)]
    if not solutions:
        logger.error('No solution to sample')
        return 1
    index = cfg.get('root')
    if not 0 <= index < len(solutions):
        raise InvalidInput(
            f'--root {index} out of range, {len(solutions)} solutions found'
        )
    sol = solutions[index]
    wf = build_wavefunction(sol, GridConfig(points=cfg.get('points')))
    residual_a, residual_b = dirac_residuals(wf, sol)
    metadata = {
        'E': sol.energy,
        'b': sol.b,
        'kappa': sol.channel.kappa,
        'l': sol.channel.l,
        'j': sol.channel.j,
        'N': wf.norm,
        'nodes': wf.node_count_G,
        'normalization': wf.normalization(),
        'residual_4a': residual_a,
        'residual_4b': residual_b,
    }
    rows = (
        {'r': r, 'G': g, 'F': f}
        for r, g, f in zip(wf.grid.tolist(), wf.G.tolist(), wf.F.tolist())
    )
    _write(cfg, ['r', 'G', 'F'], rows, metadata)
    return 0


def cmd_special(cfg: RunConfig) -> int:
    """Closed-form limit energies, optionally with the shooting check."""
    shooting = ShootingConfig(steps=cfg.get('steps'))
    if cfg.kind == 'coulomb':
        c, n, l_tilde, mass = cfg.require('c', 'n', 'ltilde', 'M')
        row = {'c': c, 'n': n, 'ltilde': l_tilde, 'M': mass}
        row['E'] = coulomb_energy(c, n, l_tilde, mass)
        columns = ['c', 'n', 'ltilde', 'M', 'E']
        check = partial(coulomb_check, c, n, l_tilde, mass, shooting)
    else:
        omega, n_r, l_tilde, mass = cfg.require('omega', 'nr', 'ltilde', 'M')
        spec = OscillatorSpec(omega, n_r, l_tilde, mass)
        row = {'omega': omega, 'nr': n_r, 'ltilde': l_tilde, 'M': mass}
        row['E'] = oscillator_energy(spec)
        columns = ['omega', 'nr', 'ltilde', 'M', 'E']
        check = partial(oscillator_check, spec, shooting)

    code = 0
    if cfg.get('verify'):
        report = check()
        row.update(
            E_numeric=report.E_numeric,
            abs_diff=report.abs_diff,
            converged=report.converged,
        )
        columns += ['E_numeric', 'abs_diff', 'converged']
        code = 0 if report.converged else 1
    _write(cfg, columns, [row])
    return code


COMMANDS = {
    'solve': cmd_solve,
    'table1': cmd_table1,
    'verify': cmd_verify,
    'wavefunction': cmd_wavefunction,
    'special': cmd_special,
}


def report_errors(func):
    """Map package errors to exit codes and messages on stderr."""
    @wraps(func)
    def wrapper(parser: argparse.ArgumentParser, cfg: RunConfig) -> int:
        try:
            return func(parser, cfg)
        except InvalidInput as e:
            parser.print_usage(sys.stderr)
            print(f'{parser.prog}: error: {e}', file=sys.stderr)
            return 2
        except KillingbeckError as e:
            message = ' '.join(str(arg) for arg in e.args)
            line = {'error': type(e).__name__, 'message': message}
            print(json.dumps(line), file=sys.stderr)
            return 1
    return wrapper


@report_errors
def run(parser: argparse.ArgumentParser, cfg: RunConfig) -> int:
    """Run the command of ``cfg``."""
    return COMMANDS[cfg.command](cfg)


def _configure_logging(verbose: int):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(
        stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s'
    )
    logger.setLevel(level)


def main(argv: List[str] = None) -> int:
    """Console entry point, returns the exit code."""
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    flags = vars(namespace)
    command = flags.pop('command')
    kind = flags.pop('kind', None)
    try:
        cfg = build_run_config(command, flags, kind)
    except InvalidInput as e:
        parser.print_usage(sys.stderr)
        print(f'{parser.prog}: error: {e}', file=sys.stderr)
        return 2
    _configure_logging(cfg.verbose)
    return run(parser, cfg)
