"""Run configuration: defaults, key=value config files and flags."""
import configparser
import math

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

from ..model import IndexConvention, InvalidInput


class SolverMode(str, Enum):
    """Solvers run by a command."""

    eq19 = 'eq19'
    recurrence = 'recurrence'
    both = 'both'


class OutputFormat(str, Enum):
    """Output file formats."""

    csv = 'csv'
    jsonl = 'jsonl'


def finite_float(text: str) -> float:
    """Parse a finite float."""
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f'not a finite number: {text!r}')
    return value


def boolean(text: str) -> bool:
    """Parse a boolean the way configparser does."""
    if isinstance(text, bool):
        return text
    states = configparser.ConfigParser.BOOLEAN_STATES
    if text.lower() not in states:
        raise ValueError(f'not a boolean: {text!r}')
    return states[text.lower()]


@dataclass(frozen=True)
class Option:
    """Flag and config-file key."""

    convert: Callable[[str], Any]
    help: str
    default: Any = None
    choices: Optional[Tuple[str, ...]] = None


OPTIONS: Dict[str, Option] = {
    'a': Option(finite_float, 'quadratic strength a in fm^-3'),
    'c': Option(finite_float, 'Coulomb strength c'),
    'M': Option(finite_float, 'fermion mass in fm^-1'),
    'Cps': Option(finite_float, 'pseudospin constant in fm^-1'),
    'n': Option(int, 'series index n >= 1'),
    'kappa': Option(int, 'spin-orbit number, nonzero'),
    'ltilde': Option(int, 'pseudo-orbital number'),
    'omega': Option(finite_float, 'oscillator frequency in fm^-1'),
    'nr': Option(int, 'radial quantum number'),
    'mode': Option(
        SolverMode, 'solver', choices=tuple(m.value for m in SolverMode)
    ),
    'convention': Option(
        IndexConvention, 'exponent in the energy equation indices',
        default=IndexConvention.regular_delta,
        choices=tuple(c.value for c in IndexConvention),
    ),
    'format': Option(
        OutputFormat, 'output format', default=OutputFormat.csv,
        choices=tuple(f.value for f in OutputFormat),
    ),
    'out': Option(str, 'output file, standard output by default'),
    'points': Option(int, 'wavefunction grid points', default=4001),
    'root': Option(int, 'index of the solution, by energy', default=0),
    'steps': Option(int, 'Runge-Kutta steps of the shooting check',
                    default=16000),
    'verify': Option(boolean, 'add the shooting check', default=False),
}


def read_config_file(path: str) -> Dict[str, Any]:
    """Parse a key=value file; keys are long flag names."""
    parser = configparser.ConfigParser(
        delimiters=('=',), comment_prefixes=('#', ';'), interpolation=None
    )
    parser.optionxform = str
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise InvalidInput(f'Cannot read config file {path}: {e}') from e
    try:
        parser.read_string('[run]\n' + text, source=str(path))
    except configparser.Error as e:
        raise InvalidInput(f'Malformed config file {path}: {e}') from e

    values = {}
    for key, raw in parser['run'].items():
        if key not in OPTIONS:
            raise InvalidInput(f'Unknown key {key!r} in config file {path}')
        option = OPTIONS[key]
        if option.choices and raw not in option.choices:
            raise InvalidInput(
                f'Invalid {key} = {raw!r} in {path}, '
                f'choose from {", ".join(option.choices)}'
            )
        try:
            values[key] = option.convert(raw)
        except ValueError as e:
            raise InvalidInput(f'Invalid {key} = {raw!r} in {path}: {e}') from e
    return values


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved configuration of one command.

    ``values`` merges defaults, the config file and the flags,
    later sources taking precedence.
    """

    command: str
    values: Mapping[str, Any] = field(default_factory=dict)
    kind: Optional[str] = None
    verbose: int = 0

    @property
    def output(self) -> Optional[str]:
        return self.values.get('out')

    @property
    def format(self) -> OutputFormat:
        return OutputFormat(self.values.get('format', OutputFormat.csv))

    @property
    def convention(self) -> IndexConvention:
        return IndexConvention(
            self.values.get('convention', IndexConvention.regular_delta)
        )

    def mode(self, default: SolverMode) -> SolverMode:
        """Solver mode, ``default`` when none was given."""
        return SolverMode(self.values.get('mode') or default)

    def require(self, *keys: str) -> Tuple[Any, ...]:
        """Values of required keys."""
        missing = [k for k in keys if self.values.get(k) is None]
        if missing:
            flags = ', '.join('--' + k for k in missing)
            raise InvalidInput(f'{self.command} requires {flags}')
        return tuple(self.values[k] for k in keys)

    def get(self, key: str) -> Any:
        return self.values.get(key)


def build_run_config(
    command: str,
    flags: Mapping[str, Any],
    kind: str = None,
) -> RunConfig:
    """Merge defaults, the file named by ``flags['config']`` and ``flags``."""
    flags = dict(flags)
    verbose = flags.pop('verbose', 0)
    path = flags.pop('config', None)
    values = {
        key: option.default
        for key, option in OPTIONS.items()
        if option.default is not None
    }
    if path is not None:
        values.update(read_config_file(path))
    values.update(flags)
    return RunConfig(command, values, kind, verbose)
