import json
import pytest

from killingbeck import __version__
from ._util import CONFIG_TEXT, TABLE_FLAGS, data_lines, run_cli


class TestParser:
    def test_version(self, capsys):
        code, out, _ = run_cli(capsys, '--version')
        assert code == 0
        assert __version__ in out

    def test_command_required(self, capsys):
        code, _, err = run_cli(capsys)
        assert code == 2
        assert 'command' in err

    def test_invalid_choice(self, capsys):
        code, _, _ = run_cli(capsys, 'solve', *TABLE_FLAGS, '--mode', 'none')
        assert code == 2

    def test_non_finite_value(self, capsys):
        code, _, _ = run_cli(capsys, 'solve', *TABLE_FLAGS, '--a', 'nan')
        assert code == 2


class TestSolve:
    def test_missing_flags(self, capsys):
        code, _, err = run_cli(capsys, 'solve')
        assert code == 2
        assert '--a' in err

    def test_coulomb_limit_rejected(self, capsys):
        flags = TABLE_FLAGS.copy()
        flags[1] = '0'
        code, _, err = run_cli(capsys, 'solve', *flags)
        assert code == 2
        assert 'special coulomb' in err

    def test_energy_equation(self, capsys):
        code, out, _ = run_cli(capsys, 'solve', *TABLE_FLAGS)
        lines = data_lines(out)
        assert code == 0
        assert lines[0] == 'E,b,gamma_tilde,residual,method'
        assert len(lines) > 1
        assert all(line.endswith(',eq19') for line in lines[1:])

    def test_both_solvers(self, capsys):
        code, out, _ = run_cli(capsys, 'solve', *TABLE_FLAGS, '--mode', 'both')
        lines = data_lines(out)
        assert code == 0
        assert lines[0] == 'E,b,gamma_tilde,residual,method,agreement'
        methods = {line.split(',')[4] for line in lines[1:]}
        assert methods == {'eq19', 'recurrence'}

    def test_jsonl(self, capsys):
        code, out, _ = run_cli(
            capsys, 'solve', *TABLE_FLAGS, '--format', 'jsonl'
        )
        records = [json.loads(line) for line in out.splitlines()]
        assert code == 0
        assert set(records[0]) == {'E', 'b', 'gamma_tilde', 'residual', 'method'}
        assert records[0]['method'] == 'eq19'
        assert records[0]['gamma_tilde'] > 0

    def test_output_is_reproducible(self, tmp_path, capsys):
        first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
        assert run_cli(capsys, 'solve', *TABLE_FLAGS, '--out', str(first))[0] == 0
        assert run_cli(capsys, 'solve', *TABLE_FLAGS, '--out', str(second))[0] == 0
        assert first.read_bytes() == second.read_bytes()


class TestConfigFile:
    def test_flags_override_file(self, tmp_path, capsys):
        path = tmp_path / 'run.cfg'
        path.write_text(CONFIG_TEXT)
        _, from_flags, _ = run_cli(capsys, 'solve', *TABLE_FLAGS)
        code, merged, _ = run_cli(
            capsys, 'solve', '--config', str(path), '--a', '0.01'
        )
        assert code == 0
        assert merged == from_flags

    def test_file_values_used(self, tmp_path, capsys):
        path = tmp_path / 'run.cfg'
        path.write_text(CONFIG_TEXT)
        _, from_file, _ = run_cli(capsys, 'solve', '--config', str(path))
        _, from_flags, _ = run_cli(capsys, 'solve', *TABLE_FLAGS)
        assert from_file != from_flags

    def test_unknown_key(self, tmp_path, capsys):
        path = tmp_path / 'run.cfg'
        path.write_text(CONFIG_TEXT + 'mass = 5\n')
        code, _, err = run_cli(capsys, 'solve', '--config', str(path))
        assert code == 2
        assert "'mass'" in err

    def test_missing_file(self, tmp_path, capsys):
        path = tmp_path / 'missing.cfg'
        code, _, _ = run_cli(capsys, 'solve', '--config', str(path))
        assert code == 2


class TestTable:
    def test_rows_echoed(self, capsys):
        code, out, _ = run_cli(capsys, 'table1')
        lines = data_lines(out)
        assert code == 0
        assert '# mode=eq19' in out
        assert '# convention=regular-delta' in out
        assert lines[0].startswith('n,kappa,a,E_paper,b_paper,E_computed')
        assert len(lines) == 17
        assert lines[1].startswith('1,-1,0.01,-0.4955664823,0.0000443352,')
        assert lines[3].startswith('1,-1,0.10,')

    def test_paper_kappa_residual(self, capsys):
        code, out, _ = run_cli(
            capsys, 'table1', '--convention', 'paper-kappa', '--format', 'jsonl'
        )
        records = [json.loads(line) for line in out.splitlines()]
        assert code == 0
        assert records[0] == {'mode': 'eq19', 'convention': 'paper-kappa'}
        assert records[1]['eq19_residual_at_E_paper'] == pytest.approx(
            3.9951e-2, rel=1e-4
        )
        degenerate = [r for r in records[1:] if r['n'] == 2 and r['kappa'] == -1]
        assert all(r['eq19_residual_at_E_paper'] is None for r in degenerate)

    def test_both_rejected(self, capsys):
        code, _, _ = run_cli(capsys, 'table1', '--mode', 'both')
        assert code == 2


class TestVerify:
    def test_converged(self, capsys):
        code, out, _ = run_cli(capsys, 'verify', *TABLE_FLAGS)
        lines = data_lines(out)
        header = lines[0].split(',')
        assert code == 0
        assert len(lines) > 1
        for line in lines[1:]:
            row = dict(zip(header, line.split(',')))
            assert row['method'] == 'recurrence'
            assert row['converged'] == 'true'
            assert float(row['abs_diff']) < 1e-5


class TestWavefunction:
    def test_samples_written(self, tmp_path, capsys):
        path = tmp_path / 'wf.csv'
        code, out, _ = run_cli(
            capsys, 'wavefunction', *TABLE_FLAGS,
            '--points', '2001', '--out', str(path),
        )
        text = path.read_text()
        meta = dict(
            line[2:].split('=', 1) for line in text.splitlines()
            if line.startswith('# ')
        )
        lines = data_lines(text)
        assert code == 0
        assert out == ''
        assert lines[0] == 'r,G,F'
        assert len(lines) == 2002
        assert float(meta['normalization']) == pytest.approx(1.0, abs=1e-8)
        assert meta['nodes'] == '0'
        assert meta['kappa'] == '-1'
        assert meta['l'] == '0'
        assert float(meta['j']) == 0.5

    def test_root_out_of_range(self, capsys):
        code, _, err = run_cli(
            capsys, 'wavefunction', *TABLE_FLAGS, '--root', '99'
        )
        assert code == 2
        assert '--root 99' in err


class TestSpecial:
    def test_coulomb_zero_crossing(self, capsys):
        code, out, _ = run_cli(
            capsys, 'special', 'coulomb',
            '--c', '2', '--n', '1', '--ltilde', '0', '--M', '5',
        )
        lines = data_lines(out)
        assert code == 0
        assert lines[0] == 'c,n,ltilde,M,E'
        assert lines[1].endswith(',0.00000000000e+00')

    def test_oscillator_verified(self, capsys):
        code, out, _ = run_cli(
            capsys, 'special', 'oscillator',
            '--omega', '1', '--nr', '0', '--ltilde', '0', '--M', '5',
            '--verify',
        )
        header, row = data_lines(out)
        values = dict(zip(header.split(','), row.split(',')))
        assert code == 0
        assert float(values['E']) == pytest.approx(5.2156, abs=1e-4)
        assert values['converged'] == 'true'
        assert float(values['abs_diff']) < 1e-6

    def test_kind_required(self, capsys):
        code, _, _ = run_cli(capsys, 'special')
        assert code == 2
