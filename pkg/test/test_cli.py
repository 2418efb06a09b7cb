from tabmg.main.tabmg_cli import TabmgParser, main
from tabmg.game import load_game, load_policies, ne_gap
from test.utils import *


def _cli(capsys, *argv):
    code = TabmgParser().main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out.strip(), err


def _value(out):
    "solve and eval print the gap alone, logs go to stderr"
    lines = out.splitlines()
    assert len(lines) == 1, lines
    return float(lines[0])


@pytest.fixture
def game_file(tmp_path, capsys):
    path = tmp_path / 'games' / 'two_layer.json'
    code, out, _ = _cli(capsys, 'make-game', '--kind', 'two-layer',
                        '--out', path)
    assert code == 0
    return path


@pytest.fixture
def three_player_file(tmp_path, capsys):
    path = tmp_path / 'three.json'
    code, _, _ = _cli(capsys, 'make-game', '--kind', 'random', '--seed', 4,
                      '--horizon', 2, '--states', 3, '--actions', '2,2,2',
                      '--out', path)
    assert code == 0
    return path


def test_make_game(game_file):
    game = load_game(str(game_file))
    assert game.horizon == 2 and game.zero_sum
    init = load_policies(str(game_file.parent / 'two_layer_init.json'))
    assert [p.player for p in init] == [0, 1]


def test_make_game_general_sum(tmp_path, capsys):
    path = tmp_path / 'gs.json'
    code, _, _ = _cli(capsys, 'make-game', '--kind', 'random',
                      '--general-sum', '--out', path)
    assert code == 0
    assert not load_game(str(path)).zero_sum


def test_solve_nash_pi_exact(capsys, game_file):
    code, out, _ = _cli(capsys, 'solve', '--game', game_file,
                        '--alg', 'nash-pi', '--iters', 2)
    assert code == 0
    assert abs(_value(out)) <= 1e-9


def test_solve_then_eval(tmp_path, capsys, game_file):
    policies = tmp_path / 'out' / 'ftrl.json'
    trace = tmp_path / 'out' / 'trace.csv'
    init = game_file.parent / 'two_layer_init.json'
    code, out, _ = _cli(capsys, 'solve', '--game', game_file, '--alg', 'ftrl',
                        '--iters', 200, '--init', init, '--out', policies,
                        '--trace', trace, '--every', 50, '--diagnostics')
    assert code == 0
    solved = _value(out)
    assert solved > 0
    assert len(trace.read_text().splitlines()) == 1 + 5

    code, out, _ = _cli(capsys, 'eval', '--game', game_file,
                        '--policy', policies)
    assert code == 0
    assert _value(out) == pytest.approx(solved, abs=1e-12)
    game = load_game(str(game_file))
    mu, nu = load_policies(str(policies))
    assert ne_gap(game, mu, nu) == pytest.approx(solved, abs=1e-12)

    code, out, _ = _cli(capsys, 'eval', '--game', game_file,
                        '--policy', policies, '--metric', 'layer')
    assert code == 0
    assert _value(out) <= solved + 1e-9


def test_solve_prints_only_the_gap(capsys, game_file, three_player_file):
    for argv in (['--game', game_file, '--alg', 'oftrl', '--iters', 20],
                 ['--game', three_player_file, '--alg', 'gs-oftrl',
                  '--iters', 20]):
        code, out, _ = _cli(capsys, '--verbose', 'solve', *argv)
        assert code == 0
        assert len(out.splitlines()) == 1
        float(out)


def test_solve_with_config_file(tmp_path, capsys, game_file):
    config = tmp_path / 'run.yml'
    config.write_text('algorithm: oftrl\niterations: 50\neta: oftrl56\n')
    code, from_file, _ = _cli(capsys, 'solve', '--game', game_file,
                              '--config', config)
    assert code == 0
    # flags take precedence over the file
    code, from_flags, _ = _cli(capsys, 'solve', '--game', game_file,
                               '--config', config, '--alg', 'nash-q')
    assert code == 0
    assert _value(from_file) != _value(from_flags)


def test_general_sum_solve_and_eval(tmp_path, capsys, three_player_file):
    history = tmp_path / 'history.jsonl'
    code, out, _ = _cli(capsys, 'solve', '--game', three_player_file,
                        '--alg', 'gs-oftrl', '--iters', 30, '--out', history)
    assert code == 0
    solved = _value(out)
    code, out, _ = _cli(capsys, 'eval', '--game', three_player_file,
                        '--metric', 'ccegap', '--policy', history)
    assert code == 0
    assert _value(out) == pytest.approx(solved, abs=1e-12)


def test_sweep(tmp_path, capsys):
    out_dir = tmp_path / 'sweep'
    code, out, _ = _cli(capsys, 'sweep', '--game', 'two-layer',
                        '--algs', 'nash-q,ftrl:nashv,nash-pi',
                        '--iters', '10,30,100', '--out-dir', out_dir,
                        '--check-bounds')
    assert code == 0
    assert 'bound checks: 6 passed, 0 failed' in out
    for name in ('summary.csv', 'fits.csv', 'bounds.csv', 'negap.svg',
                 'metadata.yml'):
        assert (out_dir / name).exists()


@pytest.mark.slow
def test_sweep_exponent_ordering(tmp_path, capsys):
    out_dir = tmp_path / 'rates'
    code, _, _ = _cli(capsys, 'sweep', '--game', 'two-layer',
                      '--algs', 'oftrl,ftrl,inpg',
                      '--iters', '100,1000,10000,100000', '--threads', 3,
                      '--out-dir', out_dir)
    assert code == 0
    rows = (out_dir / 'fits.csv').read_text().splitlines()[1:]
    exponent = {r.split(',')[0]: float(r.split(',')[1]) for r in rows}
    assert exponent['oftrl'] < exponent['ftrl'] < exponent['inpg']


def test_sweep_user_settings(tmp_path, capsys):
    # TABMG_CONFIG_PATH points at tmp_path / 'tabmg.yml'
    (tmp_path / 'tabmg.yml').write_text(
        'sweep:\n'
        '  iterations: [10, 20, 40]\n'
        '  algorithms:\n'
        '    - {algorithm: nash-q}\n')
    out_dir = tmp_path / 'from-settings'
    code, out, _ = _cli(capsys, 'sweep', '--out-dir', out_dir)
    assert code == 0
    assert 'nash-q' in out
    rows = (out_dir / 'summary.csv').read_text().splitlines()
    assert [r.split(',')[1] for r in rows[1:]] == ['10', '20', '40']


@pytest.mark.parametrize('argv', [
    ['solve', '--iters', 10],
    ['solve', '--alg', 'ftrl'],
    ['solve', '--alg', 'nash-pi', '--schedule', 'alpha', '--iters', 10],
    ['solve', '--alg', 'ftrl', '--eta', 'fast', '--iters', 10],
    ['solve', '--alg', 'oftrl', '--v-form', '--iters', 10],
    ['eval', '--policy', 'unused.json', '--metric', 'layer', '--layer', 5],
    ['sweep', '--algs', 'ftrl,fictitious-play'],
    ['sweep', '--iters', '100,10'],
])
def test_usage_errors(capsys, game_file, argv):
    if argv[0] == 'eval':
        argv = argv[:1] + ['--game', game_file] + argv[1:]
        argv[4] = game_file.parent / 'two_layer_init.json'
    elif argv[0] == 'solve':
        argv = argv[:1] + ['--game', game_file] + argv[1:]
    code, _, err = _cli(capsys, *argv)
    assert code == 2
    assert 'error' in err


def test_zero_sum_only(capsys, three_player_file):
    code, _, err = _cli(capsys, 'solve', '--game', three_player_file,
                        '--alg', 'ftrl', '--iters', 10)
    assert code == 2
    assert 'gs-oftrl' in err


def test_runtime_errors(tmp_path, capsys, game_file):
    code, _, err = _cli(capsys, 'solve', '--game', tmp_path / 'missing.json',
                        '--alg', 'ftrl', '--iters', 10)
    assert code == 1
    code, _, err = _cli(capsys, 'eval', '--game', game_file,
                        '--policy', tmp_path / 'missing_policy.json')
    assert code == 1
    assert 'missing_policy.json' in err
    headless = tmp_path / 'headless.json'
    headless.write_text(game_file.read_text().replace('"horizon"', '"H"'))
    code, _, err = _cli(capsys, 'solve', '--game', headless,
                        '--alg', 'ftrl', '--iters', 10)
    assert code == 1
    assert 'horizon' in err


def test_argparse_errors(capsys):
    with pytest.raises(SystemExit) as e_info:
        TabmgParser().main(['solve', '--alg', 'bogus', '--game', 'x'])
    assert e_info.value.code == 2
    with pytest.raises(SystemExit) as e_info:
        TabmgParser().main([])
    assert e_info.value.code == 2


def test_main_exit_code(capsys, game_file):
    with pytest.raises(SystemExit) as e_info:
        main(['solve', '--game', str(game_file), '--alg', 'nash-pi',
              '--iters', '2'])
    assert e_info.value.code == 0
