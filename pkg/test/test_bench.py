import csv
from benedict import BeneDict
import tabmg
import tabmg.utils as U
from tabmg.session import Config, ConfigError
from tabmg.bench import *
from test.utils import *


def _plan(tmp_path, algorithms, iterations=(10, 30, 100), **kwargs):
    config = {
        'game': {'source': 'two-layer'},
        'algorithms': algorithms,
        'iterations': list(iterations),
        'out_dir': str(tmp_path / 'sweep'),
    }
    config.update(kwargs)
    return SweepPlan.from_config(config)


def _read_csv(path):
    with open(str(path)) as fp:
        return list(csv.reader(fp))


_ALGORITHMS = [
    {'algorithm': 'ftrl', 'eta': 'nashv'},
    {'algorithm': 'nash-q'},
    {'algorithm': 'nash-pi'},
    {'algorithm': 'mod-oftrl', 'eta': 'mod-oftrl'},
]


# ======================== plans ========================
def test_plan_defaults():
    plan = SweepPlan.from_config({})
    assert plan.game_config.source == 'two-layer'
    assert [a.algorithm for a in plan.algorithms] == ['oftrl', 'ftrl', 'inpg']
    assert plan.iterations[0] == 100 and plan.iterations[-1] == 100000
    assert plan.threads == 1 and not plan.check_bounds
    assert len(plan.cells()) == 3 * len(plan.iterations)


@pytest.mark.parametrize('override', [
    {'iterations': []},
    {'iterations': [0, 10]},
    {'iterations': [10, 10]},
    {'iterations': [100, 10]},
    {'threads': 0},
    {'algorithms': [{'eta': '0.1'}]},
    {'algorithms': [{'algorithm': 'fictitious-play'}]},
    {'algorithms': [{'algorithm': 'ftrl', 'iterations': 10}]},
    {'game': {'source': 'atari'}},
    {'game': {'source': 'file'}},
])
def test_plan_errors(override):
    config = {'iterations': [10, 100]}
    config.update(override)
    with pytest_print_raises(ConfigError):
        SweepPlan.from_config(config)


def test_plan_cells_row_major(tmp_path):
    plan = _plan(tmp_path, _ALGORITHMS[:2], iterations=(5, 50))
    assert plan.cells() == [(0, 5), (0, 50), (1, 5), (1, 50)]
    assert plan.to_dict()['iterations'] == [5, 50]


def test_algorithm_labels():
    entries = [Config({'algorithm': 'oftrl', 'eta': 'oftrl56'}),
               Config({'algorithm': 'oftrl', 'eta': '0.1'}),
               Config({'algorithm': 'nash_q'}),
               Config({'algorithm': 'ftrl', 'label': 'mine'})]
    assert algorithm_labels(entries) == ['oftrl@oftrl56', 'oftrl@0.1',
                                         'nash-q', 'mine']


def test_find_bound():
    assert find_bound('ftrl', 'nashv').name == 'nash-v'
    assert find_bound('ftrl', '0.1') is None
    assert find_bound('nash-q', 'anything').name == 'nash-q'
    assert find_bound('mod_oftrl', 'MOD-OFTRL').name == 'mod-oftrl'
    assert find_bound('inpg', '1*T^-0.5') is None


# ======================== sweeps ========================
def test_sweep_cells_and_fits(tmp_path):
    report = run_sweep(_plan(tmp_path, _ALGORITHMS))
    assert report.labels == ['ftrl', 'nash-q', 'nash-pi', 'mod-oftrl']
    assert not report.errors
    for cell in report.cells:
        assert cell.metric == 'negap'
        assert cell.gap >= -1e-12
        assert cell.eta > 0 and cell.seconds >= 0
    for cell in report.cells_of('nash-pi'):
        assert abs(cell.gap) <= 1e-9
    fits = {f.label: f for f in report.fits}
    assert fits['nash-pi'].skipped == 'exact'
    assert fits['nash-pi'].exponent is None
    for label in ('ftrl', 'nash-q', 'mod-oftrl'):
        assert fits[label].skipped is None
        assert fits[label].points == 3
    assert report.bound_checks == []


def test_sweep_cell_errors(tmp_path):
    plan = _plan(tmp_path, [{'algorithm': 'ftrl', 'eta': 'bogus'},
                            {'algorithm': 'nash-q'}])
    report = run_sweep(plan)
    assert len(report.errors) == 3
    assert all('ConfigError' in c.error for c in report.errors)
    fits = {f.label: f for f in report.fits}
    assert fits['ftrl'].skipped == 'too few points'
    assert fits['ftrl'].points == 0
    assert fits['nash-q'].skipped is None


def test_sweep_too_few_points(tmp_path):
    report = run_sweep(_plan(tmp_path, _ALGORITHMS[:1], iterations=(10, 30)))
    assert report.fits[0].skipped == 'too few points'
    assert report.fits[0].points == 2


def test_sweep_check_bounds(tmp_path):
    report = run_sweep(_plan(tmp_path, _ALGORITHMS, check_bounds=True))
    checked = sorted({b.label for b in report.bound_checks})
    assert checked == ['ftrl', 'mod-oftrl', 'nash-q']
    assert len(report.bound_checks) == 9
    assert report.bounds_ok
    failing = [BoundSpec('ftrl', None, lambda T, H, A, B: -1.0, 'never')]
    checks = check_bounds(report, specs=failing)
    assert len(checks) == 3
    assert not any(b.passed for b in checks)


def test_sweep_general_sum(tmp_path):
    plan = _plan(tmp_path, [{'algorithm': 'gs-oftrl'}], check_bounds=True)
    report = run_sweep(plan)
    assert not report.errors
    assert all(c.metric == 'ccegap' for c in report.cells)
    assert report.bound_checks == []


def test_sweep_threads_match_serial(tmp_path):
    serial = run_sweep(_plan(tmp_path, _ALGORITHMS[:2]))
    pooled = run_sweep(_plan(tmp_path, _ALGORITHMS[:2], threads=2))
    assert [(c.label, c.T) for c in serial.cells] == \
        [(c.label, c.T) for c in pooled.cells]
    assert [c.gap for c in serial.cells] == [c.gap for c in pooled.cells]


@pytest.mark.slow
def test_two_layer_rate_exponents(tmp_path):
    algorithms = [
        {'algorithm': 'oftrl', 'eta': 'oftrl56', 'label': 'oftrl'},
        {'algorithm': 'oftrl', 'eta': '1', 'label': 'oftrl-eta1'},
        {'algorithm': 'mod-oftrl', 'eta': 'mod-oftrl'},
        {'algorithm': 'nash-q'},
        {'algorithm': 'ftrl', 'eta': '1*T^-0.5'},
        {'algorithm': 'inpg', 'eta': '1*T^-0.5'},
    ]
    plan = _plan(tmp_path, algorithms,
                 iterations=(100, 300, 1000, 3000, 10000, 30000, 100000),
                 threads=4)
    report = run_sweep(plan)
    assert report.errors == []
    exponent = {f.label: f.exponent for f in report.fits}
    assert exponent['oftrl'] <= -0.75
    assert exponent['oftrl-eta1'] <= -0.9
    assert exponent['mod-oftrl'] <= -0.9
    assert exponent['nash-q'] <= -0.9
    assert exponent['ftrl'] <= -0.45
    assert exponent['inpg'] >= -0.45
    assert exponent['oftrl'] < exponent['ftrl'] < exponent['inpg']


# ======================== report files ========================
def test_emit_report(tmp_path):
    plan = _plan(tmp_path, _ALGORITHMS + [{'algorithm': 'gs-oftrl'}],
                 check_bounds=True)
    report = run_sweep(plan)
    written = emit_report(report, plan.out_dir)
    names = sorted(U.f_expand(p).split('/')[-1] for p in written)
    assert names == ['bounds.csv', 'ccegap.svg', 'fits.csv', 'metadata.yml',
                     'negap.svg', 'summary.csv']

    out = tmp_path / 'sweep'
    summary = _read_csv(out / 'summary.csv')
    assert summary[0] == SUMMARY_HEADER
    assert len(summary) == 1 + 5 * 3
    assert summary[1][:2] == ['ftrl', '10']
    fits = _read_csv(out / 'fits.csv')
    assert fits[0] == FITS_HEADER
    assert [row[0] for row in fits[1:]] == ['ftrl', 'nash-q', 'mod-oftrl',
                                            'gs-oftrl']
    bounds = _read_csv(out / 'bounds.csv')
    assert bounds[0] == BOUNDS_HEADER
    assert {row[4] for row in bounds[1:]} == {'pass'}

    svg = (out / 'negap.svg').read_text().splitlines()
    assert svg[0].startswith('<?xml')
    assert svg[1].startswith('<!-- generated ')
    assert sum('id="plot-area"' in line for line in svg) == 1

    meta = BeneDict.load_yaml_file(str(out / 'metadata.yml'))
    assert meta.version == tabmg.__version__
    assert meta.plan.iterations == [10, 30, 100]
    assert meta.game.horizon == 2
    assert meta.errors == []
    assert meta.skipped_fits == {'nash-pi': 'exact'}


def test_report_reproducible(tmp_path):
    hashes = []
    for run in ('a', 'b'):
        plan = _plan(tmp_path, _ALGORITHMS, out_dir=str(tmp_path / run))
        emit_report(run_sweep(plan), plan.out_dir)
        summary = [row[:4] for row in _read_csv(tmp_path / run /
                                                'summary.csv')]
        hashes.append((U.file_hash(str(tmp_path / run / 'fits.csv')),
                       summary))
    assert hashes[0] == hashes[1]


def test_render_svg_extent():
    series = [('a', [(10, 1.0), (100, 0.1)], (-1.0, 0.0)),
              ('b', [(10, 0.0)], None)]
    svg = render_svg(series, 'negap', timestamp='2026-01-01 00:00:00')
    lines = svg.splitlines()
    assert lines[1] == '<!-- generated 2026-01-01 00:00:00 -->'
    # the zero gap is floored, so the y extent reaches down to 1e-15
    plot_area = [l for l in lines if 'id="plot-area"' in l][0]
    assert 'viewBox="0.900 ' in plot_area
    series = series[:1]
    plot_area = [l for l in render_svg(series, 'negap').splitlines()
                 if 'id="plot-area"' in l][0]
    assert 'viewBox="0.900 -0.100 1.200 1.200"' in plot_area
    assert '0.900,0.900 2.100,2.100' in render_svg(series, 'negap')
    assert 'a (-1.000)' in render_svg(series, 'negap')


def test_console_summary(tmp_path):
    report = run_sweep(_plan(tmp_path, _ALGORITHMS, check_bounds=True))
    text = console_summary(report)
    for label in report.labels:
        assert label in text
    assert 'exact' in text
    assert text.endswith('bound checks: 9 passed, 0 failed')
