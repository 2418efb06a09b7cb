"""
Runs a SweepPlan: one independent run per (algorithm, T), rate fits and
bound checks on the final gaps.
"""
import multiprocessing
import tabmg.utils as U
from tabmg.session import AlgorithmKind, get_logger, resolve_run_config
from tabmg.framework import run_framework, fit_rate, resolve_eta
from tabmg.general_sum import run_general_sum_oftrl
from .plan import BOUND_SPECS, find_bound


# exact zeros are floored before taking logs
GAP_FLOOR = 1e-15
MIN_FIT_POINTS = 3


class CellResult(object):
    def __init__(self, label, algorithm, eta_expr, T, metric,
                 eta=None, gap=None, seconds=None, error=None):
        self.label = label
        self.algorithm = algorithm
        self.eta_expr = eta_expr
        self.T = T
        self.metric = metric
        self.eta = eta
        self.gap = gap
        self.seconds = seconds
        self.error = error

    @property
    def ok(self):
        return self.error is None

    def __repr__(self):
        return 'CellResult({}, T={}, gap={}, error={})'.format(
            self.label, self.T, self.gap, self.error)


class FitResult(object):
    def __init__(self, label, exponent=None, intercept=None, r_squared=None,
                 points=0, skipped=None):
        self.label = label
        self.exponent = exponent
        self.intercept = intercept
        self.r_squared = r_squared
        self.points = points
        self.skipped = skipped


class BoundCheck(object):
    def __init__(self, label, T, gap, bound, name):
        self.label = label
        self.T = T
        self.gap = gap
        self.bound = bound
        self.name = name

    @property
    def passed(self):
        return self.gap <= self.bound


class SweepReport(object):
    def __init__(self, plan, game_info, cells):
        self.plan = plan
        self.game_info = game_info
        self.cells = cells
        self.fits = []
        self.bound_checks = []

    @property
    def labels(self):
        "algorithm labels in plan order"
        seen = []
        for cell in self.cells:
            if cell.label not in seen:
                seen.append(cell.label)
        return seen

    def cells_of(self, label):
        return [c for c in self.cells if c.label == label]

    @property
    def errors(self):
        return [c for c in self.cells if not c.ok]

    @property
    def bounds_ok(self):
        return all(b.passed for b in self.bound_checks)


def algorithm_labels(algorithms):
    """
    The algorithm name, followed by the eta expression when the same
    algorithm appears more than once.
    """
    kinds = [U.get_enum(AlgorithmKind, a.algorithm) for a in algorithms]
    labels = []
    for entry, kind in zip(algorithms, kinds):
        if 'label' in entry:
            labels.append(entry.label)
        elif kinds.count(kind) > 1:
            labels.append('{}@{}'.format(kind.cli_name, entry.get('eta')))
        else:
            labels.append(kind.cli_name)
    return labels


def _cell_config(entry, T):
    config = {k: v for k, v in entry.to_dict().items() if k != 'label'}
    config['iterations'] = T
    # only t = 1 and t = T are evaluated
    config['trace'] = {'mode': 'periodic', 'every': T, 'path': None}
    return config


def _run_cell(job):
    """
    Runs in a worker process. Every exception becomes the cell's error.
    """
    game, init, label, config = job
    kind = U.get_enum(AlgorithmKind, config['algorithm'])
    metric = 'ccegap' if kind == AlgorithmKind.gs_oftrl else 'negap'
    cell = CellResult(label, kind.cli_name, config.get('eta'),
                      config['iterations'], metric)
    logger = get_logger('tabmg.sweep.' + label, level='warning')
    try:
        resolved = resolve_run_config(config)
        counts = game.action_counts
        cell.eta_expr = resolved.eta
        cell.eta = resolve_eta(resolved.eta, cell.T, game.horizon,
                               counts[0], counts[1], m=game.players,
                               A_max=max(counts))
        with U.Timer() as timer:
            if kind == AlgorithmKind.gs_oftrl:
                _, trace, _ = run_general_sum_oftrl(game, config,
                                                    logger=logger)
                cell.gap = trace.final.ccegap
            else:
                _, _, trace = run_framework(game, config, init=init,
                                            logger=logger)
                cell.gap = trace.final.negap
        cell.seconds = timer.interval
    except Exception as e:
        cell.error = '{}: {}'.format(type(e).__name__, e)
    return cell


def _fit(label, kind, cells):
    ok = [c for c in cells if c.ok]
    if kind == AlgorithmKind.nash_pi.cli_name:
        return FitResult(label, points=len(ok), skipped='exact')
    if len(ok) < MIN_FIT_POINTS:
        return FitResult(label, points=len(ok), skipped='too few points')
    points = [(c.T, max(c.gap, GAP_FLOOR)) for c in ok]
    try:
        exponent, intercept, r_squared = fit_rate(points)
    except ValueError as e:
        return FitResult(label, points=len(ok), skipped=str(e))
    return FitResult(label, exponent, intercept, r_squared, points=len(ok))


def run_sweep(plan, logger=None):
    """
    Returns:
        SweepReport with per-cell gaps (or errors) and one fit per algorithm.
        Bound checks are filled when plan.check_bounds is set.
    """
    if logger is None:
        logger = get_logger('tabmg.sweep')
    game, init = plan.make_game()
    labels = algorithm_labels(plan.algorithms)
    jobs = []
    for k, T in plan.cells():
        config = _cell_config(plan.algorithms[k], T)
        config.setdefault('seed', plan.seed)
        jobs.append((game, init, labels[k], config))
    logger.info('sweep on {}: {} algorithms x {} T values, threads={}'
                .format(game, len(plan.algorithms), len(plan.iterations),
                        plan.threads))

    with U.Timer() as timer:
        if plan.threads == 1:
            cells = [_run_cell(job) for job in jobs]
        else:
            with multiprocessing.Pool(processes=plan.threads) as pool:
                cells = pool.map(_run_cell, jobs)
    for cell in cells:
        if cell.ok:
            logger.debug('{} T={} {}={:.6g}'.format(
                cell.label, cell.T, cell.metric, cell.gap))
        else:
            logger.error('{} T={} failed: {}'.format(
                cell.label, cell.T, cell.error))

    game_info = {
        'horizon': game.horizon,
        'num_states': game.num_states,
        'action_counts': list(game.action_counts),
        'zero_sum': game.zero_sum,
    }
    report = SweepReport(plan, game_info, cells)
    for label in report.labels:
        label_cells = report.cells_of(label)
        report.fits.append(_fit(label, label_cells[0].algorithm, label_cells))
    if plan.check_bounds:
        report.bound_checks = check_bounds(report)
    logger.info('sweep finished: {} cells, {} failed ({:.2f}s)'.format(
        len(cells), len(report.errors), timer.interval))
    return report


def check_bounds(report, specs=None):
    """
    Compares every successful cell with the bound proven for its algorithm
    and step size. Cells without a matching BoundSpec are not checked.

    Returns:
        list of BoundCheck
    """
    if specs is None:
        specs = BOUND_SPECS
    H = report.game_info['horizon']
    counts = report.game_info['action_counts']
    if len(counts) != 2:
        return []
    A, B = counts
    checks = []
    for cell in report.cells:
        if not cell.ok or cell.T < 2:
            continue
        spec = find_bound(cell.algorithm, cell.eta_expr, specs)
        if spec is None:
            continue
        checks.append(BoundCheck(cell.label, cell.T, cell.gap,
                                 spec(cell.T, H, A, B), spec.name))
    return checks
