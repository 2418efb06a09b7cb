from enum import auto
import tabmg.utils as U
from .config import extend_config, Config, ConfigError


class AlgorithmKind(U.StringEnum):
    ftrl = auto()
    oftrl = auto()
    gda = auto()
    nash_q = auto()
    nash_pi = auto()
    inpg = auto()
    mod_oftrl = auto()
    gs_oftrl = auto()


class AveragingMode(U.StringEnum):
    schedule = auto()
    uniform = auto()


# ======================== Single run ========================
BASE_RUN_CONFIG = {
    'algorithm': '_enum[ftrl, oftrl, gda, nash-q, nash-pi, inpg, '
                 'mod-oftrl, gs-oftrl]_',
    'iterations': '_int_',
    # None picks the algorithm's own schedule (see resolve_run_config)
    'schedule': None,
    'schedule_rates': None,  # list of beta_t for the custom schedule
    # '<float>', '<float>*T^<float>' or a preset name; None picks the preset
    'eta': None,
    'seed': 0,
    'v_form': False,
    'kl_base_point': False,
    'diagnostics': False,
    'averaging': None,
    'history_cap': 64,  # stored (loss, policy) pairs for regret checks
    'trace': {
        'mode': 'geometric',  # geometric | periodic | full
        'every': 1,
        'factor': 1.5,
        'path': None,
    },
}


# ======================== Sweeps ========================
BASE_SWEEP_CONFIG = {
    'game': {
        'source': 'two-layer',  # two-layer | file | random
        'path': None,
        'seed': 0,
        'horizon': 3,
        'num_states': 4,
        'action_counts': [2, 2],
        'players': 2,
    },
    # each entry: {'algorithm': ..., 'eta': ...}
    'algorithms': [
        {'algorithm': 'oftrl', 'eta': 'oftrl56'},
        {'algorithm': 'ftrl', 'eta': '1*T^-0.5'},
        {'algorithm': 'inpg', 'eta': '1*T^-0.5'},
    ],
    'iterations': [100, 300, 1000, 3000, 10000, 30000, 100000],
    'out_dir': 'tabmg-sweep',
    'threads': 1,
    'check_bounds': False,
    'seed': 0,
}


# ======================== Session ========================
BASE_SESSION_CONFIG = {
    'logger': {
        'level': 'info',
        'show_level': True,
        'time_format': 'hms',
        'stream': 'stderr',
    },
}


_DEFAULT_ETA = {
    AlgorithmKind.ftrl: 'nashv',
    AlgorithmKind.oftrl: 'oftrl56',
    AlgorithmKind.gda: 'gda',
    AlgorithmKind.nash_q: '1',
    AlgorithmKind.nash_pi: '1',
    AlgorithmKind.inpg: '1*T^-0.5',
    AlgorithmKind.mod_oftrl: 'mod-oftrl',
    AlgorithmKind.gs_oftrl: 'gs-oftrl',
}

_EAGER_ONLY = (AlgorithmKind.nash_pi, AlgorithmKind.inpg)
_ALPHA_ONLY = (AlgorithmKind.mod_oftrl, AlgorithmKind.gs_oftrl)
_V_FORM_KINDS = (AlgorithmKind.ftrl, AlgorithmKind.gda)


def algorithm_kind(config):
    return U.get_enum(AlgorithmKind, config.algorithm)


def resolve_run_config(config):
    """
    Fills defaults and applies the per-algorithm rules on schedule, step size
    and averaging.

    Returns:
        Config with `schedule`, `eta` and `averaging` always set

    Raises:
        ConfigError on conflicting choices
    """
    config = extend_config(Config(config).to_dict(), BASE_RUN_CONFIG)
    kind = algorithm_kind(config)
    if config.iterations < 1:
        raise ConfigError('iterations must be >= 1, got {}'
                          .format(config.iterations))

    schedule = config.schedule
    if schedule is not None:
        try:
            schedule = U.get_enum(U.ScheduleKind, schedule)
        except ValueError as e:
            raise ConfigError(str(e))
    if kind in _EAGER_ONLY:
        if schedule not in (None, U.ScheduleKind.eager):
            raise ConfigError('{} always uses the eager schedule, got {}'
                              .format(kind.cli_name, schedule.cli_name))
        schedule = U.ScheduleKind.eager
    elif schedule is None:
        schedule = U.ScheduleKind.alpha
    if kind in _ALPHA_ONLY and schedule != U.ScheduleKind.alpha:
        raise ConfigError('{} requires the alpha schedule'
                          .format(kind.cli_name))
    if config.v_form:
        if kind not in _V_FORM_KINDS:
            raise ConfigError('v_form is only available for ftrl and gda, '
                              'got {}'.format(kind.cli_name))
        if schedule != U.ScheduleKind.alpha:
            raise ConfigError('v_form requires the alpha schedule')
    if schedule == U.ScheduleKind.custom and not config.schedule_rates:
        raise ConfigError('custom schedule needs schedule_rates')
    config.schedule = schedule.name

    if config.eta is None:
        config.eta = _DEFAULT_ETA[kind]
    config.eta = str(config.eta)

    averaging = config.averaging
    if averaging is None:
        averaging = (AveragingMode.uniform if kind == AlgorithmKind.inpg
                     else AveragingMode.schedule)
    else:
        try:
            averaging = U.get_enum(AveragingMode, averaging)
        except ValueError as e:
            raise ConfigError(str(e))
    config.averaging = averaging.name

    if config.trace.mode not in ('geometric', 'periodic', 'full'):
        raise ConfigError('trace.mode must be geometric, periodic or full, '
                          'got {}'.format(config.trace.mode))
    return config
