import math
import nanolog
import tabmg.utils as U
from .config import Config, extend_config
from .default_configs import BASE_SESSION_CONFIG


class _Tracker(object):
    """
    Follows an integer counter and says which values are checkpoints.
    `final`, when given, is always one.
    """
    def __init__(self, final=None):
        self.final = final
        self.value = 0

    def _fires(self, previous, value):
        raise NotImplementedError

    def track_absolute(self, value):
        """
        Returns: True if `value` is a checkpoint
        """
        U.assert_type(value, int)
        previous, self.value = self.value, value
        fired = self._fires(previous, value)
        return fired or (self.final is not None and value == self.final)

    def track_increment(self, incr=1):
        return self.track_absolute(self.value + incr)


class PeriodicTracker(_Tracker):
    "fires once each time the counter crosses a multiple of `period`"
    def __init__(self, period, final=None, first=False):
        U.assert_type(period, int)
        assert period > 0, 'period must be positive'
        super().__init__(final)
        self.period = period
        self.first = first

    def _fires(self, previous, value):
        if self.first and value == 1:
            return True
        return value // self.period > previous // self.period


class GeometricTracker(_Tracker):
    """
    Fires at t = 1, then whenever t reaches the next point of the sequence
    n_{k+1} = max(n_k + 1, ceil(factor * n_k)).
    """
    def __init__(self, factor=1.5, final=None):
        assert factor > 1, 'growth factor must be > 1'
        super().__init__(final)
        self.factor = factor
        self._next = 1

    def _fires(self, previous, value):
        fired = value >= self._next
        while self._next <= value:
            self._next = max(self._next + 1,
                             int(math.ceil(self._next * self.factor)))
        return fired


class FullTracker(_Tracker):
    def _fires(self, previous, value):
        return True


def make_tracker(trace_config, final):
    """
    Args:
        trace_config: see BASE_RUN_CONFIG['trace']
        final: last step, always recorded

    Returns:
        tracker whose `track_absolute(t)` says whether step t is a checkpoint
    """
    mode = trace_config.mode
    if mode == 'geometric':
        return GeometricTracker(trace_config.factor, final=final)
    elif mode == 'periodic':
        return PeriodicTracker(trace_config.every, final=final, first=True)
    elif mode == 'full':
        return FullTracker(final)
    else:
        raise ValueError('unknown trace mode: {}'.format(mode))


def checkpoint_steps(trace_config, final):
    """
    All checkpoints of a run with `final` iterations, in increasing order.
    """
    tracker = make_tracker(trace_config, final)
    return [t for t in range(1, final + 1) if tracker.track_absolute(t)]


def get_logger(name, session_config=None, level=None):
    """
    Args:
        name: logger name, shown in every line
        session_config: see BASE_SESSION_CONFIG['logger']
        level: overrides the configured level, e.g. 'debug' for -v
    """
    if session_config is None:
        session_config = {}
    C = extend_config(Config(session_config).to_dict(),
                      BASE_SESSION_CONFIG).logger
    return nanolog.Logger.create_logger(
        name,
        level=level or C.level,
        show_level=C.show_level,
        time_format=C.time_format,
        stream=C.stream,
    )
