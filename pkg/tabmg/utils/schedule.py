"""This file specifies the value-update learning rates beta_t used by the
framework, together with every quantity derived from them:
 - the mixing weights beta_t^i that the Q update implicitly applies to
   past backups (and that the state-wise average policy uses),
 - the FTRL weights w_t, defined for the alpha schedule,
 - the error amplification constant c_beta and its partial tail sums.

Each schedule has a function `value(t)` which returns beta_t for t >= 1.
Schedules are immutable after construction.
"""
import math
from enum import auto
import numpy as np
from .common import StringEnum, get_enum


class ScheduleKind(StringEnum):
    alpha = auto()
    eager = auto()
    custom = auto()


class ScheduleError(IndexError):
    pass


class Schedule(object):
    kind = None

    def value(self, t):
        """Value of beta_t, t >= 1"""
        raise NotImplementedError()

    def _check_step(self, t):
        if t < 1:
            raise ValueError('schedule step must be >= 1, got {}'.format(t))

    def weight_ratio(self, t):
        """
        w_{t-1} / w_t with w_0 = w_1 = 1.

        The FTRL weights are proportional to beta_t^i within a step, which
        gives w_{t-1}/w_t = beta_{t-1} * (1 - beta_t) / beta_t for any
        schedule with positive rates.
        """
        self._check_step(t)
        if t == 1:
            return 1.0
        beta_t = self.value(t)
        if beta_t <= 0:
            raise ValueError('weight ratio needs beta_t > 0, got beta_{} = {}'
                             .format(t, beta_t))
        return self.value(t - 1) * (1.0 - beta_t) / beta_t

    def weights(self, t):
        """
        Returns:
            WeightVector (beta_t^1, ..., beta_t^t), see WeightVector.at
        """
        self._check_step(t)
        return WeightVector.at(self, t)

    def tail_sum(self, j, N):
        """
        sum_{t=j}^{N} beta_t^j
        """
        if not 1 <= j <= N:
            raise ValueError('tail_sum requires 1 <= j <= N, got j={}, N={}'
                             .format(j, N))
        term = self.value(j)
        total = term
        for t in range(j + 1, N + 1):
            term *= 1.0 - self.value(t)
            if term == 0.0:
                break
            total += term
        return total

    def c_beta(self):
        raise ValueError('c_beta is a supremum over an infinite tail and is '
                         'not available for {} schedules; use tail_sum'
                         .format(self.kind.name))

    def w(self, t):
        raise ValueError('w_t is only defined for the alpha schedule, '
                         'not for {}'.format(self.kind.name))

    def __repr__(self):
        return '{}()'.format(self.__class__.__name__)


class AlphaSchedule(Schedule):
    kind = ScheduleKind.alpha

    def __init__(self, horizon):
        """
        beta_t = alpha_t = (H+1)/(H+t)

        Parameters
        ----------
        horizon: int
            horizon H of the game, H >= 1
        """
        if int(horizon) != horizon or horizon < 1:
            raise ValueError('alpha schedule needs a positive integer horizon, '
                             'got {}'.format(horizon))
        self.horizon = int(horizon)

    def value(self, t):
        self._check_step(t)
        return (self.horizon + 1.0) / (self.horizon + t)

    def weight_ratio(self, t):
        self._check_step(t)
        if t == 1:
            return 1.0
        return (t - 1.0) / (self.horizon + t - 1.0)

    def w(self, t):
        """
        w_t = alpha_t^t / alpha_t^1 = binom(H+t-1, t-1); w_0 = 1.
        """
        if t < 0:
            raise ValueError('w_t needs t >= 0, got {}'.format(t))
        if t <= 1:
            return 1.0
        return float(math.comb(self.horizon + t - 1, t - 1))

    def c_beta(self):
        return 1.0 + 1.0 / self.horizon

    def __repr__(self):
        return 'AlphaSchedule(horizon={})'.format(self.horizon)


class EagerSchedule(Schedule):
    """beta_t = 1: every iteration fully re-evaluates the current policies"""
    kind = ScheduleKind.eager

    def value(self, t):
        self._check_step(t)
        return 1.0

    def c_beta(self):
        return 1.0


class CustomSchedule(Schedule):
    kind = ScheduleKind.custom

    def __init__(self, rates):
        """
        Parameters
        ----------
        rates: list of float
            beta_1, beta_2, ... in [0, 1] with beta_1 = 1
        """
        rates = [float(r) for r in rates]
        if not rates:
            raise ValueError('custom schedule needs at least one rate')
        if rates[0] != 1.0:
            raise ValueError('custom schedule must start with beta_1 = 1, '
                             'got {}'.format(rates[0]))
        for i, r in enumerate(rates):
            if not 0.0 <= r <= 1.0:
                raise ValueError('beta_{} = {} outside [0, 1]'.format(i + 1, r))
        self.rates = tuple(rates)

    def value(self, t):
        self._check_step(t)
        if t > len(self.rates):
            raise ScheduleError('custom schedule has {} rates, beta_{} requested'
                                .format(len(self.rates), t))
        return self.rates[t - 1]

    def __repr__(self):
        return 'CustomSchedule(len={})'.format(len(self.rates))


class WeightVector(object):
    """
    The weights (beta_t^1, ..., beta_t^t). Sums to one.
    """
    def __init__(self, t, weights):
        self.t = t
        self.weights = np.asarray(weights, dtype=np.float64)
        assert self.weights.shape == (t,)

    @classmethod
    def first(cls, schedule):
        return cls(1, [schedule.value(1)])

    @classmethod
    def at(cls, schedule, t):
        """
        The vector that `advance` reaches after t - 1 steps, in O(t).
        Each beta_i is scaled by the same factors (1 - beta_j), j > i, that
        `advance` applies, accumulated from the newest step backwards.
        """
        betas = np.array([schedule.value(i) for i in range(1, t + 1)])
        # scale[i-1] = prod_{j=i+1}^{t} (1 - beta_j)
        scale = np.ones(t)
        if t > 1:
            scale[:-1] = np.cumprod(1.0 - betas[:0:-1])[::-1]
        return cls(t, betas * scale)

    def advance(self, schedule):
        """
        beta_{t+1}^{t+1} = beta_{t+1}, beta_{t+1}^i = (1 - beta_{t+1}) beta_t^i
        """
        beta = schedule.value(self.t + 1)
        weights = np.empty(self.t + 1)
        weights[:-1] = (1.0 - beta) * self.weights
        weights[-1] = beta
        return WeightVector(self.t + 1, weights)

    def __len__(self):
        return self.t

    def __getitem__(self, i):
        """1-based: weight_vector[i] = beta_t^i"""
        if not 1 <= i <= self.t:
            raise IndexError('weight index {} outside [1, {}]'.format(i, self.t))
        return self.weights[i - 1]


def make_schedule(kind, horizon=None, rates=None):
    kind = get_enum(ScheduleKind, kind)
    if kind == ScheduleKind.alpha:
        return AlphaSchedule(horizon)
    elif kind == ScheduleKind.eager:
        return EagerSchedule()
    else:
        return CustomSchedule(rates if rates is not None else [])


# ======================== functional API ========================
def beta(schedule, t):
    return schedule.value(t)


def weight_vector(schedule, t):
    return schedule.weights(t)


def w(schedule, t):
    return schedule.w(t)


def c_beta(schedule):
    return schedule.c_beta()


def tail_sum(schedule, j, N):
    return schedule.tail_sum(j, N)
