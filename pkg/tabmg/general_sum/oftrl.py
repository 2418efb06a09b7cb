"""
Independent OFTRL for multi-player general-sum games.

Each player i keeps its own Q table Q_i [H, S, A_1, ..., A_m] and runs OFTRL
per step over the marginal losses [Q_i pi_{-i}]. The product policies of
every iteration are stored so the certified policy can be replayed.
"""
import numpy as np
import tabmg.utils as U
from tabmg.session import (
    AlgorithmKind,
    ConfigError,
    algorithm_kind,
    resolve_run_config,
    make_tracker,
    get_logger,
)
from tabmg.game import to_general_sum
from tabmg.learner import PlayerFTRL, PredictionWeight
from tabmg.framework import (
    RunError,
    CCETrace,
    CCETraceRecord,
    initial_table,
    make_run_schedule,
    resolve_eta,
)
from .certified import (
    BestResponseTracker,
    CertifiedPolicy,
    cce_gap_from_values,
)


class GeneralSumState(object):
    def __init__(self, game, config, schedule, eta):
        self.game = game
        self.config = config
        self.schedule = schedule
        self.eta = eta
        self.t = 0
        H, S, m = game.horizon, game.num_states, game.players
        T = config.iterations
        Q0 = initial_table(game)
        self.Q = [Q0.copy() for _ in range(m)]
        self.V = np.zeros((m, H + 1, S))
        self.learners = [
            [PlayerFTRL(S, A, eta, schedule, sign=1, optimistic=True,
                        prediction_weight=PredictionWeight.current)
             for _ in range(H)]
            for A in game.action_counts
        ]
        self.history = [np.zeros((T, H, S, A)) for A in game.action_counts]
        self.best_response = BestResponseTracker(game, schedule)
        # beta-mixed marginal losses and realized payoffs, per player and step
        self._loss_mix = None
        self._payoff_mix = None
        if config.diagnostics:
            self._loss_mix = [np.zeros((H, S, A))
                              for A in game.action_counts]
            self._payoff_mix = np.zeros((m, H, S))

    def values(self):
        "[m] V_{i,1}^t(s_1)"
        return self.V[:, 0, self.game.initial_state].copy()

    def cce_gap(self):
        return cce_gap_from_values(self.best_response.values(), self.values())

    def record_regret(self, t, h, i, g, pi):
        if self._loss_mix is None:
            return
        beta = self.schedule.value(t)
        mix = self._loss_mix[i]
        mix[h - 1] = (1 - beta) * mix[h - 1] + beta * g
        self._payoff_mix[i, h - 1] = ((1 - beta) * self._payoff_mix[i, h - 1]
                                      + beta * (pi * g).sum(axis=-1))

    def max_regret(self):
        """
        max over players, steps and states of the weighted regret, None
        without diagnostics
        """
        if self._loss_mix is None:
            return None
        return float(max(
            (self._loss_mix[i].max(axis=-1) - self._payoff_mix[i]).max()
            for i in range(self.game.players)))

    def certified_policy(self, root=None):
        history = [h[:self.t] for h in self.history]
        return CertifiedPolicy(history, self.schedule, root=root)


def _prepare(game, config):
    if game.zero_sum:
        game = to_general_sum(game)
    config = dict(config)
    config.setdefault('algorithm', AlgorithmKind.gs_oftrl.cli_name)
    config = resolve_run_config(config)
    if algorithm_kind(config) != AlgorithmKind.gs_oftrl:
        raise ConfigError('the general-sum driver runs gs-oftrl, got {}'
                          .format(config.algorithm))
    schedule = make_run_schedule(config, game)
    counts = game.action_counts
    eta = resolve_eta(config.eta, config.iterations, game.horizon,
                      counts[0], counts[1], m=game.players,
                      A_max=max(counts))
    return game, config, GeneralSumState(game, config, schedule, eta)


def run_general_sum_oftrl(game, config, callback=None, logger=None):
    """
    For h = H..1 within iteration t:
        pi_{i,h}^t from OFTRL on the marginal losses of player i
        Q_{i,h}^t = (1 - alpha_t) Q_{i,h}^{t-1}
                    + alpha_t (r_{i,h} + P_h [Q_{i,h+1}^t pi_{h+1}^t])
    Zero-sum games are converted to general-sum rewards (r, 1 - r).

    Returns:
        (CertifiedPolicy, CCETrace, GeneralSumState)
    """
    game, config, state = _prepare(game, config)
    if logger is None:
        logger = get_logger('tabmg.' + algorithm_kind(config).cli_name)
    logger.info('{} on {}: T={} eta={:.6g} schedule={}'.format(
        AlgorithmKind.gs_oftrl.cli_name, game, config.iterations, state.eta,
        config.schedule))

    H, S, m = game.horizon, game.num_states, game.players
    tracker = make_tracker(config.trace, config.iterations)
    trace = CCETrace(H)
    timer = U.Timer().start()

    for t in range(1, config.iterations + 1):
        alpha = state.schedule.value(t)
        V_next = np.zeros((m, S))
        for h in range(H, 0, -1):
            pis = [state.learners[i][h - 1].policy(t) for i in range(m)]
            for i in range(m):
                target = game.backup(h, V_next[i], player=i)
                Q = (1 - alpha) * state.Q[i][h - 1] + alpha * target
                if not np.all(np.isfinite(Q)):
                    raise RunError('non-finite Q of player {} at t={}, h={}'
                                   .format(i, t, h), t=t, h=h)
                state.Q[i][h - 1] = Q
                g = U.contract_others(Q, pis, keep=i)
                state.learners[i][h - 1].accumulate(t, g)
                state.record_regret(t, h, i, g, pis[i])
                V_next[i] = (g * pis[i]).sum(axis=-1)
                state.V[i, h - 1] = ((1 - alpha) * state.V[i, h - 1]
                                     + alpha * V_next[i])
                state.history[i][t - 1, h - 1] = pis[i]
            state.best_response.update(t, h, pis)
        state.t = t
        if tracker.track_absolute(t):
            record = CCETraceRecord(t, state.cce_gap(),
                                    max_reg=state.max_regret(),
                                    elapsed=timer.elapsed())
            trace.append(record)
            logger.debug('t={} ccegap={:.6g}'.format(t, record.ccegap))
            if callback is not None:
                callback(t, state)

    timer.stop()
    if config.trace.path:
        trace.write_csv(config.trace.path)
    final = trace.final
    logger.info('{} finished: T={} ccegap={} ({:.2f}s)'.format(
        AlgorithmKind.gs_oftrl.cli_name, config.iterations,
        U.fformat(final.ccegap, 12) if final else 'n/a', timer.interval))
    return state.certified_policy(), trace, state
