"""
Drivers of the policy-update / value-update / state-wise-average loop for
two-player zero-sum games.

Every iteration t runs the steps h = H..1 in descending order, so the value
update at step h reads the table of step h+1 that was refreshed in the same
iteration. Arrays are indexed by h - 1.
"""
import numpy as np
import tabmg.utils as U
from tabmg.session import (
    AlgorithmKind,
    AveragingMode,
    algorithm_kind,
    resolve_run_config,
    make_tracker,
    get_logger,
)
from tabmg.game import (
    GameError,
    MarkovPolicy,
    nash_values,
    ne_gap,
    layer_ne_gaps,
)
from tabmg.learner import (
    LearnerKind,
    PredictionWeight,
    SolverError,
    RegretAccumulator,
    make_learner,
    losses,
    step_matrix_ne,
)
from .eta import resolve_eta
from .trace import Trace, TraceRecord


RECURSION_TOL = 1e-9
SANDWICH_TOL = 1e-9


class RunError(RuntimeError):
    def __init__(self, message, t=None, h=None):
        super().__init__(message)
        self.t = t
        self.h = h


_LEARNER_OF = {
    AlgorithmKind.ftrl: LearnerKind.ftrl,
    AlgorithmKind.oftrl: LearnerKind.oftrl,
    AlgorithmKind.gda: LearnerKind.gda,
    AlgorithmKind.nash_q: LearnerKind.matrix_ne,
    AlgorithmKind.nash_pi: LearnerKind.matrix_ne,
    AlgorithmKind.inpg: LearnerKind.hedge,
    AlgorithmKind.mod_oftrl: LearnerKind.oftrl,
}


def initial_table(game):
    """
    Q_h^0 = H - h + 1 everywhere, [H, S, A, B]
    """
    Q0 = np.empty(game.shape)
    for h in range(1, game.horizon + 1):
        Q0[h - 1] = game.horizon - h + 1
    return Q0


def make_run_schedule(config, game):
    kind = U.get_enum(U.ScheduleKind, config.schedule)
    return U.make_schedule(kind, horizon=game.horizon,
                           rates=config.schedule_rates)


class RunState(object):
    """
    Everything a driver carries between iterations. `Q` is the single table
    of run_framework; run_mod_oftrl fills `Q_upper`/`Q_lower` instead and
    run_v_form only `V`.
    """
    def __init__(self, game, config, schedule, eta):
        self.game = game
        self.config = config
        self.kind = algorithm_kind(config)
        self.schedule = schedule
        self.eta = eta
        self.t = 0
        H, S = game.horizon, game.num_states
        A, B = game.action_counts
        self.Q = None
        self.Q_upper = None
        self.Q_lower = None
        self.V = None
        self.learners = []
        self.avg_mu = np.zeros((H, S, A))
        self.avg_nu = np.zeros((H, S, B))
        self.current_mu = np.zeros((H, S, A))
        self.current_nu = np.zeros((H, S, B))
        self.regrets = None
        self.delta = np.zeros(H)
        self._delta_mix = np.zeros(H)
        self.recursion_violations = 0
        self.uniform_average = (U.get_enum(AveragingMode, config.averaging)
                                == AveragingMode.uniform)

    def average_rate(self, t):
        if self.uniform_average:
            return 1.0 / t
        return self.schedule.value(t)

    def update_average(self, t, h, mu, nu):
        rate = self.average_rate(t)
        self.avg_mu[h - 1] = (1 - rate) * self.avg_mu[h - 1] + rate * mu
        self.avg_nu[h - 1] = (1 - rate) * self.avg_nu[h - 1] + rate * nu
        self.current_mu[h - 1] = mu
        self.current_nu[h - 1] = nu

    def averaged_policies(self):
        return (MarkovPolicy(0, self.avg_mu, check=False),
                MarkovPolicy(1, self.avg_nu, check=False))

    def current_policies(self):
        return (MarkovPolicy(0, self.current_mu, check=False),
                MarkovPolicy(1, self.current_nu, check=False))

    def sandwich_violation(self, Qstar):
        """
        Largest amount by which Q_lower <= Q* <= Q_upper fails, 0 if it holds.
        """
        if self.Q_upper is None:
            raise ValueError('sandwich is only defined for the two-table run')
        over = (self.Q_lower - Qstar.Q).max()
        under = (Qstar.Q - self.Q_upper).max()
        return float(max(over, under, 0.0))

    def max_regret(self):
        if self.regrets is None:
            return None
        return max(acc.max_regret() for acc in self.regrets)


def _new_learners(state, game, config, init, kind, prediction_weight):
    Q0 = initial_table(game)
    learners = []
    for h in range(1, game.horizon + 1):
        mu0 = init[0].step(h) if init is not None else None
        nu0 = init[1].step(h) if init is not None else None
        learners.append(make_learner(
            kind, game.num_states, game.action_counts, state.eta,
            state.schedule, Q0=Q0[h - 1], mu0=mu0, nu0=nu0,
            kl_base_point=config.kl_base_point,
            prediction_weight=prediction_weight,
        ))
    return learners


def _prepare(game, config, init):
    if not game.zero_sum:
        raise GameError('this driver needs a zero-sum game; use the '
                        'general-sum driver')
    config = resolve_run_config(config)
    if init is not None:
        for p in init:
            p.check_game(game)
    schedule = make_run_schedule(config, game)
    A, B = game.action_counts
    eta = resolve_eta(config.eta, config.iterations, game.horizon, A, B)
    state = RunState(game, config, schedule, eta)
    if config.diagnostics:
        state.regrets = [
            RegretAccumulator(game.num_states, game.action_counts, schedule,
                              history_cap=config.history_cap)
            for _ in range(game.horizon)
        ]
    return config, state


class _Recorder(object):
    """
    Checkpoint bookkeeping shared by the drivers.
    """
    def __init__(self, game, config, state, callback, logger):
        self.game = game
        self.config = config
        self.state = state
        self.callback = callback
        self.log = logger
        self.tracker = make_tracker(config.trace, config.iterations)
        self.trace = Trace(game.horizon)
        self.Qstar = nash_values(game)
        self.timer = U.Timer().start()

    def diagnostics_step(self, t, h, Q):
        """
        delta_h^t, regret accumulation and the value-estimation recursion
        delta_h^t <= sum_i beta_t^i delta_{h+1}^i + reg_{h+1}^t.
        """
        state = self.state
        if state.regrets is None:
            return
        H = self.game.horizon
        state.delta[h - 1] = np.abs(Q - self.Qstar.Q[h - 1]).max()
        beta = state.schedule.value(t)
        if h < H:
            delta_next = state.delta[h]
            reg_next = state.regrets[h].max_regret()
        else:
            delta_next = 0.0
            reg_next = 0.0
        state._delta_mix[h - 1] = ((1 - beta) * state._delta_mix[h - 1]
                                   + beta * delta_next)
        bound = state._delta_mix[h - 1] + reg_next + RECURSION_TOL
        if state.delta[h - 1] > bound:
            state.recursion_violations += 1
            self.log.debug('recursion violated at t={} h={}: {:.3g} > {:.3g}'
                           .format(t, h, state.delta[h - 1], bound))

    def checkpoint(self, t, output_fn=None):
        """
        Args:
            output_fn: returns the output policy pair, the state-wise
                average by default
        """
        if not self.tracker.track_absolute(t):
            return
        state = self.state
        if output_fn is None:
            output_fn = state.averaged_policies
        mu, nu = output_fn()
        record = TraceRecord(
            t,
            ne_gap(self.game, mu, nu),
            layer_ne_gaps(self.game, mu, nu, self.Qstar),
            max_reg=state.max_regret(),
            max_delta=(float(state.delta.max())
                       if state.regrets is not None else None),
            elapsed=self.timer.elapsed(),
            recursion_violations=(state.recursion_violations
                                  if state.regrets is not None else None),
        )
        self.trace.append(record)
        self.log.debug('t={} negap={:.6g}'.format(t, record.negap))
        if self.callback is not None:
            self.callback(t, state)

    def finish(self):
        self.timer.stop()
        if self.config.trace.path:
            self.trace.write_csv(self.config.trace.path)
        final = self.trace.final
        self.log.info('{} finished: T={} negap={} ({:.2f}s)'.format(
            self.state.kind.cli_name, self.config.iterations,
            U.fformat(final.negap, 12) if final else 'n/a',
            self.timer.interval))
        return self.trace


def _learner_step(t, h, fn, *args):
    try:
        return fn(*args)
    except (SolverError, FloatingPointError, ValueError) as e:
        raise RunError('learner failed at t={}, h={}: {}'.format(t, h, e),
                       t=t, h=h) from e


def _logger(logger, config):
    if logger is None:
        return get_logger('tabmg.' + algorithm_kind(config).cli_name)
    return logger


def run_framework(game, config, init=None, callback=None, logger=None):
    """
    Policy update from the configured learner, then
        Q_h^t = (1 - beta_t) Q_h^{t-1}
                + beta_t (r_h + P_h [mu_{h+1}^t^T Q_{h+1}^t nu_{h+1}^t])
    and the state-wise average of the iterates.

    Args:
        init: optional (mu0, nu0) MarkovPolicy pair used as initial iterate
            (and as KL base point when kl_base_point is set)
        callback: callback(t, run_state) at every checkpoint

    Returns:
        (avg_mu, avg_nu, trace). For nash-pi the output is one more
        equilibrium step on Q^T instead of the average.
    """
    config, state = _prepare(game, config, init)
    if state.kind == AlgorithmKind.mod_oftrl:
        return run_mod_oftrl(game, config, init, callback, logger)
    if state.kind == AlgorithmKind.gs_oftrl:
        raise GameError('gs-oftrl runs through the general-sum driver')
    if config.v_form:
        return run_v_form(game, config, init, callback, logger)
    log = _logger(logger, config)
    log.info('{} on {}: T={} eta={:.6g} schedule={}'.format(
        state.kind.cli_name, game, config.iterations, state.eta,
        config.schedule))

    H, S = game.horizon, game.num_states
    state.Q = initial_table(game)
    state.learners = _new_learners(state, game, config, init,
                                   _LEARNER_OF[state.kind],
                                   PredictionWeight.previous)
    recorder = _Recorder(game, config, state, callback, log)
    is_nash_pi = state.kind == AlgorithmKind.nash_pi

    for t in range(1, config.iterations + 1):
        beta = state.schedule.value(t)
        V_next = np.zeros(S)
        for h in range(H, 0, -1):
            learner = state.learners[h - 1]
            mu, nu = _learner_step(t, h, learner.policies, t)
            target = game.backup(h, V_next)
            Q = (1 - beta) * state.Q[h - 1] + beta * target
            state.Q[h - 1] = Q
            _learner_step(t, h, learner.observe, t, Q, mu, nu)
            state.update_average(t, h, mu, nu)
            if state.regrets is not None:
                state.regrets[h - 1].record(t, Q, mu, nu)
            recorder.diagnostics_step(t, h, Q)
            V_next = U.expected_value(Q, [mu, nu])
        state.t = t
        recorder.checkpoint(
            t, (lambda: _nash_pi_output(state)) if is_nash_pi else None)

    if is_nash_pi:
        avg_mu, avg_nu = _nash_pi_output(state)
    else:
        avg_mu, avg_nu = state.averaged_policies()
    return avg_mu, avg_nu, recorder.finish()


def _nash_pi_output(state):
    H = state.game.horizon
    mu = np.empty_like(state.avg_mu)
    nu = np.empty_like(state.avg_nu)
    for h in range(1, H + 1):
        mu[h - 1], nu[h - 1] = step_matrix_ne(state.Q[h - 1])
    return MarkovPolicy(0, mu, check=False), MarkovPolicy(1, nu, check=False)


def run_v_form(game, config, init=None, callback=None, logger=None):
    """
    Same iterates as run_framework for ftrl and gda with the alpha schedule,
    keeping only V tables:
        losses of step t:  r_h + P_h V_{h+1}^t
        V_h^t = (1 - alpha_t) V_h^{t-1}
                + alpha_t mu_h^t^T (r_h + P_h V_{h+1}^t) nu_h^t
    The learners start from the same constant table Q_h^0 as the Q form.
    """
    config, state = _prepare(game, dict(config, v_form=True), init)
    log = _logger(logger, config)
    log.info('{} (V form) on {}: T={} eta={:.6g}'.format(
        state.kind.cli_name, game, config.iterations, state.eta))

    H, S = game.horizon, game.num_states
    state.V = np.empty((H, S))
    for h in range(1, H + 1):
        state.V[h - 1] = H - h + 1
    state.learners = _new_learners(state, game, config, init,
                                   _LEARNER_OF[state.kind],
                                   PredictionWeight.previous)
    recorder = _Recorder(game, config, state, callback, log)

    for t in range(1, config.iterations + 1):
        alpha = state.schedule.value(t)
        for h in range(H, 0, -1):
            learner = state.learners[h - 1]
            mu, nu = _learner_step(t, h, learner.policies, t)
            V_next = state.V[h] if h < H else np.zeros(S)
            Q = game.backup(h, V_next)
            _learner_step(t, h, learner.observe, t, Q, mu, nu)
            state.V[h - 1] = ((1 - alpha) * state.V[h - 1]
                              + alpha * U.expected_value(Q, [mu, nu]))
            state.update_average(t, h, mu, nu)
            if state.regrets is not None:
                state.regrets[h - 1].record(t, Q, mu, nu)
            recorder.diagnostics_step(t, h, Q)
        state.t = t
        recorder.checkpoint(t)

    avg_mu, avg_nu = state.averaged_policies()
    return avg_mu, avg_nu, recorder.finish()


def run_mod_oftrl(game, config, init=None, callback=None, logger=None):
    """
    Two-sided OFTRL. The max-player learns from an upper table and the
    min-player from a lower table:
        Q_up_h^t  = r_h + P_h [max_a  sum_i alpha_t^i [Q_up_{h+1}^i nu_{h+1}^i]]
        Q_low_h^t = r_h + P_h [min_b  sum_i alpha_t^i [Q_low_{h+1}^i^T mu_{h+1}^i]]
    with the inner mixtures kept incrementally. Q_low <= Q* <= Q_up holds at
    every iteration.
    """
    config, state = _prepare(game, config, init)
    if state.kind != AlgorithmKind.mod_oftrl:
        raise RunError('run_mod_oftrl got algorithm {}'
                       .format(state.kind.cli_name))
    log = _logger(logger, config)
    log.info('{} on {}: T={} eta={:.6g}'.format(
        state.kind.cli_name, game, config.iterations, state.eta))

    H, S = game.horizon, game.num_states
    A, B = game.action_counts
    state.Q_upper = initial_table(game)
    state.Q_lower = np.zeros(game.shape)
    mix_upper = np.zeros((H, S, A))
    mix_lower = np.zeros((H, S, B))
    state.learners = _new_learners(state, game, config, init,
                                   LearnerKind.oftrl, PredictionWeight.current)
    recorder = _Recorder(game, config, state, callback, log)

    for t in range(1, config.iterations + 1):
        alpha = state.schedule.value(t)
        for h in range(H, 0, -1):
            learner = state.learners[h - 1]
            mu, nu = _learner_step(t, h, learner.policies, t)
            if h < H:
                V_upper = mix_upper[h].max(axis=-1)
                V_lower = mix_lower[h].min(axis=-1)
            else:
                V_upper = V_lower = np.zeros(S)
            Q_up = game.backup(h, V_upper)
            Q_low = game.backup(h, V_lower)
            state.Q_upper[h - 1] = Q_up
            state.Q_lower[h - 1] = Q_low
            g_mu, _ = losses(Q_up, mu, nu)
            _, g_nu = losses(Q_low, mu, nu)
            _learner_step(t, h, learner.observe_losses,
                          t, g_mu, g_nu, mu, nu)
            mix_upper[h - 1] = (1 - alpha) * mix_upper[h - 1] + alpha * g_mu
            mix_lower[h - 1] = (1 - alpha) * mix_lower[h - 1] + alpha * g_nu
            state.update_average(t, h, mu, nu)
            if state.regrets is not None:
                state.regrets[h - 1].record_losses(t, g_mu, g_nu, mu, nu)
                state.delta[h - 1] = max(
                    np.abs(Q_up - recorder.Qstar.Q[h - 1]).max(),
                    np.abs(Q_low - recorder.Qstar.Q[h - 1]).max())
        state.t = t
        recorder.checkpoint(t)

    avg_mu, avg_nu = state.averaged_policies()
    return avg_mu, avg_nu, recorder.finish()
