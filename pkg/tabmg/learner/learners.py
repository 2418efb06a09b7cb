import numpy as np
import tabmg.utils as U
from .base import MatrixLearner, LearnerKind
from .steps import (
    PredictionWeight,
    softmax_policy,
    oftrl_exponent,
    step_ftrl,
    step_oftrl,
    step_gda,
    step_matrix_ne,
    step_hedge_inpg,
)


def _log_base(dist):
    with np.errstate(divide='ignore'):
        return np.log(dist)


class PlayerFTRL(object):
    """
    Weighted (optimistic) FTRL of a single player over per-state losses.

    The accumulator holds S_t = sum_{i <= t} w_i g_i / w_t so that it stays
    bounded for schedules whose weights w_t grow polynomially in t.

    Args:
        sign: +1 for a maximizing player, -1 for a minimizing one
        optimistic: add the last loss as prediction
        base: base distribution [S, A] of the KL regularizer, uniform if None
    """
    def __init__(self, num_states, num_actions, eta, schedule, sign=1,
                 optimistic=False,
                 prediction_weight=PredictionWeight.previous, base=None):
        self.eta = eta
        self.schedule = schedule
        self.sign = sign
        self.optimistic = optimistic
        self.prediction_weight = U.get_enum(PredictionWeight,
                                            prediction_weight)
        self.acc = np.zeros((num_states, num_actions))
        self.last_loss = np.zeros((num_states, num_actions))
        self.log_base = None if base is None else _log_base(base)
        self.t = 0

    def exponent(self, t):
        if not self.optimistic:
            return self.sign * self.eta * self.acc
        ratio = self.schedule.weight_ratio(t)
        return self.sign * oftrl_exponent(self.acc, self.last_loss, ratio,
                                          self.eta, self.prediction_weight)

    def policy(self, t):
        return softmax_policy(self.exponent(t), self.log_base)

    def accumulate(self, t, g):
        self.acc = self.schedule.weight_ratio(t) * self.acc + g
        self.last_loss = g
        self.t = t

    def weighted_loss_sum(self):
        "sum_{i <= t} w_i g_i, alpha schedule only"
        return self.schedule.w(self.t) * self.acc


class FTRLLearner(MatrixLearner):
    """
    Weighted FTRL with entropy (or KL to the initial policy) regularizer:
        mu^t ∝ exp((eta / w_{t-1}) sum_{i < t} w_i [Q^i nu^i])
    """
    kind = LearnerKind.ftrl
    optimistic = False

    def __init__(self, num_states, action_counts, eta, schedule,
                 Q0=None, mu0=None, nu0=None, kl_base_point=False,
                 prediction_weight=PredictionWeight.previous):
        super().__init__(num_states, action_counts, eta, schedule,
                         Q0=Q0, mu0=mu0, nu0=nu0)
        self.kl_base_point = kl_base_point
        self.prediction_weight = U.get_enum(PredictionWeight,
                                            prediction_weight)

    def _initialize(self):
        super()._initialize()
        A, B = self.action_counts
        self.players = [
            PlayerFTRL(self.num_states, A, self.eta, self.schedule, sign=1,
                       optimistic=self.optimistic,
                       prediction_weight=self.prediction_weight,
                       base=self.mu0 if self.kl_base_point else None),
            PlayerFTRL(self.num_states, B, self.eta, self.schedule, sign=-1,
                       optimistic=self.optimistic,
                       prediction_weight=self.prediction_weight,
                       base=self.nu0 if self.kl_base_point else None),
        ]

    def _next_policies(self, t):
        mu_player, nu_player = self.players
        if not self.optimistic:
            return step_ftrl(mu_player.acc, nu_player.acc, self.eta,
                             mu_player.log_base, nu_player.log_base)
        return step_oftrl(mu_player.acc, nu_player.acc,
                          mu_player.last_loss, nu_player.last_loss,
                          self.schedule.weight_ratio(t), self.eta,
                          self.prediction_weight,
                          mu_player.log_base, nu_player.log_base)

    def _update(self, t, g_mu, g_nu):
        self.players[0].accumulate(t, g_mu)
        self.players[1].accumulate(t, g_nu)

    def weighted_loss_sum(self):
        """
        Returns:
            (sum_i w_i g_mu^i, sum_i w_i g_nu^i)
        """
        return tuple(p.weighted_loss_sum() for p in self.players)


class OFTRLLearner(FTRLLearner):
    """
    Optimistic weighted FTRL: the last loss is counted once more as the
    prediction of the next one, with weight w_{t-1} (previous) or w_t
    (current).
    """
    kind = LearnerKind.oftrl
    optimistic = True


class GDALearner(MatrixLearner):
    """
    Projected gradient ascent (row) / descent (column) on the last losses.
    """
    kind = LearnerKind.gda

    def _next_policies(self, t):
        return step_gda(self.last_mu, self.last_nu,
                        self.last_mu_loss, self.last_nu_loss, self.eta)


class MatrixNELearner(MatrixLearner):
    """
    Plays the exact equilibrium of the last table Q^{t-1}.
    """
    kind = LearnerKind.matrix_ne

    def _initialize(self):
        super()._initialize()
        self.last_Q = self.Q0

    def _next_policies(self, t):
        return step_matrix_ne(self.last_Q)

    def observe(self, t, Q, mu, nu):
        super().observe(t, Q, mu, nu)
        self.last_Q = np.array(Q)


class HedgeLearner(MatrixLearner):
    """
    Unweighted exponential weights on the last losses, kept in log space.
    """
    kind = LearnerKind.hedge

    def _initialize(self):
        super()._initialize()
        self.log_mu = U.log_normalize_rows(_log_base(self.mu0))
        self.log_nu = U.log_normalize_rows(_log_base(self.nu0))

    def _next_policies(self, t):
        mu, nu, self._next_log_mu, self._next_log_nu = step_hedge_inpg(
            self.log_mu, self.log_nu,
            self.last_mu_loss, self.last_nu_loss, self.eta)
        return mu, nu

    def _update(self, t, g_mu, g_nu):
        if self._policies is None:
            self.policies(t)
        self.log_mu, self.log_nu = self._next_log_mu, self._next_log_nu


_LEARNERS = {
    LearnerKind.ftrl: FTRLLearner,
    LearnerKind.oftrl: OFTRLLearner,
    LearnerKind.gda: GDALearner,
    LearnerKind.matrix_ne: MatrixNELearner,
    LearnerKind.hedge: HedgeLearner,
}


def make_learner(kind, num_states, action_counts, eta, schedule,
                 Q0=None, mu0=None, nu0=None, kl_base_point=False,
                 prediction_weight=PredictionWeight.previous):
    """
    Raises:
        ValueError for an unknown kind
    """
    kind = U.get_enum(LearnerKind, kind)
    cls = _LEARNERS[kind]
    if issubclass(cls, FTRLLearner):
        return cls(num_states, action_counts, eta, schedule,
                   Q0=Q0, mu0=mu0, nu0=nu0, kl_base_point=kl_base_point,
                   prediction_weight=prediction_weight)
    return cls(num_states, action_counts, eta, schedule,
               Q0=Q0, mu0=mu0, nu0=nu0)
