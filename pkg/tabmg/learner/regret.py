import numpy as np
import tabmg.utils as U
from .steps import losses


class RegretAccumulator(object):
    """
    Per-state weighted regrets of one step h, both players:
        reg_mu(s) = max_a sum_i beta_t^i [Q^i nu^i](s, a)
                    - sum_i beta_t^i <mu^i, [Q^i nu^i](s, .)>
        reg_nu(s) = sum_i beta_t^i <nu^i, [(Q^i)^T mu^i](s, .)>
                    - min_b sum_i beta_t^i [(Q^i)^T mu^i](s, b)
    The beta-weighted sums are updated in place by (1 - beta_t) x + beta_t y.

    Args:
        history_cap: keep up to this many (beta_t, losses, policies) records
            for brute-force recomputation; 0 keeps none
    """
    def __init__(self, num_states, action_counts, schedule, history_cap=0):
        A, B = action_counts
        self.schedule = schedule
        self.loss_mu = np.zeros((num_states, A))
        self.loss_nu = np.zeros((num_states, B))
        self.payoff_mu = np.zeros(num_states)
        self.payoff_nu = np.zeros(num_states)
        self.history_cap = history_cap
        self.history = []
        self.t = 0

    def record(self, t, Q, mu, nu):
        g_mu, g_nu = losses(Q, mu, nu)
        self.record_losses(t, g_mu, g_nu, mu, nu)

    def record_losses(self, t, g_mu, g_nu, mu, nu):
        assert t == self.t + 1, 'regret records must arrive in order'
        beta = self.schedule.value(t)
        self.loss_mu = (1 - beta) * self.loss_mu + beta * g_mu
        self.loss_nu = (1 - beta) * self.loss_nu + beta * g_nu
        self.payoff_mu = ((1 - beta) * self.payoff_mu
                          + beta * (mu * g_mu).sum(axis=-1))
        self.payoff_nu = ((1 - beta) * self.payoff_nu
                          + beta * (nu * g_nu).sum(axis=-1))
        if len(self.history) < self.history_cap:
            self.history.append((g_mu, g_nu, mu, nu))
        self.t = t

    def regret(self, player):
        "[S] per-state weighted regret of player 0 (max) or 1 (min)"
        if self.t == 0:
            raise ValueError('no step recorded yet')
        if player == 0:
            return self.loss_mu.max(axis=-1) - self.payoff_mu
        return self.payoff_nu - self.loss_nu.min(axis=-1)

    def max_regret(self):
        return float(max(self.regret(0).max(), self.regret(1).max()))

    def brute_force_regret(self, player):
        """
        Recomputes regret(player) from the stored history with the explicit
        weights beta_t^i. Only available while t <= history_cap.
        """
        if self.t == 0 or self.t > len(self.history):
            raise ValueError('history holds {} of {} steps'
                             .format(len(self.history), self.t))
        weights = self.schedule.weights(self.t)
        total_loss = 0.0
        total_payoff = 0.0
        for i, (g_mu, g_nu, mu, nu) in enumerate(self.history, start=1):
            g, p = (g_mu, mu) if player == 0 else (g_nu, nu)
            total_loss = total_loss + weights[i] * g
            total_payoff = total_payoff + weights[i] * (p * g).sum(axis=-1)
        if player == 0:
            return total_loss.max(axis=-1) - total_payoff
        return total_payoff - total_loss.min(axis=-1)


def weighted_regret(acc, player):
    """
    Max over states of the per-state weighted regret of `player`.
    """
    U.assert_type(acc, RegretAccumulator)
    return float(acc.regret(player).max())
