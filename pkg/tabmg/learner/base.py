"""
Template class for all per-step matrix-game learners
"""
from enum import auto
import numpy as np
import tabmg.utils as U
from .steps import losses


class LearnerKind(U.StringEnum):
    ftrl = auto()
    oftrl = auto()
    gda = auto()
    matrix_ne = auto()
    hedge = auto()


def _initial_dist(dist, num_states, num_actions):
    if dist is None:
        return np.full((num_states, num_actions), 1.0 / num_actions)
    dist = np.array(dist, dtype=np.float64)
    assert dist.shape == (num_states, num_actions), \
        'initial policy must be [S, A], got {}'.format(dist.shape)
    return dist


class MatrixLearner(metaclass=U.AutoInitializeMeta):
    """
    Runs one matrix-game algorithm at every state of one step h.

    The driver alternates
        mu, nu = learner.policies(t)
        ... value update producing Q_h^t ...
        learner.observe(t, Q_h^t, mu, nu)
    for t = 1, 2, ...

    Args:
        num_states: S
        action_counts: (A, B)
        eta: step size
        schedule: value-update schedule, gives the FTRL weights
        Q0: initial table [S, A, B], the loss source of step 1
        mu0, nu0: initial policies [S, A] / [S, B], uniform if None
    """
    kind = None

    def __init__(self, num_states, action_counts, eta, schedule,
                 Q0=None, mu0=None, nu0=None):
        self.num_states = num_states
        self.action_counts = tuple(action_counts)
        self.eta = eta
        self.schedule = schedule
        A, B = self.action_counts
        self.mu0 = _initial_dist(mu0, num_states, A)
        self.nu0 = _initial_dist(nu0, num_states, B)
        if Q0 is None:
            Q0 = np.zeros((num_states, A, B))
        self.Q0 = np.asarray(Q0, dtype=np.float64)
        self.t = 0
        self._policies = None

    def _initialize(self):
        """
            For AutoInitializeMeta interface
        """
        self.last_mu, self.last_nu = self.mu0, self.nu0
        self.last_mu_loss, self.last_nu_loss = losses(
            self.Q0, self.mu0, self.nu0)

    def policies(self, t=None):
        """
        Policies for step t (defaults to the step after the last observed).

        Returns:
            (mu [S, A], nu [S, B])
        """
        if t is None:
            t = self.t + 1
        assert t == self.t + 1, \
            'learner at step {} cannot produce policies for step {}' \
            .format(self.t, t)
        if self._policies is None:
            self._policies = self._next_policies(t)
        return self._policies

    def _next_policies(self, t):
        """
        Abstract method computing (mu^t, nu^t) from the state after t - 1
        observations
        """
        raise NotImplementedError

    def observe(self, t, Q, mu, nu):
        """
        Args:
            Q: Q_h^t [S, A, B] after the value update of iteration t
            mu, nu: the policies played at iteration t
        """
        g_mu, g_nu = losses(Q, mu, nu)
        self.observe_losses(t, g_mu, g_nu, mu, nu)

    def observe_losses(self, t, g_mu, g_nu, mu, nu):
        """
        Same as observe() with the two players' losses given separately.
        """
        assert t == self.t + 1, 'observations must arrive in order'
        self._update(t, g_mu, g_nu)
        self.last_mu, self.last_nu = mu, nu
        self.last_mu_loss, self.last_nu_loss = g_mu, g_nu
        self.t = t
        self._policies = None

    def _update(self, t, g_mu, g_nu):
        pass
