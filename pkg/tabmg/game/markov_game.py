"""
Tabular finite-horizon Markov game.

Steps are 1-based in every public signature (h = 1..H) and 0-based in the
arrays. Joint actions are indexed row-major over (a_1, ..., a_m).
"""
import numpy as np
import tabmg.utils as U


ROW_SUM_TOL = 1e-12
PROB_TOL = 1e-9


class GameError(ValueError):
    pass


class MarkovGame(object):
    """
    Args:
        reward: [n_reward, H, S, J] with n_reward = 1 for zero-sum games
            (player 2 receives -r) and n_reward = m otherwise
        transition: [H, S, J, S]
        action_counts: [A_1, ..., A_m], J = prod(A_i)
        zero_sum: only valid with two players
        initial_state: index of s_1
    """
    def __init__(self, reward, transition, action_counts,
                 zero_sum=True, initial_state=0):
        self.action_counts = tuple(int(a) for a in action_counts)
        self.players = len(self.action_counts)
        self.zero_sum = bool(zero_sum)
        self.reward = np.asarray(reward, dtype=np.float64)
        self.transition = np.asarray(transition, dtype=np.float64)
        self.initial_state = int(initial_state)
        self._validate()
        self.horizon = self.transition.shape[0]
        self.num_states = self.transition.shape[1]
        self._joint_shape = (self.num_states,) + self.action_counts

    def _validate(self):
        if self.players < 2:
            raise GameError('need at least 2 players, got {}'
                            .format(self.players))
        if any(a < 1 for a in self.action_counts):
            raise GameError('action counts must be >= 1: {}'
                            .format(self.action_counts))
        if self.zero_sum and self.players != 2:
            raise GameError('zero-sum games must have exactly 2 players, '
                            'got {}'.format(self.players))
        if self.transition.ndim != 4:
            raise GameError('transition must be [H, S, J, S], got shape {}'
                            .format(self.transition.shape))
        H, S, J, S2 = self.transition.shape
        if S != S2 or H < 1 or S < 1:
            raise GameError('transition must be [H, S, J, S], got shape {}'
                            .format(self.transition.shape))
        if J != int(np.prod(self.action_counts)):
            raise GameError('joint action count {} does not match {}'
                            .format(J, self.action_counts))
        n_reward = 1 if self.zero_sum else self.players
        if self.reward.shape != (n_reward, H, S, J):
            raise GameError('reward must have shape {}, got {}'
                            .format((n_reward, H, S, J), self.reward.shape))
        if not np.all(np.isfinite(self.reward)):
            raise GameError('rewards must be finite')
        if self.reward.min() < 0 or self.reward.max() > 1:
            raise GameError('rewards must lie in [0, 1]')
        if not np.all(np.isfinite(self.transition)) \
                or self.transition.min() < 0:
            raise GameError('transition probabilities must be >= 0')
        row_err = np.abs(self.transition.sum(axis=-1) - 1.0).max()
        if row_err > ROW_SUM_TOL:
            raise GameError('transition rows must sum to 1 (max error {:.3g})'
                            .format(row_err))
        if not 0 <= self.initial_state < S:
            raise GameError('initial state {} out of range [0, {})'
                            .format(self.initial_state, S))

    @property
    def num_joint_actions(self):
        return self.transition.shape[2]

    @property
    def shape(self):
        "(H, S, A_1, ..., A_m)"
        return (self.horizon,) + self._joint_shape

    def reward_tensor(self, player, h):
        """
        Reward of `player` at step h as [S, A_1, ..., A_m]. In zero-sum games
        both players read r (player 1 maximizes, player 2 minimizes).
        """
        i = 0 if self.zero_sum else player
        return self.reward[i, h - 1].reshape(self._joint_shape)

    def transition_tensor(self, h):
        "[S, A_1, ..., A_m, S']"
        return self.transition[h - 1].reshape(
            self._joint_shape + (self.num_states,))

    def payoff(self, h):
        "zero-sum r_h as [S, A, B]"
        return self.reward_tensor(0, h)

    def backup(self, h, V_next, player=0):
        """
        (r_h + P_h V_{h+1}) as [S, A_1, ..., A_m]
        """
        V_next = np.asarray(V_next, dtype=np.float64)
        if V_next.shape != (self.num_states,):
            raise GameError('V_next must have shape ({},), got {}'
                            .format(self.num_states, V_next.shape))
        return self.reward_tensor(player, h) \
            + self.transition_tensor(h).dot(V_next)

    def to_dict(self):
        return {
            'horizon': self.horizon,
            'num_states': self.num_states,
            'players': self.players,
            'zero_sum': self.zero_sum,
            'action_counts': list(self.action_counts),
            'initial_state': self.initial_state,
            'reward': self.reward,
            'transition': self.transition,
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise GameError('game file must hold a JSON object')
        try:
            header = (d['horizon'], d['num_states'], d['players'])
            game = cls(
                reward=d['reward'],
                transition=d['transition'],
                action_counts=d['action_counts'],
                zero_sum=d['zero_sum'],
                initial_state=d['initial_state'],
            )
        except KeyError as e:
            raise GameError('game file is missing field {}'.format(e))
        if (game.horizon, game.num_states, game.players) != header:
            raise GameError('game header does not match tensor shapes')
        return game

    def __eq__(self, other):
        return (isinstance(other, MarkovGame)
                and self.zero_sum == other.zero_sum
                and self.action_counts == other.action_counts
                and self.initial_state == other.initial_state
                and np.array_equal(self.reward, other.reward)
                and np.array_equal(self.transition, other.transition))

    def __repr__(self):
        return ('MarkovGame(H={}, S={}, actions={}, zero_sum={})'
                .format(self.horizon, self.num_states,
                        self.action_counts, self.zero_sum))


class MarkovPolicy(object):
    """
    dist: [H, S, A] per-step per-state action distributions of one player
    """
    def __init__(self, player, dist, check=True):
        self.player = int(player)
        self.dist = np.asarray(dist, dtype=np.float64)
        if check:
            if self.dist.ndim != 3:
                raise GameError('policy must be [H, S, A], got shape {}'
                                .format(self.dist.shape))
            if not U.is_distribution(self.dist, axis=-1, tol=PROB_TOL):
                raise GameError('policy of player {} is not a distribution '
                                'at every (h, s)'.format(self.player))

    @classmethod
    def uniform(cls, player, horizon, num_states, num_actions):
        dist = np.full((horizon, num_states, num_actions), 1.0 / num_actions)
        return cls(player, dist, check=False)

    @property
    def horizon(self):
        return self.dist.shape[0]

    @property
    def num_actions(self):
        return self.dist.shape[2]

    def step(self, h):
        "[S, A] at 1-based step h"
        return self.dist[h - 1]

    def check_game(self, game):
        expected = (game.horizon, game.num_states,
                    game.action_counts[self.player])
        if self.dist.shape != expected:
            raise GameError('policy of player {} has shape {}, game needs {}'
                            .format(self.player, self.dist.shape, expected))

    def to_dict(self):
        return {'player': self.player, 'dist': self.dist}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d['player'], d['dist'])
        except (KeyError, TypeError) as e:
            raise GameError('policy file is missing field {}'.format(e))


class ValueTables(object):
    """
    Q: [H, S, A_1, ..., A_m] (or [H, S, A] for a single player's view)
    V: [H, S]; V_{H+1} = 0 is implicit
    """
    def __init__(self, Q, V):
        self.Q = Q
        self.V = V

    @property
    def horizon(self):
        return self.V.shape[0]

    def V_next(self, h):
        "V_{h+1} as [S], zero past the horizon"
        if h >= self.horizon:
            return np.zeros(self.V.shape[1])
        return self.V[h]

    def value(self, state):
        return float(self.V[0, state])


# ======================== file formats ========================
def save_game(game, file_path):
    U.dump_json(game.to_dict(), U.f_expand(file_path))


def load_game(file_path):
    return MarkovGame.from_dict(U.load_json(U.f_expand(file_path)))


def save_policies(policies, file_path):
    """
    One policy is written as {"player", "dist"}; several as
    {"policies": [...]}.
    """
    if isinstance(policies, MarkovPolicy):
        data = policies.to_dict()
    else:
        data = {'policies': [p.to_dict() for p in policies]}
    U.dump_json(data, U.f_expand(file_path))


def load_policies(file_path):
    """
    Returns:
        list of MarkovPolicy sorted by player
    """
    data = U.load_json(U.f_expand(file_path))
    if 'policies' in data:
        policies = [MarkovPolicy.from_dict(d) for d in data['policies']]
    else:
        policies = [MarkovPolicy.from_dict(data)]
    return sorted(policies, key=lambda p: p.player)
