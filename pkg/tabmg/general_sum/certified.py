"""
Certified (history-mixing) policy of a general-sum run and its CCE gap.

The certified policy started at iteration t draws j with probability
alpha_t^j at each step, plays the product policy pi_h^j and continues from
index j at the next step.
"""
import numpy as np
import tabmg.utils as U
from tabmg.game import GameError


class CertifiedPolicy(object):
    """
    Args:
        history: list over players of arrays [T, H, S, A_i]
        schedule: gives the mixing weights alpha_t^j
        root: starting index, T by default
    """
    def __init__(self, history, schedule, root=None):
        self.history = [np.asarray(h, dtype=np.float64) for h in history]
        self.schedule = schedule
        self.num_iters = self.history[0].shape[0]
        self.root = self.num_iters if root is None else root
        if not 1 <= self.root <= self.num_iters:
            raise GameError('root index {} outside [1, {}]'
                            .format(self.root, self.num_iters))
        self._weights = {}

    @property
    def players(self):
        return len(self.history)

    @property
    def horizon(self):
        return self.history[0].shape[1]

    def weights(self, t):
        "alpha_t^1..alpha_t^t as an array"
        if t not in self._weights:
            w = self.schedule.weights(t).weights
            self._weights[t] = w / w.sum()
        return self._weights[t]

    def policy(self, t, h, player):
        "pi_{player, h}^t as [S, A]"
        return self.history[player][t - 1, h - 1]

    def check_game(self, game):
        if self.players != game.players or self.horizon != game.horizon:
            raise GameError('certified policy does not match {}'.format(game))
        for i, hist in enumerate(self.history):
            if hist.shape[2:] != (game.num_states, game.action_counts[i]):
                raise GameError('history of player {} has shape {}'
                                .format(i, hist.shape))


def sample_certified_rollout(policy, game, seed):
    """
    Returns:
        dict with `states` [H], `actions` [H, m], `rewards` [H, m] and the
        sampled history `indices` [H]
    """
    policy.check_game(game)
    rng = np.random.RandomState(seed)
    return _rollout(policy, game, rng)


def _rollout(policy, game, rng):
    H, m = game.horizon, game.players
    states = np.empty(H, dtype=int)
    indices = np.empty(H, dtype=int)
    actions = np.empty((H, m), dtype=int)
    rewards = np.empty((H, game.reward.shape[0]))
    s = game.initial_state
    k = policy.root
    for h in range(1, H + 1):
        j = 1 + rng.choice(k, p=policy.weights(k))
        states[h - 1] = s
        indices[h - 1] = j
        a = [rng.choice(game.action_counts[i], p=policy.policy(j, h, i)[s])
             for i in range(m)]
        joint = int(np.ravel_multi_index(a, game.action_counts))
        actions[h - 1] = a
        rewards[h - 1] = game.reward[:, h - 1, s, joint]
        s = rng.choice(game.num_states, p=game.transition[h - 1, s, joint])
        k = j
    return {'states': states, 'actions': actions, 'rewards': rewards,
            'indices': indices}


def sample_certified_rollouts(policy, game, n, seed):
    """
    n independent rollouts from one seeded stream.
    """
    policy.check_game(game)
    rng = np.random.RandomState(seed)
    return [_rollout(policy, game, rng) for _ in range(n)]


class BestResponseTracker(object):
    """
    Best-response values against the certified policy, for every player:
        B_{i,h}^t(s) = max_{a_i} sum_{j <= t} alpha_t^j
                       [(r_{i,h} + P_h B_{i,h+1}^j) pi_{-i,h}^j](s, a_i)
    The inner mixture is updated in place, so iteration t only needs pi^t.
    """
    def __init__(self, game, schedule):
        self.game = game
        self.schedule = schedule
        H, S = game.horizon, game.num_states
        self.mix = [np.zeros((H, S, A)) for A in game.action_counts]
        self.B = np.zeros((game.players, H + 1, S))
        self.t = 0

    def update(self, t, h, pis):
        """
        Must be called for h = H..1 within iteration t.

        Args:
            pis: per-player [S, A_i] policies pi_h^t
        """
        alpha = self.schedule.value(t)
        for i in range(self.game.players):
            joint = self.game.backup(h, self.B[i, h], player=i)
            g = U.contract_others(joint, pis, keep=i)
            self.mix[i][h - 1] = (1 - alpha) * self.mix[i][h - 1] + alpha * g
            self.B[i, h - 1] = self.mix[i][h - 1].max(axis=-1)
        self.t = t

    def values(self):
        "[m] best-response values at s_1"
        return self.B[:, 0, self.game.initial_state].copy()


def cce_gap_from_values(best_response, values):
    "max_i B_i - V_i"
    return float(np.max(np.asarray(best_response) - np.asarray(values)))


def certified_values(game, policy):
    """
    V_{i,1}^T(s_1) of the certified policy by the same recursion with the
    realized values:
        V_{i,h}^t = sum_j alpha_t^j [(r_{i,h} + P_h V_{i,h+1}^j) pi_h^j]

    Returns:
        [m]
    """
    policy.check_game(game)
    H, S, m = game.horizon, game.num_states, game.players
    V = np.zeros((m, H + 1, S))
    for t in range(1, policy.root + 1):
        alpha = policy.schedule.value(t)
        for h in range(H, 0, -1):
            pis = [policy.policy(t, h, i) for i in range(m)]
            for i in range(m):
                joint = game.backup(h, V[i, h], player=i)
                V[i, h - 1] = ((1 - alpha) * V[i, h - 1]
                               + alpha * U.expected_value(joint, pis))
    return V[:, 0, game.initial_state]


def cce_gap(game, policy):
    """
    max_i B_{i,1}^T(s_1) - V_{i,1}^T(s_1) for a certified policy, replaying
    its stored history.
    """
    policy.check_game(game)
    tracker = BestResponseTracker(game, policy.schedule)
    for t in range(1, policy.root + 1):
        for h in range(game.horizon, 0, -1):
            pis = [policy.policy(t, h, i) for i in range(game.players)]
            tracker.update(t, h, pis)
    return cce_gap_from_values(tracker.values(),
                               certified_values(game, policy))


# ======================== history files ========================
def export_history(policy, file_path):
    """
    JSON lines, one record {"t", "h", "pi": [player][s][a]} per (t, h).
    """
    def records():
        for t in range(1, policy.num_iters + 1):
            for h in range(1, policy.horizon + 1):
                yield {'t': t, 'h': h,
                       'pi': [policy.policy(t, h, i)
                              for i in range(policy.players)]}
    file_path = U.f_expand(file_path)
    U.f_mkdir_in_path(file_path)
    U.dump_json_lines(records(), file_path)


def load_history(file_path, game, schedule):
    """
    Returns:
        CertifiedPolicy rebuilt from an exported history
    """
    records = list(U.iter_json_lines(U.f_expand(file_path)))
    if not records:
        raise GameError('empty history file {}'.format(file_path))
    H, S = game.horizon, game.num_states
    try:
        T = max(int(r['t']) for r in records)
        history = [np.full((T, H, S, A), np.nan) for A in game.action_counts]
        for r in records:
            t, h, pis = int(r['t']), int(r['h']), r['pi']
            if not (1 <= t <= T and 1 <= h <= H) or len(pis) != game.players:
                raise GameError('bad record t={} h={} in {}'
                                .format(t, h, file_path))
            for i, pi in enumerate(pis):
                history[i][t - 1, h - 1] = pi
    except GameError:
        raise
    except KeyError as e:
        raise GameError('history file {} is missing field {}'
                        .format(file_path, e))
    except (TypeError, ValueError) as e:
        raise GameError('malformed history file {}: {}'.format(file_path, e))
    if any(np.isnan(h).any() for h in history):
        raise GameError('history file {} misses some (t, h) records'
                        .format(file_path))
    return CertifiedPolicy(history, schedule)
