"""
Bellman operators, exact policy evaluation, best responses, Nash values and
equilibrium gaps by backward induction with V_{H+1} = 0.
"""
import numpy as np
import tabmg.utils as U
from tabmg.learner.matrix_game import matrix_ne_batch
from .markov_game import GameError, MarkovPolicy, ValueTables


def _step_dists(policies, h):
    return [None if p is None else p.step(h) for p in policies]


def _check_policies(game, policies):
    if len(policies) != game.players:
        raise GameError('need {} policies, got {}'
                        .format(game.players, len(policies)))
    for i, p in enumerate(policies):
        if p is None:
            continue
        if p.player != i:
            raise GameError('policy at position {} belongs to player {}'
                            .format(i, p.player))
        p.check_game(game)


def bellman_backup(game, h, V_next, mu, nu, player=0):
    """
    Args:
        h: 1-based step
        V_next: [S]
        mu, nu: [S, A] and [S, B] per-state distributions at step h

    Returns:
        (Q [S, A, B], V [S]) with Q = r_h + P_h V_next, V = mu^T Q nu
    """
    mu = np.asarray(mu, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    S = game.num_states
    if mu.shape != (S, game.action_counts[0]) \
            or nu.shape != (S, game.action_counts[1]):
        raise GameError('policy slices must be [S, A] and [S, B], got {} '
                        'and {}'.format(mu.shape, nu.shape))
    Q = game.backup(h, V_next, player)
    return Q, U.expected_value(Q, [mu, nu])


def policy_eval(game, *policies, player=0):
    """
    Q^pi and V^pi of `player` under a product of Markov policies.
    """
    policies = list(policies)
    _check_policies(game, policies)
    Q = np.empty(game.shape)
    V = np.empty((game.horizon, game.num_states))
    V_next = np.zeros(game.num_states)
    for h in range(game.horizon, 0, -1):
        Q[h - 1] = game.backup(h, V_next, player)
        V[h - 1] = U.expected_value(Q[h - 1], _step_dists(policies, h))
        V_next = V[h - 1]
    return ValueTables(Q, V)


def _full_opponents(game, opponent, responder):
    if isinstance(opponent, MarkovPolicy):
        opponent = [opponent]
    opponent = list(opponent)
    if len(opponent) == game.players - 1:
        opponent.insert(responder, None)
    if len(opponent) != game.players:
        raise GameError('best response needs the policies of the other {} '
                        'players'.format(game.players - 1))
    opponent[responder] = None
    return opponent


def best_response_value(game, opponent, responder):
    """
    Best response of `responder` against fixed Markov policies of every other
    player. In zero-sum games player 1 maximizes r and player 2 minimizes it;
    in general-sum games every player maximizes its own reward.

    Args:
        opponent: MarkovPolicy (two players) or list of the others' policies

    Returns:
        (ValueTables with Q = responder's marginal [H, S, A_responder],
         greedy deterministic MarkovPolicy, ties toward the lowest action)
    """
    policies = _full_opponents(game, opponent, responder)
    _check_policies(game, policies)
    minimize = game.zero_sum and responder == 1
    player = 0 if game.zero_sum else responder
    A = game.action_counts[responder]
    Q = np.empty((game.horizon, game.num_states, A))
    V = np.empty((game.horizon, game.num_states))
    greedy = np.zeros((game.horizon, game.num_states, A))
    V_next = np.zeros(game.num_states)
    states = np.arange(game.num_states)
    for h in range(game.horizon, 0, -1):
        joint = game.backup(h, V_next, player)
        marginal = U.contract_others(joint, _step_dists(policies, h),
                                     keep=responder)
        if minimize:
            best = np.argmin(marginal, axis=-1)
        else:
            best = np.argmax(marginal, axis=-1)
        Q[h - 1] = marginal
        V[h - 1] = marginal[states, best]
        greedy[h - 1, states, best] = 1.0
        V_next = V[h - 1]
    return ValueTables(Q, V), MarkovPolicy(responder, greedy, check=False)


def nash_equilibrium(game):
    """
    Returns:
        (mu, nu, ValueTables of Q^*, V^*) for a zero-sum game
    """
    if not game.zero_sum:
        raise GameError('Nash values are only defined for zero-sum games')
    A, B = game.action_counts
    Q = np.empty(game.shape)
    V = np.empty((game.horizon, game.num_states))
    mu = np.empty((game.horizon, game.num_states, A))
    nu = np.empty((game.horizon, game.num_states, B))
    V_next = np.zeros(game.num_states)
    for h in range(game.horizon, 0, -1):
        Q[h - 1] = game.backup(h, V_next)
        mu[h - 1], nu[h - 1], V[h - 1] = matrix_ne_batch(Q[h - 1])
        V_next = V[h - 1]
    return (MarkovPolicy(0, mu, check=False),
            MarkovPolicy(1, nu, check=False),
            ValueTables(Q, V))


def nash_values(game):
    return nash_equilibrium(game)[2]


def ne_gap(game, mu, nu):
    """
    V_1^{dagger, nu}(s_1) - V_1^{mu, dagger}(s_1)
    """
    if not game.zero_sum:
        raise GameError('NEGap needs a zero-sum game')
    s1 = game.initial_state
    upper, _ = best_response_value(game, nu, responder=0)
    lower, _ = best_response_value(game, mu, responder=1)
    return upper.value(s1) - lower.value(s1)


def reachable_states(game):
    """
    Boolean mask [H, S] of states reachable at step h from s_1 under some
    sequence of joint actions.
    """
    reach = np.zeros((game.horizon, game.num_states), dtype=bool)
    reach[0, game.initial_state] = True
    for h in range(1, game.horizon):
        # [S, J, S'] rows of reachable states
        successors = game.transition[h - 1][reach[h - 1]] > 0
        reach[h] = successors.any(axis=(0, 1))
    return reach


def layer_ne_gap(game, mu, nu, h, Qstar, reach=None):
    """
    max over states reachable at step h of
    max_a [Q*_h nu_h](s, a) - min_b [mu_h^T Q*_h](s, b)
    """
    if not game.zero_sum:
        raise GameError('layer-wise NEGap needs a zero-sum game')
    if reach is None:
        reach = reachable_states(game)
    Qh = Qstar.Q[h - 1]
    mu_h, nu_h = mu.step(h), nu.step(h)
    best_row = U.contract_others(Qh, [mu_h, nu_h], keep=0).max(axis=-1)
    best_col = U.contract_others(Qh, [mu_h, nu_h], keep=1).min(axis=-1)
    return float((best_row - best_col)[reach[h - 1]].max())


def layer_ne_gaps(game, mu, nu, Qstar):
    "[layer 1, ..., layer H]"
    reach = reachable_states(game)
    return [layer_ne_gap(game, mu, nu, h, Qstar, reach)
            for h in range(1, game.horizon + 1)]


def sample_episode(game, policies, rng):
    """
    Args:
        policies: one MarkovPolicy per player
        rng: np.random.RandomState

    Returns:
        dict with `states` [H], `actions` [H, m] and `rewards` [H, n_reward]
    """
    _check_policies(game, list(policies))
    H, m = game.horizon, game.players
    states = np.empty(H, dtype=int)
    actions = np.empty((H, m), dtype=int)
    rewards = np.empty((H, game.reward.shape[0]))
    s = game.initial_state
    for h in range(1, H + 1):
        states[h - 1] = s
        a = [rng.choice(game.action_counts[i], p=policies[i].step(h)[s])
             for i in range(m)]
        j = int(np.ravel_multi_index(a, game.action_counts))
        actions[h - 1] = a
        rewards[h - 1] = game.reward[:, h - 1, s, j]
        s = rng.choice(game.num_states, p=game.transition[h - 1, s, j])
    return {'states': states, 'actions': actions, 'rewards': rewards}


def joint_action_weights(game, policies, h):
    """
    Probability of every joint action per state under a product policy,
    [S, J] at step h.
    """
    weights = np.ones((game.num_states,) + game.action_counts)
    for i, p in enumerate(policies):
        shape = [game.num_states] + [1] * game.players
        shape[i + 1] = game.action_counts[i]
        weights = weights * p.step(h).reshape(shape)
    return weights.reshape(game.num_states, -1)


def occupancy(game, policies):
    """
    Probability of visiting each state at each step, [H, S].
    """
    _check_policies(game, list(policies))
    d = np.zeros((game.horizon, game.num_states))
    d[0, game.initial_state] = 1.0
    for h in range(1, game.horizon):
        flat = joint_action_weights(game, policies, h)
        d[h] = np.einsum('s,sj,sjt->t', d[h - 1], flat, game.transition[h - 1])
    return d
