import numpy as np
from .markov_game import MarkovGame, MarkovPolicy, GameError


# two-layer example: s0 at step 1, s11, s12, s21, s22 at step 2
TWO_LAYER_STATES = ['s0', 's11', 's12', 's21', 's22']

# (mu, nu) at step 1 for every state, then per step-2 state
_TWO_LAYER_INIT_STEP1 = ((0.3, 0.7), (0.7, 0.3))
_TWO_LAYER_INIT_STEP2 = {
    1: ((0.248, 0.752), (0.248, 0.752)),
    2: ((0.5, 0.5), (0.168, 0.832)),
    3: ((0.5, 0.5), (0.168, 0.832)),
    4: ((0.752, 0.248), (0.248, 0.752)),
}


def make_two_layer_example():
    """
    H = 2, two actions each. From s0 the joint action (a_i, b_j) leads to
    s_ij deterministically; rewards are 0.1 * I at step 1 and I at step 2.
    States off the layer they belong to loop on themselves and are never
    reached.

    Returns:
        (game, mu0, nu0) with the non-uniform initialization
    """
    H, S = 2, len(TWO_LAYER_STATES)
    eye = np.eye(2).reshape(4)
    reward = np.zeros((1, H, S, 4))
    reward[0, 0, :] = 0.1 * eye
    reward[0, 1, :] = eye
    transition = np.zeros((H, S, 4, S))
    for s in range(S):
        transition[:, s, :, s] = 1.0
    transition[0, 0] = 0.0
    for j in range(4):
        # joint index of (a_i, b_j) is 2 * i + j, i.e. the order of s_ij
        transition[0, 0, j, 1 + j] = 1.0
    game = MarkovGame(reward, transition, action_counts=(2, 2),
                      zero_sum=True, initial_state=0)

    mu0 = np.full((H, S, 2), 0.5)
    nu0 = np.full((H, S, 2), 0.5)
    mu0[0], nu0[0] = _TWO_LAYER_INIT_STEP1
    for s, (mu_s, nu_s) in _TWO_LAYER_INIT_STEP2.items():
        mu0[1, s] = mu_s
        nu0[1, s] = nu_s
    return game, MarkovPolicy(0, mu0), MarkovPolicy(1, nu0)


def make_random_game(seed, horizon, num_states, action_counts,
                     players=None, zero_sum=True):
    """
    Rewards i.i.d. uniform on [0, 1], transition rows from a symmetric
    Dirichlet(1).
    """
    action_counts = tuple(int(a) for a in action_counts)
    if players is not None and players != len(action_counts):
        raise GameError('players={} but {} action counts given'
                        .format(players, len(action_counts)))
    if horizon < 1 or num_states < 1:
        raise GameError('horizon and num_states must be >= 1')
    rng = np.random.RandomState(seed)
    J = int(np.prod(action_counts))
    n_reward = 1 if zero_sum else len(action_counts)
    reward = rng.uniform(0.0, 1.0, size=(n_reward, horizon, num_states, J))
    transition = rng.dirichlet(np.ones(num_states),
                               size=(horizon, num_states, J))
    # exact row sums
    transition /= transition.sum(axis=-1, keepdims=True)
    return MarkovGame(reward, transition, action_counts,
                      zero_sum=zero_sum, initial_state=0)


def to_general_sum(game):
    """
    Constant-sum view of a zero-sum game: player 1 gets r, player 2 gets 1 - r.
    """
    if not game.zero_sum:
        return game
    reward = np.concatenate([game.reward, 1.0 - game.reward], axis=0)
    return MarkovGame(reward, game.transition, game.action_counts,
                      zero_sum=False, initial_state=game.initial_state)


def make_game(kind, seed=0, horizon=3, num_states=4, action_counts=(2, 2),
              zero_sum=None, players=None):
    """
    Args:
        zero_sum: None makes two-player random games zero-sum and larger
            ones general-sum

    Returns:
        (game, initial policies or None)
    """
    if kind == 'two-layer':
        game, mu0, nu0 = make_two_layer_example()
        return game, [mu0, nu0]
    elif kind == 'random':
        if zero_sum is None:
            zero_sum = len(action_counts) == 2
        game = make_random_game(seed, horizon, num_states, action_counts,
                                players=players, zero_sum=zero_sum)
        return game, None
    else:
        raise ValueError('unknown game kind "{}", expected two-layer or random'
                         .format(kind))
