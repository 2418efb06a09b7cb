import collections
import tabmg.utils as U
from tabmg.session import ConfigError
from tabmg.game import *
from tabmg.framework import fit_rate, regret_bound, resolve_eta
from tabmg.general_sum import *
from test.utils import *


def _run(game, T, **kwargs):
    config = {'iterations': T}
    config.update(kwargs)
    return run_general_sum_oftrl(game, config)


def _product(policy, t):
    return [MarkovPolicy(i, policy.history[i][t - 1], check=False)
            for i in range(policy.players)]


def test_q_v_identity(three_player_game):
    game = three_player_game
    worst = []

    def callback(t, state):
        for i in range(game.players):
            for h in range(1, game.horizon + 1):
                expected = game.backup(h, state.V[i, h], player=i)
                worst.append(np.abs(state.Q[i][h - 1] - expected).max())

    run_general_sum_oftrl(game, {'iterations': 60, 'trace': {'mode': 'full'}},
                          callback=callback)
    assert len(worst) == 60 * game.players * game.horizon
    assert max(worst) <= 1e-9


def test_value_range(three_player_game):
    game = three_player_game
    _, _, state = _run(game, 40)
    H = game.horizon
    for h in range(1, H + 1):
        assert state.V[:, h - 1].min() >= -1e-9
        assert state.V[:, h - 1].max() <= H - h + 1 + 1e-9
    for hist in state.history:
        assert U.is_distribution(hist)


def test_constant_sum_values(two_layer):
    game, _, _ = two_layer
    checked = []

    def callback(t, state):
        for h in range(1, game.horizon + 1):
            total = state.V[0, h - 1] + state.V[1, h - 1]
            assert np.allclose(total, game.horizon - h + 1, atol=1e-9)
        checked.append(t)

    policy, trace, state = run_general_sum_oftrl(
        game, {'iterations': 50, 'trace': {'mode': 'full'}},
        callback=callback)
    assert len(checked) == 50
    assert not state.game.zero_sum
    assert np.allclose(state.game.reward[0] + state.game.reward[1], 1.0)


def test_first_iteration_last_step(three_player_game):
    game = three_player_game
    _, _, state = _run(game, 1)
    H = game.horizon
    for i in range(game.players):
        assert np.allclose(state.Q[i][H - 1], game.reward_tensor(i, H))
        assert np.allclose(state.history[i][0], 0.5)


def test_replay_matches_online(three_player_game):
    game = three_player_game
    policy, trace, state = _run(game, 80)
    assert cce_gap(game, policy) == pytest.approx(trace.final.ccegap,
                                                  abs=1e-12)
    assert np.allclose(certified_values(game, policy), state.values(),
                       rtol=0, atol=1e-12)
    assert state.cce_gap() == trace.final.ccegap


def test_first_iteration_best_response(three_player_game):
    game = three_player_game
    policy, trace, _ = _run(game, 1)
    pis = _product(policy, 1)
    s1 = game.initial_state
    gaps = []
    for i in range(game.players):
        others = [p for p in pis if p.player != i]
        br, _ = best_response_value(game, others, responder=i)
        value = policy_eval(game, *pis, player=i).value(s1)
        gaps.append(br.value(s1) - value)
    assert trace.final.ccegap == pytest.approx(max(gaps), abs=1e-9)
    assert trace.final.ccegap >= -1e-9


def _prisoners_dilemma():
    # actions (cooperate, defect); (defect, defect) is the unique equilibrium
    r1 = np.array([[0.6, 0.0], [1.0, 0.2]])
    reward = np.stack([r1.reshape(4), r1.T.reshape(4)])[:, None, None, :]
    transition = np.ones((1, 1, 4, 1))
    return MarkovGame(reward, transition, (2, 2), zero_sum=False)


def test_equilibrium_history_has_zero_gap():
    game = _prisoners_dilemma()
    defect = np.array([0.0, 1.0]).reshape(1, 1, 1, 2)
    policy = CertifiedPolicy([defect, defect], U.AlphaSchedule(1))
    assert abs(cce_gap(game, policy)) <= 1e-9
    cooperate = np.array([1.0, 0.0]).reshape(1, 1, 1, 2)
    policy = CertifiedPolicy([cooperate, cooperate], U.AlphaSchedule(1))
    assert cce_gap(game, policy) == pytest.approx(0.4)


def test_certified_weights(three_player_game):
    policy, _, _ = _run(three_player_game, 25)
    for t in (1, 2, 10, 25):
        w = policy.weights(t)
        assert len(w) == t
        assert abs(w.sum() - 1.0) <= 1e-12
    with pytest_print_raises(GameError):
        CertifiedPolicy(policy.history, policy.schedule, root=26)


def test_rollout_single_iteration(three_player_game):
    game = three_player_game
    policy, _, _ = _run(game, 1)
    episode = sample_certified_rollout(policy, game, seed=0)
    assert episode['indices'].tolist() == [1] * game.horizon
    assert episode['rewards'].shape == (game.horizon, game.players)


def test_rollout_eager_schedule(three_player_game):
    game = three_player_game
    policy, _, _ = _run(game, 12)
    eager = CertifiedPolicy(policy.history, U.EagerSchedule(), root=7)
    for episode in sample_certified_rollouts(eager, game, 20, seed=1):
        assert episode['indices'].tolist() == [7] * game.horizon


def test_rollout_reproducible(three_player_game):
    game = three_player_game
    policy, _, _ = _run(game, 10)
    a = sample_certified_rollout(policy, game, seed=5)
    b = sample_certified_rollout(policy, game, seed=5)
    for key in a:
        assert np.array_equal(a[key], b[key])


def _monte_carlo_check(game, T, n):
    policy, _, state = _run(game, T)
    episodes = sample_certified_rollouts(policy, game, n, seed=3)
    returns = np.array([e['rewards'].sum(axis=0) for e in episodes])
    # returns lie in [0, H]
    sigma = game.horizon / 2.0 / np.sqrt(n)
    assert np.all(np.abs(returns.mean(axis=0) - state.values()) <= 3 * sigma)
    return policy, episodes


def _certified_occupancy(policy, game):
    "state distribution per step of the certified policy, [H, S]"
    d = np.zeros((game.horizon, game.num_states))
    nodes = {(game.initial_state, policy.root): 1.0}
    for h in range(1, game.horizon + 1):
        following = collections.defaultdict(float)
        for (s, k), p in nodes.items():
            d[h - 1, s] += p
            for j, wj in enumerate(policy.weights(k), start=1):
                if wj == 0:
                    continue
                pis = [policy.policy(j, h, i)[s] for i in range(game.players)]
                joint = np.ones(game.action_counts)
                for i, pi in enumerate(pis):
                    shape = [1] * game.players
                    shape[i] = game.action_counts[i]
                    joint = joint * pi.reshape(shape)
                nxt = joint.reshape(-1).dot(game.transition[h - 1, s])
                for s2 in range(game.num_states):
                    following[(s2, j)] += p * wj * nxt[s2]
        nodes = following
    return d


def test_certified_value_monte_carlo(three_player_game):
    game = three_player_game
    policy, episodes = _monte_carlo_check(game, 20, 4000)
    d = _certified_occupancy(policy, game)
    n = len(episodes)
    for h in range(1, game.horizon + 1):
        counts = np.bincount([e['states'][h - 1] for e in episodes],
                             minlength=game.num_states)
        freq = counts / float(n)
        sigma = np.sqrt(d[h - 1] * (1 - d[h - 1]) / n)
        assert np.all(np.abs(freq - d[h - 1]) <= 4 * sigma + 1e-12)


@pytest.mark.slow
def test_certified_value_monte_carlo_long(three_player_game):
    _monte_carlo_check(three_player_game, 200, 100000)


def test_iterate_stability(three_player_game):
    game = three_player_game
    eta = 0.05
    _, _, state = _run(game, 300, eta=eta)
    bound = 4 * eta * game.horizon
    for hist in state.history:
        step = np.abs(np.diff(hist, axis=0)).sum(axis=-1)
        assert step.max() <= bound


def test_regret_bound(three_player_game):
    game = three_player_game
    seen = []

    def callback(t, state):
        bound = regret_bound('gs-oftrl', game.horizon, 2, 2, state.eta, t,
                             m=game.players)
        assert state.max_regret() <= bound
        seen.append(t)

    _, trace, state = run_general_sum_oftrl(
        game, {'iterations': 100, 'diagnostics': True,
               'trace': {'mode': 'full'}}, callback=callback)
    assert len(seen) == 100
    assert trace.final.max_reg is not None
    assert state.eta == pytest.approx(resolve_eta(
        'gs-oftrl', 100, game.horizon, m=3, A_max=2))


def test_history_round_trip(tmp_path, three_player_game):
    game = three_player_game
    policy, trace, _ = _run(game, 15)
    path = str(tmp_path / 'sub' / 'history.jsonl')
    export_history(policy, path)
    loaded = load_history(path, game, policy.schedule)
    for a, b in zip(policy.history, loaded.history):
        assert np.array_equal(a, b)
    assert cce_gap(game, loaded) == pytest.approx(trace.final.ccegap,
                                                  abs=1e-12)


def test_history_errors(tmp_path, three_player_game):
    game = three_player_game
    path = tmp_path / 'history.jsonl'
    path.write_text('')
    with pytest_print_raises(GameError):
        load_history(str(path), game, U.AlphaSchedule(game.horizon))
    policy, _, _ = _run(game, 3)
    export_history(policy, str(path))
    lines = path.read_text().splitlines()
    path.write_text('\n'.join(lines[:-1]) + '\n')
    with pytest_print_raises(GameError):
        load_history(str(path), game, policy.schedule)
    with pytest_print_raises(GameError):
        cce_gap(make_random_game(0, 2, 3, (2, 2), zero_sum=False), policy)


@pytest.mark.parametrize('corrupt', [
    lambda r: r.pop('h'),
    lambda r: r.pop('pi'),
    lambda r: r.update(t='x'),
    lambda r: r.update(h=9),
    lambda r: r.update(pi=r['pi'][:1]),
])
def test_history_bad_records(tmp_path, three_player_game, corrupt):
    game = three_player_game
    policy, _, _ = _run(game, 3)
    path = str(tmp_path / 'history.jsonl')
    export_history(policy, path)
    records = list(U.iter_json_lines(path))
    corrupt(records[0])
    U.dump_json_lines(records, path)
    with pytest_print_raises(GameError):
        load_history(path, game, policy.schedule)


def test_trace_csv(tmp_path, three_player_game):
    path = tmp_path / 'cce.csv'
    _, trace, _ = _run(three_player_game, 10,
                       trace={'mode': 'periodic', 'every': 5,
                              'path': str(path)})
    lines = path.read_text().splitlines()
    assert lines[0] == 't,ccegap,max_reg,elapsed_s'
    assert len(lines) == 1 + len(trace)
    assert [r.t for r in trace] == [1, 5, 10]


@pytest.mark.parametrize('kwargs', [
    {'algorithm': 'ftrl'},
    {'schedule': 'eager'},
    {'eta': 'nope'},
])
def test_config_errors(three_player_game, kwargs):
    with pytest_print_raises(ConfigError):
        _run(three_player_game, 5, **kwargs)


@pytest.mark.slow
def test_cce_gap_rate(three_player_game):
    points = []
    for T in (100, 1000, 10000):
        _, trace, _ = _run(three_player_game, T)
        points.append((T, max(trace.final.ccegap, 1e-15)))
    exponent, _, _ = fit_rate(points)
    assert exponent <= -0.5
