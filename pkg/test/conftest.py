import pytest
from tabmg.game import make_two_layer_example, make_random_game


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    "never read the developer's ~/.tabmg.yml"
    monkeypatch.setenv('TABMG_CONFIG_PATH', str(tmp_path / 'tabmg.yml'))


@pytest.fixture
def two_layer():
    "(game, mu0, nu0)"
    return make_two_layer_example()


@pytest.fixture
def random_game():
    return make_random_game(seed=3, horizon=3, num_states=4,
                            action_counts=(2, 2))


@pytest.fixture
def three_player_game():
    return make_random_game(seed=11, horizon=2, num_states=3,
                            action_counts=(2, 2, 2), zero_sum=False)
