import contextlib
import numpy as np
import pytest
from tabmg.game import MarkovPolicy


@contextlib.contextmanager
def pytest_print_raises(exc):
    with pytest.raises(exc) as e_info:
        yield
    print('EXPECTED:', e_info)


def random_policy(rng, player, horizon, num_states, num_actions):
    dist = rng.dirichlet(np.ones(num_actions), size=(horizon, num_states))
    return MarkovPolicy(player, dist)
