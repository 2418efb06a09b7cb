"""
Sweep plans and the closed-form NEGap bounds they are checked against.
"""
import math
import tabmg.utils as U
from tabmg.session import (
    AlgorithmKind,
    BASE_SWEEP_CONFIG,
    Config,
    ConfigError,
    extend_config,
)
from tabmg.game import make_game, load_game


class BoundSpec(object):
    """
    Args:
        kind: AlgorithmKind the bound is proven for
        eta_preset: step size the bound assumes, None if it holds for any
        fn: fn(T, H, A, B) -> bound on the final NEGap
    """
    def __init__(self, kind, eta_preset, fn, name):
        self.kind = U.get_enum(AlgorithmKind, kind)
        self.eta_preset = eta_preset
        self.fn = fn
        self.name = name

    def __call__(self, T, H, A, B):
        return self.fn(T, H, A, B)

    def applies_to(self, kind, eta):
        if U.get_enum(AlgorithmKind, kind) != self.kind:
            return False
        return self.eta_preset is None or str(eta).lower() == self.eta_preset

    def __repr__(self):
        return 'BoundSpec({})'.format(self.name)


def _nashv_bound(T, H, A, B):
    return (82.0 * math.log(max(A, B)) * math.log(T) ** 2 * H ** 3.5
            / math.sqrt(T))


def _gda_bound(T, H, A, B):
    return (108.0 * math.log(T) ** 2 * math.sqrt(max(A, B)) * H ** 3.5
            / math.sqrt(T))


def _nash_q_bound(T, H, A, B):
    return 112.0 * math.log(T) ** 2 * H ** 4 / T


def _mod_oftrl_bound(T, H, A, B):
    return 468.0 * H ** 4 * math.log(A * B) * (math.log(T) + 1) ** 2 / T


BOUND_SPECS = [
    BoundSpec(AlgorithmKind.ftrl, 'nashv', _nashv_bound, 'nash-v'),
    BoundSpec(AlgorithmKind.gda, 'gda', _gda_bound, 'gda-critic'),
    BoundSpec(AlgorithmKind.nash_q, None, _nash_q_bound, 'nash-q'),
    BoundSpec(AlgorithmKind.mod_oftrl, 'mod-oftrl', _mod_oftrl_bound,
              'mod-oftrl'),
]


def find_bound(kind, eta, specs=None):
    if specs is None:
        specs = BOUND_SPECS
    for spec in specs:
        if spec.applies_to(kind, eta):
            return spec
    return None


class SweepPlan(object):
    """
    One run per (algorithm entry, T). Algorithm entries are run configs
    without `iterations`, e.g. {'algorithm': 'ftrl', 'eta': 'nashv'}.
    """
    def __init__(self, game_config, algorithms, iterations, out_dir,
                 threads=1, check_bounds=False, seed=0):
        self.game_config = Config(game_config)
        self.algorithms = [Config(a) for a in algorithms]
        self.iterations = [int(T) for T in iterations]
        self.out_dir = out_dir
        self.threads = int(threads)
        self.check_bounds = bool(check_bounds)
        self.seed = seed
        self._validate()

    @classmethod
    def from_config(cls, sweep_config):
        C = extend_config(Config(sweep_config).to_dict(), BASE_SWEEP_CONFIG)
        return cls(C.game, C.algorithms, C.iterations, C.out_dir,
                   threads=C.threads, check_bounds=C.check_bounds,
                   seed=C.seed)

    def _validate(self):
        if not self.iterations:
            raise ConfigError('sweep needs a nonempty T grid')
        if any(T < 1 for T in self.iterations):
            raise ConfigError('T grid must be positive: {}'
                              .format(self.iterations))
        if any(b <= a for a, b in zip(self.iterations, self.iterations[1:])):
            raise ConfigError('T grid must be strictly increasing: {}'
                              .format(self.iterations))
        if self.threads < 1:
            raise ConfigError('threads must be >= 1, got {}'
                              .format(self.threads))
        for entry in self.algorithms:
            if 'algorithm' not in entry:
                raise ConfigError('sweep algorithm entry without '
                                  '"algorithm": {}'.format(dict(entry)))
            try:
                U.get_enum(AlgorithmKind, entry.algorithm)
            except ValueError as e:
                raise ConfigError(str(e))
            if 'iterations' in entry:
                raise ConfigError('sweep algorithm entries take T from the '
                                  'grid, drop "iterations"')
        if self.game_config.source not in ('two-layer', 'random', 'file'):
            raise ConfigError('unknown game source "{}"'
                              .format(self.game_config.source))
        if self.game_config.source == 'file' and not self.game_config.path:
            raise ConfigError('game source "file" needs game.path')

    def make_game(self):
        """
        Returns:
            (game, initial policies or None)
        """
        G = self.game_config
        if G.source == 'file':
            return load_game(G.path), None
        return make_game(G.source, seed=G.seed, horizon=G.horizon,
                         num_states=G.num_states,
                         action_counts=G.action_counts, players=G.players)

    def cells(self):
        "(algorithm index, T) in row-major order"
        return [(k, T) for k in range(len(self.algorithms))
                for T in self.iterations]

    def to_dict(self):
        return {
            'game': self.game_config.to_dict(),
            'algorithms': [a.to_dict() for a in self.algorithms],
            'iterations': list(self.iterations),
            'out_dir': self.out_dir,
            'threads': self.threads,
            'check_bounds': self.check_bounds,
            'seed': self.seed,
        }
