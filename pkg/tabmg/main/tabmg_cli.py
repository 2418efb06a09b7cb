"""
tabmg make-game | solve | sweep | eval

Exit codes: 0 success, 1 runtime error (bad game file, solver failure,
I/O), 2 usage error (bad flags or configuration).
"""
import sys
import argparse
import tabmg.utils as U
from tabmg.session import (
    AlgorithmKind,
    Config,
    ConfigError,
    algorithm_kind,
    get_logger,
    load_user_settings,
)
from tabmg.game import (
    GameError,
    make_game,
    load_game,
    save_game,
    save_policies,
    load_policies,
    ne_gap,
    nash_values,
    layer_ne_gap,
    to_general_sum,
)
from tabmg.learner import SolverError
from tabmg.framework import RunError, format_number, run_framework
from tabmg.general_sum import (
    run_general_sum_oftrl,
    export_history,
    load_history,
    cce_gap,
)
from tabmg.bench import SweepPlan, run_sweep, emit_report, console_summary


_BUILTIN_GAMES = ('two-layer', 'random')
_ALGORITHMS = [kind.cli_name for kind in AlgorithmKind]


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'expected comma separated integers, got "{}"'.format(text))


class TabmgParser(object):
    def __init__(self):
        self.session_config, self.sweep_config = load_user_settings()
        self.parser = argparse.ArgumentParser(
            prog='tabmg',
            description='Policy optimization for tabular Markov games')
        self.parser.add_argument(
            '-v', '--verbose', action='store_true',
            help='log every checkpoint (debug level)')
        subparsers = self.parser.add_subparsers(dest='command',
                                                metavar='command')
        subparsers.required = True
        self._setup_make_game(subparsers)
        self._setup_solve(subparsers)
        self._setup_sweep(subparsers)
        self._setup_eval(subparsers)

    # ======================== parsers ========================
    def _add_game_args(self, parser, required=True):
        parser.add_argument(
            '--game', required=required,
            help='game JSON file, or "two-layer" / "random" for a '
                 'built-in game')
        parser.add_argument('--seed', type=int, default=0,
                            help='seed of the random game')
        parser.add_argument('--horizon', type=int, default=3)
        parser.add_argument('--states', type=int, default=4)
        parser.add_argument('--actions', type=_int_list, default=[2, 2],
                            help='action counts per player, e.g. 2,2,2')

    def _setup_make_game(self, subparsers):
        parser = subparsers.add_parser(
            'make-game', help='write a built-in game as JSON')
        parser.set_defaults(func=self.action_make_game)
        parser.add_argument('--kind', required=True, choices=_BUILTIN_GAMES)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--horizon', type=int, default=3)
        parser.add_argument('--states', type=int, default=4)
        parser.add_argument('--actions', type=_int_list, default=[2, 2])
        parser.add_argument('--general-sum', action='store_true',
                            help='one reward table per player')
        parser.add_argument('--out', required=True, help='game JSON path')
        parser.add_argument(
            '--init-out', default=None,
            help='policy-pair file of the two-layer initialization, '
                 '<out>_init.json by default')

    def _setup_solve(self, subparsers):
        parser = subparsers.add_parser(
            'solve', help='run one algorithm and print the final gap')
        parser.set_defaults(func=self.action_solve)
        self._add_game_args(parser)
        parser.add_argument('--alg', choices=_ALGORITHMS, default=None)
        parser.add_argument('--schedule', choices=['alpha', 'eager'],
                            default=None)
        parser.add_argument('--eta', default=None,
                            help='<float>, <float>*T^<float> or a preset: '
                                 'nashv, gda, mod-oftrl, oftrl56, gs-oftrl')
        parser.add_argument('--iters', type=int, default=None)
        parser.add_argument('--trace', default=None, help='trace CSV path')
        parser.add_argument('--every', type=int, default=None,
                            help='checkpoint every n iterations instead of '
                                 'geometrically spaced ones')
        parser.add_argument('--diagnostics', action='store_true',
                            help='track regrets and value errors')
        parser.add_argument('--kl-base', action='store_true',
                            help='KL regularizer centered at the initial '
                                 'policy')
        parser.add_argument('--v-form', action='store_true',
                            help='V-table form of ftrl / gda')
        parser.add_argument('--init', default=None,
                            help='initial policy-pair file')
        parser.add_argument('--out', default=None,
                            help='output policy file (JSON lines history '
                                 'for gs-oftrl)')
        parser.add_argument('--config', default=None,
                            help='YAML/JSON run config, flags take '
                                 'precedence')

    def _setup_sweep(self, subparsers):
        parser = subparsers.add_parser(
            'sweep', help='runs over a T grid, rate fits and bound checks')
        parser.set_defaults(func=self.action_sweep)
        self._add_game_args(parser, required=False)
        parser.add_argument(
            '--algs', default=None,
            help='comma separated algorithms, each optionally with an eta '
                 'expression: oftrl:oftrl56,ftrl,inpg')
        parser.add_argument('--iters', type=_int_list, default=None,
                            help='T grid, e.g. 100,1000,10000')
        parser.add_argument('--threads', type=int, default=None)
        parser.add_argument('--out-dir', default=None)
        parser.add_argument('--check-bounds', action='store_true')
        parser.add_argument('--config', default=None,
                            help='YAML/JSON sweep config')

    def _setup_eval(self, subparsers):
        parser = subparsers.add_parser(
            'eval', help='equilibrium gap of stored policies')
        parser.set_defaults(func=self.action_eval)
        self._add_game_args(parser)
        parser.add_argument('--policy', nargs='+', required=True,
                            help='policy files; a JSON lines history for '
                                 'ccegap')
        parser.add_argument('--metric', default='negap',
                            choices=['negap', 'ccegap', 'layer'])
        parser.add_argument('--layer', type=int, default=1)
        parser.add_argument('--schedule', choices=['alpha', 'eager'],
                            default='alpha',
                            help='mixing weights of a certified policy')

    # ======================== helpers ========================
    def _logger(self, args, name='tabmg'):
        return get_logger(name, self.session_config,
                          level='debug' if args.verbose else None)

    def _game(self, args):
        """
        Returns:
            (game, initial policies or None)
        """
        if args.game in _BUILTIN_GAMES:
            return make_game(args.game, seed=args.seed, horizon=args.horizon,
                             num_states=args.states,
                             action_counts=args.actions)
        return load_game(args.game), None

    def _run_config(self, args):
        config = Config()
        if args.config:
            config = Config.load_file(args.config)
        flags = {
            'algorithm': args.alg,
            'schedule': args.schedule,
            'eta': args.eta,
            'iterations': args.iters,
        }
        for key, value in flags.items():
            if value is not None:
                config[key] = value
        for key, flag in [('diagnostics', args.diagnostics),
                          ('kl_base_point', args.kl_base),
                          ('v_form', args.v_form)]:
            if flag:
                config[key] = True
        trace = Config(config.get('trace') or {})
        if args.trace:
            trace.path = args.trace
        if args.every:
            trace.mode = 'periodic'
            trace.every = args.every
        config.trace = trace
        if 'algorithm' not in config:
            raise UsageError('solve needs --alg (or "algorithm" in --config)')
        if 'iterations' not in config:
            raise UsageError('solve needs --iters (or "iterations" in '
                             '--config)')
        return config.to_dict()

    # ======================== actions ========================
    def action_make_game(self, args):
        zero_sum = False if args.general_sum else None
        game, init = make_game(args.kind, seed=args.seed,
                               horizon=args.horizon, num_states=args.states,
                               action_counts=args.actions, zero_sum=zero_sum)
        U.f_mkdir_in_path(U.f_expand(args.out))
        save_game(game, args.out)
        print('game written to', args.out)
        if init is not None:
            init_out = args.init_out
            if init_out is None:
                init_out = U.f_ext(args.out)[0] + '_init.json'
            save_policies(init, init_out)
            print('initial policies written to', init_out)
        return 0

    def action_solve(self, args):
        config = self._run_config(args)
        game, init = self._game(args)
        if args.init:
            init = load_policies(args.init)
        logger = self._logger(args)
        if algorithm_kind(Config(config)) == AlgorithmKind.gs_oftrl:
            certified, trace, _ = run_general_sum_oftrl(game, config,
                                                        logger=logger)
            if args.out:
                export_history(certified, args.out)
            print(format_number(trace.final.ccegap))
            return 0
        if not game.zero_sum:
            raise UsageError('{} needs a zero-sum game, use --alg gs-oftrl'
                             .format(config['algorithm']))
        mu, nu, trace = run_framework(game, config, init=init, logger=logger)
        if args.out:
            U.f_mkdir_in_path(U.f_expand(args.out))
            save_policies([mu, nu], args.out)
        print(format_number(trace.final.negap))
        return 0

    def _algorithm_entries(self, text):
        entries = []
        defaults = {a.algorithm: a.get('eta')
                    for a in self.sweep_config.algorithms}
        for item in text.split(','):
            item = item.strip()
            if not item:
                continue
            name, _, eta = item.partition(':')
            if name not in _ALGORITHMS:
                raise UsageError('unknown algorithm "{}", expected one of {}'
                                 .format(name, _ALGORITHMS))
            entry = {'algorithm': name}
            eta = eta or defaults.get(name)
            if eta:
                entry['eta'] = eta
            entries.append(entry)
        return entries

    def action_sweep(self, args):
        sweep = self.sweep_config.to_dict()
        if args.config:
            sweep.update(Config.load_file(args.config).to_dict())
        if args.game is not None:
            if args.game in _BUILTIN_GAMES:
                sweep['game'] = {
                    'source': args.game, 'seed': args.seed,
                    'horizon': args.horizon, 'num_states': args.states,
                    'action_counts': args.actions,
                    'players': len(args.actions),
                }
            else:
                sweep['game'] = {'source': 'file', 'path': args.game}
        if args.algs:
            sweep['algorithms'] = self._algorithm_entries(args.algs)
        if args.iters:
            sweep['iterations'] = args.iters
        if args.threads is not None:
            sweep['threads'] = args.threads
        if args.out_dir:
            sweep['out_dir'] = args.out_dir
        if args.check_bounds:
            sweep['check_bounds'] = True

        plan = SweepPlan.from_config(sweep)
        report = run_sweep(plan, logger=self._logger(args, 'tabmg.sweep'))
        emit_report(report, plan.out_dir)
        print(console_summary(report))
        if plan.check_bounds and not report.bounds_ok:
            return 1
        return 0

    def action_eval(self, args):
        game, _ = self._game(args)
        if args.metric == 'ccegap':
            game = to_general_sum(game)
            if len(args.policy) != 1:
                raise UsageError('ccegap takes a single history file')
            schedule = U.make_schedule(args.schedule, horizon=game.horizon)
            policy = load_history(args.policy[0], game, schedule)
            print(format_number(cce_gap(game, policy)))
            return 0
        if not game.zero_sum:
            raise UsageError('metric {} needs a zero-sum game, use --metric '
                             'ccegap'.format(args.metric))
        policies = []
        for path in args.policy:
            policies.extend(load_policies(path))
        if [p.player for p in policies] != [0, 1]:
            raise UsageError('need one policy per player, got players {}'
                             .format([p.player for p in policies]))
        mu, nu = policies
        if args.metric == 'negap':
            value = ne_gap(game, mu, nu)
        else:
            if not 1 <= args.layer <= game.horizon:
                raise UsageError('--layer must be in [1, {}]'
                                 .format(game.horizon))
            value = layer_ne_gap(game, mu, nu, args.layer, nash_values(game))
        print(format_number(value))
        return 0

    def main(self, argv=None):
        args = self.parser.parse_args(argv)
        try:
            return args.func(args)
        except (UsageError, ConfigError) as e:
            print('tabmg {}: error: {}'.format(args.command, e),
                  file=sys.stderr)
            return 2
        except (GameError, SolverError, RunError, OSError) as e:
            print('tabmg {}: {}: {}'.format(args.command, type(e).__name__, e),
                  file=sys.stderr)
            return 1
        except ValueError as e:
            # enum names and eta expressions
            print('tabmg {}: error: {}'.format(args.command, e),
                  file=sys.stderr)
            return 2


def main(argv=None):
    try:
        parser = TabmgParser()
    except ConfigError as e:
        print('tabmg: error in {}: {}'.format(U.get_config_file(), e),
              file=sys.stderr)
        sys.exit(2)
    sys.exit(parser.main(argv))


if __name__ == '__main__':
    main()
