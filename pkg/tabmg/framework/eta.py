"""
Step-size expressions and closed-form per-state regret bounds.

An eta expression is a plain number ('0.1'), a power of the iteration count
('2*T^-0.5') or one of the preset names below. It is resolved once per run.
"""
import math
import re
import tabmg.utils as U
from tabmg.session import AlgorithmKind, ConfigError


_POWER_EXPR = re.compile(
    r'^\s*([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\*\s*T\s*\^\s*'
    r'([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*$'
)


def _preset_nashv(T, H, A, B, m, A_max):
    return 4.0 / math.sqrt(H * T)


def _preset_gda(T, H, A, B, m, A_max):
    return 4.0 / math.sqrt(max(A, B) * H * T)


def _preset_mod_oftrl(T, H, A, B, m, A_max):
    return 1.0 / (16.0 * H)


def _preset_oftrl56(T, H, A, B, m, A_max):
    return T ** (-1.0 / 6.0)


def _preset_gs_oftrl(T, H, A, B, m, A_max):
    if m < 2:
        raise ConfigError('gs-oftrl needs at least two players')
    rate = (math.log(A_max) * math.log(T) / (H ** 3 * T)) ** 0.25
    return rate / math.sqrt(m - 1)


ETA_PRESETS = {
    'nashv': _preset_nashv,
    'gda': _preset_gda,
    'mod-oftrl': _preset_mod_oftrl,
    'oftrl56': _preset_oftrl56,
    'gs-oftrl': _preset_gs_oftrl,
}


def resolve_eta(expr, T, H, A=2, B=2, m=2, A_max=None):
    """
    Args:
        expr: eta expression string (or a number)
        T: iterations of the run

    Raises:
        ConfigError if the expression does not parse or eta < 0
    """
    if A_max is None:
        A_max = max(A, B)
    if isinstance(expr, (int, float)) and not isinstance(expr, bool):
        eta = float(expr)
    else:
        text = str(expr).strip().lower()
        if text in ETA_PRESETS:
            eta = ETA_PRESETS[text](T, H, A, B, m, A_max)
        else:
            match = _POWER_EXPR.match(text)
            if match:
                eta = float(match.group(1)) * T ** float(match.group(2))
            else:
                try:
                    eta = float(text)
                except ValueError:
                    raise ConfigError(
                        'cannot parse eta expression "{}": expected <float>, '
                        '<float>*T^<float> or one of {}'
                        .format(expr, sorted(ETA_PRESETS)))
    if not math.isfinite(eta) or eta < 0:
        raise ConfigError('eta must be a finite nonnegative number, got {} '
                          'from "{}"'.format(eta, expr))
    return eta


def regret_bound(kind, H, A, B, eta, t, m=2):
    """
    Closed-form bound on the per-state weighted regret at iteration t.

    Raises:
        ValueError for algorithms without a bound
    """
    kind = U.get_enum(AlgorithmKind, kind)
    log_ab = math.log(max(A, B))
    if kind == AlgorithmKind.ftrl:
        return (H + 1) * log_ab / (eta * t) + eta * H ** 2 / 2.0
    elif kind == AlgorithmKind.gda:
        return 2.0 * (H + 1) / (eta * t) + eta * max(A, B) * H ** 2 / 2.0
    elif kind == AlgorithmKind.nash_q:
        return (H + 1.0) ** 2 / (H + t)
    elif kind == AlgorithmKind.oftrl:
        return 256.0 * (H ** 2 * log_ab / (eta * t) + eta ** 5 * H ** 6)
    elif kind == AlgorithmKind.gs_oftrl:
        return 32.0 * (H * log_ab / (eta * t) + eta * H ** 3 / t
                       + (m - 1) ** 2 * eta ** 3 * H ** 4)
    raise ValueError('no per-state regret bound for {}'.format(kind.cli_name))
