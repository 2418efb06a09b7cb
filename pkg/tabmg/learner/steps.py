"""
One policy update of each matrix-game algorithm, vectorized over states.

Row-player losses g_mu = [Q nu](s, .) are maximized and column-player losses
g_nu = [Q^T mu](s, .) are minimized. Accumulators of the FTRL family are
stored normalized: S_t = sum_{i <= t} w_i g_i / w_t.
"""
from enum import auto
import numpy as np
import tabmg.utils as U
from .matrix_game import project_simplex, matrix_ne_batch


class PredictionWeight(U.StringEnum):
    previous = auto()  # w_{t-1}, zero-sum OFTRL
    current = auto()  # w_t, general-sum and modified OFTRL


def softmax_policy(exponent, log_base=None):
    if log_base is not None:
        exponent = exponent + log_base
    return U.softmax_rows(exponent)


def ftrl_exponent(acc, eta):
    "eta * S_{t-1}"
    return eta * acc


def oftrl_exponent(acc, last_loss, ratio, eta, prediction_weight):
    """
    Args:
        acc: S_{t-1}
        last_loss: g_{t-1}, zero at t = 1
        ratio: w_{t-1} / w_t
    """
    if prediction_weight == PredictionWeight.previous:
        return eta * ratio * (acc + last_loss)
    return eta * (ratio * acc + last_loss)


def step_ftrl(acc_mu, acc_nu, eta, log_base_mu=None, log_base_nu=None):
    """
    mu^t ∝ base * exp(eta S_mu), nu^t ∝ base * exp(-eta S_nu)
    """
    mu = softmax_policy(ftrl_exponent(acc_mu, eta), log_base_mu)
    nu = softmax_policy(-ftrl_exponent(acc_nu, eta), log_base_nu)
    return mu, nu


def step_oftrl(acc_mu, acc_nu, last_mu_loss, last_nu_loss, ratio, eta,
               prediction_weight=PredictionWeight.previous,
               log_base_mu=None, log_base_nu=None):
    mu = softmax_policy(
        oftrl_exponent(acc_mu, last_mu_loss, ratio, eta, prediction_weight),
        log_base_mu)
    nu = softmax_policy(
        -oftrl_exponent(acc_nu, last_nu_loss, ratio, eta, prediction_weight),
        log_base_nu)
    return mu, nu


def step_gda(mu_prev, nu_prev, last_mu_loss, last_nu_loss, eta):
    mu = project_simplex(mu_prev + eta * last_mu_loss)
    nu = project_simplex(nu_prev - eta * last_nu_loss)
    return mu, nu


def step_matrix_ne(Q_prev):
    mu, nu, _ = matrix_ne_batch(Q_prev)
    return mu, nu


def step_hedge_inpg(log_mu, log_nu, last_mu_loss, last_nu_loss, eta):
    """
    Returns:
        (mu, nu, log_mu, log_nu), log-weights renormalized every step
    """
    log_mu = U.log_normalize_rows(log_mu + eta * last_mu_loss)
    log_nu = U.log_normalize_rows(log_nu - eta * last_nu_loss)
    return np.exp(log_mu), np.exp(log_nu), log_mu, log_nu


def losses(Q, mu, nu):
    """
    Q: [S, A, B]; returns ([Q nu] [S, A], [Q^T mu] [S, B])
    """
    return (np.einsum('sab,sb->sa', Q, nu),
            np.einsum('sab,sa->sb', Q, mu))
