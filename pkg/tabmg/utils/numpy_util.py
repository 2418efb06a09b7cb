"""
Numpy and math operations
"""
import numpy as np


def softmax_rows(logits):
    """
    Row-wise softmax over the last axis with max-subtraction.
    """
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def log_normalize_rows(log_weights):
    """
    Shift log-weights so that each row's exp sums to one.
    """
    log_weights = np.asarray(log_weights, dtype=np.float64)
    m = log_weights.max(axis=-1, keepdims=True)
    lse = m + np.log(np.exp(log_weights - m).sum(axis=-1, keepdims=True))
    return log_weights - lse


def _broadcast_dist(dist, ndim, axis):
    """
    [S, A] -> shape that broadcasts against an ndim tensor on (0, axis)
    """
    shape = [1] * ndim
    shape[0] = dist.shape[0]
    shape[axis] = dist.shape[1]
    return dist.reshape(shape)


def contract_others(Q, dists, keep):
    """
    Marginal payoff of one player against the product of the others.

    Args:
        Q: [S, A_1, ..., A_m] joint payoff per state
        dists: list of m arrays [S, A_i]; dists[keep] is ignored
        keep: index of the player whose action axis is kept

    Returns:
        [S, A_keep]
    """
    m = Q.ndim - 1
    assert len(dists) == m, 'need one distribution per player'
    X = Q
    # contract from the last axis so the remaining axis numbers stay valid
    for j in reversed(range(m)):
        if j == keep:
            continue
        X = (X * _broadcast_dist(dists[j], X.ndim, j + 1)).sum(axis=j + 1)
    return X


def expected_value(Q, dists):
    """
    Q: [S, A_1, ..., A_m]; returns [S] = E_{a ~ prod dists}[Q(s, a)]
    """
    X = contract_others(Q, dists, keep=0)
    return (X * dists[0]).sum(axis=-1)


def is_distribution(p, axis=-1, tol=1e-9):
    p = np.asarray(p)
    return bool(np.all(p >= -tol)
                and np.all(np.abs(p.sum(axis=axis) - 1.0) <= tol))
