"""
Single matrix games: simplex projection and the exact Nash solver.

The row player maximizes x^T M y, the column player minimizes it.
"""
import numpy as np


NE_TOL = 1e-9
_PIVOT_EPS = 1e-12


class SolverError(RuntimeError):
    def __init__(self, message, residual_gap=None):
        super().__init__(message)
        self.residual_gap = residual_gap


def project_simplex(v):
    """
    Euclidean projection onto the probability simplex along the last axis.
    out = max(v - tau, 0) with tau chosen so that every row sums to one.
    """
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError('project_simplex needs finite entries')
    n = v.shape[-1]
    u = -np.sort(-v, axis=-1)
    css = np.cumsum(u, axis=-1) - 1.0
    ind = np.arange(1, n + 1)
    # the condition holds on a prefix of the sorted entries
    rho = np.count_nonzero(u - css / ind > 0, axis=-1, keepdims=True) - 1
    tau = np.take_along_axis(css, rho, axis=-1) / (rho + 1.0)
    return np.maximum(v - tau, 0.0)


def duality_gap(M, x, y):
    "max_a (M y)_a - min_b (x^T M)_b"
    return float((M.dot(y)).max() - (x.dot(M)).min())


def _solve_2x2(M):
    """
    Returns:
        (x, y) or None when the closed form does not apply
    """
    col_max = M.max(axis=0)
    row_min = M.min(axis=1)
    for i in range(2):
        for j in range(2):
            if M[i, j] == row_min[i] and M[i, j] == col_max[j]:
                x = np.zeros(2)
                y = np.zeros(2)
                x[i] = 1.0
                y[j] = 1.0
                return x, y
    (a, b), (c, d) = M
    denom = a - b - c + d
    if denom == 0:
        return None
    p = (d - c) / denom
    q = (d - b) / denom
    if not (0 <= p <= 1 and 0 <= q <= 1):
        return None
    return np.array([p, 1.0 - p]), np.array([q, 1.0 - q])


def _simplex_max(M):
    """
    max 1^T y  s.t.  M y <= 1, y >= 0  (M > 0 entrywise), dense tableau with
    Bland's rule. The dual prices of the slack rows solve
    min 1^T x  s.t.  M^T x >= 1, x >= 0.

    Returns:
        (x, y) unnormalized primal and dual solutions
    """
    n_rows, n_cols = M.shape
    n_vars = n_cols + n_rows
    tableau = np.zeros((n_rows + 1, n_vars + 1))
    tableau[:n_rows, :n_cols] = M
    tableau[:n_rows, n_cols:n_vars] = np.eye(n_rows)
    tableau[:n_rows, -1] = 1.0
    tableau[-1, :n_cols] = -1.0
    basis = list(range(n_cols, n_vars))

    max_iters = 50 * n_vars + 100
    for _ in range(max_iters):
        reduced = tableau[-1, :n_vars]
        entering = np.flatnonzero(reduced < -_PIVOT_EPS)
        if entering.size == 0:
            break
        col = entering[0]
        column = tableau[:n_rows, col]
        candidates = np.flatnonzero(column > _PIVOT_EPS)
        if candidates.size == 0:
            raise SolverError('matrix game LP is unbounded')
        ratios = tableau[candidates, -1] / column[candidates]
        best = ratios.min()
        ties = candidates[ratios <= best + _PIVOT_EPS]
        row = min(ties, key=lambda r: basis[r])

        tableau[row] /= tableau[row, col]
        for r in range(n_rows + 1):
            if r != row and tableau[r, col] != 0.0:
                tableau[r] -= tableau[r, col] * tableau[row]
        basis[row] = col
    else:
        raise SolverError('simplex did not converge in {} pivots'
                          .format(max_iters))

    y = np.zeros(n_vars)
    for r, var in enumerate(basis):
        y[var] = tableau[r, -1]
    x = tableau[-1, n_cols:n_vars].copy()
    return np.maximum(x, 0.0), np.maximum(y[:n_cols], 0.0)


def matrix_ne(M, tol=NE_TOL):
    """
    Exact Nash equilibrium of a zero-sum matrix game.

    A constant matrix returns uniform strategies. 2x2 games use the closed
    form (pure saddle point, otherwise the equalizing mixture); larger games
    solve the minimax LP.

    Returns:
        (x, y, value)

    Raises:
        SolverError with `residual_gap` if the duality gap exceeds tol
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or not np.all(np.isfinite(M)):
        raise ValueError('matrix_ne needs a finite 2-d payoff matrix')
    n_rows, n_cols = M.shape
    lo, hi = M.min(), M.max()
    if lo == hi:
        x = np.full(n_rows, 1.0 / n_rows)
        y = np.full(n_cols, 1.0 / n_cols)
        return x, y, float(lo)

    solution = _solve_2x2(M) if M.shape == (2, 2) else None
    if solution is None:
        # shift to a positive game; strategies are unchanged
        xs, ys = _simplex_max(M - lo + 1.0)
        if xs.sum() <= 0 or ys.sum() <= 0:
            raise SolverError('degenerate LP solution')
        solution = xs / xs.sum(), ys / ys.sum()
    x, y = solution
    gap = duality_gap(M, x, y)
    scale = max(1.0, hi - lo)
    if gap > tol * scale:
        raise SolverError('matrix_ne residual duality gap {:.3g}'.format(gap),
                          residual_gap=gap)
    return x, y, float(x.dot(M).dot(y))


def matrix_ne_batch(Q):
    """
    Q: [S, A, B]

    Returns:
        ([S, A], [S, B], [S]) per-state equilibria and values
    """
    S, A, B = Q.shape
    mu = np.empty((S, A))
    nu = np.empty((S, B))
    values = np.empty(S)
    for s in range(S):
        mu[s], nu[s], values[s] = matrix_ne(Q[s])
    return mu, nu, values
