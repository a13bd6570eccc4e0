"""Small random instances shared by the test modules."""

import numpy as np


def sym_view(rng, n, zeros=0.0):
    a = rng.random((n, n))
    if zeros:
        a[rng.random((n, n)) < zeros] = 0.0
    s = np.triu(a, 1)
    s = s + s.T
    np.fill_diagonal(s, 1.0)
    return s


def views(rng, n, m, zeros=0.0):
    return [sym_view(rng, n, zeros) for _ in range(m)]


def interactions(rng, n_d, n_t, p=0.35, new_rows=0):
    y = (rng.random((n_d, n_t)) < p).astype(float)
    if not y.any():
        y[0, 0] = 1.0
    if new_rows:
        rows = rng.choice(n_d, size=min(new_rows, n_d - 1), replace=False)
        y[rows] = 0.0
        if not y.any():
            keep = next(i for i in range(n_d) if i not in rows)
            y[keep, 0] = 1.0
    return y


def lists(a):
    return np.asarray(a).tolist()
