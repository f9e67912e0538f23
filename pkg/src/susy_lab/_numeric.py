"""Compiled inner loops: Riccati stepping and Sturm-sequence bisection."""
import numpy as np
from numba import njit


@njit(cache=True)
def rk4_riccati(s2, k_nodes, k_mid, h, blowup):
    """Integrate u' = s2*k(x) - u**2 from u(0) = 0 across the half grid.

    Returns (u, index_of_blowup); the index is -1 when the profile stays finite.
    """
    n = k_nodes.shape[0]
    u = np.zeros(n)
    for i in range(n - 1):
        ui = u[i]
        k1 = s2 * k_nodes[i] - ui * ui
        v = ui + 0.5 * h * k1
        k2 = s2 * k_mid[i] - v * v
        v = ui + 0.5 * h * k2
        k3 = s2 * k_mid[i] - v * v
        v = ui + h * k3
        k4 = s2 * k_nodes[i + 1] - v * v
        nxt = ui + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(nxt) or abs(nxt) > blowup:
            return u, i + 1
        u[i + 1] = nxt
    return u, -1


@njit(cache=True)
def sturm_count(d, e2, lam, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal (d, e) strictly below lam.

    e2 holds the squared off-diagonal. Negative pivots of the LDL^T factorisation
    of T - lam*I are counted.
    """
    count = 0
    q = d[0] - lam
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - lam - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_eigenvalues(d, e2, lo, hi, n_wanted, tol, pivmin):
    """Eigenvalues 0..n_wanted-1 (ascending) inside [lo, hi] by bisection."""
    out = np.empty(n_wanted)
    for k in range(n_wanted):
        a = lo
        b = hi
        # any eigenvalue already found is a valid lower bound for the next one
        if k > 0 and out[k - 1] > a:
            a = out[k - 1] - tol
        while b - a > tol:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if sturm_count(d, e2, mid, pivmin) > k:
                b = mid
            else:
                a = mid
        out[k] = 0.5 * (a + b)
    return out


@njit(cache=True)
def inverse_iteration(d, e, lam, n_iter):
    """Eigenvector of tridiagonal (d, e) for an eigenvalue estimate lam.

    Gaussian elimination without pivoting on T - lam*I; tiny pivots are
    replaced by a small number, which is the usual safeguard.
    """
    n = d.shape[0]
    scale = 0.0
    for i in range(n):
        scale = max(scale, abs(d[i]))
    tiny = 1e-14 * max(scale, 1.0)
    x = np.ones(n)
    for i in range(n):
        # deterministic, not orthogonal to any eigenvector in practice
        x[i] = 1.0 + 0.5 * np.sin(0.7 * i + 0.3)
    cp = np.empty(n)
    piv = np.empty(n)
    for _ in range(n_iter):
        p = d[0] - lam
        if abs(p) < tiny:
            p = tiny
        piv[0] = p
        cp[0] = e[0] / p if n > 1 else 0.0
        y = np.empty(n)
        y[0] = x[0] / p
        for i in range(1, n):
            p = d[i] - lam - e[i - 1] * cp[i - 1]
            if abs(p) < tiny:
                p = tiny
            piv[i] = p
            if i < n - 1:
                cp[i] = e[i] / p
            y[i] = (x[i] - e[i - 1] * y[i - 1]) / p
        for i in range(n - 2, -1, -1):
            y[i] -= cp[i] * y[i + 1]
        norm = 0.0
        for i in range(n):
            norm += y[i] * y[i]
        norm = np.sqrt(norm)
        for i in range(n):
            x[i] = y[i] / norm
    return x
