"""Independent oracles shared by the test modules.

Everything here is deliberately naive (truncated series, determinant
expansion, fine-step integration) so it cannot share a failure mode with
the implementation under test.
"""

import numpy as np


def taylor_expm(m, terms=30):
    """Truncated-Taylor matrix exponential: sum of M^k / k! up to ``terms``."""
    n = m.shape[0]
    acc = np.eye(n)
    term = np.eye(n)
    for k in range(1, terms + 1):
        term = term @ m / k
        acc = acc + term
    return acc


def rk4_reference(a, b, u_const, x0, dt, n_steps):
    """Plain fixed-step RK4 of x' = A x + B u with constant input."""
    x = np.asarray(x0, dtype=float).copy()
    forcing = b @ u_const

    def f(state):
        return a @ state + forcing

    for _ in range(n_steps):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def charpoly_coefficients(m):
    """Characteristic polynomial coefficients (monic, descending powers)
    via the Faddeev-LeVerrier recursion."""
    n = m.shape[0]
    coeffs = [1.0]
    bk = np.zeros_like(m)
    for k in range(1, n + 1):
        bk = m @ bk + coeffs[-1] * np.eye(n)
        ck = -np.trace(m @ bk) / k
        coeffs.append(ck)
    return np.array(coeffs)


def durand_kerner_roots(coeffs, iterations=300):
    """All complex roots of a monic polynomial by Durand-Kerner iteration."""
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs) - 1
    # standard initialization: powers of a non-real point off the unit circle
    z = (0.4 + 0.9j) ** np.arange(1, n + 1)
    radius = 1.0 + np.abs(coeffs).max()
    z = z * radius

    def poly(x):
        acc = np.zeros_like(x)
        for c in coeffs:
            acc = acc * x + c
        return acc

    for _ in range(iterations):
        delta = np.zeros_like(z)
        for i in range(n):
            others = np.delete(z, i)
            denom = np.prod(z[i] - others)
            delta[i] = poly(np.array([z[i]]))[0] / denom
        z = z - delta
        if np.abs(delta).max() < 1e-14 * radius:
            break
    return z


def sorted_complex(values):
    """Sort a complex multiset for comparisons (real desc, imag desc)."""
    values = np.asarray(values, dtype=complex)
    order = np.lexsort((-values.imag, -values.real))
    return values[order]


def multiset_distance(a, b):
    """Largest pairwise distance under the optimal matching of two complex
    multisets (robust to ordering ambiguities of the sort keys)."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()
