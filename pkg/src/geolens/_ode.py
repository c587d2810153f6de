"""Fixed-step classical Runge-Kutta integration for autonomous systems.

Fixed steps keep runs reproducible; accuracy is controlled by the step size
and checked downstream with Richardson comparisons against a half-step run.
"""

import numpy as np


def rk4_trajectory(rhs, y0, span, n_steps):
    """Integrate y' = rhs(y) over [0, span] and return (ts, ys).

    ``y0`` may have any shape; ``rhs`` must accept and return the same shape
    (vectorized systems integrate in lockstep).  ``ys`` has shape
    (n_steps + 1,) + y0.shape.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    y = np.array(y0, dtype=np.float64)
    h = span / n_steps
    ts = np.linspace(0.0, span, n_steps + 1)
    ys = np.empty((n_steps + 1,) + y.shape)
    ys[0] = y
    for i in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ys[i + 1] = y
    return ts, ys


def rk4_endpoint(rhs, y0, span, n_steps):
    """Endpoint-only variant of :func:`rk4_trajectory`."""
    y = np.array(y0, dtype=np.float64)
    h = span / n_steps
    for _ in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y
