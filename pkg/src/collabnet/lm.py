"""Levenberg-Marquardt least squares.

Solves ``(J^T W J + eta D) delta = J^T W r`` with ``D = diag(J^T W J)``.  The
damping ``eta`` is doubled after a rejected trial and divided by three after an
accepted one.  Trials that leave the parameter domain are rejected like trials
that raise the SSE, so accepted SSE values never increase.
"""

from dataclasses import dataclass, field

import numpy as np

FTOL = 1e-8
GTOL = 1e-10
MAX_ITER = 200
DAMPING_UP = 2.0
DAMPING_DOWN = 3.0
MAX_DAMPING = 1e16


@dataclass
class LMResult:
    theta: np.ndarray
    sse: float
    iterations: int
    converged: bool
    grad_norm: float
    message: str
    sse_history: list = field(default_factory=list)


def _fd_jacobian(model, x, theta, f0):
    J = np.empty((f0.size, theta.size))
    for j in range(theta.size):
        h = 1e-7 * max(abs(theta[j]), 1.0)
        step = theta.copy()
        step[j] += h
        J[:, j] = (model(x, step) - f0) / h
    return J


def lm_minimize(model, x, y, init, jac=None, weights=None, in_domain=None,
                ftol=FTOL, gtol=GTOL, max_iter=MAX_ITER, damping=1e-3):
    """Minimise ``sum(w * (y - model(x, theta))**2)`` starting from ``init``.

    ``jac(x, theta)`` returns the model Jacobian (finite differences if omitted);
    ``in_domain(theta)`` returns False for inadmissible parameters.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    theta = np.array(init, dtype=np.float64)
    if y.size < theta.size:
        raise ValueError(f"need at least {theta.size} data points, got {y.size}")
    if in_domain is not None and not in_domain(theta):
        raise ValueError(f"initial parameters {theta.tolist()} outside the model domain")
    sw = np.ones_like(y) if weights is None else np.sqrt(np.asarray(weights, dtype=np.float64))

    f = model(x, theta)
    r = sw * (y - f)
    sse = float(r @ r)
    if not np.isfinite(sse):
        raise ValueError("model is not finite at the initial parameters")
    history = [sse]
    eta = damping
    it = 0
    need_jac = True
    converged = False
    message = "maximum iterations reached"
    gnorm = np.inf

    while it < max_iter:
        if need_jac:
            J = jac(x, theta) if jac is not None else _fd_jacobian(model, x, theta, f)
            J = sw[:, None] * J
            g = J.T @ r
            gnorm = float(np.max(np.abs(g))) if g.size else 0.0
            A = J.T @ J
            diag = np.diag(A).copy()
            need_jac = False
        if sse == 0.0:
            converged, message = True, "exact fit"
            break
        if np.any(diag <= 0):
            # a parameter with no influence: A + eta D is singular for every eta
            message = "non-convergent: singular normal equations"
            break
        if gnorm <= gtol:
            converged, message = True, "gradient below tolerance"
            break
        if eta > MAX_DAMPING:
            message = "non-convergent: damping exhausted"
            break
        it += 1
        try:
            delta = np.linalg.solve(A + eta * np.diag(diag), g)
        except np.linalg.LinAlgError:
            delta = None
        if delta is None or not np.all(np.isfinite(delta)):
            eta *= DAMPING_UP
            continue
        trial = theta + delta
        if in_domain is not None and not in_domain(trial):
            eta *= DAMPING_UP
            continue
        f_t = model(x, trial)
        r_t = sw * (y - f_t)
        sse_t = float(r_t @ r_t)
        if not np.isfinite(sse_t) or sse_t > sse:
            if np.isfinite(sse_t) and sse_t - sse <= ftol * sse:
                converged = True
                message = "relative SSE change below tolerance"
                break
            eta *= DAMPING_UP
            continue
        rel = (sse - sse_t) / sse
        theta, f, r, sse = trial, f_t, r_t, sse_t
        history.append(sse)
        eta /= DAMPING_DOWN
        need_jac = True
        if rel <= ftol:
            converged = True
            message = "relative SSE change below tolerance"
            break

    return LMResult(theta=theta, sse=sse, iterations=it, converged=converged,
                    grad_norm=gnorm, message=message, sse_history=history)
