"""Constrained preferential-attachment growth.

The mean-field law ``dk/dt = alpha * k**beta * exp(-gamma_c * k)`` is realised
microscopically as attachment weights ``w(k) = alpha (k + a0)**beta exp(-gamma_c k)``:
each arriving node links to ``m`` distinct existing nodes drawn with
probability proportional to ``w``.
"""

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _accel, kernels
from .errors import InputError
from .temporal import DegreeSample

RNG_ALGORITHM = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class GrowthConfig:
    alpha: float = 1.0
    beta: float = 1.0
    gamma_c: float = 0.0
    m: int = 2
    n_nodes: int = 100_000
    a0: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.alpha > 0:
            raise InputError("alpha must be > 0")
        if not self.beta >= 0:
            raise InputError("beta must be >= 0")
        if not self.gamma_c >= 0:
            raise InputError("gamma_c must be >= 0")
        if int(self.m) != self.m or self.m < 1:
            raise InputError("m must be a positive integer")
        if int(self.n_nodes) != self.n_nodes or self.n_nodes <= self.m:
            raise InputError("n_nodes must be an integer > m")
        if not self.a0 > 0:
            raise InputError("a0 must be > 0")

    def as_dict(self):
        return asdict(self)


def attachment_weight(k, config):
    k = np.asarray(k, dtype=np.float64)
    return config.alpha * (k + config.a0) ** config.beta * np.exp(-config.gamma_c * k)


def weight_table(config):
    # alpha is left out: it cancels in the normalised draw, and leaving it out
    # keeps runs bit-identical across alpha
    k = np.arange(config.n_nodes + 1, dtype=np.float64)
    return (k + config.a0) ** config.beta * np.exp(-config.gamma_c * k)


@dataclass
class GrowthResult:
    degrees: np.ndarray
    config: GrowthConfig
    edges: np.ndarray = None
    rng_algorithm: str = RNG_ALGORITHM
    backend: str = "numpy"

    def sample(self):
        return DegreeSample(self.degrees, meta={"config": self.config.as_dict(),
                                                "rng": self.rng_algorithm})


def simulate_growth(config, record_edges=False, use_numba=None):
    """Grow a network from an (m+1)-clique; deterministic for a given seed."""
    steps = config.n_nodes - config.m - 1
    rng = np.random.Generator(np.random.PCG64(config.seed))
    uniforms = rng.random(steps * config.m)
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    degrees, edges = kernels.grow_network(config.n_nodes, config.m, weight_table(config),
                                          uniforms, record_edges, use_numba=use_numba)
    return GrowthResult(degrees, config, edges, backend=_accel.backend_name(use_numba))


@dataclass
class Trajectory:
    t: np.ndarray
    k: np.ndarray
    steps: int
    stationary: bool = False


def _rhs(k, alpha, beta, gamma_c):
    if k <= 0.0:
        return alpha if beta == 0 else 0.0
    return alpha * k ** beta * math.exp(-gamma_c * k)


def _rk4(k0, t0, t1, n, alpha, beta, gamma_c):
    h = (t1 - t0) / n
    ks = np.empty(n + 1)
    k = float(k0)
    ks[0] = k
    for i in range(n):
        a = _rhs(k, alpha, beta, gamma_c)
        b = _rhs(k + 0.5 * h * a, alpha, beta, gamma_c)
        c = _rhs(k + 0.5 * h * b, alpha, beta, gamma_c)
        d = _rhs(k + h * c, alpha, beta, gamma_c)
        k += h * (a + 2 * b + 2 * c + d) / 6.0
        ks[i + 1] = k
    return ks


def integrate_mean_growth(k0, config, t_span, rtol=1e-6, start_steps=64, max_steps=1 << 22):
    """Fixed-step RK4 for the mean-field law, halving the step until the endpoint
    moves by less than ``rtol`` (relative)."""
    t0, t1 = map(float, t_span)
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise InputError("t_span must be finite")
    if k0 < 0:
        raise InputError("k0 must be >= 0")
    alpha, beta, gamma_c = config.alpha, config.beta, config.gamma_c
    if k0 == 0 and beta > 0:
        # k**beta vanishes at 0: the zero solution is returned (for beta < 1
        # it is not the only one)
        t = np.linspace(t0, t1, 2)
        return Trajectory(t, np.zeros(2), 1, stationary=True)
    n = start_steps
    prev = _rk4(k0, t0, t1, n, alpha, beta, gamma_c)
    while True:
        n *= 2
        cur = _rk4(k0, t0, t1, n, alpha, beta, gamma_c)
        scale = max(abs(cur[-1]), 1e-300)
        if abs(cur[-1] - prev[-1]) / scale < rtol or n >= max_steps:
            return Trajectory(np.linspace(t0, t1, n + 1), cur, n)
        prev = cur
