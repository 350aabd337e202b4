"""Independent reference samplers and formulas used as test oracles.

Samplers invert closed-form CDFs; none of them touch collabnet code.
"""

import math

import numpy as np


def rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def weibull_degrees(n, k, lam, seed):
    """Weibull draws rounded up to integers: degree d stands for (d-1, d]."""
    u = rng(seed).random(n)
    x = lam * (-np.log1p(-u)) ** (1.0 / k)
    return np.maximum(np.ceil(x), 1).astype(np.int64)


def log_normal_degrees(n, mu, sigma, seed):
    x = np.exp(rng(seed).normal(mu, sigma, n))
    return np.maximum(np.ceil(x), 1).astype(np.int64)


def pareto(n, gamma_, x_min, seed):
    """Continuous Pareto with density proportional to x**-gamma on [x_min, inf)."""
    u = 1.0 - rng(seed).random(n)
    return x_min * u ** (-1.0 / (gamma_ - 1.0))


def discrete_power_law(n, gamma_, x_min, seed):
    """Continuous Pareto on [x_min - 1/2, inf) rounded to the nearest integer."""
    u = 1.0 - rng(seed).random(n)
    return np.floor((x_min - 0.5) * u ** (-1.0 / (gamma_ - 1.0)) + 0.5).astype(np.int64)


def quantile_power_law(n, gamma_, x_min):
    """Stratified (noise-free) version of discrete_power_law."""
    u = (np.arange(n) + 0.5) / n
    return np.floor((x_min - 0.5) * u ** (-1.0 / (gamma_ - 1.0)) + 0.5).astype(np.int64)


def weibull_pdf(x, k, lam):
    x = np.asarray(x, dtype=float)
    return (k / lam) * (x / lam) ** (k - 1) * np.exp(-(x / lam) ** k)


def weibull_cdf(x, k, lam):
    return -np.expm1(-(np.asarray(x, dtype=float) / lam) ** k)


def log_normal_pdf(x, mu, sigma):
    x = np.asarray(x, dtype=float)
    return np.exp(-(np.log(x) - mu) ** 2 / (2 * sigma ** 2)) / (x * sigma * math.sqrt(2 * math.pi))


def brute_force_degrees(events, t, window):
    """Distinct-collaborator degrees at instant t by direct enumeration."""
    pairs = set()
    for ev in events:
        if ev.date - window <= t < ev.date:
            people = sorted(set(ev.participants))
            for i in range(len(people)):
                for j in range(i + 1, len(people)):
                    pairs.add((people[i], people[j]))
    deg = {}
    for a, b in pairs:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    return deg, len(pairs)


def exact_growth_distribution(n_nodes, m, weight):
    """Exact law of the final degree sequence, enumerating every attachment
    history from the (m+1)-clique.  Each arrival picks m distinct targets one at
    a time, proportionally to weight(degree) among those not yet picked."""
    dist = {}

    def picks(degrees, chosen, p):
        if len(chosen) == m:
            yield chosen, p
            return
        free = [i for i in range(len(degrees)) if i not in chosen]
        total = sum(weight(degrees[i]) for i in free)
        for i in free:
            yield from picks(degrees, chosen + [i], p * weight(degrees[i]) / total)

    def walk(degrees, p):
        if len(degrees) == n_nodes:
            key = tuple(degrees)
            dist[key] = dist.get(key, 0.0) + p
            return
        for chosen, q in picks(degrees, [], 1.0):
            nxt = list(degrees)
            for i in chosen:
                nxt[i] += 1
            walk(nxt + [m], p * q)

    walk([m] * (m + 1), 1.0)
    return dist
