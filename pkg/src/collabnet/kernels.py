"""Hot inner loops, each with a numba path and a numpy/interpreted path.

Three kernels dominate runtime on large inputs:

* the interval sweep that maintains active-edge degrees between snapshots,
* the weighted attachment sampler of the growth simulator,
* the Kolmogorov-Smirnov scan over candidate ``x_min`` values.

Every public function takes ``use_numba=None`` (follow the env flag) or an
explicit bool so tests can pin either route.
"""

import math

import numpy as np

from . import _accel

# ---------------------------------------------------------------------------
# interval sweep


def _sweep_advance_py(t, state, start_order, end_order, starts, ends, pair_of,
                      pair_u, pair_v, pair_count, degree, multi):
    ps = state[0]
    pe = state[1]
    active = state[2]
    n = start_order.shape[0]
    # adds before removes: an interval ending at or before t also started before t
    while ps < n and starts[start_order[ps]] <= t:
        p = pair_of[start_order[ps]]
        pair_count[p] += 1
        if multi or pair_count[p] == 1:
            degree[pair_u[p]] += 1
            degree[pair_v[p]] += 1
            active += 1
        ps += 1
    while pe < n and ends[end_order[pe]] <= t:
        p = pair_of[end_order[pe]]
        pair_count[p] -= 1
        if multi or pair_count[p] == 0:
            degree[pair_u[p]] -= 1
            degree[pair_v[p]] -= 1
            active -= 1
        pe += 1
    state[0] = ps
    state[1] = pe
    state[2] = active


_sweep_advance_nb = _accel.maybe_njit(_sweep_advance_py)


def sweep_advance(t, state, start_order, end_order, starts, ends, pair_of,
                  pair_u, pair_v, pair_count, degree, multi, use_numba=None):
    """Advance a sweep state in place to instant ``t`` (non-decreasing calls)."""
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    fn = _sweep_advance_nb if use_numba else _sweep_advance_py
    fn(float(t), state, start_order, end_order, starts, ends, pair_of,
       pair_u, pair_v, pair_count, degree, bool(multi))


def snapshot_degrees_numpy(t, starts, ends, pair_of, pair_u, pair_v, n_nodes, multi):
    """Direct (non-incremental) degree vector at instant ``t``.

    Returns ``(degree, active)`` where ``active`` counts distinct active pairs,
    or active intervals when ``multi``.
    """
    mask = (starts <= t) & (t < ends)
    pairs = pair_of[mask]
    if not multi:
        pairs = np.unique(pairs)
    degree = (np.bincount(pair_u[pairs], minlength=n_nodes)
              + np.bincount(pair_v[pairs], minlength=n_nodes))
    return degree.astype(np.int64), int(pairs.shape[0])


# ---------------------------------------------------------------------------
# growth simulator

_REBUILD_EVERY = 8192


def _make_grow_kernel(jit):
    # helpers must be compiled alongside the kernel, so they are bound
    # as closure constants rather than module globals
    def _fenwick_build(tree, weights, n):
        for k in range(1, n + 1):
            tree[k] = weights[k - 1]
        for k in range(1, n + 1):
            parent = k + (k & -k)
            if parent <= n:
                tree[parent] += tree[k]

    def _fenwick_add(tree, idx, delta, n):
        k = idx + 1
        while k <= n:
            tree[k] += delta
            k += k & -k

    def _fenwick_prefix(tree, count):
        s = 0.0
        k = count
        while k > 0:
            s += tree[k]
            k -= k & -k
        return s

    def _fenwick_search(tree, target, top, n):
        pos = 0
        rem = target
        step = top
        while step > 0:
            nxt = pos + step
            if nxt <= n and tree[nxt] <= rem:
                pos = nxt
                rem -= tree[nxt]
            step //= 2
        return pos

    def _linear_pick(cur, limit, chosen, n_chosen, u):
        total = 0.0
        for a in range(limit):
            skip = False
            for b in range(n_chosen):
                if chosen[b] == a:
                    skip = True
            if not skip:
                total += cur[a]
        target = u * total
        acc = 0.0
        last = -1
        for a in range(limit):
            skip = False
            for b in range(n_chosen):
                if chosen[b] == a:
                    skip = True
            if skip or cur[a] <= 0.0:
                continue
            last = a
            acc += cur[a]
            if acc > target:
                return a
        return last

    def _grow_py(n_nodes, m, wtable, uniforms, edges):
        record = edges.shape[0] > 0
        degree = np.zeros(n_nodes, dtype=np.int64)
        cur = np.zeros(n_nodes, dtype=np.float64)
        tree = np.zeros(n_nodes + 1, dtype=np.float64)
        e = 0
        seed_n = m + 1
        for a in range(seed_n):
            degree[a] = m
            cur[a] = wtable[m]
            for b in range(a + 1, seed_n):
                if record:
                    edges[e, 0] = b
                    edges[e, 1] = a
                e += 1
        _fenwick_build(tree, cur, n_nodes)
        top = 1
        while top * 2 <= n_nodes:
            top *= 2
        chosen = np.empty(m, dtype=np.int64)
        step = 0
        for i in range(seed_n, n_nodes):
            if step > 0 and step % _REBUILD_EVERY == 0:
                # float drift from repeated +/- updates
                tree[:] = 0.0
                _fenwick_build(tree, cur, n_nodes)
            for j in range(m):
                u = uniforms[step * m + j]
                total = _fenwick_prefix(tree, i)
                idx = _fenwick_search(tree, u * total, top, n_nodes)
                bad = idx >= i or cur[idx] <= 0.0
                if not bad:
                    for b in range(j):
                        if chosen[b] == idx:
                            bad = True
                if bad:
                    idx = _linear_pick(cur, i, chosen, j, u)
                chosen[j] = idx
                _fenwick_add(tree, idx, -cur[idx], n_nodes)
            for j in range(m):
                node = chosen[j]
                degree[node] += 1
                w = wtable[degree[node]]
                cur[node] = w
                _fenwick_add(tree, node, w, n_nodes)
                if record:
                    edges[e, 0] = i
                    edges[e, 1] = node
                e += 1
            degree[i] = m
            cur[i] = wtable[m]
            _fenwick_add(tree, i, cur[i], n_nodes)
            step += 1
        return degree

    _fenwick_build = jit(_fenwick_build)
    _fenwick_add = jit(_fenwick_add)
    _fenwick_prefix = jit(_fenwick_prefix)
    _fenwick_search = jit(_fenwick_search)
    _linear_pick = jit(_linear_pick)
    return jit(_grow_py)


def _identity(func):
    return func


_grow_py = _make_grow_kernel(_identity)
_grow_nb = _make_grow_kernel(_accel.jit_nocache) if _accel.HAVE_NUMBA else _grow_py


def grow_network(n_nodes, m, wtable, uniforms, record_edges=False, use_numba=None):
    """Run the node-arrival attachment process.

    ``wtable[k]`` is the (unnormalised) attachment weight of a node of degree k;
    ``uniforms`` holds exactly ``m`` draws per arriving node.  Returns
    ``(degrees, edges)`` with ``edges`` of shape (E, 2) or ``None``.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    n_edges = m * (m + 1) // 2 + m * (n_nodes - m - 1)
    edges = np.empty((n_edges if record_edges else 0, 2), dtype=np.int64)
    fn = _grow_nb if use_numba else _grow_py
    degree = fn(int(n_nodes), int(m), np.ascontiguousarray(wtable, dtype=np.float64),
                np.ascontiguousarray(uniforms, dtype=np.float64), edges)
    return degree, (edges if record_edges else None)


# ---------------------------------------------------------------------------
# x_min scan


def _ks_scan_py(values, counts, cand, discrete):
    nv = values.shape[0]
    tail_n = np.zeros(nv + 1, dtype=np.float64)
    tail_log = np.zeros(nv + 1, dtype=np.float64)
    # model CDF evaluated as 1 - exp((1 - g) * (log v - log xe)); logs computed once
    log_v = np.empty(nv, dtype=np.float64)
    for j in range(nv - 1, -1, -1):
        tail_n[j] = tail_n[j + 1] + counts[j]
        tail_log[j] = tail_log[j + 1] + counts[j] * math.log(values[j])
        log_v[j] = math.log(values[j] + 0.5) if discrete else math.log(values[j])
    nc = cand.shape[0]
    dist = np.full(nc, np.inf)
    gam = np.full(nc, np.nan)
    for c in range(nc):
        i = cand[c]
        xe = values[i] - 0.5 if discrete else values[i]
        n = tail_n[i]
        log_xe = math.log(xe)
        denom = tail_log[i] - n * log_xe
        if denom <= 0.0:
            continue
        g = 1.0 + n / denom
        cum = 0.0
        d = 0.0
        for j in range(i, nv):
            model = 1.0 - math.exp((1.0 - g) * (log_v[j] - log_xe))
            hi = (cum + counts[j]) / n
            if discrete:
                d = max(d, abs(hi - model))
            else:
                d = max(d, abs(cum / n - model), abs(hi - model))
            cum += counts[j]
        dist[c] = d
        gam[c] = g
    return dist, gam


_ks_scan_nb = _accel.maybe_njit(_ks_scan_py)


def _ks_scan_numpy(values, counts, cand, discrete):
    logs = counts * np.log(values)
    tail_n = np.concatenate([np.cumsum(counts[::-1])[::-1], [0.0]])
    tail_log = np.concatenate([np.cumsum(logs[::-1])[::-1], [0.0]])
    dist = np.full(cand.shape[0], np.inf)
    gam = np.full(cand.shape[0], np.nan)
    for c, i in enumerate(cand):
        xe = values[i] - 0.5 if discrete else values[i]
        n = tail_n[i]
        denom = tail_log[i] - n * np.log(xe)
        if denom <= 0.0:
            continue
        g = 1.0 + n / denom
        v = values[i:]
        cum_hi = np.cumsum(counts[i:]) / n
        if discrete:
            model = 1.0 - ((v + 0.5) / xe) ** (1.0 - g)
            d = np.max(np.abs(cum_hi - model))
        else:
            model = 1.0 - (v / xe) ** (1.0 - g)
            cum_lo = cum_hi - counts[i:] / n
            d = max(np.max(np.abs(cum_hi - model)), np.max(np.abs(cum_lo - model)))
        dist[c] = d
        gam[c] = g
    return dist, gam


def ks_scan(values, counts, cand, discrete, use_numba=None):
    """KS distance and MLE exponent for each candidate index into ``values``.

    ``values`` are sorted unique observations with multiplicities ``counts``.
    Candidates whose tail is degenerate get distance ``inf``.
    """
    if use_numba is None:
        use_numba = _accel.USE_NUMBA
    values = np.ascontiguousarray(values, dtype=np.float64)
    counts = np.ascontiguousarray(counts, dtype=np.float64)
    cand = np.ascontiguousarray(cand, dtype=np.int64)
    if use_numba and _accel.HAVE_NUMBA:
        return _ks_scan_nb(values, counts, cand, bool(discrete))
    return _ks_scan_numpy(values, counts, cand, bool(discrete))
