"""Compiled kernels for the hot paths.

Everything here is numba-jitted and operates on plain numpy arrays of
unsigned 64-bit words.  The pure-Python modules (hashing, pairing,
orientation, leafsearch) are the public surface; these kernels must stay
bit-for-bit consistent with them, which the test suite cross-checks.

Mixing constants mirror ``hashing`` and are frozen by the serialization
format version.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U = np.uint64
ZERO = U(0)
ONE = U(1)
TWO = U(2)
GOLDEN = U(0x9E3779B97F4A7C15)
C1 = U(0xBF58476D1CE4E5B9)
C2 = U(0x94D049BB133111EB)
M32 = U(0xFFFFFFFF)
S27 = U(27)
S30 = U(30)
S31 = U(31)
S32 = U(32)

# Search result sentinel: no valid pair code can be this large.
FAIL = U(0xFFFFFFFFFFFFFFFF)

# stats slots
ST_SEEDS = 0
ST_SURJ = 1
ST_PAIRS = 2
ST_ISO_REJ = 3
ST_ORIENT = 4
ST_COMBOS = 5
N_STATS = 8


@njit(cache=True, inline='always')
def _splitmix64(x):
    z = x + GOLDEN
    z = (z ^ (z >> S30)) * C1
    z = (z ^ (z >> S27)) * C2
    return z ^ (z >> S31)


@njit(cache=True, inline='always')
def _mix64(z):
    z = (z ^ (z >> S30)) * C1
    z = (z ^ (z >> S27)) * C2
    return z ^ (z >> S31)


@njit(cache=True, inline='always')
def _mulhi_small(x, r):
    # exact high word of the 128-bit product x * r, for r < 2**32
    a = x >> S32
    b = x & M32
    return (a * r + ((b * r) >> S32)) >> S32


@njit(cache=True, inline='always')
def _leaf_val(lo, sm, r):
    return _mulhi_small(_mix64(lo ^ sm), r)


@njit(cache=True, inline='always')
def _full_mask(half):
    if half >= 64:
        return FAIL
    return (ONE << U(half)) - ONE


# ---------------------------------------------------------------------------
# orientation


@njit(cache=True, inline='always')
def _find(parent, v):
    while parent[v] != v:
        parent[v] = parent[parent[v]]
        v = parent[v]
    return v


@njit(cache=True)
def _orientable(newv, oldv, n, offset1, parent, csize, cedges):
    """Union-find check: every component needs #edges == #nodes.

    Early-aborts as soon as a component is overfull (edges > nodes);
    since components always carry edges >= nodes - 1, an overfull
    component can never recover.
    """
    for v in range(n):
        parent[v] = v
        csize[v] = 1
        cedges[v] = 0
    for k in range(n):
        a = _find(parent, np.int64(newv[k]))
        b = _find(parent, offset1 + np.int64(oldv[k]))
        if a == b:
            cedges[a] += 1
            if cedges[a] > csize[a]:
                return False
        else:
            if csize[a] < csize[b]:
                a, b = b, a
            parent[b] = a
            csize[a] += csize[b]
            cedges[a] += cedges[b] + 1
            if cedges[a] > csize[a]:
                return False
    return True


@njit(cache=True)
def _orient(newv, oldv, n, offset1, deg, exor, adj_off, adj_edge, used,
            stack, f_out):
    """Extract the assignment bits of an orientable graph.

    Peels forced degree-1 nodes first (order-independent), then walks
    each remaining cycle from its smallest node, assigning every edge to
    the node the traversal moves to.  Within a node, incident edges are
    considered in ascending key index.  Fully deterministic.
    """
    for v in range(n):
        deg[v] = 0
        exor[v] = 0
    for k in range(n):
        used[k] = False
    for k in range(n):
        a = np.int64(newv[k])
        b = offset1 + np.int64(oldv[k])
        # a self-loop (odd-n overlap slot) contributes 2 to the degree
        # and cancels out of the xor accumulator; the cycle pass below
        # consumes it as a singleton cycle
        deg[a] += 1
        deg[b] += 1
        exor[a] ^= k
        exor[b] ^= k
    top = 0
    for v in range(n):
        if deg[v] == 1:
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        if deg[v] != 1:
            continue
        k = exor[v]
        a = np.int64(newv[k])
        b = offset1 + np.int64(oldv[k])
        if v == a:
            f_out[k] = 0
            w = b
        else:
            f_out[k] = 1
            w = a
        used[k] = True
        deg[v] = 0
        exor[v] ^= k
        deg[w] -= 1
        exor[w] ^= k
        if deg[w] == 1:
            stack[top] = w
            top += 1
    # remainder is a union of cycles; build CSR incidence over unused edges
    for v in range(n + 1):
        adj_off[v] = 0
    any_left = False
    for k in range(n):
        if not used[k]:
            adj_off[np.int64(newv[k])] += 1
            adj_off[offset1 + np.int64(oldv[k])] += 1
            any_left = True
    if not any_left:
        return
    total = np.int64(0)
    for v in range(n):
        c = adj_off[v]
        adj_off[v] = total
        total += c
    adj_off[n] = total
    for v in range(n):
        stack[v] = adj_off[v]  # insertion cursors
    for k in range(n):
        if not used[k]:
            a = np.int64(newv[k])
            b = offset1 + np.int64(oldv[k])
            adj_edge[stack[a]] = k
            stack[a] += 1
            adj_edge[stack[b]] = k
            stack[b] += 1
    for v0 in range(n):
        if deg[v0] == 0:
            continue
        v = v0
        while True:
            k = np.int64(-1)
            for i in range(adj_off[v], adj_off[v + 1]):
                e = adj_edge[i]
                if not used[e]:
                    k = e
                    break
            if k < 0:
                break
            a = np.int64(newv[k])
            b = offset1 + np.int64(oldv[k])
            w = b if v == a else a
            f_out[k] = 0 if w == a else 1
            used[k] = True
            deg[v] -= 1
            deg[w] -= 1
            v = w


# ---------------------------------------------------------------------------
# candidate pool scanning (shared pair-testing loop)


@njit(cache=True)
def _iso_masks(vals, n, half, cnt):
    """Per-role isolated-key masks of one candidate.

    A key isolated in both candidates of a pair forms a two-node,
    one-edge component -- unless, at odd n, both endpoints land on the
    single shared overlap node, which is an orientable self-loop.  Keys
    that could hit the overlap node are therefore excluded from the mask
    of the side where that can happen: value half-1 when the candidate
    plays the unshifted side, value 0 when it plays the shifted side.
    Returns (new_lo, new_hi, old_lo, old_hi).
    """
    for p in range(half):
        cnt[p] = 0
    for j in range(n):
        cnt[vals[j]] += 1
    odd = (n & 1) == 1
    nlo = ZERO
    nhi = ZERO
    olo = ZERO
    ohi = ZERO
    for j in range(n):
        if cnt[vals[j]] == 1:
            as_new = not (odd and vals[j] == half - 1)
            as_old = not (odd and vals[j] == 0)
            if j < 64:
                bit = ONE << U(j)
                if as_new:
                    nlo |= bit
                if as_old:
                    olo |= bit
            else:
                bit = ONE << U(j - 64)
                if as_new:
                    nhi |= bit
                if as_old:
                    ohi |= bit
    return nlo, nhi, olo, ohi


@njit(cache=True)
def _scan_pool(lo, newv, new_code, new_cov, ilo, ihi,
               codes, vals, covs, isolo, isohi, pool_len,
               n, half, full, use_iso, use_cache, max_code, stats,
               parent, csize, cedges, oldv, f_out,
               deg, exor, adj_off, adj_edge, used, stack):
    """Pair the new candidate against the pool in ascending code order.

    A pair is viable only if both candidates cover their full half range
    (relevant when the surjectivity filter is disabled and the pool holds
    non-surjective entries) and the combined graph is orientable.

    Returns (status, z): status 0 = no orientable pair, 1 = found,
    2 = pair-code budget exhausted.
    """
    offset1 = n - half
    uhalf = U(half)
    if new_code >= ONE:
        base = new_code * (new_code - ONE) // TWO
        if base > max_code:
            return 2, ZERO
    else:
        base = ZERO
    # pool codes are ascending, so the budget cut is a plain threshold;
    # counters stay in locals to keep the reject path free of memory
    # read-modify-writes
    lim = max_code - base
    n_pairs = 0
    n_iso = 0
    n_orient = 0
    for i in range(pool_len):
        if codes[i] > lim:
            stats[ST_PAIRS] += n_pairs
            stats[ST_ISO_REJ] += n_iso
            stats[ST_ORIENT] += n_orient
            return 2, ZERO
        n_pairs += 1
        if new_cov != full or covs[i] != full:
            continue
        if use_iso and ((ilo & isolo[i]) != ZERO or (ihi & isohi[i]) != ZERO):
            n_iso += 1
            continue
        if use_cache:
            ov = vals[i]
        else:
            # seed cache disabled (basic engine only): recompute
            sm = _splitmix64(codes[i])
            for j in range(n):
                oldv[j] = _leaf_val(lo[j], sm, uhalf)
            ov = oldv
        n_orient += 1
        if _orientable(newv, ov, n, offset1, parent, csize, cedges):
            _orient(newv, ov, n, offset1, deg, exor, adj_off, adj_edge,
                    used, stack, f_out)
            stats[ST_PAIRS] += n_pairs
            stats[ST_ISO_REJ] += n_iso
            stats[ST_ORIENT] += n_orient
            return 1, base + codes[i]
    stats[ST_PAIRS] += n_pairs
    stats[ST_ISO_REJ] += n_iso
    stats[ST_ORIENT] += n_orient
    return 0, ZERO


# ---------------------------------------------------------------------------
# engines


@njit(cache=True)
def _grow_pool(codes, vals, covs, isolo, isohi, n):
    """Double the candidate pool; returns the five replacement arrays."""
    cap = codes.size
    ncap = cap * 2
    tc = np.empty(ncap, np.uint64)
    tc[:cap] = codes
    tv = np.empty((ncap, n), np.uint8)
    tv[:cap] = vals
    tcv = np.empty(ncap, np.uint64)
    tcv[:cap] = covs
    til = np.empty(ncap, np.uint64)
    til[:cap] = isolo
    isolo_n = np.empty(ncap, np.uint64)
    isolo_n[:cap] = isolo
    isohi_n = np.empty(ncap, np.uint64)
    isohi_n[:cap] = isohi
    return tc, tv, tcv, isolo_n, isohi_n


@njit(cache=True)
def _basic_run(lo, n, half, use_surj, use_iso, use_cache, max_code,
               f_out, stats, codes, vals, covs, isolo, isohi, pool_len, s,
               parent, csize, cedges, deg, exor, adj_off, adj_edge,
               used, stack, oldv, newv, cnt):
    """Scan seeds from ``s`` until success, budget stop, or a full pool.

    The pool arrays are never reassigned here, which keeps the hot loop
    free of reference-count churn; the caller grows them and re-enters.
    Returns (status, z, s, pool_len) with status 1 = found, 2 = budget
    exhausted, 3 = pool full (re-enter at the returned seed).
    """
    uhalf = U(half)
    full = _full_mask(half)
    cap = codes.size
    while True:
        if s > ONE and s * (s - ONE) // TWO > max_code:
            return 2, ZERO, s, pool_len
        sm = _splitmix64(s)
        cov = ZERO
        for j in range(n):
            v = _leaf_val(lo[j], sm, uhalf)
            newv[j] = np.uint8(v)
            cov |= ONE << v
        stats[ST_SEEDS] += 1
        surj = cov == full
        if surj:
            stats[ST_SURJ] += 1
        if surj or not use_surj:
            if pool_len == cap:
                stats[ST_SEEDS] -= 1
                if surj:
                    stats[ST_SURJ] -= 1
                return 3, ZERO, s, pool_len
            nlo, nhi, olo, ohi = _iso_masks(newv, n, half, cnt)
            status, z = _scan_pool(
                lo, newv, s, cov, nlo, nhi,
                codes, vals, covs, isolo, isohi, pool_len,
                n, half, full, use_iso, use_cache, max_code, stats,
                parent, csize, cedges, oldv, f_out,
                deg, exor, adj_off, adj_edge, used, stack)
            if status == 1:
                return 1, z, s, pool_len
            if status == 2:
                return 2, ZERO, s, pool_len
            codes[pool_len] = s
            covs[pool_len] = cov
            if use_cache:
                for j in range(n):
                    vals[pool_len, j] = newv[j]
            isolo[pool_len] = olo
            isohi[pool_len] = ohi
            pool_len += 1
        s += ONE


@njit(cache=True)
def search_basic(lo, n, half, use_surj, use_iso, use_cache, max_code,
                 f_out, stats):
    codes = np.empty(32, np.uint64)
    vals = np.empty((32, n), np.uint8)
    covs = np.empty(32, np.uint64)
    isolo = np.empty(32, np.uint64)
    isohi = np.empty(32, np.uint64)
    pool_len = 0
    parent = np.empty(n, np.int64)
    csize = np.empty(n, np.int64)
    cedges = np.empty(n, np.int64)
    deg = np.empty(n, np.int64)
    exor = np.empty(n, np.int64)
    adj_off = np.empty(n + 1, np.int64)
    adj_edge = np.empty(2 * n, np.int64)
    used = np.empty(n, np.bool_)
    stack = np.empty(n, np.int64)
    oldv = np.empty(n, np.uint8)
    newv = np.empty(n, np.uint8)
    cnt = np.empty(64, np.int64)
    s = ZERO
    while True:
        status, z, s, pool_len = _basic_run(
            lo, n, half, use_surj, use_iso, use_cache, max_code,
            f_out, stats, codes, vals, covs, isolo, isohi, pool_len, s,
            parent, csize, cedges, deg, exor, adj_off, adj_edge,
            used, stack, oldv, newv, cnt)
        if status == 1:
            return z
        if status == 2:
            return FAIL
        codes, vals, covs, isolo, isohi = _grow_pool(
            codes, vals, covs, isolo, isohi, n)


@njit(cache=True)
def _rotation_run(lo, sub, n, half, use_iso, max_code, f_out, stats,
                  codes, vals, covs, isolo, isohi, pool_len, s, r0,
                  parent, csize, cedges, deg, exor, adj_off, adj_edge,
                  used, stack, oldv, newv, baseval, cnt):
    """Scan rotation candidates from (s, r0) until success or full pool.

    Returns (status, z, s, r, pool_len); status 3 means the pool is
    full and the caller should grow it and re-enter at (s, r).  The
    base seed is then re-evaluated, so only its rotations from r on
    are revisited.
    """
    uhalf = U(half)
    full = _full_mask(half)
    cap = codes.size
    while True:
        code0 = s * uhalf
        if code0 > ONE and code0 * (code0 - ONE) // TWO > max_code:
            return 2, ZERO, s, r0, pool_len
        sm = _splitmix64(s)
        mask_a = ZERO
        mask_b = ZERO
        for j in range(n):
            v = _leaf_val(lo[j], sm, uhalf)
            baseval[j] = np.uint8(v)
            if sub[j] == 0:
                mask_a |= ONE << v
            else:
                mask_b |= ONE << v
        if r0 == 0:
            stats[ST_SEEDS] += 1
        for r in range(r0, half):
            stats[ST_COMBOS] += 1
            if r == 0:
                mb = mask_b
            else:
                ur = U(r)
                mb = ((mask_b << ur) | (mask_b >> (uhalf - ur))) & full
            if (mask_a | mb) != full:
                continue
            if pool_len == cap:
                stats[ST_COMBOS] -= 1
                if r == 0:
                    stats[ST_SEEDS] -= 1
                return 3, ZERO, s, np.int64(r), pool_len
            stats[ST_SURJ] += 1
            code = s * uhalf + U(r)
            for j in range(n):
                if sub[j] == 0:
                    newv[j] = baseval[j]
                else:
                    v = np.int64(baseval[j]) + r
                    if v >= half:
                        v -= half
                    newv[j] = np.uint8(v)
            nlo, nhi, olo, ohi = _iso_masks(newv, n, half, cnt)
            status, z = _scan_pool(
                lo, newv, code, full, nlo, nhi,
                codes, vals, covs, isolo, isohi, pool_len,
                n, half, full, use_iso, True, max_code, stats,
                parent, csize, cedges, oldv, f_out,
                deg, exor, adj_off, adj_edge, used, stack)
            if status == 1:
                return 1, z, s, np.int64(r), pool_len
            if status == 2:
                return 2, ZERO, s, np.int64(r), pool_len
            codes[pool_len] = code
            covs[pool_len] = full
            for j in range(n):
                vals[pool_len, j] = newv[j]
            isolo[pool_len] = olo
            isohi[pool_len] = ohi
            pool_len += 1
        r0 = 0
        s += ONE


@njit(cache=True)
def search_rotation(lo, sub, n, half, use_iso, max_code, f_out, stats):
    codes = np.empty(32, np.uint64)
    vals = np.empty((32, n), np.uint8)
    covs = np.empty(32, np.uint64)
    isolo = np.empty(32, np.uint64)
    isohi = np.empty(32, np.uint64)
    pool_len = 0
    parent = np.empty(n, np.int64)
    csize = np.empty(n, np.int64)
    cedges = np.empty(n, np.int64)
    deg = np.empty(n, np.int64)
    exor = np.empty(n, np.int64)
    adj_off = np.empty(n + 1, np.int64)
    adj_edge = np.empty(2 * n, np.int64)
    used = np.empty(n, np.bool_)
    stack = np.empty(n, np.int64)
    oldv = np.empty(n, np.uint8)
    newv = np.empty(n, np.uint8)
    baseval = np.empty(n, np.uint8)
    cnt = np.empty(64, np.int64)
    s = ZERO
    r0 = np.int64(0)
    while True:
        status, z, s, r0, pool_len = _rotation_run(
            lo, sub, n, half, use_iso, max_code, f_out, stats,
            codes, vals, covs, isolo, isohi, pool_len, s, r0,
            parent, csize, cedges, deg, exor, adj_off, adj_edge,
            used, stack, oldv, newv, baseval, cnt)
        if status == 1:
            return z
        if status == 2:
            return FAIL
        codes, vals, covs, isolo, isohi = _grow_pool(
            codes, vals, covs, isolo, isohi, n)


@njit(cache=True, inline='always')
def _mask_scan(masks, mb, full, i):
    """First index >= i whose pattern ORed with mb covers the half range.

    Scans blocks of eight with a single branch per block so the compiler
    can vectorize the loads; the caller guarantees at least eight
    trailing sentinel (all-ones) slots, so block reads never leave the
    array and the scan always terminates.
    """
    while True:
        h0 = (masks[i] | mb) == full
        h1 = (masks[i + 1] | mb) == full
        h2 = (masks[i + 2] | mb) == full
        h3 = (masks[i + 3] | mb) == full
        h4 = (masks[i + 4] | mb) == full
        h5 = (masks[i + 5] | mb) == full
        h6 = (masks[i + 6] | mb) == full
        h7 = (masks[i + 7] | mb) == full
        if h0 | h1 | h2 | h3 | h4 | h5 | h6 | h7:
            break
        i += 8
    while (masks[i] | mb) != full:
        i += 1
    return i


@njit(cache=True)
def _quadsplit_run(lo, n, half, use_iso, max_code, f_out, stats,
                   codes, vals, covs, isolo, isohi, pool_len,
                   masks_a, masks_b, vals_a, vals_b,
                   idx_a, idx_b, n_a, n_b, new_a, new_b,
                   k, phase, i0,
                   parent, csize, cedges, deg, exor, adj_off, adj_edge,
                   used, stack, oldv, newv, cnt):
    """Scan seed shells from (k, phase, i0) until success or a full array.

    Phase 0 starts shell ``k`` fresh, phase 1 resumes its first pass at
    index ``i0`` (new subset-1 seed against stored subset-0 seeds),
    phase 2 resumes the second pass.  The shell's own hashes are cheap
    to recompute, so growth aborts carry no per-key state.  Returns
    (status, z, k, phase, i, pool_len): 1 found, 2 budget exhausted,
    3 candidate pool full, 4 seed arrays full (capacity ``k`` shells).
    """
    uhalf = U(half)
    full = _full_mask(half)
    cap = codes.size
    cap_s = vals_a.shape[0]
    while True:
        if phase == 0:
            code_min = U(k) * U(k)
            if code_min > ONE \
                    and code_min * (code_min - ONE) // TWO > max_code:
                return 2, ZERO, k, np.int64(0), np.int64(0), pool_len
            if k == cap_s:
                return 4, ZERO, k, np.int64(0), np.int64(0), pool_len
        sm = _splitmix64(U(k))
        mask_b_new = ZERO
        for t in range(n_b):
            v = _leaf_val(lo[idx_b[t]], sm, uhalf)
            new_b[t] = np.uint8(v)
            mask_b_new |= ONE << v
        mask_a_new = ZERO
        for t in range(n_a):
            v = _leaf_val(lo[idx_a[t]], sm, uhalf)
            new_a[t] = np.uint8(v)
            mask_a_new |= ONE << v
        if phase == 0:
            stats[ST_SEEDS] += 2
        # pass 1: old A seeds x against the new B seed k, codes k*k + x
        if phase <= 1:
            for p in range(8):
                masks_a[k + p] = full  # sentinel block
            i = i0 if phase == 1 else np.int64(0)
            while True:
                i = _mask_scan(masks_a, mask_b_new, full, i)
                if i >= k:
                    stats[ST_COMBOS] += i + 1
                    break
                if pool_len == cap:
                    return 3, ZERO, k, np.int64(1), i, pool_len
                stats[ST_COMBOS] += i + 1
                stats[ST_SURJ] += 1
                code = U(k) * U(k) + U(i)
                for t in range(n_a):
                    newv[idx_a[t]] = vals_a[i, t]
                for t in range(n_b):
                    newv[idx_b[t]] = new_b[t]
                nlo, nhi, olo, ohi = _iso_masks(newv, n, half, cnt)
                status, z = _scan_pool(
                    lo, newv, code, full, nlo, nhi,
                    codes, vals, covs, isolo, isohi, pool_len,
                    n, half, full, use_iso, True, max_code, stats,
                    parent, csize, cedges, oldv, f_out,
                    deg, exor, adj_off, adj_edge, used, stack)
                if status == 1:
                    return 1, z, k, np.int64(1), i, pool_len
                if status == 2:
                    return 2, ZERO, k, np.int64(1), i, pool_len
                codes[pool_len] = code
                covs[pool_len] = full
                for j in range(n):
                    vals[pool_len, j] = newv[j]
                isolo[pool_len] = olo
                isohi[pool_len] = ohi
                pool_len += 1
                i += 1
            masks_b[k] = mask_b_new
            for t in range(n_b):
                vals_b[k, t] = new_b[t]
        # pass 2: the new A seed k against B seeds y <= k, codes k*k + k + y
        for p in range(8):
            masks_b[k + 1 + p] = full  # sentinel block
        i = i0 if phase == 2 else np.int64(0)
        while True:
            i = _mask_scan(masks_b, mask_a_new, full, i)
            if i >= k + 1:
                stats[ST_COMBOS] += i + 1
                break
            if pool_len == cap:
                return 3, ZERO, k, np.int64(2), i, pool_len
            stats[ST_COMBOS] += i + 1
            stats[ST_SURJ] += 1
            code = U(k) * U(k) + U(k) + U(i)
            for t in range(n_a):
                newv[idx_a[t]] = new_a[t]
            for t in range(n_b):
                newv[idx_b[t]] = vals_b[i, t]
            nlo, nhi, olo, ohi = _iso_masks(newv, n, half, cnt)
            status, z = _scan_pool(
                lo, newv, code, full, nlo, nhi,
                codes, vals, covs, isolo, isohi, pool_len,
                n, half, full, use_iso, True, max_code, stats,
                parent, csize, cedges, oldv, f_out,
                deg, exor, adj_off, adj_edge, used, stack)
            if status == 1:
                return 1, z, k, np.int64(2), i, pool_len
            if status == 2:
                return 2, ZERO, k, np.int64(2), i, pool_len
            codes[pool_len] = code
            covs[pool_len] = full
            for j in range(n):
                vals[pool_len, j] = newv[j]
            isolo[pool_len] = olo
            isohi[pool_len] = ohi
            pool_len += 1
            i += 1
        masks_a[k] = mask_a_new
        for t in range(n_a):
            vals_a[k, t] = new_a[t]
        k += 1
        phase = np.int64(0)


@njit(cache=True)
def search_quadsplit(lo, sub, n, half, use_iso, max_code, f_out, stats):
    n_a = 0
    for j in range(n):
        if sub[j] == 0:
            n_a += 1
    n_b = n - n_a
    idx_a = np.empty(max(n_a, 1), np.int64)
    idx_b = np.empty(max(n_b, 1), np.int64)
    ia = 0
    ib = 0
    for j in range(n):
        if sub[j] == 0:
            idx_a[ia] = j
            ia += 1
        else:
            idx_b[ib] = j
            ib += 1
    cap_s = 64
    masks_a = np.empty(cap_s + 8, np.uint64)  # +8: sentinel block
    masks_b = np.empty(cap_s + 8, np.uint64)
    vals_a = np.empty((cap_s, max(n_a, 1)), np.uint8)
    vals_b = np.empty((cap_s, max(n_b, 1)), np.uint8)
    new_a = np.empty(max(n_a, 1), np.uint8)
    new_b = np.empty(max(n_b, 1), np.uint8)
    codes = np.empty(32, np.uint64)
    vals = np.empty((32, n), np.uint8)
    covs = np.empty(32, np.uint64)
    isolo = np.empty(32, np.uint64)
    isohi = np.empty(32, np.uint64)
    pool_len = 0
    parent = np.empty(n, np.int64)
    csize = np.empty(n, np.int64)
    cedges = np.empty(n, np.int64)
    deg = np.empty(n, np.int64)
    exor = np.empty(n, np.int64)
    adj_off = np.empty(n + 1, np.int64)
    adj_edge = np.empty(2 * n, np.int64)
    used = np.empty(n, np.bool_)
    stack = np.empty(n, np.int64)
    oldv = np.empty(n, np.uint8)
    newv = np.empty(n, np.uint8)
    cnt = np.empty(64, np.int64)
    k = np.int64(0)
    phase = np.int64(0)
    i0 = np.int64(0)
    while True:
        status, z, k, phase, i0, pool_len = _quadsplit_run(
            lo, n, half, use_iso, max_code, f_out, stats,
            codes, vals, covs, isolo, isohi, pool_len,
            masks_a, masks_b, vals_a, vals_b,
            idx_a, idx_b, n_a, n_b, new_a, new_b,
            k, phase, i0,
            parent, csize, cedges, deg, exor, adj_off, adj_edge,
            used, stack, oldv, newv, cnt)
        if status == 1:
            return z
        if status == 2:
            return FAIL
        if status == 3:
            codes, vals, covs, isolo, isohi = _grow_pool(
                codes, vals, covs, isolo, isohi, n)
        else:
            ncap = cap_s * 2
            tm = np.empty(ncap + 8, np.uint64)
            tm[:cap_s] = masks_a[:cap_s]
            masks_a = tm
            tm = np.empty(ncap + 8, np.uint64)
            tm[:cap_s] = masks_b[:cap_s]
            masks_b = tm
            tv = np.empty((ncap, max(n_a, 1)), np.uint8)
            tv[:cap_s] = vals_a
            vals_a = tv
            tv = np.empty((ncap, max(n_b, 1)), np.uint8)
            tv[:cap_s] = vals_b
            vals_b = tv
            cap_s = ncap


@njit(cache=True)
def qs_enumerate(lo, sub, n, half, num_seeds, out_codes):
    """Emit quad-split surjective candidate codes, same scan as the engine.

    Enumerates seed shells 0..num_seeds-1 without pair testing; returns
    the number of codes written (stream is in ascending pair_s order).
    """
    uhalf = U(half)
    full = _full_mask(half)
    n_a = 0
    for j in range(n):
        if sub[j] == 0:
            n_a += 1
    n_b = n - n_a
    idx_a = np.empty(max(n_a, 1), np.int64)
    idx_b = np.empty(max(n_b, 1), np.int64)
    ia = 0
    ib = 0
    for j in range(n):
        if sub[j] == 0:
            idx_a[ia] = j
            ia += 1
        else:
            idx_b[ib] = j
            ib += 1
    masks_a = np.empty(num_seeds + 1, np.uint64)
    masks_b = np.empty(num_seeds + 2, np.uint64)
    count = 0
    for k in range(num_seeds):
        sm = _splitmix64(U(k))
        mask_b_new = ZERO
        for t in range(n_b):
            mask_b_new |= ONE << _leaf_val(lo[idx_b[t]], sm, uhalf)
        mask_a_new = ZERO
        for t in range(n_a):
            mask_a_new |= ONE << _leaf_val(lo[idx_a[t]], sm, uhalf)
        masks_a[k] = full  # sentinel
        i = 0
        while True:
            while (masks_a[i] | mask_b_new) != full:
                i += 1
            if i >= k:
                break
            if count < out_codes.size:
                out_codes[count] = U(k) * U(k) + U(i)
            count += 1
            i += 1
        masks_b[k] = mask_b_new
        masks_b[k + 1] = full  # sentinel
        i = 0
        while True:
            while (masks_b[i] | mask_a_new) != full:
                i += 1
            if i >= k + 1:
                break
            if count < out_codes.size:
                out_codes[count] = U(k) * U(k) + U(k) + U(i)
            count += 1
            i += 1
        masks_a[k] = mask_a_new
    return count


# ---------------------------------------------------------------------------
# 1-bit retrieval (3-uniform XOR peeling)


@njit(cache=True)
def _ret_pos(hi, lo, seed, seg):
    """Three table positions of one key, one per equal-size segment.

    Segmenting guarantees the positions are pairwise distinct, which
    keeps the peeling bookkeeping simple.  seg must fit in 32 bits.
    """
    h = _mix64(lo ^ _splitmix64(seed)) + _mix64(hi ^ _splitmix64(seed ^ GOLDEN))
    p0 = _mulhi_small(_mix64(h), seg)
    p1 = seg + _mulhi_small(_mix64(h + GOLDEN), seg)
    p2 = TWO * seg + _mulhi_small(_mix64(h + TWO * GOLDEN), seg)
    return p0, p1, p2


@njit(cache=True)
def _get_bit(table, p):
    return np.int64((table[p >> U(6)] >> (p & U(63))) & ONE)


@njit(cache=True)
def _flip_bit(table, p):
    table[p >> U(6)] ^= ONE << (p & U(63))


@njit(cache=True)
def retrieval_build(his, los, values, seed, m, deg, xsum, pstack,
                    order_e, order_p, table):
    """Solve the XOR system by peeling; True on success.

    Repeatedly removes a position touched by exactly one remaining key
    (tracked with degree counters and xor-of-key-indices), then assigns
    table bits in reverse removal order so every equation holds.
    """
    n = his.size
    im = np.int64(m)
    seg = m // U(3)
    for p in range(im):
        deg[p] = 0
        xsum[p] = 0
    for e in range(n):
        p0, p1, p2 = _ret_pos(his[e], los[e], seed, seg)
        deg[np.int64(p0)] += 1
        xsum[np.int64(p0)] ^= e
        deg[np.int64(p1)] += 1
        xsum[np.int64(p1)] ^= e
        deg[np.int64(p2)] += 1
        xsum[np.int64(p2)] ^= e
    top = 0
    for p in range(im):
        if deg[p] == 1:
            pstack[top] = p
            top += 1
    cnt = 0
    while top > 0:
        top -= 1
        p = pstack[top]
        if deg[p] != 1:
            continue
        e = xsum[p]
        order_e[cnt] = e
        order_p[cnt] = p
        cnt += 1
        p0, p1, p2 = _ret_pos(his[e], los[e], seed, seg)
        for q64 in (p0, p1, p2):
            q = np.int64(q64)
            deg[q] -= 1
            xsum[q] ^= e
            if deg[q] == 1:
                pstack[top] = q
                top += 1
    if cnt != n:
        return False
    for i in range(cnt - 1, -1, -1):
        e = order_e[i]
        p = U(order_p[i])
        p0, p1, p2 = _ret_pos(his[e], los[e], seed, seg)
        cur = _get_bit(table, p0) ^ _get_bit(table, p1) ^ _get_bit(table, p2)
        if cur != np.int64(values[e]):
            _flip_bit(table, p)
    return True


@njit(cache=True)
def retrieval_query_many(his, los, seed, m, table, out):
    seg = m // U(3)
    for e in range(his.size):
        p0, p1, p2 = _ret_pos(his[e], los[e], seed, seg)
        out[e] = np.uint8(
            _get_bit(table, p0) ^ _get_bit(table, p1) ^ _get_bit(table, p2))


# ---------------------------------------------------------------------------
# batch query over the full index


@njit(cache=True)
def mphf_query_many(his, los, num_buckets, offs,
                    sm0a, sm0b, rot0, sm1a, sm1b, rot1,
                    rseed, rm, rtable, out):
    """Evaluate many keys against pre-decoded per-bucket parameters.

    ``sm{bit}{subset}`` hold the splitmix-expanded seed per bucket for
    each retrieval-bit side and key subset; ``rot*`` hold the cyclic
    shift applied to subset-1 keys (zero for non-rotation engines).
    Out-of-set keys may land in empty buckets; results are clamped into
    [0, N).
    """
    n_keys = his.size
    total = offs[np.int64(num_buckets)]
    seg = rm // U(3)
    for i in range(n_keys):
        hi = his[i]
        lo = los[i]
        b = np.int64(_mulhi_small(hi, num_buckets))
        k = offs[b + 1] - offs[b]
        if k <= 0:
            out[i] = offs[b] if offs[b] < total else total - 1
            continue
        half = (k + 1) // 2
        p0, p1, p2 = _ret_pos(hi, lo, rseed, seg)
        bit = _get_bit(rtable, p0) ^ _get_bit(rtable, p1) ^ _get_bit(rtable, p2)
        t = np.int64(lo >> U(63))
        if bit == 0:
            sm = sm0a[b] if t == 0 else sm0b[b]
            rr = np.int64(rot0[b])
            off = np.int64(0)
        else:
            sm = sm1a[b] if t == 0 else sm1b[b]
            rr = np.int64(rot1[b])
            off = k - half
        v = np.int64(_mulhi_small(_mix64(lo ^ sm), U(half)))
        if t == 1 and rr != 0:
            v += rr
            if v >= half:
                v -= half
        out[i] = offs[b] + off + v


# ---------------------------------------------------------------------------
# benchmark drivers: run many leaf searches inside one compiled call so
# the measurement is not dominated by the Python/JIT call boundary


@njit(cache=True)
def bench_basic(los, n, half, max_code, f_out, stats, zs):
    for rep in range(los.shape[0]):
        zs[rep] = search_basic(los[rep], n, half, True, True, True,
                               max_code, f_out[rep], stats)


@njit(cache=True)
def bench_rotation(los, subs, n, half, max_code, f_out, stats, zs):
    for rep in range(los.shape[0]):
        zs[rep] = search_rotation(los[rep], subs[rep], n, half, True,
                                  max_code, f_out[rep], stats)


@njit(cache=True)
def bench_quadsplit(los, subs, n, half, max_code, f_out, stats, zs):
    for rep in range(los.shape[0]):
        zs[rep] = search_quadsplit(los[rep], subs[rep], n, half, True,
                                   max_code, f_out[rep], stats)
