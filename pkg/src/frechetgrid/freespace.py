"""Free-space diagram machinery shared by the Fréchet decision, the grid-path
searches and the subtrajectory extractor.

The diagram is laid out with the long curve ``P`` on the vertical axis and
the (short) curve ``C`` on the horizontal axis.  A *column* is the vertical
line through one vertex ``c_j`` of ``C``; along it the free space is stored
as one closed interval per edge of ``P`` (parameters in ``[0, 1]``) together
with a boolean per vertex of ``P`` telling whether that vertex is free.

All functions broadcast over leading batch axes so the same code serves a
single decision and a vectorised expansion over many candidate grid points.
Empty intervals are encoded as ``lo > hi``.
"""

import numpy as np

EMPTY_LO = 2.0
EMPTY_HI = -1.0

# relative slack under which a negative discriminant counts as tangency
TANGENCY_RTOL = 1e-12


def point_dist(a, b):
    diff = a - b
    return np.sqrt((diff * diff).sum(axis=-1))


def nonempty(lo, hi):
    return lo <= hi


def segment_ball_interval(a, b, c, r):
    """Parameters ``u`` in [0, 1] with ``|a + u (b - a) - c| <= r``.

    Endpoint membership is decided by direct distance comparison so that two
    segments sharing a vertex agree on whether that vertex is free.
    """
    a, b, c = np.broadcast_arrays(a, b, c)
    v = b - a
    w = a - c
    qa = (v * v).sum(axis=-1)
    qb = 2.0 * (w * v).sum(axis=-1)
    qc = (w * w).sum(axis=-1) - r * r
    a_free = point_dist(a, c) <= r
    b_free = point_dist(b, c) <= r

    disc = qb * qb - 4.0 * qa * qc
    tol = TANGENCY_RTOL * (qb * qb + np.abs(4.0 * qa * qc))
    disc = np.where((disc < 0.0) & (disc >= -tol), 0.0, disc)
    with np.errstate(invalid="ignore", divide="ignore"):
        root = np.sqrt(disc)
        u1 = (-qb - root) / (2.0 * qa)
        u2 = (-qb + root) / (2.0 * qa)
    interior = (qa > 0.0) & (disc >= 0.0) & (u1 <= 1.0) & (u2 >= 0.0) & (u1 <= u2)
    u1 = np.where(interior, np.clip(u1, 0.0, 1.0), EMPTY_LO)
    u2 = np.where(interior, np.clip(u2, 0.0, 1.0), EMPTY_HI)

    lo = np.where(a_free, 0.0, u1)
    hi = np.where(b_free, 1.0, u2)
    # a free endpoint is in the interval even if the roots disagree by an ulp
    hi = np.where(a_free & ~b_free, np.maximum(hi, 0.0), hi)
    lo = np.where(b_free & ~a_free, np.minimum(lo, 1.0), lo)
    both = a_free & b_free
    lo = np.where(both, 0.0, lo)
    hi = np.where(both, 1.0, hi)
    return lo, hi


def as_polyline(P):
    """Vertices of ``P`` with a single vertex doubled so it has one edge."""
    P = np.asarray(P, dtype=float)
    if len(P) == 1:
        P = np.concatenate([P, P])
    return P


def column(P, c, r):
    """Free space on the column through point(s) ``c``.

    Returns ``(V, lo, hi)``: vertex flags of shape ``(..., n)`` and edge
    intervals of shape ``(..., n - 1)``.
    """
    c = np.asarray(c, dtype=float)[..., None, :]
    V = point_dist(P, c) <= r
    lo, hi = segment_ball_interval(P[:-1], P[1:], c, r)
    return V, lo, hi


def edge_rows(P, c0, c1, r):
    """Free intervals along the edge ``c0 -> c1`` for every vertex row of P."""
    c0 = np.asarray(c0, dtype=float)[..., None, :]
    c1 = np.asarray(c1, dtype=float)[..., None, :]
    return segment_ball_interval(c0, c1, P, r)


def close_upward(s_lo, s_hi, V, L_lo, L_hi):
    """Everything reachable on one column from the start set ``s`` by moving
    up through free space.  ``s`` must lie inside the free intervals."""
    shape = np.broadcast_shapes(s_lo.shape, L_lo.shape)
    out_lo = np.empty(shape)
    out_hi = np.empty(shape)
    carry = np.zeros(shape[:-1], dtype=bool)
    for i in range(shape[-1]):
        s_ne = nonempty(s_lo[..., i], s_hi[..., i])
        lo = np.where(
            carry,
            L_lo[..., i],
            np.where(s_ne, np.maximum(s_lo[..., i], L_lo[..., i]), EMPTY_LO),
        )
        hi = np.where(carry | s_ne, L_hi[..., i], EMPTY_HI)
        out_lo[..., i] = lo
        out_hi[..., i] = hi
        carry = nonempty(lo, hi) & V[..., i + 1]
    return out_lo, out_hi


def start_at_first_vertex(V, L_lo, L_hi):
    s_lo = np.full(L_lo.shape, EMPTY_LO)
    s_hi = np.full(L_hi.shape, EMPTY_HI)
    s_lo[..., 0] = np.where(V[..., 0], 0.0, EMPTY_LO)
    s_hi[..., 0] = np.where(V[..., 0], 0.0, EMPTY_HI)
    return close_upward(s_lo, s_hi, V, L_lo, L_hi)


def forward_step(R_lo, R_hi, V0, B_lo, B_hi, V1, L1_lo, L1_hi):
    """Propagate reachability from one column to the next through the row of
    cells spanned by one edge of ``C``.

    ``R`` is the reachable set on the current column (``V0`` its vertex
    flags), ``B`` the free intervals on the horizontal cell boundaries
    (one per vertex of ``P``), ``L1``/``V1`` the free space on the next
    column.
    """
    shape = np.broadcast_shapes(R_lo.shape, L1_lo.shape, B_lo.shape[:-1] + (1,))
    out_lo = np.empty(shape)
    out_hi = np.empty(shape)
    entry = nonempty(R_lo[..., 0], R_hi[..., 0]) & (R_lo[..., 0] == 0.0) & V0[..., 0]
    br_lo = np.where(entry, B_lo[..., 0], EMPTY_LO)
    br_hi = np.where(entry, B_hi[..., 0], EMPTY_HI)
    for i in range(shape[-1]):
        lr_ne = nonempty(R_lo[..., i], R_hi[..., i])
        br_ne = nonempty(br_lo, br_hi)
        out_lo[..., i] = np.where(
            br_ne,
            L1_lo[..., i],
            np.where(lr_ne, np.maximum(L1_lo[..., i], R_lo[..., i]), EMPTY_LO),
        )
        out_hi[..., i] = np.where(br_ne | lr_ne, L1_hi[..., i], EMPTY_HI)
        top_lo = np.where(
            lr_ne,
            B_lo[..., i + 1],
            np.where(br_ne, np.maximum(B_lo[..., i + 1], br_lo), EMPTY_LO),
        )
        top_hi = np.where(lr_ne | br_ne, B_hi[..., i + 1], EMPTY_HI)
        br_lo, br_hi = top_lo, top_hi
    return out_lo, out_hi


def backward_step(K_lo, K_hi, V1, B_lo, B_hi, V0, L0_lo, L0_hi):
    """Mirror of :func:`forward_step`: given the points of the next column
    from which the target is reachable, return those of the current column."""
    shape = np.broadcast_shapes(K_lo.shape, L0_lo.shape, B_lo.shape[:-1] + (1,))
    out_lo = np.empty(shape)
    out_hi = np.empty(shape)
    last = shape[-1] - 1
    entry = (
        nonempty(K_lo[..., last], K_hi[..., last])
        & (K_hi[..., last] == 1.0)
        & V1[..., last + 1]
    )
    tr_lo = np.where(entry, B_lo[..., last + 1], EMPTY_LO)
    tr_hi = np.where(entry, B_hi[..., last + 1], EMPTY_HI)
    for i in range(last, -1, -1):
        rr_ne = nonempty(K_lo[..., i], K_hi[..., i])
        tr_ne = nonempty(tr_lo, tr_hi)
        out_lo[..., i] = np.where(tr_ne | rr_ne, L0_lo[..., i], EMPTY_LO)
        out_hi[..., i] = np.where(
            tr_ne,
            L0_hi[..., i],
            np.where(rr_ne, np.minimum(L0_hi[..., i], K_hi[..., i]), EMPTY_HI),
        )
        bot_lo = np.where(rr_ne | tr_ne, B_lo[..., i], EMPTY_LO)
        bot_hi = np.where(
            rr_ne,
            B_hi[..., i],
            np.where(tr_ne, np.minimum(B_hi[..., i], tr_hi), EMPTY_HI),
        )
        tr_lo, tr_hi = bot_lo, bot_hi
    return out_lo, out_hi


def reaches_end(R_lo, R_hi, V):
    """True where the top vertex of the column is reachable."""
    return nonempty(R_lo[..., -1], R_hi[..., -1]) & V[..., -1]


def decide(P, Q, r):
    """Continuous Fréchet decision ``d_F(P, Q) <= r`` by column sweep."""
    P = as_polyline(P)
    Q = np.asarray(Q, dtype=float)
    V, lo, hi = column(P, Q[0], r)
    R_lo, R_hi = start_at_first_vertex(V, lo, hi)
    for j in range(1, len(Q)):
        if not nonempty(R_lo, R_hi).any():
            return False
        B_lo, B_hi = edge_rows(P, Q[j - 1], Q[j], r)
        V1, lo1, hi1 = column(P, Q[j], r)
        R_lo, R_hi = forward_step(R_lo, R_hi, V, B_lo, B_hi, V1, lo1, hi1)
        V = V1
    return bool(reaches_end(R_lo, R_hi, V))


def discrete_init(F):
    """Reachability of the first column of the discrete coupling grid."""
    out = np.empty(F.shape, dtype=bool)
    acc = F[..., 0]
    out[..., 0] = acc
    for i in range(1, F.shape[-1]):
        acc = acc & F[..., i]
        out[..., i] = acc
    return out


def discrete_step(prev, F):
    shape = np.broadcast_shapes(prev.shape, F.shape)
    out = np.empty(shape, dtype=bool)
    cur = F[..., 0] & prev[..., 0]
    out[..., 0] = cur
    for i in range(1, shape[-1]):
        cur = F[..., i] & (prev[..., i] | prev[..., i - 1] | cur)
        out[..., i] = cur
    return out


# --- grid-path search -------------------------------------------------------

WHOLE = "whole"
SUB = "sub"
DISCRETE = "discrete"

_CHUNK = 1 << 16


def _chunks(n_states, n_cand):
    step = max(1, _CHUNK // max(1, n_cand))
    for s in range(0, n_states, step):
        yield s, min(n_states, s + step)


def matching_paths(P, cand, r, k, mode):
    """All length-``k`` sequences over the candidate points ``cand`` whose
    polyline passes the free-space test against ``P`` at radius ``r``.

    ``mode`` selects the test: ``WHOLE`` (continuous Fréchet between P and
    the sequence), ``DISCRETE`` (discrete Fréchet) or ``SUB`` (some
    subcurve of P is within continuous Fréchet distance ``r``).  Prefixes
    whose reachable set is empty are pruned, which is exact because
    reachability only shrinks as the sequence grows.

    Returns an integer array of shape ``(count, k)`` of candidate indices,
    sorted lexicographically.
    """
    cand = np.asarray(cand, dtype=float)
    M = len(cand)
    if M == 0:
        return np.empty((0, k), dtype=np.int64)
    if mode == DISCRETE:
        return _discrete_paths(np.asarray(P, dtype=float), cand, r, k)
    P = as_polyline(P)
    V, L_lo, L_hi = column(P, cand, r)
    if mode == WHOLE:
        R_lo, R_hi = start_at_first_vertex(V, L_lo, L_hi)
        alive = nonempty(R_lo, R_hi).any(axis=-1)
    else:
        R_lo, R_hi = L_lo.copy(), L_hi.copy()
        alive = nonempty(R_lo, R_hi).any(axis=-1)
    idx = np.flatnonzero(alive)
    if k == 1:
        if mode == WHOLE:
            ok = reaches_end(R_lo[idx], R_hi[idx], V[idx])
            idx = idx[ok]
        return idx[:, None].astype(np.int64)

    # middle/last vertices must see some free space at all
    usable = np.flatnonzero(nonempty(L_lo, L_hi).any(axis=-1) | V.any(axis=-1))
    u_pts = cand[usable]
    uV, uL_lo, uL_hi = V[usable], L_lo[usable], L_hi[usable]

    prefixes = idx[:, None]
    st_lo, st_hi, st_V = R_lo[idx], R_hi[idx], V[idx]
    for level in range(1, k):
        final = level == k - 1
        new_pref, new_lo, new_hi, new_V = [], [], [], []
        for a, b in _chunks(len(prefixes), len(usable)):
            last = cand[prefixes[a:b, -1]]
            B_lo, B_hi = edge_rows(P, last[:, None, :], u_pts[None, :, :], r)
            o_lo, o_hi = forward_step(
                st_lo[a:b, None, :], st_hi[a:b, None, :], st_V[a:b, None, :],
                B_lo, B_hi,
                uV[None], uL_lo[None], uL_hi[None],
            )
            if final and mode == WHOLE:
                keep = reaches_end(o_lo, o_hi, uV[None])
            else:
                keep = nonempty(o_lo, o_hi).any(axis=-1)
            si, ci = np.nonzero(keep)
            new_pref.append(np.column_stack([prefixes[a:b][si], usable[ci]]))
            if not final:
                new_lo.append(o_lo[si, ci])
                new_hi.append(o_hi[si, ci])
                new_V.append(uV[ci])
        prefixes = np.concatenate(new_pref) if new_pref else np.empty((0, level + 1), np.int64)
        if len(prefixes) == 0:
            return np.empty((0, k), dtype=np.int64)
        if not final:
            st_lo = np.concatenate(new_lo)
            st_hi = np.concatenate(new_hi)
            st_V = np.concatenate(new_V)
    order = np.lexsort(prefixes.T[::-1])
    return prefixes[order].astype(np.int64)


def _discrete_paths(P, cand, r, k):
    F = point_dist(P[None, :, :], cand[:, None, :]) <= r
    first = np.flatnonzero(F[:, 0])
    init = discrete_init(F[first])
    if k == 1:
        return first[init[:, -1]][:, None].astype(np.int64)
    usable = np.flatnonzero(F.any(axis=-1))
    uF = F[usable]
    alive = init.any(axis=-1)
    prefixes = first[alive][:, None]
    states = init[alive]
    for level in range(1, k):
        final = level == k - 1
        new_pref, new_states = [], []
        for a, b in _chunks(len(prefixes), len(usable)):
            out = discrete_step(states[a:b, None, :], uF[None])
            keep = out[..., -1] if final else out.any(axis=-1)
            si, ci = np.nonzero(keep)
            new_pref.append(np.column_stack([prefixes[a:b][si], usable[ci]]))
            if not final:
                new_states.append(out[si, ci])
        prefixes = np.concatenate(new_pref) if new_pref else np.empty((0, level + 1), np.int64)
        if len(prefixes) == 0:
            return np.empty((0, k), dtype=np.int64)
        if not final:
            states = np.concatenate(new_states)
    order = np.lexsort(prefixes.T[::-1])
    return prefixes[order].astype(np.int64)
