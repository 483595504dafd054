"""Hot loops over finite-field lookup tables.

Every kernel exists twice: a numba ``@njit`` version and a vectorised numpy
version with the same signature and the same output.  The public names at the
bottom of the module are bound to one or the other according to
``_config.USE_NUMBA``; both variants stay importable (``*_numpy`` /
``*_numba``) so tests and ``benchmarks/bench_kernels.py`` can compare them.

Field elements are integer encodings; ``add_t``/``mul_t`` are the full
addition and multiplication tables of the field, ``neg_t``/``inv_t`` the unary
tables (``inv_t[0]`` is unused).
"""
import numpy as np

from . import _config

# ---------------------------------------------------------------------------
# numpy variants
# ---------------------------------------------------------------------------


def series_mul_numpy(a, b, n, add_t, mul_t):
    """First ``n`` coefficients of the product of two coefficient arrays."""
    out = np.zeros(n, dtype=np.int64)
    lb = min(len(b), n)
    for i in range(min(len(a), n)):
        ai = a[i]
        if ai == 0:
            continue
        m = min(lb, n - i)
        out[i:i + m] = add_t[out[i:i + m], mul_t[ai, b[:m]]]
    return out


def row_reduce_numpy(M, add_t, mul_t, inv_t, neg_t):
    """Reduced row echelon form. Returns ``(R, pivots)`` with pivots ascending."""
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots = []
    r = 0
    for col in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, col])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = mul_t[inv_t[R[r, col]], R[r]]
        f = neg_t[R[:, col]]
        f[r] = 0
        R = add_t[R, mul_t[f[:, None], R[r][None, :]]]
        pivots.append(col)
        r += 1
    return R, np.array(pivots, dtype=np.int64)


def _normalize_rows_numpy(P, inv_t, mul_t):
    # scale each projective row so its first nonzero coordinate is 1
    first = np.where(P[:, 0] != 0, P[:, 0], np.where(P[:, 1] != 0, P[:, 1], P[:, 2]))
    s = inv_t[first]
    return mul_t[s[:, None], P]


def stabilizer_scan_numpy(col1s, col2s, col3s, test_pts, on_curve, add_t, mul_t, inv_t, neg_t, size):
    """Matrices ``[c1 c2 c3]`` that are invertible and send every test point onto the curve.

    ``on_curve`` is indexed by ``X*size**2 + Y*size + Z`` of a normalised
    projective point.  Returns an ``(k, 9)`` array of row-major entries.
    """
    found = []
    nn = size * size
    for c1 in col1s:
        for c2 in col2s:
            alive = np.arange(len(col3s))
            for pt in test_pts:
                if len(alive) == 0:
                    break
                c3 = col3s[alive]
                img = np.empty((len(alive), 3), dtype=np.int64)
                for r in range(3):
                    partial = add_t[mul_t[pt[0], c1[r]], mul_t[pt[1], c2[r]]]
                    img[:, r] = add_t[partial, mul_t[pt[2], c3[:, r]]]
                nz = (img != 0).any(axis=1)
                alive = alive[nz]
                img = _normalize_rows_numpy(img[nz], inv_t, mul_t)
                idx = img[:, 0] * nn + img[:, 1] * size + img[:, 2]
                alive = alive[on_curve[idx]]
            if len(alive) == 0:
                continue
            c3 = col3s[alive]
            a, b, c = c1[0], c2[0], c3[:, 0]
            d, e, f = c1[1], c2[1], c3[:, 1]
            g, h, i = c1[2], c2[2], c3[:, 2]
            # det = a(ei - fh) - b(di - fg) + c(dh - eg)
            t1 = mul_t[a, add_t[mul_t[e, i], neg_t[mul_t[f, h]]]]
            t2 = mul_t[b, add_t[mul_t[d, i], neg_t[mul_t[f, g]]]]
            t3 = mul_t[c, add_t[mul_t[d, h], neg_t[mul_t[e, g]]]]
            det = add_t[add_t[t1, neg_t[t2]], t3]
            for k in np.nonzero(det != 0)[0]:
                found.append((a, b, c[k], d, e, f[k], g, h, i[k]))
    if not found:
        return np.zeros((0, 9), dtype=np.int64)
    return np.array(found, dtype=np.int64)


# ---------------------------------------------------------------------------
# numba variants
# ---------------------------------------------------------------------------

if _config.HAVE_NUMBA:
    from numba import njit

    @njit(**_config.numba_default)
    def series_mul_numba(a, b, n, add_t, mul_t):
        out = np.zeros(n, dtype=np.int64)
        la = min(len(a), n)
        lb = min(len(b), n)
        for i in range(la):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(min(lb, n - i)):
                bj = b[j]
                if bj != 0:
                    out[i + j] = add_t[out[i + j], mul_t[ai, bj]]
        return out

    @njit(**_config.numba_default)
    def _row_reduce_core(R, add_t, mul_t, inv_t, neg_t):
        rows, cols = R.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        npiv = 0
        r = 0
        for col in range(cols):
            if r == rows:
                break
            piv = -1
            for k in range(r, rows):
                if R[k, col] != 0:
                    piv = k
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = R[r, j]
                    R[r, j] = R[piv, j]
                    R[piv, j] = tmp
            s = inv_t[R[r, col]]
            for j in range(cols):
                R[r, j] = mul_t[s, R[r, j]]
            for k in range(rows):
                if k == r:
                    continue
                f = R[k, col]
                if f == 0:
                    continue
                nf = neg_t[f]
                for j in range(col, cols):
                    if R[r, j] != 0:
                        R[k, j] = add_t[R[k, j], mul_t[nf, R[r, j]]]
            pivots[npiv] = col
            npiv += 1
            r += 1
        return pivots[:npiv]

    def row_reduce_numba(M, add_t, mul_t, inv_t, neg_t):
        R = np.array(M, dtype=np.int64, copy=True)
        if R.size == 0:
            return R, np.zeros(0, dtype=np.int64)
        pivots = _row_reduce_core(R, add_t, mul_t, inv_t, neg_t)
        return R, pivots

    @njit(**_config.numba_default)
    def _scan_core(col1s, col2s, col3s, test_pts, on_curve, add_t, mul_t, inv_t, neg_t, size, out):
        nn = size * size
        count = 0
        img = np.empty(3, dtype=np.int64)
        for u in range(col1s.shape[0]):
            for v in range(col2s.shape[0]):
                for w in range(col3s.shape[0]):
                    ok = True
                    for t in range(test_pts.shape[0]):
                        X = test_pts[t, 0]
                        Y = test_pts[t, 1]
                        Z = test_pts[t, 2]
                        for r in range(3):
                            acc = add_t[mul_t[X, col1s[u, r]], mul_t[Y, col2s[v, r]]]
                            img[r] = add_t[acc, mul_t[Z, col3s[w, r]]]
                        if img[0] != 0:
                            s = inv_t[img[0]]
                        elif img[1] != 0:
                            s = inv_t[img[1]]
                        elif img[2] != 0:
                            s = inv_t[img[2]]
                        else:
                            ok = False
                            break
                        idx = mul_t[s, img[0]] * nn + mul_t[s, img[1]] * size + mul_t[s, img[2]]
                        if not on_curve[idx]:
                            ok = False
                            break
                    if not ok:
                        continue
                    a = col1s[u, 0]
                    b = col2s[v, 0]
                    c = col3s[w, 0]
                    d = col1s[u, 1]
                    e = col2s[v, 1]
                    f = col3s[w, 1]
                    g = col1s[u, 2]
                    h = col2s[v, 2]
                    i = col3s[w, 2]
                    t1 = mul_t[a, add_t[mul_t[e, i], neg_t[mul_t[f, h]]]]
                    t2 = mul_t[b, add_t[mul_t[d, i], neg_t[mul_t[f, g]]]]
                    t3 = mul_t[c, add_t[mul_t[d, h], neg_t[mul_t[e, g]]]]
                    det = add_t[add_t[t1, neg_t[t2]], t3]
                    if det == 0:
                        continue
                    if count >= out.shape[0]:
                        return -1
                    out[count, 0] = a
                    out[count, 1] = b
                    out[count, 2] = c
                    out[count, 3] = d
                    out[count, 4] = e
                    out[count, 5] = f
                    out[count, 6] = g
                    out[count, 7] = h
                    out[count, 8] = i
                    count += 1
        return count

    def stabilizer_scan_numba(col1s, col2s, col3s, test_pts, on_curve, add_t, mul_t, inv_t, neg_t, size):
        cap = 4096
        while True:
            out = np.empty((cap, 9), dtype=np.int64)
            n = _scan_core(col1s, col2s, col3s, test_pts, on_curve, add_t, mul_t, inv_t, neg_t, size, out)
            if n >= 0:
                return out[:n].copy()
            cap *= 8

else:  # pragma: no cover
    series_mul_numba = row_reduce_numba = stabilizer_scan_numba = None


if _config.USE_NUMBA:
    series_mul = series_mul_numba
    row_reduce = row_reduce_numba
    stabilizer_scan = stabilizer_scan_numba
    BACKEND = "numba"
else:
    series_mul = series_mul_numpy
    row_reduce = row_reduce_numpy
    stabilizer_scan = stabilizer_scan_numpy
    BACKEND = "numpy"
