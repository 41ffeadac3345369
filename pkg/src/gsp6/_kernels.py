"""Compiled inner loops for point counting over F_{q^r}, r <= 3.

Elements are handled as three int64 coordinates (unused ones are zero).
``red[k, j]`` is the t^j coordinate of t^k reduced modulo the field's
defining polynomial, k = 0..4.  ``frob[:, j]`` holds the coordinates of
(t^j)^q.  Field elements are indexed as x0 + x1 q + x2 q^2.

Both loops walk an index range [start, stop) and visit only the smallest
index of each Frobenius orbit, weighting it by the orbit size, so any
partition of [0, q^r) into ranges sums to the same total.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _mul(a0, a1, a2, b0, b1, b2, red, q):
    # inputs lie in [0, q); the unreduced sums stay below 15 q^3
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a0 * b2 + a1 * b1 + a2 * b0
    c3 = a1 * b2 + a2 * b1
    c4 = a2 * b2
    r0 = (c0 * red[0, 0] + c1 * red[1, 0] + c2 * red[2, 0] + c3 * red[3, 0] + c4 * red[4, 0]) % q
    r1 = (c0 * red[0, 1] + c1 * red[1, 1] + c2 * red[2, 1] + c3 * red[3, 1] + c4 * red[4, 1]) % q
    r2 = (c0 * red[0, 2] + c1 * red[1, 2] + c2 * red[2, 2] + c3 * red[3, 2] + c4 * red[4, 2]) % q
    return r0, r1, r2


@njit(cache=True, nogil=True, inline="always")
def _frob(a0, a1, a2, frob, q):
    r0 = (a0 * frob[0, 0] + a1 * frob[0, 1] + a2 * frob[0, 2]) % q
    r1 = (a0 * frob[1, 0] + a1 * frob[1, 1] + a2 * frob[1, 2]) % q
    r2 = (a0 * frob[2, 0] + a1 * frob[2, 1] + a2 * frob[2, 2]) % q
    return r0, r1, r2


@njit(cache=True, nogil=True)
def _orbit_weight(idx, x0, x1, x2, r, frob, q):
    """0 if idx is not the orbit minimum, else the orbit size."""
    if r == 1:
        return 1
    y0, y1, y2 = _frob(x0, x1, x2, frob, q)
    iy = y0 + q * y1 + q * q * y2
    if iy == idx:
        return 1
    if iy < idx:
        return 0
    if r == 3:
        z0, z1, z2 = _frob(y0, y1, y2, frob, q)
        iz = z0 + q * z1 + q * q * z2
        if iz < idx:
            return 0
    return r


@njit(cache=True, nogil=True)
def hyperelliptic_affine(start, stop, q, r, red, frob, g, leg):
    """Sum over x of #{y : y^2 = g(x)}; g is lowest degree first, over F_q."""
    deg = g.shape[0] - 1
    total = 0
    qq = q * q
    for idx in range(start, stop):
        x0 = idx % q
        x1 = (idx // q) % q
        x2 = idx // qq
        w = _orbit_weight(idx, x0, x1, x2, r, frob, q)
        if w == 0:
            continue
        v0, v1, v2 = g[deg], 0, 0
        for k in range(deg - 1, -1, -1):
            v0, v1, v2 = _mul(v0, v1, v2, x0, x1, x2, red, q)
            v0 = (v0 + g[k]) % q
        # the quadratic character of F_{q^r} is the Legendre symbol of the norm
        if r == 1:
            n = v0
        else:
            f0, f1, f2 = _frob(v0, v1, v2, frob, q)
            n0, n1, n2 = _mul(v0, v1, v2, f0, f1, f2, red, q)
            if r == 3:
                h0, h1, h2 = _frob(f0, f1, f2, frob, q)
                n0, n1, n2 = _mul(n0, n1, n2, h0, h1, h2, red, q)
            n = n0
        total += w * (1 + leg[n])
    return total


@njit(cache=True, nogil=True)
def _pow(a0, a1, a2, e, red, q):
    r0, r1, r2 = 1, 0, 0
    while e > 0:
        if e & 1:
            r0, r1, r2 = _mul(r0, r1, r2, a0, a1, a2, red, q)
        a0, a1, a2 = _mul(a0, a1, a2, a0, a1, a2, red, q)
        e >>= 1
    return r0, r1, r2


@njit(cache=True, nogil=True)
def _inv(a0, a1, a2, r, frob, red, q):
    """Inverse through the norm: a^-1 = (a^q ... a^(q^(r-1))) / N(a)."""
    c0, c1, c2 = 1, 0, 0
    f0, f1, f2 = a0, a1, a2
    for _ in range(r - 1):
        f0, f1, f2 = _frob(f0, f1, f2, frob, q)
        c0, c1, c2 = _mul(c0, c1, c2, f0, f1, f2, red, q)
    n0, _, _ = _mul(a0, a1, a2, c0, c1, c2, red, q)
    ninv = 1
    b = n0
    e = q - 2
    while e > 0:
        if e & 1:
            ninv = ninv * b % q
        b = b * b % q
        e >>= 1
    return c0 * ninv % q, c1 * ninv % q, c2 * ninv % q


@njit(cache=True, nogil=True)
def _mulmod(A, B, F, d, red, q, out, scratch):
    """out = A * B mod F, with A, B of degree < d and F monic of degree d."""
    for k in range(2 * d - 1):
        scratch[k, 0] = 0
        scratch[k, 1] = 0
        scratch[k, 2] = 0
    for i in range(d):
        if A[i, 0] == 0 and A[i, 1] == 0 and A[i, 2] == 0:
            continue
        for j in range(d):
            p0, p1, p2 = _mul(A[i, 0], A[i, 1], A[i, 2], B[j, 0], B[j, 1], B[j, 2], red, q)
            scratch[i + j, 0] = (scratch[i + j, 0] + p0) % q
            scratch[i + j, 1] = (scratch[i + j, 1] + p1) % q
            scratch[i + j, 2] = (scratch[i + j, 2] + p2) % q
    for k in range(2 * d - 2, d - 1, -1):
        c0, c1, c2 = scratch[k, 0], scratch[k, 1], scratch[k, 2]
        if c0 == 0 and c1 == 0 and c2 == 0:
            continue
        for j in range(d):
            p0, p1, p2 = _mul(c0, c1, c2, F[j, 0], F[j, 1], F[j, 2], red, q)
            scratch[k - d + j, 0] = (scratch[k - d + j, 0] - p0) % q
            scratch[k - d + j, 1] = (scratch[k - d + j, 1] - p1) % q
            scratch[k - d + j, 2] = (scratch[k - d + j, 2] - p2) % q
    for k in range(d):
        out[k, 0] = scratch[k, 0]
        out[k, 1] = scratch[k, 1]
        out[k, 2] = scratch[k, 2]


@njit(cache=True, nogil=True)
def _degree(P, n):
    for k in range(n - 1, -1, -1):
        if P[k, 0] != 0 or P[k, 1] != 0 or P[k, 2] != 0:
            return k
    return -1


@njit(cache=True, nogil=True)
def _gcd_degree(A, da, B, db, r, frob, red, q):
    """Degree of gcd(A, B); both arrays are overwritten."""
    while db >= 0:
        # A <- A mod B
        i0, i1, i2 = _inv(B[db, 0], B[db, 1], B[db, 2], r, frob, red, q)
        for k in range(da, db - 1, -1):
            c0, c1, c2 = A[k, 0], A[k, 1], A[k, 2]
            if c0 == 0 and c1 == 0 and c2 == 0:
                continue
            c0, c1, c2 = _mul(c0, c1, c2, i0, i1, i2, red, q)
            for j in range(db + 1):
                p0, p1, p2 = _mul(c0, c1, c2, B[j, 0], B[j, 1], B[j, 2], red, q)
                A[k - db + j, 0] = (A[k - db + j, 0] - p0) % q
                A[k - db + j, 1] = (A[k - db + j, 1] - p1) % q
                A[k - db + j, 2] = (A[k - db + j, 2] - p2) % q
        da = _degree(A, db)
        # swap
        for k in range(5):
            t0, t1, t2 = A[k, 0], A[k, 1], A[k, 2]
            A[k, 0], A[k, 1], A[k, 2] = B[k, 0], B[k, 1], B[k, 2]
            B[k, 0], B[k, 1], B[k, 2] = t0, t1, t2
        da, db = db, da
    return da


@njit(cache=True, nogil=True)
def quartic_affine(start, stop, q, r, red, frob, C):
    """Sum over x of the number of distinct roots y of f(x, y).

    C[i, j] is the coefficient of x^i y^j (reduced mod q), i + j <= 4.
    Returns (total, number of x where f(x, y) vanishes identically).
    """
    qq = q * q
    xp = np.zeros((5, 3), dtype=np.int64)
    F = np.zeros((5, 3), dtype=np.int64)
    G = np.zeros((5, 3), dtype=np.int64)
    acc = np.zeros((5, 3), dtype=np.int64)
    base = np.zeros((5, 3), dtype=np.int64)
    scratch = np.zeros((9, 3), dtype=np.int64)
    pw = np.zeros((4, 5, 3), dtype=np.int64)
    nxt = np.zeros((5, 3), dtype=np.int64)
    qbits = 0
    while (q >> qbits) > 0:
        qbits += 1
    total = 0
    degenerate = 0
    for idx in range(start, stop):
        x0 = idx % q
        x1 = (idx // q) % q
        x2 = idx // qq
        w = _orbit_weight(idx, x0, x1, x2, r, frob, q)
        if w == 0:
            continue
        xp[0, 0], xp[0, 1], xp[0, 2] = 1, 0, 0
        for i in range(1, 5):
            xp[i, 0], xp[i, 1], xp[i, 2] = _mul(
                xp[i - 1, 0], xp[i - 1, 1], xp[i - 1, 2], x0, x1, x2, red, q)
        for j in range(5):
            s0 = 0
            s1 = 0
            s2 = 0
            for i in range(5 - j):
                c = C[i, j]
                if c != 0:
                    s0 += c * xp[i, 0]
                    s1 += c * xp[i, 1]
                    s2 += c * xp[i, 2]
            F[j, 0], F[j, 1], F[j, 2] = s0 % q, s1 % q, s2 % q
        d = _degree(F, 5)
        if d < 0:
            degenerate += 1
            continue
        if d == 0:
            continue
        if d == 1:
            total += w
            continue
        # make F monic
        i0, i1, i2 = _inv(F[d, 0], F[d, 1], F[d, 2], r, frob, red, q)
        for j in range(d + 1):
            F[j, 0], F[j, 1], F[j, 2] = _mul(F[j, 0], F[j, 1], F[j, 2], i0, i1, i2, red, q)
        # acc = y^q mod F by left-to-right binary powering
        for k in range(5):
            acc[k, 0] = 0
            acc[k, 1] = 0
            acc[k, 2] = 0
            base[k, 0] = 0
            base[k, 1] = 0
            base[k, 2] = 0
        base[1, 0] = 1
        acc[1, 0] = 1
        for bit in range(qbits - 2, -1, -1):
            _mulmod(acc, acc, F, d, red, q, acc, scratch)
            if (q >> bit) & 1:
                _mulmod(acc, base, F, d, red, q, acc, scratch)
        if r > 1:
            # u -> u^q is additive with (b y^i)^q = b^q (y^q)^i, so
            # y^(q^k) follows from y^(q^(k-1)) and the powers of y^q
            for k in range(5):
                for c in range(3):
                    pw[0, k, c] = 0
                    pw[1, k, c] = acc[k, c]
            pw[0, 0, 0] = 1
            for i in range(2, d):
                _mulmod(pw[i - 1], acc, F, d, red, q, pw[i], scratch)
            for _ in range(r - 1):
                for k in range(5):
                    nxt[k, 0] = 0
                    nxt[k, 1] = 0
                    nxt[k, 2] = 0
                for i in range(d):
                    b0, b1, b2 = _frob(acc[i, 0], acc[i, 1], acc[i, 2], frob, q)
                    if b0 == 0 and b1 == 0 and b2 == 0:
                        continue
                    for k in range(d):
                        p0, p1, p2 = _mul(b0, b1, b2, pw[i, k, 0], pw[i, k, 1], pw[i, k, 2], red, q)
                        nxt[k, 0] = (nxt[k, 0] + p0) % q
                        nxt[k, 1] = (nxt[k, 1] + p1) % q
                        nxt[k, 2] = (nxt[k, 2] + p2) % q
                for k in range(5):
                    acc[k, 0] = nxt[k, 0]
                    acc[k, 1] = nxt[k, 1]
                    acc[k, 2] = nxt[k, 2]
        # G = y^(q^r) - y mod F, then deg gcd(F, G) = number of distinct roots
        acc[1, 0] = (acc[1, 0] - 1) % q
        for k in range(5):
            G[k, 0], G[k, 1], G[k, 2] = acc[k, 0], acc[k, 1], acc[k, 2]
        dg = _degree(G, d)
        if dg < 0:
            total += w * d
            continue
        total += w * _gcd_degree(F, d, G, dg, r, frob, red, q)
    return total, degenerate


@njit(cache=True, nogil=True)
def _eval_form(terms, P, ix, iy, iz, red, q):
    """Evaluate a ternary form given as rows (i, j, k, c) of terms[t0:]."""
    s0 = 0
    s1 = 0
    s2 = 0
    for t in range(terms.shape[0]):
        if terms[t, 0] < 0:
            break
        i, j, k, c = terms[t, 0], terms[t, 1], terms[t, 2], terms[t, 3]
        a0, a1, a2 = _mul(P[ix, i, 0], P[ix, i, 1], P[ix, i, 2],
                          P[iy, j, 0], P[iy, j, 1], P[iy, j, 2], red, q)
        a0, a1, a2 = _mul(a0, a1, a2, P[iz, k, 0], P[iz, k, 1], P[iz, k, 2], red, q)
        s0 += c * a0
        s1 += c * a1
        s2 += c * a2
    return s0 % q, s1 % q, s2 % q


@njit(cache=True, nogil=True)
def singular_mask(points, P, forms, red, q):
    """Flag the points (rows of element indices) where every form vanishes.

    forms[f] lists the terms of form f as (i, j, k, c), padded with -1 rows;
    P[e, d] is the d-th power of element e.
    """
    m = points.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    for n in range(m):
        ix, iy, iz = points[n, 0], points[n, 1], points[n, 2]
        hit = True
        for f in range(forms.shape[0]):
            v0, v1, v2 = _eval_form(forms[f], P, ix, iy, iz, red, q)
            if v0 != 0 or v1 != 0 or v2 != 0:
                hit = False
                break
        out[n] = hit
    return out


@njit(cache=True, nogil=True)
def rank_mod(M, q):
    """Rank of an integer matrix modulo the prime q; M is overwritten."""
    rows, cols = M.shape
    for i in range(rows):
        for j in range(cols):
            M[i, j] %= q
    rank = 0
    for col in range(cols):
        piv = -1
        for i in range(rank, rows):
            if M[i, col] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(cols):
                t = M[rank, j]
                M[rank, j] = M[piv, j]
                M[piv, j] = t
        # inverse by Fermat
        inv = 1
        b = M[rank, col]
        e = q - 2
        while e > 0:
            if e & 1:
                inv = inv * b % q
            b = b * b % q
            e >>= 1
        for j in range(col, cols):
            M[rank, j] = M[rank, j] * inv % q
        for i in range(rows):
            if i != rank and M[i, col] != 0:
                f = M[i, col]
                for j in range(col, cols):
                    M[i, j] = (M[i, j] - f * M[rank, j]) % q
        rank += 1
        if rank == rows:
            break
    return rank


@njit(cache=True, nogil=True)
def _full_column_rank(M, q):
    """Whether M (rows >= cols) has rank cols modulo q; M is overwritten."""
    rows, cols = M.shape
    for col in range(cols):
        piv = -1
        for i in range(col, rows):
            if M[i, col] % q != 0:
                piv = i
                break
        if piv < 0:
            return False
        if piv != col:
            for j in range(col, cols):
                t = M[col, j]
                M[col, j] = M[piv, j]
                M[piv, j] = t
        inv = 1
        b = M[col, col] % q
        e = q - 2
        while e > 0:
            if e & 1:
                inv = inv * b % q
            b = b * b % q
            e >>= 1
        for j in range(col, cols):
            M[col, j] = M[col, j] * inv % q
        for i in range(col + 1, rows):
            f = M[i, col] % q
            if f != 0:
                for j in range(col, cols):
                    M[i, j] = (M[i, j] - f * M[col, j]) % q
    return True


@njit(cache=True, nogil=True)
def macaulay_smooth_many(coeffs, src, mult, q):
    """For each row of coeffs (15 quartic coefficients) decide smoothness.

    The degree-7 Macaulay matrix of the partials has entry
    coeffs[src[r, c]] * mult[r, c] (src = -1 for a structural zero).
    """
    n = coeffs.shape[0]
    rows, cols = src.shape
    out = np.zeros(n, dtype=np.bool_)
    M = np.zeros((rows, cols), dtype=np.int64)
    for t in range(n):
        for i in range(rows):
            for j in range(cols):
                k = src[i, j]
                M[i, j] = (coeffs[t, k] * mult[i, j]) % q if k >= 0 else 0
        out[t] = _full_column_rank(M, q)
    return out


@njit(cache=True, nogil=True)
def macaulay_smooth_range(start, stop, q, src, mult):
    """Smoothness of the quartics whose coefficient vectors are the base-q
    digits of start..stop-1 (digit k is coefficient k)."""
    rows, cols = src.shape
    out = np.zeros(stop - start, dtype=np.bool_)
    M = np.zeros((rows, cols), dtype=np.int64)
    c = np.zeros(15, dtype=np.int64)
    for t in range(start, stop):
        v = t
        for k in range(15):
            c[k] = v % q
            v //= q
        for i in range(rows):
            for j in range(cols):
                k = src[i, j]
                M[i, j] = (c[k] * mult[i, j]) % q if k >= 0 else 0
        out[t - start] = _full_column_rank(M, q)
    return out


@njit(cache=True)
def macaulay_smooth_table(q, src, mult, perms, muls):
    """Smoothness of every quartic over F_q, indexed by its base-q digits.

    perms/muls describe a group of coordinate changes preserving
    smoothness: image digit perms[g, k] = muls[g, k] * digit k.  The rank
    test runs only on the smallest index of each orbit.
    """
    total = q ** 15
    out = np.zeros(total, dtype=np.bool_)
    rows, cols = src.shape
    M = np.zeros((rows, cols), dtype=np.int64)
    c = np.zeros(15, dtype=np.int64)
    pw = np.ones(15, dtype=np.int64)
    for k in range(1, 15):
        pw[k] = pw[k - 1] * q
    ng = perms.shape[0]
    for t in range(1, total):
        v = t
        for k in range(15):
            c[k] = v % q
            v //= q
        best = t
        for g in range(ng):
            img = 0
            for k in range(15):
                if c[k] != 0:
                    img += (c[k] * muls[g, k]) % q * pw[perms[g, k]]
            if img < best:
                best = img
        if best < t:
            out[t] = out[best]
            continue
        for i in range(rows):
            for j in range(cols):
                k = src[i, j]
                M[i, j] = (c[k] * mult[i, j]) % q if k >= 0 else 0
        out[t] = _full_column_rank(M, q)
    return out


@njit(cache=True, nogil=True)
def singular_affine(n, P, C, forms, red, q):
    """Flags over the chart Z = 1: out[ix * n + iy] is set when F and every
    form in ``forms`` vanish at (x, y, 1).  C[i, j] is the coefficient of
    x^i y^j in F(x, y, 1); P[e, d] is the d-th power of element e."""
    out = np.zeros(n * n, dtype=np.bool_)
    A = np.zeros((5, 3), dtype=np.int64)
    for ix in range(n):
        for j in range(5):
            s0 = 0
            s1 = 0
            s2 = 0
            for i in range(5 - j):
                c = C[i, j]
                if c != 0:
                    s0 += c * P[ix, i, 0]
                    s1 += c * P[ix, i, 1]
                    s2 += c * P[ix, i, 2]
            A[j, 0], A[j, 1], A[j, 2] = s0 % q, s1 % q, s2 % q
        for iy in range(n):
            y0, y1, y2 = P[iy, 1, 0], P[iy, 1, 1], P[iy, 1, 2]
            v0, v1, v2 = A[4, 0], A[4, 1], A[4, 2]
            for j in range(3, -1, -1):
                v0, v1, v2 = _mul(v0, v1, v2, y0, y1, y2, red, q)
                v0 = (v0 + A[j, 0]) % q
                v1 = (v1 + A[j, 1]) % q
                v2 = (v2 + A[j, 2]) % q
            if v0 != 0 or v1 != 0 or v2 != 0:
                continue
            hit = True
            for f in range(forms.shape[0]):
                w0, w1, w2 = _eval_form(forms[f], P, ix, iy, 1, red, q)
                if w0 != 0 or w1 != 0 or w2 != 0:
                    hit = False
                    break
            out[ix * n + iy] = hit
    return out
