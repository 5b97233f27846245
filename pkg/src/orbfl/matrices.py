"""Dense matrix helpers over truncated Laurent series.

Matrices are tuples of row tuples of :class:`~orbfl.series.Series`.  Pivoting
always selects a certified minimal-valuation entry so that elimination stays
exact in the t-adic sense.
"""

from __future__ import annotations

from .errors import DegenerateInputError, InsufficientPrecisionError
from .series import Series


def mat(rows):
    return tuple(tuple(r) for r in rows)


def dim_of(m):
    return len(m), len(m[0]) if m else 0


def zero_matrix(field, n, k=None, prec=None):
    from .series import DEFAULT_PREC
    if k is None:
        k = n
    if prec is None:
        prec = DEFAULT_PREC
    z = Series.zero(field, prec)
    return tuple(tuple(z for _ in range(k)) for _ in range(n))


def identity(field, n, prec=None):
    from .series import DEFAULT_PREC
    if prec is None:
        prec = DEFAULT_PREC
    z = Series.zero(field, prec)
    o = Series.one(field, prec)
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a):
    return tuple(tuple(-x for x in r) for r in a)


def mat_scale(s, a):
    return tuple(tuple(s * x for x in r) for r in a)


def mat_mul(a, b):
    n, m = len(a), len(b[0])
    inner = len(b)
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = ai[0] * b[0][j]
            for k in range(1, inner):
                acc = acc + ai[k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(a, v):
    return tuple(sum((x * y for x, y in zip(r, v)), start=Series.zero(r[0].field, r[0].prec))
                 for r in a)


def mat_map(a, fn):
    return tuple(tuple(fn(x) for x in r) for r in a)


def transpose(a):
    return tuple(zip(*a))


def columns(a):
    return [tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0]))]


def from_columns(cols):
    return tuple(zip(*cols))


def mat_agrees(a, b, prec=None):
    return all(x.agrees_with(y, prec) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_integral(a):
    """All entries have nonnegative valuation (zero-up-to-precision counts if
    the precision itself is nonnegative)."""
    for r in a:
        for x in r:
            if x.val is None:
                if x.prec <= 0:
                    raise InsufficientPrecisionError("integrality not certified")
            elif x.val < 0:
                return False
    return True


def _pivot(rows, col_idx, candidates):
    """Index (among candidates) of the row whose entry in col_idx has minimal
    certified valuation; None if the whole column is zero up to precision."""
    best = None
    best_v = None
    uncertified = False
    for i in candidates:
        x = rows[i][col_idx]
        if x.val is None:
            uncertified = uncertified or x.prec < 10 ** 9
            continue
        if best_v is None or x.val < best_v:
            best, best_v = i, x.val
    if best is None:
        return None
    return best


def gauss_eliminate(m, rhs=None):
    """Row reduce ``m`` (on copies) with min-valuation pivoting.

    Returns (pivots, reduced rows, reduced rhs) where pivots is a list of
    (row, col) positions; each pivot column is cleared in all other rows.
    """
    rows = [list(r) for r in m]
    n = len(rows)
    k = len(rows[0]) if rows else 0
    rv = [list(r) for r in rhs] if rhs is not None else None
    pivots = []  # (row, col)
    used = set()
    for j in range(k):
        cand = [i for i in range(n) if i not in used]
        pi = _pivot(rows, j, cand)
        if pi is None:
            continue
        used.add(pi)
        pivots.append((pi, j))
        pv = rows[pi][j]
        inv = pv.inv()
        for i in range(n):
            if i == pi:
                continue
            x = rows[i][j]
            if x.is_zero:
                continue
            c = x * inv
            for jj in range(k):
                rows[i][jj] = rows[i][jj] - c * rows[pi][jj]
            if rv is not None:
                for jj in range(len(rv[i])):
                    rv[i][jj] = rv[i][jj] - c * rv[pi][jj]
    return pivots, rows, rv


def mat_det(a):
    """Determinant via fraction-free-ish elimination with valuation pivoting."""
    n = len(a)
    rows = [list(r) for r in a]
    field = a[0][0].field
    det = Series.one(field, a[0][0].prec)
    sign = 1
    used_rows = []
    remaining = list(range(n))
    for j in range(n):
        pi = _pivot(rows, j, remaining)
        if pi is None:
            # column with no certified nonzero entry: det is zero up to precision
            p = min(x.prec for i in remaining for x in (rows[i][j],))
            return Series(field, None, (), p)
        remaining.remove(pi)
        used_rows.append(pi)
        pv = rows[pi][j]
        det = det * pv
        inv = pv.inv()
        for i in remaining:
            x = rows[i][j]
            if x.is_zero:
                continue
            c = x * inv
            for jj in range(j + 1, n):
                rows[i][jj] = rows[i][jj] - c * rows[pi][jj]
    # permutation sign
    perm = used_rows
    sign = 1
    seen = [False] * n
    pos = {r: idx for idx, r in enumerate(perm)}
    visited = set()
    for start in range(n):
        if start in visited:
            continue
        length = 0
        x = start
        while x not in visited:
            visited.add(x)
            x = perm[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    if sign == -1:
        det = -det
    return det


def mat_inv(a):
    n = len(a)
    field = a[0][0].field
    prec = min(x.prec for r in a for x in r)
    rows = [list(r) for r in a]
    rhs = [list(r) for r in identity(field, n, prec)]
    pivots, rows, rhs = gauss_eliminate(rows, rhs)
    if len(pivots) < n:
        raise DegenerateInputError("matrix not certified invertible")
    out = [[None] * n for _ in range(n)]
    for (pi, pj) in pivots:
        inv = rows[pi][pj].inv()
        for jj in range(n):
            out[pj][jj] = rhs[pi][jj] * inv
    return mat(out)


def solve_right(a, b):
    """Solve a @ x = b for a square certified-invertible a (b a matrix)."""
    return mat_mul(mat_inv(a), b)


def nullspace(a):
    """Basis of the right nullspace of ``a`` over the Laurent series field.

    Returns a list of coordinate vectors (tuples of Series).  Free columns are
    those without a certified pivot; their zero-up-to-precision entries are
    treated as exact zeros, so callers should verify solutions independently.
    """
    n = len(a)
    k = len(a[0])
    field = a[0][0].field
    prec = min(x.prec for r in a for x in r)
    pivots, rows, _ = gauss_eliminate(a)
    pivot_cols = {pj: pi for (pi, pj) in pivots}
    free_cols = [j for j in range(k) if j not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = [Series.zero(field, prec) for _ in range(k)]
        vec[fc] = Series.one(field, prec)
        for pj, pi in pivot_cols.items():
            # pivot row: rows[pi][pj] * x_pj + rows[pi][fc] * x_fc = 0
            vec[pj] = -(rows[pi][fc] * rows[pi][pj].inv())
        basis.append(tuple(vec))
    return basis


def minimal_polynomial(m, max_deg=None):
    """Monic minimal polynomial of a square matrix over the series field.

    Returns coefficients (c0, ..., c_{d-1}) with m^d = -(c0 I + ... + c_{d-1} m^{d-1}).
    """
    n = len(m)
    if max_deg is None:
        max_deg = n
    field = m[0][0].field
    prec = min(x.prec for r in m for x in r)
    powers = [identity(field, n, prec)]
    for _ in range(max_deg):
        powers.append(mat_mul(powers[-1], m))
    flat = lambda mm: [mm[i][j] for i in range(n) for j in range(n)]
    for d in range(1, max_deg + 1):
        # solve sum c_i m^i = m^d
        cols = [flat(powers[i]) for i in range(d)]
        rhs = [[x] for x in flat(powers[d])]
        sys_rows = [tuple(cols[i][r] for i in range(d)) for r in range(n * n)]
        pivots, rows, rv = gauss_eliminate(sys_rows, rhs)
        if len(pivots) < d:
            continue
        sol = [None] * d
        for (pi, pj) in pivots:
            sol[pj] = rv[pi][0] * rows[pi][pj].inv()
        # consistency: rows without pivots must have zero rhs
        pivot_rows = {pi for (pi, pj) in pivots}
        ok = True
        for i in range(n * n):
            if i not in pivot_rows and not rv[i][0].is_zero:
                ok = False
                break
        if ok:
            return tuple(-c for c in sol)
    raise DegenerateInputError("no minimal polynomial of degree <= %d" % max_deg)


def poly_eval_matrix(coeffs, m):
    """Evaluate monic x^d + c_{d-1}x^{d-1} + ... + c0 at the matrix m."""
    n = len(m)
    field = m[0][0].field
    prec = min(x.prec for r in m for x in r)
    acc = identity(field, n, prec)
    out = zero_matrix(field, n, n, prec)
    for c in coeffs:
        out = mat_add(out, mat_scale(c, acc))
        acc = mat_mul(acc, m)
    return mat_add(out, acc)
