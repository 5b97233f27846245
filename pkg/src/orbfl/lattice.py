"""O-lattices in finite-dimensional spaces over a Laurent series field.

A lattice is stored through a canonical column Hermite basis: columns are in
echelon position (zero below their pivot row), each pivot entry is an exact
power ``t^d``, and entries in other columns at a pivot row are reduced modulo
that power.  Canonical bases make equality, hashing and deduplication exact.
"""

from __future__ import annotations

from .errors import DegenerateInputError, GuardError, InsufficientPrecisionError
from .matrices import mat, mat_inv, mat_mul, is_integral, from_columns, columns
from .series import Series

ENUMERATION_GUARD = 12
VISIT_CAP = 200000


def _hermite(cols, dim):
    """Canonical column echelon form; returns (columns, pivots) where pivots is
    a list of (row, diag_exponent) aligned with the returned columns."""
    work = [list(c) for c in cols]
    pivots = []  # (row, col_index_in_work, d)
    remaining = list(range(len(work)))
    for row in range(dim - 1, -1, -1):
        best = None
        best_v = None
        for ci in remaining:
            x = work[ci][row]
            if x.val is not None and (best_v is None or x.val < best_v):
                best, best_v = ci, x.val
        if best is None:
            # certify: all remaining entries in this row are zero to usable precision
            for ci in remaining:
                if work[ci][row].prec <= 0:
                    raise InsufficientPrecisionError("pivot search at row %d" % row)
            continue
        remaining.remove(best)
        pv = work[best][row]
        inv = pv.inv()
        for ci in remaining:
            x = work[ci][row]
            if x.is_zero:
                continue
            c = x * inv
            work[ci] = [a - c * b for a, b in zip(work[ci], work[best])]
        pivots.append((row, best, best_v))
    for ci in remaining:
        for x in work[ci]:
            if x.val is not None:
                raise DegenerateInputError("generating columns are not O-linearly independent "
                                           "at working precision")
    # order pivot columns by pivot row, normalize and reduce
    pivots.sort()
    ordered = []
    info = []
    field = None
    for row, ci, d in pivots:
        col = work[ci]
        field = col[row].field
        scale = Series.t_power(field, d, col[row].prec) * col[row].inv()
        ordered.append([scale * x for x in col])
        info.append((row, d))
    # reduce entries of column j at pivot rows of other columns
    for j in range(len(ordered)):
        rj = info[j][0]
        for i in range(len(ordered) - 1, -1, -1):
            if i == j:
                continue
            ri, di = info[i]
            if ri >= rj:
                continue  # ordered[i] vanishes below ri < rj, nothing to reduce there
            x = ordered[j][ri]
            if x.val is None or x.val + len(x.coeffs) <= di:
                continue  # no terms at or above t^di: already reduced
            rem = Series(x.field, x.val, x.coeffs[:max(0, di - x.val)], x.prec)
            quot = (x - rem).shift(-di)
            ordered[j] = [a - quot * b for a, b in zip(ordered[j], ordered[i])]
    return [tuple(c) for c in ordered], info


class Lattice:
    """Finitely generated O-submodule of F^dim given by canonical basis columns."""

    __slots__ = ("field", "dim", "cols", "pivots", "_key")

    def __init__(self, cols, dim=None):
        cols = [tuple(c) for c in cols]
        if not cols:
            raise DegenerateInputError("empty generating set")
        if dim is None:
            dim = len(cols[0])
        self.dim = dim
        self.field = cols[0][0].field
        self.cols, self.pivots = _hermite(cols, dim)
        self._key = None

    @property
    def rank(self):
        return len(self.cols)

    @classmethod
    def standard(cls, field, dim, prec=None):
        from .series import DEFAULT_PREC
        p = prec if prec is not None else DEFAULT_PREC
        cols = []
        for j in range(dim):
            cols.append(tuple(Series.one(field, p) if i == j else Series.zero(field, p)
                              for i in range(dim)))
        return cls(cols, dim)

    @classmethod
    def diagonal(cls, field, exponents, prec=None):
        from .series import DEFAULT_PREC
        p = prec if prec is not None else DEFAULT_PREC
        cols = []
        n = len(exponents)
        for j, e in enumerate(exponents):
            cols.append(tuple(Series.t_power(field, e, p) if i == j else Series.zero(field, p)
                              for i in range(n)))
        return cls(cols, n)

    def basis_matrix(self):
        return from_columns(self.cols)

    def key(self):
        """Hashable exact canonical key (entries at pivot rows are exact polynomials)."""
        if self._key is None:
            parts = []
            for (row, d), col in zip(self.pivots, self.cols):
                entries = []
                for x in col:
                    entries.append((x.val, x.coeffs))
                parts.append((row, d, tuple(entries)))
            self._key = tuple(parts)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.dim == other.dim and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Lattice(dim=%d, rank=%d, diag=%r)" % (
            self.dim, self.rank, [d for (_, d) in self.pivots])

    # -- operations -----------------------------------------------------

    def scale_t(self, k):
        return Lattice([tuple(x.shift(k) for x in c) for c in self.cols], self.dim)

    def apply(self, m):
        """Image lattice m(self) for a matrix m (rows x dim)."""
        cols = []
        for c in self.cols:
            cols.append(tuple(sum((m[i][j] * c[j] for j in range(self.dim)),
                                  start=Series.zero(self.field, c[0].prec))
                              for i in range(len(m))))
        return Lattice(cols, len(m))

    def join(self, other):
        return Lattice(list(self.cols) + list(other.cols), self.dim)

    def contains(self, other):
        """Whether other is a sublattice of self (both full rank, same dim)."""
        if self.rank != self.dim or other.rank != other.dim:
            raise DegenerateInputError("containment requires full-rank lattices")
        sol = mat_mul(mat_inv(self.basis_matrix()), other.basis_matrix())
        return is_integral(sol)

    def det_exponent(self):
        return sum(d for (_, d) in self.pivots)

    def is_stable_under(self, m):
        """Whether m maps this (full-rank) lattice into itself."""
        b = self.basis_matrix()
        return is_integral(mat_mul(mat_inv(b), mat_mul(m, b)))


def index_exp(top, bot):
    """log_Q [top : bot] for lattices of equal rank in the same space, as the
    difference of determinant exponents (Q = coefficient field cardinality).
    Negative or non-containment inputs give the signed relative index."""
    if top.rank != bot.rank:
        raise DegenerateInputError("index of lattices of different rank")
    return bot.det_exponent() - top.det_exponent()


def sublattices_of_index_one(lat, lower=None):
    """Index-Q sublattices of ``lat``; if ``lower`` is given, only those
    containing it."""
    field = lat.field
    Q = field.q
    r = lat.rank
    if r != lat.dim:
        raise DegenerateInputError("enumeration requires full-rank lattices")
    out = []
    # functionals on lat/t*lat, normalized: first nonzero coordinate == 1
    for phi in _projective_functionals(field, r):
        m = next(i for i, c in enumerate(phi) if c != 0)
        cols = [tuple(x.shift(1) for x in lat.cols[m])]
        for i in range(r):
            if i == m:
                continue
            ci = field.neg(field.mul(phi[i], field.inv(phi[m])))
            if ci == 0:
                cols.append(lat.cols[i])
            else:
                scaled = tuple(x.scale(ci) for x in lat.cols[m])
                cols.append(tuple(a + b for a, b in zip(lat.cols[i], scaled)))
        sub = Lattice(cols, lat.dim)
        if lower is None or sub.contains(lower):
            out.append(sub)
    return out


def _projective_functionals(field, r):
    Q = field.q
    if r == 1:
        yield (1,)
        return
    # vectors with first nonzero coordinate normalized to 1
    for lead in range(r):
        tail = r - lead - 1
        for rest in _tuples(field, tail):
            yield (0,) * lead + (1,) + rest


def _tuples(field, n):
    if n == 0:
        yield ()
        return
    for head in field.elements():
        for rest in _tuples(field, n - 1):
            yield (head,) + rest


def enumerate_between(top, bot, stable_under=(), guard=ENUMERATION_GUARD):
    """All lattices L with top >= L >= bot, optionally filtered by stability
    under each matrix in ``stable_under``.  Raises GuardError when the quotient
    length exceeds ``guard``."""
    if not top.contains(bot):
        raise DegenerateInputError("bottom lattice is not contained in top lattice")
    length = index_exp(top, bot)
    if length > guard:
        raise GuardError("quotient length %d exceeds guard %d" % (length, guard))
    seen = {top.key(): top}
    frontier = [top]
    while frontier:
        nxt = []
        for lat in frontier:
            if index_exp(top, lat) >= length:
                continue
            for sub in sublattices_of_index_one(lat, lower=bot):
                k = sub.key()
                if k not in seen:
                    if len(seen) >= VISIT_CAP:
                        raise GuardError("lattice enumeration exceeded visit cap")
                    seen[k] = sub
                    nxt.append(sub)
        frontier = nxt
    result = list(seen.values())
    for m in stable_under:
        result = [lat for lat in result if lat.is_stable_under(m)]
    return result


def split_by_idempotent(lat, e_mat, co_mat):
    """Split lat = (e lat) + (co lat) for complementary idempotents; raises if
    the pieces do not recover the lattice."""
    plus = lat.apply(e_mat)
    minus = lat.apply(co_mat)
    joined = Lattice(list(plus.cols) + list(minus.cols), lat.dim)
    if joined != lat:
        raise DegenerateInputError("lattice is not split by the idempotent")
    return plus, minus
