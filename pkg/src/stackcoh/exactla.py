"""
Exact linear algebra over the rationals.

Matrices are sparse (row -> {col: Fraction}) and immutable by convention.
Ranks use fraction-free elimination on integer rows; kernels and solves
use reduced row echelon form over Fraction.  Pivots are chosen
deterministically: rows are processed in order and the pivot of a row
is its first nonzero column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


_SMALL = {k: Fraction(k) for k in range(-16, 17)}


def _fraction_of(x):
    if type(x) is int:
        f = _SMALL.get(x)
        return f if f is not None else Fraction(x)
    return x


def format_rational(x: Fraction) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class ShapeError(ValueError):
    pass


class RationalMatrix:
    __slots__ = ("nrows", "ncols", "_rows", "_cols")

    def __init__(self, nrows: int, ncols: int, rows=None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        clean = {}
        if rows:
            for i, row in rows.items():
                if not 0 <= i < self.nrows:
                    raise ShapeError(f"row {i} outside {self.nrows} rows")
                r = {}
                for j, v in row.items():
                    if not 0 <= j < self.ncols:
                        raise ShapeError(f"column {j} outside {self.ncols} columns")
                    v = to_fraction(v)
                    if v:
                        r[j] = v
                if r:
                    clean[i] = r
        self._rows = clean
        self._cols = None

    @classmethod
    def _raw(cls, nrows, ncols, rows):
        m = cls.__new__(cls)
        m.nrows, m.ncols, m._rows = nrows, ncols, rows
        m._cols = None
        return m

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, nrows, ncols):
        return cls._raw(nrows, ncols, {})

    @classmethod
    def identity(cls, n):
        return cls._raw(n, n, {i: {i: _ONE} for i in range(n)})

    @classmethod
    def from_rows(cls, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ShapeError("ragged rows")
        return cls(len(rows), ncols, {i: {j: v for j, v in enumerate(r)} for i, r in enumerate(rows)})

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        """entries: iterable of (i, j, value); repeated positions add up."""
        rows = {}
        for i, j, v in entries:
            if type(v) is not int and not isinstance(v, Fraction):
                v = to_fraction(v)
            if not v:
                continue
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ShapeError(f"entry ({i},{j}) outside {nrows}x{ncols}")
            r = rows.get(i)
            if r is None:
                r = rows[i] = {}
            s = r.get(j, 0) + v
            if s:
                r[j] = s
            else:
                del r[j]
        # exact ints are summed as ints and turned into Fractions at the end
        return cls._raw(nrows, ncols, {i: {j: _fraction_of(x) for j, x in r.items()}
                                       for i, r in rows.items() if r})

    @classmethod
    def column_vector(cls, values):
        values = [to_fraction(v) for v in values]
        return cls._raw(len(values), 1, {i: {0: v} for i, v in enumerate(values) if v})

    @classmethod
    def from_columns(cls, columns, nrows):
        rows = {}
        for j, col in enumerate(columns):
            for i, v in (col.items() if isinstance(col, dict) else enumerate(col)):
                v = to_fraction(v)
                if v:
                    rows.setdefault(i, {})[j] = v
        return cls._raw(nrows, len(columns), rows)

    # -- access --------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, _ZERO)

    def row(self, i) -> dict:
        return self._rows.get(i, {})

    def nonzero_rows(self):
        return sorted(self._rows)

    def items(self):
        for i in sorted(self._rows):
            r = self._rows[i]
            for j in sorted(r):
                yield i, j, r[j]

    def nnz(self):
        return sum(len(r) for r in self._rows.values())

    def is_zero(self):
        return not self._rows

    def to_lists(self):
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def to_strings(self):
        return [[format_rational(self[i, j]) for j in range(self.ncols)] for i in range(self.nrows)]

    def column(self, j):
        return [self[i, j] for i in range(self.nrows)]

    def columns_as_dicts(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def __repr__(self):
        if self.nrows * self.ncols <= 64:
            body = "; ".join(" ".join(format_rational(v) for v in row) for row in self.to_lists())
            return f"RationalMatrix({self.nrows}x{self.ncols}: {body})"
        return f"RationalMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- algebra -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    __hash__ = None

    def transpose(self):
        rows = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return RationalMatrix._raw(self.ncols, self.nrows, rows)

    @property
    def T(self):
        return self.transpose()

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other._rows
        out = {}
        for i, r in self._rows.items():
            acc = {}
            for k, a in r.items():
                ok = orows.get(k)
                if not ok:
                    continue
                for j, b in ok.items():
                    acc[j] = acc.get(j, _ZERO) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return RationalMatrix._raw(self.nrows, other.ncols, out)

    def _column_lists(self):
        if self._cols is None:
            cols = {}
            for i, r in self._rows.items():
                for j, a in r.items():
                    cols.setdefault(j, []).append((i, a))
            self._cols = cols
        return self._cols

    def apply(self, vector):
        """Matrix times a dense list, returning a dense list."""
        if len(vector) != self.ncols:
            raise ShapeError("vector length mismatch")
        cols = self._column_lists()
        out = [_ZERO] * self.nrows
        for j, x in enumerate(vector):
            if x:
                for i, a in cols.get(j, ()):
                    out[i] += a * x
        return out

    def apply_sparse(self, vector: dict) -> dict:
        """Matrix times a sparse vector {position: value}, dropping zeros."""
        cols = self._column_lists()
        out = {}
        for j, x in vector.items():
            for i, a in cols.get(j, ()):
                out[i] = out.get(i, _ZERO) + a * x
        return {i: v for i, v in out.items() if v}

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            t = out.setdefault(i, {})
            for j, v in r.items():
                s = t.get(j, _ZERO) + sign * v
                if s:
                    t[j] = s
                else:
                    t.pop(j, None)
        return RationalMatrix._raw(self.nrows, self.ncols, {i: r for i, r in out.items() if r})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = to_fraction(c)
        if not c:
            return RationalMatrix.zeros(self.nrows, self.ncols)
        return RationalMatrix._raw(self.nrows, self.ncols,
                                   {i: {j: c * v for j, v in r.items()} for i, r in self._rows.items()})

    def select_rows(self, rows):
        rows = list(rows)
        out = {}
        for new, old in enumerate(rows):
            r = self._rows.get(old)
            if r:
                out[new] = dict(r)
        return RationalMatrix._raw(len(rows), self.ncols, out)

    def select_cols(self, cols):
        cols = list(cols)
        pos = {c: k for k, c in enumerate(cols)}
        out = {}
        for i, r in self._rows.items():
            t = {pos[j]: v for j, v in r.items() if j in pos}
            if t:
                out[i] = t
        return RationalMatrix._raw(self.nrows, len(cols), out)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ShapeError("hstack row mismatch")
        out = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            t = out.setdefault(i, {})
            for j, v in r.items():
                t[j + self.ncols] = v
        return RationalMatrix._raw(self.nrows, self.ncols + other.ncols, out)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ShapeError("vstack column mismatch")
        out = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            out[i + self.nrows] = dict(r)
        return RationalMatrix._raw(self.nrows + other.nrows, self.ncols, out)


def block_matrix(row_sizes, col_sizes, blocks):
    """Assemble from {(bi, bj): RationalMatrix}; missing blocks are zero."""
    roff = [0]
    for s in row_sizes:
        roff.append(roff[-1] + s)
    coff = [0]
    for s in col_sizes:
        coff.append(coff[-1] + s)
    entries = []
    for (bi, bj), m in blocks.items():
        if m.shape != (row_sizes[bi], col_sizes[bj]):
            raise ShapeError(f"block {(bi, bj)} has shape {m.shape}, "
                             f"expected {(row_sizes[bi], col_sizes[bj])}")
        for i, j, v in m.items():
            entries.append((roff[bi] + i, coff[bj] + j, v))
    return RationalMatrix.from_entries(roff[-1], coff[-1], entries)


# ----------------------------------------------------------------------
# elimination

def _integer_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    out = {j: int(v * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _rank_of_rows(rows):
    """Fraction-free elimination of integer sparse rows."""
    pivots = {}
    for row in rows:
        r = row
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                break
            a, b = r[c], p[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {j: b * v for j, v in r.items()}
            for j, v in p.items():
                s = new.get(j, 0) - a * v
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            r = _primitive(new) if new else new
    return len(pivots)


def rank(M: RationalMatrix) -> int:
    if M.is_zero():
        return 0
    # eliminate along the smaller side
    src = M if M.nrows <= M.ncols else M.transpose()
    rows = [_integer_row(src._rows[i]) for i in sorted(src._rows)]
    return _rank_of_rows(rows)


def rref(M: RationalMatrix):
    """Reduced row echelon form over Fraction.
    Returns (pivot_columns, reduced_rows) with reduced_rows[t] the sparse row
    whose pivot is pivot_columns[t] (pivot entry 1)."""
    pivots = {}      # col -> row dict with entry 1 at col
    order = []
    for i in sorted(M._rows):
        r = dict(M._rows[i])
        # reduce against existing pivots
        changed = True
        while r and changed:
            changed = False
            for c in sorted(r):
                p = pivots.get(c)
                if p is not None:
                    a = r[c]
                    for j, v in p.items():
                        s = r.get(j, _ZERO) - a * v
                        if s:
                            r[j] = s
                        else:
                            r.pop(j, None)
                    changed = True
                    break
        if not r:
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {j: v * inv for j, v in r.items()}
        # back-substitute into existing pivot rows
        for pc, p in pivots.items():
            a = p.get(c)
            if a:
                for j, v in r.items():
                    s = p.get(j, _ZERO) - a * v
                    if s:
                        p[j] = s
                    else:
                        p.pop(j, None)
        pivots[c] = r
        order.append(c)
    cols = sorted(pivots)
    return cols, [pivots[c] for c in cols]


def rank_and_kernel(M: RationalMatrix):
    """Return (rank, K) where the columns of K are a basis of ker M.
    Free variables are set to unit vectors in increasing column order."""
    cols, rows = rref(M)
    pivset = set(cols)
    free = [j for j in range(M.ncols) if j not in pivset]
    fpos = {j: k for k, j in enumerate(free)}
    entries = []
    for k, j in enumerate(free):
        entries.append((j, k, _ONE))
    for c, r in zip(cols, rows):
        for j, v in r.items():
            if j != c and j in fpos:
                entries.append((c, fpos[j], -v))
    return len(cols), RationalMatrix.from_entries(M.ncols, len(free), entries)


def kernel(M: RationalMatrix) -> RationalMatrix:
    return rank_and_kernel(M)[1]


class InconsistentSystem(ValueError):
    """A x = b has no solution; ``witness`` is y with y^T A = 0, y^T b = 1."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


def solve(A: RationalMatrix, b) -> list:
    """One solution of A x = b (free variables 0), or InconsistentSystem."""
    b = [to_fraction(v) for v in b]
    if len(b) != A.nrows:
        raise ShapeError("right-hand side length mismatch")
    aug = A.hstack(RationalMatrix.column_vector(b))
    cols, rows = rref(aug)
    if A.ncols in cols:
        # left kernel vector with nonzero pairing against b
        Y = kernel(A.transpose())
        for k in range(Y.ncols):
            y = Y.column(k)
            s = sum((yi * bi for yi, bi in zip(y, b)), _ZERO)
            if s:
                y = [yi / s for yi in y]
                raise InconsistentSystem("linear system is inconsistent", y)
        raise AssertionError("inconsistent system without a left-kernel witness")
    x = [_ZERO] * A.ncols
    for c, r in zip(cols, rows):
        x[c] = r.get(A.ncols, _ZERO)
    return x


def column_space_basis(M: RationalMatrix) -> RationalMatrix:
    """Columns of M that are independent of the earlier ones."""
    cols, _ = rref(M)
    return M.select_cols(cols)


def is_invertible(M: RationalMatrix) -> bool:
    return M.nrows == M.ncols and rank(M) == M.nrows


def inverse(M: RationalMatrix) -> RationalMatrix:
    if M.nrows != M.ncols:
        raise ShapeError("only square matrices have inverses")
    n = M.nrows
    cols, rows = rref(M.hstack(RationalMatrix.identity(n)))
    if cols[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    entries = []
    for c, r in zip(cols[:n], rows[:n]):
        for j, v in r.items():
            if j >= n:
                entries.append((c, j - n, v))
    return RationalMatrix.from_entries(n, n, entries)


# ----------------------------------------------------------------------
# induced maps on cohomology

class NotAChainMap(RuntimeError):
    pass


@dataclass
class SubquotientMap:
    degree_dim_domain: int
    degree_dim_codomain: int
    domain_cycles: RationalMatrix
    domain_boundaries: RationalMatrix
    codomain_cycles: RationalMatrix
    codomain_boundaries: RationalMatrix
    representative_matrix: RationalMatrix
    induced_rank: int

    @property
    def bijective(self) -> bool:
        return (self.degree_dim_domain == self.degree_dim_codomain
                and self.representative_matrix.shape == (self.degree_dim_codomain, self.degree_dim_domain)
                and rank(self.representative_matrix) == self.degree_dim_domain)

    @property
    def bijective_by_ranks(self) -> bool:
        return self.degree_dim_domain == self.degree_dim_codomain == self.induced_rank


def _class_representatives(B: RationalMatrix, Z: RationalMatrix):
    """Columns of Z completing a basis of span(B) to one of span(B, Z)."""
    both = B.hstack(Z)
    cols, _ = rref(both)
    reps = [c - B.ncols for c in cols if c >= B.ncols]
    return Z.select_cols(reps)


def induced_cohomology_map(Dp, Dn, Dp2, Dn2, F, F_prev=None, F_next=None, reverse_order=False):
    """Map induced on H^n = ker Dn / im Dp by the degree-n block F.

    Dp: C^{n-1} -> C^n, Dn: C^n -> C^{n+1}, primed versions for the target.
    Adjacent blocks F_prev (degree n-1) and F_next (degree n+1), when given,
    are checked for commutation with the differentials.
    """
    if not (Dn @ Dp).is_zero() or not (Dn2 @ Dp2).is_zero():
        raise NotAChainMap("differential does not square to zero")
    if F_prev is not None and F @ Dp != Dp2 @ F_prev:
        raise NotAChainMap("F Dp != Dp' F_prev")
    if F_next is not None and F_next @ Dn != Dn2 @ F:
        raise NotAChainMap("F_next Dn != Dn' F")
    if not (Dn2 @ F @ kernel(Dn)).is_zero():
        raise NotAChainMap("F does not send cycles to cycles")

    Z = kernel(Dn)
    B = column_space_basis(Dp)
    Z2 = kernel(Dn2)
    B2 = column_space_basis(Dp2)
    if reverse_order and Z.ncols:
        Z = Z.select_cols(reversed(range(Z.ncols)))
    H = _class_representatives(B, Z)
    H2 = _class_representatives(B2, Z2)
    # express F h in the basis [B2 | H2] and keep the H2 coefficients
    basis2 = B2.hstack(H2)
    images = F @ H
    coeffs = []
    for k in range(images.ncols):
        x = solve(basis2, images.column(k))
        coeffs.append(x[B2.ncols:])
    rep = RationalMatrix.from_columns(coeffs, H2.ncols) if coeffs else RationalMatrix.zeros(H2.ncols, 0)
    # second route: rank of the induced map from dimension counts
    induced = rank((F @ Z).hstack(Dp2)) - rank(Dp2) if Z.ncols else 0
    return SubquotientMap(H.ncols, H2.ncols, Z, B, Z2, B2, rep, induced)


def cohomology_dim(Dp: RationalMatrix, Dn: RationalMatrix) -> int:
    """dim ker Dn - rank Dp."""
    return Dn.ncols - rank(Dn) - rank(Dp)
