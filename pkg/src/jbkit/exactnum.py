"""Exact rational arithmetic: Bernoulli numbers and sparse linear algebra.

Everything in this package computes over Q.  The rational scalar type is
the standard-library ``fractions.Fraction`` (always normalized, hashable,
totally ordered), re-exported here as ``Rational`` so callers do not
depend on the backing type.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into an exact rational."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    """Render an exact rational as "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Bernoulli numbers
#
# Convention: B_n are the coefficients of x/(e^x - 1) = sum B_n x^n / n!,
# so B_1 = -1/2.  They are computed by inverting the power series
# D(x) = (e^x - 1)/x term by term: with D(x) = sum x^k/(k+1)!, the inverse
# C(x) = sum c_n x^n satisfies c_0 = 1 and c_n = -sum_{k=1}^{n} c_{n-k}/(k+1)!
# and B_n = n! * c_n.
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _c_coeff(n: int) -> Fraction:
    if n == 0:
        return ONE
    return -sum((_c_coeff(n - k) / factorial(k + 1) for k in range(1, n + 1)), ZERO)


def bernoulli(n: int) -> Fraction:
    """n-th Bernoulli number (B_1 = -1/2 convention), exact."""
    if n < 0:
        raise ValueError("Bernoulli numbers are indexed by n >= 0")
    return _c_coeff(n) * factorial(n)


def bernoulli_normalized(t: int) -> Fraction:
    """Normalized coefficient B_t / t!, the t-th Taylor coefficient of x/(e^x-1)."""
    if t < 0:
        raise ValueError("normalized Bernoulli coefficients are indexed by t >= 0")
    return _c_coeff(t)


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return comb(n, k)


# ---------------------------------------------------------------------------
# Sparse exact matrices and fraction-free elimination
# ---------------------------------------------------------------------------


class SparseRatMatrix:
    """Sparse matrix over Q: explicit shape, dict of nonzero entries.

    Entries are stored as ``{(i, j): Fraction}`` with zeros never kept.
    """

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (i, j), v in dict(entries).items():
                self[i, j] = v

    def __getitem__(self, key) -> Fraction:
        return self.entries.get(key, ZERO)

    def __setitem__(self, key, value) -> None:
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {key} outside {self.nrows}x{self.ncols} matrix")
        v = Fraction(value)
        if v == 0:
            self.entries.pop(key, None)
        else:
            self.entries[key] = v

    def __eq__(self, other):
        return (
            isinstance(other, SparseRatMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"SparseRatMatrix({self.nrows}x{self.ncols}, {len(self.entries)} nonzero)"

    def copy(self) -> "SparseRatMatrix":
        m = SparseRatMatrix(self.nrows, self.ncols)
        m.entries = dict(self.entries)
        return m

    @staticmethod
    def identity(n: int) -> "SparseRatMatrix":
        m = SparseRatMatrix(n, n)
        m.entries = {(i, i): ONE for i in range(n)}
        return m

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "SparseRatMatrix":
        m = SparseRatMatrix(self.ncols, self.nrows)
        m.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return m

    def add(self, other: "SparseRatMatrix") -> "SparseRatMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        m = self.copy()
        for key, v in other.entries.items():
            m[key] = m[key] + v
        return m

    def scale(self, c) -> "SparseRatMatrix":
        c = Fraction(c)
        m = SparseRatMatrix(self.nrows, self.ncols)
        if c != 0:
            m.entries = {key: c * v for key, v in self.entries.items()}
        return m

    def mul(self, other: "SparseRatMatrix") -> "SparseRatMatrix":
        """Sparse matrix product self @ other."""
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in product")
        rows_of_other: dict[int, list[tuple[int, Fraction]]] = {}
        for (i, j), v in other.entries.items():
            rows_of_other.setdefault(i, []).append((j, v))
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in rows_of_other.get(k, ()):
                key = (i, j)
                s = acc.get(key, ZERO) + a * b
                if s == 0:
                    acc.pop(key, None)
                else:
                    acc[key] = s
        m = SparseRatMatrix(self.nrows, other.ncols)
        m.entries = acc
        return m

    def apply(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        """Apply to a sparse column vector {index: coeff}; returns sparse vector."""
        out: dict[int, Fraction] = {}
        for (i, j), a in self.entries.items():
            c = vec.get(j)
            if c:
                s = out.get(i, ZERO) + a * c
                if s == 0:
                    out.pop(i, None)
                else:
                    out[i] = s
        return out

    def rows(self) -> dict[int, dict[int, Fraction]]:
        out: dict[int, dict[int, Fraction]] = {}
        for (i, j), v in self.entries.items():
            out.setdefault(i, {})[j] = v
        return out

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            dense[i][j] = v
        return dense

    @staticmethod
    def from_dense(rows) -> "SparseRatMatrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        m = SparseRatMatrix(nrows, ncols)
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                if v:
                    m[i, j] = Fraction(v)
        return m


def _integer_rows(matrix: SparseRatMatrix) -> list[dict[int, int]]:
    """Clear denominators row by row; elimination then stays in Z."""
    rows = []
    for _, row in sorted(matrix.rows().items()):
        scale = 1
        for v in row.values():
            scale = scale * v.denominator // gcd(scale, v.denominator)
        irow = {j: int(v * scale) for j, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        if g > 1:
            irow = {j: v // g for j, v in irow.items()}
        rows.append(irow)
    return rows


def _eliminate(rows: list[dict[int, int]]) -> dict[int, dict[int, int]]:
    """Fraction-free forward elimination.

    Returns echelon rows keyed by pivot column.  Row combinations use the
    cross-multiplication update p*r - a*q followed by a gcd division, so
    every intermediate value is an exact integer of controlled size.
    Pivot rows are chosen by smallest nonzero pivot magnitude.
    """
    echelon: dict[int, dict[int, int]] = {}
    pending = [r for r in rows if r]
    while pending:
        work: list[dict[int, int]] = []
        candidates = []
        lead = min(min(r) for r in pending)
        for r in pending:
            if min(r) == lead:
                candidates.append(r)
            else:
                work.append(r)
        if lead in echelon:
            pivot_row = echelon[lead]
        else:
            candidates.sort(key=lambda r: abs(r[lead]))
            pivot_row = candidates.pop(0)
            echelon[lead] = pivot_row
        p = pivot_row[lead]
        for r in candidates:
            a = r[lead]
            new: dict[int, int] = {}
            for j, v in r.items():
                new[j] = p * v
            for j, v in pivot_row.items():
                w = new.get(j, 0) - a * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                if g > 1:
                    new = {j: v // g for j, v in new.items()}
                work.append(new)
        pending = work
    return echelon


def rank_kernel(matrix: SparseRatMatrix) -> tuple[int, list[dict[int, Fraction]]]:
    """Exact rank and a basis of the right kernel {v : A v = 0}.

    Kernel vectors are sparse dicts {column index: Fraction}; one vector is
    produced per free column, with that free coordinate set to 1.
    """
    echelon = _eliminate(_integer_rows(matrix))
    rank = len(echelon)
    pivots = sorted(echelon)
    free_cols = [j for j in range(matrix.ncols) if j not in echelon]
    kernel: list[dict[int, Fraction]] = []
    for f in free_cols:
        v: dict[int, Fraction] = {f: ONE}
        # back-substitute pivot coordinates from the bottom up
        for c in reversed(pivots):
            row = echelon[c]
            s = ZERO
            for j, a in row.items():
                if j == c:
                    continue
                x = v.get(j)
                if x:
                    s += a * x
            if s:
                v[c] = -s / row[c]
        kernel.append(v)
    return rank, kernel


def rank(matrix: SparseRatMatrix) -> int:
    return rank_kernel(matrix)[0]


def solve(matrix: SparseRatMatrix, rhs: dict[int, Fraction]):
    """One exact solution of A x = b, or None when the system is inconsistent.

    ``rhs`` is a sparse column vector {row index: Fraction}.
    """
    aug = SparseRatMatrix(matrix.nrows, matrix.ncols + 1)
    aug.entries = dict(matrix.entries)
    for i, v in rhs.items():
        if v:
            aug[i, matrix.ncols] = v
    echelon = _eliminate(_integer_rows(aug))
    if matrix.ncols in echelon:
        return None  # a row reduced to 0 = nonzero
    x: dict[int, Fraction] = {}
    for c in sorted(echelon, reverse=True):
        row = echelon[c]
        s = Fraction(row.get(matrix.ncols, 0))
        for j, a in row.items():
            if j == c or j == matrix.ncols:
                continue
            xv = x.get(j)
            if xv:
                s -= a * xv
        if s:
            x[c] = s / row[c]
    return x
