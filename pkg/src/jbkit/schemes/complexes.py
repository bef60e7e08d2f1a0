"""Bounded complexes of free modules with polynomial differentials.

A complex stores its lowest degree, the rank in each degree, and one
matrix per adjacent pair; construction verifies that adjacent matrices
compose to zero, entry by entry.  The JSON form keeps polynomials as
parseable strings so complexes can cross process boundaries.
"""

from __future__ import annotations

from itertools import combinations

from .poly import Poly, parse_poly

__all__ = ["PolyComplex", "koszul_resolution", "hypersurface_resolution"]


def _zero_matrix(vars, order, rows, cols):
    z = Poly.zero(vars, order)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def _mat_mul(a, b, vars, order):
    if not a or not b:
        return ()
    rows, mid, cols = len(a), len(b), len(b[0]) if b else 0
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            acc = Poly.zero(vars, order)
            for m in range(mid):
                acc = acc + a[r][m] * b[m][c]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


class PolyComplex:
    """Free modules F^start .. F^(start+len-1) and the maps between them.

    maps[k] sends F^(start+k) to F^(start+k+1) and has shape
    ranks[k+1] x ranks[k].
    """

    __slots__ = ("vars", "order", "start", "ranks", "maps")

    def __init__(self, vars, start, ranks, maps, order="grevlex"):
        self.vars = tuple(vars)
        self.order = order
        self.start = int(start)
        self.ranks = tuple(int(r) for r in ranks)
        if any(r < 0 for r in self.ranks):
            raise ValueError("negative rank")
        if len(maps) != max(len(self.ranks) - 1, 0):
            raise ValueError(
                "expected %d maps for %d terms, got %d"
                % (max(len(self.ranks) - 1, 0), len(self.ranks), len(maps))
            )
        fixed = []
        for k, mat in enumerate(maps):
            mat = tuple(tuple(row) for row in mat)
            if len(mat) != self.ranks[k + 1] or any(
                len(row) != self.ranks[k] for row in mat
            ):
                raise ValueError(
                    "map %d has shape %dx%d, expected %dx%d"
                    % (
                        k,
                        len(mat),
                        len(mat[0]) if mat else 0,
                        self.ranks[k + 1],
                        self.ranks[k],
                    )
                )
            for row in mat:
                for p in row:
                    if p.vars != self.vars:
                        raise ValueError("matrix entry over the wrong variables")
            fixed.append(mat)
        self.maps = tuple(fixed)
        bad = self.composition_defects()
        if bad:
            k, r, c, p = bad[0]
            raise ValueError(
                "not a complex: map %d then %d sends column %d to row %d entry %s"
                % (k, k + 1, c, r, p)
            )

    def degrees(self):
        return range(self.start, self.start + len(self.ranks))

    def rank(self, degree):
        k = degree - self.start
        if 0 <= k < len(self.ranks):
            return self.ranks[k]
        return 0

    def matrix(self, degree):
        """The map leaving the given degree, zero-shaped when absent."""
        k = degree - self.start
        if 0 <= k < len(self.maps):
            return self.maps[k]
        return _zero_matrix(self.vars, self.order, self.rank(degree + 1), self.rank(degree))

    def composition_defects(self):
        out = []
        for k in range(len(self.maps) - 1):
            prod = _mat_mul(self.maps[k + 1], self.maps[k], self.vars, self.order)
            for r, row in enumerate(prod):
                for c, p in enumerate(row):
                    if not p.is_zero():
                        out.append((k, r, c, p))
        return out

    # -- serialization ----------------------------------------------------

    def to_json(self):
        return {
            "vars": list(self.vars),
            "order": self.order,
            "start": self.start,
            "ranks": list(self.ranks),
            "maps": [
                [[str(p) for p in row] for row in mat] for mat in self.maps
            ],
        }

    @staticmethod
    def from_json(data):
        vars = tuple(data["vars"])
        order = data.get("order", "grevlex")
        maps = [
            [[parse_poly(s, vars, order) for s in row] for row in mat]
            for mat in data["maps"]
        ]
        return PolyComplex(vars, data.get("start", 0), data["ranks"], maps, order)


def koszul_resolution(fs, order="grevlex"):
    """Koszul complex on a regular sequence, augmented by the full ring.

    Exactness is the caller's assertion for two or more elements; the
    complex property itself is verified on construction.  Degrees run
    from 1-c to 1 with the coordinate ring on top.
    """
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one element")
    vars = fs[0].vars
    c = len(fs)
    for f in fs:
        if f.vars != vars:
            raise ValueError("elements use different variable lists")
    subsets = {
        k: list(combinations(range(c), k)) for k in range(c + 1)
    }
    index = {k: {s: i for i, s in enumerate(subsets[k])} for k in subsets}
    ranks = [len(subsets[c - j]) for j in range(c + 1)]
    zero = Poly.zero(vars, order)
    maps = []
    for j in range(c):
        k = c - j  # source exterior power
        mat = [[zero for _ in subsets[k]] for _ in subsets[k - 1]]
        for col, s in enumerate(subsets[k]):
            for pos, i in enumerate(s):
                rest = s[:pos] + s[pos + 1:]
                row = index[k - 1][rest]
                sign = -1 if pos % 2 else 1
                mat[row][col] = mat[row][col] + fs[i].scale(sign)
        maps.append(mat)
    return PolyComplex(vars, 1 - c, ranks, maps, order)


def hypersurface_resolution(f, order="grevlex"):
    """Two terms, one map: the distinguished generator goes to f."""
    return koszul_resolution([f], order)
