"""Gluing data for Lie algebras indexed by simplices of an ordered set.

A gluing datum assigns a (possibly differential graded) Lie algebra to
every nonempty subset of at most three indices, together with a linear
"coface" map for every codimension-one inclusion of index sets.  The
stored coface matrices are the signed ones: for the inclusion obtained
by deleting position p from an (n+1)-element simplex the stored map is
(-1)^(n-p) times an honest Lie homomorphism.  Under this convention the
composite maps across any two-step inclusion sum to zero on the nose,
so the per-simplex algebras assemble into a total complex graded by
simplex dimension plus internal degree.

Vertices, edges and triangles are enough for the intended deformation
applications; higher simplices are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from ..exactnum import SparseRatMatrix, parse_rational, format_rational, ZERO
from ..liecore import StructLie, check_lie_axioms

__all__ = ["coface_sign", "Sela", "TotalComplex", "standard_complex"]


def coface_sign(inner, outer):
    """Sign of the codimension-one inclusion inner < outer.

    Deleting position p from the (n+1)-tuple outer gives (-1)^(n-p); the
    deleted entry sitting last gives +1.
    """
    if len(inner) + 1 != len(outer):
        raise ValueError("not a codimension-one inclusion")
    missing = [v for v in outer if v not in inner]
    if len(missing) != 1 or any(v not in outer for v in inner):
        raise ValueError("%r is not a face of %r" % (inner, outer))
    n = len(outer) - 1
    p = outer.index(missing[0])
    return 1 if (n - p) % 2 == 0 else -1


def _simplex_key(s):
    return (len(s), s)


_EMPTY = StructLie((), (), {})


class Sela:
    """Simplices with Lie algebras and signed coface matrices.

    algebras maps a simplex (sorted tuple of indices) to a StructLie;
    absent simplices mean the zero algebra.  cofaces maps a pair
    (inner, outer) to a SparseRatMatrix of shape dim(outer) x dim(inner);
    absent pairs mean the zero map.  artin_order is the nilpotency order
    of the coefficient line attached to the datum.
    """

    def __init__(self, indices, algebras, cofaces, artin_order):
        self.indices = tuple(indices)
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("duplicate indices")
        if sorted(self.indices) != list(self.indices):
            raise ValueError("indices must be listed in increasing order")
        if artin_order < 1:
            raise ValueError("coefficient order must be at least 1")
        self.artin_order = artin_order
        self.algebras = {}
        for simplex, lie in algebras.items():
            simplex = tuple(simplex)
            self._check_simplex(simplex)
            if lie is not None and lie.dim > 0:
                self.algebras[simplex] = lie
        self.cofaces = {}
        for (inner, outer), mat in cofaces.items():
            inner, outer = tuple(inner), tuple(outer)
            coface_sign(inner, outer)  # raises on malformed pairs
            if not mat.is_zero():
                self.cofaces[(inner, outer)] = mat

    def _check_simplex(self, simplex):
        if not simplex or len(simplex) > 3:
            raise ValueError("simplices must have one to three indices, got %r" % (simplex,))
        if sorted(simplex) != list(simplex) or len(set(simplex)) != len(simplex):
            raise ValueError("simplex %r is not strictly increasing" % (simplex,))
        for v in simplex:
            if v not in self.indices:
                raise ValueError("simplex %r uses unknown index %r" % (simplex, v))

    def algebra(self, simplex):
        return self.algebras.get(tuple(simplex), _EMPTY)

    def simplices(self, size=None):
        out = [s for s in self.algebras if size is None or len(s) == size]
        return sorted(out, key=_simplex_key)

    def all_simplices(self, size=None):
        """Every subset of the index set of the given size, present or not."""
        from itertools import combinations

        sizes = (size,) if size is not None else (1, 2, 3)
        out = []
        for k in sizes:
            out.extend(tuple(c) for c in combinations(self.indices, k))
        return out

    def coface(self, inner, outer):
        inner, outer = tuple(inner), tuple(outer)
        mat = self.cofaces.get((inner, outer))
        if mat is not None:
            return mat
        return SparseRatMatrix(self.algebra(outer).dim, self.algebra(inner).dim)

    def cofaces_from(self, inner):
        inner = tuple(inner)
        out = []
        for outer in self.all_simplices(len(inner) + 1):
            if all(v in outer for v in inner) and self.algebra(outer).dim:
                mat = self.coface(inner, outer)
                if not mat.is_zero():
                    out.append((outer, mat))
        return out

    # -- validation -------------------------------------------------

    def validate(self):
        """Return a list of human-readable problems; empty means valid."""
        problems = []
        for simplex in self.simplices():
            lie = self.algebras[simplex]
            for msg in check_lie_axioms(lie):
                problems.append("algebra %s: %s" % (_simplex_name(simplex), msg))
        for (inner, outer), mat in sorted(self.cofaces.items(), key=lambda kv: kv[0]):
            problems.extend(self._check_coface(inner, outer, mat))
        problems.extend(self._check_coface_squares())
        return problems

    def _check_coface(self, inner, outer, mat):
        src, dst = self.algebra(inner), self.algebra(outer)
        name = "coface %s->%s" % (_simplex_name(inner), _simplex_name(outer))
        if mat.nrows != dst.dim or mat.ncols != src.dim:
            return ["%s: shape %dx%d does not match %dx%d" % (name, mat.nrows, mat.ncols, dst.dim, src.dim)]
        problems = []
        for (r, c), v in mat.entries.items():
            if v and dst.degrees[r] != src.degrees[c]:
                problems.append("%s: entry (%d,%d) mixes internal degrees" % (name, r, c))
        sign = coface_sign(inner, outer)
        # sign * map must take brackets to brackets: r[a,b] = sign [ra, rb]
        for a in range(src.dim):
            for b in range(a, src.dim):
                lhs = mat.apply(_frac_vec(src.bracket_basis(a, b)))
                rhs = {}
                for c, va in _mat_column(mat, a).items():
                    for d, vb in _mat_column(mat, b).items():
                        for e, w in dst.bracket_basis(c, d).items():
                            _acc(rhs, e, va * vb * w * sign)
                if _clean(lhs) != _clean(rhs):
                    problems.append("%s: fails the signed homomorphism rule on basis pair (%d,%d)" % (name, a, b))
        # coface must commute with the internal differentials
        for b in range(src.dim):
            lhs = mat.apply(_frac_vec(src.differential_basis(b)))
            rhs = {}
            for c, v in _mat_column(mat, b).items():
                for e, w in dst.differential_basis(c).items():
                    _acc(rhs, e, v * w)
            if _clean(lhs) != _clean(rhs):
                problems.append("%s: does not commute with the internal differential at basis %d" % (name, b))
        return problems

    def _check_coface_squares(self):
        problems = []
        for inner in self.all_simplices(1):
            for outer in self.all_simplices(3):
                if not all(v in outer for v in inner):
                    continue
                total = SparseRatMatrix(self.algebra(outer).dim, self.algebra(inner).dim)
                for mid in self.all_simplices(2):
                    if all(v in mid for v in inner) and all(v in outer for v in mid):
                        total = total.add(self.coface(mid, outer).mul(self.coface(inner, mid)))
                if not total.is_zero():
                    problems.append(
                        "coface square %s->%s does not sum to zero"
                        % (_simplex_name(inner), _simplex_name(outer))
                    )
        return problems

    def with_order(self, order):
        """Same gluing datum over a different coefficient truncation."""
        return Sela(self.indices, self.algebras, self.cofaces, order)

    # -- restriction ------------------------------------------------

    def restrict(self, indices):
        """Sub-datum on a subset of the indices."""
        keep = tuple(sorted(indices))
        for v in keep:
            if v not in self.indices:
                raise ValueError("unknown index %r" % (v,))
        algebras = {s: lie for s, lie in self.algebras.items() if all(v in keep for v in s)}
        cofaces = {
            (a, b): m
            for (a, b), m in self.cofaces.items()
            if all(v in keep for v in b)
        }
        return Sela(keep, algebras, cofaces, self.artin_order)

    # -- serialization ----------------------------------------------

    def to_json(self):
        algebras = {}
        for simplex, lie in sorted(self.algebras.items(), key=lambda kv: _simplex_key(kv[0])):
            algebras[_simplex_name(simplex)] = lie.to_json()
        cofaces = []
        for (inner, outer), mat in sorted(self.cofaces.items(), key=lambda kv: kv[0]):
            cofaces.append(
                {
                    "from": _simplex_name(inner),
                    "to": _simplex_name(outer),
                    "matrix": _matrix_to_json(mat),
                }
            )
        return {
            "indices": list(self.indices),
            "artin_order": self.artin_order,
            "algebras": algebras,
            "cofaces": cofaces,
        }

    @staticmethod
    def from_json(data):
        indices = tuple(data["indices"])
        order = int(data.get("artin_order", 2))
        algebras = {}
        for key, alg in data.get("algebras", {}).items():
            algebras[_parse_simplex(key, indices)] = StructLie.from_json(alg)
        cofaces = {}
        for entry in data.get("cofaces", []):
            inner = _parse_simplex(entry["from"], indices)
            outer = _parse_simplex(entry["to"], indices)
            dst = algebras.get(outer, _EMPTY)
            src = algebras.get(inner, _EMPTY)
            cofaces[(inner, outer)] = _matrix_from_json(entry["matrix"], dst.dim, src.dim)
        return Sela(indices, algebras, cofaces, order)


def _simplex_name(simplex):
    parts = [str(v) for v in simplex]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return "|".join(parts)


def _parse_simplex(name, indices):
    lookup = {str(v): v for v in indices}
    if name in lookup:
        return (lookup[name],)
    parts = name.split("|") if "|" in name else list(name)
    try:
        return tuple(lookup[p] for p in parts)
    except KeyError:
        raise ValueError("simplex name %r does not match the index set" % name)


def _matrix_to_json(mat):
    return [[format_rational(mat[(r, c)]) for c in range(mat.ncols)] for r in range(mat.nrows)]


def _matrix_from_json(rows, nrows, ncols):
    if len(rows) != nrows or any(len(row) != ncols for row in rows):
        raise ValueError("matrix shape %dx%d expected" % (nrows, ncols))
    mat = SparseRatMatrix(nrows, ncols)
    for r, row in enumerate(rows):
        for c, v in enumerate(row):
            val = parse_rational(v)
            if val:
                mat[(r, c)] = val
    return mat


def _frac_vec(d):
    return {k: Fraction(v) for k, v in d.items()}


def _mat_column(mat, c):
    return {r: v for (r, cc), v in mat.entries.items() if cc == c and v}


def _acc(d, k, v):
    w = d.get(k, ZERO) + v
    if w:
        d[k] = w
    elif k in d:
        del d[k]


def _clean(d):
    return {k: v for k, v in d.items() if v}


class TotalComplex:
    """Direct sum of the per-simplex algebras, graded by total degree.

    The total degree of a basis vector living on a simplex S in internal
    degree e is (|S| - 1) + e.  The differential combines the stored
    signed cofaces with the internal differentials weighted by
    (-1)^(|S|-1); the coface-square and commutation rules make it square
    to zero.
    """

    def __init__(self, sela):
        self.sela = sela
        self.basis = {}
        for simplex in sela.simplices():
            lie = sela.algebras[simplex]
            for b in range(lie.dim):
                n = (len(simplex) - 1) + lie.degrees[b]
                self.basis.setdefault(n, []).append((simplex, b))
        for n in self.basis:
            self.basis[n].sort(key=lambda sb: (_simplex_key(sb[0]), sb[1]))
        self.index = {
            n: {sb: i for i, sb in enumerate(items)} for n, items in self.basis.items()
        }
        self.matrices = {}
        for n in sorted(self.basis):
            self.matrices[n] = self._build_matrix(n)

    def degrees(self):
        return sorted(self.basis)

    def dim(self, n):
        return len(self.basis.get(n, ()))

    def _build_matrix(self, n):
        src = self.basis.get(n, [])
        dst_index = self.index.get(n + 1, {})
        mat = SparseRatMatrix(len(dst_index), len(src))
        for col, (simplex, b) in enumerate(src):
            for (target, r, coeff) in self.differential_of(simplex, b):
                row = dst_index.get((target, r))
                if row is None:
                    continue
                mat[(row, col)] = mat[(row, col)] + coeff
        return mat

    def differential_of(self, simplex, b):
        """Differential of one basis vector as (simplex, basis, coeff) triples."""
        sela = self.sela
        out = []
        for outer, mat in sela.cofaces_from(simplex):
            for r, v in _mat_column(mat, b).items():
                out.append((outer, r, v))
        lie = sela.algebra(simplex)
        sign = -1 if (len(simplex) - 1) % 2 else 1
        for r, v in lie.differential_basis(b).items():
            out.append((simplex, r, Fraction(sign) * v))
        return out

    def matrix(self, n):
        if n in self.matrices:
            return self.matrices[n]
        return SparseRatMatrix(self.dim(n + 1), self.dim(n))

    def verify(self):
        """Composites of consecutive differentials; empty list if zero."""
        bad = []
        for n in self.degrees():
            prod = self.matrix(n + 1).mul(self.matrix(n))
            for (r, c), v in prod.entries.items():
                if v:
                    bad.append((n, self.basis[n][c], self.basis[n + 2][r], v))
        return bad

    def cohomology_dim(self, n):
        from ..exactnum import rank

        d_n = self.matrix(n)
        dim_n = self.dim(n)
        ker = dim_n - rank(d_n)
        if n - 1 in self.matrices:
            ker -= rank(self.matrices[n - 1])
        return ker


def standard_complex(sela):
    """Total complex carried by the gluing datum."""
    return TotalComplex(sela)
