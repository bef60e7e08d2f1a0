"""Monomial chain groups over a gluing datum and their exact differential.

A chain monomial is a sorted product of factors tagged with one power q
of the coefficient parameter; a factor is a single basis vector of one
per-simplex algebra.  With k factors the tag must satisfy k <= q < N
(N the truncation order), which realizes coefficients in the maximal
ideal of Q[t]/(t^N).  Factors super-commute with parity

    (simplex dimension + internal degree - 1) mod 2,

so odd factors never repeat inside a monomial, and the chain degree of
a monomial is the sum of the shifted factor degrees.

The differential extends five corestriction families by the derivation
rule over the remaining factors (Koszul signs from the parities above):

  one factor        signed cofaces plus (-1)^p times the internal
                    differential of the simplex,
  two factors on    graded bracket on the common vertex with the sign
  one vertex        (-1)^(e_x (e_y + 1)) on the ordered pair,
  vertex + t edge   normalized Bernoulli coefficient C_t, the coface
  factors           sign of (vertex < edge) to the t-th power, and the
                    symmetrized t-fold adjoint action,
  edge factors in   the trivariate bracket series: the three edges of a
  a triangle        triangle feed the slots of beta_{j,k,l} through the
                    stored coface maps, multilinearized without divided
                    powers,
  top vertex +      bracket of the restricted vertex element with the
  triangle factor   triangle factor, signed by the internal degree of
                    the vertex element; the slot word of the trivariate
                    series wraps at the largest vertex, whose two
                    insertion points do not cancel.

Every selection of factors is a labeled subset of positions; paired
with true exponential normalization of product chains this makes
d(exp w) close without stray factorials.  All other factor patterns
contribute zero.

Scope: d*d = 0 holds exactly for arbitrary gradings on covers without
2-simplices, and on covers with 2-simplices whenever every odd edge
element has vanishing self-bracket (in particular for all algebras in
internal degree zero).  An odd edge element y with [y, y] != 0 meeting
a triangle needs homotopy corrections to the slot series that this
module does not model; verify_d_squared is the guard for that regime.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations

from ..bch import build_table
from ..exactnum import ONE, ZERO, SparseRatMatrix, bernoulli_normalized, rank_kernel
from ..freelie import Alphabet, FreeLieElement, evaluate_lie
from .sela import coface_sign, _simplex_name

__all__ = [
    "JBComplex",
    "jb_assemble",
    "monomial_differential",
    "chain_differential",
    "verify_d_squared",
    "graded_pieces",
    "jb_cohomology",
    "deformation_ring_dimension",
    "euler_characteristic_check",
    "induced_chain_map",
    "format_monomial",
    "sort_word",
    "factor_key",
    "factor_parity",
    "factor_degree",
]


# -- factors and monomials ----------------------------------------------

def factor_key(f):
    simplex, idx = f
    return (len(simplex), simplex, idx)


def factor_parity(sela, f):
    simplex, idx = f
    e = sela.algebra(simplex).degrees[idx]
    # (p + e - 1) mod 2 with p = len(simplex) - 1
    return (len(simplex) + e) % 2


def factor_degree(sela, f):
    simplex, idx = f
    return len(simplex) + sela.algebra(simplex).degrees[idx] - 2


def monomial_degree(sela, mono):
    return sum(factor_degree(sela, f) for f in mono[0])


def sort_word(sela, word):
    """Canonical order of a factor word with its Koszul sign.

    Returns (sorted tuple, sign); (None, 0) when an odd factor repeats,
    which kills the monomial.
    """
    items = list(word)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and factor_key(items[j - 1]) > factor_key(items[j]):
            if factor_parity(sela, items[j - 1]) and factor_parity(sela, items[j]):
                sign = -sign
            items[j - 1], items[j] = items[j], items[j - 1]
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b and factor_parity(sela, a):
            return None, 0
    return tuple(items), sign


def format_monomial(sela, mono):
    factors, q = mono
    parts = ["%s:%s" % (_simplex_name(s), sela.algebra(s).names[b]) for s, b in factors]
    return "[%s] t^%d" % (" ".join(parts), q)


# -- scalar-coefficient elements for series evaluation -------------------

class _RatElt:
    """Sparse vector in one algebra with plain rational coefficients."""

    __slots__ = ("lie", "coeffs")

    def __init__(self, lie, coeffs=None):
        self.lie = lie
        self.coeffs = {i: c for i, c in (coeffs or {}).items() if c}

    def bracket(self, other):
        out = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                targets = self.lie.bracket_basis(a, b)
                if not targets:
                    continue
                p = ca * cb
                for c, w in targets.items():
                    s = out.get(c, ZERO) + p * w
                    if s:
                        out[c] = s
                    elif c in out:
                        del out[c]
        return _RatElt(self.lie, out)

    def __add__(self, other):
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            s = out.get(c, ZERO) + v
            if s:
                out[c] = s
            else:
                out.pop(c, None)
        return _RatElt(self.lie, out)

    def scale(self, c):
        return _RatElt(self.lie, {i: c * v for i, v in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs


# -- bracket-series components, multilinearized --------------------------

_TABLE_CACHE = {}
_POLAR_CACHE = {}


def _shared_table(degree):
    degree = max(degree, 1)
    if degree not in _TABLE_CACHE:
        _TABLE_CACHE[degree] = build_table(degree, tri=True)
    return _TABLE_CACHE[degree]


def _polarized(table, j, k, l):
    """Multidegree (j,k,l) series component as a multilinear element.

    Substitutes a sum of fresh letters for each slot and keeps the part
    linear in every letter (no divided powers), so evaluating on equal
    arguments returns j! k! l! times the original component.
    """
    key = (j, k, l)
    cached = _POLAR_CACHE.get(key)
    if cached is not None:
        return cached
    comp = table.trigraded(j, k, l)
    n = j + k + l
    alphabet = Alphabet(["a%d" % i for i in range(n)])
    gens = [FreeLieElement.generator(alphabet, lab) for lab in alphabet.labels]
    zero = FreeLieElement.zero(alphabet)

    def block(start, count):
        acc = zero
        for g in gens[start : start + count]:
            acc = acc + g
        return acc

    subst = evaluate_lie(
        comp,
        {"x": block(0, j), "y": block(j, k), "z": block(j + k, l)},
        bracket=lambda a, b: a.bracket(b),
        add=lambda a, b: a + b,
        scale=lambda c, a: a.scale(c),
        zero=zero,
    )
    cached = subst.multidegree_part((1,) * n)
    _POLAR_CACHE[key] = cached
    return cached


def _eval_polar(polar, args, lie):
    """Evaluate a multilinear element on sparse vectors in one algebra."""
    assignment = {"a%d" % i: _RatElt(lie, vec) for i, vec in enumerate(args)}
    res = evaluate_lie(
        polar,
        assignment,
        bracket=lambda u, v: u.bracket(v),
        add=lambda u, v: u + v,
        scale=lambda c, u: u.scale(c),
        zero=_RatElt(lie),
    )
    return res.coeffs


def _column(mat, c):
    return {r: v for (r, cc), v in mat.entries.items() if cc == c and v}


def _ad(lie, y, vec):
    out = {}
    for m, cm in vec.items():
        for c, w in lie.bracket_basis(y, m).items():
            s = out.get(c, ZERO) + cm * w
            if s:
                out[c] = s
            elif c in out:
                del out[c]
    return out


def _vertex_into_triangle(sela, vert, tri, a):
    """Orientation-free restriction of vertex basis element a into tri.

    Two-step coface composite with both orientation signs divided back
    out; the coface squares make the two through-edges agree, so use
    whichever is present.
    """
    v = vert[0]
    for edge in combinations(tri, 2):
        if v not in edge or sela.algebra(edge).dim == 0:
            continue
        corr = Fraction(coface_sign(vert, edge) * coface_sign(edge, tri))
        step = _column(sela.coface(vert, edge), a)
        out = {}
        for m, cm in step.items():
            for c, w in _column(sela.coface(edge, tri), m).items():
                s = out.get(c, ZERO) + corr * cm * w
                if s:
                    out[c] = s
                elif c in out:
                    del out[c]
        return out
    return {}


# -- the differential of one monomial -------------------------------------

def monomial_differential(sela, mono, table=None):
    """d of one basis monomial as a sparse chain {monomial: Fraction}."""
    if table is None:
        table = _shared_table(sela.artin_order - 1)
    factors, q = mono
    k = len(factors)
    parities = [factor_parity(sela, f) for f in factors]
    out = {}

    def emit(selected, results):
        # selected positions move to the front of the word: each one
        # passes the unselected odd factors on its left
        sel = set(selected)
        ext = 0
        for p in selected:
            if parities[p]:
                ext += sum(parities[t] for t in range(p) if t not in sel)
        extract_sign = -1 if ext % 2 else 1
        remainder = tuple(f for t, f in enumerate(factors) if t not in sel)
        rem_par = [parities[t] for t in range(k) if t not in sel]
        for g, coeff in results:
            if not coeff:
                continue
            pg = factor_parity(sela, g)
            if pg and g in remainder:
                continue  # odd square
            passed = sum(
                pi for f2, pi in zip(remainder, rem_par) if factor_key(f2) < factor_key(g)
            )
            merge_sign = -1 if (pg and passed % 2) else 1
            word = tuple(sorted(remainder + (g,), key=factor_key))
            target = (word, q)
            val = out.get(target, ZERO) + coeff * extract_sign * merge_sign
            if val:
                out[target] = val
            else:
                out.pop(target, None)

    # one factor: cofaces and the internal differential
    for i, f in enumerate(factors):
        simplex, b = f
        results = []
        for outer, mat in sela.cofaces_from(simplex):
            for r, v in _column(mat, b).items():
                results.append(((outer, r), v))
        lie = sela.algebra(simplex)
        internal_sign = Fraction(-1 if (len(simplex) - 1) % 2 else 1)
        for r, v in lie.differential_basis(b).items():
            results.append(((simplex, r), internal_sign * v))
        emit((i,), results)

    # two factors on one vertex: graded bracket
    for i, j in combinations(range(k), 2):
        si, ai = factors[i]
        sj, aj = factors[j]
        if len(si) == 1 and si == sj:
            lie = sela.algebra(si)
            s = -1 if (lie.degrees[ai] * (lie.degrees[aj] + 1)) % 2 else 1
            results = [
                ((si, c), Fraction(s) * w) for c, w in lie.bracket_basis(ai, aj).items()
            ]
            emit((i, j), results)

    # vertex factor transported along edge factors
    for i in range(k):
        si, ai = factors[i]
        if len(si) != 1:
            continue
        v = si[0]
        by_edge = {}
        for t in range(k):
            st = factors[t][0]
            if t != i and len(st) == 2 and v in st:
                by_edge.setdefault(st, []).append(t)
        for e, positions in by_edge.items():
            lie_e = sela.algebra(e)
            rx = _column(sela.coface(si, e), ai)
            if not rx:
                continue
            eps = coface_sign(si, e)
            for t_count in range(1, len(positions) + 1):
                ct = bernoulli_normalized(t_count)
                if not ct:
                    continue
                scalar = ct * (1 if eps > 0 or t_count % 2 == 0 else -1)
                for subset in combinations(positions, t_count):
                    idxs = [factors[p][1] for p in subset]
                    acc = {}
                    for perm in permutations(idxs):
                        vec = dict(rx)
                        for y in reversed(perm):
                            vec = _ad(lie_e, y, vec)
                            if not vec:
                                break
                        for c, w in vec.items():
                            s = acc.get(c, ZERO) + w
                            if s:
                                acc[c] = s
                            elif c in acc:
                                del acc[c]
                    results = [((e, c), scalar * w) for c, w in acc.items()]
                    emit(tuple(sorted((i,) + subset)), results)

    # top vertex of a triangle acting on a triangle factor: bracket with
    # the restricted vertex element, signed by its internal degree.  The
    # slot word of the trivariate series wraps at the largest vertex,
    # whose two insertion points do not cancel.
    for i, j in combinations(range(k), 2):
        si, ai = factors[i]
        sj, aj = factors[j]
        if len(si) == 1 and len(sj) == 3 and si[0] == sj[2]:
            lie_t = sela.algebra(sj)
            coeff = Fraction(-1 if sela.algebra(si).degrees[ai] % 2 else 1)
            jx = _vertex_into_triangle(sela, si, sj, ai)
            acc = {}
            for m, cm in jx.items():
                for c, w in lie_t.bracket_basis(m, aj).items():
                    s = acc.get(c, ZERO) + cm * w
                    if s:
                        acc[c] = s
                    elif c in acc:
                        del acc[c]
            results = [((sj, c), coeff * w) for c, w in acc.items()]
            emit((i, j), results)

    # edge factors feeding the slots of a triangle
    for tri in sela.simplices(3):
        a0, a1, a2 = tri
        slot_edges = ((a0, a2), (a0, a1), (a1, a2))  # x, y, z slots
        slot_positions = [
            [t for t in range(k) if factors[t][0] == e] for e in slot_edges
        ]
        lie_t = sela.algebra(tri)
        for qx in _subsets(slot_positions[0]):
            for qy in _subsets(slot_positions[1]):
                for qz in _subsets(slot_positions[2]):
                    n = len(qx) + len(qy) + len(qz)
                    if n < 2:
                        continue
                    polar = _polarized(table, len(qx), len(qy), len(qz))
                    if polar.is_zero():
                        continue
                    args = []
                    dead = False
                    for e, sel in zip(slot_edges, (qx, qy, qz)):
                        rmat = sela.coface(e, tri)
                        for p in sel:
                            col = _column(rmat, factors[p][1])
                            if not col:
                                dead = True
                                break
                            args.append(col)
                        if dead:
                            break
                    if dead:
                        continue
                    value = _eval_polar(polar, args, lie_t)
                    results = [((tri, c), w) for c, w in value.items()]
                    emit(tuple(sorted(qx + qy + qz)), results)

    return out


def _subsets(positions):
    out = [()]
    for t in range(1, len(positions) + 1):
        out.extend(combinations(positions, t))
    return out


def chain_differential(sela, chain, table=None):
    """d of a sparse chain {monomial: Fraction}."""
    if table is None:
        table = _shared_table(sela.artin_order - 1)
    out = {}
    for mono, coeff in chain.items():
        if not coeff:
            continue
        for target, v in monomial_differential(sela, mono, table).items():
            s = out.get(target, ZERO) + coeff * v
            if s:
                out[target] = s
            else:
                out.pop(target, None)
    return out


# -- the assembled complex -------------------------------------------------

class JBComplex:
    """Enumerated monomial bases with sparse differential matrices.

    degree_window restricts enumeration to chain degrees lo..hi
    (inclusive); None enumerates everything the truncation order
    admits.  sym_cap bounds the factor count and must not truncate:
    anything below N-1 changes the complex and is refused.
    """

    def __init__(self, sela, degree_window=None, sym_cap=None):
        order = sela.artin_order
        if sym_cap is not None and sym_cap < order - 1:
            raise ValueError(
                "symmetric-power cap %d is below the nilpotency bound %d"
                % (sym_cap, order - 1)
            )
        self.sela = sela
        self.order = order
        if degree_window is not None:
            lo, hi = degree_window
            if lo > hi:
                raise ValueError("empty degree window")
            self.window = (lo, hi)
        else:
            self.window = None
        self.table = _shared_table(order - 1)
        self._enumerate()
        self._assemble()

    # enumeration is deterministic: factors ordered by (simplex size,
    # simplex, basis index), monomials by (factor count, factors, q)
    def _enumerate(self):
        sela = self.sela
        factors = []
        for simplex in sela.simplices():
            for b in range(sela.algebras[simplex].dim):
                factors.append((simplex, b))
        factors.sort(key=factor_key)
        self.basis = {}
        for count in range(1, self.order):
            for combo in combinations_with_replacement(factors, count):
                if any(
                    a == b and factor_parity(sela, a)
                    for a, b in zip(combo, combo[1:])
                ):
                    continue
                deg = sum(factor_degree(sela, f) for f in combo)
                if self.window is not None and not (
                    self.window[0] <= deg <= self.window[1]
                ):
                    continue
                for q in range(count, self.order):
                    self.basis.setdefault(deg, []).append((combo, q))
        for deg in self.basis:
            self.basis[deg].sort(key=lambda m: (len(m[0]), m[0], m[1]))
        self.index = {
            deg: {mono: i for i, mono in enumerate(monos)}
            for deg, monos in self.basis.items()
        }

    def _assemble(self):
        self.matrices = {}
        for deg in sorted(self.basis):
            if self.window is not None and deg + 1 > self.window[1]:
                continue
            rows = self.index.get(deg + 1, {})
            mat = SparseRatMatrix(len(rows), len(self.basis[deg]))
            for col, mono in enumerate(self.basis[deg]):
                for target, v in monomial_differential(self.sela, mono, self.table).items():
                    row = rows.get(target)
                    if row is None:
                        raise AssertionError(
                            "differential left the enumerated basis: %s -> %s"
                            % (format_monomial(self.sela, mono),
                               format_monomial(self.sela, target))
                        )
                    mat[row, col] = mat[row, col] + v
            self.matrices[deg] = mat

    def degrees(self):
        return sorted(self.basis)

    def dim(self, degree):
        return len(self.basis.get(degree, ()))

    def matrix(self, degree):
        if degree in self.matrices:
            return self.matrices[degree]
        return SparseRatMatrix(self.dim(degree + 1), self.dim(degree))

    def differential_of_chain(self, chain):
        return chain_differential(self.sela, chain, self.table)

    def monomials(self, degree):
        return list(self.basis.get(degree, ()))


def jb_assemble(sela, degree_window=None, sym_cap=None):
    """Enumerate the chain groups of a gluing datum and assemble d."""
    return JBComplex(sela, degree_window, sym_cap)


# -- verification and invariants -------------------------------------------

def verify_d_squared(jb):
    """All compositions d(d(monomial)); empty list means they vanish.

    Failures come back as (degree, source monomial, target monomial,
    coefficient) with the monomials formatted for reading.
    """
    bad = []
    for deg in jb.degrees():
        nxt = deg + 1
        if nxt not in jb.matrices:
            continue
        if jb.window is not None and deg not in jb.matrices:
            continue
        prod = jb.matrix(nxt).mul(jb.matrix(deg))
        for (r, c), v in sorted(prod.entries.items()):
            bad.append(
                (
                    deg,
                    format_monomial(jb.sela, jb.basis[deg][c]),
                    format_monomial(jb.sela, jb.basis[deg + 2][r]),
                    v,
                )
            )
    return bad


def graded_pieces(jb, count):
    """Dimensions per degree of the count-factor slice of the filtration."""
    if count < 1:
        raise ValueError("factor count must be positive")
    out = {}
    for deg, monos in sorted(jb.basis.items()):
        c = sum(1 for fs, _ in monos if len(fs) == count)
        if c:
            out[deg] = c
    return out


class _ClassReducer:
    """Incremental row reduction used to pick cohomology representatives."""

    def __init__(self):
        self.rows = {}

    def insert(self, vec):
        """Reduce against stored rows; store and report True if new."""
        v = dict(vec)
        while v:
            p = min(v)
            row = self.rows.get(p)
            if row is None:
                pivot = v[p]
                self.rows[p] = {j: w / pivot for j, w in v.items()}
                return True
            c = v[p]
            for j, w in row.items():
                s = v.get(j, ZERO) - c * w
                if s:
                    v[j] = s
                else:
                    v.pop(j, None)
        return False


def jb_cohomology(jb, degree):
    """Dimension and representative chains in one degree.

    Needs the degrees degree-1 .. degree+1 inside the window; the
    representatives are kernel vectors of d that stay independent after
    the image columns of the previous d are swept in first.
    """
    if jb.window is not None:
        lo, hi = jb.window
        if lo > degree - 1 or hi < degree + 1:
            raise ValueError(
                "degree window %s too small for cohomology in degree %d"
                % (jb.window, degree)
            )
    _, kernel = rank_kernel(jb.matrix(degree))
    reducer = _ClassReducer()
    prev = jb.matrix(degree - 1)
    image_cols = {}
    for (r, c), v in prev.entries.items():
        image_cols.setdefault(c, {})[r] = v
    for c in sorted(image_cols):
        reducer.insert(image_cols[c])
    monos = jb.basis.get(degree, [])
    reps = []
    for vec in kernel:
        if reducer.insert(vec):
            reps.append({monos[i]: v for i, v in sorted(vec.items())})
    return len(reps), reps


def deformation_ring_dimension(jb):
    """1 + dim of degree-zero cohomology: the unit plus dual generators."""
    return 1 + jb_cohomology(jb, 0)[0]


def euler_characteristic_check(jb):
    """Alternating sums of chain and cohomology dimensions must agree."""
    if jb.window is not None:
        raise ValueError("needs the full complex (no degree window)")
    chain = 0
    coh = 0
    for deg in jb.degrees():
        s = -1 if deg % 2 else 1
        chain += s * jb.dim(deg)
        coh += s * jb_cohomology(jb, deg)[0]
    return {"chain": chain, "cohomology": coh, "equal": chain == coh}


def induced_chain_map(source, target, morphism):
    """Degree-wise matrices induced by per-simplex morphism matrices.

    morphism maps a simplex to the matrix of a degree-preserving Lie
    morphism into the target algebra on the same simplex (absent means
    zero); monomials go to products of factor images, resorted with
    Koszul signs.
    """
    if source.order != target.order:
        raise ValueError("truncation orders differ")
    out = {}
    for deg in source.degrees():
        rows = target.index.get(deg, {})
        mat = SparseRatMatrix(len(rows), source.dim(deg))
        for col, (factors, q) in enumerate(source.basis[deg]):
            words = {(): ONE}
            for simplex, b in factors:
                mor = morphism.get(simplex)
                img = _column(mor, b) if mor is not None else {}
                new = {}
                for word, c in words.items():
                    for r, w in img.items():
                        nw = word + ((simplex, r),)
                        s = new.get(nw, ZERO) + c * w
                        if s:
                            new[nw] = s
                        else:
                            new.pop(nw, None)
                words = new
                if not words:
                    break
            for word, c in words.items():
                sorted_word, sign = sort_word(target.sela, word)
                if sorted_word is None:
                    continue
                row = rows.get((sorted_word, q))
                if row is None:
                    raise ValueError(
                        "image monomial %s not enumerated in the target"
                        % format_monomial(target.sela, (sorted_word, q))
                    )
                mat[row, col] = mat[row, col] + c * sign
        out[deg] = mat
    return out
