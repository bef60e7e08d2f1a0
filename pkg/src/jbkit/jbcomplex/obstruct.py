"""Extending a glued family one step up the coefficient line.

A family over Q[t]/(t^k) either extends to Q[t]/(t^(k+1)) or it does
not, and the failure is measured by one vector: pad the family with
zeros at t^k, apply the chain differential to its exponential, and read
off the surviving terms.  They always sit in single-factor monomials
tagged t^k, so they form a degree-two vector of the one-factor complex.
Its class modulo exact vectors is independent of the padding; the class
vanishes exactly when some correction at t^k repairs the family, and
the repaired family is returned fully re-validated.

Only one step at a time makes sense: over a longer extension the new
coefficients interact with themselves and the defect is no longer
linear in the correction.
"""

from __future__ import annotations

from fractions import Fraction

from ..exactnum import ZERO, solve
from ..liecore import ArtinLine, LieElement
from .assemble import _shared_table, chain_differential, format_monomial
from .cocycle import SpecialCocycle, element_chain, exp_chain, special_cocycle
from .sela import TotalComplex, _simplex_name

__all__ = ["ObstructionResult", "obstruction"]


class ObstructionResult:
    """Outcome of one extension step.

    residual is the raw defect vector {(simplex, basis index): coeff},
    cls its canonical reduction modulo exact vectors; vanishes says
    whether cls is zero, and lift is the re-validated extended family
    when it is (None otherwise).  power is the t exponent the defect
    lives at.
    """

    __slots__ = ("power", "residual", "cls", "vanishes", "lift")

    def __init__(self, power, residual, cls, lift):
        self.power = power
        self.residual = residual
        self.cls = cls
        self.vanishes = not cls
        self.lift = lift

    def describe(self, sela):
        if self.vanishes:
            return "extends: obstruction class vanishes at t^%d" % self.power
        parts = [
            "%s:%s %s" % (_simplex_name(s), sela.algebra(s).names[b], c)
            for (s, b), c in sorted(self.cls.items(), key=lambda kv: (len(kv[0][0]), kv[0]))
        ]
        return "obstructed at t^%d by [%s]" % (self.power, ", ".join(parts))

    def __repr__(self):
        return "ObstructionResult(power=%d, vanishes=%r, class terms=%d)" % (
            self.power, self.vanishes, len(self.cls)
        )


def _echelon_image(mat):
    """Fully reduced echelon rows spanning the column space of mat."""
    rows = []
    cols = {}
    for (r, c), v in mat.entries.items():
        cols.setdefault(c, {})[r] = v
    pivots = {}
    for c in sorted(cols):
        v = _sweep(pivots, cols[c])
        if not v:
            continue
        p = min(v)
        inv = v[p]
        row = {j: w / inv for j, w in v.items()}
        for q, other in pivots.items():
            w = other.get(p)
            if w:
                for j, x in row.items():
                    s = other.get(j, ZERO) - w * x
                    if s:
                        other[j] = s
                    else:
                        other.pop(j, None)
        pivots[p] = row
    return pivots


def _sweep(pivots, vec):
    v = dict(vec)
    changed = True
    while changed:
        changed = False
        for p in sorted(v):
            row = pivots.get(p)
            if row is None:
                continue
            c = v[p]
            for j, w in row.items():
                s = v.get(j, ZERO) - c * w
                if s:
                    v[j] = s
                else:
                    v.pop(j, None)
            changed = True
            break
    return v


def _extended(elt, lie, ring):
    if elt is None:
        return LieElement.zero(lie, ring)
    return LieElement(
        lie, ring, {i: ring.element(list(a.coeffs)) for i, a in elt.coeffs.items()}
    )


def _check_pad(pad, power, label):
    for s, elt in pad.items():
        for a in elt.coeffs.values():
            if any(c and q != power for q, c in enumerate(a.coeffs)):
                raise ValueError(
                    "%s padding on %s must be supported at t^%d only"
                    % (label, _simplex_name(s), power)
                )


def obstruction(cocycle, to_order, pad=None):
    """Obstruction to extending a validated family to the next order.

    to_order must be one more than the family's order; anything else is
    refused because the kernel ideal I is not in the socle then.  pad
    optionally replaces the zero padding: a pair of dictionaries of
    vertex and edge elements over the larger line supported at the top
    power, letting callers watch the class stay put while the residual
    moves.
    """
    small = cocycle.sela
    k = small.artin_order
    if to_order != k + 1:
        raise ValueError(
            "I not in the socle: only the one-step extension %d -> %d is linear"
            % (k, k + 1)
        )
    big = small.with_order(to_order)
    ring = ArtinLine(to_order)
    table = _shared_table(to_order - 1)

    phi = {
        v: _extended(cocycle.phi.get(v), big.algebra(v), ring)
        for v in big.all_simplices(1)
    }
    psi = {
        e: _extended(cocycle.psi.get(e), big.algebra(e), ring)
        for e in big.all_simplices(2)
    }
    if pad is not None:
        pad_phi, pad_psi = pad
        _check_pad(pad_phi, k, "vertex")
        _check_pad(pad_psi, k, "edge")
        for v, elt in pad_phi.items():
            phi[tuple(v)] = phi[tuple(v)] + elt
        for e, elt in pad_psi.items():
            psi[tuple(e)] = psi[tuple(e)] + elt

    w = {}
    for v, f in phi.items():
        if f.coeffs:
            for key, val in element_chain(big, v, f).items():
                w[key] = w.get(key, ZERO) + val
    for e, g in psi.items():
        if g.coeffs:
            for key, val in element_chain(big, e, g).items():
                w[key] = w.get(key, ZERO) + val
    residual_chain = chain_differential(big, exp_chain(big, w), table)

    residual = {}
    for (factors, q), c in residual_chain.items():
        if len(factors) != 1 or q != k:
            raise AssertionError(
                "defect escaped the socle sector at %s"
                % format_monomial(big, (factors, q))
            )
        residual[factors[0]] = c

    tot = TotalComplex(big)
    index2 = tot.index.get(2, {})
    vec = {}
    for sb, c in residual.items():
        row = index2.get(sb)
        if row is None:
            raise AssertionError(
                "defect term %s:%s is not a degree-two vector"
                % (_simplex_name(sb[0]), sb[1])
            )
        vec[row] = c
    up = tot.matrix(2).apply(vec)
    if up:
        raise AssertionError("defect vector is not closed")

    basis2 = tot.basis.get(2, [])
    image = _echelon_image(tot.matrix(1))
    reduced = _sweep(image, vec)
    cls = {basis2[r]: c for r, c in reduced.items()}

    lift = None
    if not cls:
        eta = solve(tot.matrix(1), vec)
        if eta is None:
            raise AssertionError("reduced class vanished but no preimage exists")
        basis1 = tot.basis.get(1, [])
        for col, c in (eta or {}).items():
            simplex, b = basis1[col]
            if len(simplex) == 3:
                raise AssertionError(
                    "correction needs a triangle component; the family shape "
                    "cannot absorb it"
                )
            bump = LieElement(
                big.algebra(simplex), ring, {b: ring.t_power(k, -c)}
            )
            if len(simplex) == 1:
                phi[simplex] = phi[simplex] + bump
            else:
                psi[simplex] = psi[simplex] + bump
        lift = special_cocycle(
            big,
            {v: f for v, f in phi.items() if f.coeffs},
            {e: g for e, g in psi.items() if g.coeffs},
            table,
        )
    return ObstructionResult(k, residual, cls, lift)
