"""Graded Baker-Campbell-Hausdorff components, exactly.

The series beta(X,Y) = log(exp X exp Y) is computed degree by degree from
the pair of derivation identities

    d/dX beta = C(ad beta)(X),      d/dY beta = C(-ad beta)(Y),

where C(x) = x/(e^x - 1) is the Bernoulli generating function.  Summing the
two identities, the degree-n component on the left is the Euler operator
acting on beta_n, i.e. n*beta_n, while on the right only beta_{<n} can
appear inside the adjoints; this solves the recursion with beta_1 = X + Y.
An independent oracle computes log(exp X exp Y) in the associative span and
pulls the result back through the left-normed bracketing projection.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactnum import bernoulli_normalized
from .freelie import (
    Alphabet,
    AssocPoly,
    FreeLieElement,
    dynkin_lie,
    evaluate_lie,
    expand_associative,
)

BCH_ALPHABET = Alphabet(["x", "y"])
BCH_ALPHABET3 = Alphabet(["x", "y", "z"])

DEFAULT_MAX_DEGREE = 8


class BchTable:
    """Immutable table of bigraded (and optionally trigraded) components."""

    __slots__ = ("max_degree", "bidegree", "tridegree")

    def __init__(self, max_degree: int, bidegree: dict, tridegree: dict | None = None):
        self.max_degree = max_degree
        self.bidegree = dict(bidegree)
        self.tridegree = dict(tridegree) if tridegree else {}

    def bigraded(self, i: int, j: int) -> FreeLieElement:
        if i < 0 or j < 0 or i + j > self.max_degree:
            raise ValueError(f"bidegree ({i},{j}) beyond table cap {self.max_degree}")
        return self.bidegree.get((i, j), FreeLieElement.zero(BCH_ALPHABET))

    def trigraded(self, i: int, j: int, k: int) -> FreeLieElement:
        if min(i, j, k) < 0 or i + j + k > self.max_degree:
            raise ValueError(
                f"tridegree ({i},{j},{k}) beyond table cap {self.max_degree}"
            )
        if not self.tridegree:
            raise ValueError("trigraded components were not built for this table")
        return self.tridegree.get((i, j, k), FreeLieElement.zero(BCH_ALPHABET3))


def build_table(max_degree: int = DEFAULT_MAX_DEGREE, tri: bool = False) -> BchTable:
    """Solve the recursion up to total degree ``max_degree``."""
    if max_degree < 1:
        raise ValueError("degree cap must be at least 1")
    x = FreeLieElement.generator(BCH_ALPHABET, "x")
    y = FreeLieElement.generator(BCH_ALPHABET, "y")
    beta_parts = [FreeLieElement.zero(BCH_ALPHABET), x + y]
    partial = x + y  # sum of the known lower-degree components
    for n in range(2, max_degree + 1):
        acc = FreeLieElement.zero(BCH_ALPHABET)
        term_x, term_y = x, y
        for k in range(n):
            ck = bernoulli_normalized(k)
            if ck:
                acc = acc + term_x.scale(ck)
                acc = acc + term_y.scale(ck if k % 2 == 0 else -ck)
            if k + 1 < n:
                term_x = partial.bracket(term_x, degree_cap=n)
                term_y = partial.bracket(term_y, degree_cap=n)
                if term_x.is_zero() and term_y.is_zero():
                    break
        beta_n = acc.degree_part(n).scale(Fraction(1, n))
        beta_parts.append(beta_n)
        partial = partial + beta_n
    bidegree: dict = {}
    for part in beta_parts[1:]:
        for md in part.multidegrees():
            bidegree[md] = part.multidegree_part(md)
    table = BchTable(max_degree, bidegree)
    if tri:
        table = BchTable(max_degree, bidegree, _compose_trivariate(table))
    return table


def bch_bigraded(i: int, j: int, table: BchTable) -> FreeLieElement:
    return table.bigraded(i, j)


def bch_trigraded(i: int, j: int, k: int, table: BchTable) -> FreeLieElement:
    return table.trigraded(i, j, k)


def _reinterpret(element: FreeLieElement, alphabet: Alphabet, index_map) -> FreeLieElement:
    """Transport along a strictly increasing letter map (keeps Lyndon words)."""
    return FreeLieElement(
        alphabet,
        {tuple(index_map[i] for i in w): c for w, c in element.terms.items()},
    )


def _series_sum(table: BchTable, alphabet, index_map) -> FreeLieElement:
    total = FreeLieElement.zero(alphabet)
    for part in table.bidegree.values():
        total = total + _reinterpret(part, alphabet, index_map)
    return total


def _compose_trivariate(table: BchTable, order: str = "left") -> dict:
    """Feed the bivariate law through itself: beta(beta(x,y),z) by default.

    Applying the law to two Lie elements is, in the associative span,
    just multiplication of their exponentials, so the outer application
    is evaluated there and pulled back through the bracketing
    projection, which certifies the result is again a Lie element.
    """
    cap = table.max_degree
    if order == "left":
        inner = _series_sum(table, BCH_ALPHABET3, {0: 0, 1: 1})  # beta(x,y)
        first = expand_associative(inner)
        second = AssocPoly.generator(BCH_ALPHABET3, "z")
    elif order == "right":
        inner = _series_sum(table, BCH_ALPHABET3, {0: 1, 1: 2})  # beta(y,z)
        first = AssocPoly.generator(BCH_ALPHABET3, "x")
        second = expand_associative(inner)
    else:
        raise ValueError("order must be 'left' or 'right'")
    product = exp_assoc(first, cap).mul(exp_assoc(second, cap), cap)
    lie = dynkin_lie(log_assoc(product, cap))
    return {md: lie.multidegree_part(md) for md in lie.multidegrees()}


# ---------------------------------------------------------------------------
# associative-logarithm oracle
# ---------------------------------------------------------------------------


def exp_assoc(p: AssocPoly, cap: int) -> AssocPoly:
    """exp of a constant-term-free associative polynomial, truncated."""
    if () in p.terms:
        raise ValueError("exp needs a zero constant term")
    acc = AssocPoly.unit(p.alphabet)
    power = AssocPoly.unit(p.alphabet)
    k = 0
    while True:
        k += 1
        power = power.mul(p, cap)
        if power.is_zero():
            break
        acc = acc + power.scale(Fraction(1, factorial(k)))
    return acc


def log_assoc(p: AssocPoly, cap: int) -> AssocPoly:
    """log of 1 + u where p = 1 + u, truncated above ``cap``."""
    u = p - AssocPoly.unit(p.alphabet)
    if () in u.terms:
        raise ValueError("log needs constant term exactly 1")
    acc = AssocPoly.zero(p.alphabet)
    power = AssocPoly.unit(p.alphabet)
    k = 0
    while True:
        k += 1
        power = power.mul(u, cap)
        if power.is_zero():
            break
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
    return acc


def bch_oracle(max_degree: int) -> dict:
    """Independent route: log(exp x exp y) in the associative span.

    Returns {(i, j): FreeLieElement}; the left-normed bracketing projection
    certifies that each graded piece is a genuine Lie element.
    """
    if max_degree < 1:
        raise ValueError("degree cap must be at least 1")
    x = AssocPoly.generator(BCH_ALPHABET, "x")
    y = AssocPoly.generator(BCH_ALPHABET, "y")
    product = exp_assoc(x, max_degree).mul(exp_assoc(y, max_degree), max_degree)
    lie = dynkin_lie(log_assoc(product, max_degree))
    out: dict = {}
    for md in lie.multidegrees():
        out[md] = lie.multidegree_part(md)
    return out


def bch_oracle_trivariate(max_degree: int) -> dict:
    """log(exp x exp y exp z) the same way, split by tridegree."""
    if max_degree < 1:
        raise ValueError("degree cap must be at least 1")
    gens = [AssocPoly.generator(BCH_ALPHABET3, lab) for lab in ("x", "y", "z")]
    product = exp_assoc(gens[0], max_degree)
    for g in gens[1:]:
        product = product.mul(exp_assoc(g, max_degree), max_degree)
    lie = dynkin_lie(log_assoc(product, max_degree))
    out: dict = {}
    for md in lie.multidegrees():
        out[md] = lie.multidegree_part(md)
    return out


# ---------------------------------------------------------------------------
# evaluation on nilpotent elements
# ---------------------------------------------------------------------------


def eval_bch(table: BchTable, u, v, nilpotency_order: int):
    """sum beta_{i,j}(u, v) in the algebra of u and v.

    ``nilpotency_order`` is the caller-certified bound: every bracket
    word of length >= nilpotency_order vanishes on these elements (for
    coefficients in the maximal ideal of a truncated polynomial line this
    is the truncation order).  The table must reach that far.
    """
    cap = nilpotency_order - 1
    if cap > table.max_degree:
        raise ValueError(
            f"nilpotency bound {nilpotency_order} exceeds table cap {table.max_degree}"
        )
    zero = u.scale(0)
    acc = zero
    for (i, j), part in sorted(table.bidegree.items()):
        if i + j > cap:
            continue
        acc = acc + evaluate_lie(
            part,
            {"x": u, "y": v},
            bracket=lambda a, b: a.bracket(b),
            add=lambda a, b: a + b,
            scale=lambda c, a: a.scale(c),
            zero=zero,
        )
    return acc


def eval_bch_trivariate(table: BchTable, u, v, w, nilpotency_order: int):
    """sum beta_{i,j,k}(u, v, w); the table must carry trigraded parts."""
    cap = nilpotency_order - 1
    if cap > table.max_degree:
        raise ValueError(
            f"nilpotency bound {nilpotency_order} exceeds table cap {table.max_degree}"
        )
    if not table.tridegree:
        raise ValueError("trigraded components were not built for this table")
    zero = u.scale(0)
    acc = zero
    for (i, j, k), part in sorted(table.tridegree.items()):
        if i + j + k > cap:
            continue
        acc = acc + evaluate_lie(
            part,
            {"x": u, "y": v, "z": w},
            bracket=lambda a, b: a.bracket(b),
            add=lambda a, b: a + b,
            scale=lambda c, a: a.scale(c),
            zero=zero,
        )
    return acc
