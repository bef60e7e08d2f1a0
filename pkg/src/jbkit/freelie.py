"""Free Lie algebras in the Lyndon-word basis, with exact coefficients.

Words over an ordered alphabet are tuples of letter indices.  A Lyndon word
is strictly smaller than every proper suffix; the set of Lyndon words of a
given degree, each replaced by its standard-factorization bracketing,
is a basis of the corresponding graded piece of the free Lie algebra.
Normal forms are computed by expanding into the associative span and
peeling off Lyndon leading words, which is exact because the expansion of
a Lyndon bracketing is its own word plus lexicographically larger words.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from itertools import permutations

from .exactnum import ZERO, ONE, format_rational, parse_rational

Word = tuple  # tuple[int, ...]


class Alphabet:
    """Ordered generators with integer weights (default 1 each)."""

    __slots__ = ("labels", "weights", "_index")

    def __init__(self, labels, weights=None):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate generator labels")
        if not labels:
            raise ValueError("alphabet needs at least one generator")
        self.labels = labels
        self.weights = tuple(int(w) for w in weights) if weights else (1,) * len(labels)
        if len(self.weights) != len(labels):
            raise ValueError("one weight per generator")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        self._index = {lab: i for i, lab in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        return (
            isinstance(other, Alphabet)
            and self.labels == other.labels
            and self.weights == other.weights
        )

    def __repr__(self):
        return f"Alphabet({','.join(self.labels)})"

    def index(self, label: str) -> int:
        return self._index[label]

    def degree(self, word: Word) -> int:
        return sum(self.weights[i] for i in word)

    def multidegree(self, word: Word) -> tuple:
        counts = [0] * len(self.labels)
        for i in word:
            counts[i] += 1
        return tuple(counts)

    def word_str(self, word: Word) -> str:
        if all(len(lab) == 1 for lab in self.labels):
            return "".join(self.labels[i] for i in word)
        return "*".join(self.labels[i] for i in word)

    def parse_word(self, text: str) -> Word:
        if "*" in text:
            return tuple(self.index(part) for part in text.split("*"))
        return tuple(self.index(ch) for ch in text)


def is_lyndon(word: Word) -> bool:
    """True when the word is strictly smaller than all of its proper suffixes."""
    if not word:
        return False
    return all(word < word[i:] for i in range(1, len(word)))


def lyndon_words(n_letters: int, max_len: int):
    """All Lyndon words over {0..n_letters-1} of length <= max_len (Duval)."""
    if n_letters < 1 or max_len < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == n_letters - 1:
            w.pop()


def standard_factorization(word: Word) -> tuple[Word, Word]:
    """Split w = u.v with v the lexicographically least proper suffix.

    For Lyndon w both parts are Lyndon and u < v; the recursive bracketing
    [b(u), b(v)] is the basis element attached to w.
    """
    if len(word) < 2:
        raise ValueError("cannot factor a single letter")
    best = 1
    for i in range(2, len(word)):
        if word[i:] < word[best:]:
            best = i
    return word[:best], word[best:]


@lru_cache(maxsize=None)
def _bracketing(word: Word):
    if len(word) == 1:
        return word[0]
    u, v = standard_factorization(word)
    return (_bracketing(u), _bracketing(v))


@lru_cache(maxsize=None)
def _expand_word(word: Word) -> dict:
    """Associative expansion of the Lyndon bracketing; integer coefficients."""
    if len(word) == 1:
        return {word: 1}
    u, v = standard_factorization(word)
    a = _expand_word(u)
    b = _expand_word(v)
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            c = ca * cb
            k = wa + wb
            out[k] = out.get(k, 0) + c
            k = wb + wa
            out[k] = out.get(k, 0) - c
    return {k: v for k, v in out.items() if v}


class AssocPoly:
    """Polynomial in noncommuting generators: {word: Fraction}."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms=None):
        self.alphabet = alphabet
        self.terms: dict = {}
        if terms:
            for w, c in dict(terms).items():
                c = Fraction(c)
                if c:
                    self.terms[tuple(w)] = c

    @staticmethod
    def zero(alphabet):
        return AssocPoly(alphabet)

    @staticmethod
    def unit(alphabet):
        return AssocPoly(alphabet, {(): ONE})

    @staticmethod
    def generator(alphabet, label):
        return AssocPoly(alphabet, {(alphabet.index(label),): ONE})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, AssocPoly)
            and self.alphabet == other.alphabet
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        p = AssocPoly(self.alphabet)
        p.terms = out
        return p

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        p = AssocPoly(self.alphabet)
        if c:
            p.terms = {w: c * v for w, v in self.terms.items()}
        return p

    def mul(self, other: "AssocPoly", degree_cap=None) -> "AssocPoly":
        deg = self.alphabet.degree
        out: dict = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                if degree_cap is not None and deg(w) > degree_cap:
                    continue
                s = out.get(w, ZERO) + ca * cb
                if s:
                    out[w] = s
                else:
                    out.pop(w, None)
        p = AssocPoly(self.alphabet)
        p.terms = out
        return p

    def truncate(self, degree_cap: int) -> "AssocPoly":
        deg = self.alphabet.degree
        p = AssocPoly(self.alphabet)
        p.terms = {w: c for w, c in self.terms.items() if deg(w) <= degree_cap}
        return p

    def degree_part(self, n: int) -> "AssocPoly":
        deg = self.alphabet.degree
        p = AssocPoly(self.alphabet)
        p.terms = {w: c for w, c in self.terms.items() if deg(w) == n}
        return p

    def max_degree(self) -> int:
        deg = self.alphabet.degree
        return max((deg(w) for w in self.terms), default=0)


class LyndonBasisElement:
    """A Lyndon word together with its standard bracketing."""

    __slots__ = ("alphabet", "word")

    def __init__(self, alphabet: Alphabet, word):
        word = tuple(word)
        if not is_lyndon(word):
            raise ValueError(f"{word} is not a Lyndon word")
        if any(not 0 <= i < len(alphabet) for i in word):
            raise ValueError("letter index outside alphabet")
        self.alphabet = alphabet
        self.word = word

    def __eq__(self, other):
        return (
            isinstance(other, LyndonBasisElement)
            and self.alphabet == other.alphabet
            and self.word == other.word
        )

    def __hash__(self):
        return hash(self.word)

    def __repr__(self):
        return f"LyndonBasisElement({self.alphabet.word_str(self.word)})"

    @property
    def degree(self):
        return self.alphabet.degree(self.word)

    def standard_factorization(self):
        return standard_factorization(self.word)

    def bracketing(self):
        """Nested pairs of generator labels, e.g. ('x', ('x', 'y'))."""
        labels = self.alphabet.labels

        def walk(node):
            if isinstance(node, int):
                return labels[node]
            return (walk(node[0]), walk(node[1]))

        return walk(_bracketing(self.word))

    def expand(self) -> AssocPoly:
        p = AssocPoly(self.alphabet)
        p.terms = {w: Fraction(c) for w, c in _expand_word(self.word).items()}
        return p


def lyndon_basis(alphabet: Alphabet, degree: int) -> list:
    """Basis elements of the given weighted degree, in lexicographic order."""
    if degree < 1:
        return []
    min_w = min(alphabet.weights)
    out = []
    for word in lyndon_words(len(alphabet), degree // min_w):
        if alphabet.degree(word) == degree:
            out.append(LyndonBasisElement(alphabet, word))
    return out


class FreeLieElement:
    """Exact linear combination of Lyndon basis elements: {word: Fraction}."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: Alphabet, terms=None):
        self.alphabet = alphabet
        self.terms: dict = {}
        if terms:
            for w, c in dict(terms).items():
                w = tuple(w)
                c = Fraction(c)
                if not is_lyndon(w):
                    raise ValueError(f"{w} is not a Lyndon word")
                if c:
                    self.terms[w] = c

    @staticmethod
    def zero(alphabet):
        return FreeLieElement(alphabet)

    @staticmethod
    def generator(alphabet, label):
        return FreeLieElement(alphabet, {(alphabet.index(label),): ONE})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, FreeLieElement)
            and self.alphabet == other.alphabet
            and self.terms == other.terms
        )

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        e = FreeLieElement(self.alphabet)
        e.terms = out
        return e

    def __sub__(self, other):
        return self + other.scale(-1)

    def __repr__(self):
        if not self.terms:
            return "FreeLieElement(0)"
        bits = [
            f"{format_rational(c)}*[{self.alphabet.word_str(w)}]"
            for w, c in sorted(self.terms.items())
        ]
        return "FreeLieElement(" + " + ".join(bits) + ")"

    def scale(self, c):
        c = Fraction(c)
        e = FreeLieElement(self.alphabet)
        if c:
            e.terms = {w: c * v for w, v in self.terms.items()}
        return e

    def bracket(self, other: "FreeLieElement", degree_cap=None) -> "FreeLieElement":
        """[self, other], re-expressed in the Lyndon basis."""
        a = expand_associative(self)
        b = expand_associative(other)
        if degree_cap is not None:
            comm = a.mul(b, degree_cap) - b.mul(a, degree_cap)
        else:
            comm = a.mul(b) - b.mul(a)
        return _extract_lie(comm)

    def truncate(self, degree_cap: int) -> "FreeLieElement":
        deg = self.alphabet.degree
        e = FreeLieElement(self.alphabet)
        e.terms = {w: c for w, c in self.terms.items() if deg(w) <= degree_cap}
        return e

    def degree_part(self, n: int) -> "FreeLieElement":
        deg = self.alphabet.degree
        e = FreeLieElement(self.alphabet)
        e.terms = {w: c for w, c in self.terms.items() if deg(w) == n}
        return e

    def multidegree_part(self, multidegree) -> "FreeLieElement":
        multidegree = tuple(multidegree)
        e = FreeLieElement(self.alphabet)
        e.terms = {
            w: c
            for w, c in self.terms.items()
            if self.alphabet.multidegree(w) == multidegree
        }
        return e

    def multidegrees(self) -> set:
        return {self.alphabet.multidegree(w) for w in self.terms}

    def max_degree(self) -> int:
        deg = self.alphabet.degree
        return max((deg(w) for w in self.terms), default=0)

    def to_terms(self) -> list:
        """Serialization: [{"word": ..., "coeff": ...}] sorted by (degree, word)."""
        deg = self.alphabet.degree
        return [
            {"word": self.alphabet.word_str(w), "coeff": format_rational(c)}
            for w, c in sorted(self.terms.items(), key=lambda kv: (deg(kv[0]), kv[0]))
        ]

    @staticmethod
    def from_terms(alphabet: Alphabet, items) -> "FreeLieElement":
        terms = {}
        for item in items:
            w = alphabet.parse_word(item["word"])
            terms[w] = terms.get(w, ZERO) + parse_rational(item["coeff"])
        return FreeLieElement(alphabet, terms)


def expand_associative(element: FreeLieElement) -> AssocPoly:
    """Image of a Lie element in the associative (word) span."""
    out: dict = {}
    for word, coeff in element.terms.items():
        for w, c in _expand_word(word).items():
            s = out.get(w, ZERO) + coeff * c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
    p = AssocPoly(element.alphabet)
    p.terms = out
    return p


def _extract_lie(poly: AssocPoly) -> FreeLieElement:
    """Invert expand_associative by peeling lexicographically least words.

    The expansion of the bracketing of a Lyndon word w is w plus words that
    are strictly larger in the same multidegree, so the least remaining word
    must be Lyndon with the coefficient it will have in the basis; anything
    else means the input was not a Lie element.
    """
    remaining = dict(poly.terms)
    out: dict = {}
    while remaining:
        w = min(remaining)
        c = remaining[w]
        if not is_lyndon(w):
            raise ValueError(
                f"not a Lie element: leading word {poly.alphabet.word_str(w)}"
            )
        out[w] = c
        for w2, c2 in _expand_word(w).items():
            s = remaining.get(w2, ZERO) - c * c2
            if s:
                remaining[w2] = s
            else:
                remaining.pop(w2, None)
    e = FreeLieElement(poly.alphabet)
    e.terms = out
    return e


def _expr_to_assoc(alphabet: Alphabet, expr) -> AssocPoly:
    if isinstance(expr, FreeLieElement):
        return expand_associative(expr)
    if isinstance(expr, str):
        return AssocPoly.generator(alphabet, expr)
    if isinstance(expr, (list,)):
        acc = AssocPoly.zero(alphabet)
        for coeff, sub in expr:
            acc = acc + _expr_to_assoc(alphabet, sub).scale(coeff)
        return acc
    if isinstance(expr, tuple) and len(expr) == 2:
        a = _expr_to_assoc(alphabet, expr[0])
        b = _expr_to_assoc(alphabet, expr[1])
        return a.mul(b) - b.mul(a)
    raise TypeError(f"cannot interpret bracket expression {expr!r}")


def lie_normal_form(alphabet: Alphabet, expr) -> FreeLieElement:
    """Normal form of a formal bracket expression in the Lyndon basis.

    Expression grammar: a generator label, a pair (a, b) for the bracket
    [a, b], a list [(coeff, sub), ...] for linear combinations, or an
    existing FreeLieElement.  Raises ValueError when the expansion is not a
    Lie element (e.g. a hand-built combination violating Jacobi).
    """
    return _extract_lie(_expr_to_assoc(alphabet, expr))


def dynkin_lie(poly: AssocPoly) -> FreeLieElement:
    """Left-normed bracketing map applied degreewise, divided by the degree.

    On a Lie element e of homogeneous degree d the word-by-word bracketing
    w = a1...ad -> [[..[a1,a2],..],ad] returns d*e, so this map is the
    identity on Lie elements and provides an independent route from an
    associative polynomial back to the Lyndon basis.  Raises ValueError when
    the input has a constant term or is not a Lie element.
    """
    if () in poly.terms:
        raise ValueError("constant term present; not a Lie element")
    alphabet = poly.alphabet
    by_length: dict[int, dict] = {}
    for w, c in poly.terms.items():
        by_length.setdefault(len(w), {})[w] = c
    total = FreeLieElement.zero(alphabet)
    for length, terms in sorted(by_length.items()):
        acc: dict = {}
        for w, c in terms.items():
            for w2, c2 in _leftnormed_expand(w).items():
                s = acc.get(w2, ZERO) + c * c2
                if s:
                    acc[w2] = s
                else:
                    acc.pop(w2, None)
        p = AssocPoly(alphabet)
        p.terms = acc
        part = _extract_lie(p).scale(Fraction(1, length))
        total = total + part
    if expand_associative(total) != poly:
        raise ValueError("projection changed the element; input was not Lie")
    return total


@lru_cache(maxsize=None)
def _leftnormed_expand(word: Word) -> dict:
    """Associative expansion of [[..[a1,a2],..],ad] for a plain word."""
    if len(word) == 1:
        return {word: 1}
    prev = _leftnormed_expand(word[:-1])
    last = word[-1:]
    out: dict = {}
    for w, c in prev.items():
        k = w + last
        out[k] = out.get(k, 0) + c
        k = last + w
        out[k] = out.get(k, 0) - c
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# iterated adjoint monomials
# ---------------------------------------------------------------------------


def ad_monomial(alphabet: Alphabet, subset, i: int, j: int) -> FreeLieElement:
    """ad(T_1)...ad(T_{i+j-1})(T_{i+j}) with T_k the first letter iff k in subset.

    ``subset`` lists the positions (1-based, within 1..i+j) carrying the
    first generator; it must have size i.  The remaining positions carry the
    second generator.
    """
    if len(alphabet) < 2:
        raise ValueError("need a two-letter alphabet")
    subset = set(subset)
    n = i + j
    if len(subset) != i or not subset <= set(range(1, n + 1)):
        raise ValueError("subset must pick i positions among 1..i+j")
    letters = [0 if k in subset else 1 for k in range(1, n + 1)]
    expr = alphabet.labels[letters[-1]]
    for idx in reversed(letters[:-1]):
        expr = (alphabet.labels[idx], expr)
    return lie_normal_form(alphabet, expr)


def ad_monomial_sym(subset, i: int, j: int) -> FreeLieElement:
    """Symmetrized adjoint monomial over distinct slot variables.

    Works over the alphabet X1..Xi, Y1..Yj and averages ad_subset over all
    ways to feed the X's into the subset positions and the Y's into the
    rest: (1/i!j!) sum over both permutation groups.
    """
    labels = [f"X{k}" for k in range(1, i + 1)] + [f"Y{k}" for k in range(1, j + 1)]
    alphabet = Alphabet(labels)
    subset = set(subset)
    n = i + j
    if len(subset) != i or not subset <= set(range(1, n + 1)):
        raise ValueError("subset must pick i positions among 1..i+j")
    acc = FreeLieElement.zero(alphabet)
    for pi in permutations(range(i)):
        for rho in permutations(range(j)):
            xs = iter(pi)
            ys = iter(rho)
            letters = [
                next(xs) if k in subset else i + next(ys) for k in range(1, n + 1)
            ]
            expr = alphabet.labels[letters[-1]]
            for idx in reversed(letters[:-1]):
                expr = (alphabet.labels[idx], expr)
            acc = acc + lie_normal_form(alphabet, expr)
    return acc.scale(Fraction(1, factorial(i) * factorial(j)))


def evaluate_lie(element: FreeLieElement, assignment: dict, bracket, add, scale, zero):
    """Evaluate in any Lie algebra given images of the generators.

    ``assignment`` maps generator labels to target values; ``bracket``,
    ``add``, ``scale`` and ``zero`` supply the target operations.  Each
    Lyndon term is evaluated through its standard bracketing.
    """
    labels = element.alphabet.labels

    def walk(node):
        if isinstance(node, int):
            return assignment[labels[node]]
        return bracket(walk(node[0]), walk(node[1]))

    acc = zero
    for word, coeff in sorted(element.terms.items()):
        acc = add(acc, scale(coeff, walk(_bracketing(word))))
    return acc
