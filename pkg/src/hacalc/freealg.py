"""Lifted algebras, truncated tensor algebras and noncommutative forms.

A :class:`LiftSpec` is a free module W = V^r with a bilinear (possibly
nonassociative) multiplication ``mu``.  Even forms ``x0 dx1 ... dx2k`` over
W are identified with the non-unital tensor algebra T W by

    iota(x0 dx1 ... dx2k) = x0 (x) prod_i (mu(x_{2i-1}, x_{2i}) - x_{2i-1} (x) x_{2i})

and the Fedosov product is the transported concatenation product.
Coefficients are exact rationals by default; :class:`PadicScalar` values
are accepted and mix freely with them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, NamedTuple, Optional, Tuple

from .errors import PreconditionError
from .padic import PadicScalar, _is_prime, valuation

Word = Tuple[int, ...]


def _num(x):
    """Exact coefficient; integral values become ints (much faster than Fraction)."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _nonzero(x) -> bool:
    if type(x) is int:
        return x != 0
    if isinstance(x, PadicScalar):
        return not x.is_zero()
    return x != 0


def _acc(d: dict, key, c):
    if key in d:
        s = d[key] + c
        if _nonzero(s):
            d[key] = s
        else:
            del d[key]
    elif _nonzero(c):
        d[key] = c


class FormMonomial(NamedTuple):
    """``x_head dx_t1 ... dx_tn``; ``head=None`` stands for the unit of W+."""

    head: Optional[int]
    tail: Tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.tail)

    def key(self):
        return (len(self.tail), -1 if self.head is None else self.head, self.tail)

    def format(self, names=None) -> str:
        nm = (lambda i: names[i]) if names else (lambda i: f"x{i}")
        parts = [] if self.head is None else [nm(self.head)]
        parts += ["d" + nm(t) for t in self.tail]
        return " ".join(parts)


def monomial(head, *tail) -> FormMonomial:
    return FormMonomial(head, tuple(tail))


def form_basis(rank: int, D: int, even_only: bool = True):
    """All form monomials of degree <= D in the canonical order."""
    out = []
    for n in range(0, D + 1):
        if even_only and n % 2:
            continue
        heads = list(range(rank)) if n == 0 else [None] + list(range(rank))
        for h in heads:
            for t in itertools.product(range(rank), repeat=n):
                out.append(FormMonomial(h, t))
    out.sort(key=FormMonomial.key)
    return out


def word_basis(rank: int, max_len: int):
    return [w for L in range(1, max_len + 1) for w in itertools.product(range(rank), repeat=L)]


# ---------------------------------------------------------------------------
# Lifts


@dataclass(frozen=True)
class LiftSpec:
    """Free V-module with structure constants ``mu[i][j]`` (length-r tuples)."""

    p: int
    basis: Tuple[str, ...]
    mu: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    rho: Optional[Tuple[Tuple[int, ...], ...]] = None
    assoc_mod_pi: bool = True
    precision: int = 20

    def __post_init__(self):
        if not _is_prime(self.p):
            raise PreconditionError(f"p={self.p} is not prime")
        r = len(self.basis)
        if len(set(self.basis)) != r:
            raise PreconditionError("basis names must be distinct")
        if len(self.mu) != r or any(len(row) != r for row in self.mu):
            raise PreconditionError("mu must be an r x r table")
        for i, row in enumerate(self.mu):
            for j, c in enumerate(row):
                if len(c) != r:
                    raise PreconditionError(f"mu({i},{j}) must have {r} coefficients")
                for x in c:
                    if valuation(Fraction(x), self.p) < 0:
                        raise PreconditionError(
                            f"mu({i},{j}) has coefficient {x} outside Z_({self.p})")
        if self.rho is not None:
            if any(len(row) != r for row in self.rho):
                raise PreconditionError("rho must have one column per basis element")
        if self.assoc_mod_pi and not self.associative_mod_p():
            raise PreconditionError("mu is not associative modulo p although assoc_mod_pi is set")

    # construction helpers

    @classmethod
    def from_table(cls, p, basis, table, rho=None, assoc_mod_pi=True, precision=20):
        """``table`` maps ``(i, j)`` to a coefficient list; missing entries are 0."""
        r = len(basis)
        mu = []
        for i in range(r):
            row = []
            for j in range(r):
                c = table.get((i, j), [0] * r)
                row.append(tuple(_num(x) for x in c))
            mu.append(tuple(row))
        rho_t = None if rho is None else tuple(tuple(int(x) % p for x in row) for row in rho)
        return cls(p, tuple(basis), tuple(mu), rho_t, assoc_mod_pi, precision)

    @classmethod
    def from_fp_algebra(cls, p, basis, table, precision=20):
        """Default lift of an F_p-algebra: representatives in [0, p)."""
        lifted = {k: [int(x) % p for x in v] for k, v in table.items()}
        return cls.from_table(p, basis, lifted, assoc_mod_pi=True, precision=precision)

    @classmethod
    def zero_product(cls, p, rank, precision=20):
        return cls.from_table(p, [f"e{i}" for i in range(rank)], {}, precision=precision)

    @classmethod
    def from_json(cls, obj) -> "LiftSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            p = int(obj["p"])
            basis = [str(b) for b in obj["basis"]]
            prec = int(obj.get("precision", 20))
            table = {}
            for k, entry in enumerate(obj.get("mu", [])):
                if len(entry) != 3:
                    raise PreconditionError(f"mu entry {k} must be [i, j, [coeffs]]")
                i, j, c = entry
                if not (0 <= int(i) < len(basis) and 0 <= int(j) < len(basis)):
                    raise PreconditionError(f"mu entry {k} has index out of range")
                table[(int(i), int(j))] = [Fraction(str(x)) for x in c]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PreconditionError):
                raise
            raise PreconditionError(f"malformed algebra description: {exc}") from None
        return cls.from_table(p, basis, table, rho=obj.get("rho"),
                              assoc_mod_pi=bool(obj.get("assoc_mod_pi", True)), precision=prec)

    def to_json(self) -> dict:
        mu = []
        r = self.rank
        for i in range(r):
            for j in range(r):
                c = self.mu[i][j]
                if any(c):
                    mu.append([i, j, [str(x) for x in c]])
        out = {"p": self.p, "precision": self.precision, "basis": list(self.basis), "mu": mu,
               "assoc_mod_pi": self.assoc_mod_pi}
        if self.rho is not None:
            out["rho"] = [list(row) for row in self.rho]
        return out

    # algebra

    @property
    def rank(self) -> int:
        return len(self.basis)

    def mult(self, a: dict, b: dict) -> dict:
        """mu on sparse vectors of W."""
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in enumerate(self.mu[i][j]):
                    if c:
                        _acc(out, k, x * y * c)
        return out

    def mu_basis(self, i: int, j: int) -> dict:
        return {k: c for k, c in enumerate(self.mu[i][j]) if c}

    def associator(self, i, j, k) -> dict:
        e = lambda t: {t: Fraction(1)}
        left = self.mult(self.mult(e(i), e(j)), e(k))
        right = self.mult(e(i), self.mult(e(j), e(k)))
        for t, c in right.items():
            _acc(left, t, -c)
        return left

    def is_associative(self) -> bool:
        r = range(self.rank)
        return all(not self.associator(i, j, k) for i in r for j in r for k in r)

    def associative_mod_p(self) -> bool:
        r = range(self.rank)
        return all(valuation(c, self.p) >= 1
                   for i in r for j in r for k in r
                   for c in self.associator(i, j, k).values())

    def reduction_kernel(self):
        """Z_(p)-generators of ker(rho) inside W."""
        r = self.rank
        gens = [{i: Fraction(self.p)} for i in range(r)]
        if self.rho is None:
            return gens
        # null space of rho over F_p, lifted to [0, p)
        rows = [list(row) for row in self.rho]
        p = self.p
        piv_cols = []
        rr = 0
        for c in range(r):
            pr = next((i for i in range(rr, len(rows)) if rows[i][c] % p), None)
            if pr is None:
                continue
            rows[rr], rows[pr] = rows[pr], rows[rr]
            inv = pow(rows[rr][c], -1, p)
            rows[rr] = [x * inv % p for x in rows[rr]]
            for i in range(len(rows)):
                if i != rr and rows[i][c] % p:
                    f = rows[i][c]
                    rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rr])]
            piv_cols.append(c)
            rr += 1
        for f in range(r):
            if f in piv_cols:
                continue
            v = {f: Fraction(1)}
            for k, c in enumerate(piv_cols):
                x = (-rows[k][f]) % p
                if x:
                    v[c] = Fraction(x)
            gens.append(v)
        return gens

    def reduces_to_zero(self, v: dict) -> bool:
        """Whether a Z_(p)-integral vector of W lies in ker(rho)."""
        p = self.p
        if any(valuation(Fraction(x) if not isinstance(x, PadicScalar) else x, p) < 0
               for x in v.values()):
            return False
        res = {i: _residue(x, p) for i, x in v.items()}
        if self.rho is None:
            return all(x == 0 for x in res.values())
        return all(sum(row[i] * x for i, x in res.items()) % p == 0 for row in self.rho)


def _residue(x, p) -> int:
    if isinstance(x, PadicScalar):
        x = x.to_fraction()
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


# ---------------------------------------------------------------------------
# Elements


class FormElement:
    """Finite combination of even (or arbitrary) form monomials truncated at degree D."""

    __slots__ = ("terms", "degree_cap", "truncated")

    def __init__(self, terms=None, degree_cap: Optional[int] = None, truncated: bool = False):
        clean = {}
        for m, c in (terms or {}).items():
            if not isinstance(m, FormMonomial):
                m = FormMonomial(m[0], tuple(m[1]))
            if m.head is None and not m.tail:
                raise PreconditionError("the unit is not an element of the non-unital algebra")
            if degree_cap is not None and m.degree > degree_cap:
                raise PreconditionError(f"monomial of degree {m.degree} exceeds cap {degree_cap}")
            _acc(clean, m, c)
        self.terms: Dict[FormMonomial, object] = clean
        self.degree_cap = degree_cap
        self.truncated = truncated

    @classmethod
    def of(cls, m: FormMonomial, c=1, degree_cap=None) -> "FormElement":
        return cls({m: _num(c) if not isinstance(c, PadicScalar) else c}, degree_cap)

    @classmethod
    def generator(cls, i: int, c=1, degree_cap=None) -> "FormElement":
        return cls.of(FormMonomial(i, ()), c, degree_cap)

    def _combine(self, other, sign):
        if not isinstance(other, FormElement):
            return NotImplemented
        d = dict(self.terms)
        for m, c in other.terms.items():
            _acc(d, m, c if sign > 0 else -c)
        cap = _min_cap(self.degree_cap, other.degree_cap)
        return FormElement(_cut(d, cap), cap, self.truncated or other.truncated)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return FormElement({m: -c for m, c in self.terms.items()}, self.degree_cap, self.truncated)

    def scale(self, c) -> "FormElement":
        return FormElement({m: x * c for m, x in self.terms.items()}, self.degree_cap, self.truncated)

    def __rmul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=-1)

    def homogeneous(self, n: int) -> "FormElement":
        return FormElement({m: c for m, c in self.terms.items() if m.degree == n}, self.degree_cap)

    def with_cap(self, D: Optional[int]) -> "FormElement":
        cut = _cut(self.terms, D)
        return FormElement(cut, D, self.truncated or len(cut) != len(self.terms))

    def __eq__(self, other):
        if not isinstance(other, FormElement):
            return NotImplemented
        d = dict(self.terms)
        for m, c in other.terms.items():
            _acc(d, m, -c)
        return not d

    def __hash__(self):
        raise TypeError("FormElement is not hashable")

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda mc: mc[0].key())

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.items_sorted():
            cs = c.encode() if isinstance(c, PadicScalar) else str(c)
            parts.append(f"({cs}) {m.format(names)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FormElement({self.format()}, cap={self.degree_cap}, truncated={self.truncated})"


class TensorElement:
    """Element of the non-unital tensor algebra, as a map word -> coefficient."""

    __slots__ = ("terms", "degree_cap")

    def __init__(self, terms=None, degree_cap: Optional[int] = None):
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if not w:
                raise PreconditionError("empty word: T W is non-unital")
            if degree_cap is not None and len(w) > degree_cap + 1:
                raise PreconditionError(f"word of length {len(w)} exceeds cap {degree_cap}")
            _acc(clean, w, c)
        self.terms: Dict[Word, object] = clean
        self.degree_cap = degree_cap

    @classmethod
    def word(cls, *letters, c=1, degree_cap=None):
        return cls({tuple(letters): _num(c)}, degree_cap)

    def __add__(self, other):
        d = dict(self.terms)
        for w, c in other.terms.items():
            _acc(d, w, c)
        return TensorElement(d, _min_cap(self.degree_cap, other.degree_cap))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return TensorElement({w: x * c for w, x in self.terms.items()}, self.degree_cap)

    def tensor(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(_concat(self.terms, other.terms), None)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return (self - other).terms == {}

    def __hash__(self):
        raise TypeError("TensorElement is not hashable")

    def __repr__(self):
        return f"TensorElement({self.terms!r})"


def _min_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _cut(terms, D):
    if D is None:
        return dict(terms)
    return {m: c for m, c in terms.items() if m.degree <= D}


def _concat(a: dict, b: dict) -> dict:
    out: dict = {}
    get = out.get
    for u, x in a.items():
        for w, y in b.items():
            k = u + w
            out[k] = get(k, 0) + x * y
    # truthiness agrees with _nonzero for int, Fraction and PadicScalar
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# iota and its inverse


class _Cache:
    """Per-lift memo of iota on monomials (lifts are hashable frozen dataclasses)."""

    @staticmethod
    @lru_cache(maxsize=64)
    def get(lift: LiftSpec) -> dict:
        return {}


def _iota_pair(lift: LiftSpec, a: int, b: int) -> dict:
    d = {(k,): c for k, c in lift.mu_basis(a, b).items()}
    _acc(d, (a, b), -1)
    return d


def iota_monomial(m: FormMonomial, lift: LiftSpec) -> dict:
    if m.degree % 2:
        raise PreconditionError("iota is defined on even forms only")
    memo = _Cache.get(lift)
    hit = memo.get(m)
    if hit is not None:
        return hit
    if not m.tail:
        cur = {(m.head,): 1}
    elif m.head is not None:
        # x0 dx1 ... = x0 (x) iota(dx1 ...), no products needed
        h = (m.head,)
        cur = {h + w: c for w, c in iota_monomial(FormMonomial(None, m.tail), lift).items()}
    elif m.degree == 2:
        cur = _iota_pair(lift, m.tail[0], m.tail[1])
    else:
        # iota is multiplicative: peel off the last pair
        prev = iota_monomial(FormMonomial(None, m.tail[:-2]), lift)
        cur = _concat(prev, _iota_pair(lift, m.tail[-2], m.tail[-1]))
    memo[m] = cur
    return cur


def iota(w: FormElement, lift: LiftSpec) -> TensorElement:
    out: dict = {}
    for m, c in w.terms.items():
        for word, x in iota_monomial(m, lift).items():
            _acc(out, word, c * x)
    return TensorElement(out, w.degree_cap)


def _leading(word: Word) -> Tuple[FormMonomial, int]:
    """Form monomial whose iota has leading word ``word``, with the sign."""
    if len(word) % 2:
        m = FormMonomial(word[0], tuple(word[1:]))
    else:
        m = FormMonomial(None, tuple(word))
    k = m.degree // 2
    return m, (-1) ** k


def iota_inverse_terms(terms: dict, lift: LiftSpec) -> dict:
    rem = dict(terms)
    out: dict = {}
    buckets: Dict[int, set] = {}
    for w in rem:
        buckets.setdefault(len(w), set()).add(w)
    for L in range(max(buckets, default=0), 0, -1):
        for w in sorted(buckets.get(L, ())):
            c = rem.pop(w, None)
            if c is None:
                continue
            m, s = _leading(w)
            coef = c * s
            _acc(out, m, coef)
            for u, x in iota_monomial(m, lift).items():
                if u == w:
                    continue
                _acc(rem, u, -coef * x)
                if u in rem:
                    buckets.setdefault(len(u), set()).add(u)
        if any(len(u) == L for u in rem):
            raise AssertionError("iota is not triangular")
    return out


def iota_inverse(t: TensorElement, lift: LiftSpec) -> FormElement:
    return FormElement(iota_inverse_terms(t.terms, lift), t.degree_cap)


# ---------------------------------------------------------------------------
# Fedosov product


def fedosov_product(a: FormElement, b: FormElement, lift: LiftSpec,
                    degree_cap: Optional[int] = None) -> FormElement:
    """``iota^-1(iota(a) (x) iota(b))`` with terms above the cap dropped."""
    D = degree_cap if degree_cap is not None else _min_cap(a.degree_cap, b.degree_cap)
    full = iota_inverse_terms(_concat(iota(a, lift).terms, iota(b, lift).terms), lift)
    cut = _cut(full, D)
    return FormElement(cut, D, a.truncated or b.truncated or len(cut) != len(full))


def left_generator_product(x: int, terms: dict, lift: LiftSpec, D: Optional[int]) -> dict:
    """``x (.) omega`` for a generator x of W, truncated at degree D.

    x (.) dy1..dy2k = x dy1..dy2k and
    x (.) y0 dy1..dy2k = mu(x, y0) dy1..dy2k - dx dy0 dy1..dy2k.
    """
    out: dict = {}
    get = out.get
    mb = lift.mu
    for m, c in terms.items():
        if m.head is None:
            k = FormMonomial(x, m.tail)
            out[k] = get(k, 0) + c
            continue
        for k, s in enumerate(mb[x][m.head]):
            if s:
                key = FormMonomial(k, m.tail)
                out[key] = get(key, 0) + c * s
        if D is None or m.degree + 2 <= D:
            key = FormMonomial(None, (x, m.head) + m.tail)
            out[key] = get(key, 0) - c
    return {k: c for k, c in out.items() if _nonzero(c)}


def _left_monomial(m: FormMonomial, terms: dict, lift: LiftSpec, D) -> dict:
    # iota(m) = x0 (x) iota(dx1 dx2) (x) ..., so act factor by factor from the right
    cur = terms
    t = m.tail
    for i in range(len(t) - 2, -1, -2):
        a, b = t[i], t[i + 1]
        nxt: dict = {}
        for k, s in lift.mu_basis(a, b).items():
            for mm, c in left_generator_product(k, cur, lift, D).items():
                _acc(nxt, mm, c * s)
        inner = left_generator_product(a, left_generator_product(b, cur, lift, D), lift, D)
        for mm, c in inner.items():
            _acc(nxt, mm, -c)
        cur = nxt
    if m.head is not None:
        cur = left_generator_product(m.head, cur, lift, D)
    if D is not None:
        cur = {mm: c for mm, c in cur.items() if mm.degree <= D}
    return cur


def fast_product_terms(a_terms: dict, b_terms: dict, lift: LiftSpec, D: Optional[int]) -> dict:
    """Fedosov product through left multiplication by generators only.

    Left multiplication never lowers form degree, so dropping terms above D
    at every step gives the same result as truncating at the end.
    """
    b_cut = {m: c for m, c in b_terms.items() if D is None or m.degree <= D}
    out: dict = {}
    for m, c in a_terms.items():
        for mm, x in _left_monomial(m, b_cut, lift, D).items():
            _acc(out, mm, c * x)
    return out


def fast_product(a: FormElement, b: FormElement, lift: LiftSpec,
                 degree_cap: Optional[int] = None) -> FormElement:
    D = degree_cap if degree_cap is not None else _min_cap(a.degree_cap, b.degree_cap)
    full = fast_product_terms(a.terms, b.terms, lift, None)
    cut = _cut(full, D)
    return FormElement(cut, D, a.truncated or b.truncated or len(cut) != len(full))


# ---------------------------------------------------------------------------
# Closed forms for associative mu (oracle)


def _form_times_generator(terms: dict, y: int, lift: LiftSpec) -> dict:
    """omega * y in the ordinary (Leibniz) product of forms; needs associative mu."""
    out: dict = {}
    for m, c in terms.items():
        if not m.tail:
            if m.head is None:
                _acc(out, FormMonomial(y, ()), c)
            else:
                for k, s in lift.mu_basis(m.head, y).items():
                    _acc(out, FormMonomial(k, ()), c * s)
            continue
        # omega' dx * y = omega' d(xy) - (omega' x) dy
        x = m.tail[-1]
        rest = FormMonomial(m.head, m.tail[:-1])
        for k, s in lift.mu_basis(x, y).items():
            _acc(out, FormMonomial(m.head, m.tail[:-1] + (k,)), c * s)
        for mm, cc in _form_times_generator({rest: Fraction(1)}, x, lift).items():
            _acc(out, FormMonomial(mm.head, mm.tail + (y,)), -c * cc)
    return out


def leibniz_product_terms(a: dict, b: dict, lift: LiftSpec) -> dict:
    out: dict = {}
    for n, d in b.items():
        if n.head is None:
            part = {FormMonomial(m.head, m.tail + n.tail): c for m, c in a.items()}
        else:
            part = {FormMonomial(mm.head, mm.tail + n.tail): cc
                    for mm, cc in _form_times_generator(a, n.head, lift).items()}
        for mm, cc in part.items():
            _acc(out, mm, cc * d)
    return out


def d_terms(a: dict) -> dict:
    out: dict = {}
    for m, c in a.items():
        if m.head is not None:
            _acc(out, FormMonomial(None, (m.head,) + m.tail), c)
    return out


def closed_form_fedosov(a: FormElement, b: FormElement, lift: LiftSpec,
                        degree_cap: Optional[int] = None) -> FormElement:
    """``a b - da db``, valid when mu is associative."""
    D = degree_cap if degree_cap is not None else _min_cap(a.degree_cap, b.degree_cap)
    out = leibniz_product_terms(a.terms, b.terms, lift)
    for m, c in leibniz_product_terms(d_terms(a.terms), d_terms(b.terms), lift).items():
        _acc(out, m, -c)
    cut = _cut(out, D)
    return FormElement(cut, D, len(cut) != len(out))


# ---------------------------------------------------------------------------
# The ideal I = ker(rho) + forms of positive degree


@dataclass
class IdealSplit:
    in_I: bool
    degree0: FormElement
    higher: FormElement


def ideal_decompose(t: FormElement, lift: LiftSpec) -> IdealSplit:
    low = {m: c for m, c in t.terms.items() if m.degree == 0}
    high = {m: c for m, c in t.terms.items() if m.degree > 0}
    p = lift.p
    integral_high = all(valuation(c if isinstance(c, PadicScalar) else Fraction(c), p) >= 0
                        for c in high.values())
    in_I = integral_high and lift.reduces_to_zero({m.head: c for m, c in low.items()})
    return IdealSplit(in_I, FormElement(low, t.degree_cap), FormElement(high, t.degree_cap))


def ideal_generators(lift: LiftSpec, D: int):
    """V-module generators of I truncated at degree D."""
    gens = [FormElement({FormMonomial(i, ()): c for i, c in v.items()}, D)
            for v in lift.reduction_kernel()]
    for m in form_basis(lift.rank, D):
        if m.degree > 0:
            gens.append(FormElement.of(m, 1, D))
    return gens


def iota_matrix(lift: LiftSpec, D: int):
    """Matrix of iota between the monomial basis and the word basis (dense lists)."""
    forms = form_basis(lift.rank, D)
    words = word_basis(lift.rank, D + 1)
    wpos = {w: k for k, w in enumerate(words)}
    rows = []
    for m in forms:
        row = [0] * len(words)
        for w, c in iota_monomial(m, lift).items():
            row[wpos[w]] = c
        rows.append(row)
    return forms, words, rows


def all_even_forms(terms: Iterable[FormMonomial]) -> bool:
    return all(m.degree % 2 == 0 for m in terms)
