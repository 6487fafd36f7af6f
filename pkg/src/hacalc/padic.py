"""Capped relative precision arithmetic in Z_p and Q_p.

Elements are stored as ``p**valuation * unit``.  Two kinds of nonzero
elements coexist:

* exact elements remember their rational value; arithmetic between exact
  elements is exact rational arithmetic, so cancellation produces a true
  zero;
* inexact elements know their unit only modulo ``p**prec`` with
  ``prec <= N``.  Cancellation lowers ``prec``; when it reaches 0 the result
  is *indistinguishable from zero* and carries only a lower bound for its
  valuation.

The uniformiser is always ``p`` itself.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import PrecisionError

INF = math.inf


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PadicConfig:
    p: int
    precision: int = 20

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"p must be a prime integer, got {self.p!r}")
        if not isinstance(self.precision, int) or self.precision < 1:
            raise ValueError(f"precision must be a positive integer, got {self.precision!r}")

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    def __call__(self, value) -> "PadicScalar":
        return PadicScalar.coerce(value, self)

    def zero(self) -> "PadicScalar":
        return PadicScalar(self, INF, 0, self.precision, Fraction(0))

    def one(self) -> "PadicScalar":
        return PadicScalar(self, 0, 1, self.precision, Fraction(1))

    def uniformizer(self) -> "PadicScalar":
        return PadicScalar(self, 1, 1, self.precision, Fraction(self.p))


def valuation_int(n: int, p: int) -> float:
    """p-adic valuation of an integer (``INF`` for 0)."""
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p: int) -> float:
    """Valuation of an int, Fraction or PadicScalar."""
    if isinstance(x, PadicScalar):
        return x.valuation
    x = Fraction(x)
    if x == 0:
        return INF
    return valuation_int(x.numerator, p) - valuation_int(x.denominator, p)


def _split(q: Fraction, p: int) -> tuple[int, Fraction]:
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def _residue(q: Fraction, mod: int) -> int:
    """Residue of a p-integral rational modulo ``mod``."""
    return q.numerator * pow(q.denominator, -1, mod) % mod


class PadicScalar:
    """Element of Q_p at capped relative precision.

    Use :meth:`PadicConfig.__call__` or :meth:`coerce` to build elements from
    integers and fractions (these are exact), and :meth:`from_parts` for
    inexact elements known to a given number of digits.
    """

    __slots__ = ("cfg", "_v", "_u", "prec", "exact_value")

    def __init__(self, cfg: PadicConfig, valuation, unit: int, prec: int,
                 exact_value: Fraction | None = None):
        self.cfg = cfg
        self._v = valuation
        self._u = unit
        self.prec = prec
        self.exact_value = exact_value

    # -- construction -------------------------------------------------
    @classmethod
    def coerce(cls, value, cfg: PadicConfig) -> "PadicScalar":
        if isinstance(value, PadicScalar):
            if value.cfg != cfg:
                raise ValueError("mixing p-adic scalars with different configurations")
            return value
        if isinstance(value, (int, Rational)):
            q = Fraction(value)
            if q == 0:
                return cfg.zero()
            # valuation and unit are filled lazily
            return cls(cfg, None, None, cfg.precision, q)
        raise TypeError(f"cannot coerce {type(value).__name__} to PadicScalar")

    @classmethod
    def from_parts(cls, cfg: PadicConfig, valuation: int, unit: int,
                   prec: int | None = None) -> "PadicScalar":
        """Inexact element ``p**valuation * unit + O(p**(valuation+prec))``."""
        prec = cfg.precision if prec is None else min(prec, cfg.precision)
        if prec <= 0:
            return cls(cfg, valuation, 0, 0, None)
        mod = cfg.p ** prec
        unit %= mod
        if unit == 0 or unit % cfg.p == 0:
            if unit == 0:
                return cls(cfg, valuation + prec, 0, 0, None)
            k = int(valuation_int(unit, cfg.p))
            return cls.from_parts(cfg, valuation + k, unit // cfg.p ** k, prec - k)
        return cls(cfg, valuation, unit, prec, None)

    def _fill(self):
        v, u = _split(self.exact_value, self.cfg.p)
        self._v = v
        self._u = _residue(u, self.cfg.modulus)

    # -- basic attributes ---------------------------------------------
    @property
    def p(self) -> int:
        return self.cfg.p

    @property
    def valuation(self):
        """Valuation (``INF`` for exact zero, a lower bound for inexact zero)."""
        if self._v is None:
            self._fill()
        return self._v

    @property
    def unit(self) -> int:
        if self._v is None:
            self._fill()
        return self._u

    @property
    def is_exact(self) -> bool:
        return self.exact_value is not None

    def is_zero(self) -> bool:
        """True only for the exact zero."""
        return self.exact_value is not None and self.exact_value == 0

    @property
    def precision_exhausted(self) -> bool:
        """Inexact and indistinguishable from zero at the tracked precision."""
        return self.exact_value is None and self.prec == 0

    def is_negligible(self) -> bool:
        return self.is_zero() or self.precision_exhausted

    @property
    def absolute_precision(self):
        if self.exact_value is not None:
            return INF
        return self.valuation + self.prec

    def _scaled_residue(self, v: int, mod: int) -> int:
        # residue of self / p**v modulo mod; requires valuation >= v
        if self.exact_value is not None:
            q = self.exact_value / Fraction(self.cfg.p) ** v
            return _residue(q, mod)
        if self.prec == 0:
            return 0
        return self._u * self.cfg.p ** (self._v - v) % mod

    # -- arithmetic ---------------------------------------------------
    def _other(self, other):
        if isinstance(other, PadicScalar):
            if other.cfg != self.cfg:
                raise ValueError("mixing p-adic scalars with different configurations")
            return other
        if isinstance(other, (int, Rational)):
            return PadicScalar.coerce(other, self.cfg)
        return NotImplemented

    def __neg__(self):
        if self.exact_value is not None:
            if self.exact_value == 0:
                return self
            return PadicScalar(self.cfg, None, None, self.prec, -self.exact_value)
        if self.prec == 0:
            return self
        return PadicScalar(self.cfg, self._v, (-self._u) % self.cfg.p ** self.prec,
                           self.prec, None)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.exact_value is not None and other.exact_value is not None:
            return PadicScalar.coerce(self.exact_value + other.exact_value, self.cfg)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.valuation, other.valuation)
        absprec = min(self.absolute_precision, other.absolute_precision)
        width = absprec - v
        if width <= 0:
            return PadicScalar(self.cfg, absprec, 0, 0, None)
        mod = self.cfg.p ** width
        s = (self._scaled_residue(v, mod) + other._scaled_residue(v, mod)) % mod
        if s == 0:
            return PadicScalar(self.cfg, absprec, 0, 0, None)
        k = int(valuation_int(s, self.cfg.p))
        prec = min(self.cfg.precision, width - k)
        return PadicScalar(self.cfg, v + k, (s // self.cfg.p ** k) % self.cfg.p ** prec,
                           prec, None)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.exact_value is not None and other.exact_value is not None:
            return PadicScalar.coerce(self.exact_value * other.exact_value, self.cfg)
        if self.is_zero() or other.is_zero():
            return self.cfg.zero()
        v = self.valuation + other.valuation
        prec = min(self.prec, other.prec)
        if prec == 0:
            return PadicScalar(self.cfg, v, 0, 0, None)
        return PadicScalar(self.cfg, v, self.unit * other.unit % self.cfg.p ** prec, prec, None)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by exact p-adic zero")
        if other.precision_exhausted:
            raise PrecisionError("division by an element indistinguishable from zero")
        if self.exact_value is not None and other.exact_value is not None:
            return PadicScalar.coerce(self.exact_value / other.exact_value, self.cfg)
        if self.is_zero():
            return self.cfg.zero()
        v = self.valuation - other.valuation
        prec = min(self.prec, other.prec)
        if prec == 0:
            return PadicScalar(self.cfg, v, 0, 0, None)
        mod = self.cfg.p ** prec
        return PadicScalar(self.cfg, v, self.unit * pow(other.unit, -1, mod) % mod, prec, None)

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        result = self.cfg.one()
        base = self if n >= 0 else self.cfg.one() / self
        for _ in range(abs(n)):
            result = result * base
        return result

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, PadicScalar):
            return self.exact_value is not None and self.exact_value == other
        if not isinstance(other, PadicScalar):
            return NotImplemented
        if self.cfg != other.cfg:
            return False
        if self.exact_value is not None or other.exact_value is not None:
            return self.exact_value == other.exact_value
        return (self._v, self._u, self.prec) == (other._v, other._u, other.prec)

    def __hash__(self):
        if self.exact_value is not None:
            return hash(self.exact_value)
        return hash((self.cfg, self._v, self._u, self.prec))

    def __bool__(self):
        return not self.is_zero()

    # -- text ---------------------------------------------------------
    def encode(self) -> str:
        p = self.cfg.p
        if self.exact_value is not None:
            if self.exact_value == 0:
                return "0"
            v, u = _split(self.exact_value, p)
            return f"{p}^{v}*{u}"
        if self.prec == 0:
            return f"O({p}^{self._v})"
        return f"{p}^{self._v}*{self._u}+O({p}^{self._v + self.prec})"

    __str__ = encode

    def __repr__(self):
        return f"PadicScalar({self.encode()!r}, p={self.cfg.p}, N={self.cfg.precision})"

    def to_fraction(self) -> Fraction:
        """Rational value; for inexact elements, the canonical representative."""
        if self.exact_value is not None:
            return self.exact_value
        if self.prec == 0:
            return Fraction(0)
        return Fraction(self.cfg.p) ** self._v * self._u


_TEXT = re.compile(
    r"^\s*(?:(?P<zero>0)"
    r"|O\((?P<zp>\d+)\^(?P<zb>-?\d+)\)"
    r"|(?P<p>\d+)\^(?P<v>-?\d+)\*(?P<u>-?\d+(?:/\d+)?)"
    r"(?:\+O\((?P<op>\d+)\^(?P<ob>-?\d+)\))?)\s*$"
)


def decode(text: str, cfg: PadicConfig) -> PadicScalar:
    """Parse the ``p^v*u`` text form produced by :meth:`PadicScalar.encode`."""
    m = _TEXT.match(text)
    if m is None:
        raise ValueError(f"malformed p-adic scalar {text!r}")
    if m.group("zero"):
        return cfg.zero()
    if m.group("zp"):
        if int(m.group("zp")) != cfg.p:
            raise ValueError(f"prime mismatch in {text!r}")
        return PadicScalar(cfg, int(m.group("zb")), 0, 0, None)
    if int(m.group("p")) != cfg.p:
        raise ValueError(f"prime mismatch in {text!r}")
    v = int(m.group("v"))
    u = Fraction(m.group("u"))
    if m.group("op") is None:
        if u == 0 or valuation(u, cfg.p) != 0:
            raise ValueError(f"unit part of {text!r} is not a p-adic unit")
        return PadicScalar.coerce(Fraction(cfg.p) ** v * u, cfg)
    if int(m.group("op")) != cfg.p:
        raise ValueError(f"prime mismatch in {text!r}")
    prec = int(m.group("ob")) - v
    if u.denominator != 1 or prec < 1 or prec > cfg.precision:
        raise ValueError(f"malformed inexact scalar {text!r}")
    return PadicScalar.from_parts(cfg, v, int(u), prec)


def val(x) -> float:
    """Valuation of a p-adic scalar (``INF`` for exact zero)."""
    return x.valuation


def arith(a: PadicScalar, b: PadicScalar, op: str) -> PadicScalar:
    """Apply ``op`` in {add, sub, mul, div}; the result tracks its own precision."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")
