"""De Rham cohomology of the punctured affine lines Q[x, 1/f].

Supported: f monic, a product of distinct linear factors x - r with integer
roots that stay distinct modulo p (so the curve over F_p is smooth and f lifts
without pi-adic denominators).  Everything is exact over Q.

All functions are written with numerators over a common power of f: a form
g dx with g = P / f^L is stored as the integer polynomial P.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import PreconditionError
from .linalg import Echelon, SpanSolver
from .padic import PadicConfig, _is_prime

Poly = Dict[int, int]


# ---------------------------------------------------------------------------
# integer polynomials as {exponent: coefficient}


def padd(a: Poly, b: Poly, s: int = 1) -> Poly:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + s * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: c for k, c in out.items() if c}


def ppow(a: Poly, n: int) -> Poly:
    out: Poly = {0: 1}
    for _ in range(n):
        out = pmul(out, a)
    return out


def pderiv(a: Poly) -> Poly:
    return {k - 1: k * c for k, c in a.items() if k}


def pdeg(a: Poly) -> int:
    return max(a, default=-1)


def peval(a: Poly, x: int) -> int:
    return sum(c * x ** k for k, c in a.items())


def pformat(a: Poly) -> str:
    if not a:
        return "0"
    out = ""
    for k in sorted(a, reverse=True):
        c = a[k]
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if k == 0:
            body = str(c)
        else:
            xs = "x" if k == 1 else f"x^{k}"
            body = xs if c == 1 else f"{c}*{xs}"
        out += (sign if out or sign == "-" else "") + body
    return out


_TERM = re.compile(r"([+-]?)(\d*)(\*?x(?:\^(\d+))?)?")
_FACTOR = re.compile(r"\(([^()]+)\)(?:\^(\d+))?\*?")


def _parse_sum(s: str, whole: str) -> Poly:
    pos = 0
    out: Poly = {}
    if not s:
        raise PreconditionError(f"cannot parse polynomial {whole!r}: empty term")
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, digits, xpart, exp = m.groups()
        if m.end() == pos or not (digits or xpart):
            raise PreconditionError(f"cannot parse polynomial {whole!r} at position {pos}")
        if pos > 0 and not sign:
            raise PreconditionError(f"cannot parse polynomial {whole!r} at position {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        if xpart and xpart.startswith("*") and not digits:
            raise PreconditionError(f"cannot parse polynomial {whole!r} at position {pos}")
        k = 0 if not xpart else (int(exp) if exp else 1)
        out = padd(out, {k: c})
        pos = m.end()
    return out


def parse_poly(text: str) -> Poly:
    """Parse ``x^2-x``, ``x^3 - 3*x + 2`` or factored ``(x-1)(x+2)``."""
    s = text.replace(" ", "")
    if not s:
        raise PreconditionError("empty polynomial")
    if "(" in s:
        out: Poly = {0: 1}
        pos = 0
        while pos < len(s):
            m = _FACTOR.match(s, pos)
            if m is None:
                raise PreconditionError(f"cannot parse polynomial {text!r} at position {pos}")
            fac = _parse_sum(m.group(1), text)
            out = pmul(out, ppow(fac, int(m.group(2) or 1)))
            pos = m.end()
        return out
    return _parse_sum(s, text)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalizedRing:
    """Q[x, 1/f] with truncation caps on x-degree and on powers of 1/f."""

    f: Tuple[Tuple[int, int], ...]
    roots: Tuple[int, ...]
    degree_cap: int = 8
    laurent_cap: int = 4
    p: int = 5

    @classmethod
    def from_poly(cls, f, p: int, degree_cap: int = 8, laurent_cap: int = 4) -> "LocalizedRing":
        if isinstance(f, str):
            f = parse_poly(f)
        if not _is_prime(p):
            raise PreconditionError(f"p={p} is not prime")
        if degree_cap < 1 or laurent_cap < 1:
            raise PreconditionError("caps must be positive")
        if not f:
            raise PreconditionError("f must be nonzero")
        n = pdeg(f)
        if f[n] != 1:
            raise PreconditionError("f must be monic")
        roots = split_roots(f)
        for i, a in enumerate(roots):
            for b in roots[i + 1:]:
                if (a - b) % p == 0:
                    raise PreconditionError(
                        f"f is not squarefree modulo {p}: roots {a} and {b} collide")
        return cls(tuple(sorted(f.items())), tuple(roots), degree_cap, laurent_cap, p)

    @property
    def poly(self) -> Poly:
        return dict(self.f)

    def with_caps(self, degree_cap, laurent_cap) -> "LocalizedRing":
        return LocalizedRing(self.f, self.roots, degree_cap, laurent_cap, self.p)


def split_roots(f: Poly) -> List[int]:
    """Integer roots of a monic f that splits into distinct linear factors."""
    rest = dict(f)
    roots = []
    while pdeg(rest) > 0:
        c0 = rest.get(0, 0)
        cands = [0] if c0 == 0 else sorted({d for k in range(1, abs(c0) + 1) if c0 % k == 0
                                            for d in (k, -k)}, key=lambda t: (abs(t), t))
        r = next((t for t in cands if peval(rest, t) == 0), None)
        if r is None:
            raise PreconditionError(
                f"unsupported f={pformat(f)}: only products of distinct monic linear factors "
                "with integer roots are handled")
        if r in roots:
            raise PreconditionError(f"f={pformat(f)} is not squarefree")
        roots.append(r)
        rest = _divide_linear(rest, r)
    return sorted(roots)


def _divide_linear(a: Poly, r: int) -> Poly:
    n = pdeg(a)
    coeffs = [a.get(k, 0) for k in range(n + 1)]
    q = [0] * n
    acc = 0
    for k in range(n, 0, -1):
        acc = coeffs[k] + acc * r
        q[k - 1] = acc
    return {k: c for k, c in enumerate(q) if c}


def format_log_form(r: int) -> str:
    if r == 0:
        return "dx/x"
    return f"dx/(x-{r})" if r > 0 else f"dx/(x+{-r})"


def format_function(a: int, b: int, f: Poly) -> str:
    xs = "1" if a == 0 else ("x" if a == 1 else f"x^{a}")
    if b == 0 or f == {0: 1}:
        return xs
    fs = f"({pformat(f)})" + ("" if b == 1 else f"^{b}")
    return f"{xs}/{fs}"


@dataclass
class DeRhamReport:
    h0_dim: int
    h1_dim: int
    h1_basis: List[str] = field(default_factory=list)
    reduction_log: List[dict] = field(default_factory=list)
    stable: Optional[bool] = None
    caps: Tuple[int, int] = (0, 0)
    p: int = 0

    def dims(self) -> Tuple[int, int]:
        return (self.h0_dim, self.h1_dim)

    def to_json(self) -> dict:
        return {"h0": self.h0_dim, "h1": self.h1_dim, "h1_basis": self.h1_basis,
                "reduction_log": self.reduction_log, "stable": self.stable,
                "deg_cap": self.caps[0], "laurent_cap": self.caps[1], "p": self.p}


def _vec(P: Poly) -> dict:
    return {k: Fraction(c) for k, c in P.items()}


class _Setup:
    def __init__(self, ring: LocalizedRing):
        f = ring.poly
        self.f = f
        self.fp = pderiv(f)
        self.n = pdeg(f)
        self.dcap, self.lcap = ring.degree_cap, ring.laurent_cap
        self.L = self.lcap + 1
        self._fpow = {}

    def fpow(self, k):
        if k not in self._fpow:
            self._fpow[k] = ppow(self.f, k)
        return self._fpow[k]

    def d_numerator(self, a: int, b: int) -> Poly:
        """Numerator over f^L of d(x^a / f^b)."""
        t1 = pmul({a - 1: a}, self.f) if a else {}
        t2 = pmul({a: -b}, self.fp) if b else {}
        return pmul(padd(t1, t2), self.fpow(self.L - b - 1))

    def omega_generators(self):
        js = range(self.lcap + 1) if self.n > 0 else [0]
        return [((i, j), pmul({i: 1}, self.fpow(self.L - j)))
                for j in js for i in range(self.dcap + 1)]

    def exact_generators(self):
        top = self.dcap + 1 + self.n * self.lcap
        bs = range(self.lcap + 1) if self.n > 0 else [0]
        return [((a, b), self.d_numerator(a, b))
                for b in bs for a in range(top + 1)]


def _dims(ring: LocalizedRing):
    S = _Setup(ring)
    exact = [v for _, v in S.exact_generators()]
    ech_d = Echelon(0)
    for v in exact:
        ech_d.add(_vec(v))
    ech_sum = Echelon(0)
    for v in exact:
        ech_sum.add(_vec(v))
    for _, v in S.omega_generators():
        ech_sum.add(_vec(v))
    h1 = ech_sum.rank() - ech_d.rank()
    # h0: kernel of d on the truncated ring (numerators over f^lcap)
    funcs = Echelon(0)
    dfs = Echelon(0)
    for b in range(S.lcap + 1):
        for a in range(S.dcap + 1):
            funcs.add(_vec(pmul({a: 1}, S.fpow(S.lcap - b))))
    for b in range(S.lcap + 1):
        for a in range(S.dcap + 1):
            dfs.add(_vec(S.d_numerator(a, b)))
    h0 = funcs.rank() - dfs.rank()
    return S, h0, h1


def de_rham(ring: LocalizedRing, config: Optional[PadicConfig] = None,
            check_stability: bool = True, with_log: bool = True) -> DeRhamReport:
    if config is not None and config.p != ring.p:
        raise PreconditionError("PadicConfig and ring disagree on p")
    S, h0, h1 = _dims(ring)
    exact = S.exact_generators()
    ech = Echelon(0)
    for _, v in exact:
        ech.add(_vec(v))
    basis_polys = []
    names = []
    cands = [(format_log_form(r), pmul(_divide_linear(S.f, r), S.fpow(S.L - 1))) for r in ring.roots]
    cands += [(f"{format_function(i, j, S.f)} dx", v) for (i, j), v in S.omega_generators()]
    for name, v in cands:
        if len(names) == h1:
            break
        if ech.add(_vec(v)):
            names.append(name)
            basis_polys.append(v)
    if len(names) != h1:
        raise AssertionError("greedy basis does not reach the cohomology dimension")
    log = []
    if with_log:
        solver = SpanSolver([_vec(v) for _, v in exact] + [_vec(v) for v in basis_polys])
        ne = len(exact)
        for (i, j), v in S.omega_generators():
            coeffs = solver.solve(_vec(v))
            if coeffs is None:
                raise AssertionError("truncated form outside exact forms plus basis")
            anti = [[exact[k][0][0], exact[k][0][1], str(c)] for k, c in sorted(coeffs.items()) if k < ne]
            resid = {names[k - ne]: str(c) for k, c in sorted(coeffs.items()) if k >= ne}
            form = f"{format_function(i, j, S.f)} dx"
            if form in names:
                continue
            log.append({"form": form, "x_power": i, "f_power": j,
                        "antiderivative": anti, "cohomology_part": resid})
    stable = None
    if check_stability:
        _, h0b, h1b = _dims(ring.with_caps(ring.degree_cap + 4, ring.laurent_cap + 4))
        stable = (h0b, h1b) == (h0, h1)
    return DeRhamReport(h0, h1, names, log, stable, (ring.degree_cap, ring.laurent_cap), ring.p)


def verify_antiderivative(ring: LocalizedRing, entry: dict) -> bool:
    """Differentiate a reduction-log antiderivative and compare with the form.

    ``d(sum c x^a/f^b) + sum (cohomology part) == form``, all as numerators
    over f^(laurent_cap + 1).
    """
    S = _Setup(ring)
    total: Dict[int, Fraction] = {}
    for a, b, c in entry["antiderivative"]:
        for k, x in S.d_numerator(a, b).items():
            total[k] = total.get(k, 0) + Fraction(c) * x
    if entry["cohomology_part"]:
        lookup = dict((format_log_form(r), pmul(_divide_linear(S.f, r), S.fpow(S.L - 1)))
                      for r in ring.roots)
        lookup.update({f"{format_function(i, j, S.f)} dx": v for (i, j), v in S.omega_generators()})
        for name, c in entry["cohomology_part"].items():
            for k, x in lookup[name].items():
                total[k] = total.get(k, 0) + Fraction(c) * x
    target = pmul({entry["x_power"]: 1}, S.fpow(S.L - entry["f_power"]))
    diff = {k: total.get(k, 0) - target.get(k, 0) for k in set(total) | set(target)}
    return all(x == 0 for x in diff.values())


def compare_with_leavitt_torus(graph=None, f: str = "x", p: int = 5) -> bool:
    """Dims of de Rham cohomology of Q[x, 1/f] against HA of a Leavitt path algebra.

    With the defaults both sides are the torus / Laurent polynomial values.
    """
    from .leavitt import ha_leavitt, rose
    E = rose(1) if graph is None else graph
    dr = de_rham(LocalizedRing.from_poly(f, p), check_stability=False, with_log=False)
    return dr.dims() == ha_leavitt(E).dims()
