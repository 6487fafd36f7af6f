"""X-complexes of finite-dimensional algebras, mapping cones and finite holims.

For an algebra S with basis s_0..s_{n-1}, noncommutative 1-forms
Omega^1(S) = S+ (x) S have the basis ``a dy`` with ``a`` in {1, s_0, ...}.
The commutator quotient is spanned by the classes

    [x, a dy] = (xa) dy - a d(yx) + (ay) dx

and X(S) is S --q.d--> Omega^1(S)/[S, Omega^1] --b--> S with
b(a dy) = ay - ya.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvariantViolation, PrecisionError, PreconditionError
from .linalg import (Echelon, SparseMatrix, block_matrix, default_tolerance, padic_rank,
                     rank, Ring, _exact_zero)
from .padic import PadicConfig, PadicScalar

UNIT = -1


def _acc(d, k, c):
    s = d[k] + c if k in d else c
    if _exact_zero(s):
        d.pop(k, None)
    else:
        d[k] = s


class TruncatedAlgebra:
    """Finite-dimensional algebra given by structure constants.

    ``mult[(i, j)]`` is a sparse dict ``k -> c`` with s_i s_j = sum c s_k.
    ``degrees`` only influences the monomial order used to pick canonical
    cokernel bases.
    """

    def __init__(self, basis: Sequence[str], mult: Dict[Tuple[int, int], dict],
                 ring: Ring = "QQ", truncated: bool = False,
                 degrees: Optional[Sequence[int]] = None, check: bool = True):
        self.basis = list(basis)
        n = len(self.basis)
        self.mult = {}
        for (i, j), v in mult.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in v):
                raise PreconditionError(f"mult_table entry ({i}, {j}) has index out of range")
            v = {k: c for k, c in v.items() if not _exact_zero(c)}
            if v:
                self.mult[(i, j)] = v
        self.ring = ring
        self.truncated = truncated
        self.degrees = list(degrees) if degrees is not None else [0] * n
        if len(self.degrees) != n:
            raise PreconditionError("degrees must have one entry per basis element")
        if check:
            bad = self.associator_failure()
            if bad is not None:
                raise PreconditionError(f"mult_table is not associative on basis triple {bad}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, x in u.items():
            for j, y in v.items():
                for k, c in self.mult.get((i, j), {}).items():
                    _acc(out, k, x * y * c)
        return out

    def mul_plus(self, a: int, v: dict) -> dict:
        """Left multiplication by a basis element of S+ (``UNIT`` is the unit)."""
        if a == UNIT:
            return dict(v)
        return self.mul({a: Fraction(1)}, v)

    def associator_failure(self):
        n = self.dim
        e = lambda t: {t: Fraction(1)}
        for i in range(n):
            for j in range(n):
                ij = self.mul(e(i), e(j))
                for k in range(n):
                    lhs = self.mul(ij, e(k))
                    rhs = self.mul(e(i), self.mul(e(j), e(k)))
                    for t, c in rhs.items():
                        _acc(lhs, t, -c)
                    if any(not (c.is_negligible() if isinstance(c, PadicScalar) else c == 0)
                           for c in lhs.values()):
                        return (i, j, k)
        return None

    @classmethod
    def from_json(cls, obj) -> "TruncatedAlgebra":
        if isinstance(obj, str):
            obj = json.loads(obj)
        basis = obj["basis"]
        mult = {}
        for i, j, coeffs in obj.get("mult", []):
            mult[(int(i), int(j))] = {k: Fraction(str(c)) for k, c in enumerate(coeffs) if c}
        return cls(basis, mult)


@dataclass
class Z2Complex:
    """X_0 --d0--> X_1 --d1--> X_0."""

    dim0: int
    dim1: int
    d0: SparseMatrix
    d1: SparseMatrix
    ring: Ring = "QQ"
    labels1: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.d0.shape != (self.dim1, self.dim0):
            raise PreconditionError(f"d0 has shape {self.d0.shape}, expected {(self.dim1, self.dim0)}")
        if self.d1.shape != (self.dim0, self.dim1):
            raise PreconditionError(f"d1 has shape {self.d1.shape}, expected {(self.dim0, self.dim1)}")

    @classmethod
    def zero(cls, dim0: int, dim1: int, ring: Ring = "QQ") -> "Z2Complex":
        return cls(dim0, dim1, SparseMatrix.zero(dim1, dim0, ring),
                   SparseMatrix.zero(dim0, dim1, ring), ring)

    def to_ring(self, ring: Ring) -> "Z2Complex":
        return Z2Complex(self.dim0, self.dim1, self.d0.to_ring(ring), self.d1.to_ring(ring),
                         ring, list(self.labels1))

    def boundary_defect(self) -> Tuple[SparseMatrix, SparseMatrix]:
        return self.d1 @ self.d0, self.d0 @ self.d1

    def check(self, tol_val: Optional[int] = None):
        for name, M in zip(("d1*d0", "d0*d1"), self.boundary_defect()):
            for _, x in M.items():
                if isinstance(x, PadicScalar):
                    tol = default_tolerance(x.cfg) if tol_val is None else tol_val
                    if x.is_zero() or x.valuation >= tol:
                        continue
                raise InvariantViolation(f"{name} != 0 in X-complex")
        return True

    def to_json(self) -> dict:
        def trip(M):
            out = []
            for (i, j) in sorted(M.entries):
                x = M[(i, j)]
                out.append([i, j, x.encode() if isinstance(x, PadicScalar) else str(x)])
            return out
        return {"dim0": self.dim0, "dim1": self.dim1, "d0": trip(self.d0), "d1": trip(self.d1)}


@dataclass
class ChainMap:
    """Pair (f0: C_0 -> D_0, f1: C_1 -> D_1)."""

    f0: SparseMatrix
    f1: SparseMatrix

    def check(self, C: Z2Complex, Dc: Z2Complex):
        if self.f0.shape != (Dc.dim0, C.dim0) or self.f1.shape != (Dc.dim1, C.dim1):
            raise PreconditionError("chain map shape does not match its complexes")
        if (Dc.d0 @ self.f0 - self.f1 @ C.d0).nnz() or (Dc.d1 @ self.f1 - self.f0 @ C.d1).nnz():
            raise InvariantViolation("map does not commute with the differentials")
        return True

    @classmethod
    def zero(cls, C: Z2Complex, Dc: Z2Complex) -> "ChainMap":
        return cls(SparseMatrix.zero(Dc.dim0, C.dim0, C.ring), SparseMatrix.zero(Dc.dim1, C.dim1, C.ring))

    @classmethod
    def identity(cls, C: Z2Complex) -> "ChainMap":
        return cls(SparseMatrix.identity(C.dim0, C.ring), SparseMatrix.identity(C.dim1, C.ring))


# ---------------------------------------------------------------------------
# build_X


@dataclass
class XData:
    """The complex together with what is needed to push algebra maps through it."""

    complex: Z2Complex
    omega_index: Dict[Tuple[int, int], int]
    quotient: SparseMatrix
    complement: List[int]


def _omega_order(S: TruncatedAlgebra):
    heads = [UNIT] + list(range(S.dim))
    deg = lambda a: 0 if a == UNIT else S.degrees[a]
    pairs = [(a, y) for a in heads for y in range(S.dim)]
    pairs.sort(key=lambda ay: (deg(ay[0]) + S.degrees[ay[1]], ay[0], ay[1]))
    return pairs


def build_XData(S: TruncatedAlgebra) -> XData:
    n = S.dim
    pairs = _omega_order(S)
    idx = {ay: k for k, ay in enumerate(pairs)}
    N = len(pairs)
    ech = Echelon(N)
    one = Fraction(1)
    relations = []
    for x in range(n):
        ex = {x: one}
        for (a, y) in pairs:
            rel: dict = {}
            # (xa) dy
            xa = {x: one} if a == UNIT else S.mul(ex, {a: one})
            for h, c in xa.items():
                _acc(rel, idx[(h, y)], c)
            # - a d(yx)
            for t, c in S.mul({y: one}, ex).items():
                _acc(rel, idx[(a, t)], -c)
            # + (ay) dx
            ay = {y: one} if a == UNIT else S.mul({a: one}, {y: one})
            for h, c in ay.items():
                _acc(rel, idx[(h, x)], c)
            if rel:
                relations.append(rel)
                ech.add(rel)
    # b on Omega^1: a dy -> ay - ya
    bcol: Dict[int, dict] = {}
    for (a, y), k in idx.items():
        if a == UNIT:
            bcol[k] = {}
            continue
        v = S.mul({a: one}, {y: one})
        for t, c in S.mul({y: one}, {a: one}).items():
            _acc(v, t, -c)
        bcol[k] = v
    for rel in relations:
        acc: dict = {}
        for k, c in rel.items():
            for t, x in bcol[k].items():
                _acc(acc, t, c * x)
        if any(not (x.is_negligible() if isinstance(x, PadicScalar) else x == 0) for x in acc.values()):
            raise PreconditionError("inconsistent mult_table: b does not vanish on commutators")
    comp, Q = ech.quotient_matrix(S.ring)
    dim1 = len(comp)
    # d0(s) = q(1 d s)
    d0e = {}
    for (r, c), x in Q.items():
        a, y = pairs[c]
        if a == UNIT:
            d0e[(r, y)] = x
    d0 = SparseMatrix(dim1, n, d0e, S.ring)
    d1e = {}
    for r, c in enumerate(comp):
        for t, x in bcol[c].items():
            d1e[(t, r)] = x
    d1 = SparseMatrix(n, dim1, d1e, S.ring)
    labels = []
    for c in comp:
        a, y = pairs[c]
        labels.append(("" if a == UNIT else S.basis[a] + " ") + "d" + S.basis[y])
    C = Z2Complex(n, dim1, d0, d1, S.ring, labels)
    C.check()
    return XData(C, idx, Q, comp)


def build_X(S: TruncatedAlgebra) -> Z2Complex:
    return build_XData(S).complex


def x_functor(f: SparseMatrix, S: TruncatedAlgebra, XS: XData,
              T: TruncatedAlgebra, XT: XData) -> ChainMap:
    """Chain map X(f) for an algebra homomorphism f: S -> T (matrix T.dim x S.dim)."""
    cols = {}
    for (i, j), x in f.items():
        cols.setdefault(j, {})[i] = x
    f1e: dict = {}
    qrows: Dict[int, dict] = {}
    for (r, c), x in XT.quotient.items():
        qrows.setdefault(c, {})[r] = x
    for r, c in enumerate(XS.complement):
        a, y = _pair_of(XS, c)
        fa = [(UNIT, 1)] if a == UNIT else list(cols.get(a, {}).items())
        fy = cols.get(y, {})
        for h, x in fa:
            for t, z in fy.items():
                k = XT.omega_index[(h, t)]
                for rr, q in qrows.get(k, {}).items():
                    _acc(f1e, (rr, r), x * z * q)
    f1 = SparseMatrix(XT.complex.dim1, XS.complex.dim1, f1e, S.ring)
    return ChainMap(f.to_ring(S.ring), f1)


def _pair_of(X: XData, col: int):
    inv = getattr(X, "_inv", None)
    if inv is None:
        inv = {k: ay for ay, k in X.omega_index.items()}
        X._inv = inv
    return inv[col]


# ---------------------------------------------------------------------------
# Homology


@dataclass
class HomologyReport:
    h0: int
    h1: int
    precision_limited: bool = False
    rank_d0: int = 0
    rank_d1: int = 0
    pivot_valuations: List[int] = field(default_factory=list)

    def dims(self) -> Tuple[int, int]:
        return (self.h0, self.h1)


def homology(C: Z2Complex, tol_val: Optional[int] = None) -> HomologyReport:
    if isinstance(C.ring, PadicConfig):
        r0 = padic_rank(C.d0, tol_val)
        r1 = padic_rank(C.d1, tol_val)
        rk0, rk1 = r0.rank, r1.rank
        limited = r0.precision_limited or r1.precision_limited
        pv = r0.pivot_valuations + r1.pivot_valuations
    else:
        rk0, rk1 = rank(C.d0), rank(C.d1)
        limited, pv = False, []
    h0 = C.dim0 - rk0 - rk1
    h1 = C.dim1 - rk1 - rk0
    if h0 < 0 or h1 < 0:
        raise PrecisionError(
            f"negative homology ({h0}, {h1}) from ranks {rk0}, {rk1}: precision too low")
    return HomologyReport(h0, h1, limited, rk0, rk1, pv)


# ---------------------------------------------------------------------------
# Cones and homotopy limits


def mapping_cone(f: ChainMap, C: Z2Complex, Dc: Z2Complex) -> Z2Complex:
    """cone_0 = D_0 + C_1, cone_1 = D_1 + C_0, d(y, x) = (dy + f x, -dx)."""
    if C.ring == "QQ":
        f.check(C, Dc)
    ring = C.ring
    d0 = block_matrix([[Dc.d0, f.f1], [None, -C.d1]],
                      [Dc.dim1, C.dim0], [Dc.dim0, C.dim1], ring)
    d1 = block_matrix([[Dc.d1, f.f0], [None, -C.d0]],
                      [Dc.dim0, C.dim1], [Dc.dim1, C.dim0], ring)
    return Z2Complex(Dc.dim0 + C.dim1, Dc.dim1 + C.dim0, d0, d1, ring)


def holim_finite(tower: Sequence[Z2Complex], maps: Sequence[ChainMap]) -> Z2Complex:
    """Finite homotopy limit of C_0 <- C_1 <- ... <- C_{L-1}.

    Built as the fiber of id - sigma: prod_{n<L} C_n -> prod_{n<L-1} C_n,
    (phi x)_n = x_n - sigma_n(x_{n+1}).  Since phi is surjective the fiber is
    quasi-isomorphic to the compatible families, i.e. to C_{L-1}.
    """
    L = len(tower)
    if L == 0:
        raise PreconditionError("tower must be nonempty")
    if len(maps) != L - 1:
        raise PreconditionError(f"a tower of length {L} needs {L - 1} structure maps")
    ring = tower[0].ring
    for n, s in enumerate(maps):
        if s.f0.shape != (tower[n].dim0, tower[n + 1].dim0) or \
                s.f1.shape != (tower[n].dim1, tower[n + 1].dim1):
            raise PreconditionError(f"structure map {n} does not match levels {n + 1} -> {n}")
    P0 = [c.dim0 for c in tower]
    P1 = [c.dim1 for c in tower]
    Q0, Q1 = P0[:-1], P1[:-1]

    def diag(mats, rs, cs):
        blocks = [[mats[i] if i == j else None for j in range(len(cs))] for i in range(len(rs))]
        return block_matrix(blocks, rs, cs, ring)

    def phi(k):
        rs, cs = (Q0, P0) if k == 0 else (Q1, P1)
        blocks = [[None] * L for _ in range(L - 1)]
        for n in range(L - 1):
            blocks[n][n] = SparseMatrix.identity(rs[n], ring)
            sig = maps[n].f0 if k == 0 else maps[n].f1
            blocks[n][n + 1] = -sig
        return block_matrix(blocks, rs, cs, ring)

    dP0 = diag([c.d0 for c in tower], P1, P0)
    dP1 = diag([c.d1 for c in tower], P0, P1)
    dQ0 = diag([c.d0 for c in tower[:-1]], Q1, Q0)
    dQ1 = diag([c.d1 for c in tower[:-1]], Q0, Q1)
    sP0, sP1, sQ0, sQ1 = sum(P0), sum(P1), sum(Q0), sum(Q1)
    # fiber_0 = P0 + Q1, fiber_1 = P1 + Q0
    d0 = block_matrix([[dP0, None], [phi(0), -dQ1]], [sP1, sQ0], [sP0, sQ1], ring)
    d1 = block_matrix([[dP1, None], [phi(1), -dQ0]], [sP0, sQ1], [sP1, sQ0], ring)
    return Z2Complex(sP0 + sQ1, sP1 + sQ0, d0, d1, ring)
