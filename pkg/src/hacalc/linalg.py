"""Sparse exact linear algebra over Z, Q and Q_p.

Matrices are dictionaries of nonzero entries.  Three coefficient rings are
understood: ``"ZZ"``, ``"QQ"`` (Python ints / Fractions) and a
:class:`~hacalc.padic.PadicConfig` (entries are :class:`PadicScalar`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple, Union

from .errors import PreconditionError
from .padic import INF, PadicConfig, PadicScalar, decode, valuation

Ring = Union[str, PadicConfig]
Vector = Dict[int, object]


def is_negligible(x) -> bool:
    """Zero test used during elimination (inexact p-adic zeros count as zero)."""
    if isinstance(x, PadicScalar):
        return x.is_negligible()
    return x == 0


def _coerce(x, ring: Ring):
    if isinstance(ring, PadicConfig):
        return PadicScalar.coerce(x, ring)
    if ring == "ZZ":
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"non-integer entry {x} in an integer matrix")
            return x.numerator
        return int(x)
    if ring == "QQ":
        if isinstance(x, PadicScalar):
            return x.to_fraction()
        return Fraction(x)
    raise ValueError(f"unknown ring {ring!r}")


class SparseMatrix:
    """Immutable sparse matrix; ``entries`` maps ``(row, col)`` to a nonzero scalar."""

    __slots__ = ("rows", "cols", "ring", "_entries")

    def __init__(self, rows: int, cols: int, entries=None, ring: Ring = "QQ"):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        self.ring = ring
        clean = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
            x = _coerce(x, ring)
            if isinstance(x, PadicScalar):
                if not x.is_zero():
                    clean[(i, j)] = x
            elif x != 0:
                clean[(i, j)] = x
        self._entries = clean

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key):
        return self._entries.get(key, 0)

    @classmethod
    def from_dense(cls, rows_list, ring: Ring = "QQ") -> "SparseMatrix":
        nrows = len(rows_list)
        ncols = len(rows_list[0]) if nrows else 0
        ent = {}
        for i, r in enumerate(rows_list):
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
            for j, x in enumerate(r):
                ent[(i, j)] = x
        return cls(nrows, ncols, ent, ring)

    @classmethod
    def identity(cls, n: int, ring: Ring = "QQ") -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)}, ring)

    @classmethod
    def zero(cls, rows: int, cols: int, ring: Ring = "QQ") -> "SparseMatrix":
        return cls(rows, cols, {}, ring)

    def to_dense(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), x in self._entries.items():
            out[i][j] = x
        return out

    def row_dicts(self) -> Dict[int, Vector]:
        rows: Dict[int, Vector] = {}
        for (i, j), x in self._entries.items():
            rows.setdefault(i, {})[j] = x
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(j, i): x for (i, j), x in self._entries.items()}, self.ring)

    def to_ring(self, ring: Ring) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, self._entries, ring)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.row_dicts()
        acc: Dict[Tuple[int, int], object] = {}
        for (i, k), x in self._entries.items():
            for j, y in orows.get(k, {}).items():
                key = (i, j)
                acc[key] = acc[key] + x * y if key in acc else x * y
        return SparseMatrix(self.rows, other.cols, acc, self.ring)

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for (i, j), x in self._entries.items():
            if j in v:
                out[i] = out[i] + x * v[j] if i in out else x * v[j]
        return {i: x for i, x in out.items() if not _exact_zero(x)}

    def scale(self, c) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols,
                            {k: x * c for k, x in self._entries.items()}, self.ring)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        acc = dict(self._entries)
        for k, x in other._entries.items():
            acc[k] = acc[k] + x if k in acc else x
        return SparseMatrix(self.rows, self.cols, acc, self.ring)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self._entries)}, ring={self.ring!r})"


def _exact_zero(x) -> bool:
    if isinstance(x, PadicScalar):
        return x.is_zero()
    return x == 0


def block_matrix(blocks: List[List[SparseMatrix | None]], row_sizes, col_sizes,
                 ring: Ring) -> SparseMatrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    ent = {}
    r0 = 0
    for bi, brow in enumerate(blocks):
        c0 = 0
        for bj, b in enumerate(brow):
            if b is not None:
                if b.shape != (row_sizes[bi], col_sizes[bj]):
                    raise ValueError(f"block ({bi}, {bj}) has shape {b.shape}, "
                                     f"expected {(row_sizes[bi], col_sizes[bj])}")
                for (i, j), x in b.items():
                    ent[(r0 + i, c0 + j)] = x
            c0 += col_sizes[bj]
        r0 += row_sizes[bi]
    return SparseMatrix(sum(row_sizes), sum(col_sizes), ent, ring)


# ---------------------------------------------------------------------------
# Smith normal form over Z

@dataclass
class SmithForm:
    diagonal: List[int]
    U: SparseMatrix
    V: SparseMatrix


def smith_normal_form(M: SparseMatrix) -> SmithForm:
    """Smith form with unimodular transforms: ``U @ M @ V == diag(diagonal)``.

    The diagonal has ``min(rows, cols)`` entries, nonnegative, each dividing
    the next (zeros last).
    """
    m, n = M.rows, M.cols
    A = {i: dict(r) for i, r in M.to_ring("ZZ").row_dicts().items()}
    U = [{i: 1} for i in range(m)]           # row i of U
    Vc = [{j: 1} for j in range(n)]          # column j of V

    def row_swap(i, k):
        if i == k:
            return
        A[i], A[k] = A.get(k, {}), A.get(i, {})
        U[i], U[k] = U[k], U[i]

    def row_addmul(i, k, q):
        # row_i += q * row_k
        ri = A.setdefault(i, {})
        for j, x in A.get(k, {}).items():
            y = ri.get(j, 0) + q * x
            if y:
                ri[j] = y
            else:
                ri.pop(j, None)
        ui = U[i]
        for j, x in U[k].items():
            y = ui.get(j, 0) + q * x
            if y:
                ui[j] = y
            else:
                ui.pop(j, None)

    def col_swap(j, k):
        if j == k:
            return
        for r in A.values():
            a, b = r.pop(j, 0), r.pop(k, 0)
            if b:
                r[j] = b
            if a:
                r[k] = a
        Vc[j], Vc[k] = Vc[k], Vc[j]

    def col_addmul(j, k, q):
        # col_j += q * col_k
        for r in A.values():
            x = r.get(k, 0)
            if x:
                y = r.get(j, 0) + q * x
                if y:
                    r[j] = y
                else:
                    r.pop(j, None)
        vj = Vc[j]
        for i, x in Vc[k].items():
            y = vj.get(i, 0) + q * x
            if y:
                vj[i] = y
            else:
                vj.pop(i, None)

    def row_negate(i):
        A[i] = {j: -x for j, x in A.get(i, {}).items()}
        U[i] = {j: -x for j, x in U[i].items()}

    diag: List[int] = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j, x in A.get(i, {}).items():
                if j >= t:
                    key = (abs(x), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, i0, j0 = best
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            changed = False
            piv = A[t][t]
            for i in range(t + 1, m):
                x = A.get(i, {}).get(t, 0)
                if x:
                    row_addmul(i, t, -(x // piv))
            rest = [(abs(A[i][t]), i) for i in range(t + 1, m) if A.get(i, {}).get(t, 0)]
            if rest:
                _, i1 = min(rest)
                row_swap(t, i1)
                continue
            piv = A[t][t]
            for j in [j for j in A[t] if j > t]:
                x = A[t].get(j, 0)
                if x:
                    col_addmul(j, t, -(x // piv))
            rest = [(abs(x), j) for j, x in A[t].items() if j > t]
            if rest:
                _, j1 = min(rest)
                col_swap(t, j1)
                continue
            piv = A[t][t]
            for i in range(t + 1, m):
                if any(x % piv for j, x in A.get(i, {}).items() if j > t):
                    row_addmul(t, i, 1)
                    changed = True
                    break
            if not changed:
                break
        if A[t][t] < 0:
            row_negate(t)
        diag.append(A[t][t])
    diag += [0] * (min(m, n) - len(diag))

    Umat = SparseMatrix(m, m, {(i, j): x for i in range(m) for j, x in U[i].items()}, "ZZ")
    Vmat = SparseMatrix(n, n, {(i, j): x for j in range(n) for i, x in Vc[j].items()}, "ZZ")
    return SmithForm(diag, Umat, Vmat)


# ---------------------------------------------------------------------------
# Ranks, kernels, cokernels

@dataclass
class RankReport:
    rank: int
    kernel_dim: int
    cokernel_dim: int
    precision_limited: bool = False
    pivot_valuations: List[int] = field(default_factory=list)

    def __post_init__(self):
        if self.rank < 0 or self.kernel_dim < 0 or self.cokernel_dim < 0:
            raise ValueError("negative dimension in rank report")


@dataclass
class _Elimination:
    pivots: List[Tuple[int, int, Vector]]   # (row, col, row vector at pivot time)
    leftover: Dict[int, Vector]
    precision_limited: bool
    pivot_valuations: List[int]


def _eliminate(M: SparseMatrix, tol_val=None) -> _Elimination:
    """Gaussian elimination with full pivoting.

    Over Q_p the pivot is the entry of minimal valuation, ties broken by the
    smallest ``(row, col)``; entries of valuation ``>= tol_val`` are never
    used as pivots.  Over Q the first nonzero entry in ``(row, col)`` order
    is used.
    """
    padic = isinstance(M.ring, PadicConfig)
    rows = {i: dict(r) for i, r in M.row_dicts().items()}
    pivots = []
    pvals = []
    while rows:
        best = None
        for i, r in rows.items():
            for j, x in r.items():
                if padic:
                    if x.is_negligible():
                        continue
                    key = (x.valuation, i, j)
                elif x == 0:
                    continue
                else:
                    key = (i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        if padic:
            v, i0, j0 = best
            if tol_val is not None and v >= tol_val:
                break
            pvals.append(v)
        else:
            i0, j0 = best
        prow = rows.pop(i0)
        a = prow[j0]
        for i, r in rows.items():
            x = r.get(j0)
            if x is None:
                continue
            f = x / a
            for j, y in prow.items():
                if j == j0:
                    continue
                z = r[j] - f * y if j in r else -(f * y)
                if _exact_zero(z):
                    r.pop(j, None)
                else:
                    r[j] = z
            del r[j0]
        pivots.append((i0, j0, prow))
    limited = False
    if padic:
        N = M.ring.precision
        for r in rows.values():
            for x in r.values():
                if x.is_zero():
                    continue
                if not x.precision_exhausted or x.valuation < N:
                    limited = True
    leftover = {i: r for i, r in rows.items() if r}
    return _Elimination(pivots, leftover, limited, pvals)


def default_tolerance(cfg: PadicConfig) -> int:
    return cfg.precision // 2


def padic_rank(M: SparseMatrix, tol_val: int | None = None) -> RankReport:
    """Rank over Q_p counting pivots of valuation ``< tol_val``.

    ``precision_limited`` is set when elimination stops with entries that are
    not provably zero: nonzero entries at or above the tolerance, or inexact
    zeros whose valuation bound lies below the working precision.
    """
    if not isinstance(M.ring, PadicConfig):
        raise PreconditionError("padic_rank needs a matrix over a PadicConfig ring")
    cfg = M.ring
    if tol_val is None:
        tol_val = default_tolerance(cfg)
    if tol_val > cfg.precision:
        raise PreconditionError(f"tol_val={tol_val} exceeds precision {cfg.precision}")
    el = _eliminate(M, tol_val)
    r = len(el.pivots)
    return RankReport(r, M.cols - r, M.rows - r, el.precision_limited, list(el.pivot_valuations))


def rank(M: SparseMatrix, tol_val: int | None = None) -> int:
    if isinstance(M.ring, PadicConfig):
        return padic_rank(M, tol_val).rank
    return len(_eliminate(M.to_ring("QQ")).pivots)


def rank_report(M: SparseMatrix, tol_val: int | None = None) -> RankReport:
    if isinstance(M.ring, PadicConfig):
        return padic_rank(M, tol_val)
    r = rank(M)
    return RankReport(r, M.cols - r, M.rows - r)


def kernel_basis(M: SparseMatrix, tol_val: int | None = None) -> List[Vector]:
    """Basis of the right kernel, one sparse vector per free column."""
    if isinstance(M.ring, PadicConfig):
        if tol_val is None:
            tol_val = default_tolerance(M.ring)
        el = _eliminate(M, tol_val)
        one = M.ring.one()
    else:
        el = _eliminate(M.to_ring("QQ"))
        one = Fraction(1)
    pivot_cols = {c for _, c, _ in el.pivots}
    basis = []
    for f in range(M.cols):
        if f in pivot_cols:
            continue
        v: Vector = {f: one}
        for _, c, prow in reversed(el.pivots):
            s = None
            for j, x in prow.items():
                if j != c and j in v:
                    s = x * v[j] if s is None else s + x * v[j]
            if s is not None and not _exact_zero(s):
                v[c] = -s / prow[c]
        basis.append({j: x for j, x in v.items() if not _exact_zero(x)})
    return basis


def cokernel_presentation(M: SparseMatrix, tol_val: int | None = None) -> RankReport:
    """Dimensions of image, kernel and cokernel (over the field of fractions)."""
    return rank_report(M, tol_val)


def residual_ok(M: SparseMatrix, v: Vector, tol_val: int | None = None) -> bool:
    """Check ``M v == 0`` exactly (Q) or up to valuation ``tol_val`` (Q_p)."""
    out = M.apply(v)
    if isinstance(M.ring, PadicConfig):
        tol = default_tolerance(M.ring) if tol_val is None else tol_val
        return all(x.is_zero() or x.valuation >= tol for x in out.values())
    return not out


# ---------------------------------------------------------------------------
# Echelon bases of row spaces (field coefficients)

class Echelon:
    """Incrementally built reduced echelon basis of a row space.

    The pivot of a row is its largest column index, so that the monomials
    left over as cokernel representatives are the smallest ones.  Rows are
    kept fully reduced: no pivot column occurs in another row.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Vector] = {}

    def reduce(self, v: Vector) -> Vector:
        v = {j: x for j, x in v.items() if not is_negligible(x)}
        for c in [c for c in v if c in self.pivots]:
            x = v.pop(c)
            for j, y in self.pivots[c].items():
                if j == c:
                    continue
                z = v[j] - x * y if j in v else -(x * y)
                if is_negligible(z):
                    v.pop(j, None)
                else:
                    v[j] = z
        return v

    def add(self, v: Vector) -> bool:
        """Insert a vector; returns True when it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        c = max(v)
        a = v[c]
        row = {j: x / a for j, x in v.items()}
        row[c] = row[c] / row[c] if isinstance(row[c], PadicScalar) else 1
        for other in self.pivots.values():
            x = other.pop(c, None)
            if x is None:
                continue
            for j, y in row.items():
                if j == c:
                    continue
                z = other[j] - x * y if j in other else -(x * y)
                if is_negligible(z):
                    other.pop(j, None)
                else:
                    other[j] = z
        self.pivots[c] = row
        return True

    def rank(self) -> int:
        return len(self.pivots)

    def full_reduce(self):
        """Kept for callers that expect it; the basis is always reduced."""

    def complement(self) -> List[int]:
        return [j for j in range(self.ncols) if j not in self.pivots]

    def quotient_matrix(self, ring: Ring) -> Tuple[List[int], SparseMatrix]:
        """Matrix of the projection onto the span of the non-pivot columns.

        Returns ``(complement, Q)`` where ``Q`` has one row per complement
        column and one column per ambient column.
        """
        comp = self.complement()
        pos = {c: k for k, c in enumerate(comp)}
        ent = {}
        for c in comp:
            ent[(pos[c], c)] = 1
        for c, row in self.pivots.items():
            for j, x in row.items():
                if j != c:
                    ent[(pos[j], c)] = -x
        return comp, SparseMatrix(len(comp), self.ncols, ent, ring)


class SpanSolver:
    """Express vectors as combinations of a fixed generating list (exact Q)."""

    def __init__(self, vectors: Iterable[Vector]):
        self.pivots: Dict[int, Tuple[Vector, Dict[int, Fraction]]] = {}
        for k, v in enumerate(vectors):
            red, comb = self._reduce({j: Fraction(x) for j, x in v.items() if x}, {k: Fraction(1)})
            if red:
                c = max(red)
                a = red[c]
                self.pivots[c] = ({j: x / a for j, x in red.items()},
                                  {j: x / a for j, x in comb.items()})

    def _reduce(self, v, comb):
        while v:
            live = [c for c in v if c in self.pivots]
            if not live:
                break
            c = max(live)
            x = v[c]
            row, rc = self.pivots[c]
            for j, y in row.items():
                z = v.get(j, 0) - x * y
                if z:
                    v[j] = z
                else:
                    v.pop(j, None)
            for j, y in rc.items():
                z = comb.get(j, 0) - x * y
                if z:
                    comb[j] = z
                else:
                    comb.pop(j, None)
        return v, comb

    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, target: Vector):
        """Coefficients ``c`` with ``sum c_k v_k == target``, or None."""
        red, comb = self._reduce({j: Fraction(x) for j, x in target.items() if x}, {})
        if red:
            return None
        return {k: -x for k, x in comb.items()}


# ---------------------------------------------------------------------------
# Lattices over Z_(p)

class ZpLattice:
    """Z_(p)-submodule of Q^n spanned by rational vectors.

    Kept in echelon form with respect to increasing column index; each pivot
    entry is normalised to a power of p.  Arithmetic is exact.
    """

    def __init__(self, p: int):
        self.p = p
        self.pivots: Dict[int, Dict[int, Fraction]] = {}

    def _normalize(self, v):
        c = min(v)
        x = v[c]
        w = valuation(x, self.p)
        u = x / Fraction(self.p) ** w
        return c, w, {j: y / u for j, y in v.items()}

    def add(self, vec) -> bool:
        v = {j: Fraction(x) for j, x in vec.items() if x != 0}
        grew = False
        while v:
            c, w, v = self._normalize(v)
            row = self.pivots.get(c)
            if row is None:
                self.pivots[c] = v
                return True
            wr = valuation(row[c], self.p)
            if w < wr:
                self.pivots[c] = v
                grew = True
                v, row = row, v
            f = v[c] / row[c]
            for j, y in row.items():
                z = v.get(j, 0) - f * y
                if z:
                    v[j] = z
                else:
                    v.pop(j, None)
        return grew

    def contains(self, vec) -> bool:
        v = {j: Fraction(x) for j, x in vec.items() if x != 0}
        while v:
            c = min(v)
            row = self.pivots.get(c)
            if row is None:
                return False
            f = v[c] / row[c]
            if valuation(f, self.p) < 0:
                return False
            for j, y in row.items():
                z = v.get(j, 0) - f * y
                if z:
                    v[j] = z
                else:
                    v.pop(j, None)
        return True

    def basis(self) -> List[Dict[int, Fraction]]:
        return [dict(self.pivots[c]) for c in sorted(self.pivots)]

    def rank(self) -> int:
        return len(self.pivots)


# ---------------------------------------------------------------------------
# Matrix Market style text dumps

def _fmt_entry(x) -> str:
    if isinstance(x, PadicScalar):
        return x.encode()
    return str(x)


def to_matrix_market(M: SparseMatrix) -> str:
    ring = f"padic p={M.ring.p} N={M.ring.precision}" if isinstance(M.ring, PadicConfig) else M.ring
    lines = ["%%MatrixMarket matrix coordinate general", f"% ring: {ring}",
             f"{M.rows} {M.cols} {M.nnz()}"]
    for (i, j) in sorted(M._entries):
        lines.append(f"{i + 1} {j + 1} {_fmt_entry(M._entries[(i, j)])}")
    return "\n".join(lines) + "\n"


def from_matrix_market(text: str, ring: Ring) -> SparseMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("%")]
    if not lines:
        raise PreconditionError("empty Matrix Market text")
    try:
        rows, cols, nnz = (int(t) for t in lines[0].split())
    except ValueError:
        raise PreconditionError(f"malformed size line {lines[0]!r}") from None
    ent = {}
    for ln in lines[1:]:
        parts = ln.split(None, 2)
        if len(parts) != 3:
            raise PreconditionError(f"malformed entry line {ln!r}")
        i, j = int(parts[0]) - 1, int(parts[1]) - 1
        raw = parts[2].strip()
        ent[(i, j)] = decode(raw, ring) if isinstance(ring, PadicConfig) else Fraction(raw)
    if len(ent) != nnz:
        raise PreconditionError(f"expected {nnz} entries, found {len(ent)}")
    return SparseMatrix(rows, cols, ent, ring)


def vectors_to_matrix(vectors: Iterable[Vector], ncols: int, ring: Ring) -> SparseMatrix:
    """Stack sparse vectors as matrix columns (``ncols`` is the ambient dimension)."""
    vecs = list(vectors)
    ent = {}
    for k, v in enumerate(vecs):
        for i, x in v.items():
            ent[(i, k)] = x
    return SparseMatrix(ncols, len(vecs), ent, ring)


__all__ = [
    "SparseMatrix", "SmithForm", "RankReport", "Echelon", "SpanSolver", "ZpLattice", "INF",
    "smith_normal_form", "padic_rank", "rank", "rank_report", "kernel_basis",
    "cokernel_presentation", "residual_ok", "block_matrix", "to_matrix_market",
    "from_matrix_market", "vectors_to_matrix", "is_negligible", "default_tolerance",
]
