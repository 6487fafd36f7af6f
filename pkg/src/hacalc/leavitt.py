"""Analytic cyclic homology of Leavitt and Cohn path algebras of finite graphs.

For a graph E, HA of the Leavitt path algebra is coker(N_E) in even degree
and ker(N_E) in odd degree, with N_E[v, w] = delta(v, w) - #{e : s(e) = w,
r(e) = v} for v in E^0 and w regular.  The Cohn algebra gives F^(E^0).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .errors import PreconditionError
from .linalg import Echelon, SparseMatrix, kernel_basis, rank, smith_normal_form


@dataclass(frozen=True)
class DirectedGraph:
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise PreconditionError("duplicate vertex names")
        vs = set(self.vertices)
        for s, r in self.edges:
            if s not in vs or r not in vs:
                raise PreconditionError(f"edge {s} -> {r} uses an unknown vertex")

    @classmethod
    def make(cls, vertices: Sequence, edges: Sequence = ()) -> "DirectedGraph":
        return cls(tuple(str(v) for v in vertices), tuple((str(s), str(r)) for s, r in edges))

    def relabel(self, mapping: dict) -> "DirectedGraph":
        return DirectedGraph.make([mapping[v] for v in self.vertices],
                                  [(mapping[s], mapping[r]) for s, r in self.edges])

    def with_vertex(self, name: str) -> "DirectedGraph":
        return DirectedGraph.make(list(self.vertices) + [name], self.edges)

    def to_text(self) -> str:
        lines = ["vertices: " + " ".join(self.vertices)]
        lines += [f"edge: {s} {r}" for s, r in self.edges]
        return "\n".join(lines) + "\n"


def rose(n: int) -> DirectedGraph:
    return DirectedGraph.make(["v"], [("v", "v")] * n)


def single_edge() -> DirectedGraph:
    return DirectedGraph.make(["v", "w"], [("v", "w")])


def cycle(n: int) -> DirectedGraph:
    vs = [f"v{i}" for i in range(n)]
    return DirectedGraph.make(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


_LINE = re.compile(r"^\s*(vertices|edge)\s*:\s*(.*?)\s*$")


def parse_graph(text: str) -> DirectedGraph:
    """Parse ``vertices: a b c`` followed by ``edge: s r`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    vertices = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise PreconditionError(f"line {lineno}: expected 'vertices:' or 'edge:', got {raw!r}")
        kind, rest = m.groups()
        if kind == "vertices":
            if vertices is not None:
                raise PreconditionError(f"line {lineno}: second 'vertices:' line")
            vertices = rest.split()
            if len(set(vertices)) != len(vertices):
                raise PreconditionError(f"line {lineno}: duplicate vertex names")
        else:
            if vertices is None:
                raise PreconditionError(f"line {lineno}: edge before the 'vertices:' line")
            parts = rest.split()
            if len(parts) != 2:
                raise PreconditionError(f"line {lineno}: an edge needs exactly a source and a range")
            for v in parts:
                if v not in vertices:
                    raise PreconditionError(f"line {lineno}: unknown vertex {v!r}")
            edges.append(tuple(parts))
    if vertices is None:
        raise PreconditionError("line 1: missing 'vertices:' line")
    return DirectedGraph.make(vertices, edges)


def regular_vertices(E: DirectedGraph) -> List[str]:
    """Vertices emitting at least one edge (all graphs here are finite)."""
    emitters = {s for s, _ in E.edges}
    return [v for v in E.vertices if v in emitters]


@dataclass
class NEMatrix:
    rows: List[str]
    cols: List[str]
    matrix: SparseMatrix

    def dense(self):
        return self.matrix.to_dense()


def build_NE(E: DirectedGraph) -> NEMatrix:
    reg = regular_vertices(E)
    vpos = {v: i for i, v in enumerate(E.vertices)}
    ent = {}
    for j, w in enumerate(reg):
        ent[(vpos[w], j)] = 1
    for s, r in E.edges:
        if s in reg:
            j = reg.index(s)
            key = (vpos[r], j)
            ent[key] = ent.get(key, 0) - 1
    return NEMatrix(list(E.vertices), reg, SparseMatrix(len(E.vertices), len(reg), ent, "ZZ"))


@dataclass
class LeavittReport:
    h0: int
    h1: int
    coker_basis: List[str] = field(default_factory=list)
    ker_basis: List[dict] = field(default_factory=list)
    integer_invariants: List[int] = field(default_factory=list)

    def dims(self) -> Tuple[int, int]:
        return (self.h0, self.h1)

    def to_json(self) -> dict:
        return {"h0": self.h0, "h1": self.h1, "coker_basis": self.coker_basis,
                "ker_basis": self.ker_basis, "smith_diagonal": self.integer_invariants}


def ha_leavitt(E: DirectedGraph) -> LeavittReport:
    N = build_NE(E)
    M = N.matrix
    r = rank(M)
    h0 = M.rows - r
    h1 = M.cols - r
    # cokernel representatives: vertices whose unit vectors complete the image
    ech = Echelon(M.rows)
    cols = {}
    for (i, j), x in M.to_ring("QQ").items():
        cols.setdefault(j, {})[i] = x
    for j in range(M.cols):
        ech.add(cols.get(j, {}))
    coker = [N.rows[i] for i in ech.complement()]
    ker = []
    for v in kernel_basis(M):
        ker.append({N.cols[j]: str(x) for j, x in sorted(v.items())})
    inv = smith_normal_form(M).diagonal if M.rows and M.cols else []
    if len(coker) != h0 or len(ker) != h1:
        raise AssertionError("basis sizes disagree with rank")
    return LeavittReport(h0, h1, coker, ker, inv)


def ha_cohn(E: DirectedGraph) -> LeavittReport:
    return LeavittReport(len(E.vertices), 0, list(E.vertices), [], [])
