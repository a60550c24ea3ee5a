"""CNF encodings of r-dynamic colourability and of the total-domination
colouring problem, with DIMACS I/O and model decoding.

Variables are numbered in contiguous blocks recorded in ``variable_map``;
each block maps a multi-index to ``start + row-major offset``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from pathlib import Path
from typing import Iterable, Sequence

from .colouring import Colouring
from .errors import FormatError, ModelError
from .graph import Graph


@dataclass(frozen=True)
class VarBlock:
    role: str
    start: int
    shape: tuple[int, ...]

    @property
    def count(self) -> int:
        return prod(self.shape)

    @property
    def stop(self) -> int:
        return self.start + self.count

    def var(self, *index: int) -> int:
        offset = 0
        for idx, dim in zip(index, self.shape):
            if not 0 <= idx < dim:
                raise IndexError(f"{self.role}{index} outside shape {self.shape}")
            offset = offset * dim + idx
        return self.start + offset


@dataclass
class CnfFormula:
    kind: str
    params: dict
    variable_count: int = 0
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    variable_map: list[VarBlock] = field(default_factory=list)

    def new_block(self, role: str, *shape: int) -> VarBlock:
        block = VarBlock(role, self.variable_count + 1, tuple(shape))
        self.variable_count += block.count
        self.variable_map.append(block)
        return block

    def block(self, role: str) -> VarBlock:
        return next(b for b in self.variable_map if b.role == role)

    def add(self, clause: Iterable[int]) -> None:
        clause = tuple(clause)
        if not clause:
            raise ValueError("empty clause; use add_contradiction")
        self.clauses.append(clause)

    def add_contradiction(self) -> None:
        f = self.new_block("false", 1).var(0)
        self.clauses.append((f,))
        self.clauses.append((-f,))

    def audit(self) -> None:
        for clause in self.clauses:
            if not clause or any(lit == 0 or abs(lit) > self.variable_count for lit in clause):
                raise ValueError(f"bad clause {clause}")
        pos = 1
        for b in self.variable_map:
            if b.start != pos:
                raise ValueError("variable_map does not partition the variables")
            pos = b.stop
        if pos != self.variable_count + 1:
            raise ValueError("variable_map does not cover every variable")

    def first_unsatisfied(self, true_vars: set[int]) -> tuple[int, ...] | None:
        for clause in self.clauses:
            if not any((lit > 0) == (abs(lit) in true_vars) for lit in clause):
                return clause
        return None

    # --- DIMACS ---------------------------------------------------------

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write(f"c kind {self.kind}\n")
        for key, value in sorted(self.params.items()):
            buf.write(f"c param {key} {value}\n")
        for b in self.variable_map:
            buf.write(f"c map {b.role} {b.start} {'x'.join(map(str, b.shape))}\n")
        buf.write(f"p cnf {self.variable_count} {len(self.clauses)}\n")
        for clause in self.clauses:
            buf.write(" ".join(map(str, clause)))
            buf.write(" 0\n")
        return buf.getvalue()

    def write(self, path) -> None:
        Path(path).write_text(self.dumps(), encoding="ascii")

    @classmethod
    def loads(cls, text: str) -> "CnfFormula":
        f = cls(kind="raw", params={})
        header = None
        pending: list[int] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split()
            if not parts:
                continue
            try:
                if parts[0] == "c":
                    if len(parts) >= 3 and parts[1] == "kind":
                        f.kind = parts[2]
                    elif len(parts) >= 4 and parts[1] == "param":
                        f.params[parts[2]] = int(parts[3])
                    elif len(parts) >= 5 and parts[1] == "map":
                        shape = tuple(int(x) for x in parts[4].split("x"))
                        f.variable_map.append(VarBlock(parts[2], int(parts[3]), shape))
                    continue
                if parts[0] == "p":
                    if len(parts) != 4 or parts[1] != "cnf" or header is not None:
                        raise ValueError
                    header = (int(parts[2]), int(parts[3]))
                    continue
                if header is None:
                    raise ValueError
                for tok in parts:
                    lit = int(tok)
                    if lit == 0:
                        if not pending:
                            raise ValueError
                        f.clauses.append(tuple(pending))
                        pending = []
                    else:
                        pending.append(lit)
            except ValueError:
                raise FormatError(f"line {lineno}: malformed CNF line {raw!r}") from None
        if header is None or pending:
            raise FormatError("missing problem line or unterminated clause")
        f.variable_count = header[0]
        if len(f.clauses) != header[1]:
            raise FormatError(f"header declares {header[1]} clauses, found {len(f.clauses)}")
        try:
            f.audit()
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        return f

    @classmethod
    def read(cls, path) -> "CnfFormula":
        return cls.loads(Path(path).read_text(encoding="ascii"))


def _at_least(f: CnfFormula, lits: Sequence[int], bound: int, role: str) -> None:
    """Sequential counter asserting at least ``bound`` of ``lits`` are true.

    ``R[i][j]`` (1 <= j <= min(i, bound)) implies at least ``j`` of the first
    ``i`` literals hold.
    """
    k = len(lits)
    if bound <= 0:
        return
    if bound > k:
        f.add_contradiction()
        return
    regs = f.new_block(role, k, bound)
    R = lambda i, j: regs.var(i - 1, j - 1)  # noqa: E731
    for i in range(1, k + 1):
        for j in range(1, min(i, bound) + 1):
            prev_same = [R(i - 1, j)] if j <= i - 1 else []
            f.add([-R(i, j), *prev_same, lits[i - 1]])
            if j >= 2:
                f.add([-R(i, j), *prev_same, R(i - 1, j - 1)])
    f.add([R(k, bound)])


def encode_r_dynamic_cnf(
    g: Graph, r: int, k: int, *, symmetry: Sequence[int] = ()
) -> CnfFormula:
    """Satisfiable iff ``g`` has a proper r-dynamic colouring from ``[k]``.

    ``symmetry`` is an optional clique whose first ``min(len, k)`` vertices
    are pinned to colours ``1, 2, ...``; this only removes colour permutations.
    """
    if k < 1:
        raise ValueError("k must be positive")
    V = g.vertex_count
    f = CnfFormula(kind="r_dynamic", params={"vertices": V, "r": r, "k": k})
    xb = f.new_block("x", V, k)
    x = lambda v, c: xb.var(v, c - 1)  # noqa: E731
    colours = range(1, k + 1)
    for v in range(V):
        f.add(x(v, c) for c in colours)
        for a, b in combinations(colours, 2):
            f.add([-x(v, a), -x(v, b)])
    for u, v in g.edges():
        for c in colours:
            f.add([-x(u, c), -x(v, c)])

    nbrs = [g.neighbour_list(v) for v in range(V)]
    if r == 2:
        for v in range(V):
            if len(nbrs[v]) >= 2:
                for c in colours:
                    f.add(-x(u, c) for u in nbrs[v])
    elif r >= 3:
        needy = [v for v in range(V) if min(r, len(nbrs[v])) >= 2]
        if needy:
            yb = f.new_block("y", len(needy), k)
            for row, v in enumerate(needy):
                for c in colours:
                    f.add([-yb.var(row, c - 1), *(x(u, c) for u in nbrs[v])])
            for row, v in enumerate(needy):
                _at_least(
                    f, [yb.var(row, c - 1) for c in colours], min(r, len(nbrs[v])), f"counter{v}"
                )
        f.params["needy"] = len(needy)

    pinned = list(symmetry)[:k]
    for c, v in enumerate(pinned, 1):
        f.add([x(v, c)])
    f.params["pinned"] = len(pinned)
    return f


def encode_gamma_cnf(g: Graph, t: int, *, symmetry: bool = False) -> CnfFormula:
    """Satisfiable iff some total dominating set ``D`` has ``chi(G[D]) <= t``.

    With ``symmetry`` vertex 0, if selected, is pinned to colour 1.
    """
    if t < 1:
        raise ValueError("t must be positive")
    V = g.vertex_count
    f = CnfFormula(kind="gamma", params={"vertices": V, "t": t})
    sb = f.new_block("s", V)
    zb = f.new_block("z", V, t)
    s = lambda v: sb.var(v)  # noqa: E731
    z = lambda v, c: zb.var(v, c - 1)  # noqa: E731
    isolated = False
    for v in range(V):
        nbrs = g.neighbour_list(v)
        if nbrs:
            f.add(s(u) for u in nbrs)
        else:
            isolated = True
    for v in range(V):
        f.add([-s(v), *(z(v, c) for c in range(1, t + 1))])
        for c in range(1, t + 1):
            f.add([-z(v, c), s(v)])
    for u, v in g.edges():
        for c in range(1, t + 1):
            f.add([-z(u, c), -z(v, c)])
    if symmetry and V:
        for c in range(2, t + 1):
            f.add([-z(0, c)])
    if isolated:
        f.add_contradiction()
    return f


@dataclass(frozen=True)
class GammaWitness:
    members: frozenset
    colours: dict  # vertex -> colour, defined on members

    def induced_colouring(self, palette_size: int | None = None) -> Colouring:
        """Colouring of ``G[D]`` in the induced subgraph's (sorted) vertex order."""
        return Colouring([self.colours[v] for v in sorted(self.members)], palette_size)


def _true_vars(f: CnfFormula, model: Iterable[int]) -> set[int]:
    true_vars = set()
    for lit in model:
        lit = int(lit)
        if abs(lit) > f.variable_count:
            raise ModelError(f"model mentions variable {abs(lit)} > {f.variable_count}")
        if lit > 0:
            true_vars.add(lit)
    return true_vars


def verify_model(f: CnfFormula, model: Iterable[int]) -> set[int]:
    true_vars = _true_vars(f, model)
    clause = f.first_unsatisfied(true_vars)
    if clause is not None:
        raise ModelError(f"model violates clause {clause}")
    return true_vars


def decode_model(f: CnfFormula, model: Iterable[int]):
    """Colouring for ``r_dynamic`` formulas, ``GammaWitness`` for ``gamma``."""
    true_vars = verify_model(f, model)
    V = f.params["vertices"]
    if f.kind == "r_dynamic":
        xb = f.block("x")
        k = f.params["k"]
        colours = []
        for v in range(V):
            chosen = [c for c in range(1, k + 1) if xb.var(v, c - 1) in true_vars]
            colours.append(chosen[0])
        return Colouring(colours, k)
    if f.kind == "gamma":
        sb, zb = f.block("s"), f.block("z")
        t = f.params["t"]
        members = frozenset(v for v in range(V) if sb.var(v) in true_vars)
        colours = {
            v: next(c for c in range(1, t + 1) if zb.var(v, c - 1) in true_vars) for v in members
        }
        return GammaWitness(members, colours)
    raise ModelError(f"cannot decode formulas of kind {f.kind!r}")
