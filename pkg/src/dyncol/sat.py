"""SAT backends: an external solver process, python-sat in process, and a
small DPLL fallback.

Every SAT answer is re-checked against the formula before it is returned.
UNSAT from an external process is accepted only with the standard
``s UNSATISFIABLE`` line and exit status 20.
"""

from __future__ import annotations

import argparse
import os
import shlex
import subprocess
import sys
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .cnf import CnfFormula, verify_model

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"
SOLVER_ENV = "DYNCOL_SAT_SOLVER"
DPLL_MAX_VARS = 60
PYSAT_SOLVER = "glucose4"  # supports interrupt(), needed for timeouts


@dataclass
class SolveResult:
    status: str
    model: tuple[int, ...] | None = None
    solver: str = ""
    seconds: float = 0.0
    reason: str = ""
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.model is not None) != (self.status == SAT):
            raise ValueError("model present iff status is SAT")


def _checked(f: CnfFormula, result: SolveResult) -> SolveResult:
    if result.status == SAT:
        verify_model(f, result.model)
    return result


# --- external process -------------------------------------------------------


def parse_solver_output(text: str) -> tuple[str, list[int]]:
    status = UNKNOWN
    model: list[int] = []
    for line in text.splitlines():
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
        elif line.startswith("v "):
            model.extend(int(tok) for tok in line[2:].split() if tok != "0")
    return status, model


def solve_external(f: CnfFormula, command: str, timeout: float | None = None) -> SolveResult:
    argv = shlex.split(command)
    with tempfile.TemporaryDirectory(prefix="dyncol-") as tmp:
        path = Path(tmp) / "instance.cnf"
        f.write(path)
        start = time.perf_counter()
        try:
            proc = subprocess.run(argv + [str(path)], capture_output=True, text=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            return SolveResult(UNKNOWN, solver=command, seconds=time.perf_counter() - start, reason="timeout")
        except OSError as exc:
            return SolveResult(UNKNOWN, solver=command, reason=f"cannot run solver: {exc}")
        elapsed = time.perf_counter() - start
    status, model = parse_solver_output(proc.stdout)
    if status == SAT:
        return _checked(f, SolveResult(SAT, tuple(model), command, elapsed, stats={"exit": proc.returncode}))
    if status == UNSAT and proc.returncode == 20:
        return SolveResult(UNSAT, None, command, elapsed, stats={"exit": proc.returncode})
    return SolveResult(
        UNKNOWN, None, command, elapsed, reason=f"no trusted verdict (exit {proc.returncode})"
    )


# --- python-sat -------------------------------------------------------------


def pysat_available() -> bool:
    try:
        import pysat.solvers  # noqa: F401
    except ImportError:
        return False
    return True


def solve_pysat(f: CnfFormula, timeout: float | None = None, name: str = PYSAT_SOLVER) -> SolveResult:
    from pysat.solvers import Solver

    start = time.perf_counter()
    with Solver(name=name, bootstrap_with=f.clauses) as solver:
        timer = None
        if timeout is not None:
            timer = threading.Timer(timeout, solver.interrupt)
            timer.start()
            answer = solver.solve_limited(expect_interrupt=True)
            timer.cancel()
        else:
            answer = solver.solve()
        elapsed = time.perf_counter() - start
        stats = dict(solver.accum_stats() or {})
        label = f"pysat:{name}"
        if answer is True:
            model = tuple(solver.get_model() or ())
            return _checked(f, SolveResult(SAT, model, label, elapsed, stats=stats))
        if answer is False:
            return SolveResult(UNSAT, None, label, elapsed, stats=stats)
        return SolveResult(UNKNOWN, None, label, elapsed, reason="timeout", stats=stats)


# --- DPLL fallback ----------------------------------------------------------


def dpll(clauses, variable_count: int, node_limit: int = 1_000_000):
    """Unit propagation plus branching on the most frequent variable.

    Returns a model (list of signed literals), False for UNSAT, or None if
    ``node_limit`` branches were exhausted.
    """
    nodes = 0

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                c = tuple(x for x in c if x != -lit)
                if not c:
                    return None
            out.append(c)
        return out

    def search(cls, assignment):
        nonlocal nodes
        while True:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            assignment = assignment + [unit]
            cls = simplify(cls, unit)
            if cls is None:
                return False
        if not cls:
            return assignment
        nodes += 1
        if nodes > node_limit:
            raise TimeoutError
        counts: dict[int, int] = {}
        for c in cls:
            for lit in c:
                counts[abs(lit)] = counts.get(abs(lit), 0) + 1
        var = max(counts, key=lambda v: (counts[v], -v))
        for lit in (var, -var):
            reduced = simplify(cls, lit)
            if reduced is None:
                continue
            found = search(reduced, assignment + [lit])
            if found is not False:
                return found
        return False

    try:
        found = search([tuple(c) for c in clauses], [])
    except TimeoutError:
        return None
    if found is False:
        return False
    assigned = {abs(lit) for lit in found}
    return found + [-v for v in range(1, variable_count + 1) if v not in assigned]


def solve_dpll(f: CnfFormula, max_vars: int = DPLL_MAX_VARS) -> SolveResult:
    if f.variable_count > max_vars:
        return SolveResult(
            UNKNOWN, solver="dpll", reason=f"{f.variable_count} variables exceed DPLL cap {max_vars}"
        )
    start = time.perf_counter()
    found = dpll(f.clauses, f.variable_count)
    elapsed = time.perf_counter() - start
    if found is None:
        return SolveResult(UNKNOWN, solver="dpll", seconds=elapsed, reason="node limit")
    if found is False:
        return SolveResult(UNSAT, solver="dpll", seconds=elapsed)
    return _checked(f, SolveResult(SAT, tuple(sorted(found, key=abs)), "dpll", elapsed))


# --- dispatch ---------------------------------------------------------------


def default_backend() -> str:
    if os.environ.get(SOLVER_ENV):
        return "external"
    return "pysat" if pysat_available() else "dpll"


def solve(f: CnfFormula, backend: str | None = None, timeout: float | None = None) -> SolveResult:
    """Decide ``f`` with ``backend`` (``external``, ``pysat``, ``dpll``; default: auto)."""
    backend = backend or default_backend()
    if backend == "external":
        command = os.environ.get(SOLVER_ENV)
        if not command:
            return SolveResult(UNKNOWN, reason=f"{SOLVER_ENV} is not set")
        return solve_external(f, command, timeout)
    if backend == "pysat":
        if not pysat_available():
            return SolveResult(UNKNOWN, reason="python-sat is not installed")
        return solve_pysat(f, timeout)
    if backend == "dpll":
        return solve_dpll(f)
    raise ValueError(f"unknown SAT backend {backend!r}")


def solver_main(argv=None) -> int:
    """Minimal DIMACS solver command (``dyncol-sat FILE``) backed by python-sat.

    Prints the standard ``s``/``v`` lines and exits 10 (SAT), 20 (UNSAT) or 0.
    """
    parser = argparse.ArgumentParser(prog="dyncol-sat")
    parser.add_argument("cnf")
    parser.add_argument("--solver", default=PYSAT_SOLVER)
    args = parser.parse_args(argv)
    f = CnfFormula.read(args.cnf)
    result = solve_pysat(f, name=args.solver)
    if result.status == SAT:
        print("s SATISFIABLE")
        print("v " + " ".join(map(str, result.model)) + " 0")
        return 10
    if result.status == UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


if __name__ == "__main__":
    sys.exit(solver_main())
