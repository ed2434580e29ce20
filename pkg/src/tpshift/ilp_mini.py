"""Exact minimization of tiny bounded integer programs.

Depth-first branch and bound over variable domains with bounds propagation
and an objective cut, followed by a lexicographic tightening pass so the
returned optimal assignment is the lexicographically smallest one in
declaration order. Built for a handful of variables with small domains; no
floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

Terms = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class IntVar:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class LinearConstraint:
    """sum(coeff * var) sense rhs, with sense one of <=, >=, ==."""

    terms: Terms
    sense: str
    rhs: int


@dataclass(frozen=True)
class IlpInstance:
    variables: tuple[IntVar, ...]
    constraints: tuple[LinearConstraint, ...]
    objective: Terms


def terms(pairs: Iterable[tuple[str, int]]) -> Terms:
    """Merge duplicate names and drop zero coefficients."""
    acc: dict[str, int] = {}
    for name, c in pairs:
        acc[name] = acc.get(name, 0) + c
    return tuple((n, c) for n, c in acc.items() if c != 0)


def le(pairs: Iterable[tuple[str, int]], rhs: int) -> LinearConstraint:
    return LinearConstraint(terms(pairs), "<=", rhs)


def ge(pairs: Iterable[tuple[str, int]], rhs: int) -> LinearConstraint:
    return LinearConstraint(terms(pairs), ">=", rhs)


def eq(pairs: Iterable[tuple[str, int]], rhs: int) -> LinearConstraint:
    return LinearConstraint(terms(pairs), "==", rhs)


def solve_min(instance: IlpInstance) -> tuple[int, dict[str, int]] | None:
    """Minimize the objective. Returns (value, assignment) or None if infeasible.

    Exact. Among optimal assignments, returns the lexicographically smallest
    in variable declaration order.
    """
    index = {v.name: i for i, v in enumerate(instance.variables)}
    if len(index) != len(instance.variables):
        raise ValueError("duplicate variable name")
    n = len(instance.variables)
    lo0 = [v.lo for v in instance.variables]
    hi0 = [v.hi for v in instance.variables]
    rows: list[tuple[tuple[tuple[int, int], ...], int]] = []

    def add_le(ts: Terms, rhs: int) -> None:
        rows.append((tuple((index[name], c) for name, c in ts), rhs))

    for con in instance.constraints:
        for name, _ in con.terms:
            if name not in index:
                raise ValueError(f"constraint references unknown variable {name!r}")
        if con.sense in ("<=", "=="):
            add_le(con.terms, con.rhs)
        if con.sense in (">=", "=="):
            add_le(tuple((nm, -c) for nm, c in con.terms), -con.rhs)
        if con.sense not in ("<=", ">=", "=="):
            raise ValueError(f"unknown sense {con.sense!r}")
    for name, _ in instance.objective:
        if name not in index:
            raise ValueError(f"objective references unknown variable {name!r}")
    obj = tuple((index[name], c) for name, c in instance.objective)

    best = _branch_and_bound(n, lo0, hi0, rows, obj)
    if best is None:
        return None
    value = best
    # Lexicographic tightening: pin the objective, then fix each variable in
    # declaration order to its smallest feasible value.
    pin_rows = rows + [(obj, value), (tuple((j, -c) for j, c in obj), -value)]
    lo = list(lo0)
    hi = list(hi0)
    for j in range(n):
        for v in range(lo[j], hi[j] + 1):
            lo_try = lo.copy()
            hi_try = hi.copy()
            lo_try[j] = hi_try[j] = v
            if _satisfiable(n, lo_try, hi_try, pin_rows):
                lo[j] = hi[j] = v
                break
        else:  # pragma: no cover - value is feasible, so some v must fit
            raise AssertionError("lexicographic pass lost feasibility")
    assignment = {var.name: lo[i] for i, var in enumerate(instance.variables)}
    return value, assignment


def _propagate(
    n: int,
    lo: list[int],
    hi: list[int],
    rows: list[tuple[tuple[tuple[int, int], ...], int]],
) -> bool:
    """Tighten bounds to a fixpoint. False on an emptied domain."""
    if any(lo[j] > hi[j] for j in range(n)):
        return False
    changed = True
    while changed:
        changed = False
        for row, rhs in rows:
            base = 0
            for j, c in row:
                base += c * lo[j] if c > 0 else c * hi[j]
            if base > rhs:
                return False
            for j, c in row:
                own = c * lo[j] if c > 0 else c * hi[j]
                residual = rhs - (base - own)
                if c > 0:
                    limit = residual // c  # floor for positive coefficient
                    if limit < hi[j]:
                        hi[j] = limit
                        changed = True
                else:
                    limit = -(residual // (-c))  # ceil(residual / c), c < 0
                    if limit > lo[j]:
                        lo[j] = limit
                        changed = True
                if lo[j] > hi[j]:
                    return False
    return True


def _objective_floor(lo: list[int], hi: list[int], obj) -> int:
    total = 0
    for j, c in obj:
        total += c * lo[j] if c > 0 else c * hi[j]
    return total


def _branch_and_bound(n, lo0, hi0, rows, obj) -> int | None:
    best: int | None = None

    def dfs(lo: list[int], hi: list[int]) -> None:
        nonlocal best
        if not _propagate(n, lo, hi, rows):
            return
        if best is not None and _objective_floor(lo, hi, obj) >= best:
            return
        pick = -1
        width = None
        for j in range(n):
            w = hi[j] - lo[j]
            if w > 0 and (width is None or w < width):
                pick = j
                width = w
        if pick == -1:
            value = sum(c * lo[j] for j, c in obj)
            if best is None or value < best:
                best = value
            return
        for v in range(lo[pick], hi[pick] + 1):
            nlo = lo.copy()
            nhi = hi.copy()
            nlo[pick] = nhi[pick] = v
            dfs(nlo, nhi)

    dfs(list(lo0), list(hi0))
    return best


def _satisfiable(n, lo0, hi0, rows) -> bool:
    def dfs(lo: list[int], hi: list[int]) -> bool:
        if not _propagate(n, lo, hi, rows):
            return False
        for j in range(n):
            if lo[j] < hi[j]:
                for v in range(lo[j], hi[j] + 1):
                    nlo = lo.copy()
                    nhi = hi.copy()
                    nlo[j] = nhi[j] = v
                    if dfs(nlo, nhi):
                        return True
                return False
        return True

    return dfs(list(lo0), list(hi0))
