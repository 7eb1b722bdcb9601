"""Exact rational linear programming (two-phase simplex, Bland's rule).

Variables are nonnegative unless listed in ``LinearProgram.free``.
Everything is :class:`fractions.Fraction`; there is no tolerance anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

LE, EQ, GE = "<=", "=", ">="


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    sense: str
    rhs: Fraction
    name: str = ""


@dataclass
class LinearProgram:
    """maximize ``objective . x`` subject to ``constraints``."""

    variables: list
    objective: list = None
    constraints: list = field(default_factory=list)
    free: frozenset = frozenset()

    def __post_init__(self):
        self.variables = list(self.variables)
        if self.objective is None:
            self.objective = [Fraction(0)] * len(self.variables)
        self.objective = [Fraction(v) for v in self.objective]
        self._index = {v: k for k, v in enumerate(self.variables)}

    def _vector(self, coeffs) -> tuple:
        if isinstance(coeffs, Mapping):
            vec = [Fraction(0)] * len(self.variables)
            for name, v in coeffs.items():
                vec[self._index[name]] += Fraction(v)
            return tuple(vec)
        return tuple(Fraction(v) for v in coeffs)

    def add(self, coeffs, sense, rhs, name=""):
        """Append a constraint; ``coeffs`` is a vector or a {variable: coef} dict."""
        if sense not in (LE, EQ, GE):
            raise ValueError(f"unknown constraint sense {sense!r}")
        self.constraints.append(Constraint(self._vector(coeffs), sense, Fraction(rhs), name))

    def maximize(self, coeffs):
        self.objective = list(self._vector(coeffs))

    def validate(self):
        n = len(self.variables)
        if n == 0:
            raise ValueError("linear program without variables")
        if len(self.objective) != n:
            raise ValueError(f"objective has {len(self.objective)} coefficients for {n} variables")
        for k, con in enumerate(self.constraints):
            if len(con.coeffs) != n:
                raise ValueError(f"constraint {con.name or k} has {len(con.coeffs)} coefficients for {n} variables")
        unknown = set(self.free) - set(self.variables)
        if unknown:
            raise ValueError(f"free variables not declared: {sorted(unknown)}")


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Fraction | None = None
    point: dict | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _pivot(rows, rhs, basis, r, j):
    piv = rows[r][j]
    row = [v / piv for v in rows[r]]
    rows[r] = row
    rhs[r] = rhs[r] / piv
    for i in range(len(rows)):
        if i == r:
            continue
        f = rows[i][j]
        if f:
            other = rows[i]
            rows[i] = [a - f * b for a, b in zip(other, row)]
            rhs[i] -= f * rhs[r]
    basis[r] = j


def _simplex(rows, rhs, basis, cost, allowed):
    """Maximise ``cost`` over the tableau in place; False if unbounded."""
    ncols = len(cost)
    while True:
        entering = None
        for j in range(ncols):
            if j not in allowed or j in basis:
                continue
            reduced = cost[j] - sum(cost[basis[i]] * rows[i][j] for i in range(len(rows)) if rows[i][j])
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i in range(len(rows)):
            a = rows[i][entering]
            if a > 0:
                cand = (rhs[i] / a, basis[i], i)
                if best is None or cand < best:
                    best = cand
        if best is None:
            return False
        _pivot(rows, rhs, basis, best[2], entering)


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve exactly; the optimal point is a basic (vertex) solution."""
    lp.validate()
    # structural columns, free variables split into positive and negative parts
    columns = []
    for k, name in enumerate(lp.variables):
        columns.append((k, 1))
        if name in lp.free:
            columns.append((k, -1))
    nstruct = len(columns)

    prepared = []
    for con in lp.constraints:
        vec = [sign * con.coeffs[k] for k, sign in columns]
        rhs, sense = con.rhs, con.sense
        if rhs < 0:
            vec = [-v for v in vec]
            rhs = -rhs
            sense = {LE: GE, GE: LE, EQ: EQ}[sense]
        prepared.append((vec, sense, rhs))

    nslack = sum(1 for _, s, _ in prepared if s != EQ)
    nart = sum(1 for _, s, _ in prepared if s != LE)
    ncols = nstruct + nslack + nart
    rows, rhs, basis = [], [], []
    slack_at, art_at = nstruct, nstruct + nslack
    artificials = set()
    for vec, sense, b in prepared:
        row = vec + [Fraction(0)] * (nslack + nart)
        if sense == LE:
            row[slack_at] = Fraction(1)
            basis.append(slack_at)
            slack_at += 1
        else:
            if sense == GE:
                row[slack_at] = Fraction(-1)
                slack_at += 1
            row[art_at] = Fraction(1)
            basis.append(art_at)
            artificials.add(art_at)
            art_at += 1
        rows.append(row)
        rhs.append(b)

    everything = set(range(ncols))
    if artificials:
        phase1 = [Fraction(-1) if j in artificials else Fraction(0) for j in range(ncols)]
        _simplex(rows, rhs, basis, phase1, everything)
        if sum(rhs[i] for i in range(len(rows)) if basis[i] in artificials) > 0:
            return LpOutcome(LpStatus.INFEASIBLE)
        # drive zero-level artificials out of the basis, dropping redundant rows
        i = 0
        while i < len(rows):
            if basis[i] in artificials:
                j = next((j for j in range(ncols) if j not in artificials and rows[i][j] != 0), None)
                if j is None:
                    del rows[i], rhs[i], basis[i]
                    continue
                _pivot(rows, rhs, basis, i, j)
            i += 1

    cost = [Fraction(0)] * ncols
    for c, (k, sign) in enumerate(columns):
        cost[c] = sign * lp.objective[k]
    if not _simplex(rows, rhs, basis, cost, everything - artificials):
        return LpOutcome(LpStatus.UNBOUNDED)

    colval = [Fraction(0)] * ncols
    for i, j in enumerate(basis):
        colval[j] = rhs[i]
    values = [Fraction(0)] * len(lp.variables)
    for c, (k, sign) in enumerate(columns):
        values[k] += sign * colval[c]
    point = dict(zip(lp.variables, values))
    value = sum((c * v for c, v in zip(lp.objective, values)), Fraction(0))
    return LpOutcome(LpStatus.OPTIMAL, value, point)


def is_feasible_point(lp: LinearProgram, point: Mapping) -> bool:
    """Exact check of every constraint and sign restriction."""
    x = [Fraction(point[v]) for v in lp.variables]
    for name, v in zip(lp.variables, x):
        if name not in lp.free and v < 0:
            return False
    for con in lp.constraints:
        lhs = sum((a * v for a, v in zip(con.coeffs, x)), Fraction(0))
        if con.sense == LE and not lhs <= con.rhs:
            return False
        if con.sense == GE and not lhs >= con.rhs:
            return False
        if con.sense == EQ and lhs != con.rhs:
            return False
    return True


def _linear_text(coeffs: Sequence, variables: Sequence) -> str:
    terms = [f"{c}*{v}" for c, v in zip(coeffs, variables) if c]
    return " + ".join(terms).replace("+ -", "- ") or "0"


def dump_lp(lp: LinearProgram) -> str:
    """Human-readable layout::

        maximize
          1*x + 1*y
        subject to
          c0: 1*x + 2*y <= 1
        bounds
          x >= 0
          z free
    """
    lines = ["maximize", "  " + _linear_text(lp.objective, lp.variables), "subject to"]
    for k, con in enumerate(lp.constraints):
        lines.append(f"  {con.name or f'c{k}'}: {_linear_text(con.coeffs, lp.variables)} {con.sense} {con.rhs}")
    lines.append("bounds")
    for v in lp.variables:
        lines.append(f"  {v} free" if v in lp.free else f"  {v} >= 0")
    return "\n".join(lines) + "\n"
