"""Multiplicative power systems  prod_j mu_j^{M[k][j]} = p_k.

The magnitude part is a rational linear system on prime-exponent vectors
(one right-hand side per prime in the support).  The argument part is a
congruence system over Q/Z solved through the Smith normal form of M: the
number of torsion branches is the product of the nonzero elementary
divisors, and the continuous part is the kernel torus of M.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import IntegerMatrix, smith_normal_form
from .linalg import rational_nullspace, solve_linear
from .values import ExactNonzeroComplex


@dataclass(frozen=True)
class PowerSystemSolution:
    """Outcome of solving a multiplicative power system."""

    consistent: bool
    violated_equation: Optional[int]
    branch_count: int
    kernel_rank: int
    solutions: tuple[tuple[ExactNonzeroComplex, ...], ...]

    def __bool__(self) -> bool:
        return self.consistent


def _int_rows(M) -> list[list[int]]:
    if isinstance(M, IntegerMatrix):
        return [list(r) for r in M.entries]
    return [[int(x) for x in row] for row in M]


def _solve_once(rows: list[list[int]], values: Sequence[ExactNonzeroComplex]):
    """Solve the full system; returns a PowerSystemSolution with index None."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    # magnitude: one rational linear solve per prime in the combined support
    primes = sorted({p for v in values for p, _ in v.mag})
    mag_parts: dict[int, tuple[Fraction, ...]] = {}
    for p in primes:
        rhs = [v.mag_dict.get(p, Fraction(0)) for v in values]
        sol = solve_linear(rows, rhs)
        if sol is None:
            return None
        mag_parts[p] = sol
    kernel_rank = len(rational_nullspace(rows)) if m else n
    # argument: D psi = U c over Q/Z with U M V = D
    args = [v.arg for v in values]
    if m == 0:
        branch_sets: list[list[Fraction]] = []
        V = IntegerMatrix.identity(n)
        r = 0
    else:
        U, D, V = smith_normal_form(rows)
        t = []
        for i in range(m):
            ti = sum(Fraction(U.entries[i][j]) * args[j] for j in range(m)) % 1
            t.append(ti)
        divisors = [D.entries[i][i] for i in range(min(m, n))]
        r = sum(1 for d in divisors if d != 0)
        for i in range(m):
            d = divisors[i] if i < len(divisors) else 0
            if d == 0 and t[i] != 0:
                return None
        branch_sets = [
            [(t[i] + j) / divisors[i] for j in range(divisors[i])] for i in range(r)
        ]
    branch_count = 1
    for bs in branch_sets:
        branch_count *= len(bs)
    solutions = []
    for combo in itertools.product(*branch_sets) if branch_sets else [()]:
        psi = list(combo) + [Fraction(0)] * (n - len(combo))
        theta = [
            sum(Fraction(V.entries[i][k]) * psi[k] for k in range(n)) % 1
            for i in range(n)
        ] if m else [Fraction(0)] * n
        mu = tuple(
            ExactNonzeroComplex.from_parts(
                {p: mag_parts[p][j] for p in primes if mag_parts[p][j] != 0},
                theta[j],
            )
            for j in range(n)
        )
        solutions.append(mu)
    return PowerSystemSolution(True, None, branch_count, kernel_rank, tuple(solutions))


def solve_power_system(M, values: Sequence[ExactNonzeroComplex]) -> PowerSystemSolution:
    """Solve prod_j mu_j^{M[k][j]} = values[k] exactly.

    Returns all torsion branches (one representative vector each, with the
    continuous kernel contribution set to zero), or an inconsistency report
    carrying the index of the first equation that cannot be satisfied
    together with its predecessors.
    """
    rows = _int_rows(M)
    values = list(values)
    if len(rows) != len(values):
        raise ValueError("one right-hand side per equation is required")
    full = _solve_once(rows, values)
    if full is not None:
        return full
    violated = len(rows) - 1
    for k in range(1, len(rows) + 1):
        if _solve_once(rows[:k], values[:k]) is None:
            violated = k - 1
            break
    return PowerSystemSolution(False, violated, 0, 0, ())


def verify_solution(M, values, mu: Sequence[ExactNonzeroComplex]) -> bool:
    """Check a candidate solution by direct substitution."""
    rows = _int_rows(M)
    for row, v in zip(rows, values):
        acc = ExactNonzeroComplex.one()
        for e, x in zip(row, mu):
            acc = acc * x.pow(e)
        if acc != v:
            return False
    return True
