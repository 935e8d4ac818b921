"""Exact linear algebra over the rationals.

Everything here works with ``fractions.Fraction`` entries; there is no
floating point anywhere.  Strict positivity of homogeneous systems is decided
by an exact phase-1 simplex on the equivalent inhomogeneous problem
``A v = 0, v >= 1`` (the cone is scale invariant, so the two are equivalent).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Row = tuple[Fraction, ...]


def _coerce_rows(rows) -> list[list[Fraction]]:
    out = [[Fraction(x) for x in row] for row in rows]
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("matrix rows must have equal length")
    return out


@dataclass(frozen=True)
class RationalMatrix:
    """A rectangular matrix of exact rationals."""

    entries: tuple[Row, ...]

    def __post_init__(self):
        rows = _coerce_rows(self.entries)
        object.__setattr__(self, "entries", tuple(tuple(r) for r in rows))

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def _rows_of(A) -> list[list[Fraction]]:
    if isinstance(A, RationalMatrix):
        return [list(r) for r in A.entries]
    return _coerce_rows(A)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    M = _coerce_rows(rows)
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pivot is None:
            continue
        M[r], M[pivot] = M[pivot], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A) -> int:
    _, pivots = rref(_rows_of(A))
    return len(pivots)


def solve_linear(A, b) -> Optional[tuple[Fraction, ...]]:
    """One exact solution of A x = b, or None if inconsistent.

    Free variables are set to zero, so the result is the canonical particular
    solution relative to the RREF pivot structure.
    """
    M = _rows_of(A)
    bvec = [Fraction(x) for x in b]
    if len(M) != len(bvec):
        raise ValueError("right-hand side length mismatch")
    if not M:
        return ()
    n = len(M[0])
    aug, pivots = rref([row + [rhs] for row, rhs in zip(M, bvec)])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return tuple(x)


def rational_nullspace(A) -> tuple[tuple[Fraction, ...], ...]:
    """Basis of {v : A v = 0}; size equals cols - rank(A)."""
    M = _rows_of(A)
    if not M:
        return ()
    n = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(tuple(v))
    return tuple(basis)


def _phase_one_feasible(A: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """Exact phase-1 simplex: find x >= 0 with A x = b, else None.

    Bland's rule on both the entering and leaving choices rules out cycling,
    so termination is guaranteed in exact arithmetic.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    T: list[list[Fraction]] = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(int(j == i)) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    while True:
        art_rows = [i for i in range(m) if basis[i] >= n]
        # reduced cost of original column j is -sum of those rows; entering
        # improves the phase-1 objective when that sum is positive.
        entering = None
        for j in range(n):
            if j in basis:
                continue
            if sum(T[i][j] for i in art_rows) > 0:
                entering = j
                break
        if entering is None:
            break
        leave = None
        best = None
        for i in range(m):
            if T[i][entering] > 0:
                ratio = T[i][-1] / T[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("phase-1 objective unbounded; inconsistent tableau")
        pv = T[leave][entering]
        T[leave] = [x / pv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][entering] != 0:
                f = T[i][entering]
                T[i] = [a - f * c for a, c in zip(T[i], T[leave])]
        basis[leave] = entering
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return x


def strict_positive_solution(A) -> Optional[tuple[Fraction, ...]]:
    """A rational v with A v = 0 and every coordinate > 0, or None.

    Decided exactly through the inhomogeneous problem {A w = -A*1, w >= 0}
    and v = w + 1; absence is a certified answer, not an error.
    """
    M = _rows_of(A)
    if not M:
        return None
    n = len(M[0])
    if n == 0:
        return ()
    b = [-sum(row) for row in M]
    w = _phase_one_feasible(M, b)
    if w is None:
        return None
    v = tuple(x + 1 for x in w)
    for row in M:
        if sum(a * x for a, x in zip(row, v)) != 0:
            raise AssertionError("simplex returned a non-solution")
    return v
