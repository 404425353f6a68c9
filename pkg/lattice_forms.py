"""
Integer lattice helpers: row Hermite form, canonical coset representatives of Z^n / L,
and Smith invariants of the quotient.
"""
from typing import Sequence

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_form
from sympy.polys.domains import ZZ

Vector = tuple[int, ...]


def hermite_rows(generators: Sequence[Sequence[int]], rank: int) -> tuple[list[list[int]], list[int]]:
    """Row-style Hermite normal form of the lattice spanned by `generators` in Z^rank.

    Returns (rows, pivots): each row has a positive pivot, zeros left of it, and the entries
    above each pivot reduced into [0, pivot). sympy puts pivots at the bottom of columns, so the
    coordinates are reversed on the way in and out.
    """
    work = [list(g) for g in generators if any(g)]
    for g in work:
        if len(g) != rank:
            raise ValueError(f"generator {g} does not live in Z^{rank}")
    if not work:
        return [], []
    columns = hermite_normal_form(Matrix([g[::-1] for g in work]).T)
    rows = [[int(columns[rank - 1 - c, j]) for c in range(rank)] for j in reversed(range(columns.cols))]
    pivots = [next(c for c, a in enumerate(row) if a) for row in rows]
    return rows, pivots


class LatticeQuotient:
    """Z^rank modulo the row span of `generators`, with canonical coset keys."""

    def __init__(self, generators: Sequence[Sequence[int]], rank: int):
        self.rank = rank
        self.generators = [tuple(g) for g in generators]
        self.rows, self.pivots = hermite_rows(generators, rank)
        self.free_columns = [c for c in range(rank) if c not in self.pivots]
        self.torsion_columns = [(i, c) for i, c in enumerate(self.pivots) if self.rows[i][c] > 1]

    def reduce(self, v: Sequence[int]) -> Vector:
        out = list(v)
        for row, col in zip(self.rows, self.pivots):
            factor = out[col] // row[col]
            if factor:
                out = [a - factor * b for a, b in zip(out, row)]
        return tuple(out)

    def key(self, v: Sequence[int]) -> Vector:
        """Canonical coordinates of the coset v + L: free part, then torsion residues."""
        reduced = self.reduce(v)
        return tuple(reduced[c] for c in self.free_columns) + tuple(reduced[c] for _, c in self.torsion_columns)

    def free_coordinates(self, v: Sequence[int]) -> Vector:
        reduced = self.reduce(v)
        return tuple(reduced[c] for c in self.free_columns)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def invariants(self) -> tuple[int, list[int]]:
        """(free rank, torsion invariant factors > 1) of the quotient."""
        if not self.rows:
            return self.rank, []
        snf = smith_normal_form(Matrix(self.rows), domain=ZZ)
        diagonal = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
        nonzero = [d for d in diagonal if d != 0]
        return self.rank - len(nonzero), [d for d in nonzero if d > 1]

    def describe(self) -> str:
        free, torsion = self.invariants()
        parts = ["Z"] * free + [f"Z/{d}" for d in torsion]
        return " x ".join(parts) if parts else "0"
