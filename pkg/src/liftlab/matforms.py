"""Matrices of indeterminates, determinants, Pfaffians and their ideals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Sequence

from .groebner import Ideal
from .polyring import ZZ, CoefficientRing, PolyRing, Polynomial, SpecializationMap, specialize

SHAPES = ("generic", "symmetric", "alternating")


def entry_name(i: int, j: int, prefix: str = "x") -> str:
    return f"{prefix}_{i}_{j}"


@dataclass(frozen=True)
class MatrixOfVariables:
    """A square or rectangular matrix whose entries are polynomials.

    ``shape`` records the structure: generic (all entries independent),
    symmetric (x_i_j = x_j_i) or alternating (x_i_j = -x_j_i, zero diagonal).
    Entries are stored row-major as a tuple of tuples.
    """

    ring: PolyRing
    entries: tuple
    shape: str = "generic"

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        ncols = {len(r) for r in rows}
        if len(ncols) > 1:
            raise ValueError("ragged matrix")
        for r in rows:
            for e in r:
                if e.ring != self.ring:
                    raise ValueError("matrix entry outside the matrix ring")
        if self.shape != "generic":
            n = len(rows)
            if any(len(r) != n for r in rows):
                raise ValueError(f"{self.shape} matrices must be square")
            for i in range(n):
                for j in range(n):
                    a, b = rows[i][j], rows[j][i]
                    if self.shape == "symmetric" and a != b:
                        raise ValueError("matrix is not symmetric")
                    if self.shape == "alternating" and a != -b:
                        raise ValueError("matrix is not alternating")

    # -- constructors
    @classmethod
    def generic(cls, nrows: int, ncols: int | None = None, coeffs: CoefficientRing = ZZ, prefix: str = "x"):
        ncols = nrows if ncols is None else ncols
        names = [entry_name(i, j, prefix) for i in range(1, nrows + 1) for j in range(1, ncols + 1)]
        R = PolyRing(coeffs, tuple(names))
        rows = [[R.var(entry_name(i, j, prefix)) for j in range(1, ncols + 1)] for i in range(1, nrows + 1)]
        return cls(R, rows, "generic")

    @classmethod
    def symmetric(cls, n: int, coeffs: CoefficientRing = ZZ, prefix: str = "x"):
        names = [entry_name(i, j, prefix) for i in range(1, n + 1) for j in range(i, n + 1)]
        R = PolyRing(coeffs, tuple(names))
        rows = [[R.var(entry_name(min(i, j), max(i, j), prefix)) for j in range(1, n + 1)] for i in range(1, n + 1)]
        return cls(R, rows, "symmetric")

    @classmethod
    def alternating(cls, n: int, coeffs: CoefficientRing = ZZ, prefix: str = "x"):
        names = [entry_name(i, j, prefix) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        R = PolyRing(coeffs, tuple(names))
        z = R.zero()

        def ent(i, j):
            if i == j:
                return z
            if i < j:
                return R.var(entry_name(i, j, prefix))
            return -R.var(entry_name(j, i, prefix))

        rows = [[ent(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
        return cls(R, rows, "alternating")

    @classmethod
    def from_rows(cls, ring: PolyRing, rows, shape: str = "generic"):
        conv = [[e if isinstance(e, Polynomial) else ring.parse(str(e)) for e in r] for r in rows]
        return cls(ring, conv, shape)

    # -- accessors
    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "MatrixOfVariables":
        shape = self.shape if list(rows) == list(cols) else "generic"
        return MatrixOfVariables(self.ring, [[self.entries[i][j] for j in cols] for i in rows], shape)

    def transpose(self) -> "MatrixOfVariables":
        return MatrixOfVariables(
            self.ring, [[self.entries[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.shape
        )

    def map(self, fn: Callable[[Polynomial], Polynomial], ring: PolyRing | None = None, shape: str | None = None):
        rows = [[fn(e) for e in r] for r in self.entries]
        ring = ring or (rows[0][0].ring if rows and rows[0] else self.ring)
        return MatrixOfVariables(ring, rows, shape or self.shape)

    def specialize(self, s: SpecializationMap, shape: str | None = None) -> "MatrixOfVariables":
        return self.map(lambda e: specialize(e, s), s.target, shape or "generic")

    def change_coeffs(self, coeffs: CoefficientRing) -> "MatrixOfVariables":
        return self.map(lambda e: e.change_coeffs(coeffs), self.ring.with_coeffs(coeffs))

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.entries)


# ------------------------------------------------------------- determinant


def determinant(M: MatrixOfVariables) -> Polynomial:
    """Laplace expansion along rows, memoized on the remaining column set."""
    n = M.nrows
    if n != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return M.ring.one()
    E = M.entries

    @lru_cache(maxsize=None)
    def det(cols: tuple) -> Polynomial:
        r = n - len(cols)
        if len(cols) == 1:
            return E[r][cols[0]]
        acc = M.ring.zero()
        for t, c in enumerate(cols):
            a = E[r][c]
            if a.is_zero():
                continue
            sub = det(cols[:t] + cols[t + 1:])
            term = a * sub
            acc = acc - term if t % 2 else acc + term
        return acc

    return det(tuple(range(n)))


def bareiss_determinant(rows: Sequence[Sequence]) -> int | Fraction:
    """Fraction-free elimination for integer (or rational) matrices."""
    A = [list(r) for r in rows]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else Fraction(num) / prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def pfaffian(M: MatrixOfVariables) -> Polynomial:
    """Pfaffian of an alternating matrix by expansion along the first index.

    pf = sum_j (-1)^j m_{1j} pf(M with rows/cols 1, j removed), j counted from 1.
    """
    n = M.nrows
    if M.shape != "alternating":
        for i in range(n):
            for j in range(n):
                if M.entries[i][j] != -M.entries[j][i]:
                    raise ValueError("Pfaffian needs an alternating matrix")
    if n % 2:
        return M.ring.zero()
    E = M.entries

    @lru_cache(maxsize=None)
    def pf(idx: tuple) -> Polynomial:
        if not idx:
            return M.ring.one()
        first = idx[0]
        acc = M.ring.zero()
        for pos in range(1, len(idx)):
            a = E[first][idx[pos]]
            if a.is_zero():
                continue
            rest = idx[1:pos] + idx[pos + 1:]
            term = a * pf(rest)
            # position pos (0-based) is j = pos + 1 in 1-based counting
            acc = acc + term if pos % 2 else acc - term
        return acc

    return pf(tuple(range(n)))


# -------------------------------------------------------------- ideals


def _normalize_sign(f: Polynomial) -> Polynomial:
    if f.is_zero():
        return f
    _, c = f.leading_term("grevlex")
    if f.coeff_ring.kind == "ZZ/m":
        return f
    return -f if c < 0 else f


def _dedupe(polys) -> list[Polynomial]:
    out, seen = [], set()
    for f in polys:
        f = _normalize_sign(f)
        if f.is_zero():
            continue
        key = f
        neg = -f
        if key in seen or neg in seen:
            continue
        seen.add(key)
        out.append(f)
    return out


def minors(M: MatrixOfVariables, t: int) -> list[Polynomial]:
    """All t x t minors in lexicographic order of (rows, cols), signs normalized."""
    if t <= 0:
        return [M.ring.one()]
    if t > min(M.nrows, M.ncols):
        return []
    out = []
    for rows in combinations(range(M.nrows), t):
        for cols in combinations(range(M.ncols), t):
            out.append(determinant(M.submatrix(rows, cols)))
    return _dedupe(out)


def minors_ideal(M: MatrixOfVariables, t: int) -> Ideal:
    """The ideal I_t(M) of t x t minors, deduplicated up to sign."""
    return Ideal(minors(M, t), M.ring)


def pfaffians(M: MatrixOfVariables, t: int) -> list[Polynomial]:
    """Pfaffians of the principal t x t submatrices (t even)."""
    if t % 2:
        raise ValueError("Pfaffians of odd order vanish identically")
    if t <= 0:
        return [M.ring.one()]
    out = []
    for idx in combinations(range(M.nrows), t):
        sub = M.submatrix(idx, idx)
        out.append(pfaffian(MatrixOfVariables(M.ring, sub.entries, "alternating")))
    return _dedupe(out)


def pfaffians_ideal(M: MatrixOfVariables, t: int) -> Ideal:
    return Ideal(pfaffians(M, t), M.ring)
