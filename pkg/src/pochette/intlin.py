"""Exact integer linear algebra.

Dense matrices over Python ints, Smith normal form with unimodular
transforms, and the abelian groups read off from it.  Everything here is
small (handle diagrams have a handful of handles), so the algorithms favour
clarity over speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Row-major integer matrix; ``entries`` has ``rows * cols`` items."""

    rows: int
    cols: int
    entries: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def column(self, j: int) -> list[int]:
        return [self[i, j] for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(
            self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                out.append(sum(self[i, k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(self[i, k] * vec[k] for k in range(self.cols)) for i in range(self.rows))

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows) for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ a @ v == d`` with ``u``, ``v`` unimodular and ``d`` in Smith form."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries of ``d`` (units included)."""
        return [x for x in self.d.diagonal() if x != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form of ``a`` together with the unimodular transforms.

    The diagonal of ``d`` is nonnegative and each entry divides the next; the
    signs are pushed into ``u``.
    """
    m, n = a.rows, a.cols
    d = a.to_rows()
    u = IntMatrix.identity(m).to_rows()
    v = IntMatrix.identity(n).to_rows()

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        # row_dst += c * row_src
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in d:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not nonzero:
            break
        _, pi, pj = min(nonzero)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        done = False
            if done:
                # pivot must divide the rest of the block, else fold a row in
                bad = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % d[t][t]),
                    None,
                )
                if bad is None:
                    break
                add_row(bad, t, 1)
                continue
            # restart with the smallest remainder as the new pivot
            cands = [(abs(d[i][t]), i, t) for i in range(t, m) if d[i][t]]
            cands += [(abs(d[t][j]), t, j) for j in range(t, n) if d[t][j]]
            _, pi, pj = min(cands)
            swap_rows(t, pi)
            swap_cols(t, pj)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    return SmithDecomposition(
        IntMatrix.from_rows(u, m), IntMatrix.from_rows(d, n), IntMatrix.from_rows(v, n)
    )


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^free_rank + Z/t1 + Z/t2 + ...``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must be at least 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int]) -> AbelianGroup:
        """Normalize arbitrary cyclic orders (0 means Z) to invariant factors."""
        free = free_rank
        primes: dict[int, list[int]] = {}
        for o in orders:
            o = abs(int(o))
            if o == 0:
                free += 1
                continue
            for p, e in _factorize(o).items():
                primes.setdefault(p, []).append(p ** e)
        # invariant factors: combine the largest prime powers first
        width = max((len(v) for v in primes.values()), default=0)
        factors = [1] * width
        for powers in primes.values():
            powers.sort(reverse=True)
            for k, pe in enumerate(powers):
                factors[width - 1 - k] *= pe
        return cls(free, tuple(f for f in factors if f > 1))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = [f"Z_{t}" for t in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> AbelianGroup:
        return cls(data["free_rank"], tuple(data["torsion"]))


Z = AbelianGroup(1)
TRIVIAL = AbelianGroup()


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cokernel(a: IntMatrix) -> AbelianGroup:
    """Cokernel of ``a`` acting on column vectors, i.e. ``Z^rows / im(a)``."""
    snf = smith_normal_form(a)
    factors = snf.invariant_factors
    return AbelianGroup(a.rows - len(factors), tuple(f for f in factors if f > 1))


def rank(a: IntMatrix) -> int:
    return smith_normal_form(a).rank


def kernel_rank(a: IntMatrix) -> int:
    return a.cols - rank(a)


def in_image(a: IntMatrix, b: Sequence[int]) -> bool:
    """Is the integer vector ``b`` in the Z-span of the columns of ``a``?"""
    if len(b) != a.rows:
        raise ValueError("vector length does not match row count")
    snf = smith_normal_form(a)
    ub = snf.u.apply(b)
    diag = snf.d.diagonal()
    for i, x in enumerate(ub):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if x != 0:
                return False
        elif x % di:
            return False
    return True
