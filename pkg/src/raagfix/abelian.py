"""
Exact integer linear algebra for the abelianised picture.

Row-vector convention everywhere: an exponent vector ``u`` is sent to
``u @ M`` where ``M[x][y]`` is the exponent sum of generator ``y`` in the
image of generator ``x``.  All arithmetic uses Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass


def identity_matrix(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def vecmat(v, m) -> tuple[int, ...]:
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]) if m else 0))


def matpow(m, k: int) -> list[list[int]]:
    out = identity_matrix(len(m))
    for _ in range(k):
        out = matmul(out, m)
    return out


def determinant(m) -> int:
    """Bareiss fraction-free elimination."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hermite_normal_form(m) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF.  Returns ``(H, U)`` with ``H = U @ M`` and ``U`` unimodular.

    Nonzero rows of ``H`` come first with strictly increasing pivot columns;
    pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    """
    h = [list(map(int, row)) for row in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity_matrix(rows)

    def swap(i, j):
        h[i], h[j] = h[j], h[i]
        u[i], u[j] = u[j], u[i]

    def addmul(dst, src, q):
        # row[dst] -= q * row[src]
        if q:
            h[dst] = [x - q * y for x, y in zip(h[dst], h[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(h[i][c]), i))
            if p != r:
                swap(p, r)
            done = True
            for i in range(r + 1, rows):
                if h[i][c]:
                    addmul(i, r, h[i][c] // h[r][c])
                    if h[i][c]:
                        done = False
            if done:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            addmul(i, r, h[i][c] // h[r][c])
        r += 1
    return h, u


def _pivot(row) -> int:
    return next(j for j, x in enumerate(row) if x)


@dataclass(frozen=True)
class Lattice:
    """Sublattice of ℤ^dim given by its canonical HNF basis."""

    basis: tuple[tuple[int, ...], ...]
    dim: int

    @classmethod
    def from_generators(cls, rows, dim: int) -> Lattice:
        rows = [tuple(r) for r in rows]
        if any(len(r) != dim for r in rows):
            raise ValueError("generator of wrong dimension")
        if not rows:
            return cls((), dim)
        h, _ = hermite_normal_form(rows)
        return cls(tuple(tuple(r) for r in h if any(r)), dim)

    @classmethod
    def full(cls, dim: int) -> Lattice:
        return cls.from_generators(identity_matrix(dim), dim)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return lattice_member(self, v)

    def issubset(self, other: Lattice) -> bool:
        return all(lattice_member(other, b) for b in self.basis)

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": [list(b) for b in self.basis]}


def lattice_member(lat: Lattice, v) -> bool:
    if len(v) != lat.dim:
        raise ValueError(f"vector of length {len(v)} in a lattice of dimension {lat.dim}")
    r = list(v)
    for row in lat.basis:
        p = _pivot(row)
        q, rem = divmod(r[p], row[p])
        if rem:
            return False
        if q:
            r = [x - q * y for x, y in zip(r, row)]
    return not any(r)


def left_kernel(m) -> Lattice:
    """Integer vectors ``u`` with ``u @ M = 0``."""
    rows = len(m)
    if rows == 0:
        return Lattice((), 0)
    h, u = hermite_normal_form(m)
    return Lattice.from_generators([u[i] for i in range(rows) if not any(h[i])], rows)


def _shifted(m, k: int):
    mk = matpow(m, k)
    return [[mk[i][j] - (i == j) for j in range(len(m))] for i in range(len(m))]


def fixed_lattice(m) -> Lattice:
    """Exponent vectors fixed by the row action of ``M``: kernel of ``M - I``."""
    if any(len(row) != len(m) for row in m):
        raise ValueError("matrix must be square")
    return left_kernel(_shifted(m, 1))


def periodic_lattice(m, kmax: int) -> Lattice:
    """Lattice generated by the fixed lattices of ``M^k`` for ``k = 1..kmax``."""
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    gens = []
    for k in range(1, kmax + 1):
        gens.extend(left_kernel(_shifted(m, k)).basis)
    return Lattice.from_generators(gens, len(m))
