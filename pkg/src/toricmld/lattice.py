"""Finite overlattices of Z^d and their quotient groups.

A :class:`Lattice` is a rank-d subgroup N of Q^d containing Z^d, stored by a
canonical basis so equal lattices compare equal.  Canonicalization: scale any
generating set to a common denominator D, take the Hermite form of the
resulting integer row lattice, divide by D again.  The result does not depend
on the choice of D.

Coset enumeration for a full-rank sublattice runs through the Smith normal
form of the coordinate-change matrix; representatives are produced as a
stream, normalized to the half-open cube [0,1)^d in sublattice coordinates,
so groups of order ~10^6 never get materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .exactmath import det, hnf, inverse, snf, vec_mat

Vector = tuple[Fraction, ...]


class LatticeError(ValueError):
    pass


class NotInLatticeError(LatticeError):
    """A vector expected to be a lattice point is not."""


class NotSublatticeError(LatticeError):
    """A proposed sublattice basis row is not a lattice point."""


class DegenerateBasisError(LatticeError):
    """Proposed sublattice basis rows are linearly dependent."""


class ZeroVectorError(LatticeError):
    """The zero vector is not allowed here."""


def _as_vector(v: Sequence, dim: int) -> Vector:
    if len(v) != dim:
        raise ValueError(f"expected a vector of dimension {dim}, got {len(v)}")
    return tuple(Fraction(x) for x in v)


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


class Lattice:
    """A finite-index overlattice N of Z^d, N subset of Q^d."""

    __slots__ = ("dim", "basis", "_inv", "_index")

    def __init__(self, dim: int, basis: Sequence[Sequence[Fraction]], _canonical: bool = False):
        self.dim = dim
        if _canonical:
            rows = tuple(tuple(Fraction(x) for x in row) for row in basis)
        else:
            rows = _canonicalize(dim, basis)
        self.basis = rows
        self._inv = None
        d = det(rows)
        if d == 0:
            raise DegenerateBasisError("lattice basis is singular")
        index = 1 / abs(d)
        if index.denominator != 1:
            raise LatticeError("basis does not contain Z^d with finite index")
        self._index = int(index)

    @classmethod
    def standard(cls, dim: int) -> "Lattice":
        one = Fraction(1)
        zero = Fraction(0)
        rows = tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim))
        return cls(dim, rows, _canonical=True)

    @classmethod
    def from_generators(cls, dim: int, gens: Iterable[Sequence]) -> "Lattice":
        """Smallest lattice containing Z^d and all of gens, in canonical form."""
        if dim < 1:
            raise ValueError("dimension must be positive")
        gen_rows = [_as_vector(g, dim) for g in gens]
        rows = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        return cls(dim, rows + gen_rows)

    @property
    def basis_inverse(self):
        if self._inv is None:
            self._inv = tuple(tuple(row) for row in inverse(self.basis))
        return self._inv

    def coords(self, v: Sequence) -> Vector:
        """Coordinates of v relative to the basis rows (rational, always defined)."""
        vv = _as_vector(v, self.dim)
        return tuple(vec_mat(vv, self.basis_inverse))

    def to_ambient(self, c: Sequence) -> Vector:
        return tuple(vec_mat([Fraction(x) for x in c], self.basis))

    def contains(self, v: Sequence) -> bool:
        return all(x.denominator == 1 for x in self.coords(v))

    @property
    def index_over_standard(self) -> int:
        """The group order [N : Z^d]."""
        return self._index

    def primitivize(self, v: Sequence) -> Vector:
        """Shortest lattice point on the ray spanned by v (same direction)."""
        vv = _as_vector(v, self.dim)
        if all(x == 0 for x in vv):
            raise ZeroVectorError("cannot primitivize the zero vector")
        c = self.coords(vv)
        if any(x.denominator != 1 for x in c):
            raise NotInLatticeError(f"{v!r} is not a lattice point")
        g = math.gcd(*(abs(int(x)) for x in c))
        return self.to_ambient([x / g for x in c])

    def quotient_group(self, sub_basis: Sequence[Sequence]) -> "QuotientGroup":
        """Quotient N / <rows of sub_basis>, for a full-rank sublattice."""
        rows = [_as_vector(r, self.dim) for r in sub_basis]
        if len(rows) != self.dim:
            raise DegenerateBasisError("sublattice basis must have d rows")
        coord_rows = []
        for r in rows:
            c = self.coords(r)
            if any(x.denominator != 1 for x in c):
                raise NotSublatticeError(f"{r!r} is not a lattice point")
            coord_rows.append([int(x) for x in c])
        if det(coord_rows) == 0:
            raise DegenerateBasisError("sublattice basis rows are linearly dependent")
        s, u, _ = snf(coord_rows)
        factors = tuple(s[i][i] for i in range(self.dim))
        order = math.prod(factors)
        denom = math.lcm(*factors)
        # Coset reps in sub-basis coordinates are frac(sum_i t_i * u[i] / s_i),
        # t_i in [0, s_i); scale by denom to keep everything integral.
        gen_rows = tuple(
            tuple((denom // factors[i]) * u[i][j] % denom for j in range(self.dim))
            for i in range(self.dim)
        )
        return QuotientGroup(
            order=order,
            invariant_factors=factors,
            denominator=denom,
            generator_rows=gen_rows,
            sub_basis=tuple(rows),
        )

    def quotient_reps(self, sub_basis: Sequence[Sequence]) -> Iterator[Vector]:
        """Stream one representative per coset of <sub_basis> in N.

        Representatives have sub-basis coordinates in [0,1)^d; the zero coset
        is included (as the origin).
        """
        return self.quotient_group(sub_basis).reps()

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.dim == other.dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.dim, self.basis))

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(str(x) for x in row) + ")" for row in self.basis)
        return f"Lattice(dim={self.dim}, basis=[{rows}])"


def _canonicalize(dim: int, rows: Sequence[Sequence[Fraction]]) -> tuple[Vector, ...]:
    rows = [_as_vector(r, dim) for r in rows]
    if len(rows) < dim:
        raise DegenerateBasisError("need at least d generating rows")
    d = math.lcm(*(x.denominator for row in rows for x in row))
    int_rows = [[int(x * d) for x in row] for row in rows]
    h, _ = hnf(int_rows)
    top = h[:dim]
    if any(top[i][i] == 0 for i in range(dim)):
        raise DegenerateBasisError("generators do not span Q^d")
    return tuple(tuple(Fraction(x, d) for x in row) for row in top)


@dataclass(frozen=True)
class QuotientGroup:
    """Finite quotient of a lattice by a full-rank sublattice.

    ``generator_rows[i] / denominator`` is the i-th invariant-factor
    generator written in sublattice coordinates; every coset representative
    is an integer combination of these, reduced mod 1.
    """

    order: int
    invariant_factors: tuple[int, ...]
    denominator: int
    generator_rows: tuple[tuple[int, ...], ...] = field(repr=False)
    sub_basis: tuple[Vector, ...] = field(repr=False)

    def reps_scaled(self) -> Iterator[tuple[int, ...]]:
        """Representatives in sublattice coordinates, scaled by denominator.

        Yields integer tuples num with rep = (num / denominator) @ sub_basis,
        each entry in [0, denominator).  First yield is the zero tuple.
        Enumeration order is a fixed mixed-radix count over the invariant
        factors, so repeated runs agree.
        """
        dim = len(self.generator_rows)
        denom = self.denominator
        active = [i for i in range(dim) if self.invariant_factors[i] > 1]
        cur = [0] * dim
        counters = [0] * len(active)
        yield tuple(cur)
        if not active:
            return
        while True:
            # increment the mixed-radix counter, least significant digit last
            pos = len(active) - 1
            while pos >= 0:
                idx = active[pos]
                counters[pos] += 1
                row = self.generator_rows[idx]
                if counters[pos] < self.invariant_factors[idx]:
                    for j in range(dim):
                        cur[j] = (cur[j] + row[j]) % denom
                    break
                # digit wraps: roll back its contribution
                counters[pos] = 0
                back = self.invariant_factors[idx] - 1
                for j in range(dim):
                    cur[j] = (cur[j] - back * row[j]) % denom
                pos -= 1
            else:
                return
            yield tuple(cur)

    def reps(self) -> Iterator[Vector]:
        """Ambient coset representatives, sub-basis coordinates in [0,1)^d."""
        denom = self.denominator
        for num in self.reps_scaled():
            coords = [Fraction(x, denom) for x in num]
            yield tuple(vec_mat(coords, self.sub_basis))
