"""Exact minimal log discrepancy of a simplicial toric variety.

The minimum of the log-discrepancy function over the nonzero lattice points
of the fan support is computed per maximal cone from the half-open
fundamental parallelepiped of the cone generators, capped at 1:

* every ray generator is a lattice point with value exactly 1, so the
  minimum is at most 1;
* any lattice point of the cone with value < 1 has all barycentric
  coordinates in [0, 1), hence *is* one of the parallelepiped coset
  representatives;
* any other lattice point of the cone dominates the representative with the
  same fractional barycentric part, coordinate by coordinate.

So scanning coset representatives of the generator sublattice and capping at
1 is complete.  ``mld_bruteforce`` re-derives the same minimum by walking an
ambient integer box directly and exists purely to cross-check ``mld``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .lattice import Lattice, Vector
from .toric import (
    Fan,
    NonSimplicialError,
    ToricVariety,
    find_containing_cone,
)

DEFAULT_GUARD = 10**7


class EmptyFanError(ValueError):
    pass


class TooLargeError(RuntimeError):
    """Brute-force enumeration would exceed the point guard."""


class InvalidWeightsError(ValueError):
    pass


@dataclass(frozen=True)
class MldResult:
    """Minimal log discrepancy with a witness certificate.

    The witness is a nonzero lattice point realizing the value inside the
    maximal cone ``cone_index``; ties break by smallest value, then
    lexicographically smallest witness, then lowest cone index.
    """

    value: Fraction
    witness: Vector
    cone_index: int
    method: str  # "parallelepiped" | "bruteforce"


class _Best:
    """Running (value, witness) minimum under the fixed tie-break order."""

    __slots__ = ("value", "witness")

    def __init__(self):
        self.value: Optional[Fraction] = None
        self.witness: Optional[Vector] = None

    def offer(self, value: Fraction, witness: Vector) -> None:
        if self.value is None or value < self.value or (
            value == self.value and witness < self.witness
        ):
            self.value = value
            self.witness = witness


def _check_cones(x_var: ToricVariety) -> None:
    if not x_var.fan.max_cones:
        raise EmptyFanError("fan has no maximal cones")
    for cone in x_var.fan.max_cones:
        if cone.dim != x_var.dim:
            raise NonSimplicialError(
                f"maximal cone {cone.ray_indices} is not full-dimensional"
            )


def _finalize(x_var: ToricVariety, best: _Best, method: str, ray_cap: bool = True) -> MldResult:
    one = Fraction(1)
    if ray_cap and (best.value is None or best.value >= one):
        # cap at 1: value 1 is achieved at every ray generator
        capped = _Best()
        if best.value is not None and best.value == one:
            capped.offer(best.value, best.witness)
        for ray in x_var.fan.rays:
            capped.offer(one, ray)
        best = capped
    if best.value is None:
        raise ValueError("no nonzero lattice points in the scanned range")
    cone_index = find_containing_cone(x_var, best.witness)
    return MldResult(value=best.value, witness=best.witness, cone_index=cone_index, method=method)


def mld(x_var: ToricVariety) -> MldResult:
    """Minimal log discrepancy via the fundamental-parallelepiped scan."""
    _check_cones(x_var)
    best = _Best()
    for cone in x_var.fan.max_cones:
        g = cone.generator_matrix
        qg = x_var.lattice.quotient_group(g)
        denom = qg.denominator

        def ambient(num):
            return tuple(
                sum(Fraction(num[i], denom) * g[i][j] for i in range(cone.dim))
                for j in range(x_var.dim)
            )

        # integer running minimum of the value numerator; ambient points are
        # only materialized when a representative matches or beats it
        best_num: Optional[int] = None
        best_point: Optional[Vector] = None
        for num in qg.reps_scaled():
            s = sum(num)
            if s == 0:
                continue  # the origin's coset
            if best_num is None or s < best_num:
                best_num = s
                best_point = ambient(num)
            elif s == best_num:
                best_point = min(best_point, ambient(num))
        if best_num is None:
            continue  # trivial quotient: only the origin
        best.offer(Fraction(best_num, denom), best_point)
    return _finalize(x_var, best, "parallelepiped")


def mld_bruteforce(
    x_var: ToricVariety,
    cap: Fraction = Fraction(1),
    guard: Optional[int] = None,
) -> MldResult:
    """Independent oracle: scan all lattice points with barycentric coordinates
    in [0, cap] for every maximal cone.

    Works straight off the triangular lattice basis: the ambient bounding box
    of the scaled cone parallelepiped is swept coordinate by coordinate, and
    each candidate is filtered through an exact barycentric test.  Intended
    for small instances; raises TooLargeError once more than ``guard`` points
    (default 10^7) have been enumerated.
    """
    if guard is None:
        guard = DEFAULT_GUARD
    cap = Fraction(cap)
    if cap <= 0:
        raise ValueError("cap must be positive")
    _check_cones(x_var)
    d = x_var.dim
    # scaled-integer form of the lattice: points are (c @ h_rows) / denom
    denom = math.lcm(1, *(x.denominator for row in x_var.lattice.basis for x in row))
    h_rows = [[int(x * denom) for x in row] for row in x_var.lattice.basis]
    best = _Best()
    visited = 0

    for ci, cone in enumerate(x_var.fan.max_cones):
        g = cone.generator_matrix
        ginv = x_var._cone_inverse(ci)
        gden = math.lcm(1, *(x.denominator for row in ginv for x in row))
        k = [[int(ginv[a][b] * gden) for b in range(d)] for a in range(d)]
        scale = denom * gden  # barycentric numerators live over this
        cap_num, cap_den = cap.numerator, cap.denominator
        # integer bounds for the ambient bounding box of the scaled cone body
        lo = [
            math.ceil(cap * sum(min(g[i][j], 0) for i in range(d)) * denom)
            for j in range(d)
        ]
        hi = [
            math.floor(cap * sum(max(g[i][j], 0) for i in range(d)) * denom)
            for j in range(d)
        ]

        cone_best: Optional[int] = None
        cone_witness: Optional[list[int]] = None
        partial = [0] * d

        def scan(i: int) -> None:
            nonlocal visited, cone_best, cone_witness
            if i == d:
                visited += 1
                if visited > guard:
                    raise TooLargeError(f"enumeration exceeded guard of {guard} points")
                total = 0
                for b in range(d):
                    num = sum(partial[a] * k[a][b] for a in range(d))
                    if num < 0 or num * cap_den > cap_num * scale:
                        return
                    total += num
                if total == 0:
                    return  # the origin
                if cone_best is None or total < cone_best or (
                    total == cone_best and partial < cone_witness
                ):
                    cone_best = total
                    cone_witness = list(partial)
                return
            step = h_rows[i]
            c_lo = -((partial[i] - lo[i]) // step[i])
            c_hi = (hi[i] - partial[i]) // step[i]
            if c_lo > c_hi:
                return
            for j in range(d):
                partial[j] += c_lo * step[j]
            scan(i + 1)
            for _ in range(c_lo, c_hi):
                for j in range(d):
                    partial[j] += step[j]
                scan(i + 1)
            back = c_hi
            for j in range(d):
                partial[j] -= back * step[j]

        scan(0)
        if cone_best is not None:
            value = Fraction(cone_best, scale)
            ambient = tuple(Fraction(x, denom) for x in cone_witness)
            best.offer(value, ambient)
    return _finalize(x_var, best, "bruteforce", ray_cap=cap >= 1)


def cyclic_quotient(r: int, weights: Sequence[int]) -> ToricVariety:
    """Affine toric model of the cyclic quotient 1/r (a_1, ..., a_n).

    Lattice Z^n extended by (a_1/r, ..., a_n/r) over the nonnegative orthant
    cone, with ray generators primitivized in the extended lattice.
    """
    if r < 1:
        raise InvalidWeightsError(f"group order must be positive, got {r}")
    n = len(weights)
    if n < 1:
        raise InvalidWeightsError("need at least one weight")
    lat = Lattice.from_generators(n, [tuple(Fraction(a, r) for a in weights)])
    rays = []
    for i in range(n):
        e = tuple(Fraction(int(i == j)) for j in range(n))
        rays.append(lat.primitivize(e))
    fan = Fan.build(rays, [list(range(n))])
    return ToricVariety(lat, fan)


def mld_cyclic(r: int, weights: Sequence[int]) -> Fraction:
    """Minimal log discrepancy of the cyclic quotient 1/r (a_1, ..., a_n).

    When every orthant ray stays primitive in the extended lattice this
    agrees with min(1, min_{k=1..r-1} sum_i frac(k a_i / r)); in general the
    ray generators are first primitivized, which keeps the value geometric
    even for weights sharing factors with r.
    """
    return mld(cyclic_quotient(r, weights)).value
