"""Constructive witness search: from a small discrepancy on the base to a
small-discrepancy lattice point on the total space.

Sketch of the construction, with delta the base discrepancy and m the fiber
dimension: lift the base witness A to P in the total lattice with fiber
coordinates in [0,1), form the multiples k*P mod Z^(m+n) for k = 0..T with
T = floor(delta^(-m/(m+1))), and pick two whose fiber parts are within
delta^(1/(m+1)) of each other in every coordinate on the torus (the box
principle guarantees such a pair because (T+1) * delta^(m/(m+1)) >= 1).
Their difference, with the fiber part re-centered to the nearest-integer
representative, is a nonzero lattice point Q with nonnegative base part; its
log discrepancy is at most (C+1) * delta^(1/(m+1)) where C is the largest
coefficient 1-norm among the linear pieces of the fiber's discrepancy
function.

Every threshold comparison against the irrational delta^(1/(m+1)) is done as
an exact integer-power comparison of rationals: x <= delta^(1/(m+1)) iff
x^(m+1) <= delta for x >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .exactmath import hnf, iroot_floor, solve_exact
from .lattice import NotInLatticeError, Vector, ZeroVectorError
from .mfs import FiberData, ToricMfs, generic_fiber
from .mld import MldResult, mld
from .toric import find_containing_cone, log_discrepancy


class NotInBaseLatticeError(ValueError):
    pass


class NoPairFoundError(RuntimeError):
    """No qualifying pair exists; the pigeonhole hypothesis was violated."""


class PreconditionFailedError(ValueError):
    """The supplied threshold is below the actual base discrepancy."""


@dataclass(frozen=True)
class EffectiveDelta:
    """Per-fiber constant for the threshold map eps -> (eps / (C+1))^(m+1)."""

    c_z: Fraction
    m: int

    def delta_of(self, eps: Fraction) -> Fraction:
        return (Fraction(eps) / (self.c_z + 1)) ** (self.m + 1)


@dataclass(frozen=True)
class WitnessReport:
    """Certificate of the witness construction.

    ``bound_coefficient`` is C+1; the claimed bound on ld_q is
    bound_coefficient * delta^(1/(m+1)), checked exactly via
    ld_q^(m+1) <= bound_coefficient^(m+1) * delta and recorded in
    ``bound_satisfied``.  ``t`` is the number of the largest multiple used
    (multiples run over k = 0..t).
    """

    base_point: Vector
    lift: Vector
    t: Fraction
    pair: tuple[int, int]
    q: Vector
    q_fiber: Vector
    cone_index: int
    ld_q: Fraction
    delta: Fraction
    bound_coefficient: Fraction
    bound_satisfied: bool

    @property
    def bound_power(self) -> Fraction:
        """Exact value of bound^(m+1) = bound_coefficient^(m+1) * delta."""
        m = len(self.q_fiber)
        return self.bound_coefficient ** (m + 1) * self.delta

    @property
    def bound_approx(self) -> float:
        m = len(self.q_fiber)
        return float(self.bound_coefficient) * float(self.delta) ** (1.0 / (m + 1))


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def lift_to_X(mfs: ToricMfs, a: Sequence) -> Vector:
    """Preimage of base lattice point A with fiber coordinates in [0,1).

    Solves for an integer coordinate vector against the Hermite form of the
    projected lattice basis, then reduces the fiber part modulo the standard
    fiber lattice Z^m (always inside the kernel lattice).
    """
    m, n = mfs.m, mfs.n
    av = tuple(Fraction(c) for c in a)
    if len(av) != n:
        raise ValueError(f"base point has dimension {len(av)}, expected {n}")
    if all(c == 0 for c in av):
        raise ZeroVectorError("cannot lift the zero point: witnesses must be nonzero")
    basis = mfs.x.lattice.basis
    d = m + n
    proj = [row[m:] for row in basis]
    denom = math.lcm(
        1,
        *(x.denominator for row in proj for x in row),
        *(c.denominator for c in av),
    )
    mat = [[int(x * denom) for x in row] for row in proj]
    target = [int(c * denom) for c in av]
    h, u = hnf(mat)
    # back-substitute y @ H = target over the pivot rows of H
    y = [0] * d
    residual = list(target)
    for i in range(d):
        pivot_col = next((j for j in range(n) if h[i][j] != 0), None)
        if pivot_col is None:
            break
        if residual[pivot_col] % h[i][pivot_col] != 0:
            raise NotInBaseLatticeError(f"{a!r} is not in the base lattice")
        q = residual[pivot_col] // h[i][pivot_col]
        y[i] = q
        if q:
            residual = [residual[j] - q * h[i][j] for j in range(n)]
    if any(residual):
        raise NotInBaseLatticeError(f"{a!r} is not in the base lattice")
    coeffs = [sum(y[i] * u[i][j] for i in range(d)) for j in range(d)]
    point = mfs.x.lattice.to_ambient(coeffs)
    lifted = tuple(_frac(point[j]) for j in range(m)) + av
    return lifted


def _grid_cells(g: int, m: int, points: Sequence[Vector]) -> dict:
    cells: dict[tuple[int, ...], list[int]] = {}
    for idx, p in enumerate(points):
        key = tuple(int(math.floor(c * g)) % g for c in p)
        cells.setdefault(key, []).append(idx)
    return cells


def _pair_search(
    points: Sequence[Vector],
    qualifies: Callable[[int, int], bool],
    g: int,
) -> Optional[tuple[int, int]]:
    """First pair (smallest j, then smallest i < j) satisfying ``qualifies``.

    Buckets the torus into g cells per axis; any pair within the threshold
    1/(g-1) differs by at most 2 cells per axis, so scanning the 5^m
    neighborhood of each point sees every qualifying pair.
    """
    if not points:
        return None
    m = len(points[0])
    offsets = [()]
    for _ in range(m):
        offsets = [o + (s,) for o in offsets for s in (-2, -1, 0, 1, 2)]
    cells = _grid_cells(g, m, points)
    keys = [tuple(int(math.floor(c * g)) % g for c in p) for p in points]
    for j in range(1, len(points)):
        seen: set[int] = set()
        for off in offsets:
            cell = tuple((keys[j][l] + off[l]) % g for l in range(m))
            for i in cells.get(cell, ()):
                if i < j:
                    seen.add(i)
        for i in sorted(seen):
            if qualifies(i, j):
                return (i, j)
    return None


def _toroidal_gaps(p: Vector, q: Vector) -> list[Fraction]:
    gaps = []
    for a, b in zip(p, q):
        f = _frac(a - b)
        gaps.append(min(f, 1 - f))
    return gaps


def _min_grid(threshold_power: Fraction, exponent: int) -> int:
    """Smallest g >= 1 with g**exponent >= threshold_power."""
    seed = iroot_floor(
        threshold_power.numerator // threshold_power.denominator, exponent
    )
    g = max(seed, 1)
    while g**exponent < threshold_power:
        g += 1
    return g


def dirichlet_pair(points: Sequence[Sequence], t: Fraction) -> tuple[int, int]:
    """Indices i < j with every coordinate of points[i] - points[j] within
    t^(-1/m) on the torus R^m / Z^m.

    Comparisons stay exact: gap <= t^(-1/m) iff gap^m * t <= 1.  A pair is
    guaranteed whenever len(points) > t.  Deterministic result: smallest j,
    then smallest i.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError("pigeonhole parameter must be positive")
    if not points:
        raise NoPairFoundError("no points supplied")
    pts = [tuple(_frac(Fraction(c)) for c in p) for p in points]
    m = len(pts[0])
    if any(len(p) != m for p in pts):
        raise ValueError("points have mixed dimensions")

    def qualifies(i: int, j: int) -> bool:
        worst = max(_toroidal_gaps(pts[i], pts[j]))
        return worst**m * t <= 1

    g = _min_grid(t, m)
    found = _pair_search(pts, qualifies, g)
    if found is None and len(pts) <= 4096:
        # grid search is complete; this fallback only defends against bugs
        for j in range(1, len(pts)):
            for i in range(j):
                if qualifies(i, j):
                    return (i, j)
    if found is None:
        raise NoPairFoundError(
            f"no pair within t^(-1/m) among {len(pts)} points (need more than t={t})"
        )
    return found


def effective_delta(fiber: FiberData) -> EffectiveDelta:
    """Largest coefficient 1-norm among the fiber's per-cone discrepancy
    functionals; drives the effective threshold map."""
    m = fiber.z.dim
    c_z = Fraction(0)
    for cone in fiber.z.fan.max_cones:
        # coefficients L_j of the functional with sum_j L_j * P_i[j] = 1 for
        # every generator P_i: one linear equation per generator row
        g = cone.generator_matrix
        coeffs = solve_exact([list(row) for row in g], [Fraction(1)] * m)
        c_z = max(c_z, sum(abs(c) for c in coeffs))
    return EffectiveDelta(c_z=c_z, m=m)


def find_witness(mfs: ToricMfs, delta: Optional[Fraction] = None) -> WitnessReport:
    """Run the box-principle construction at threshold delta.

    delta defaults to the exact base discrepancy; an explicit delta below it
    raises PreconditionFailedError.  The report is self-verifying: Q is a
    nonzero lattice point of the total space, its base image is
    componentwise nonnegative, and ld_q is recomputed from scratch.
    """
    base = mld(mfs.y)
    if delta is None:
        delta = base.value
    else:
        delta = Fraction(delta)
        if base.value > delta:
            raise PreconditionFailedError(
                f"base discrepancy {base.value} exceeds requested delta {delta}"
            )
    m, n = mfs.m, mfs.n
    a = base.witness
    p = lift_to_X(mfs, a)
    b = p[:m]

    # number of multiples: k = 0..T with T = floor(delta^(-m/(m+1))), at least 1,
    # so that (T+1) boxes of side delta^(1/(m+1)) overfill the fiber torus
    num, den = delta.numerator, delta.denominator
    t_count = iroot_floor((den**m) // (num**m), m + 1)
    t_count = max(t_count, 1)
    points = [tuple(_frac(k * b[l]) for l in range(m)) for k in range(t_count + 1)]

    def qualifies(i: int, j: int) -> bool:
        worst = max(_toroidal_gaps(points[i], points[j]))
        return worst ** (m + 1) <= delta

    g = _min_grid(1 / delta, m + 1)
    pair = _pair_search(points, qualifies, g)
    if pair is None:
        raise NoPairFoundError("box principle failed; threshold inconsistent")
    i, j = pair
    k = j - i

    q_fiber = []
    for l in range(m):
        f = _frac(k * b[l])
        q_fiber.append(f if f <= Fraction(1, 2) else f - 1)
    q = tuple(q_fiber) + tuple(k * c for c in a)
    if not mfs.x.lattice.contains(q):
        raise NotInLatticeError("constructed witness left the lattice")  # unreachable

    cone_index = find_containing_cone(mfs.x, q)
    ld_q = log_discrepancy(mfs.x, q)
    fiber = generic_fiber(mfs)
    coeff = effective_delta(fiber).c_z + 1
    satisfied = ld_q ** (m + 1) <= coeff ** (m + 1) * delta
    return WitnessReport(
        base_point=a,
        lift=p,
        t=Fraction(t_count),
        pair=pair,
        q=q,
        q_fiber=tuple(q_fiber),
        cone_index=cone_index,
        ld_q=ld_q,
        delta=delta,
        bound_coefficient=coeff,
        bound_satisfied=satisfied,
    )


@dataclass(frozen=True)
class EpsDeltaCertificate:
    """Exact two-sided record of the inequality mld(X)^(m+1) <= (C+1)^(m+1) * mld(Y)."""

    holds: bool
    mld_x: MldResult
    mld_y: MldResult
    c_z: Fraction
    lhs: Fraction
    rhs: Fraction


def check_eps_delta(mfs: ToricMfs) -> EpsDeltaCertificate:
    """Exact comparison mld(X)^(m+1) vs (C+1)^(m+1) * mld(Y).

    For a standard-simplex fiber C+1 equals twice the fiber dimension, so
    this is the power form of the threshold inequality at its sharp constant.
    """
    fiber = generic_fiber(mfs)
    c_z = effective_delta(fiber).c_z
    rx = mld(mfs.x)
    ry = mld(mfs.y)
    m = mfs.m
    lhs = rx.value ** (m + 1)
    rhs = (c_z + 1) ** (m + 1) * ry.value
    return EpsDeltaCertificate(
        holds=lhs <= rhs, mld_x=rx, mld_y=ry, c_z=c_z, lhs=lhs, rhs=rhs
    )
