"""Fans of simplicial cones and the log-discrepancy function.

A toric variety here is a pair (lattice, fan): ``lattice`` is the lattice of
valuations N (a finite overlattice of Z^d) and ``fan`` lists primitive ray
generators plus the index sets of the maximal cones.  Only simplicial cones
are representable; non-simplicial input is rejected when the fan is built.

The log discrepancy of a lattice point v is the value at v of the function
that is linear on every cone and equals 1 on each primitive ray generator.
Points outside the fan support get the explicit result ``None`` rather than
an error, because search code needs to probe and branch on that case.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactmath import det, solve_exact
from .lattice import Lattice, NotInLatticeError, Vector, ZeroVectorError


class DimensionMismatchError(ValueError):
    pass


class NonSimplicialError(ValueError):
    """Cone generators are dependent or a maximal cone is not full-dimensional."""


class WrongShapeError(ValueError):
    """Fan does not have the expected combinatorial shape."""


@dataclass(frozen=True)
class SimplicialCone:
    """A simplicial cone: indices into the fan's ray table plus the generator rows."""

    ray_indices: tuple[int, ...]
    generator_matrix: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.ray_indices)


@dataclass(frozen=True)
class Fan:
    """Rays (primitive vectors) and maximal simplicial cones over them."""

    rays: tuple[Vector, ...]
    max_cones: tuple[SimplicialCone, ...]
    dim: int

    @classmethod
    def build(cls, rays: Sequence[Sequence], cone_indices: Sequence[Sequence[int]]) -> "Fan":
        """Validate and assemble a fan from ray vectors and cone index lists."""
        ray_rows = tuple(tuple(Fraction(x) for x in r) for r in rays)
        if not ray_rows:
            return cls(rays=(), max_cones=(), dim=0)
        dim = len(ray_rows[0])
        if any(len(r) != dim for r in ray_rows):
            raise DimensionMismatchError("rays have mixed dimensions")
        if len(set(ray_rows)) != len(ray_rows):
            raise ValueError("duplicate rays in fan")
        cones = []
        covered: set[int] = set()
        for idx_list in cone_indices:
            idx = tuple(idx_list)
            if len(set(idx)) != len(idx):
                raise ValueError(f"repeated ray index in cone {idx}")
            if any(i < 0 or i >= len(ray_rows) for i in idx):
                raise ValueError(f"ray index out of range in cone {idx}")
            gens = tuple(ray_rows[i] for i in idx)
            if len(gens) == dim:
                if det(gens) == 0:
                    raise NonSimplicialError(f"cone {idx} generators are dependent")
            elif len(gens) > dim:
                raise NonSimplicialError(f"cone {idx} has more generators than the dimension")
            else:
                from .exactmath import rank

                if rank(gens) != len(gens):
                    raise NonSimplicialError(f"cone {idx} generators are dependent")
            covered.update(idx)
            cones.append(SimplicialCone(ray_indices=idx, generator_matrix=gens))
        if covered != set(range(len(ray_rows))):
            raise ValueError("every ray must appear in at least one cone")
        return cls(rays=ray_rows, max_cones=tuple(cones), dim=dim)


class ToricVariety:
    """(N, Sigma): a lattice of valuations together with a simplicial fan.

    Every ray generator must be a lattice point; generators are expected to
    be primitive in N for the log-discrepancy values to carry their usual
    geometric meaning (the fibration validator reports violations).
    """

    __slots__ = ("lattice", "fan", "_cone_inverses")

    def __init__(self, lattice: Lattice, fan: Fan):
        if fan.rays and fan.dim != lattice.dim:
            raise DimensionMismatchError(
                f"fan dimension {fan.dim} does not match lattice dimension {lattice.dim}"
            )
        for r in fan.rays:
            if not lattice.contains(r):
                raise NotInLatticeError(f"ray {r!r} is not a lattice point")
        self.lattice = lattice
        self.fan = fan
        self._cone_inverses: dict[int, tuple] = {}

    @property
    def dim(self) -> int:
        return self.lattice.dim

    def rays_primitive(self) -> list[bool]:
        return [self.lattice.primitivize(r) == r for r in self.fan.rays]

    def _cone_inverse(self, cone_index: int):
        inv = self._cone_inverses.get(cone_index)
        if inv is None:
            from .exactmath import inverse

            g = self.fan.max_cones[cone_index].generator_matrix
            inv = tuple(tuple(row) for row in inverse(g))
            self._cone_inverses[cone_index] = inv
        return inv

    def __repr__(self) -> str:
        return (
            f"ToricVariety(dim={self.dim}, rays={len(self.fan.rays)}, "
            f"max_cones={len(self.fan.max_cones)}, index={self.lattice.index_over_standard})"
        )


def barycentric(cone: SimplicialCone, v: Sequence) -> Vector:
    """Coefficients x with sum_i x_i * P_i = v, for the cone's generators P_i.

    v lies in the cone iff all coefficients are >= 0.  For a full-dimensional
    cone the system is square; lower-dimensional cones are solved on an
    independent coordinate subset and verified on the rest.
    """
    g = cone.generator_matrix
    if not g:
        raise WrongShapeError("cone has no generators")
    dim = len(g[0])
    vv = [Fraction(x) for x in v]
    if len(vv) != dim:
        raise DimensionMismatchError(f"vector has dimension {len(vv)}, expected {dim}")
    k = len(g)
    if k == dim:
        return tuple(solve_exact([[g[i][j] for i in range(k)] for j in range(dim)], vv))
    # lower-dimensional: pick k independent columns, solve, verify the rest
    cols = _independent_columns(g, k)
    sub = [[g[i][j] for i in range(k)] for j in cols]
    x = solve_exact(sub, [vv[j] for j in cols])
    for j in range(dim):
        if sum(x[i] * g[i][j] for i in range(k)) != vv[j]:
            raise ValueError("vector is not in the span of the cone")
    return tuple(x)


def _independent_columns(g, k: int) -> list[int]:
    from .exactmath import rank

    cols: list[int] = []
    for j in range(len(g[0])):
        trial = cols + [j]
        if rank([[g[i][c] for c in trial] for i in range(len(g))]) == len(trial):
            cols.append(j)
        if len(cols) == k:
            return cols
    raise NonSimplicialError("cone generators are dependent")


def _try_barycentric(x_var: ToricVariety, cone_index: int, v: Sequence) -> Optional[Vector]:
    cone = x_var.fan.max_cones[cone_index]
    if len(cone.generator_matrix) != x_var.dim:
        return None
    inv = x_var._cone_inverse(cone_index)
    vv = [Fraction(c) for c in v]
    return tuple(sum(vv[i] * inv[i][j] for i in range(len(vv))) for j in range(x_var.dim))


def log_discrepancy(x_var: ToricVariety, v: Sequence) -> Optional[Fraction]:
    """Value of the piecewise-linear discrepancy function at lattice point v.

    Returns the sum of barycentric coordinates in any maximal cone containing
    v (the value does not depend on the choice), or None when v is outside
    the fan support.
    """
    vv = tuple(Fraction(c) for c in v)
    if all(c == 0 for c in vv):
        raise ZeroVectorError("log discrepancy is undefined at the origin")
    if not x_var.lattice.contains(vv):
        raise NotInLatticeError(f"{v!r} is not a lattice point")
    for ci in range(len(x_var.fan.max_cones)):
        coords = _try_barycentric(x_var, ci, vv)
        if coords is not None and all(c >= 0 for c in coords):
            return sum(coords)
    return None


def find_containing_cone(x_var: ToricVariety, v: Sequence) -> Optional[int]:
    """Lowest index of a maximal cone containing v, or None."""
    vv = tuple(Fraction(c) for c in v)
    for ci in range(len(x_var.fan.max_cones)):
        coords = _try_barycentric(x_var, ci, vv)
        if coords is not None and all(c >= 0 for c in coords):
            return ci
    return None


def is_complete(fan: Fan) -> bool:
    """Whether a simplex-shaped fan covers the whole space.

    Expects the boundary fan of a vertex set: d+1 rays with every d-subset a
    maximal cone (raises WrongShapeError otherwise).  Completeness is then
    equivalent to the origin lying strictly inside the convex hull of the
    rays, i.e. all barycentric coordinates of 0 are positive.
    """
    d = fan.dim
    if len(fan.rays) != d + 1:
        raise WrongShapeError(f"expected {d + 1} rays, got {len(fan.rays)}")
    from itertools import combinations

    expected = {frozenset(c) for c in combinations(range(d + 1), d)}
    actual = {frozenset(c.ray_indices) for c in fan.max_cones}
    if actual != expected:
        raise WrongShapeError("maximal cones are not exactly the d-subsets of the rays")
    coords = origin_barycentrics(fan.rays)
    return coords is not None and all(y > 0 for y in coords)


def origin_barycentrics(vertices: Sequence[Vector]) -> Optional[tuple[Fraction, ...]]:
    """Solve sum y_i * V_i = 0, sum y_i = 1; None when the system is singular."""
    k = len(vertices)
    dim = len(vertices[0])
    if k != dim + 1:
        raise WrongShapeError(f"need {dim + 1} vertices in dimension {dim}")
    a = [[vertices[i][j] for i in range(k)] for j in range(dim)]
    a.append([Fraction(1)] * k)
    b = [Fraction(0)] * dim + [Fraction(1)]
    from .exactmath import SingularMatrixError

    try:
        return tuple(solve_exact(a, b))
    except SingularMatrixError:
        return None
