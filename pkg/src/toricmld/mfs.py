"""Toric Mori fiber spaces in fan normal form.

Normal form: X has dimension m+n, the lattice map F to the n-dimensional
base is the coordinate projection onto the last n coordinates, the base Y is
the nonnegative orthant cone over the image lattice, and the fan of X has
exactly m+n+1 rays: m+1 "fiber" rays spanning ker F with the origin strictly
inside their simplex, one ray over each base axis, and the maximal cones are
exactly the full index sets omitting one fiber ray.

``validate`` re-checks every piece of that structure independently and
reports per-check results instead of raising, so deliberately broken inputs
can be diagnosed.  ``make_mfs`` is the safe constructor; ``example_family``
builds the weighted-quotient family whose base discrepancy shrinks like the
fourth power of the total-space discrepancy.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .exactmath import integer_row_kernel, invariant_factors
from .lattice import Lattice, Vector
from .mld import mld
from .toric import Fan, ToricVariety, origin_barycentrics


class InvalidMfsError(ValueError):
    pass


class DegenerateSimplexError(InvalidMfsError):
    """Fiber rays do not form a simplex with the origin strictly inside."""


class NonSurjectiveError(InvalidMfsError):
    """The projection does not map the total lattice onto the base lattice."""


class BaseMultipleMismatchError(InvalidMfsError):
    """Requested base-ray multiples disagree with the constructed lattices."""


class BadParameterError(ValueError):
    pass


@dataclass(frozen=True)
class ToricMfs:
    """A fibration X -> Y in normal form; F is stored but must be the projection."""

    x: ToricVariety
    y: ToricVariety
    f_matrix: tuple[tuple[int, ...], ...]
    m: int
    n: int

    def __post_init__(self):
        m, n = self.m, self.n
        if self.x.dim != m + n or self.y.dim != n:
            raise InvalidMfsError("dimensions of X and Y do not match m and n")
        expected = tuple(
            tuple(0 if j < m else int(j - m == l) for j in range(m + n)) for l in range(n)
        )
        if self.f_matrix != expected:
            raise InvalidMfsError("lattice map must be the projection onto the last n coordinates")

    def project(self, v: Sequence) -> Vector:
        """Apply F: drop the first m (fiber) coordinates."""
        return tuple(Fraction(c) for c in v[self.m:])


@dataclass(frozen=True)
class FiberData:
    """Generic fiber: its toric variety, simplex vertices, and where 0 sits."""

    z: ToricVariety
    simplex_vertices: tuple[Vector, ...]
    origin_barycentrics: tuple[Fraction, ...]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    overall: bool

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _kernel_ray_indices(mfs: ToricMfs) -> list[int]:
    return [
        i for i, r in enumerate(mfs.x.fan.rays) if all(c == 0 for c in r[mfs.m:])
    ]


def validate(mfs: ToricMfs) -> ValidationReport:
    """Run every normal-form check independently; failures become report rows."""
    checks: list[CheckResult] = []

    def run(name: str, fn) -> bool:
        try:
            passed, detail = fn()
        except Exception as exc:  # a failed check must never abort the report
            passed, detail = False, f"check crashed: {exc}"
        checks.append(CheckResult(name, passed, detail))
        return passed

    m, n = mfs.m, mfs.n
    x_rays = mfs.x.fan.rays

    def ray_count():
        want = n + m + 1
        return len(x_rays) == want, f"{len(x_rays)} rays, expected {want}"

    def ray_roles():
        kernel = _kernel_ray_indices(mfs)
        if len(kernel) != m + 1:
            return False, f"{len(kernel)} rays in ker F, expected {m + 1}"
        axis_of: dict[int, int] = {}
        for i, r in enumerate(x_rays):
            if i in kernel:
                continue
            image = r[m:]
            support = [l for l in range(n) if image[l] != 0]
            if len(support) != 1 or image[support[0]] <= 0:
                return False, f"ray {i} does not map onto a base axis ray"
            l = support[0]
            if l in axis_of:
                return False, f"base axis {l + 1} is hit by two rays"
            axis_of[l] = i
        if sorted(axis_of) != list(range(n)):
            return False, f"base axes covered: {sorted(axis_of)}"
        multiples = []
        for l in range(n):
            image = x_rays[axis_of[l]][m:]
            prim = mfs.y.lattice.primitivize(image)
            multiples.append(image[l] / prim[l])
        return True, "base-ray multiples " + ", ".join(str(c) for c in multiples)

    def rays_primitive():
        bad = [i for i, ok in enumerate(mfs.x.rays_primitive()) if not ok]
        bad_y = [i for i, ok in enumerate(mfs.y.rays_primitive()) if not ok]
        if bad or bad_y:
            return False, f"non-primitive rays: X {bad}, Y {bad_y}"
        return True, "all ray generators primitive"

    def fiber_simplex():
        kernel = _kernel_ray_indices(mfs)
        if len(kernel) != m + 1:
            return False, f"{len(kernel)} rays in ker F, expected {m + 1}"
        verts = [tuple(x_rays[i][:m]) for i in kernel]
        ys = origin_barycentrics(verts)
        if ys is None:
            return False, "fiber vertices are affinely degenerate"
        if any(y <= 0 for y in ys):
            return False, f"origin not strictly inside: barycentrics {tuple(map(str, ys))}"
        return True, f"origin barycentrics {tuple(map(str, ys))}"

    def cone_shape():
        kernel = set(_kernel_ray_indices(mfs))
        if len(kernel) != m + 1:
            return False, f"{len(kernel)} rays in ker F, expected {m + 1}"
        everything = set(range(len(x_rays)))
        expected = {frozenset(everything - {j}) for j in kernel}
        actual = {frozenset(c.ray_indices) for c in mfs.x.fan.max_cones}
        if actual != expected:
            return False, "maximal cones are not the full sets omitting one fiber ray"
        return True, f"{len(actual)} maximal cones of the product shape"

    def lattice_surjectivity():
        rows = []
        for b in mfs.x.lattice.basis:
            c = mfs.y.lattice.coords(mfs.project(b))
            if any(x.denominator != 1 for x in c):
                return False, "image of the total lattice is not inside the base lattice"
            rows.append([int(x) for x in c])
        factors = invariant_factors(rows)
        if len(factors) != n or any(f != 1 for f in factors):
            return False, f"cokernel invariant factors {factors}"
        return True, "projection maps the total lattice onto the base lattice"

    def picard_rank():
        rank = len(x_rays) - len(mfs.y.fan.rays) - m
        return rank == 1, f"relative Picard rank {rank}"

    def properness():
        ok = by_name["fiber_simplex"] and by_name["cone_shape"]
        if ok:
            return True, "support of the fan equals the preimage of the base cone"
        return False, "support condition fails (see fiber_simplex / cone_shape)"

    run("ray_count", ray_count)
    run("ray_roles", ray_roles)
    run("rays_primitive", rays_primitive)
    run("fiber_simplex", fiber_simplex)
    run("cone_shape", cone_shape)
    run("lattice_surjectivity", lattice_surjectivity)
    run("relative_picard_rank", picard_rank)
    by_name = {c.name: c.passed for c in checks}
    run("properness_support", properness)

    return ValidationReport(checks=tuple(checks), overall=all(c.passed for c in checks))


def generic_fiber(mfs: ToricMfs) -> FiberData:
    """The fiber over the dense base point: kernel lattice, simplex fan, and
    the barycentric coordinates of the origin in the fiber simplex."""
    report = validate(mfs)
    if not report.overall:
        failed = [c.name for c in report.checks if not c.passed]
        raise InvalidMfsError(f"normal-form validation failed: {failed}")
    m = mfs.m
    # kernel of the projection restricted to the lattice, as a sublattice of Q^m
    proj_cols = [row[m:] for row in mfs.x.lattice.basis]
    denom = math.lcm(1, *(x.denominator for row in proj_cols for x in row))
    int_cols = [[int(x * denom) for x in row] for row in proj_cols]
    kernel_rows = integer_row_kernel(int_cols)
    ambient = [mfs.x.lattice.to_ambient(row) for row in kernel_rows]
    z_lattice = Lattice.from_generators(m, [v[:m] for v in ambient])
    verts = [tuple(mfs.x.fan.rays[i][:m]) for i in _kernel_ray_indices(mfs)]
    fan = Fan.build(verts, [list(c) for c in combinations(range(m + 1), m)])
    z_var = ToricVariety(z_lattice, fan)
    ys = origin_barycentrics(verts)
    return FiberData(z=z_var, simplex_vertices=tuple(verts), origin_barycentrics=ys)


def generic_fiber_group(mfs: ToricMfs) -> tuple[int, ...]:
    """Invariant factors of the fiber lattice modulo the standard fiber
    lattice Z^m (the finite group acting on the fixed model fiber)."""
    fiber = generic_fiber(mfs)
    m = mfs.m
    rows = []
    for i in range(m):
        e = tuple(Fraction(int(i == j)) for j in range(m))
        c = fiber.z.lattice.coords(e)
        rows.append([int(x) for x in c])
    return tuple(invariant_factors(rows))


def _embed_fiber(v: Sequence[int], n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in v) + (Fraction(0),) * n


def make_mfs(
    m: int,
    n: int,
    fiber_rays: Sequence[Sequence[int]],
    base_multiples: Sequence[int],
    extra_generators: Sequence[Sequence] = (),
) -> ToricMfs:
    """Build and validate a fibration in normal form.

    ``fiber_rays``: m+1 integer vectors in the fiber coordinates whose simplex
    must contain the origin strictly inside.  ``base_multiples``: the required
    multiple c_l between the image of the l-th base ray and the primitive
    base-lattice generator on that axis; realizing c_l > 1 takes extra
    generators mixing fiber and base coordinates.  ``extra_generators``:
    rational vectors adjoined to Z^(m+n).

    Rays that fail to be primitive in the extended lattice are replaced by
    their primitive generators (with a warning).
    """
    if m < 1 or n < 1:
        raise BadParameterError("fiber and base dimensions must be positive")
    if len(fiber_rays) != m + 1:
        raise BadParameterError(f"need {m + 1} fiber rays, got {len(fiber_rays)}")
    if any(len(v) != m for v in fiber_rays):
        raise BadParameterError("fiber rays must have the fiber dimension")
    if len(base_multiples) != n or any(int(c) < 1 for c in base_multiples):
        raise BadParameterError("base multiples must be n positive integers")
    extras = [tuple(Fraction(x) for x in g) for g in extra_generators]
    if any(len(g) != m + n for g in extras):
        raise BadParameterError("extra generators must have dimension m+n")

    ys = origin_barycentrics([tuple(Fraction(c) for c in v) for v in fiber_rays])
    if ys is None or any(y <= 0 for y in ys):
        raise DegenerateSimplexError(
            "fiber rays must form a simplex with the origin strictly inside"
        )

    x_lattice = Lattice.from_generators(m + n, extras)
    unit = lambda l: tuple(Fraction(int(j == l)) for j in range(n))
    y_lattice = Lattice.from_generators(
        n,
        [tuple(c / int(base_multiples[l]) for c in unit(l)) for l in range(n)]
        + [g[m:] for g in extras],
    )
    image = Lattice.from_generators(n, [row[m:] for row in x_lattice.basis])
    if image != y_lattice:
        raise NonSurjectiveError(
            "projection image of the total lattice is smaller than the base lattice"
        )

    rays = []
    for v in fiber_rays:
        emb = _embed_fiber(v, n)
        prim = x_lattice.primitivize(emb)
        if prim != emb:
            warnings.warn(f"fiber ray {tuple(v)} replaced by primitive generator {prim}")
        rays.append(prim)
    for l in range(n):
        emb = (Fraction(0),) * m + unit(l)
        prim = x_lattice.primitivize(emb)
        if prim != emb:
            warnings.warn(f"base ray {l + 1} replaced by primitive generator {prim}")
        rays.append(prim)

    cone_indices = [
        [i for i in range(m + n + 1) if i != j] for j in range(m + 1)
    ]
    x_var = ToricVariety(x_lattice, Fan.build(rays, cone_indices))
    y_rays = [y_lattice.primitivize(unit(l)) for l in range(n)]
    y_var = ToricVariety(y_lattice, Fan.build(y_rays, [list(range(n))]))
    f_matrix = tuple(
        tuple(0 if j < m else int(j - m == l) for j in range(m + n)) for l in range(n)
    )
    mfs = ToricMfs(x=x_var, y=y_var, f_matrix=f_matrix, m=m, n=n)

    for l in range(n):
        image_vec = rays[m + 1 + l][m:]
        ratio = image_vec[l] / y_rays[l][l]
        if ratio != int(base_multiples[l]):
            raise BaseMultipleMismatchError(
                f"base axis {l + 1}: requested multiple {base_multiples[l]}, lattice gives {ratio}"
            )

    report = validate(mfs)
    if not report.overall:
        failed = [c.name for c in report.checks if not c.passed]
        raise InvalidMfsError(f"construction failed validation: {failed}")
    return mfs


def example_family(l: int) -> ToricMfs:
    """The weighted-quotient family with m = n = 2 and group order l^4 + 1.

    Fiber triangle (1,0), (-(l-1),1), (-(l-1),-1) times an affine plane,
    quotiented by the cyclic group of order r = l^4+1 acting with weights
    (l, l^2; 1, 1)/r.  The base is the cyclic quotient surface 1/r (1,1).
    """
    if l < 2:
        raise BadParameterError(f"family parameter must be at least 2, got {l}")
    r = l**4 + 1
    return make_mfs(
        m=2,
        n=2,
        fiber_rays=[(1, 0), (-(l - 1), 1), (-(l - 1), -1)],
        base_multiples=(1, 1),
        extra_generators=[
            (Fraction(l, r), Fraction(l * l, r), Fraction(1, r), Fraction(1, r))
        ],
    )


@dataclass(frozen=True)
class FamilySweepRow:
    """One row of the family sweep; ratio_approx is the only inexact field."""

    l: int
    r: int
    mld_x: Fraction
    mld_y: Fraction
    ratio_approx: float
    bound_check: bool

    @classmethod
    def compute(cls, l: int) -> "FamilySweepRow":
        fam = example_family(l)
        mx = mld(fam.x).value
        my = mld(fam.y).value
        return cls(
            l=l,
            r=l**4 + 1,
            mld_x=mx,
            mld_y=my,
            ratio_approx=float(my / mx**4),
            bound_check=mx >= Fraction(9, 20 * l),
        )


def sweep_family(l_min: int, l_max: int) -> list[FamilySweepRow]:
    """Exact discrepancies of the family for l in [l_min, l_max].

    ``bound_check`` records the per-row lower bound mld(X) >= 0.9/(2l) (the
    asymptotic rate with a fixed slack for small l).  Rows are independent;
    output is ordered by l.
    """
    if l_min < 2 or l_max < l_min:
        raise BadParameterError("need 2 <= l_min <= l_max")
    return [FamilySweepRow.compute(l) for l in range(l_min, l_max + 1)]


def loglog_slope(points: Sequence[tuple[Fraction, Fraction]]) -> Optional[float]:
    """Least-squares slope of log y against log x; None with fewer than 2 points."""
    if len(points) < 2:
        return None
    xs = [math.log(x) for x, _ in points]
    ys = [math.log(y) for _, y in points]
    k = len(points)
    mean_x = sum(xs) / k
    mean_y = sum(ys) / k
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    return sxy / sxx
