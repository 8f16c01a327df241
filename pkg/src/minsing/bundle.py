"""Toric bundles over a torus: fans, Cartier data, the two boxes and charts.

A :class:`BundleProblem` packages a smooth complete fan in ``N``, a
piecewise-linear function ``h`` given by its values on the rays, a class
``L0`` on the base and the classes ``L_hom[j]`` assigned to the dual basis
vectors of ``M``. The line bundle of interest is ``pi^* L0 (D_h)``.
"""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import IncompleteFan, NonSmoothCone, UnsupportedDimension
from .geometry import (
    DEFAULT_TOL,
    Cone,
    ConvexRegion,
    corners,
    dot,
    factor_quadratic,
    is_empty,
    is_primitive,
    minimize_linear,
    normalize_scalar,
    vec_sub,
)
from .torus import NSClass, TorusBase, is_ample, nef_constraint

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fan:
    """Rays (primitive integer vectors) and maximal cones as ray-index tuples."""

    rays: tuple
    max_cones: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(tuple(int(i) for i in c) for c in self.max_cones))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return len(self.rays[0])

    def cone(self, sigma: int) -> Cone:
        return Cone(tuple(self.rays[i] for i in self.max_cones[sigma]))

    def label(self, sigma: int) -> str:
        if self.labels is not None:
            return self.labels[sigma]
        return f"cone{sigma}"

    def faces(self) -> list[tuple]:
        """Every non-zero cone of the fan as a sorted tuple of ray indices."""
        seen = set()
        out = []
        for mc in self.max_cones:
            for k in range(1, len(mc) + 1):
                for sub in itertools.combinations(sorted(mc), k):
                    if sub not in seen:
                        seen.add(sub)
                        out.append(sub)
        return sorted(out, key=lambda s: (len(s), s))


@dataclass(frozen=True)
class BundleProblem:
    base: TorusBase
    fan: Fan
    L_hom: tuple
    L0: NSClass
    h: tuple

    def __post_init__(self):
        object.__setattr__(self, "L_hom", tuple(c if isinstance(c, NSClass) else NSClass(tuple(c)) for c in self.L_hom))
        if not isinstance(self.L0, NSClass):
            object.__setattr__(self, "L0", NSClass(tuple(self.L0)))
        object.__setattr__(self, "h", tuple(int(x) for x in self.h))

    @property
    def n(self) -> int:
        return self.fan.n

    @property
    def d(self) -> int:
        return self.base.d

    def class_at(self, m: Sequence) -> NSClass:
        """The class of ``L0 + sum_j m_j L_hom[j]``."""
        cls = self.L0
        for mj, L in zip(m, self.L_hom):
            cls = cls + L * mj
        return cls


@dataclass(frozen=True)
class ChartPoint:
    """A point in the chart of a maximal cone: fibre coordinates ``x`` and base ``z``."""

    sigma: int
    x: tuple
    z: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(complex(v) for v in self.x))
        object.__setattr__(self, "z", tuple(complex(v) for v in self.z))

    @property
    def I(self) -> tuple:
        return tuple(j for j, v in enumerate(self.x) if v == 0)


@dataclass
class ValidationReport:
    ok: bool
    n: int
    d: int
    warnings: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# validation


def validate_fan(fan: Fan, assume_projective: bool = False) -> list:
    """Check primitivity, smoothness and (in the plane) completeness.

    Returns a list of warnings; raises on failure.
    """
    warnings = []
    for r in fan.rays:
        if not is_primitive(r):
            raise ValueError(f"ray {r} is not primitive")
    for k, mc in enumerate(fan.max_cones):
        cone = fan.cone(k)
        if len(mc) != fan.n or not cone.is_smooth():
            det = cone.determinant() if len(mc) == fan.n else 0
            raise NonSmoothCone(f"cone {fan.label(k)} with rays {cone.generators} has determinant {det}")
    if fan.n == 2:
        _check_complete_planar(fan)
    elif not assume_projective:
        raise UnsupportedDimension("projectivity is only checked for rank 2; pass assume_projective to proceed")
    else:
        warnings.append("projectivity assumed, not checked, for fibre rank > 2")
    return warnings


def _check_complete_planar(fan: Fan) -> None:
    used = sorted({i for mc in fan.max_cones for i in mc})
    if used != list(range(len(fan.rays))):
        raise IncompleteFan("some rays are not used by any maximal cone")
    order = sorted(range(len(fan.rays)), key=lambda i: math.atan2(fan.rays[i][1], fan.rays[i][0]))
    expected = set()
    for a, b in zip(order, order[1:] + order[:1]):
        ra, rb = fan.rays[a], fan.rays[b]
        if ra[0] * rb[1] - ra[1] * rb[0] <= 0:
            raise IncompleteFan(f"rays {ra} and {rb} span an angle of at least pi")
        expected.add(frozenset((a, b)))
    got = {frozenset(mc) for mc in fan.max_cones}
    if got != expected or len(fan.max_cones) != len(expected):
        raise IncompleteFan("maximal cones do not cover the plane exactly once")


def validate(problem: BundleProblem, assume_projective: bool = False) -> ValidationReport:
    """Structural checks on a problem; raises on the first hard failure."""
    fan = problem.fan
    warnings = validate_fan(fan, assume_projective)
    if len(problem.h) != len(fan.rays):
        raise ValueError(f"h has {len(problem.h)} values for {len(fan.rays)} rays")
    if len(problem.L_hom) != fan.n:
        raise ValueError(f"L_hom has {len(problem.L_hom)} classes for fibre rank {fan.n}")
    for cls in (problem.L0, *problem.L_hom):
        if len(cls) != problem.base.ns_rank:
            raise ValueError(f"class {cls.coeffs} does not match the base's Néron–Severi rank")
    m = cartier_data(fan, problem.h)
    for s1, s2 in itertools.combinations(range(len(fan.max_cones)), 2):
        for r in set(fan.max_cones[s1]) & set(fan.max_cones[s2]):
            if dot(vec_sub(m[s1], m[s2]), fan.rays[r]) != 0:
                raise ValueError("Cartier data disagree on a shared ray")
    return ValidationReport(True, fan.n, problem.d, warnings)


# ---------------------------------------------------------------------------
# Cartier data and boxes


def cartier_data(fan: Fan, h: Sequence[int]) -> tuple:
    """The linear forms ``m_sigma`` with ``<m_sigma, v> = h(v)`` on each maximal cone."""
    return _cartier_data(fan, tuple(h))


@lru_cache(maxsize=256)
def _cartier_data(fan: Fan, h: tuple) -> tuple:
    out = []
    for k, mc in enumerate(fan.max_cones):
        cone = fan.cone(k)
        duals = cone.dual_basis()
        m = [0] * fan.n
        for j, ray_idx in enumerate(mc):
            for i in range(fan.n):
                m[i] += h[ray_idx] * duals[j][i]
        out.append(tuple(m))
    return tuple(out)


def box_h(fan: Fan, h: Sequence[int]) -> ConvexRegion:
    """``{m : <m, v> >= h(v) for every ray v}``."""
    return ConvexRegion(fan.n, tuple((r, -hv) for r, hv in zip(fan.rays, h)))


@lru_cache(maxsize=256)
def box_nef(problem: BundleProblem) -> ConvexRegion:
    """The part of the ``h`` box where the twisted class is nef.

    Rationally factorable nef conditions are turned into affine inequalities
    so that the region stays exact.
    """
    halfspaces, quads = nef_constraint(problem.base, problem.L0, problem.L_hom)
    box = box_h(problem.fan, problem.h)
    hs = list(box.halfspaces) + list(halfspaces)
    kept = []
    for q in quads:
        if problem.n == 2:
            split = factor_quadratic(q)
            if split is not None:
                hs.extend(split)
                continue
        kept.append(q)
    return ConvexRegion(problem.n, tuple(hs), tuple(kept))


def is_pseudoeffective(problem: BundleProblem, tol: float = DEFAULT_TOL) -> bool:
    return not is_empty(box_nef(problem), tol)


class Bigness(enum.Enum):
    BIG = "Big"
    NOT_BIG = "NotBig"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


def _spread_points(region: ConvexRegion, tol: float) -> list:
    pts = [tuple(float(x) for x in p) for p in corners(region, tol)]
    n = region.dim
    for k in range(8):
        th = 2 * math.pi * k / 8 + 0.1
        w = (math.cos(th), math.sin(th)) if n == 2 else tuple(1.0 if i == k % n else 0.0 for i in range(n))
        pts.append(tuple(float(x) for x in minimize_linear(region, w, tol).witness))
    return pts


def _affine_rank(points: Sequence[Sequence[float]], tol: float) -> int:
    import numpy as np

    if not points:
        return -1
    A = np.array(points, dtype=float)
    A = A - A[0]
    if A.shape[0] == 1:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int((s > max(tol, 1e-12) * max(1.0, s[0])).sum())


def is_big(problem: BundleProblem, tol: float = DEFAULT_TOL) -> Bigness:
    """Bigness from the shape of the nef box.

    The number of sections of ``k L`` is a sum over the lattice points of
    ``k`` times the nef box of section counts on the base, which grow like
    ``k^2`` for ample classes and at most linearly for nef classes of zero
    self-intersection. So ``L`` is big when the box is full-dimensional and
    contains an ample class in its interior, and not big when the box is
    empty or lower-dimensional.
    """
    region = box_nef(problem)
    if is_empty(region, tol):
        return Bigness.NOT_BIG
    if problem.n != 2:
        return Bigness.UNKNOWN
    pts = _spread_points(region, tol)
    if _affine_rank(pts, 1e-9) < problem.n:
        return Bigness.NOT_BIG
    centre = tuple(sum(p[i] for p in pts) / len(pts) for i in range(problem.n))
    probes = [centre] + [tuple((2 * c + x) / 3 for c, x in zip(centre, p)) for p in pts]
    for m in probes:
        if box_h(problem.fan, problem.h).constraint_slack(m) > tol and is_ample(problem.base, problem.class_at(m), tol):
            return Bigness.BIG
    return Bigness.UNKNOWN


def section_exponents(problem: BundleProblem, sigma: int, m: Sequence) -> tuple:
    """Exponents ``<m - m_sigma, v_j>`` of the monomial of ``m`` in the chart of ``sigma``."""
    ms = cartier_data(problem.fan, problem.h)[sigma]
    gens = problem.fan.cone(sigma).generators
    return tuple(normalize_scalar(dot(vec_sub(m, ms), v)) for v in gens)


# ---------------------------------------------------------------------------
# charts


def log_moduli(p: ChartPoint) -> tuple:
    """``log|x_j|`` with ``-inf`` on vanishing coordinates."""
    return tuple(math.log(abs(v)) if v != 0 else -math.inf for v in p.x)


def log_point(fan: Fan, p: ChartPoint) -> tuple:
    """The point ``sum_j log|x_j| v_j`` of ``N_R``, independent of the chart."""
    gens = fan.cone(p.sigma).generators
    logs = log_moduli(p)
    if any(math.isinf(v) for v in logs):
        raise ValueError("log point is only defined when every coordinate is non-zero")
    return tuple(sum(l * g[i] for l, g in zip(logs, gens)) for i in range(fan.n))


def locate_cone(fan: Fan, p: ChartPoint, tol: float = 1e-12) -> int:
    """A maximal cone containing ``-sum log|x_j| v_j``; lowest index on ties.

    In that cone's chart every coordinate of the point has modulus at most 1.
    """
    w0 = tuple(-x for x in log_point(fan, p))
    scale = max(1.0, max(abs(x) for x in w0))
    for k in range(len(fan.max_cones)):
        duals = fan.cone(k).dual_basis()
        if all(dot(u, w0) >= -tol * scale for u in duals):
            return k
    raise IncompleteFan("no maximal cone contains the point")


def to_chart(fan: Fan, p: ChartPoint, target: int) -> ChartPoint:
    """Re-express a point in the chart of another maximal cone."""
    if target == p.sigma:
        return p
    src = fan.cone(p.sigma).generators
    duals = fan.cone(target).dual_basis()
    xs = []
    for u in duals:
        val = 1 + 0j
        for xk, vk in zip(p.x, src):
            e = dot(u, vk)
            if e == 0:
                continue
            if xk == 0:
                if e < 0:
                    raise ValueError("point is not in the target chart")
                val = 0j
            else:
                val *= xk**e
        xs.append(val)
    return ChartPoint(target, tuple(xs), p.z)


# ---------------------------------------------------------------------------
# subdivisions


def _primitive(v: Sequence[int]) -> tuple:
    g = math.gcd(*(int(x) for x in v))
    return tuple(int(x) // g for x in v)


def _det(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def smooth_cone(a: Sequence[int], b: Sequence[int]) -> list[tuple]:
    """Rays of the minimal smooth subdivision of the planar cone spanned by ``a, b``.

    The inserted rays are the lattice points on the compact edges of the
    convex hull of the non-zero lattice points of the cone, found by the
    Hirzebruch–Jung continued fraction recursion. Returns the rays from
    ``a`` to ``b`` inclusive.
    """
    a, b = _primitive(a), _primitive(b)
    d = _det(a, b)
    if d == 0:
        raise ValueError("cone is not two-dimensional")
    if d < 0:
        return list(reversed(smooth_cone(b, a)))
    if d == 1:
        return [a, b]
    k = next(k for k in range(d) if all((bi + k * ai) % d == 0 for ai, bi in zip(a, b)))
    prev, cur = a, tuple((bi + k * ai) // d for ai, bi in zip(a, b))
    rays = [a, cur]
    while cur != b:
        c = -(-_det(prev, b) // _det(cur, b))
        prev, cur = cur, tuple(c * x - y for x, y in zip(cur, prev))
        rays.append(cur)
    return rays


def subdivide(fan: Fan, normals: Sequence[Sequence]) -> Fan:
    """Cut every cone by the hyperplanes ``<u, .> = 0`` and resolve the pieces."""
    if fan.n != 2:
        raise UnsupportedDimension("subdivision is implemented for rank 2")
    rays: list[tuple] = list(fan.rays)
    cones: list[tuple] = []
    labels = []

    def ray_index(r):
        if r not in rays:
            rays.append(r)
        return rays.index(r)

    for k, (i, j) in enumerate(fan.max_cones):
        g1, g2 = fan.rays[i], fan.rays[j]
        if _det(g1, g2) < 0:
            g1, g2 = g2, g1
        cuts = {g1, g2}
        for u in normals:
            f1, f2 = dot(u, g1), dot(u, g2)
            if f1 * f2 < 0:
                cuts.add(_primitive(tuple(abs(f2) * x + abs(f1) * y for x, y in zip(g1, g2))))
        ordered = sorted(cuts, key=lambda r: Fraction(_det(g1, r), _det(r, g2)) if _det(r, g2) != 0 else math.inf)
        piece = 0
        for r1, r2 in zip(ordered, ordered[1:]):
            chain = smooth_cone(r1, r2)
            for s1, s2 in zip(chain, chain[1:]):
                cones.append((ray_index(s1), ray_index(s2)))
                labels.append(f"{fan.label(k)}.{piece}")
                piece += 1
    return Fan(tuple(rays), tuple(cones), tuple(labels))


def pullback_matrix(sigma: Cone, sigma_tilde: Cone) -> tuple:
    """Exponent matrix ``(<v^j, w_k>)`` of the monomial map between charts."""
    duals = sigma.dual_basis()
    M = tuple(tuple(dot(u, w) for w in sigma_tilde.generators) for u in duals)
    if any(x < 0 for row in M for x in row):
        raise ValueError("the smaller cone is not contained in the larger one")
    return M
