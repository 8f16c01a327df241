"""Lelong and Kiselman numbers, non-nef strata and the negative part.

All quantities are minima of linear functions over the nef box shifted by
the Cartier data of a chart. Adding the dual cone of the chart (which turns
the shifted box into the region written ``S`` below) does not change minima
in directions from the cone itself, which is why both descriptions are
available and tested against each other.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .bundle import Bigness, BundleProblem, ChartPoint, box_nef, cartier_data, is_big
from .errors import NotBig
from .geometry import (
    DEFAULT_TOL,
    ConvexRegion,
    corners,
    dot,
    is_exact,
    minimize_linear,
    normalize_scalar,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SSet:
    """The nef box shifted by ``-m_sigma`` with the dual cone of ``sigma`` added.

    ``region`` is in the coordinates of ``M``; ``exponents`` is the same set
    written in the dual basis of the cone, i.e. as monomial exponents in the
    chart of ``sigma``.
    """

    sigma: int
    region: ConvexRegion
    exponents: ConvexRegion

    def scaled(self, t) -> "SSet":
        return SSet(self.sigma, self.region.scaled(t), self.exponents.scaled(t))


def s_set(problem: BundleProblem, sigma: int) -> SSet:
    fan = problem.fan
    cone = fan.cone(sigma)
    ms = cartier_data(fan, problem.h)[sigma]
    base = box_nef(problem)
    shifted = base.translated(tuple(-x for x in ms)).with_recession(cone.dual_basis())
    n = problem.n
    duals = cone.dual_basis()
    A = tuple(tuple(duals[j][i] for j in range(n)) for i in range(n))
    orthant = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    exps = base.pullback(A, ms).with_recession(orthant)
    return SSet(sigma, shifted, exps)


def _require_big(problem: BundleProblem, tol: float) -> None:
    verdict = is_big(problem, tol)
    if verdict is Bigness.NOT_BIG:
        raise NotBig("the line bundle is not big")
    if verdict is Bigness.UNKNOWN:
        log.warning("bigness could not be certified; proceeding")


def _weights_for(p: ChartPoint, w) -> dict:
    I = p.I
    if isinstance(w, Mapping):
        weights = {int(k): v for k, v in w.items()}
    else:
        w = tuple(w)
        if len(w) != len(I):
            raise ValueError(f"expected {len(I)} weights, one per vanishing coordinate {I}")
        weights = dict(zip(I, w))
    if set(weights) != set(I):
        raise ValueError(f"weights must be given exactly on the vanishing coordinates {I}")
    for v in weights.values():
        if not v > 0:
            raise ValueError("weights must be positive")
    return weights


def kiselman_number(problem: BundleProblem, p: ChartPoint, w, tol: float = DEFAULT_TOL):
    """Directional Lelong number with weights ``w_j`` on the vanishing coordinates."""
    _require_big(problem, tol)
    weights = _weights_for(p, w)
    if not weights:
        return 0
    fan = problem.fan
    gens = fan.cone(p.sigma).generators
    ms = cartier_data(fan, problem.h)[p.sigma]
    direction = [0] * problem.n
    for j, wj in weights.items():
        inv = Fraction(1) / wj if is_exact(wj) else 1.0 / wj
        for i in range(problem.n):
            direction[i] += inv * gens[j][i]
    direction = tuple(normalize_scalar(x) for x in direction)
    val = minimize_linear(box_nef(problem), direction, tol).value - dot(ms, direction)
    return normalize_scalar(val)


def lelong_number(problem: BundleProblem, p: ChartPoint, tol: float = DEFAULT_TOL):
    return kiselman_number(problem, p, {j: 1 for j in p.I}, tol)


@dataclass(frozen=True)
class Stratum:
    """An orbit closure, given by the rays of its cone, with its generic Lelong number."""

    rays: tuple
    chart: int
    value: object


@dataclass
class StratumReport:
    strata: list = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def positive(self) -> list:
        return [s for s in self.strata if _positive(s.value, self.tol)]


def _positive(x, tol: float) -> bool:
    return x > 0 if is_exact(x) else x > tol


def nnef_locus(problem: BundleProblem, tol: float = DEFAULT_TOL) -> StratumReport:
    """Generic Lelong numbers of every orbit closure; positive ones form the non-nef locus."""
    _require_big(problem, tol)
    fan = problem.fan
    cd = cartier_data(fan, problem.h)
    region = box_nef(problem)
    report = StratumReport(tol=tol)
    for face in fan.faces():
        sigma = next(k for k, mc in enumerate(fan.max_cones) if set(face) <= set(mc))
        direction = tuple(sum(fan.rays[r][i] for r in face) for i in range(fan.n))
        val = minimize_linear(region, direction, tol).value - dot(cd[sigma], direction)
        report.strata.append(Stratum(face, sigma, normalize_scalar(val)))
    return report


def negative_part(problem: BundleProblem, tol: float = DEFAULT_TOL) -> dict:
    """Coefficient of each invariant divisor in the divisorial negative part."""
    region = box_nef(problem)
    return {
        k: normalize_scalar(minimize_linear(region, v, tol).value - hv)
        for k, (v, hv) in enumerate(zip(problem.fan.rays, problem.h))
    }


def negative_part_in_chart(problem: BundleProblem, sigma: int, tol: float = DEFAULT_TOL) -> dict:
    """The same coefficients for the rays of one cone, computed with its Cartier data."""
    fan = problem.fan
    ms = cartier_data(fan, problem.h)[sigma]
    region = box_nef(problem)
    out = {}
    for r in fan.max_cones[sigma]:
        v = fan.rays[r]
        out[r] = normalize_scalar(minimize_linear(region, v, tol).value - dot(ms, v))
    return out


class Polyhedrality(enum.Enum):
    RATIONAL_POLYHEDRAL = "RationalPolyhedral"
    NON_POLYHEDRAL_OR_IRRATIONAL = "NonPolyhedralOrIrrational"

    def __str__(self) -> str:
        return self.value


@dataclass
class ZariskiReport:
    verdict: Polyhedrality
    detail: str
    vertices: list


def zariski_polyhedrality(problem: BundleProblem, tol: float = DEFAULT_TOL) -> ZariskiReport:
    """Whether the nef box is a polytope with rational vertices.

    Exact data whose nef condition splits into rational lines is polyhedral
    and rational outright. Otherwise the quadratic constraint is tested for
    activity: if every vertex of the affine part already satisfies it, it
    cuts nothing away.
    """
    region = box_nef(problem)
    verts = corners(region, tol)
    if region.exact:
        return ZariskiReport(Polyhedrality.RATIONAL_POLYHEDRAL, "affine constraints only", verts)
    relaxed = ConvexRegion(region.dim, region.halfspaces)
    rel_verts = corners(relaxed, tol)
    if relaxed.exact and all(
        q.exact and q.value(v) >= 0 and q.selector(v) >= 0 for q in region.quads for v in rel_verts
    ):
        return ZariskiReport(Polyhedrality.RATIONAL_POLYHEDRAL, "quadratic constraint inactive", rel_verts)
    degenerate = all(_degenerate(q) for q in region.quads)
    detail = "polyhedral with irrational vertices" if degenerate else "curved boundary"
    if not relaxed.exact:
        detail += "; data not exact"
    return ZariskiReport(Polyhedrality.NON_POLYHEDRAL_OR_IRRATIONAL, detail, verts)


def _degenerate(q) -> bool:
    if len(q.p) != 2:
        return False
    (a, b), (_, c) = q.Q
    d, e = q.p
    f = q.r
    det3 = a * (c * f - e * e) - b * (b * f - e * d) + d * (b * e - c * d)
    if is_exact(det3):
        return det3 == 0
    scale = max(1.0, *(abs(float(x)) for x in (a, b, c, d, e, f))) ** 3
    return abs(det3) <= 1e-9 * scale
