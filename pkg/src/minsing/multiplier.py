"""Multiplier ideals of the envelope weight, jumping numbers and section counts.

Near a point whose vanishing coordinates are ``I``, the envelope weight is
``log max |x^a|^2`` over the exponent region ``R`` of the germ (up to a
bounded term). A monomial ``x^p`` then lies in the multiplier ideal of
``t`` times the weight exactly when ``p + 1`` (restricted to ``I``) lies in
the interior of ``t R``; its jump is the largest such ``t``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .bundle import BundleProblem, ChartPoint, box_nef
from .envelope import Germ, psi_from_logs, singularity_germ
from .errors import ZeroFunction
from .geometry import (
    DEFAULT_TOL,
    bounding_box,
    is_exact,
    is_interior,
    lattice_points,
    normalize_scalar,
    scaling_threshold,
)
from .positivity import _require_big
from .torus import is_ample, is_nef, self_intersection


@dataclass(frozen=True, order=True)
class Monomial:
    """``prod_j x_j^{p_j}``; the dependence on the base coordinates is a unit."""

    exponents: tuple

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError("monomial exponents must be non-negative")
        object.__setattr__(self, "exponents", exps)

    def divides(self, other: "Monomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __str__(self) -> str:
        parts = [f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(self.exponents) if e]
        return "*".join(parts) if parts else "1"


def _monomials(f) -> tuple:
    if isinstance(f, Monomial):
        return (f,)
    items = list(f)
    if items and all(isinstance(x, int) for x in items):
        return (Monomial(tuple(items)),)
    return tuple(m if isinstance(m, Monomial) else Monomial(tuple(m)) for m in items)


def newton_set(problem: BundleProblem, p: ChartPoint, f) -> list[tuple]:
    """Points ``sum_{j in I} a_j v^j`` of ``M`` read off the monomials of ``f``."""
    monos = _monomials(f)
    if not monos:
        raise ZeroFunction("f has no monomials")
    duals = problem.fan.cone(p.sigma).dual_basis()
    out = []
    for mono in monos:
        pt = [0] * problem.n
        for j in p.I:
            for i in range(problem.n):
                pt[i] += mono.exponents[j] * duals[j][i]
        if tuple(pt) not in out:
            out.append(tuple(pt))
    return out


def _shifted_exponent(p: ChartPoint, mono: Monomial) -> tuple:
    return tuple(mono.exponents[j] + 1 for j in p.I)


def monomial_threshold(germ: Germ, shifted: Sequence[int], tol: float = DEFAULT_TOL):
    """The jump ``sup{t : shifted in Int(t R)}`` of one monomial."""
    if germ.trivial:
        return math.inf
    return scaling_threshold(germ.region, tuple(shifted), tol)


def _member(germ: Germ, shifted: Sequence[int], t, tol: float) -> bool:
    if germ.trivial:
        return True
    return is_interior(germ.region.scaled(t), tuple(shifted), tol)


def in_multiplier_ideal(problem: BundleProblem, p: ChartPoint, f, t, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``f`` belongs to the multiplier ideal of ``t`` times the envelope weight at ``p``.

    Raises BoundaryAmbiguous when a curved boundary passes within ``tol`` of
    a relevant lattice point.
    """
    if not (t > 0 and math.isfinite(t)):
        raise ValueError("t must be positive and finite")
    monos = _monomials(f)
    if not monos:
        raise ZeroFunction("f has no monomials")
    _require_big(problem, tol)
    germ = singularity_germ(problem, p, tol)
    return all(_member(germ, _shifted_exponent(p, m), t, tol) for m in monos)


def _exponent_bounds(germ: Germ, scale, margin: int) -> tuple:
    _, highs = bounding_box(germ.region.base())
    return tuple(max(0, math.ceil(float(scale) * float(h))) + margin for h in highs)


def _minimalize(monos: Iterable[Monomial]) -> list[Monomial]:
    monos = sorted(set(monos), key=lambda m: (sum(m.exponents), m.exponents))
    out: list[Monomial] = []
    for m in monos:
        if not any(g.divides(m) for g in out):
            out.append(m)
    return sorted(out, key=lambda m: m.exponents)


def ideal_generators(
    problem: BundleProblem,
    p: ChartPoint,
    t,
    degree_bound: Sequence[int] | None = None,
    tol: float = DEFAULT_TOL,
) -> list[Monomial]:
    """Minimal monomial generators of the multiplier ideal at ``p``.

    Only exponents up to ``degree_bound`` (per vanishing coordinate) are
    scanned; the default box covers ``t`` times the bounded part of the
    germ plus a margin of 2, which contains every minimal generator.
    """
    _require_big(problem, tol)
    germ = singularity_germ(problem, p, tol)
    n = problem.n
    if germ.trivial:
        return [Monomial((0,) * n)]
    if degree_bound is None:
        degree_bound = _exponent_bounds(germ, t, 2)
    region = germ.region.scaled(t)
    found = []
    for exps in itertools.product(*(range(b + 1) for b in degree_bound)):
        shifted = tuple(e + 1 for e in exps)
        if is_interior(region, shifted, tol):
            full = [0] * n
            for j, e in zip(p.I, exps):
                full[j] = e
            found.append(Monomial(tuple(full)))
    return _minimalize(found)


@dataclass
class JumpingSpectrum:
    """Sorted jumping numbers up to a bound, each with the shifted exponents realizing it."""

    entries: list = field(default_factory=list)

    @property
    def values(self) -> list:
        return [v for v, _ in self.entries]


def jumping_numbers(problem: BundleProblem, p: ChartPoint, T, tol: float = DEFAULT_TOL, dedup: float = 1e-9) -> JumpingSpectrum:
    """All jumps of monomials not exceeding ``T``."""
    _require_big(problem, tol)
    germ = singularity_germ(problem, p, tol)
    if germ.trivial:
        return JumpingSpectrum()
    bounds = _exponent_bounds(germ, T, 1)

    def within(val) -> bool:
        return val <= T or (not is_exact(val) and val <= T + dedup)

    raw = []
    # thresholds grow with every coordinate, so each row stops at its first miss
    for head in itertools.product(*(range(1, b + 1) for b in bounds[:-1])):
        for last in range(1, bounds[-1] + 1):
            shifted = (*head, last)
            val = monomial_threshold(germ, shifted, tol)
            if not within(val):
                break
            raw.append((val, shifted))
    raw.sort(key=lambda e: float(e[0]))
    entries: list = []
    for val, pt in raw:
        if entries and abs(float(val) - float(entries[-1][0])) <= dedup:
            prev, pts = entries[-1]
            pts.append(pt)
            if is_exact(val) and not is_exact(prev):
                entries[-1] = (val, pts)
        else:
            entries.append((val, [pt]))
    return JumpingSpectrum(entries)


def lct(problem: BundleProblem, p: ChartPoint, tol: float = DEFAULT_TOL):
    """Log-canonical threshold: the jump of the constant function."""
    _require_big(problem, tol)
    germ = singularity_germ(problem, p, tol)
    return monomial_threshold(germ, (1,) * len(p.I), tol)


@dataclass
class OpennessResult:
    member: bool
    preserved: dict
    smallest_preserved: float | None

    @property
    def passes(self) -> bool:
        return (not self.member) or all(self.preserved.values())


def openness_check(problem: BundleProblem, p: ChartPoint, f, t, epsilons=(1e-3, 1e-6), tol: float = DEFAULT_TOL) -> OpennessResult:
    """If ``f`` is in the ideal at ``t``, check it stays there at ``(1 + eps) t``."""
    member = in_multiplier_ideal(problem, p, f, t, tol)
    if not member:
        return OpennessResult(False, {}, None)
    preserved = {eps: in_multiplier_ideal(problem, p, f, t * (1 + eps), tol) for eps in epsilons}
    kept = [eps for eps, ok in preserved.items() if ok]
    return OpennessResult(True, preserved, min(kept) if kept else None)


@dataclass
class SectionCount:
    total: int | None
    per_point: list

    @property
    def known(self) -> bool:
        return self.total is not None


def section_count(problem: BundleProblem, tol: float = DEFAULT_TOL) -> SectionCount:
    """Sections of ``L`` split by lattice points of the nef box.

    An ample class ``N`` on an abelian surface has ``N^2 / 2`` sections;
    nef classes on the boundary are flagged and make the total unknown.
    """
    region = box_nef(problem)
    per = []
    total: int | None = 0
    for m in lattice_points(region, tol=tol):
        cls = problem.class_at(m)
        if problem.base.kind == "ExE" and is_ample(problem.base, cls, tol):
            count = normalize_scalar(Fraction(self_intersection(problem.base, cls)) / 2)
            per.append((m, count))
            if total is not None:
                total += count
        else:
            flag = "BoundaryUnknown" if is_nef(problem.base, cls, tol) else "Unsupported"
            per.append((m, flag))
            total = None
    return SectionCount(total, per)


# ---------------------------------------------------------------------------
# integrability oracle


@dataclass
class Integrability:
    converges: bool
    min_rate: float
    integral: float


def integrability_oracle(
    problem: BundleProblem,
    p: ChartPoint,
    f,
    t: float,
    n_angles: int = 160,
    radii: tuple = (500.0, 1000.0),
) -> Integrability:
    """Decide local integrability of ``|f|^2 exp(-t psi)`` by log-radial quadrature.

    With ``u_j = -log|x_j|`` on the vanishing coordinates the integral over a
    small polydisc becomes ``int exp(-2 <p + 1, u> - t psi(u)) du`` over a
    shifted orthant. Along each ray ``u = rho theta`` the exponent grows like
    ``rho G(theta)``; the integral converges iff ``G > 0`` on the closed
    quarter circle, and then equals ``int dtheta / G(theta)^2`` up to bounded
    factors. ``G`` is read off the envelope itself at two large radii.
    """
    I = p.I
    monos = _monomials(f)
    if not I:
        return Integrability(True, math.inf, 0.0)
    base_logs = [math.log(abs(v)) if v != 0 else None for v in p.x]

    def exponent(u_dirs: Sequence[float], rho: float, mono: Monomial) -> float:
        logs = list(base_logs)
        for j, c in zip(I, u_dirs):
            logs[j] = -rho * c
        psi = psi_from_logs(problem, p.sigma, logs, p.z)
        lin = sum(2 * (mono.exponents[j] + 1) * rho * c for j, c in zip(I, u_dirs))
        return lin + t * float(psi)

    def rate(theta: float, mono: Monomial) -> float:
        dirs = (math.cos(theta), math.sin(theta)) if len(I) == 2 else (1.0,)
        r1, r2 = radii
        return (exponent(dirs, r2, mono) - exponent(dirs, r1, mono)) / (r2 - r1)

    worst = math.inf
    integral = 0.0
    for mono in monos:
        if len(I) == 1:
            g = rate(0.0, mono)
            worst = min(worst, g)
            integral += 1.0 / g**2 if g > 0 else math.inf
            continue
        nodes, weights = np.polynomial.legendre.leggauss(n_angles)
        thetas = (nodes + 1) * math.pi / 4
        w = weights * math.pi / 4
        grid = np.concatenate([[0.0], thetas, [math.pi / 2]])
        vals = np.array([rate(th, mono) for th in grid])
        k = int(vals.argmin())
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
        if hi > lo:
            res = minimize_scalar(lambda th: rate(th, mono), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
            g_min = min(float(vals.min()), float(res.fun))
        else:
            g_min = float(vals.min())
        worst = min(worst, g_min)
        inner = vals[1:-1]
        integral += float(np.sum(w / inner**2)) if g_min > 0 else math.inf
    return Integrability(bool(worst > 0), float(worst), integral)
