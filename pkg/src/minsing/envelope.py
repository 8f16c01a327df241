"""The envelope weight of a big line bundle on a toric bundle.

In the chart of a maximal cone ``sigma`` with coordinates ``(x, z)`` the
weight is

    psi_sigma = max over m in the nef box of
                sum_j 2 <m - m_sigma, v_j> log|x_j| + z H(m) conj(z)^T,

an affine function of ``m`` maximized over a convex region. Vanishing
coordinates are handled with the convention ``0^0 = 1``: the maximum is
taken over the slice where their exponents vanish, and is ``-inf`` if that
slice is empty.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bundle import (
    BundleProblem,
    ChartPoint,
    box_nef,
    cartier_data,
    log_moduli,
    log_point,
    to_chart,
)
from .errors import EmptyRegion, NefViolation, NoSections
from .geometry import (
    DEFAULT_TOL,
    Cone,
    ConvexRegion,
    _feasible,
    corners,
    dot,
    double_overline,
    maximize_linear,
    minimize_linear,
    normalize_scalar,
    support_function,
    vec_sub,
)
from .torus import evaluate, weight_form


def _z_forms(problem: BundleProblem, z: Sequence) -> tuple:
    """``(phi_L0(z), [phi_Lk(z)])``, zero when ``z`` is omitted or zero."""
    if not z or all(v == 0 for v in z):
        return 0, [0] * problem.n
    phi0 = evaluate(weight_form(problem.base, problem.L0), z)
    phis = [evaluate(weight_form(problem.base, L), z) for L in problem.L_hom]
    return phi0, phis


def _objective(problem: BundleProblem, sigma: int, logs: Sequence[float], z: Sequence) -> tuple:
    """Linear coefficients, constant and slice constraints of the envelope objective."""
    fan = problem.fan
    gens = fan.cone(sigma).generators
    ms = cartier_data(fan, problem.h)[sigma]
    phi0, phis = _z_forms(problem, z)
    coeffs = list(phis)
    const = phi0
    slice_hs = []
    for j, (lg, v) in enumerate(zip(logs, gens)):
        if math.isinf(lg):
            hv = problem.h[fan.max_cones[sigma][j]]
            slice_hs.append((v, -hv))
            slice_hs.append((tuple(-x for x in v), hv))
            continue
        if lg == 0:
            continue
        for k in range(problem.n):
            coeffs[k] = coeffs[k] + 2 * lg * v[k]
        const = const - 2 * lg * dot(ms, v)
    return tuple(coeffs), const, tuple(slice_hs)


def psi_from_logs(
    problem: BundleProblem,
    sigma: int,
    logs: Sequence[float],
    z: Sequence = (),
    tol: float = DEFAULT_TOL,
) -> float:
    """Envelope weight from log-moduli ``log|x_j|`` (``-inf`` marks a zero coordinate)."""
    coeffs, const, slice_hs = _objective(problem, sigma, logs, z)
    region = box_nef(problem)
    if slice_hs:
        region = region.intersect(slice_hs)
    try:
        opt = maximize_linear(region, coeffs, tol)
    except EmptyRegion:
        return -math.inf
    return normalize_scalar(opt.value + const)


def psi_sigma(problem: BundleProblem, p: ChartPoint, tol: float = DEFAULT_TOL) -> float:
    """The envelope weight at a chart point."""
    return psi_from_logs(problem, p.sigma, log_moduli(p), p.z, tol)


def psi_sigma_m(problem: BundleProblem, p: ChartPoint, m: Sequence, tol: float = DEFAULT_TOL) -> float:
    """The weight of the single section ``m``; raises NefViolation outside the nef box."""
    if not _feasible(box_nef(problem), tuple(m), tol):
        raise NefViolation(f"the class at m = {tuple(m)} is not nef (or m lies outside the h box)")
    fan = problem.fan
    gens = fan.cone(p.sigma).generators
    ms = cartier_data(fan, problem.h)[p.sigma]
    total = 0.0
    for lg, v in zip(log_moduli(p), gens):
        e = dot(vec_sub(m, ms), v)
        if e == 0 or (not isinstance(e, int) and abs(e) <= tol):
            continue
        if math.isinf(lg):
            return -math.inf
        total += 2 * float(e) * lg
    if p.z and any(v != 0 for v in p.z):
        total += evaluate(weight_form(problem.base, problem.class_at(m)), p.z)
    return total


def expected_transition(problem: BundleProblem, p: ChartPoint, sigma2: int) -> float:
    """``psi_sigma - psi_sigma2`` predicted by the change of trivialization."""
    cd = cartier_data(problem.fan, problem.h)
    ell = log_point(problem.fan, p)
    return 2 * float(dot(vec_sub(cd[sigma2], cd[p.sigma]), ell))


def glue_check(problem: BundleProblem, p: ChartPoint, sigma2: int, tol: float = DEFAULT_TOL) -> float:
    """Deviation of the two chart weights from the expected transition."""
    if sigma2 == p.sigma:
        return 0.0
    q = to_chart(problem.fan, p, sigma2)
    diff = psi_sigma(problem, p, tol) - psi_sigma(problem, q, tol)
    return abs(diff - expected_transition(problem, p, sigma2))


# ---------------------------------------------------------------------------
# germs


@dataclass(frozen=True)
class Germ:
    """Exponent region of a weight ``log max |x^a|^2`` near a point.

    ``indices`` are the vanishing coordinates and ``region`` lives in their
    exponent coordinates with the positive orthant as recession cone. A germ
    with no indices is bounded (trivial).
    """

    indices: tuple
    region: ConvexRegion | None

    @property
    def trivial(self) -> bool:
        return not self.indices

    @classmethod
    def from_exponents(cls, exponents: Sequence[Sequence], indices: Sequence[int] | None = None) -> "Germ":
        """Germ of ``log max_k |x^{a_k}|^2`` for the given exponent vectors."""
        k = len(exponents[0])
        orthant = Cone(tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k)))
        region = double_overline([tuple(e) for e in exponents], orthant)
        return cls(tuple(indices) if indices is not None else tuple(range(k)), region)

    def support(self, w: Sequence, tol: float = DEFAULT_TOL):
        if self.trivial:
            return 0
        return support_function(self.region, w, tol)


def singularity_germ(problem: BundleProblem, p: ChartPoint, tol: float = DEFAULT_TOL) -> Germ:
    """Exponents of the envelope weight at ``p`` in the coordinates that vanish there."""
    I = p.I
    if not I:
        return Germ((), None)
    fan = problem.fan
    cone = fan.cone(p.sigma)
    gens = cone.generators
    duals = cone.dual_basis()
    ms = cartier_data(fan, problem.h)[p.sigma]
    region = box_nef(problem)
    k = len(I)
    orthant = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    if k == problem.n:
        # m = m_sigma + sum_j y_j v^j
        A = tuple(tuple(duals[j][i] for j in I) for i in range(problem.n))
        return Germ(I, region.pullback(A, ms).with_recession(orthant))
    if k == 1:
        (j,) = I
        v = gens[j]
        lo = minimize_linear(region, v, tol).value - dot(ms, v)
        hi = maximize_linear(region, v, tol).value - dot(ms, v)
        interval = ConvexRegion(1, (((1,), -lo), ((-1,), hi)))
        return Germ(I, interval.with_recession(orthant))
    raise NotImplementedError("germs are computed for fibre rank 2")


class Comparison(enum.Enum):
    FIRST_MORE_SINGULAR = "g1<g2"
    SECOND_MORE_SINGULAR = "g2<g1"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"

    def __str__(self) -> str:
        return self.value


def _germ_directions(g1: Germ, g2: Germ, samples: int) -> list:
    k = len(g1.indices)
    if k == 1:
        return [(1,)]
    dirs = {(1, 0), (0, 1)}
    for g in (g1, g2):
        verts = corners(g.region.base())
        for a, b in itertools.combinations(verts, 2):
            d = vec_sub(a, b)
            # directions where the two vertex forms tie: <d, (1-s, s)> = 0
            den = d[0] - d[1]
            if den != 0:
                s = d[0] / den
                if 0 < s < 1:
                    dirs.add((1 - s, s))
    for i in range(1, samples):
        s = i / samples
        dirs.add((1 - s, s))
    return sorted(dirs, key=lambda w: float(w[1]))


def compare_singularity(g1: Germ, g2: Germ, tol: float = DEFAULT_TOL, samples: int = 512) -> Comparison:
    """Compare two germs by their lower support functions on the orthant.

    ``g1`` is more singular than ``g2`` when its support function is
    everywhere at least that of ``g2``.
    """
    if g1.trivial and g2.trivial:
        return Comparison.EQUIVALENT
    if g1.trivial or g2.trivial:
        other, first_trivial = (g2, True) if g1.trivial else (g1, False)
        dirs = _germ_directions(other, other, samples)
        positive = any(float(other.support(w, tol)) > tol for w in dirs)
        if not positive:
            return Comparison.EQUIVALENT
        return Comparison.SECOND_MORE_SINGULAR if first_trivial else Comparison.FIRST_MORE_SINGULAR
    if len(g1.indices) != len(g2.indices):
        return Comparison.INCOMPARABLE
    ge, le = True, True
    for w in _germ_directions(g1, g2, samples):
        h1 = float(g1.support(w, tol))
        h2 = float(g2.support(w, tol))
        if h1 < h2 - tol:
            ge = False
        if h1 > h2 + tol:
            le = False
    if ge and le:
        return Comparison.EQUIVALENT
    if ge:
        return Comparison.FIRST_MORE_SINGULAR
    if le:
        return Comparison.SECOND_MORE_SINGULAR
    return Comparison.INCOMPARABLE


# ---------------------------------------------------------------------------
# lattice-restricted envelope


def scaled_lattice_points(region: ConvexRegion, nu: int, tol: float = 1e-12) -> np.ndarray:
    """Integer points of ``nu`` times a bounded planar region, vectorized."""
    from .geometry import bounding_box

    lows, highs = bounding_box(region)
    xs = np.arange(math.ceil(nu * float(lows[0]) - 1e-9), math.floor(nu * float(highs[0]) + 1e-9) + 1)
    ys = np.arange(math.ceil(nu * float(lows[1]) - 1e-9), math.floor(nu * float(highs[1]) + 1e-9) + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    P = np.stack([X.ravel(), Y.ravel()], axis=1).astype(float) / nu
    keep = np.ones(len(P), dtype=bool)
    for n, o in region.halfspaces:
        keep &= P @ np.array([float(x) for x in n]) + float(o) >= -tol
    for q in region.quads:
        qf = q.as_float()
        Q = np.array(qf.Q)
        vals = np.einsum("ij,jk,ik->i", P, Q, P) + 2 * P @ np.array(qf.p) + qf.r
        keep &= vals >= -tol
        keep &= P @ np.array(qf.s) + qf.s0 >= -tol
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)[keep]
    return pts


def section_envelope_oracle(problem: BundleProblem, nu: int, p: ChartPoint, tol: float = DEFAULT_TOL) -> float:
    """Envelope restricted to the points ``m / nu`` with ``m`` in ``nu`` times the nef box.

    These are the weights coming from sections of ``nu L``, so the result
    never exceeds the envelope and increases along divisible chains of
    ``nu``.
    """
    if problem.n != 2:
        raise NotImplementedError("the lattice envelope is vectorized for fibre rank 2")
    pts = scaled_lattice_points(box_nef(problem), nu)
    if len(pts) == 0:
        raise NoSections(f"no lattice points in {nu} times the nef box")
    coeffs, const, slice_hs = _objective(problem, p.sigma, log_moduli(p), p.z)
    M = pts.astype(float) / nu
    keep = np.ones(len(M), dtype=bool)
    for n, o in slice_hs:
        keep &= np.abs(M @ np.array([float(x) for x in n]) + float(o)) <= 1e-12
    if not keep.any():
        return -math.inf
    vals = M[keep] @ np.array([float(c) for c in coeffs]) + float(const)
    return float(vals.max())
