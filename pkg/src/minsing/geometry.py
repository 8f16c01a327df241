"""Convex geometry kernel for lattice problems in low dimension.

Numbers are plain Python scalars. Integers and :class:`fractions.Fraction`
values are treated as exact; floats carry an absolute tolerance supplied by
the caller (``DEFAULT_TOL`` unless overridden). Mixing the two follows normal
Python promotion, so any float input makes the result approximate.

A :class:`ConvexRegion` is the Minkowski sum of a bounded *base* and an
optional recession cone. The base is cut out by affine inequalities
``<n, m> + o >= 0`` and by quadratic constraints, each one the affine
preimage of a Lorentz cone written as ``q(m) >= 0`` together with a linear
selector picking the forward nappe.

Linear optimization in the plane is done by enumerating every point where
the optimum can sit: vertices of pairs of lines, line/conic crossings,
conic singular points and the conic tangency points for the given
direction. Polyhedral regions in any dimension use plain vertex enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    BoundaryAmbiguous,
    EmptyRegion,
    NonSmoothCone,
    PointOutsideDualCone,
    UnboundedRegion,
    UnsupportedDimension,
)

DEFAULT_TOL = 1e-9

Number = int | Fraction | float
Vector = tuple


# ---------------------------------------------------------------------------
# scalar and vector helpers


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def normalize_scalar(x) -> Number:
    """Collapse integral fractions to int and leave floats alone."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def dot(a: Sequence, b: Sequence) -> Number:
    total = 0
    for x, y in zip(a, b):
        total += x * y
    return total


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def mat_vec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in A)


def transpose(A: Sequence[Sequence]) -> tuple:
    return tuple(zip(*A)) if A else ()


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> tuple:
    Bt = transpose(B)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def exact_sqrt(x: Number) -> Fraction | None:
    """Square root of a non-negative rational if it is rational, else None."""
    if not is_exact(x):
        return None
    x = Fraction(x)
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def solve_linear(A: Sequence[Sequence], b: Sequence) -> tuple | None:
    """Solve the square system ``A x = b``; None when singular.

    Exact inputs are solved by fraction-valued Gaussian elimination.
    """
    n = len(A)
    exact = all(all_exact(row) for row in A) and all_exact(b)
    if exact:
        M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    else:
        M = [[float(v) for v in row] + [float(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        if exact:
            pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        else:
            pivot = max(range(col, n), key=lambda r: abs(M[r][col]))
            scale = max(1.0, max(abs(v) for row in M for v in row[:n]))
            if abs(M[pivot][col]) <= 1e-14 * scale:
                pivot = None
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(normalize_scalar(M[i][n] / M[i][i]) for i in range(n))


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    n = len(rows)
    if n == 0:
        return 1
    M = [[Fraction(v) for v in r] for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return int(det)


def is_primitive(v: Sequence[int]) -> bool:
    return math.gcd(*(int(x) for x in v)) == 1


def lex_key(point: Sequence) -> tuple:
    return tuple(float(x) for x in point)


# ---------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by integer generators."""

    generators: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "generators", tuple(tuple(int(x) for x in g) for g in self.generators)
        )

    @property
    def dim(self) -> int:
        return len(self.generators[0]) if self.generators else 0

    def is_full(self) -> bool:
        return len(self.generators) == self.dim and integer_determinant(self.generators) != 0

    def determinant(self) -> int:
        return integer_determinant(self.generators)

    def is_smooth(self) -> bool:
        if len(self.generators) == self.dim:
            return abs(self.determinant()) == 1
        # lower-dimensional: smooth iff the generators are part of a basis,
        # which for a single generator means primitive
        if len(self.generators) == 1:
            return is_primitive(self.generators[0])
        raise UnsupportedDimension("smoothness of lower-dimensional cones with several rays")

    def dual_basis(self) -> tuple:
        """Dual basis of a smooth full cone, as integer vectors."""
        return _dual_basis(self.generators)

    def coefficients(self, w: Sequence) -> tuple:
        """Coordinates of ``w`` in the generator basis of a full simplicial cone."""
        return solve_linear(transpose(self.generators), tuple(w))

    def contains(self, w: Sequence, tol: float = DEFAULT_TOL) -> bool:
        coeffs = self.coefficients(w)
        if all_exact(coeffs):
            return all(c >= 0 for c in coeffs)
        return all(c >= -tol for c in coeffs)


@lru_cache(maxsize=1024)
def _dual_basis(generators: tuple) -> tuple:
    cone = Cone(generators)
    if not cone.is_full() or abs(cone.determinant()) != 1:
        raise NonSmoothCone(f"generators {generators} have determinant {cone.determinant() if cone.is_full() else 0}")
    n = cone.dim
    rows = []
    for j in range(n):
        rhs = tuple(1 if k == j else 0 for k in range(n))
        sol = solve_linear(generators, rhs)
        rows.append(tuple(int(x) for x in sol))
    return tuple(rows)


def dual_cone(c: Cone) -> Cone:
    """The cone spanned by the dual basis of a smooth full-dimensional cone."""
    return Cone(c.dual_basis())


def dual_generators(generators: Sequence[Sequence]) -> tuple:
    """Generators of the dual of a full simplicial cone (rational, not normalized)."""
    n = len(generators)
    if n == 0:
        return ()
    out = []
    for j in range(n):
        rhs = tuple(1 if k == j else 0 for k in range(n))
        sol = solve_linear(generators, rhs)
        if sol is None:
            raise UnsupportedDimension("recession cone must be full-dimensional and simplicial")
        out.append(sol)
    return tuple(out)


# ---------------------------------------------------------------------------
# quadratic (Lorentz) constraints


@dataclass(frozen=True)
class QuadConstraint:
    """``m^T Q m + 2<p, m> + r >= 0`` on the nappe where ``<s, m> + s0 >= 0``.

    This is how the preimage of the Lorentz cone ``c >= sqrt(a^2 + b^2)`` under
    an affine map looks in coordinates: ``q = c^2 - a^2 - b^2`` and the
    selector is ``c``.
    """

    Q: tuple
    p: tuple
    r: Number
    s: tuple
    s0: Number

    @classmethod
    def from_lorentz(cls, a: tuple, b: tuple, c: tuple) -> "QuadConstraint":
        """Build from affine maps given as ``(linear part, constant)`` pairs."""
        Q = _sym_outer(c[0], c[0])
        Q = _mat_sub(Q, _sym_outer(a[0], a[0]))
        Q = _mat_sub(Q, _sym_outer(b[0], b[0]))
        p = tuple(
            c[1] * ci - a[1] * ai - b[1] * bi for ci, ai, bi in zip(c[0], a[0], b[0])
        )
        r = c[1] * c[1] - a[1] * a[1] - b[1] * b[1]
        return cls(Q, p, r, tuple(c[0]), c[1])

    @classmethod
    def from_product(cls, f: tuple, g: tuple, s: tuple) -> "QuadConstraint":
        """``f(m) g(m) >= 0`` for affine ``f, g`` with a selector, all ``(linear, constant)``."""
        Q = _sym_outer(f[0], g[0])
        p = tuple(_half(f[1] * gi + g[1] * fi) for fi, gi in zip(f[0], g[0]))
        return cls(Q, p, normalize_scalar(f[1] * g[1]), tuple(s[0]), s[1])

    @property
    def exact(self) -> bool:
        return (
            all(all_exact(row) for row in self.Q)
            and all_exact(self.p)
            and all_exact((self.r, self.s0))
            and all_exact(self.s)
        )

    def value(self, m: Sequence) -> Number:
        return dot(m, mat_vec(self.Q, m)) + 2 * dot(self.p, m) + self.r

    def selector(self, m: Sequence) -> Number:
        return dot(self.s, m) + self.s0

    def gradient(self, m: Sequence) -> tuple:
        return tuple(2 * (x + y) for x, y in zip(mat_vec(self.Q, m), self.p))

    def pullback(self, A: Sequence[Sequence], b: Sequence) -> "QuadConstraint":
        """Constraint on ``y`` obtained by substituting ``m = A y + b``."""
        At = transpose(A)
        Q2 = mat_mul(mat_mul(At, self.Q), A)
        p2 = mat_vec(At, vec_add(mat_vec(self.Q, b), self.p))
        return QuadConstraint(
            tuple(tuple(normalize_scalar(x) for x in row) for row in Q2),
            tuple(normalize_scalar(x) for x in p2),
            normalize_scalar(self.value(b)),
            tuple(normalize_scalar(x) for x in mat_vec(At, self.s)),
            normalize_scalar(self.selector(b)),
        )

    def scaled(self, t: Number) -> "QuadConstraint":
        """Constraint for ``t`` times the region (``t > 0``)."""
        return QuadConstraint(
            self.Q,
            tuple(normalize_scalar(t * x) for x in self.p),
            normalize_scalar(t * t * self.r),
            self.s,
            normalize_scalar(t * self.s0),
        )

    def as_float(self) -> "QuadConstraint":
        return QuadConstraint(
            tuple(tuple(float(x) for x in row) for row in self.Q),
            tuple(float(x) for x in self.p),
            float(self.r),
            tuple(float(x) for x in self.s),
            float(self.s0),
        )


def _half(x) -> Number:
    return normalize_scalar(Fraction(x) / 2 if is_exact(x) else x / 2)


def _sym_outer(u: Sequence, v: Sequence) -> tuple:
    n = len(u)
    return tuple(tuple(_half(u[i] * v[j] + u[j] * v[i]) for j in range(n)) for i in range(n))


def _mat_sub(A, B) -> tuple:
    return tuple(tuple(normalize_scalar(x - y) for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def factor_quadratic(quad: QuadConstraint) -> tuple | None:
    """Rewrite a planar quadratic constraint as affine inequalities when possible.

    Returns a tuple of ``(normal, offset)`` pairs describing the same set, or
    None when the conic is non-degenerate or splits only over irrational
    lines. Only exact constraints are considered.
    """
    if not quad.exact or len(quad.p) != 2:
        return None
    (a, b), (_, c) = quad.Q
    d, e = quad.p
    f = quad.r
    sel = (quad.s, quad.s0)
    if a == 0 and b == 0 and c == 0:
        return ((tuple(2 * x for x in quad.p), f), sel)
    det3 = a * (c * f - e * e) - b * (b * f - e * d) + d * (b * e - c * d)
    if det3 != 0:
        return None
    root = exact_sqrt(b * b - a * c)
    if root is None:
        return None
    # homogeneous part k * <l1, m> * <l2, m>
    if a != 0:
        k = Fraction(a)
        l1 = (Fraction(1), -Fraction(-b + root, a))
        l2 = (Fraction(1), -Fraction(-b - root, a))
    elif c != 0:
        k = Fraction(c)
        l1 = (-Fraction(-b + root, c), Fraction(1))
        l2 = (-Fraction(-b - root, c), Fraction(1))
    else:
        k = Fraction(2 * b)
        l1, l2 = (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))
    if l1[0] * l2[1] - l1[1] * l2[0] == 0:
        return _factor_parallel(quad, k, l1)
    centre = solve_linear(quad.Q, (-d, -e))
    g1 = _affine(l1, -dot(l1, centre))
    g2 = _affine(l2, -dot(l2, centre))
    if k < 0:
        g1 = _negate(g1)
    # {q >= 0} is the union of two opposite wedges; the selector keeps one
    plus = solve_linear((g1[0], g2[0]), (1 - g1[1], 1 - g2[1]))
    minus = solve_linear((g1[0], g2[0]), (-1 - g1[1], -1 - g2[1]))
    if quad.selector(plus) < quad.selector(minus):
        g1, g2 = _negate(g1), _negate(g2)
    return (g1, g2, sel)


def _affine(normal, offset) -> tuple:
    return (tuple(normalize_scalar(x) for x in normal), normalize_scalar(offset))


def _negate(h) -> tuple:
    return (tuple(-x for x in h[0]), -h[1])


def _factor_parallel(quad: QuadConstraint, k: Fraction, l: tuple) -> tuple | None:
    # q = k t^2 + 2 c t + r in t = <l, m>, since the linear part is parallel to l
    idx = 0 if l[0] != 0 else 1
    c = Fraction(quad.p[idx]) / l[idx]
    sel = (quad.s, quad.s0)
    disc = c * c - k * quad.r
    if disc < 0:
        return (sel,) if k > 0 else (((0, 0), -1),)
    root = exact_sqrt(disc)
    if root is None:
        return None
    lo, hi = sorted(((-c + root) / k, (-c - root) / k))
    if k < 0:
        return (_affine(l, -lo), _affine(tuple(-x for x in l), hi), sel)
    # outside a strip: only convex if the selector discards one side
    slope = dot(quad.s, l)
    if slope > 0:
        return (_affine(l, -hi), sel)
    if slope < 0:
        return (_affine(tuple(-x for x in l), lo), sel)
    return None


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class ConvexRegion:
    """Bounded base cut out by constraints, plus an optional recession cone.

    ``halfspaces`` holds ``(normal, offset)`` pairs meaning
    ``<normal, m> + offset >= 0``; ``quads`` holds :class:`QuadConstraint`
    objects; ``recession`` lists generators of a full simplicial cone added by
    Minkowski sum (empty for bounded regions).
    """

    dim: int
    halfspaces: tuple = ()
    quads: tuple = ()
    recession: tuple = ()

    def __post_init__(self):
        hs = tuple(
            (tuple(normalize_scalar(x) for x in n), normalize_scalar(o)) for n, o in self.halfspaces
        )
        object.__setattr__(self, "halfspaces", hs)
        object.__setattr__(self, "quads", tuple(self.quads))
        object.__setattr__(
            self, "recession", tuple(tuple(normalize_scalar(x) for x in g) for g in self.recession)
        )

    @property
    def exact(self) -> bool:
        return not self.quads and all(all_exact(n) and is_exact(o) for n, o in self.halfspaces)

    @property
    def polyhedral(self) -> bool:
        return not self.quads

    def base(self) -> "ConvexRegion":
        return ConvexRegion(self.dim, self.halfspaces, self.quads)

    def with_recession(self, generators: Sequence) -> "ConvexRegion":
        return ConvexRegion(self.dim, self.halfspaces, self.quads, tuple(generators))

    def intersect(self, halfspaces: Iterable) -> "ConvexRegion":
        return ConvexRegion(self.dim, self.halfspaces + tuple(halfspaces), self.quads, self.recession)

    def pullback(self, A: Sequence[Sequence], b: Sequence) -> "ConvexRegion":
        """Base constraints on ``y`` after substituting ``m = A y + b``."""
        At = transpose(A)
        hs = tuple((mat_vec(At, n), o + dot(n, b)) for n, o in self.halfspaces)
        qs = tuple(q.pullback(A, b) for q in self.quads)
        return ConvexRegion(len(At), hs, qs)

    def translated(self, v: Sequence) -> "ConvexRegion":
        """The region shifted by ``+v``."""
        n = self.dim
        identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        moved = self.pullback(identity, tuple(-x for x in v))
        return moved.with_recession(self.recession)

    def scaled(self, t: Number) -> "ConvexRegion":
        """``t`` times the region for ``t > 0``."""
        if t <= 0:
            raise ValueError("scale factor must be positive")
        hs = tuple((n, normalize_scalar(t * o)) for n, o in self.halfspaces)
        qs = tuple(q.scaled(t) for q in self.quads)
        return ConvexRegion(self.dim, hs, qs, self.recession)

    def constraint_slack(self, m: Sequence) -> Number:
        """Smallest signed constraint value, roughly a distance to the boundary.

        Affine constraints are divided by the largest entry of the normal and
        quadratic ones by their gradient's length, so near the boundary the
        value is comparable with a distance. Exact when everything is exact.
        """
        values = []
        for n, o in self.halfspaces:
            v = dot(n, m) + o
            norm = max((abs(x) for x in n), default=0)
            if norm == 0:
                values.append(v)
            elif is_exact(v) and is_exact(norm):
                values.append(normalize_scalar(Fraction(v) / norm))
            else:
                values.append(float(v) / float(norm))
        for q in self.quads:
            qf = q.as_float()
            mf = tuple(float(x) for x in m)
            g = math.hypot(*qf.gradient(mf)) if self.dim > 1 else abs(qf.gradient(mf)[0])
            values.append(qf.value(mf) / max(g, 1.0))
            sn = math.sqrt(dot(qf.s, qf.s)) or 1.0
            values.append(qf.selector(mf) / sn)
        return min(values) if values else 0


@dataclass(frozen=True)
class Optimum:
    """Result of a linear optimization.

    ``value`` is ``-inf`` (or ``+inf`` for maximization) and ``witness`` is
    None when the objective is unbounded over the recession cone.
    """

    value: Number
    witness: tuple | None
    unbounded: bool = False

    @property
    def exact(self) -> bool:
        return is_exact(self.value) and self.witness is not None and all_exact(self.witness)


def _feasible(region: ConvexRegion, m: Sequence, tol: float) -> bool:
    """Closed-base membership with absolute tolerance on approximate data."""
    for n, o in region.halfspaces:
        v = dot(n, m) + o
        if is_exact(v):
            if v < 0:
                return False
        else:
            scale = max(1.0, max((abs(float(x)) for x in n), default=0.0) * (1.0 + max((abs(float(x)) for x in m), default=0.0)))
            if v < -tol * scale:
                return False
    for q in region.quads:
        qv = q.value(m)
        sv = q.selector(m)
        if is_exact(qv) and is_exact(sv):
            if qv < 0 or sv < 0:
                return False
            continue
        qf = q.as_float()
        mf = tuple(float(x) for x in m)
        g = math.hypot(*qf.gradient(mf)) if len(mf) > 1 else abs(qf.gradient(mf)[0])
        scale = max(1.0, g)
        if float(qv) < -tol * scale:
            return False
        if float(sv) < -tol * max(1.0, math.sqrt(dot(qf.s, qf.s)) * (1.0 + max(abs(x) for x in mf))):
            return False
    return True


def _line_pair(h1, h2):
    (n1, o1), (n2, o2) = h1, h2
    det = n1[0] * n2[1] - n1[1] * n2[0]
    if det == 0 or (not is_exact(det) and abs(det) < 1e-15):
        return None
    if is_exact(det) and all_exact((o1, o2, *n1, *n2)):
        det = Fraction(det)
    x = (-o1 * n2[1] + o2 * n1[1]) / det
    y = (-n1[0] * o2 + n2[0] * o1) / det
    return (normalize_scalar(x), normalize_scalar(y))


def _solve_quadratic(A: float, B: float, C: float) -> list[float]:
    scale = max(abs(A), abs(B), abs(C), 1e-300)
    if abs(A) <= 1e-13 * scale:
        if abs(B) <= 1e-13 * scale:
            return []
        return [-C / B]
    disc = B * B - 4 * A * C
    if disc < 0:
        if disc >= -1e-9 * max(B * B, abs(4 * A * C), 1e-300):
            return [-B / (2 * A)]
        return []
    sq = math.sqrt(disc)
    qq = -0.5 * (B + math.copysign(sq, B))
    roots = []
    if qq != 0:
        roots.append(C / qq)
        roots.append(qq / A)
    else:
        roots.append(-B / (2 * A))
    return roots


def _line_conic(h, quad: QuadConstraint) -> list[tuple]:
    n, o = h
    n = tuple(float(x) for x in n)
    o = float(o)
    nn = n[0] ** 2 + n[1] ** 2
    if nn == 0:
        return []
    q = quad.as_float()
    m0 = (-o * n[0] / nn, -o * n[1] / nn)
    d = (-n[1], n[0])
    A = dot(d, mat_vec(q.Q, d))
    B = 2 * (dot(m0, mat_vec(q.Q, d)) + dot(q.p, d))
    C = q.value(m0)
    return [(m0[0] + s * d[0], m0[1] + s * d[1]) for s in _solve_quadratic(A, B, C)]


def _conic_singular(quad: QuadConstraint, tol: float) -> list[tuple]:
    centre = solve_linear(quad.Q, tuple(-x for x in quad.p))
    if centre is None:
        return []
    val = quad.value(centre)
    if is_exact(val):
        return [centre] if val == 0 else []
    scale = max(1.0, max(abs(float(x)) for row in quad.Q for x in row))
    return [tuple(float(x) for x in centre)] if abs(val) <= tol * scale else []


def _tangent_points(quad: QuadConstraint, w: Sequence) -> list[tuple]:
    """Points where a level line of ``<w, .>`` touches the conic ``q = 0``."""
    q = quad.as_float()
    w = tuple(float(x) for x in w)
    ww = w[0] ** 2 + w[1] ** 2
    if ww == 0:
        return []
    u = (w[0] / ww, w[1] / ww)
    d = (-w[1], w[0])
    A = dot(d, mat_vec(q.Q, d))
    scale = max(1e-300, max(abs(x) for row in q.Q for x in row) * ww)
    if abs(A) <= 1e-13 * scale:
        return []
    b1 = 2 * dot(u, mat_vec(q.Q, d))
    b0 = 2 * dot(q.p, d)
    c2 = dot(u, mat_vec(q.Q, u))
    c1 = 2 * dot(q.p, u)
    c0 = q.r
    D2 = b1 * b1 - 4 * A * c2
    D1 = 2 * b1 * b0 - 4 * A * c1
    D0 = b0 * b0 - 4 * A * c0
    out = []
    for t in _solve_quadratic(D2, D1, D0):
        s = -(b1 * t + b0) / (2 * A)
        out.append((t * u[0] + s * d[0], t * u[1] + s * d[1]))
    return out


@lru_cache(maxsize=4096)
def _static_candidates(region: ConvexRegion, tol: float) -> tuple:
    """Feasible base points that do not depend on the objective direction."""
    n = region.dim
    pts: list[tuple] = []
    if n == 0:
        return ((),)
    if region.quads and n != 2:
        raise UnsupportedDimension("quadratic constraints are supported in the plane only")
    if len(region.quads) > 1:
        raise UnsupportedDimension("at most one quadratic constraint is supported")
    hs = [h for h in region.halfspaces if any(x != 0 for x in h[0])]
    for h in region.halfspaces:
        if all(x == 0 for x in h[0]) and (h[1] < 0 if is_exact(h[1]) else h[1] < -tol):
            return ()
    if n == 2:
        for h1, h2 in itertools.combinations(hs, 2):
            pt = _line_pair(h1, h2)
            if pt is not None:
                pts.append(pt)
        for quad in region.quads:
            for h in hs:
                pts.extend(_line_conic(h, quad))
            pts.extend(_conic_singular(quad, tol))
            # the selector line can bound the region too
            sel = (quad.s, quad.s0)
            pts.extend(_line_conic(sel, quad))
            for h in hs:
                pt = _line_pair(h, sel)
                if pt is not None:
                    pts.append(pt)
    else:
        for combo in itertools.combinations(hs, n):
            sol = solve_linear(tuple(h[0] for h in combo), tuple(-h[1] for h in combo))
            if sol is not None:
                pts.append(sol)
    feasible = [_clean(p) for p in pts if _feasible(region, p, tol)]
    return tuple(_dedupe(feasible, tol))


def _clean(p: tuple) -> tuple:
    # turn -0.0 into 0.0 so printed witnesses look sensible
    return tuple(x + 0.0 if isinstance(x, float) else x for x in p)


def _dedupe(points: Iterable[tuple], tol: float) -> list[tuple]:
    out: list[tuple] = []
    for p in points:
        for i, q in enumerate(out):
            if all_exact(p) and all_exact(q):
                same = p == q
            else:
                same = max(abs(float(a) - float(b)) for a, b in zip(p, q)) <= tol if p else True
            if same:
                # prefer the exact representative
                if all_exact(p) and not all_exact(q):
                    out[i] = p
                break
        else:
            out.append(p)
    return out


def _recession_blocks(region: ConvexRegion, w: Sequence, tol: float) -> bool:
    for g in region.recession:
        v = dot(g, w)
        if (is_exact(v) and v < 0) or (not is_exact(v) and v < -tol):
            return True
    return False


def optimize(region: ConvexRegion, w: Sequence, maximize: bool = False, tol: float = DEFAULT_TOL) -> Optimum:
    """Minimize (or maximize) ``<w, m>`` over the region.

    Ties are broken by the lexicographically smallest witness. An objective
    that decreases along the recession cone yields an unbounded
    :class:`Optimum` rather than an exception.
    """
    w = tuple(normalize_scalar(x) for x in w)
    sign = -1 if maximize else 1
    wmin = tuple(sign * x for x in w)
    if _recession_blocks(region, wmin, tol):
        return Optimum(math.inf if maximize else -math.inf, None, True)
    base = region.base()
    cands = list(_static_candidates(base, tol))
    if base.quads and any(x != 0 for x in w):
        for quad in base.quads:
            extra = [_clean(p) for p in _tangent_points(quad, w) if _feasible(base, p, tol)]
            cands.extend(extra)
    if not cands:
        if base.quads and all(x == 0 for x in w):
            # a region bounded only by the conic has no corners; probe once
            probe = optimize(region, (1,) + (0,) * (region.dim - 1), False, tol)
            return Optimum(0, probe.witness)
        raise EmptyRegion("region has no feasible points")
    values = [dot(wmin, p) for p in cands]
    best = min(values, key=float)
    if is_exact(best):
        ties = [p for p, v in zip(cands, values) if (v == best if is_exact(v) else abs(float(v) - best) <= tol)]
    else:
        # witnesses within rounding of the optimum count as ties; the reported
        # value is always the optimum itself
        band = 1e-12 * max(1.0, abs(float(best)))
        ties = [p for p, v in zip(cands, values) if float(v) - float(best) <= band]
        exact_ties = [p for p in ties if all_exact(p)]
        if exact_ties:
            ties = exact_ties
    witness = min(ties, key=lex_key)
    value = dot(w, witness) if is_exact(best) else sign * float(best)
    return Optimum(normalize_scalar(value), tuple(witness))


def minimize_linear(region: ConvexRegion, w: Sequence, tol: float = DEFAULT_TOL) -> Optimum:
    """Minimum of ``<w, m>`` over the region with a witness point."""
    return optimize(region, w, False, tol)


def maximize_linear(region: ConvexRegion, w: Sequence, tol: float = DEFAULT_TOL) -> Optimum:
    """Maximum of ``<w, m>`` over the region with a witness point."""
    return optimize(region, w, True, tol)


def support_function(region: ConvexRegion, w: Sequence, tol: float = DEFAULT_TOL) -> Number:
    """Lower support function ``min <w, m>``; ``-inf`` when unbounded."""
    return minimize_linear(region, w, tol).value


def is_empty(region: ConvexRegion, tol: float = DEFAULT_TOL) -> bool:
    if region.dim == 0:
        return False
    try:
        optimize(region.base(), (0,) * region.dim, False, tol)
    except EmptyRegion:
        return True
    return False


def corners(region: ConvexRegion, tol: float = DEFAULT_TOL) -> list[tuple]:
    """Non-smooth boundary points of a bounded base, counter-clockwise in the plane.

    A point counts as a corner when two independent constraints are active
    there, or when it is the singular point of a degenerate conic.
    """
    base = region.base()
    pts = list(_static_candidates(base, tol))
    if base.dim != 2:
        if base.dim == 1:
            return sorted(pts, key=lex_key)
        return pts
    out = []
    for p in pts:
        normals = []
        singular = False
        for n, o in base.halfspaces:
            v = dot(n, p) + o
            if (is_exact(v) and v == 0) or (not is_exact(v) and abs(v) <= tol * max(1.0, math.hypot(*map(float, n)))):
                normals.append(tuple(float(x) for x in n))
        for q in base.quads:
            qf = q.as_float()
            pf = tuple(float(x) for x in p)
            g = qf.gradient(pf)
            gn = math.hypot(*g)
            if abs(qf.value(pf)) <= tol * max(1.0, gn):
                if gn <= math.sqrt(tol):
                    singular = True
                else:
                    normals.append(g)
            if abs(qf.selector(pf)) <= tol:
                normals.append(qf.s)
        independent = any(
            abs(a[0] * b[1] - a[1] * b[0]) > 1e-12 * math.hypot(*a) * math.hypot(*b)
            for a, b in itertools.combinations(normals, 2)
        )
        if independent or singular:
            out.append(p)
    if len(out) <= 2:
        return sorted(out, key=lex_key)
    cx = sum(float(p[0]) for p in out) / len(out)
    cy = sum(float(p[1]) for p in out) / len(out)
    return sorted(out, key=lambda p: math.atan2(float(p[1]) - cy, float(p[0]) - cx))


# ---------------------------------------------------------------------------
# convex hulls and closures


def convex_hull(points: Iterable[Sequence]) -> list[tuple]:
    """Counter-clockwise hull of planar points (monotone chain, collinear points dropped)."""
    pts = sorted(set(tuple(p) for p in points), key=lambda p: (p[0], p[1]))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_region(points: Sequence[Sequence]) -> ConvexRegion:
    """Exact H-description of the convex hull of finitely many planar points."""
    pts = [tuple(normalize_scalar(Fraction(x) if is_exact(x) else x) for x in p) for p in points]
    if not pts:
        raise EmptyRegion("hull of no points")
    dim = len(pts[0])
    if dim == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        return ConvexRegion(1, (((1,), -lo), ((-1,), hi)))
    if dim != 2:
        raise UnsupportedDimension("hulls are implemented in the plane")
    hull = convex_hull(pts)
    if len(hull) == 1:
        (x, y), = hull
        return ConvexRegion(2, (((1, 0), -x), ((-1, 0), x), ((0, 1), -y), ((0, -1), y)))
    if len(hull) == 2:
        a, b = hull
        d = vec_sub(b, a)
        n = (-d[1], d[0])
        hs = [
            (n, -dot(n, a)),
            (tuple(-x for x in n), dot(n, a)),
            (d, -dot(d, a)),
            (tuple(-x for x in d), dot(d, b)),
        ]
        return ConvexRegion(2, tuple(hs))
    hs = []
    for a, b in zip(hull, hull[1:] + hull[:1]):
        d = vec_sub(b, a)
        n = (-d[1], d[0])  # inward for counter-clockwise order
        hs.append((n, -dot(n, a)))
    return ConvexRegion(2, tuple(hs))


def double_overline(points: Sequence[Sequence], sigma: Cone) -> ConvexRegion:
    """Closure of a finite set of dual points under domination on ``sigma``.

    Computed as ``conv(points) + dual(sigma)``; the empty set maps to the dual
    cone itself.
    """
    gens = sigma.generators
    for a in points:
        if any(dot(a, g) < 0 for g in gens):
            raise PointOutsideDualCone(f"{tuple(a)} pairs negatively with a generator of the cone")
    dual = dual_cone(sigma).generators
    if not points:
        points = [(0,) * sigma.dim]
    return hull_region(points).with_recession(dual)


def dominates_on_cone(points: Sequence[Sequence], sigma: Cone, m: Sequence) -> bool:
    """Definitional membership test for the double-overline closure in the plane.

    ``m`` belongs iff it lies in the dual cone and ``min_a <a, w> <= <m, w>``
    for every ``w`` in ``sigma``. The cone is cut along every ray where two of
    the linear forms agree; on each piece the minimum is linear, so checking
    the rays that bound the pieces is enough.
    """
    g1, g2 = sigma.generators
    if dot(m, g1) < 0 or dot(m, g2) < 0:
        return False
    if not points:
        return True
    cuts = {Fraction(0), Fraction(1)}
    for a, b in itertools.combinations(points, 2):
        diff = vec_sub(a, b)
        f0, f1 = dot(diff, g1), dot(diff, g2)
        if f0 != f1:
            s = Fraction(f0, f0 - f1) if all_exact((f0, f1)) else f0 / (f0 - f1)
            if 0 < s < 1:
                cuts.add(s)
    for s in cuts:
        w = tuple((1 - s) * x + s * y for x, y in zip(g1, g2))
        if min(dot(a, w) for a in points) > dot(m, w):
            return False
    return True


# ---------------------------------------------------------------------------
# membership, interiors and thresholds for regions with recession


def _dual_segment(region: ConvexRegion) -> tuple:
    """Generators of the dual of the recession cone (the directions that matter)."""
    return dual_generators(region.recession)


def _support_gap_breakpoints(region: ConvexRegion, u1, u2, tol: float) -> list:
    """Parameters in [0, 1] where the base support function can have a kink."""
    verts = corners(region.base(), tol)
    cuts = {Fraction(0), Fraction(1)}
    for a, b in itertools.combinations(verts, 2):
        diff = vec_sub(a, b)
        f0, f1 = dot(diff, u1), dot(diff, u2)
        if f0 != f1:
            s = Fraction(f0) / (f0 - f1) if all_exact((f0, f1)) else f0 / (f0 - f1)
            if 0 < s < 1:
                cuts.add(normalize_scalar(s))
    return sorted(cuts, key=float)


def _golden_min(f, lo: float = 0.0, hi: float = 1.0, iters: int = 90) -> tuple[float, float]:
    """Minimize a unimodal function on an interval; returns (argmin, min)."""
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        if b - a < 1e-15:
            break
    best = min(((lo, f(lo)), (hi, f(hi)), (c, fc), (d, fd)), key=lambda t: t[1])
    return best


def interior_margin(region: ConvexRegion, y: Sequence, tol: float = DEFAULT_TOL) -> Number:
    """Signed margin of ``y`` against the region; positive exactly on the interior.

    For regions with a recession cone this is the minimum over unit-ish
    directions ``w`` of the dual cone of ``<y, w> - h(w)``, where ``h`` is the
    base's lower support function. Exact for exact polyhedral data.
    """
    if not region.recession:
        return region.base().constraint_slack(y)
    dim = region.dim
    duals = _dual_segment(region)
    if dim == 1:
        (u,) = duals
        return (dot(y, u) - support_function(region.base(), u, tol)) / abs(u[0])
    if dim != 2:
        raise UnsupportedDimension("interior tests with recession are planar")
    u1, u2 = duals
    base = region.base()

    def gap(s):
        w = tuple((1 - s) * a + s * b for a, b in zip(u1, u2))
        return dot(y, w) - support_function(base, w, tol)

    if base.exact and all_exact(y):
        return min(
            Fraction(gap(s)) / max(abs(x) for x in vec_add(vec_scale(1 - s, u1), vec_scale(s, u2)))
            for s in _support_gap_breakpoints(region, u1, u2, tol)
        )
    fu1 = tuple(float(x) for x in u1)
    fu2 = tuple(float(x) for x in u2)

    def normalized(s):
        w = tuple((1 - s) * a + s * b for a, b in zip(fu1, fu2))
        return float(gap(s)) / max(abs(x) for x in w)

    # the gap is convex in s but normalization is not; minimize the raw gap
    s_star, _ = _golden_min(lambda s: float(gap(s)))
    candidates = [0.0, 1.0, s_star]
    return min(normalized(s) for s in candidates)


def contains(region: ConvexRegion, y: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Closed membership, including the recession directions."""
    if not region.recession:
        return _feasible(region, y, tol)
    duals = _dual_segment(region)
    extra = tuple((tuple(-x for x in u), dot(u, y)) for u in duals)
    return not is_empty(region.base().intersect(extra), tol)


def is_interior(region: ConvexRegion, y: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Strict interior membership; raises BoundaryAmbiguous inside the guard band."""
    margin = interior_margin(region, y, tol)
    if is_exact(margin):
        return margin > 0
    if abs(margin) <= tol:
        raise BoundaryAmbiguous(f"point {tuple(y)} is within {tol} of the boundary")
    return margin > 0


def scaling_threshold(region: ConvexRegion, y: Sequence, tol: float = DEFAULT_TOL) -> Number:
    """``sup{t > 0 : y in Int(t * region)}`` for a region with full recession cone.

    ``y`` must lie in the interior of the recession cone. Returns ``inf`` when
    ``y`` is interior for every scale. Exact for exact polyhedral data.
    """
    dim = region.dim
    duals = _dual_segment(region)
    base = region.base()
    if dim == 1:
        (u,) = duals
        lam = Fraction(support_function(base, u, tol)) / dot(y, u) if all_exact((*y, *u)) and base.exact else float(support_function(base, u, tol)) / float(dot(y, u))
        return math.inf if lam <= 0 else normalize_scalar(1 / lam)
    if dim != 2:
        raise UnsupportedDimension("thresholds are planar")
    u1, u2 = duals
    for u in duals:
        if dot(y, u) <= 0:
            raise ValueError("point must lie in the interior of the recession cone")

    def ratio(s):
        w = tuple((1 - s) * a + s * b for a, b in zip(u1, u2))
        return support_function(base, w, tol) / dot(y, w)

    if base.exact and all_exact(y):
        lam = max(
            (Fraction(support_function(base, w, tol)) / dot(y, w))
            for s in _support_gap_breakpoints(region, u1, u2, tol)
            for w in [tuple((1 - s) * a + s * b for a, b in zip(u1, u2))]
        )
    else:
        # the ratio is quasi-concave on the segment, so a golden search finds its peak
        _, neg = _golden_min(lambda s: -float(ratio(s)))
        lam = max(-neg, float(ratio(0.0)), float(ratio(1.0)))
    if lam <= 0:
        return math.inf
    return normalize_scalar(1 / lam)


# ---------------------------------------------------------------------------
# lattice points and plotting helpers


def bounding_box(region: ConvexRegion, tol: float = DEFAULT_TOL) -> tuple:
    """``(lows, highs)`` of the base along each coordinate axis."""
    n = region.dim
    lows, highs = [], []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        lows.append(minimize_linear(region.base(), e, tol).value)
        highs.append(maximize_linear(region.base(), e, tol).value)
    return tuple(lows), tuple(highs)


def lattice_points(
    region: ConvexRegion,
    interior_only: bool = False,
    box: tuple | None = None,
    tol: float = DEFAULT_TOL,
) -> list[tuple]:
    """Integer points of the region (or of its interior), sorted lexicographically.

    ``box`` is ``(lows, highs)``; it is required when the region has a
    recession cone.
    """
    if region.recession and box is None:
        raise UnboundedRegion("supply a bounding box for a region with a recession cone")
    if box is None:
        if is_empty(region, tol):
            return []
        box = bounding_box(region, tol)
    lows, highs = box
    ranges = [
        range(math.ceil(float(lo) - tol), math.floor(float(hi) + tol) + 1) for lo, hi in zip(lows, highs)
    ]
    out = []
    for pt in itertools.product(*ranges):
        if interior_only:
            if is_interior(region, pt, tol):
                out.append(pt)
        else:
            if contains(region, pt, tol):
                out.append(pt)
    return out


def boundary_polygon(
    region: ConvexRegion, samples: int = 256, box: tuple | None = None, tol: float = DEFAULT_TOL
) -> list[tuple]:
    """Float polygon approximating a planar region, clipped to ``box`` if given.

    Regions with a recession cone are truncated by the box, which is then
    required.
    """
    if region.dim != 2:
        raise UnsupportedDimension("polygons are planar")
    base = region.base()
    pts = [tuple(float(x) for x in p) for p in corners(base, tol)]
    for k in range(samples):
        th = 2 * math.pi * k / samples
        opt = minimize_linear(base, (math.cos(th), math.sin(th)), tol)
        pts.append(tuple(float(x) for x in opt.witness))
    if region.recession:
        if box is None:
            raise UnboundedRegion("supply a box to draw a region with a recession cone")
        span = 4 * max(abs(float(x)) for corner in box for x in corner) + 10
        grown = list(pts)
        for g in region.recession:
            gf = tuple(float(x) for x in g)
            norm = math.hypot(*gf)
            grown += [(p[0] + span * gf[0] / norm, p[1] + span * gf[1] / norm) for p in pts]
        g1, g2 = region.recession
        both = tuple(float(a) / math.hypot(*map(float, g1)) + float(b) / math.hypot(*map(float, g2)) for a, b in zip(g1, g2))
        grown += [(p[0] + span * both[0], p[1] + span * both[1]) for p in pts]
        pts = grown
    poly = convex_hull(pts)
    if box is not None:
        (x0, y0), (x1, y1) = box
        for n, o in (((1, 0), -x0), ((-1, 0), x1), ((0, 1), -y0), ((0, -1), y1)):
            poly = _clip(poly, (n, float(o)))
    return poly


def _clip(poly: list[tuple], halfspace) -> list[tuple]:
    n, o = halfspace
    out = []
    for i, cur in enumerate(poly):
        prev = poly[i - 1]
        vc = n[0] * cur[0] + n[1] * cur[1] + o
        vp = n[0] * prev[0] + n[1] * prev[1] + o
        if vc >= 0:
            if vp < 0:
                t = vp / (vp - vc)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif vp >= 0:
            t = vp / (vp - vc)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
    return out
