"""Néron–Severi classes on a two-dimensional complex torus.

Two kinds of base are supported. ``ExE`` is the product of an elliptic curve
with itself, whose classes are written ``(a, b, c)`` in the basis of the two
fibres and the diagonal. ``hermitian`` describes an arbitrary torus by a list
of hermitian matrices, one per basis class; a class is then nef exactly when
its matrix is positive semi-definite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InconsistentCalibration, UnsupportedDimension
from .geometry import (
    DEFAULT_TOL,
    Number,
    QuadConstraint,
    all_exact,
    is_exact,
    normalize_scalar,
    solve_linear,
)

SQRT3 = math.sqrt(3.0)

# Hermitian forms of the fibre classes f1, f2 and the diagonal on ExE. They
# reproduce the weight matrices of the Nakayama bundles for every a; see
# calibrate_forms and the tests.
EXE_FORMS = (
    ((1, 0), (0, 0)),
    ((0, 0), (0, 1)),
    ((1, -1), (-1, 1)),
)


def _conj(x):
    return x.conjugate() if isinstance(x, complex) else x


@dataclass(frozen=True)
class TorusBase:
    """The base torus: ``kind`` is ``"ExE"`` or ``"hermitian"``."""

    kind: str = "ExE"
    d: int = 2
    forms: tuple = EXE_FORMS

    def __post_init__(self):
        if self.kind not in ("ExE", "hermitian"):
            raise ValueError(f"unknown base kind {self.kind!r}")
        forms = tuple(tuple(tuple(row) for row in f) for f in self.forms)
        object.__setattr__(self, "forms", forms)
        for f in forms:
            if len(f) != self.d or any(len(row) != self.d for row in f):
                raise ValueError("hermitian forms must be d x d")
            for i in range(self.d):
                for j in range(self.d):
                    if f[i][j] != _conj(f[j][i]):
                        raise ValueError("basis form is not hermitian")

    @property
    def ns_rank(self) -> int:
        return len(self.forms)


EXE = TorusBase()


def hermitian_base(forms: Sequence) -> TorusBase:
    forms = tuple(forms)
    return TorusBase("hermitian", len(forms[0]), forms)


@dataclass(frozen=True)
class NSClass:
    """Coefficients of a class in the base's Néron–Severi basis."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(normalize_scalar(x) for x in self.coeffs))

    def __add__(self, other: "NSClass") -> "NSClass":
        return NSClass(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "NSClass") -> "NSClass":
        return NSClass(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __mul__(self, k) -> "NSClass":
        return NSClass(tuple(k * x for x in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self) -> "NSClass":
        return NSClass(tuple(-x for x in self.coeffs))

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return all_exact(self.coeffs)


def _as_class(cls) -> NSClass:
    return cls if isinstance(cls, NSClass) else NSClass(tuple(cls))


# ---------------------------------------------------------------------------
# positivity


def _exe_invariants(cls: NSClass) -> tuple:
    a, b, c = cls.coeffs
    return a * b + b * c + c * a, a + b + c


def _nonneg(x, tol: float) -> bool:
    return x >= 0 if is_exact(x) else x >= -tol


def _pos(x, tol: float) -> bool:
    return x > 0 if is_exact(x) else x > tol


def is_nef(base: TorusBase, cls, tol: float = DEFAULT_TOL) -> bool:
    """Nef test: the two quadratic/linear inequalities on ExE, PSD otherwise."""
    cls = _as_class(cls)
    if base.kind == "ExE":
        q, s = _exe_invariants(cls)
        return _nonneg(q, tol) and _nonneg(s, tol)
    return _psd(weight_form(base, cls).matrix, strict=False, tol=tol)


def is_ample(base: TorusBase, cls, tol: float = DEFAULT_TOL) -> bool:
    """Strict version of :func:`is_nef` (interior of the nef cone)."""
    cls = _as_class(cls)
    if base.kind == "ExE":
        q, s = _exe_invariants(cls)
        return _pos(q, tol) and _pos(s, tol)
    return _psd(weight_form(base, cls).matrix, strict=True, tol=tol)


def _psd(H: tuple, strict: bool, tol: float) -> bool:
    d = len(H)
    if d == 1:
        x = H[0][0].real if isinstance(H[0][0], complex) else H[0][0]
        return _pos(x, tol) if strict else _nonneg(x, tol)
    if d == 2:
        tr, det = _trace_det(H)
        if strict:
            return _pos(tr, tol) and _pos(det, tol)
        return _nonneg(tr, tol) and _nonneg(det, tol)
    eig = np.linalg.eigvalsh(np.array(H, dtype=complex))
    return bool(eig.min() > tol) if strict else bool(eig.min() >= -tol)


def _trace_det(H: tuple) -> tuple:
    p = H[0][0].real if isinstance(H[0][0], complex) else H[0][0]
    r = H[1][1].real if isinstance(H[1][1], complex) else H[1][1]
    x = H[0][1]
    mod2 = (x.real**2 + x.imag**2) if isinstance(x, complex) else x * x
    return p + r, p * r - mod2


def nef_constraint(base: TorusBase, constant: NSClass, linear: Sequence[NSClass]) -> tuple:
    """Constraints on ``m`` for the class ``constant + sum m_k linear[k]`` to be nef.

    Returns ``(halfspaces, quads)``: for a two-dimensional base this is one
    Lorentz-type quadratic constraint with its nappe selector, for a
    one-dimensional one a single affine inequality.
    """
    k = len(linear)
    if base.kind == "ExE":
        # ab + bc + ca >= 0 and a + b + c >= 0 with a, b, c affine in m
        a, b, c = (
            (tuple(L.coeffs[i] for L in linear), constant.coeffs[i]) for i in range(3)
        )
        pieces = [
            QuadConstraint.from_product(a, b, ((0,) * k, 0)),
            QuadConstraint.from_product(b, c, ((0,) * k, 0)),
            QuadConstraint.from_product(c, a, ((0,) * k, 0)),
        ]
        sel_lin = tuple(x + y + z for x, y, z in zip(a[0], b[0], c[0]))
        quad = _sum_quads(pieces, (sel_lin, a[1] + b[1] + c[1]))
        return (), (quad,)
    if base.d == 1:
        lin = tuple(_real(weight_form(base, L).matrix[0][0]) for L in linear)
        return ((lin, _real(weight_form(base, constant).matrix[0][0])),), ()
    if base.d != 2:
        raise UnsupportedDimension("nef regions are computed for tori of dimension at most 2")
    # P R - |X|^2 >= 0 and P + R >= 0 for the 2x2 matrix [[P, X], [conj X, R]]
    Hc = weight_form(base, constant).matrix
    Hs = [weight_form(base, L).matrix for L in linear]
    P = (tuple(_real(H[0][0]) for H in Hs), _real(Hc[0][0]))
    R = (tuple(_real(H[1][1]) for H in Hs), _real(Hc[1][1]))
    X = (tuple(_real(H[0][1]) for H in Hs), _real(Hc[0][1]))
    Y = (tuple(_imag(H[0][1]) for H in Hs), _imag(Hc[0][1]))
    zero = ((0,) * k, 0)
    pieces = [
        QuadConstraint.from_product(P, R, zero),
        _neg_quad(QuadConstraint.from_product(X, X, zero)),
        _neg_quad(QuadConstraint.from_product(Y, Y, zero)),
    ]
    sel = (tuple(x + y for x, y in zip(P[0], R[0])), P[1] + R[1])
    return (), (_sum_quads(pieces, sel),)


def _real(x):
    return x.real if isinstance(x, complex) else x


def _imag(x):
    return x.imag if isinstance(x, complex) else 0


def _neg_quad(q: QuadConstraint) -> QuadConstraint:
    return QuadConstraint(
        tuple(tuple(-x for x in row) for row in q.Q), tuple(-x for x in q.p), -q.r, q.s, q.s0
    )


def _sum_quads(pieces: Sequence[QuadConstraint], sel: tuple) -> QuadConstraint:
    Q = pieces[0].Q
    p = pieces[0].p
    r = pieces[0].r
    for q in pieces[1:]:
        Q = tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(Q, q.Q))
        p = tuple(x + y for x, y in zip(p, q.p))
        r = r + q.r
    norm = lambda v: normalize_scalar(v)  # noqa: E731
    return QuadConstraint(
        tuple(tuple(norm(x) for x in row) for row in Q),
        tuple(norm(x) for x in p),
        norm(r),
        tuple(norm(x) for x in sel[0]),
        norm(sel[1]),
    )


# ---------------------------------------------------------------------------
# coordinates and intersection numbers on ExE


def to_l_basis(cls) -> tuple:
    """Coordinates ``(x, y, z)`` in the basis where nef means ``z^2 >= x^2 + y^2, z >= 0``.

    The basis vectors are ``(f1 + f2 - 2 delta) / 6``, ``sqrt(3) (f2 - f1) / 6``
    and ``(f1 + f2 + delta) / 6``. The middle coordinate carries a factor
    ``sqrt(3)`` and is therefore returned as a float unless it vanishes.
    """
    a, b, c = _as_class(cls).coeffs
    x = a + b - 2 * c
    yr = b - a
    y = 0 if yr == 0 else SQRT3 * yr
    z = 2 * (a + b + c)
    return (normalize_scalar(x), y, normalize_scalar(z))


def from_l_basis(coords: Sequence) -> NSClass:
    """Inverse of :func:`to_l_basis`."""
    x, y, z = coords
    yr = 0 if y == 0 else y / SQRT3
    if all_exact((x, yr, z)):
        x, yr, z = Fraction(x), Fraction(yr), Fraction(z)
    return NSClass(((x - 3 * yr + z) / 6, (x + 3 * yr + z) / 6, (-2 * x + z) / 6))


def self_intersection(base: TorusBase, cls) -> Number:
    """``L . L`` on ExE, where the three basis curves meet pairwise once."""
    if base.kind != "ExE":
        raise UnsupportedDimension("intersection numbers are implemented for ExE")
    q, _ = _exe_invariants(_as_class(cls))
    return normalize_scalar(2 * q)


# ---------------------------------------------------------------------------
# hermitian forms


@dataclass(frozen=True)
class HermitianRep:
    """A hermitian matrix, the curvature form of a flat-normalized metric."""

    matrix: tuple = field(default_factory=tuple)

    @property
    def d(self) -> int:
        return len(self.matrix)

    def is_psd(self, tol: float = DEFAULT_TOL) -> bool:
        return _psd(self.matrix, strict=False, tol=tol)


def weight_form(base: TorusBase, cls) -> HermitianRep:
    """Hermitian matrix of a class, linear in the class coefficients."""
    cls = _as_class(cls)
    if len(cls) != base.ns_rank:
        raise ValueError(f"class has {len(cls)} coefficients, base expects {base.ns_rank}")
    d = base.d
    M = [[0] * d for _ in range(d)]
    for coeff, form in zip(cls.coeffs, base.forms):
        for i in range(d):
            for j in range(d):
                M[i][j] = M[i][j] + coeff * form[i][j]
    return HermitianRep(tuple(tuple(normalize_scalar(x) if not isinstance(x, complex) else x for x in row) for row in M))


def evaluate(rep: HermitianRep, z: Sequence) -> float:
    """The real number ``z H conj(z)^T``."""
    total = 0j
    for i, zi in enumerate(z):
        for j, zj in enumerate(z):
            total += complex(zi) * complex(rep.matrix[i][j]) * complex(zj).conjugate()
    return total.real


def calibrate_forms(pairs: Sequence[tuple], ns_rank: int = 3) -> tuple:
    """Solve for basis hermitian forms from ``(class, matrix)`` pairs.

    Each matrix entry is linear in the class coefficients, so every entry
    gives a small linear system. A square subsystem of independent classes is
    solved exactly and every remaining pair is then checked.

    Raises InconsistentCalibration when the classes do not span or when some
    pair disagrees with the solution.
    """
    classes = [tuple(_as_class(c).coeffs) for c, _ in pairs]
    mats = [m for _, m in pairs]
    chosen: list[int] = []
    for i, c in enumerate(classes):
        trial = [classes[k] for k in chosen + [i]]
        if _rank(trial) == len(trial):
            chosen.append(i)
        if len(chosen) == ns_rank:
            break
    if len(chosen) < ns_rank:
        raise InconsistentCalibration("the classes do not span the Néron–Severi group")
    d = len(mats[0])
    forms = [[[0] * d for _ in range(d)] for _ in range(ns_rank)]
    A = [classes[k] for k in chosen]
    for i in range(d):
        for j in range(d):
            sol = solve_linear(A, [mats[k][i][j] for k in chosen])
            for r in range(ns_rank):
                forms[r][i][j] = sol[r]
    for c, m in zip(classes, mats):
        for i in range(d):
            for j in range(d):
                val = sum(cr * forms[r][i][j] for r, cr in enumerate(c))
                if val != m[i][j]:
                    raise InconsistentCalibration(
                        f"class {c} predicts entry {val} at ({i},{j}), expected {m[i][j]}"
                    )
    return tuple(tuple(tuple(normalize_scalar(x) for x in row) for row in f) for f in forms)


def _rank(rows: Sequence[Sequence]) -> int:
    M = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(M[0]) if M else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][col] != 0:
                f = M[r][col] / M[rank][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank
