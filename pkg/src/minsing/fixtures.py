"""Projective plane bundles over ExE used as worked examples.

All of them live on ``P(L0 + L1 + L2)`` with the fan of the projective plane
(rays ``v0 = -e1 - e2``, ``v1 = e1``, ``v2 = e2``) and ``h`` equal to ``-1``
on ``v0`` and ``0`` elsewhere, so the bundle is the tautological ``O(1)``.
Point names ``P(L0)``, ``P(L1)``, ``P(L2)`` refer to the three torus-fixed
sections, which are the origins of the three charts.
"""

from __future__ import annotations

import json
import math

from .bundle import BundleProblem, ChartPoint, Fan
from .torus import EXE, NSClass, TorusBase

PLANE_FAN = Fan(
    rays=((-1, -1), (1, 0), (0, 1)),
    max_cones=((1, 2), (2, 0), (0, 1)),
    labels=("sigma1", "sigma2", "sigma3"),
)
PLANE_H = (-1, 0, 0)

# the chart in which each summand's section is the origin
SECTION_CHARTS = {"P(L0)": 0, "P(L1)": 1, "P(L2)": 2}


def plane_bundle(L0, L1, L2, base: TorusBase = EXE) -> BundleProblem:
    """``O(1)`` on the projectivization of ``L0 + L1 + L2``."""
    L0, L1, L2 = (NSClass(tuple(c)) for c in (L0, L1, L2))
    return BundleProblem(base, PLANE_FAN, (L1 - L0, L2 - L0), L0, PLANE_H)


def nakayama(a: int = 2) -> BundleProblem:
    """Nakayama's bundle with parameter ``a > 1``."""
    return plane_bundle((2, -4, 2), (a - 1, a - 1, a + 2), (a + 3, a - 3, a))


def nakayama_symmetric(a: float = 2) -> BundleProblem:
    """Real classes whose nef box is ``a^2 (s + t)^2 >= (1 - s)^2 + (1 - t)^2``.

    The integral Nakayama classes give ``3 (1 - s)^2`` in place of
    ``(1 - s)^2``; dividing the second coordinate of the l-basis by
    ``sqrt(3)`` restores the symmetric curve. The classes are irrational, so
    this problem is always approximate.
    """
    r3 = math.sqrt(3.0)
    return plane_bundle((r3 - 1, -1 - r3, 2), (a - 1, a - 1, a + 2), (a + r3, a - r3, a))


def pentagon_bundle(u: int = 1, v: int = 2) -> BundleProblem:
    """A bundle whose nef box is a rational pentagon."""
    return plane_bundle((-u, -u, -u), (u + v, u + v, -2 * u + v), (-u + v, -u + v, 2 * u + v))


def triangle_bundle() -> BundleProblem:
    """A bundle whose nef box is a triangle with one irrational vertex."""
    return plane_bundle((4, 4, 1), (0, 0, 0), (-1, 9, 1))


def triangle_alpha() -> float:
    """``1 - 2 sqrt(6) / 5``, the exponent of the irrational vertex."""
    return 1 - 2 * math.sqrt(6) / 5


FIXTURES = {
    "nakayama": nakayama,
    "nakayama-symmetric": nakayama_symmetric,
    "pentagon": pentagon_bundle,
    "triangle": triangle_bundle,
}


def named_point(problem: BundleProblem, name: str) -> ChartPoint:
    """Origin of a chart by section name (``P(L0)`` ...) or cone label."""
    n, d = problem.n, problem.d
    if name in SECTION_CHARTS:
        sigma = SECTION_CHARTS[name]
    elif problem.fan.labels and name in problem.fan.labels:
        sigma = problem.fan.labels.index(name)
    else:
        raise KeyError(name)
    return ChartPoint(sigma, (0,) * n, (0,) * d)


def parse_point(problem: BundleProblem, text: str) -> ChartPoint:
    """A point given by name or as JSON ``{"sigma": k, "x": [...], "z": [...]}``.

    Complex coordinates may be written as strings such as ``"0.5+0.1j"``.
    """
    text = text.strip()
    if not text.startswith("{"):
        return named_point(problem, text)
    data = json.loads(text)
    sigma = data["sigma"]
    if isinstance(sigma, str):
        sigma = problem.fan.labels.index(sigma) if problem.fan.labels and sigma in problem.fan.labels else int(sigma)
    x = tuple(complex(v) if isinstance(v, str) else v for v in data["x"])
    z = tuple(complex(v) if isinstance(v, str) else v for v in data.get("z", [0] * problem.d))
    return ChartPoint(int(sigma), x, z)


__all__ = [
    "PLANE_FAN",
    "PLANE_H",
    "FIXTURES",
    "pentagon_bundle",
    "triangle_bundle",
    "triangle_alpha",
    "named_point",
    "nakayama",
    "nakayama_symmetric",
    "parse_point",
    "plane_bundle",
]
