import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from minsing.bundle import ChartPoint
from minsing.envelope import Germ, singularity_germ
from minsing.errors import ZeroFunction
from minsing.fixtures import pentagon_bundle, triangle_alpha, nakayama, nakayama_symmetric, named_point, plane_bundle
from minsing.geometry import lattice_points
from minsing.multiplier import (
    Monomial,
    ideal_generators,
    in_multiplier_ideal,
    integrability_oracle,
    jumping_numbers,
    lct,
    monomial_threshold,
    newton_set,
    openness_check,
    section_count,
)

from conftest import SQRT2


def nakayama_formula(a, T):
    vals = set()
    for p in range(1, 2 * T + 2):
        for q in range(0, p):
            if (p - q) % 2 == 0:
                v = (p + math.sqrt(2 * p * p * a * a - q * q)) / 2
                if v <= T:
                    vals.add(round(v, 12))
    return sorted(vals)


class TestNewtonSet:
    def test_constant(self, pentagon):
        assert newton_set(pentagon, named_point(pentagon, "P(L0)"), Monomial((0, 0))) == [(0, 0)]

    def test_single_monomial(self, pentagon):
        assert newton_set(pentagon, named_point(pentagon, "P(L0)"), Monomial((2, 1))) == [(2, 1)]

    def test_sum(self, pentagon):
        f = [Monomial((2, 0)), Monomial((0, 3))]
        assert newton_set(pentagon, named_point(pentagon, "P(L0)"), f) == [(2, 0), (0, 3)]

    def test_other_chart_uses_dual_basis(self, pentagon):
        # the chart of P(L1) has rays v2 = e2, v0 = -e1 - e2
        assert newton_set(pentagon, named_point(pentagon, "P(L1)"), Monomial((1, 0))) == [(-1, 1)]

    def test_zero_function(self, pentagon):
        with pytest.raises(ZeroFunction):
            newton_set(pentagon, named_point(pentagon, "P(L0)"), [])
        with pytest.raises(ZeroFunction):
            in_multiplier_ideal(pentagon, named_point(pentagon, "P(L0)"), [], 1)


class TestMembership:
    @pytest.mark.parametrize("name", ["nak", "nak_sym"])
    def test_nakayama_constant(self, name, request):
        problem = request.getfixturevalue(name)
        p = named_point(problem, "P(L0)")
        assert in_multiplier_ideal(problem, p, Monomial((0, 0)), 1)
        assert not in_multiplier_ideal(problem, p, Monomial((0, 0)), 4)

    def test_at_lct_constant_is_excluded(self, pentagon):
        p = named_point(pentagon, "P(L0)")
        assert in_multiplier_ideal(pentagon, p, Monomial((0, 0)), Fraction(599, 100))
        assert not in_multiplier_ideal(pentagon, p, Monomial((0, 0)), 6)

    def test_sum_needs_every_monomial(self, pentagon):
        p = named_point(pentagon, "P(L0)")
        assert not in_multiplier_ideal(pentagon, p, [Monomial((1, 0)), Monomial((0, 0))], 7)
        assert in_multiplier_ideal(pentagon, p, [Monomial((1, 0)), Monomial((0, 1))], 7)

    def test_smooth_point_has_trivial_ideal(self, pentagon):
        assert in_multiplier_ideal(pentagon, ChartPoint(0, (0.5, 0.5)), Monomial((0, 0)), 1000)

    def test_divisor_point_with_zero_lelong_is_trivial(self, pentagon):
        p = ChartPoint(0, (0, 0.5))
        assert in_multiplier_ideal(pentagon, p, Monomial((0, 0)), 50)
        assert integrability_oracle(pentagon, p, Monomial((0, 0)), 50).converges


class TestGenerators:
    def test_below_lct_is_unit_ideal(self, pentagon):
        assert ideal_generators(pentagon, named_point(pentagon, "P(L0)"), 5) == [Monomial((0, 0))]

    def test_pentagon_at_lct(self, pentagon):
        gens = ideal_generators(pentagon, named_point(pentagon, "P(L0)"), 6)
        assert gens == [Monomial((0, 1)), Monomial((1, 0))]

    @pytest.mark.parametrize("name", ["nak", "nak_sym"])
    def test_match_interior_lattice_scan(self, name, request):
        problem = request.getfixturevalue(name)
        p = named_point(problem, "P(L0)")
        t = 4
        gens = ideal_generators(problem, p, t)
        assert gens and gens != [Monomial((0, 0))]
        region = singularity_germ(problem, p).region.scaled(t)
        box = ((1, 1), (12, 12))
        inside = {q for q in lattice_points(region, interior_only=True, box=box)}
        for a, b in itertools.product(range(0, 11), repeat=2):
            member = (a + 1, b + 1) in inside
            generated = any(g.divides(Monomial((a, b))) for g in gens)
            assert member == generated
            assert member == in_multiplier_ideal(problem, p, Monomial((a, b)), t)

    @given(st.floats(1.0, 14.0), st.floats(1.0, 14.0))
    def test_monotone_in_t(self, t1, t2):
        problem = pentagon_bundle()
        p = named_point(problem, "P(L0)")
        lo, hi = sorted((t1, t2))
        if any(abs(t - 2 * k) < 1e-6 for t in (lo, hi) for k in range(20)):
            return
        small = ideal_generators(problem, p, hi)
        big = ideal_generators(problem, p, lo)
        for g in small:
            assert any(h.divides(g) for h in big)


class TestJumps:
    def test_pentagon_spectrum(self, pentagon):
        spectrum = jumping_numbers(pentagon, named_point(pentagon, "P(L0)"), 20)
        expect = sorted({2 * p + 2 * (p + q) for p in range(1, 10) for q in range(p, 10)} & set(range(21)))
        assert spectrum.values == expect
        assert all(isinstance(v, int) for v in spectrum.values)

    def test_pentagon_period(self, pentagon):
        values = jumping_numbers(pentagon, named_point(pentagon, "P(L0)"), 20).values
        assert all(v + 12 in values for v in values if v + 12 <= 20)

    def test_symmetric_nakayama_formula(self, nak_sym):
        spectrum = jumping_numbers(nak_sym, named_point(nak_sym, "P(L0)"), 12)
        expect = nakayama_formula(2, 12)
        assert len(spectrum.values) == len(expect)
        for got, want in zip(spectrum.values, expect):
            assert got == pytest.approx(want, abs=1e-9)

    def test_triangle_is_a_sumset(self, triangle):
        a = triangle_alpha()
        spectrum = jumping_numbers(triangle, named_point(triangle, "P(L2)"), 105)
        expect = sorted(p / a + q for p in range(1, 4) for q in range(1, 106) if p / a + q <= 105)
        assert len(spectrum.values) == len(expect)
        for got, want in zip(spectrum.values, expect):
            assert got == pytest.approx(want, abs=1e-8)
        assert jumping_numbers(triangle, named_point(triangle, "P(L2)"), 3).values == []

    def test_realizing_points_are_recorded(self, pentagon):
        spectrum = jumping_numbers(pentagon, named_point(pentagon, "P(L0)"), 12)
        assert dict(spectrum.entries)[12] == [(1, 4), (2, 2), (4, 1)]

    @pytest.mark.parametrize("name", ["nak", "nak_sym", "pentagon"])
    def test_lct_is_first_jump(self, name, request):
        problem = request.getfixturevalue(name)
        p = named_point(problem, "P(L0)")
        values = jumping_numbers(problem, p, 15).values
        assert values[0] == lct(problem, p)
        assert values == sorted(values) and len(set(values)) == len(values)

    @pytest.mark.parametrize("nu", [2, 3, 7])
    def test_thresholds_scale(self, nak_sym, nu):
        germ = singularity_germ(nak_sym, named_point(nak_sym, "P(L0)"))
        scaled = Germ(germ.indices, germ.region.scaled(nu))
        for n in [(1, 1), (2, 1), (1, 3), (4, 2)]:
            assert float(monomial_threshold(scaled, n)) == pytest.approx(float(monomial_threshold(germ, n)) / nu, rel=1e-12)


class TestLct:
    @pytest.mark.parametrize("a", [2, 3, 5])
    def test_symmetric_nakayama(self, a):
        problem = nakayama_symmetric(a)
        assert lct(problem, named_point(problem, "P(L0)")) == pytest.approx(SQRT2 * a + 1, abs=1e-9)

    @pytest.mark.parametrize("a", [2, 3, 5])
    def test_literal_nakayama(self, a):
        # the classes as given place the tangency at a + 1
        problem = nakayama(a)
        assert lct(problem, named_point(problem, "P(L0)")) == pytest.approx(a + 1, abs=1e-9)

    @pytest.mark.parametrize("u, v", [(1, 2), (1, 1), (2, 3)])
    def test_pentagon_family(self, u, v):
        problem = pentagon_bundle(u, v)
        assert lct(problem, named_point(problem, "P(L0)")) == 2 * (1 + Fraction(v, u))

    def test_triangle(self, triangle):
        assert lct(triangle, named_point(triangle, "P(L2)")) == pytest.approx(1 + 1 / triangle_alpha(), abs=1e-9)

    def test_no_vanishing_coordinates(self, pentagon):
        assert lct(pentagon, ChartPoint(0, (0.5, 0.5))) == math.inf


class TestOpenness:
    def test_half_lct(self, nak_sym):
        p = named_point(nak_sym, "P(L0)")
        res = openness_check(nak_sym, p, Monomial((0, 0)), (2 * SQRT2 + 1) / 2)
        assert res.member and res.passes and res.smallest_preserved == 1e-6

    def test_just_below_lct(self, nak_sym):
        p = named_point(nak_sym, "P(L0)")
        res = openness_check(nak_sym, p, Monomial((0, 0)), 2 * SQRT2 + 1 - 1e-4)
        assert res.member and res.preserved[1e-6]

    def test_above_lct_is_vacuous(self, pentagon):
        res = openness_check(pentagon, named_point(pentagon, "P(L0)"), Monomial((0, 0)), 7)
        assert not res.member and res.passes


class TestSections:
    def test_pentagon(self, pentagon):
        res = section_count(pentagon)
        assert res.total == 18
        assert res.per_point == [((0, 1), 9), ((1, 0), 9)]

    def test_empty_box(self):
        res = section_count(plane_bundle((-1, -1, -1), (-1, -1, -1), (-1, -1, -1)))
        assert res.total == 0 and res.per_point == []

    @pytest.mark.parametrize("name", ["nak", "nak_sym", "pentagon"])
    def test_counts_are_hermitian_determinants(self, name, request):
        problem = request.getfixturevalue(name)
        res = section_count(problem)
        assert res.known and res.per_point
        for m, count in res.per_point:
            a, b, c = (float(x) for x in problem.class_at(m).coeffs)
            H = np.array([[a + c, -c], [-c, b + c]])
            assert count == pytest.approx(np.linalg.det(H), abs=1e-9)
        assert res.total == sum(c for _, c in res.per_point)

    def test_literal_nakayama(self, nak):
        assert section_count(nak).per_point == [((0, 1), 3), ((1, 0), 9)]

    def test_boundary_class_is_flagged(self):
        flat = plane_bundle((1, 0, 0), (1, 0, 0), (1, 0, 0))
        res = section_count(flat)
        assert res.total is None and all(c == "BoundaryUnknown" for _, c in res.per_point)


class TestIntegrabilityOracle:
    @pytest.mark.parametrize("name", ["nak", "pentagon", "triangle"])
    def test_agrees_with_combinatorics(self, name, request):
        problem = request.getfixturevalue(name)
        rng = random.Random(17)
        point = "P(L2)" if name == "triangle" else "P(L0)"
        p = named_point(problem, point)
        germ = singularity_germ(problem, p)
        checked = 0
        while checked < 8:
            mono = Monomial((rng.randrange(4), rng.randrange(4)))
            t_star = float(monomial_threshold(germ, (mono.exponents[0] + 1, mono.exponents[1] + 1)))
            t = rng.uniform(0.2, 1.5) * t_star
            if abs(t - t_star) <= 1e-3:
                continue
            assert integrability_oracle(problem, p, mono, t).converges == in_multiplier_ideal(problem, p, mono, t)
            checked += 1
