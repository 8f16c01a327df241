import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minsing.bundle import ChartPoint, box_nef
from minsing.envelope import (
    Comparison,
    Germ,
    compare_singularity,
    expected_transition,
    glue_check,
    psi_from_logs,
    psi_sigma,
    psi_sigma_m,
    scaled_lattice_points,
    section_envelope_oracle,
    singularity_germ,
)
from minsing.errors import NefViolation
from minsing.fixtures import pentagon_bundle, triangle_bundle, nakayama, named_point
from minsing.geometry import contains, corners
from minsing.positivity import lelong_number

PROBLEMS = {"nakayama": nakayama(2), "pentagon": pentagon_bundle(), "triangle": triangle_bundle()}


def random_point(rng, sigma=None, zero_prob=0.0):
    sigma = rng.randrange(3) if sigma is None else sigma
    x = []
    for _ in range(2):
        if rng.random() < zero_prob:
            x.append(0)
        else:
            r = math.exp(rng.uniform(-4, 1))
            a = rng.uniform(0, 2 * math.pi)
            x.append(r * complex(math.cos(a), math.sin(a)))
    z = (complex(rng.gauss(0, 1), rng.gauss(0, 1)), complex(rng.gauss(0, 1), rng.gauss(0, 1)))
    return ChartPoint(sigma, tuple(x), z)


class TestEvaluation:
    def test_singular_at_non_nef_point(self, pentagon):
        assert psi_sigma(pentagon, named_point(pentagon, "P(L0)")) == -math.inf

    def test_finite_at_nef_section(self, pentagon):
        assert psi_sigma(pentagon, named_point(pentagon, "P(L1)")) == 0

    def test_unit_circle_value(self, pentagon):
        # |x_j| = 1 and z = 0: every section has weight 0
        assert psi_sigma(pentagon, ChartPoint(0, (1, 1j))) == 0

    def test_single_section_weight(self, pentagon):
        p = ChartPoint(0, (0.5, 0.25))
        assert psi_sigma_m(pentagon, p, (1, 0)) == pytest.approx(2 * math.log(0.5))
        with pytest.raises(NefViolation):
            psi_sigma_m(pentagon, p, (0, 0))

    @pytest.mark.parametrize("name", sorted(PROBLEMS))
    def test_envelope_dominates_every_section(self, name):
        problem = PROBLEMS[name]
        rng = random.Random(7)
        region = box_nef(problem)
        samples = [(rng.uniform(0, 1), rng.uniform(0, 1)) for _ in range(400)]
        members = [m for m in samples if contains(region, m)]
        for _ in range(20):
            p = random_point(rng)
            psi = psi_sigma(problem, p)
            best = max(psi_sigma_m(problem, p, m) for m in members)
            assert best <= psi + 1e-9

    @pytest.mark.parametrize("name", sorted(PROBLEMS))
    def test_envelope_is_convex_in_log_moduli(self, name):
        problem = PROBLEMS[name]
        rng = random.Random(1)
        for _ in range(50):
            a = (rng.uniform(-5, 2), rng.uniform(-5, 2))
            b = (rng.uniform(-5, 2), rng.uniform(-5, 2))
            mid = tuple((x + y) / 2 for x, y in zip(a, b))
            fa, fb, fm = (float(psi_from_logs(problem, 0, v)) for v in (a, b, mid))
            assert fm <= (fa + fb) / 2 + 1e-9


class TestGluing:
    @pytest.mark.parametrize("name", sorted(PROBLEMS))
    @given(seed=st.integers(0, 10**6), target=st.integers(0, 2))
    def test_transition_law(self, name, seed, target):
        problem = PROBLEMS[name]
        p = random_point(random.Random(seed))
        assert glue_check(problem, p, target) <= 1e-9

    def test_transition_is_antisymmetric(self, nak):
        p = ChartPoint(0, (0.3, 0.7))
        from minsing.bundle import to_chart

        q = to_chart(nak.fan, p, 2)
        assert expected_transition(nak, p, 2) == pytest.approx(-expected_transition(nak, q, 0))


class TestGerms:
    def test_pentagon_germ(self, pentagon):
        germ = singularity_germ(pentagon, named_point(pentagon, "P(L0)"))
        assert set(corners(germ.region.base())) >= {
            (Fraction(1, 2), 0), (Fraction(1, 6), Fraction(1, 6)), (0, Fraction(1, 2))
        }
        ref = Germ.from_exponents([(Fraction(1, 2), 0), (Fraction(1, 6), Fraction(1, 6)), (0, Fraction(1, 2))])
        assert compare_singularity(germ, ref) is Comparison.EQUIVALENT

    def test_trivial_germ_at_smooth_point(self, pentagon):
        assert singularity_germ(pentagon, ChartPoint(0, (0.5, 0.5))).trivial

    def test_divisor_germ_is_interval(self, pentagon):
        germ = singularity_germ(pentagon, ChartPoint(0, (0, 0.5)))
        assert germ.indices == (0,)
        assert germ.support((1,)) == 0

    def test_more_singular_means_larger_support(self):
        mild = Germ.from_exponents([(1, 0), (0, 1)])
        strong = Germ.from_exponents([(2, 0), (0, 2)])
        assert compare_singularity(strong, mild) is Comparison.FIRST_MORE_SINGULAR
        assert compare_singularity(mild, strong) is Comparison.SECOND_MORE_SINGULAR
        assert compare_singularity(mild, mild) is Comparison.EQUIVALENT

    def test_incomparable(self):
        a = Germ.from_exponents([(2, 0), (0, 1)])
        b = Germ.from_exponents([(1, 0), (0, 2)])
        assert compare_singularity(a, b) is Comparison.INCOMPARABLE

    def test_trivial_versus_singular(self):
        strong = Germ.from_exponents([(1, 0), (0, 1)])
        trivial = Germ((), None)
        assert compare_singularity(strong, trivial) is Comparison.FIRST_MORE_SINGULAR
        assert compare_singularity(trivial, trivial) is Comparison.EQUIVALENT


class TestSectionOracle:
    def test_lattice_points_of_scaled_box(self, pentagon):
        pts = {tuple(p) for p in scaled_lattice_points(box_nef(pentagon), 1)}
        assert pts == {(1, 0), (0, 1)}
        pts6 = {tuple(p) for p in scaled_lattice_points(box_nef(pentagon), 6)}
        assert (1, 1) in pts6 and (0, 0) not in pts6

    @pytest.mark.parametrize("name", sorted(PROBLEMS))
    def test_monotone_and_below_envelope(self, name):
        problem = PROBLEMS[name]
        rng = random.Random(3)
        for _ in range(5):
            p = random_point(rng)
            vals = [section_envelope_oracle(problem, nu, p) for nu in (10, 100, 1000)]
            psi = float(psi_sigma(problem, p))
            assert vals[0] <= vals[1] + 1e-12 <= vals[2] + 2e-12
            assert vals[2] <= psi + 1e-9


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_lelong_positive_iff_weight_is_minus_infinity(name):
    problem = PROBLEMS[name]
    rng = random.Random(4)
    for _ in range(60):
        p = random_point(rng, zero_prob=0.5)
        assert (lelong_number(problem, p) > 0) == (psi_sigma(problem, p) == -math.inf)
