"""Acceptance checks, one PASS/FAIL line each.

Run under pytest (lines appear in the verbose log) or directly with
``python3 tests/test_acceptance.py`` for the bare report.
"""

import math
import random
import sys
import time
from fractions import Fraction

import pytest

from minsing.bundle import ChartPoint, box_nef
from minsing.envelope import glue_check, psi_sigma, section_envelope_oracle, singularity_germ
from minsing.fixtures import SECTION_CHARTS, pentagon_bundle, triangle_bundle, triangle_alpha, nakayama, nakayama_symmetric, named_point
from minsing.geometry import Cone, contains, corners, dominates_on_cone, double_overline
from minsing.multiplier import (
    Monomial,
    in_multiplier_ideal,
    integrability_oracle,
    jumping_numbers,
    lct,
    monomial_threshold,
    section_count,
)
from minsing.positivity import Polyhedrality, lelong_number, negative_part, negative_part_in_chart, nnef_locus, zariski_polyhedrality

SQRT2 = math.sqrt(2)
FIXTURES = {"nakayama": nakayama(2), "pentagon": pentagon_bundle(1, 2), "triangle": triangle_bundle()}


def nakayama_jump_formula(a, T):
    vals = set()
    for p in range(1, 2 * T + 2):
        for q in range(p):
            if (p - q) % 2 == 0:
                v = (p + math.sqrt(2 * p * p * a * a - q * q)) / 2
                if v <= T:
                    vals.add(v)
    return sorted(vals)


def random_point(rng, zero_prob=0.0):
    sigma = rng.randrange(3)
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


def line(number, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"


# ---------------------------------------------------------------------------


def check_lct_nakayama(make=nakayama, label="literal classes"):
    parts, ok = [], True
    for a in (2, 3, 5):
        problem = make(a)
        start = time.perf_counter()
        value = float(lct(problem, named_point(problem, "P(L0)")))
        elapsed = time.perf_counter() - start
        good = abs(value - (SQRT2 * a + 1)) <= 1e-6 and elapsed < 1.0
        ok &= good
        parts.append(f"a={a} lct={value:.9f} want={SQRT2 * a + 1:.9f} {elapsed:.3f}s")
    return ok, f"Nakayama lct, {label}: " + "; ".join(parts)


def check_jumps_nakayama(make=nakayama, label="literal classes"):
    problem = make(2)
    p = named_point(problem, "P(L0)")
    got = [float(v) for v in jumping_numbers(problem, p, 12).values]
    want = nakayama_jump_formula(2, 12)
    same = len(got) == len(want) and all(abs(g - w) <= 1e-6 for g, w in zip(got, want))
    irrational = any(abs(v - round(v)) > 1e-6 for v in got)
    first = bool(got) and abs(got[0] - float(lct(problem, p))) <= 1e-12
    ok = same and irrational and first
    return ok, (
        f"Nakayama jumps to 12, {label}: got {len(got)} values starting "
        f"{[round(v, 6) for v in got[:4]]}, formula has {len(want)} starting {[round(v, 6) for v in want[:4]]}"
    )


def check_pentagon():
    problem = FIXTURES["pentagon"]
    verts = set(corners(box_nef(problem)))
    want = {(1, 0), (0, 1), (0, Fraction(1, 2)), (Fraction(1, 6), Fraction(1, 6)), (Fraction(1, 2), 0)}
    exact = all(isinstance(x, (int, Fraction)) for v in verts for x in v)
    p = named_point(problem, "P(L0)")
    value = lct(problem, p)
    spectrum = jumping_numbers(problem, p, 20).values
    expect = sorted({2 * a + 2 * (a + b) for a in range(1, 11) for b in range(a, 11)} & set(range(21)))
    periodic = all(v + 12 in spectrum for v in spectrum if 6 <= v and v + 12 <= 20)
    verdict = zariski_polyhedrality(problem).verdict
    ok = verts == want and exact and value == 6 and type(value) is int and spectrum == expect and periodic
    ok &= verdict is Polyhedrality.RATIONAL_POLYHEDRAL
    return ok, f"pentagon vertices {sorted(verts)}, lct {value}, jumps {spectrum}, period 12 {periodic}, {verdict.value}"


def check_triangle():
    problem = FIXTURES["triangle"]
    verts = sorted(corners(box_nef(problem)), key=lambda v: (float(v[0]), float(v[1])))
    want = [(0, 0), (0, 2 * math.sqrt(6) / 5), (1, 0)]
    close = len(verts) == 3 and all(
        abs(float(a) - b) <= 1e-9 for v, w in zip(verts, want) for a, b in zip(v, w)
    )
    value = float(lct(problem, named_point(problem, "P(L2)")))
    target = 1 + 1 / triangle_alpha()
    verdict = zariski_polyhedrality(problem).verdict
    ok = close and abs(value - target) <= 1e-6 and verdict is Polyhedrality.NON_POLYHEDRAL_OR_IRRATIONAL
    return ok, f"triangle vertices {[tuple(round(float(x), 12) for x in v) for v in verts]}, lct {value:.9f} want {target:.9f}, {verdict.value}"


def check_non_nef():
    expected = {"nakayama": "P(L0)", "pentagon": "P(L0)", "triangle": "P(L2)"}
    ok, parts = True, []
    for name, problem in FIXTURES.items():
        mc = problem.fan.max_cones[SECTION_CHARTS[expected[name]]]
        positive = [s.rays for s in nnef_locus(problem).positive]
        neg = negative_part(problem)
        charts = [negative_part_in_chart(problem, k) for k in range(len(problem.fan.max_cones))]
        zero = all(c == 0 for c in neg.values())
        sigma_free = all(neg[r] == c for chart in charts for r, c in chart.items())
        good = len(positive) == 1 and set(positive[0]) == set(mc) and zero and sigma_free
        ok &= good
        parts.append(f"{name} locus {positive} negative part {list(neg.values())}")
    return ok, "non-nef loci and negative parts: " + "; ".join(parts)


def check_oracles():
    start = time.perf_counter()
    rng = random.Random(2024)
    cones = [Cone(((1, 0), (0, 1))), Cone(((1, 0), (1, 1))), Cone(((1, 1), (0, 1))), Cone(((1, 0), (2, 1))), Cone(((2, 1), (1, 1))), Cone(((-1, -1), (1, 0)))]
    agree_a = 0
    for _ in range(100):
        sigma = rng.choice(cones)
        pts = []
        while len(pts) < rng.randint(1, 5):
            pt = (Fraction(rng.randint(-6, 12), rng.randint(1, 3)), Fraction(rng.randint(-6, 12), rng.randint(1, 3)))
            if all(pt[0] * g[0] + pt[1] * g[1] >= 0 for g in sigma.generators):
                pts.append(pt)
        m = (Fraction(rng.randint(-4, 14), rng.randint(1, 3)), Fraction(rng.randint(-4, 14), rng.randint(1, 3)))
        agree_a += contains(double_overline(pts, sigma), m) == dominates_on_cone(pts, sigma, m)

    agree_b, total_b = 0, 0
    for name, problem in FIXTURES.items():
        origins = [named_point(problem, label) for label in SECTION_CHARTS]
        samples = []
        for _ in range(80):
            k = rng.randrange(3)
            p = origins[k]
            mono = Monomial((rng.randrange(4), rng.randrange(4)))
            shifted = tuple(mono.exponents[j] + 1 for j in p.I)
            t_star = float(monomial_threshold(singularity_germ(problem, p), shifted))
            t = rng.uniform(0.2, 1.6) * t_star if math.isfinite(t_star) else rng.uniform(0.1, 20.0)
            samples.append((k, mono, t))
        # jumps only matter up to the largest sampled t
        spectra = [
            jumping_numbers(problem, p, max([t for j, _, t in samples if j == k], default=1.0) + 1).values
            for k, p in enumerate(origins)
        ]
        done = 0
        for k, mono, t in samples:
            jumps = spectra[k]
            if done == 50 or (jumps and min(abs(t - float(j)) for j in jumps) <= 1e-3):
                continue
            p = origins[k]
            agree_b += integrability_oracle(problem, p, mono, t).converges == in_multiplier_ideal(problem, p, mono, t)
            done += 1
            total_b += 1
    elapsed = time.perf_counter() - start
    ok = agree_a == 100 and agree_b == total_b and elapsed < 60
    return ok, f"closure forms agree {agree_a}/100; integrability agrees {agree_b}/{total_b}; {elapsed:.1f}s"


def check_envelope():
    rng = random.Random(99)
    worst_glue = 0.0
    for problem in FIXTURES.values():
        for _ in range(1000):
            p = random_point(rng)
            worst_glue = max(worst_glue, max(glue_check(problem, p, k) for k in range(3)))
    monotone, below, gap = True, True, 0.0
    for name, problem in FIXTURES.items():
        for _ in range(20):
            p = random_point(rng)
            vals = [section_envelope_oracle(problem, nu, p) for nu in (10, 100, 1000)]
            psi = float(psi_sigma(problem, p))
            monotone &= vals[0] <= vals[1] + 1e-12 and vals[1] <= vals[2] + 1e-12
            below &= vals[2] <= psi + 1e-9
            if name == "nakayama":
                gap = max(gap, psi - vals[2])
    ok = worst_glue <= 1e-9 and monotone and below and gap < 0.05
    return ok, f"glue deviation {worst_glue:.2e}; sections monotone {monotone}, below envelope {below}, Nakayama gap {gap:.4f}"


def check_lelong_equivalence():
    rng = random.Random(5)
    exceptions = 0
    for problem in FIXTURES.values():
        for _ in range(200):
            p = random_point(rng, zero_prob=0.5)
            exceptions += (lelong_number(problem, p) > 0) != (psi_sigma(problem, p) == -math.inf)
    return exceptions == 0, f"lelong > 0 iff weight is -inf at 600 points, {exceptions} exceptions"


def check_sections():
    res = section_count(FIXTURES["pentagon"])
    ok = res.total == 18 and res.per_point == [((0, 1), 9), ((1, 0), 9)]
    return ok, f"pentagon sections {res.per_point} total {res.total}"


CHECKS = [
    ("1", check_lct_nakayama),
    ("1s", lambda: check_lct_nakayama(nakayama_symmetric, "symmetric classes")),
    ("2", check_jumps_nakayama),
    ("2s", lambda: check_jumps_nakayama(nakayama_symmetric, "symmetric classes")),
    ("3", check_pentagon),
    ("4", check_triangle),
    ("5", check_non_nef),
    ("6", check_oracles),
    ("7", check_envelope),
    ("8", check_lelong_equivalence),
    ("9", check_sections),
]


@pytest.mark.parametrize("number, check", CHECKS, ids=[n for n, _ in CHECKS])
def test_criterion(number, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, check in CHECKS:
        ok, detail = check()
        failures += not ok
        print(line(number, ok, detail), flush=True)
    sys.exit(1 if failures else 0)
