"""Acceptance criteria 1-11, each reporting one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary. ``python tests/test_acceptance.py`` runs them directly.
"""

import json
import math
import sys

import numpy as np
import pytest

from spectrakit.bounds import max_bigcount, maincount_bound, ncc_bound, bigcount, BoundContext
from spectrakit.hypgeom import bavard_radius, collar_boundary_length
from spectrakit.interrogate import CandidateFamily, SpectrumOracle, identify
from spectrakit.mcshane import enumerate_simple_torus, mcshane_report, mu, eta
from spectrakit.spectrum import EnumerationBudget, enumerate_spectrum, isospectral_compare, merge_lengths
from spectrakit.surface import (
    FenchelNielsenSurface,
    build_genus2,
    build_one_holed_torus,
    sample_genus2,
    twist_length_function,
    twist_minimum,
    twist_solutions,
)

from oracles import free_group_spectrum, surface_group_spectrum

RESULTS = {}
CERT6 = EnumerationBudget(6.0, certified=True)
TR3 = (2 * math.acosh(1.5), 0.0, 2 * math.acosh(2.125))
SAMPLE = FenchelNielsenSurface("closed_genus2", (2.4, 2.9, 2.6), (0.3, -0.5, 0.8))
TORI = [(2.0, 0.0), (1.2, 0.7), (3.1, -1.4)]


def report(n, ok, detail):
    line = f"CRITERION {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_01_formula_fidelity():
    got = collar_boundary_length(2 * math.asinh(1))
    want = 2 * math.sqrt(2) * math.log(1 + math.sqrt(2))
    h = 1e-2
    limit = (4 * collar_boundary_length(h / 2) - collar_boundary_length(h)) / 3
    err1, err2 = abs(got - want), abs(limit - 2.0)
    report(1, err1 <= 1e-12 and err2 <= 1e-6, f"short boundary error {err1:.1e}, limit at 0 error {err2:.1e}")


def test_criterion_02_mcshane_identity():
    cutoffs = np.arange(1.0, 30.5, 0.5)
    worst_sum, monotone, deficits = 0.0, True, {}
    for x in (1.0, 2.0, 4.0):
        for length, twist in TORI:
            group = build_one_holed_torus(length, twist, x)
            sums = [mcshane_report(group, x, c).partial_sum for c in cutoffs]
            monotone &= all(b >= a for a, b in zip(sums, sums[1:]))
            worst_sum = max(worst_sum, max(sums))
            deficits[(x, length)] = 1.0 - sums[-1]
    worst = max(deficits.values())
    ok = monotone and worst_sum <= 1 + 1e-9 and worst < 1e-2
    report(2, ok, f"monotone={monotone}, max partial sum {worst_sum:.15f}, worst deficit at 30 {worst:.1e}")


def test_criterion_03_gap_properties():
    rng = np.random.default_rng(3)
    triples = rng.uniform(0.1, 10.0, size=(10**4, 3))
    bad_i = bad_ii = 0
    for x, y, z in triples:
        m = mu(x, y, z)
        bad_i += not m < eta(x, y, z)
        bad_ii += not m * math.exp((y + z) / 2) > 1
    report(3, bad_i == 0 and bad_ii == 0, f"violations: mu<eta {bad_i}, mu*e^((y+z)/2)>1 {bad_ii} of 10^4")


def test_criterion_04_pants_count():
    worst = -math.inf
    tori = [build_one_holed_torus(*TR3)] + [build_one_holed_torus(l, t, x) for x in (1.0, 2.0, 4.0) for l, t in TORI]
    for group in tori:
        lengths = [c.length for c in enumerate_simple_torus(group, 15.0)]
        # count(L) jumps only at lengths, so checking k <= e^(l_k) covers every L <= 15
        for k, l in enumerate(lengths, start=1):
            worst = max(worst, math.log(k) - l)
        worst = max(worst, math.log(max(len(lengths), 1)) - 15.0)
    report(4, worst <= 0, f"max log(count(L)) - L over {len(tori)} tori: {worst:.3f}")


def test_criterion_05_counting_lemma():
    rng = np.random.default_rng(5)
    counts = []
    for _ in range(5):
        s = enumerate_spectrum(sample_genus2(rng), EnumerationBudget(4.0, certified=True))
        counts.append(s.count(4.0))
    bound = math.exp(10)
    report(5, max(counts) <= bound, f"counts at L=4 {counts} vs e^10 = {bound:.0f}")


def _oracle_entries(lengths):
    entries, _ = merge_lengths(lengths, 1e-6)
    return entries


def _criterion6_outputs(workers):
    torus = build_one_holed_torus(*TR3)
    return {
        "torus": enumerate_spectrum(torus, CERT6, workers=workers),
        "sample": enumerate_spectrum(SAMPLE, CERT6, workers=workers),
    }


@pytest.fixture(scope="module")
def crit6():
    return _criterion6_outputs(1)


def test_criterion_06_oracle_equivalence(crit6):
    oracles = {
        "torus": _oracle_entries(free_group_spectrum(build_one_holed_torus(*TR3), 8, 6.0)),
        "sample": _oracle_entries(surface_group_spectrum(build_genus2(SAMPLE), 8, 6.0)),
    }
    details, ok = [], True
    for name, s in crit6.items():
        want = oracles[name]
        mult_ok = [m for _, m in s.entries] == [m for _, m in want]
        err = max(abs(a[0] - b[0]) for a, b in zip(s.entries, want)) if mult_ok else math.inf
        ok &= s.certified and mult_ok and err <= 1e-8
        details.append(f"{name}: {len(want)} entries, max error {err:.1e}")
    report(6, ok, "; ".join(details))


def test_criterion_07_isospectrality():
    rng = np.random.default_rng(7)
    failures, checks = 0, 0
    for i in range(20):
        fn = sample_genus2(rng)
        base = enumerate_spectrum(fn, CERT6)
        periods = fn.cuff_lengths
        shifted_all = FenchelNielsenSurface(fn.topology, periods, tuple(t + p for t, p in zip(fn.twists, periods)))
        j = i % 3
        shifted_one = fn.with_twist(j, fn.twists[j] - periods[j])
        for other in (fn.mirror(), shifted_all, shifted_one):
            same, _ = isospectral_compare(base, enumerate_spectrum(other, CERT6), 6.0, 1e-8)
            failures += not same
            checks += 1
    report(7, failures == 0, f"{checks - failures}/{checks} mirror and full-twist comparisons isospectral to 6")


TRANSVERSALS = {
    "one_holed_torus": {0: ["B", "AB", "ABB", "AAB"]},
    "closed_genus2": {0: ["B", "AB", "BD", "aBC"], 1: ["D", "CD", "BD", "cDA"], 2: ["AC", "BD", "AD", "BC", "ABCD"]},
}


def _random_triple(rng):
    if rng.random() < 0.3:
        fn = FenchelNielsenSurface("one_holed_torus", (float(rng.uniform(0.5, 3.0)),),
                                   (float(rng.uniform(-1.5, 1.5)),), float(rng.uniform(0.5, 3.0)))
        index = 0
    else:
        fn = sample_genus2(rng, cuff_range=(0.7, 3.5), twist_range=(-2.0, 2.0))
        index = int(rng.integers(3))
    word = str(rng.choice(TRANSVERSALS[fn.topology.value][index]))
    return fn, index, word


def test_criterion_08_twist_convexity():
    rng = np.random.default_rng(8)
    worst_count, mismatches, worst_residual = 0, 0, 0.0
    for _ in range(100):
        fn, index, word = _random_triple(rng)
        period = fn.cuff_lengths[index]
        f = twist_length_function(fn, word, index)
        grid = np.linspace(0.0, period, 10**4 + 1)
        vals = f(grid)
        _, f_min = twist_minimum(fn, word, index)
        lo = max(f_min, float(vals.min()) - 0.5)
        target = float(rng.uniform(lo + 1e-3, float(vals.max()) + 0.5))
        sols = twist_solutions(fn, word, target, index, window=(0.0, period))
        everywhere = twist_solutions(fn, word, target, index)
        sign = np.sign(vals - target)
        crossings = int(np.count_nonzero(sign[1:] != sign[:-1]))
        worst_count = max(worst_count, len(sols), len(everywhere))
        mismatches += crossings != len(sols)
        if sols:
            worst_residual = max(worst_residual, float(np.max(np.abs(f(np.array(sols)) - target))))
    ok = worst_count <= 2 and mismatches == 0 and worst_residual <= 1e-8
    report(8, ok, f"max solutions {worst_count}, sweep disagreements {mismatches}/100, residual {worst_residual:.1e}")


def test_criterion_09_bound_envelope():
    worst_gap = -math.inf
    for g in range(2, 1001):
        top = 3 * g - 3
        lg = math.log(g)
        f = lambda p: math.log(16) + 6 + math.log(g - 1) + p * lg
        base = ncc_bound(g) + (6 * g - 6) * f(8) + math.log(8)
        a0 = f(2) + math.log(8) + 12 * lg
        a1 = f(2) + f(14) + math.log(2)
        k0 = np.arange(top + 1)[:, None]
        k1 = np.arange(top + 1)[None, :]
        vals = np.where(k0 + k1 <= top, base + a0 * k0 + a1 * k1, -np.inf)
        best = float(vals.max())
        lib = max_bigcount(g)[0]
        if abs(best - lib) > 1e-9 * abs(lib):
            worst_gap = math.inf
            break
        probe = BoundContext(g, top // 2, top // 4, top // 2 - top // 4)
        assert bigcount(probe) == pytest.approx(base + a0 * probe.k0 + a1 * probe.k1, rel=1e-12)
        worst_gap = max(worst_gap, best - maincount_bound(g))
    gs = np.arange(2, 10**4 + 1)
    radius_ok = all(bavard_radius(int(g)) < math.log(4 * g) for g in gs)
    report(9, worst_gap <= 0 and radius_ok,
           f"max log bigcount - 154 g log g over g<=1000: {worst_gap:.2f}; R_g < log 4g for g<=10^4: {radius_ok}")


def _pool(workers):
    rng = np.random.default_rng(10)
    surfaces = [sample_genus2(rng) for _ in range(24)]
    surfaces += [s.mirror() for s in surfaces[:6]]
    return [enumerate_spectrum(s, CERT6, workers=workers) for s in surfaces]


def _trials(pool):
    out = []
    for trial in range(50):
        rng = np.random.default_rng(1000 + trial)
        chosen = rng.choice(len(pool), size=10, replace=False)
        labels = [f"P{int(i)}" for i in chosen]
        family = CandidateFamily({lab: pool[int(i)] for lab, i in zip(labels, chosen)})
        truth = labels[int(rng.integers(10))]
        sweep = int(rng.integers(0, 4))
        oracle = SpectrumOracle(family.members[truth])
        winner, transcript = identify(oracle, family, sweep)
        out.append({"truth": truth, "sweep": sweep, **transcript.to_dict()})
    return out


@pytest.fixture(scope="module")
def crit10():
    return _trials(_pool(1))


def test_criterion_10_interrogation(crit10):
    wrong = over = dropped = 0
    for t in crit10:
        wrong += t["truth"] not in t["winners"]
        over += t["total_questions"] > t["sweep"] + 9
        dropped += any(t["truth"] in e["ruled_out"] for e in t["eliminations"])
    most = max(t["total_questions"] - t["sweep"] for t in crit10)
    report(10, wrong == over == dropped == 0,
           f"50 trials: wrong {wrong}, over budget {over}, truth eliminated {dropped}, max elimination questions {most}")


def test_criterion_11_determinism(crit6, crit10):
    six = _criterion6_outputs(8)
    same6 = all(
        six[k].to_json() == crit6[k].to_json() and six[k].representatives == crit6[k].representatives for k in six
    )
    same10 = json.dumps(_trials(_pool(8)), sort_keys=True) == json.dumps(crit10, sort_keys=True)
    report(11, same6 and same10, f"workers 1 vs 8 identical: criterion 6 {same6}, criterion 10 {same10}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
