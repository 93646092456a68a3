"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s``; the collected
lines are also repeated in the terminal summary.
"""
import json
import math
import random
import re
import time
from fractions import Fraction

import pytest

from modrecon.arith import Residue, mod_inverse, prime_stream, take_primes
from modrecon.cli import main
from modrecon.corpus import CORPUS, load
from modrecon.crt import crt_list
from modrecon.engine import FaultPlan, ModularOptions, modular_groebner
from modrecon.groebner import buchberger, check_lm_equivalence
from modrecon.poly import Ring, homogenize, parse_poly
from modrecon.reconstruct import LatticeBasis2, error_tolerant, farey_preimage, gauss_lagrange_trace

LM_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 101]


def cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def best_time(fn, repeat=20):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_c01_worked_example(capsys, acceptance_line):
    outputs = (cli(capsys, "crt", "0:5", "2:7", "85:101"), cli(capsys, "farey", "590", "3535"))
    exact = outputs == ((0, "590 mod 3535\n", ""), (0, "5/6\n", ""))
    t_crt = best_time(lambda: crt_list([Residue(0, 5), Residue(2, 7), Residue(85, 101)]))
    t_farey = best_time(lambda: farey_preimage(Residue(590, 3535)))
    fast = max(t_crt, t_farey) < 1e-3
    acceptance_line("1 worked example crt/farey", exact and fast,
                    f"590 mod 3535, 5/6; crt {t_crt * 1e6:.1f} us, farey {t_farey * 1e6:.1f} us")


def test_c02_error_example(capsys, acceptance_line):
    code1, out1, _ = cli(capsys, "crt", "1:5", "2:7", "85:101")
    code2, out2, _ = cli(capsys, "etr", "2711", "3535", "-v", "--bad", "5")
    lines = out2.splitlines()
    vec = re.search(r"shortest vector: \((-?\d+), (-?\d+)\)", out2)
    ok = (code1 == 0 and out1 == "2711 mod 3535\n" and code2 == 0
          and lines[-1] == "5/6"
          and vec is not None and (abs(int(vec[1])), abs(int(vec[2]))) == (25, 30)
          and "gcd(x, y) = 5" in lines
          and "gcd 5 divides M = 5" in lines
          and "(5^2 + 6^2) * 5 = 305 < 707 = N/M" in lines)
    res = error_tolerant(Residue(2711, 3535))
    ok = ok and res.value == Fraction(5, 6) and res.reduced_by == 5
    acceptance_line("2 error example 2711/3535", ok, (f"vector ({vec[1]}, {vec[2]})" if vec else "no vector printed") + ", gcd 5 | M = 5, 305 < 707")


def test_c03_quotient_sequences(capsys, acceptance_line):
    _, steps590 = gauss_lagrange_trace(LatticeBasis2.for_residue(Residue(590, 3535)))
    _, steps2711 = gauss_lagrange_trace(LatticeBasis2.for_residue(Residue(2711, 3535)))
    q2711 = [s.quotient for s in steps2711]
    _, out, _ = cli(capsys, "etr", "590", "3535", "-v")
    ok = (str(steps590[0]) == "(3535, 0) = 6*(590, 1) + (-5, -6)"
          and out.splitlines()[0] == str(steps590[0])
          and q2711 == [1, 3, 3, 2, 1])
    acceptance_line("3 quotient sequences", ok, f"first step {steps590[0]}; 2711 quotients {q2711}")


def test_c04_farey_injectivity(acceptance_line):
    t0 = time.perf_counter()
    failures = 0
    counted = 0
    for n in (101, 1009, 10007):
        k = math.isqrt((n - 1) // 2)
        seen = {}
        for b in range(1, k + 1):
            if math.gcd(b, n) != 1:
                continue
            binv = mod_inverse(b, n).value
            for a in range(-k, k + 1):
                if math.gcd(a, b) != 1:
                    continue
                r = a * binv % n
                counted += 1
                if r in seen:
                    failures += 1
                seen[r] = Fraction(a, b)
                if farey_preimage(Residue(r, n)) != Fraction(a, b):
                    failures += 1
    elapsed = time.perf_counter() - t0
    acceptance_line("4 Farey injectivity", failures == 0 and elapsed < 30,
                    f"{counted} fractions, {failures} failures, {elapsed:.2f} s")


def test_c05_error_tolerance_theorem(acceptance_line):
    rng = random.Random(20261016)
    t0 = time.perf_counter()
    failures = 0
    pool = take_primes(400, 32, seed=5)
    for _ in range(1000):
        b = rng.randint(1, 2**20)
        a = rng.randint(-2**20, 2**20)
        q = Fraction(a, b)
        h = q.numerator ** 2 + q.denominator ** 2
        primes = rng.sample(pool, 12)
        bad = primes[:rng.randint(0, 3)]
        M = math.prod(bad)
        good, Ng = [], 1
        for p in primes[len(bad):]:
            good.append(p)
            Ng *= p
            if Ng > 8 * h * M:
                break
        assert Ng > 8 * h * M
        residues = [Residue(rng.randrange(p), p) for p in bad]
        residues += [Residue.of_rational(q, p) for p in good]
        rng.shuffle(residues)
        res = error_tolerant(crt_list(residues))
        if res is None or res.value != q:
            failures += 1
    elapsed = time.perf_counter() - t0
    acceptance_line("5 error-tolerance theorem", failures == 0 and elapsed < 60,
                    f"1000 trials, {failures} failures, {elapsed:.2f} s")


def test_c06_collinearity(acceptance_line):
    counterexamples = 0
    checked = 0
    for n in range(2, 201):
        bound = math.isqrt(n - 1)  # |x|, |y| <= bound whenever x^2 + y^2 < n
        for r in range(n):
            short = [(x, y) for y in range(-bound, bound + 1)
                     for x in range(-bound, bound + 1)
                     if (x - r * y) % n == 0 and 0 < x * x + y * y < n]
            for i, (x1, y1) in enumerate(short):
                for x2, y2 in short[i + 1:]:
                    checked += 1
                    if x1 * y2 - x2 * y1:
                        counterexamples += 1
    acceptance_line("6 collinearity N <= 200", counterexamples == 0,
                    f"{checked} vector pairs, {counterexamples} counterexamples")


PLANS = {
    "none": lambda seed: "",
    "30% type-4": lambda seed: "random 4 0.3\n",
    "20% type-5": lambda seed: "random 5 0.2\n",
    "one type-2": lambda seed: f"{next(prime_stream(61, seed=seed))} 2\n",
}
SEEDS = range(5)


def test_c07_groebner_oracle_equivalence(capsys, tmp_path, acceptance_line):
    mismatches, slowest, faulted = [], 0.0, {k: 0 for k in PLANS}
    for name, text in CORPUS.items():
        ideal = tmp_path / f"{name}.ideal"
        ideal.write_text(text)
        code, oracle, _ = cli(capsys, "gb", str(ideal), "--mode", "rational")
        assert code == 0
        for label, make in PLANS.items():
            for seed in SEEDS:
                plan_text = make(seed)
                plan = tmp_path / "plan.txt"
                plan.write_text(plan_text)
                report = tmp_path / "report.json"
                t0 = time.perf_counter()
                code, out, _ = cli(capsys, "gb", str(ideal), "--mode", "modular", "--seed", str(seed),
                                   "--inject", str(plan), "--report", str(report))
                slowest = max(slowest, time.perf_counter() - t0)
                if code != 0 or out.encode() != oracle.encode():
                    mismatches.append((name, label, seed))
                fp = FaultPlan.parse(plan_text, seed=seed)
                primes = {run["prime"] for rnd in json.loads(report.read_text())["rounds"]
                          for run in rnd["runs"]}
                faulted[label] += sum(fp.fault_for(p) != "none" for p in primes)
    ok = not mismatches and slowest < 60 and all(faulted[k] > 0 for k in PLANS if k != "none")
    detail = (f"{len(CORPUS) * len(PLANS) * len(SEEDS)} runs, mismatches {mismatches}, "
              f"faulted primes {faulted}, slowest {slowest:.2f} s")
    acceptance_line("7 Groebner oracle equivalence", ok, detail)


def test_c08_lm_equivalence(acceptance_line):
    violations = []
    bad_seen = 0
    for name in CORPUS:
        _, F = load(name)
        H = homogenize(F)
        for p in LM_PRIMES:
            eq = check_lm_equivalence(H, p)
            if eq.lm_equal != eq.reductions_equal:
                violations.append((name, p))
            bad_seen += not eq.lm_equal
    acceptance_line("8 lm_equal <=> reductions_equal", not violations,
                    f"{len(CORPUS) * len(LM_PRIMES)} cases, {bad_seen} with differing leads, "
                    f"violations {violations}")


def test_c09_bad_prime_demo(capsys, tmp_path, acceptance_line):
    ideal = tmp_path / "sym2.ideal"
    ideal.write_text(CORPUS["sym2"])
    report = tmp_path / "report.json"
    code, out, _ = cli(capsys, "gb", str(ideal), "--primes", "2,3,5,7,11", "--report", str(report))
    data = json.loads(report.read_text())
    first = data["rounds"][0]
    ok = (code == 0 and out == "ring: x,y; order: lex; field: Q\nx\ny\n"
          and first["discarded"] == [2] and first["winner"] == "[x, y]")
    acceptance_line("9 bad prime 2 discarded", ok,
                    f"tally {first['tally']}, discarded {first['discarded']}, basis {out.splitlines()[1:]}")


def test_c10_benchmark(capsys, acceptance_line):
    code, out, _ = cli(capsys, "bench", "--bits", "500", "--trials", "100", "--seed", "0")
    bits, trials, mean, median = out.splitlines()[1].split()
    ok = code == 0 and int(bits) == 500 and int(trials) == 100 and float(mean) < 0.1
    acceptance_line("10 benchmark sanity", ok, f"mean {float(mean):.6f} s, median {float(median):.6f} s")


def test_c11_type5_escape_caught(acceptance_line):
    # the y-coefficient 1234/567 has a^2 + b^2 > 2^20; with three 14-bit primes
    # one of which is corrupted, (a^2 + b^2) * M exceeds the good modulus
    ring = Ring(("x", "y"), "lex")
    F = [parse_poly("x - 1234/567*y - 1", ring), parse_poly("y^2 - 3", ring)]
    oracle = buchberger(F)
    wrong, retried, first_round = 0, 0, 0
    outcomes = {}
    for seed in range(100):
        bad = next(prime_stream(14, seed=seed))
        opts = ModularOptions(initial_primes=3, bit_size=14, seed=seed, max_rounds=8)
        out = modular_groebner(F, opts, FaultPlan({bad: "type5"}, seed=seed))
        if out.value != oracle:
            wrong += 1
        first = out.report.rounds[0]
        assert bad in first["new_primes"]
        outcomes[first["outcome"]] = outcomes.get(first["outcome"], 0) + 1
        if out.rounds > 1:
            retried += 1
        else:
            first_round += 1
    acceptance_line("11 type-5 escape caught", wrong == 0,
                    f"100 trials, {wrong} wrong, {retried} retried, {first_round} correct in round 1, "
                    f"round-1 outcomes {outcomes}")
