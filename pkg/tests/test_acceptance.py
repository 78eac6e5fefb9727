"""Acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line (shown in the terminal summary and with
``pytest -s``).  Run just this file with ``pytest tests/test_acceptance.py``.
"""

import json
import math
import random
import time
from fractions import Fraction as F

import pytest

from gwbound.algebra import binom
from gwbound.analysis import (
    GridSpec,
    confirm_exact,
    extinction_probability,
    scan_inequality,
)
from gwbound.coeffs import cgt_closed, index_range, summarize, verify_all
from gwbound.pgf import Params, iterate_fl, iterate_sequential, phi_fl, phi_nb, y_of_x
from gwbound.simulate import SimConfig, run_simulation

R_MAX = 25
R_GRID = range(2, 13)
ZETA_GRID = [round(0.05 * i, 2) for i in range(1, 20)]


@pytest.fixture(scope="module")
def verify_run():
    t0 = time.perf_counter()
    reports = verify_all(R_MAX)
    return reports, time.perf_counter() - t0


def test_exact_identity_suite(verify_run, criterion):
    reports, elapsed = verify_run
    failures = [r for r in reports if not r.passed]
    summary = summarize(reports)
    tables = ("triple_agreement", "integrality", "support", "positivity", "zero_pattern")
    covered = all(summary[name]["pass"] == R_MAX - 1 for name in tables)
    ok = not failures and covered and elapsed < 300
    detail = (f"{len(reports)} reports for 2<=r<={R_MAX}, {len(failures)} failed, "
              f"table checks per r: {[summary[n]['pass'] for n in tables]}, {elapsed:.1f}s")
    criterion(1, "closed form = symbolic expansion = m-summation, integral, positive, zero pattern", ok, detail)
    assert not failures, failures[0].to_record()
    assert covered and elapsed < 300


def test_gamma_and_branch_identities(verify_run, criterion):
    reports, _ = verify_run
    names = ("gamma_closed_forms", "low_branch", "middle_branch", "top_branch")
    rel = [r for r in reports if r.identity in names]
    failures = [r for r in rel if not r.passed]
    summary = summarize(rel)
    # every in-range index tuple of each branch, plus the n = r case of the top branch
    want = {"low_branch": 0, "middle_branch": 0, "top_branch": 0, "gamma": 0, "n_eq_r": 0}
    for r in range(2, R_MAX + 1):
        for k, n in index_range(r):
            branch = "low_branch" if n <= r - 1 - k else "middle_branch" if n <= r - 1 else "top_branch"
            want[branch] += 1
        # gamma1/2 for n <= r-1, gamma3/4 for r <= n <= r-1+i
        want["gamma"] += sum(r + i for i in range(r))
    n_eq_r = sum(1 for rep in rel if rep.identity == "top_branch" and rep.params.get("n") == rep.params.get("r")
                 and rep.status == "pass")
    want["n_eq_r"] = sum(max(0, r - 3) for r in range(4, R_MAX + 1))
    counts_ok = (summary["low_branch"]["pass"] == want["low_branch"]
                 and summary["middle_branch"]["pass"] == want["middle_branch"]
                 and summary["top_branch"]["pass"] == want["top_branch"]
                 and summary["gamma_closed_forms"]["pass"] == want["gamma"]
                 and n_eq_r == want["n_eq_r"])
    ok = not failures and counts_ok
    detail = (f"gamma {summary['gamma_closed_forms']['pass']}, low {summary['low_branch']['pass']}, "
              f"middle {summary['middle_branch']['pass']}, top {summary['top_branch']['pass']} "
              f"(n=r cases {n_eq_r}), failures {len(failures)}")
    criterion(2, "alternating-sum closed forms and low/middle/top branch identities, r<=25", ok, detail)
    assert not failures, failures[0].to_record()
    assert counts_ok, (summary, want, n_eq_r)


def test_inequality_scan(criterion):
    t0 = time.perf_counter()
    problems = []
    min_gap = math.inf
    cells = 0
    for r in R_GRID:
        for zeta in ZETA_GRID:
            p = Params(r, zeta)
            rep = scan_inequality(p, GridSpec(10_000))  # raises ViolationFound on gap < -1e-12
            cells += 1
            if zeta ** r not in rep.x or 1.0 not in rep.x:
                problems.append((r, zeta, "mandated points missing from grid"))
            if rep.unexpected_equalities or not set(rep.equality_points) <= {zeta ** r, 1.0}:
                problems.append((r, zeta, "equality off the mandated points"))
            if not rep.min_positive_gap or rep.min_positive_gap <= 0:
                problems.append((r, zeta, "non-positive off-equality gap"))
            gap, count = confirm_exact(p, samples=100, seed=r * 100 + round(zeta * 100))
            if count != 100 or not gap > 0:
                problems.append((r, zeta, f"exact gap {gap}"))
            min_gap = min(min_gap, rep.min_positive_gap or 0.0)
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 120
    detail = (f"{cells} cells x 10^4 points, 0 violations, problems {len(problems)}, "
              f"smallest off-equality gap {min_gap:.2e}, {elapsed:.1f}s")
    criterion(3, "phi_fl <= phi_nb on the (r, zeta, x) grid with equality only at zeta^r and 1", ok, detail)
    assert not problems, problems[:3]
    assert elapsed < 120


def test_worked_values(criterion):
    p = Params(2, F(1, 2))
    nb0, fl0 = phi_nb(p, F(0)), phi_fl(p, F(0))
    gap = nb0 - fl0
    q_exact = p.extinction
    q_iter = extinction_probability(p)
    checks = {
        "phi_nb(0) = 9/49": nb0 == F(9, 49),
        "phi_fl(0) = 2/11": fl0 == F(2, 11),
        "gap = 3/539": gap == F(3, 539),
        "extinction = 1/4": q_exact == F(1, 4) and phi_nb(p, q_exact) == q_exact
        and abs(q_iter - 0.25) < 1e-12,
    }
    failed = [k for k, v in checks.items() if not v]
    detail = f"computed phi_nb(0)={nb0}, phi_fl(0)={fl0}, gap={gap}, extinction={q_exact}"
    if failed:
        detail += f"; mismatched: {', '.join(failed)}"
    criterion(4, "worked values for r=2, zeta=1/2 in rational mode", not failed, detail)
    assert not failed, detail


def test_iteration_consistency(criterion):
    rng = random.Random(2024)
    problems = []
    worst = 0.0
    for _ in range(20):
        r = rng.randrange(2, 13)
        zeta = F(rng.randrange(1, 20), 20)
        pe, pf = Params(r, zeta), Params(r, float(zeta))
        if iterate_fl(pe, 50, F(0)) != iterate_sequential(phi_fl, pe, 50, F(0)):
            problems.append((r, zeta, "rational matrix power != composition"))
        d = abs(iterate_fl(pf, 50, 0.0) - iterate_sequential(phi_fl, pf, 50, 0.0))
        worst = max(worst, d)
        if d > 1e-12:
            problems.append((r, zeta, f"float difference {d}"))
        q = float(zeta) ** r
        fl = [iterate_fl(pf, n, 0.0) for n in range(101)]
        nb = [0.0]
        for _ in range(100):
            nb.append(phi_nb(pf, nb[-1]))
        for n in range(1, 101):
            if fl[n] < fl[n - 1] - 1e-12 or nb[n] < nb[n - 1] - 1e-12:
                problems.append((r, zeta, f"not monotone at n={n}"))
            if fl[n] > nb[n] + 1e-12:
                problems.append((r, zeta, f"ordering fails at n={n}"))
            if nb[n] > q + 1e-12:
                problems.append((r, zeta, f"overshoots zeta^r at n={n}"))
        if abs(iterate_fl(pf, 10 ** 5, 0.0) - q) > 1e-9 or abs(extinction_probability(pf) - q) > 1e-12:
            problems.append((r, zeta, "limit is not zeta^r"))
    ok = not problems
    detail = f"20 random Params, max float |matrix - composition| at n=50 {worst:.1e}, problems {len(problems)}"
    criterion(5, "FL matrix-power iterates, monotone convergence and ordering for n<=100", ok, detail)
    assert ok, problems[:3]


@pytest.mark.slow
def test_monte_carlo(criterion):
    n_rep = 10 ** 5
    problems = []
    parts = []
    for r, zeta in ((2, 0.5), (3, 0.7), (5, 0.9)):
        p = Params(r, zeta)
        cfg = SimConfig(p, replicates=n_rep, max_generations=200, seed=42, cap=10 ** 6)
        t0 = time.perf_counter()
        rep = run_simulation(cfg)
        elapsed = time.perf_counter() - t0
        again = run_simulation(cfg)
        if json.dumps(rep.to_dict(), sort_keys=True) != json.dumps(again.to_dict(), sort_keys=True):
            problems.append((r, zeta, "not deterministic"))
        q = zeta ** r
        z = (rep.extinct_fraction - q) / math.sqrt(q * (1 - q) / n_rep)
        if abs(z) >= 3:
            problems.append((r, zeta, f"extinction frequency off by {z:.2f} sigma"))
        worst = 0.0
        x = 0.0
        for n in range(1, 31):
            x = phi_nb(p, x)
            s = math.sqrt(x * (1 - x) / n_rep)
            dev = abs(rep.cum_extinct_fraction[n] - x) / s
            worst = max(worst, dev)
        if worst >= 4:
            problems.append((r, zeta, f"generation curve off by {worst:.2f} sigma"))
        if elapsed >= 60:
            problems.append((r, zeta, f"runtime {elapsed:.1f}s"))
        parts.append(f"({r},{zeta}) z={z:+.2f} curve<= {worst:.2f}sd {elapsed:.1f}s")
    ok = not problems
    criterion(6, "Monte Carlo extinction within 3 sigma, curve within 4 sigma, deterministic", ok, "; ".join(parts))
    assert ok, problems


def test_quantitative_statements(criterion):
    problems = []
    for r in range(2, R_MAX + 1):
        for k in range(1, r):
            top = 2 * r - 3 - k
            if top >= 0 and cgt_closed(r, k, top) != binom(r - 2, k - 1):
                problems.append(("top", r, k))
            if cgt_closed(r, k, 0) != k:
                problems.append(("n=0", r, k))
    for r in R_GRID:
        for zeta in ZETA_GRID:
            y0 = y_of_x(Params(r, zeta), 0.0)
            if not y0 < zeta ** ((r + 1) / 2) / r < 1 / r:
                problems.append(("y-chain", r, zeta))
    n_coef = sum(1 for r in range(2, R_MAX + 1) for k in range(1, r))
    ok = not problems
    detail = (f"{n_coef} (r,k) pairs for the two coefficient statements, "
              f"{len(R_GRID) * len(ZETA_GRID)} grid cells for the y(0) chain, problems {len(problems)}")
    criterion(7, "top coefficient binom(r-2,k-1), n=0 coefficient k, y(0) bound chain", ok, detail)
    assert ok, problems[:3]
