"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a single ``PASS``/``FAIL`` line; ``conftest.py`` prints the
collected lines in the terminal summary.  Running this file directly prints
them as the criteria finish.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from weylkin import algebra
from weylkin.algebra import HBAR, I, P, X, commutator, conjugate_series, deriv
from weylkin.algebra import iterated_commutator, random_polynomial, taylor_shift
from weylkin.checks import (
    eigen_shift_check,
    finite_difference_derivative_check,
    fock_defect_check,
    generator_conjugation_check,
    mub_check,
    overlap_kernel_check,
    random_uncertainty_check,
    shift_commutator_check,
    uncertainty_check,
    weyl_relation_check,
)
from weylkin.cli import main
from weylkin.representations import (
    build_clock_shift,
    build_fock,
    build_grid,
    coherent_state,
    gaussian_packet,
)

from oracles import brute_fock, brute_matmul, continuum_chirped_moments

RESULTS: list[str] = []
IH = I * HBAR


def record(number: int, title: str, ok: bool, detail: str, started: float) -> None:
    elapsed = time.perf_counter() - started
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail} ({elapsed:.1f}s)"
    RESULTS.append(line)
    print(line)
    assert ok, line


def gaussian_rational(rng: random.Random) -> algebra.GaussianRational:
    return algebra.GaussianRational(
        Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
        Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
    )


def test_criterion_01_power_rule():
    t0 = time.perf_counter()
    bad = [n for n in range(1, 31)
           if commutator(X ** n, P) != (IH * X ** (n - 1)).scale(n)]
    record(1, "[X^n,P] = n i hbar X^(n-1), n<=30", not bad, f"failures={bad}", t0)


def test_criterion_02_derivative_rule_and_tower():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    fails = 0
    for _ in range(200):
        f = random_polynomial(rng, 12, x_only=True)
        fails += commutator(f, P) != IH * deriv(f, "X")
        d = f
        for n in range(7):
            fails += iterated_commutator(f, n) != d
            d = deriv(d, "X")
    record(2, "[F,P] = i hbar F' and D^n F = F^(n), 200 polys", fails == 0,
           f"failures={fails}", t0)


def test_criterion_03_conjugation_is_taylor_shift():
    t0 = time.perf_counter()
    rng = random.Random(77)
    fails = 0
    for _ in range(100):
        f = random_polynomial(rng, 10, x_only=True)
        a = gaussian_rational(rng)
        order = f.x_degree + rng.randint(0, 3)
        fails += conjugate_series(f, a, order) != taylor_shift(f, a)
    record(3, "conjugate_series == taylor_shift, 100 pairs", fails == 0,
           f"failures={fails}", t0)


def test_criterion_04_generalized_uncertainty():
    t0 = time.perf_counter()
    worst = 0.0
    min_slack = np.inf
    violations = 0
    for dim in (8, 16, 32):
        for rep in (build_fock(dim), build_grid(dim)):
            r = random_uncertainty_check(rep, 10_000, seed=dim, tol=1e-10)
            worst = max(worst, r.max_deviation)
            min_slack = min(min_slack, r.info["min_scaled_slack"])
            violations += r.info["violations"]
    record(4, "generalized bound over 1e4 states x 6 reps", violations == 0 and worst <= 1e-10,
           f"violations={violations} min_slack/scale^4={min_slack:.2e}", t0)


def test_criterion_05_covariance_term():
    t0 = time.perf_counter()
    hbar, sigma = 1.0, 1.0
    rep = build_grid(128, hbar, np.sqrt(2 * np.pi / 128))
    center = 0.5 * rep.box_length
    plain = uncertainty_check(rep, gaussian_packet(rep, center, 0.0, sigma))
    ratio = np.sqrt(plain.product) / (0.5 * hbar)
    chirp = 0.5 / sigma ** 2
    chirped = uncertainty_check(rep, gaussian_packet(rep, center, 0.0, sigma, chirp=chirp))
    excess = chirped.ideal_bound / (0.5 * hbar) ** 2 - 1.0
    # independent continuum oracle: finite differences on a fine line, no DFT
    oracle = continuum_chirped_moments(sigma, chirp, hbar)
    agree = (abs(chirped.var_x - oracle["var_x"]) < 1e-4
             and abs(chirped.var_p - oracle["var_p"]) < 1e-4
             and abs(chirped.covariance - oracle["cov"]) < 1e-4)
    ok = abs(plain.covariance) <= 1e-6 * hbar and 0.98 <= ratio <= 1.02 and excess >= 0.10 and agree
    record(5, "covariance term (plain and chirped packets)", ok,
           f"|cov|={abs(plain.covariance):.1e} dxdp/(hbar/2)={ratio:.6f} "
           f"chirped excess={100 * excess:.1f}% oracle_agree={agree}", t0)


def test_criterion_06_mub():
    t0 = time.perf_counter()
    worst = max(mub_check(build_grid(d)).max_deviation for d in (4, 16, 64, 128))
    record(6, "mutually unbiased position/momentum bases", worst <= 1e-10,
           f"max_dev={worst:.1e}", t0)


def test_criterion_07_overlap_kernel_and_derivative():
    t0 = time.perf_counter()
    kern = max(overlap_kernel_check(build_grid(d)).max_deviation for d in (4, 16, 64))
    der = max(finite_difference_derivative_check(build_grid(d)).max_deviation for d in (4, 16, 64))
    record(7, "overlap kernel and pre-limit derivative", kern <= 1e-10 and der <= 1e-12,
           f"kernel_dev={kern:.1e} derivative_dev={der:.1e}", t0)


def test_criterion_08_weyl_relation():
    t0 = time.perf_counter()
    relation = 0.0
    commuting_ok = True
    noncommuting_min = np.inf
    for dim in range(2, 9):
        rep = build_clock_shift(dim)
        relation = max(relation, weyl_relation_check(rep, 1, 1).info["relation_deviation"])
        for a in range(1, dim + 1):
            for g in range(1, dim + 1):
                m, rem = divmod(a * g, dim)
                r = weyl_relation_check(rep, a, g)
                relation = max(relation, r.info["relation_deviation"])
                if rem == 0 and m in (1, 2):
                    commuting_ok &= r.info["commutator_norm"] <= 1e-10
                if 2 * a * g == dim:  # a g = pi hbar with 2 pi hbar = dim
                    noncommuting_min = min(noncommuting_min, r.info["commutator_norm"])
    grid = build_grid(64)
    dx, dp = grid.spacing, grid.momentum_spacing
    relation = max(relation, weyl_relation_check(grid, dx, dp).info["relation_deviation"])
    for m in (1, 2):
        r = weyl_relation_check(grid, 8 * dx, 8 * m * dp)
        relation = max(relation, r.info["relation_deviation"])
        commuting_ok &= r.info["commutator_norm"] <= 1e-10
    r = weyl_relation_check(grid, 4 * dx, 8 * dp)
    relation = max(relation, r.info["relation_deviation"])
    noncommuting_min = min(noncommuting_min, r.info["commutator_norm"])
    ok = relation <= 1e-10 and commuting_ok and noncommuting_min >= 0.1
    record(8, "Weyl relation, clock 2..8 and grid 64", ok,
           f"relation_dev={relation:.1e} commute(m=1,2)={commuting_ok} "
           f"min |[V,U]| at ag=pi*hbar={noncommuting_min:.3f}", t0)


def test_criterion_09_eigenvector_shift():
    t0 = time.perf_counter()
    rep = build_grid(64)
    fids = {s: eigen_shift_check(rep, s).info["min_fidelity"] for s in (1, 7, 64)}
    worst = min(fids.values())
    record(9, "position eigenvector shift, steps 1/7/64", worst >= 1 - 1e-10,
           f"min_fidelity={worst:.16f}", t0)


def test_criterion_10_fock_defect():
    t0 = time.perf_counter()
    hbar = 1.0
    worst = max(fock_defect_check(build_fock(d, hbar)).max_deviation for d in range(2, 65))
    # brute-force oracle: Python-loop commutator against the closed-form corner
    oracle_dev = 0.0
    for d in range(2, 7):
        x, p = brute_fock(d, hbar)
        xp, px = brute_matmul(x, p), brute_matmul(p, x)
        expected = 1j * hbar * np.eye(d)
        expected[-1, -1] -= 1j * hbar * d
        oracle_dev = max(oracle_dev, np.abs(np.array(xp) - np.array(px) - expected).max())
    ok = worst <= 1e-12 and oracle_dev <= 1e-12
    record(10, "Fock defect i hbar (I - dim E_last), dims 2..64", ok,
           f"max_dev/(hbar dim)={worst:.1e} oracle_dev={oracle_dev:.1e}", t0)


def test_criterion_11_guarded_generator():
    t0 = time.perf_counter()
    fock = build_fock(128)
    psi = coherent_state(fock, 2.0)
    fock_dev = max(
        generator_conjugation_check(fock, c, 0.1, state=psi, tol=1e-3).max_deviation
        for c in ([0, 1], [0, 0, 1])
    )
    grid = build_grid(256, 1.0, np.sqrt(2 * np.pi / 256))
    packet = gaussian_packet(grid, 0.5 * grid.box_length, 0.0, 1.0)
    grid_dev = max(
        generator_conjugation_check(grid, c, grid.spacing, state=packet).max_deviation
        for c in ([0, 1], [0, 0, 1])
    )
    fixture = shift_commutator_check(grid, grid.spacing, guarded=False)
    documented = not fixture.passed and not fixture.asserted
    ok = fock_dev <= 1e-3 and grid_dev <= 1e-6 and documented
    record(11, "guarded generator conjugation", ok,
           f"fock_dev={fock_dev:.1e} grid_dev={grid_dev:.1e} "
           f"full-matrix fixture XFAIL dev={fixture.max_deviation:.3g}", t0)


def test_criterion_12_determinism(capsys):
    t0 = time.perf_counter()
    outputs = []
    for _ in range(2):
        for rep in ("fock", "grid"):
            main(["verify", "--rep", rep, "--dim", "16", "--seed", "3", "--format", "json"])
        outputs.append(capsys.readouterr().out.encode())
    with capsys.disabled():
        record(12, "byte-identical JSON across runs", outputs[0] == outputs[1] and bool(outputs[0]),
               f"bytes={len(outputs[0])}", t0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
