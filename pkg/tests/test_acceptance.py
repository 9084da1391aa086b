"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The Monte Carlo criteria (1-4) run the full pipeline at their stated scales
and compare empirical rejection frequencies against the published targets at
the stated tolerances. Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import json
import time

import numpy as np
import pytest

from panelcpt import (
    DgpConfig,
    Panel,
    Scenario,
    TestConfig,
    adaptive_block_length,
    bartlett_lrv,
    default_fixed_block_length,
    h_statistic,
    j_statistic,
    rejection_frequency,
    run_test,
    simulate_panel,
)
from panelcpt.cli import main as cli_main

SEED_BASE = 20260808


def _report(num: int, ok: bool, detail: str) -> bool:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
    return ok


def _size_scenario(label, rho, n, t, block_rule, s, break_spec="none"):
    return Scenario(
        label=label,
        dgp=DgpConfig(n=n, t=t, rho=rho, beta=0.0, error_law="normal",
                      break_spec=break_spec, t0_fraction=0.5),
        test=TestConfig(statistic="J", scheme="nonoverlapping",
                        block_rule=block_rule, b=500, alpha=0.05),
        s=s,
    )


def test_criterion_1_table1_size_rho03_desk_scale():
    tic = time.perf_counter()
    report = rejection_frequency(
        _size_scenario("c1", rho=0.3, n=50, t=50, block_rule="adaptive", s=500),
        SEED_BASE,
    )
    wall = time.perf_counter() - tic
    freq = report.rejection_frequency
    ok = abs(freq - 0.045) <= 0.03 and wall < 600.0
    _report(1, ok, f"size={freq:.4f} target 0.045 +/- 0.03, "
                   f"meanL={report.mean_block_length:.2f}, wall={wall:.0f}s (<600s)")
    assert wall < 600.0
    assert abs(freq - 0.045) <= 0.03


def test_criterion_2_size_distortion_contrast():
    adaptive = rejection_frequency(
        _size_scenario("c2_rs", rho=0.3, n=100, t=100, block_rule="adaptive", s=500),
        SEED_BASE,
    ).rejection_frequency
    fixed = default_fixed_block_length(100)
    short = rejection_frequency(
        _size_scenario("c2_cs", rho=0.3, n=100, t=100, block_rule=fixed, s=500),
        SEED_BASE,
    ).rejection_frequency
    ok = adaptive <= 0.05 and short >= 0.15
    _report(2, ok, f"adaptive={adaptive:.4f} (need <=0.05), "
                   f"fixed(L={fixed})={short:.4f} (need >=0.15)")
    assert short >= 0.15
    assert adaptive <= 0.05


def test_criterion_3_oversize_under_rho05():
    freq = rejection_frequency(
        _size_scenario("c3", rho=0.5, n=50, t=50, block_rule="adaptive", s=500),
        SEED_BASE,
    ).rejection_frequency
    ok = abs(freq - 0.354) <= 0.06
    _report(3, ok, f"size={freq:.4f} target 0.354 +/- 0.06")
    assert abs(freq - 0.354) <= 0.06


def test_criterion_4_power_noncancelling():
    freq = rejection_frequency(
        _size_scenario("c4", rho=0.0, n=50, t=100, block_rule="adaptive", s=200,
                       break_spec="noncancelling"),
        SEED_BASE,
    ).rejection_frequency
    ok = freq >= 0.95
    _report(4, ok, f"power={freq:.4f} (need >=0.95, published value 1)")
    assert freq >= 0.95


def _naive_j(values):
    n, t = values.shape
    means = values.mean(axis=1)
    best, arg = -np.inf, None
    for tt in range(1, t):
        total = 0.0
        for i in range(n):
            s = 0.0
            for r in range(tt):
                s += values[i, r] - means[i]
            total += s * s
        total /= t
        if total > best:
            best, arg = total, tt
    return best, arg


def _naive_h(values, sigma2):
    n, t = values.shape
    means = values.mean(axis=1)
    best = -np.inf
    for tt in range(1, t):
        total = 0.0
        for i in range(n):
            s = 0.0
            for r in range(tt):
                s += values[i, r] - means[i]
            total += s * s / (sigma2[i] * t) - tt * (t - tt) / t**2
        total /= np.sqrt(n)
        best = max(best, total)
    return best


def test_criterion_5_oracle_equivalence():
    rng = np.random.default_rng(SEED_BASE)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 11))
        t = int(rng.integers(5, 101))
        values = rng.standard_normal((n, t)) * float(rng.uniform(0.5, 3.0))
        panel = Panel(values)
        jv = j_statistic(panel)
        want_j, want_arg = _naive_j(values)
        assert jv.argmax_t == want_arg
        worst = max(worst, abs(jv.value - want_j) / abs(want_j))
        lrv = bartlett_lrv(panel, bandwidth=min(3, t - 1))
        hv = h_statistic(panel, lrv)
        want_h = _naive_h(values, lrv.sigma2)
        worst = max(worst, abs(hv.value - want_h) / max(abs(want_h), 1e-300))
    ok = worst < 1e-10
    _report(5, ok, f"max relative deviation from naive references = {worst:.2e} "
                   f"(need < 1e-10) over 100 panels")
    assert worst < 1e-10


def test_criterion_6_block_length_fixture():
    sel = adaptive_block_length(Panel(np.array([[1.0, 1.0, -1.0, -1.0]])))
    ok = (sel.l_adpt == 2 and sel.cp0[0, 0] == 1.25 and sel.cp1[0, 0] == 0.25)
    _report(6, ok, f"l_adpt={sel.l_adpt} (want 2), cp0={sel.cp0[0, 0]} (want 1.25), "
                   f"cp1={sel.cp1[0, 0]} (want 0.25)")
    assert sel.l_adpt == 2
    assert sel.cp0[0, 0] == 1.25
    assert sel.cp1[0, 0] == 0.25


def test_criterion_7_single_block_degeneracy():
    rng = np.random.default_rng(SEED_BASE + 7)
    ok = True
    for trial in range(6):
        n = int(rng.integers(1, 8))
        t = int(rng.integers(8, 40))
        panel = Panel(rng.standard_normal((n, t)))
        b = int(rng.integers(1, 300))
        statistic = "J" if trial % 2 == 0 else "H"
        res = run_test(panel, TestConfig(statistic=statistic, block_rule=t, b=b,
                                         seed=trial))
        ok &= (res.p_value == 1.0 and res.reject is False
               and res.critical_value == res.statistic_value)
    _report(7, ok, "p=1.0, reject=False, critical==statistic exactly for L=T "
                   "across panels, B values, and both statistics")
    assert ok


def test_criterion_8_worker_determinism(tmp_path):
    rng = np.random.default_rng(SEED_BASE + 8)
    panel_path = tmp_path / "panel.csv"
    from panelcpt import write_csv
    write_csv(Panel(rng.standard_normal((6, 60))), panel_path)
    outputs = {}
    for workers in ("1", "8"):
        out = tmp_path / f"test_w{workers}.json"
        assert cli_main(["test", "--input", str(panel_path), "--b", "256",
                         "--seed", "9", "--workers", workers,
                         "--out", str(out)]) == 0
        outputs[f"test{workers}"] = out.read_bytes()
    scn = tmp_path / "grid.scn"
    scn.write_text("defaults s=12 b=65 alpha=0.05\n"
                   "scenario label=g1 n=8 t=32 rho=0.3\n"
                   "scenario label=g2 n=8 t=32 rho=0 break=noncancel\n")
    for workers in ("1", "8"):
        out = tmp_path / f"bench_w{workers}.csv"
        assert cli_main(["bench", "--scenarios", str(scn), "--seed", "9",
                         "--workers", workers, "--out", str(out)]) == 0
        outputs[f"bench{workers}"] = out.read_bytes()
    ok = (outputs["test1"] == outputs["test8"]
          and outputs["bench1"] == outputs["bench8"])
    _report(8, ok, "CLI test and bench outputs byte-identical for workers 1 vs 8")
    assert ok


def test_criterion_9_dgp_moment_suite():
    panel = simulate_panel(DgpConfig(n=100, t=10000, rho=0.0, beta=0.0,
                                     seed=SEED_BASE))
    pooled = panel.values.ravel()
    mean_err = abs(pooled.mean())
    var_err = abs(pooled.var() - 1.0)

    ar_panel = simulate_panel(DgpConfig(n=8, t=10000, rho=0.5, beta=0.0,
                                        seed=SEED_BASE + 1))
    rho_errs = []
    for row in ar_panel.values:
        d = row - row.mean()
        rho_errs.append(abs((d[:-1] * d[1:]).sum() / (d * d).sum() - 0.5))

    factor_panel = simulate_panel(DgpConfig(n=2, t=10000, rho=0.0, beta=2.0,
                                            seed=SEED_BASE + 2))
    corr_err = abs(np.corrcoef(factor_panel.values)[0, 1] - 0.8)

    ok = (mean_err < 0.05 and var_err < 0.05 and max(rho_errs) < 0.05
          and corr_err < 0.05)
    _report(9, ok, f"|mean|={mean_err:.4f}, |var-1|={var_err:.4f}, "
                   f"max|rho_hat-0.5|={max(rho_errs):.4f}, "
                   f"|corr-0.8|={corr_err:.4f} (all < 0.05)")
    assert ok
