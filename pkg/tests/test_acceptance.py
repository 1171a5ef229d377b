"""Acceptance gate: every release-blocking criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL
report.  Reference links throughout: attenuation 0.05/km; the "record"
link is 225 km split once in the middle at 1e7 photons per pulse, and the
high-baud worked example is 185 km at 1 mW / 1550 nm.
"""

from __future__ import annotations

import math
import os
import time

import numpy as np

from amplink import (
    GainProfile,
    GainSearchState,
    LinkConfig,
    SweepSpec,
    coefficients_for,
    energy,
    energy_gradient,
    energy_relaxed,
    holevo_gain_gradient,
    holevo_se,
    homodyne_gain_gradient,
    homodyne_se,
    max_gain,
    maximize_shannon_se,
    minimize_energy,
    photon_flux,
    propagate,
    quantum_limit_crossover,
    rate_hadamard,
    rate_ojdr,
    rate_ossr,
    run_energy_descent,
    run_sweep,
    shannon_gain_gradient,
    shannon_se,
    shannon_se_continuous,
    swap_gains,
)
from amplink.optimize import EnergyModel
from conftest import np_holevo, random_config, random_free_gains

RECORD = LinkConfig(0.05, 225.0, 2, 1e7)
FLUX_1MW = photon_flux(1e-3, 1550e-9)
TAU_185 = math.exp(-0.05 * 185.0)


def _report(name: str, ok: bool, detail: str = "") -> None:
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"{name}: {detail}"


def test_criterion_1_record_savings():
    start = time.perf_counter()
    result = minimize_energy(RECORD)
    elapsed = time.perf_counter() - start
    # independent oracle: bisect the single free gain on the SE boundary
    eta, n = RECORD.eta, RECORD.photons
    lo, hi = 1.0, max_gain(RECORD)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if holevo_se(coefficients_for(eta, [mid, 1.0]), n) >= result.se_target:
            hi = mid
        else:
            lo = mid
    oracle_gain = hi
    oracle_ratio = (hi - 1.0) * (eta * n + 1.0) / result.baseline_energy
    ok = (
        abs(result.savings_fraction - 0.55) <= 0.01
        and elapsed < 1.0
        and abs(oracle_gain - 125.0) < 1.0
        and abs(oracle_ratio - 0.449) < 0.005
        and abs(result.gains.gains[0] - oracle_gain) / oracle_gain < 1e-4
    )
    _report(
        "1 record-savings",
        ok,
        f"savings={result.savings_fraction:.4f} oracle_gain={oracle_gain:.2f} "
        f"oracle_ratio={oracle_ratio:.4f} runtime={elapsed * 1e3:.0f}ms",
    )


def test_criterion_2_record_spectral_efficiencies():
    op = maximize_shannon_se(RECORD).se_achieved
    off = propagate(RECORD, GainProfile.off(2))
    noamp_sh = shannon_se(off, RECORD.photons)
    noamp_ho = holevo_se(off, RECORD.photons)
    ok = (
        abs(op - 14.1) <= 0.1
        and abs(noamp_sh - 7.0) <= 0.1
        and abs(noamp_ho - 8.5) <= 0.1
    )
    _report(
        "2 record-spectral-efficiencies",
        ok,
        f"amplified={op:.3f} dark-heterodyne={noamp_sh:.3f} dark-joint={noamp_ho:.3f}",
    )


def test_criterion_3_short_link_table():
    expected = {1e7: (17.0, 1.4e12), 1e8: (21.0, 1.7e12), 1e9: (24.0, 1.9e12)}
    baud = 80e9
    details = []
    ok = True
    for n, (se_ref, rate_ref) in expected.items():
        cfg = LinkConfig(0.05, 80.0, 1, n)
        se = shannon_se(propagate(cfg, GainProfile.off(1)), n)
        rate = se * baud
        ok = ok and abs(se - se_ref) <= 0.5 and abs(rate - rate_ref) <= 0.05e12
        details.append(f"n={n:.0e}: {se:.2f}b {rate / 1e12:.3f}Tb/s")
    _report("3 short-link-table", ok, "; ".join(details))


def test_criterion_4_hadamard_rates():
    expected = {4: 1.3799e12, 8: 1.91191e12, 16: 2.18987e12, 32: 2.0744e12}
    rates = {k: rate_hadamard(FLUX_1MW, TAU_185, 1.8e13, k) for k in expected}
    ok = all(abs(rates[k] - ref) / ref <= 0.01 for k, ref in expected.items())
    _report(
        "4 hadamard-rates",
        ok,
        " ".join(f"k={k}:{rates[k] / 1e12:.4f}Tb/s" for k in expected),
    )


def test_criterion_5_terabit_example():
    ossr = rate_ossr(FLUX_1MW, TAU_185, 0.0, 1.8e13)
    ojdr = rate_ojdr(FLUX_1MW, TAU_185, 0.0, 1.8e13)
    ok = abs(ossr - 1.0e12) / 1.0e12 <= 0.10 and abs(ojdr - 4.3e12) / 4.3e12 <= 0.10
    _report(
        "5 terabit-example",
        ok,
        f"per-pulse={ossr / 1e12:.3f}Tb/s joint={ojdr / 1e12:.3f}Tb/s",
    )


def test_criterion_6_quantum_limit_crossover():
    b_star = quantum_limit_crossover(FLUX_1MW, TAU_185, 0.0)
    ok = b_star is not None and abs(b_star - 0.44e12) / 0.44e12 <= 0.10
    _report("6 quantum-limit-crossover", ok, f"b*={b_star / 1e12:.4f}Tbaud")


def test_criterion_7_extreme_regime_savings():
    # The sub-5%-energy regime at n=1e7 begins near 1400 km, so the grid's
    # long edge runs past the 500 km sketch range.
    lengths = tuple(float(L) for L in range(50, 501, 25)) + tuple(
        float(L) for L in range(600, 1501, 100)
    )
    spec = SweepSpec(
        alpha=0.05,
        L_values=lengths,
        K_values=tuple(range(2, 11)),
        n_values=(1e7,),
        problems=("egs",),
    )
    cells = run_sweep(spec, workers=os.cpu_count() or 1)
    long_hits = [
        c for c in cells if c.L_km >= 1000.0 and c.savings_egs_pct >= 95.0
    ]
    short_hits = [
        c
        for c in cells
        if c.L_km <= 100.0 and c.AE <= 1.2 and c.savings_egs_pct >= 95.0
    ]
    ok = bool(long_hits) and bool(short_hits)
    detail = ""
    if long_hits:
        c = max(long_hits, key=lambda c: c.savings_egs_pct)
        detail += f"long: L={c.L_km:.0f} K={c.K} {c.savings_egs_pct:.1f}%"
    if short_hits:
        c = max(short_hits, key=lambda c: c.savings_egs_pct)
        detail += f"; short: L={c.L_km:.0f} K={c.K} AE={c.AE:.3f} {c.savings_egs_pct:.1f}%"
    _report("7 extreme-regime-savings", ok, detail)


def test_criterion_7b_exact_vs_relaxed_gap():
    # the relaxed cost model never wins, and genuinely loses somewhere
    spec = SweepSpec(
        alpha=0.05,
        L_values=(150.0, 250.0, 350.0),
        K_values=(2, 4, 6),
        n_values=(1e7,),
        problems=("egs", "regs"),
    )
    cells = run_sweep(spec, workers=os.cpu_count() or 1)
    gaps = [c.savings_egs_pct - c.savings_regs_pct for c in cells]
    ok = all(g >= -0.5 for g in gaps) and any(g > 0.01 for g in gaps)
    _report(
        "7b exact-vs-relaxed-gap",
        ok,
        f"min={min(gaps):.3f}pp max={max(gaps):.3f}pp over {len(gaps)} cells",
    )


def test_criterion_8a_gradients_match_finite_differences():
    rng = np.random.default_rng(81)
    worst = 0.0
    for _ in range(100):
        cfg = random_config(rng)
        gains = random_free_gains(rng, cfg) + [1.0]
        profile = GainProfile(tuple(gains))
        coeffs = propagate(cfg, profile)
        h = 1e-5 * max_gain(cfg)
        exact = energy_gradient(cfg, profile, EnergyModel.EXACT)
        relaxed = energy_gradient(cfg, profile, EnergyModel.RELAXED)
        for i in range(1, cfg.segments):
            up, dn = list(gains), list(gains)
            up[i - 1] += h
            dn[i - 1] -= h
            pu, pd = GainProfile(tuple(up)), GainProfile(tuple(dn))
            cu, cd = coefficients_for(cfg.eta, up), coefficients_for(cfg.eta, dn)
            pairs = [
                (shannon_gain_gradient(coeffs, cfg.photons, i),
                 (shannon_se(cu, cfg.photons) - shannon_se(cd, cfg.photons)) / (2 * h)),
                (holevo_gain_gradient(coeffs, cfg.photons, i),
                 (holevo_se(cu, cfg.photons) - holevo_se(cd, cfg.photons)) / (2 * h)),
                (homodyne_gain_gradient(coeffs, cfg.photons, i),
                 (homodyne_se(cu, cfg.photons) - homodyne_se(cd, cfg.photons)) / (2 * h)),
                (exact[i - 1], (energy(cfg, pu) - energy(cfg, pd)) / (2 * h)),
                (relaxed[i - 1],
                 (energy_relaxed(cfg, pu) - energy_relaxed(cfg, pd)) / (2 * h)),
            ]
            for analytic, fd in pairs:
                if fd != 0.0:
                    worst = max(worst, abs(analytic - fd) / abs(fd))
    _report("8a gradient-finite-difference", worst < 1e-6, f"worst rel err {worst:.2e}")


def test_criterion_8b_gain_swap_identity():
    rng = np.random.default_rng(82)
    worst = 0.0
    for _ in range(300):
        cfg = random_config(rng)
        if cfg.segments < 3:
            continue
        gains = random_free_gains(rng, cfg) + [1.0]
        profile = GainProfile(tuple(gains))
        i = int(rng.integers(1, cfg.segments - 1))
        before = propagate(cfg, profile)
        after = propagate(cfg, swap_gains(profile, i))
        predicted = before.tau_future[i + 1] * (gains[i] - gains[i - 1]) * (1.0 - cfg.eta)
        scale = max(1.0, abs(before.nu))
        worst = max(worst, abs((before.nu - after.nu) - predicted) / scale)
        worst = max(worst, abs(before.tau - after.tau) / before.tau)
    _report("8b gain-swap-identity", worst <= 1e-12, f"worst scaled err {worst:.2e}")


def test_criterion_8c_holevo_dominates_shannon():
    rng = np.random.default_rng(83)
    violations = 0
    for _ in range(1000):
        cfg = random_config(rng)
        gains = random_free_gains(rng, cfg) + [1.0]
        coeffs = propagate(cfg, GainProfile(tuple(gains)))
        if holevo_se(coeffs, cfg.photons) < shannon_se(coeffs, cfg.photons) - 1e-12:
            violations += 1
    _report("8c holevo-dominates-shannon", violations == 0, f"{violations} violations")


def _grid_oracle(cfg: LinkConfig, target: float) -> float:
    eta, n = cfg.eta, cfg.photons
    gs = np.linspace(1.0, max_gain(cfg), 2001)
    if cfg.segments == 2:
        se = np_holevo(eta**2 * gs, eta * (gs - 1.0), n)
        cost = (gs - 1.0) * (eta * n + 1.0)
    else:
        G1, G2 = np.meshgrid(gs, gs, indexing="ij")
        nu2 = G2 * eta * (G1 - 1.0) + G2 - 1.0
        se = np_holevo(eta**3 * G1 * G2, eta * nu2, n)
        cost = (G1 - 1.0) * (eta * n + 1.0) + (G2 - 1.0) * (
            eta * (eta * G1 * n + G1 - 1.0) + 1.0
        )
    feasible = se >= target * (1.0 - 1e-12)
    return float(np.where(feasible, cost, np.inf).min())


def test_criterion_8d_energy_oracle_equivalence():
    rng = np.random.default_rng(84)
    worst = 0.0
    for segments in (2, 3):
        for _ in range(10):
            alpha = rng.uniform(0.04, 0.06)
            length = rng.uniform(60.0, 300.0)
            n = 10.0 ** rng.uniform(5.0, 8.0)
            cfg = LinkConfig(alpha, length, segments, n)
            result = minimize_energy(cfg)
            oracle = _grid_oracle(cfg, result.se_target)
            # the grid overshoots the true optimum by its own resolution, so
            # only "no worse than the grid" is meaningful
            excess = (result.energy_exact - oracle) / max(oracle, 1e-9)
            worst = max(worst, excess)
            assert result.se_achieved >= result.se_target * (1.0 - 1e-9)
    _report("8d energy-oracle-equivalence", worst <= 0.005, f"worst excess {worst:+.3%}")


def test_criterion_8e_discrete_to_continuum():
    worst = 0.0
    for alpha in (0.04, 0.05):
        for length in (10.0, 40.0, 100.0, 184.0):
            cfg = LinkConfig(alpha, length, 10**5, 1e7)
            gap = abs(
                maximize_shannon_se(cfg).se_achieved
                - shannon_se_continuous(alpha, length, 1e7)
            )
            worst = max(worst, gap)
    _report("8e discrete-to-continuum", worst < 1e-4, f"worst gap {worst:.2e} bits")


def test_criterion_8f_descent_monotonicity():
    rng = np.random.default_rng(86)
    configs = [RECORD] + [random_config(rng, segments=int(k)) for k in (3, 5, 8)]
    ok = True
    accepted_total = 0
    for cfg in configs:
        target = maximize_shannon_se(cfg).se_achieved
        state = GainSearchState.start(cfg, target, record_trace=True)
        run_energy_descent(state)
        trace = state.energy_trace
        accepted_total += len(trace)
        ok = ok and all(b < a for a, b in zip(trace, trace[1:]))
    _report(
        "8f descent-monotonicity",
        ok and accepted_total > 0,
        f"{accepted_total} accepted steps, strictly decreasing",
    )
