"""The ten acceptance criteria, one test each; every test prints one PASS/FAIL line."""
import math
import time

import pytest
from click.testing import CliRunner

from revmult.cli import main
from revmult.costmodel import (LOG2_3, LOG6_16, bound_ratio, crossover, fit_exponent, mirror_cost,
                               paper_cnot_recurrence, paper_cost, paper_toffoli_recurrence)
from revmult.multipliers import BUILDERS, MultiplierConfig, build_toom25
from revmult.netlist import count_resources
from revmult.pebble import (RecursionTree, depth_under_schedule, make_schedule, optimal_cut_level, replay,
                            space_unoptimized, tree_height)
from revmult.sim import TestVectorPlan, verify_multiplier

from conftest import ACCEPTANCE_LINES

GRID = [6, 36, 216, 1296]


def report(k, ok, detail):
    line = f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_functional_correctness():
    t0 = time.perf_counter()
    bad = []
    for method, build in BUILDERS.items():
        for n in range(1, 7):
            v = verify_multiplier(build(n), n, TestVectorPlan.exhaustive())
            if not v.passed:
                bad.append(f"{method} n={n}: {v.text().splitlines()[0]}")
        for n in (8, 16, 32, 64):
            v = verify_multiplier(build(n), n, TestVectorPlan("random", 1000, 42))
            if not v.passed or v.count != 1000:
                bad.append(f"{method} n={n}: {v.text().splitlines()[0]}")
    dt = time.perf_counter() - t0
    report(1, not bad and dt < 300, f"3 methods, exhaustive n=1..6, 1000 random n=8..64, {dt:.1f}s {bad[:3]}")


def test_criterion_02_base_case():
    garbage = count_resources(build_toom25(1, MultiplierConfig(uncompute=False)))
    clean = count_resources(build_toom25(1))
    ok = garbage.counts() == (1, 0, 0) and clean.toffoli_count == 2
    report(2, ok, f"toffoli without uncompute {garbage.toffoli_count}, with uncompute {clean.toffoli_count}")


def test_criterion_03_count_reconciliation():
    rows = []
    for n in (6, 36, 216):
        rep, mir = count_resources(build_toom25(n)), mirror_cost(n)
        same = (rep.toffoli_count, rep.cnot_count, rep.not_count, rep.qubit_count) == \
               (mir.toffoli_count, mir.cnot_count, mir.not_count, mir.qubit_count)
        rows.append((n, same, rep.counts(), rep.qubit_count))
    report(3, all(r[1] for r in rows), "measured == mirror: " + "; ".join(f"n={n} {c} q={q}" for n, _, c, q in rows))


def test_criterion_04_published_bounds():
    lines, ok = [], True
    for n in GRID:
        scale = n ** LOG6_16
        tc, cc = paper_toffoli_recurrence(n), paper_cnot_recurrence(n)
        ok &= tc <= 49 * scale and cc <= 116 * scale
        tr, cr = bound_ratio(count_resources(build_toom25(n)), n)
        ok &= tr <= 2.0
        lines.append(f"n={n} TC={tc}<={49 * scale:.0f} CC={cc}<={116 * scale:.0f} measured/bound={tr:.3f}")
    report(4, ok, "; ".join(lines) + " (ratio includes -1 point sign handling)")


def test_criterion_05_table2_spot_values():
    nv, cm = paper_cost("naive", 4), paper_cost("const_mult", 8)
    measured_cnot = count_resources(BUILDERS["naive"](8)).cnot_count
    ok = ((nv.qubit_count, nv.toffoli_count, nv.toffoli_depth) == (17, 52, 49)
          and (cm.toffoli_count, cm.toffoli_depth, cm.qubit_count) == (288, 64, 25)
          and paper_cost("naive", 8).cnot_count == 112 and measured_cnot == 112)
    report(5, ok, f"naive4 QC/TC/TD {nv.qubit_count}/{nv.toffoli_count}/{nv.toffoli_depth}; "
                  f"const8 TC/TD/QC {cm.toffoli_count}/{cm.toffoli_depth}/{cm.qubit_count}; naive8 CNOT {measured_cnot}")


def test_criterion_06_asymptotic_exponents():
    toom_tc = fit_exponent([(n, paper_cost("toom25", n).toffoli_count) for n in GRID])
    unopt = fit_exponent([(n, space_unoptimized(n)) for n in GRID])
    peaks, measured_peaks, depths = [], [], []
    for n in GRID:
        k = optimal_cut_level(tree_height(n))
        peaks.append((n, make_schedule(RecursionTree(n), k).peak_space))
        measured_peaks.append((n, make_schedule(RecursionTree(n, "measured"), k).peak_space))
        depths.append((n, depth_under_schedule(RecursionTree(n), k)))
    opt, opt_meas, depth = fit_exponent(peaks), fit_exponent(measured_peaks), fit_exponent(depths)
    kara = fit_exponent([(2 ** k, paper_cost("karatsuba", 2 ** k).toffoli_count) for k in range(3, 11)])
    kara_meas = fit_exponent([(2 ** k, mirror_cost(2 ** k, MultiplierConfig(method="karatsuba")).toffoli_count)
                              for k in range(3, 11)])
    checks = {
        "toom_tc": (toom_tc, LOG6_16, 0.05),
        "space_unopt": (unopt, LOG6_16, 0.05),
        "space_opt": (opt, 1.404, 0.10),
        "depth": (depth, 1.143, 0.10),
        "karatsuba_tc": (kara, LOG2_3, 0.05),
    }
    ok = all(abs(v - want) <= tol for v, want, tol in checks.values())
    detail = " ".join(f"{k}={v:.4f}(target {w:.3f}+-{t})" for k, (v, w, t) in checks.items())
    report(6, ok, f"{detail}; reported: space_opt_measured={opt_meas:.4f} karatsuba_tc_measured={kara_meas:.4f}")


def test_criterion_07_crossover():
    n = crossover()
    ok = n is not None and 50 <= n <= 5000
    report(7, ok, f"model TC crossover toom25 < naive at n={n} (published estimate: <300 bits)")


def test_criterion_08_pebble_validity():
    lines, ok = [], True
    for n in (6, 36, 216):
        for footprint in ("ideal", "measured"):
            tree = RecursionTree(n, footprint)
            k_star = optimal_cut_level(tree.N)
            peaks = {}
            for k in range(tree.N + 1):
                sched = make_schedule(tree, k)       # replay raises on any rule violation
                rep = replay(sched)
                ok &= rep.final_live == 0 and rep.product_live and rep.peak_space == sched.peak_space
                peaks[k] = sched.peak_space
            ok &= all(peaks[k_star] <= p for p in peaks.values())
            lines.append(f"n={n} {footprint} k*={k_star} peaks={peaks}")
    report(8, ok, "; ".join(lines))


def test_criterion_09_clifford_t_mapping():
    reports = [count_resources(build(n)) for build in BUILDERS.values() for n in (1, 6, 17)]
    reports += [paper_cost(m, n) for m in ("naive", "karatsuba", "toom25", "const_mult") for n in (1, 8, 300)]
    reports += [mirror_cost(n) for n in (6, 36)]
    ok = all(r.t_count == 7 * r.toffoli_count and (r.toffoli_depth is None or r.t_depth == 3 * r.toffoli_depth)
             for r in reports)
    report(9, ok, f"{len(reports)} reports checked (mirror reports carry no depth)")


def test_criterion_10_determinism():
    args = ["compare", "--methods", "naive,karatsuba,toom25,const_mult", "--bits", "4:40:6"]
    a, b = CliRunner().invoke(main, args), CliRunner().invoke(main, args)
    ok = a.exit_code == b.exit_code == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    report(10, ok, f"two compare runs, {len(a.stdout.splitlines())} lines, byte-identical={a.stdout == b.stdout}")
