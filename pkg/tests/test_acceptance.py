"""Acceptance suite: each test prints exactly one PASS/FAIL/SKIPPED line."""
import gc
import json
import time
import warnings
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from bezred import (
    BezierCurve, ContinuitySpec, GParams, ReductionProblem, construct, degree_elevate, gradient_residuals,
    load_curve, objective, oracle_normal_equations, reduce, save_curve, squared_error,
)
from bezred.cli import main
from bezred.reduction import boundary_points

from _util import FIVE_WEIGHTS, derivs_at, quad_sq_error, random_instance, signed_curvature, curvature, valid_orders


@pytest.fixture
def verdict(capsys):
    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPT {label}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok
    return emit


@pytest.fixture(scope="module")
def reductions():
    """Shared random instances reduced in all three modes."""
    rng = np.random.default_rng(20240611)
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for _ in range(40):
            prob = random_instance(rng, orders=(-1, 3))
            out.append((prob, {mode: reduce(prob, mode) for mode in ("c", "cg", "g")}))
    return out


def test_exact_recovery(verdict):
    rng = np.random.default_rng(1)
    worst_e2 = worst_pt = 0.0
    start = time.perf_counter()
    for _ in range(25):
        m = int(rng.integers(4, 9))
        n = int(rng.integers(m + 1, 14))
        d = int(rng.integers(1, 4))
        orders = valid_orders(m)
        k, l = orders[int(rng.integers(len(orders)))]
        orig = BezierCurve(rng.normal(size=(m + 1, d)))
        prob = ReductionProblem(degree_elevate(orig, n), m, ContinuitySpec(k, l))
        for mode in ("c", "cg", "g"):
            res = reduce(prob, mode)
            worst_e2 = max(worst_e2, res.e2)
            worst_pt = max(worst_pt, float(np.abs(res.reduced.points - orig.points).max()))
    elapsed = time.perf_counter() - start
    ok = worst_e2 <= 1e-9 and worst_pt <= 1e-8 and elapsed < 5.0
    assert verdict("exact recovery", ok, f"max e2 {worst_e2:.2e}, max point error {worst_pt:.2e}, {elapsed:.2f} s")


def test_oracle_equivalence(verdict):
    rng = np.random.default_rng(2)
    worst, count = 0.0, 0
    start = time.perf_counter()
    for m in range(2, 9):
        for n in sorted({m + 1, 13}):
            P = BezierCurve(rng.normal(size=(n + 1, 2)))
            for k, l in valid_orders(m):
                for w in FIVE_WEIGHTS:
                    prob = ReductionProblem(P, m, ContinuitySpec(k, l), w)
                    params = GParams(tuple(rng.uniform(0.5, 1.5, max(k, 0))),
                                     tuple(rng.uniform(0.5, 1.5, max(l, 0))))
                    R = construct(prob, params)
                    ref = oracle_normal_equations(prob, *boundary_points(prob, params))
                    err = np.abs(R.points[k + 1:m - l] - ref).max() / np.abs(ref).max()
                    worst = max(worst, float(err))
                    count += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 30.0
    assert verdict("oracle equivalence", ok, f"{count} cases, max relative deviation {worst:.2e}, {elapsed:.2f} s")


def test_gradient_consistency(verdict):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(25):
        prob = random_instance(rng, orders=(1, 3))
        x = np.concatenate([rng.uniform(0.6, 1.4, 1), rng.normal(size=prob.k - 1),
                            rng.uniform(0.6, 1.4, 1), rng.normal(size=prob.l - 1)])
        h = 1e-6
        fd = np.array([(objective(prob, x + h * e) - objective(prob, x - h * e)) / (2 * h) for e in np.eye(x.size)])
        res = gradient_residuals(prob, x)
        a, b = res / res[0], fd / fd[0]
        worst = max(worst, float(np.abs(a - b).max() / np.abs(b).max()))
    ok = worst <= 1e-5
    assert verdict("gradient consistency", ok, f"25 instances, max relative error {worst:.2e}")


def test_error_ordering(verdict, reductions):
    violations = 0
    worst = -np.inf
    for _, res in reductions:
        g, cg, c = res["g"].e2, res["cg"].e2, res["c"].e2
        worst = max(worst, g - cg, cg - c)
        if not (g <= cg + 1e-9 and cg <= c + 1e-9):
            violations += 1
    ok = violations == 0
    assert verdict("error ordering G <= CG <= C", ok,
                   f"{len(reductions)} instances, {violations} violations, largest excess {worst:.2e}")


def _end_checks(P, R, k, mode, t, pinned):
    """Relative violations of the continuity conditions at one end."""
    if k < 0:
        return [], False
    order = k
    dP, dR = derivs_at(P.points, t, order), derivs_at(R.points, t, order)
    errs = [np.linalg.norm(dR[0] - dP[0]) / max(1.0, np.linalg.norm(dP[0]))]
    if k < 1:
        return errs, True
    if np.linalg.norm(dP[1]) < 1e-8:
        return errs, False
    if mode == "c":
        for j in range(1, k + 1):
            errs.append(np.linalg.norm(dR[j] - dP[j]) / max(1.0, np.linalg.norm(dP[j])))
        return errs, True
    # tangent parallel with positive ratio (equal when pinned)
    ratio = dR[1] @ dP[1] / (dP[1] @ dP[1])
    if ratio <= 0:
        errs.append(np.inf)
    errs.append(np.linalg.norm(dR[1] - ratio * dP[1]) / np.linalg.norm(dR[1]))
    if pinned:
        errs.append(abs(ratio - 1.0))
    if k >= 2:
        if P.dim == 2:
            kp, kr = signed_curvature(dP[1], dP[2]), signed_curvature(dR[1], dR[2])
        else:
            kp, kr = curvature(dP[1], dP[2]), curvature(dR[1], dR[2])
        errs.append(abs(kr - kp) / max(abs(kp), 1e-12))
    return errs, True


def test_geometric_continuity(verdict, reductions):
    worst, checked = 0.0, 0
    for prob, res in reductions:
        for mode, r in res.items():
            spec = prob.hybrid().spec if mode == "cg" else prob.spec
            for t, order, pinned in ((0.0, prob.k, spec.p_fixed), (1.0, prob.l, spec.q_fixed)):
                errs, used = _end_checks(prob.source, r.reduced, order, mode, t, pinned)
                if used:
                    worst = max(worst, max(errs))
                    checked += 1
    ok = worst <= 1e-6
    assert verdict("geometric continuity", ok, f"{checked} endpoint checks, max relative violation {worst:.2e}")


def test_closed_form_error_vs_quadrature(verdict):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(25):
        n = int(rng.integers(2, 14))
        m = int(rng.integers(1, n))
        d = int(rng.integers(1, 4))
        P, R = BezierCurve(rng.normal(size=(n + 1, d))), BezierCurve(rng.normal(size=(m + 1, d)))
        for w in FIVE_WEIGHTS:
            ref = quad_sq_error(P, R, w)
            worst = max(worst, abs(squared_error(P, R, w) - ref) / ref)
    ok = worst <= 1e-8
    assert verdict("closed-form error vs quadrature", ok, f"25 pairs x 5 weights, max relative error {worst:.2e}")


def test_phase_b_linear_scaling(verdict):
    rng = np.random.default_rng(0)
    cases = {}
    for n in (64, 128, 256):
        prob = ReductionProblem(BezierCurve(rng.normal(size=(n + 1, 3))), 8, ContinuitySpec(3, 3), max_degree=None)
        cases[n] = (prob, prob.phi())
    params = GParams((1.1, 0.3, 0.1), (0.9, -0.2, 0.4))
    best = dict.fromkeys(cases, np.inf)
    rounds = []
    gc.disable()
    try:
        # each round times all sizes back to back, so a ratio taken within a
        # round sees the same machine state; the median over rounds then
        # discards rounds hit by scheduler bursts
        for _ in range(60):
            per_call = {}
            for n, (prob, phi) in cases.items():
                t0 = time.perf_counter()
                for _ in range(20):
                    construct(prob, params, phi)
                per_call[n] = (time.perf_counter() - t0) / 20
                best[n] = min(best[n], per_call[n])
            rounds.append((per_call[128] / per_call[64], per_call[256] / per_call[128]))
    finally:
        gc.enable()
    ratios = tuple(float(r) for r in np.median(rounds, axis=0))
    ok = all(1.6 <= r <= 2.6 for r in ratios)
    times = ", ".join(f"n={n}: {v * 1e6:.0f} us" for n, v in best.items())
    assert verdict("phase B linear scaling", ok, f"{times}; ratios {ratios[0]:.2f}, {ratios[1]:.2f}")


def test_reference_curve_values(capsys):
    with capsys.disabled():
        print("\nACCEPT reference-curve error values: SKIPPED (the degree-13 and degree-11 "
              "benchmark control points are not distributed with this package)")
    pytest.skip("benchmark control points unavailable")


def test_cli_contract(verdict, tmp_path, capsys):
    failures = []

    def cli(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err

    rng = np.random.default_rng(9)
    base = degree_elevate(BezierCurve(rng.normal(size=(4, 2))), 12)
    curve = BezierCurve(base.points + 0.2 * rng.normal(size=base.points.shape))
    src = tmp_path / "in.json"
    save_curve(curve, src)
    if load_curve(src).points.tobytes() != curve.points.tobytes():
        failures.append("round-trip")

    args = ["reduce", "--input", src, "--degree", 8, "--mode", "g", "-k", 2, "-l", 2, "--weight", "cheb1"]
    outs = []
    for i in range(2):
        code, out, _ = cli(*args, "--output", tmp_path / f"r{i}.json", "--svg", tmp_path / "p.svg")
        if code != 0:
            failures.append(f"exit {code} on valid input")
        rep = json.loads(out)
        rep.pop("timings")
        rep.pop("output")
        outs.append(rep)
    if outs[0] != outs[1] or (tmp_path / "r0.json").read_bytes() != (tmp_path / "r1.json").read_bytes():
        failures.append("determinism")

    code, out, _ = cli("verify", "--input", src, "--against", tmp_path / "r0.json", "--weight", "cheb1")
    if code != 0 or abs(json.loads(out)["e2"] - outs[0]["e2"]) > 1e-12:
        failures.append("verify consistency")

    try:
        root = ET.parse(tmp_path / "p.svg").getroot()
        if not root.tag.endswith("svg"):
            failures.append("svg root")
    except ET.ParseError:
        failures.append("svg xml")

    if cli("reduce", "--input", src, "--degree", 8, "-k", 4)[0] != 2:
        failures.append("exit 2")
    if cli("reduce", "--input", tmp_path / "absent.json", "--degree", 8)[0] != 3:
        failures.append("exit 3")
    save_curve(BezierCurve([[0, 0], [0, 0], [1, 2], [2, -1], [3, 1], [4, 0], [5, 1]]), tmp_path / "cusp.json")
    if cli("reduce", "--input", tmp_path / "cusp.json", "--degree", 5, "--mode", "cg", "-k", 1, "-l", 1)[0] != 4:
        failures.append("exit 4")

    ok = not failures
    assert verdict("CLI contract", ok, "round-trip, exit codes 0/2/3/4, determinism, verify, svg"
                   if ok else "failed: " + ", ".join(failures))
