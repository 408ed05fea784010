"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line shown in the pytest terminal summary.
"""
import math

import numpy as np
import pytest

from shiftlab import claims
from shiftlab import continuum as C
from shiftlab import weights as W
from shiftlab.fockspace import HatVector, SparseVector, harmonic_test_vector, inner, random_hat_vector, random_sparse_vector
from shiftlab.hamilton import GramForm, check_form_invariance, gram
from shiftlab.shiftop import FamilyMember, apply_power, log_norm_power, operator_log_norm
from shiftlab.spectral import (
    S,
    S0,
    Splus,
    ljapunov_upper,
    membership,
    orthogonality_witness,
    spectral_radius_estimate,
    trajectory,
    verdict_from_trajectory,
)

from conftest import ACCEPTANCE_LINES

SHIFT, INVERSE, ADJOINT, ADJINV = (FamilyMember.SHIFT, FamilyMember.INVERSE,
                                   FamilyMember.ADJOINT, FamilyMember.ADJOINT_INVERSE)
LN2, LN3, LN10 = math.log(2), math.log(3), math.log(10)
b = SparseVector.basis
Z = SparseVector.zero()
FAMILIES = {
    "krein(c=1)": W.krein_oscillatory(1.0),
    "geometric(c=1)": W.geometric_valley(1.0),
    "hybrid": W.hybrid_decay_harmonic(),
}
SEED = 20240101


def report(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_ac01_krein_peaks():
    seq = W.krein_oscillatory(1.0)
    worst = 0.0
    expected_idx = [(31, 127), (511, 2047), (8191, 32767)]
    for k in (1, 2, 3):
        nk, mk = W.krein_peak_indices(k)
        assert (nk, mk) == expected_idx[k - 1]
        worst = max(worst, abs(W.log_weight(seq, nk) - nk * LN3) / (nk * LN3))
        worst = max(worst, abs(W.log_weight(seq, mk) + mk * LN3) / (mk * LN3))
    report("AC1 oscillatory peaks/troughs k=1..3", worst <= 1e-9, f"max rel err {worst:.3g} <= 1e-9")


def test_ac02_ratio_bound():
    seq = W.krein_oscillatory(1.0)
    bound = (1 + math.pi / (2 * LN2)) * LN3
    n = np.arange(-10**5, 10**5 + 1)
    violations = int(np.sum(np.abs(W.log_ratio(seq, n, 1)) > bound))
    sup = W.one_step_ratio_bound(seq, (-10**5, 10**5))
    report("AC2 one-step ratio bound on [-1e5, 1e5]", violations == 0 and sup <= bound,
           f"sup {sup:.6f} <= {bound:.6f}, violations {violations}")


def test_ac03_geometric_norm_identity():
    worst, radii = 0.0, []
    for c in (1.0, 2.0):
        seq = W.geometric_valley(c)
        l2c = math.log(2 * c)
        for n in range(-64, 65):
            for N in range(-64, 65):
                got = log_norm_power(seq, SHIFT, N, b(n))
                worst = max(worst, abs(got - (abs(n) - abs(n + N)) * l2c))
        r = spectral_radius_estimate(seq, SHIFT, 64)
        radii.append(abs(r - 2 * c) / (2 * c))
    ok = worst <= 1e-12 and max(radii) <= 1e-9
    report("AC3 ||V^N b_n|| identity, r(V)=2c", ok,
           f"max log err {worst:.3g} <= 1e-12; r rel err {max(radii):.3g} <= 1e-9")


def test_ac04_hybrid_norms():
    seq = W.hybrid_decay_harmonic()
    wf = wa = 0.0
    for N in range(1, 1001):
        wf = max(wf, abs(operator_log_norm(seq, SHIFT, N) - N * LN2))
        wa = max(wa, abs(operator_log_norm(seq, ADJINV, N) - math.log(N + 1)))
    r_fwd = spectral_radius_estimate(seq, SHIFT, 1000)
    r_adj = spectral_radius_estimate(seq, ADJINV, 1000)
    ok = (wf <= 1e-12 and wa <= 1e-12 and abs(r_fwd - 2) / 2 <= 1e-9
          and abs(r_adj - 1001 ** (1 / 1000)) <= 1e-6 and abs(r_adj - 1.00693) <= 1e-5)
    report("AC4 ||W^N||=2^N, ||W^{*-N}||=N+1, radii", ok,
           f"log errs {wf:.3g}, {wa:.3g} <= 1e-12; r(W)={r_fwd!r}; r(W*-1)={r_adj:.8f}")


def test_ac05_harmonic_growth():
    seq = W.geometric_valley(1.0)
    f = harmonic_test_vector(4096)
    violations, worst_sym = 0, 0.0
    for N in range(1, 2049):
        fwd = log_norm_power(seq, SHIFT, N, f)
        bwd = log_norm_power(seq, INVERSE, N, f)
        if 2 * fwd < N * math.log(4) + math.log(1 / (N + 1) - 1 / 4097):
            violations += 1
        worst_sym = max(worst_sym, abs(fwd - bwd))
    report("AC5 truncated harmonic growth, M=4096", violations == 0 and worst_sym <= 1e-12,
           f"bound violations {violations}; max |fwd - bwd| {worst_sym:.3g} <= 1e-12")


def test_ac06_j_unitarity():
    rng = np.random.default_rng(SEED)
    pairs = [(random_hat_vector(rng, (-32, 32)), random_hat_vector(rng, (-32, 32))) for _ in range(100)]
    worst = 0.0
    for seq in FAMILIES.values():
        for N in range(-32, 33):
            worst = max(worst, check_form_invariance(seq, N, pairs, relative=True))
    neutral = max(
        abs(gram(GramForm.JFORM, HatVector(a.top, Z), HatVector(c.top, Z))) for a, c in pairs
    )
    report("AC6 J-form and symplectic form preserved", worst <= 1e-9 and neutral == 0.0,
           f"max rel deviation {worst:.3g} <= 1e-9; max |Jform| on H0(+)0 = {neutral}")


def test_ac07_ljapunov_phenomenon():
    seq = W.krein_oscillatory(1.0)
    est = ljapunov_upper(trajectory(seq, SHIFT, HatVector(b(0), Z), 511))
    value_ok = abs(est.lambda_hat - LN3) <= 1e-9 * LN3
    at_ok = est.achieved_at == 31
    panel = claims.growth_panel(SEED)
    unrefuted = 0
    for h in panel:
        for member in (SHIFT, INVERSE):
            v = verdict_from_trajectory(trajectory(seq, member, h, 511), Splus(2.0),
                                        initial_log_norm=h.log_norm())
            unrefuted += not v.refuted
    ok = value_ok and at_ok and unrefuted == 0 and len(panel) >= 20
    report("AC7 lambdaHat = ln 3 at N=31; S+(a=2) refuted on panel", ok,
           f"lambdaHat {est.lambda_hat!r} (ln 3 = {LN3!r}), achievedAt {est.achieved_at} "
           f"(expected 31); panel {len(panel)} vectors x 2 directions, unrefuted {unrefuted}")


def test_ac08_hybrid_lift_structure():
    seq = W.hybrid_decay_harmonic()
    s0_fail = sum(
        membership(seq, SHIFT, HatVector(b(n), Z), S0, 512, LN10).refuted for n in range(-16, 17)
    )
    s_fail = sum(
        not membership(seq, SHIFT, HatVector(Z, b(n)), S, 512, LN10).refuted for n in range(0, 17)
    )
    rng = np.random.default_rng(SEED)
    violations = 0
    for _ in range(100):
        x, y = random_sparse_vector(rng), random_sparse_vector(rng)
        N = int(rng.integers(-64, 65))
        lhs, rhs = orthogonality_witness(seq, x, y, N)
        violations += lhs > rhs * (1 + 1e-9)
    ok = s0_fail == 0 and s_fail == 0 and violations == 0
    report("AC8 lift of W: S0 on H0(+)0, S refuted on 0(+)H0, witness", ok,
           f"S0 failures {s0_fail}/33; S unrefuted {s_fail}/17 (0<=n<=16); "
           f"witness violations {violations}/100")


def test_ac09_operator_algebra():
    rng = np.random.default_rng(SEED)
    failures = {}
    for name, seq in FAMILIES.items():
        bad = 0
        for _ in range(100):
            v, y = random_sparse_vector(rng), random_sparse_vector(rng)
            member = list(FamilyMember)[int(rng.integers(4))]
            N1, N2 = (int(k) for k in rng.integers(-32, 33, size=2))
            semi = apply_power(seq, member, N1, apply_power(seq, member, N2, v)).allclose(
                apply_power(seq, member, N1 + N2, v), rtol=1e-12)
            inv = apply_power(seq, INVERSE, N1, apply_power(seq, SHIFT, N1, v)).allclose(v, rtol=1e-12)
            Tv = apply_power(seq, SHIFT, N1, v)
            adj = abs(inner(Tv, y) - inner(v, apply_power(seq, ADJOINT, N1, y))) <= 1e-12 * Tv.norm() * y.norm()
            bad += not (semi and inv and adj)
        failures[name] = bad
    report("AC9 semigroup / inversion / adjoint, 100 cases per family",
           all(v == 0 for v in failures.values()), f"failures {failures}")


def test_ac10_continuum():
    p = C.gaussian_profile(10.0, 1e-2)
    group = C.group_residual(C.symmetric_decay(), p, 1.5, 0.5)
    ratios = {}
    for case in ("a", "b", "c"):
        w = C.weight_function(case)
        ratios[case] = C.generator_consistency(w, p, 0.1) / C.generator_consistency(w, p, 0.05)
    ok = group <= 1e-6 and all(1.8 <= r <= 2.2 for r in ratios.values())
    report("AC10 continuum group property and first-order generator", ok,
           f"group residual {group:.3g} <= 1e-6; h-halving ratios "
           + ", ".join(f"{k}={v:.3f}" for k, v in ratios.items()))
