"""Checks of the quantitative statements about the three weighted-shift systems.

Each ``verify_*`` function returns a :class:`ClaimReport` holding every
measured value next to the value it was compared with. Reports are
deterministic: random panels come from a seeded generator whose seed is
stored in the report parameters.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import weights as W
from .fockspace import HatVector, SparseVector, harmonic_test_vector, random_sparse_vector
from .hamilton import GramForm, gram
from .shiftop import FamilyMember, log_norm_power, operator_log_norm
from .spectral import (
    DEFAULT_THRESHOLD,
    S,
    S0,
    Splus,
    ljapunov_upper,
    membership,
    spectral_radius_estimate,
    trajectory,
    verdict_from_trajectory,
)

SHIFT = FamilyMember.SHIFT
INVERSE = FamilyMember.INVERSE
ADJINV = FamilyMember.ADJOINT_INVERSE


@dataclass
class ClaimReport:
    claim_id: str
    passed: bool
    measured: list[tuple[str, float]]
    tolerance: float
    parameters: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["measured"] = [[k, v] for k, v in self.measured]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def table(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{self.claim_id}: {status} (tolerance {self.tolerance:g})"]
        width = max((len(k) for k, _ in self.measured), default=0)
        lines += [f"  {k:<{width}}  {v!r}" for k, v in self.measured]
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


class _Checks:
    """Accumulates labelled comparisons into a single pass flag."""

    def __init__(self):
        self.measured: list[tuple[str, float]] = []
        self.ok = True
        self.failures = 0

    def record(self, label: str, value: float) -> None:
        self.measured.append((label, float(value)))

    def expect(self, label: str, value: float, expected: float, tol: float, rel: bool = False):
        err = abs(value - expected)
        if rel:
            err /= max(abs(expected), 1e-300)
        good = bool(err <= tol)
        self.measured.append((label, float(value)))
        self.measured.append((label + " expected", float(expected)))
        self._mark(good)
        return good

    def require(self, good: bool) -> bool:
        self._mark(bool(good))
        return bool(good)

    def _mark(self, good: bool) -> None:
        if not good:
            self.ok = False
            self.failures += 1


def verify_L2_1(c: float = 1.0, k_max: int = 2, window: tuple[int, int] = (-10**4, 10**4)) -> ClaimReport:
    """Oscillatory weights: bounded one-step ratio and exact peaks/troughs.

    Checks sup |ln(u_{n+1}/u_n)| <= (1 + pi/(2 ln 2)) ln(c+2) over ``window``,
    then ln u at +-(2^(1+4k)-1) equals +(that index) ln(c+2) and at
    +-(2^(3+4k)-1) equals -(that index) ln(c+2), for k = 1..k_max.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    tol = 1e-9
    seq = W.krein_oscillatory(c)
    base = math.log(c + 2.0)
    chk = _Checks()
    bound = W.KREIN_SLOPE_BOUND * base
    sup = W.one_step_ratio_bound(seq, window)
    chk.record("one-step log-ratio sup", sup)
    chk.record("one-step log-ratio bound", bound)
    chk.require(sup <= bound)
    for k in range(1, k_max + 1):
        nk, mk = W.krein_peak_indices(k)
        for sgn in (1, -1):
            chk.expect(f"ln u[{sgn * nk}]", W.log_weight(seq, sgn * nk), nk * base, tol, rel=True)
            chk.expect(f"ln u[{sgn * mk}]", W.log_weight(seq, sgn * mk), -mk * base, tol, rel=True)
    return ClaimReport(
        "L2-1", chk.ok, chk.measured, tol,
        {"c": c, "k_max": k_max, "window": list(window)},
    )


def verify_R3_1(
    c: float = 1.0,
    n_range: tuple[int, int] = (-64, 64),
    N_range: tuple[int, int] = (-64, 64),
) -> ClaimReport:
    """||V^N b_n|| = (2c)^(|n| - |n+N|) on the whole grid, and r(V) = 2c."""
    tol = 1e-12
    seq = W.geometric_valley(c)
    l2c = math.log(2.0 * c)
    chk = _Checks()
    worst = 0.0
    for n in range(n_range[0], n_range[1] + 1):
        b = SparseVector.basis(n)
        for N in range(N_range[0], N_range[1] + 1):
            got = log_norm_power(seq, SHIFT, N, b)
            worst = max(worst, abs(got - (abs(n) - abs(n + N)) * l2c))
    chk.record("max |log-norm error| over grid", worst)
    chk.require(worst <= tol)
    n_max = max(abs(N_range[0]), abs(N_range[1]), 1)
    for member in (SHIFT, INVERSE):
        r = spectral_radius_estimate(seq, member, n_max)
        chk.expect(f"r({member.value}) at N={n_max}", r, 2.0 * c, 1e-9, rel=True)
    return ClaimReport(
        "R3-1", chk.ok, chk.measured, tol,
        {"c": c, "n_range": list(n_range), "N_range": list(N_range)},
    )


def verify_R3_2(c: float = 1.0, M: int = 4096, n_max: int = 2048) -> ClaimReport:
    """Two-sided growth of ||V^N f|| for the truncated harmonic vector f.

    The untruncated bound (2c)^(2N)/(N+1) becomes (2c)^(2N) (1/(N+1) - 1/(M+1))
    once f is cut at |n| <= M, because sum_{N<n<=M} 1/n^2 telescopes below
    1/(N+1) - 1/(M+1). Also checks ||V^N f|| = ||V^-N f||.
    """
    if not 1 <= n_max <= M // 2:
        raise ValueError("need 1 <= n_max <= M/2")
    tol = 1e-12
    seq = W.geometric_valley(c)
    f = harmonic_test_vector(M)
    l2c = math.log(2.0 * c)
    chk = _Checks()
    min_margin = math.inf
    worst_sym = 0.0
    violations = 0
    for N in range(1, n_max + 1):
        fwd = log_norm_power(seq, SHIFT, N, f)
        bwd = log_norm_power(seq, SHIFT, -N, f)
        lower = 2 * N * l2c + math.log(1.0 / (N + 1) - 1.0 / (M + 1))
        margin = 2.0 * fwd - lower
        min_margin = min(min_margin, margin)
        if margin <= 0.0:
            violations += 1
        worst_sym = max(worst_sym, abs(fwd - bwd))
    chk.record("min (ln||V^N f||^2 - ln bound)", min_margin)
    chk.record("bound violations", violations)
    chk.require(violations == 0)
    chk.record("max |ln||V^N f|| - ln||V^-N f|||", worst_sym)
    chk.require(worst_sym <= tol)
    return ClaimReport(
        "R3-2", chk.ok, chk.measured, tol,
        {"c": c, "M": M, "n_max": n_max},
        ["truncation-corrected bound (2c)^(2N) (1/(N+1) - 1/(M+1))"],
    )


def verify_L3_2(
    n_max: int = 1000,
    window: tuple[int, int] | None = None,
    horizon: int = 512,
    threshold: float = math.log(10.0),
) -> ClaimReport:
    """Hybrid weights: ||W^N|| = 2^N, ||W^{*-N}|| = N+1, r = 2 and 1, and set facts.

    ``window=None`` uses the exact per-family window for each N.
    """
    tol = 1e-12
    seq = W.hybrid_decay_harmonic()
    chk = _Checks()
    worst_fwd = worst_adj = 0.0
    for N in range(1, n_max + 1):
        worst_fwd = max(worst_fwd, abs(operator_log_norm(seq, SHIFT, N, window) - N * math.log(2.0)))
        worst_adj = max(worst_adj, abs(operator_log_norm(seq, ADJINV, N, window) - math.log(N + 1.0)))
    chk.record("max |ln||W^N|| - N ln 2|", worst_fwd)
    chk.record("max |ln||W^{*-N}|| - ln(N+1)|", worst_adj)
    chk.require(worst_fwd <= tol and worst_adj <= tol)
    chk.expect(f"r(W) at N={n_max}", spectral_radius_estimate(seq, SHIFT, n_max, window), 2.0, 1e-9, rel=True)
    chk.expect(
        f"r(W^*-1) at N={n_max}",
        spectral_radius_estimate(seq, ADJINV, n_max, window),
        (n_max + 1.0) ** (1.0 / n_max),
        1e-6,
    )
    s0_fail = 0
    for n in range(-16, 17):
        if membership(seq, SHIFT, SparseVector.basis(n), S0, horizon, threshold).refuted:
            s0_fail += 1
    chk.record("basis vectors |n|<=16 not S0-consistent for W", s0_fail)
    chk.require(s0_fail == 0)
    v = membership(seq, ADJINV, SparseVector.basis(0), S, horizon, threshold)
    chk.record("b0 under W^*-1: certificate logNorm", v.certificate[-1][1])
    chk.record("b0 under W^*-1: certificate N", v.certificate[-1][0])
    chk.require(v.refuted)
    return ClaimReport(
        "L3-2", chk.ok, chk.measured, tol,
        {"n_max": n_max, "window": None if window is None else list(window),
         "horizon": horizon, "threshold": threshold},
    )


def verify_Th3_2_structure(
    horizon: int = 512, threshold: float = math.log(10.0), radius: int = 16
) -> ClaimReport:
    """Componentwise split of the lift of W with L = {0}(+)H0 and M = H0(+){0}.

    b_n(+)0 (|n| <= radius) must be S0-consistent; 0(+)b_n (0 <= n <= radius)
    must refute S. For 0(+)b_n with n < 0, ||W^{*-N} b_n|| = 2^n (N+n+1)
    needs N of order 2^|n| to climb back above 1, beyond any desk horizon,
    so those are reported but not required. Mixed vectors b_n(+)b_m must
    refute S0 (the bottom part spoils it), and both L and M are J-neutral.
    """
    seq = W.hybrid_decay_harmonic()
    chk = _Checks()
    s0_fail = 0
    for n in range(-radius, radius + 1):
        h = HatVector(SparseVector.basis(n), SparseVector.zero())
        if membership(seq, SHIFT, h, S0, horizon, threshold).refuted:
            s0_fail += 1
    chk.record(f"b_n(+)0, |n|<={radius}: S0 failures", s0_fail)
    chk.require(s0_fail == 0)

    s_fail = 0
    for n in range(0, radius + 1):
        h = HatVector(SparseVector.zero(), SparseVector.basis(n))
        if not membership(seq, SHIFT, h, S, horizon, threshold).refuted:
            s_fail += 1
    chk.record(f"0(+)b_n, 0<=n<={radius}: S not refuted", s_fail)
    chk.require(s_fail == 0)
    neg_refuted = sum(
        membership(seq, SHIFT, HatVector(SparseVector.zero(), SparseVector.basis(n)), S,
                   horizon, threshold).refuted
        for n in range(-radius, 0)
    )
    chk.record(f"0(+)b_n, n<0: S refuted at horizon (informational)", neg_refuted)

    mixed_bad = 0
    for n in range(-4, 5):
        h = HatVector(SparseVector.basis(n), SparseVector.basis(n))
        top = membership(seq, SHIFT, HatVector(h.top, SparseVector.zero()), S0, horizon, threshold)
        whole = membership(seq, SHIFT, h, S0, horizon, threshold)
        if top.refuted or not whole.refuted:
            mixed_bad += 1
    chk.record("b_n(+)b_n split violations", mixed_bad)
    chk.require(mixed_bad == 0)

    worst = 0.0
    for n in range(-radius, radius + 1):
        for m in range(-radius, radius + 1):
            bn, bm, z = SparseVector.basis(n), SparseVector.basis(m), SparseVector.zero()
            worst = max(worst, abs(gram(GramForm.JFORM, HatVector(bn, z), HatVector(bm, z))))
            worst = max(worst, abs(gram(GramForm.JFORM, HatVector(z, bn), HatVector(z, bm))))
    chk.record("max |Jform| on H0(+)0 and 0(+)H0", worst)
    chk.require(worst == 0.0)
    return ClaimReport(
        "Th3-2", chk.ok, chk.measured, 0.0,
        {"horizon": horizon, "threshold": threshold, "radius": radius},
    )


def growth_panel(seed: int = 20240101, size: int = 22) -> list[HatVector]:
    """Fixed panel of nonzero hat vectors: basis, random sparse, harmonic."""
    z = SparseVector.zero()
    panel = [HatVector(SparseVector.basis(n), z) for n in (-5, 0, 5)]
    panel += [HatVector(z, SparseVector.basis(n)) for n in (-5, 0, 5)]
    for M in (8, 64):
        f = harmonic_test_vector(M)
        panel += [HatVector(f, z), HatVector(z, f), HatVector(f, f)]
    rng = np.random.default_rng(seed)
    while len(panel) < size:
        kind = len(panel) % 3
        top = random_sparse_vector(rng, (-16, 16)) if kind != 1 else z
        bottom = random_sparse_vector(rng, (-16, 16)) if kind != 0 else z
        panel.append(HatVector(top, bottom))
    return panel


def verify_Th2_1_growth(
    c: float = 1.0,
    horizon: int = 511,
    seed: int = 20240101,
    panel_size: int = 22,
    threshold: float | None = None,
) -> ClaimReport:
    """No nonzero vector grows slower than (c+1)^N under the oscillatory lift.

    Growth against a = c+1 for the unscaled operator is the same test as
    a = (c+1)/c for the operator divided by c. Each panel vector must be
    refuted in forward time (lift of U) and backward time (lift of U^-1).
    Also reports the max logNorm/N of b0(+)0, expected ln(c+2).
    """
    thr = DEFAULT_THRESHOLD if threshold is None else threshold
    seq = W.krein_oscillatory(c)
    a = c + 1.0
    chk = _Checks()
    b0 = HatVector(SparseVector.basis(0), SparseVector.zero())
    est = ljapunov_upper(trajectory(seq, SHIFT, b0, horizon))
    chk.expect("lambdaHat(b0(+)0)", est.lambda_hat, math.log(c + 2.0), 1e-9, rel=True)
    chk.record("lambdaHat achieved at N", est.achieved_at)
    chk.record("regression slope", est.regression_slope)
    panel = growth_panel(seed, panel_size)
    unrefuted = 0
    first_cert = []
    for h in panel:
        for member in (SHIFT, INVERSE):
            traj = trajectory(seq, member, h, horizon)
            v = verdict_from_trajectory(traj, Splus(a), thr, h.log_norm())
            if not v.refuted:
                unrefuted += 1
            first_cert.append(next(n for n, x in v.certificate if x > thr) if v.refuted else -1)
    chk.record("panel size", len(panel))
    chk.record("unrefuted (vector, direction) pairs", unrefuted)
    chk.record("latest first-crossing N", max(first_cert))
    chk.require(unrefuted == 0 and len(panel) >= 20)
    return ClaimReport(
        "Th2-1", chk.ok, chk.measured, 1e-9,
        {"c": c, "a": a, "horizon": horizon, "seed": seed, "panel_size": panel_size,
         "threshold": thr},
    )


CLAIMS = {
    "L2-1": verify_L2_1,
    "R3-1": verify_R3_1,
    "R3-2": verify_R3_2,
    "L3-2": verify_L3_2,
    "Th3-2": verify_Th3_2_structure,
    "Th2-1": verify_Th2_1_growth,
}
