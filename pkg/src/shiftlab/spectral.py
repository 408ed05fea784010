"""Growth trajectories, Ljapunov upper-index surrogates, spectral radii and
horizon-limited membership verdicts for the sets

    S0(T)  = {x : ||T^N x|| -> 0}
    S(T)   = {x : sup_N ||T^N x|| < inf}
    S+(T)  = {x : ||T^N x|| <= C a^N for every a > 1}

None of these limits is computable. Every verdict here is a statement about
N = 1..horizon only, and carries the samples that justify it.
"""
from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .fockspace import HatVector, SparseVector, inner
from .hamilton import hat_log_norm_power
from .shiftop import FamilyMember, log_norm_power, operator_log_norm
from .weights import WeightSequence

Vector = Union[SparseVector, HatVector]

DEFAULT_THRESHOLD = math.log(1e6)
#: Relative slack under which two logNorm/N ratios count as a tie.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class GrowthTrajectory:
    steps: np.ndarray
    log_norms: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.steps.shape != self.log_norms.shape or self.steps.size == 0:
            raise ValueError("trajectory needs matching, nonempty sample arrays")
        if np.any(np.diff(self.steps) <= 0):
            raise ValueError("steps must be strictly increasing")
        if not np.all(np.isfinite(self.log_norms)):
            raise ValueError("log-norms must be finite")

    @property
    def horizon(self) -> int:
        return int(self.steps[-1])

    def samples(self) -> list[tuple[int, float]]:
        return list(zip(self.steps.tolist(), self.log_norms.tolist()))

    def to_csv(self, sep: str = ",", header: bool = True) -> str:
        buf = io.StringIO()
        if header:
            buf.write(f"N{sep}logNorm\n")
        for n, x in self.samples():
            buf.write(f"{n}{sep}{x!r}\n")
        return buf.getvalue()


def _log_norm(seq, member, N, v) -> float:
    if isinstance(v, HatVector):
        return hat_log_norm_power(seq, N, v, member)
    return log_norm_power(seq, member, N, v)


def _initial_log_norm(v: Vector) -> float:
    return v.log_norm()


def trajectory(
    seq: WeightSequence, member: FamilyMember, v: Vector, horizon: int
) -> GrowthTrajectory:
    """ln ||T^N v|| for N = 1..horizon.

    ``v`` may be a HatVector, in which case T is the lift of ``member``.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    steps = np.arange(1, horizon + 1, dtype=np.int64)
    logs = np.array([_log_norm(seq, member, int(N), v) for N in steps], dtype=np.float64)
    prov = {
        "sequence": seq.describe(),
        "member": member.value,
        "lifted": isinstance(v, HatVector),
    }
    return GrowthTrajectory(steps, logs, prov)


@dataclass(frozen=True)
class LjapunovEstimate:
    lambda_hat: float
    achieved_at: int
    regression_slope: float
    horizon: int


def ljapunov_upper(traj: GrowthTrajectory) -> LjapunovEstimate:
    """max_N logNorm/N as the finite-horizon stand-in for the limsup.

    The least-squares slope of logNorm against N is reported next to it and
    is NaN for a single sample. For oscillating weights the two differ
    sharply, which is the point of reporting both.
    """
    ratios = traj.log_norms / traj.steps
    best = float(np.max(ratios))
    ties = ratios >= best - TIE_RTOL * max(1.0, abs(best))
    k = int(np.argmax(ties))
    if traj.steps.size >= 2:
        slope = float(np.polyfit(traj.steps.astype(np.float64), traj.log_norms, 1)[0])
    else:
        slope = math.nan
    return LjapunovEstimate(best, int(traj.steps[k]), slope, traj.horizon)


def spectral_radius_estimate(
    seq: WeightSequence,
    member: FamilyMember,
    n_max: int,
    window: tuple[int, int] | None = None,
) -> float:
    """||T^{n_max}||^{1/n_max} using the per-family window policy by default."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    return math.exp(operator_log_norm(seq, member, n_max, window) / n_max)


class Decision(enum.Enum):
    CONSISTENT = "ConsistentAtHorizon"
    REFUTED = "RefutedAtHorizon"


@dataclass(frozen=True)
class TargetSet:
    kind: str  # "S0", "S" or "S+"
    a: float | None = None

    def __post_init__(self):
        if self.kind not in ("S0", "S", "S+"):
            raise ValueError(f"unknown set {self.kind!r}")
        if self.kind == "S+" and not (self.a is not None and self.a > 1):
            raise ValueError("S+ needs a growth base a > 1")

    def __str__(self) -> str:
        return f"S+(a={self.a})" if self.kind == "S+" else self.kind


S0 = TargetSet("S0")
S = TargetSet("S")


def Splus(a: float) -> TargetSet:
    return TargetSet("S+", float(a))


@dataclass(frozen=True)
class MembershipVerdict:
    target: TargetSet
    decision: Decision
    certificate: tuple[tuple[int, float], ...]
    horizon: int
    threshold: float

    @property
    def refuted(self) -> bool:
        return self.decision is Decision.REFUTED

    def to_dict(self) -> dict:
        return {
            "set": str(self.target),
            "decision": self.decision.value,
            "certificate": [list(s) for s in self.certificate],
            "horizon": self.horizon,
            "threshold": self.threshold,
        }


def _record_highs(steps: np.ndarray, values: np.ndarray) -> tuple[tuple[int, float], ...]:
    """Samples that set a new strict running maximum; strictly increasing."""
    out = []
    best = -math.inf
    for n, x in zip(steps.tolist(), values.tolist()):
        if x > best:
            out.append((n, x))
            best = x
    return tuple(out)


def verdict_from_trajectory(
    traj: GrowthTrajectory,
    target: TargetSet,
    threshold: float = DEFAULT_THRESHOLD,
    initial_log_norm: float = 0.0,
) -> MembershipVerdict:
    """Decide membership from samples, measuring growth against ||v||.

    S and S+(a) are refuted when (logNorm - N ln a) - ln||v|| exceeds
    ``threshold`` somewhere; the certificate is the strictly increasing run
    of record highs ending at the extremal sample.

    S0 is consistent when the final sample sits more than ``threshold``
    below the larger of ln||v|| and the trajectory's peak, and the last
    quarter of samples is strictly decreasing. Otherwise the certificate is
    the final sample together with the peak it failed to drop below.
    """
    steps, logs = traj.steps, traj.log_norms
    if target.kind == "S0":
        peak_k = int(np.argmax(logs))
        reference = max(initial_log_norm, float(logs[peak_k]))
        tail = logs[-max(2, steps.size // 4):]
        decreasing = tail.size < 2 or bool(np.all(np.diff(tail) < 0))
        ok = logs[-1] < reference - threshold and decreasing
        cert = ((int(steps[peak_k]), float(logs[peak_k])), (int(steps[-1]), float(logs[-1])))
        decision = Decision.CONSISTENT if ok else Decision.REFUTED
        return MembershipVerdict(target, decision, cert, traj.horizon, threshold)

    rate = 0.0 if target.kind == "S" else math.log(target.a)
    excess = logs - steps * rate - initial_log_norm
    highs = _record_highs(steps, excess)
    if highs[-1][1] > threshold:
        return MembershipVerdict(target, Decision.REFUTED, highs, traj.horizon, threshold)
    return MembershipVerdict(target, Decision.CONSISTENT, (highs[-1],), traj.horizon, threshold)


def membership(
    seq: WeightSequence,
    member: FamilyMember,
    v: Vector,
    target: TargetSet,
    horizon: int,
    threshold: float = DEFAULT_THRESHOLD,
) -> MembershipVerdict:
    traj = trajectory(seq, member, v, horizon)
    return verdict_from_trajectory(traj, target, threshold, _initial_log_norm(v))


def orthogonality_witness(
    seq: WeightSequence, x: SparseVector, y: SparseVector, N: int
) -> tuple[float, float]:
    """(|(x, y)|, ||U^N x|| * ||U^{*-N} y||); the first never exceeds the second."""
    lhs = abs(inner(x, y))
    if not x or not y:
        return lhs, 0.0
    log_rhs = log_norm_power(seq, FamilyMember.SHIFT, N, x) + log_norm_power(
        seq, FamilyMember.ADJOINT_INVERSE, N, y
    )
    with np.errstate(over="ignore"):
        rhs = float(np.exp(log_rhs))
    return lhs, rhs
