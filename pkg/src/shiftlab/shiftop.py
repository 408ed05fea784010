"""The bilateral weighted shift U b_n = (u_{n+1}/u_n) b_{n+1} and its relatives.

Powers act exactly on sparse vectors:

    U^N      : b_n -> (u_{n+N}/u_n) b_{n+N}
    U^{*-N}  : b_n -> (u_n/u_{n+N}) b_{n+N}

U^{-N} is U at power -N and U^{*N} is U^{*-1} at power -N. Because the images
of distinct basis vectors stay orthogonal, norms reduce to a log-sum-exp over
the support and never need the raw coefficients.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import weights as W
from .errors import IndexNotInSupport, WeightOverflowInCoefficient, ZeroVector
from .fockspace import SparseVector, logsumexp

_LOG_MAX = math.log(np.finfo(np.float64).max)
_LOG_TINY = math.log(np.finfo(np.float64).tiny)


class FamilyMember(enum.Enum):
    SHIFT = "shift"
    INVERSE = "inverse"
    ADJOINT = "adjoint"
    ADJOINT_INVERSE = "adjinv"

    def inverse(self) -> "FamilyMember":
        return _INVERSE[self]

    def adjoint(self) -> "FamilyMember":
        return _ADJOINT[self]

    def adjoint_inverse(self) -> "FamilyMember":
        return self.adjoint().inverse()

    def resolve(self, N: int) -> tuple[int, int]:
        """Return (sign, power): the action is b_n -> exp(sign*log_ratio(n, power)) b_{n+power}."""
        if self is FamilyMember.SHIFT:
            return 1, N
        if self is FamilyMember.INVERSE:
            return 1, -N
        if self is FamilyMember.ADJOINT_INVERSE:
            return -1, N
        return -1, -N

    @classmethod
    def parse(cls, text: str) -> "FamilyMember":
        aliases = {"u": "shift", "adjoint-inverse": "adjinv", "adjoint_inverse": "adjinv"}
        return cls(aliases.get(text.lower(), text.lower()))


_INVERSE = {
    FamilyMember.SHIFT: FamilyMember.INVERSE,
    FamilyMember.INVERSE: FamilyMember.SHIFT,
    FamilyMember.ADJOINT: FamilyMember.ADJOINT_INVERSE,
    FamilyMember.ADJOINT_INVERSE: FamilyMember.ADJOINT,
}
_ADJOINT = {
    FamilyMember.SHIFT: FamilyMember.ADJOINT,
    FamilyMember.ADJOINT: FamilyMember.SHIFT,
    FamilyMember.INVERSE: FamilyMember.ADJOINT_INVERSE,
    FamilyMember.ADJOINT_INVERSE: FamilyMember.INVERSE,
}


def signed_log_ratio(seq: W.WeightSequence, member: FamilyMember, N: int, n):
    """ln of the scalar by which T^N multiplies b_n (before moving it)."""
    sign, power = member.resolve(N)
    return sign * W.log_ratio(seq, n, power)


def _evolved_log_terms(seq, member, N, v: SparseVector):
    sign, power = member.resolve(N)
    lr = sign * W.log_ratio(seq, v.indices, power)
    return v.indices + power, lr


def apply_power(
    seq: W.WeightSequence, member: FamilyMember, N: int, v: SparseVector
) -> SparseVector:
    """Exact T^N v for T one of U, U^{-1}, U^*, U^{*-1}.

    Raises WeightOverflowInCoefficient when an output coefficient would
    overflow or drop below the normal double range.
    """
    if N == 0 or not v:
        return v
    target, lr = _evolved_log_terms(seq, member, N, v)
    logmag = np.log(np.abs(v.values)) + lr
    if np.any(logmag > _LOG_MAX) or np.any(logmag < _LOG_TINY):
        k = int(np.argmax(np.abs(logmag)))
        raise WeightOverflowInCoefficient(
            f"coefficient at index {int(target[k])} has log-magnitude {logmag[k]:.6g}"
        )
    with np.errstate(over="ignore", under="ignore"):
        factor = np.exp(lr)
        direct = v.values * factor
    # fall back to exp(log|x| + lr) when the factor alone leaves the double range
    bad = ~np.isfinite(factor) | (factor == 0.0)
    if np.any(bad):
        direct = np.where(bad, np.sign(v.values) * np.exp(logmag), direct)
    return SparseVector.from_arrays(target, direct)


def log_norm_power(seq: W.WeightSequence, member: FamilyMember, N: int, v: SparseVector) -> float:
    """ln ||T^N v||, via log-sum-exp of ln|v_n|^2 + 2 ln|scale_n|."""
    if not v:
        raise ZeroVector("log-norm of the zero vector is -inf")
    if N == 0:
        return v.log_norm()
    _, lr = _evolved_log_terms(seq, member, N, v)
    return 0.5 * logsumexp(2.0 * (np.log(np.abs(v.values)) + lr))


def coefficient_lower_bound(
    seq: W.WeightSequence, member: FamilyMember, N: int, v: SparseVector, n: int
) -> float:
    """ln|(b_n, v)| + ln|scale_n|, a lower bound on ln ||T^N v||."""
    x = v[n]
    if x == 0.0:
        raise IndexNotInSupport(n)
    return math.log(abs(x)) + float(signed_log_ratio(seq, member, N, n))


@dataclass(frozen=True)
class OperatorNormBound:
    """sup of the signed log-ratio over a window, with where it was attained.

    ``exact`` is True only when the window policy guarantees the sup over Z
    is attained inside the window; otherwise ``log_norm`` is a lower bound.
    """

    log_norm: float
    argmax: int
    window: tuple[int, int]
    exact: bool


def default_window(seq: W.WeightSequence, member: FamilyMember, N: int) -> tuple[tuple[int, int], bool]:
    """Per-family window on which the operator-norm sup is searched.

    geometric and hybrid: every member attains its sup at some |n| <= |N|,
    so [-2|N|, 2|N|] is exact. krein: [-4|N|, 4|N|], lower bound only.
    tabulated: the whole table (restricted to evaluable n), not certified.
    """
    a = abs(N)
    if seq.family in (W.GEOMETRIC, W.HYBRID):
        return (-2 * a, 2 * a), True
    if seq.family == W.KREIN:
        return (-4 * a, 4 * a), False
    lo, hi = seq.index_range
    return (lo, hi), False


def operator_norm_bound(
    seq: W.WeightSequence,
    member: FamilyMember,
    N: int,
    window: tuple[int, int] | None = None,
) -> OperatorNormBound:
    if window is None:
        window, exact = default_window(seq, member, N)
    else:
        exact = False
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    n = np.arange(lo, hi + 1, dtype=np.int64)
    if seq.family == W.TABULATED:
        tlo, thi = seq.index_range
        _, power = member.resolve(N)
        n = n[(n >= tlo) & (n <= thi) & (n + power >= tlo) & (n + power <= thi)]
        if n.size == 0:
            raise ValueError("window has no index evaluable in the table")
    vals = np.asarray(signed_log_ratio(seq, member, N, n), dtype=np.float64)
    k = int(np.argmax(vals))  # first occurrence: smallest n wins ties
    return OperatorNormBound(float(vals[k]), int(n[k]), (int(lo), int(hi)), exact)


def operator_log_norm(
    seq: W.WeightSequence,
    member: FamilyMember,
    N: int,
    window: tuple[int, int] | None = None,
) -> float:
    """ln ||T^N|| restricted to ``window`` (a lower bound of the sup over Z)."""
    return operator_norm_bound(seq, member, N, window).log_norm
