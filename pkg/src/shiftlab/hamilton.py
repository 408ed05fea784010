"""The lift T -> T (+) T^{*-1} on H0 (+) H0 and the two forms it preserves.

J swaps the components, x(+)y -> y(+)x. The symplectic operator is taken as
x(+)y -> y(+)(-x). With these, for any invertible T the lifted operator keeps

    Jform(a, b)          = (x, y') + (y, x')
    SymplecticForm(a, b) = (x, y') - (y, x')

unchanged, where a = x(+)y and b = x'(+)y'.
"""
from __future__ import annotations

import enum
import math
from typing import Iterable

import numpy as np

from .fockspace import HatVector, inner
from .shiftop import FamilyMember, apply_power, log_norm_power
from .errors import ZeroVector
from .weights import WeightSequence


class GramForm(enum.Enum):
    JFORM = "j"
    SYMPLECTIC = "symplectic"


def j_map(h: HatVector) -> HatVector:
    return HatVector(h.bottom, h.top)


def symplectic_map(h: HatVector) -> HatVector:
    return HatVector(h.bottom, -h.top)


def gram(form: GramForm, a: HatVector, b: HatVector) -> float:
    """<a, K b> for K = J or the symplectic operator."""
    if form is GramForm.JFORM:
        return inner(a.top, b.bottom) + inner(a.bottom, b.top)
    return inner(a.top, b.bottom) - inner(a.bottom, b.top)


def hat_apply(
    seq: WeightSequence, N: int, h: HatVector, member: FamilyMember = FamilyMember.SHIFT
) -> HatVector:
    """Apply the N-th power of the lift of ``member``.

    For the default (U) the top evolves under U^N and the bottom under
    U^{*-N}; other members lift the same way, e.g. the inverse lift is
    U^{-1} (+) U^*.
    """
    return HatVector(
        apply_power(seq, member, N, h.top),
        apply_power(seq, member.adjoint_inverse(), N, h.bottom),
    )


def hat_log_norm_power(
    seq: WeightSequence, N: int, h: HatVector, member: FamilyMember = FamilyMember.SHIFT
) -> float:
    """ln of the norm of the lifted power applied to ``h``."""
    if not h:
        raise ZeroVector("log-norm of the zero hat vector is -inf")
    top = log_norm_power(seq, member, N, h.top) if h.top else -math.inf
    bottom = (
        log_norm_power(seq, member.adjoint_inverse(), N, h.bottom) if h.bottom else -math.inf
    )
    return 0.5 * float(np.logaddexp(2.0 * top, 2.0 * bottom))


def check_form_invariance(
    seq: WeightSequence,
    N: int,
    samples: Iterable[tuple[HatVector, HatVector]],
    *,
    relative: bool = False,
) -> float:
    """Largest |form(lift^N a, lift^N b) - form(a, b)| over samples and both forms.

    With ``relative=True`` each deviation is divided by ||a||*||b||, the
    Cauchy-Schwarz scale of both forms.
    """
    worst = 0.0
    for a, b in samples:
        ea, eb = hat_apply(seq, N, a), hat_apply(seq, N, b)
        scale = a.norm() * b.norm() if relative else 1.0
        if scale == 0.0:
            continue
        for form in GramForm:
            dev = abs(gram(form, ea, eb) - gram(form, a, b)) / scale
            worst = max(worst, dev)
    return worst
