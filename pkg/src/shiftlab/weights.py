"""Bilateral positive weight sequences, evaluated in the log domain.

Every weight is handled through its natural logarithm. Raw weights such as
3**8191 overflow a double long before the horizons of interest, so nothing
in this module ever exponentiates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import IndexOutOfTable

KREIN = "krein"
GEOMETRIC = "geometric"
HYBRID = "hybrid"
TABULATED = "tabulated"

FAMILIES = (KREIN, GEOMETRIC, HYBRID, TABULATED)

#: Bound on |d/dx (|x| sin((pi/2) log2(1+|x|)))|, used for the one-step ratio.
KREIN_SLOPE_BOUND = 1.0 + math.pi / (2.0 * math.log(2.0))


@dataclass(frozen=True)
class WeightSequence:
    """A bilateral weight family u: Z -> (0, inf).

    Use the constructors :func:`krein_oscillatory`, :func:`geometric_valley`,
    :func:`hybrid_decay_harmonic` and :func:`tabulated` rather than building
    instances by hand; they validate parameters.
    """

    family: str
    c: float | None = None
    # Tabulated only: contiguous log-weights for indices lo .. lo+len-1.
    table_lo: int | None = None
    table: tuple[float, ...] | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}")
        if self.family == KREIN and not (self.c is not None and self.c > 0):
            raise ValueError("krein family requires c > 0")
        if self.family == GEOMETRIC and not (self.c is not None and self.c >= 1):
            raise ValueError("geometric family requires c >= 1")
        if self.family in (HYBRID, TABULATED) and self.c is not None:
            raise ValueError(f"{self.family} family takes no c parameter")
        if self.family == TABULATED:
            if self.table is None or self.table_lo is None or not self.table:
                raise ValueError("tabulated family requires a nonempty table")
            if not all(math.isfinite(x) for x in self.table):
                raise ValueError("tabulated log-weights must be finite")

    @property
    def index_range(self) -> tuple[int, int] | None:
        """Inclusive index range for tabulated sequences, None otherwise."""
        if self.family != TABULATED:
            return None
        return self.table_lo, self.table_lo + len(self.table) - 1

    def describe(self) -> dict:
        d: dict = {"family": self.family}
        if self.c is not None:
            d["c"] = self.c
        if self.family == TABULATED:
            d["index_range"] = list(self.index_range)
        return d


def krein_oscillatory(c: float) -> WeightSequence:
    """u_n = (c+2)**(|n| sin((pi/2) log2(1+|n|)))."""
    return WeightSequence(KREIN, c=float(c))


def geometric_valley(c: float = 1.0) -> WeightSequence:
    """v_n = (2c)**(-|n|)."""
    return WeightSequence(GEOMETRIC, c=float(c))


def hybrid_decay_harmonic() -> WeightSequence:
    """w_n = 2**n for n <= 0 and 1/(n+1) for n > 0."""
    return WeightSequence(HYBRID)


def tabulated(log_weights: Mapping[int, float]) -> WeightSequence:
    """Build a sequence from an index -> log-weight map over a contiguous range."""
    if not log_weights:
        raise ValueError("empty table")
    lo, hi = min(log_weights), max(log_weights)
    missing = [n for n in range(lo, hi + 1) if n not in log_weights]
    if missing:
        raise ValueError(f"table has gaps, first missing index {missing[0]}")
    return WeightSequence(
        TABULATED, table_lo=int(lo), table=tuple(float(log_weights[n]) for n in range(lo, hi + 1))
    )


def load_table(path: str | Path) -> WeightSequence:
    """Read a two-column ``index log-weight`` text file; ``#`` starts a comment."""
    entries: dict[int, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'index log-weight'")
        n = int(parts[0])
        if n in entries:
            raise ValueError(f"{path}:{lineno}: duplicate index {n}")
        entries[n] = float(parts[1])
    return tabulated(entries)


def log_weight(seq: WeightSequence, n):
    """Return ln u_n for an integer or an integer array ``n``.

    Scalars in, float out; arrays in, float array out.
    """
    scalar = np.ndim(n) == 0
    idx = np.asarray(n, dtype=np.int64)
    if seq.family == KREIN:
        a = np.abs(idx).astype(np.float64)
        # log2 is exact at powers of two, which is where the peaks sit.
        out = a * np.sin((np.pi / 2.0) * np.log2(1.0 + a)) * math.log(seq.c + 2.0)
    elif seq.family == GEOMETRIC:
        out = -np.abs(idx).astype(np.float64) * math.log(2.0 * seq.c)
    elif seq.family == HYBRID:
        out = np.where(
            idx <= 0,
            idx.astype(np.float64) * math.log(2.0),
            -np.log1p(np.maximum(idx, 0).astype(np.float64)),
        )
    else:
        lo, hi = seq.index_range
        if np.any(idx < lo) or np.any(idx > hi):
            bad = idx[(idx < lo) | (idx > hi)].ravel()[0]
            raise IndexOutOfTable(f"index {int(bad)} outside table range [{lo}, {hi}]")
        out = np.asarray(seq.table, dtype=np.float64)[idx - lo]
    return float(out) if scalar else out


def log_ratio(seq: WeightSequence, n, N: int):
    """Return ln u_{n+N} - ln u_n."""
    if N == 0:
        log_weight(seq, n)  # range check only
        return 0.0 if np.ndim(n) == 0 else np.zeros(np.shape(n))
    n = np.asarray(n, dtype=np.int64) if np.ndim(n) else int(n)
    return log_weight(seq, n + N) - log_weight(seq, n)


def one_step_ratio_bound(seq: WeightSequence, window: tuple[int, int]) -> float:
    """sup over n in the inclusive ``window`` of |ln(u_{n+1}/u_n)|.

    A finite value independent of the window certifies that the shift and its
    inverse are bounded.
    """
    lo, hi = window
    if hi < lo:
        raise ValueError("empty window")
    n = np.arange(lo, hi + 1, dtype=np.int64)
    return float(np.max(np.abs(log_ratio(seq, n, 1))))


def krein_peak_indices(k: int) -> tuple[int, int]:
    """Indices (2**(1+4k) - 1, 2**(3+4k) - 1) where the krein weight is extremal.

    At the first the weight is (c+2)**n, at the second (c+2)**(-m).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2 ** (1 + 4 * k) - 1, 2 ** (3 + 4 * k) - 1
