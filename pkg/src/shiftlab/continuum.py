"""Continuous-time transport with a weight: (V(t) f)(x) = v(x)/v(x-t) f(x-t).

Profiles are samples on a uniform grid. Propagation evaluates the formula
pointwise, interpolating f linearly at x - t; when t is a whole number of
grid steps the interpolation is skipped and the result is exact. Points
whose source x - t falls outside the grid come back as NaN and are flagged
in ``Profile.valid``.

The generator is Hf = -f' + (v'/v) f. All three weight functions have a
kink at x = 0, where it is undefined.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import UndefinedAtKink

OSCILLATORY_EXP = "a"
SYMMETRIC_DECAY = "b"
HYBRID_CONTINUUM = "c"

# |t/step - round(t/step)| below this counts as a grid-aligned shift
_ALIGN_TOL = 1e-9


@dataclass(frozen=True)
class WeightFunction:
    case: str
    log_v: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    dlog_v: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    kink: float | None = 0.0

    def log(self, x):
        return self.log_v(np.asarray(x, dtype=np.float64))

    def dlog(self, x):
        """d/dx ln v(x); raises UndefinedAtKink if any x sits on the kink."""
        x = np.asarray(x, dtype=np.float64)
        if self.kink is not None and np.any(x == self.kink):
            raise UndefinedAtKink(f"ln v is not differentiable at x = {self.kink}")
        return self.dlog_v(x)


def oscillatory_exp() -> WeightFunction:
    """v(x) = exp(|x| sin(ln(1+|x|)))."""

    def log_v(x):
        a = np.abs(x)
        return a * np.sin(np.log1p(a))

    def dlog_v(x):
        a = np.abs(x)
        L = np.log1p(a)
        return (np.sin(L) + a / (1.0 + a) * np.cos(L)) * np.sign(x)

    return WeightFunction(OSCILLATORY_EXP, log_v, dlog_v)


def symmetric_decay() -> WeightFunction:
    """v(x) = exp(-|x|)."""
    return WeightFunction(SYMMETRIC_DECAY, lambda x: -np.abs(x), lambda x: -np.sign(x))


def hybrid_continuum() -> WeightFunction:
    """v(x) = e^x for x < 0 and 1/(x+1) for x > 0."""

    def log_v(x):
        return np.where(x < 0, x, -np.log1p(np.maximum(x, 0.0)))

    def dlog_v(x):
        return np.where(x < 0, 1.0, -1.0 / (np.maximum(x, 0.0) + 1.0))

    return WeightFunction(HYBRID_CONTINUUM, log_v, dlog_v)


def flat() -> WeightFunction:
    """v = 1: free transport, no kink."""
    return WeightFunction(
        "flat", lambda x: np.zeros_like(x), lambda x: np.zeros_like(x), kink=None
    )


CASES = {
    OSCILLATORY_EXP: oscillatory_exp,
    SYMMETRIC_DECAY: symmetric_decay,
    HYBRID_CONTINUUM: hybrid_continuum,
    "flat": flat,
}


def weight_function(case: str) -> WeightFunction:
    try:
        return CASES[case]()
    except KeyError:
        raise ValueError(f"unknown case {case!r}; expected one of {sorted(CASES)}") from None


@dataclass(frozen=True)
class Profile:
    x0: float
    step: float
    values: np.ndarray
    valid: np.ndarray | None = None

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        mask = np.isfinite(vals) if self.valid is None else np.asarray(self.valid, dtype=bool)
        object.__setattr__(self, "valid", mask & np.isfinite(vals))

    @classmethod
    def sample(cls, f: Callable[[np.ndarray], np.ndarray], x0: float, step: float, count: int):
        x = x0 + step * np.arange(count)
        return cls(x0, step, f(x))

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.step * np.arange(self.values.size)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        if header:
            buf.write("x,value\n")
        for xi, fi in zip(self.x.tolist(), self.values.tolist()):
            buf.write(f"{xi!r},{fi!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Profile":
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line or line.startswith("x"):
                continue
            xs, vs = line.split(",")
            rows.append((float(xs), float(vs)))
        if len(rows) < 2:
            raise ValueError("profile needs at least two rows")
        x = np.array([r[0] for r in rows])
        steps = np.diff(x)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            raise ValueError("profile grid must be uniform and increasing")
        return cls(float(x[0]), float(steps[0]), np.array([r[1] for r in rows]))


def _source_values(p: Profile, t: float) -> tuple[np.ndarray, np.ndarray]:
    """f(x - t) at each grid point, and the source coordinate x - t."""
    n = p.values.size
    s = t / p.step
    k = round(s)
    vals = np.where(p.valid, p.values, np.nan)
    out = np.full(n, np.nan)
    if abs(s - k) < _ALIGN_TOL:
        i = np.arange(n) - k
        ok = (i >= 0) & (i < n)
        out[ok] = vals[i[ok]]
        src = p.x0 + p.step * i.astype(np.float64)
        return out, src
    pos = np.arange(n) - s
    src = p.x0 + p.step * pos
    lo = np.floor(pos).astype(np.int64)
    ok = (lo >= 0) & (lo + 1 < n)
    frac = pos[ok] - lo[ok]
    out[ok] = (1.0 - frac) * vals[lo[ok]] + frac * vals[lo[ok] + 1]
    return out, src


def propagate(w: WeightFunction, t: float, p: Profile) -> Profile:
    """V(t) applied to ``p``; out-of-grid sources give NaN with valid=False."""
    if t == 0:
        return p
    f_src, src = _source_values(p, t)
    scale = np.exp(w.log(p.x) - w.log(src))
    out = scale * f_src
    return Profile(p.x0, p.step, out, np.isfinite(out))


def _kink_mask(w: WeightFunction, x: np.ndarray, radius: float) -> np.ndarray:
    if w.kink is None:
        return np.zeros(x.shape, dtype=bool)
    return np.abs(x - w.kink) <= radius


def generator_apply(w: WeightFunction, p: Profile, kink_radius: float | None = None) -> Profile:
    """-(central difference of f) + (d ln v/dx) f.

    Grid ends and points within ``kink_radius`` (default: one step) of the
    kink are returned as invalid.
    """
    r = p.step if kink_radius is None else kink_radius
    x = p.x
    f = np.where(p.valid, p.values, np.nan)
    df = np.full_like(f, np.nan)
    df[1:-1] = (f[2:] - f[:-2]) / (2.0 * p.step)
    near = _kink_mask(w, x, r)
    g = np.full_like(f, np.nan)
    away = ~near
    g[away] = w.dlog(x[away])
    out = -df + g * f
    return Profile(p.x0, p.step, out, np.isfinite(out))


def generator_consistency(
    w: WeightFunction, p: Profile, h: float, kink_radius: float | None = None
) -> float:
    """max |(V(h)p - p)/h - Hp| over interior points.

    Points whose transport path [x-h, x] comes within ``kink_radius`` of the
    kink are left out, since the difference quotient straddles the kink
    there. For h a multiple of the grid step the residual is O(h) + O(step^2);
    otherwise linear interpolation adds an O(step) floor.
    """
    r = p.step if kink_radius is None else kink_radius
    moved = propagate(w, h, p)
    gen = generator_apply(w, p, r)
    quotient = (moved.values - p.values) / h
    ok = moved.valid & gen.valid & p.valid
    if w.kink is not None:
        x = p.x
        lo, hi = np.minimum(x - h, x), np.maximum(x - h, x)
        ok &= ~((lo <= w.kink + r) & (hi >= w.kink - r))
    if not np.any(ok):
        raise ValueError("no grid point left for the consistency check")
    return float(np.max(np.abs(quotient[ok] - gen.values[ok])))


def group_residual(w: WeightFunction, p: Profile, t: float, tau: float) -> float:
    """max |V(t) V(-tau) p - V(t - tau) p| over points valid in both."""
    lhs = propagate(w, t, propagate(w, -tau, p))
    rhs = propagate(w, t - tau, p)
    ok = lhs.valid & rhs.valid
    if not np.any(ok):
        raise ValueError("no grid point valid after both propagations")
    return float(np.max(np.abs(lhs.values[ok] - rhs.values[ok])))


def propagation_series(w: WeightFunction, p: Profile, times) -> str:
    """CSV ``t,x,value`` for V(t)p at each requested time; invalid points skipped."""
    buf = io.StringIO()
    buf.write("t,x,value\n")
    for t in times:
        q = propagate(w, float(t), p)
        for xi, fi, ok in zip(q.x.tolist(), q.values.tolist(), q.valid.tolist()):
            if ok:
                buf.write(f"{float(t)!r},{xi!r},{fi!r}\n")
    return buf.getvalue()


def gaussian_profile(half_width: float = 10.0, step: float = 1e-2) -> Profile:
    """exp(-x^2) on [-half_width, half_width]."""
    count = int(round(2 * half_width / step)) + 1
    return Profile.sample(lambda x: np.exp(-x * x), -half_width, step, count)
