"""Finitely supported vectors over the integer-indexed orthonormal basis b_n."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def logsumexp(x: np.ndarray) -> float:
    """ln(sum(exp(x))) without overflow; -inf for an empty input."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        return -math.inf
    m = float(np.max(x))
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(x - m))))


class SparseVector:
    """Immutable element of H0 with finite support.

    Stored as sorted index and coefficient arrays; zero coefficients are
    never stored, so the zero vector has empty support.
    """

    __slots__ = ("_idx", "_val")

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[int, float] = {}
        for n, x in entries:
            acc[int(n)] = acc.get(int(n), 0.0) + float(x)
        idx = np.fromiter(sorted(acc), dtype=np.int64, count=len(acc))
        val = np.array([acc[n] for n in idx.tolist()], dtype=np.float64)
        self._set(idx, val)

    def _set(self, idx: np.ndarray, val: np.ndarray) -> None:
        keep = val != 0.0
        self._idx = _freeze(np.ascontiguousarray(idx[keep], dtype=np.int64))
        self._val = _freeze(np.ascontiguousarray(val[keep], dtype=np.float64))

    @classmethod
    def from_arrays(cls, indices, values) -> "SparseVector":
        """Build from parallel arrays. Indices must be unique; order is free."""
        idx = np.asarray(indices, dtype=np.int64)
        val = np.asarray(values, dtype=np.float64)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-D arrays of equal length")
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        if idx.size > 1 and np.any(np.diff(idx) == 0):
            raise ValueError("duplicate indices")
        out = cls.__new__(cls)
        out._set(idx, val)
        return out

    @classmethod
    def basis(cls, n: int, coefficient: float = 1.0) -> "SparseVector":
        return cls.from_arrays([n], [coefficient])

    @classmethod
    def zero(cls) -> "SparseVector":
        return cls.from_arrays([], [])

    @classmethod
    def parse(cls, text: str) -> "SparseVector":
        """Parse a literal like ``"0:1, 3:-2.5"``; the empty string is zero."""
        pairs = []
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            n, sep, x = item.partition(":")
            if not sep:
                raise ValueError(f"bad vector entry {item!r}, expected index:coefficient")
            pairs.append((int(n), float(x)))
        return cls(pairs)

    def format(self) -> str:
        return ",".join(f"{n}:{x!r}" for n, x in self.items())

    @property
    def indices(self) -> np.ndarray:
        return self._idx

    @property
    def values(self) -> np.ndarray:
        return self._val

    def support(self) -> tuple[int, ...]:
        return tuple(self._idx.tolist())

    def items(self) -> Iterator[tuple[int, float]]:
        return zip(self._idx.tolist(), self._val.tolist())

    def __getitem__(self, n: int) -> float:
        k = np.searchsorted(self._idx, n)
        if k < self._idx.size and self._idx[k] == n:
            return float(self._val[k])
        return 0.0

    def __len__(self) -> int:
        return int(self._idx.size)

    def __bool__(self) -> bool:
        return self._idx.size > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return np.array_equal(self._idx, other._idx) and np.array_equal(self._val, other._val)

    def __hash__(self) -> int:
        return hash((self._idx.tobytes(), self._val.tobytes()))

    def __repr__(self) -> str:
        return f"SparseVector({{{', '.join(f'{n}: {x!r}' for n, x in self.items())}}})"

    def __add__(self, other: "SparseVector") -> "SparseVector":
        if not isinstance(other, SparseVector):
            return NotImplemented
        idx = np.concatenate([self._idx, other._idx])
        val = np.concatenate([self._val, other._val])
        uniq, inv = np.unique(idx, return_inverse=True)
        out = np.zeros(uniq.size)
        np.add.at(out, inv, val)
        return SparseVector.from_arrays(uniq, out)

    def __neg__(self) -> "SparseVector":
        return SparseVector.from_arrays(self._idx, -self._val)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self + (-other)

    def __mul__(self, s: float) -> "SparseVector":
        return SparseVector.from_arrays(self._idx, float(s) * self._val)

    __rmul__ = __mul__

    def log_norm(self) -> float:
        """ln of the Euclidean norm; -inf for the zero vector."""
        if not self:
            return -math.inf
        return 0.5 * logsumexp(2.0 * np.log(np.abs(self._val)))

    def norm(self) -> float:
        if not self:
            return 0.0
        m = float(np.max(np.abs(self._val)))
        return m * math.sqrt(float(np.sum((self._val / m) ** 2)))

    def allclose(self, other: "SparseVector", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        """Same support and coefficients equal to the given tolerances."""
        return np.array_equal(self._idx, other._idx) and bool(
            np.allclose(self._val, other._val, rtol=rtol, atol=atol)
        )


def inner(a: SparseVector, b: SparseVector) -> float:
    """Real scalar product: sum over the common support of a_n * b_n."""
    _, ia, ib = np.intersect1d(a.indices, b.indices, assume_unique=True, return_indices=True)
    if ia.size == 0:
        return 0.0
    return float(np.dot(a.values[ia], b.values[ib]))


def norm(v: SparseVector) -> float:
    return v.norm()


def harmonic_test_vector(M: int) -> SparseVector:
    """Truncation of sum_{n != 0} b_n / |n| to 0 < |n| <= M."""
    if M < 1:
        raise ValueError("M must be >= 1")
    pos = np.arange(1, M + 1, dtype=np.int64)
    idx = np.concatenate([-pos[::-1], pos])
    return SparseVector.from_arrays(idx, 1.0 / np.abs(idx).astype(np.float64))


@dataclass(frozen=True)
class HatVector:
    """Element x (+) y of the doubled space H0 (+) H0."""

    top: SparseVector
    bottom: SparseVector

    @classmethod
    def parse(cls, top: str, bottom: str = "") -> "HatVector":
        return cls(SparseVector.parse(top), SparseVector.parse(bottom))

    def __add__(self, other: "HatVector") -> "HatVector":
        return HatVector(self.top + other.top, self.bottom + other.bottom)

    def __sub__(self, other: "HatVector") -> "HatVector":
        return HatVector(self.top - other.top, self.bottom - other.bottom)

    def __neg__(self) -> "HatVector":
        return HatVector(-self.top, -self.bottom)

    def __mul__(self, s: float) -> "HatVector":
        return HatVector(self.top * s, self.bottom * s)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.top) or bool(self.bottom)

    def norm(self) -> float:
        return math.hypot(self.top.norm(), self.bottom.norm())

    def log_norm(self) -> float:
        return 0.5 * float(np.logaddexp(2.0 * self.top.log_norm(), 2.0 * self.bottom.log_norm()))

    def allclose(self, other: "HatVector", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return self.top.allclose(other.top, rtol, atol) and self.bottom.allclose(
            other.bottom, rtol, atol
        )


def random_sparse_vector(
    rng: np.random.Generator, support: tuple[int, int] = (-32, 32), max_terms: int = 6
) -> SparseVector:
    """Nonzero vector with 1..max_terms standard-normal coefficients in ``support``."""
    lo, hi = support
    k = int(rng.integers(1, min(max_terms, hi - lo + 1) + 1))
    idx = rng.choice(np.arange(lo, hi + 1), size=k, replace=False)
    val = rng.standard_normal(k)
    return SparseVector.from_arrays(idx, val)


def random_hat_vector(
    rng: np.random.Generator, support: tuple[int, int] = (-32, 32), max_terms: int = 6
) -> HatVector:
    return HatVector(
        random_sparse_vector(rng, support, max_terms), random_sparse_vector(rng, support, max_terms)
    )
