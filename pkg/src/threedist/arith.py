"""Exact rational vectors, torus reduction and torus distances.

Distances are kept exact. For the Euclidean norm the *squared* distance is
stored, so every comparison stays inside the rationals.

Besides the Fraction-based API there is :class:`Orbit`, an integer kernel
for the hot loops: all points ``k*alpha mod Z^d`` share the common
denominator ``L = lcm(denominators)``, so a point is a vector of integer
residues in ``[0, L)`` and a distance is an integer key over a fixed scale
(``L`` for L1/Linf, ``L**2`` for L2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Sequence

import numpy as np

_INT64_SAFE = 2**62


class Norm(enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, text: "str | Norm") -> "Norm":
        if isinstance(text, Norm):
            return text
        key = text.strip().lower().replace("∞", "inf").replace("^", "")
        aliases = {"l1": cls.L1, "l2": cls.L2, "linf": cls.LINF, "inf": cls.LINF, "sup": cls.LINF}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown norm {text!r}; expected one of l1, l2, linf") from None

    def __str__(self) -> str:
        return self.value


class DimensionMismatch(ValueError):
    pass


class NormMismatch(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer literal. Floats are rejected."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        num, _, den = s.partition("/")
        p, q = int(num), int(den)
        if q == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(p, q)
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalVector:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not coords:
            raise ValueError("a rational vector needs at least one coordinate")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def parse(cls, text: str) -> "RationalVector":
        s = text.strip().strip("()")
        return cls(tuple(parse_rational(part) for part in s.split(",")))

    @classmethod
    def of(cls, *values) -> "RationalVector":
        return cls(tuple(Fraction(v) for v in values))

    @property
    def d(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __add__(self, other: "RationalVector") -> "RationalVector":
        _check_dims(self, other)
        return RationalVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RationalVector") -> "RationalVector":
        _check_dims(self, other)
        return RationalVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, k: int) -> "RationalVector":
        return RationalVector(tuple(k * c for c in self.coords))

    def denominator_lcm(self) -> int:
        return reduce(math.lcm, (c.denominator for c in self.coords), 1)

    def __str__(self) -> str:
        return ",".join(format_rational(c) for c in self.coords)


@dataclass(frozen=True)
class TorusPoint(RationalVector):
    def __post_init__(self):
        super().__post_init__()
        for c in self.coords:
            if not 0 <= c < 1:
                raise ValueError(f"torus coordinate {c} outside [0, 1)")


@dataclass(frozen=True)
class DistanceValue:
    """Exact torus distance; ``value`` is squared for :attr:`Norm.L2`."""

    norm: Norm
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise ValueError("distance must be nonnegative")

    def _other(self, other: "DistanceValue") -> Fraction:
        if not isinstance(other, DistanceValue):
            return NotImplemented
        if other.norm is not self.norm:
            raise NormMismatch(f"cannot compare {self.norm} distance with {other.norm} distance")
        return other.value

    def __lt__(self, other):
        return self.value < self._other(other)

    def __le__(self, other):
        return self.value <= self._other(other)

    def __gt__(self, other):
        return self.value > self._other(other)

    def __ge__(self, other):
        return self.value >= self._other(other)

    def __str__(self) -> str:
        return format_rational(self.value)


def _check_dims(x: RationalVector, y: RationalVector) -> None:
    if x.d != y.d:
        raise DimensionMismatch(f"dimension mismatch: {x.d} vs {y.d}")


def torus_reduce(v: RationalVector) -> TorusPoint:
    return TorusPoint(tuple(c - math.floor(c) for c in v.coords))


def _norm_of(diffs: Iterable[Fraction], norm: Norm) -> Fraction:
    diffs = [abs(t) for t in diffs]
    if norm is Norm.LINF:
        return max(diffs)
    if norm is Norm.L1:
        return sum(diffs, Fraction(0))
    return sum((t * t for t in diffs), Fraction(0))


def torus_dist(x: RationalVector, y: RationalVector, norm: Norm) -> DistanceValue:
    """min over integer translates of |x - y - t| (squared for L2).

    Every coordinate of x - y is first reduced to [0, 1); the nearest
    integer is then 0 or 1, and the norms allowed here are monotone in each
    coordinate, so per-coordinate rounding is the global minimiser.
    """
    _check_dims(x, y)
    norm = Norm.parse(norm)
    diffs = []
    for a, b in zip(x.coords, y.coords):
        c = a - b
        c -= math.floor(c)
        diffs.append(min(c, 1 - c))
    return DistanceValue(norm, _norm_of(diffs, norm))


def torus_dist_exhaustive(x: RationalVector, y: RationalVector, norm: Norm, radius: int = 2) -> DistanceValue:
    """Reference minimisation over all offsets in {-radius..radius}^d.

    Inputs are reduced to the torus first, so radius 2 covers every
    candidate offset.
    """
    _check_dims(x, y)
    norm = Norm.parse(norm)
    x, y = torus_reduce(x), torus_reduce(y)
    diff = [a - b for a, b in zip(x.coords, y.coords)]
    best = None
    for offset in product(range(-radius, radius + 1), repeat=len(diff)):
        val = _norm_of((c - t for c, t in zip(diff, offset)), norm)
        if best is None or val < best:
            best = val
    return DistanceValue(norm, best)


def compare_distance(a: DistanceValue, b: DistanceValue) -> int:
    """Return -1, 0 or 1. Raises :class:`NormMismatch` across norms."""
    if a.norm is not b.norm:
        raise NormMismatch(f"cannot compare {a.norm} distance with {b.norm} distance")
    return (a.value > b.value) - (a.value < b.value)


class Orbit:
    """Integer model of the Kronecker orbit ``k * alpha mod Z^d``.

    Keys returned by the kernel methods are integers over :attr:`scale`;
    keys of one orbit are directly comparable. Arrays are int64 when the
    values provably fit, otherwise numpy object arrays of Python ints.
    """

    def __init__(self, alpha: RationalVector, norm: "Norm | str"):
        self.alpha = alpha
        self.norm = Norm.parse(norm)
        self.d = alpha.d
        self.period = alpha.denominator_lcm()
        self.steps = tuple(int(c * self.period) % self.period for c in alpha.coords)
        L = self.period
        self.scale = L * L if self.norm is Norm.L2 else L
        self._res_dtype = np.int64 if L < _INT64_SAFE // (1 << 17) else object
        half = L // 2 + 1
        if self.norm is Norm.L2:
            max_key = self.d * half * half
        elif self.norm is Norm.L1:
            max_key = self.d * half
        else:
            max_key = half
        self._key_dtype = np.int64 if (self._res_dtype is np.int64 and max_key < _INT64_SAFE) else object

    def check_horizon(self, horizon: int) -> None:
        """Horizon guard: scans must stay strictly below the orbit period."""
        if horizon >= self.period:
            raise HorizonError(
                f"horizon {horizon} reaches the orbit period {self.period} of alpha={self.alpha}"
            )

    def residues(self, start: int, count: int) -> np.ndarray:
        """Residue vectors of points start..start+count-1, shape (count, d)."""
        L = self.period
        ks = np.arange(count, dtype=np.int64)
        if self._res_dtype is object:
            ks = ks.astype(object)
        cols = []
        for a in self.steps:
            base = (start * a) % L
            if self._res_dtype is object:
                col = (ks * a + base) % L
            else:
                # count <= 2**17 and a < L keep ks * a inside int64
                col = (ks * np.int64(a) + np.int64(base)) % np.int64(L)
            cols.append(col)
        return np.stack(cols, axis=1)

    def keys_from_diffs(self, diffs: np.ndarray) -> np.ndarray:
        """Distance keys for residue differences of shape (..., d)."""
        L = self.period
        c = diffs % L
        t = np.minimum(c, L - c)
        if self._key_dtype is object and t.dtype != object:
            t = t.astype(object)
        if self.norm is Norm.LINF:
            return t.max(axis=-1)
        if self.norm is Norm.L1:
            return t.sum(axis=-1)
        return (t * t).sum(axis=-1)

    def keys_from_zero(self, start: int, count: int) -> np.ndarray:
        """Keys of dist(0, q*alpha) for q = start..start+count-1."""
        return self.keys_from_diffs(self.residues(start, count))

    def key_of(self, q: int) -> int:
        return int(self.keys_from_zero(q, 1)[0])

    def value(self, key: int) -> DistanceValue:
        return DistanceValue(self.norm, Fraction(int(key), self.scale))

    def key(self, dist: DistanceValue) -> int:
        """Inverse of :meth:`value`; the value must be exactly representable."""
        if dist.norm is not self.norm:
            raise NormMismatch(f"{dist.norm} distance on a {self.norm} orbit")
        scaled = dist.value * self.scale
        if scaled.denominator != 1:
            raise ValueError(f"{dist.value} is not a distance of this orbit")
        return scaled.numerator


class HorizonError(ValueError):
    pass


def as_vector(alpha: "RationalVector | Sequence | str | Fraction | int") -> RationalVector:
    if isinstance(alpha, RationalVector):
        return alpha
    if isinstance(alpha, str):
        return RationalVector.parse(alpha)
    if isinstance(alpha, (Fraction, int)):
        return RationalVector((Fraction(alpha),))
    return RationalVector(tuple(Fraction(c) for c in alpha))
